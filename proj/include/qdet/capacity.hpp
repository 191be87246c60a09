#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qdet/complex_matrix.hpp"
#include "qdet/eig.hpp"
#include "qdet/errors.hpp"
#include "qdet/group_action.hpp"
#include "qdet/info.hpp"
#include "qdet/optim.hpp"
#include "qdet/povm.hpp"

namespace qdet {

enum class CapacityMethod {
  binary_closed_form,
  commuting_ba,
  covariant_seed,
  general_alternating,
};

inline const char* to_string(CapacityMethod m) {
  switch (m) {
    case CapacityMethod::binary_closed_form: return "binary-closed-form";
    case CapacityMethod::commuting_ba: return "commuting-BA";
    case CapacityMethod::covariant_seed: return "covariant-seed";
    case CapacityMethod::general_alternating: return "general-alternating";
  }
  return "?";
}

struct CapacityDiagnostics {
  int iterations = 0;
  int restarts = 0;
  double final_improvement = 0.0;
  double ba_bracket = 0.0;
  std::string notes;
};

struct CapacityResult {
  double bits = 0.0;
  Ensemble ensemble;
  CapacityMethod method = CapacityMethod::general_alternating;
  bool certified = false;
  CapacityDiagnostics diagnostics;
};

struct CapacityOptions {
  int restarts = 32;
  std::uint64_t seed = 0;
};

namespace detail {

/// Born row of a pure state, normalized to a probability vector.
inline std::vector<double> born_row(const std::vector<Complex>& psi, const Povm& povm) {
  std::vector<double> row(povm.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < povm.size(); ++j) {
    double p = 0.0;
    for (std::size_t a = 0; a < povm.dim; ++a)
      for (std::size_t b = 0; b < povm.dim; ++b)
        p += (std::conj(psi[a]) * povm.elements[j](a, b) * psi[b]).real();
    row[j] = clamp_probability(p, "born_row");
    sum += row[j];
  }
  for (double& p : row) p /= sum;
  return row;
}

inline double joint_mutual_information(const std::vector<double>& priors,
                                       const std::vector<std::vector<double>>& rows) {
  JointDistribution joint;
  joint.rows = priors.size();
  joint.cols = rows.front().size();
  joint.p.resize(joint.rows * joint.cols);
  for (std::size_t i = 0; i < joint.rows; ++i)
    for (std::size_t j = 0; j < joint.cols; ++j) joint.at(i, j) = priors[i] * rows[i][j];
  return mutual_information(joint);
}

inline Ensemble pruned_ensemble(std::vector<HermitianOperator> states,
                                std::vector<double> priors, double cutoff = 1e-12) {
  std::vector<HermitianOperator> kept_states;
  std::vector<double> kept_priors;
  double mass = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (priors[i] <= cutoff) continue;
    kept_states.push_back(states[i]);
    kept_priors.push_back(priors[i]);
    mass += priors[i];
  }
  for (double& p : kept_priors) p /= mass;
  return validate_ensemble(std::move(kept_states), std::move(kept_priors));
}

}  // namespace detail

/// Capacity of a POVM with pairwise commuting elements. Simultaneous
/// diagonalization exposes the classical channel p(j|i) = lambda^i_j; the
/// capacity is that channel's, computed by Blahut-Arimoto, achieved by the
/// common eigenbasis states under the BA-optimal prior.
inline CapacityResult capacity_commuting(const Povm& povm) {
  for (std::size_t i = 0; i < povm.size(); ++i)
    for (std::size_t j = i + 1; j < povm.size(); ++j) {
      const double norm = commutator_norm(povm.elements[i], povm.elements[j]);
      if (norm > 1e-9)
        throw NotCommutingError(i + 1, j + 1, norm,
                                "POVM elements " + std::to_string(i + 1) + " and " +
                                    std::to_string(j + 1) + " do not commute; ||[.,.]|| = " +
                                    std::to_string(norm));
    }

  const std::size_t d = povm.dim;
  ComplexMatrix basis = ComplexMatrix::identity(d);
  std::vector<std::vector<std::size_t>> blocks{std::vector<std::size_t>(d)};
  for (std::size_t i = 0; i < d; ++i) blocks[0][i] = i;

  for (const auto& element : povm.elements) {
    std::vector<std::vector<std::size_t>> refined;
    for (const auto& block : blocks) {
      if (block.size() == 1) {
        refined.push_back(block);
        continue;
      }
      const std::size_t b = block.size();
      ComplexMatrix restricted(b);
      for (std::size_t r = 0; r < b; ++r)
        for (std::size_t c = 0; c < b; ++c) {
          Complex v{0.0, 0.0};
          for (std::size_t a1 = 0; a1 < d; ++a1)
            for (std::size_t a2 = 0; a2 < d; ++a2)
              v += std::conj(basis(a1, block[r])) * element(a1, a2) * basis(a2, block[c]);
          restricted(r, c) = v;
        }
      const EigenDecomposition eig = eig_hermitian(HermitianOperator(restricted));
      ComplexMatrix rotated(d);
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t c = 0; c < b; ++c) {
          Complex v{0.0, 0.0};
          for (std::size_t r = 0; r < b; ++r) v += basis(a, block[r]) * eig.eigenvectors(r, c);
          rotated(a, c) = v;
        }
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t c = 0; c < b; ++c) basis(a, block[c]) = rotated(a, c);
      std::size_t start = 0;
      while (start < b) {
        std::size_t stop = start + 1;
        while (stop < b && eig.eigenvalues[stop - 1] - eig.eigenvalues[stop] < 1e-8) ++stop;
        std::vector<std::size_t> sub;
        for (std::size_t r = start; r < stop; ++r) sub.push_back(block[r]);
        refined.push_back(std::move(sub));
        start = stop;
      }
    }
    blocks = std::move(refined);
  }

  std::vector<std::vector<double>> channel(d, std::vector<double>(povm.size()));
  for (const auto& element : povm.elements)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k)
        if (i != k) {
          Complex v{0.0, 0.0};
          for (std::size_t a1 = 0; a1 < d; ++a1)
            for (std::size_t a2 = 0; a2 < d; ++a2)
              v += std::conj(basis(a1, i)) * element(a1, a2) * basis(a2, k);
          if (std::abs(v) > 1e-7)
            throw NumericalError(std::abs(v),
                                 "simultaneous diagonalization left an off-diagonal residual");
        }
  for (std::size_t j = 0; j < povm.size(); ++j)
    for (std::size_t i = 0; i < d; ++i) {
      Complex v{0.0, 0.0};
      for (std::size_t a1 = 0; a1 < d; ++a1)
        for (std::size_t a2 = 0; a2 < d; ++a2)
          v += std::conj(basis(a1, i)) * povm.elements[j](a1, a2) * basis(a2, i);
      channel[i][j] = clamp_probability(v.real(), "capacity_commuting");
    }
  for (auto& row : channel) {
    double sum = 0.0;
    for (double p : row) sum += p;
    for (double& p : row) p /= sum;
  }

  const BlahutArimotoResult ba = blahut_arimoto(channel, 1e-10);
  std::vector<HermitianOperator> states;
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<Complex> v(d);
    for (std::size_t a = 0; a < d; ++a) v[a] = basis(a, i);
    states.push_back(HermitianOperator(outer_product(v, v)));
  }

  CapacityResult result;
  result.bits = ba.capacity_bits;
  result.ensemble = detail::pruned_ensemble(std::move(states), ba.prior);
  result.method = CapacityMethod::commuting_ba;
  result.certified = true;
  result.diagnostics.iterations = ba.iterations;
  result.diagnostics.ba_bracket = ba.bracket;
  return result;
}

namespace detail {

/// Eq.-style covariant objective: log2 d + (d/M) sum_j x_j log2 x_j with
/// x_j = <psi|E_j|psi>/Tr(E_j). Equal to the mutual information of the
/// covariant orbit ensemble seeded at psi.
inline double covariant_value(const Povm& povm, const std::vector<Complex>& psi) {
  const double d = static_cast<double>(povm.dim);
  const double m = static_cast<double>(povm.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < povm.size(); ++j) {
    double p = 0.0;
    for (std::size_t a = 0; a < povm.dim; ++a)
      for (std::size_t b = 0; b < povm.dim; ++b)
        p += (std::conj(psi[a]) * povm.elements[j](a, b) * psi[b]).real();
    const double x = std::max(p, 0.0) / povm.elements[j].trace();
    acc += eta(x);
  }
  return std::log2(d) - (d / m) * acc;
}

inline Ensemble orbit_ensemble(const Povm& povm, const GroupAction& action,
                               const std::vector<Complex>& seed, bool use_dual) {
  const ComplexMatrix seed_state = outer_product(seed, seed);
  std::vector<ComplexMatrix> classes;
  std::vector<double> weights;
  std::vector<int> members;
  const double w = 1.0 / static_cast<double>(action.order());
  // Orbit states are either copies of one another or separated by the group
  // geometry, so a merge tolerance well above the seed's numerical error and
  // well below unit scale identifies the copies reliably.
  constexpr double kMergeTol = 1e-5;
  for (const auto& g : action.elements) {
    const GroupElement element = use_dual ? dual_element(g) : g;
    const ComplexMatrix moved = apply_group_element(element, seed_state);
    bool merged = false;
    for (std::size_t k = 0; k < classes.size() && !merged; ++k) {
      ComplexMatrix mean = classes[k];
      mean *= Complex{1.0 / members[k], 0.0};
      if ((mean - moved).max_norm() <= kMergeTol) {
        classes[k] += moved;
        weights[k] += w;
        ++members[k];
        merged = true;
      }
    }
    if (!merged) {
      classes.push_back(moved);
      weights.push_back(w);
      members.push_back(1);
    }
  }
  // Averaging the copies cancels the seed's residual asymmetry; re-purify.
  std::vector<HermitianOperator> states;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    classes[k] *= Complex{1.0 / members[k], 0.0};
    const std::vector<Complex> v = lambda_max(HermitianOperator(classes[k])).second;
    states.push_back(HermitianOperator(outer_product(v, v)));
  }
  return validate_ensemble(std::move(states), std::move(weights));
}

}  // namespace detail

/// Capacity of a group covariant POVM under an irreducible action: maximizes
/// the covariant objective over pure seed states (coarse grid, then simplex
/// refinement from the top candidates) and reports the deduplicated orbit of
/// the best seed under the dual representation as the achieving ensemble.
inline CapacityResult capacity_covariant(const Povm& povm, const GroupAction& action) {
  verify_group_action(action, povm);
  if (!is_irreducible(action, povm.dim))
    throw NotIrreducibleError(
        "group action fixes a density operator other than I/d; covariant path needs an "
        "irreducible action");

  const std::size_t d = povm.dim;
  const std::size_t num_params = 2 * (d - 1);
  const auto objective = [&povm, d](const std::vector<double>& params) {
    return -detail::covariant_value(povm, pure_state_from_angles(params, d));
  };

  // Coarse seed grid.
  std::vector<std::pair<double, std::vector<double>>> candidates;
  if (d == 2) {
    for (int it = 0; it < 32; ++it) {
      const double theta = M_PI * (it + 0.5) / 32.0;
      for (int ip = 0; ip < 64; ++ip) {
        const double phi = 2.0 * M_PI * ip / 64.0;
        const std::vector<double> params{theta / 2.0, phi};
        candidates.emplace_back(objective(params), params);
      }
    }
  } else {
    int per_axis = 2;
    while (std::pow(per_axis + 1.0, static_cast<double>(num_params)) <= 1e5) ++per_axis;
    std::vector<int> index(num_params, 0);
    while (true) {
      std::vector<double> params(num_params);
      for (std::size_t k = 0; k < num_params; ++k) {
        const double frac = (index[k] + 0.5) / per_axis;
        params[k] = (k < d - 1) ? frac * M_PI / 2.0 : frac * 2.0 * M_PI;
      }
      candidates.emplace_back(objective(params), params);
      std::size_t k = 0;
      while (k < num_params && ++index[k] == per_axis) index[k++] = 0;
      if (k == num_params) break;
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  CapacityResult result;
  result.method = CapacityMethod::covariant_seed;
  result.certified = true;
  double best = candidates.front().first;
  std::vector<double> best_params = candidates.front().second;
  const std::size_t refine = std::min<std::size_t>(8, candidates.size());
  for (std::size_t k = 0; k < refine; ++k) {
    const NelderMeadResult local = nelder_mead_minimize(objective, candidates[k].second,
                                                        0.08, 1e-12, 4000);
    result.diagnostics.iterations += local.evaluations;
    if (local.value < best) {
      best = local.value;
      best_params = local.x;
    }
  }
  result.bits = -best;

  const std::vector<Complex> seed = pure_state_from_angles(best_params, d);
  Ensemble ensemble = detail::orbit_ensemble(povm, action, seed, /*use_dual=*/true);
  double achieved = mutual_information(born_matrix(ensemble, povm));
  if (std::abs(achieved - result.bits) > 1e-9) {
    // The dual orbit is the theorem's form; fall back to the plain orbit if
    // the group data realizes the symmetry the other way around.
    ensemble = detail::orbit_ensemble(povm, action, seed, /*use_dual=*/false);
    achieved = mutual_information(born_matrix(ensemble, povm));
    result.diagnostics.notes = "dual-orbit ensemble missed the covariant value; plain orbit used";
    if (std::abs(achieved - result.bits) > 1e-9)
      throw NumericalError(achieved - result.bits,
                           "covariant orbit ensemble does not reproduce the covariant value");
  }
  result.ensemble = std::move(ensemble);
  return result;
}

/// Multi-start alternating maximization with d^2 pure signal states:
/// Blahut-Arimoto reoptimizes the prior for fixed states, a derivative-free
/// local search moves each state for fixed priors, until the joint
/// improvement drops below 1e-10. Reported as an uncertified lower bound.
inline CapacityResult capacity_general(const Povm& povm, int restarts = 32,
                                       std::uint64_t seed = 0) {
  if (restarts < 1) throw ValidationError("need at least one restart");
  const std::size_t d = povm.dim;
  const std::size_t n = d * d;
  const std::size_t num_params = 2 * (d - 1);

  CapacityResult result;
  result.method = CapacityMethod::general_alternating;
  result.certified = false;
  result.diagnostics.restarts = restarts;
  double best_bits = -1.0;
  std::vector<std::vector<double>> best_params_set;
  std::vector<double> best_priors;

  for (int restart = 0; restart < restarts; ++restart) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(restart));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<std::vector<double>> params_set(n, std::vector<double>(num_params));
    for (auto& params : params_set)
      for (std::size_t k = 0; k < num_params; ++k)
        params[k] = (k < d - 1) ? uni(rng) * M_PI / 2.0 : uni(rng) * 2.0 * M_PI;

    std::vector<std::vector<double>> rows(n);
    for (std::size_t i = 0; i < n; ++i)
      rows[i] = detail::born_row(pure_state_from_angles(params_set[i], d), povm);
    std::vector<double> priors(n, 1.0 / static_cast<double>(n));

    double current = 0.0;
    double improvement = 0.0;
    int outer = 0;
    for (outer = 0; outer < 100; ++outer) {
      const BlahutArimotoResult ba = blahut_arimoto(rows, 1e-11);
      priors = ba.prior;
      const double after_ba = ba.capacity_bits;

      for (std::size_t i = 0; i < n; ++i) {
        const auto state_objective = [&](const std::vector<double>& params) {
          std::vector<std::vector<double>> trial_rows = rows;
          trial_rows[i] = detail::born_row(pure_state_from_angles(params, d), povm);
          return -detail::joint_mutual_information(priors, trial_rows);
        };
        const NelderMeadResult local =
            nelder_mead_minimize(state_objective, params_set[i], 0.25, 1e-12, 300);
        params_set[i] = local.x;
        rows[i] = detail::born_row(pure_state_from_angles(params_set[i], d), povm);
      }
      const double now = detail::joint_mutual_information(priors, rows);
      improvement = now - current;
      current = std::max(now, after_ba);
      if (outer > 0 && std::abs(improvement) < 1e-10) break;
    }
    const BlahutArimotoResult final_ba = blahut_arimoto(rows, 1e-11);
    const double bits = final_ba.capacity_bits;
    if (bits > best_bits) {
      best_bits = bits;
      best_params_set = params_set;
      best_priors = final_ba.prior;
      result.diagnostics.iterations = outer + 1;
      result.diagnostics.final_improvement = improvement;
      result.diagnostics.ba_bracket = final_ba.bracket;
    }
  }

  std::vector<HermitianOperator> states;
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<Complex> psi = pure_state_from_angles(best_params_set[i], d);
    states.push_back(HermitianOperator(outer_product(psi, psi)));
  }
  result.ensemble = detail::pruned_ensemble(std::move(states), best_priors);
  result.bits = mutual_information(born_matrix(result.ensemble, povm));
  return result;
}

/// Binary (two-outcome) closed form. The extreme eigenvalues of E_1 define
/// the binary channel; interior eigenstates are convex mixtures of the two
/// extreme rows and cannot enlarge the capacity.
inline CapacityResult capacity_binary(const Povm& povm) {
  if (povm.size() != 2) throw ValidationError("binary path needs exactly two outcomes");
  const EigenDecomposition eig = eig_hermitian(povm.elements[0]);
  const double beta = std::clamp(eig.eigenvalues.front(), 0.0, 1.0);
  const double alpha = std::clamp(eig.eigenvalues.back(), 0.0, 1.0);
  const auto [bits, prior_alpha] = binary_capacity(alpha, beta);

  const std::vector<Complex> v_alpha = eig.eigenvector(povm.dim - 1);
  const std::vector<Complex> v_beta = eig.eigenvector(0);
  const double p = std::clamp(prior_alpha, 1e-12, 1.0 - 1e-12);

  CapacityResult result;
  result.bits = bits;
  result.ensemble =
      validate_ensemble({HermitianOperator(outer_product(v_alpha, v_alpha)),
                         HermitianOperator(outer_product(v_beta, v_beta))},
                        {p, 1.0 - p});
  result.method = CapacityMethod::binary_closed_form;
  result.certified = true;
  return result;
}

/// Capacity dispatcher. Two outcomes take the closed form, commuting
/// elements the classical Blahut-Arimoto path, a verified irreducible group
/// hint the covariant path (falling back to the general search with a note
/// when verification fails), everything else the multi-start general search.
inline CapacityResult capacity(const Povm& povm, const GroupAction* hint = nullptr,
                               const CapacityOptions& options = {}) {
  if (povm.size() == 2) return capacity_binary(povm);

  bool commuting = true;
  for (std::size_t i = 0; i < povm.size() && commuting; ++i)
    for (std::size_t j = i + 1; j < povm.size() && commuting; ++j)
      commuting = commutator_norm(povm.elements[i], povm.elements[j]) <= 1e-9;
  if (commuting) return capacity_commuting(povm);

  if (hint != nullptr) {
    try {
      return capacity_covariant(povm, *hint);
    } catch (const NotCovariantError& e) {
      CapacityResult result = capacity_general(povm, options.restarts, options.seed);
      result.diagnostics.notes = std::string("group hint rejected (") + e.what() +
                                 "); fell back to the general path";
      return result;
    } catch (const NotIrreducibleError& e) {
      CapacityResult result = capacity_general(povm, options.restarts, options.seed);
      result.diagnostics.notes = std::string("group hint rejected (") + e.what() +
                                 "); fell back to the general path";
      return result;
    }
  }
  return capacity_general(povm, options.restarts, options.seed);
}

}  // namespace qdet
