#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdet/complex_matrix.hpp"
#include "qdet/eig.hpp"
#include "qdet/errors.hpp"
#include "qdet/povm.hpp"

namespace qdet {

/// Cost of deciding hypothesis j when message i was sent. Rows index the N
/// messages, columns the N' hypothesis labels (rectangular matrices are
/// legal; the label set follows the columns). Entries are affinely rescaled
/// into [0,1] so that the gain B_ij = 1 - C^_ij lies in [0,1]; a constant
/// cost matrix skips the rescaling and yields gain 1 - c for every strategy.
class CostMatrix {
 public:
  CostMatrix(std::size_t num_messages, std::size_t num_hypotheses, std::vector<double> values)
      : rows_(num_messages), cols_(num_hypotheses), values_(std::move(values)) {
    if (rows_ == 0 || cols_ == 0 || values_.size() != rows_ * cols_)
      throw ValidationError("cost matrix shape mismatch");
    double lo = values_[0], hi = values_[0];
    for (double v : values_) {
      if (!std::isfinite(v) || v < 0.0)
        throw ValidationError("cost entries must be finite and nonnegative");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    min_ = lo;
    max_ = hi;
  }

  static CostMatrix min_error(std::size_t n) {
    std::vector<double> v(n * n, 1.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 0.0;
    return CostMatrix(n, n, std::move(v));
  }

  std::size_t num_messages() const { return rows_; }
  std::size_t num_hypotheses() const { return cols_; }
  double original(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
  bool is_constant() const { return max_ == min_; }

  /// Normalized gain B_ij.
  double gain(std::size_t i, std::size_t j) const {
    const double c = original(i, j);
    if (is_constant()) return 1.0 - c;
    return 1.0 - (c - min_) / (max_ - min_);
  }

  /// Maps a normalized gain back to the caller-scale expected cost C(P).
  double original_cost_from_gain(double gain_value) const {
    if (is_constant()) return min_;
    return min_ + (max_ - min_) * (1.0 - gain_value);
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> values_;
  double min_ = 0.0, max_ = 0.0;
};

struct BayesSolution {
  Grouping grouping;
  std::vector<HermitianOperator> signal_states;  // pure, one per message
  double gain = 0.0;           // normalized B(P)
  double original_cost = 0.0;  // caller-scale C(P)
  std::vector<double> score_vector;
  std::vector<HermitianOperator> per_message_operators;  // sum_j B_ij E~_j
};

namespace detail {

/// sum_j B_ij E~_j computed straight from the assignment vector.
inline HermitianOperator per_message_operator(const Povm& povm, const Grouping& grouping,
                                              const CostMatrix& cost, std::size_t message) {
  ComplexMatrix acc(povm.dim);
  for (std::size_t k = 0; k < povm.size(); ++k) {
    const double b = cost.gain(message, static_cast<std::size_t>(grouping.assignment[k]));
    if (b == 0.0) continue;
    ComplexMatrix term = povm.elements[k].matrix();
    term *= Complex{b, 0.0};
    acc += term;
  }
  return HermitianOperator(acc);
}

inline std::vector<double> grouping_scores(const Povm& povm, const Grouping& grouping,
                                           const CostMatrix& cost) {
  std::vector<double> scores(cost.num_messages());
  for (std::size_t i = 0; i < scores.size(); ++i)
    scores[i] = eig_hermitian(per_message_operator(povm, grouping, cost, i)).eigenvalues.front();
  return scores;
}

}  // namespace detail

/// Exact solution of the reverse Bayes-cost problem for a fixed POVM:
/// enumerates every assignment of the M outcomes to the N' hypothesis labels,
/// scores each by pi . s_alpha with (s_alpha)_i = lambda_max(sum_j B_ij E~_j),
/// and returns the first maximizer in lexicographic assignment order. The
/// optimal signal states are the maximal eigenstates, always pure.
inline BayesSolution solve_bayes(const Povm& povm, const std::vector<double>& priors,
                                 const CostMatrix& cost,
                                 std::uint64_t cap = kDefaultEnumerationCap) {
  validate_priors(priors);
  if (priors.size() != cost.num_messages())
    throw DimMismatchError("cost matrix has " + std::to_string(cost.num_messages()) +
                           " message rows but " + std::to_string(priors.size()) +
                           " priors were given");

  const int labels = static_cast<int>(cost.num_hypotheses());
  std::optional<Grouping> best;
  double best_gain = 0.0;
  std::vector<double> best_scores;

  for (const Grouping& g : enumerate_groupings(povm.size(), labels, cap)) {
    const std::vector<double> scores = detail::grouping_scores(povm, g, cost);
    double gain = 0.0;
    for (std::size_t i = 0; i < priors.size(); ++i) gain += priors[i] * scores[i];
    if (!best || gain > best_gain) {
      best = g;
      best_gain = gain;
      best_scores = scores;
    }
  }

  BayesSolution sol;
  sol.grouping = *best;
  sol.gain = best_gain;
  sol.original_cost = cost.original_cost_from_gain(best_gain);
  sol.score_vector = std::move(best_scores);
  for (std::size_t i = 0; i < priors.size(); ++i) {
    const HermitianOperator op = detail::per_message_operator(povm, sol.grouping, cost, i);
    sol.per_message_operators.push_back(op);
    const std::vector<Complex> vec = lambda_max(op).second;
    sol.signal_states.push_back(HermitianOperator(outer_product(vec, vec)));
  }
  return sol;
}

/// Minimum-error discrimination: the 0/1 cost C_ij = 1 - delta_ij. The gain
/// is the success probability.
inline BayesSolution min_error(const Povm& povm, const std::vector<double>& priors,
                               std::uint64_t cap = kDefaultEnumerationCap) {
  return solve_bayes(povm, priors, CostMatrix::min_error(priors.size()), cap);
}

/// Binary closed form: p_s = max_alpha { pi1 lambda_max(E~) + pi2 [1 - lambda_min(E~)] }
/// over all 2^M two-set groupings, label 0 holding message 1's outcomes.
inline std::pair<double, Grouping> binary_success(const Povm& povm,
                                                  std::pair<double, double> priors,
                                                  std::uint64_t cap = kDefaultEnumerationCap) {
  validate_priors({priors.first, priors.second});
  std::optional<Grouping> best;
  double best_p = 0.0;
  for (const Grouping& g : enumerate_groupings(povm.size(), 2, cap)) {
    ComplexMatrix sum(povm.dim);
    for (std::size_t k = 0; k < povm.size(); ++k)
      if (g.assignment[k] == 0) sum += povm.elements[k].matrix();
    const auto eig = eig_hermitian(HermitianOperator(sum));
    const double p =
        priors.first * eig.eigenvalues.front() + priors.second * (1.0 - eig.eigenvalues.back());
    if (!best || p > best_p) {
      best = g;
      best_p = p;
    }
  }
  return {best_p, *best};
}

/// Prior above which discarding the measurement {E, I-E} and always guessing
/// message 1 is optimal. Returns 1 when lambda_max(E) = 1: a sharp outcome
/// keeps the measurement useful for every prior.
inline double trivial_threshold(const HermitianOperator& e) {
  const EigenDecomposition eig = eig_hermitian(e);
  const double lo = eig.eigenvalues.back();
  const double hi = eig.eigenvalues.front();
  if (lo < -1e-9 || hi > 1.0 + 1e-9)
    throw ValidationError("effect must satisfy 0 <= E <= I; spectrum [" + std::to_string(lo) +
                          ", " + std::to_string(hi) + "]");
  if (hi >= 1.0 - 1e-12) return 1.0;
  return (1.0 - lo) / ((1.0 - lo) + (1.0 - hi));
}

struct RegionCell {
  double pi1, pi2, pi3;
  int grouping_id;
  double gain;
};

struct RegionJunction {
  double pi1, pi2, pi3;
  std::vector<int> grouping_ids;
};

/// One representative per canonical grouping class (relabelings identified).
struct RegionClass {
  int id;
  Grouping representative;
  std::vector<double> scores;
};

struct RegionMap {
  double resolution = 0.0;
  std::vector<RegionCell> cells;
  std::vector<RegionJunction> junctions;
  std::vector<RegionClass> classes;
};

namespace detail {

/// Entry-quantized fingerprint used to compare effective POVMs at 1e-9.
inline std::vector<std::vector<long long>> povm_fingerprint(const Povm& povm,
                                                            const Grouping& grouping) {
  std::vector<ComplexMatrix> grouped(static_cast<std::size_t>(grouping.num_labels),
                                     ComplexMatrix(povm.dim));
  for (std::size_t k = 0; k < povm.size(); ++k)
    grouped[static_cast<std::size_t>(grouping.assignment[k])] += povm.elements[k].matrix();
  std::vector<std::vector<long long>> prints;
  for (const auto& m : grouped) {
    std::vector<long long> p;
    for (std::size_t i = 0; i < m.dim(); ++i)
      for (std::size_t j = 0; j < m.dim(); ++j) {
        p.push_back(std::llround(m(i, j).real() * 1e9));
        p.push_back(std::llround(m(i, j).imag() * 1e9));
      }
    prints.push_back(std::move(p));
  }
  std::sort(prints.begin(), prints.end());
  return prints;
}

}  // namespace detail

/// Prior-simplex map for N = 3: per grid point, the optimal grouping class
/// and its gain. Classes identify groupings whose sorted score vectors and
/// sorted effective POVMs coincide, so message relabelings share one id.
/// Junctions are grid points whose neighborhood shows three or more classes.
inline RegionMap map_regions(const Povm& povm, double resolution, const CostMatrix& cost,
                             bool ordered_only = false, std::uint64_t cell_cap = 1'000'000,
                             std::uint64_t grouping_cap = kDefaultEnumerationCap) {
  if (cost.num_messages() != 3)
    throw ValidationError("region maps are implemented for N = 3 messages");
  if (!(resolution > 0.0) || resolution > 1.0)
    throw ValidationError("resolution must lie in (0, 1]");
  const auto steps = static_cast<std::uint64_t>(std::llround(1.0 / resolution));
  const std::uint64_t cell_count = (steps + 1) * (steps + 2) / 2;
  if (cell_count > cell_cap)
    throw CapExceededError(static_cast<double>(cell_count), static_cast<double>(cell_cap),
                           "region grid needs " + std::to_string(cell_count) +
                               " cells, cap is " + std::to_string(cell_cap));

  // Score vectors are prior-independent; enumerate groupings once.
  struct Scored {
    Grouping grouping;
    std::vector<double> scores;
    int class_id;
  };
  std::vector<Scored> scored;
  std::vector<std::pair<std::vector<double>, std::vector<std::vector<long long>>>> signatures;
  RegionMap map;
  map.resolution = resolution;
  for (const Grouping& g : enumerate_groupings(povm.size(),
                                               static_cast<int>(cost.num_hypotheses()),
                                               grouping_cap)) {
    Scored s{g, detail::grouping_scores(povm, g, cost), -1};
    std::vector<double> sorted_scores = s.scores;
    std::sort(sorted_scores.begin(), sorted_scores.end(), std::greater<>());
    const auto fingerprint = detail::povm_fingerprint(povm, g);
    for (std::size_t c = 0; c < signatures.size(); ++c) {
      if (signatures[c].second != fingerprint) continue;
      bool close = true;
      for (std::size_t i = 0; i < sorted_scores.size() && close; ++i)
        close = std::abs(signatures[c].first[i] - sorted_scores[i]) <= 1e-9;
      if (close) {
        s.class_id = static_cast<int>(c);
        break;
      }
    }
    if (s.class_id < 0) {
      s.class_id = static_cast<int>(signatures.size());
      signatures.emplace_back(sorted_scores, fingerprint);
      map.classes.push_back(RegionClass{s.class_id, g, s.scores});
    }
    scored.push_back(std::move(s));
  }

  const auto n = static_cast<long long>(steps);
  std::vector<std::vector<int>> id_grid(static_cast<std::size_t>(n + 1),
                                        std::vector<int>(static_cast<std::size_t>(n + 1), -1));
  for (long long i1 = 0; i1 <= n; ++i1) {
    for (long long i2 = 0; i2 + i1 <= n; ++i2) {
      const double pi1 = static_cast<double>(i1) / static_cast<double>(n);
      const double pi2 = static_cast<double>(i2) / static_cast<double>(n);
      const double pi3 = 1.0 - pi1 - pi2;
      if (ordered_only && !(pi1 >= pi2 - 1e-12 && pi2 >= pi3 - 1e-12)) continue;
      const Scored* winner = nullptr;
      double best = 0.0;
      for (const Scored& s : scored) {
        const double gain = pi1 * s.scores[0] + pi2 * s.scores[1] + pi3 * s.scores[2];
        if (!winner || gain > best) {
          winner = &s;
          best = gain;
        }
      }
      id_grid[static_cast<std::size_t>(i1)][static_cast<std::size_t>(i2)] = winner->class_id;
      map.cells.push_back(RegionCell{pi1, pi2, pi3, winner->class_id, best});
    }
  }

  // Junction scan over the triangular-lattice neighborhood of each point.
  static const int kOffsets[][2] = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}};
  std::vector<RegionJunction> raw;
  for (long long i1 = 0; i1 <= n; ++i1) {
    for (long long i2 = 0; i2 + i1 <= n; ++i2) {
      if (id_grid[static_cast<std::size_t>(i1)][static_cast<std::size_t>(i2)] < 0) continue;
      std::vector<int> ids;
      for (const auto& off : kOffsets) {
        const long long j1 = i1 + off[0], j2 = i2 + off[1];
        if (j1 < 0 || j2 < 0 || j1 + j2 > n) continue;
        const int id = id_grid[static_cast<std::size_t>(j1)][static_cast<std::size_t>(j2)];
        if (id >= 0 && std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
      }
      if (ids.size() >= 3) {
        std::sort(ids.begin(), ids.end());
        const double pi1 = static_cast<double>(i1) / static_cast<double>(n);
        const double pi2 = static_cast<double>(i2) / static_cast<double>(n);
        raw.push_back(RegionJunction{pi1, pi2, 1.0 - pi1 - pi2, ids});
      }
    }
  }
  // Cluster adjacent junction candidates; report cluster centroids.
  std::vector<bool> used(raw.size(), false);
  for (std::size_t a = 0; a < raw.size(); ++a) {
    if (used[a]) continue;
    std::vector<std::size_t> cluster{a};
    used[a] = true;
    for (std::size_t c = 0; c < cluster.size(); ++c) {
      for (std::size_t b = 0; b < raw.size(); ++b) {
        if (used[b]) continue;
        const double dist = std::max(std::abs(raw[cluster[c]].pi1 - raw[b].pi1),
                                     std::abs(raw[cluster[c]].pi2 - raw[b].pi2));
        if (dist <= 1.5 * resolution) {
          used[b] = true;
          cluster.push_back(b);
        }
      }
    }
    RegionJunction merged{0.0, 0.0, 0.0, {}};
    for (std::size_t idx : cluster) {
      merged.pi1 += raw[idx].pi1;
      merged.pi2 += raw[idx].pi2;
      for (int id : raw[idx].grouping_ids)
        if (std::find(merged.grouping_ids.begin(), merged.grouping_ids.end(), id) ==
            merged.grouping_ids.end())
          merged.grouping_ids.push_back(id);
    }
    merged.pi1 /= static_cast<double>(cluster.size());
    merged.pi2 /= static_cast<double>(cluster.size());
    merged.pi3 = 1.0 - merged.pi1 - merged.pi2;
    std::sort(merged.grouping_ids.begin(), merged.grouping_ids.end());
    map.junctions.push_back(std::move(merged));
  }
  return map;
}

}  // namespace qdet
