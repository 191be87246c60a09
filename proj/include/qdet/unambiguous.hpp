#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdet/complex_matrix.hpp"
#include "qdet/eig.hpp"
#include "qdet/errors.hpp"
#include "qdet/povm.hpp"

namespace qdet {

/// Solution of reverse unambiguous discrimination. Conclusive labels are
/// 0..N-1 ordered by non-increasing score (the ordering that defines the
/// labeling); label N is the inconclusive slot. message_for_label pairs each
/// label with the original message index it identifies, most probable first.
struct UnambiguousSolution {
  Grouping grouping;
  std::vector<HermitianOperator> kernels;        // projector P_i per conclusive label
  std::vector<HermitianOperator> signal_states;  // pure state per conclusive label
  std::vector<double> score_vector;              // non-increasing
  std::vector<int> message_for_label;
  double p_success = 0.0;
  bool feasible = false;
};

namespace detail {

struct UnambiguousScore {
  std::vector<double> sorted_scores;  // descending
  std::vector<int> label_by_rank;     // rank r -> raw conclusive label
  bool feasible = false;
};

/// Kernels 𝒦_i = ker(sum_{j != i} E~_j) over the conclusive elements only;
/// an empty sum is the zero operator whose kernel is the full space.
inline std::vector<HermitianOperator> conclusive_sums(const Povm& povm, const Grouping& g,
                                                      std::size_t n_messages) {
  std::vector<ComplexMatrix> grouped(n_messages, ComplexMatrix(povm.dim));
  for (std::size_t k = 0; k < povm.size(); ++k) {
    const int label = g.assignment[k];
    if (label < static_cast<int>(n_messages))
      grouped[static_cast<std::size_t>(label)] += povm.elements[k].matrix();
  }
  std::vector<HermitianOperator> ops;
  for (auto& m : grouped) ops.push_back(HermitianOperator(m));
  return ops;
}

inline UnambiguousScore score_grouping(const Povm& povm, const Grouping& g,
                                       std::size_t n_messages,
                                       std::vector<HermitianOperator>* kernels_out = nullptr) {
  const std::vector<HermitianOperator> conclusive = conclusive_sums(povm, g, n_messages);
  UnambiguousScore score;
  std::vector<double> raw(n_messages);
  std::vector<HermitianOperator> kernels;
  for (std::size_t i = 0; i < n_messages; ++i) {
    ComplexMatrix others(povm.dim);
    for (std::size_t j = 0; j < n_messages; ++j)
      if (j != i) others += conclusive[j].matrix();
    const HermitianOperator projector = kernel_projector(HermitianOperator(others));
    if (projector_rank(projector) == 0) return score;  // infeasible grouping
    raw[i] = eig_hermitian(HermitianOperator(projector.matrix() * conclusive[i].matrix() *
                                             projector.matrix()))
                 .eigenvalues.front();
    if (kernels_out != nullptr) kernels.push_back(projector);
  }
  score.feasible = true;
  score.label_by_rank.resize(n_messages);
  std::iota(score.label_by_rank.begin(), score.label_by_rank.end(), 0);
  std::stable_sort(score.label_by_rank.begin(), score.label_by_rank.end(),
                   [&raw](int a, int b) {
                     return raw[static_cast<std::size_t>(a)] > raw[static_cast<std::size_t>(b)];
                   });
  for (int label : score.label_by_rank)
    score.sorted_scores.push_back(raw[static_cast<std::size_t>(label)]);
  if (kernels_out != nullptr) *kernels_out = std::move(kernels);
  return score;
}

}  // namespace detail

/// Exact reverse unambiguous discrimination of N messages with a fixed POVM:
/// enumerates every assignment of the M outcomes into N conclusive sets plus
/// one inconclusive set, keeps those whose kernels are all nontrivial, scores
/// each by the descending-sorted lambda_max(P_i E~_i P_i) dotted with the
/// descending-sorted priors, and returns the first maximizer. Throws
/// InfeasibleError when no grouping survives the kernel test.
inline UnambiguousSolution solve_unambiguous(const Povm& povm, std::vector<double> priors,
                                             std::uint64_t cap = kDefaultEnumerationCap) {
  validate_priors(priors);
  const std::size_t n = priors.size();

  std::vector<int> message_order(n);
  std::iota(message_order.begin(), message_order.end(), 0);
  std::stable_sort(message_order.begin(), message_order.end(), [&priors](int a, int b) {
    return priors[static_cast<std::size_t>(a)] > priors[static_cast<std::size_t>(b)];
  });
  std::vector<double> sorted_priors;
  for (int i : message_order) sorted_priors.push_back(priors[static_cast<std::size_t>(i)]);

  std::optional<Grouping> best;
  double best_p = -1.0;
  for (const Grouping& g : enumerate_groupings(povm.size(), static_cast<int>(n) + 1, cap)) {
    const detail::UnambiguousScore score = detail::score_grouping(povm, g, n);
    if (!score.feasible) continue;
    double p = 0.0;
    for (std::size_t r = 0; r < n; ++r) p += sorted_priors[r] * score.sorted_scores[r];
    if (!best || p > best_p) {
      best = g;
      best_p = p;
    }
  }
  if (!best)
    throw InfeasibleError(
        "every grouping leaves some message with an empty kernel: the POVM cannot "
        "unambiguously discriminate " +
        std::to_string(n) + " messages (only the trivial inconclusive POVM E~_? = I remains)");

  std::vector<HermitianOperator> kernels_raw;
  const detail::UnambiguousScore score = detail::score_grouping(povm, *best, n, &kernels_raw);
  const std::vector<HermitianOperator> conclusive = detail::conclusive_sums(povm, *best, n);

  UnambiguousSolution sol;
  sol.feasible = true;
  sol.p_success = best_p;
  sol.score_vector = score.sorted_scores;
  sol.message_for_label = message_order;

  // Relabel conclusive elements so label r carries the r-th largest score.
  std::vector<int> new_label(n);
  for (std::size_t r = 0; r < n; ++r)
    new_label[static_cast<std::size_t>(score.label_by_rank[r])] = static_cast<int>(r);
  sol.grouping.num_labels = static_cast<int>(n) + 1;
  for (int label : best->assignment)
    sol.grouping.assignment.push_back(
        label < static_cast<int>(n) ? new_label[static_cast<std::size_t>(label)]
                                    : static_cast<int>(n));

  for (std::size_t r = 0; r < n; ++r) {
    const auto raw_label = static_cast<std::size_t>(score.label_by_rank[r]);
    const HermitianOperator& projector = kernels_raw[raw_label];
    sol.kernels.push_back(projector);
    const HermitianOperator pep = HermitianOperator(
        projector.matrix() * conclusive[raw_label].matrix() * projector.matrix());
    const EigenDecomposition eig = eig_hermitian(pep);
    std::vector<Complex> state;
    if (eig.eigenvalues.front() > 1e-12) {
      state = eig.eigenvector(0);
    } else {
      // Nothing conclusive ever fires for this message; any state inside the
      // kernel keeps the zero-error promise.
      state = eig_hermitian(projector).eigenvector(0);
    }
    sol.signal_states.push_back(HermitianOperator(outer_product(state, state)));
  }
  return sol;
}

struct FeasibleGrouping {
  Grouping grouping;
  std::vector<int> kernel_ranks;  // per raw conclusive label
};

/// All assignments whose N kernels are nontrivial, with the kernel ranks.
inline std::vector<FeasibleGrouping> feasible_groupings(const Povm& povm,
                                                        std::size_t n_messages,
                                                        std::uint64_t cap =
                                                            kDefaultEnumerationCap) {
  if (n_messages == 0) throw ValidationError("need at least one message");
  std::vector<FeasibleGrouping> out;
  for (const Grouping& g :
       enumerate_groupings(povm.size(), static_cast<int>(n_messages) + 1, cap)) {
    const std::vector<HermitianOperator> conclusive =
        detail::conclusive_sums(povm, g, n_messages);
    std::vector<int> ranks(n_messages);
    bool feasible = true;
    for (std::size_t i = 0; i < n_messages && feasible; ++i) {
      ComplexMatrix others(povm.dim);
      for (std::size_t j = 0; j < n_messages; ++j)
        if (j != i) others += conclusive[j].matrix();
      ranks[i] = projector_rank(kernel_projector(HermitianOperator(others)));
      feasible = ranks[i] > 0;
    }
    if (feasible) out.push_back(FeasibleGrouping{g, ranks});
  }
  return out;
}

}  // namespace qdet
