#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qdet/complex_matrix.hpp"
#include "qdet/eig.hpp"
#include "qdet/errors.hpp"

namespace qdet {

constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// Validated POVM: M positive operators on a d-dimensional space summing to
/// the identity. Construct through validate_povm.
struct Povm {
  std::size_t dim = 0;
  std::vector<HermitianOperator> elements;

  std::size_t size() const { return elements.size(); }
};

constexpr double kPovmPositivityTol = 1e-9;
constexpr double kPovmCompletenessTol = 1e-8;

inline Povm validate_povm(std::vector<HermitianOperator> elements) {
  if (elements.empty()) throw ValidationError("POVM needs at least one element");
  const std::size_t d = elements.front().dim();
  ComplexMatrix sum(d);
  for (std::size_t j = 0; j < elements.size(); ++j) {
    if (elements[j].dim() != d)
      throw DimMismatchError("POVM element " + std::to_string(j + 1) + " has dimension " +
                             std::to_string(elements[j].dim()) + ", expected " +
                             std::to_string(d));
    const double lambda_min = lambda_min_value(elements[j]);
    if (lambda_min < -kPovmPositivityTol)
      throw NotPositiveError(j + 1, lambda_min,
                             "POVM element " + std::to_string(j + 1) +
                                 " has negative eigenvalue " + std::to_string(lambda_min));
    sum += elements[j].matrix();
  }
  sum -= ComplexMatrix::identity(d);
  const double residual = sum.max_norm();
  if (residual > kPovmCompletenessTol)
    throw NotCompleteError(residual, "POVM elements do not sum to identity; residual " +
                                         std::to_string(residual));
  return Povm{d, std::move(elements)};
}

/// Weighted list of density operators: the signal encoding {pi_i, rho_i}.
struct Ensemble {
  std::vector<HermitianOperator> states;
  std::vector<double> priors;

  std::size_t size() const { return states.size(); }
};

inline void validate_priors(const std::vector<double>& priors, double sum_tol = 1e-12) {
  if (priors.empty()) throw ValidationError("prior vector is empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < priors.size(); ++i) {
    if (!(priors[i] > 0.0))
      throw ValidationError("prior " + std::to_string(i + 1) + " must be strictly positive");
    sum += priors[i];
  }
  if (std::abs(sum - 1.0) > sum_tol)
    throw ValidationError("priors sum to " + std::to_string(sum) + ", expected 1");
}

inline Ensemble validate_ensemble(std::vector<HermitianOperator> states,
                                  std::vector<double> priors) {
  if (states.size() != priors.size())
    throw DimMismatchError("ensemble has " + std::to_string(states.size()) + " states but " +
                           std::to_string(priors.size()) + " priors");
  validate_priors(priors);
  const std::size_t d = states.front().dim();
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].dim() != d)
      throw DimMismatchError("ensemble state " + std::to_string(i + 1) + " dimension mismatch");
    if (std::abs(states[i].trace() - 1.0) > 1e-10)
      throw ValidationError("ensemble state " + std::to_string(i + 1) + " has trace " +
                            std::to_string(states[i].trace()));
    const double lambda_min = lambda_min_value(states[i]);
    if (lambda_min < -1e-9)
      throw ValidationError("ensemble state " + std::to_string(i + 1) +
                            " has negative eigenvalue " + std::to_string(lambda_min));
  }
  return Ensemble{std::move(states), std::move(priors)};
}

/// Assignment of M measurement outcomes to hypothesis labels 0..num_labels-1.
/// Unambiguous groupings use label num_labels-1 as the inconclusive slot.
struct Grouping {
  std::vector<int> assignment;
  int num_labels = 0;

  std::size_t size() const { return assignment.size(); }

  friend bool operator==(const Grouping& a, const Grouping& b) {
    return a.num_labels == b.num_labels && a.assignment == b.assignment;
  }
};

/// Coarse-grained POVM with elements E~_j = sum over outcomes labelled j.
/// Empty labels yield zero operators; completeness is preserved.
inline Povm group_povm(const Povm& povm, const Grouping& grouping) {
  if (grouping.assignment.size() != povm.size())
    throw DimMismatchError("grouping covers " + std::to_string(grouping.assignment.size()) +
                           " outcomes, POVM has " + std::to_string(povm.size()));
  std::vector<HermitianOperator> grouped(static_cast<std::size_t>(grouping.num_labels),
                                         HermitianOperator::zero(povm.dim));
  for (std::size_t k = 0; k < povm.size(); ++k) {
    const int label = grouping.assignment[k];
    if (label < 0 || label >= grouping.num_labels)
      throw ValidationError("grouping label " + std::to_string(label) + " for outcome " +
                            std::to_string(k + 1) + " is out of range");
    grouped[static_cast<std::size_t>(label)] += povm.elements[k];
  }
  return validate_povm(std::move(grouped));
}

/// Joint probability matrix P_ij = pi_i Tr(rho_i E_j).
struct JointDistribution {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> p;

  double& at(std::size_t i, std::size_t j) { return p[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return p[i * cols + j]; }

  double total() const {
    double s = 0.0;
    for (double x : p) s += x;
    return s;
  }
  std::vector<double> row_sums() const {
    std::vector<double> r(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) r[i] += at(i, j);
    return r;
  }
  std::vector<double> col_sums() const {
    std::vector<double> c(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) c[j] += at(i, j);
    return c;
  }
};

constexpr double kProbabilityClampTol = 1e-12;

/// Born values in [-1e-12, 0) clamp to zero; anything lower is an error
/// rather than rounding noise.
inline double clamp_probability(double p, const char* context) {
  if (p >= 0.0) return p;
  if (p >= -kProbabilityClampTol) return 0.0;
  throw ValidationError(std::string(context) + ": probability " + std::to_string(p) +
                        " below clamp tolerance");
}

inline JointDistribution born_matrix(const Ensemble& ensemble, const Povm& povm) {
  if (ensemble.states.empty()) throw ValidationError("empty ensemble");
  if (ensemble.states.front().dim() != povm.dim)
    throw DimMismatchError("ensemble dimension " +
                           std::to_string(ensemble.states.front().dim()) +
                           " does not match POVM dimension " + std::to_string(povm.dim));
  JointDistribution joint;
  joint.rows = ensemble.size();
  joint.cols = povm.size();
  joint.p.resize(joint.rows * joint.cols);
  for (std::size_t i = 0; i < joint.rows; ++i)
    for (std::size_t j = 0; j < joint.cols; ++j)
      joint.at(i, j) = clamp_probability(
          ensemble.priors[i] * real_trace_product(ensemble.states[i], povm.elements[j]),
          "born_matrix");
  return joint;
}

inline std::uint64_t checked_power(std::uint64_t base, std::size_t exponent, std::uint64_t cap) {
  std::uint64_t n = 1;
  for (std::size_t k = 0; k < exponent; ++k) {
    if (base != 0 && n > cap / base + 1) return cap + 1;  // saturate past the cap
    n *= base;
  }
  return n;
}

/// Lazily enumerates all L^M assignments of M outcomes to L labels in
/// lexicographic order over the assignment vectors (last index fastest).
/// Throws CapExceededError up front when L^M exceeds the cap.
class GroupingRange {
 public:
  GroupingRange(std::size_t num_outcomes, int num_labels,
                std::uint64_t cap = kDefaultEnumerationCap)
      : num_outcomes_(num_outcomes), num_labels_(num_labels) {
    if (num_labels < 1) throw ValidationError("grouping needs at least one label");
    count_ = checked_power(static_cast<std::uint64_t>(num_labels), num_outcomes, cap);
    if (count_ > cap) {
      const double requested = std::pow(static_cast<double>(num_labels),
                                        static_cast<double>(num_outcomes));
      throw CapExceededError(requested, static_cast<double>(cap),
                             "grouping enumeration needs " + std::to_string(num_labels) + "^" +
                                 std::to_string(num_outcomes) + " = " +
                                 std::to_string(requested) + " assignments, cap is " +
                                 std::to_string(cap) + "; reduce the label or outcome count");
    }
  }

  std::uint64_t count() const { return count_; }

  class iterator {
   public:
    using value_type = Grouping;

    iterator() : done_(true) {}
    iterator(std::size_t num_outcomes, int num_labels)
        : current_{std::vector<int>(num_outcomes, 0), num_labels}, done_(false) {}

    const Grouping& operator*() const { return current_; }
    const Grouping* operator->() const { return &current_; }

    iterator& operator++() {
      auto& a = current_.assignment;
      std::size_t k = a.size();
      while (k > 0) {
        --k;
        if (++a[k] < current_.num_labels) return *this;
        a[k] = 0;
      }
      done_ = true;
      return *this;
    }

    friend bool operator==(const iterator& a, const iterator& b) {
      if (a.done_ || b.done_) return a.done_ == b.done_;
      return a.current_ == b.current_;
    }
    friend bool operator!=(const iterator& a, const iterator& b) { return !(a == b); }

   private:
    Grouping current_;
    bool done_;
  };

  iterator begin() const { return iterator(num_outcomes_, num_labels_); }
  iterator end() const { return iterator(); }

 private:
  std::size_t num_outcomes_;
  int num_labels_;
  std::uint64_t count_;
};

inline GroupingRange enumerate_groupings(std::size_t num_outcomes, int num_labels,
                                         std::uint64_t cap = kDefaultEnumerationCap) {
  return GroupingRange(num_outcomes, num_labels, cap);
}

}  // namespace qdet
