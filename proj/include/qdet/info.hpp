#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "qdet/complex_matrix.hpp"
#include "qdet/eig.hpp"
#include "qdet/errors.hpp"
#include "qdet/povm.hpp"

namespace qdet {

/// eta(x) = -x log2 x with eta(0) = 0. All information quantities in this
/// library are reported in bits.
inline double eta(double x) {
  if (x <= 0.0) return 0.0;
  return -x * std::log2(x);
}

/// Binary entropy H(q) in bits.
inline double binary_entropy(double q) { return eta(q) + eta(1.0 - q); }

/// I(P) = sum_i eta(row_i) + sum_j eta(col_j) - sum_ij eta(P_ij), in bits.
inline double mutual_information(const JointDistribution& joint) {
  double result = 0.0;
  for (double r : joint.row_sums()) result += eta(r);
  for (double c : joint.col_sums()) result += eta(c);
  for (double p : joint.p) result -= eta(p);
  return result;
}

/// log2(1 + 2^x) computed without overflow.
inline double log2_one_plus_exp2(double x) {
  if (x > 50.0) return x + std::log1p(std::exp2(-x)) / std::numbers::ln2;
  return std::log1p(std::exp2(x)) / std::numbers::ln2;
}

/// Closed-form capacity of a binary-output channel whose two input rows are
/// (alpha, 1-alpha) and (beta, 1-beta), together with the optimal prior of
/// the alpha-row input. alpha = beta carries no information: (0, 1/2).
inline std::pair<double, double> binary_capacity(double alpha, double beta) {
  if (!(alpha >= 0.0 && alpha <= 1.0 && beta >= 0.0 && beta <= 1.0))
    throw ValidationError("binary channel parameters must lie in [0, 1]");
  if (alpha == beta) return {0.0, 0.5};
  const double ha = binary_entropy(alpha);
  const double hb = binary_entropy(beta);
  const double denom = beta - alpha;
  const double capacity =
      (alpha * hb - beta * ha) / denom + log2_one_plus_exp2((ha - hb) / denom);
  const double p = beta / denom - 1.0 / (denom * (1.0 + std::exp2((hb - ha) / denom)));
  return {capacity, p};
}

struct BlahutArimotoResult {
  double capacity_bits = 0.0;
  std::vector<double> prior;
  int iterations = 0;
  double bracket = 0.0;             // final (max divergence - achieved rate) gap
  std::vector<double> divergences;  // per-input KL divergences at the final prior
};

/// Blahut-Arimoto iteration for a discrete memoryless channel given as rows
/// p(j|i). The achieved rate sum_i p_i D_i is monotone non-decreasing; the
/// loop stops when it is within tol of the upper bound max_i D_i.
inline BlahutArimotoResult blahut_arimoto(const std::vector<std::vector<double>>& channel,
                                          double tol = 1e-10, int max_iterations = 200000) {
  if (channel.empty() || channel.front().empty())
    throw ValidationError("channel matrix is empty");
  const std::size_t n = channel.size();
  const std::size_t m = channel.front().size();
  for (std::size_t i = 0; i < n; ++i) {
    if (channel[i].size() != m) throw ValidationError("ragged channel matrix");
    double row = 0.0;
    for (double w : channel[i]) {
      if (w < -1e-12) throw ValidationError("negative channel probability");
      row += w;
    }
    if (std::abs(row - 1.0) > 1e-9)
      throw ValidationError("channel row " + std::to_string(i + 1) + " sums to " +
                            std::to_string(row) + ", expected 1");
  }

  BlahutArimotoResult result;
  result.prior.assign(n, 1.0 / static_cast<double>(n));
  std::vector<double> output(m), divergence(n);
  for (result.iterations = 0; result.iterations < max_iterations; ++result.iterations) {
    std::fill(output.begin(), output.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) output[j] += result.prior[i] * channel[i][j];

    double upper = -std::numeric_limits<double>::infinity();
    double rate = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double d = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double w = channel[i][j];
        if (w > 0.0 && output[j] > 0.0) d += w * std::log2(w / output[j]);
      }
      divergence[i] = d;
      upper = std::max(upper, d);
      rate += result.prior[i] * d;
    }
    result.capacity_bits = rate;
    result.bracket = upper - rate;
    result.divergences = divergence;
    if (result.bracket < tol) break;

    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      result.prior[i] *= std::exp2(divergence[i]);
      norm += result.prior[i];
    }
    for (double& p : result.prior) p /= norm;
  }
  return result;
}

/// Von Neumann entropy in bits.
inline double von_neumann_entropy(const HermitianOperator& rho) {
  double s = 0.0;
  for (double lambda : eig_hermitian(rho).eigenvalues) s += eta(lambda);
  return s;
}

namespace detail {

inline std::vector<double> density_eigenvalues(const HermitianOperator& rho) {
  if (std::abs(rho.trace() - 1.0) > 1e-8)
    throw ValidationError("density operator has trace " + std::to_string(rho.trace()));
  std::vector<double> lambdas = eig_hermitian(rho).eigenvalues;
  if (lambdas.back() < -1e-9)
    throw ValidationError("density operator has negative eigenvalue " +
                          std::to_string(lambdas.back()));
  return lambdas;
}

}  // namespace detail

/// Subentropy Q(rho) = -sum_k [prod_{l != k} lambda_k/(lambda_k - lambda_l)]
///                      lambda_k log2 lambda_k.
/// Zero eigenvalues drop out exactly. Degenerate clusters (within 1e-7) are
/// split symmetrically around their mean before evaluation, realizing the
/// equal-eigenvalue limit with O(1e-6) absolute error.
inline double subentropy(const HermitianOperator& rho) {
  std::vector<double> lambdas;
  for (double l : detail::density_eigenvalues(rho))
    if (l > 1e-12) lambdas.push_back(l);

  // Symmetric split of degeneracy clusters; sorted descending already.
  std::size_t start = 0;
  while (start < lambdas.size()) {
    std::size_t stop = start + 1;
    while (stop < lambdas.size() && lambdas[stop - 1] - lambdas[stop] < 1e-7) ++stop;
    const std::size_t size = stop - start;
    if (size > 1) {
      double mean = 0.0;
      for (std::size_t k = start; k < stop; ++k) mean += lambdas[k];
      mean /= static_cast<double>(size);
      for (std::size_t k = start; k < stop; ++k)
        lambdas[k] = mean + 1e-7 * (static_cast<double>(start) + 0.5 * (size - 1) -
                                    static_cast<double>(k));
    }
    start = stop;
  }

  double q = 0.0;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    double weight = 1.0;
    for (std::size_t l = 0; l < lambdas.size(); ++l)
      if (l != k) weight *= lambdas[k] / (lambdas[k] - lambdas[l]);
    q -= weight * lambdas[k] * std::log2(lambdas[k]);
  }
  return q;
}

/// Subentropy lower bound on the capacity: Q(sum_i m_i Ebar_i) - sum_i m_i Q(Ebar_i)
/// with m_i = Tr(E_i)/d and Ebar_i = E_i/(m_i d). Zero-trace elements carry
/// zero weight and are skipped.
inline double subentropy_lower_bound(const Povm& povm) {
  const double d = static_cast<double>(povm.dim);
  ComplexMatrix average(povm.dim);
  double bound = 0.0;
  for (const auto& e : povm.elements) {
    const double m = e.trace() / d;
    if (m <= 1e-14) continue;
    ComplexMatrix rescaled = e.matrix();
    rescaled *= Complex{1.0 / (m * d), 0.0};
    bound -= m * subentropy(HermitianOperator(rescaled));
    rescaled *= Complex{m, 0.0};
    average += rescaled;
  }
  bound += subentropy(HermitianOperator(average));
  return bound;
}

/// The naive Holevo quantity of the trace-rescaled POVM,
/// S(sum m_i Ebar_i) - sum m_i S(Ebar_i). Diagnostic only: neither an upper
/// nor a lower bound on the capacity.
inline double holevo_of_rescaled_povm(const Povm& povm) {
  const double d = static_cast<double>(povm.dim);
  ComplexMatrix average(povm.dim);
  double holevo = 0.0;
  for (std::size_t i = 0; i < povm.size(); ++i) {
    const double m = povm.elements[i].trace() / d;
    if (m <= 1e-14)
      throw ValidationError("POVM element " + std::to_string(i + 1) +
                            " has zero trace; rescaled Holevo quantity undefined");
    ComplexMatrix rescaled = povm.elements[i].matrix();
    rescaled *= Complex{1.0 / (m * d), 0.0};
    holevo -= m * von_neumann_entropy(HermitianOperator(rescaled));
    rescaled *= Complex{m, 0.0};
    average += rescaled;
  }
  holevo += von_neumann_entropy(HermitianOperator(average));
  return holevo;
}

}  // namespace qdet
