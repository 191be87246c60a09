#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qdet/complex_matrix.hpp"
#include "qdet/errors.hpp"

namespace qdet {

/// Full spectral decomposition of a Hermitian operator.
/// Eigenvalues are sorted descending; column k of `eigenvectors` pairs with
/// eigenvalues[k]. The sort is stable on the pre-sort index, so degenerate
/// eigenvalues keep a deterministic eigenvector order.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;

  std::vector<Complex> eigenvector(std::size_t k) const {
    std::vector<Complex> v(eigenvectors.dim());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = eigenvectors(i, k);
    return v;
  }
};

namespace detail {

inline double off_diagonal_frobenius(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace detail

/// Cyclic Jacobi diagonalization of a complex Hermitian matrix.
/// Each rotation annihilates one off-diagonal pair via a phased Givens
/// rotation; sweeps repeat until the off-diagonal Frobenius norm drops below
/// 1e-13 * ||A||_F, capped at 100 sweeps (error carrying the residual).
inline EigenDecomposition eig_hermitian(const HermitianOperator& op) {
  constexpr int kMaxSweeps = 100;
  constexpr double kRelTol = 1e-13;

  const std::size_t d = op.dim();
  ComplexMatrix a = op.matrix();
  ComplexMatrix v = ComplexMatrix::identity(d);
  const double scale = a.frobenius_norm();
  const double threshold = kRelTol * scale;

  int sweep = 0;
  double off = detail::off_diagonal_frobenius(a);
  while (off > threshold && sweep < kMaxSweeps) {
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const Complex gamma = a(p, q);
        const double g = std::abs(gamma);
        if (g == 0.0) continue;
        const Complex phase = gamma / g;

        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * g);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // J differs from identity only in the (p,q) plane:
        //   J(p,p) = phase*c   J(p,q) = phase*s
        //   J(q,p) = -s        J(q,q) = c
        const Complex jpp = phase * c, jpq = phase * s;

        for (std::size_t i = 0; i < d; ++i) {  // A <- A J, V <- V J
          const Complex ap = a(i, p), aq = a(i, q);
          a(i, p) = ap * jpp - aq * s;
          a(i, q) = ap * jpq + aq * c;
          const Complex vp = v(i, p), vq = v(i, q);
          v(i, p) = vp * jpp - vq * s;
          v(i, q) = vp * jpq + vq * c;
        }
        for (std::size_t i = 0; i < d; ++i) {  // A <- J^dag A
          const Complex ap = a(p, i), aq = a(q, i);
          a(p, i) = std::conj(jpp) * ap - s * aq;
          a(q, i) = std::conj(jpq) * ap + c * aq;
        }
        a(p, q) = Complex{0.0, 0.0};
        a(q, p) = Complex{0.0, 0.0};
      }
    }
    off = detail::off_diagonal_frobenius(a);
    ++sweep;
  }

  if (off > threshold)
    throw NumericalError(off, "Jacobi eigensolver did not converge after " +
                                  std::to_string(kMaxSweeps) +
                                  " sweeps; off-diagonal residual " + std::to_string(off));

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&a](std::size_t i, std::size_t j) {
    return a(i, i).real() > a(j, j).real();
  });

  EigenDecomposition out;
  out.eigenvalues.resize(d);
  out.eigenvectors = ComplexMatrix(d);
  for (std::size_t k = 0; k < d; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < d; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

/// Largest eigenvalue with one unit-norm maximizing eigenvector.
/// Degenerate maxima return the first eigenvector in decomposition order.
inline std::pair<double, std::vector<Complex>> lambda_max(const HermitianOperator& op) {
  const EigenDecomposition eig = eig_hermitian(op);
  return {eig.eigenvalues.front(), eig.eigenvector(0)};
}

inline double lambda_min_value(const HermitianOperator& op) {
  return eig_hermitian(op).eigenvalues.back();
}

/// Spread: largest minus smallest eigenvalue.
inline double spread(const HermitianOperator& op) {
  const EigenDecomposition eig = eig_hermitian(op);
  return eig.eigenvalues.front() - eig.eigenvalues.back();
}

inline double default_kernel_tolerance(const HermitianOperator& op) {
  return 1e-9 * std::max(1.0, op.max_norm());
}

/// Orthogonal projector onto the span of eigenvectors with |lambda| <= tol.
/// Intended for positive semidefinite inputs; a full-rank operator yields the
/// zero projector, the zero operator yields the identity.
inline HermitianOperator kernel_projector(const HermitianOperator& op, double tol) {
  const EigenDecomposition eig = eig_hermitian(op);
  ComplexMatrix p(op.dim());
  for (std::size_t k = 0; k < op.dim(); ++k) {
    if (std::abs(eig.eigenvalues[k]) > tol) continue;
    const std::vector<Complex> vk = eig.eigenvector(k);
    p += outer_product(vk, vk);
  }
  return HermitianOperator(p);
}

inline HermitianOperator kernel_projector(const HermitianOperator& op) {
  return kernel_projector(op, default_kernel_tolerance(op));
}

inline int projector_rank(const HermitianOperator& projector, double tol = 0.5) {
  // A projector's trace equals its rank; tol 0.5 rounds to the nearest integer.
  return static_cast<int>(std::floor(projector.trace() + tol));
}

}  // namespace qdet
