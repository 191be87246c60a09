// Test-only oracles, independent of the solver paths they check.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "qdet/complex_matrix.hpp"
#include "qdet/eig.hpp"
#include "qdet/povm.hpp"

namespace oracles {

using qdet::Complex;
using qdet::ComplexMatrix;
using qdet::HermitianOperator;

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix a(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    a(i, i) = gauss(rng);
    for (std::size_t j = i + 1; j < dim; ++j) {
      const Complex z{gauss(rng), gauss(rng)};
      a(i, j) = z;
      a(j, i) = std::conj(z);
    }
  }
  return a;
}

inline std::vector<Complex> random_unit_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> v(dim);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (auto& z : v) {
      z = Complex{gauss(rng), gauss(rng)};
      norm2 += std::norm(z);
    }
  } while (norm2 < 1e-12);
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& z : v) z *= inv;
  return v;
}

inline HermitianOperator random_pure_state(std::mt19937_64& rng, std::size_t dim) {
  const auto v = random_unit_vector(rng, dim);
  return HermitianOperator(qdet::outer_product(v, v));
}

/// Random full-rank density operator (Ginibre construction).
inline HermitianOperator random_density(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix g(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) g(i, j) = Complex{gauss(rng), gauss(rng)};
  ComplexMatrix rho = g * g.adjoint();
  rho *= Complex{1.0 / rho.trace().real(), 0.0};
  return HermitianOperator(rho);
}

/// Random POVM: Ginibre-positive blocks normalised by S^{-1/2} (.) S^{-1/2}.
inline qdet::Povm random_povm(std::mt19937_64& rng, std::size_t dim, std::size_t num_elements) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<ComplexMatrix> blocks;
  ComplexMatrix sum(dim);
  for (std::size_t k = 0; k < num_elements; ++k) {
    ComplexMatrix g(dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) g(i, j) = Complex{gauss(rng), gauss(rng)};
    ComplexMatrix b = g * g.adjoint();
    sum += b;
    blocks.push_back(std::move(b));
  }
  const auto eig = qdet::eig_hermitian(HermitianOperator(sum));
  ComplexMatrix inv_sqrt(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const auto v = eig.eigenvector(k);
    ComplexMatrix proj = qdet::outer_product(v, v);
    proj *= Complex{1.0 / std::sqrt(eig.eigenvalues[k]), 0.0};
    inv_sqrt += proj;
  }
  std::vector<HermitianOperator> elements;
  for (const auto& b : blocks) elements.push_back(HermitianOperator(inv_sqrt * b * inv_sqrt));
  return qdet::validate_povm(std::move(elements));
}

/// Power iteration on A + shift*I; independent check of lambda_max.
inline double power_iteration_lambda_max(const HermitianOperator& op, int steps = 10000) {
  const std::size_t d = op.dim();
  // Shift so the dominant eigenvalue of A + sI is the largest eigenvalue of A.
  double shift = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < d; ++j) row += std::abs(op(i, j));
    shift = std::max(shift, row);
  }
  std::mt19937_64 rng(12345);
  std::vector<Complex> v = random_unit_vector(rng, d);
  double rayleigh = 0.0;
  for (int it = 0; it < steps; ++it) {
    std::vector<Complex> w(d, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) w[i] += op(i, j) * v[j];
      w[i] += shift * v[i];
    }
    double norm2 = 0.0;
    for (const auto& z : w) norm2 += std::norm(z);
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& z : w) z *= inv;
    v = std::move(w);
    Complex num{0.0, 0.0};
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) num += std::conj(v[i]) * op(i, j) * v[j];
    rayleigh = num.real();
  }
  return rayleigh;
}

}  // namespace oracles
