#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "qdet/errors.hpp"

namespace qdet {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major. The workhorse value type for
/// operators on a d-dimensional Hilbert space (d is small, typically <= 8).
class ComplexMatrix {
 public:
  ComplexMatrix() : dim_(0) {}
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, Complex{0.0, 0.0}) {}

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }
  static ComplexMatrix zero(std::size_t dim) { return ComplexMatrix(dim); }

  std::size_t dim() const { return dim_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_dim(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_dim(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  ComplexMatrix& operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.require_same_dim(b);
    const std::size_t d = a.dim_;
    ComplexMatrix c(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{0.0, 0.0}) continue;
        for (std::size_t j = 0; j < d; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  ComplexMatrix conjugate() const {
    ComplexMatrix m(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) m(i, j) = std::conj((*this)(i, j));
    return m;
  }

  Complex trace() const {
    Complex t{0.0, 0.0};
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  double max_norm() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  bool all_finite() const {
    for (const auto& z : data_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

  friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a.dim_ == b.dim_ && a.data_ == b.data_;
  }

 private:
  void require_same_dim(const ComplexMatrix& o) const {
    if (dim_ != o.dim_)
      throw DimMismatchError("matrix dimension mismatch: " + std::to_string(dim_) + " vs " +
                             std::to_string(o.dim_));
  }

  std::size_t dim_;
  std::vector<Complex> data_;
};

/// Tr(A B), real part. Exact for products of Hermitian operators.
inline double real_trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw DimMismatchError("trace product dimension mismatch");
  Complex t{0.0, 0.0};
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t k = 0; k < a.dim(); ++k) t += a(i, k) * b(k, i);
  return t.real();
}

/// |u><v| for column vectors u, v.
inline ComplexMatrix outer_product(const std::vector<Complex>& u, const std::vector<Complex>& v) {
  if (u.size() != v.size()) throw DimMismatchError("outer product dimension mismatch");
  ComplexMatrix m(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
  return m;
}

/// Hermitian operator on a d-dimensional space. Construction symmetrizes the
/// input as (A + A^dag)/2 when the asymmetry is at most 1e-10 in max norm and
/// rejects it otherwise, so file-parse rounding is absorbed without masking
/// genuinely non-Hermitian input.
class HermitianOperator {
 public:
  static constexpr double kAsymmetryTolerance = 1e-10;

  HermitianOperator() = default;

  explicit HermitianOperator(const ComplexMatrix& a) {
    if (a.dim() == 0) throw ValidationError("operator must have dimension >= 1");
    if (!a.all_finite()) throw ValidationError("operator has non-finite entries");
    const ComplexMatrix adj = a.adjoint();
    ComplexMatrix diff = a;
    diff -= adj;
    if (diff.max_norm() > kAsymmetryTolerance)
      throw ValidationError("operator is not Hermitian: asymmetry " +
                            std::to_string(diff.max_norm()));
    matrix_ = a;
    matrix_ += adj;
    matrix_ *= Complex{0.5, 0.0};
  }

  static HermitianOperator identity(std::size_t dim) {
    return HermitianOperator(ComplexMatrix::identity(dim));
  }
  static HermitianOperator zero(std::size_t dim) {
    return HermitianOperator(ComplexMatrix::zero(dim));
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return matrix_.dim(); }
  Complex operator()(std::size_t r, std::size_t c) const { return matrix_(r, c); }
  double trace() const { return matrix_.trace().real(); }
  double max_norm() const { return matrix_.max_norm(); }

  /// Sums, differences and real scalings of Hermitian operators stay Hermitian
  /// exactly, so these skip the symmetrization pass.
  friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
    return HermitianOperator(a.matrix_ + b.matrix_, unchecked_tag{});
  }
  friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
    return HermitianOperator(a.matrix_ - b.matrix_, unchecked_tag{});
  }
  friend HermitianOperator operator*(double s, const HermitianOperator& a) {
    return HermitianOperator(Complex{s, 0.0} * a.matrix_, unchecked_tag{});
  }

  HermitianOperator& operator+=(const HermitianOperator& o) {
    matrix_ += o.matrix_;
    return *this;
  }

 private:
  struct unchecked_tag {};
  HermitianOperator(ComplexMatrix m, unchecked_tag) : matrix_(std::move(m)) {}

  ComplexMatrix matrix_;
};

inline double real_trace_product(const HermitianOperator& a, const HermitianOperator& b) {
  return real_trace_product(a.matrix(), b.matrix());
}

/// ||[A, B]||_max, the commutator max norm.
inline double commutator_norm(const HermitianOperator& a, const HermitianOperator& b) {
  const ComplexMatrix ab = a.matrix() * b.matrix();
  const ComplexMatrix ba = b.matrix() * a.matrix();
  return (ab - ba).max_norm();
}

}  // namespace qdet
