#pragma once

#include <cmath>
#include <string>

#include "qdet/complex_matrix.hpp"
#include "qdet/errors.hpp"

namespace qdet {

/// Real 3-vector parametrizing qubit operators via (I + v.sigma)/2.
struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
  BlochVector operator-() const { return {-x, -y, -z}; }
  BlochVector operator+(const BlochVector& o) const { return {x + o.x, y + o.y, z + o.z}; }
  BlochVector operator*(double s) const { return {s * x, s * y, s * z}; }
};

inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

inline ComplexMatrix pauli_y() {
  ComplexMatrix m(2);
  m(0, 1) = Complex{0.0, -1.0};
  m(1, 0) = Complex{0.0, 1.0};
  return m;
}

inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

/// I + v.sigma (unnormalized; callers scale by 1/2 for states, 1/4 for
/// SIC-type POVM elements).
inline ComplexMatrix identity_plus_bloch(const BlochVector& v) {
  ComplexMatrix m = ComplexMatrix::identity(2);
  m += Complex{v.x, 0.0} * pauli_x();
  m += Complex{v.y, 0.0} * pauli_y();
  m += Complex{v.z, 0.0} * pauli_z();
  return m;
}

/// rho = (I + v.sigma)/2. Valid qubit states need |v| <= 1.
inline HermitianOperator bloch_to_state(const BlochVector& v) {
  if (v.norm() > 1.0 + 1e-12)
    throw ValidationError("Bloch vector norm " + std::to_string(v.norm()) + " exceeds 1");
  return HermitianOperator(Complex{0.5, 0.0} * identity_plus_bloch(v));
}

inline BlochVector state_to_bloch(const HermitianOperator& rho) {
  if (rho.dim() != 2) throw DimMismatchError("Bloch coordinates require a qubit operator");
  return {real_trace_product(rho.matrix(), pauli_x()),
          real_trace_product(rho.matrix(), pauli_y()),
          real_trace_product(rho.matrix(), pauli_z())};
}

}  // namespace qdet
