#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "qdet/bloch.hpp"
#include "qdet/complex_matrix.hpp"
#include "qdet/errors.hpp"
#include "qdet/group_action.hpp"
#include "qdet/info.hpp"
#include "qdet/povm.hpp"

namespace qdet {

/// The four tetrahedral Bloch directions of the qubit SIC-POVM,
/// n_i . n_j = -1/3 for i != j.
inline std::array<BlochVector, 4> sic_bloch_vectors() {
  const double s = 1.0 / std::sqrt(3.0);
  return {BlochVector{s, s, s}, BlochVector{-s, -s, s}, BlochVector{-s, s, -s},
          BlochVector{s, -s, -s}};
}

/// Qubit SIC-POVM mixed with white noise: E_i(eps) = (I + eps n_i.sigma)/4.
/// eps = 1 is the ideal SIC, eps = 0 the trivial measurement {I/4,...}.
struct NoisySicQubit {
  double epsilon = 1.0;
  Povm povm;
  std::array<BlochVector, 4> bloch_vectors;
};

inline NoisySicQubit sic_qubit(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw ValidationError("sharpness parameter must lie in [0, 1], got " +
                          std::to_string(epsilon));
  NoisySicQubit sic;
  sic.epsilon = epsilon;
  sic.bloch_vectors = sic_bloch_vectors();
  std::vector<HermitianOperator> elements;
  for (const auto& n : sic.bloch_vectors)
    elements.emplace_back(Complex{0.25, 0.0} * identity_plus_bloch(n * epsilon));
  sic.povm = validate_povm(std::move(elements));
  return sic;
}

/// Uniform-prior minimum-error success probability of the noisy qubit SIC.
inline double analytic_min_error(std::size_t n_messages, double epsilon) {
  if (n_messages < 2) throw ValidationError("minimum-error formulas need N >= 2 messages");
  const double s3 = std::sqrt(3.0);
  if (n_messages == 2) return 0.5 + epsilon / (2.0 * s3);
  if (n_messages == 3) return 1.0 / 3.0 + epsilon * (1.0 + 1.0 / s3) / 6.0;
  return (1.0 + epsilon) / static_cast<double>(n_messages);
}

/// Closed-form gains of the three nontrivial ideal-SIC groupings at N = 3.
struct RegionGains {
  double b;
  double c;
  double d;
};

inline RegionGains analytic_region_values(double pi1, double pi2, double pi3) {
  (void)pi3;
  const double a = 1.0 / (2.0 * std::sqrt(3.0));
  return RegionGains{0.5 + a * pi1, (0.5 + a) * (pi1 + pi2), pi1 + 0.5 * pi2};
}

/// Prior pair where the three region gains coincide (the ideal-SIC junction).
inline std::pair<double, double> analytic_triple_point() {
  const double s3 = std::sqrt(3.0);
  return {2.0 * s3 - 3.0, 9.0 - 5.0 * s3};
}

/// Capacity of the noisy qubit SIC:
/// C_eps = 1 + (1-eps)/4 log2((1-eps)/2) + 3 (1+eps/3)/4 log2((1+eps/3)/2),
/// evaluated with the eta(0) = 0 convention so eps = 1 is exact.
inline double analytic_capacity(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw ValidationError("sharpness parameter must lie in [0, 1], got " +
                          std::to_string(epsilon));
  const double lo = (1.0 - epsilon) / 2.0;
  const double hi = (1.0 + epsilon / 3.0) / 2.0;
  double c = 1.0;
  if (lo > 0.0) c += (lo / 2.0) * std::log2(lo);
  c += 3.0 * (hi / 2.0) * std::log2(hi);
  return c;
}

/// The 12 rotations of the tetrahedron spanned by the SIC Bloch vectors,
/// generated from a vertex rotation and an edge-midpoint flip and closed
/// under multiplication, with their induced outcome permutations. Phases are
/// canonicalized so the projective closure has exactly 12 elements.
inline GroupAction tetrahedral_group() {
  const auto bloch = sic_bloch_vectors();
  const auto rotation_unitary = [](const BlochVector& axis, double angle) {
    const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
    ComplexMatrix u = ComplexMatrix::identity(2);
    u *= Complex{c, 0.0};
    ComplexMatrix axis_term = identity_plus_bloch(axis) - ComplexMatrix::identity(2);
    axis_term *= Complex{0.0, -s};
    u += axis_term;
    return u;
  };
  const auto canonical_phase = [](ComplexMatrix u) {
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        if (std::abs(u(i, j)) > 1e-9) {
          const Complex phase = u(i, j) / std::abs(u(i, j));
          u *= std::conj(phase);
          return u;
        }
    return u;
  };

  std::vector<ComplexMatrix> members{ComplexMatrix::identity(2)};
  std::vector<ComplexMatrix> generators{
      canonical_phase(rotation_unitary(bloch[0], 2.0 * M_PI / 3.0)),
      canonical_phase(rotation_unitary(BlochVector{0.0, 0.0, 1.0}, M_PI))};
  const auto contains = [&members](const ComplexMatrix& u) {
    for (const auto& m : members)
      if ((m - u).max_norm() < 1e-8) return true;
    return false;
  };
  for (std::size_t head = 0; head < members.size(); ++head) {
    for (const auto& g : generators) {
      const ComplexMatrix product = canonical_phase(g * members[head]);
      if (!contains(product)) members.push_back(product);
    }
  }

  const Povm sic = sic_qubit(1.0).povm;
  GroupAction action;
  action.identity_index = 0;
  for (const auto& u : members) {
    GroupElement element;
    element.unitary = u;
    element.antiunitary = false;
    element.permutation.resize(4, -1);
    for (std::size_t h = 0; h < 4; ++h) {
      const ComplexMatrix rotated = u * sic.elements[h].matrix() * u.adjoint();
      for (std::size_t j = 0; j < 4; ++j)
        if ((rotated - sic.elements[j].matrix()).max_norm() < 1e-8) {
          element.permutation[h] = static_cast<int>(j);
          break;
        }
      if (element.permutation[h] < 0)
        throw NumericalError(0.0, "tetrahedral rotation does not permute the SIC elements");
    }
    action.elements.push_back(std::move(element));
  }
  if (action.elements.size() != 12)
    throw NumericalError(static_cast<double>(action.elements.size()),
                         "tetrahedral closure produced " +
                             std::to_string(action.elements.size()) + " elements, expected 12");
  return action;
}

/// Pointwise verification of the quadratic under-estimator of h(eps t) used
/// in the capacity optimality proof, its anchor identities, and the
/// curvature bound gamma(eps) <= 0.
struct InequalityReport {
  bool passed = true;
  double min_gap = 0.0;      // min over the grid of h(eps t) - p_eps(t)
  double worst_t = 0.0;
  double anchor_residual = 0.0;
  double gamma = 0.0;
  std::string detail;
};

inline InequalityReport verify_capacity_inequality(double epsilon, int grid_points) {
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw ValidationError("inequality check needs 0 < eps <= 1");
  if (grid_points < 2) throw ValidationError("need at least two grid points");

  const auto h = [](double t) { return eta((1.0 + t) / 2.0); };
  const auto h_prime = [](double t) {
    // d/dt eta((1+t)/2), base-2 logs
    return -0.5 * std::log2((1.0 + t) / 2.0) - 0.5 / std::numbers::ln2;
  };

  const double hm = h(-epsilon);
  const double hp = h(epsilon / 3.0);
  const double hd = h_prime(epsilon / 3.0);
  const double a = (hm + 15.0 * hp - 4.0 * epsilon * hd) / 16.0;
  const double b = (-3.0 * hm + 3.0 * hp + 4.0 * epsilon * hd) / 8.0;
  const double c = 3.0 * (3.0 * hm - 3.0 * hp + 4.0 * epsilon * hd) / 16.0;
  const auto quad = [&](double t) { return a + b * t + c * t * t; };

  InequalityReport report;
  report.gamma = c + epsilon * epsilon / (4.0 * std::numbers::ln2);

  report.anchor_residual = std::max(
      {std::abs(quad(-1.0) - hm), std::abs(quad(1.0 / 3.0) - hp),
       std::abs((b + 2.0 * c / 3.0) - epsilon * hd)});

  report.min_gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid_points; ++k) {
    const double t = -1.0 + 2.0 * static_cast<double>(k) / (grid_points - 1);
    const double gap = h(epsilon * t) - quad(t);
    if (gap < report.min_gap) {
      report.min_gap = gap;
      report.worst_t = t;
    }
  }

  report.passed = report.min_gap >= -1e-12 && report.anchor_residual <= 1e-10 &&
                  report.gamma <= 1e-12;
  if (!report.passed)
    report.detail = "worst gap " + std::to_string(report.min_gap) + " at t = " +
                    std::to_string(report.worst_t) + ", anchor residual " +
                    std::to_string(report.anchor_residual) + ", gamma " +
                    std::to_string(report.gamma);
  return report;
}

}  // namespace qdet
