#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qdet/bloch.hpp"
#include "qdet/complex_matrix.hpp"
#include "qdet/eig.hpp"

using namespace qdet;

namespace {

const double kInvSqrt3 = 1.0 / std::sqrt(3.0);
const BlochVector kN1{kInvSqrt3, kInvSqrt3, kInvSqrt3};
const BlochVector kN2{-kInvSqrt3, -kInvSqrt3, kInvSqrt3};
const BlochVector kN3{-kInvSqrt3, kInvSqrt3, -kInvSqrt3};

HermitianOperator sic_element(const BlochVector& n) {
  return HermitianOperator(Complex{0.25, 0.0} * identity_plus_bloch(n));
}

HermitianOperator diag_op(std::vector<double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return HermitianOperator(m);
}

}  // namespace

TEST_CASE("eig_hermitian on simple spectra", "[eig]") {
  SECTION("identity") {
    const auto eig = eig_hermitian(HermitianOperator::identity(2));
    REQUIRE(eig.eigenvalues[0] == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(eig.eigenvalues[1] == Catch::Approx(1.0).margin(1e-14));
  }
  SECTION("already diagonal keeps basis order") {
    const auto eig = eig_hermitian(diag_op({3.0, -1.0}));
    REQUIRE(eig.eigenvalues[0] == Catch::Approx(3.0).margin(1e-14));
    REQUIRE(eig.eigenvalues[1] == Catch::Approx(-1.0).margin(1e-14));
    CHECK(std::abs(eig.eigenvectors(0, 0)) == Catch::Approx(1.0).margin(1e-12));
    CHECK(std::abs(eig.eigenvectors(1, 1)) == Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("rank-one SIC element has eigenvalues 1/2 and 0") {
    const auto eig = eig_hermitian(sic_element(kN1));
    REQUIRE(eig.eigenvalues[0] == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(eig.eigenvalues[1] == Catch::Approx(0.0).margin(1e-12));
  }
}

TEST_CASE("eig reconstruction and orthonormality over random matrices", "[eig][property]") {
  std::mt19937_64 rng(20260810);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 5);
    const HermitianOperator a(oracles::random_hermitian(rng, d));
    const auto eig = eig_hermitian(a);

    ComplexMatrix rebuilt(d);
    for (std::size_t k = 0; k < d; ++k) {
      const auto v = eig.eigenvector(k);
      ComplexMatrix term = outer_product(v, v);
      term *= Complex{eig.eigenvalues[k], 0.0};
      rebuilt += term;
    }
    rebuilt -= a.matrix();
    REQUIRE(rebuilt.max_norm() < 1e-9);

    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) {
        Complex dot{0.0, 0.0};
        for (std::size_t r = 0; r < d; ++r)
          dot += std::conj(eig.eigenvectors(r, i)) * eig.eigenvectors(r, j);
        const double expected = (i == j) ? 1.0 : 0.0;
        REQUIRE(std::abs(dot - expected) < 1e-9);
      }

    // eigen-residual ||A v - lambda v|| <= 1e-9 ||A||
    const double scale = a.matrix().frobenius_norm();
    for (std::size_t k = 0; k < d; ++k) {
      const auto v = eig.eigenvector(k);
      double res2 = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        Complex av{0.0, 0.0};
        for (std::size_t j = 0; j < d; ++j) av += a(i, j) * v[j];
        res2 += std::norm(av - eig.eigenvalues[k] * v[i]);
      }
      REQUIRE(std::sqrt(res2) <= 1e-9 * std::max(scale, 1e-30));
    }
  }
}

TEST_CASE("lambda_max", "[eig]") {
  SECTION("paired SIC elements") {
    const auto [value, vec] = lambda_max(sic_element(kN1) + sic_element(kN2));
    REQUIRE(value == Catch::Approx((1.0 + kInvSqrt3) / 2.0).margin(1e-12));
    REQUIRE(vec.size() == 2);
  }
  SECTION("zero matrix returns first basis vector by convention") {
    const auto [value, vec] = lambda_max(HermitianOperator::zero(3));
    REQUIRE(value == 0.0);
    REQUIRE(std::abs(vec[0]) == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(std::abs(vec[1]) == Catch::Approx(0.0).margin(1e-14));
  }
  SECTION("random 3x3 matches power iteration") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      const HermitianOperator a(oracles::random_hermitian(rng, 3));
      const double expected = oracles::power_iteration_lambda_max(a);
      REQUIRE(lambda_max(a).first == Catch::Approx(expected).margin(1e-8));
    }
  }
  SECTION("block-diagonal composition") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const HermitianOperator a(oracles::random_hermitian(rng, 2));
      const HermitianOperator b(oracles::random_hermitian(rng, 3));
      ComplexMatrix block(5);
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) block(i, j) = a(i, j);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) block(2 + i, 2 + j) = b(i, j);
      const double expected = std::max(lambda_max(a).first, lambda_max(b).first);
      REQUIRE(lambda_max(HermitianOperator(block)).first ==
              Catch::Approx(expected).margin(1e-10));
    }
  }
}

TEST_CASE("spread", "[eig]") {
  REQUIRE(spread(HermitianOperator::identity(4)) == Catch::Approx(0.0).margin(1e-14));
  REQUIRE(spread(sic_element(kN1) + sic_element(kN2)) ==
          Catch::Approx(kInvSqrt3).margin(1e-12));
  REQUIRE(spread(diag_op({0.9, 0.1, 0.5})) == Catch::Approx(0.8).margin(1e-14));

  SECTION("invariant under scalar shifts") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
      const HermitianOperator a(oracles::random_hermitian(rng, 4));
      const double c = std::uniform_real_distribution<double>(-5.0, 5.0)(rng);
      const HermitianOperator shifted = a + c * HermitianOperator::identity(4);
      REQUIRE(spread(shifted) == Catch::Approx(spread(a)).margin(1e-10));
    }
  }
}

TEST_CASE("kernel_projector", "[eig]") {
  SECTION("zero matrix gives identity projector") {
    const auto p = kernel_projector(HermitianOperator::zero(3));
    ComplexMatrix diff = p.matrix() - ComplexMatrix::identity(3);
    REQUIRE(diff.max_norm() < 1e-12);
  }
  SECTION("rank-one SIC element has the antipodal kernel") {
    const auto p = kernel_projector(sic_element(kN3));
    const HermitianOperator expected = bloch_to_state(-kN3);
    REQUIRE((p.matrix() - expected.matrix()).max_norm() < 1e-10);
  }
  SECTION("random rank-2 PSD 4x4") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 25; ++trial) {
      const auto u = oracles::random_unit_vector(rng, 4);
      const auto w = oracles::random_unit_vector(rng, 4);
      ComplexMatrix a = outer_product(u, u);
      a += outer_product(w, w);
      const HermitianOperator op(a);
      const auto p = kernel_projector(op);
      REQUIRE(projector_rank(p) == 2);
      const ComplexMatrix pap = p.matrix() * op.matrix() * p.matrix();
      REQUIRE(pap.max_norm() < 1e-8);
    }
  }
  SECTION("idempotent and Hermitian on random PSD inputs") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t d = 2 + static_cast<std::size_t>(trial % 4);
      const std::size_t rank = 1 + static_cast<std::size_t>(trial) % d;
      ComplexMatrix a(d);
      for (std::size_t r = 0; r < rank; ++r) {
        const auto u = oracles::random_unit_vector(rng, d);
        a += outer_product(u, u);
      }
      const auto p = kernel_projector(HermitianOperator(a));
      REQUIRE((p.matrix() * p.matrix() - p.matrix()).max_norm() < 1e-10);
      REQUIRE((p.matrix() - p.matrix().adjoint()).max_norm() < 1e-10);
    }
  }
  SECTION("full-rank input gives the zero projector") {
    const auto p = kernel_projector(HermitianOperator::identity(3));
    REQUIRE(p.matrix().max_norm() < 1e-12);
  }
}

TEST_CASE("Bloch conversions", "[bloch]") {
  SECTION("poles and center") {
    const auto north = bloch_to_state({0.0, 0.0, 1.0});
    REQUIRE(north(0, 0).real() == Catch::Approx(1.0));
    REQUIRE(north(1, 1).real() == Catch::Approx(0.0));
    const auto mixed = bloch_to_state({0.0, 0.0, 0.0});
    REQUIRE(mixed(0, 0).real() == Catch::Approx(0.5));
  }
  SECTION("SIC direction state overlaps its element at 1/2") {
    const auto rho = bloch_to_state(kN1);
    REQUIRE(real_trace_product(rho, sic_element(kN1)) == Catch::Approx(0.5).margin(1e-12));
  }
  SECTION("round trip") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      BlochVector v{uni(rng), uni(rng), uni(rng)};
      if (v.norm() > 1.0) {
        const double s = 0.999 / v.norm();
        v = v * s;
      }
      const BlochVector back = state_to_bloch(bloch_to_state(v));
      REQUIRE(std::abs(back.x - v.x) < 1e-12);
      REQUIRE(std::abs(back.y - v.y) < 1e-12);
      REQUIRE(std::abs(back.z - v.z) < 1e-12);
    }
  }
  SECTION("dimension and norm guards") {
    REQUIRE_THROWS_AS(state_to_bloch(HermitianOperator::identity(3)), DimMismatchError);
    REQUIRE_THROWS_AS(bloch_to_state({1.1, 0.0, 0.0}), ValidationError);
  }
}

TEST_CASE("Hermitization on construction", "[matrix]") {
  ComplexMatrix slightly_off(2);
  slightly_off(0, 0) = 1.0;
  slightly_off(0, 1) = Complex{0.5, 1e-11};
  slightly_off(1, 0) = Complex{0.5, 1e-11};  // conj would be -1e-11
  slightly_off(1, 1) = 2.0;
  const HermitianOperator fixed(slightly_off);
  REQUIRE(std::abs(fixed(0, 1) - std::conj(fixed(1, 0))) < 1e-16);

  ComplexMatrix broken(2);
  broken(0, 1) = 1.0;
  broken(1, 0) = 0.5;
  REQUIRE_THROWS_AS(HermitianOperator(broken), ValidationError);
}
