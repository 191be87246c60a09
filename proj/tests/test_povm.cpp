#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "qdet/bloch.hpp"
#include "qdet/povm.hpp"

using namespace qdet;

namespace {

const double kInvSqrt3 = 1.0 / std::sqrt(3.0);

Povm qubit_sic() {
  const BlochVector n[4] = {{kInvSqrt3, kInvSqrt3, kInvSqrt3},
                            {-kInvSqrt3, -kInvSqrt3, kInvSqrt3},
                            {-kInvSqrt3, kInvSqrt3, -kInvSqrt3},
                            {kInvSqrt3, -kInvSqrt3, -kInvSqrt3}};
  std::vector<HermitianOperator> elements;
  for (const auto& v : n)
    elements.emplace_back(Complex{0.25, 0.0} * identity_plus_bloch(v));
  return validate_povm(std::move(elements));
}

HermitianOperator diag_op(std::vector<double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return HermitianOperator(m);
}

}  // namespace

TEST_CASE("validate_povm", "[povm]") {
  SECTION("projective basis") {
    const Povm p = validate_povm({diag_op({1.0, 0.0}), diag_op({0.0, 1.0})});
    REQUIRE(p.size() == 2);
    REQUIRE(p.dim == 2);
  }
  SECTION("qubit SIC") {
    const Povm p = qubit_sic();
    REQUIRE(p.size() == 4);
    for (const auto& e : p.elements) REQUIRE(e.trace() == Catch::Approx(0.5).margin(1e-12));
  }
  SECTION("negative element is rejected with index and eigenvalue") {
    try {
      validate_povm({diag_op({1.2, 0.0}), diag_op({-0.2, 1.0})});
      FAIL("expected NotPositiveError");
    } catch (const NotPositiveError& e) {
      REQUIRE(e.index() == 2);
      REQUIRE(e.min_eigenvalue() == Catch::Approx(-0.2).margin(1e-9));
    }
  }
  SECTION("incomplete set is rejected") {
    REQUIRE_THROWS_AS(validate_povm({diag_op({0.5, 0.5})}), NotCompleteError);
  }
  SECTION("mixed dimensions are rejected") {
    REQUIRE_THROWS_AS(validate_povm({diag_op({1.0, 0.0}), diag_op({0.0, 1.0, 0.0})}),
                      DimMismatchError);
  }
}

TEST_CASE("born_matrix", "[povm]") {
  SECTION("perfectly correlated projective readout") {
    const Ensemble ens = validate_ensemble({diag_op({1.0, 0.0}), diag_op({0.0, 1.0})},
                                           {0.5, 0.5});
    const Povm p = validate_povm({diag_op({1.0, 0.0}), diag_op({0.0, 1.0})});
    const JointDistribution joint = born_matrix(ens, p);
    REQUIRE(joint.at(0, 0) == Catch::Approx(0.5).margin(1e-14));
    REQUIRE(joint.at(0, 1) == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(joint.at(1, 0) == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(joint.at(1, 1) == Catch::Approx(0.5).margin(1e-14));
  }
  SECTION("maximally mixed input spreads uniformly over the SIC") {
    const Ensemble ens = validate_ensemble({bloch_to_state({0, 0, 0})}, {1.0});
    const JointDistribution joint = born_matrix(ens, qubit_sic());
    for (std::size_t j = 0; j < 4; ++j)
      REQUIRE(joint.at(0, j) == Catch::Approx(0.25).margin(1e-12));
  }
  SECTION("agrees with Monte Carlo outcome frequencies within 4 sigma") {
    std::mt19937_64 rng(97);
    const Povm povm = qubit_sic();
    Ensemble ens;
    ens.states = {oracles::random_density(rng, 2), oracles::random_density(rng, 2),
                  oracles::random_density(rng, 2)};
    ens.priors = {0.2, 0.5, 0.3};
    const JointDistribution joint = born_matrix(ens, povm);

    constexpr int kSamples = 1'000'000;
    std::vector<double> outcome_probs;
    for (std::size_t i = 0; i < ens.size(); ++i)
      for (std::size_t j = 0; j < povm.size(); ++j) outcome_probs.push_back(joint.at(i, j));
    std::discrete_distribution<int> sampler(outcome_probs.begin(), outcome_probs.end());
    std::vector<int> counts(outcome_probs.size(), 0);
    for (int s = 0; s < kSamples; ++s) ++counts[static_cast<std::size_t>(sampler(rng))];
    for (std::size_t k = 0; k < outcome_probs.size(); ++k) {
      const double p = outcome_probs[k];
      const double sigma = std::sqrt(p * (1.0 - p) * kSamples);
      REQUIRE(std::abs(counts[k] - p * kSamples) <= 4.0 * sigma + 1.0);
    }
  }
  SECTION("total mass is one for random ensembles") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t d = 2 + trial % 3;
      const Povm povm = oracles::random_povm(rng, d, 2 + trial % 4);
      Ensemble ens;
      const std::size_t n = 2 + trial % 3;
      double left = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        ens.states.push_back(oracles::random_density(rng, d));
        const double w = (i + 1 == n) ? left : left * 0.5;
        ens.priors.push_back(w);
        left -= w;
      }
      REQUIRE(born_matrix(ens, povm).total() == Catch::Approx(1.0).margin(1e-10));
    }
  }
  SECTION("dimension mismatch") {
    const Ensemble ens = validate_ensemble({diag_op({0.5, 0.25, 0.25})}, {1.0});
    REQUIRE_THROWS_AS(born_matrix(ens, qubit_sic()), DimMismatchError);
  }
}

TEST_CASE("group_povm", "[povm]") {
  const Povm sic = qubit_sic();

  SECTION("pairwise grouping leaves two zero elements") {
    const Povm grouped = group_povm(sic, Grouping{{0, 0, 1, 1}, 4});
    REQUIRE(grouped.size() == 4);
    const ComplexMatrix e12 = sic.elements[0].matrix() + sic.elements[1].matrix();
    REQUIRE((grouped.elements[0].matrix() - e12).max_norm() < 1e-12);
    REQUIRE(grouped.elements[2].matrix().max_norm() == 0.0);
    REQUIRE(grouped.elements[3].matrix().max_norm() == 0.0);
  }
  SECTION("all outcomes to one label gives the trivial POVM") {
    const Povm grouped = group_povm(sic, Grouping{{0, 0, 0, 0}, 2});
    REQUIRE((grouped.elements[0].matrix() - ComplexMatrix::identity(2)).max_norm() < 1e-12);
    REQUIRE(grouped.elements[1].matrix().max_norm() == 0.0);
  }
  SECTION("identity grouping is a no-op") {
    const Povm grouped = group_povm(sic, Grouping{{0, 1, 2, 3}, 4});
    for (std::size_t j = 0; j < 4; ++j)
      REQUIRE((grouped.elements[j].matrix() - sic.elements[j].matrix()).max_norm() < 1e-14);
  }
  SECTION("label out of range") {
    REQUIRE_THROWS_AS(group_povm(sic, Grouping{{0, 1, 2, 4}, 4}), ValidationError);
  }
  SECTION("completeness preserved for random POVMs and groupings") {
    std::mt19937_64 rng(113);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t d = 2 + trial % 3;
      const std::size_t m = 2 + trial % 5;
      const Povm povm = oracles::random_povm(rng, d, m);
      const int labels = 1 + trial % 4;
      Grouping g{std::vector<int>(m), labels};
      for (auto& a : g.assignment)
        a = std::uniform_int_distribution<int>(0, labels - 1)(rng);
      const Povm grouped = group_povm(povm, g);  // validate_povm re-checks completeness
      REQUIRE(grouped.size() == static_cast<std::size_t>(labels));
    }
  }
}

TEST_CASE("enumerate_groupings", "[povm]") {
  SECTION("counts") {
    REQUIRE(enumerate_groupings(4, 4).count() == 256);
    REQUIRE(enumerate_groupings(1, 1).count() == 1);
    REQUIRE(enumerate_groupings(3, 2).count() == 8);
  }
  SECTION("exhaustive, duplicate-free, lexicographic") {
    std::set<std::vector<int>> seen;
    std::vector<int> previous;
    int n = 0;
    for (const Grouping& g : enumerate_groupings(3, 2)) {
      REQUIRE(seen.insert(g.assignment).second);
      if (n > 0) REQUIRE(previous < g.assignment);
      previous = g.assignment;
      ++n;
    }
    REQUIRE(n == 8);
  }
  SECTION("cap") {
    REQUIRE_THROWS_AS(enumerate_groupings(10, 6), CapExceededError);
    try {
      enumerate_groupings(10, 6);
    } catch (const CapExceededError& e) {
      REQUIRE(e.requested() == Catch::Approx(60466176.0));
    }
  }
}

TEST_CASE("probability clamp", "[povm]") {
  REQUIRE(clamp_probability(-5e-13, "test") == 0.0);
  REQUIRE(clamp_probability(0.25, "test") == 0.25);
  REQUIRE_THROWS_AS(clamp_probability(-1e-11, "test"), ValidationError);
}
