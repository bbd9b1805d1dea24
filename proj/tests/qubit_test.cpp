#include "qlitho/qubit.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "oracle.hpp"

using namespace qlitho;
using namespace qlitho::qubit;

TEST(QubitPhaseState, PartyRange) {
  EXPECT_THROW(QubitPhaseState::ghz(0, 0.1), InvalidArgument);
  EXPECT_THROW(QubitPhaseState::product(25, 0.1), InvalidArgument);
  EXPECT_NO_THROW(QubitPhaseState::product(24, 0.1));
}

TEST(SigmaX, Statistics) {
  const auto eig = sigma_x_statistics(QubitPhaseState::product(10, 0.0));
  EXPECT_EQ(eig.mean, 10.0);
  EXPECT_EQ(eig.variance, 0.0);

  const auto quarter = sigma_x_statistics(M_PI / 2, 4);
  EXPECT_NEAR(quarter.mean, 0.0, 1e-15);
  EXPECT_NEAR(quarter.variance, 4.0, 1e-15);

  for (double phi : {0.2, 1.0, 2.5}) EXPECT_NEAR(sigma_x_statistics(phi, 7).mean, 7.0 * std::cos(phi), 1e-14);
  EXPECT_THROW(sigma_x_statistics(0.1, 0), InvalidArgument);
  EXPECT_THROW(sigma_x_statistics(QubitPhaseState::ghz(3, 0.1)), WrongForm);
}

TEST(SigmaN, Expectation) {
  EXPECT_EQ(sigma_N_expectation(QubitPhaseState::ghz(5, 0.0)), 1.0);
  EXPECT_NEAR(sigma_N_expectation(QubitPhaseState::ghz(2, M_PI / 4)), 0.0, 1e-15);
  EXPECT_THROW(sigma_N_expectation(QubitPhaseState::product(2, 0.1)), WrongForm);
}

TEST(SigmaN, IsSingleQubitMeanAtScaledPhase) {
  for (unsigned n = 1; n <= 24; ++n) {
    for (double phi : {0.0, 0.13, 0.9, 2.2}) {
      EXPECT_EQ(sigma_N_expectation(QubitPhaseState::ghz(n, phi)), sigma_x_statistics(n * phi, 1).mean);
    }
  }
}

TEST(SigmaN, MatchesDenseGhzVector) {
  for (unsigned n = 1; n <= 8; ++n) {
    const double phi = 0.31;
    const auto v = to_dense(QubitPhaseState::ghz(n, phi));
    const auto r = oracle::project_and_measure(v);
    EXPECT_NEAR(r.success, 1.0, 1e-14);
    EXPECT_NEAR(r.conditional_expectation, sigma_N_expectation(QubitPhaseState::ghz(n, phi)), 1e-14);
  }
}

TEST(Loss, MixtureOnSurvivors) {
  const auto rho = lose_parties(QubitPhaseState::ghz(3, 0.7), 1);
  EXPECT_EQ(rho.surviving(), 2u);
  const auto d = rho.diagonal();
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].first, 0u);
  EXPECT_EQ(d[1].first, 3u);
  EXPECT_EQ(d[0].second, 0.5);
  EXPECT_EQ(d[1].second, 0.5);
  EXPECT_EQ(rho.trace(), 1.0);
}

TEST(Loss, PhaseIndependentBitwise) {
  for (unsigned n = 2; n <= 10; ++n) {
    for (unsigned lost = 1; lost < n; ++lost) {
      const auto a = lose_parties(QubitPhaseState::ghz(n, 0.3), lost);
      const auto b = lose_parties(QubitPhaseState::ghz(n, 2.9), lost);
      EXPECT_EQ(a, b);
      EXPECT_EQ(a.record(), b.record());
      const auto da = a.outcome_distribution();
      const auto db = b.outcome_distribution();
      EXPECT_EQ(0, std::memcmp(da.data(), db.data(), da.size() * sizeof(double)));
    }
  }
}

TEST(Loss, PreconditionsAndForm) {
  EXPECT_THROW(lose_parties(QubitPhaseState::ghz(3, 0.1), 0), InvalidArgument);
  EXPECT_THROW(lose_parties(QubitPhaseState::ghz(3, 0.1), 3), InvalidArgument);
  EXPECT_THROW(lose_parties(QubitPhaseState::product(3, 0.1), 1), WrongForm);
}

TEST(SeparableTrick, SinglePartySpansEverything) {
  const auto r = separable_trick(1, 0.4);
  EXPECT_EQ(r.success_probability, 1.0);
  EXPECT_NEAR(r.expectation, std::cos(0.4), 1e-15);
}

TEST(SeparableTrick, ThreePartySuccess) {
  const auto dense = oracle::project_and_measure(oracle::product_state(3, 0.0));
  EXPECT_NEAR(dense.success, 0.25, 1e-15);
  EXPECT_EQ(separable_trick(3, 0.0).success_probability, 0.25);
}

TEST(SeparableTrick, FourPartyConditionalExpectation) {
  const auto dense = oracle::project_and_measure(oracle::product_state(4, 0.2));
  EXPECT_NEAR(dense.conditional_expectation, std::cos(0.8), 1e-14);
  EXPECT_NEAR(separable_trick(4, 0.2).expectation, dense.conditional_expectation, 1e-14);
}

TEST(SeparableTrick, ExactPowerOfTwo) {
  for (unsigned m = 1; m <= 24; ++m) {
    EXPECT_EQ(std::ldexp(separable_trick(m, 0.5).success_probability, static_cast<int>(m) - 1), 1.0);
  }
  EXPECT_THROW(separable_trick(0, 0.1), InvalidArgument);
  EXPECT_THROW(separable_trick(25, 0.1), InvalidArgument);
}

TEST(SeparableTrick, DenseOracleEquivalence) {
  for (unsigned m = 1; m <= 10; ++m) {
    for (double phi : {0.0, 0.21, 1.3, 2.8}) {
      const auto dense = oracle::project_and_measure(oracle::product_state(m, phi));
      const auto fast = separable_trick(m, phi);
      EXPECT_NEAR(fast.success_probability, dense.success, 1e-12);
      EXPECT_NEAR(fast.expectation, dense.conditional_expectation, 1e-12);
    }
  }
}

TEST(ToDense, ProductMatchesKroneckerOracle) {
  for (unsigned m = 1; m <= 6; ++m) {
    const auto a = to_dense(QubitPhaseState::product(m, 0.77));
    const auto b = oracle::product_state(m, 0.77);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(std::abs(a[i] - b[i]), 0.0, 1e-15);
  }
}

TEST(Overlap, SymbolicMatchesDense) {
  auto dense_overlap = [](const QubitPhaseState& x, const QubitPhaseState& y) {
    const auto vx = to_dense(x);
    const auto vy = to_dense(y);
    std::complex<double> s{};
    for (std::size_t i = 0; i < vx.size(); ++i) s += std::conj(vx[i]) * vy[i];
    return s;
  };
  for (unsigned n : {1u, 3u, 6u}) {
    const auto g0 = QubitPhaseState::ghz(n, 0.2), g1 = QubitPhaseState::ghz(n, 1.1);
    const auto p0 = QubitPhaseState::product(n, 0.4), p1 = QubitPhaseState::product(n, -0.5);
    for (auto [x, y] : {std::pair{g0, g1}, std::pair{p0, p1}, std::pair{g0, p1}, std::pair{p0, g1}}) {
      EXPECT_NEAR(std::abs(overlap(x, y) - dense_overlap(x, y)), 0.0, 1e-14);
    }
  }
}

TEST(Fisher, LossyStateCarriesNoInformation) {
  for (double phi : {0.0, 0.4, 2.0}) {
    const auto rho = lose_parties(QubitPhaseState::ghz(4, phi), 2);
    EXPECT_EQ(fisher_information(rho, phi).value, 0.0);
    // Going through the full phi -> state pipeline gives the same exact zero.
    const auto fi = fisher_information(
        [](double p) { return lose_parties(QubitPhaseState::ghz(4, p), 2).outcome_distribution(); }, phi);
    EXPECT_EQ(fi.value, 0.0);
    EXPECT_FALSE(fi.degenerate);
  }
}

TEST(Fisher, SingleQubitIsOne) {
  const auto fi = fisher_information(sigma_x_distribution, M_PI / 4, 1e-5);
  EXPECT_NEAR(fi.value, 1.0, 1e-4);
  EXPECT_FALSE(fi.degenerate);
}

TEST(Fisher, GhzScalesAsNSquared) {
  for (unsigned n = 1; n <= 12; ++n) {
    const auto fi = fisher_information(sigma_N_distribution(n), M_PI / (4.0 * n));
    EXPECT_NEAR(fi.value / (n * n), 1.0, 1e-6) << n;
  }
}

TEST(Fisher, FlagsVanishingProbabilities) {
  const auto fi = fisher_information(sigma_x_distribution, 0.0);
  EXPECT_TRUE(fi.degenerate);
  EXPECT_THROW(fisher_information(sigma_x_distribution, 0.3, 0.0), InvalidArgument);
}
