#include "qlitho/estimation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numeric>

using namespace qlitho;
using namespace qlitho::estimation;

TEST(PropagateError, ShotNoise) {
  const double phi = M_PI / 3;
  for (unsigned n : {1u, 2u, 10u, 100u, 1000u}) {
    EXPECT_NEAR(propagate_error(separable_observable(n), phi), 1.0 / std::sqrt(n), 1e-12);
  }
  EXPECT_NEAR(propagate_error(separable_observable(100), M_PI / 3), 0.1, 1e-15);
}

TEST(PropagateError, Heisenberg) {
  for (unsigned n : {1u, 3u, 16u, 1000u}) {
    EXPECT_NEAR(propagate_error(entangled_observable(n), M_PI / (3.0 * n)), 1.0 / n, 1e-12);
  }
}

TEST(PropagateError, StationaryPointIsAnError) {
  Observable1D cosine{[](double p) { return std::cos(p); }, [](double p) { return std::sin(p) * std::sin(p); },
                      std::nullopt, "cos"};
  EXPECT_THROW(propagate_error(cosine, 0.0), StationaryPoint);
  EXPECT_THROW(propagate_error(separable_observable(5), 0.0), StationaryPoint);
  EXPECT_THROW(propagate_error(entangled_observable(4), M_PI / 4), StationaryPoint);
}

TEST(PropagateError, FiniteDifferenceAgreesWithAnalyticSlope) {
  Observable1D numeric = separable_observable(9);
  numeric.derivative_fn.reset();
  for (double phi : {0.3, 1.2, 2.6}) {
    EXPECT_NEAR(propagate_error(numeric, phi), 1.0 / 3.0, 1e-7);
  }
}

TEST(PropagateError, ScalingInvariantsAcrossPhases) {
  // Sampled version of the "for all N <= 1e6, phi in (0, pi)" properties.
  for (unsigned n : {1u, 7u, 64u, 999u, 12345u, 1000000u}) {
    for (int k = 1; k < 50; ++k) {
      const double phi = M_PI * k / 50.0;
      EXPECT_NEAR(propagate_error(separable_observable(n), phi), shot_noise_limit(n), 1e-12);
      const double s = std::sin(n * phi);
      if (std::abs(s) < 1e-6) continue;  // Sigma_N stationary points
      EXPECT_NEAR(propagate_error(entangled_observable(n), phi), heisenberg_limit(n), 1e-12 * std::max(1.0, 1.0 / (n * std::abs(s))));
    }
  }
}

TEST(Bounds, MandelstamTamm) {
  EXPECT_NEAR(mt_bound(std::sqrt(4.0)), M_PI / 4, 1e-12);
  EXPECT_NEAR(mt_bound(1.0), M_PI / 2, 1e-15);
  double prev = mt_bound(0.5);
  for (double e = 1.0; e < 1e8; e *= 3.0) {
    const double b = mt_bound(e);
    EXPECT_LT(b, prev);
    prev = b;
  }
  EXPECT_THROW(mt_bound(0.0), InvalidArgument);
  EXPECT_THROW(mt_bound(-1.0), InvalidArgument);
}

TEST(Bounds, MargolusLevitin) {
  EXPECT_NEAR(ml_bound(4.0), M_PI / 8, 1e-12);
  EXPECT_NEAR(ml_bound(1.0), M_PI / 2, 1e-15);
  EXPECT_THROW(ml_bound(0.0), InvalidArgument);
}

TEST(Bounds, CoherentOrdering) {
  for (double n = 1.0; n <= 1e6; n *= 1.37) {
    const auto st = coherent_statistics(n);
    EXPECT_LE(ml_bound(st.mean), mt_bound(st.spread));
  }
}

TEST(Bounds, PathologicalSpectrumMakesMlBind) {
  // Finite mean, growing spread: Mandelstam-Tamm loosens, Margolus-Levitin does not.
  const double mean = 2.0;
  const auto small = photon_statistics(two_level_spectrum(mean, 4));
  const auto large = photon_statistics(two_level_spectrum(mean, 10000));
  EXPECT_NEAR(small.mean, mean, 1e-12);
  EXPECT_NEAR(large.mean, mean, 1e-12);
  EXPECT_GT(large.spread, 10.0 * small.spread);
  EXPECT_GT(ml_bound(large.mean), mt_bound(large.spread));
  EXPECT_THROW(two_level_spectrum(5.0, 2), InvalidArgument);
}

TEST(MonteCarlo, SeparableHundredPartiesShotNoise) {
  const auto r = monte_carlo_estimate(Scheme::separable(100), M_PI / 3, 100000, 7);
  EXPECT_EQ(r.method, Method::monte_carlo);
  EXPECT_EQ(r.trials, 100000u);
  ASSERT_TRUE(r.seed.has_value());
  EXPECT_EQ(*r.seed, 7u);
  EXPECT_NEAR(r.delta_phi / 0.1, 1.0, 0.05);
  EXPECT_NEAR(r.phi_estimate, M_PI / 3, 0.01);
}

TEST(MonteCarlo, GhzReachesHeisenbergScaling) {
  const unsigned n = 10;
  const auto ghz = monte_carlo_estimate(Scheme::ghz(n), M_PI / 30, 100000, 3);
  const auto sep = monte_carlo_estimate(Scheme::separable(n), M_PI / 3, 100000, 4);
  EXPECT_NEAR(ghz.delta_phi / 0.1, 1.0, 0.05);
  EXPECT_NEAR((ghz.delta_phi / sep.delta_phi) * std::sqrt(n), 1.0, 0.1);
  const auto noon = monte_carlo_estimate(Scheme::noon(n), M_PI / 30, 100000, 3);
  EXPECT_EQ(noon.delta_phi, ghz.delta_phi);  // same statistics, same stream
}

TEST(MonteCarlo, WindowAndTrialChecks) {
  EXPECT_THROW(monte_carlo_estimate(Scheme::separable(4), 0.05, 1000, 1), WindowViolation);
  EXPECT_THROW(monte_carlo_estimate(Scheme::separable(4), M_PI - 0.05, 1000, 1), WindowViolation);
  EXPECT_THROW(monte_carlo_estimate(Scheme::ghz(4), M_PI / 3, 1000, 1), WindowViolation);
  EXPECT_NO_THROW(monte_carlo_estimate(Scheme::ghz(4), 0.1 / 4, 1000, 1));
  EXPECT_THROW(monte_carlo_estimate(Scheme::separable(4), 1.0, 99, 1), InsufficientTrials);
}

TEST(MonteCarlo, SeedDeterminism) {
  const auto a = monte_carlo_estimate(Scheme::separable(8), 1.0, 5000, 42);
  const auto b = monte_carlo_estimate(Scheme::separable(8), 1.0, 5000, 42);
  const auto c = monte_carlo_estimate(Scheme::separable(8), 1.0, 5000, 43);
  EXPECT_EQ(0, std::memcmp(&a.delta_phi, &b.delta_phi, sizeof(double)));
  EXPECT_EQ(0, std::memcmp(&a.phi_estimate, &b.phi_estimate, sizeof(double)));
  EXPECT_NE(a.delta_phi, c.delta_phi);
}

TEST(MonteCarlo, ErrorShrinksAsInverseSqrtTrials) {
  // Mean absolute deviation from the analytic value, averaged over seeds,
  // regressed on log(trials).
  const std::vector<std::uint64_t> trials{1000, 10000, 100000};
  const unsigned n = 4;
  const double phi = 1.0;
  std::vector<double> lx, ly;
  for (auto t : trials) {
    double acc = 0.0;
    const int seeds = 48;
    for (int s = 0; s < seeds; ++s) {
      acc += std::abs(monte_carlo_estimate(Scheme::separable(n), phi, t, 1000 + s).delta_phi - shot_noise_limit(n));
    }
    lx.push_back(std::log(static_cast<double>(t)));
    ly.push_back(std::log(acc / seeds));
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  EXPECT_NEAR(sxy / sxx, -0.5, 0.1);
}

TEST(Distinguishability, NoonAndGhzReachPiOverN) {
  for (unsigned n = 1; n <= 10; ++n) {
    EXPECT_NEAR(min_distinguishable_phase(deposition::noon_family(n), 0.0), M_PI / n, 1e-9) << n;
    EXPECT_NEAR(min_distinguishable_phase(qubit::QubitPhaseState::ghz(n, 0.0)), M_PI / n, 1e-9) << n;
  }
  // Reference point does not matter for these families.
  EXPECT_NEAR(min_distinguishable_phase(deposition::noon_family(3), 0.9), M_PI / 3, 1e-9);
}

TEST(Distinguishability, SingleQuantumNeedsCrestToTrough) {
  EXPECT_NEAR(min_distinguishable_phase(deposition::noon_family(1), 0.0), M_PI, 1e-9);
}

TEST(Distinguishability, ConstantFamilyNeverOrthogonal) {
  EXPECT_THROW(min_distinguishable_phase([](double) { return 1.0; }), NoOrthogonalState);
  // Two-photon branch |1,1> only picks up a global phase.
  EXPECT_THROW(min_distinguishable_phase(deposition::psi_nm_family(2, 1), 0.0), NoOrthogonalState);
}

TEST(ScalingSweep, SingleQuantumDegeneracy) {
  const auto rows = scaling_sweep({1}, M_PI / 3, 1000, 7);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].analytic_separable, 1.0);
  EXPECT_EQ(rows[0].analytic_entangled, 1.0);
  EXPECT_NEAR(rows[0].mt, M_PI / 2, 1e-15);
  EXPECT_NEAR(rows[0].ml, M_PI / 2, 1e-15);
}
