#pragma once

// Phase estimation: error propagation, shot-noise and Heisenberg scalings,
// Mandelstam-Tamm / Margolus-Levitin bounds, Monte Carlo experiments and
// the minimal phase shift that makes a state orthogonal to itself.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "qlitho/deposition.hpp"
#include "qlitho/errors.hpp"
#include "qlitho/fock.hpp"
#include "qlitho/numeric.hpp"
#include "qlitho/qubit.hpp"

namespace qlitho::estimation {

inline constexpr double kStationaryThreshold = 1e-12;

/// An observable X measured on a phase-dependent state, described only by
/// <X>(phi) and Var X(phi). An analytic derivative of the mean is optional.
struct Observable1D {
  std::function<double(double)> mean_fn;
  std::function<double(double)> variance_fn;
  std::optional<std::function<double(double)>> derivative_fn;
  std::string label;
};

/// Delta phi = Delta X / |d<X>/dphi|. Without an attached derivative the
/// slope is a central difference of step h.
inline double propagate_error(const Observable1D& obs, double phi, double h = 1e-6) {
  double slope = 0.0;
  if (obs.derivative_fn) {
    slope = (*obs.derivative_fn)(phi);
  } else {
    if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
    slope = (obs.mean_fn(phi + h) - obs.mean_fn(phi - h)) / (2.0 * h);
  }
  if (std::abs(slope) < kStationaryThreshold) {
    throw StationaryPoint("d<" + obs.label + ">/dphi vanishes at phi=" + format17(phi));
  }
  const double var = obs.variance_fn(phi);
  if (var < 0.0) throw InvalidArgument("observable variance is negative at phi=" + format17(phi));
  return std::sqrt(var) / std::abs(slope);
}

/// Sum of sigma_x over N independent single-party phase states.
inline Observable1D separable_observable(unsigned n) {
  if (n == 0) throw InvalidArgument("N must be >= 1");
  const double nn = n;
  return {
      [nn](double phi) { return nn * std::cos(phi); },
      [nn](double phi) { return nn * std::sin(phi) * std::sin(phi); },
      [nn](double phi) { return -nn * std::sin(phi); },
      "sigma_x^N",
  };
}

/// Sigma_N on the N-party GHZ (or NOON) state.
inline Observable1D entangled_observable(unsigned n) {
  if (n == 0) throw InvalidArgument("N must be >= 1");
  const double nn = n;
  return {
      [nn](double phi) { return std::cos(nn * phi); },
      [nn](double phi) { return std::sin(nn * phi) * std::sin(nn * phi); },
      [nn](double phi) { return -nn * std::sin(nn * phi); },
      "Sigma_N",
  };
}

/// Closed forms of the two scalings; valid at every phi including the
/// points where error propagation is formally 0/0.
inline double shot_noise_limit(unsigned n) { return 1.0 / std::sqrt(static_cast<double>(n)); }
inline double heisenberg_limit(unsigned n) { return 1.0 / static_cast<double>(n); }

/// Mandelstam-Tamm: Delta phi >= (pi/2) / Delta E, with Delta E in units of hbar*omega.
inline double mt_bound(double energy_spread) {
  if (!(energy_spread > 0.0)) throw InvalidArgument("energy spread must be positive");
  return 0.5 * kPi / energy_spread;
}

/// Margolus-Levitin: Delta phi >= (pi/2) / <n>.
inline double ml_bound(double mean_n) {
  if (!(mean_n > 0.0)) throw InvalidArgument("mean photon number must be positive");
  return 0.5 * kPi / mean_n;
}

struct PhotonStatistics {
  double mean = 0.0;
  double spread = 0.0;  ///< standard deviation, i.e. Delta E / (hbar omega)
};

/// Mean and spread of a photon-number distribution p[n].
inline PhotonStatistics photon_statistics(const std::vector<double>& p) {
  double total = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    if (p[n] < 0.0) throw InvalidArgument("negative probability");
    total += p[n];
    m1 += p[n] * static_cast<double>(n);
    m2 += p[n] * static_cast<double>(n) * static_cast<double>(n);
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("probabilities must sum to 1");
  return {m1, std::sqrt(std::max(0.0, m2 - m1 * m1))};
}

/// Poissonian statistics of a coherent state.
inline PhotonStatistics coherent_statistics(double mean_n) {
  if (!(mean_n > 0.0)) throw InvalidArgument("mean photon number must be positive");
  return {mean_n, std::sqrt(mean_n)};
}

/// Toy spectrum with a fixed mean and an arbitrarily large spread: weight
/// mean/k on |k>, the rest on the vacuum. Spread grows like sqrt(k), so
/// for large k the Mandelstam-Tamm bound drops below Margolus-Levitin.
inline std::vector<double> two_level_spectrum(double mean_n, unsigned k) {
  if (!(mean_n > 0.0) || k == 0 || mean_n > k) throw InvalidArgument("need 0 < mean <= k");
  std::vector<double> p(k + 1, 0.0);
  p[k] = mean_n / k;
  p[0] = 1.0 - p[k];
  return p;
}

enum class Method { analytic, monte_carlo };

inline const char* to_string(Method m) { return m == Method::analytic ? "analytic" : "monte_carlo"; }

struct Bounds {
  std::optional<double> mt;
  double ml = 0.0;
};

struct EstimationResult {
  double delta_phi = 0.0;
  Method method = Method::analytic;
  std::uint64_t trials = 0;
  double phi_true = 0.0;
  std::optional<std::uint64_t> seed;
  double phi_estimate = 0.0;  ///< arccos-inverted point estimate (Monte Carlo only)
  Bounds bounds;
};

enum class SchemeKind { separable, ghz, noon };

inline const char* to_string(SchemeKind k) {
  switch (k) {
    case SchemeKind::separable: return "separable";
    case SchemeKind::ghz: return "ghz";
    case SchemeKind::noon: return "noon";
  }
  return "?";
}

struct Scheme {
  SchemeKind kind = SchemeKind::separable;
  unsigned n = 1;

  static Scheme separable(unsigned n) { return {SchemeKind::separable, n}; }
  static Scheme ghz(unsigned n) { return {SchemeKind::ghz, n}; }
  static Scheme noon(unsigned n) { return {SchemeKind::noon, n}; }

  bool entangled() const { return kind != SchemeKind::separable; }
  /// Fringe frequency of one shot.
  double frequency() const { return entangled() ? static_cast<double>(n) : 1.0; }
  /// +-1 outcomes per repetition; every repetition consumes N parties/photons.
  unsigned shots_per_repetition() const { return entangled() ? 1 : n; }
};

inline constexpr std::uint64_t kMinTrials = 100;
inline constexpr std::uint64_t kRepetitionsPerBatch = 1000;
inline constexpr double kWindowMargin = 0.1;

struct PhaseWindow {
  double lo = 0.0;
  double hi = 0.0;
};

/// Range of phi where arccos inversion of the fringe is monotone.
inline PhaseWindow inversion_window(const Scheme& s) {
  const double nu = s.frequency();
  return {kWindowMargin / nu, (kPi - kWindowMargin) / nu};
}

/// Reference bounds for N resources, taking a coherent state with <n> = N.
inline Bounds coherent_bounds(unsigned n) {
  const auto stats = coherent_statistics(static_cast<double>(n));
  return {mt_bound(stats.spread), ml_bound(stats.mean)};
}

namespace detail {

struct BatchTally {
  std::int64_t count = 0;
  std::int64_t sum = 0;    // sum of repetition totals R
  std::int64_t sumsq = 0;  // sum of R^2
};

inline BatchTally run_batch(const Scheme& s, double p_plus, std::uint64_t reps, std::uint64_t seed) {
  SplitMix64 rng(seed);
  BatchTally t;
  const unsigned shots = s.shots_per_repetition();
  for (std::uint64_t r = 0; r < reps; ++r) {
    std::int64_t total = 0;
    for (unsigned k = 0; k < shots; ++k) total += rng.uniform() < p_plus ? 1 : -1;
    t.count += 1;
    t.sum += total;
    t.sumsq += total * total;
  }
  return t;
}

}  // namespace detail

/// Simulates `trials` repetitions of the scheme (each using N resources)
/// and reports the per-repetition phase error.
///
/// Each shot gives +1 with probability (1 + cos(nu phi))/2, nu = 1 for the
/// separable scheme (N shots per repetition) and nu = N for GHZ/NOON (one
/// N-party shot per repetition). The phase estimate inverts the pooled
/// sample mean through arccos; the error is the sample standard deviation
/// of the repetition total divided by the fringe slope at that estimate.
/// Batches of kRepetitionsPerBatch draw from substreams derived from
/// (seed, batch index) and are combined with exact integer sums.
inline EstimationResult monte_carlo_estimate(const Scheme& scheme, double phi_true, std::uint64_t trials,
                                             std::uint64_t seed) {
  if (scheme.n == 0) throw InvalidArgument("scheme needs N >= 1");
  if (trials < kMinTrials) {
    throw InsufficientTrials("need at least " + std::to_string(kMinTrials) + " trials, got " +
                             std::to_string(trials));
  }
  const auto window = inversion_window(scheme);
  if (!(phi_true >= window.lo && phi_true <= window.hi)) {
    throw WindowViolation("phi=" + format17(phi_true) + " outside inversion window [" + format17(window.lo) + ", " +
                          format17(window.hi) + "] for " + to_string(scheme.kind) + "(" +
                          std::to_string(scheme.n) + ")");
  }
  const double nu = scheme.frequency();
  const double p_plus = 0.5 * (1.0 + std::cos(nu * phi_true));

  detail::BatchTally acc;
  const std::uint64_t batches = (trials + kRepetitionsPerBatch - 1) / kRepetitionsPerBatch;
  for (std::uint64_t b = 0; b < batches; ++b) {
    const std::uint64_t reps = std::min(kRepetitionsPerBatch, trials - b * kRepetitionsPerBatch);
    const auto t = detail::run_batch(scheme, p_plus, reps, derive_seed(seed, b));
    acc.count += t.count;
    acc.sum += t.sum;
    acc.sumsq += t.sumsq;
  }

  const double shots = scheme.shots_per_repetition();
  const double count = static_cast<double>(acc.count);
  const double mean_r = static_cast<double>(acc.sum) / count;
  const double var_r =
      (static_cast<double>(acc.sumsq) - static_cast<double>(acc.sum) * mean_r) / (count - 1.0);
  const double fringe = std::clamp(mean_r / shots, -1.0, 1.0);
  const double phi_hat = std::acos(fringe) / nu;
  const double slope = shots * nu * std::sin(nu * phi_hat);
  if (std::abs(slope) < kStationaryThreshold) {
    throw StationaryPoint("sampled fringe landed on a stationary point; increase trials");
  }

  EstimationResult r;
  r.delta_phi = std::sqrt(std::max(0.0, var_r)) / std::abs(slope);
  r.method = Method::monte_carlo;
  r.trials = trials;
  r.phi_true = phi_true;
  r.seed = seed;
  r.phi_estimate = phi_hat;
  r.bounds = coherent_bounds(scheme.n);
  return r;
}

/// Analytic counterpart of monte_carlo_estimate.
inline EstimationResult analytic_estimate(const Scheme& scheme, double phi_true) {
  const Observable1D obs =
      scheme.entangled() ? entangled_observable(scheme.n) : separable_observable(scheme.n);
  EstimationResult r;
  r.delta_phi = propagate_error(obs, phi_true);
  r.method = Method::analytic;
  r.phi_true = phi_true;
  r.phi_estimate = phi_true;
  r.bounds = coherent_bounds(scheme.n);
  return r;
}

struct DistinguishOptions {
  double threshold = 1e-9;
  std::size_t scan_points = 4096;
};

/// Smallest shift delta in (0, 2 pi) with overlap_magnitude(delta) below
/// threshold. Local minima found on a uniform scan are refined by
/// golden-section search; the first one that dips below threshold wins.
inline double min_distinguishable_phase(const std::function<double(double)>& overlap_magnitude,
                                        const DistinguishOptions& opt = {}) {
  const std::size_t s = std::max<std::size_t>(opt.scan_points, 8);
  const double step = 2.0 * kPi / static_cast<double>(s);
  std::vector<double> mag(s + 1);
  for (std::size_t i = 1; i < s; ++i) mag[i] = overlap_magnitude(static_cast<double>(i) * step);
  mag[0] = mag[s] = std::numeric_limits<double>::infinity();

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (std::size_t i = 1; i < s; ++i) {
    if (!(mag[i] <= mag[i - 1] && mag[i] <= mag[i + 1])) continue;
    double a = static_cast<double>(i - 1) * step;
    double b = static_cast<double>(i + 1) * step;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = overlap_magnitude(c);
    double fd = overlap_magnitude(d);
    for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, b); ++it) {
      if (fc <= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = overlap_magnitude(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = overlap_magnitude(d);
      }
    }
    const double x = fc <= fd ? c : d;
    const double fx = std::min(fc, fd);
    if (fx < opt.threshold) return x;
  }
  throw NoOrthogonalState("overlap never falls below " + format17(opt.threshold) + " for shifts in (0, 2 pi)");
}

/// Fock-state family: |<psi(phi0)|psi(phi0 + delta)>|.
inline double min_distinguishable_phase(const deposition::StateFamily& family, double phi0,
                                        const DistinguishOptions& opt = {}) {
  const fock::FockState ref = family(phi0);
  return min_distinguishable_phase(
      [&](double delta) { return std::abs(fock::overlap(ref, family(phi0 + delta))); }, opt);
}

/// Qubit family of the same form and size as `reference`.
inline double min_distinguishable_phase(const qubit::QubitPhaseState& reference,
                                        const DistinguishOptions& opt = {}) {
  auto shifted = [&](double delta) {
    const double phi = reference.phi() + delta;
    return reference.form() == qubit::Form::ghz ? qubit::QubitPhaseState::ghz(reference.n_parties(), phi)
                                                : qubit::QubitPhaseState::product(reference.n_parties(), phi);
  };
  return min_distinguishable_phase(
      [&](double delta) { return std::abs(qubit::overlap(reference, shifted(delta))); }, opt);
}

struct ScalingRow {
  unsigned n = 0;
  double analytic_separable = 0.0;
  double analytic_entangled = 0.0;
  double mc_separable = 0.0;
  double mc_entangled = 0.0;
  double mt = 0.0;
  double ml = 0.0;
};

/// Separable vs GHZ error for each N. `phi` is the separable working point;
/// the entangled scheme runs at phi/N, the same point on its N-fold faster
/// fringe. Bounds are those of a coherent state with <n> = N.
inline std::vector<ScalingRow> scaling_sweep(const std::vector<unsigned>& ns, double phi, std::uint64_t trials,
                                             std::uint64_t seed) {
  std::vector<ScalingRow> rows;
  rows.reserve(ns.size());
  for (unsigned n : ns) {
    if (n == 0) throw InvalidArgument("N must be >= 1");
    ScalingRow r;
    r.n = n;
    const double phi_ent = phi / static_cast<double>(n);
    r.analytic_separable = propagate_error(separable_observable(n), phi);
    r.analytic_entangled = propagate_error(entangled_observable(n), phi_ent);
    r.mc_separable = monte_carlo_estimate(Scheme::separable(n), phi, trials, derive_seed(seed, 2ULL * n)).delta_phi;
    r.mc_entangled = monte_carlo_estimate(Scheme::ghz(n), phi_ent, trials, derive_seed(seed, 2ULL * n + 1)).delta_phi;
    const auto b = coherent_bounds(n);
    r.mt = *b.mt;
    r.ml = b.ml;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace qlitho::estimation
