#pragma once

// Inverse pattern synthesis: choose the coefficients alpha_m of the fixed-N
// superposition sum_m alpha_m |psi_Nm> so that its deposition pattern
// matches a target exposure profile up to an overall scale.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "qlitho/deposition.hpp"
#include "qlitho/errors.hpp"
#include "qlitho/fock.hpp"
#include "qlitho/numeric.hpp"

namespace qlitho::synth {

using Complex = std::complex<double>;

inline unsigned coefficient_count(unsigned n) { return n / 2 + 1; }

/// <e^d psi_m | e^d psi_m'> / d! over a phase grid, for m < m'.
struct CrossKernel {
  unsigned m = 0;
  unsigned mp = 0;
  std::vector<Complex> values;
};

/// Everything needed to evaluate the pattern of any superposition as the
/// quadratic form alpha^dag K(phi) alpha without touching the Fock engine.
struct PatternBasis {
  unsigned n = 0;
  unsigned dose_order = 0;
  std::vector<double> grid;
  std::vector<deposition::DepositionPattern> diagonal;  ///< pattern of each |psi_Nm>
  std::vector<CrossKernel> cross;

  unsigned size() const { return static_cast<unsigned>(diagonal.size()); }

  /// Pattern values of the (normalized) coefficient vector alpha.
  std::vector<double> evaluate(std::span<const Complex> alpha) const {
    std::vector<double> out(grid.size(), 0.0);
    evaluate_into(alpha, out);
    return out;
  }

  void evaluate_into(std::span<const Complex> alpha, std::vector<double>& out) const {
    if (alpha.size() != diagonal.size()) throw InvalidArgument("coefficient count does not match basis");
    out.assign(grid.size(), 0.0);
    for (std::size_t m = 0; m < diagonal.size(); ++m) {
      const double w = std::norm(alpha[m]);
      const auto& d = diagonal[m].values;
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * d[i];
    }
    for (const auto& c : cross) {
      const Complex w = 2.0 * std::conj(alpha[c.m]) * alpha[c.mp];
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] += w.real() * c.values[i].real() - w.imag() * c.values[i].imag();
      }
    }
  }
};

inline PatternBasis pattern_basis(unsigned n, const std::vector<double>& phi_grid, unsigned dose_order = 0) {
  if (n == 0) throw InvalidArgument("N must be >= 1");
  if (dose_order == 0) dose_order = n;
  const unsigned k = coefficient_count(n);
  PatternBasis basis;
  basis.n = n;
  basis.dose_order = dose_order;
  basis.grid = phi_grid;
  basis.diagonal.resize(k);
  for (unsigned m = 0; m < k; ++m) {
    basis.diagonal[m].abscissa = phi_grid;
    basis.diagonal[m].dose_order = dose_order;
    basis.diagonal[m].abscissa_kind = deposition::AbscissaKind::phase;
    basis.diagonal[m].values.reserve(phi_grid.size());
  }
  for (unsigned m = 0; m < k; ++m) {
    for (unsigned mp = m + 1; mp < k; ++mp) basis.cross.push_back({m, mp, {}});
  }
  const double inv_fact = 1.0 / factorial(dose_order);
  std::vector<fock::FockState> lowered(k);
  for (double phi : phi_grid) {
    for (unsigned m = 0; m < k; ++m) {
      lowered[m] = fock::apply_operator({fock::ModeOp::annihilate_e, dose_order}, fock::make_psi_nm(n, m, phi));
      basis.diagonal[m].values.push_back(lowered[m].norm_squared() * inv_fact);
    }
    for (auto& c : basis.cross) c.values.push_back(fock::overlap(lowered[c.m], lowered[c.mp]) * inv_fact);
  }
  for (auto& d : basis.diagonal) {
    d.maxima_count = deposition::maxima_per_period(d.abscissa, d.values, 2.0 * kPi);
  }
  return basis;
}

struct SynthesisProblem {
  unsigned n = 0;
  std::vector<double> grid;    ///< phase samples on one 2 pi period
  std::vector<double> target;  ///< non-negative exposure profile on `grid`
  unsigned dose_order = 0;     ///< 0 means N
  unsigned max_iterations = 20000;
  double tolerance = 1e-10;
  unsigned starts = 16;

  unsigned effective_dose() const { return dose_order == 0 ? n : dose_order; }
  bool nonstandard_dose() const { return effective_dose() != n; }

  void validate() const {
    if (n == 0) throw InvalidArgument("N must be >= 1");
    if (grid.size() != target.size()) throw InvalidArgument("grid and target differ in length");
    if (grid.size() < 4 * static_cast<std::size_t>(n) + 1) {
      throw InvalidArgument("grid needs at least 4N+1 = " + std::to_string(4 * n + 1) + " samples, got " +
                            std::to_string(grid.size()));
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (!(grid[i] > grid[i - 1])) throw InvalidArgument("grid must be strictly increasing");
    }
    if (grid.back() - grid.front() >= 2.0 * kPi) throw InvalidArgument("grid must lie within one 2 pi period");
    for (double t : target) {
      if (!(t >= 0.0)) throw InvalidArgument("target values must be non-negative");
    }
    if (starts == 0) throw InvalidArgument("need at least one optimizer start");
    if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  }
};

struct SynthesisSolution {
  std::vector<Complex> coefficients;  ///< normalized, alpha_0 real and non-negative
  double residual = 0.0;              ///< RMS deviation after the optimal global scale
  double scale = 0.0;                 ///< that scale: target ~ scale * achieved
  deposition::DepositionPattern achieved;
  unsigned iterations = 0;
  unsigned best_start = 0;
  bool converged = true;
  bool nonstandard_dose = false;
};

struct Fit {
  double residual = 0.0;
  double scale = 0.0;
};

/// RMS of (scale * pattern - target) at the least-squares scale (clamped at 0).
inline Fit scaled_fit(std::span<const double> pattern, std::span<const double> target) {
  double tp = 0.0, pp = 0.0;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    tp += target[i] * pattern[i];
    pp += pattern[i] * pattern[i];
  }
  const double s = pp > 0.0 ? std::max(0.0, tp / pp) : 0.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const double d = s * pattern[i] - target[i];
    ss += d * d;
  }
  return {std::sqrt(ss / static_cast<double>(pattern.size())), s};
}

/// Rotates alpha so that its first non-negligible entry (alpha_0 when it
/// is nonzero) is real and non-negative.
inline std::vector<Complex> fix_gauge(std::vector<Complex> alpha) {
  for (const Complex& a : alpha) {
    if (std::abs(a) > 1e-12) {
      const Complex rot = std::conj(a) / std::abs(a);
      for (Complex& b : alpha) b *= rot;
      break;
    }
  }
  return alpha;
}

namespace detail {

inline std::vector<Complex> to_alpha(std::span<const double> x) {
  double nrm = 0.0;
  for (double v : x) nrm += v * v;
  nrm = std::sqrt(nrm);
  std::vector<Complex> a(x.size() / 2);
  for (std::size_t m = 0; m < a.size(); ++m) a[m] = Complex(x[2 * m], x[2 * m + 1]) / nrm;
  return a;
}

struct Descent {
  std::vector<double> x;
  double f = std::numeric_limits<double>::infinity();
  unsigned iterations = 0;
  bool converged = false;
};

/// Nelder-Mead on f, restarted from the incumbent until a restart stops
/// improving by more than `tol` (relative to max(f, tol)).
template <class F>
Descent nelder_mead(F&& f, std::vector<double> x0, double step, double tol, unsigned max_iter) {
  const std::size_t dim = x0.size();
  Descent out;
  out.x = x0;
  out.f = f(x0);

  auto converged_spread = [tol](double lo, double hi) { return hi - lo <= tol * std::max(lo, tol); };

  double restart_step = step;
  while (true) {
    std::vector<std::vector<double>> pts(dim + 1, out.x);
    std::vector<double> vals(dim + 1);
    vals[0] = out.f;
    for (std::size_t j = 0; j < dim; ++j) {
      pts[j + 1][j] += restart_step;
      vals[j + 1] = f(pts[j + 1]);
    }
    const double start_f = out.f;
    bool inner_converged = false;
    std::vector<std::size_t> order(dim + 1);
    std::vector<double> centroid(dim), xr(dim), xe(dim), xc(dim);
    while (out.iterations < max_iter) {
      for (std::size_t j = 0; j <= dim; ++j) order[j] = j;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
      const std::size_t best = order.front(), worst = order.back(), second = order[dim - 1];
      if (converged_spread(vals[best], vals[worst])) {
        inner_converged = true;
        break;
      }
      ++out.iterations;
      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t j = 0; j <= dim; ++j) {
        if (j == worst) continue;
        for (std::size_t d = 0; d < dim; ++d) centroid[d] += pts[j][d] / static_cast<double>(dim);
      }
      for (std::size_t d = 0; d < dim; ++d) xr[d] = centroid[d] + (centroid[d] - pts[worst][d]);
      const double fr = f(xr);
      if (fr < vals[best]) {
        for (std::size_t d = 0; d < dim; ++d) xe[d] = centroid[d] + 2.0 * (centroid[d] - pts[worst][d]);
        const double fe = f(xe);
        if (fe < fr) {
          pts[worst] = xe;
          vals[worst] = fe;
        } else {
          pts[worst] = xr;
          vals[worst] = fr;
        }
        continue;
      }
      if (fr < vals[second]) {
        pts[worst] = xr;
        vals[worst] = fr;
        continue;
      }
      const bool outside = fr < vals[worst];
      for (std::size_t d = 0; d < dim; ++d) {
        xc[d] = outside ? centroid[d] + 0.5 * (xr[d] - centroid[d]) : centroid[d] + 0.5 * (pts[worst][d] - centroid[d]);
      }
      const double fc = f(xc);
      if (fc < (outside ? fr : vals[worst])) {
        pts[worst] = xc;
        vals[worst] = fc;
        continue;
      }
      for (std::size_t j = 0; j <= dim; ++j) {
        if (j == best) continue;
        for (std::size_t d = 0; d < dim; ++d) pts[j][d] = pts[best][d] + 0.5 * (pts[j][d] - pts[best][d]);
        vals[j] = f(pts[j]);
      }
    }
    const auto best_it = std::min_element(vals.begin(), vals.end());
    if (*best_it < out.f) {
      out.f = *best_it;
      out.x = pts[static_cast<std::size_t>(best_it - vals.begin())];
    }
    if (!inner_converged) return out;
    if (start_f - out.f <= tol * std::max(out.f, tol)) {
      out.converged = true;
      return out;
    }
    // Rescale the x vector to unit norm so restart steps stay meaningful.
    double nrm = 0.0;
    for (double v : out.x) nrm += v * v;
    nrm = std::sqrt(nrm);
    for (double& v : out.x) v /= nrm;
    restart_step = std::max(step * 1e-3, std::min(step, 10.0 * std::sqrt(out.f) + 1e-6));
  }
}

}  // namespace detail

/// Multi-start Nelder-Mead fit of alpha. Starts are drawn from substreams
/// of `seed`; the lowest residual wins, ties going to the lower start index.
inline SynthesisSolution synthesize(const SynthesisProblem& problem, std::uint64_t seed,
                                    const PatternBasis* precomputed = nullptr) {
  problem.validate();
  const unsigned dose = problem.effective_dose();
  PatternBasis local;
  if (precomputed == nullptr || precomputed->n != problem.n || precomputed->dose_order != dose ||
      precomputed->grid != problem.grid) {
    local = pattern_basis(problem.n, problem.grid, dose);
    precomputed = &local;
  }
  const PatternBasis& basis = *precomputed;
  const unsigned k = basis.size();

  std::vector<double> scratch;
  auto objective = [&](const std::vector<double>& x) {
    double nrm = 0.0;
    for (double v : x) nrm += v * v;
    if (!(nrm > 1e-300)) return std::numeric_limits<double>::infinity();
    const auto alpha = detail::to_alpha(x);
    basis.evaluate_into(alpha, scratch);
    const Fit fit = scaled_fit(scratch, problem.target);
    return fit.residual * fit.residual;
  };

  detail::Descent best;
  unsigned best_start = 0;
  for (unsigned s = 0; s < problem.starts; ++s) {
    SplitMix64 rng(derive_seed(seed, s));
    std::vector<double> x0(2 * k);
    for (double& v : x0) v = rng.normal();
    double nrm = 0.0;
    for (double v : x0) nrm += v * v;
    nrm = std::sqrt(nrm);
    for (double& v : x0) v /= nrm;
    detail::Descent d = detail::nelder_mead(objective, x0, 0.2, problem.tolerance, problem.max_iterations);
    if (d.f < best.f) {
      best = std::move(d);
      best_start = s;
    }
  }

  SynthesisSolution sol;
  sol.coefficients = fix_gauge(detail::to_alpha(best.x));
  const std::vector<double> values = basis.evaluate(sol.coefficients);
  const Fit fit = scaled_fit(values, problem.target);
  sol.residual = fit.residual;
  sol.scale = fit.scale;
  sol.achieved.abscissa = problem.grid;
  sol.achieved.values = values;
  sol.achieved.dose_order = dose;
  sol.achieved.abscissa_kind = deposition::AbscissaKind::phase;
  sol.achieved.maxima_count = deposition::maxima_per_period(problem.grid, values, 2.0 * kPi);
  sol.iterations = best.iterations;
  sol.best_start = best_start;
  sol.converged = best.converged;
  sol.nonstandard_dose = problem.nonstandard_dose();
  return sol;
}

}  // namespace qlitho::synth
