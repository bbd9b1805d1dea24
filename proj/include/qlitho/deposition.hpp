#pragma once

// Interference and multi-photon deposition patterns on a substrate.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "qlitho/errors.hpp"
#include "qlitho/fock.hpp"
#include "qlitho/numeric.hpp"

namespace qlitho::deposition {

inline constexpr std::size_t kDefaultGridSize = 1024;
inline constexpr double kPlateauTolerance = 1e-12;
inline constexpr double kNegativeTolerance = 1e-12;

/// Two plane waves of wavelength `wavelength` meeting the substrate at
/// `theta` radians from the normal.
class PlaneWaveGeometry {
 public:
  PlaneWaveGeometry(double wavelength, double theta) : wavelength_(wavelength), theta_(theta) {
    if (!(wavelength > 0.0)) throw InvalidArgument("wavelength must be positive");
    if (!(theta > 0.0 && theta <= kPi / 2)) throw InvalidArgument("incidence angle must lie in (0, pi/2]");
  }

  static PlaneWaveGeometry grazing(double wavelength) { return {wavelength, kPi / 2}; }

  double wavelength() const { return wavelength_; }
  double theta() const { return theta_; }
  double wavenumber() const { return 2.0 * kPi / wavelength_; }

 private:
  double wavelength_;
  double theta_;
};

enum class AbscissaKind { phase, position };

inline const char* to_string(AbscissaKind k) { return k == AbscissaKind::phase ? "phase" : "position"; }

struct DepositionPattern {
  std::vector<double> abscissa;
  std::vector<double> values;
  unsigned dose_order = 1;
  AbscissaKind abscissa_kind = AbscissaKind::phase;
  unsigned maxima_count = 0;

  std::size_t size() const { return values.size(); }
};

/// Uniform grid of `size` points on [0, 2 pi).
inline std::vector<double> phase_grid(std::size_t size = kDefaultGridSize) {
  if (size == 0) throw InvalidArgument("grid size must be positive");
  std::vector<double> g(size);
  for (std::size_t i = 0; i < size; ++i) g[i] = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(size);
  return g;
}

/// Strict local maxima. Runs of values equal within kPlateauTolerance are
/// treated as one sample and counted once, at their left edge. With
/// `periodic` the ends wrap; otherwise the end samples never count.
inline unsigned count_maxima(const std::vector<double>& v, bool periodic) {
  const std::size_t n = v.size();
  if (n < 3) return 0;
  auto same = [](double x, double y) { return std::abs(x - y) <= kPlateauTolerance; };

  // Collapse plateaus into (value, first index) runs.
  struct Run {
    double value;
    std::size_t start;
  };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < n; ++i) {
    if (runs.empty() || !same(runs.back().value, v[i])) runs.push_back({v[i], i});
  }
  if (periodic && runs.size() > 1 && same(runs.front().value, runs.back().value)) {
    // The last run wraps into the first; its left edge is the true start.
    runs.front().start = runs.back().start;
    runs.pop_back();
  }
  const std::size_t r = runs.size();
  if (r < 2) return 0;
  unsigned count = 0;
  for (std::size_t i = 0; i < r; ++i) {
    if (!periodic && (i == 0 || i + 1 == r)) continue;
    const double left = runs[(i + r - 1) % r].value;
    const double right = runs[(i + 1) % r].value;
    if (runs[i].value > left && runs[i].value > right) ++count;
  }
  return count;
}

/// Maxima per period of `period`. A uniform grid spanning a whole number of
/// periods is counted with wrap-around and divided by that number; any
/// other grid is counted without wrap-around.
inline unsigned maxima_per_period(const std::vector<double>& abscissa, const std::vector<double>& values,
                                  double period) {
  const std::size_t n = abscissa.size();
  if (n < 3) return 0;
  const double step = (abscissa.back() - abscissa.front()) / static_cast<double>(n - 1);
  bool uniform = step > 0.0;
  for (std::size_t i = 1; i < n && uniform; ++i) {
    uniform = std::abs((abscissa[i] - abscissa[i - 1]) - step) <= 1e-9 * step;
  }
  if (uniform) {
    const double periods = (abscissa.back() - abscissa.front() + step) / period;
    const double whole = std::round(periods);
    if (whole >= 1.0 && std::abs(periods - whole) <= 1e-9 * whole) {
      return count_maxima(values, true) / static_cast<unsigned>(whole);
    }
  }
  return count_maxima(values, false);
}

namespace detail {

inline void require_increasing(const std::vector<double>& xs, const char* what) {
  if (xs.empty()) throw InvalidArgument(std::string(what) + " must be non-empty");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw InvalidArgument(std::string(what) + " must be strictly increasing");
  }
}

inline double clamp_rate(double v) {
  if (v < -kNegativeTolerance) throw Error("negative deposition value " + format17(v));
  return v < 0.0 ? 0.0 : v;
}

}  // namespace detail

/// cos^2(k x sin(theta)), peak 1.
inline DepositionPattern classical_intensity(const PlaneWaveGeometry& geom, const std::vector<double>& xs) {
  detail::require_increasing(xs, "positions");
  const double q = geom.wavenumber() * std::sin(geom.theta());
  DepositionPattern p;
  p.abscissa = xs;
  p.values.reserve(xs.size());
  for (double x : xs) {
    const double c = std::cos(q * x);
    p.values.push_back(c * c);
  }
  p.dose_order = 1;
  p.abscissa_kind = AbscissaKind::position;
  p.maxima_count = maxima_per_period(p.abscissa, p.values, kPi / q);
  return p;
}

/// Distance between an intensity maximum and the adjacent minimum for
/// classical two-beam interference: lambda / (4 sin theta).
inline double rayleigh_limit(const PlaneWaveGeometry& geom) {
  return geom.wavelength() / (4.0 * std::sin(geom.theta()));
}

/// Effective resolution with N-photon deposition, lambda / (4 N sin theta).
/// At grazing incidence this is lambda / 4N.
inline double quantum_rayleigh_limit(const PlaneWaveGeometry& geom, unsigned n) {
  if (n == 0) throw InvalidArgument("photon number must be >= 1");
  return geom.wavelength() / (4.0 * static_cast<double>(n) * std::sin(geom.theta()));
}

/// Builds the state for a given phase.
using StateFamily = std::function<fock::FockState(double)>;

inline StateFamily noon_family(unsigned n) {
  return [n](double phi) { return fock::make_noon(n, phi); };
}

inline StateFamily psi_nm_family(unsigned n, unsigned m) {
  if (2 * m > n) throw InvalidArgument("psi_Nm branch index exceeds floor(N/2)");
  return [n, m](double phi) { return fock::make_psi_nm(n, m, phi); };
}

/// Delta_N(phi) for each grid point.
inline DepositionPattern quantum_pattern(const StateFamily& family, unsigned dose_order,
                                         const std::vector<double>& phi_grid) {
  if (dose_order == 0) throw InvalidArgument("dose order must be >= 1");
  detail::require_increasing(phi_grid, "phase grid");
  DepositionPattern p;
  p.abscissa = phi_grid;
  p.values.reserve(phi_grid.size());
  for (double phi : phi_grid) {
    p.values.push_back(detail::clamp_rate(fock::expectation_delta(family(phi), dose_order)));
  }
  p.dose_order = dose_order;
  p.abscissa_kind = AbscissaKind::phase;
  p.maxima_count = maxima_per_period(p.abscissa, p.values, 2.0 * kPi);
  return p;
}

struct Branch {
  StateFamily family;
  fock::Amplitude coeff{1.0, 0.0};
};

/// Which dose orders contribute to a pattern, and with what weight.
struct DoseSchedule {
  std::vector<unsigned> orders;
  std::vector<double> weights;
};

/// Uniform weights over the nonzero total photon numbers present in `psi`.
inline DoseSchedule default_dose_schedule(const fock::FockState& psi) {
  std::vector<unsigned> orders;
  for (const auto& [occ, amp] : psi.terms()) {
    const unsigned t = occ.total();
    if (t > 0 && std::find(orders.begin(), orders.end(), t) == orders.end()) orders.push_back(t);
  }
  std::sort(orders.begin(), orders.end());
  if (orders.empty()) throw InvalidArgument("state has no photons to deposit");
  DoseSchedule s{orders, std::vector<double>(orders.size(), 1.0 / static_cast<double>(orders.size()))};
  return s;
}

/// Pattern of the normalized superposition sum_k coeff_k |family_k(phi)>,
/// dosed as sum_d weight_d * Delta_d.
inline DepositionPattern superposition_pattern(const std::vector<Branch>& branches, const DoseSchedule& dose,
                                               const std::vector<double>& phi_grid) {
  if (branches.empty()) throw InvalidArgument("superposition needs at least one branch");
  if (dose.orders.empty() || dose.orders.size() != dose.weights.size()) {
    throw InvalidArgument("dose orders and weights must be non-empty and of equal length");
  }
  double wsum = 0.0;
  for (double w : dose.weights) {
    if (w < 0.0) throw InvalidArgument("dose weights must be non-negative");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12) throw InvalidArgument("dose weights must sum to 1");
  for (unsigned d : dose.orders) {
    if (d == 0) throw InvalidArgument("dose order must be >= 1");
  }
  detail::require_increasing(phi_grid, "phase grid");

  std::vector<fock::Amplitude> coeffs;
  coeffs.reserve(branches.size());
  for (const auto& b : branches) coeffs.push_back(b.coeff);

  DepositionPattern p;
  p.abscissa = phi_grid;
  p.values.reserve(phi_grid.size());
  std::vector<fock::FockState> states(branches.size());
  for (double phi : phi_grid) {
    for (std::size_t k = 0; k < branches.size(); ++k) states[k] = branches[k].family(phi);
    const fock::FockState psi = fock::superpose(states, coeffs);
    double v = 0.0;
    for (std::size_t j = 0; j < dose.orders.size(); ++j) {
      v += dose.weights[j] * fock::expectation_delta(psi, dose.orders[j]);
    }
    p.values.push_back(detail::clamp_rate(v));
  }
  p.dose_order = dose.orders.size() == 1 ? dose.orders.front() : *std::max_element(dose.orders.begin(), dose.orders.end());
  p.abscissa_kind = AbscissaKind::phase;
  p.maxima_count = maxima_per_period(p.abscissa, p.values, 2.0 * kPi);
  return p;
}

/// Re-express a phase pattern along the substrate using phi = k x
/// (grazing incidence).
inline DepositionPattern to_position(const DepositionPattern& pattern, const PlaneWaveGeometry& geom) {
  if (pattern.abscissa_kind != AbscissaKind::phase) throw InvalidArgument("pattern is already positional");
  DepositionPattern p = pattern;
  const double k = geom.wavenumber();
  for (double& x : p.abscissa) x /= k;
  p.abscissa_kind = AbscissaKind::position;
  return p;
}

/// Discrete Fourier coefficients c_h = (1/G) sum_j v_j e^{-2 pi i h j / G}
/// for h = 0 .. G-1, assuming the samples cover one period uniformly.
inline std::vector<std::complex<double>> harmonic_spectrum(const std::vector<double>& values) {
  const std::size_t g = values.size();
  std::vector<std::complex<double>> c(g);
  for (std::size_t h = 0; h < g; ++h) {
    std::complex<double> s{};
    for (std::size_t j = 0; j < g; ++j) {
      const double ang = -2.0 * kPi * static_cast<double>((h * j) % g) / static_cast<double>(g);
      s += values[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    c[h] = s / static_cast<double>(g);
  }
  return c;
}

}  // namespace qlitho::deposition
