#pragma once

// Two-mode bosonic Fock-state algebra.
//
// States are sparse maps from occupation pairs |n_a, n_b> to complex
// amplitudes. Values are immutable; every operation returns a new state.

#include <algorithm>
#include <cmath>
#include <complex>
#include <compare>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qlitho/errors.hpp"
#include "qlitho/numeric.hpp"

namespace qlitho::fock {

using Amplitude = std::complex<double>;

struct Occupation {
  unsigned a = 0;
  unsigned b = 0;

  unsigned total() const { return a + b; }
  auto operator<=>(const Occupation&) const = default;
};

/// Numerical thresholds shared by the Fock engine.
struct Tolerances {
  double prune = 1e-15;  ///< amplitudes with smaller magnitude are dropped
  double norm = 1e-12;   ///< norms below this count as a cancelled state
};

class FockState {
 public:
  using TermMap = std::map<Occupation, Amplitude>;

  /// The zero vector (no terms). Not a valid physical state, but it is the
  /// natural result of annihilating below the vacuum.
  FockState() = default;

  explicit FockState(TermMap terms, double prune = Tolerances{}.prune) : terms_(std::move(terms)) {
    std::erase_if(terms_, [prune](const auto& kv) { return std::abs(kv.second) < prune; });
  }

  static FockState ket(unsigned na, unsigned nb, Amplitude amp = 1.0) {
    return FockState(TermMap{{Occupation{na, nb}, amp}});
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  unsigned max_total() const {
    unsigned m = 0;
    for (const auto& [occ, amp] : terms_) m = std::max(m, occ.total());
    return m;
  }

  Amplitude amplitude(unsigned na, unsigned nb) const {
    auto it = terms_.find(Occupation{na, nb});
    return it == terms_.end() ? Amplitude{} : it->second;
  }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& [occ, amp] : terms_) s += std::norm(amp);
    return s;
  }

  double norm() const { return std::sqrt(norm_squared()); }

  FockState scaled(Amplitude c, double prune = Tolerances{}.prune) const {
    TermMap out;
    for (const auto& [occ, amp] : terms_) out.emplace(occ, c * amp);
    return FockState(std::move(out), prune);
  }

  /// Unit-norm copy. Throws DegenerateInput when the norm is below `tol.norm`.
  FockState normalized(const Tolerances& tol = {}) const {
    const double n = norm();
    if (n < tol.norm) throw DegenerateInput("cannot normalize a state with norm " + format17(n));
    return scaled(1.0 / n, tol.prune);
  }

  /// Sum with amplitudes of identical kets added. `prune` applies to the result.
  FockState plus(const FockState& other, double prune = Tolerances{}.prune) const {
    TermMap out = terms_;
    for (const auto& [occ, amp] : other.terms_) out[occ] += amp;
    return FockState(std::move(out), prune);
  }

  friend FockState operator+(const FockState& x, const FockState& y) { return x.plus(y); }

 private:
  TermMap terms_;
};

/// <psi|chi>, antilinear in the first argument.
inline Amplitude overlap(const FockState& psi, const FockState& chi) {
  Amplitude s{};
  const auto& small = psi.size() <= chi.size() ? psi.terms() : chi.terms();
  const bool psi_is_small = psi.size() <= chi.size();
  for (const auto& [occ, amp] : small) {
    if (psi_is_small) {
      s += std::conj(amp) * chi.amplitude(occ.a, occ.b);
    } else {
      s += std::conj(psi.amplitude(occ.a, occ.b)) * amp;
    }
  }
  return s;
}

/// (|N,0> + e^{iN phi}|0,N>)/sqrt(2).
inline FockState make_noon(unsigned n, double phi) {
  if (n == 0) throw InvalidArgument("NOON state requires N >= 1");
  const double r = 1.0 / std::sqrt(2.0);
  return FockState(FockState::TermMap{
      {Occupation{n, 0}, Amplitude(r, 0.0)},
      {Occupation{0, n}, std::polar(r, static_cast<double>(n) * phi)},
  });
}

/// (e^{i m phi}|N-m,m> + e^{i(N-m) phi}|m,N-m>)/sqrt(2) for m < N/2.
///
/// When 2m = N both kets coincide; the state is then e^{i m phi}|m,m> with
/// unit modulus so that every branch stays normalized.
inline FockState make_psi_nm(unsigned n, unsigned m, double phi) {
  if (n == 0) throw InvalidArgument("psi_Nm requires N >= 1");
  if (2 * m > n) {
    throw InvalidArgument("psi_Nm branch index m=" + std::to_string(m) + " exceeds floor(N/2)=" +
                          std::to_string(n / 2));
  }
  if (2 * m == n) return FockState::ket(m, m, std::polar(1.0, m * phi));
  const double r = 1.0 / std::sqrt(2.0);
  return FockState(FockState::TermMap{
      {Occupation{n - m, m}, std::polar(r, static_cast<double>(m) * phi)},
      {Occupation{m, n - m}, std::polar(r, static_cast<double>(n - m) * phi)},
  });
}

/// Normalized sum_k coeffs[k] * states[k].
inline FockState superpose(std::span<const FockState> states, std::span<const Amplitude> coeffs,
                           const Tolerances& tol = {}) {
  if (states.empty()) throw InvalidArgument("superpose: empty state list");
  if (states.size() != coeffs.size()) {
    throw InvalidArgument("superpose: " + std::to_string(states.size()) + " states but " +
                          std::to_string(coeffs.size()) + " coefficients");
  }
  FockState::TermMap acc;
  for (std::size_t k = 0; k < states.size(); ++k) {
    for (const auto& [occ, amp] : states[k].terms()) acc[occ] += coeffs[k] * amp;
  }
  FockState sum(std::move(acc), 0.0);
  if (sum.norm() < tol.norm) {
    throw DegenerateInput("superpose: weighted sum cancels (norm " + format17(sum.norm()) + ")");
  }
  return sum.normalized(tol);
}

enum class ModeOp { annihilate_a, annihilate_b, annihilate_e, create_a, create_b, create_e };

struct ModeOperatorExpr {
  ModeOp kind = ModeOp::annihilate_e;
  unsigned power = 1;
};

namespace detail {

inline FockState ladder_once(ModeOp op, const FockState& psi, double prune) {
  FockState::TermMap out;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  auto lower_a = [&](Occupation o, Amplitude amp, double w) {
    if (o.a > 0) out[Occupation{o.a - 1, o.b}] += w * std::sqrt(static_cast<double>(o.a)) * amp;
  };
  auto lower_b = [&](Occupation o, Amplitude amp, double w) {
    if (o.b > 0) out[Occupation{o.a, o.b - 1}] += w * std::sqrt(static_cast<double>(o.b)) * amp;
  };
  auto raise_a = [&](Occupation o, Amplitude amp, double w) {
    out[Occupation{o.a + 1, o.b}] += w * std::sqrt(static_cast<double>(o.a) + 1.0) * amp;
  };
  auto raise_b = [&](Occupation o, Amplitude amp, double w) {
    out[Occupation{o.a, o.b + 1}] += w * std::sqrt(static_cast<double>(o.b) + 1.0) * amp;
  };
  for (const auto& [occ, amp] : psi.terms()) {
    switch (op) {
      case ModeOp::annihilate_a: lower_a(occ, amp, 1.0); break;
      case ModeOp::annihilate_b: lower_b(occ, amp, 1.0); break;
      case ModeOp::annihilate_e:
        lower_a(occ, amp, inv_sqrt2);
        lower_b(occ, amp, inv_sqrt2);
        break;
      case ModeOp::create_a: raise_a(occ, amp, 1.0); break;
      case ModeOp::create_b: raise_b(occ, amp, 1.0); break;
      case ModeOp::create_e:
        raise_a(occ, amp, inv_sqrt2);
        raise_b(occ, amp, inv_sqrt2);
        break;
    }
  }
  return FockState(std::move(out), prune);
}

}  // namespace detail

/// Applies `expr.kind` `expr.power` times. The result is not normalized;
/// lowering below the vacuum gives the zero state.
inline FockState apply_operator(const ModeOperatorExpr& expr, const FockState& psi,
                                const Tolerances& tol = {}) {
  if (expr.power == 0) throw InvalidArgument("operator power must be positive");
  FockState out = psi;
  for (unsigned k = 0; k < expr.power && !out.is_zero(); ++k) {
    out = detail::ladder_once(expr.kind, out, tol.prune);
  }
  return out;
}

/// Deposition rate <psi| (e^dag)^N e^N |psi> / N! = ||e^N psi||^2 / N!.
inline double expectation_delta(const FockState& psi, unsigned dose_order, const Tolerances& tol = {}) {
  if (dose_order == 0) throw InvalidArgument("dose order must be >= 1");
  const FockState lowered = apply_operator({ModeOp::annihilate_e, dose_order}, psi, tol);
  return lowered.norm_squared() / factorial(dose_order);
}

/// Closed form of expectation_delta for a NOON state with dose order N.
inline double noon_deposition_rate(unsigned n, double phi) {
  return std::ldexp(1.0 + std::cos(static_cast<double>(n) * phi), -static_cast<int>(n));
}

}  // namespace qlitho::fock
