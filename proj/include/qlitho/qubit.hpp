#pragma once

// N-party qubit picture of phase estimation: product phase states, GHZ
// phase states, the local sigma_x and nonlocal Sigma_N observables, and
// what remains after some parties are lost.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qlitho/errors.hpp"
#include "qlitho/numeric.hpp"

namespace qlitho::qubit {

inline constexpr unsigned kMaxParties = 24;

enum class Form { product, ghz };

inline const char* to_string(Form f) { return f == Form::product ? "product" : "ghz"; }

/// Symbolic N-party phase state.
///
/// product: tensor power of (|0> + e^{i phi}|1>)/sqrt(2).
/// ghz:     (|0...0> + e^{i N phi}|1...1>)/sqrt(2).
class QubitPhaseState {
 public:
  static QubitPhaseState product(unsigned n_parties, double phi) { return {n_parties, Form::product, phi}; }
  static QubitPhaseState ghz(unsigned n_parties, double phi) { return {n_parties, Form::ghz, phi}; }

  unsigned n_parties() const { return n_; }
  Form form() const { return form_; }
  double phi() const { return phi_; }

 private:
  QubitPhaseState(unsigned n, Form form, double phi) : n_(n), form_(form), phi_(phi) {
    if (n < 1 || n > kMaxParties) {
      throw InvalidArgument("n_parties must lie in [1, " + std::to_string(kMaxParties) + "], got " +
                            std::to_string(n));
    }
  }

  unsigned n_;
  Form form_;
  double phi_;
};

/// The state left when parties of a GHZ state go missing: an equal
/// mixture of |0...0> and |1...1> on the survivors. There is no phase
/// field; the type cannot depend on phi.
class LossyState {
 public:
  explicit LossyState(unsigned surviving) : surviving_(surviving) {
    if (surviving < 1 || surviving > kMaxParties) throw InvalidArgument("surviving party count out of range");
  }

  unsigned surviving() const { return surviving_; }

  /// Diagonal of the density matrix as (basis index, weight) pairs.
  std::vector<std::pair<std::uint64_t, double>> diagonal() const {
    const std::uint64_t all_ones = (std::uint64_t{1} << surviving_) - 1;
    return {{0, 0.5}, {all_ones, 0.5}};
  }

  double trace() const { return 0.5 + 0.5; }

  /// Probabilities of the two computational outcomes {all zeros, all ones}.
  std::vector<double> outcome_distribution() const { return {0.5, 0.5}; }

  std::string record() const {
    return "rho[" + std::to_string(surviving_) + "] = 0.5 |0..0><0..0| + 0.5 |1..1><1..1|";
  }

  friend bool operator==(const LossyState&, const LossyState&) = default;

 private:
  unsigned surviving_;
};

struct SumStatistics {
  double mean = 0.0;
  double variance = 0.0;
};

/// Statistics of the sum of `trials` independent sigma_x outcomes on the
/// single-party phase state: mean N cos(phi), variance N sin^2(phi).
inline SumStatistics sigma_x_statistics(double phi, unsigned trials) {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  const double n = trials;
  const double s = std::sin(phi);
  return {n * std::cos(phi), n * s * s};
}

/// Same, with each party of a product state counted as one trial.
inline SumStatistics sigma_x_statistics(const QubitPhaseState& state) {
  if (state.form() != Form::product) throw WrongForm("sigma_x statistics need a product state");
  return sigma_x_statistics(state.phi(), state.n_parties());
}

/// <Sigma_N> on a GHZ state.
inline double sigma_N_expectation(const QubitPhaseState& state) {
  if (state.form() != Form::ghz) throw WrongForm("Sigma_N expectation needs a GHZ state");
  return std::cos(static_cast<double>(state.n_parties()) * state.phi());
}

inline LossyState lose_parties(const QubitPhaseState& state, unsigned n_lost) {
  if (state.form() != Form::ghz) throw WrongForm("loss model applies to GHZ states");
  if (n_lost == 0 || n_lost >= state.n_parties()) {
    throw InvalidArgument("n_lost must satisfy 1 <= n_lost < N (N=" + std::to_string(state.n_parties()) +
                          ", n_lost=" + std::to_string(n_lost) + ")");
  }
  return LossyState(state.n_parties() - n_lost);
}

struct TrickResult {
  double expectation = 0.0;          ///< <Sigma_M> conditioned on landing in span{|0..0>,|1..1>}
  double success_probability = 0.0; ///< weight of the product state on that span
};

/// Measure Sigma_M on the M-party product state. Only the projection onto
/// span{|0...0>, |1...1>} responds; that happens with probability 2^{1-M}.
inline TrickResult separable_trick(unsigned m, double phi) {
  if (m < 1 || m > kMaxParties) throw InvalidArgument("M must lie in [1, 24]");
  return {std::cos(static_cast<double>(m) * phi), std::ldexp(1.0, 1 - static_cast<int>(m))};
}

/// Dense 2^N amplitude vector; bit k of the index is party k.
inline std::vector<std::complex<double>> to_dense(const QubitPhaseState& state) {
  const unsigned n = state.n_parties();
  const std::uint64_t dim = std::uint64_t{1} << n;
  std::vector<std::complex<double>> v(dim);
  if (state.form() == Form::ghz) {
    const double r = 1.0 / std::sqrt(2.0);
    v.front() = r;
    v.back() = std::polar(r, n * state.phi());
    return v;
  }
  const double mag = std::pow(2.0, -0.5 * n);
  for (std::uint64_t i = 0; i < dim; ++i) {
    v[i] = std::polar(mag, static_cast<double>(std::popcount(i)) * state.phi());
  }
  return v;
}

/// <x|y> computed from the symbolic forms.
inline std::complex<double> overlap(const QubitPhaseState& x, const QubitPhaseState& y) {
  if (x.n_parties() != y.n_parties()) throw InvalidArgument("overlap of states with different party counts");
  const double n = x.n_parties();
  const std::complex<double> i{0.0, 1.0};
  if (x.form() == Form::ghz && y.form() == Form::ghz) {
    return 0.5 * (1.0 + std::exp(i * n * (y.phi() - x.phi())));
  }
  if (x.form() == Form::product && y.form() == Form::product) {
    return std::pow(0.5 * (1.0 + std::exp(i * (y.phi() - x.phi()))), n);
  }
  const auto& g = x.form() == Form::ghz ? x : y;
  const auto& p = x.form() == Form::ghz ? y : x;
  // <ghz|prod>; conjugate when the order is reversed.
  const std::complex<double> gp =
      std::pow(2.0, -0.5 * n) / std::sqrt(2.0) * (1.0 + std::exp(i * n * (p.phi() - g.phi())));
  return x.form() == Form::ghz ? gp : std::conj(gp);
}

struct FisherResult {
  double value = 0.0;
  bool degenerate = false;  ///< some outcome probability fell below 1e-12 and was skipped
};

/// Classical Fisher information sum_k (dp_k/dphi)^2 / p_k of an outcome
/// distribution, with a central difference of step h.
inline FisherResult fisher_information(const std::function<std::vector<double>(double)>& distribution,
                                       double phi, double h = 1e-5) {
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  const auto p0 = distribution(phi);
  const auto plus = distribution(phi + h);
  const auto minus = distribution(phi - h);
  if (plus.size() != p0.size() || minus.size() != p0.size()) {
    throw InvalidArgument("distribution changed length across phi");
  }
  FisherResult out;
  for (std::size_t k = 0; k < p0.size(); ++k) {
    if (p0[k] < 1e-12) {
      out.degenerate = true;
      continue;
    }
    const double d = (plus[k] - minus[k]) / (2.0 * h);
    out.value += d * d / p0[k];
  }
  return out;
}

/// Lossy output carries no phase, so its Fisher information is exactly zero.
inline FisherResult fisher_information(const LossyState& rho, double phi, double h = 1e-5) {
  return fisher_information([&rho](double) { return rho.outcome_distribution(); }, phi, h);
}

/// P(+1), P(-1) for sigma_x on the single-party phase state.
inline std::vector<double> sigma_x_distribution(double phi) {
  const double c = std::cos(phi);
  return {0.5 * (1.0 + c), 0.5 * (1.0 - c)};
}

/// P(+1), P(-1) for Sigma_N on the N-party GHZ state.
inline std::function<std::vector<double>(double)> sigma_N_distribution(unsigned n) {
  return [n](double phi) { return sigma_x_distribution(static_cast<double>(n) * phi); };
}

}  // namespace qlitho::qubit
