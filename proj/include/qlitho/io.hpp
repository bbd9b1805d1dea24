#pragma once

// File formats: state JSON, pattern CSV + JSON sidecar, scaling-sweep CSV,
// synthesis target CSV and solution JSON.

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qlitho/deposition.hpp"
#include "qlitho/errors.hpp"
#include "qlitho/estimation.hpp"
#include "qlitho/fock.hpp"
#include "qlitho/numeric.hpp"
#include "qlitho/synth.hpp"

namespace qlitho::io {

using nlohmann::json;

// ---- Fock states ---------------------------------------------------------

inline json state_to_json(const fock::FockState& psi) {
  json terms = json::array();
  for (const auto& [occ, amp] : psi.terms()) {
    terms.push_back({{"na", occ.a}, {"nb", occ.b}, {"re", amp.real()}, {"im", amp.imag()}});
  }
  return json{{"terms", terms}};
}

inline fock::FockState state_from_json(const json& j) {
  if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array()) {
    throw ParseError("state JSON needs a \"terms\" array", 0);
  }
  fock::FockState::TermMap terms;
  for (const auto& t : j["terms"]) {
    for (const char* key : {"na", "nb", "re", "im"}) {
      if (!t.contains(key)) throw ParseError(std::string("state term is missing \"") + key + "\"", 0);
    }
    if (!t["na"].is_number_unsigned() || !t["nb"].is_number_unsigned()) {
      throw ParseError("photon counts must be non-negative integers", 0);
    }
    terms[fock::Occupation{t["na"].get<unsigned>(), t["nb"].get<unsigned>()}] +=
        fock::Amplitude(t["re"].get<double>(), t["im"].get<double>());
  }
  return fock::FockState(std::move(terms));
}

// ---- Patterns ------------------------------------------------------------

inline void write_pattern_csv(std::ostream& os, const deposition::DepositionPattern& p) {
  os << "abscissa,value\n";
  for (std::size_t i = 0; i < p.size(); ++i) os << format17(p.abscissa[i]) << ',' << format17(p.values[i]) << '\n';
}

inline json pattern_sidecar(const deposition::DepositionPattern& p) {
  return json{{"dose_order", p.dose_order},
              {"abscissa_kind", deposition::to_string(p.abscissa_kind)},
              {"maxima_count", p.maxima_count},
              {"grid_size", p.size()}};
}

/// Path of the JSON sidecar that accompanies a pattern CSV.
inline std::string sidecar_path(const std::string& csv_path) {
  const auto dot = csv_path.rfind('.');
  const auto slash = csv_path.find_last_of("/\\");
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? csv_path.substr(0, dot) : csv_path) + ".json";
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error("failed writing " + path);
}

inline std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open " + path, 0);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// Writes `csv_path` and its sidecar; returns the sidecar path.
inline std::string save_pattern(const std::string& csv_path, const deposition::DepositionPattern& p) {
  std::ostringstream csv;
  write_pattern_csv(csv, p);
  write_text(csv_path, csv.str());
  const std::string side = sidecar_path(csv_path);
  write_text(side, pattern_sidecar(p).dump(2) + "\n");
  return side;
}

// ---- Two-column numeric CSV ---------------------------------------------

struct Profile {
  std::vector<double> x;
  std::vector<double> y;
};

namespace detail {

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& field, std::size_t line) {
  const std::string t = trim(field);
  if (t.empty()) throw ParseError("empty numeric field", line);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + t + "'", line);
  }
  if (used != t.size()) throw ParseError("trailing characters in '" + t + "'", line);
  return v;
}

}  // namespace detail

/// Reads `<x>,<y>` rows under a header naming the two columns
/// (e.g. `phi,value`). Blank lines are skipped; errors carry the line number.
inline Profile read_profile_csv(std::istream& is, const std::string& x_name, const std::string& y_name) {
  Profile p;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto comma = t.find(',');
    if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
      throw ParseError("expected exactly two comma-separated columns", lineno);
    }
    const std::string a = detail::trim(t.substr(0, comma));
    const std::string b = detail::trim(t.substr(comma + 1));
    if (!header_seen) {
      if (a != x_name || b != y_name) {
        throw ParseError("expected header '" + x_name + "," + y_name + "'", lineno);
      }
      header_seen = true;
      continue;
    }
    p.x.push_back(detail::parse_double(a, lineno));
    p.y.push_back(detail::parse_double(b, lineno));
  }
  if (!header_seen) throw ParseError("empty file: missing header '" + x_name + "," + y_name + "'", lineno + 1);
  if (p.x.empty()) throw ParseError("no data rows", lineno + 1);
  return p;
}

inline Profile read_profile_csv(const std::string& path, const std::string& x_name, const std::string& y_name) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open " + path, 0);
  return read_profile_csv(f, x_name, y_name);
}

// ---- Scaling sweep -------------------------------------------------------

inline void write_scaling_csv(std::ostream& os, const std::vector<estimation::ScalingRow>& rows) {
  os << "N,analytic_separable,analytic_entangled,mc_separable,mc_entangled,mt_bound,ml_bound\n";
  for (const auto& r : rows) {
    os << r.n << ',' << format17(r.analytic_separable) << ',' << format17(r.analytic_entangled) << ','
       << format17(r.mc_separable) << ',' << format17(r.mc_entangled) << ',' << format17(r.mt) << ','
       << format17(r.ml) << '\n';
  }
}

// ---- Synthesis solutions -------------------------------------------------

inline json alpha_to_json(const std::vector<std::complex<double>>& alpha) {
  json a = json::array();
  for (const auto& c : alpha) a.push_back({{"re", c.real()}, {"im", c.imag()}});
  return a;
}

inline std::vector<std::complex<double>> alpha_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("\"alpha\" must be a non-empty array", 0);
  std::vector<std::complex<double>> out;
  for (const auto& c : j) {
    if (!c.contains("re") || !c.contains("im")) throw ParseError("alpha entries need \"re\" and \"im\"", 0);
    out.emplace_back(c["re"].get<double>(), c["im"].get<double>());
  }
  return out;
}

inline json solution_to_json(unsigned n, const synth::SynthesisSolution& s) {
  return json{{"N", n},
              {"alpha", alpha_to_json(s.coefficients)},
              {"residual", s.residual},
              {"iterations", s.iterations},
              {"scale", s.scale},
              {"converged", s.converged},
              {"dose_order", s.achieved.dose_order},
              {"nonstandard_dose", s.nonstandard_dose}};
}

}  // namespace qlitho::io
