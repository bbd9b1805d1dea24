// qlitho: command-line front end for the quantum lithography toolkit.
//
//   qlitho pattern  --mode {classical,noon,psi-nm,superposition} ...
//   qlitho scaling  --N-list 1,4,16 --phi 1.047 --trials 100000 --seed 7 --out s.csv
//   qlitho loss     --N 5 --lost 2
//   qlitho synth    --N 4 --target t.csv --starts 16 --seed 0 --out sol.json
//   qlitho --manifest run.manifest.json      (replay)
//
// Exit codes: 0 success, 2 usage, 3 numerical/precondition, 4 non-convergence.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qlitho/qlitho.hpp"

namespace {

using nlohmann::json;
using namespace qlitho;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitNonConvergence = 4;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PatternParams {
  std::string mode;
  unsigned n = 0;
  int m = -1;
  double lambda = 400e-9;
  double theta = kPi / 2;
  unsigned grid = static_cast<unsigned>(deposition::kDefaultGridSize);
  std::string coeffs;
  unsigned dose = 0;
  std::string out;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PatternParams, mode, n, m, lambda, theta, grid, coeffs, dose, out)

struct ScalingParams {
  std::string n_list;
  double phi = kPi / 3;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  std::string out;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ScalingParams, n_list, phi, trials, seed, out)

struct LossParams {
  unsigned n = 0;
  unsigned lost = 0;
  double phi = 0.7;
  std::string out;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(LossParams, n, lost, phi, out)

struct SynthParams {
  unsigned n = 0;
  std::string target;
  unsigned starts = 16;
  std::uint64_t seed = 0;
  unsigned max_iterations = 20000;
  double tolerance = 1e-10;
  unsigned dose = 0;
  std::string out;
  std::string pattern_out;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SynthParams, n, target, starts, seed, max_iterations, tolerance,
                                                dose, out, pattern_out)

struct RunRecord {
  std::vector<std::string> outputs;
  std::vector<std::uint64_t> seeds;
  int exit_code = kExitOk;
};

std::string stem(const std::string& path) {
  const auto dot = path.rfind('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
  return path.substr(0, dot);
}

std::vector<unsigned> parse_n_list(const std::string& s) {
  std::vector<unsigned> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) throw UsageError("empty entry in --N-list");
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &used);
    } catch (const std::exception&) {
      throw UsageError("--N-list entry '" + tok + "' is not an integer");
    }
    if (used != tok.size() || v == 0) throw UsageError("--N-list entries must be positive integers");
    out.push_back(static_cast<unsigned>(v));
  }
  if (out.empty()) throw UsageError("--N-list is empty");
  return out;
}

RunRecord run_pattern(const PatternParams& p) {
  const bool quantum = p.mode != "classical";
  if (p.mode != "classical" && p.mode != "noon" && p.mode != "psi-nm" && p.mode != "superposition") {
    throw UsageError("unknown --mode '" + p.mode + "'");
  }
  if (p.m >= 0 && p.mode != "psi-nm") throw UsageError("--m is only valid with --mode psi-nm");
  if (!p.coeffs.empty() && p.mode != "superposition") throw UsageError("--coeffs is only valid with --mode superposition");
  if (p.mode == "psi-nm" && p.m < 0) throw UsageError("--mode psi-nm requires --m");
  if (p.mode == "superposition" && p.coeffs.empty()) throw UsageError("--mode superposition requires --coeffs");
  if (p.dose != 0 && !quantum) throw UsageError("--dose does not apply to --mode classical");
  if (p.grid < 3) throw UsageError("--grid must be at least 3");
  if (p.out.empty()) throw UsageError("--out is required");

  const deposition::PlaneWaveGeometry geom(p.lambda, p.theta);
  deposition::DepositionPattern pattern;
  unsigned n = p.n;

  if (p.mode == "classical") {
    const double period = p.lambda / (2.0 * std::sin(p.theta));
    std::vector<double> xs(p.grid);
    for (unsigned i = 0; i < p.grid; ++i) xs[i] = period * i / p.grid;
    pattern = deposition::classical_intensity(geom, xs);
  } else {
    std::vector<std::complex<double>> alpha;
    if (p.mode == "superposition") {
      const json j = json::parse(io::read_text(p.coeffs));
      alpha = io::alpha_from_json(j.at("alpha"));
      if (j.contains("N")) {
        const unsigned file_n = j["N"].get<unsigned>();
        if (n != 0 && n != file_n) throw UsageError("--N disagrees with N in the coefficient file");
        n = file_n;
      }
    }
    if (n == 0) throw UsageError("--N must be >= 1");
    const auto grid = deposition::phase_grid(p.grid);
    const unsigned dose = p.dose == 0 ? n : p.dose;
    if (p.mode == "noon") {
      pattern = deposition::quantum_pattern(deposition::noon_family(n), dose, grid);
    } else if (p.mode == "psi-nm") {
      if (2u * static_cast<unsigned>(p.m) > n) throw UsageError("--m exceeds floor(N/2)");
      pattern = deposition::quantum_pattern(deposition::psi_nm_family(n, static_cast<unsigned>(p.m)), dose, grid);
    } else {
      if (alpha.size() != synth::coefficient_count(n)) {
        throw UsageError("coefficient file has " + std::to_string(alpha.size()) + " entries, N=" +
                         std::to_string(n) + " needs " + std::to_string(synth::coefficient_count(n)));
      }
      std::vector<deposition::Branch> branches;
      for (unsigned m = 0; m < alpha.size(); ++m) branches.push_back({deposition::psi_nm_family(n, m), alpha[m]});
      pattern = deposition::superposition_pattern(branches, {{dose}, {1.0}}, grid);
    }
  }

  RunRecord rec;
  rec.outputs.push_back(p.out);
  rec.outputs.push_back(io::save_pattern(p.out, pattern));
  const double limit = quantum ? deposition::quantum_rayleigh_limit(geom, n) : deposition::rayleigh_limit(geom);
  std::cout << "maxima_count " << pattern.maxima_count << "\n";
  std::cout << (quantum ? "quantum_rayleigh_limit " : "rayleigh_limit ") << format17(limit) << " m\n";
  return rec;
}

RunRecord run_scaling(const ScalingParams& p) {
  if (p.out.empty()) throw UsageError("--out is required");
  const auto ns = parse_n_list(p.n_list);
  const auto rows = estimation::scaling_sweep(ns, p.phi, p.trials, p.seed);
  std::ostringstream csv;
  io::write_scaling_csv(csv, rows);
  io::write_text(p.out, csv.str());
  std::cout << csv.str();
  RunRecord rec;
  rec.outputs.push_back(p.out);
  rec.seeds.push_back(p.seed);
  return rec;
}

RunRecord run_loss(const LossParams& p) {
  const auto ghz = qubit::QubitPhaseState::ghz(p.n, p.phi);
  const auto rho = qubit::lose_parties(ghz, p.lost);
  const auto fi = qubit::fisher_information(rho, p.phi);
  const auto trick = qubit::separable_trick(rho.surviving(), p.phi);
  json report{{"state", rho.record()},
              {"surviving", rho.surviving()},
              {"fisher_information", fi.value},
              {"trick_expectation", "cos(" + std::to_string(rho.surviving()) + " phi)"},
              {"trick_expectation_value", trick.expectation},
              {"trick_success_probability", trick.success_probability}};
  std::cout << rho.record() << "\n"
            << "fisher_information " << format17(fi.value) << "\n"
            << "separable_trick expectation cos(" << rho.surviving() << " phi) = " << format17(trick.expectation)
            << "\n"
            << "separable_trick success_probability " << format17(trick.success_probability) << "\n";
  RunRecord rec;
  if (!p.out.empty()) {
    io::write_text(p.out, report.dump(2) + "\n");
    rec.outputs.push_back(p.out);
  }
  return rec;
}

RunRecord run_synth(const SynthParams& p) {
  if (p.n == 0) throw UsageError("--N must be >= 1");
  if (p.target.empty()) throw UsageError("--target is required");
  if (p.out.empty()) throw UsageError("--out is required");
  const io::Profile target = io::read_profile_csv(p.target, "phi", "value");

  synth::SynthesisProblem problem;
  problem.n = p.n;
  problem.grid = target.x;
  problem.target = target.y;
  problem.dose_order = p.dose;
  problem.starts = p.starts;
  problem.max_iterations = p.max_iterations;
  problem.tolerance = p.tolerance;
  const auto sol = synth::synthesize(problem, p.seed);

  const std::string pattern_out = p.pattern_out.empty() ? stem(p.out) + "_pattern.csv" : p.pattern_out;
  io::write_text(p.out, io::solution_to_json(p.n, sol).dump(2) + "\n");
  RunRecord rec;
  rec.outputs.push_back(p.out);
  rec.outputs.push_back(pattern_out);
  rec.outputs.push_back(io::save_pattern(pattern_out, sol.achieved));
  rec.seeds.push_back(p.seed);
  std::cout << "residual " << format17(sol.residual) << "\n"
            << "iterations " << sol.iterations << "\n"
            << "converged " << (sol.converged ? "true" : "false") << "\n";
  if (sol.nonstandard_dose) std::cerr << "warning: dose order differs from N (nonstandard)\n";
  if (!sol.converged) {
    std::cerr << "warning: optimizer hit max iterations; best-so-far written\n";
    rec.exit_code = kExitNonConvergence;
  }
  return rec;
}

RunRecord dispatch(const std::string& sub, const json& params) {
  if (sub == "pattern") return run_pattern(params.get<PatternParams>());
  if (sub == "scaling") return run_scaling(params.get<ScalingParams>());
  if (sub == "loss") return run_loss(params.get<LossParams>());
  if (sub == "synth") return run_synth(params.get<SynthParams>());
  throw UsageError("unknown subcommand '" + sub + "'");
}

std::string default_manifest_path(const std::string& sub, const json& params) {
  const std::string out = params.value("out", std::string{});
  return out.empty() ? sub + ".manifest.json" : out + ".manifest.json";
}

int execute(const std::string& sub, const json& params, std::string manifest_path) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunRecord rec = dispatch(sub, params);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (manifest_path.empty()) manifest_path = default_manifest_path(sub, params);
  json manifest{{"subcommand", sub},   {"parameters", params},          {"seeds", rec.seeds},
                {"version", kVersion}, {"outputs", rec.outputs},        {"wall_clock_seconds", seconds},
                {"exit_code", rec.exit_code}};
  io::write_text(manifest_path, manifest.dump(2) + "\n");
  return rec.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum lithography and Heisenberg-limited phase estimation toolkit", "qlitho"};
  app.set_version_flag("--version", std::string("qlitho ") + kVersion);
  std::string replay;
  std::string manifest_out;
  app.add_option("--manifest", replay, "Replay the run recorded in a manifest file");
  app.add_option("--manifest-out", manifest_out, "Where to write this run's manifest");
  app.require_subcommand(0, 1);

  PatternParams pattern;
  auto* pat = app.add_subcommand("pattern", "Interference / deposition pattern");
  pat->add_option("--mode", pattern.mode, "classical, noon, psi-nm or superposition")->required();
  pat->add_option("--N", pattern.n, "Photon number");
  auto* m_opt = pat->add_option("--m", pattern.m, "Branch index for psi-nm");
  pat->add_option("--lambda", pattern.lambda, "Wavelength in meters")->capture_default_str();
  pat->add_option("--theta", pattern.theta, "Incidence angle from the normal (radians)")->capture_default_str();
  pat->add_option("--grid", pattern.grid, "Grid points per period")->capture_default_str();
  pat->add_option("--coeffs", pattern.coeffs, "JSON coefficient file for superposition mode");
  pat->add_option("--dose", pattern.dose, "Dose order (default N)");
  pat->add_option("--out", pattern.out, "Pattern CSV path")->required();

  ScalingParams scaling;
  auto* sca = app.add_subcommand("scaling", "Shot-noise vs Heisenberg scaling sweep");
  sca->add_option("--N-list", scaling.n_list, "Comma-separated photon numbers")->required();
  sca->add_option("--phi", scaling.phi, "Separable working phase (radians)")->capture_default_str();
  sca->add_option("--trials", scaling.trials, "Monte Carlo repetitions")->capture_default_str();
  sca->add_option("--seed", scaling.seed, "RNG seed")->capture_default_str();
  sca->add_option("--out", scaling.out, "Scaling CSV path")->required();

  LossParams loss;
  auto* los = app.add_subcommand("loss", "GHZ photon-loss report");
  los->add_option("--N", loss.n, "Number of parties")->required();
  los->add_option("--lost", loss.lost, "Number of lost parties")->required();
  los->add_option("--phi", loss.phi, "Phase (radians)")->capture_default_str();
  los->add_option("--out", loss.out, "Optional JSON report path");

  SynthParams syn;
  auto* sy = app.add_subcommand("synth", "Fit superposition coefficients to a target profile");
  sy->add_option("--N", syn.n, "Photon number")->required();
  sy->add_option("--target", syn.target, "Target CSV (phi,value)")->required();
  sy->add_option("--starts", syn.starts, "Optimizer starts")->capture_default_str();
  sy->add_option("--seed", syn.seed, "RNG seed")->capture_default_str();
  sy->add_option("--max-iterations", syn.max_iterations, "Iteration cap per start")->capture_default_str();
  sy->add_option("--tolerance", syn.tolerance, "Convergence tolerance")->capture_default_str();
  sy->add_option("--dose", syn.dose, "Dose order (default N)");
  sy->add_option("--out", syn.out, "Solution JSON path")->required();
  sy->add_option("--pattern-out", syn.pattern_out, "Achieved-pattern CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!replay.empty()) {
      if (!app.get_subcommands().empty()) throw UsageError("--manifest cannot be combined with a subcommand");
      const json manifest = json::parse(io::read_text(replay));
      return execute(manifest.at("subcommand").get<std::string>(), manifest.at("parameters"), manifest_out);
    }
    if (pat->parsed()) {
      if (m_opt->count() == 0) pattern.m = -1;
      return execute("pattern", json(pattern), manifest_out);
    }
    if (sca->parsed()) return execute("scaling", json(scaling), manifest_out);
    if (los->parsed()) return execute("loss", json(loss), manifest_out);
    if (sy->parsed()) return execute("synth", json(syn), manifest_out);
    std::cerr << app.help();
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const qlitho::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return kExitNumerical;
  }
}
