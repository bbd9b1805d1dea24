#include "qlitho/io.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

using namespace qlitho;

TEST(StateJson, RoundTrip) {
  const auto psi = fock::superpose(
      std::vector<fock::FockState>{fock::make_noon(5, 0.37), fock::make_psi_nm(5, 2, 1.1), fock::make_psi_nm(5, 1, 2.0)},
      std::vector<fock::Amplitude>{{0.3, 0.1}, {-0.7, 0.2}, {0.05, -0.9}});
  const auto text = io::state_to_json(psi).dump();
  const auto back = io::state_from_json(nlohmann::json::parse(text));
  ASSERT_EQ(back.size(), psi.size());
  for (const auto& [occ, amp] : psi.terms()) EXPECT_LE(std::abs(back.amplitude(occ.a, occ.b) - amp), 1e-15);
}

TEST(StateJson, RejectsMalformed) {
  EXPECT_THROW(io::state_from_json(nlohmann::json::parse(R"({"x":1})")), ParseError);
  EXPECT_THROW(io::state_from_json(nlohmann::json::parse(R"({"terms":[{"na":1,"nb":0,"re":1}]})")), ParseError);
  EXPECT_THROW(io::state_from_json(nlohmann::json::parse(R"({"terms":[{"na":-1,"nb":0,"re":1,"im":0}]})")),
               ParseError);
}

TEST(ProfileCsv, Parses) {
  std::istringstream in("phi,value\n0, 1.5\n\n0.5,2e-3\n");
  const auto p = io::read_profile_csv(in, "phi", "value");
  ASSERT_EQ(p.x.size(), 2u);
  EXPECT_EQ(p.x[1], 0.5);
  EXPECT_EQ(p.y[0], 1.5);
  EXPECT_EQ(p.y[1], 2e-3);
}

TEST(ProfileCsv, ErrorsNameTheLine) {
  auto line_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      io::read_profile_csv(in, "phi", "value");
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  EXPECT_EQ(line_of("phi,value\n0,1\n0.1,abc\n"), 3u);
  EXPECT_EQ(line_of("phi,value\n0,1,2\n"), 2u);
  EXPECT_EQ(line_of("x,y\n0,1\n"), 1u);
  EXPECT_EQ(line_of("phi,value\n0,1x\n"), 2u);
  EXPECT_EQ(line_of(""), 1u);

  std::istringstream empty("");
  try {
    io::read_profile_csv(empty, "phi", "value");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
}

TEST(PatternCsv, SeventeenDigitsAndSidecar) {
  deposition::DepositionPattern p;
  p.abscissa = {0.1, 1.0 / 3.0};
  p.values = {2.0 / 3.0, 0.0};
  p.dose_order = 4;
  p.maxima_count = 1;
  std::ostringstream os;
  io::write_pattern_csv(os, p);
  EXPECT_EQ(os.str(), "abscissa,value\n0.10000000000000001,0.66666666666666663\n0.33333333333333331,0\n");
  std::istringstream back(os.str());
  const auto prof = io::read_profile_csv(back, "abscissa", "value");
  EXPECT_EQ(prof.x[1], 1.0 / 3.0);
  EXPECT_EQ(prof.y[0], 2.0 / 3.0);

  const auto side = io::pattern_sidecar(p);
  EXPECT_EQ(side["dose_order"], 4);
  EXPECT_EQ(side["abscissa_kind"], "phase");
  EXPECT_EQ(side["maxima_count"], 1);
  EXPECT_EQ(side["grid_size"], 2);
  EXPECT_EQ(io::sidecar_path("out/noon4.csv"), "out/noon4.json");
  EXPECT_EQ(io::sidecar_path("a.b/pattern"), "a.b/pattern.json");
}

TEST(PatternCsv, SaveWritesBothFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "qlitho_io_test";
  std::filesystem::create_directories(dir);
  deposition::DepositionPattern p;
  p.abscissa = {0.0};
  p.values = {1.0};
  const auto side = io::save_pattern((dir / "p.csv").string(), p);
  EXPECT_TRUE(std::filesystem::exists(dir / "p.csv"));
  EXPECT_EQ(nlohmann::json::parse(io::read_text(side))["grid_size"], 1);
  std::filesystem::remove_all(dir);
}

TEST(ScalingCsv, Header) {
  std::ostringstream os;
  io::write_scaling_csv(os, {estimation::ScalingRow{}});
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')),
            "N,analytic_separable,analytic_entangled,mc_separable,mc_entangled,mt_bound,ml_bound");
}

TEST(AlphaJson, RoundTrip) {
  const std::vector<std::complex<double>> a{{0.6, 0.0}, {0.1, -0.7}, {1e-300, 0.3}};
  const auto b = io::alpha_from_json(nlohmann::json::parse(io::alpha_to_json(a).dump()));
  ASSERT_EQ(b.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
  EXPECT_THROW(io::alpha_from_json(nlohmann::json::array()), ParseError);
}
