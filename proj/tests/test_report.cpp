#include <gtest/gtest.h>

#include <cstdlib>
#include <string>

#include "commands.hpp"
#include "dwell/report.hpp"

using namespace dwell;

TEST(Format, FourDecimalsRoundHalfToEven) {
  EXPECT_EQ(format_fixed(1.0), "1.0000");
  EXPECT_EQ(format_fixed(0.99999), "1.0000");
  EXPECT_EQ(format_fixed(1.7320508), "1.7321");
  // exact binary ties
  EXPECT_EQ(format_fixed(0.03125), "0.0312");
  EXPECT_EQ(format_fixed(0.09375), "0.0938");
  EXPECT_EQ(format_fixed(0.28125), "0.2812");
  EXPECT_EQ(format_fixed(-0.00001), "0.0000");
  EXPECT_EQ(format_fixed(-1.25), "-1.2500");
}

TEST(Format, SeventeenSignificantDigitsRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 4.5588879324, 1e-300, -2.5e10}) {
    EXPECT_EQ(std::strtod(format_sig17(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(format_sig17(0.1), "0.10000000000000001");
}

TEST(Json, FloatsCarrySeventeenDigits) {
  const json j = {{"e", 0.1}, {"n", 3}, {"v", {1.0 / 3.0, 2.0}}, {"s", "x"}};
  const auto text = dump_json(j, 0);
  EXPECT_EQ(text, "{\"e\":0.10000000000000001,\"n\":3,\"s\":\"x\",\"v\":[0.33333333333333331,2]}\n");
  EXPECT_EQ(json::parse(text)["e"].get<double>(), 0.1);
}

TEST(Json, EnvelopeCarriesSchemaAndConfig) {
  const auto j = with_envelope("solve", {{"g", 1.0}}, {{"energies", {1.0}}});
  EXPECT_EQ(j["schema"], "dwell/1 solve");
  EXPECT_EQ(j["config"]["g"], 1.0);
  const auto pre = csv_preamble("table", {{"g", 1.0}});
  EXPECT_EQ(pre, "# schema: dwell/1 table\n# config: {\"g\":1}\n");
}

TEST(Interpolate, Linear) {
  const std::vector<double> xs{0, 1, 2}, ys{0, 10, 30};
  EXPECT_DOUBLE_EQ(interpolate(xs, ys, 0.5), 5.0);
  EXPECT_DOUBLE_EQ(interpolate(xs, ys, 1.5), 20.0);
  EXPECT_DOUBLE_EQ(interpolate(xs, ys, -1.0), 0.0);
  EXPECT_DOUBLE_EQ(interpolate(xs, ys, 3.0), 30.0);
}

TEST(RunConfig, JsonOverlay) {
  cli::RunConfig c;
  cli::apply_json(c, json::parse(R"({"g": 2.5, "bc": "I", "n_points": 400})"));
  EXPECT_EQ(c.g, 2.5);
  EXPECT_EQ(c.bc, "I");
  EXPECT_EQ(c.n_points, 400);
  EXPECT_EQ(c.a, 2.0);
  EXPECT_THROW(cli::apply_json(c, json::parse(R"({"shape": 1})")), cli::ConfigError);
  EXPECT_THROW(cli::apply_json(c, json::parse(R"({"g": "one"})")), cli::ConfigError);
  EXPECT_THROW(cli::apply_json(c, json::parse("[1]")), cli::ConfigError);
  cli::RunConfig d;
  cli::apply_json(d, json::object());
  EXPECT_EQ(cli::to_json(d), cli::to_json(cli::RunConfig{}));
}

TEST(RunConfig, Validation) {
  cli::RunConfig c;
  EXPECT_NO_THROW(cli::validate(c));
  c.format = "xml";
  EXPECT_THROW(cli::validate(c), cli::ConfigError);
  c = {};
  c.n_points = 301;
  EXPECT_THROW(cli::validate(c), cli::ConfigError);
  c = {};
  c.bc = "III";
  EXPECT_THROW(cli::validate(c), ParameterError);
  c = {};
  c.x_max = 7.0;
  EXPECT_THROW(cli::validate(c), cli::ConfigError);   // oracle box must be wider
  c = {};
  EXPECT_EQ(cli::run_tag(c), "g1_a2_II");
}

TEST(Commands, SolveExitCodes) {
  std::ostringstream out, err;
  cli::RunConfig c;
  c.out = ::testing::TempDir() + "dwell_cmd";
  c.a = 1.0;
  EXPECT_EQ(cli::cmd_solve(c, out, err), cli::kExitConfig);
  EXPECT_NE(err.str().find("g > sqrt(1+a)/a"), std::string::npos);
  c.a = 2.0;
  c.max_iter = 5;
  c.tol = 0.0;
  EXPECT_EQ(cli::cmd_solve(c, out, err), cli::kExitOk);
  EXPECT_EQ(out.str().substr(0, 41), "1.7321 1.0163 0.9981 1.0002 1.0000 1.0000");
}
