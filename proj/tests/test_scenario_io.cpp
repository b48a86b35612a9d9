#include <gtest/gtest.h>

#include <algorithm>

#include "vcz/random_scenario.hpp"
#include "vcz/scenario_io.hpp"

using namespace vcz;

namespace {

const std::string kScenarioDir = VCZ_SCENARIO_DIR;

const char* kCustom = R"(
name = custom
[plant]
model = expr
dim = 2
f1 = (* 0.5 (sin x2))
f2 = (cos x1)
g1_1 = 2
g2_2 = (+ 1.5 (* 0.25 (sin x1)))
w1 = (* 0.1 (sin t))
sign_class = positive_definite

[virtual]
model = expr
m = 2
f1 = 0
g1_1 = 1
g2_2 = 1

[obstacle]
kind = custom
path1 = (+ 4 (cos t))
path2 = (+ 4 (sin t))
radius = 0.6

[target]
center = 8 8
radius = 1
[vcz]
r_c = 0.4
[horizon]
t_f = 6
dt = 0.002
[shrink]
r_start = 12
r_end = 0.5
[controller]
k = 4
alphas = 1 2
qp_H = 2 0 0 1
qp_F = 0.1 -0.1
[initial_state]
x0 = 0.5 0.25
[run]
seed = 42
)";

std::string line_with(const std::string& text, const std::string& from, const std::string& to) {
  std::string out = text;
  const auto pos = out.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return out.replace(pos, from.size(), to);
}

}  // namespace

TEST(ScenarioIo, BundledBenchmarkMatchesBuiltIn) {
  const Scenario s = load_scenario(kScenarioDir + "/benchmark.vcz");
  EXPECT_EQ(s, benchmark_scenario());
  EXPECT_EQ(scenario_hash(s), scenario_hash(benchmark_scenario()));
}

TEST(ScenarioIo, RoundTrip) {
  std::vector<Scenario> cases = {benchmark_scenario(), parse_scenario(kCustom)};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) cases.push_back(random_scenario(seed));
  for (const auto& s : cases) {
    const std::string text = serialize_scenario(s);
    const Scenario back = parse_scenario(text);
    EXPECT_EQ(back, s) << text;
    EXPECT_EQ(serialize_scenario(back), text);
  }
}

TEST(ScenarioIo, CustomFields) {
  const Scenario s = parse_scenario(kCustom);
  EXPECT_EQ(s.plant.catalog, "expr");
  EXPECT_EQ(s.obstacles.size(), 1u);
  EXPECT_EQ(s.obstacles[0].kind, ObstacleKind::Custom);
  EXPECT_NEAR(s.obstacles[0].center(M_PI / 2)[1], 5.0, 1e-12);
  EXPECT_EQ(s.alphas.size(), 2u);
  EXPECT_EQ(s.qp_H(0, 0), 2.0);
  EXPECT_EQ(s.qp_F[1], -0.1);
  EXPECT_EQ(s.seed, 42u);
  EXPECT_EQ(s.dt, 0.002);
  EXPECT_DOUBLE_EQ(s.plant.g(Eigen::Vector2d(0, 0))(1, 1), 1.5);
  EXPECT_EQ(s.plant.g(Eigen::Vector2d(0, 0))(0, 1), 0.0);
}

TEST(ScenarioIo, ErrorsNameKeyAndLine) {
  const std::string base = kCustom;
  struct Case {
    std::string text;
    std::string key;
  };
  const std::vector<Case> cases = {
      {line_with(base, "r_c = 0.4", "r_c = 0.4x"), "r_c"},
      {line_with(base, "radius = 1\n", "radius = nan\n"), "radius"},
      {line_with(base, "k = 4", "k = 4\ngain = 3"), "gain"},
      {line_with(base, "x0 = 0.5 0.25", "x0 = 0.5 0.25\nx0 = 1 1"), "x0"},
      {line_with(base, "f2 = (cos x1)", "f2 = (cosine x1)"), "f2"},
      {line_with(base, "qp_H = 2 0 0 1", "qp_H = 2 0 0"), "qp_H"},
      {line_with(base, "seed = 42", "seed = 4.5"), "seed"},
  };
  for (const auto& c : cases) {
    try {
      parse_scenario(c.text);
      ADD_FAILURE() << "expected ParseError for key " << c.key;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.key(), c.key) << e.what();
      EXPECT_GT(e.line(), 0) << e.what();
    }
  }
}

TEST(ScenarioIo, StructuralErrors) {
  EXPECT_THROW(parse_scenario(line_with(kCustom, "[vcz]", "[zone]")), ParseError);
  EXPECT_THROW(parse_scenario(line_with(kCustom, "[vcz]\nr_c = 0.4", "")), ParseError);
  EXPECT_THROW(parse_scenario(line_with(kCustom, "[vcz]", "[vcz")), ParseError);
  EXPECT_THROW(parse_scenario(line_with(kCustom, "r_c = 0.4", "r_c 0.4")), ParseError);
  EXPECT_THROW(load_scenario("/nonexistent/file.vcz"), ParseError);
}

TEST(ScenarioIo, ParseErrorReportsLineNumber) {
  const std::string text = line_with(kCustom, "r_c = 0.4", "r_c = abc");
  const auto pos = text.find("r_c = abc");
  const int expected_line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + pos, '\n'));
  try {
    parse_scenario(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), expected_line);
    EXPECT_EQ(e.key(), "r_c");
  }
}

TEST(ScenarioIo, HashDistinguishesScenarios) {
  Scenario a = benchmark_scenario();
  Scenario b = a;
  b.dt = 5e-4;
  EXPECT_NE(scenario_hash(a), scenario_hash(b));
  EXPECT_EQ(hash_hex(0xabcULL), "0000000000000abc");
}
