#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "giftsim/analytics.hpp"
#include "giftsim/io.hpp"

using namespace giftsim;

namespace {

std::string read_scenario(const std::string& name) {
  std::ifstream in(std::filesystem::path(GIFTSIM_SCENARIO_DIR) / name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kMinimal = R"(entities ["P", "Q"]
goods ["a"]
curve {"supplier": "P", "good": "a", "recipient": "Q", "a": 0.5, "b": 1}
cycle [["supply", "P", "a"], ["demand", "Q", "a"]]
mode "force-all"
max_steps 3
)";

std::string replace_line(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

}  // namespace

TEST(ParseScenario, MinimalConfig) {
  const auto config = parse_scenario(kMinimal);
  EXPECT_EQ(config.scenario.entities, (std::vector<EntityId>{"P", "Q"}));
  EXPECT_EQ(config.scenario.max_steps, 3u);
  EXPECT_EQ(config.scenario.mode, SelectionMode::ForceAll);
  EXPECT_EQ(config.scenario.curves.at(Transaction("P", "a", "Q")), YieldCurve(0.5, 1.0));
  EXPECT_TRUE(config.analyses.empty());
}

TEST(ParseScenario, FormatRoundTripsEveryScenario) {
  std::size_t seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(GIFTSIM_SCENARIO_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    ++seen;
    const auto config = parse_scenario(read_scenario(entry.path().filename().string()));
    const auto text = format_scenario(config);
    EXPECT_EQ(parse_scenario(text), config) << entry.path();
    EXPECT_EQ(format_scenario(parse_scenario(text)), text) << entry.path();
  }
  EXPECT_GE(seen, 5u);
}

TEST(ParseScenario, CoefficientAtOrAboveOneRejected) {
  const auto text = replace_line(kMinimal, "\"a\": 0.5", "\"a\": 1.2");
  try {
    parse_scenario(text);
    FAIL() << "accepted a = 1.2";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(ParseScenario, ErrorsCiteLineAndField) {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"max_steps 3", "max_steps 3\ncolour \"red\""},
      {"max_steps 3", "max_steps 3\nmax_steps 4"},
      {"\"recipient\": \"Q\"", "\"recipient\": \"Z\""},
      {"\"b\": 1}", "\"b\": 1, \"c\": 2}"},
      {"mode \"force-all\"", "mode \"greedy\""},
      {"max_steps 3", "max_steps 0"},
      {"max_steps 3", "max_steps [3"},
  };
  for (const auto& [from, to] : cases) {
    EXPECT_THROW(parse_scenario(replace_line(kMinimal, from, to)), ConfigError) << to;
  }
}

TEST(ParseScenario, MissingCycleRejected) {
  EXPECT_THROW(parse_scenario(replace_line(kMinimal, "cycle [[\"supply\", \"P\", \"a\"], [\"demand\", \"Q\", \"a\"]]\n", "")),
               ConfigError);
}

TEST(ParseScenario, CommentsAndCountsAccepted) {
  const auto text = replace_line(kMinimal, "[\"demand\", \"Q\", \"a\"]]", "[\"demand\", \"Q\", \"a\", 2]]\n  # two units");
  const auto config = parse_scenario("# header\n\n" + text);
  EXPECT_EQ(config.scenario.states.at(1).occurrences(Offer::demand("Q", "a")), 2u);
}

TEST(EmitTrace, RepeatedGiftRows) {
  const auto trace = run(parse_scenario(kMinimal).scenario);
  EXPECT_EQ(emit_trace(trace),
            "step,supplier,good,recipient,yield,balance_after\n"
            "1,P,a,Q,1,1\n"
            "2,P,a,Q,0.5,1.5\n"
            "3,P,a,Q,0.25,1.75\n");
}

TEST(EmitTrace, IdleStepRow) {
  const auto text = replace_line(replace_line(kMinimal, "\"b\": 1", "\"b\": 0"), "\"force-all\"", "\"hyr-single\"");
  Scenario scenario = parse_scenario(text).scenario;
  const auto trace = run(scenario);
  ASSERT_FALSE(trace.steps.empty());
  EXPECT_NE(emit_trace(trace).find("\n1,,,,,0\n"), std::string::npos);
}

TEST(EmitTrace, DeterministicAcrossRuns) {
  const auto config = parse_scenario(read_scenario("supply_market.cfg"));
  EXPECT_EQ(emit_trace(run(config.scenario)), emit_trace(run(config.scenario)));
}

TEST(EmitReport, AlternatingReportHasRequestedSections) {
  const auto config = parse_scenario(read_scenario("alternating_1_1.cfg"));
  Scenario scenario = config.scenario;
  scenario.initial_balances.set_balance("P", "Q", Real(0.3));
  scenario.max_steps = 40;
  const auto report = nlohmann::json::parse(emit_report(run(scenario), {Analysis::Equilibrium, Analysis::Contraction}, 1e-6));
  EXPECT_EQ(report["run"]["steps"], 40);
  EXPECT_EQ(report["run"]["halt_reason"], "max-steps");
  EXPECT_NEAR(report["equilibrium"]["closed_form"]["x_low"].get<double>(), -2.0 / 3.0, 1e-12);
  EXPECT_NEAR(report["contraction"]["theoretical"].get<double>(), 0.25, 1e-15);
  EXPECT_NEAR(report["contraction"]["measured"].get<double>(), 0.25, 1e-9);
  EXPECT_FALSE(report.contains("cycle"));
}

TEST(EmitReport, TradeAnalysisOnOneWayScenarioIsInapplicable) {
  const auto trace = run(parse_scenario(kMinimal).scenario);
  EXPECT_THROW(emit_report(trace, {Analysis::Equilibrium}), AnalysisError);
}
