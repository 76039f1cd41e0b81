#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "giftsim/engine.hpp"

namespace giftsim {

enum class Analysis { Distribution, Equilibrium, Contraction, Cycle };

std::string_view to_string(Analysis analysis);
std::optional<Analysis> analysis_from_string(std::string_view name);
std::optional<SelectionMode> mode_from_string(std::string_view name);

// A scenario file: the scenario plus what to report about its trace.
struct ScenarioConfig {
  Scenario scenario;
  std::vector<Analysis> analyses;
  double cycle_tolerance = 1e-9;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// Malformed or invalid scenario text. what() cites the line and field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::size_t line, const std::string& field, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

// Line-oriented format: one `key <json value>` per line, `#` comments.
//
//   entities   ["P", "Q"]
//   goods      ["a"]
//   curve      {"supplier": "P", "good": "a", "recipient": "Q", "a": 0.5, "b": 1}
//   balance    {"of": "P", "with": "Q", "value": 0}
//   prefix     [["supply", "P", "a"], ["demand", "Q", "a", 2]]
//   cycle      [["supply", "P", "a"], ["demand", "Q", "a"]]
//   mode       "hyr" | "hyr-single" | "force-all"
//   max_steps  50
//   analyses   ["distribution", "equilibrium", "contraction", "cycle"]
//   cycle_tolerance 1e-9
//
// curve, balance, prefix and cycle repeat; prefix and cycle lines append one
// state each, in file order. At least one cycle line is required.
ScenarioConfig parse_scenario(std::string_view text);

// Inverse of parse_scenario up to formatting.
std::string format_scenario(const ScenarioConfig& config);

// CSV with header step,supplier,good,recipient,yield,balance_after. One row
// per selected transaction occurrence, ordered by (step, supplier, good,
// recipient); balance_after is A(supplier, recipient) after the step. A step
// that selects nothing gets one row with empty transaction fields and the
// balance of the first two declared entities.
std::string emit_trace(const Trace& trace);

// JSON report with one key per requested analysis, in request order.
// Throws AnalysisError when an analysis does not fit the scenario.
std::string emit_report(const Trace& trace, const std::vector<Analysis>& analyses, double cycle_tolerance = 1e-9);

}  // namespace giftsim
