// giftsim: run gift-economy scenarios and report on their traces.
//
//   giftsim run CONFIG [--out FILE] [--max-steps N]       trace CSV
//   giftsim analyze CONFIG [--out FILE] [--max-steps N]   report JSON
//             [--analyses distribution,equilibrium,...]
//   giftsim echo CONFIG                                   re-emit the parsed scenario
//   giftsim check [--jobs N]                              acceptance criteria
//
// Exit codes: 0 success, 1 invalid input or failed check, 2 analysis not
// applicable to the scenario.

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "acceptance/criteria.hpp"
#include "giftsim/analytics.hpp"
#include "giftsim/io.hpp"

namespace {

constexpr int kInvalidInput = 1;
constexpr int kInapplicable = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + out_path);
  out << text;
}

giftsim::ScenarioConfig load(const std::string& path, std::size_t max_steps) {
  giftsim::ScenarioConfig config = giftsim::parse_scenario(read_file(path));
  if (max_steps > 0) config.scenario.max_steps = max_steps;
  return config;
}

std::vector<giftsim::Analysis> parse_analyses(const std::vector<std::string>& names) {
  std::vector<giftsim::Analysis> out;
  for (const auto& name : names) {
    const auto a = giftsim::analysis_from_string(name);
    if (!a) throw std::invalid_argument("unknown analysis '" + name + "'");
    out.push_back(*a);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic simulator for gift economies with pairwise social-credit ledgers"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::size_t max_steps = 0;
  std::vector<std::string> analyses;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

  auto* run_cmd = app.add_subcommand("run", "Run a scenario and print its trace as CSV");
  run_cmd->add_option("config", config_path, "Scenario file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out,-o", out_path, "Write to FILE instead of stdout");
  run_cmd->add_option("--max-steps", max_steps, "Override the scenario's max_steps")->check(CLI::PositiveNumber);

  auto* analyze_cmd = app.add_subcommand("analyze", "Run a scenario and print the analysis report as JSON");
  analyze_cmd->add_option("config", config_path, "Scenario file")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--out,-o", out_path, "Write to FILE instead of stdout");
  analyze_cmd->add_option("--max-steps", max_steps, "Override the scenario's max_steps")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--analyses", analyses, "Override the scenario's analyses")->delimiter(',');

  auto* echo_cmd = app.add_subcommand("echo", "Print the scenario as parsed");
  echo_cmd->add_option("config", config_path, "Scenario file")->required()->check(CLI::ExistingFile);

  auto* check_cmd = app.add_subcommand("check", "Run the acceptance criteria and print pass/fail");
  check_cmd->add_option("--jobs,-j", jobs, "Criteria to run in parallel")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalidInput;
  }

  try {
    if (*run_cmd) {
      const auto config = load(config_path, max_steps);
      write_output(giftsim::emit_trace(giftsim::run(config.scenario)), out_path);
    } else if (*analyze_cmd) {
      const auto config = load(config_path, max_steps);
      const auto requested = analyses.empty() ? config.analyses : parse_analyses(analyses);
      const auto trace = giftsim::run(config.scenario);
      write_output(giftsim::emit_report(trace, requested, config.cycle_tolerance), out_path);
    } else if (*echo_cmd) {
      std::cout << giftsim::format_scenario(load(config_path, 0));
    } else if (*check_cmd) {
      int failed = 0;
      const auto results = giftsim::acceptance::run_all(jobs);
      for (const auto& r : results) {
        std::cout << giftsim::acceptance::format_result(r) << "\n";
        failed += r.passed ? 0 : 1;
      }
      std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
      return failed == 0 ? 0 : kInvalidInput;
    }
  } catch (const giftsim::AnalysisError& e) {
    std::cerr << "giftsim: analysis not applicable: " << e.what() << "\n";
    return kInapplicable;
  } catch (const std::exception& e) {
    std::cerr << "giftsim: " << e.what() << "\n";
    return kInvalidInput;
  }
  return 0;
}
