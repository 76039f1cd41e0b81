#include "giftsim/io.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "giftsim/analytics.hpp"

namespace giftsim {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(Analysis analysis) {
  switch (analysis) {
    case Analysis::Distribution: return "distribution";
    case Analysis::Equilibrium: return "equilibrium";
    case Analysis::Contraction: return "contraction";
    case Analysis::Cycle: return "cycle";
  }
  return "?";
}

std::optional<Analysis> analysis_from_string(std::string_view name) {
  for (Analysis a : {Analysis::Distribution, Analysis::Equilibrium, Analysis::Contraction, Analysis::Cycle}) {
    if (name == to_string(a)) return a;
  }
  return std::nullopt;
}

std::optional<SelectionMode> mode_from_string(std::string_view name) {
  for (SelectionMode m : {SelectionMode::HighestYield, SelectionMode::HighestYieldSingle, SelectionMode::ForceAll}) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

ConfigError::ConfigError(std::size_t line, const std::string& field, const std::string& message)
    : std::invalid_argument(line == 0 ? field + ": " + message
                                      : "line " + std::to_string(line) + ", " + field + ": " + message),
      line_(line),
      field_(field) {}

namespace {

struct Entry {
  std::size_t line;
  std::string key;
  json value;
};

const std::set<std::string, std::less<>> kKeys{"entities", "goods", "curve",    "balance",  "prefix",
                                                "cycle",    "mode",  "max_steps", "analyses", "cycle_tolerance"};
const std::set<std::string, std::less<>> kRepeatable{"curve", "balance", "prefix", "cycle"};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

class Parser {
 public:
  explicit Parser(std::string_view text) { read_lines(text); }

  ScenarioConfig build() {
    declare();
    CurveTable curves;
    Ledger balances;
    std::vector<State> prefix, cycle;
    std::size_t max_steps = 100;
    SelectionMode mode = SelectionMode::HighestYield;
    std::vector<Analysis> analyses;
    double tolerance = 1e-9;
    std::size_t cycle_line = 0;

    for (const Entry& e : entries_) {
      if (e.key == "curve") {
        read_curve(e, curves);
      } else if (e.key == "balance") {
        read_balance(e, balances);
      } else if (e.key == "prefix") {
        prefix.push_back(read_state(e));
      } else if (e.key == "cycle") {
        cycle.push_back(read_state(e));
        cycle_line = e.line;
      } else if (e.key == "mode") {
        mode = read_mode(e);
      } else if (e.key == "max_steps") {
        if (!e.value.is_number_unsigned() || e.value.get<std::uint64_t>() == 0) {
          throw ConfigError(e.line, e.key, "expected a positive integer");
        }
        max_steps = e.value.get<std::size_t>();
      } else if (e.key == "analyses") {
        analyses = read_analyses(e);
      } else if (e.key == "cycle_tolerance") {
        if (!e.value.is_number() || !(e.value.get<double>() > 0.0)) {
          throw ConfigError(e.line, e.key, "expected a positive number");
        }
        tolerance = e.value.get<double>();
      }
    }
    if (cycle.empty()) throw ConfigError(0, "cycle", "state cycle must contain at least one state");

    ScenarioConfig config{Scenario{entities_, goods_, std::move(curves), std::move(balances),
                                   StateSequence(std::move(prefix), std::move(cycle)), max_steps, mode},
                          std::move(analyses), tolerance};
    try {
      config.scenario.validate();
    } catch (const std::exception& ex) {
      throw ConfigError(cycle_line, "scenario", ex.what());
    }
    return config;
  }

 private:
  void read_lines(std::string_view text) {
    std::size_t line_no = 0;
    std::set<std::string> seen;
    while (!text.empty()) {
      const auto nl = text.find('\n');
      const std::string line = trim(text.substr(0, nl));
      text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
      ++line_no;
      if (line.empty() || line.front() == '#') continue;
      const auto space = line.find_first_of(" \t");
      const std::string key = line.substr(0, space);
      if (!kKeys.count(key)) throw ConfigError(line_no, key, "unknown key");
      if (!kRepeatable.count(key) && !seen.insert(key).second) throw ConfigError(line_no, key, "given more than once");
      const std::string rest = space == std::string::npos ? std::string{} : trim(line.substr(space));
      if (rest.empty()) throw ConfigError(line_no, key, "missing value");
      try {
        entries_.push_back({line_no, key, json::parse(rest)});
      } catch (const json::parse_error& ex) {
        throw ConfigError(line_no, key, std::string("syntax error: ") + ex.what());
      }
    }
  }

  void declare() {
    bool have_entities = false, have_goods = false;
    for (const Entry& e : entries_) {
      if (e.key == "entities") {
        for (const auto& name : string_list(e)) {
          if (std::find(entities_.begin(), entities_.end(), EntityId(name)) != entities_.end()) {
            throw ConfigError(e.line, e.key, "duplicate entity '" + name + "'");
          }
          entities_.emplace_back(name);
        }
        have_entities = true;
      } else if (e.key == "goods") {
        for (const auto& name : string_list(e)) {
          if (std::find(goods_.begin(), goods_.end(), GoodId(name)) != goods_.end()) {
            throw ConfigError(e.line, e.key, "duplicate good '" + name + "'");
          }
          goods_.emplace_back(name);
        }
        have_goods = true;
      }
    }
    if (!have_entities) throw ConfigError(0, "entities", "missing declaration");
    if (!have_goods) throw ConfigError(0, "goods", "missing declaration");
  }

  static std::vector<std::string> string_list(const Entry& e) {
    if (!e.value.is_array() || e.value.empty()) throw ConfigError(e.line, e.key, "expected a non-empty array of names");
    std::vector<std::string> out;
    for (const auto& v : e.value) {
      if (!v.is_string() || v.get<std::string>().empty()) throw ConfigError(e.line, e.key, "names must be non-empty strings");
      out.push_back(v.get<std::string>());
    }
    return out;
  }

  EntityId entity(const Entry& e, const json& v, const std::string& field) const {
    if (!v.is_string() || v.get<std::string>().empty()) throw ConfigError(e.line, field, "expected an entity name");
    EntityId id(v.get<std::string>());
    if (std::find(entities_.begin(), entities_.end(), id) == entities_.end()) {
      throw ConfigError(e.line, field, "undeclared entity '" + id.str() + "'");
    }
    return id;
  }

  GoodId good(const Entry& e, const json& v, const std::string& field) const {
    if (!v.is_string() || v.get<std::string>().empty()) throw ConfigError(e.line, field, "expected a good name");
    GoodId id(v.get<std::string>());
    if (std::find(goods_.begin(), goods_.end(), id) == goods_.end()) {
      throw ConfigError(e.line, field, "undeclared good '" + id.str() + "'");
    }
    return id;
  }

  static void require_fields(const Entry& e, std::initializer_list<const char*> fields) {
    if (!e.value.is_object()) throw ConfigError(e.line, e.key, "expected an object");
    for (const auto& [name, v] : e.value.items()) {
      if (std::none_of(fields.begin(), fields.end(), [&](const char* f) { return name == f; })) {
        throw ConfigError(e.line, e.key + "." + name, "unknown field");
      }
    }
    for (const char* f : fields) {
      if (!e.value.contains(f)) throw ConfigError(e.line, e.key + "." + f, "missing field");
    }
  }

  static double number(const Entry& e, const char* field) {
    const json& v = e.value.at(field);
    if (!v.is_number()) throw ConfigError(e.line, e.key + "." + field, "expected a number");
    return v.get<double>();
  }

  void read_curve(const Entry& e, CurveTable& curves) const {
    require_fields(e, {"supplier", "good", "recipient", "a", "b"});
    const EntityId supplier = entity(e, e.value["supplier"], "curve.supplier");
    const EntityId recipient = entity(e, e.value["recipient"], "curve.recipient");
    const GoodId g = good(e, e.value["good"], "curve.good");
    if (supplier == recipient) throw ConfigError(e.line, "curve", "supplier and recipient must differ");
    const double a = number(e, "a");
    const double b = number(e, "b");
    Transaction t(supplier, g, recipient);
    if (curves.contains(t)) throw ConfigError(e.line, "curve", "duplicate curve for this transaction");
    try {
      curves.set(t, YieldCurve(a, b));
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(e.line, a < 0.0 || a >= 1.0 ? "curve.a" : "curve.b", ex.what());
    }
  }

  void read_balance(const Entry& e, Ledger& balances) const {
    require_fields(e, {"of", "with", "value"});
    const EntityId of = entity(e, e.value["of"], "balance.of");
    const EntityId with = entity(e, e.value["with"], "balance.with");
    if (of == with) throw ConfigError(e.line, "balance", "an entity has no balance with itself");
    balances.set_balance(of, with, Real(number(e, "value")));
  }

  State read_state(const Entry& e) const {
    if (!e.value.is_array()) throw ConfigError(e.line, e.key, "expected an array of offers");
    State state;
    for (const auto& offer : e.value) {
      if (!offer.is_array() || offer.size() < 3 || offer.size() > 4 || !offer[0].is_string()) {
        throw ConfigError(e.line, e.key, "offers look like [\"supply\"|\"demand\", entity, good(, count)]");
      }
      const std::string kind = offer[0].get<std::string>();
      if (kind != "supply" && kind != "demand") throw ConfigError(e.line, e.key, "unknown offer kind '" + kind + "'");
      std::size_t count = 1;
      if (offer.size() == 4) {
        if (!offer[3].is_number_unsigned() || offer[3].get<std::uint64_t>() == 0) {
          throw ConfigError(e.line, e.key, "offer count must be a positive integer");
        }
        count = offer[3].get<std::size_t>();
      }
      EntityId who = entity(e, offer[1], e.key);
      GoodId what = good(e, offer[2], e.key);
      state.add(kind == "supply" ? Offer::supply(std::move(who), std::move(what))
                                 : Offer::demand(std::move(who), std::move(what)),
                count);
    }
    return state;
  }

  static SelectionMode read_mode(const Entry& e) {
    if (e.value.is_string()) {
      if (auto mode = mode_from_string(e.value.get<std::string>())) return *mode;
    }
    throw ConfigError(e.line, e.key, "expected \"hyr\", \"hyr-single\" or \"force-all\"");
  }

  static std::vector<Analysis> read_analyses(const Entry& e) {
    if (!e.value.is_array()) throw ConfigError(e.line, e.key, "expected an array");
    std::vector<Analysis> out;
    for (const auto& v : e.value) {
      const auto a = v.is_string() ? analysis_from_string(v.get<std::string>()) : std::nullopt;
      if (!a) throw ConfigError(e.line, e.key, "unknown analysis " + v.dump());
      if (std::find(out.begin(), out.end(), *a) != out.end()) throw ConfigError(e.line, e.key, "duplicate analysis");
      out.push_back(*a);
    }
    return out;
  }

  std::vector<Entry> entries_;
  std::vector<EntityId> entities_;
  std::vector<GoodId> goods_;
};

ordered_json state_json(const State& state) {
  ordered_json offers = ordered_json::array();
  for (const auto& [offer, count] : state) {
    ordered_json o = ordered_json::array(
        {offer.kind == OfferKind::Supply ? "supply" : "demand", offer.entity.str(), offer.good.str()});
    if (count != 1) o.push_back(count);
    offers.push_back(std::move(o));
  }
  return offers;
}

ordered_json transaction_json(const Transaction& t) {
  return ordered_json{{"supplier", t.supplier().str()}, {"good", t.good().str()}, {"recipient", t.recipient().str()}};
}

ordered_json valuations_json(const std::vector<Valuation>& valuations) {
  ordered_json out = ordered_json::array();
  for (const auto& v : valuations) {
    ordered_json item = transaction_json(v.transaction);
    item["count"] = v.count;
    item["yield"] = static_cast<double>(v.yield);
    out.push_back(std::move(item));
  }
  return out;
}

struct TradePair {
  EntityId p;
  EntityId q;
  YieldCurve p_curve;
  YieldCurve q_curve;
};

// Two entities trading in both directions, one curve each way.
TradePair trade_pair(const Trace& trace, std::string_view analysis) {
  const Scenario& s = *trace.scenario;
  const std::string prefix(analysis);
  if (s.entities.size() != 2) throw AnalysisError(prefix + ": needs exactly two trading entities");
  const EntityId& p = s.entities[0];
  const EntityId& q = s.entities[1];
  const YieldCurve* p_curve = nullptr;
  const YieldCurve* q_curve = nullptr;
  for (const auto& [t, curve] : s.curves) {
    const YieldCurve*& slot = t.supplier() == p ? p_curve : q_curve;
    if (slot != nullptr) throw AnalysisError(prefix + ": needs exactly one curve in each direction");
    slot = &curve;
  }
  if (p_curve == nullptr || q_curve == nullptr) {
    throw AnalysisError(prefix + ": scenario is a one-sided gift, not a trade");
  }
  return {p, q, *p_curve, *q_curve};
}

template <class F>
auto as_analysis(std::string_view analysis, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::domain_error& e) {
    throw AnalysisError(std::string(analysis) + ": " + e.what());
  }
}

ordered_json cycle_json(const std::vector<CyclePoint>& points) {
  ordered_json list = ordered_json::array();
  for (const auto& pt : points) {
    list.push_back(ordered_json{{"step", pt.step}, {"balance", pt.balance}, {"valuations", valuations_json(pt.valuations)}});
  }
  return list;
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view text) { return Parser(text).build(); }

std::string format_scenario(const ScenarioConfig& config) {
  const Scenario& s = config.scenario;
  std::ostringstream out;
  ordered_json entities = ordered_json::array(), goods = ordered_json::array();
  for (const auto& e : s.entities) entities.push_back(e.str());
  for (const auto& g : s.goods) goods.push_back(g.str());
  out << "entities " << entities.dump() << "\n";
  out << "goods " << goods.dump() << "\n";
  for (const auto& [t, curve] : s.curves) {
    ordered_json c = transaction_json(t);
    c["a"] = curve.coefficient();
    c["b"] = curve.nominal();
    out << "curve " << c.dump() << "\n";
  }
  for (const auto& pb : s.initial_balances.balances()) {
    out << "balance "
        << ordered_json{{"of", pb.first.str()}, {"with", pb.second.str()}, {"value", static_cast<double>(pb.balance)}}.dump()
        << "\n";
  }
  for (const auto& st : s.states.prefix()) out << "prefix " << state_json(st).dump() << "\n";
  for (const auto& st : s.states.cycle()) out << "cycle " << state_json(st).dump() << "\n";
  out << "mode \"" << to_string(s.mode) << "\"\n";
  out << "max_steps " << s.max_steps << "\n";
  if (!config.analyses.empty()) {
    ordered_json list = ordered_json::array();
    for (Analysis a : config.analyses) list.push_back(std::string(to_string(a)));
    out << "analyses " << list.dump() << "\n";
  }
  out << "cycle_tolerance " << ordered_json(config.cycle_tolerance).dump() << "\n";
  return out.str();
}

std::string emit_trace(const Trace& trace) {
  std::ostringstream out;
  out << "step,supplier,good,recipient,yield,balance_after\n";
  const auto& entities = trace.scenario->entities;
  for (const TraceStep& st : trace.steps) {
    if (st.valuations.empty()) {
      const std::string balance =
          entities.size() >= 2 ? format_real(st.balance_after(entities[0], entities[1])) : std::string("0");
      out << st.index << ",,,,," << balance << "\n";
      continue;
    }
    for (const Valuation& v : st.valuations) {
      const Transaction& t = v.transaction;
      const std::string row_tail =
          format_real(v.yield) + "," + format_real(st.balance_after(t.supplier(), t.recipient()));
      for (std::size_t k = 0; k < v.count; ++k) {
        out << st.index << ',' << t.supplier() << ',' << t.good() << ',' << t.recipient() << ',' << row_tail << "\n";
      }
    }
  }
  return out.str();
}

std::string emit_report(const Trace& trace, const std::vector<Analysis>& analyses, double cycle_tolerance) {
  ordered_json report;
  report["run"] = ordered_json{{"steps", trace.steps.size()}, {"halt_reason", std::string(to_string(trace.halt_reason))}};

  for (Analysis analysis : analyses) {
    const std::string name(to_string(analysis));
    switch (analysis) {
      case Analysis::Distribution: {
        const DistributionReport d = distribution_report(trace);
        ordered_json targets = ordered_json::array();
        for (const auto& t : d.targets) targets.push_back(transaction_json(t));
        report[name] = ordered_json{{"targets", targets},
                                    {"predicted", d.predicted},
                                    {"empirical", d.empirical},
                                    {"max_abs_error", d.max_abs_error}};
        break;
      }
      case Analysis::Equilibrium: {
        const TradePair tp = trade_pair(trace, name);
        const Equilibrium eq = as_analysis(name, [&] { return canonical_equilibrium(tp.p_curve, tp.q_curve); });
        const IntersectionPoint ip = as_analysis(name, [&] { return intersection_point(tp.p_curve, tp.q_curve); });
        ordered_json section{{"balance_of", tp.p.str()},
                             {"balance_with", tp.q.str()},
                             {"closed_form", {{"x_low", eq.x_low}, {"x_high", eq.x_high}, {"side", eq.side}}},
                             {"intersection", {{"x_s", ip.x_s}, {"y_s", ip.y_s}}}};
        try {
          const auto points = detect_cycle(trace, cycle_tolerance);
          section["detected"] = cycle_json(points);
          if (points.size() == 2) {
            const double lo = std::min(points[0].balance, points[1].balance);
            const double hi = std::max(points[0].balance, points[1].balance);
            section["compared_with"] = "canonical";
            section["discrepancy"] = std::max(std::abs(lo - eq.x_low), std::abs(hi - eq.x_high));
          } else if (points.size() == 1) {
            section["compared_with"] = "intersection";
            section["discrepancy"] = std::abs(points[0].balance - ip.x_s);
          } else {
            section["compared_with"] = nullptr;
            section["discrepancy"] = nullptr;
          }
        } catch (const AnalysisError&) {
          section["detected"] = nullptr;
          section["compared_with"] = nullptr;
          section["discrepancy"] = nullptr;
        }
        report[name] = std::move(section);
        break;
      }
      case Analysis::Contraction: {
        const TradePair tp = trade_pair(trace, name);
        const double theoretical = as_analysis(name, [&] { return theoretical_contraction(tp.p_curve, tp.q_curve); });
        report[name] = ordered_json{{"theoretical", theoretical},
                                    {"measured", measured_contraction(trace, tp.p, tp.q, Parity::Both)},
                                    {"measured_odd", measured_contraction(trace, tp.p, tp.q, Parity::Odd)},
                                    {"measured_even", measured_contraction(trace, tp.p, tp.q, Parity::Even)}};
        break;
      }
      case Analysis::Cycle: {
        const auto points = detect_cycle(trace, cycle_tolerance);
        report[name] = ordered_json{{"period", points.size()}, {"points", cycle_json(points)}};
        break;
      }
    }
  }
  return report.dump(2) + "\n";
}

}  // namespace giftsim
