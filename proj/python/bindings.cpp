#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "giftsim/analytics.hpp"
#include "giftsim/io.hpp"

namespace py = pybind11;
using namespace giftsim;

namespace {

double to_double(const Real& r) { return static_cast<double>(r); }

Transaction txn(const std::string& supplier, const std::string& good, const std::string& recipient) {
  return Transaction(EntityId(supplier), GoodId(good), EntityId(recipient));
}

std::vector<Analysis> analyses_from(const std::vector<std::string>& names) {
  std::vector<Analysis> out;
  for (const auto& name : names) {
    const auto a = analysis_from_string(name);
    if (!a) throw std::invalid_argument("unknown analysis '" + name + "'");
    out.push_back(*a);
  }
  return out;
}

std::vector<std::string> analysis_names(const std::vector<Analysis>& analyses) {
  std::vector<std::string> out;
  for (Analysis a : analyses) out.emplace_back(to_string(a));
  return out;
}

SelectionMode mode_from(const std::string& name) {
  const auto mode = mode_from_string(name);
  if (!mode) throw std::invalid_argument("unknown mode '" + name + "'");
  return *mode;
}

py::tuple transaction_tuple(const Transaction& t) {
  return py::make_tuple(t.supplier().str(), t.good().str(), t.recipient().str());
}

py::dict valuation_dict(const Valuation& v) {
  py::dict d;
  d["transaction"] = transaction_tuple(v.transaction);
  d["count"] = v.count;
  d["yield"] = to_double(v.yield);
  return d;
}

State state_from(const std::vector<std::tuple<std::string, std::string, std::string>>& offers) {
  State state;
  for (const auto& [kind, entity, good] : offers) {
    if (kind == "supply") {
      state.add(Offer::supply(EntityId(entity), GoodId(good)));
    } else if (kind == "demand") {
      state.add(Offer::demand(EntityId(entity), GoodId(good)));
    } else {
      throw std::invalid_argument("offer kind must be \"supply\" or \"demand\", got '" + kind + "'");
    }
  }
  return state;
}

const TraceStep& step_at(const Trace& trace, std::size_t index) {
  if (index < 1 || index > trace.steps.size()) throw py::index_error("step out of range");
  return trace.steps[index - 1];
}

}  // namespace

PYBIND11_MODULE(_giftsim, m) {
  m.doc() = "Gift-economy simulation with pairwise social-credit ledgers";

  py::register_exception<AnalysisError>(m, "AnalysisError", PyExc_RuntimeError);
  py::register_exception<MissingCurveError>(m, "MissingCurveError", PyExc_KeyError);

  py::class_<YieldCurve>(m, "YieldCurve")
      .def(py::init<double, double>(), py::arg("a"), py::arg("b"))
      .def_property_readonly("a", &YieldCurve::coefficient)
      .def_property_readonly("b", &YieldCurve::nominal)
      .def("__call__", [](const YieldCurve& c, double x) { return to_double(eval_yield(c, Real(x))); }, py::arg("balance"))
      .def("limit_balance", [](const YieldCurve& c) { return limit_balance(c); })
      .def("__eq__", [](const YieldCurve& l, const YieldCurve& r) { return l == r; })
      .def("__repr__", [](const YieldCurve& c) {
        return "YieldCurve(a=" + format_real(Real(c.coefficient())) + ", b=" + format_real(Real(c.nominal())) + ")";
      });

  py::class_<Scenario>(m, "Scenario")
      .def_property_readonly("entities", [](const Scenario& s) {
        std::vector<std::string> out;
        for (const auto& e : s.entities) out.push_back(e.str());
        return out;
      })
      .def_property_readonly("goods", [](const Scenario& s) {
        std::vector<std::string> out;
        for (const auto& g : s.goods) out.push_back(g.str());
        return out;
      })
      .def_property("max_steps", [](const Scenario& s) { return s.max_steps; },
                    [](Scenario& s, std::size_t n) {
                      if (n == 0) throw std::invalid_argument("max_steps must be positive");
                      s.max_steps = n;
                    })
      .def_property("mode", [](const Scenario& s) { return std::string(to_string(s.mode)); },
                    [](Scenario& s, const std::string& name) { s.mode = mode_from(name); })
      .def("curve", [](const Scenario& s, const std::string& supplier, const std::string& good,
                       const std::string& recipient) { return s.curves.at(txn(supplier, good, recipient)); },
           py::arg("supplier"), py::arg("good"), py::arg("recipient"))
      .def("balance", [](const Scenario& s, const std::string& p, const std::string& q) {
             return to_double(s.initial_balances.balance(EntityId(p), EntityId(q)));
           }, py::arg("p"), py::arg("q"))
      .def("set_balance", [](Scenario& s, const std::string& p, const std::string& q, double value) {
             s.initial_balances.set_balance(EntityId(p), EntityId(q), Real(value));
           }, py::arg("p"), py::arg("q"), py::arg("value"))
      .def("validate", &Scenario::validate)
      .def("__eq__", [](const Scenario& l, const Scenario& r) { return l == r; });

  py::class_<ScenarioConfig>(m, "Config")
      .def_readwrite("scenario", &ScenarioConfig::scenario)
      .def_property("analyses", [](const ScenarioConfig& c) { return analysis_names(c.analyses); },
                    [](ScenarioConfig& c, const std::vector<std::string>& names) { c.analyses = analyses_from(names); })
      .def_readwrite("cycle_tolerance", &ScenarioConfig::cycle_tolerance)
      .def("format", &format_scenario)
      .def("__eq__", [](const ScenarioConfig& l, const ScenarioConfig& r) { return l == r; });

  m.def("parse_scenario", [](const std::string& text) { return parse_scenario(text); }, py::arg("text"),
        "Parse scenario text; raises ValueError citing the line and field on bad input.");

  py::class_<Trace>(m, "Trace")
      .def("__len__", [](const Trace& t) { return t.steps.size(); })
      .def_property_readonly("halt_reason", [](const Trace& t) { return std::string(to_string(t.halt_reason)); })
      .def_property_readonly("scenario", [](const Trace& t) { return *t.scenario; })
      .def("selected", [](const Trace& t, std::size_t index) {
             py::list out;
             for (const auto& v : step_at(t, index).valuations) out.append(valuation_dict(v));
             return out;
           }, py::arg("step"), "Transactions selected at a 1-based step, with counts and supplier yields.")
      .def("balance_after", [](const Trace& t, std::size_t index, const std::string& p, const std::string& q) {
             return to_double(step_at(t, index).balance_after(EntityId(p), EntityId(q)));
           }, py::arg("step"), py::arg("p"), py::arg("q"))
      .def("balances", [](const Trace& t, const std::string& p, const std::string& q) {
             const EntityId pe(p), qe(q);
             std::vector<double> out{to_double(t.scenario->initial_balances.balance(pe, qe))};
             for (const auto& s : t.steps) out.push_back(to_double(s.balance_after(pe, qe)));
             return out;
           }, py::arg("p"), py::arg("q"), "A(p, q) before step 1 and after every step.")
      .def("csv", &emit_trace)
      .def("report", [](const Trace& t, const std::vector<std::string>& analyses, double tolerance) {
             return emit_report(t, analyses_from(analyses), tolerance);
           }, py::arg("analyses"), py::arg("cycle_tolerance") = 1e-9);

  m.def("run", &run, py::arg("scenario"));

  m.def("repeated_gift",
        [](const std::string& supplier, const std::string& recipient, const std::string& good, const YieldCurve& curve,
           std::size_t max_steps) {
          return make_repeated_gift(EntityId(supplier), EntityId(recipient), GoodId(good), curve, max_steps);
        },
        py::arg("supplier"), py::arg("recipient"), py::arg("good"), py::arg("curve"), py::arg("max_steps") = 50);
  m.def("multi_recipient",
        [](const std::string& supplier, const std::string& good,
           const std::vector<std::pair<std::string, YieldCurve>>& recipients, std::size_t max_steps) {
          std::vector<RecipientCurve> rc;
          for (const auto& [r, c] : recipients) rc.push_back({EntityId(r), c});
          return make_multi_recipient(EntityId(supplier), GoodId(good), rc, max_steps);
        },
        py::arg("supplier"), py::arg("good"), py::arg("recipients"), py::arg("max_steps") = 1000);
  m.def("alternating_trade",
        [](const std::string& p, const std::string& q, const std::string& a_good, const std::string& b_good,
           const YieldCurve& p_curve, const YieldCurve& q_curve, std::size_t a_states, std::size_t b_states,
           std::size_t max_steps) {
          return make_alternating_trade(EntityId(p), EntityId(q), GoodId(a_good), GoodId(b_good), p_curve, q_curve, a_states,
                                        b_states, max_steps);
        },
        py::arg("p"), py::arg("q"), py::arg("a_good"), py::arg("b_good"), py::arg("p_curve"), py::arg("q_curve"),
        py::arg("a_states") = 1, py::arg("b_states") = 1, py::arg("max_steps") = 200);
  m.def("simultaneous_trade",
        [](const std::string& p, const std::string& q, const std::string& a_good, const std::string& b_good,
           const YieldCurve& p_curve, const YieldCurve& q_curve, const std::string& mode, std::size_t max_steps) {
          return make_simultaneous_trade(EntityId(p), EntityId(q), GoodId(a_good), GoodId(b_good), p_curve, q_curve,
                                         mode_from(mode), max_steps);
        },
        py::arg("p"), py::arg("q"), py::arg("a_good"), py::arg("b_good"), py::arg("p_curve"), py::arg("q_curve"),
        py::arg("mode") = "force-all", py::arg("max_steps") = 200);

  m.def("is_admissible",
        [](const std::vector<std::tuple<std::string, std::string, std::string>>& transactions,
           const std::vector<std::tuple<std::string, std::string, std::string>>& offers) {
          TransactionSet ts;
          for (const auto& [s, g, r] : transactions) ts.add(txn(s, g, r));
          return is_admissible(ts, state_from(offers));
        },
        py::arg("transactions"), py::arg("offers"),
        "transactions: (supplier, good, recipient) tuples; offers: (\"supply\"|\"demand\", entity, good) tuples.");

  m.def("ucr", &ucr, py::arg("a"));
  m.def("ultimate_distribution", [](const std::vector<double>& c) { return ultimate_distribution(c); },
        py::arg("coefficients"));
  m.def("distribution_report", [](const Trace& t) {
          const auto r = distribution_report(t);
          py::dict d;
          py::list targets;
          for (const auto& tr : r.targets) targets.append(transaction_tuple(tr));
          d["targets"] = targets;
          d["predicted"] = r.predicted;
          d["empirical"] = r.empirical;
          d["max_abs_error"] = r.max_abs_error;
          return d;
        }, py::arg("trace"));
  m.def("canonical_equilibrium", [](const YieldCurve& p, const YieldCurve& q) {
          const auto e = canonical_equilibrium(p, q);
          return py::make_tuple(e.x_low, e.x_high, e.side);
        }, py::arg("p_curve"), py::arg("q_curve"), "(x_low, x_high, side)");
  m.def("intersection_point", [](const YieldCurve& p, const YieldCurve& q) {
          const auto i = intersection_point(p, q);
          return py::make_tuple(i.x_s, i.y_s);
        }, py::arg("p_curve"), py::arg("q_curve"), "(x_s, y_s)");
  m.def("alternating_map", &alternating_map, py::arg("balance"), py::arg("p_curve"), py::arg("q_curve"));
  m.def("theoretical_contraction", &theoretical_contraction, py::arg("p_curve"), py::arg("q_curve"));
  m.def("measured_contraction", [](const Trace& t, const std::string& parity) {
          if (parity == "both") return measured_contraction(t, Parity::Both);
          if (parity == "odd") return measured_contraction(t, Parity::Odd);
          if (parity == "even") return measured_contraction(t, Parity::Even);
          throw std::invalid_argument("parity must be \"both\", \"odd\" or \"even\"");
        }, py::arg("trace"), py::arg("parity") = "both");
  m.def("detect_cycle", [](const Trace& t, double tolerance) {
          py::list out;
          for (const auto& p : detect_cycle(t, tolerance)) {
            py::dict d;
            d["step"] = p.step;
            d["balance"] = p.balance;
            py::list vals;
            for (const auto& v : p.valuations) vals.append(valuation_dict(v));
            d["valuations"] = vals;
            out.append(d);
          }
          return out;
        }, py::arg("trace"), py::arg("tolerance") = 1e-9);
}
