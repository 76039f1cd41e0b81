#include "giftsim/engine.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "giftsim/choice.hpp"

namespace giftsim {

std::string_view to_string(SelectionMode mode) {
  switch (mode) {
    case SelectionMode::HighestYield: return "hyr";
    case SelectionMode::HighestYieldSingle: return "hyr-single";
    case SelectionMode::ForceAll: return "force-all";
  }
  return "?";
}

std::string_view to_string(HaltReason reason) {
  switch (reason) {
    case HaltReason::MaxSteps: return "max-steps";
    case HaltReason::NoPositiveYield: return "no-positive-yield";
  }
  return "?";
}

StateSequence::StateSequence(std::vector<State> prefix, std::vector<State> cycle)
    : prefix_(std::move(prefix)), cycle_(std::move(cycle)) {
  if (cycle_.empty()) throw ScenarioError("state sequence needs a non-empty cycle");
}

const State& StateSequence::at(std::size_t index) const {
  if (index == 0) throw std::out_of_range("state indices start at 1");
  if (index <= prefix_.size()) return prefix_[index - 1];
  return cycle_[(index - prefix_.size() - 1) % cycle_.size()];
}

std::size_t StateSequence::dimension() const {
  const std::size_t n = cycle_.size();
  for (std::size_t k = 1; k < n; ++k) {
    if (n % k != 0) continue;
    bool periodic = true;
    for (std::size_t i = 0; i + k < n && periodic; ++i) periodic = cycle_[i] == cycle_[i + k];
    if (periodic) return k;
  }
  return n;
}

namespace {

template <class Id>
void require_declared(const std::set<Id>& declared, const Id& id, std::string_view where) {
  if (!declared.count(id)) {
    std::ostringstream msg;
    msg << where << ": undeclared identifier '" << id << "'";
    throw ScenarioError(msg.str());
  }
}

// Inclusion-maximal pairings of one good's supply and demand offers.
class MaximalPairings {
 public:
  MaximalPairings(std::vector<std::pair<EntityId, std::size_t>> suppliers,
                  std::vector<std::pair<EntityId, std::size_t>> recipients)
      : suppliers_(std::move(suppliers)), recipients_(std::move(recipients)) {
    for (std::size_t s = 0; s < suppliers_.size(); ++s) {
      for (std::size_t r = 0; r < recipients_.size(); ++r) {
        if (suppliers_[s].first != recipients_[r].first) edges_.push_back({s, r});
      }
    }
  }

  // Collects up to `limit` distinct maximal pairings.
  std::vector<std::vector<std::size_t>> find(std::size_t limit) {
    limit_ = limit;
    flow_.assign(edges_.size(), 0);
    supply_left_.clear();
    demand_left_.clear();
    for (const auto& s : suppliers_) supply_left_.push_back(s.second);
    for (const auto& r : recipients_) demand_left_.push_back(r.second);
    found_.clear();
    recurse(0);
    return {found_.begin(), found_.end()};
  }

  TransactionSet to_transactions(const std::vector<std::size_t>& flow, const GoodId& good) const {
    TransactionSet out;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (flow[i] > 0) {
        out.add(Transaction(suppliers_[edges_[i].first].first, good, recipients_[edges_[i].second].first), flow[i]);
      }
    }
    return out;
  }

 private:
  void recurse(std::size_t i) {
    if (found_.size() >= limit_) return;
    if (i == edges_.size()) {
      for (const auto& [s, r] : edges_) {
        if (supply_left_[s] > 0 && demand_left_[r] > 0) return;  // not maximal
      }
      found_.insert(flow_);
      return;
    }
    const auto [s, r] = edges_[i];
    const std::size_t most = std::min(supply_left_[s], demand_left_[r]);
    for (std::size_t f = most + 1; f-- > 0;) {
      flow_[i] = f;
      supply_left_[s] -= f;
      demand_left_[r] -= f;
      recurse(i + 1);
      supply_left_[s] += f;
      demand_left_[r] += f;
    }
    flow_[i] = 0;
  }

  std::vector<std::pair<EntityId, std::size_t>> suppliers_;
  std::vector<std::pair<EntityId, std::size_t>> recipients_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::size_t> flow_;
  std::vector<std::size_t> supply_left_;
  std::vector<std::size_t> demand_left_;
  std::set<std::vector<std::size_t>> found_;
  std::size_t limit_ = 2;
};

}  // namespace

TransactionSet forced_selection(const State& state) {
  std::map<GoodId, std::pair<std::vector<std::pair<EntityId, std::size_t>>, std::vector<std::pair<EntityId, std::size_t>>>>
      sides;
  for (const auto& [offer, count] : state) {
    auto& [suppliers, recipients] = sides[offer.good];
    (offer.kind == OfferKind::Supply ? suppliers : recipients).emplace_back(offer.entity, count);
  }
  TransactionSet out;
  for (auto& [good, side] : sides) {
    MaximalPairings pairings(side.first, side.second);
    const auto found = pairings.find(2);
    if (found.size() > 1) {
      throw ScenarioError("forced selection is ambiguous: offers of good '" + good.str() +
                          "' pair up in more than one maximal way");
    }
    if (!found.empty()) out = mset_union(out, pairings.to_transactions(found.front(), good));
  }
  return out;
}

void Scenario::validate() const {
  if (max_steps == 0) throw ScenarioError("max_steps must be positive");
  std::set<EntityId> entity_set;
  for (const auto& e : entities) {
    if (!entity_set.insert(e).second) throw ScenarioError("entity '" + e.str() + "' declared twice");
  }
  std::set<GoodId> good_set;
  for (const auto& g : goods) {
    if (!good_set.insert(g).second) throw ScenarioError("good '" + g.str() + "' declared twice");
  }
  for (const auto& [t, curve] : curves) {
    require_declared(entity_set, t.supplier(), "curve supplier");
    require_declared(entity_set, t.recipient(), "curve recipient");
    require_declared(good_set, t.good(), "curve good");
  }
  for (const auto& pb : initial_balances.balances()) {
    require_declared(entity_set, pb.first, "balance");
    require_declared(entity_set, pb.second, "balance");
  }
  auto check_state = [&](const State& state) {
    for (const auto& [offer, count] : state) {
      require_declared(entity_set, offer.entity, "offer entity");
      require_declared(good_set, offer.good, "offer good");
    }
    for (const auto& [supply, sc] : state) {
      if (supply.kind != OfferKind::Supply) continue;
      for (const auto& [demand, dc] : state) {
        if (demand.kind != OfferKind::Demand || demand.good != supply.good || demand.entity == supply.entity) continue;
        Transaction t(supply.entity, supply.good, demand.entity);
        if (!curves.contains(t)) {
          std::ostringstream msg;
          msg << "no yield curve for constructible transaction " << t;
          throw ScenarioError(msg.str());
        }
      }
    }
    if (mode == SelectionMode::ForceAll) forced_selection(state);
  };
  for (const auto& s : states.prefix()) check_state(s);
  for (const auto& s : states.cycle()) check_state(s);
}

bool operator==(const Scenario& lhs, const Scenario& rhs) {
  return lhs.entities == rhs.entities && lhs.goods == rhs.goods && lhs.curves == rhs.curves &&
         lhs.initial_balances == rhs.initial_balances && lhs.states == rhs.states && lhs.max_steps == rhs.max_steps &&
         lhs.mode == rhs.mode;
}

Real TraceStep::balance_after(const EntityId& p, const EntityId& q) const {
  for (const auto& pb : balances_after) {
    if (pb.first == p && pb.second == q) return pb.balance;
    if (pb.first == q && pb.second == p) return -pb.balance;
  }
  if (p == q) throw std::invalid_argument("account balance of " + p.str() + " with itself is undefined");
  return Real(0);
}

Real Trace::opening_balance(std::size_t index, const EntityId& p, const EntityId& q) const {
  if (index == 0 || index > steps.size() + 1) throw std::out_of_range("step index out of range");
  if (index == 1) return scenario->initial_balances.balance(p, q);
  return steps[index - 2].balance_after(p, q);
}

StepOutcome step(const State& state, const Ledger& ledger, const CurveTable& curves, SelectionMode mode,
                 std::size_t index) {
  TransactionSet selected;
  switch (mode) {
    case SelectionMode::HighestYield: selected = hyr_select(state, ledger, curves); break;
    case SelectionMode::HighestYieldSingle: selected = hyr_select_single(state, ledger, curves); break;
    case SelectionMode::ForceAll: selected = forced_selection(state); break;
  }
  TraceStep record{index, selected, {}, {}};
  for (const auto& [t, count] : selected) {
    record.valuations.push_back({t, count, ledger.supplier_yield(t, curves.at(t))});
  }
  Ledger next = apply_transactions(ledger, selected, curves);
  record.balances_after = next.balances();
  return {std::move(selected), std::move(next), std::move(record)};
}

Trace run(const Scenario& scenario) {
  scenario.validate();
  Trace trace;
  trace.scenario = std::make_shared<const Scenario>(scenario);
  trace.steps.reserve(std::min<std::size_t>(scenario.max_steps, 1u << 20));

  Ledger ledger = scenario.initial_balances;
  const std::size_t cycle_length = scenario.states.cycle().size();
  std::size_t idle_in_cycle = 0;
  for (std::size_t i = 1; i <= scenario.max_steps; ++i) {
    StepOutcome outcome = step(scenario.states.at(i), ledger, scenario.curves, scenario.mode, i);
    const bool idle = outcome.selected.empty();
    ledger = std::move(outcome.ledger);
    trace.steps.push_back(std::move(outcome.record));
    if (scenario.mode == SelectionMode::ForceAll) continue;
    idle_in_cycle = idle && scenario.states.in_cycle(i) ? idle_in_cycle + 1 : 0;
    if (idle_in_cycle >= cycle_length) {
      trace.halt_reason = HaltReason::NoPositiveYield;
      return trace;
    }
  }
  trace.halt_reason = HaltReason::MaxSteps;
  return trace;
}

Scenario make_repeated_gift(const EntityId& supplier, const EntityId& recipient, const GoodId& good,
                            const YieldCurve& curve, std::size_t max_steps) {
  CurveTable curves;
  curves.set(Transaction(supplier, good, recipient), curve);
  State state{Offer::supply(supplier, good), Offer::demand(recipient, good)};
  return Scenario{{supplier, recipient}, {good}, curves, Ledger{}, StateSequence({}, {state}), max_steps,
                  SelectionMode::ForceAll};
}

Scenario make_multi_recipient(const EntityId& supplier, const GoodId& good, const std::vector<RecipientCurve>& recipients,
                              std::size_t max_steps) {
  if (recipients.empty()) throw ScenarioError("multi-recipient scenario needs at least one recipient");
  std::vector<EntityId> entities{supplier};
  CurveTable curves;
  State state{Offer::supply(supplier, good)};
  for (const auto& rc : recipients) {
    entities.push_back(rc.recipient);
    curves.set(Transaction(supplier, good, rc.recipient), rc.curve);
    state.add(Offer::demand(rc.recipient, good));
  }
  return Scenario{entities, {good}, curves, Ledger{}, StateSequence({}, {state}), max_steps,
                  SelectionMode::HighestYield};
}

Scenario make_supply_market(const std::vector<EntityId>& suppliers, const std::vector<EntityId>& recipients,
                            const GoodId& good, const CurveTable& curves, std::size_t max_steps) {
  if (suppliers.empty()) throw ScenarioError("supply market needs at least one supplier");
  if (suppliers.size() > recipients.size()) {
    throw ScenarioError("more suppliers than recipients: recipient-side choice is not modelled");
  }
  std::vector<EntityId> entities = suppliers;
  State state;
  for (const auto& s : suppliers) state.add(Offer::supply(s, good));
  for (const auto& r : recipients) {
    if (std::find(suppliers.begin(), suppliers.end(), r) != suppliers.end()) {
      throw ScenarioError("entity '" + r.str() + "' cannot be both supplier and recipient in a supply market");
    }
    entities.push_back(r);
    state.add(Offer::demand(r, good));
  }
  return Scenario{entities, {good}, curves, Ledger{}, StateSequence({}, {state}), max_steps,
                  SelectionMode::HighestYield};
}

namespace {

CurveTable trade_curves(const EntityId& p, const EntityId& q, const GoodId& a_good, const GoodId& b_good,
                        const YieldCurve& p_curve, const YieldCurve& q_curve) {
  if (a_good == b_good) throw ScenarioError("trade needs two distinct goods");
  CurveTable curves;
  curves.set(Transaction(p, a_good, q), p_curve);
  curves.set(Transaction(q, b_good, p), q_curve);
  return curves;
}

}  // namespace

Scenario make_alternating_trade(const EntityId& p, const EntityId& q, const GoodId& a_good, const GoodId& b_good,
                                const YieldCurve& p_curve, const YieldCurve& q_curve, std::size_t a_states,
                                std::size_t b_states, std::size_t max_steps) {
  if (a_states == 0 || b_states == 0) throw ScenarioError("trade ratio terms must be at least 1");
  const CurveTable curves = trade_curves(p, q, a_good, b_good, p_curve, q_curve);
  const State b_state{Offer::supply(q, b_good), Offer::demand(q, a_good), Offer::demand(p, b_good)};
  const State a_state{Offer::supply(p, a_good), Offer::demand(q, a_good), Offer::demand(p, b_good)};
  std::vector<State> cycle(b_states, b_state);
  cycle.insert(cycle.end(), a_states, a_state);
  return Scenario{{p, q}, {a_good, b_good}, curves, Ledger{}, StateSequence({}, std::move(cycle)), max_steps,
                  SelectionMode::ForceAll};
}

Scenario make_simultaneous_trade(const EntityId& p, const EntityId& q, const GoodId& a_good, const GoodId& b_good,
                                 const YieldCurve& p_curve, const YieldCurve& q_curve, SelectionMode mode,
                                 std::size_t max_steps) {
  const CurveTable curves = trade_curves(p, q, a_good, b_good, p_curve, q_curve);
  const State state{Offer::supply(p, a_good), Offer::demand(q, a_good), Offer::supply(q, b_good),
                    Offer::demand(p, b_good)};
  return Scenario{{p, q}, {a_good, b_good}, curves, Ledger{}, StateSequence({}, {state}), max_steps, mode};
}

}  // namespace giftsim
