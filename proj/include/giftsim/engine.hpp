#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "giftsim/core.hpp"
#include "giftsim/credit.hpp"

namespace giftsim {

enum class SelectionMode {
  HighestYield,        // hyr_select at every step
  HighestYieldSingle,  // at most one transaction per step, the highest-yield one
  ForceAll,            // the unique maximal admissible multiset, regardless of yield
};

std::string_view to_string(SelectionMode mode);

class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Eventually periodic sequence of states: the prefix once, then the cycle forever.
class StateSequence {
 public:
  // Throws ScenarioError when `cycle` is empty.
  StateSequence(std::vector<State> prefix, std::vector<State> cycle);

  // 1-based.
  const State& at(std::size_t index) const;
  bool in_cycle(std::size_t index) const { return index > prefix_.size(); }

  // Smallest period of the cycle (the recurrence dimension).
  std::size_t dimension() const;

  const std::vector<State>& prefix() const noexcept { return prefix_; }
  const std::vector<State>& cycle() const noexcept { return cycle_; }

  friend bool operator==(const StateSequence&, const StateSequence&) = default;

 private:
  std::vector<State> prefix_;
  std::vector<State> cycle_;
};

struct Scenario {
  std::vector<EntityId> entities;
  std::vector<GoodId> goods;
  CurveTable curves;
  Ledger initial_balances;
  StateSequence states;
  std::size_t max_steps = 100;
  SelectionMode mode = SelectionMode::HighestYield;

  // Throws ScenarioError on undeclared identifiers, duplicate declarations,
  // missing curves for constructible pairings, zero max_steps, or ambiguous
  // ForceAll states.
  void validate() const;
};

bool operator==(const Scenario& lhs, const Scenario& rhs);

struct Valuation {
  Transaction transaction;
  std::size_t count;
  Real yield;  // supplier yield at the step's opening ledger
};

struct TraceStep {
  std::size_t index;
  TransactionSet selected;
  std::vector<Valuation> valuations;   // one per distinct selected transaction, in transaction order
  std::vector<PairBalance> balances_after;

  // A(p, q) after the step; 0 for pairs never touched.
  Real balance_after(const EntityId& p, const EntityId& q) const;
};

enum class HaltReason { MaxSteps, NoPositiveYield };

std::string_view to_string(HaltReason reason);

struct Trace {
  std::shared_ptr<const Scenario> scenario;
  std::vector<TraceStep> steps;
  HaltReason halt_reason = HaltReason::MaxSteps;

  // Balance in force when step `index` (1-based) began.
  Real opening_balance(std::size_t index, const EntityId& p, const EntityId& q) const;
};

struct StepOutcome {
  TransactionSet selected;
  Ledger ledger;
  TraceStep record;
};

// The unique inclusion-maximal admissible multiset of `state`. Throws
// ScenarioError when offers can be paired in more than one maximal way.
TransactionSet forced_selection(const State& state);

StepOutcome step(const State& state, const Ledger& ledger, const CurveTable& curves, SelectionMode mode,
                 std::size_t index = 1);

// Runs to max_steps. In the yield-driven modes the run halts early once a
// whole pass over the cycle selects nothing, since balances are then frozen.
Trace run(const Scenario& scenario);

// Scenario builders for the standard configurations.

Scenario make_repeated_gift(const EntityId& supplier, const EntityId& recipient, const GoodId& good,
                            const YieldCurve& curve, std::size_t max_steps = 50);

struct RecipientCurve {
  EntityId recipient;
  YieldCurve curve;
};

Scenario make_multi_recipient(const EntityId& supplier, const GoodId& good, const std::vector<RecipientCurve>& recipients,
                              std::size_t max_steps = 1000);

// M suppliers and N >= M recipients of one good; `curves` must cover every
// supplier/recipient pair.
Scenario make_supply_market(const std::vector<EntityId>& suppliers, const std::vector<EntityId>& recipients,
                            const GoodId& good, const CurveTable& curves, std::size_t max_steps = 1000);

// p supplies a_good to q, q supplies b_good to p. The cycle holds b_states
// states where only q's b_good is on offer, then a_states states offering
// p's a_good. Forced selection.
Scenario make_alternating_trade(const EntityId& p, const EntityId& q, const GoodId& a_good, const GoodId& b_good,
                                const YieldCurve& p_curve, const YieldCurve& q_curve, std::size_t a_states = 1,
                                std::size_t b_states = 1, std::size_t max_steps = 200);

// Both goods on offer in every state.
Scenario make_simultaneous_trade(const EntityId& p, const EntityId& q, const GoodId& a_good, const GoodId& b_good,
                                 const YieldCurve& p_curve, const YieldCurve& q_curve,
                                 SelectionMode mode = SelectionMode::ForceAll, std::size_t max_steps = 200);

}  // namespace giftsim
