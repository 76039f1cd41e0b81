#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "giftsim/core.hpp"
#include "giftsim/credit.hpp"
#include "giftsim/engine.hpp"

namespace giftsim {

// Raised when an analysis does not apply to a trace or its inputs.
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ultimate credit ratio -1/ln(1-a). Defined up to a positive constant factor
// (the log base); every share built from it is base-independent.
// Throws std::domain_error unless 0 < a < 1.
double ucr(double coefficient);

// Long-run selection shares C_k / sum(C_j).
std::vector<double> ultimate_distribution(std::span<const double> coefficients);

// Share of selections of each target among all target selections in the trace.
std::vector<double> empirical_distribution(const Trace& trace, std::span<const Transaction> targets);

struct DistributionReport {
  std::vector<Transaction> targets;
  std::vector<double> predicted;
  std::vector<double> empirical;
  double max_abs_error;
};

// Targets are every curve of the scenario, which must all share one supplier.
DistributionReport distribution_report(const Trace& trace);

// Where P's line -a*x + b meets Q's line c*x + d, both in P's balance coordinate.
struct IntersectionPoint {
  double x_s;
  double y_s;
};

IntersectionPoint intersection_point(const YieldCurve& p_curve, const YieldCurve& q_curve);

// Two-point alternating cycle: P gives at x_low, Q gives back at x_high, and
// both gifts are worth `side` = x_high - x_low.
struct Equilibrium {
  double x_low;
  double x_high;
  double side;
};

Equilibrium canonical_equilibrium(const YieldCurve& p_curve, const YieldCurve& q_curve);

// One full alternation on the unclamped lines: P gives, then Q gives back.
double alternating_map(double balance, const YieldCurve& p_curve, const YieldCurve& q_curve);

// (1-a)(1-c), the per-cycle shrink factor of alternating trade.
double theoretical_contraction(const YieldCurve& p_curve, const YieldCurve& q_curve);

enum class Parity { Both, Odd, Even };

// Least-squares ratio of successive same-parity balance differences,
// (x_{i+2} - x_{i+4}) / (x_i - x_{i+2}), over the trailing run of steps whose
// yields are all positive. Balances are A(p, q) with x_0 the initial balance.
double measured_contraction(const Trace& trace, const EntityId& p, const EntityId& q, Parity parity = Parity::Both);

// Uses the scenario's only entity pair.
double measured_contraction(const Trace& trace, Parity parity = Parity::Both);

struct CyclePoint {
  std::size_t step;      // last occurrence in the trace
  double balance;        // opening balance of the reference pair
  std::vector<Valuation> valuations;
};

// Terminal cycle of the trace: the smallest period k whose last two periods
// repeat the opening balances of every pair (within `tolerance`) and the
// selected transactions. Returns the k points in step order. The reference
// pair is the first two declared entities.
std::vector<CyclePoint> detect_cycle(const Trace& trace, double tolerance = 1e-9);

}  // namespace giftsim
