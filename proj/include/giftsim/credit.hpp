#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "giftsim/core.hpp"

namespace giftsim {

// Credit amounts: double-sized mantissa with a 64-bit exponent. Geometric
// yield decay reaches magnitudes like 2^-66000 within 1e5 gifts, far below
// what a double can hold.
using Real = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<53, boost::multiprecision::digit_base_2, void, std::int64_t,
                                         -(std::int64_t{1} << 40), (std::int64_t{1} << 40)>,
    boost::multiprecision::et_off>;

// %.12g-style rendering that stays correct outside the double range.
std::string format_real(const Real& value, int significant_digits = 12);

// Supplier yield as a function of the account balance: max(0, -a*x + b).
class YieldCurve {
 public:
  // Throws std::invalid_argument unless 0 <= coefficient < 1 and nominal >= 0.
  YieldCurve(double coefficient, double nominal);

  double coefficient() const noexcept { return coefficient_; }
  double nominal() const noexcept { return nominal_; }

  // The unclamped line -a*x + b.
  Real linear(const Real& balance) const;
  Real operator()(const Real& balance) const;

  friend bool operator==(const YieldCurve&, const YieldCurve&) = default;

 private:
  double coefficient_;
  double nominal_;
};

Real eval_yield(const YieldCurve& curve, const Real& balance);

// Balance b/a at which repeated gifts stop yielding. Throws std::domain_error for a = 0.
double limit_balance(const YieldCurve& curve);

class MissingCurveError : public std::out_of_range {
 public:
  explicit MissingCurveError(const Transaction& t);
};

// One yield curve per (supplier, good, recipient).
class CurveTable {
 public:
  using container_type = std::map<Transaction, YieldCurve>;

  void set(const Transaction& t, const YieldCurve& curve) { curves_.insert_or_assign(t, curve); }
  const YieldCurve& at(const Transaction& t) const;
  const YieldCurve* find(const Transaction& t) const;
  bool contains(const Transaction& t) const { return curves_.count(t) != 0; }
  std::size_t size() const noexcept { return curves_.size(); }
  bool empty() const noexcept { return curves_.empty(); }

  container_type::const_iterator begin() const noexcept { return curves_.begin(); }
  container_type::const_iterator end() const noexcept { return curves_.end(); }

  friend bool operator==(const CurveTable&, const CurveTable&) = default;

 private:
  container_type curves_;
};

struct PairBalance {
  EntityId first;   // first < second
  EntityId second;
  Real balance;     // A(first, second)
};

// Pairwise account balances. One number is stored per unordered pair, so
// A(P,Q) + A(Q,P) == 0 holds exactly.
//
// Alongside each balance the ledger tracks, for every curve that has been
// traded on the pair, the curve's unclamped linear value. Updating that value
// incrementally keeps repeated gifts exactly geometric instead of computing
// b - a*x with x next to b/a.
class Ledger {
 public:
  Ledger() = default;

  // A(p, q). Throws std::invalid_argument when p == q.
  Real balance(const EntityId& p, const EntityId& q) const;

  // Sets A(p, q) (and so A(q, p) = -value). Clears curve tracking for the pair.
  void set_balance(const EntityId& p, const EntityId& q, const Real& value);

  // Yield of t to its supplier under `curve` at the current balance.
  Real supplier_yield(const Transaction& t, const YieldCurve& curve) const;

  // Every pair that has been set or traded, in pair order.
  std::vector<PairBalance> balances() const;

  // Balance equality; pairs never touched count as zero.
  friend bool operator==(const Ledger& lhs, const Ledger& rhs);

  friend Ledger apply_transactions(const Ledger& ledger, const TransactionSet& transactions,
                                   const CurveTable& curves);

 private:
  struct TrackedCurve {
    YieldCurve curve;
    Real linear;
  };
  struct Account {
    Real balance{0};
    std::map<Transaction, TrackedCurve> tracked;
  };
  using Key = std::pair<EntityId, EntityId>;

  static Key key_of(const EntityId& p, const EntityId& q);

  std::map<Key, Account> accounts_;
};

// Value of t to `viewpoint`: the supplier's yield, its negation for the
// recipient, 0 for uninvolved entities.
Real transaction_yield(const Transaction& t, const Ledger& ledger, const CurveTable& curves,
                       const EntityId& viewpoint);

// Adds, for every pair, the sum of the involved yields. All yields are taken
// against the incoming ledger.
Ledger apply_transactions(const Ledger& ledger, const TransactionSet& transactions, const CurveTable& curves);

}  // namespace giftsim
