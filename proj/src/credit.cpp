#include "giftsim/credit.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace giftsim {

std::string format_real(const Real& value, int significant_digits) {
  if (value == 0) return "0";
  const Real magnitude = abs(value);
  if (magnitude >= std::numeric_limits<double>::min() && magnitude <= std::numeric_limits<double>::max()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant_digits, static_cast<double>(value));
    return buf;
  }
  // Outside the double range: scientific notation with trailing zeros trimmed, as %g would.
  std::string text = value.str(significant_digits - 1, std::ios_base::scientific);
  const auto e = text.find('e');
  std::string mantissa = text.substr(0, e);
  const std::string exponent = e == std::string::npos ? std::string{} : text.substr(e);
  if (mantissa.find('.') != std::string::npos) {
    while (!mantissa.empty() && mantissa.back() == '0') mantissa.pop_back();
    if (!mantissa.empty() && mantissa.back() == '.') mantissa.pop_back();
  }
  return mantissa + exponent;
}

YieldCurve::YieldCurve(double coefficient, double nominal) : coefficient_(coefficient), nominal_(nominal) {
  if (!std::isfinite(coefficient) || coefficient < 0.0 || coefficient >= 1.0) {
    std::ostringstream msg;
    msg << "yield coefficient must satisfy 0 <= a < 1 (a >= 1 would exhaust the yield in one step), got " << coefficient;
    throw std::invalid_argument(msg.str());
  }
  if (!std::isfinite(nominal) || nominal < 0.0) {
    std::ostringstream msg;
    msg << "nominal value must be finite and >= 0, got " << nominal;
    throw std::invalid_argument(msg.str());
  }
}

Real YieldCurve::linear(const Real& balance) const { return Real(nominal_) - Real(coefficient_) * balance; }

Real YieldCurve::operator()(const Real& balance) const {
  Real y = linear(balance);
  return y > 0 ? y : Real(0);
}

Real eval_yield(const YieldCurve& curve, const Real& balance) { return curve(balance); }

double limit_balance(const YieldCurve& curve) {
  if (curve.coefficient() == 0.0) {
    throw std::domain_error("limit_balance: a = 0 gives a constant yield with no finite limit");
  }
  return curve.nominal() / curve.coefficient();
}

namespace {

std::string describe(const Transaction& t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

}  // namespace

MissingCurveError::MissingCurveError(const Transaction& t)
    : std::out_of_range("no yield curve for transaction " + describe(t)) {}

const YieldCurve& CurveTable::at(const Transaction& t) const {
  auto it = curves_.find(t);
  if (it == curves_.end()) throw MissingCurveError(t);
  return it->second;
}

const YieldCurve* CurveTable::find(const Transaction& t) const {
  auto it = curves_.find(t);
  return it == curves_.end() ? nullptr : &it->second;
}

Ledger::Key Ledger::key_of(const EntityId& p, const EntityId& q) {
  if (p == q) throw std::invalid_argument("account balance of " + p.str() + " with itself is undefined");
  return p < q ? Key{p, q} : Key{q, p};
}

Real Ledger::balance(const EntityId& p, const EntityId& q) const {
  const Key key = key_of(p, q);
  auto it = accounts_.find(key);
  if (it == accounts_.end()) return Real(0);
  return p == key.first ? it->second.balance : Real(-it->second.balance);
}

void Ledger::set_balance(const EntityId& p, const EntityId& q, const Real& value) {
  const Key key = key_of(p, q);
  Account& account = accounts_[key];
  account.balance = p == key.first ? value : Real(-value);
  account.tracked.clear();
}

Real Ledger::supplier_yield(const Transaction& t, const YieldCurve& curve) const {
  const Key key = key_of(t.supplier(), t.recipient());
  auto it = accounts_.find(key);
  if (it == accounts_.end()) return curve(Real(0));
  const Account& account = it->second;
  auto tracked = account.tracked.find(t);
  if (tracked != account.tracked.end() && tracked->second.curve == curve) {
    const Real& y = tracked->second.linear;
    return y > 0 ? y : Real(0);
  }
  const Real oriented = t.supplier() == key.first ? account.balance : Real(-account.balance);
  return curve(oriented);
}

std::vector<PairBalance> Ledger::balances() const {
  std::vector<PairBalance> out;
  out.reserve(accounts_.size());
  for (const auto& [key, account] : accounts_) out.push_back({key.first, key.second, account.balance});
  return out;
}

bool operator==(const Ledger& lhs, const Ledger& rhs) {
  auto covered = [](const Ledger& a, const Ledger& b) {
    for (const auto& [key, account] : a.accounts_) {
      auto it = b.accounts_.find(key);
      const Real other = it == b.accounts_.end() ? Real(0) : it->second.balance;
      if (account.balance != other) return false;
    }
    return true;
  };
  return covered(lhs, rhs) && covered(rhs, lhs);
}

Real transaction_yield(const Transaction& t, const Ledger& ledger, const CurveTable& curves,
                       const EntityId& viewpoint) {
  const YieldCurve& curve = curves.at(t);
  if (!t.involves(viewpoint)) return Real(0);
  const Real y = ledger.supplier_yield(t, curve);
  return viewpoint == t.supplier() ? y : Real(-y);
}

Ledger apply_transactions(const Ledger& ledger, const TransactionSet& transactions, const CurveTable& curves) {
  struct PairUpdate {
    Real delta{0};
    std::vector<std::pair<Transaction, const YieldCurve*>> traded;
  };
  std::map<Ledger::Key, PairUpdate> updates;
  for (const auto& [t, count] : transactions) {
    const YieldCurve& curve = curves.at(t);
    const Real y = ledger.supplier_yield(t, curve) * static_cast<double>(count);
    const auto key = Ledger::key_of(t.supplier(), t.recipient());
    PairUpdate& update = updates[key];
    update.delta += t.supplier() == key.first ? y : Real(-y);
    update.traded.emplace_back(t, &curve);
  }

  Ledger out = ledger;
  for (const auto& [key, update] : updates) {
    Ledger::Account& account = out.accounts_[key];
    for (const auto& [t, curve] : update.traded) {
      auto it = account.tracked.find(t);
      if (it == account.tracked.end() || !(it->second.curve == *curve)) {
        const Real oriented = t.supplier() == key.first ? account.balance : Real(-account.balance);
        account.tracked.insert_or_assign(t, Ledger::TrackedCurve{*curve, curve->linear(oriented)});
      }
    }
    for (auto& [t, tracked] : account.tracked) {
      const Real oriented_delta = t.supplier() == key.first ? update.delta : Real(-update.delta);
      tracked.linear -= Real(tracked.curve.coefficient()) * oriented_delta;
    }
    account.balance += update.delta;
  }
  return out;
}

}  // namespace giftsim
