#include "giftsim/choice.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>

namespace giftsim {

std::vector<Candidate> enumerate_candidates(const State& state, const Ledger& ledger, const CurveTable& curves) {
  std::vector<Candidate> out;
  for (const auto& [supply, supply_count] : state) {
    if (supply.kind != OfferKind::Supply) continue;
    for (const auto& [demand, demand_count] : state) {
      if (demand.kind != OfferKind::Demand || demand.good != supply.good || demand.entity == supply.entity) continue;
      Transaction t(supply.entity, supply.good, demand.entity);
      Real y = ledger.supplier_yield(t, curves.at(t));
      out.push_back({std::move(t), std::move(y)});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Candidate& lhs, const Candidate& rhs) {
    if (lhs.supplier_yield != rhs.supplier_yield) return lhs.supplier_yield > rhs.supplier_yield;
    return lhs.transaction < rhs.transaction;
  });
  return out;
}

namespace {

// Maximum-weight b-matching for one good by successive longest augmenting
// paths. Suppliers and recipients carry their offer counts as capacities.
class GoodMatching {
 public:
  void add_edge(const Candidate& c, std::size_t supply_cap, std::size_t demand_cap) {
    const std::size_t s = node_for(suppliers_, c.transaction.supplier(), supply_cap);
    const std::size_t r = node_for(recipients_, c.transaction.recipient(), demand_cap);
    edges_.push_back({s, r, c.supplier_yield, 0, &c.transaction});
  }

  void solve(TransactionSet& out) {
    while (auto path = longest_path()) {
      std::size_t amount = std::numeric_limits<std::size_t>::max();
      for (const Step& st : *path) amount = std::min(amount, residual(st));
      for (const Step& st : *path) apply(st, amount);
    }
    for (const Edge& e : edges_) {
      if (e.flow > 0) out.add(*e.transaction, e.flow);
    }
  }

 private:
  struct Side {
    std::size_t capacity;
    std::size_t used = 0;
  };
  struct Edge {
    std::size_t supplier;
    std::size_t recipient;
    Real gain;
    std::size_t flow;
    const Transaction* transaction;
  };
  enum class StepKind { FromSource, Forward, Backward, ToSink };
  struct Step {
    StepKind kind;
    std::size_t index;  // supplier, edge or recipient index
  };

  static std::size_t node_for(std::vector<std::pair<EntityId, Side>>& side, const EntityId& id, std::size_t cap) {
    for (std::size_t i = 0; i < side.size(); ++i) {
      if (side[i].first == id) return i;
    }
    side.push_back({id, Side{cap}});
    return side.size() - 1;
  }

  std::size_t residual(const Step& st) const {
    switch (st.kind) {
      case StepKind::FromSource: return suppliers_[st.index].second.capacity - suppliers_[st.index].second.used;
      case StepKind::Forward: return std::numeric_limits<std::size_t>::max();
      case StepKind::Backward: return edges_[st.index].flow;
      case StepKind::ToSink: return recipients_[st.index].second.capacity - recipients_[st.index].second.used;
    }
    return 0;
  }

  void apply(const Step& st, std::size_t amount) {
    switch (st.kind) {
      case StepKind::FromSource: suppliers_[st.index].second.used += amount; break;
      case StepKind::Forward: edges_[st.index].flow += amount; break;
      case StepKind::Backward: edges_[st.index].flow -= amount; break;
      case StepKind::ToSink: recipients_[st.index].second.used += amount; break;
    }
  }

  // Bellman-Ford on the residual graph; nodes are suppliers then recipients.
  // Returns the path of strictly positive total gain with the largest gain.
  std::optional<std::vector<Step>> longest_path() const {
    const std::size_t ns = suppliers_.size();
    const std::size_t n = ns + recipients_.size();
    std::vector<std::optional<Real>> dist(n);
    std::vector<std::optional<Step>> via(n);
    for (std::size_t s = 0; s < ns; ++s) {
      if (residual({StepKind::FromSource, s}) > 0) {
        dist[s] = Real(0);
        via[s] = Step{StepKind::FromSource, s};
      }
    }
    auto relax = [&](std::size_t from, std::size_t to, const Real& gain, Step step) {
      if (!dist[from]) return false;
      Real candidate = *dist[from] + gain;
      if (!dist[to] || candidate > *dist[to]) {
        dist[to] = candidate;
        via[to] = step;
        return true;
      }
      return false;
    };
    for (std::size_t round = 0; round < n; ++round) {
      bool changed = false;
      for (std::size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        changed |= relax(e.supplier, ns + e.recipient, e.gain, {StepKind::Forward, i});
        if (e.flow > 0) changed |= relax(ns + e.recipient, e.supplier, -e.gain, {StepKind::Backward, i});
      }
      if (!changed) break;
    }
    std::optional<std::size_t> best;
    for (std::size_t r = 0; r < recipients_.size(); ++r) {
      if (!dist[ns + r] || residual({StepKind::ToSink, r}) == 0) continue;
      if (!best || *dist[ns + r] > *dist[ns + *best]) best = r;
    }
    if (!best || !(*dist[ns + *best] > 0)) return std::nullopt;

    std::vector<Step> path{{StepKind::ToSink, *best}};
    std::size_t node = ns + *best;
    for (std::size_t guard = 0; guard <= 2 * n + 2; ++guard) {
      const Step step = *via[node];
      path.push_back(step);
      if (step.kind == StepKind::FromSource) return path;
      const Edge& e = edges_[step.index];
      node = step.kind == StepKind::Forward ? e.supplier : ns + e.recipient;
    }
    return std::nullopt;  // unreachable without positive residual cycles
  }

  std::vector<std::pair<EntityId, Side>> suppliers_;
  std::vector<std::pair<EntityId, Side>> recipients_;
  std::vector<Edge> edges_;
};

}  // namespace

TransactionSet hyr_select(const State& state, const Ledger& ledger, const CurveTable& curves) {
  const std::vector<Candidate> candidates = enumerate_candidates(state, ledger, curves);
  std::map<GoodId, GoodMatching> by_good;
  for (const Candidate& c : candidates) {
    if (!(c.supplier_yield > 0)) continue;
    const Transaction& t = c.transaction;
    by_good[t.good()].add_edge(c, state.occurrences(Offer::supply(t.supplier(), t.good())),
                               state.occurrences(Offer::demand(t.recipient(), t.good())));
  }
  TransactionSet out;
  for (auto& [good, matching] : by_good) matching.solve(out);
  return out;
}

TransactionSet hyr_select_single(const State& state, const Ledger& ledger, const CurveTable& curves) {
  const std::vector<Candidate> candidates = enumerate_candidates(state, ledger, curves);
  TransactionSet out;
  if (!candidates.empty() && candidates.front().supplier_yield > 0) out.add(candidates.front().transaction);
  return out;
}

Real total_supplier_yield(const TransactionSet& transactions, const Ledger& ledger, const CurveTable& curves) {
  Real total(0);
  for (const auto& [t, count] : transactions) {
    total += ledger.supplier_yield(t, curves.at(t)) * static_cast<double>(count);
  }
  return total;
}

}  // namespace giftsim
