#include "giftsim/core.hpp"

namespace giftsim {

std::ostream& operator<<(std::ostream& os, const Offer& offer) {
  if (offer.kind == OfferKind::Supply) return os << offer.entity << " -" << offer.good << "->";
  return os << "-" << offer.good << "-> " << offer.entity;
}

Transaction::Transaction(EntityId supplier, GoodId good, EntityId recipient)
    : supplier_(std::move(supplier)), good_(std::move(good)), recipient_(std::move(recipient)) {
  if (supplier_ == recipient_) {
    throw std::invalid_argument("self-transaction rejected: " + supplier_.str() + " cannot give " + good_.str() +
                                " to itself");
  }
}

std::ostream& operator<<(std::ostream& os, const Transaction& t) {
  return os << t.supplier() << " -" << t.good() << "-> " << t.recipient();
}

Multiset<Offer> footprint(const TransactionSet& transactions) {
  Multiset<Offer> out;
  for (const auto& [t, count] : transactions) {
    out.add(Offer::supply(t.supplier(), t.good()), count);
    out.add(Offer::demand(t.recipient(), t.good()), count);
  }
  return out;
}

bool is_admissible(const TransactionSet& transactions, const State& state) {
  return mset_is_subset(footprint(transactions), state);
}

}  // namespace giftsim
