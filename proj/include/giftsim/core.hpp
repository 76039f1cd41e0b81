#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace giftsim {

namespace detail {

// Non-empty textual identifier ordered lexicographically. The Tag keeps
// entities and goods from being mixed up.
template <class Tag>
class Identifier {
 public:
  Identifier() = delete;
  explicit Identifier(std::string value) : value_(std::move(value)) {
    if (value_.empty()) {
      throw std::invalid_argument(std::string(Tag::kind) + " identifier must be non-empty");
    }
  }
  Identifier(const char* value) : Identifier(std::string(value)) {}  // NOLINT

  const std::string& str() const noexcept { return value_; }

  friend auto operator<=>(const Identifier&, const Identifier&) = default;
  friend bool operator==(const Identifier&, const Identifier&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Identifier& id) { return os << id.value_; }

 private:
  std::string value_;
};

struct EntityTag {
  static constexpr const char* kind = "entity";
};
struct GoodTag {
  static constexpr const char* kind = "good";
};

}  // namespace detail

using EntityId = detail::Identifier<detail::EntityTag>;
using GoodId = detail::Identifier<detail::GoodTag>;

// Finite multiset. Stored occurrences are always >= 1; iteration follows the
// element order so every consumer is deterministic.
template <class T>
class Multiset {
 public:
  using container_type = std::map<T, std::size_t>;
  using const_iterator = typename container_type::const_iterator;

  Multiset() = default;
  Multiset(std::initializer_list<T> elements) {
    for (const auto& e : elements) add(e);
  }

  void add(const T& element, std::size_t count = 1) {
    if (count == 0) return;
    counts_[element] += count;
    size_ += count;
  }

  // Removes up to `count` occurrences; returns how many were removed.
  std::size_t remove(const T& element, std::size_t count = 1) {
    auto it = counts_.find(element);
    if (it == counts_.end()) return 0;
    const std::size_t removed = std::min(count, it->second);
    it->second -= removed;
    size_ -= removed;
    if (it->second == 0) counts_.erase(it);
    return removed;
  }

  std::size_t occurrences(const T& element) const {
    auto it = counts_.find(element);
    return it == counts_.end() ? 0 : it->second;
  }

  bool contains(const T& element) const { return counts_.count(element) != 0; }

  // Total number of occurrences.
  std::size_t size() const noexcept { return size_; }
  std::size_t distinct() const noexcept { return counts_.size(); }
  bool empty() const noexcept { return size_ == 0; }

  const_iterator begin() const noexcept { return counts_.begin(); }
  const_iterator end() const noexcept { return counts_.end(); }

  friend bool operator==(const Multiset&, const Multiset&) = default;

 private:
  container_type counts_;
  std::size_t size_ = 0;
};

template <class T>
Multiset<T> mset_union(const Multiset<T>& k, const Multiset<T>& l) {
  Multiset<T> out = k;
  for (const auto& [element, count] : l) out.add(element, count);
  return out;
}

template <class T>
bool mset_is_subset(const Multiset<T>& k, const Multiset<T>& l) {
  for (const auto& [element, count] : k) {
    if (count > l.occurrences(element)) return false;
  }
  return true;
}

enum class OfferKind { Supply, Demand };

struct Offer {
  OfferKind kind;
  EntityId entity;
  GoodId good;

  static Offer supply(EntityId entity, GoodId good) { return {OfferKind::Supply, std::move(entity), std::move(good)}; }
  static Offer demand(EntityId entity, GoodId good) { return {OfferKind::Demand, std::move(entity), std::move(good)}; }

  friend auto operator<=>(const Offer&, const Offer&) = default;
  friend bool operator==(const Offer&, const Offer&) = default;
};

std::ostream& operator<<(std::ostream& os, const Offer& offer);

using State = Multiset<Offer>;

// A gift of `good` from `supplier` to `recipient`. Self-gifts are rejected.
class Transaction {
 public:
  Transaction(EntityId supplier, GoodId good, EntityId recipient);

  const EntityId& supplier() const noexcept { return supplier_; }
  const GoodId& good() const noexcept { return good_; }
  const EntityId& recipient() const noexcept { return recipient_; }

  bool involves(const EntityId& entity) const noexcept { return entity == supplier_ || entity == recipient_; }

  // Ordered by (supplier, good, recipient).
  friend auto operator<=>(const Transaction&, const Transaction&) = default;
  friend bool operator==(const Transaction&, const Transaction&) = default;

 private:
  EntityId supplier_;
  GoodId good_;
  EntityId recipient_;
};

std::ostream& operator<<(std::ostream& os, const Transaction& t);

using TransactionSet = Multiset<Transaction>;

// One Supply and one Demand offer per transaction occurrence.
Multiset<Offer> footprint(const TransactionSet& transactions);

bool is_admissible(const TransactionSet& transactions, const State& state);

}  // namespace giftsim
