#include <random>

#include <gtest/gtest.h>

#include "acceptance/oracles.hpp"
#include "giftsim/core.hpp"

using namespace giftsim;

namespace {

Multiset<char> chars(std::string_view s) {
  Multiset<char> m;
  for (char c : s) m.add(c);
  return m;
}

Multiset<int> random_multiset(std::mt19937& rng) {
  std::uniform_int_distribution<int> len(0, 6), elem(0, 4);
  Multiset<int> m;
  for (int i = len(rng); i > 0; --i) m.add(elem(rng));
  return m;
}

}  // namespace

TEST(Multiset, UnionAddsOccurrences) {
  EXPECT_EQ(mset_union(chars("aab"), chars("bc")), chars("aabbc"));
  EXPECT_EQ(mset_union(chars("aab"), Multiset<char>{}), chars("aab"));
}

TEST(Multiset, OccurrencesOfNineElementExample) {
  const Multiset<int> m{1, 1, 2, 5, 7, 4, 7, 7, 8};
  EXPECT_EQ(m.size(), 9u);
  const std::vector<std::pair<int, std::size_t>> expected{{1, 2}, {2, 1}, {4, 1}, {5, 1}, {7, 3}, {8, 1}};
  for (const auto& [e, n] : expected) EXPECT_EQ(m.occurrences(e), n) << e;
  EXPECT_EQ(m.occurrences(3), 0u);
  EXPECT_FALSE(m.contains(3));
}

TEST(Multiset, SubsetComparesOccurrences) {
  EXPECT_TRUE(mset_is_subset(chars("a"), chars("aab")));
  EXPECT_FALSE(mset_is_subset(chars("aaa"), chars("aa")));
  EXPECT_TRUE(mset_is_subset(Multiset<char>{}, chars("xyz")));
  EXPECT_TRUE(mset_is_subset(Multiset<char>{}, Multiset<char>{}));
}

TEST(Multiset, RemoveNeverGoesBelowZero) {
  Multiset<char> m = chars("aab");
  EXPECT_EQ(m.remove('a', 5), 2u);
  EXPECT_EQ(m, chars("b"));
  EXPECT_EQ(m.remove('z'), 0u);
  EXPECT_EQ(m.size(), 1u);
}

TEST(Multiset, UnionAndSubsetLawsOnRandomInputs) {
  std::mt19937 rng(11);
  for (int i = 0; i < 500; ++i) {
    const auto k = random_multiset(rng), l = random_multiset(rng), m = random_multiset(rng);
    EXPECT_EQ(mset_union(k, l), mset_union(l, k));
    EXPECT_EQ(mset_union(mset_union(k, l), m), mset_union(k, mset_union(l, m)));
    EXPECT_TRUE(mset_is_subset(k, k));
    EXPECT_TRUE(mset_is_subset(k, mset_union(k, l)));
    EXPECT_EQ(mset_union(k, l).size(), k.size() + l.size());
    // transitivity along a union chain
    EXPECT_TRUE(mset_is_subset(k, mset_union(mset_union(k, l), m)));
    if (mset_is_subset(k, l) && mset_is_subset(l, m)) EXPECT_TRUE(mset_is_subset(k, m));
  }
}

TEST(Identifiers, RejectEmptyAndOrderLexicographically) {
  EXPECT_THROW(EntityId(""), std::invalid_argument);
  EXPECT_THROW(GoodId(""), std::invalid_argument);
  EXPECT_LT(EntityId("P"), EntityId("Q"));
  EXPECT_LT(EntityId("Q1"), EntityId("Q10"));
  EXPECT_LT(EntityId("Q10"), EntityId("Q2"));
}

TEST(Transaction, SelfGiftRejected) {
  EXPECT_THROW(Transaction("P", "a", "P"), std::invalid_argument);
  EXPECT_NO_THROW(Transaction("P", "a", "Q"));
}

TEST(Transaction, OrderedBySupplierGoodRecipient) {
  EXPECT_LT(Transaction("P", "a", "R"), Transaction("P", "b", "Q"));
  EXPECT_LT(Transaction("P", "b", "Q"), Transaction("Q", "a", "P"));
  EXPECT_LT(Transaction("P", "a", "Q"), Transaction("P", "a", "R"));
}

TEST(Footprint, OneSupplyAndOneDemandPerOccurrence) {
  const Transaction t("P", "a", "Q");
  EXPECT_EQ(footprint(TransactionSet{t}), (State{Offer::supply("P", "a"), Offer::demand("Q", "a")}));
  TransactionSet twice;
  twice.add(t, 2);
  State expected;
  expected.add(Offer::supply("P", "a"), 2);
  expected.add(Offer::demand("Q", "a"), 2);
  EXPECT_EQ(footprint(twice), expected);
  EXPECT_TRUE(footprint(TransactionSet{}).empty());
}

TEST(Footprint, AdditiveOverUnion) {
  std::mt19937 rng(5);
  const std::vector<Transaction> pool{{"P", "a", "Q"}, {"Q", "b", "P"}, {"P", "a", "R"}, {"R", "a", "Q"}};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1), len(0, 4);
  for (int i = 0; i < 200; ++i) {
    TransactionSet t1, t2;
    for (auto n = len(rng); n > 0; --n) t1.add(pool[pick(rng)]);
    for (auto n = len(rng); n > 0; --n) t2.add(pool[pick(rng)]);
    EXPECT_EQ(footprint(mset_union(t1, t2)), mset_union(footprint(t1), footprint(t2)));
  }
}

TEST(Admissibility, Examples) {
  const Transaction t("P", "a", "Q");
  const State both{Offer::supply("P", "a"), Offer::demand("Q", "a")};
  EXPECT_TRUE(is_admissible(TransactionSet{t}, both));
  EXPECT_FALSE(is_admissible(TransactionSet{t}, State{Offer::supply("P", "a")}));
  TransactionSet twice;
  twice.add(t, 2);
  EXPECT_FALSE(is_admissible(twice, both));
  EXPECT_FALSE(oracle::consumes_within(twice, both));
  EXPECT_TRUE(is_admissible(TransactionSet{}, State{}));
}

TEST(Admissibility, AgreesWithOfferByOfferConsumption) {
  std::mt19937 rng(17);
  const std::vector<EntityId> entities{"P", "Q", "R"};
  const std::vector<GoodId> goods{"a", "b"};
  std::uniform_int_distribution<std::size_t> pe(0, 2), pg(0, 1), len(0, 6), tlen(0, 3);
  std::bernoulli_distribution coin;
  for (int i = 0; i < 2000; ++i) {
    State s;
    for (auto n = len(rng); n > 0; --n) {
      s.add(coin(rng) ? Offer::supply(entities[pe(rng)], goods[pg(rng)]) : Offer::demand(entities[pe(rng)], goods[pg(rng)]));
    }
    TransactionSet t;
    for (auto n = tlen(rng); n > 0; --n) {
      const auto a = pe(rng);
      const auto b = (a + 1 + pe(rng) % 2) % 3;
      t.add(Transaction(entities[a], goods[pg(rng)], entities[b]));
    }
    EXPECT_EQ(is_admissible(t, s), oracle::consumes_within(t, s));
  }
}
