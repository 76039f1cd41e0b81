#pragma once

#include <vector>

#include "giftsim/core.hpp"
#include "giftsim/credit.hpp"

namespace giftsim {

struct Candidate {
  Transaction transaction;
  Real supplier_yield;
};

// Every distinct supplier/recipient pairing of the same good available in
// `state`, self-pairings excluded. Sorted by descending supplier yield, ties
// by ascending (supplier, good, recipient). Throws MissingCurveError when a
// constructible pairing has no curve.
std::vector<Candidate> enumerate_candidates(const State& state, const Ledger& ledger, const CurveTable& curves);

// Highest Yield Rule: the admissible transaction multiset with the largest
// total supplier yield, using only strictly positive yields fixed at the
// opening ledger. With a single supplier per good this is the top-down pick
// of the highest yields; with several competing suppliers it is solved as a
// maximum-weight matching, so it never loses to a greedy reassignment.
TransactionSet hyr_select(const State& state, const Ledger& ledger, const CurveTable& curves);

// Single-choice variant: the one highest-yield candidate, if its yield is positive.
TransactionSet hyr_select_single(const State& state, const Ledger& ledger, const CurveTable& curves);

// Sum of supplier yields of `transactions` on `ledger`.
Real total_supplier_yield(const TransactionSet& transactions, const Ledger& ledger, const CurveTable& curves);

}  // namespace giftsim
