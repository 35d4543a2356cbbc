#pragma once
// Fragility feasibility: given the items collected along a route (in order),
// can they be packed into m stacks of height k such that no non-fragile item
// ever sits above a fragile one, with items only ever placed on top of a
// stack at their collection step (no rearrangement)?
//
// The fast checks run in constant memory over item runs; the exhaustive
// oracle enumerates actual stack assignments and is the testing reference.

#include <cstddef>
#include <optional>

#include "fvrptw/core.hpp"

namespace fvrptw {

// Modulo mapped into {1..k}: multiples of k give k, not 0.
int mod1(int x, int k);

// Constant-memory state of a partially collected sequence: item counters and
// the maximum number of non-fragile items that can still be taken on board
// (X). Labels in the pricing algorithm carry exactly this state.
struct FragilityState {
  int aH = 0;  // non-fragile items collected
  int aL = 0;  // fragile items collected
  int X = 0;   // non-fragile items still loadable

  int l() const { return aH + aL; }
  static FragilityState initial(int Q) { return {0, 0, Q}; }

  // Advances the state by one customer's items (uniform fragility class).
  // Returns false when the extension is infeasible: the items no longer fit
  // (l > m*k) or the non-fragile budget is exhausted (X < 0).
  bool advance(bool fragile, int count, int m, int k);
};

// Maximum number of non-fragile items that can still be loaded after l items
// when the stack currently being filled must stay available for fragile
// items: m*k - (l - l mod k + k). Negative exactly when l = m*k.
int nonfragile_headroom(int l, int m, int k);

// Constant-memory feasibility check over item runs. A sequence is feasible
// iff at the end of every maximal fragile run (position i, with aH/aL/l the
// prefix counters and aH_total the whole sequence's non-fragile count):
//   (a) aH(i) + mod1(aL(i), k) >= k, or
//   (b) aH_total - aH(i) <= nonfragile_headroom(l(i), m, k).
// Throws std::invalid_argument when the sequence exceeds capacity m*k.
bool check_sequence(const ItemSequence& seq, int m, int k);

// Exact maximum number of non-fragile items that may still be appended after
// the given prefix: min(m*k - l, min over fragile items j in the prefix with
// aH(j) + mod1(aL(j), k) < k of nonfragile_headroom(l(j)) - (aH - aH(j))).
// Throws std::invalid_argument when the prefix exceeds capacity.
int max_additional_nonfragile(const ItemSequence& prefix, int m, int k);

// Exhaustive reference: searches all order-respecting stack assignments
// (stacks are anonymous; first-use order breaks the symmetry, and failed
// states are memoized). Exponential in the worst case — testing scale only.
bool oracle_feasible(const ItemSequence& seq, int m, int k);

// Like oracle_feasible but returns a witness assignment. The node_budget
// overload gives up after that many search states (sets *exhausted) so
// callers can fall back to the constant-memory certificate on large inputs.
std::optional<LoadingConfiguration> oracle_find_configuration(const ItemSequence& seq, int m,
                                                              int k);
std::optional<LoadingConfiguration> oracle_find_configuration(const ItemSequence& seq, int m,
                                                              int k, std::size_t node_budget,
                                                              bool* exhausted);

// Validates a witness against its sequence: exact item multiset, stack height
// <= k, indices increasing bottom-to-top, no non-fragile above a fragile.
bool configuration_valid(const LoadingConfiguration& config, const ItemSequence& seq, int m,
                         int k);

// Load-margin shortcut: any sequence with load <= Q - k is feasible no matter
// the fragility pattern. Returns true for "provably feasible", nullopt for
// "unknown" (never "infeasible").
std::optional<bool> feasible_by_load_margin(int load, int Q, int k);

// Closed-form classification for stacks of height 2: a route is infeasible
// iff it visits >= 2 customers, fills the vehicle exactly, and consists of a
// fragile-customer prefix with odd total demand followed by a non-fragile
// suffix. Throws std::logic_error when called with k != 2.
bool exact_feasible_k2(const Route& route, const Instance& inst);

}  // namespace fvrptw
