#include "fvrptw/fragility.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace fvrptw {

int mod1(int x, int k) {
  if (x <= 0) throw std::invalid_argument("mod1: x must be positive");
  int r = x % k;
  return r == 0 ? k : r;
}

int nonfragile_headroom(int l, int m, int k) { return m * k - (l - l % k + k); }

bool FragilityState::advance(bool fragile, int count, int m, int k) {
  if (count <= 0) return true;
  if (l() + count > m * k) return false;
  if (fragile) {
    aL += count;
    // A freshly topped fragile item either already has k items' worth of
    // cover (full columns + the current partial one), capping X only by the
    // remaining space, or it caps X by the stack-column headroom.
    if (aH + mod1(aL, k) >= k)
      X = std::min(X, m * k - l());
    else
      X = std::min(X, nonfragile_headroom(l(), m, k));
  } else {
    aH += count;
    X -= count;
  }
  return X >= 0;
}

namespace {

void require_capacity(const ItemSequence& seq, int m, int k, const char* who) {
  if (m <= 0 || k <= 0) throw std::invalid_argument(std::string(who) + ": need m,k >= 1");
  if (seq.total() > m * k) throw std::invalid_argument(std::string(who) + ": sequence exceeds capacity");
}

}  // namespace

bool check_sequence(const ItemSequence& seq, int m, int k) {
  require_capacity(seq, m, k, "check_sequence");
  const int aH_total = seq.total_nonfragile();
  int aH = 0, aL = 0;
  for (size_t r = 0; r < seq.runs.size(); ++r) {
    const ItemRun& run = seq.runs[r];
    if (!run.fragile) {
      aH += run.count;
      continue;
    }
    aL += run.count;
    int l = aH + aL;
    // End of a maximal fragile run: either condition must hold here.
    if (aH + mod1(aL, k) >= k) continue;
    if (aH_total - aH <= nonfragile_headroom(l, m, k)) continue;
    return false;
  }
  return true;
}

int max_additional_nonfragile(const ItemSequence& prefix, int m, int k) {
  require_capacity(prefix, m, k, "max_additional_nonfragile");
  int aH = 0, aL = 0;
  int bound = std::numeric_limits<int>::max();
  for (const ItemRun& run : prefix.runs) {
    if (!run.fragile) {
      aH += run.count;
      continue;
    }
    // Each fragile item in the run may impose its own cap; aH is constant
    // within the run, so walk the items.
    for (int t = 0; t < run.count; ++t) {
      ++aL;
      if (aH + mod1(aL, k) >= k) continue;
      int cap = nonfragile_headroom(aH + aL, m, k) + aH;  // becomes cap - aH(end) later
      bound = std::min(bound, cap);
    }
  }
  int best = m * k - (aH + aL);
  if (bound != std::numeric_limits<int>::max()) best = std::min(best, bound - aH);
  return best;
}

// ---------------------------------------------------------------------------
// Exhaustive oracle

namespace {

struct StackState {
  int height = 0;
  bool has_fragile = false;  // a non-fragile item may never land here again
  std::vector<int> items;    // witness bookkeeping (1-based sequence indices)
};

struct OracleSearch {
  int m = 0, k = 0;
  std::vector<char> item_fragile;  // per item, 1-based at index i-1
  std::vector<StackState> stacks;
  std::unordered_set<std::string> failed;  // memo of (item, canonical state)
  std::size_t budget = std::numeric_limits<std::size_t>::max();
  bool exhausted = false;

  std::string state_key(size_t next_item) const {
    // Stacks are anonymous: canonicalize by sorted (height, flag) pairs.
    std::string key;
    key.reserve(stacks.size() + 8);
    std::vector<char> codes;
    codes.reserve(stacks.size());
    for (const StackState& s : stacks)
      codes.push_back(static_cast<char>(s.height * 2 + (s.has_fragile ? 1 : 0)));
    std::sort(codes.begin(), codes.end());
    key.append(codes.begin(), codes.end());
    key += '|';
    key += std::to_string(next_item);
    return key;
  }

  bool place(size_t next_item) {
    if (next_item >= item_fragile.size() + 1) return true;  // all items placed
    if (budget == 0) {
      exhausted = true;
      return false;
    }
    --budget;
    std::string key = state_key(next_item);
    if (failed.count(key)) return false;

    const bool frag = item_fragile[next_item - 1] != 0;
    // Candidate stacks, greedy-first: non-fragile items prefer the fullest
    // clean stack; fragile items prefer already-poisoned stacks (fullest
    // first), then an empty stack, then the fullest clean stack. Only the
    // first empty stack is tried (stacks are interchangeable).
    std::vector<int> order;
    int first_empty = -1;
    for (int s = 0; s < m; ++s) {
      if (stacks[s].height >= k) continue;
      if (stacks[s].height == 0) {
        if (first_empty < 0) first_empty = s;
        continue;
      }
      if (!frag && stacks[s].has_fragile) continue;
      order.push_back(s);
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      if (frag && stacks[a].has_fragile != stacks[b].has_fragile)
        return stacks[a].has_fragile;  // poisoned first
      return stacks[a].height > stacks[b].height;
    });
    if (first_empty >= 0) {
      if (frag) {
        // After poisoned stacks, before clean ones.
        auto it = std::find_if(order.begin(), order.end(),
                               [&](int s) { return !stacks[s].has_fragile; });
        order.insert(it, first_empty);
      } else {
        order.push_back(first_empty);
      }
    }

    for (int s : order) {
      StackState saved = stacks[s];
      stacks[s].height++;
      stacks[s].has_fragile = stacks[s].has_fragile || frag;
      stacks[s].items.push_back(static_cast<int>(next_item));
      if (place(next_item + 1)) return true;
      stacks[s] = std::move(saved);
      if (exhausted) return false;
    }
    failed.insert(std::move(key));
    return false;
  }
};

std::optional<LoadingConfiguration> oracle_run(const ItemSequence& seq, int m, int k,
                                               std::size_t budget, bool* exhausted_out) {
  require_capacity(seq, m, k, "oracle");
  OracleSearch search;
  search.m = m;
  search.k = k;
  search.budget = budget;
  for (const ItemRun& run : seq.runs)
    for (int t = 0; t < run.count; ++t) search.item_fragile.push_back(run.fragile ? 1 : 0);
  search.stacks.assign(m, {});
  bool ok = search.place(1);
  if (exhausted_out) *exhausted_out = search.exhausted;
  if (!ok) return std::nullopt;
  LoadingConfiguration config;
  config.m = m;
  config.k = k;
  config.stacks.resize(m);
  for (int s = 0; s < m; ++s) config.stacks[s] = search.stacks[s].items;
  return config;
}

}  // namespace

bool oracle_feasible(const ItemSequence& seq, int m, int k) {
  return oracle_run(seq, m, k, std::numeric_limits<std::size_t>::max(), nullptr).has_value();
}

std::optional<LoadingConfiguration> oracle_find_configuration(const ItemSequence& seq, int m,
                                                              int k) {
  return oracle_run(seq, m, k, std::numeric_limits<std::size_t>::max(), nullptr);
}

std::optional<LoadingConfiguration> oracle_find_configuration(const ItemSequence& seq, int m,
                                                              int k, std::size_t node_budget,
                                                              bool* exhausted) {
  return oracle_run(seq, m, k, node_budget, exhausted);
}

bool configuration_valid(const LoadingConfiguration& config, const ItemSequence& seq, int m,
                         int k) {
  if (config.m != m || config.k != k || static_cast<int>(config.stacks.size()) > m) return false;
  const int total = seq.total();
  std::vector<char> seen(total + 1, 0);
  for (const auto& stack : config.stacks) {
    if (static_cast<int>(stack.size()) > k) return false;
    bool fragile_below = false;
    int prev_index = 0;
    for (int item : stack) {
      if (item < 1 || item > total || seen[item]) return false;
      seen[item] = 1;
      if (item <= prev_index) return false;  // placement must respect order
      prev_index = item;
      bool frag = seq.item_fragile(item);
      if (!frag && fragile_below) return false;
      fragile_below = fragile_below || frag;
    }
  }
  for (int i = 1; i <= total; ++i)
    if (!seen[i]) return false;
  return true;
}

std::optional<bool> feasible_by_load_margin(int load, int Q, int k) {
  if (load <= Q - k) return true;
  return std::nullopt;
}

bool exact_feasible_k2(const Route& route, const Instance& inst) {
  if (inst.k != 2) throw std::logic_error("exact_feasible_k2: requires k = 2");
  const int p = route.customer_count();
  if (p < 2) return true;
  int load = 0;
  for (size_t idx = 1; idx + 1 < route.nodes.size(); ++idx) load += inst.demand[route.nodes[idx]];
  if (load != inst.Q) return true;
  // Locate the maximal fragile-customer prefix; the rest must be all
  // non-fragile for the infeasibility pattern to apply.
  int split = 0, prefix_demand = 0;
  while (split < p && inst.fragile[route.nodes[1 + split]]) {
    prefix_demand += inst.demand[route.nodes[1 + split]];
    ++split;
  }
  if (split == 0 || split == p) return true;
  for (int idx = split; idx < p; ++idx)
    if (inst.fragile[route.nodes[1 + idx]]) return true;  // fragile after the prefix
  return prefix_demand % 2 == 0;
}

}  // namespace fvrptw
