#pragma once
// Route pricing: resource-constrained shortest paths on the preprocessed arc
// set, solved by a label-setting algorithm whose labels carry time, load and
// the stacking headroom needed to decide fragility feasibility on the fly.
// Elementarity is relaxed to neighborhood-feasibility (ng-routes) and
// tightened lazily: customers start untracked and join the tracked set only
// when the current best route actually revisits them, so early iterations
// stay cheap and the final answer is exact over the ng-route set.

#include <array>
#include <cstdint>
#include <vector>

#include "fvrptw/core.hpp"
#include "fvrptw/ingest.hpp"

namespace fvrptw {

// Parity bits carried per label for active limited-memory cut rows; the
// master never keeps more of those rows than this.
constexpr int kMaxSrCuts = 192;

// Bitset over customer ids 1..n (n <= 126).
using CustomerMask = std::array<std::uint64_t, 2>;

inline bool mask_test(const CustomerMask& m, int v) {
  return ((m[static_cast<std::size_t>(v >> 6)] >> (v & 63)) & 1u) != 0;
}
inline void mask_set(CustomerMask& m, int v) {
  m[static_cast<std::size_t>(v >> 6)] |= std::uint64_t{1} << (v & 63);
}
inline bool mask_subset(const CustomerMask& a, const CustomerMask& b) {
  return (a[0] & ~b[0]) == 0 && (a[1] & ~b[1]) == 0;
}

// One active subset-row cut as pricing sees it: which customers belong to the
// subset and the (nonpositive) dual its master row currently carries.
struct SrCutSpec {
  CustomerMask members{};
  double sigma = 0;
};

struct PricingResult {
  std::vector<Route> routes;  // acceptable routes, best reduced cost first
  std::vector<double> rcs;    // aligned reduced costs
  double min_rc = 0;          // exact minimum over acceptable routes when exact
  bool exact = false;         // true when a full run converged (not heuristic)
  long long labels = 0;       // labels processed, for diagnostics
};

class PricingEngine {
 public:
  PricingEngine(const Instance& inst, const SolverConfig& config);

  // cbar is the reduced arc cost matrix, flat (n+2)^2 row-major, already
  // carrying every row dual that can be mapped onto individual arcs; arcs
  // reflects preprocessing plus any branching fixings.
  PricingResult solve(const ArcSet& arcs, const std::vector<double>& cbar,
                      const std::vector<SrCutSpec>& sr_cuts);

  // Customers revisited while still inside the moving neighborhood memory.
  // Empty result means the route is acceptable as a column at the current
  // neighborhood sizes.
  std::vector<int> ng_violations(const Route& route) const;

  // Adds customer l to the neighborhood of every node in `between`, bounded
  // by the per-node growth budget; returns how many sets changed.
  int augment_ng(int l, const std::vector<int>& between);

  int tracked_count() const;
  int neighborhood_size(int customer) const;

 private:
  const Instance& inst_;
  Mode mode_;
  double rc_tol_;
  int max_routes_;
  int heur_rank_;
  bool use_heuristic_;
  bool use_dominance_;
  int ng_growth_cap_;

  std::vector<CustomerMask> ng_mask_;  // per node: customers its memory keeps
  std::vector<int> ng_extra_;          // growth used per node
  CustomerMask tracked_{};             // customers whose revisits are blocked

  struct RunResult {
    std::vector<int> sink_labels;
    long long processed = 0;
  };
  struct Label;
  void run_labeling(const ArcSet& arcs, const std::vector<char>* arc_keep,
                    const std::vector<double>& cbar, const std::vector<SrCutSpec>& sr_cuts,
                    std::vector<Label>& arena, RunResult& out) const;
  Route route_of(const std::vector<Label>& arena, int sink_label) const;
  std::vector<char> heuristic_arcs(const ArcSet& arcs, const std::vector<double>& cbar) const;
};

// Exhaustive depth-first enumeration of elementary feasible routes with exact
// reduced costs; the reference the labeling algorithm is tested against.
// min_rc is the true minimum over all elementary routes (even when >= -tol);
// routes below -tol are returned best-first, capped at max_routes.
PricingResult exact_pricing_dfs(const Instance& inst, Mode mode, const ArcSet& arcs,
                                const std::vector<double>& cbar,
                                const std::vector<SrCutSpec>& sr_cuts, double rc_tol,
                                int max_routes);

}  // namespace fvrptw
