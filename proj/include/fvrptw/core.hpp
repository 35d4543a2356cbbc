#pragma once
// Core domain types shared by every part of the solver: instances, routes,
// item sequences, loading configurations, solver configuration and reports.
// All times and costs are fixed-point with one decimal digit ("deci" units,
// stored as 64-bit integers) so comparisons are exact; demands and capacities
// are plain integers.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fvrptw {

using deci = std::int64_t;  // tenths of a cost/time unit

inline double deci_to_double(deci v) { return static_cast<double>(v) / 10.0; }

// Formats a deci value with one decimal digit, e.g. 12558 -> "1255.8".
std::string deci_str(deci v);

// ---------------------------------------------------------------------------
// Instance

struct Point {
  double x = 0, y = 0;
};

// Nodes are indexed 0..n+1: node 0 is the start depot, nodes 1..n are the
// customers, node n+1 is a copy of the depot acting as route sink.
struct Instance {
  std::string name;  // e.g. "R101"
  int n = 0;         // number of customers
  int Q = 0;         // vehicle capacity in items, Q = m*k
  int m = 0;         // number of stacks
  int k = 0;         // stack height
  int rho_pct = 50;  // share (%) of non-fragile customers used at derivation

  std::vector<Point> coords;    // size n+2
  std::vector<int> demand;      // size n+2, 0 at depot and sink
  std::vector<deci> tw_lo;      // earliest service start
  std::vector<deci> tw_hi;      // latest service start
  std::vector<deci> service;    // service duration
  std::vector<char> fragile;    // 1 if the customer's items are fragile

  // Flat (n+2)x(n+2) matrices; time(i,j) = cost(i,j) + service[i].
  std::vector<deci> cost_mat;
  std::vector<deci> time_mat;

  int nodes() const { return n + 2; }
  int sink() const { return n + 1; }
  deci c(int i, int j) const { return cost_mat[i * (n + 2) + j]; }
  deci t(int i, int j) const { return time_mat[i * (n + 2) + j]; }
  bool is_customer(int i) const { return i >= 1 && i <= n; }

  // Checks structural invariants (Q = m*k, fragile/non-fragile partition,
  // demand ranges, depot/sink duplication, triangle inequality up to the
  // one-decimal truncation slack). Throws std::invalid_argument on violation.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Routes

struct Route {
  std::vector<int> nodes;  // 0, v1, ..., vp, n+1
  deci cost = 0;           // sum of arc costs
  int load = 0;            // sum of demands

  int customer_count() const { return static_cast<int>(nodes.size()) - 2; }
  bool elementary() const;  // no customer visited twice
  // Visit counts per node (size n+2); >1 entries possible for relaxed routes.
  std::vector<int> coverage(int n) const;
  // Key identifying the node sequence, used for pool deduplication.
  std::uint64_t sequence_hash() const;
};

// Recomputes the arc-cost sum of `route` from the instance matrices.
// Throws std::out_of_range if the route references an unknown node.
deci route_cost(const Route& route, const Instance& inst);

// ---------------------------------------------------------------------------
// Item sequences and loading configurations

// A run of consecutive identical-fragility items in collection order.
struct ItemRun {
  bool fragile = false;
  int count = 0;
};

// The per-item expansion of a route: all items of a visited customer appear
// consecutively, in visit order. Items are conceptually numbered 1..total().
struct ItemSequence {
  std::vector<ItemRun> runs;

  int total() const;
  int total_fragile() const;
  int total_nonfragile() const;
  void append(bool fragile, int count);  // merges with a matching tail run
  // First `i` items as a sequence (splits a run if needed); 0 <= i <= total().
  ItemSequence prefix(int i) const;
  // Fragility flag of item `i` (1-based).
  bool item_fragile(int i) const;
};

// Expands a route into its item sequence: demand[v] items per visited
// customer, uniformly fragile or non-fragile. Visits are taken in order, so
// the expansion is also defined for non-elementary (relaxed) routes.
ItemSequence expand_items(const Route& route, const Instance& inst);

// An explicit assignment of items to stacks; stacks[s] lists item indices
// (1-based positions in the originating ItemSequence) bottom to top.
struct LoadingConfiguration {
  int m = 0, k = 0;
  std::vector<std::vector<int>> stacks;
};

// ---------------------------------------------------------------------------
// Solver configuration and reports

enum class Mode { FCPP, FCMP, VRPTW };

const char* mode_name(Mode m);
std::optional<Mode> mode_from_string(const std::string& s);

struct SolverConfig {
  Mode mode = Mode::FCPP;
  int ng_init = 10;               // initial ng-neighborhood size (incl. self)
  int ng_augment_max = 10;        // max neighbors added per node afterwards
  int reduced_graph_rank = 10;    // rank threshold for heuristic pricing
  int sr_subset_size = 3;         // subset-row cut subset size
  int twopath_max_subset = 15;    // largest customer set tried for 2-path cuts
  double time_limit_seconds = 7200;
  double rc_tol = 1e-6;           // reduced cost < -rc_tol counts as negative
  double lp_tol = 1e-6;           // LP optimality tolerance
  int max_columns_per_pricing = 200;
  int max_sr_per_round = 50;
  int max_twopath_per_round = 20;
  int max_cut_rounds = 10;
  bool twopath_root_only = true;
  bool use_heuristic_pricing = true;
  bool use_dominance = true;      // disabled only by correctness tests
  bool log = false;               // progress chatter on stdout

  void validate() const;  // throws std::invalid_argument on bad values
};

enum class SolveStatus { Optimal, TimeLimit, Infeasible };

const char* status_name(SolveStatus s);

struct RouteReport {
  Route route;
  // Loading witness (present when one was constructed; always absent in
  // VRPTW mode).
  std::optional<LoadingConfiguration> loading;
};

struct SolutionReport {
  SolveStatus status = SolveStatus::Infeasible;
  deci z_ip = 0;            // incumbent objective
  double z_root_lp = 0;     // root relaxation bound before any cuts (deci)
  int vehicles = 0;
  double wall_seconds = 0;
  double root_gap_pct = 0;  // 100*(z_ip - z_root_lp)/z_ip, Optimal only
  long nodes = 0;           // branch-and-bound nodes processed
  long ipcs = 0;            // infeasible-path cuts generated (FC-MP)
  std::vector<RouteReport> routes;
};

}  // namespace fvrptw
