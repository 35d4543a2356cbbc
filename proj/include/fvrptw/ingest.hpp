#pragma once
// Solomon-format parsing and instance derivation: truncate to the first n
// customers, override the vehicle capacity, split customers into fragile and
// non-fragile sets by customer number, and build cost/time matrices plus the
// preprocessed arc set.

#include <iosfwd>
#include <string>
#include <vector>

#include "fvrptw/core.hpp"

namespace fvrptw {

struct SolomonNode {
  int id = 0;
  double x = 0, y = 0;
  int demand = 0;
  int ready = 0, due = 0, service = 0;
};

struct RawSolomonInstance {
  std::string name;
  int file_vehicles = 0;
  int file_capacity = 0;             // ignored by derivation; kept for reference
  std::vector<SolomonNode> nodes;    // depot first, then customers in file order
};

// rho is the percentage of non-fragile customers; the assignment follows the
// customer numbers: 50% -> even numbers non-fragile; 25% -> numbers 4i-3
// non-fragile; 75% -> numbers 4i-1 fragile, all others non-fragile.
struct DerivationSpec {
  int n = 50;
  int Q = 48;
  int k = 2;
  int rho_pct = 50;  // 25, 50 or 75
};

enum class Rounding { Truncate, HalfUp };

// Parses the whitespace-delimited Solomon layout (name, VEHICLE section,
// CUSTOMER table). Throws std::runtime_error with a line number on malformed
// numeric fields, and when no depot record is present.
RawSolomonInstance parse_solomon(std::istream& in);
RawSolomonInstance parse_solomon_file(const std::string& path);

// Builds the derived instance: first spec.n customers, capacity spec.Q split
// into m = Q/k stacks of height k, fragile partition per spec.rho_pct, sink
// node duplicating the depot, matrices per build_matrices.
// Throws std::invalid_argument on an invalid spec (Q not divisible by k,
// rho not in {25,50,75}, n exceeding the available customers).
Instance derive_instance(const RawSolomonInstance& raw, const DerivationSpec& spec,
                         Rounding rounding = Rounding::Truncate);

// Fills cost_mat/time_mat from coordinates: cost = Euclidean distance with
// one decimal digit kept (truncated by default), time = cost + service at
// the arc's tail.
void build_matrices(Instance& inst, Rounding rounding = Rounding::Truncate);

// Directed arcs usable by routes after preprocessing. Customer-to-customer
// arcs are dropped when q_i + q_j > Q or when tw_lo[i] + t(i,j) > tw_hi[j];
// depot arcs (0,j) and (j,n+1) are always kept. Arcs into node 0, out of the
// sink, self-loops and the empty-route arc (0,n+1) are not part of the
// routing graph.
struct ArcSet {
  int n = 0;
  std::vector<char> allowed;        // flat (n+2)^2
  std::vector<std::vector<int>> out;  // successors per node
  std::vector<std::vector<int>> in;   // predecessors per node

  bool has(int i, int j) const { return allowed[i * (n + 2) + j] != 0; }
  int count() const;
};

ArcSet preprocess_arcs(const Instance& inst);

}  // namespace fvrptw
