#include "fvrptw/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fvrptw {

std::string deci_str(deci v) {
  char buf[32];
  deci a = v < 0 ? -v : v;
  std::snprintf(buf, sizeof(buf), "%s%lld.%lld", v < 0 ? "-" : "",
                static_cast<long long>(a / 10), static_cast<long long>(a % 10));
  return buf;
}

void Instance::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("instance: " + msg); };
  if (n < 0) fail("negative customer count");
  if (Q <= 0 || m <= 0 || k <= 0 || m * k != Q) fail("capacity must satisfy Q = m*k");
  const int N = nodes();
  if ((int)coords.size() != N || (int)demand.size() != N || (int)tw_lo.size() != N ||
      (int)tw_hi.size() != N || (int)service.size() != N || (int)fragile.size() != N)
    fail("node array size mismatch");
  if ((int)cost_mat.size() != N * N || (int)time_mat.size() != N * N) fail("matrix size mismatch");
  if (demand[0] != 0 || demand[sink()] != 0) fail("depot demand must be 0");
  for (int i = 1; i <= n; ++i) {
    if (demand[i] < 1 || demand[i] > Q) fail("customer demand outside [1,Q]");
    if (tw_lo[i] > tw_hi[i]) fail("empty time window");
  }
  if (coords[0].x != coords[sink()].x || coords[0].y != coords[sink()].y ||
      tw_lo[0] != tw_lo[sink()] || tw_hi[0] != tw_hi[sink()] || service[0] != service[sink()])
    fail("sink must duplicate the depot");
  // One-decimal truncation can relax the exact Euclidean triangle inequality
  // by at most 0.2, so validate with that slack (2 deci).
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (c(i, j) < 0 || t(i, j) < 0) fail("negative cost or time");
      for (int h = 0; h < N; ++h) {
        if (c(i, j) > c(i, h) + c(h, j) + 2) fail("cost triangle inequality violated");
        if (t(i, j) > t(i, h) + t(h, j) + 2) fail("time triangle inequality violated");
      }
    }
}

bool Route::elementary() const {
  std::vector<int> seen(nodes.begin() + 1, nodes.end() - 1);
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

std::vector<int> Route::coverage(int n) const {
  std::vector<int> a(n + 2, 0);
  for (size_t p = 1; p + 1 < nodes.size(); ++p) a[nodes[p]]++;
  return a;
}

std::uint64_t Route::sequence_hash() const {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a over the node sequence
  for (int v : nodes) {
    h ^= static_cast<std::uint64_t>(v) + 1;
    h *= 1099511628211ull;
  }
  return h;
}

deci route_cost(const Route& route, const Instance& inst) {
  if (route.nodes.size() < 2) throw std::out_of_range("route_cost: route too short");
  deci sum = 0;
  for (size_t p = 0; p + 1 < route.nodes.size(); ++p) {
    int i = route.nodes[p], j = route.nodes[p + 1];
    if (i < 0 || i >= inst.nodes() || j < 0 || j >= inst.nodes())
      throw std::out_of_range("route_cost: unknown node index");
    sum += inst.c(i, j);
  }
  return sum;
}

int ItemSequence::total() const {
  int s = 0;
  for (const auto& r : runs) s += r.count;
  return s;
}

int ItemSequence::total_fragile() const {
  int s = 0;
  for (const auto& r : runs)
    if (r.fragile) s += r.count;
  return s;
}

int ItemSequence::total_nonfragile() const { return total() - total_fragile(); }

void ItemSequence::append(bool frag, int count) {
  if (count <= 0) return;
  if (!runs.empty() && runs.back().fragile == frag)
    runs.back().count += count;
  else
    runs.push_back({frag, count});
}

ItemSequence ItemSequence::prefix(int i) const {
  ItemSequence out;
  int left = i;
  for (const auto& r : runs) {
    if (left <= 0) break;
    int take = std::min(left, r.count);
    out.append(r.fragile, take);
    left -= take;
  }
  if (left > 0) throw std::out_of_range("ItemSequence::prefix: beyond sequence end");
  return out;
}

bool ItemSequence::item_fragile(int i) const {
  int pos = 0;
  for (const auto& r : runs) {
    pos += r.count;
    if (i <= pos) return r.fragile;
  }
  throw std::out_of_range("ItemSequence::item_fragile: index beyond sequence end");
}

ItemSequence expand_items(const Route& route, const Instance& inst) {
  ItemSequence seq;
  for (size_t p = 1; p + 1 < route.nodes.size(); ++p) {
    int v = route.nodes[p];
    if (!inst.is_customer(v)) throw std::out_of_range("expand_items: not a customer node");
    seq.append(inst.fragile[v] != 0, inst.demand[v]);
  }
  return seq;
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::FCPP: return "fc-pp";
    case Mode::FCMP: return "fc-mp";
    case Mode::VRPTW: return "vrptw";
  }
  return "?";
}

std::optional<Mode> mode_from_string(const std::string& s) {
  if (s == "fc-pp" || s == "fcpp") return Mode::FCPP;
  if (s == "fc-mp" || s == "fcmp") return Mode::FCMP;
  if (s == "vrptw") return Mode::VRPTW;
  return std::nullopt;
}

void SolverConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
  if (ng_init < 1) fail("ng_init must be >= 1");
  if (ng_augment_max < 0) fail("ng_augment_max must be >= 0");
  if (reduced_graph_rank < 1) fail("reduced_graph_rank must be >= 1");
  if (sr_subset_size != 3) fail("only subset-row cuts over 3 customers are supported");
  if (twopath_max_subset < 2) fail("twopath_max_subset must be >= 2");
  if (rc_tol <= 0 || lp_tol <= 0) fail("tolerances must be positive");
  if (time_limit_seconds <= 0) fail("time limit must be positive");
  if (max_columns_per_pricing < 1) fail("max_columns_per_pricing must be >= 1");
}

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::TimeLimit: return "TimeLimit";
    case SolveStatus::Infeasible: return "Infeasible";
  }
  return "?";
}

}  // namespace fvrptw
