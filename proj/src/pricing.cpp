#include "fvrptw/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "fvrptw/fragility.hpp"

namespace fvrptw {

namespace {

constexpr double kDomEps = 1e-9;
constexpr long long kLabelCap = 40'000'000;

}  // namespace

struct PricingEngine::Label {
  double C;                          // reduced cost so far
  deci T;                            // earliest service start at node
  std::int32_t L, AH, AL, X;         // load, item counters, stacking headroom
  CustomerMask V;                    // blocked customers (memory + unreachable)
  std::array<std::uint64_t, 3> sr;   // visit parity per active subset-row cut
  std::int32_t node;
  std::int32_t pred;
  bool dead;
};

PricingEngine::PricingEngine(const Instance& inst, const SolverConfig& config)
    : inst_(inst),
      mode_(config.mode),
      rc_tol_(config.rc_tol),
      max_routes_(config.max_columns_per_pricing),
      heur_rank_(config.reduced_graph_rank),
      use_heuristic_(config.use_heuristic_pricing),
      use_dominance_(config.use_dominance),
      ng_growth_cap_(config.ng_augment_max) {
  if (inst.n > 126) throw std::invalid_argument("pricing supports at most 126 customers");
  const int delta0 = std::max(1, std::min(config.ng_init, inst.n));
  ng_mask_.assign(inst.nodes(), CustomerMask{});
  ng_extra_.assign(inst.nodes(), 0);
  for (int i = 1; i <= inst.n; ++i) {
    std::vector<std::pair<deci, int>> cand;
    cand.reserve(inst.n - 1);
    for (int j = 1; j <= inst.n; ++j)
      if (j != i) cand.emplace_back(inst.c(i, j), j);
    std::sort(cand.begin(), cand.end());
    mask_set(ng_mask_[i], i);
    const int extra = std::min<int>(delta0 - 1, static_cast<int>(cand.size()));
    for (int t = 0; t < extra; ++t) mask_set(ng_mask_[i], cand[t].second);
  }
}

int PricingEngine::tracked_count() const {
  int c = 0;
  for (std::uint64_t w : tracked_) c += __builtin_popcountll(w);
  return c;
}

int PricingEngine::neighborhood_size(int customer) const {
  int c = 0;
  for (std::uint64_t w : ng_mask_[customer]) c += __builtin_popcountll(w);
  return c;
}

int PricingEngine::augment_ng(int l, const std::vector<int>& between) {
  int changed = 0;
  for (int v : between) {
    if (!inst_.is_customer(v) || v == l) continue;
    if (mask_test(ng_mask_[v], l)) continue;
    if (ng_extra_[v] >= ng_growth_cap_) continue;
    mask_set(ng_mask_[v], l);
    ++ng_extra_[v];
    ++changed;
  }
  return changed;
}

std::vector<int> PricingEngine::ng_violations(const Route& route) const {
  std::vector<int> out;
  CustomerMask mem{}, reported{};
  for (std::size_t p = 1; p + 1 < route.nodes.size(); ++p) {
    const int v = route.nodes[p];
    if (mask_test(mem, v) && !mask_test(reported, v)) {
      out.push_back(v);
      mask_set(reported, v);
    }
    mem[0] &= ng_mask_[v][0];
    mem[1] &= ng_mask_[v][1];
    mask_set(mem, v);
  }
  return out;
}

Route PricingEngine::route_of(const std::vector<Label>& arena, int sink_label) const {
  Route r;
  for (int idx = sink_label; idx >= 0; idx = arena[idx].pred) r.nodes.push_back(arena[idx].node);
  std::reverse(r.nodes.begin(), r.nodes.end());
  r.cost = route_cost(r, inst_);
  r.load = 0;
  for (std::size_t p = 1; p + 1 < r.nodes.size(); ++p) r.load += inst_.demand[r.nodes[p]];
  return r;
}

std::vector<char> PricingEngine::heuristic_arcs(const ArcSet& arcs,
                                                const std::vector<double>& cbar) const {
  const int N = inst_.nodes();
  std::vector<char> keep(static_cast<std::size_t>(N) * N, 0);
  std::vector<std::pair<double, int>> ranked;
  for (int i = 0; i < N; ++i) {
    ranked.clear();
    for (int j : arcs.out[i]) ranked.emplace_back(cbar[static_cast<std::size_t>(i) * N + j], j);
    const int cut = std::min<int>(heur_rank_, static_cast<int>(ranked.size()));
    std::partial_sort(ranked.begin(), ranked.begin() + cut, ranked.end());
    for (int t = 0; t < cut; ++t) keep[static_cast<std::size_t>(i) * N + ranked[t].second] = 1;
  }
  for (int j = 0; j < N; ++j) {
    ranked.clear();
    for (int i : arcs.in[j]) ranked.emplace_back(cbar[static_cast<std::size_t>(i) * N + j], i);
    const int cut = std::min<int>(heur_rank_, static_cast<int>(ranked.size()));
    std::partial_sort(ranked.begin(), ranked.begin() + cut, ranked.end());
    for (int t = 0; t < cut; ++t) keep[static_cast<std::size_t>(ranked[t].second) * N + j] = 1;
  }
  return keep;
}

void PricingEngine::run_labeling(const ArcSet& arcs, const std::vector<char>* arc_keep,
                                 const std::vector<double>& cbar,
                                 const std::vector<SrCutSpec>& sr_cuts, std::vector<Label>& arena,
                                 RunResult& out) const {
  const Instance& inst = inst_;
  const int N = inst.nodes();
  const int n = inst.n;
  const int sink = inst.sink();
  const int Q = static_cast<int>(inst.Q);
  const int m = static_cast<int>(inst.m);
  const int k = static_cast<int>(inst.k);
  const bool fragility = mode_ == Mode::FCPP;
  const int n_sr = static_cast<int>(sr_cuts.size());
  if (n_sr > kMaxSrCuts) throw std::invalid_argument("too many subset-row cuts for pricing");

  std::vector<std::vector<int>> sr_of(N);
  for (int w = 0; w < n_sr; ++w)
    for (int v = 1; v <= n; ++v)
      if (mask_test(sr_cuts[w].members, v)) sr_of[v].push_back(w);

  deci max_t = 0;
  for (int i = 0; i < N; ++i) max_t = std::max(max_t, inst.tw_hi[i]);
  std::vector<std::vector<std::int32_t>> buckets(static_cast<std::size_t>(max_t) + 1);
  std::vector<std::vector<std::int32_t>> alive(N);

  arena.clear();
  out.sink_labels.clear();
  out.processed = 0;

  Label init{};
  init.C = 0;
  init.T = inst.tw_lo[0];
  init.L = init.AH = init.AL = 0;
  init.X = Q;
  init.node = 0;
  init.pred = -1;
  init.dead = false;
  arena.push_back(init);
  buckets[static_cast<std::size_t>(init.T)].push_back(0);

  // True when a dominates b at equal nodes (ties resolved for a, the earlier
  // label). With active subset-row cuts a pays, per cut where only it has an
  // open visit parity, the wrap penalty b might never incur.
  auto dominates = [&](const Label& a, const Label& b) {
    if (a.T > b.T || a.L > b.L) return false;
    if (fragility) {
      const int lhs = std::min<int>(a.X, Q - a.L - (k - a.AH - 1));
      if (lhs < Q - b.L) return false;
    }
    if ((a.V[0] & ~b.V[0]) != 0 || (a.V[1] & ~b.V[1]) != 0) return false;
    double ca = a.C;
    for (int word = 0; word < 3; ++word) {
      std::uint64_t diff = a.sr[word] & ~b.sr[word];
      while (diff != 0) {
        const int bit = __builtin_ctzll(diff);
        diff &= diff - 1;
        ca -= sr_cuts[(word << 6) + bit].sigma;
      }
    }
    return ca <= b.C + kDomEps;
  };

  for (deci tcur = 0; tcur <= max_t; ++tcur) {
    auto& bucket = buckets[static_cast<std::size_t>(tcur)];
    for (std::size_t bi = 0; bi < bucket.size(); ++bi) {
      const int cur_idx = bucket[bi];
      if (arena[cur_idx].dead) continue;
      const Label cur = arena[cur_idx];  // copy: arena reallocates under us
      ++out.processed;
      const int i = cur.node;
      for (int j : arcs.out[i]) {
        if (arc_keep != nullptr && (*arc_keep)[static_cast<std::size_t>(i) * N + j] == 0) continue;

        if (j == sink) {
          const deci t_end = cur.T + inst.t(i, sink);
          if (t_end > inst.tw_hi[sink]) continue;
          Label lab = cur;
          lab.C = cur.C + cbar[static_cast<std::size_t>(i) * N + sink];
          lab.T = t_end;
          lab.node = sink;
          lab.pred = cur_idx;
          lab.dead = false;
          arena.push_back(lab);
          out.sink_labels.push_back(static_cast<int>(arena.size()) - 1);
          continue;
        }

        if (mask_test(cur.V, j)) continue;  // remembered visit or unreachable
        const deci t2 = std::max(cur.T + inst.t(i, j), inst.tw_lo[j]);
        if (t2 > inst.tw_hi[j]) continue;
        const int q = static_cast<int>(inst.demand[j]);
        const int l2 = cur.L + q;
        if (l2 > Q) continue;

        FragilityState fs{cur.AH, cur.AL, cur.X};
        if (fragility && !fs.advance(inst.fragile[j], q, m, k)) continue;

        double c2 = cur.C + cbar[static_cast<std::size_t>(i) * N + j];
        std::array<std::uint64_t, 3> sr2 = cur.sr;
        for (int w : sr_of[j]) {
          const int word = w >> 6;
          const std::uint64_t bit = std::uint64_t{1} << (w & 63);
          if ((sr2[word] & bit) != 0) {
            sr2[word] &= ~bit;
            c2 -= sr_cuts[w].sigma;  // completed a pair inside the subset
          } else {
            sr2[word] |= bit;
          }
        }

        CustomerMask v2 = cur.V;
        if (mask_test(tracked_, j)) mask_set(v2, j);
        v2[0] &= ng_mask_[j][0];
        v2[1] &= ng_mask_[j][1];
        for (int l = 1; l <= n; ++l) {
          if (mask_test(v2, l)) continue;
          if (t2 + inst.t(j, l) > inst.tw_hi[l] || l2 + inst.demand[l] > Q) mask_set(v2, l);
        }

        Label lab;
        lab.C = c2;
        lab.T = t2;
        lab.L = l2;
        lab.AH = fs.aH;
        lab.AL = fs.aL;
        lab.X = fs.X;
        lab.V = v2;
        lab.sr = sr2;
        lab.node = j;
        lab.pred = cur_idx;
        lab.dead = false;

        auto& list = alive[j];
        bool rejected = false;
        if (use_dominance_) {
          for (std::size_t pos = 0; pos < list.size();) {
            Label& e = arena[list[pos]];
            if (e.dead) {
              list[pos] = list.back();
              list.pop_back();
              continue;
            }
            if (dominates(e, lab)) {
              rejected = true;
              break;
            }
            if (dominates(lab, e)) {
              e.dead = true;
              list[pos] = list.back();
              list.pop_back();
              continue;
            }
            ++pos;
          }
        }
        if (rejected) continue;
        if (static_cast<long long>(arena.size()) >= kLabelCap)
          throw std::runtime_error("pricing label arena exceeded its cap");
        arena.push_back(lab);
        const int idx = static_cast<int>(arena.size()) - 1;
        list.push_back(idx);
        buckets[static_cast<std::size_t>(t2)].push_back(idx);
      }
    }
    bucket.clear();
  }
}

PricingResult PricingEngine::solve(const ArcSet& arcs, const std::vector<double>& cbar,
                                   const std::vector<SrCutSpec>& sr_cuts) {
  PricingResult result;
  std::vector<Label> arena;
  RunResult run;

  auto gather = [&](std::vector<std::pair<double, int>>& cand) {
    cand.clear();
    for (int idx : run.sink_labels)
      if (arena[idx].C < -rc_tol_) cand.emplace_back(arena[idx].C, idx);
    std::sort(cand.begin(), cand.end());
  };

  if (use_heuristic_) {
    const std::vector<char> keep = heuristic_arcs(arcs, cbar);
    run_labeling(arcs, &keep, cbar, sr_cuts, arena, run);
    result.labels += run.processed;
    std::vector<std::pair<double, int>> cand;
    gather(cand);
    for (const auto& [c, idx] : cand) {
      if (static_cast<int>(result.routes.size()) >= max_routes_) break;
      Route r = route_of(arena, idx);
      if (!ng_violations(r).empty()) continue;
      result.rcs.push_back(c);
      result.routes.push_back(std::move(r));
    }
    if (!result.routes.empty()) {
      result.min_rc = result.rcs.front();
      result.exact = false;
      return result;
    }
  }

  // Full-graph runs with lazy growth of the tracked set: each round either
  // terminates or permanently tracks at least one newly revisited customer.
  for (int round = 0; round <= inst_.n + 1; ++round) {
    run_labeling(arcs, nullptr, cbar, sr_cuts, arena, run);
    result.labels += run.processed;
    double best_any = std::numeric_limits<double>::infinity();
    for (int idx : run.sink_labels) best_any = std::min(best_any, arena[idx].C);
    std::vector<std::pair<double, int>> cand;
    gather(cand);
    if (cand.empty()) {
      result.exact = true;
      result.min_rc = best_any;
      return result;
    }
    const Route best = route_of(arena, cand.front().second);
    const std::vector<int> viols = ng_violations(best);
    if (viols.empty()) {
      for (const auto& [c, idx] : cand) {
        if (static_cast<int>(result.routes.size()) >= max_routes_) break;
        Route r = route_of(arena, idx);
        if (!ng_violations(r).empty()) continue;
        result.rcs.push_back(c);
        result.routes.push_back(std::move(r));
      }
      result.exact = true;
      result.min_rc = cand.front().first;
      return result;
    }
    for (int v : viols) {
      if (mask_test(tracked_, v))
        throw std::logic_error("pricing revisited a customer that is already tracked");
      mask_set(tracked_, v);
    }
  }
  throw std::logic_error("lazy elementarity tracking failed to converge");
}

PricingResult exact_pricing_dfs(const Instance& inst, Mode mode, const ArcSet& arcs,
                                const std::vector<double>& cbar,
                                const std::vector<SrCutSpec>& sr_cuts, double rc_tol,
                                int max_routes) {
  const int N = inst.nodes();
  const int sink = inst.sink();
  const bool fragility = mode == Mode::FCPP;
  const int n_sr = static_cast<int>(sr_cuts.size());

  PricingResult result;
  result.exact = true;
  result.min_rc = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, std::vector<int>>> saved;

  std::vector<int> path{0};
  CustomerMask visited{};
  std::vector<std::vector<int>> sr_of(N);
  for (int w = 0; w < n_sr; ++w)
    for (int v = 1; v <= inst.n; ++v)
      if (mask_test(sr_cuts[w].members, v)) sr_of[v].push_back(w);

  struct Dfs {
    const Instance& inst;
    const ArcSet& arcs;
    const std::vector<double>& cbar;
    const std::vector<SrCutSpec>& sr_cuts;
    const std::vector<std::vector<int>>& sr_of;
    bool fragility;
    int sink, N;
    double rc_tol;
    PricingResult& result;
    std::vector<std::pair<double, std::vector<int>>>& saved;
    std::vector<int>& path;
    CustomerMask& visited;

    void go(int i, deci T, int L, FragilityState fs, double C,
            std::array<std::uint64_t, 3> par) {
      ++result.labels;
      if (i != 0 && arcs.has(i, sink)) {
        const deci t_end = T + inst.t(i, sink);
        if (t_end <= inst.tw_hi[sink]) {
          const double c_end = C + cbar[static_cast<std::size_t>(i) * N + sink];
          result.min_rc = std::min(result.min_rc, c_end);
          if (c_end < -rc_tol) {
            std::vector<int> nodes = path;
            nodes.push_back(sink);
            saved.emplace_back(c_end, std::move(nodes));
          }
        }
      }
      for (int j : arcs.out[i]) {
        if (j == sink || mask_test(visited, j)) continue;
        const deci t2 = std::max(T + inst.t(i, j), inst.tw_lo[j]);
        if (t2 > inst.tw_hi[j]) continue;
        const int q = static_cast<int>(inst.demand[j]);
        const int l2 = L + q;
        if (l2 > static_cast<int>(inst.Q)) continue;
        FragilityState fs2 = fs;
        if (fragility &&
            !fs2.advance(inst.fragile[j], q, static_cast<int>(inst.m), static_cast<int>(inst.k)))
          continue;
        double c2 = C + cbar[static_cast<std::size_t>(i) * N + j];
        auto par2 = par;
        for (int w : sr_of[j]) {
          const int word = w >> 6;
          const std::uint64_t bit = std::uint64_t{1} << (w & 63);
          if ((par2[word] & bit) != 0) {
            par2[word] &= ~bit;
            c2 -= sr_cuts[w].sigma;
          } else {
            par2[word] |= bit;
          }
        }
        mask_set(visited, j);
        path.push_back(j);
        go(j, t2, l2, fs2, c2, par2);
        path.pop_back();
        visited[static_cast<std::size_t>(j >> 6)] &= ~(std::uint64_t{1} << (j & 63));
      }
    }
  } dfs{inst,     arcs,   cbar, sr_cuts, sr_of, fragility, sink,
        N,        rc_tol, result, saved, path,  visited};

  dfs.go(0, inst.tw_lo[0], 0, FragilityState::initial(static_cast<int>(inst.Q)), 0.0, {});

  std::sort(saved.begin(), saved.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  if (static_cast<int>(saved.size()) > max_routes) saved.resize(max_routes);
  for (auto& [rc, nodes] : saved) {
    Route r;
    r.nodes = std::move(nodes);
    r.cost = route_cost(r, inst);
    r.load = 0;
    for (std::size_t p = 1; p + 1 < r.nodes.size(); ++p) r.load += inst.demand[r.nodes[p]];
    result.rcs.push_back(rc);
    result.routes.push_back(std::move(r));
  }
  return result;
}

}  // namespace fvrptw
