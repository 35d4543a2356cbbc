#include "fvrptw/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace fvrptw {

namespace {

constexpr double kFeasTol = 1e-7;   // bound violation considered infeasible
constexpr double kOptTol = 1e-6;    // reduced-cost eligibility
constexpr double kPivotTol = 1e-9;  // smallest usable ratio-test denominator
constexpr int kRefactorEvery = 100;
constexpr int kBlandAfter = 1000;  // consecutive degenerate pivots
constexpr int kMaxIters = 500000;

}  // namespace

int LpModel::add_row(RowSense sense, double rhs) {
  sense_.push_back(sense);
  rhs_.push_back(rhs);
  lstate_.push_back(VState::Basic);
  if (basis_valid_) {
    // Extend the warm basis with the new row's logical; the inverse is
    // rebuilt at the next solve and Phase I repairs any violation.
    basis_.push_back(logical(rows() - 1));
  }
  return rows() - 1;
}

int LpModel::add_column(double obj, double lo, double up,
                        const std::vector<std::pair<int, double>>& coefs) {
  if (lo > up) throw LpError("add_column: lower bound above upper bound");
  if (lo <= -kLpInf) throw LpError("add_column: free columns not supported");
  std::vector<std::pair<int, double>> sorted = coefs;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<int, double>> merged;
  for (const auto& [row, a] : sorted) {
    if (row < 0 || row >= rows()) throw LpError("add_column: row index out of range");
    if (!merged.empty() && merged.back().first == row)
      merged.back().second += a;
    else
      merged.emplace_back(row, a);
  }
  obj_.push_back(obj);
  lo_.push_back(lo);
  up_.push_back(up);
  cols_.push_back(std::move(merged));
  sstate_.push_back(VState::AtLower);
  return cols() - 1;
}

void LpModel::add_columns(const std::vector<double>& objs, const std::vector<double>& los,
                          const std::vector<double>& ups,
                          const std::vector<std::vector<std::pair<int, double>>>& coefs) {
  if (objs.size() != los.size() || objs.size() != ups.size() || objs.size() != coefs.size())
    throw LpError("add_columns: mismatched argument lengths");
  for (std::size_t i = 0; i < objs.size(); ++i) add_column(objs[i], los[i], ups[i], coefs[i]);
}

void LpModel::set_upper(int col, double up) {
  if (up < lo_[col]) throw LpError("set_upper: upper bound below lower bound");
  up_[col] = up;
  // A nonbasic column at its upper bound silently tracks the new bound; a
  // basic column now outside its range is repaired by Phase I next solve.
}

void LpModel::set_state(int v, VState s) {
  if (is_logical(v))
    lstate_[logical_row(v)] = s;
  else
    sstate_[v] = s;
}

double LpModel::var_lo(int v) const {
  if (!is_logical(v)) return lo_[v];
  switch (sense_[logical_row(v)]) {
    case RowSense::LE: return 0.0;
    case RowSense::GE: return -kLpInf;
    case RowSense::EQ: return 0.0;
  }
  return 0.0;
}

double LpModel::var_up(int v) const {
  if (!is_logical(v)) return up_[v];
  switch (sense_[logical_row(v)]) {
    case RowSense::LE: return kLpInf;
    case RowSense::GE: return 0.0;
    case RowSense::EQ: return 0.0;
  }
  return 0.0;
}

double LpModel::nonbasic_value(int v) const {
  const VState s = state(v);
  const double val = s == VState::AtUpper ? var_up(v) : var_lo(v);
  if (val <= -kLpInf || val >= kLpInf)
    throw LpError("nonbasic variable resting on an infinite bound");
  return val;
}

void LpModel::default_basis() {
  const int m = rows();
  basis_.resize(m);
  for (int r = 0; r < m; ++r) basis_[r] = logical(r);
  std::fill(sstate_.begin(), sstate_.end(), VState::AtLower);
  std::fill(lstate_.begin(), lstate_.end(), VState::Basic);
  basis_valid_ = true;
}

void LpModel::reset_basis() { basis_valid_ = false; }

// Rebuilds the dense inverse from basis_ by Gauss-Jordan elimination with
// partial pivoting. A dependent basis column is replaced in place by the
// logical of a row that still lacks a pivot, which always restores full rank.
void LpModel::refactor() {
  const int m = rows();
  binv_.assign(static_cast<std::size_t>(m) * m, 0.0);
  if (m == 0) return;

  for (int repair = 0;; ++repair) {
    if (repair > m + 1) throw LpError("refactor: unable to repair singular basis");
    // mat = basis matrix (column p = A of basis_[p]), aug = identity.
    std::vector<double> mat(static_cast<std::size_t>(m) * m, 0.0);
    std::vector<double> aug(static_cast<std::size_t>(m) * m, 0.0);
    for (int p = 0; p < m; ++p) {
      const int v = basis_[p];
      if (is_logical(v)) {
        mat[static_cast<std::size_t>(logical_row(v)) * m + p] = 1.0;
      } else {
        for (const auto& [row, a] : cols_[v]) mat[static_cast<std::size_t>(row) * m + p] = a;
      }
    }
    for (int r = 0; r < m; ++r) aug[static_cast<std::size_t>(r) * m + r] = 1.0;

    std::vector<char> row_done(m, 0);
    std::vector<int> pivot_row_of(m, -1);
    bool singular = false;
    for (int p = 0; p < m && !singular; ++p) {
      int best = -1;
      double best_abs = 1e-10;
      for (int r = 0; r < m; ++r) {
        if (row_done[r]) continue;
        const double a = std::fabs(mat[static_cast<std::size_t>(r) * m + p]);
        if (a > best_abs) {
          best_abs = a;
          best = r;
        }
      }
      if (best < 0) {
        // Column p is dependent on earlier ones: swap in a fresh logical.
        int free_row = -1;
        for (int r = 0; r < m; ++r) {
          if (!row_done[r]) {
            free_row = r;
            break;
          }
        }
        const int old = basis_[p];
        set_state(old, var_lo(old) <= -kLpInf ? VState::AtUpper : VState::AtLower);
        basis_[p] = logical(free_row);
        set_state(basis_[p], VState::Basic);
        singular = true;
        break;
      }
      row_done[best] = 1;
      pivot_row_of[p] = best;
      const double piv = mat[static_cast<std::size_t>(best) * m + p];
      double* mrow = &mat[static_cast<std::size_t>(best) * m];
      double* arow = &aug[static_cast<std::size_t>(best) * m];
      for (int c = 0; c < m; ++c) {
        mrow[c] /= piv;
        arow[c] /= piv;
      }
      for (int r = 0; r < m; ++r) {
        if (r == best) continue;
        const double f = mat[static_cast<std::size_t>(r) * m + p];
        if (f == 0.0) continue;
        double* mr = &mat[static_cast<std::size_t>(r) * m];
        double* ar = &aug[static_cast<std::size_t>(r) * m];
        for (int c = 0; c < m; ++c) {
          mr[c] -= f * mrow[c];
          ar[c] -= f * arow[c];
        }
      }
    }
    if (singular) continue;

    // mat is now a permutation of the identity: row pivot_row_of[p] holds
    // e_p, and aug's row pivot_row_of[p] holds row p of the true inverse
    // B^{-1}... more precisely B x = e_k solved via these rows. Reassemble:
    // B^{-1} row ordering must satisfy xB[p] = sum_c binv[p][c] * b[c].
    for (int p = 0; p < m; ++p) {
      const int r = pivot_row_of[p];
      std::copy_n(&aug[static_cast<std::size_t>(r) * m], m, &binv_[static_cast<std::size_t>(p) * m]);
    }
    return;
  }
}

void LpModel::compute_xb() {
  const int m = rows();
  xb_.assign(m, 0.0);
  // net = b - sum over nonbasic variables of A_j * value_j
  std::vector<double> net = rhs_;
  for (int j = 0; j < cols(); ++j) {
    if (sstate_[j] == VState::Basic) continue;
    const double val = nonbasic_value(j);
    if (val == 0.0) continue;
    for (const auto& [row, a] : cols_[j]) net[row] -= a * val;
  }
  for (int r = 0; r < m; ++r) {
    if (lstate_[r] == VState::Basic) continue;
    const double val = nonbasic_value(logical(r));
    if (val != 0.0) net[r] -= val;
  }
  for (int p = 0; p < m; ++p) {
    const double* row = &binv_[static_cast<std::size_t>(p) * m];
    double s = 0;
    for (int c = 0; c < m; ++c) s += row[c] * net[c];
    xb_[p] = s;
  }
}

double LpModel::infeasibility() const {
  double total = 0;
  for (int p = 0; p < rows(); ++p) {
    const int v = basis_[p];
    const double x = xb_[p];
    const double lo = var_lo(v), up = var_up(v);
    if (x < lo - kFeasTol) total += lo - x;
    if (x > up + kFeasTol) total += x - up;
  }
  return total;
}

void LpModel::ftran(int v, std::vector<double>& alpha) const {
  const int m = rows();
  alpha.assign(m, 0.0);
  if (is_logical(v)) {
    const int r = logical_row(v);
    for (int p = 0; p < m; ++p) alpha[p] = binv_[static_cast<std::size_t>(p) * m + r];
    return;
  }
  for (const auto& [row, a] : cols_[v]) {
    for (int p = 0; p < m; ++p) alpha[p] += binv_[static_cast<std::size_t>(p) * m + row] * a;
  }
}

double LpModel::price_column(const std::vector<double>& y, int v) const {
  if (is_logical(v)) return y[logical_row(v)];
  double s = 0;
  for (const auto& [row, a] : cols_[v]) s += y[row] * a;
  return s;
}

LpSolution LpModel::extract(LpStatus st) const {
  LpSolution out;
  out.status = st;
  const int m = rows(), n = cols();
  // y = cB^T . Binv
  std::vector<double> y(m, 0.0);
  for (int p = 0; p < m; ++p) {
    const double cb = var_obj(basis_[p]);
    if (cb == 0.0) continue;
    const double* row = &binv_[static_cast<std::size_t>(p) * m];
    for (int c = 0; c < m; ++c) y[c] += cb * row[c];
  }
  std::vector<int> row_of(n, -1);
  for (int p = 0; p < m; ++p)
    if (!is_logical(basis_[p])) row_of[basis_[p]] = p;

  out.x.resize(n);
  out.dj.resize(n);
  out.duals = y;
  double obj = 0;
  for (int j = 0; j < n; ++j) {
    out.x[j] = row_of[j] >= 0 ? xb_[row_of[j]] : nonbasic_value(j);
    out.dj[j] = row_of[j] >= 0 ? 0.0 : obj_[j] - price_column(y, j);
    obj += obj_[j] * out.x[j];
  }
  out.obj = obj;
  return out;
}

LpSolution LpModel::solve() {
  const int m = rows();
  if (!basis_valid_ || static_cast<int>(basis_.size()) != m) default_basis();
  refactor();
  compute_xb();

  std::vector<double> alpha, y(m), w(m);
  int iters = 0, since_refactor = 0, degen_streak = 0;
  bool bland = false;

  // One pivot (or bound flip) of the entering variable v moving in direction
  // dir. phase1 toggles the composite ratio rules that let infeasible basics
  // run to their nearest bound. Returns false when no step blocks (phase 2
  // unboundedness); throws on a phase 1 ray, which can only be numerical.
  auto pivot_step = [&](int v, int dir, bool phase1) -> bool {
    ftran(v, alpha);
    const double ent_lo = var_lo(v), ent_up = var_up(v);
    double best_theta = ent_up < kLpInf && ent_lo > -kLpInf ? ent_up - ent_lo : kLpInf;
    int leave_pos = -1;        // -1 = bound flip at best_theta
    VState leave_state = VState::AtLower;
    double best_abs_delta = 0;

    for (int p = 0; p < m; ++p) {
      const double delta = -dir * alpha[p];  // d xB[p] / d theta
      if (std::fabs(delta) < kPivotTol) continue;
      const int u = basis_[p];
      const double lo = var_lo(u), up = var_up(u), x = xb_[p];
      double theta = kLpInf;
      VState hit = VState::AtLower;
      if (phase1 && x < lo - kFeasTol) {
        if (delta > 0) {  // rises toward lo: first breakpoint
          theta = (lo - x) / delta;
          hit = VState::AtLower;
        }
      } else if (phase1 && x > up + kFeasTol) {
        if (delta < 0) {
          theta = (up - x) / delta;
          hit = VState::AtUpper;
        }
      } else if (delta < 0 && lo > -kLpInf) {
        theta = (x - lo) / (-delta);
        hit = VState::AtLower;
      } else if (delta > 0 && up < kLpInf) {
        theta = (up - x) / delta;
        hit = VState::AtUpper;
      }
      if (theta >= kLpInf) continue;
      if (theta < 0) theta = 0;  // drift within tolerance
      if (theta < best_theta - 1e-9) {
        // Strictly smaller ratio: this row becomes the sole candidate.
        best_theta = theta;
        leave_pos = p;
        leave_state = hit;
        best_abs_delta = std::fabs(delta);
      } else if (theta <= best_theta + 1e-9 && leave_pos >= 0) {
        // Near-tie: prefer the numerically strongest pivot, or the smallest
        // variable index once anti-cycling kicks in.
        const bool take = bland ? basis_[p] < basis_[leave_pos]
                                : std::fabs(delta) > best_abs_delta;
        if (take) {
          best_theta = std::min(best_theta, theta);
          leave_pos = p;
          leave_state = hit;
          best_abs_delta = std::fabs(delta);
        }
      } else if (theta <= best_theta + 1e-9 && leave_pos < 0 && theta < best_theta) {
        best_theta = theta;  // tighten the flip range without choosing a row
      }
    }

    if (best_theta >= kLpInf) {
      if (phase1) throw LpError("phase 1 ray: numerical breakdown");
      return false;  // unbounded
    }

    const double theta = best_theta;
    for (int p = 0; p < m; ++p) xb_[p] += theta * (-dir * alpha[p]);

    if (leave_pos < 0) {
      // Bound flip: v crosses its range and stays nonbasic.
      set_state(v, state(v) == VState::AtLower ? VState::AtUpper : VState::AtLower);
    } else {
      const double enter_val = nonbasic_value(v) + dir * theta;
      const int u = basis_[leave_pos];
      const double piv = alpha[leave_pos];
      if (std::fabs(piv) < kPivotTol) throw LpError("pivot element vanished");
      set_state(u, leave_state);
      basis_[leave_pos] = v;
      set_state(v, VState::Basic);
      // Binv <- E . Binv (row operations of the basis-change eta matrix).
      double* prow = &binv_[static_cast<std::size_t>(leave_pos) * m];
      for (int c = 0; c < m; ++c) prow[c] /= piv;
      for (int p = 0; p < m; ++p) {
        if (p == leave_pos) continue;
        const double f = alpha[p];
        if (f == 0.0) continue;
        double* row = &binv_[static_cast<std::size_t>(p) * m];
        for (int c = 0; c < m; ++c) row[c] -= f * prow[c];
      }
      xb_[leave_pos] = enter_val;
    }

    degen_streak = theta <= 1e-12 ? degen_streak + 1 : 0;
    if (degen_streak > kBlandAfter) bland = true;
    if (++since_refactor >= kRefactorEvery) {
      refactor();
      compute_xb();
      since_refactor = 0;
    }
    if (++iters > kMaxIters) throw LpError("simplex iteration limit exceeded");
    return true;
  };

  // Phase I: drive the total bound violation of basic variables to zero.
  while (infeasibility() > kFeasTol) {
    // w = g^T Binv with g the violation sign per basic position.
    std::fill(w.begin(), w.end(), 0.0);
    for (int p = 0; p < m; ++p) {
      const int v = basis_[p];
      double g = 0;
      if (xb_[p] < var_lo(v) - kFeasTol)
        g = -1;
      else if (xb_[p] > var_up(v) + kFeasTol)
        g = 1;
      if (g == 0) continue;
      const double* row = &binv_[static_cast<std::size_t>(p) * m];
      for (int c = 0; c < m; ++c) w[c] += g * row[c];
    }
    // Entering: nonbasic v whose move strictly reduces the violation.
    int enter = 0, dir = 0;
    bool found = false;
    double best_score = 1e-7;
    auto consider = [&](int v) {
      if (found && bland) return;
      const VState s = state(v);
      if (s == VState::Basic) return;
      if (var_lo(v) == var_up(v)) return;  // fixed
      const double d1 = price_column(w, v);
      if (s == VState::AtLower && d1 > 1e-7) {
        if (bland || d1 > best_score) {
          enter = v;
          dir = 1;
          best_score = d1;
          found = true;
        }
      } else if (s == VState::AtUpper && d1 < -1e-7) {
        if (bland || -d1 > best_score) {
          enter = v;
          dir = -1;
          best_score = -d1;
          found = true;
        }
      }
    };
    for (int j = 0; j < cols() && !(found && bland); ++j) consider(j);
    for (int r = 0; r < m && !(found && bland); ++r) consider(logical(r));
    if (!found) return extract(LpStatus::Infeasible);
    pivot_step(enter, dir, true);
  }

  // Phase II: optimize the true objective from a feasible basis.
  for (;;) {
    std::fill(y.begin(), y.end(), 0.0);
    for (int p = 0; p < m; ++p) {
      const double cb = var_obj(basis_[p]);
      if (cb == 0.0) continue;
      const double* row = &binv_[static_cast<std::size_t>(p) * m];
      for (int c = 0; c < m; ++c) y[c] += cb * row[c];
    }
    int enter = 0, dir = 0;
    bool found = false;
    double best_score = kOptTol;
    auto consider = [&](int v) {
      if (found && bland) return;
      const VState s = state(v);
      if (s == VState::Basic) return;
      if (var_lo(v) == var_up(v)) return;
      const double dj = var_obj(v) - price_column(y, v);
      if (s == VState::AtLower && dj < -kOptTol) {
        if (bland || -dj > best_score) {
          enter = v;
          dir = 1;
          best_score = -dj;
          found = true;
        }
      } else if (s == VState::AtUpper && dj > kOptTol) {
        if (bland || dj > best_score) {
          enter = v;
          dir = -1;
          best_score = dj;
          found = true;
        }
      }
    };
    for (int j = 0; j < cols() && !(found && bland); ++j) consider(j);
    for (int r = 0; r < m && !(found && bland); ++r) consider(logical(r));
    if (!found) break;
    if (!pivot_step(enter, dir, false)) return extract(LpStatus::Unbounded);
    if (infeasibility() > kFeasTol) {
      // Numerical drift knocked a basic variable out of range; repair and
      // continue. Rare, bounded by the iteration cap.
      refactor();
      compute_xb();
      if (infeasibility() > kFeasTol) {
        while (infeasibility() > kFeasTol) {
          std::fill(w.begin(), w.end(), 0.0);
          for (int p = 0; p < m; ++p) {
            const int v = basis_[p];
            double g = 0;
            if (xb_[p] < var_lo(v) - kFeasTol)
              g = -1;
            else if (xb_[p] > var_up(v) + kFeasTol)
              g = 1;
            if (g == 0) continue;
            const double* row = &binv_[static_cast<std::size_t>(p) * m];
            for (int c = 0; c < m; ++c) w[c] += g * row[c];
          }
          int e2 = 0, d2 = 0;
          bool f2 = false;
          double bs2 = 1e-7;
          auto consider2 = [&](int v) {
            const VState s = state(v);
            if (s == VState::Basic || var_lo(v) == var_up(v)) return;
            const double d1 = price_column(w, v);
            if (s == VState::AtLower && d1 > bs2) {
              e2 = v;
              d2 = 1;
              bs2 = d1;
              f2 = true;
            } else if (s == VState::AtUpper && -d1 > bs2) {
              e2 = v;
              d2 = -1;
              bs2 = -d1;
              f2 = true;
            }
          };
          for (int j = 0; j < cols(); ++j) consider2(j);
          for (int r = 0; r < m; ++r) consider2(logical(r));
          if (!f2) return extract(LpStatus::Infeasible);
          pivot_step(e2, d2, true);
        }
      }
    }
  }

  refactor();
  compute_xb();
  return extract(LpStatus::Optimal);
}

std::string LpModel::dump() const {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "lp: %d rows, %d cols, basis %s\n", rows(), cols(),
                basis_valid_ ? "warm" : "cold");
  out += buf;
  const char* sname[] = {"<=", ">=", "=="};
  for (int r = 0; r < rows(); ++r) {
    std::snprintf(buf, sizeof buf, "  row %d: %s %.6g\n", r,
                  sname[static_cast<int>(sense_[r])], rhs_[r]);
    out += buf;
  }
  if (basis_valid_) {
    std::vector<int> row_of(cols(), -1);
    for (int p = 0; p < rows(); ++p)
      if (!is_logical(basis_[p])) row_of[basis_[p]] = p;
    for (int j = 0; j < cols(); ++j) {
      const char* st = sstate_[j] == VState::Basic ? "B"
                       : sstate_[j] == VState::AtLower ? "L"
                                                       : "U";
      const double val = row_of[j] >= 0 && !xb_.empty() ? xb_[row_of[j]]
                         : sstate_[j] == VState::AtUpper ? up_[j]
                                                         : lo_[j];
      std::snprintf(buf, sizeof buf, "  col %d: obj %.6g in [%.3g, %.3g] %s val %.6g\n", j,
                    obj_[j], lo_[j], up_[j], st, val);
      out += buf;
    }
  }
  return out;
}

}  // namespace fvrptw
