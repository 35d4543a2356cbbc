#pragma once
// Self-contained primal simplex for the restricted master problem: bounded
// variables, dense explicit basis inverse with periodic refactorization,
// composite Phase I for feasibility repair (so violated rows added mid-solve
// and deactivated basic columns warm-start cleanly), exact dual extraction.
//
// Scale target: a few hundred rows, tens of thousands of columns — the
// master problems of a column generation loop, not general-purpose LPs.

#include <string>
#include <utility>
#include <vector>

#include <stdexcept>

namespace fvrptw {

constexpr double kLpInf = 1e30;

enum class RowSense { LE, GE, EQ };

enum class LpStatus { Optimal, Infeasible, Unbounded };

// Numerical breakdown (iteration runaway, unrecoverable singular basis).
// Callers may reset_basis() and re-solve once before giving up.
struct LpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double obj = 0;
  std::vector<double> x;      // structural primal values
  std::vector<double> duals;  // one per row (EQ free, LE <= 0, GE >= 0)
  std::vector<double> dj;     // reduced cost per structural column
};

class LpModel {
 public:
  // Rows and columns are identified by dense 0-based indices in add order.
  int add_row(RowSense sense, double rhs);
  // Row with coefficients on existing columns (entries are (column, value));
  // needed when a cutting plane arrives after columns already exist.
  int add_row(RowSense sense, double rhs, const std::vector<std::pair<int, double>>& entries);
  int add_column(double obj, double lo, double up,
                 const std::vector<std::pair<int, double>>& coefs);
  void add_columns(const std::vector<double>& objs, const std::vector<double>& los,
                   const std::vector<double>& ups,
                   const std::vector<std::vector<std::pair<int, double>>>& coefs);

  int rows() const { return static_cast<int>(sense_.size()); }
  int cols() const { return static_cast<int>(obj_.size()); }

  double upper(int col) const { return up_[col]; }
  void set_upper(int col, double up);  // warm start survives; Phase I repairs
  double rhs(int row) const { return rhs_[row]; }
  RowSense sense(int row) const { return sense_[row]; }
  double objective_coef(int col) const { return obj_[col]; }

  // Solves from the current basis (the default basis on first use), keeping
  // the final basis for subsequent warm solves. Throws LpError on breakdown.
  LpSolution solve();

  void reset_basis();  // discard warm-start state; next solve is cold

  // Line-oriented description of rows, bounds and the current basis, for
  // debugging sessions and failure reports.
  std::string dump() const;

 private:
  enum class VState : char { Basic, AtLower, AtUpper };

  // Problem data. Structural variables use indices >= 0. The logical of row r
  // (coefficient +1; bounds [0,inf) for <=, (-inf,0] for >=, [0,0] for =) is
  // encoded as variable -(r+1) so indices never shift as columns arrive.
  std::vector<double> obj_, lo_, up_;
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<RowSense> sense_;
  std::vector<double> rhs_;

  bool basis_valid_ = false;
  std::vector<int> basis_;       // variable per row
  std::vector<VState> sstate_;   // per structural variable
  std::vector<VState> lstate_;   // per logical
  std::vector<double> binv_;     // dense rows x rows, row-major
  std::vector<double> xb_;       // basic variable values per row

  static int logical(int row) { return -row - 1; }
  static bool is_logical(int v) { return v < 0; }
  static int logical_row(int v) { return -v - 1; }

  VState state(int v) const { return is_logical(v) ? lstate_[logical_row(v)] : sstate_[v]; }
  void set_state(int v, VState s);
  double var_lo(int v) const;
  double var_up(int v) const;
  double var_obj(int v) const { return is_logical(v) ? 0.0 : obj_[v]; }
  double nonbasic_value(int v) const;
  void default_basis();
  void refactor();
  void compute_xb();
  double infeasibility() const;
  void ftran(int v, std::vector<double>& alpha) const;          // alpha = Binv A_v
  double price_column(const std::vector<double>& y, int v) const;  // y . A_v
  LpSolution extract(LpStatus st) const;
};

}  // namespace fvrptw
