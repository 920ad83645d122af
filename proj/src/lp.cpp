#include "opbac/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>

namespace opbac::lp {

namespace {

constexpr double kDualTol = 1e-7;
constexpr double kPrimalTol = 1e-7;
constexpr double kPivotTol = 1e-8;
constexpr int kRefactorEvery = 120;
constexpr long kMaxIterations = 500000;

enum class VarStatus : unsigned char { Basic, AtLower, AtUpper };

// Internal simplex working problem: structural columns followed by one slack
// per row, so that A x + I s = b with per-variable bounds.
struct Work {
  int m = 0;     // rows
  int nst = 0;   // structural columns
  int nv = 0;    // nst + m
  std::vector<double> obj, lb, ub;
  std::vector<double> b;
  std::vector<std::vector<std::pair<int, double>>> acols;  // structural only
  std::vector<VarStatus> status;
  std::vector<int> basic;        // basis variable per row
  std::vector<int> in_basis_row; // var -> row or -1
  std::vector<double> binv;      // m*m row-major
  std::vector<double> xb;        // basic values per row
  std::vector<double> xn;        // value of every variable
  std::vector<double> y;         // duals
  std::vector<double> d;         // reduced costs

  double* binv_row(int i) { return binv.data() + size_t(i) * m; }

  void col_times(int j, std::vector<double>& out) const {
    // out = B^-1 * a_j
    std::fill(out.begin(), out.end(), 0.0);
    if (j >= nst) {
      int r = j - nst;
      for (int i = 0; i < m; ++i) out[i] = binv[size_t(i) * m + r];
      return;
    }
    for (auto [r, c] : acols[j])
      for (int i = 0; i < m; ++i) out[i] += binv[size_t(i) * m + r] * c;
  }

  double bound_value(int j) const {
    if (status[j] == VarStatus::AtLower) return lb[j];
    if (status[j] == VarStatus::AtUpper) return ub[j];
    return 0.0;
  }

  bool refactor() {
    // Gauss-Jordan inversion of the basis matrix with partial pivoting.
    std::vector<double> a(size_t(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
      int j = basic[i];
      if (j >= nst) {
        a[size_t(j - nst) * m + i] = 1.0;
      } else {
        for (auto [r, c] : acols[j]) a[size_t(r) * m + i] = c;
      }
    }
    binv.assign(size_t(m) * m, 0.0);
    for (int i = 0; i < m; ++i) binv[size_t(i) * m + i] = 1.0;
    for (int col = 0; col < m; ++col) {
      int piv = -1;
      double best = kPivotTol;
      for (int r = col; r < m; ++r)
        if (std::abs(a[size_t(r) * m + col]) > best) {
          best = std::abs(a[size_t(r) * m + col]);
          piv = r;
        }
      if (piv < 0) return false;
      if (piv != col) {
        for (int k = 0; k < m; ++k) {
          std::swap(a[size_t(piv) * m + k], a[size_t(col) * m + k]);
          std::swap(binv[size_t(piv) * m + k], binv[size_t(col) * m + k]);
        }
      }
      double inv = 1.0 / a[size_t(col) * m + col];
      for (int k = 0; k < m; ++k) {
        a[size_t(col) * m + k] *= inv;
        binv[size_t(col) * m + k] *= inv;
      }
      for (int r = 0; r < m; ++r) {
        if (r == col) continue;
        double f = a[size_t(r) * m + col];
        if (f == 0.0) continue;
        for (int k = 0; k < m; ++k) {
          a[size_t(r) * m + k] -= f * a[size_t(col) * m + k];
          binv[size_t(r) * m + k] -= f * binv[size_t(col) * m + k];
        }
      }
    }
    return true;
  }

  void compute_xb() {
    std::vector<double> r = b;
    for (int j = 0; j < nv; ++j) {
      if (status[j] == VarStatus::Basic) continue;
      double v = bound_value(j);
      xn[j] = v;
      if (v == 0.0) continue;
      if (j >= nst) {
        r[j - nst] -= v;
      } else {
        for (auto [row, c] : acols[j]) r[row] -= c * v;
      }
    }
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      const double* bi = binv.data() + size_t(i) * m;
      for (int k = 0; k < m; ++k) s += bi[k] * r[k];
      xb[i] = s;
      xn[basic[i]] = s;
    }
  }

  void price(const std::vector<double>& cost) {
    y.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
      double cb = cost[basic[i]];
      if (cb == 0.0) continue;
      const double* bi = binv.data() + size_t(i) * m;
      for (int k = 0; k < m; ++k) y[k] += cb * bi[k];
    }
    d.assign(nv, 0.0);
    for (int j = 0; j < nst; ++j) {
      double s = cost[j];
      for (auto [r, c] : acols[j]) s -= y[r] * c;
      d[j] = s;
    }
    for (int i = 0; i < m; ++i) d[nst + i] = cost[nst + i] - y[i];
  }
};

}  // namespace

int LpModel::add_column(double obj, double lb, double ub,
                        const std::vector<std::pair<int, double>>& row_coefs) {
  int id = next_col_id_++;
  Col col;
  col.obj = obj;
  col.lb = lb;
  col.ub = ub;
  for (auto [row_id, c] : row_coefs) {
    if (!rows_.count(row_id)) throw ConsistencyError("add_column: unknown row id");
    if (c != 0.0) col.coefs.emplace_back(row_id, c);
  }
  cols_.emplace(id, std::move(col));
  col_order_.push_back(id);
  solved_ = false;
  return id;
}

int LpModel::add_row(Sense sense, double rhs,
                     const std::vector<std::pair<int, double>>& col_coefs) {
  int id = next_row_id_++;
  rows_.emplace(id, Row{sense, rhs, 0.0, 0.0});
  row_order_.push_back(id);
  for (auto [col_id, c] : col_coefs) {
    auto it = cols_.find(col_id);
    if (it == cols_.end()) throw ConsistencyError("add_row: unknown column id");
    if (c != 0.0) it->second.coefs.emplace_back(id, c);
  }
  solved_ = false;
  return id;
}

void LpModel::remove_rows(const std::vector<int>& row_ids) {
  if (row_ids.empty()) return;
  std::unordered_set<int> gone(row_ids.begin(), row_ids.end());
  for (int id : row_ids)
    if (!rows_.erase(id)) throw ConsistencyError("remove_rows: unknown row id");
  std::erase_if(row_order_, [&](int id) { return gone.count(id) > 0; });
  for (auto& [id, col] : cols_)
    std::erase_if(col.coefs, [&](auto& rc) { return gone.count(rc.first) > 0; });
  solved_ = false;
}

void LpModel::remove_columns(const std::vector<int>& col_ids) {
  if (col_ids.empty()) return;
  std::unordered_set<int> gone;
  for (int id : col_ids) {
    auto it = cols_.find(id);
    if (it == cols_.end()) throw ConsistencyError("remove_columns: unknown column id");
    if (solved_ && std::abs(it->second.value) > 1e-6)
      throw ConsistencyError("remove_columns: column has nonzero value");
    gone.insert(id);
    cols_.erase(it);
  }
  std::erase_if(col_order_, [&](int id) { return gone.count(id) > 0; });
  std::erase_if(warm_basis_, [&](int w) { return w >= 0 && gone.count(w) > 0; });
}

void LpModel::set_col_bounds(int col_id, double lb, double ub) {
  auto it = cols_.find(col_id);
  if (it == cols_.end()) throw ConsistencyError("set_col_bounds: unknown column id");
  it->second.lb = lb;
  it->second.ub = ub;
  solved_ = false;
}

void LpModel::set_row_rhs(int row_id, double rhs) {
  auto it = rows_.find(row_id);
  if (it == rows_.end()) throw ConsistencyError("set_row_rhs: unknown row id");
  it->second.rhs = rhs;
  solved_ = false;
}

double LpModel::col_value(int col_id) const { return cols_.at(col_id).value; }
double LpModel::col_reduced_cost(int col_id) const { return cols_.at(col_id).rc; }
double LpModel::row_dual(int row_id) const { return rows_.at(row_id).dual; }
double LpModel::row_activity(int row_id) const { return rows_.at(row_id).activity; }

Status LpModel::solve() {
  const int m = int(row_order_.size());
  const int nst = int(col_order_.size());
  Work w;
  w.m = m;
  w.nst = nst;
  w.nv = nst + m;
  w.obj.assign(w.nv, 0.0);
  w.lb.assign(w.nv, 0.0);
  w.ub.assign(w.nv, 0.0);
  w.b.assign(m, 0.0);
  w.acols.resize(nst);
  w.xn.assign(w.nv, 0.0);
  w.xb.assign(m, 0.0);

  std::unordered_map<int, int> row_slot;
  row_slot.reserve(m * 2);
  for (int i = 0; i < m; ++i) row_slot[row_order_[i]] = i;
  std::unordered_map<int, int> col_slot;
  col_slot.reserve(nst * 2);
  for (int j = 0; j < nst; ++j) col_slot[col_order_[j]] = j;

  for (int j = 0; j < nst; ++j) {
    const Col& col = cols_.at(col_order_[j]);
    w.obj[j] = col.obj;
    w.lb[j] = col.lb;
    w.ub[j] = col.ub;
    auto& a = w.acols[j];
    a.reserve(col.coefs.size());
    for (auto [rid, c] : col.coefs) a.emplace_back(row_slot.at(rid), c);
  }
  for (int i = 0; i < m; ++i) {
    const Row& row = rows_.at(row_order_[i]);
    w.b[i] = row.rhs;
    int j = nst + i;
    switch (row.sense) {
      case Sense::LE: w.lb[j] = 0.0; w.ub[j] = kInf; break;
      case Sense::GE: w.lb[j] = -kInf; w.ub[j] = 0.0; break;
      case Sense::EQ: w.lb[j] = 0.0; w.ub[j] = 0.0; break;
    }
  }

  // Initial point: slack basis, structurals at the finite bound nearer zero.
  w.status.assign(w.nv, VarStatus::AtLower);
  for (int j = 0; j < w.nv; ++j) {
    if (w.lb[j] == -kInf)
      w.status[j] = VarStatus::AtUpper;
    else if (std::abs(w.ub[j]) < std::abs(w.lb[j]))
      w.status[j] = VarStatus::AtUpper;
  }
  w.basic.resize(m);
  w.in_basis_row.assign(w.nv, -1);
  for (int i = 0; i < m; ++i) {
    w.basic[i] = nst + i;
    w.in_basis_row[nst + i] = i;
    w.status[nst + i] = VarStatus::Basic;
  }
  w.binv.assign(size_t(m) * m, 0.0);
  for (int i = 0; i < m; ++i) w.binv[size_t(i) * m + i] = 1.0;

  // Warm start: pivot previously basic structural columns into the basis,
  // replacing slacks of rows whose slack was not previously basic.
  if (!warm_basis_.empty()) {
    std::vector<char> slack_keep(m, 0);
    std::vector<int> want_cols;
    for (int id : warm_basis_) {
      if (id >= 0) {
        auto it = col_slot.find(id);
        if (it != col_slot.end()) want_cols.push_back(it->second);
      } else {
        auto it = row_slot.find(~id);
        if (it != row_slot.end()) slack_keep[it->second] = 1;
      }
    }
    std::vector<double> dcol(m);
    for (int j : want_cols) {
      w.col_times(j, dcol);
      int best_row = -1;
      double best = 1e-4;
      for (int i = 0; i < m; ++i) {
        int bj = w.basic[i];
        if (bj < nst || slack_keep[bj - nst]) continue;
        if (std::abs(dcol[i]) > best) {
          best = std::abs(dcol[i]);
          best_row = i;
        }
      }
      if (best_row < 0) continue;
      int leaving = w.basic[best_row];
      double piv = dcol[best_row];
      for (int i = 0; i < m; ++i) {
        if (i == best_row) continue;
        double f = dcol[i] / piv;
        if (f == 0.0) continue;
        double* ri = w.binv_row(i);
        const double* rr = w.binv_row(best_row);
        for (int k = 0; k < m; ++k) ri[k] -= f * rr[k];
      }
      double* rr = w.binv_row(best_row);
      for (int k = 0; k < m; ++k) rr[k] /= piv;
      w.basic[best_row] = j;
      w.in_basis_row[j] = best_row;
      w.in_basis_row[leaving] = -1;
      w.status[j] = VarStatus::Basic;
      w.status[leaving] =
          (w.lb[leaving] == -kInf) ? VarStatus::AtUpper : VarStatus::AtLower;
    }
  }
  w.compute_xb();

  std::vector<double> cost(w.nv, 0.0);
  std::vector<double> dcol(m);
  long iter = 0;
  int pivots_since_refactor = 0;
  long stalled = 0;
  double last_merit = -kInf;
  bool bland = false;
  int expand_rounds = 0;
  int restores = 0;
  std::vector<double> lb_saved, ub_saved;

  // Tiny deterministic cost jitter: equal objective coefficients make the
  // optimum face huge and Dantzig pricing crawl across it. Phase 2 first
  // optimizes the jittered objective, then switches to the exact one and
  // finishes with the (few) remaining pivots, so the result is exact.
  bool cost_exact = false;
  std::vector<double> objp(w.nv, 0.0);
  {
    double amax = 1.0;
    for (int j = 0; j < nst; ++j) amax = std::max(amax, std::abs(w.obj[j]));
    double s = 1e-6 * amax;
    for (int j = 0; j < nst; ++j)
      objp[j] = w.obj[j] +
                s * double((uint32_t(j) * 2654435761u >> 20) & 1023u) / 1024.0;
  }

  // Devex reference weights: approximate steepest-edge pricing at the cost of
  // one pivot-row sweep per iteration. On degenerate models Dantzig pricing
  // crawls across the optimal face; devex cuts the pivot count sharply.
  std::vector<double> dvx(w.nv, 1.0);
  std::vector<double> prow(m);
  std::vector<char> retired(w.nv, 0);
  int retire_count = 0;

  auto infeasibility = [&]() {
    double f = 0.0;
    for (int i = 0; i < m; ++i) {
      int j = w.basic[i];
      if (w.xb[i] < w.lb[j] - kPrimalTol) f += w.lb[j] - w.xb[i];
      else if (w.xb[i] > w.ub[j] + kPrimalTol) f += w.xb[i] - w.ub[j];
    }
    return f;
  };

  bool phase1 = true;
  long p1_iters = 0;
  Status result = Status::Optimal;
  while (true) {
    if (++iter > kMaxIterations) { result = Status::IterLimit; break; }
    if (phase1) ++p1_iters;
    double infeas = infeasibility();
    if (phase1) {
      if (infeas <= kPrimalTol * (1 + m)) {
        phase1 = false;
        stalled = 0;
        last_merit = -kInf;
        bland = false;
        continue;
      }
      // Maximize -infeasibility: +1 toward violated lower bounds, -1 above.
      std::fill(cost.begin(), cost.end(), 0.0);
      for (int i = 0; i < m; ++i) {
        int j = w.basic[i];
        if (w.xb[i] < w.lb[j] - kPrimalTol) cost[j] = 1.0;
        else if (w.xb[i] > w.ub[j] + kPrimalTol) cost[j] = -1.0;
      }
    } else {
      for (int j = 0; j < w.nv; ++j)
        cost[j] = j < nst ? (cost_exact ? w.obj[j] : objp[j]) : 0.0;
    }
    w.price(cost);

    double merit;
    if (phase1) {
      merit = -infeas;
    } else {
      merit = 0.0;
      for (int j = 0; j < nst; ++j) merit += cost[j] * w.xn[j];
    }
    if (merit > last_merit + 1e-9) {
      last_merit = merit;
      stalled = 0;
      bland = false;
    } else if (++stalled > 500) {
      // Degenerate plateau: break the ties by relaxing every finite bound
      // outward by tiny distinct amounts (expand-style perturbation); the
      // original bounds are restored and cleaned up at termination, and
      // outward relaxation preserves Infeasible verdicts. Bland's rule is
      // the last resort once the perturbation rounds are exhausted.
      if (expand_rounds < 4) {
        if (expand_rounds == 0) {
          lb_saved = w.lb;
          ub_saved = w.ub;
        }
        double scale = 1e-8 * double(1 << expand_rounds);
        for (int j = 0; j < w.nv; ++j) {
          uint32_t h1 = (uint32_t(j) * 2654435761u) >> 22;
          uint32_t h2 = (uint32_t(j) * 1597334677u) >> 22;
          if (w.lb[j] > -kInf) w.lb[j] -= scale * (1.0 + double(h1) / 1024.0);
          if (w.ub[j] < kInf) w.ub[j] += scale * (1.0 + double(h2) / 1024.0);
        }
        ++expand_rounds;
        stalled = 0;
        last_merit = -kInf;
        if (!w.refactor()) throw BackendError("simplex: singular basis");
        pivots_since_refactor = 0;
        w.compute_xb();
        continue;
      }
      bland = true;
      if (stalled > 20000) { result = Status::IterLimit; break; }
    }

    int q = -1;
    double best = 0.0;
    for (int j = 0; j < w.nv; ++j) {
      if (w.status[j] == VarStatus::Basic || retired[j]) continue;
      if (w.lb[j] == w.ub[j]) continue;  // fixed variables never enter
      double dj = w.d[j];
      bool eligible = (w.status[j] == VarStatus::AtLower && dj > kDualTol) ||
                      (w.status[j] == VarStatus::AtUpper && dj < -kDualTol);
      if (!eligible) continue;
      if (bland) { q = j; break; }
      double score = dj * dj / dvx[j];
      if (score > best) { best = score; q = j; }
    }
    if (q < 0) {
      if (phase1) { result = Status::Infeasible; break; }
      if (!cost_exact) {
        cost_exact = true;
        stalled = 0;
        last_merit = -kInf;
        continue;
      }
      if (expand_rounds > 0 && restores < 3) {
        // Optimal under perturbed bounds: restore the originals and clean up
        // the (at most tiny) residual infeasibility with a few more pivots.
        w.lb = lb_saved;
        w.ub = ub_saved;
        expand_rounds = 0;
        ++restores;
        stalled = 0;
        last_merit = -kInf;
        phase1 = true;
        w.compute_xb();
        continue;
      }
      result = Status::Optimal;
      break;
    }

    double sigma = (w.status[q] == VarStatus::AtLower) ? 1.0 : -1.0;
    w.col_times(q, dcol);

    // Ratio test: basic variables block at bounds they would cross; in phase 1
    // infeasible basics additionally block on recovering their violated bound.
    double tmax = (w.ub[q] < kInf && w.lb[q] > -kInf) ? w.ub[q] - w.lb[q] : kInf;
    int leave = -1;           // row of leaving variable, -1 = entering bound flip
    double t = tmax;
    VarStatus leave_to = VarStatus::AtLower;
    double leave_piv = 0.0;
    for (int i = 0; i < m; ++i) {
      double rate = -sigma * dcol[i];
      if (std::abs(rate) <= kPivotTol) continue;
      int j = w.basic[i];
      double xi = w.xb[i];
      double ti = kInf;
      VarStatus to = VarStatus::AtLower;
      if (rate < 0.0) {
        if (xi > w.ub[j] + kPrimalTol) {
          // Infeasible above and decreasing: blocks on recovering its bound.
          to = VarStatus::AtUpper;
          ti = (xi - w.ub[j]) / (-rate);
        } else if (xi < w.lb[j] - kPrimalTol) {
          continue;  // already below and moving away: never a blocker
        } else if (w.lb[j] > -kInf) {
          to = VarStatus::AtLower;
          ti = (xi - w.lb[j]) / (-rate);
        }
      } else {
        if (xi < w.lb[j] - kPrimalTol) {
          to = VarStatus::AtLower;
          ti = (w.lb[j] - xi) / rate;
        } else if (xi > w.ub[j] + kPrimalTol) {
          continue;  // already above and moving away: never a blocker
        } else if (w.ub[j] < kInf) {
          to = VarStatus::AtUpper;
          ti = (w.ub[j] - xi) / rate;
        }
      }
      if (ti < -kPrimalTol) ti = 0.0;
      if (ti < t - 1e-10 ||
          (ti < t + 1e-10 &&
           (leave < 0 || (bland ? w.basic[i] < w.basic[leave]
                                : std::abs(dcol[i]) > std::abs(leave_piv))))) {
        t = std::max(ti, 0.0);
        leave = i;
        leave_to = to;
        leave_piv = dcol[i];
      }
    }
    if (t == kInf) {
      // Unbounded direction: impossible for bounded structurals unless
      // numerics degraded (the updated B^-1 maps the column to near-zero).
      // Refactor once; if the direction is still unbounded, retire the
      // column for the rest of this solve — its leftover positive reduced
      // cost is absorbed by the reduced-cost terms of the node bounds.
      if (pivots_since_refactor > 0) {
        w.refactor();
        w.compute_xb();
        pivots_since_refactor = 0;
        continue;
      }
      if (++retire_count > 50)
        throw BackendError("simplex: unbounded direction");
      retired[q] = 1;
      continue;
    }

    if (leave < 0) {
      // Bound flip of the entering variable: update basics along the
      // direction, no basis change.
      w.status[q] = (w.status[q] == VarStatus::AtLower) ? VarStatus::AtUpper
                                                        : VarStatus::AtLower;
      for (int i = 0; i < m; ++i) {
        double delta = -sigma * tmax * dcol[i];
        if (delta != 0.0) {
          w.xb[i] += delta;
          w.xn[w.basic[i]] = w.xb[i];
        }
      }
      w.xn[q] = w.bound_value(q);
      continue;
    }

    int leaving = w.basic[leave];
    double enter_value = w.bound_value(q) + sigma * t;
    // Update the basic values incrementally; a full recompute only happens at
    // refactor time, which also flushes the accumulated rounding drift.
    if (t != 0.0) {
      for (int i = 0; i < m; ++i) {
        double delta = -sigma * t * dcol[i];
        if (delta != 0.0) {
          w.xb[i] += delta;
          w.xn[w.basic[i]] = w.xb[i];
        }
      }
    }
    // Devex update from the pivot row, taken before it is transformed.
    {
      const double* br = w.binv_row(leave);
      std::copy(br, br + m, prow.begin());
      double aq = dcol[leave];
      double ratio = std::max(dvx[q], 1.0) / (aq * aq);
      for (int j = 0; j < w.nv; ++j) {
        if (w.status[j] == VarStatus::Basic || j == q) continue;
        double alpha;
        if (j >= nst) {
          alpha = prow[j - nst];
        } else {
          alpha = 0.0;
          for (auto [r, c] : w.acols[j]) alpha += prow[r] * c;
        }
        if (alpha == 0.0) continue;
        double cand = alpha * alpha * ratio;
        if (cand > dvx[j]) dvx[j] = cand;
      }
      dvx[leaving] = std::max(ratio, 1.0);
      if (dvx[q] > 1e8) std::fill(dvx.begin(), dvx.end(), 1.0);
    }

    double piv = dcol[leave];
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      double f = dcol[i] / piv;
      if (f == 0.0) continue;
      double* ri = w.binv_row(i);
      const double* rr = w.binv_row(leave);
      for (int k = 0; k < m; ++k) ri[k] -= f * rr[k];
    }
    double* rr = w.binv_row(leave);
    for (int k = 0; k < m; ++k) rr[k] /= piv;
    w.basic[leave] = q;
    w.in_basis_row[q] = leave;
    w.in_basis_row[leaving] = -1;
    w.status[q] = VarStatus::Basic;
    w.status[leaving] = leave_to;
    w.xb[leave] = enter_value;
    w.xn[q] = enter_value;
    w.xn[leaving] =
        (leave_to == VarStatus::AtLower) ? w.lb[leaving] : w.ub[leaving];

    if (++pivots_since_refactor >= kRefactorEvery) {
      if (!w.refactor()) throw BackendError("simplex: singular basis");
      pivots_since_refactor = 0;
      w.compute_xb();
    }
  }

  total_iterations_ += iter;
  if (getenv("OPBAC_LPDBG"))
    fprintf(stderr,
            "lpdbg m=%d nst=%d iter=%ld p1=%ld bland=%d expand=%d res=%d\n", m,
            nst, iter, p1_iters, int(bland), expand_rounds, int(result));

  // Publish from a freshly factorized basis so the drift accumulated by the
  // incremental value updates does not leak into the reported solution.
  if (pivots_since_refactor > 0 && w.refactor()) w.compute_xb();

  // Publish the solution through stable ids. Infeasible LPs are priced with
  // the phase-1 costs so the published duals form a Farkas-style certificate
  // that column generation can use to recover feasibility.
  if (result == Status::Infeasible) {
    std::fill(cost.begin(), cost.end(), 0.0);
    for (int i = 0; i < m; ++i) {
      int j = w.basic[i];
      if (w.xb[i] < w.lb[j] - kPrimalTol) cost[j] = 1.0;
      else if (w.xb[i] > w.ub[j] + kPrimalTol) cost[j] = -1.0;
    }
  } else {
    for (int j = 0; j < nst; ++j) cost[j] = w.obj[j];
    for (int i = 0; i < m; ++i) cost[nst + i] = 0.0;
  }
  w.price(cost);
  objective_ = 0.0;
  for (int j = 0; j < nst; ++j) objective_ += w.obj[j] * w.xn[j];
  for (int j = 0; j < nst; ++j) {
    Col& col = cols_.at(col_order_[j]);
    col.value = w.xn[j];
    col.rc = (w.status[j] == VarStatus::Basic) ? 0.0 : w.d[j];
  }
  for (int i = 0; i < m; ++i) {
    Row& row = rows_.at(row_order_[i]);
    row.dual = w.y[i];
    row.activity = w.b[i] - w.xn[nst + i];
  }
  warm_basis_.clear();
  for (int i = 0; i < m; ++i) {
    int j = w.basic[i];
    warm_basis_.push_back(j < nst ? col_order_[j] : ~row_order_[j - nst]);
  }
  solved_ = (result == Status::Optimal);
  if (result == Status::IterLimit)
    throw BackendError("simplex: iteration limit reached");
  return result;
}

void LpModel::dump_lp(const std::string& path) const {
  std::ofstream out(path);
  out << "Maximize\n obj:";
  for (int id : col_order_) {
    const Col& c = cols_.at(id);
    if (c.obj != 0.0) out << " + " << c.obj << " z" << id;
  }
  out << "\nSubject To\n";
  for (int rid : row_order_) {
    const Row& r = rows_.at(rid);
    out << " r" << rid << ":";
    for (int cid : col_order_)
      for (auto [row_id, coef] : cols_.at(cid).coefs)
        if (row_id == rid) out << " + " << coef << " z" << cid;
    out << (r.sense == Sense::LE ? " <= " : r.sense == Sense::GE ? " >= " : " = ")
        << r.rhs << "\n";
  }
  out << "Bounds\n";
  for (int id : col_order_) {
    const Col& c = cols_.at(id);
    out << " " << c.lb << " <= z" << id << " <= " << c.ub << "\n";
  }
  out << "End\n";
}

}  // namespace opbac::lp
