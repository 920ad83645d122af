#pragma once

#include <limits>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "opbac/errors.hpp"

namespace opbac::lp {

enum class Sense { LE, GE, EQ };
enum class Status { Optimal, Infeasible, IterLimit };

constexpr double kInf = std::numeric_limits<double>::infinity();

// Maximization LP over bounded variables with dynamically added/removed rows
// and columns. Rows and columns are addressed by stable integer ids that
// survive removals. Solved by a bounded-variable revised simplex
// (composite phase 1 + phase 2) with a dense basis inverse and warm starts.
class LpModel {
 public:
  int add_column(double obj, double lb, double ub,
                 const std::vector<std::pair<int, double>>& row_coefs = {});
  int add_row(Sense sense, double rhs,
              const std::vector<std::pair<int, double>>& col_coefs);
  void remove_rows(const std::vector<int>& row_ids);
  // Removing a column requires its value in the last solution to be ~0.
  void remove_columns(const std::vector<int>& col_ids);
  void set_col_bounds(int col_id, double lb, double ub);
  void set_row_rhs(int row_id, double rhs);

  Status solve();

  double objective() const { return objective_; }
  double col_value(int col_id) const;
  double col_reduced_cost(int col_id) const;
  double row_dual(int row_id) const;
  double row_activity(int row_id) const;

  int num_rows() const { return int(row_order_.size()); }
  int num_cols() const { return int(col_order_.size()); }
  bool has_col(int col_id) const { return cols_.count(col_id) > 0; }
  bool has_row(int row_id) const { return rows_.count(row_id) > 0; }
  double col_lb(int col_id) const { return cols_.at(col_id).lb; }
  double col_ub(int col_id) const { return cols_.at(col_id).ub; }
  double row_rhs(int row_id) const { return rows_.at(row_id).rhs; }
  const std::vector<int>& row_ids() const { return row_order_; }
  const std::vector<int>& col_ids() const { return col_order_; }

  void dump_lp(const std::string& path) const;

  long iterations() const { return total_iterations_; }

 private:
  struct Col {
    double obj = 0.0, lb = 0.0, ub = 1.0;
    std::vector<std::pair<int, double>> coefs;  // (row id, coefficient)
    double value = 0.0, rc = 0.0;
  };
  struct Row {
    Sense sense = Sense::LE;
    double rhs = 0.0;
    double dual = 0.0, activity = 0.0;
  };

  std::unordered_map<int, Col> cols_;
  std::unordered_map<int, Row> rows_;
  std::vector<int> col_order_;
  std::vector<int> row_order_;
  int next_col_id_ = 0;
  int next_row_id_ = 0;
  double objective_ = 0.0;
  bool solved_ = false;
  long total_iterations_ = 0;
  // Warm start: ids of variables basic at the previous optimum. Structural
  // columns are stored as col id, row slacks as ~row id.
  std::vector<int> warm_basis_;
};

}  // namespace opbac::lp
