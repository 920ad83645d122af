#pragma once

#include <cstdint>
#include <optional>
#include <map>
#include <variant>
#include <vector>

#include "opbac/instance.hpp"
#include "opbac/lp.hpp"
#include "opbac/solution.hpp"

namespace opbac {

// The seven cut families plus the logical constraints.

// Subcycle elimination <H, l, r>: x(delta(H)) - 2 y_l - 2 y_r >= -2.
struct SecCut {
  VertexSet h;
  int l = -1;  // in H
  int r = -1;  // outside H
};

// Connectivity: x(delta(T)) >= 2 for depot-containing T with score(T) <= LB.
struct CcCut {
  VertexSet t;
};

// Blossom: x(delta(H)) + sum_j x(delta(T_j)) - 2 y(R) - 2 y(L) >= 1 - t,
// with an odd number (>= 3) of pairwise disjoint edge teeth crossing H.
struct BlossomCut {
  VertexSet h;
  std::vector<Edge> teeth;
  VertexSet link;  // L: tooth endpoints inside H
  VertexSet root;  // R: tooth endpoints outside H
};

// Edge cover: x(F) <= |F| - 1 for minimal F with sum d_e > d0.
struct EdgeCoverCut {
  std::vector<Edge> f;
};

// Cycle cover: x(F) <= y(V(F)) - 1 for a cycle F with sum d_e > d0.
struct CycleCoverCut {
  std::vector<Edge> f;
  VertexSet vf;
};

// Vertex cover: y(Q) <= |Q| - 1 for minimal Q with sum s_v > UB.
struct VertexCoverCut {
  VertexSet q;
};

// Path: x(P) - y(V(P)) + y_depot + y_{i_k} - sum_{v in W(P)} x_{i_k, v} <= 0.
struct PathCut {
  std::vector<int> seq;  // i_1 .. i_k, depot not included
  VertexSet w;           // W(P)
};

// Logical: y_v - x_e >= 0 for e incident to v.
struct LogicalCut {
  int v = -1;
  Edge e;
};

using Cut = std::variant<SecCut, CcCut, BlossomCut, EdgeCoverCut, CycleCoverCut,
                         VertexCoverCut, PathCut, LogicalCut>;

// Sparse LP row over vertex and edge variables.
struct CutRow {
  std::vector<std::pair<int, double>> ycoefs;
  std::vector<std::pair<Edge, double>> xcoefs;
  lp::Sense sense = lp::Sense::GE;
  double rhs = 0.0;
};

// Coefficient of an arbitrary edge variable in the cut's row (needed when
// pricing introduces columns after the row was added).
double edge_coef(const Cut& cut, int depot, const Edge& e);

// Validate the family invariants; throws InvalidCut. n = vertex count;
// inst checks budget-dependent invariants (edge/cycle cover) when given.
void validate_cut(const Cut& cut, int n, int depot, const Instance* inst);

// Render the row restricted to `edges` (the active columns).
CutRow render_row(const Cut& cut, int n, int depot,
                  const std::vector<Edge>& edges, const Instance* inst = nullptr);

// Amount by which sol violates the cut (0 when satisfied).
double violation(const Cut& cut, int n, int depot, const LpSolution& sol);

// Interned vertex subsets with accumulated duals, shared by the cuts whose
// edge coefficients are star-set sums (SEC, CC, blossom).
class SubsetRegistry {
 public:
  explicit SubsetRegistry(int n);

  int intern(const VertexSet& s);  // increments the refcount
  void release(int id);
  bool member(int id, int v) const;
  const VertexSet& subset(int id) const;
  int size() const { return int(live_); }

  void reset_duals();
  void accumulate(int id, double pi);
  double pi(int id) const { return pi_[id]; }
  // sum_{S containing v} pi_S over live subsets
  double vertex_pi_sum(int v) const { return vertex_pi_[v]; }
  const std::vector<int>& subsets_of(int v) const { return by_vertex_[v]; }

 private:
  int n_;
  size_t live_ = 0;
  std::vector<VertexSet> sets_;
  std::vector<std::vector<uint64_t>> bits_;
  std::vector<int> refs_;
  std::vector<double> pi_;
  std::vector<double> vertex_pi_;
  std::vector<std::vector<int>> by_vertex_;  // live subset ids per vertex
  std::map<std::vector<uint64_t>, int> index_;

  void rebuild_vertex_lists();
  bool vertex_lists_dirty_ = false;
};

// Pool entry: a cut, its LP row when active, and its inactivity age.
struct PoolEntry {
  Cut cut;
  int row_id = -1;  // -1 = not in the LP
  int age = 0;
  std::vector<int> subset_ids;  // registry references for L^V cuts
};

struct CutPoolParams {
  double dust = 1e-3;  // DEL_DUST_CUT
  int max_age = 5;     // DEL_MAX_AGE_CUT
  int sec_per_set = 50;  // ADD_SEC_PER_SET
};

class CutPool {
 public:
  CutPool(int n, int depot);

  // Returns (handle, inserted). Duplicates (by canonical form) are not
  // re-added; SECs beyond the per-handle-set cap are rejected with handle -1.
  std::pair<int, bool> register_cut(const Cut& cut);

  PoolEntry& entry(int h) { return entries_[h]; }
  const PoolEntry& entry(int h) const { return entries_[h]; }
  int size() const { return int(entries_.size()); }
  int n() const { return n_; }
  int depot() const { return depot_; }

  SubsetRegistry& registry() { return registry_; }
  const SubsetRegistry& registry() const { return registry_; }

  // Recompute per-subset duals from the duals of the active rows.
  void accumulate_subset_duals(const lp::LpModel& lp);

  // Age active rows whose slack exceeds `dust`; remove rows inactive for
  // `max_age` consecutive solves from the LP (entries stay for re-screening).
  std::vector<int> expire_aged(lp::LpModel& lp, const CutPoolParams& params);

  std::vector<int> active_handles() const;
  std::vector<int> inactive_handles() const;

 private:
  int n_;
  int depot_;
  std::vector<PoolEntry> entries_;
  SubsetRegistry registry_;
  std::map<std::vector<int64_t>, int> canon_;
  std::map<std::vector<int64_t>, int> sec_count_;  // per SEC handle set
};

}  // namespace opbac
