#include "opbac/pricing.hpp"

#include <algorithm>
#include <cmath>

namespace opbac {

namespace {

// Edges carrying a nonzero coefficient in an L^E cut (linear-size support).
std::vector<Edge> edge_support(const Cut& cut) {
  std::vector<Edge> out;
  if (const auto* ec = std::get_if<EdgeCoverCut>(&cut)) {
    out = ec->f;
  } else if (const auto* cc = std::get_if<CycleCoverCut>(&cut)) {
    out = cc->f;
  } else if (const auto* p = std::get_if<PathCut>(&cut)) {
    for (size_t i = 0; i + 1 < p->seq.size(); ++i)
      out.emplace_back(p->seq[i], p->seq[i + 1]);
    for (int v : p->w) out.emplace_back(p->seq.back(), v);
  } else if (const auto* lg = std::get_if<LogicalCut>(&cut)) {
    out.push_back(lg->e);
  }
  return out;
}

bool is_subset_cut(const Cut& cut) {
  return std::holds_alternative<SecCut>(cut) ||
         std::holds_alternative<CcCut>(cut) ||
         std::holds_alternative<BlossomCut>(cut);
}

}  // namespace

DualSnapshot take_duals(const Instance& inst, const lp::LpModel& lp,
                        CutPool& pool, const LpMap& map) {
  DualSnapshot snap;
  snap.pi_d0 = lp.row_dual(map.budget_row);
  snap.pi_v.resize(inst.n);
  for (int v = 0; v < inst.n; ++v)
    snap.pi_v[v] = lp.row_dual(map.degree_row[v]);
  pool.accumulate_subset_duals(lp);
  snap.registry = &pool.registry();
  for (int h = 0; h < pool.size(); ++h) {
    const PoolEntry& entry = pool.entry(h);
    if (entry.row_id < 0 || is_subset_cut(entry.cut) ||
        std::holds_alternative<VertexCoverCut>(entry.cut))
      continue;
    double dual = lp.row_dual(entry.row_id);
    if (dual == 0.0) continue;
    for (const Edge& e : edge_support(entry.cut)) {
      double cf = edge_coef(entry.cut, inst.depot, e);
      if (cf != 0.0) snap.rce[e] -= cf * dual;
    }
  }
  return snap;
}

namespace {

double rc_base(const Edge& e, const Instance& inst, const DualSnapshot& snap) {
  double base = -double(inst.distance(e.u, e.v)) * snap.pi_d0 -
                snap.pi_v[e.u] - snap.pi_v[e.v];
  auto it = snap.rce.find(e);
  if (it != snap.rce.end()) base += it->second;
  return base;
}

}  // namespace

double rc_exact(const Edge& e, const Instance& inst, const DualSnapshot& snap) {
  double rcv = 0.0;
  const SubsetRegistry& reg = *snap.registry;
  for (int id : reg.subsets_of(e.u))
    if (!reg.member(id, e.v)) rcv += reg.pi(id);
  for (int id : reg.subsets_of(e.v))
    if (!reg.member(id, e.u)) rcv += reg.pi(id);
  return rc_base(e, inst, snap) + rcv;
}

double rc_upper_bound(const Edge& e, const Instance& inst,
                      const DualSnapshot& snap) {
  return rc_base(e, inst, snap) + snap.registry->vertex_pi_sum(e.u) +
         snap.registry->vertex_pi_sum(e.v);
}

int add_edge_column(const Instance& inst, lp::LpModel& lp, const CutPool& pool,
                    LpMap& map, const Edge& e) {
  std::vector<std::pair<int, double>> coefs = {
      {map.budget_row, double(inst.distance(e.u, e.v))},
      {map.degree_row[e.u], 1.0},
      {map.degree_row[e.v], 1.0}};
  for (int h : pool.active_handles()) {
    double cf = edge_coef(pool.entry(h).cut, inst.depot, e);
    if (cf != 0.0) coefs.emplace_back(pool.entry(h).row_id, cf);
  }
  int id = lp.add_column(0.0, 0.0, 1.0, coefs);
  map.xcol.emplace(e, id);
  return id;
}

PriceResult price_loop(const Instance& inst, lp::LpModel& lp, CutPool& pool,
                       LpMap& map, PriceMode mode, const PricingParams& params,
                       const std::unordered_set<Edge, EdgeHash>* skip) {
  PriceResult result;
  lp::Status status = lp.solve();
  if (mode == PriceMode::RecoverFeasibility &&
      status == lp::Status::Optimal) {
    return result;  // already feasible
  }

  while (true) {
    DualSnapshot snap = take_duals(inst, lp, pool, map);
    std::vector<Edge> inactive;
    for (int u = 0; u < inst.n; ++u)
      for (int v = u + 1; v < inst.n; ++v) {
        Edge e{u, v};
        if (map.xcol.count(e)) continue;
        if (skip && skip->count(e)) continue;
        inactive.push_back(e);
      }

    int added_this_round = 0;
    for (size_t start = 0; start < inactive.size();
         start += size_t(params.batch)) {
      size_t stop = std::min(inactive.size(), start + size_t(params.batch));
      std::vector<Edge> batch_add;
      for (size_t i = start; i < stop; ++i) {
        const Edge& e = inactive[i];
        if (rc_upper_bound(e, inst, snap) <= 0.0) continue;
        ++result.exact_evals;
        if (rc_exact(e, inst, snap) > params.rc_thresh) batch_add.push_back(e);
      }
      if (batch_add.empty()) continue;
      for (const Edge& e : batch_add) {
        add_edge_column(inst, lp, pool, map, e);
        result.added.push_back(e);
      }
      added_this_round += int(batch_add.size());
      status = lp.solve();
      if (mode == PriceMode::RecoverFeasibility &&
          status == lp::Status::Optimal) {
        result.feasible = true;
        return result;
      }
      snap = take_duals(inst, lp, pool, map);
    }
    if (added_this_round == 0) break;
  }
  result.feasible = (status == lp::Status::Optimal);
  return result;
}

std::vector<Edge> edge_aging(lp::LpModel& lp, LpMap& map,
                             std::unordered_map<Edge, int, EdgeHash>& age,
                             const PricingParams& params) {
  std::vector<Edge> removed;
  for (auto& [e, col] : map.xcol) {
    double x = lp.col_value(col);
    int& a = age[e];
    a = (std::abs(x) < params.dust) ? a + 1 : 0;
    // Only columns that are numerically zero can leave the basis bookkeeping.
    if (a >= params.max_age && std::abs(x) <= 1e-6) removed.push_back(e);
  }
  std::vector<int> cols;
  for (const Edge& e : removed) {
    cols.push_back(map.xcol.at(e));
    map.xcol.erase(e);
    age.erase(e);
  }
  lp.remove_columns(cols);
  return removed;
}

}  // namespace opbac
