#include "opbac/separation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace opbac {

namespace {

// Connected components of the graph (verts, edges), returned as vertex lists.
std::vector<std::vector<int>> components_of(const std::vector<int>& verts,
                                            const std::vector<Edge>& edges) {
  std::map<int, std::vector<int>> adj;
  for (int v : verts) adj[v];
  for (const Edge& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::set<int> seen;
  std::vector<std::vector<int>> comps;
  for (int root : verts) {
    if (seen.count(root)) continue;
    std::vector<int> stack = {root}, comp;
    seen.insert(root);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (int w : adj[u])
        if (!seen.count(w)) {
          seen.insert(w);
          stack.push_back(w);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

int64_t score_of(const Instance& inst, const std::vector<int>& verts) {
  int64_t total = 0;
  for (int v : verts) total += inst.scores[v];
  return total;
}

int argmax_y(const LpSolution& sol, const std::vector<int>& verts) {
  int best = -1;
  for (int v : verts)
    if (best < 0 || sol.y[v] > sol.y[best]) best = v;
  return best;
}

int argmax_y_outside(const LpSolution& sol, const VertexSet& h, int n) {
  int best = -1;
  for (int v = 0; v < n; ++v) {
    if (h.contains(v)) continue;
    if (best < 0 || sol.y[v] > sol.y[best]) best = v;
  }
  return best;
}

// Emit the best-(l, r) SEC on H when it is violated.
void maybe_sec(const SeparationContext& ctx, const std::vector<int>& hverts,
               std::vector<Cut>& out) {
  int n = ctx.inst->n;
  if (int(hverts.size()) < 3 || int(hverts.size()) > n - 3) return;
  VertexSet h{std::vector<int>(hverts)};
  int l = argmax_y(*ctx.sol, hverts);
  int r = argmax_y_outside(*ctx.sol, h, n);
  if (l < 0 || r < 0) return;
  SecCut sec{std::move(h), l, r};
  if (violation(sec, n, ctx.inst->depot, *ctx.sol) > ctx.config.min_viol)
    out.push_back(sec);
}

// Emit the CC on T when T holds the depot, its score fits under LB, and the
// cut is violated.
void maybe_cc(const SeparationContext& ctx, const std::vector<int>& tverts,
              std::vector<Cut>& out) {
  int n = ctx.inst->n;
  if (int(tverts.size()) < 2 || int(tverts.size()) >= n) return;
  if (std::find(tverts.begin(), tverts.end(), ctx.inst->depot) == tverts.end())
    return;
  if (score_of(*ctx.inst, tverts) > ctx.lb) return;
  CcCut cc{VertexSet{std::vector<int>(tverts)}};
  if (violation(cc, n, ctx.inst->depot, *ctx.sol) > ctx.config.min_viol)
    out.push_back(cc);
}

std::vector<int> unshrink(const ShrunkGraph& g, const std::vector<int>& nodes) {
  std::vector<int> out;
  for (int v : nodes)
    out.insert(out.end(), g.members[v].begin(), g.members[v].end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SupportGraph make_support(const SeparationContext& ctx) {
  const LpSolution& sol = *ctx.sol;
  const double zero = ctx.config.zero;
  SupportGraph g;
  g.n = ctx.inst->n;
  g.depot = ctx.inst->depot;
  g.y = sol.y;
  std::vector<char> in(g.n, 0);
  for (int v = 0; v < g.n; ++v)
    if (sol.y[v] > zero) {
      g.verts.push_back(v);
      in[v] = 1;
    }
  for (size_t i = 0; i < sol.edges.size(); ++i) {
    const Edge& e = sol.edges[i];
    if (sol.x[i] > zero && in[e.u] && in[e.v]) {
      g.edges.push_back(e);
      g.cap.push_back(sol.x[i]);
    }
  }
  return g;
}

std::vector<Cut> sep_connected_components(const SeparationContext& ctx) {
  SupportGraph g = make_support(ctx);
  auto comps = components_of(g.verts, g.edges);
  std::vector<Cut> out;
  if (comps.size() <= 1) return out;
  for (const auto& comp : comps) {
    bool has_depot =
        std::find(comp.begin(), comp.end(), g.depot) != comp.end();
    if (has_depot)
      maybe_cc(ctx, comp, out);
    else
      maybe_sec(ctx, comp, out);
  }
  return out;
}

namespace {

// CC candidate strategies on the depot side S̄ of a min cut with value < 2.
void cc_extra_strategies(const SeparationContext& ctx, const ShrunkGraph& g,
                         const std::vector<int>& depot_side, double cutval,
                         std::vector<Cut>& out) {
  // i) the depot supernode itself, when nontrivial.
  const auto& depot_members = g.members[g.depot_node];
  if (int(depot_members.size()) > 2) maybe_cc(ctx, depot_members, out);

  // ii) drop one supernode from the depot side.
  for (int vbar : depot_side) {
    if (vbar == g.depot_node) continue;
    if (cutval + g.ybar[vbar] >= 2.0) continue;
    std::vector<int> rest;
    for (int w : depot_side)
      if (w != vbar) rest.push_back(w);
    maybe_cc(ctx, unshrink(g, rest), out);
  }

  // iii) greedily drop the largest low-y prefix of the depot side.
  std::vector<int> others;
  for (int vbar : depot_side)
    if (vbar != g.depot_node) others.push_back(vbar);
  std::sort(others.begin(), others.end(),
            [&](int a, int b) { return g.ybar[a] < g.ybar[b]; });
  double acc = cutval;
  size_t k = 0;
  while (k < others.size() && acc + g.ybar[others[k]] < 2.0)
    acc += g.ybar[others[k++]];
  if (k > 0) {
    std::vector<int> rest = {g.depot_node};
    rest.insert(rest.end(), others.begin() + k, others.end());
    maybe_cc(ctx, unshrink(g, rest), out);
  }
}

// Handle one min-cut side split: depot_side are supernode indices.
void process_cut_side(const SeparationContext& ctx, const ShrunkGraph& g,
                      const std::vector<int>& depot_side, double cutval,
                      std::vector<Cut>& out) {
  if (cutval >= 2.0 - ctx.config.min_viol) return;
  std::vector<int> other_side;
  {
    std::vector<char> in(g.size(), 0);
    for (int v : depot_side) in[v] = 1;
    for (int v = 0; v < g.size(); ++v)
      if (!in[v]) other_side.push_back(v);
  }
  maybe_sec(ctx, unshrink(g, other_side), out);
  maybe_cc(ctx, unshrink(g, depot_side), out);
  if (ctx.config.cc_strats)
    cc_extra_strategies(ctx, g, depot_side, cutval, out);
}

}  // namespace

std::vector<Cut> sep_sec_cc_hong(const SeparationContext& ctx) {
  std::vector<Cut> out;
  SupportGraph support = make_support(ctx);
  if (support.verts.size() < 2) return out;
  ShrunkGraph g = shrink(support, ctx.config.shrink, ctx.inst->scores);
  bool s3 = shrink_uses_s3(ctx.config.shrink);

  auto run_pair = [&](const ShrunkGraph& gg, int tbar) {
    // Depot as source: the returned side holds the depot.
    auto [v1, side1] =
        min_cut_st(gg.size(), gg.edges, gg.cap, gg.depot_node, tbar);
    process_cut_side(ctx, gg, side1.verts(), v1, out);
    // Reverse direction: the returned side holds tbar.
    auto [v2, side2] =
        min_cut_st(gg.size(), gg.edges, gg.cap, tbar, gg.depot_node);
    std::vector<int> depot_side;
    for (int v = 0; v < gg.size(); ++v)
      if (!side2.contains(v)) depot_side.push_back(v);
    process_cut_side(ctx, gg, depot_side, v2, out);
  };

  if (!s3) {
    for (int tbar = 0; tbar < g.size(); ++tbar)
      if (tbar != g.depot_node) run_pair(g, tbar);
    return out;
  }
  while (g.size() > 1) {
    // Sink choice: the non-depot supernode with the largest aggregated y.
    int tbar = -1;
    for (int v = 0; v < g.size(); ++v) {
      if (v == g.depot_node) continue;
      if (tbar < 0 || g.ysum[v] > g.ysum[tbar]) tbar = v;
    }
    run_pair(g, tbar);
    g = contract_pair(g, g.depot_node, tbar, ctx.config.shrink);
  }
  return out;
}

namespace {

struct Tooth {
  Edge e;
  double x;
};

// Repair a candidate teeth family into pairwise-disjoint teeth crossing H:
// teeth sharing an endpoint outside H merge that endpoint into the handle;
// teeth sharing an endpoint inside H keep only the strongest.
void repair_teeth(VertexSet& h, std::vector<Tooth>& teeth) {
  bool changed = true;
  while (changed) {
    changed = false;
    teeth.erase(std::remove_if(teeth.begin(), teeth.end(),
                               [&](const Tooth& t) {
                                 return h.contains(t.e.u) == h.contains(t.e.v);
                               }),
                teeth.end());
    std::map<int, std::vector<size_t>> by_out, by_in;
    for (size_t i = 0; i < teeth.size(); ++i) {
      const Edge& e = teeth[i].e;
      int in = h.contains(e.u) ? e.u : e.v;
      int outv = h.contains(e.u) ? e.v : e.u;
      by_in[in].push_back(i);
      by_out[outv].push_back(i);
    }
    for (auto& [v, idxs] : by_out) {
      if (idxs.size() < 2) continue;
      // Merge the shared outside endpoint into the handle and drop its teeth.
      h.insert(v);
      std::set<size_t> kill(idxs.begin(), idxs.end());
      std::vector<Tooth> next;
      for (size_t i = 0; i < teeth.size(); ++i)
        if (!kill.count(i)) next.push_back(teeth[i]);
      teeth = std::move(next);
      changed = true;
      break;
    }
    if (changed) continue;
    for (auto& [v, idxs] : by_in) {
      if (idxs.size() < 2) continue;
      size_t best = idxs[0];
      for (size_t i : idxs)
        if (teeth[i].x > teeth[best].x) best = i;
      std::set<size_t> kill(idxs.begin(), idxs.end());
      kill.erase(best);
      std::vector<Tooth> next;
      for (size_t i = 0; i < teeth.size(); ++i)
        if (!kill.count(i)) next.push_back(teeth[i]);
      teeth = std::move(next);
      changed = true;
      break;
    }
  }
}

// Final emission step shared by the two blossom heuristics.
void emit_handle(const SeparationContext& ctx, VertexSet h,
                 std::vector<Tooth> teeth, std::vector<Cut>& out) {
  repair_teeth(h, teeth);
  int n = ctx.inst->n;
  if (teeth.size() >= 3 && teeth.size() % 2 == 1) {
    BlossomCut bl;
    bl.h = h;
    for (const Tooth& t : teeth) {
      bl.teeth.push_back(t.e);
      int in = h.contains(t.e.u) ? t.e.u : t.e.v;
      int outv = h.contains(t.e.u) ? t.e.v : t.e.u;
      bl.link.insert(in);
      bl.root.insert(outv);
    }
    try {
      validate_cut(bl, n, ctx.inst->depot, nullptr);
    } catch (const InvalidCut&) {
      return;
    }
    if (violation(bl, n, ctx.inst->depot, *ctx.sol) > ctx.config.min_viol)
      out.push_back(bl);
  } else if (teeth.size() == 1) {
    // A one-tooth handle is tested as a CC first, then as a SEC.
    size_t before = out.size();
    maybe_cc(ctx, h.verts(), out);
    if (out.size() == before) maybe_sec(ctx, h.verts(), out);
  }
}

std::vector<double> distinct_levels(const SeparationContext& ctx,
                                    const SupportGraph& g) {
  std::vector<double> levels;
  for (int v : g.verts) levels.push_back(g.y[v]);
  std::sort(levels.begin(), levels.end(), std::greater<double>());
  levels.erase(std::unique(levels.begin(), levels.end(),
                           [&](double a, double b) {
                             return std::abs(a - b) <= ctx.config.zero;
                           }),
               levels.end());
  return levels;
}

}  // namespace

std::vector<Cut> sep_blossom_eph(const SeparationContext& ctx) {
  std::vector<Cut> out;
  SupportGraph g = make_support(ctx);
  const double zero = ctx.config.zero;
  for (double lambda : distinct_levels(ctx, g)) {
    // Level graph: strictly fractional edges below the level.
    std::vector<Edge> level_edges;
    std::set<int> level_verts;
    for (size_t i = 0; i < g.edges.size(); ++i)
      if (g.cap[i] < lambda - zero) {
        level_edges.push_back(g.edges[i]);
        level_verts.insert(g.edges[i].u);
        level_verts.insert(g.edges[i].v);
      }
    if (level_edges.empty()) continue;
    std::vector<int> verts(level_verts.begin(), level_verts.end());
    for (const auto& comp : components_of(verts, level_edges)) {
      bool at_level = false;
      for (int v : comp)
        if (std::abs(g.y[v] - lambda) <= zero) at_level = true;
      if (!at_level || comp.size() < 2) continue;
      VertexSet h{std::vector<int>(comp)};
      std::vector<Tooth> teeth;
      for (size_t i = 0; i < g.edges.size(); ++i)
        if (h.contains(g.edges[i].u) != h.contains(g.edges[i].v) &&
            g.cap[i] >= lambda - zero)
          teeth.push_back({g.edges[i], g.cap[i]});
      emit_handle(ctx, std::move(h), std::move(teeth), out);
    }
  }
  return out;
}

std::vector<Cut> sep_blossom_egh(const SeparationContext& ctx) {
  std::vector<Cut> out;
  SupportGraph g = make_support(ctx);
  const double eps = ctx.config.egh_epsilon;
  for (double lambda : distinct_levels(ctx, g)) {
    // Band graph: edges insulated from small perturbations.
    std::vector<Edge> band_edges;
    std::set<int> band_verts;
    for (size_t i = 0; i < g.edges.size(); ++i)
      if (g.cap[i] >= eps && g.cap[i] <= (1.0 - eps) * lambda) {
        band_edges.push_back(g.edges[i]);
        band_verts.insert(g.edges[i].u);
        band_verts.insert(g.edges[i].v);
      }
    if (band_edges.empty()) continue;
    std::vector<int> verts(band_verts.begin(), band_verts.end());
    for (const auto& comp : components_of(verts, band_edges)) {
      if (comp.size() < 2) continue;
      VertexSet h{std::vector<int>(comp)};
      std::vector<Tooth> teeth;
      Tooth filler{{0, 1}, -1.0};
      for (size_t i = 0; i < g.edges.size(); ++i) {
        if (h.contains(g.edges[i].u) == h.contains(g.edges[i].v)) continue;
        if (g.cap[i] > (1.0 - eps) * lambda)
          teeth.push_back({g.edges[i], g.cap[i]});
        else if (g.cap[i] < eps && g.cap[i] > filler.x)
          filler = {g.edges[i], g.cap[i]};
      }
      if (teeth.size() % 2 == 0 && filler.x > 0.0) teeth.push_back(filler);
      emit_handle(ctx, std::move(h), std::move(teeth), out);
    }
  }
  return out;
}

std::vector<Cut> sep_edge_cover(const SeparationContext& ctx) {
  std::vector<Cut> out;
  const Instance& inst = *ctx.inst;
  std::vector<std::pair<double, Edge>> cand;
  for (size_t i = 0; i < ctx.sol->edges.size(); ++i)
    if (ctx.sol->x[i] > ctx.config.zero)
      cand.emplace_back(ctx.sol->x[i], ctx.sol->edges[i]);
  std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });
  int64_t total = 0;
  std::vector<Edge> f;
  for (const auto& [x, e] : cand) {
    f.push_back(e);
    total += inst.distance(e.u, e.v);
    if (total > inst.d0) break;
  }
  if (total <= inst.d0) return out;
  // Minimalize: drop edges (weakest first) while the cover property holds.
  for (size_t i = f.size(); i-- > 0;) {
    int64_t d = inst.distance(f[i].u, f[i].v);
    if (total - d > inst.d0) {
      total -= d;
      f.erase(f.begin() + i);
    }
  }
  EdgeCoverCut cut{std::move(f)};
  if (violation(cut, inst.n, inst.depot, *ctx.sol) > ctx.config.min_viol)
    out.push_back(cut);
  return out;
}

std::vector<Cut> sep_cycle_cover(const SeparationContext& ctx) {
  std::vector<Cut> out;
  const Instance& inst = *ctx.inst;
  std::vector<Edge> unit;
  for (size_t i = 0; i < ctx.sol->edges.size(); ++i)
    if (ctx.sol->x[i] >= 1.0 - ctx.config.zero)
      unit.push_back(ctx.sol->edges[i]);
  std::set<int> vset;
  for (const Edge& e : unit) {
    vset.insert(e.u);
    vset.insert(e.v);
  }
  std::vector<int> verts(vset.begin(), vset.end());
  for (const auto& comp : components_of(verts, unit)) {
    std::vector<Edge> f;
    std::map<int, int> deg;
    std::set<int> in(comp.begin(), comp.end());
    int64_t len = 0;
    for (const Edge& e : unit)
      if (in.count(e.u)) {
        f.push_back(e);
        deg[e.u]++;
        deg[e.v]++;
        len += inst.distance(e.u, e.v);
      }
    bool cycle = f.size() == comp.size();
    for (auto [v, d] : deg) cycle = cycle && d == 2;
    if (!cycle || len <= inst.d0) continue;
    CycleCoverCut cut{std::move(f), VertexSet{std::vector<int>(comp)}};
    if (violation(cut, inst.n, inst.depot, *ctx.sol) > ctx.config.min_viol)
      out.push_back(cut);
  }
  return out;
}

std::vector<Cut> sep_vertex_cover(const SeparationContext& ctx) {
  std::vector<Cut> out;
  const Instance& inst = *ctx.inst;
  std::vector<int> order(inst.n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return inst.scores[a] > inst.scores[b] ||
           (inst.scores[a] == inst.scores[b] && a < b);
  });
  int64_t total = 0;
  std::vector<int> q;
  for (int v : order) {
    q.push_back(v);
    total += inst.scores[v];
    if (total > ctx.ub) break;
  }
  if (total <= ctx.ub) return out;
  for (size_t i = q.size(); i-- > 0;) {
    if (total - inst.scores[q[i]] > ctx.ub) {
      total -= inst.scores[q[i]];
      q.erase(q.begin() + i);
    }
  }
  std::sort(q.begin(), q.end());
  VertexCoverCut cut{VertexSet{std::move(q)}};
  if (violation(cut, inst.n, inst.depot, *ctx.sol) > ctx.config.min_viol)
    out.push_back(cut);
  return out;
}

std::vector<Cut> sep_path(const SeparationContext& ctx) {
  std::vector<Cut> out;
  const Instance& inst = *ctx.inst;
  std::map<int, std::vector<int>> adj;
  for (size_t i = 0; i < ctx.sol->edges.size(); ++i) {
    const Edge& e = ctx.sol->edges[i];
    if (ctx.sol->x[i] < ctx.config.path_xmin) continue;
    if (e.u == inst.depot || e.v == inst.depot) continue;
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::set<int> used;
  for (const auto& [start, nbrs] : adj) {
    if (int(out.size()) >= ctx.config.path_max) break;
    if (used.count(start) || nbrs.size() != 1) continue;  // path endpoints only
    // Walk the path from this endpoint.
    std::vector<int> seq = {start};
    used.insert(start);
    int prev = -1, cur = start;
    while (true) {
      int next = -1;
      for (int w : adj[cur])
        if (w != prev) next = w;
      if (next < 0 || used.count(next) || adj[next].size() > 2) break;
      seq.push_back(next);
      used.insert(next);
      prev = cur;
      cur = next;
    }
    if (seq.size() < 2) continue;
    // The inequality is orientation-dependent; try both directions.
    for (int dir = 0; dir < 2; ++dir) {
      if (dir == 1) std::reverse(seq.begin(), seq.end());
      int64_t len = 0;
      for (size_t i = 0; i + 1 < seq.size(); ++i)
        len += inst.distance(seq[i], seq[i + 1]);
      std::set<int> on(seq.begin(), seq.end());
      int ik = seq.back();
      std::vector<int> w;
      for (int v = 0; v < inst.n; ++v) {
        if (on.count(v)) continue;
        int64_t tail = v == inst.depot
                           ? inst.distance(ik, inst.depot)
                           : inst.distance(ik, v) + inst.distance(v, inst.depot);
        if (inst.distance(inst.depot, seq.front()) + len + tail <= inst.d0)
          w.push_back(v);
      }
      PathCut cut{seq, VertexSet{std::move(w)}};
      if (violation(cut, inst.n, inst.depot, *ctx.sol) > ctx.config.min_viol)
        out.push_back(cut);
    }
  }
  return out;
}

std::vector<Cut> sep_logical(const SeparationContext& ctx) {
  std::vector<Cut> out;
  for (size_t i = 0; i < ctx.sol->edges.size(); ++i) {
    const Edge& e = ctx.sol->edges[i];
    double x = ctx.sol->x[i];
    if (x <= ctx.config.zero) continue;
    for (int v : {e.u, e.v})
      if (x > ctx.sol->y[v] + ctx.config.min_viol)
        out.push_back(LogicalCut{v, e});
  }
  return out;
}

void cap_by_violation(std::vector<Cut>& cuts, const SeparationContext& ctx,
                      int cap) {
  std::vector<std::pair<double, size_t>> order;
  for (size_t i = 0; i < cuts.size(); ++i)
    order.emplace_back(
        violation(cuts[i], ctx.inst->n, ctx.inst->depot, *ctx.sol), i);
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.first > b.first;
  });
  std::vector<Cut> kept;
  for (size_t i = 0; i < order.size() && int(i) < cap; ++i)
    kept.push_back(cuts[order[i].second]);
  cuts = std::move(kept);
}

}  // namespace opbac
