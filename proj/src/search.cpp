#include "opbac/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <set>
#include <variant>

#include "opbac/cutpool.hpp"
#include "opbac/errors.hpp"
#include "opbac/lp.hpp"

namespace opbac {

namespace {

const char* family_name(const Cut& cut) {
  switch (cut.index()) {
    case 0: return "sec";
    case 1: return "cc";
    case 2: return "blossom";
    case 3: return "edge_cover";
    case 4: return "cycle_cover";
    case 5: return "vertex_cover";
    case 6: return "path";
    default: return "logical";
  }
}

struct Node {
  std::vector<Edge> b0, b1;
  int depth = 0;
};

struct NodeBounds {
  double ubg = 0.0;
  double ubn = 0.0;
};

using SepFn = std::vector<Cut> (*)(const SeparationContext&);
struct SepAlg {
  SepFn fn;
  const char* name;
};

class Solver {
 public:
  Solver(const Instance& inst, const SolveConfig& config)
      : inst_(inst), cfg_(config), pool_(inst.n, inst.depot), rng_(config.seed) {
    if (cfg_.fst_blossom)
      throw ConsistencyError("FST blossom separation is not implemented");
    if (cfg_.egh) middle_.push_back({sep_blossom_egh, "egh"});
    if (cfg_.eph) middle_.insert(middle_.begin(), {sep_blossom_eph, "eph"});
    middle_.push_back({sep_sec_cc_hong, "sec_cc"});
    if (cfg_.cycle_cover) middle_.push_back({sep_cycle_cover, "cycle_cover"});
    if (cfg_.edge_cover) outer_.push_back({sep_edge_cover, "edge_cover"});
    if (cfg_.vertex_cover) outer_.push_back({sep_vertex_cover, "vertex_cover"});
    if (cfg_.path_cuts) outer_.push_back({sep_path, "path"});
    if (cfg_.sep_subloops == 2) {
      middle_.insert(middle_.end(), outer_.begin(), outer_.end());
      outer_.clear();
    }
  }

  SolveReport run();

 private:
  const Instance& inst_;
  SolveConfig cfg_;
  lp::LpModel lp_;
  CutPool pool_;
  LpMap map_;
  std::unordered_map<Edge, int, EdgeHash> edge_age_;
  std::mt19937 rng_;
  LpSolution sol_;
  int64_t lb_ = 0;
  double ubg_ = std::numeric_limits<double>::infinity();
  Tour incumbent_;
  std::vector<Edge> cur_b0_, cur_b1_;
  std::unordered_set<Edge, EdgeHash> b0set_;
  SolveStats stats_;
  std::chrono::steady_clock::time_point start_;
  bool timed_out_ = false;
  bool node_infeasible_ = false;
  std::vector<SepAlg> middle_, outer_;
  size_t middle_idx_ = 0, outer_idx_ = 0;

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }
  bool time_up() {
    if (!timed_out_ && elapsed() > cfg_.time_limit_s) timed_out_ = true;
    return timed_out_;
  }
  void trace(const std::string& line) {
    if (cfg_.trace) *cfg_.trace << line << "\n";
  }

  lp::Status lp_solve() {
    ++stats_.lp_solves;
    lp::Status s = lp_.solve();
    if (s == lp::Status::IterLimit)
      throw BackendError("simplex iteration limit reached");
    return s;
  }

  void refresh_sol() {
    sol_.y.assign(inst_.n, 0.0);
    for (int v = 0; v < inst_.n; ++v)
      sol_.y[v] = lp_.col_value(map_.ycol[v]);
    sol_.edges.clear();
    sol_.x.clear();
    for (const auto& [e, col] : map_.xcol) {
      sol_.edges.push_back(e);
      sol_.x.push_back(lp_.col_value(col));
    }
    sol_.objective = lp_.objective();
    sol_.index();
  }

  SeparationContext ctx() const {
    SeparationContext c;
    c.inst = &inst_;
    c.sol = &sol_;
    c.lb = lb_;
    c.ub = std::isfinite(ubg_)
               ? std::min(inst_.score_total(),
                          int64_t(std::floor(ubg_ + 1e-9)))
               : inst_.score_total();
    c.config = cfg_.sep;
    return c;
  }

  void install_row(int h) {
    PoolEntry& entry = pool_.entry(h);
    std::vector<Edge> active;
    active.reserve(map_.xcol.size());
    for (const auto& [e, col] : map_.xcol) active.push_back(e);
    CutRow row = render_row(entry.cut, inst_.n, inst_.depot, active, &inst_);
    std::vector<std::pair<int, double>> coefs;
    for (auto [v, cf] : row.ycoefs) coefs.emplace_back(map_.ycol[v], cf);
    for (const auto& [e, cf] : row.xcoefs)
      coefs.emplace_back(map_.xcol.at(e), cf);
    entry.row_id = lp_.add_row(row.sense, row.rhs, coefs);
    entry.age = 0;
  }

  int add_cuts(std::vector<Cut> cuts, const char* alg) {
    SeparationContext c = ctx();
    cap_by_violation(cuts, c, cfg_.cut_batch);
    int installed = 0;
    for (const Cut& cut : cuts) {
      auto [h, inserted] = pool_.register_cut(cut);
      if (h < 0) continue;
      if (pool_.entry(h).row_id >= 0) continue;  // already active
      install_row(h);
      ++installed;
      ++stats_.cuts_added;
      ++stats_.cuts_by_family[family_name(cut)];
    }
    if (installed > 0 && cfg_.trace)
      trace("{\"event\":\"cuts\",\"alg\":\"" + std::string(alg) +
            "\",\"count\":" + std::to_string(installed) + "}");
    return installed;
  }

  // Solve after a model change; recover by pricing when the cuts broke
  // feasibility of the working column set.
  void resolve_after_cuts() {
    lp::Status s = lp_solve();
    if (s == lp::Status::Infeasible) {
      ++stats_.pricing_rounds;
      PriceResult res =
          price_loop(inst_, lp_, pool_, map_, PriceMode::RecoverFeasibility,
                     cfg_.pricing, &b0set_);
      stats_.cols_added += long(res.added.size());
      if (!res.feasible) {
        node_infeasible_ = true;
        return;
      }
    }
    refresh_sol();
  }

  int price_certify() {
    ++stats_.pricing_rounds;
    PriceResult res = price_loop(inst_, lp_, pool_, map_,
                                 PriceMode::BoundCertify, cfg_.pricing,
                                 &b0set_);
    stats_.cols_added += long(res.added.size());
    if (!res.feasible) {
      node_infeasible_ = true;
      return int(res.added.size());
    }
    refresh_sol();
    if (!res.added.empty() && cfg_.trace)
      trace("{\"event\":\"price\",\"added\":" +
            std::to_string(res.added.size()) + "}");
    return int(res.added.size());
  }

  void aging() {
    pool_.expire_aged(lp_, cfg_.pool);
    edge_aging(lp_, map_, edge_age_, cfg_.pricing);
  }

  bool update_incumbent(const Tour& t) {
    if (t.seq.size() == 2) return false;  // outside the edge model
    if (!tour_feasible(inst_, t) || t.score <= lb_) return false;
    lb_ = t.score;
    incumbent_ = t;
    if (cfg_.trace)
      trace("{\"event\":\"lb\",\"value\":" + std::to_string(lb_) + "}");
    return true;
  }

  // CC of the incumbent's vertex set (score == LB by construction).
  bool incumbent_cc() {
    if (incumbent_.seq.empty() || int(incumbent_.seq.size()) >= inst_.n)
      return false;
    CcCut cut{VertexSet{incumbent_.seq}};
    if (violation(Cut{cut}, inst_.n, inst_.depot, sol_) <= cfg_.sep.min_viol)
      return false;
    auto [h, inserted] = pool_.register_cut(Cut{cut});
    if (h < 0 || pool_.entry(h).row_id >= 0) return false;
    install_row(h);
    ++stats_.cuts_added;
    ++stats_.cuts_by_family["cc"];
    return true;
  }

  void inner_loop() {
    while (!time_up() && !node_infeasible_) {
      int added = 0;
      std::vector<Cut> cc = sep_connected_components(ctx());
      if (cfg_.trace)
        trace("{\"event\":\"sep\",\"loop\":\"inner\",\"alg\":\"components\","
              "\"found\":" + std::to_string(cc.size()) + "}");
      if (!cc.empty()) added += add_cuts(std::move(cc), "components");
      std::vector<Cut> lg = sep_logical(ctx());
      if (cfg_.trace)
        trace("{\"event\":\"sep\",\"loop\":\"inner\",\"alg\":\"logical\","
              "\"found\":" + std::to_string(lg.size()) + "}");
      if (!lg.empty()) added += add_cuts(std::move(lg), "logical");
      if (added > 0) {
        resolve_after_cuts();
        if (node_infeasible_) return;
        aging();
        if (int64_t(std::floor(sol_.objective + 1e-9)) == lb_)
          price_certify();
        continue;
      }
      // Both separations failed: PB heuristic, incumbent CC, pricing.
      Tour t = heur_pb(inst_, sol_, rng_, cfg_.heur);
      update_incumbent(t);
      bool cc_added = incumbent_cc();
      if (cc_added) {
        resolve_after_cuts();
        if (node_infeasible_) return;
      }
      int priced = price_certify();
      if (cc_added || priced > 0) continue;
      return;
    }
  }

  void run_level(std::vector<SepAlg>& algs, size_t& idx, bool outer_level) {
    if (outer_level)
      run_level(middle_, middle_idx_, false);
    else
      inner_loop();
    if (algs.empty()) return;
    size_t misses = 0;
    while (misses < algs.size() && !time_up() && !node_infeasible_) {
      SepAlg alg = algs[idx];
      idx = (idx + 1) % algs.size();
      std::vector<Cut> cuts = alg.fn(ctx());
      if (cfg_.trace)
        trace("{\"event\":\"sep\",\"loop\":\"" +
            std::string(outer_level ? "outer" : "middle") + "\",\"alg\":\"" +
            alg.name + "\",\"found\":" + std::to_string(cuts.size()) + "}");
      if (cuts.empty()) {
        ++misses;
        continue;
      }
      int installed = add_cuts(std::move(cuts), alg.name);
      if (installed == 0) {
        ++misses;  // all duplicates/capped: treat as a miss to terminate
        continue;
      }
      misses = 0;
      resolve_after_cuts();
      if (node_infeasible_) return;
      Tour t = heur_pb(inst_, sol_, rng_, cfg_.heur);
      update_incumbent(t);
      if (incumbent_cc()) {
        resolve_after_cuts();
        if (node_infeasible_) return;
      }
      price_certify();
      if (node_infeasible_) return;
      aging();
      if (outer_level)
        run_level(middle_, middle_idx_, false);
      else
        inner_loop();
    }
  }

  void separation_loop() {
    double before = sol_.objective;
    while (!time_up() && !node_infeasible_) {
      run_level(outer_, outer_idx_, true);
      if (time_up() || node_infeasible_) return;
      double after = sol_.objective;
      bool improved =
          before - after >= cfg_.subloop_impr * std::max(1.0, std::abs(before));
      if (!improved) return;
      before = after;
    }
  }

  void rescreen_pool() {
    int reinstalled = 0;
    for (int h : pool_.inactive_handles()) {
      const Cut& cut = pool_.entry(h).cut;
      if (violation(cut, inst_.n, inst_.depot, sol_) > cfg_.sep.min_viol) {
        install_row(h);
        ++reinstalled;
      }
    }
    if (reinstalled > 0) resolve_after_cuts();
  }

  void node_heuristic() {
    switch (cfg_.branch_heur) {
      case BranchHeur::PB:
        update_incumbent(heur_pb(inst_, sol_, rng_, cfg_.heur));
        break;
      case BranchHeur::VP: {
        HeurParams p = cfg_.heur;
        p.generations = 0;
        for (const Tour& t : heur_vp_population(inst_, sol_, rng_, p))
          update_incumbent(t);
        break;
      }
      case BranchHeur::VP_EA4OP:
        for (const Tour& t : heur_vp_population(inst_, sol_, rng_, cfg_.heur))
          update_incumbent(t);
        break;
    }
  }

  // Integral solutions: 0 = fractional, 1 = integral single tour (out set),
  // 2 = integral but not a depot tour (separation must cut it).
  int integral_state(Tour& out) const {
    double z = cfg_.sep.zero;
    for (double x : sol_.x)
      if (x > z && x < 1.0 - z) return 0;
    for (double y : sol_.y)
      if (y > z && y < 1.0 - z) return 0;
    std::vector<std::vector<int>> adj(inst_.n);
    int m = 0;
    for (size_t i = 0; i < sol_.edges.size(); ++i)
      if (sol_.x[i] > 0.5) {
        adj[sol_.edges[i].u].push_back(sol_.edges[i].v);
        adj[sol_.edges[i].v].push_back(sol_.edges[i].u);
        ++m;
      }
    if (adj[inst_.depot].size() != 2) return 2;
    std::vector<int> seq = {inst_.depot};
    int prev = -1, cur = inst_.depot;
    int used = 0;
    while (true) {
      int next = -1;
      for (int w : adj[cur])
        if (w != prev) {
          next = w;
          break;
        }
      if (next < 0) return 2;
      ++used;
      if (next == inst_.depot) break;
      seq.push_back(next);
      prev = cur;
      cur = next;
    }
    if (used != m) return 2;  // extra subtours beside the depot cycle
    for (int v = 0; v < inst_.n; ++v)
      if (sol_.y[v] > 0.5 &&
          std::find(seq.begin(), seq.end(), v) == seq.end())
        return 2;
    out = make_tour(inst_, seq);
    if (!tour_feasible(inst_, out)) return 2;
    return 1;
  }

  NodeBounds compute_bounds(const Node& node) {
    NodeBounds b;
    double pib = 0.0;
    for (int r : lp_.row_ids()) pib += lp_.row_dual(r) * lp_.row_rhs(r);
    double rc1 = lp_.col_reduced_cost(map_.ycol[inst_.depot]);
    double vsum = 0.0;
    for (int v = 0; v < inst_.n; ++v) {
      if (v == inst_.depot) continue;
      double rc = lp_.col_reduced_cost(map_.ycol[v]);
      if (rc > 0) vsum += rc;
    }
    double esum = 0.0;
    for (const auto& [e, col] : map_.xcol) {
      double rc = lp_.col_reduced_cost(col);
      if (rc > 0) esum += rc;
    }
    // Inactive branched-to-zero edges are never priced; account for their
    // exact reduced costs. All other inactive edges are certified below the
    // pricing threshold, bounded by a per-edge allowance.
    DualSnapshot snap = take_duals(inst_, lp_, pool_, map_);
    double b0pos_inactive = 0.0;
    std::unordered_map<Edge, double, EdgeHash> b0rc;
    for (const Edge& e : node.b0) {
      double rc;
      auto it = map_.xcol.find(e);
      if (it != map_.xcol.end())
        rc = lp_.col_reduced_cost(it->second);
      else {
        rc = rc_exact(e, inst_, snap);
        if (rc > 0) b0pos_inactive += rc;
      }
      b0rc[e] = rc;
    }
    long total = long(inst_.n) * (inst_.n - 1) / 2;
    long inactive = total - long(map_.xcol.size());
    double allowance = double(inactive) * cfg_.pricing.rc_thresh;
    b.ubg = pib + rc1 + vsum + esum + b0pos_inactive + allowance;
    double sub = 0.0;
    for (const Edge& e : node.b0)
      if (b0rc[e] > 0) sub += b0rc[e];
    double add = 0.0;
    for (const Edge& e : node.b1) {
      auto it = map_.xcol.find(e);
      if (it == map_.xcol.end()) continue;
      double rc = lp_.col_reduced_cost(it->second);
      if (rc < 0) add += rc;
    }
    b.ubn = b.ubg - sub + add;
    return b;
  }

  void apply_node(const Node& node) {
    for (const Edge& e : cur_b0_)
      if (auto it = map_.xcol.find(e); it != map_.xcol.end())
        lp_.set_col_bounds(it->second, 0.0, 1.0);
    for (const Edge& e : cur_b1_)
      if (auto it = map_.xcol.find(e); it != map_.xcol.end())
        lp_.set_col_bounds(it->second, 0.0, 1.0);
    cur_b0_ = node.b0;
    cur_b1_ = node.b1;
    b0set_ = std::unordered_set<Edge, EdgeHash>(node.b0.begin(), node.b0.end());
    for (const Edge& e : node.b0)
      if (auto it = map_.xcol.find(e); it != map_.xcol.end())
        lp_.set_col_bounds(it->second, 0.0, 0.0);
    for (const Edge& e : node.b1) {
      if (!map_.xcol.count(e)) add_edge_column(inst_, lp_, pool_, map_, e);
      lp_.set_col_bounds(map_.xcol.at(e), 1.0, 1.0);
    }
  }

  Edge pick_branch_edge() const {
    double z = cfg_.sep.zero;
    Edge best{-1, -1};
    double best_gap = 2.0;
    for (size_t i = 0; i < sol_.edges.size(); ++i) {
      double x = sol_.x[i];
      if (x <= z || x >= 1.0 - z) continue;
      double gap = std::abs(x - 0.5);
      const Edge& e = sol_.edges[i];
      if (best.u < 0 || gap < best_gap - 1e-12 ||
          (std::abs(gap - best_gap) <= 1e-12 && e < best)) {
        best = e;
        best_gap = gap;
      }
    }
    return best;
  }

  // Returns true when children were pushed.
  bool process_node(const Node& node, std::vector<Node>& stack) {
    ++stats_.nodes;
    if (cfg_.trace)
      trace("{\"event\":\"node\",\"depth\":" + std::to_string(node.depth) +
            ",\"b0\":" + std::to_string(node.b0.size()) +
            ",\"b1\":" + std::to_string(node.b1.size()) + "}");
    node_infeasible_ = false;
    apply_node(node);
    lp::Status s = lp_solve();
    if (s == lp::Status::Infeasible) {
      ++stats_.pricing_rounds;
      PriceResult res =
          price_loop(inst_, lp_, pool_, map_, PriceMode::RecoverFeasibility,
                     cfg_.pricing, &b0set_);
      stats_.cols_added += long(res.added.size());
      if (!res.feasible) return false;  // fathomed: no improving solution
    }
    refresh_sol();
    rescreen_pool();
    if (node_infeasible_ || time_up()) return false;
    int stride = cfg_.heur_stride > 0 ? cfg_.heur_stride
                                      : (inst_.n > 1000 ? 8 : 1);
    if (node.depth % stride == 0) node_heuristic();
    for (int round = 0; round < 200; ++round) {
      separation_loop();
      if (node_infeasible_ || time_up()) return false;
      int added = price_certify();
      if (node_infeasible_ || time_up()) return false;
      if (added == 0) break;
    }
    Tour integral;
    int state = integral_state(integral);
    if (state == 1) {
      update_incumbent(integral);
      return false;  // node solved to integrality
    }
    if (state == 2)
      throw ConsistencyError(
          "integral LP point is not a depot tour but separation found no cut");
    NodeBounds b = compute_bounds(node);
    if (b.ubg < ubg_) {
      ubg_ = b.ubg;
      if (cfg_.trace)
        trace("{\"event\":\"ub\",\"value\":" + std::to_string(ubg_) + "}");
    }
    if (double(lb_) >= std::floor(b.ubn + 1e-6) - 1e-9) return false;  // prune
    Edge e = pick_branch_edge();
    if (e.u < 0)
      throw ConsistencyError("no fractional edge available for branching");
    Node c0 = node, c1 = node;
    c0.b0.push_back(e);
    ++c0.depth;
    c1.b1.push_back(e);
    ++c1.depth;
    stack.push_back(c0);
    stack.push_back(c1);  // x_e = 1 explored first (DFS, top of stack)
    return true;
  }

  void build_lp0() {
    map_.degree_row.resize(inst_.n);
    map_.ycol.resize(inst_.n);
    for (int v = 0; v < inst_.n; ++v) {
      double lb = v == inst_.depot ? 1.0 : 0.0;
      map_.ycol[v] = lp_.add_column(double(inst_.scores[v]), lb, 1.0);
    }
    map_.budget_row = lp_.add_row(lp::Sense::LE, double(inst_.d0), {});
    for (int v = 0; v < inst_.n; ++v)
      map_.degree_row[v] =
          lp_.add_row(lp::Sense::EQ, 0.0, {{map_.ycol[v], -2.0}});
    std::set<Edge> seed;
    for (int v = 0; v < inst_.n; ++v)
      for (int w : inst_.nearest(v, 10)) seed.insert(Edge{v, w});
    for (const Edge& e : seed) add_edge_column(inst_, lp_, pool_, map_, e);
    stats_.cols_added += long(seed.size());
  }
};

SolveReport Solver::run() {
  start_ = std::chrono::steady_clock::now();
  // Initial solution from the evolutionary heuristic on a trivial point
  // (every vertex a candidate).
  {
    LpSolution all;
    all.y.assign(inst_.n, 1.0);
    all.index();
    HeurParams p = cfg_.heur;
    for (const Tour& t : heur_vp_population(inst_, all, rng_, p))
      update_incumbent(t);
    if (incumbent_.seq.empty()) {
      incumbent_ = make_tour(inst_, {inst_.depot});
      lb_ = incumbent_.score;
    }
  }
  build_lp0();
  // Immediately price the edge variables.
  lp::Status s = lp_solve();
  if (s == lp::Status::Infeasible) {
    ++stats_.pricing_rounds;
    PriceResult res = price_loop(inst_, lp_, pool_, map_,
                                 PriceMode::RecoverFeasibility, cfg_.pricing,
                                 nullptr);
    stats_.cols_added += long(res.added.size());
    if (!res.feasible) {
      // No cycle fits the budget: the depot-only solution is optimal.
      SolveReport rep;
      rep.status = SolveStatus::Optimal;
      rep.lb = lb_;
      rep.ub = double(lb_);
      rep.tour = incumbent_.seq;
      rep.time_s = elapsed();
      rep.stats = stats_;
      return rep;
    }
  }
  refresh_sol();
  price_certify();

  std::vector<Node> stack;
  stack.push_back(Node{});
  while (!stack.empty() && !time_up()) {
    Node node = stack.back();
    stack.pop_back();
    process_node(node, stack);
  }

  SolveReport rep;
  if (timed_out_) {
    rep.status = SolveStatus::TimeLimit;
    rep.ub = std::isfinite(ubg_) ? std::max(ubg_, double(lb_))
                                 : double(inst_.score_total());
  } else {
    rep.status = SolveStatus::Optimal;
    rep.ub = double(lb_);
  }
  rep.lb = lb_;
  rep.tour = incumbent_.seq;
  rep.time_s = elapsed();
  rep.stats = stats_;
  return rep;
}

}  // namespace

SolveReport solve(const Instance& inst, const SolveConfig& config) {
  Solver solver(inst, config);
  return solver.run();
}

}  // namespace opbac
