#include <random>
#include <sstream>

#include "doctest.h"
#include "opbac/separation.hpp"

using namespace opbac;

namespace {

Instance make_instance(const std::vector<std::pair<double, double>>& coords,
                       const std::vector<int64_t>& scores, int64_t d0) {
  std::ostringstream out;
  out << "NAME : t\nTYPE : OP\nDIMENSION : " << coords.size()
      << "\nCOST_LIMIT : " << d0 << "\nEDGE_WEIGHT_TYPE : EUC_2D\n"
      << "NODE_COORD_SECTION\n";
  for (size_t i = 0; i < coords.size(); ++i)
    out << i + 1 << " " << coords[i].first << " " << coords[i].second << "\n";
  out << "NODE_SCORE_SECTION\n";
  for (size_t i = 0; i < scores.size(); ++i)
    out << i + 1 << " " << scores[i] << "\n";
  out << "EOF\n";
  return parse_instance(out.str());
}

// Uniform grid instance when geometry is irrelevant to the test.
Instance generic_instance(int n, int64_t d0 = 1000000) {
  std::vector<std::pair<double, double>> coords;
  std::vector<int64_t> scores(n, 1);
  scores[0] = 0;
  for (int i = 0; i < n; ++i) coords.push_back({i * 10.0, (i % 3) * 10.0});
  return make_instance(coords, scores, d0);
}

LpSolution make_sol(std::vector<double> y,
                    std::vector<std::tuple<int, int, double>> xs) {
  LpSolution sol;
  sol.y = std::move(y);
  for (auto [u, v, x] : xs) {
    sol.edges.emplace_back(u, v);
    sol.x.push_back(x);
  }
  sol.index();
  return sol;
}

int count_family(const std::vector<Cut>& cuts, size_t index) {
  int c = 0;
  for (const Cut& cut : cuts)
    if (cut.index() == index) ++c;
  return c;
}

constexpr size_t kSec = 0, kCc = 1, kBlossom = 2;

void check_sentinel(const SeparationContext& ctx, const std::vector<Cut>& cuts,
                    bool with_inst = false) {
  for (const Cut& cut : cuts) {
    CHECK_NOTHROW(validate_cut(cut, ctx.inst->n, ctx.inst->depot,
                               with_inst ? ctx.inst : nullptr));
    CHECK(violation(cut, ctx.inst->n, ctx.inst->depot, *ctx.sol) >
          ctx.config.min_viol);
  }
}

}  // namespace

TEST_CASE("connected components: connected support yields no cuts") {
  Instance inst = generic_instance(6);
  LpSolution sol = make_sol({1, 1, 1, 1, 1, 1},
                            {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1},
                             {4, 5, 1}, {0, 5, 1}});
  SeparationContext ctx{&inst, &sol, 3, 5, {}};
  CHECK(sep_connected_components(ctx).empty());
}

TEST_CASE("connected components: depot side CC plus far side SEC") {
  Instance inst = generic_instance(8);
  // Two disjoint integral cycles; depot triangle score 2 <= LB.
  LpSolution sol = make_sol(
      {1, 1, 1, 0, 1, 1, 1, 0},
      {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {4, 5, 1}, {5, 6, 1}, {4, 6, 1}});
  SeparationContext ctx{&inst, &sol, 3, 7, {}};
  auto cuts = sep_connected_components(ctx);
  CHECK(count_family(cuts, kCc) == 1);
  CHECK(count_family(cuts, kSec) == 1);
  check_sentinel(ctx, cuts);
  // With LB below the depot-component score the CC disappears.
  ctx.lb = 1;
  cuts = sep_connected_components(ctx);
  CHECK(count_family(cuts, kCc) == 0);
  CHECK(count_family(cuts, kSec) == 1);
}

namespace {

// Random fractional point satisfying the degree constraints y_v = x(d(v))/2.
LpSolution random_degree_feasible(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> uni(0.1, 1.0);
  LpSolution sol;
  sol.y.assign(n, 0.0);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng() % 3 != 0 || u == 0) {
        sol.edges.emplace_back(u, v);
        sol.x.push_back(uni(rng));
      }
  for (size_t i = 0; i < sol.edges.size(); ++i) {
    sol.y[sol.edges[i].u] += sol.x[i] / 2;
    sol.y[sol.edges[i].v] += sol.x[i] / 2;
  }
  double ymax = 0.0;
  for (double v : sol.y) ymax = std::max(ymax, v);
  if (ymax > 1.0)
    for (auto& v : sol.y) v /= ymax;
  if (ymax > 1.0)
    for (auto& v : sol.x) v /= ymax;
  sol.index();
  return sol;
}

// Min-cut-representable SEC oracle: anchored min cuts in both directions.
bool oracle_finds_sec(const Instance& inst, const LpSolution& sol) {
  SeparationContext ctx{&inst, &sol, -1, 0, {}};
  SupportGraph g = make_support(ctx);
  int n = inst.n;
  auto check_h = [&](const std::vector<int>& hverts) {
    if (int(hverts.size()) < 3 || int(hverts.size()) > n - 3) return false;
    VertexSet h{std::vector<int>(hverts)};
    int l = hverts[0], r = -1;
    for (int v : hverts)
      if (sol.y[v] > sol.y[l]) l = v;
    for (int v = 0; v < n; ++v)
      if (!h.contains(v) && (r < 0 || sol.y[v] > sol.y[r])) r = v;
    return violation(SecCut{h, l, r}, n, inst.depot, sol) >= 0.01;
  };
  for (int t : g.verts) {
    if (t == g.depot) continue;
    auto [v1, side1] = min_cut_st(n, g.edges, g.cap, g.depot, t);
    std::vector<int> comp;
    for (int v = 0; v < n; ++v)
      if (!side1.contains(v) && sol.y[v] > 1e-7) comp.push_back(v);
    if (check_h(comp)) return true;
    auto [v2, side2] = min_cut_st(n, g.edges, g.cap, t, g.depot);
    if (check_h(side2.verts())) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("Hong separation matches the min-cut-side oracle") {
  std::mt19937 rng(2024);
  int oracle_hits = 0;
  for (int trial = 0; trial < 300; ++trial) {
    int n = 7 + int(rng() % 2);
    Instance inst = generic_instance(n);
    LpSolution sol = random_degree_feasible(rng, n);
    SeparationContext ctx{&inst, &sol, -1, 0, {}};
    ctx.config.shrink = ShrinkStrategy::None;
    auto cuts = sep_sec_cc_hong(ctx);
    check_sentinel(ctx, cuts);
    if (oracle_finds_sec(inst, sol)) {
      ++oracle_hits;
      CHECK(count_family(cuts, kSec) >= 1);
    }
  }
  // The oracle must actually trigger on a decent share of random points.
  CHECK(oracle_hits > 10);
}

TEST_CASE("Hong with shrinking emits only valid violated cuts") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 7 + int(rng() % 2);
    Instance inst = generic_instance(n);
    LpSolution sol = random_degree_feasible(rng, n);
    for (auto strat : {ShrinkStrategy::S1S3, ShrinkStrategy::C1C2S3}) {
      SeparationContext ctx{&inst, &sol, 2, 10, {}};
      ctx.config.shrink = strat;
      auto cuts = sep_sec_cc_hong(ctx);
      check_sentinel(ctx, cuts);
    }
  }
}

TEST_CASE("CC strategies find the low-score depot set") {
  // Depot cluster {0,1} tied by a strong edge; a weak vertex 2 hangs off it,
  // and a far integral triangle {3,4,5} absorbs the rest of the score.
  Instance inst = generic_instance(6);
  LpSolution sol = make_sol(
      {1.0, 1.0, 0.05, 1.0, 1.0, 1.0},
      {{0, 1, 0.95}, {0, 2, 0.05}, {1, 2, 0.05}, {2, 3, 0.9},
       {3, 4, 1}, {4, 5, 1}, {3, 5, 0.95}});
  SeparationContext ctx{&inst, &sol, 2, 6, {}};
  ctx.config.shrink = ShrinkStrategy::S1S3;
  auto with = sep_sec_cc_hong(ctx);
  check_sentinel(ctx, with);
  CHECK(count_family(with, kCc) >= 1);
  // Lemma guarantee: the emitted CC really has x(delta) < 2 directly.
  for (const Cut& cut : with)
    if (auto* cc = std::get_if<CcCut>(&cut)) {
      double cross = 0.0;
      for (size_t i = 0; i < sol.edges.size(); ++i)
        if (cc->t.contains(sol.edges[i].u) != cc->t.contains(sol.edges[i].v))
          cross += sol.x[i];
      CHECK(cross < 2.0);
    }
}

TEST_CASE("set-difference star inequality holds on degree-feasible points") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 8;
    LpSolution sol = random_degree_feasible(rng, n);
    unsigned smask = rng() % 256, qmask = smask & (rng() % 256);
    auto cross = [&](unsigned mask) {
      double c = 0.0;
      for (size_t i = 0; i < sol.edges.size(); ++i)
        if (bool(mask >> sol.edges[i].u & 1) != bool(mask >> sol.edges[i].v & 1))
          c += sol.x[i];
      return c;
    };
    CHECK(cross(smask & ~qmask) <= cross(smask) + cross(qmask) + 1e-9);
  }
}

namespace {

// Two triangles of half-edges joined by three unit teeth: the textbook
// fractional 2-matching point violating a blossom by 1.
LpSolution blossom_point() {
  return make_sol({1, 1, 1, 1, 1, 1},
                  {{0, 1, 0.5}, {1, 2, 0.5}, {0, 2, 0.5},
                   {3, 4, 0.5}, {4, 5, 0.5}, {3, 5, 0.5},
                   {0, 3, 1.0}, {1, 4, 1.0}, {2, 5, 1.0}});
}

}  // namespace

TEST_CASE("EPH finds the fractional 2-matching blossom") {
  Instance inst = generic_instance(6);
  LpSolution sol = blossom_point();
  SeparationContext ctx{&inst, &sol, 0, 5, {}};
  auto cuts = sep_blossom_eph(ctx);
  check_sentinel(ctx, cuts);
  REQUIRE(count_family(cuts, kBlossom) >= 1);
  bool found = false;
  for (const Cut& cut : cuts)
    if (auto* bl = std::get_if<BlossomCut>(&cut)) {
      CHECK(bl->teeth.size() == 3);
      if (bl->h == VertexSet{{0, 1, 2}}) {
        found = true;
        CHECK(violation(cut, 6, 0, sol) == doctest::Approx(1.0));
      }
    }
  CHECK(found);
}

TEST_CASE("EPH on an integral tour finds nothing") {
  Instance inst = generic_instance(5);
  LpSolution sol = make_sol({1, 1, 1, 1, 1}, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1},
                                              {3, 4, 1}, {0, 4, 1}});
  SeparationContext ctx{&inst, &sol, 0, 5, {}};
  CHECK(sep_blossom_eph(ctx).empty());
  CHECK(sep_blossom_egh(ctx).empty());
}

TEST_CASE("EPH levels: handle spanning two y-levels via one-tooth fallback") {
  // Cluster {1,2,3} at level 1 hanging off the depot by a single path: the
  // level-1 component has one crossing tooth, so it falls back to a SEC.
  Instance inst = generic_instance(7);
  LpSolution sol = make_sol(
      {1, 1, 1, 1, 0.5, 0.5, 0.5},
      {{0, 1, 0.9}, {1, 2, 0.6}, {2, 3, 0.6}, {1, 3, 0.4}, {0, 3, 0.4},
       {0, 4, 0.5}, {4, 5, 0.5}, {5, 6, 0.5}, {0, 6, 0.5}});
  SeparationContext ctx{&inst, &sol, -1, 7, {}};
  auto cuts = sep_blossom_eph(ctx);
  check_sentinel(ctx, cuts);
}

TEST_CASE("EGH finds the blossom and appends a weak filler tooth") {
  Instance inst = generic_instance(6);
  LpSolution sol = blossom_point();
  SeparationContext ctx{&inst, &sol, 0, 5, {}};
  auto cuts = sep_blossom_egh(ctx);
  check_sentinel(ctx, cuts);
  CHECK(count_family(cuts, kBlossom) >= 1);

  // Even strong teeth plus one sub-epsilon edge on a third handle vertex:
  // the filler completes them to an odd disjoint family.
  LpSolution sol2 = make_sol({0.7, 0.7, 0.7, 1, 1, 1},
                             {{0, 1, 0.5}, {1, 2, 0.5}, {0, 3, 0.9},
                              {1, 4, 0.9}, {2, 5, 0.1}});
  SeparationContext ctx2{&inst, &sol2, 0, 5, {}};
  auto cuts2 = sep_blossom_egh(ctx2);
  bool with_filler = false;
  for (const Cut& cut : cuts2)
    if (auto* bl = std::get_if<BlossomCut>(&cut)) {
      CHECK(bl->teeth.size() % 2 == 1);
      for (const Edge& t : bl->teeth)
        if (t == Edge{2, 5}) with_filler = true;
    }
  CHECK(with_filler);
}

TEST_CASE("edge cover separation on an over-budget fractional chain") {
  // Vertices 10 apart on a line; budget 25 forbids three consecutive hops.
  Instance inst = make_instance({{0, 0}, {10, 0}, {20, 0}, {30, 0}},
                                {0, 1, 1, 1}, 25);
  LpSolution sol = make_sol({1, 1, 1, 1},
                            {{0, 1, 0.95}, {1, 2, 0.95}, {2, 3, 0.95}});
  SeparationContext ctx{&inst, &sol, 0, 3, {}};
  auto cuts = sep_edge_cover(ctx);
  REQUIRE(cuts.size() == 1);
  check_sentinel(ctx, cuts, true);
  auto& f = std::get<EdgeCoverCut>(cuts[0]).f;
  CHECK(f.size() == 3);  // 30 > 25 but dropping any edge leaves 20
  // Within budget: no cut.
  Instance loose = make_instance({{0, 0}, {10, 0}, {20, 0}, {30, 0}},
                                 {0, 1, 1, 1}, 100);
  SeparationContext ctx2{&loose, &sol, 0, 3, {}};
  CHECK(sep_edge_cover(ctx2).empty());
}

TEST_CASE("cycle cover flags integral over-budget cycles only") {
  Instance inst = make_instance({{0, 0}, {30, 0}, {30, 40}, {200, 0},
                                 {230, 0}, {230, 40}},
                                {0, 1, 1, 1, 1, 1}, 100);
  // Far triangle {3,4,5}: perimeter 30+40+50=120 > 100. Depot triangle is
  // identical but within... also 120; make it fractional so it is skipped.
  LpSolution sol = make_sol(
      {1, 1, 1, 1, 1, 1},
      {{0, 1, 0.9}, {1, 2, 0.9}, {0, 2, 0.9}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}});
  SeparationContext ctx{&inst, &sol, 0, 5, {}};
  auto cuts = sep_cycle_cover(ctx);
  REQUIRE(cuts.size() == 1);
  check_sentinel(ctx, cuts, true);
  CHECK(std::get<CycleCoverCut>(cuts[0]).vf == VertexSet{{3, 4, 5}});
}

TEST_CASE("vertex cover separation") {
  Instance inst = make_instance({{0, 0}, {1, 0}, {2, 0}, {3, 0}},
                                {0, 10, 10, 10}, 1000);
  LpSolution sol = make_sol({1, 1, 1, 1},
                            {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {0, 3, 1}});
  SeparationContext ctx{&inst, &sol, 0, 25, {}};
  auto cuts = sep_vertex_cover(ctx);
  REQUIRE(cuts.size() == 1);
  check_sentinel(ctx, cuts);
  CHECK(std::get<VertexCoverCut>(cuts[0]).q == VertexSet{{1, 2, 3}});
  // A generous UB silences it.
  ctx.ub = 100;
  CHECK(sep_vertex_cover(ctx).empty());
}

TEST_CASE("path separation computes W from the budget formula") {
  // Depot at origin, path 1-2-3 along a line, candidate continuation 4.
  Instance inst = make_instance(
      {{0, 0}, {10, 0}, {20, 0}, {30, 0}, {40, 0}, {300, 300}},
      {0, 1, 1, 1, 1, 1}, 90);
  LpSolution sol = make_sol({1, 0.9, 0.9, 0.9, 0, 0},
                            {{1, 2, 1}, {2, 3, 1}, {0, 1, 0.9}, {0, 3, 0.9}});
  SeparationContext ctx{&inst, &sol, 0, 5, {}};
  auto cuts = sep_path(ctx);
  REQUIRE(!cuts.empty());
  check_sentinel(ctx, cuts);
  for (const Cut& cut : cuts) {
    const auto& p = std::get<PathCut>(cut);
    // Recompute W membership directly from the defining inequality.
    int64_t len = 0;
    for (size_t i = 0; i + 1 < p.seq.size(); ++i)
      len += inst.distance(p.seq[i], p.seq[i + 1]);
    for (int v = 0; v < inst.n; ++v) {
      bool onp = std::find(p.seq.begin(), p.seq.end(), v) != p.seq.end();
      if (onp) continue;
      int64_t tail = v == 0 ? inst.distance(p.seq.back(), 0)
                            : inst.distance(p.seq.back(), v) +
                                  inst.distance(v, 0);
      bool fits = inst.distance(0, p.seq.front()) + len + tail <= inst.d0;
      CHECK(p.w.contains(v) == fits);
    }
    // 10+10+10+10 = 40 for the 1-2-3 walk closing via 4 stays under 90;
    // the far vertex 5 never fits.
    CHECK(!p.w.contains(5));
  }
}

TEST_CASE("logical separation and the violation cap") {
  Instance inst = generic_instance(4);
  LpSolution sol = make_sol({1, 0.5, 0.7, 0.2},
                            {{0, 1, 0.8}, {0, 2, 0.75}, {0, 3, 0.9}});
  SeparationContext ctx{&inst, &sol, 0, 3, {}};
  auto cuts = sep_logical(ctx);
  REQUIRE(cuts.size() == 3);
  check_sentinel(ctx, cuts);
  cap_by_violation(cuts, ctx, 2);
  REQUIRE(cuts.size() == 2);
  // The strongest violation (0.9 vs 0.2) survives the cap in front.
  const auto& top = std::get<LogicalCut>(cuts[0]);
  CHECK(top.v == 3);
  CHECK(top.e == Edge{0, 3});
}

TEST_CASE("all separators obey the validity sentinel on random points") {
  std::mt19937 rng(31337);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 8;
    Instance inst = generic_instance(n, 40 + int(rng() % 40));
    LpSolution sol = random_degree_feasible(rng, n);
    SeparationContext ctx{&inst, &sol, 2, 7, {}};
    check_sentinel(ctx, sep_connected_components(ctx));
    check_sentinel(ctx, sep_sec_cc_hong(ctx));
    check_sentinel(ctx, sep_blossom_eph(ctx));
    check_sentinel(ctx, sep_blossom_egh(ctx));
    check_sentinel(ctx, sep_edge_cover(ctx), true);
    check_sentinel(ctx, sep_cycle_cover(ctx), true);
    check_sentinel(ctx, sep_vertex_cover(ctx));
    check_sentinel(ctx, sep_path(ctx));
    check_sentinel(ctx, sep_logical(ctx));
  }
}
