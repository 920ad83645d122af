#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "op_oracle.hpp"
#include "opbac/errors.hpp"
#include "opbac/search.hpp"

using namespace opbac;

namespace {

Instance coord_instance(const std::vector<std::pair<int, int>>& pts,
                        const std::vector<int>& scores, int64_t d0) {
  std::ostringstream out;
  out << "NAME : t\nTYPE : OP\nDIMENSION : " << pts.size()
      << "\nCOST_LIMIT : " << d0
      << "\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n";
  for (size_t i = 0; i < pts.size(); ++i)
    out << i + 1 << " " << pts[i].first << " " << pts[i].second << "\n";
  out << "NODE_SCORE_SECTION\n";
  for (size_t i = 0; i < pts.size(); ++i)
    out << i + 1 << " " << scores[i] << "\n";
  out << "EOF\n";
  return parse_instance(out.str());
}

Instance random_instance(int n, int64_t d0, std::mt19937& rng) {
  std::vector<std::pair<int, int>> pts;
  std::vector<int> scores;
  for (int i = 0; i < n; ++i) {
    pts.emplace_back(int(rng() % 100), int(rng() % 100));
    scores.push_back(i == 0 ? 0 : 1 + int(rng() % 9));
  }
  return coord_instance(pts, scores, d0);
}

int64_t tour_score(const Instance& inst, const std::vector<int>& seq) {
  int64_t s = 0;
  for (int v : seq) s += inst.scores[v];
  return s;
}

int64_t tour_length(const Instance& inst, const std::vector<int>& seq) {
  if (seq.size() < 2) return 0;
  int64_t len = 0;
  for (size_t i = 0; i < seq.size(); ++i)
    len += inst.distance(seq[i], seq[(i + 1) % seq.size()]);
  return len;
}

}  // namespace

TEST_CASE("trivial triangle solves to the full tour") {
  Instance inst =
      coord_instance({{0, 0}, {0, 10}, {10, 0}}, {0, 5, 7}, 100);
  SolveReport rep = solve(inst);
  CHECK(rep.status == SolveStatus::Optimal);
  CHECK(rep.lb == 12);
  CHECK(rep.ub == doctest::Approx(12.0));
  CHECK(rep.tour.size() == 3);
}

TEST_CASE("solver matches brute force on random small instances") {
  std::mt19937 rng(91);
  for (int t = 0; t < 15; ++t) {
    int n = 6 + int(rng() % 5);
    Instance inst = random_instance(n, 120 + rng() % 180, rng);
    int64_t opt = testing::brute_force_op(inst);
    SolveConfig cfg;
    cfg.seed = unsigned(t);
    SolveReport rep = solve(inst, cfg);
    INFO("trial ", t, " n=", n, " d0=", inst.d0);
    CHECK(rep.status == SolveStatus::Optimal);
    CHECK(rep.lb == opt);
    CHECK(rep.ub == doctest::Approx(double(opt)));
    // The reported tour backs the LB.
    CHECK(tour_score(inst, rep.tour) == rep.lb);
    CHECK(tour_length(inst, rep.tour) <= inst.d0);
  }
}

TEST_CASE("time limit yields TimeLimit status with consistent bounds") {
  std::mt19937 rng(3);
  Instance inst = random_instance(60, 400, rng);
  SolveConfig cfg;
  cfg.time_limit_s = 0.01;
  SolveReport rep = solve(inst, cfg);
  CHECK(rep.status == SolveStatus::TimeLimit);
  CHECK(double(rep.lb) <= rep.ub + 1e-6);
  CHECK(tour_length(inst, rep.tour) <= inst.d0);
}

TEST_CASE("trace shows inner subloop exhaustion before middle separations") {
  std::mt19937 rng(29);
  Instance inst = random_instance(20, 250, rng);
  std::ostringstream log;
  SolveConfig cfg;
  cfg.trace = &log;
  SolveReport rep = solve(inst, cfg);
  CHECK(rep.status == SolveStatus::Optimal);
  std::istringstream in(log.str());
  std::string line;
  // Whenever a middle-loop separator runs, the most recent inner-loop pass
  // must have found nothing (inner exhausts before the middle advances).
  long last_components = -1, last_logical = -1;
  int middle_events = 0;
  auto found_of = [](const std::string& l) {
    auto pos = l.find("\"found\":");
    return std::stol(l.substr(pos + 8));
  };
  while (std::getline(in, line)) {
    if (line.find("\"event\":\"sep\"") == std::string::npos) continue;
    if (line.find("\"loop\":\"inner\"") != std::string::npos) {
      if (line.find("components") != std::string::npos)
        last_components = found_of(line);
      else
        last_logical = found_of(line);
    } else if (line.find("\"loop\":\"middle\"") != std::string::npos) {
      ++middle_events;
      CHECK(last_components == 0);
      CHECK(last_logical == 0);
    }
  }
  CHECK(middle_events > 0);
}

TEST_CASE("traced global upper bounds dominate the oracle optimum") {
  std::mt19937 rng(47);
  for (int t = 0; t < 5; ++t) {
    Instance inst = random_instance(9, 150 + rng() % 120, rng);
    int64_t opt = testing::brute_force_op(inst);
    std::ostringstream log;
    SolveConfig cfg;
    cfg.trace = &log;
    cfg.seed = unsigned(100 + t);
    SolveReport rep = solve(inst, cfg);
    CHECK(rep.lb == opt);
    std::istringstream in(log.str());
    std::string line;
    int64_t last_lb = 0;
    double last_ub = std::numeric_limits<double>::infinity();
    while (std::getline(in, line)) {
      if (line.find("\"event\":\"lb\"") != std::string::npos) {
        int64_t v = std::stoll(line.substr(line.find("value\":") + 7));
        CHECK(v >= last_lb);  // LB monotone non-decreasing
        last_lb = v;
      } else if (line.find("\"event\":\"ub\"") != std::string::npos) {
        double v = std::stod(line.substr(line.find("value\":") + 7));
        CHECK(v >= double(opt) - 1e-6);  // every UBG dominates the optimum
        CHECK(v <= last_ub + 1e-9);      // UBG monotone non-increasing
        last_ub = v;
      }
    }
  }
}

TEST_CASE("ablation configurations agree on the optimum") {
  std::mt19937 rng(61);
  std::vector<SolveConfig> variants;
  {
    SolveConfig c;
    c.sep.shrink = ShrinkStrategy::None;
    variants.push_back(c);
  }
  {
    SolveConfig c;
    c.sep.shrink = ShrinkStrategy::C1C2S3;
    variants.push_back(c);
  }
  {
    SolveConfig c;
    c.sep.cc_strats = false;
    variants.push_back(c);
  }
  {
    SolveConfig c;
    c.eph = false;
    variants.push_back(c);
  }
  {
    SolveConfig c;
    c.egh = false;
    variants.push_back(c);
  }
  {
    SolveConfig c;
    c.sep_subloops = 2;
    variants.push_back(c);
  }
  {
    SolveConfig c;
    c.branch_heur = BranchHeur::PB;
    variants.push_back(c);
  }
  {
    SolveConfig c;
    c.vertex_cover = true;
    c.edge_cover = false;
    c.cycle_cover = false;
    c.path_cuts = false;
    variants.push_back(c);
  }
  for (int t = 0; t < 4; ++t) {
    Instance inst = random_instance(10, 140 + rng() % 160, rng);
    int64_t opt = testing::brute_force_op(inst);
    for (size_t i = 0; i < variants.size(); ++i) {
      SolveConfig cfg = variants[i];
      cfg.seed = unsigned(t);
      SolveReport rep = solve(inst, cfg);
      INFO("variant ", i, " trial ", t);
      CHECK(rep.status == SolveStatus::Optimal);
      CHECK(rep.lb == opt);
    }
  }
}

TEST_CASE("unimplemented FST toggle is rejected") {
  Instance inst = coord_instance({{0, 0}, {0, 10}, {10, 0}}, {0, 1, 1}, 100);
  SolveConfig cfg;
  cfg.fst_blossom = true;
  CHECK_THROWS_AS(solve(inst, cfg), ConsistencyError);
}
