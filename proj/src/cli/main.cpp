#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "opbac/errors.hpp"
#include "opbac/heuristics.hpp"
#include "opbac/instance.hpp"
#include "opbac/search.hpp"

namespace {

using nlohmann::json;
using namespace opbac;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitBackend = 3;

std::string status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "OPTIMAL";
    case SolveStatus::TimeLimit: return "TIME_LIMIT";
    case SolveStatus::Infeasible: return "INFEASIBLE";
  }
  return "UNKNOWN";
}

double gap_of(int64_t lb, double ub) {
  if (lb <= 0) return 0.0;
  double g = (ub - double(lb)) / double(lb);
  return std::round(g * 10000.0) / 10000.0;
}

json report_json(const std::string& path, const Instance& inst,
                 const SolveReport& rep) {
  json cuts = json::object();
  for (const auto& [family, count] : rep.stats.cuts_by_family)
    cuts[family] = count;
  std::vector<int> tour1;
  tour1.reserve(rep.tour.size());
  for (int v : rep.tour) tour1.push_back(v + 1);
  return json{{"instance", inst.name.empty() ? path : inst.name},
              {"LB", rep.lb},
              {"UB", rep.ub},
              {"gap", gap_of(rep.lb, rep.ub)},
              {"status", status_name(rep.status)},
              {"tour", tour1},
              {"time_s", rep.time_s},
              {"stats",
               {{"cuts", cuts},
                {"cuts_added", rep.stats.cuts_added},
                {"cols_added", rep.stats.cols_added},
                {"nodes", rep.stats.nodes},
                {"lp_solves", rep.stats.lp_solves},
                {"pricing_rounds", rep.stats.pricing_rounds}}}};
}

// Reads a whitespace-separated list of 1-based vertex indices.
std::vector<int> read_tour_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open tour file: " + path);
  std::vector<int> tour;
  long long v;
  while (in >> v) tour.push_back(int(v));
  if (!in.eof()) throw ParseError("tour file has non-integer tokens: " + path);
  return tour;
}

int run_solve(const std::string& path, const SolveConfig& cfg, bool as_json,
              const std::string& trace_path) {
  Instance inst;
  try {
    inst = load_instance(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  SolveConfig run_cfg = cfg;
  std::ofstream trace_out;
  if (!trace_path.empty()) {
    trace_out.open(trace_path);
    if (!trace_out) {
      std::cerr << "error: cannot open trace file: " << trace_path << "\n";
      return kExitParse;
    }
    run_cfg.trace = &trace_out;
  }
  SolveReport rep;
  try {
    rep = solve(inst, run_cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBackend;
  }
  if (as_json) {
    std::cout << report_json(path, inst, rep).dump(2) << "\n";
  } else {
    std::cout << status_name(rep.status) << " LB=" << rep.lb << " UB=" << rep.ub
              << " gap=" << std::fixed << std::setprecision(4)
              << gap_of(rep.lb, rep.ub) << " nodes=" << rep.stats.nodes
              << " time=" << std::setprecision(2) << rep.time_s << "s\n";
    std::cout << "tour:";
    for (int v : rep.tour) std::cout << " " << v + 1;
    std::cout << "\n";
  }
  return kExitOk;
}

int run_validate(const std::string& inst_path, const std::string& tour_path,
                 bool as_json) {
  Instance inst;
  std::vector<int> tour1;
  try {
    inst = load_instance(inst_path);
    tour1 = read_tour_file(tour_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }

  std::string verdict;
  std::string reason;
  int64_t length = 0;
  int64_t score = 0;
  if (tour1.empty()) {
    verdict = "INVALID";
    reason = "empty tour";
  } else {
    std::set<int> seen;
    bool ok = true;
    for (int v : tour1) {
      if (v < 1 || v > inst.n) {
        verdict = "INVALID";
        reason = "vertex " + std::to_string(v) + " out of range";
        ok = false;
        break;
      }
      if (!seen.insert(v).second) {
        verdict = "INVALID";
        reason = "vertex " + std::to_string(v) + " repeated (tour not simple)";
        ok = false;
        break;
      }
    }
    if (ok && !seen.count(inst.depot + 1)) {
      verdict = "INVALID";
      reason = "depot " + std::to_string(inst.depot + 1) + " missing";
      ok = false;
    }
    if (ok) {
      std::vector<int> seq;
      seq.reserve(tour1.size());
      for (int v : tour1) seq.push_back(v - 1);
      Tour t = make_tour(inst, std::move(seq));
      length = t.length;
      score = t.score;
      verdict = (t.length <= inst.d0) ? "FEASIBLE" : "INFEASIBLE";
      if (verdict == "INFEASIBLE")
        reason = "length " + std::to_string(t.length) + " exceeds budget " +
                 std::to_string(inst.d0);
    }
  }

  if (as_json) {
    json out{{"instance", inst.name.empty() ? inst_path : inst.name},
             {"verdict", verdict},
             {"length", length},
             {"score", score},
             {"budget", inst.d0}};
    if (!reason.empty()) out["reason"] = reason;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << verdict << " length=" << length << " score=" << score
              << " budget=" << inst.d0;
    if (!reason.empty()) std::cout << " (" << reason << ")";
    std::cout << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"opbac: branch-and-cut solver for the orienteering problem"};
  app.require_subcommand(1);

  // --- solve ---
  auto* sc = app.add_subcommand("solve", "Solve an OPLib instance");
  std::string inst_path;
  sc->add_option("instance", inst_path, "OPLib/TSPLIB instance file")
      ->required();

  SolveConfig cfg;
  bool as_json = false;
  std::string trace_path;
  sc->add_flag("--json", as_json, "emit a JSON report instead of the summary");
  sc->add_option("--trace", trace_path, "write a JSON-lines event log here");
  sc->add_option("--time-limit", cfg.time_limit_s, "time limit in seconds")
      ->capture_default_str();
  sc->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();

  // Component toggles (defaults reproduce the reference configuration).
  std::map<std::string, ShrinkStrategy> shrink_names{
      {"none", ShrinkStrategy::None},
      {"c1c2", ShrinkStrategy::C1C2},
      {"s1", ShrinkStrategy::S1},
      {"c1c2s3", ShrinkStrategy::C1C2S3},
      {"s1s3", ShrinkStrategy::S1S3}};
  sc->add_option("--shrink", cfg.sep.shrink, "min-cut shrinking strategy")
      ->transform(CLI::CheckedTransformer(shrink_names, CLI::ignore_case))
      ->default_str("s1s3");
  sc->add_flag("!--no-cc-strats", cfg.sep.cc_strats,
               "disable the extra CC candidate strategies");
  sc->add_flag("!--no-eph", cfg.eph, "disable the Padberg-Hong blossoms");
  sc->add_flag("!--no-egh", cfg.egh,
               "disable the Groetschel-Holland blossoms");
  sc->add_flag("--fst-blossom", cfg.fst_blossom,
               "exact blossom separation (not implemented; rejected)");
  sc->add_flag("!--no-cycle-cover", cfg.cycle_cover, "disable cycle covers");
  sc->add_flag("!--no-edge-cover", cfg.edge_cover, "disable edge covers");
  sc->add_flag("--vertex-cover", cfg.vertex_cover, "enable vertex covers");
  sc->add_flag("!--no-path-cuts", cfg.path_cuts, "disable path inequalities");
  sc->add_option("--sep-subloops", cfg.sep_subloops, "separation subloops")
      ->check(CLI::IsMember({2, 3}))
      ->capture_default_str();
  std::map<std::string, BranchHeur> heur_names{{"pb", BranchHeur::PB},
                                               {"vp", BranchHeur::VP},
                                               {"vp_ea4op", BranchHeur::VP_EA4OP}};
  sc->add_option("--branch-heur", cfg.branch_heur, "node heuristic")
      ->transform(CLI::CheckedTransformer(heur_names, CLI::ignore_case))
      ->default_str("vp_ea4op");
  sc->add_option("--heur-stride", cfg.heur_stride,
                 "run the node heuristic every k-th node (0 = auto)")
      ->capture_default_str();

  // Common parameters.
  sc->add_option("--zero", cfg.sep.zero, "ZERO tolerance")
      ->capture_default_str();
  sc->add_option("--cut-batch", cfg.cut_batch, "ADD_CUT_BATCH")
      ->capture_default_str();
  sc->add_option("--min-viol", cfg.sep.min_viol, "ADD_MIN_VIOL")
      ->capture_default_str();
  sc->add_option("--subloop-impr", cfg.subloop_impr, "SUBLOOP_IMPR")
      ->capture_default_str();
  sc->add_option("--sec-per-set", cfg.pool.sec_per_set, "ADD_SEC_PER_SET")
      ->capture_default_str();
  sc->add_option("--path-max", cfg.sep.path_max, "ADD_PATH_MAX")
      ->capture_default_str();
  sc->add_option("--egh-epsilon", cfg.sep.egh_epsilon, "ADD_EGH_EPSILON")
      ->capture_default_str();
  sc->add_option("--price-max-add", cfg.pricing.batch, "PRICE_MAX_ADD")
      ->capture_default_str();
  sc->add_option("--price-rc-thresh", cfg.pricing.rc_thresh, "PRICE_RC_THRESH")
      ->capture_default_str();
  sc->add_option("--dust-var", cfg.pricing.dust, "DEL_DUST_VAR")
      ->capture_default_str();
  sc->add_option("--dust-cut", cfg.pool.dust, "DEL_DUST_CUT")
      ->capture_default_str();
  sc->add_option("--max-age-cut", cfg.pool.max_age, "DEL_MAX_AGE_CUT")
      ->capture_default_str();
  sc->add_option("--max-age-var", cfg.pricing.max_age, "DEL_MAX_AGE_VAR")
      ->capture_default_str();
  sc->add_option("--greedy-xmin", cfg.heur.greedy_xmin, "XHEUR_GREEDY_XMIN")
      ->capture_default_str();
  sc->add_option("--pop-size", cfg.heur.pop_size, "XHEUR_EA4OP_POP_SIZE")
      ->capture_default_str();
  sc->add_option("--d2d", cfg.heur.d2d, "XHEUR_EA4OP_D2D")
      ->capture_default_str();
  sc->add_option("--npar", cfg.heur.npar, "XHEUR_EA4OP_NPAR")
      ->capture_default_str();

  // --- validate ---
  auto* vc = app.add_subcommand("validate", "Validate a tour against an instance");
  std::string v_inst, v_tour;
  bool v_json = false;
  vc->add_option("instance", v_inst, "OPLib/TSPLIB instance file")->required();
  vc->add_option("tour", v_tour,
                 "tour file: whitespace-separated 1-based vertex indices")
      ->required();
  vc->add_flag("--json", v_json, "emit a JSON report");

  CLI11_PARSE(app, argc, argv);

  if (sc->parsed()) return run_solve(inst_path, cfg, as_json, trace_path);
  return run_validate(v_inst, v_tour, v_json);
}
