#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "opbac/heuristics.hpp"
#include "opbac/instance.hpp"
#include "opbac/pricing.hpp"
#include "opbac/separation.hpp"

namespace opbac {

enum class BranchHeur { PB, VP, VP_EA4OP };
enum class SolveStatus { Optimal, TimeLimit, Infeasible };

// Full solver configuration; the defaults reproduce the reference setup.
struct SolveConfig {
  SeparationConfig sep;          // shrink strategy, CC strategies, thresholds
  bool eph = true;               // Padberg-Hong blossom heuristic
  bool egh = true;               // Groetschel-Holland blossom heuristic
  bool fst_blossom = false;      // not implemented; must stay false
  bool cycle_cover = true;
  bool edge_cover = true;
  bool vertex_cover = false;
  bool path_cuts = true;
  int sep_subloops = 3;          // 2 appends the outer list to the middle one
  BranchHeur branch_heur = BranchHeur::VP_EA4OP;
  int heur_stride = 0;           // node-heuristic stride; 0 = auto by size
  int cut_batch = 250;           // ADD_CUT_BATCH
  double subloop_impr = 0.01;    // SUBLOOP_IMPR re-entry threshold
  PricingParams pricing;
  CutPoolParams pool;
  HeurParams heur;
  double time_limit_s = 18000.0;
  unsigned seed = 0;
  std::ostream* trace = nullptr;  // JSON-lines event log when set
};

struct SolveStats {
  long nodes = 0;
  long lp_solves = 0;
  long pricing_rounds = 0;
  long cuts_added = 0;
  long cols_added = 0;
  std::map<std::string, long> cuts_by_family;
};

struct SolveReport {
  SolveStatus status = SolveStatus::Optimal;
  int64_t lb = 0;
  double ub = 0.0;
  std::vector<int> tour;  // best tour, 0-based, starts at the depot
  double time_s = 0.0;
  SolveStats stats;
};

SolveReport solve(const Instance& inst, const SolveConfig& config = {});

}  // namespace opbac
