#pragma once

#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "opbac/cutpool.hpp"
#include "opbac/instance.hpp"
#include "opbac/lp.hpp"

namespace opbac {

// Column/row bookkeeping between the model and the LP backend.
struct LpMap {
  int budget_row = -1;
  std::vector<int> degree_row;                   // per vertex
  std::vector<int> ycol;                         // per vertex
  std::unordered_map<Edge, int, EdgeHash> xcol;  // active edge columns
};

// Raw duals of the last LP solve plus the per-subset duals accumulated in the
// cut pool registry and the L^E edge contributions.
struct DualSnapshot {
  double pi_d0 = 0.0;          // budget-row dual
  std::vector<double> pi_v;    // degree-row duals
  const SubsetRegistry* registry = nullptr;
  std::unordered_map<Edge, double, EdgeHash> rce;  // L^E contributions
};

struct PricingParams {
  int batch = 200;          // PRICE_MAX_ADD, also the evaluation batch size
  double rc_thresh = 1e-5;  // PRICE_RC_THRESH
  double dust = 1e-3;       // DEL_DUST_VAR
  int max_age = 100;        // DEL_MAX_AGE_VAR
};

enum class PriceMode { BoundCertify, RecoverFeasibility };

struct PriceResult {
  std::vector<Edge> added;
  int exact_evals = 0;
  bool feasible = true;  // RecoverFeasibility: LP became optimal
};

// Snapshot the duals after a solve; refreshes the registry's subset duals.
DualSnapshot take_duals(const Instance& inst, const lp::LpModel& lp,
                        CutPool& pool, const LpMap& map);

double rc_exact(const Edge& e, const Instance& inst, const DualSnapshot& snap);
double rc_upper_bound(const Edge& e, const Instance& inst,
                      const DualSnapshot& snap);

// Add the column for edge e with coefficients in all active rows.
int add_edge_column(const Instance& inst, lp::LpModel& lp, const CutPool& pool,
                    LpMap& map, const Edge& e);

// Batched pricing loop over the inactive edges (Table 1 limits). Edges in
// `skip` (e.g. branched to zero) are never priced in.
PriceResult price_loop(const Instance& inst, lp::LpModel& lp, CutPool& pool,
                       LpMap& map, PriceMode mode, const PricingParams& params,
                       const std::unordered_set<Edge, EdgeHash>* skip = nullptr);

// Remove edge columns whose value stayed under `dust` for `max_age`
// consecutive solves; `age` is caller-owned state keyed by edge.
std::vector<Edge> edge_aging(lp::LpModel& lp, LpMap& map,
                             std::unordered_map<Edge, int, EdgeHash>& age,
                             const PricingParams& params);

}  // namespace opbac
