#pragma once

#include <vector>

#include "opbac/cutpool.hpp"
#include "opbac/instance.hpp"
#include "opbac/mincut.hpp"
#include "opbac/solution.hpp"

namespace opbac {

struct SeparationConfig {
  ShrinkStrategy shrink = ShrinkStrategy::S1S3;
  bool cc_strats = true;       // extra CC candidate strategies i)-iii)
  double min_viol = 1e-6;      // ADD_MIN_VIOL
  double egh_epsilon = 0.3;    // ADD_EGH_EPSILON
  double path_xmin = 0.9;      // path-extraction edge threshold
  int path_max = 500;          // ADD_PATH_MAX
  double zero = 1e-7;          // ZERO
};

struct SeparationContext {
  const Instance* inst = nullptr;
  const LpSolution* sol = nullptr;
  int64_t lb = 0;  // current incumbent score
  int64_t ub = 0;  // current global upper bound
  SeparationConfig config;
};

// Support graph of the fractional point: vertices with y* > zero and edges
// with x* > zero.
SupportGraph make_support(const SeparationContext& ctx);

// Every separator returns cuts whose violation at ctx.sol exceeds
// config.min_viol; the driver batches/caps them.
std::vector<Cut> sep_connected_components(const SeparationContext& ctx);
std::vector<Cut> sep_sec_cc_hong(const SeparationContext& ctx);
std::vector<Cut> sep_blossom_eph(const SeparationContext& ctx);
std::vector<Cut> sep_blossom_egh(const SeparationContext& ctx);
std::vector<Cut> sep_edge_cover(const SeparationContext& ctx);
std::vector<Cut> sep_cycle_cover(const SeparationContext& ctx);
std::vector<Cut> sep_vertex_cover(const SeparationContext& ctx);
std::vector<Cut> sep_path(const SeparationContext& ctx);
std::vector<Cut> sep_logical(const SeparationContext& ctx);

// Sort candidates by violation descending and keep the first `cap`.
void cap_by_violation(std::vector<Cut>& cuts, const SeparationContext& ctx,
                      int cap);

}  // namespace opbac
