#pragma once

#include <cstdint>
#include <vector>

#include "opbac/instance.hpp"

namespace opbac {

// Support graph of a fractional solution: vertices with y* > 0, edges with
// x* > 0 and capacities x*_e. Vertex ids are the original instance ids.
struct SupportGraph {
  int n = 0;                  // original vertex count
  int depot = 0;
  std::vector<int> verts;     // V*
  std::vector<Edge> edges;    // E*
  std::vector<double> cap;    // x*_e per edge
  std::vector<double> y;      // y*_v, size n
};

enum class ShrinkStrategy { None, C1C2, S1, C1C2S3, S1S3 };

inline bool shrink_uses_s3(ShrinkStrategy s) {
  return s == ShrinkStrategy::C1C2S3 || s == ShrinkStrategy::S1S3;
}

// Contracted support graph. Supernode members are original vertex ids;
// parallel edge capacities are merged, self-loops dropped.
struct ShrunkGraph {
  std::vector<std::vector<int>> members;  // unshrink map per supernode
  std::vector<double> ybar;               // shrunk-vector y (rule value)
  std::vector<double> ysum;               // aggregated sum of member y*
  std::vector<int64_t> sbar;              // aggregated score per supernode
  std::vector<Edge> edges;                // supernode index pairs
  std::vector<double> cap;
  int depot_node = 0;                     // supernode containing the depot

  int size() const { return int(members.size()); }
};

// (s,t)-min cut by highest-label push-relabel with the gap heuristic.
// Returns the cut value and the source side (minimal residual-reachable set).
// Disconnected s,t yield value 0 with s's component.
std::pair<double, VertexSet> min_cut_st(int n, const std::vector<Edge>& edges,
                                        const std::vector<double>& cap, int s,
                                        int t);

// Apply the selected shrinking rules to a fixpoint. S3 is a driver-side rule
// (contract_pair after each min cut), so C1C2S3/S1S3 shrink like C1C2/S1 here.
ShrunkGraph shrink(const SupportGraph& g, ShrinkStrategy strategy,
                   const std::vector<int64_t>& scores);

// Contract supernodes a and b into one; re-applies the shrinking rules of
// `strategy` around the merged node afterwards.
ShrunkGraph contract_pair(const ShrunkGraph& g, int a, int b,
                          ShrinkStrategy strategy = ShrinkStrategy::None);

}  // namespace opbac
