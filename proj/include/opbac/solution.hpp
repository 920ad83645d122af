#pragma once

#include <unordered_map>
#include <vector>

#include "opbac/instance.hpp"

namespace opbac {

// Fractional LP point over the active columns: y* per vertex, sparse x* per
// active edge. Duals live in pricing::DualSnapshot.
struct LpSolution {
  std::vector<double> y;
  std::vector<Edge> edges;  // active edge columns
  std::vector<double> x;    // parallel to edges
  double objective = 0.0;
  std::unordered_map<Edge, double, EdgeHash> xmap;

  double xval(const Edge& e) const {
    auto it = xmap.find(e);
    return it == xmap.end() ? 0.0 : it->second;
  }

  void index() {
    xmap.clear();
    for (size_t i = 0; i < edges.size(); ++i) xmap[edges[i]] = x[i];
  }
};

}  // namespace opbac
