#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "opbac/errors.hpp"

namespace opbac {

// Undirected edge with ordered endpoints (u < v). Vertices are 0-based
// internally; instance files use 1-based labels.
struct Edge {
  int u = -1;
  int v = -1;

  Edge() = default;
  Edge(int a, int b) : u(a < b ? a : b), v(a < b ? b : a) {}

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct EdgeHash {
  size_t operator()(const Edge& e) const noexcept {
    return std::hash<uint64_t>{}((uint64_t(e.u) << 32) | uint64_t(uint32_t(e.v)));
  }
};

// Sorted duplicate-free vertex set with O(log) membership.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::vector<int> verts);

  bool contains(int v) const;
  int size() const { return int(verts_.size()); }
  bool empty() const { return verts_.empty(); }
  const std::vector<int>& verts() const { return verts_; }
  auto begin() const { return verts_.begin(); }
  auto end() const { return verts_.end(); }

  void insert(int v);
  void erase(int v);

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<int> verts_;
};

enum class Metric { EUC_2D, CEIL_2D, ATT, GEO, EXPLICIT };

// Immutable OP instance: metric graph, vertex scores, depot, budget d0.
class Instance {
 public:
  std::string name;
  int n = 0;
  int depot = 0;
  Metric metric = Metric::EUC_2D;
  std::vector<int64_t> scores;
  int64_t d0 = 0;
  std::vector<std::pair<double, double>> coords;  // coordinate metrics
  std::vector<int64_t> matrix;                    // EXPLICIT: row-major n*n

  int64_t distance(int u, int v) const;
  int64_t score_total() const;

  // k nearest neighbours of v by distance (excluding v), ties by index.
  std::vector<int> nearest(int v, int k) const;
};

// Parse an OPLib/TSPLIB instance from file content.
Instance parse_instance(const std::string& content);
Instance load_instance(const std::string& path);

// Edges of the coboundary delta(S): exactly one endpoint in S.
// Throws DegenerateSet when S is empty or S = V (n = vertex count).
std::vector<Edge> star_set(const VertexSet& s, const std::vector<Edge>& edges, int n);

}  // namespace opbac
