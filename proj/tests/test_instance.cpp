#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "opbac/instance.hpp"

using namespace opbac;

namespace {

std::string data_path(const std::string& rel) {
  return std::string(OPBAC_TEST_DATA_DIR) + "/" + rel;
}

std::string minimal_euc3(int coord_lines = 3) {
  std::ostringstream out;
  out << "NAME : tiny\nTYPE : OP\nDIMENSION : 3\nCOST_LIMIT : 20\n"
      << "EDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n";
  const char* coords[] = {"1 0 0", "2 3 0", "3 3 4"};
  for (int i = 0; i < coord_lines; ++i) out << coords[i] << "\n";
  out << "NODE_SCORE_SECTION\n1 0\n2 5\n3 7\nEOF\n";
  return out.str();
}

}  // namespace

TEST_CASE("parse att48 gen1 oplib") {
  Instance inst = load_instance(data_path("oplib/att48-gen1-50.oplib"));
  CHECK(inst.n == 48);
  CHECK(inst.d0 == 5314);
  CHECK(inst.depot == 0);
  CHECK(inst.metric == Metric::ATT);
  // Generation-1 instances assign every node a score of 1, depot included;
  // the depot's score is collected by every tour, so it shifts all objectives
  // uniformly without changing the optimizer.
  for (int v = 0; v < inst.n; ++v) CHECK(inst.scores[v] == 1);
}

TEST_CASE("parse minimal 3-node instance") {
  Instance inst = parse_instance(minimal_euc3());
  CHECK(inst.n == 3);
  CHECK(inst.d0 == 20);
  CHECK(inst.scores == std::vector<int64_t>{0, 5, 7});
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_instance(minimal_euc3(2)), ParseError);
  std::string no_limit = minimal_euc3();
  no_limit.erase(no_limit.find("COST_LIMIT : 20\n"), 16);
  CHECK_THROWS_AS(parse_instance(no_limit), ParseError);
  std::string bad_metric = minimal_euc3();
  bad_metric.replace(bad_metric.find("EUC_2D"), 6, "XRAY_7");
  CHECK_THROWS_AS(parse_instance(bad_metric), UnsupportedMetric);
}

TEST_CASE("parse is idempotent on semantic fields") {
  Instance a = parse_instance(minimal_euc3());
  Instance b = parse_instance(minimal_euc3());
  CHECK(a.n == b.n);
  CHECK(a.d0 == b.d0);
  CHECK(a.scores == b.scores);
  CHECK(a.coords == b.coords);
}

TEST_CASE("euclidean distances") {
  Instance inst = parse_instance(minimal_euc3());
  CHECK(inst.distance(0, 1) == 3);
  CHECK(inst.distance(1, 2) == 4);
  CHECK(inst.distance(0, 2) == 5);
  CHECK(inst.distance(2, 2) == 0);
  CHECK(inst.distance(0, 2) == inst.distance(2, 0));
}

TEST_CASE("att metric matches independent oracle") {
  Instance inst = load_instance(data_path("oplib/att48-gen1-50.oplib"));
  // Frozen from an independent TSPLIB distance implementation.
  const struct { int u, v; int64_t d; } expected[] = {
      {0, 1, 1495},  {0, 47, 1184}, {4, 9, 636},   {6, 22, 894},
      {11, 12, 411}, {19, 39, 466}, {2, 32, 622},  {14, 15, 642},
      {43, 44, 2379}, {28, 29, 1775},
  };
  for (const auto& e : expected) CHECK(inst.distance(e.u, e.v) == e.d);
}

TEST_CASE("geo metric matches independent oracle") {
  std::string text =
      "NAME : geo4\nTYPE : OP\nDIMENSION : 4\nCOST_LIMIT : 99999\n"
      "EDGE_WEIGHT_TYPE : GEO\nNODE_COORD_SECTION\n"
      "1 36.0 -86.0\n2 40.3 -76.6\n3 14.55 121.05\n4 -33.87 151.12\n"
      "NODE_SCORE_SECTION\n1 0\n2 1\n3 1\n4 1\nEOF\n";
  Instance inst = parse_instance(text);
  // Frozen from an independent TSPLIB distance implementation.
  CHECK(inst.distance(0, 1) == 933);
  CHECK(inst.distance(0, 2) == 13694);
  CHECK(inst.distance(0, 3) == 14911);
  CHECK(inst.distance(1, 2) == 13592);
  CHECK(inst.distance(1, 3) == 15781);
  CHECK(inst.distance(2, 3) == 6353);
}

TEST_CASE("ceil_2d rounds up") {
  std::string text = minimal_euc3();
  text.replace(text.find("EUC_2D"), 6, "CEIL_2D");
  text.replace(text.find("2 3 0"), 5, "2 1 1");
  Instance inst = parse_instance(text);
  CHECK(inst.distance(0, 1) == 2);  // sqrt(2) rounded up
}

TEST_CASE("explicit matrix formats") {
  auto mk = [](const std::string& format, const std::string& body) {
    return "NAME : m\nTYPE : OP\nDIMENSION : 3\nCOST_LIMIT : 50\n"
           "EDGE_WEIGHT_TYPE : EXPLICIT\nEDGE_WEIGHT_FORMAT : " + format +
           "\nEDGE_WEIGHT_SECTION\n" + body +
           "NODE_SCORE_SECTION\n1 0\n2 1\n3 1\nEOF\n";
  };
  Instance full = parse_instance(mk("FULL_MATRIX", "0 7 9\n7 0 4\n9 4 0\n"));
  Instance upper = parse_instance(mk("UPPER_ROW", "7 9\n4\n"));
  Instance lower = parse_instance(mk("LOWER_DIAG_ROW", "0\n7 0\n9 4 0\n"));
  for (const Instance* inst : {&full, &upper, &lower}) {
    CHECK(inst->distance(0, 1) == 7);
    CHECK(inst->distance(0, 2) == 9);
    CHECK(inst->distance(1, 2) == 4);
    CHECK(inst->distance(2, 1) == 4);
  }
}

TEST_CASE("nearest neighbours") {
  Instance inst = load_instance(data_path("oplib/eil51-gen1-50.oplib"));
  for (int v : {0, 10, 50}) {
    auto nn = inst.nearest(v, 10);
    CHECK(nn.size() == 10);
    // Every excluded vertex is at least as far as the farthest included one.
    int64_t worst = inst.distance(v, nn.back());
    for (int u = 0; u < inst.n; ++u) {
      bool in = std::find(nn.begin(), nn.end(), u) != nn.end();
      if (u != v && !in) CHECK(inst.distance(v, u) >= worst);
    }
  }
}

TEST_CASE("star_set basics") {
  std::vector<Edge> k4;
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) k4.emplace_back(u, v);
  auto star = star_set(VertexSet{{2}}, k4, 4);
  CHECK(star.size() == 3);
  for (const Edge& e : star) CHECK((e.u == 2 || e.v == 2));

  std::vector<Edge> two_parts = {{0, 1}, {2, 3}};
  CHECK(star_set(VertexSet{{0, 1}}, two_parts, 4).empty());

  CHECK_THROWS_AS(star_set(VertexSet{}, k4, 4), DegenerateSet);
  CHECK_THROWS_AS(star_set(VertexSet{{0, 1, 2, 3}}, k4, 4), DegenerateSet);
}

TEST_CASE("star_set equals brute-force filter on random sets") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 5 + int(rng() % 8);
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng() % 3 == 0) edges.emplace_back(u, v);
    std::vector<int> members;
    for (int v = 0; v < n; ++v)
      if (rng() % 2 == 0) members.push_back(v);
    if (members.empty()) members.push_back(0);
    if (int(members.size()) == n) members.pop_back();
    VertexSet s{members};
    auto got = star_set(s, edges, n);
    std::vector<Edge> want;
    for (const Edge& e : edges) {
      int inside = int(s.contains(e.u)) + int(s.contains(e.v));
      if (inside == 1) want.push_back(e);
    }
    CHECK(got == want);
  }
}

TEST_CASE("coboundary identity x(delta(S)) = 2y(S) - 2x(E(S))") {
  // Random fractional x on K8 with y defined by the degree equations.
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const int n = 8;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Edge> edges;
    std::vector<double> x;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        edges.emplace_back(u, v);
        x.push_back(uni(rng));
      }
    std::vector<double> y(n, 0.0);
    for (size_t i = 0; i < edges.size(); ++i) {
      y[edges[i].u] += x[i] / 2;
      y[edges[i].v] += x[i] / 2;
    }
    std::vector<int> members;
    for (int v = 0; v < n; ++v)
      if (rng() % 2 == 0) members.push_back(v);
    if (members.empty() || int(members.size()) == n) continue;
    VertexSet s{members};
    double lhs = 0.0, ys = 0.0, xin = 0.0;
    for (size_t i = 0; i < edges.size(); ++i) {
      int inside = int(s.contains(edges[i].u)) + int(s.contains(edges[i].v));
      if (inside == 1) lhs += x[i];
      if (inside == 2) xin += x[i];
    }
    for (int v : s) ys += y[v];
    CHECK(lhs == doctest::Approx(2 * ys - 2 * xin).epsilon(1e-9));
  }
}
