#include "opbac/heuristics.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

namespace opbac {

namespace {

int64_t seq_length(const Instance& inst, const std::vector<int>& seq) {
  if (seq.size() < 2) return 0;
  int64_t len = 0;
  for (size_t i = 0; i + 1 < seq.size(); ++i)
    len += inst.distance(seq[i], seq[i + 1]);
  len += inst.distance(seq.back(), seq.front());
  return len;
}

void rotate_to_depot(std::vector<int>& seq, int depot) {
  auto it = std::find(seq.begin(), seq.end(), depot);
  if (it != seq.end()) std::rotate(seq.begin(), it, seq.end());
}

}  // namespace

Tour make_tour(const Instance& inst, std::vector<int> seq) {
  if (seq.empty()) seq.push_back(inst.depot);
  rotate_to_depot(seq, inst.depot);
  Tour t;
  t.length = seq_length(inst, seq);
  for (int v : seq) t.score += inst.scores[v];
  t.seq = std::move(seq);
  return t;
}

bool tour_feasible(const Instance& inst, const Tour& t) {
  return t.length <= inst.d0 && !t.seq.empty() && t.seq[0] == inst.depot;
}

// ---------------------------------------------------------------------------

Tour improve_tour(const Instance& inst, const Tour& t) {
  std::vector<int> seq = t.seq;
  int n = int(seq.size());
  if (n < 4) return make_tour(inst, seq);
  auto d = [&](int a, int b) { return inst.distance(seq[a], seq[b]); };
  bool improved = true;
  while (improved) {
    improved = false;
    // 2-opt, first improvement: reverse seq[i..j].
    for (int i = 1; i < n - 1 && !improved; ++i)
      for (int j = i + 1; j < n && !improved; ++j) {
        int a = i - 1, b = i, c = j, e = (j + 1) % n;
        if (e == a) continue;
        int64_t delta = inst.distance(seq[a], seq[c]) +
                        inst.distance(seq[b], seq[e]) - d(a, b) - d(c, e);
        if (delta < 0) {
          std::reverse(seq.begin() + i, seq.begin() + j + 1);
          improved = true;
        }
      }
    if (improved) continue;
    // Or-opt: move a segment of length 1..3 elsewhere.
    for (int len = 1; len <= 3 && !improved; ++len)
      for (int i = 1; i + len <= n && !improved; ++i) {
        int prev = i - 1, next = (i + len) % n;
        if (next == prev) continue;
        int64_t removal = d(prev, i) + d(i + len - 1, next % n) -
                          inst.distance(seq[prev], seq[next % n]);
        if (removal <= 0) continue;
        for (int j = 0; j < n && !improved; ++j) {
          if (j >= prev && j < i + len) continue;
          int after = (j + 1) % n;
          if (after >= i && after < i + len) continue;
          int64_t insertion = inst.distance(seq[j], seq[i]) +
                              inst.distance(seq[i + len - 1], seq[after]) -
                              inst.distance(seq[j], seq[after]);
          if (insertion < removal) {
            std::vector<int> segment(seq.begin() + i, seq.begin() + i + len);
            seq.erase(seq.begin() + i, seq.begin() + i + len);
            int at = (j < i) ? j : j - len;
            seq.insert(seq.begin() + at + 1, segment.begin(), segment.end());
            improved = true;
          }
        }
      }
  }
  return make_tour(inst, std::move(seq));
}

Tour drop_until_feasible(const Instance& inst, const Tour& t) {
  std::vector<int> seq = t.seq;
  rotate_to_depot(seq, inst.depot);
  if (seq.empty() || seq[0] != inst.depot) seq.insert(seq.begin(), inst.depot);
  int64_t length = seq_length(inst, seq);
  while (length > inst.d0 && seq.size() > 1) {
    int n = int(seq.size());
    int best = -1;
    int64_t best_save = 0, best_score = 1;
    for (int i = 1; i < n; ++i) {
      int prev = i - 1, next = (i + 1) % n;
      int64_t save = inst.distance(seq[prev], seq[i]) +
                     inst.distance(seq[i], seq[next]) -
                     inst.distance(seq[prev], seq[next]);
      int64_t score = inst.scores[seq[i]];
      // Maximize save/score with score 0 treated as infinitely cheap.
      bool better;
      if (best < 0)
        better = true;
      else if (score == 0 && best_score == 0)
        better = save > best_save;
      else if (score == 0 || best_score == 0)
        better = score == 0;
      else
        better = save * best_score > best_save * score ||
                 (save * best_score == best_save * score && save > best_save);
      if (better) {
        best = i;
        best_save = save;
        best_score = score;
      }
    }
    seq.erase(seq.begin() + best);
    length = seq_length(inst, seq);
  }
  return make_tour(inst, std::move(seq));
}

namespace {

// Static 2-d tree over the instance coordinates for nearest-tour-vertex
// pruning during insertion.
struct KdTree {
  struct Node {
    int vertex;
    int left = -1, right = -1;
  };
  std::vector<Node> nodes;
  const std::vector<std::pair<double, double>>* pts = nullptr;
  int root = -1;

  int build(std::vector<int>& ids, int lo, int hi, int axis) {
    if (lo >= hi) return -1;
    int mid = (lo + hi) / 2;
    std::nth_element(ids.begin() + lo, ids.begin() + mid, ids.begin() + hi,
                     [&](int a, int b) {
                       return axis == 0 ? (*pts)[a].first < (*pts)[b].first
                                        : (*pts)[a].second < (*pts)[b].second;
                     });
    int id = int(nodes.size());
    nodes.push_back({ids[mid]});
    nodes[id].left = build(ids, lo, mid, 1 - axis);
    nodes[id].right = build(ids, mid + 1, hi, 1 - axis);
    return id;
  }

  void init(const std::vector<std::pair<double, double>>& coords,
            const std::vector<int>& verts) {
    pts = &coords;
    std::vector<int> ids = verts;
    nodes.clear();
    root = build(ids, 0, int(ids.size()), 0);
  }

  void nearest(int node, int axis, double x, double y, double& best) const {
    if (node < 0) return;
    const auto& p = (*pts)[nodes[node].vertex];
    double dx = x - p.first, dy = y - p.second;
    best = std::min(best, std::sqrt(dx * dx + dy * dy));
    double split = axis == 0 ? dx : dy;
    nearest(split < 0 ? nodes[node].left : nodes[node].right, 1 - axis, x, y,
            best);
    if (std::abs(split) < best)
      nearest(split < 0 ? nodes[node].right : nodes[node].left, 1 - axis, x, y,
              best);
  }

  double nearest_dist(double x, double y) const {
    double best = 1e300;
    nearest(root, 0, x, y, best);
    return best;
  }
};

}  // namespace

Tour add_vertices(const Instance& inst, const Tour& t) {
  std::vector<int> seq = t.seq;
  int64_t length = t.length;
  std::vector<char> in(inst.n, 0);
  for (int v : seq) in[v] = 1;

  bool spatial = inst.metric != Metric::EXPLICIT && inst.metric != Metric::GEO;
  // Euclidean lower-bound factor on the integer metric.
  double factor = inst.metric == Metric::ATT ? 1.0 / std::sqrt(10.0) : 1.0;
  KdTree tree;

  bool grew = true;
  while (grew) {
    grew = false;
    if (spatial) tree.init(inst.coords, seq);
    int64_t maxedge = 0;
    int m = int(seq.size());
    for (int i = 0; i < m; ++i)
      maxedge = std::max(maxedge,
                         inst.distance(seq[i], seq[(i + 1) % m]));
    int best_v = -1, best_pos = -1;
    int64_t best_detour = 0;
    for (int v = 0; v < inst.n; ++v) {
      if (in[v] || inst.scores[v] <= 0) continue;
      if (spatial && m >= 2) {
        double nn = tree.nearest_dist(inst.coords[v].first,
                                      inst.coords[v].second);
        int64_t lb = int64_t(std::floor(2.0 * nn * factor)) - 2 - maxedge;
        if (length + lb > inst.d0) continue;  // cannot fit anywhere
      }
      int64_t detour = INT64_MAX;
      int pos = -1;
      for (int i = 0; i < m; ++i) {
        int a = seq[i], b = seq[(i + 1) % m];
        int64_t d = inst.distance(a, v) + inst.distance(v, b) -
                    inst.distance(a, b);
        if (d < detour) {
          detour = d;
          pos = i + 1;
        }
      }
      if (m == 1) {
        detour = 2 * inst.distance(seq[0], v);
        pos = 1;
      }
      if (length + detour > inst.d0) continue;
      bool better =
          best_v < 0 || inst.scores[v] > inst.scores[best_v] ||
          (inst.scores[v] == inst.scores[best_v] &&
           (detour < best_detour ||
            (detour == best_detour && v < best_v)));
      if (better) {
        best_v = v;
        best_pos = pos;
        best_detour = detour;
      }
    }
    if (best_v >= 0) {
      seq.insert(seq.begin() + best_pos, best_v);
      length += best_detour;
      in[best_v] = 1;
      grew = true;
    }
  }
  return make_tour(inst, std::move(seq));
}

Tour repair_pipeline(const Instance& inst, Tour t) {
  t = improve_tour(inst, t);
  if (!tour_feasible(inst, t)) t = drop_until_feasible(inst, t);
  t = add_vertices(inst, t);
  t = improve_tour(inst, t);
  // Two-vertex tours would use their single edge twice, which the edge
  // model (x_e <= 1) cannot represent; collapse them to the depot.
  if (t.seq.size() == 2) t = make_tour(inst, {inst.depot});
  return t;
}

// ---------------------------------------------------------------------------

Tour heur_pb(const Instance& inst, const LpSolution& sol, std::mt19937& rng,
             const HeurParams& params) {
  // Sort usable edges by x* descending with random tie-breaks.
  std::vector<std::pair<double, Edge>> cand;
  for (size_t i = 0; i < sol.edges.size(); ++i)
    if (sol.x[i] >= params.greedy_xmin)
      cand.emplace_back(sol.x[i], sol.edges[i]);
  std::shuffle(cand.begin(), cand.end(), rng);
  std::stable_sort(cand.begin(), cand.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });

  std::vector<int> degree(inst.n, 0), comp(inst.n);
  std::iota(comp.begin(), comp.end(), 0);
  std::function<int(int)> find = [&](int v) {
    return comp[v] == v ? v : comp[v] = find(comp[v]);
  };
  std::vector<Edge> chosen;
  for (const auto& [x, e] : cand) {
    if (degree[e.u] >= 2 || degree[e.v] >= 2) continue;
    if (find(e.u) == find(e.v)) continue;  // would close a subcycle
    comp[find(e.u)] = find(e.v);
    ++degree[e.u];
    ++degree[e.v];
    chosen.push_back(e);
  }

  // Collect the paths; the depot joins as a singleton when absent.
  std::vector<std::vector<int>> adj(inst.n);
  for (const Edge& e : chosen) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<std::vector<int>> paths;
  std::vector<char> seen(inst.n, 0);
  for (int v = 0; v < inst.n; ++v) {
    if (seen[v] || (degree[v] == 0 && v != inst.depot)) continue;
    if (degree[v] > 1) continue;  // start walks at path endpoints
    std::vector<int> path = {v};
    seen[v] = 1;
    int prev = -1, cur = v;
    while (true) {
      int next = -1;
      for (int w : adj[cur])
        if (w != prev) next = w;
      if (next < 0) break;
      path.push_back(next);
      seen[next] = 1;
      prev = cur;
      cur = next;
    }
    paths.push_back(std::move(path));
  }
  if (paths.empty()) paths.push_back({inst.depot});

  // Randomly join path extremes into one cycle.
  std::shuffle(paths.begin(), paths.end(), rng);
  std::vector<int> seq;
  for (auto& path : paths) {
    if (rng() % 2) std::reverse(path.begin(), path.end());
    seq.insert(seq.end(), path.begin(), path.end());
  }
  return repair_pipeline(inst, make_tour(inst, std::move(seq)));
}

namespace {

Tour vp_sample(const Instance& inst, const LpSolution& sol,
               std::mt19937& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<int> verts = {inst.depot};
  for (int v = 0; v < inst.n; ++v)
    if (v != inst.depot && uni(rng) < sol.y[v]) verts.push_back(v);
  std::shuffle(verts.begin() + 1, verts.end(), rng);
  return repair_pipeline(inst, make_tour(inst, std::move(verts)));
}

bool tour_better(const Tour& a, const Tour& b) {
  return a.score > b.score || (a.score == b.score && a.length < b.length);
}

Tour crossover(const Instance& inst, const Tour& a, const Tour& b,
               std::mt19937& rng) {
  std::set<int> sa(a.seq.begin(), a.seq.end());
  std::set<int> sb(b.seq.begin(), b.seq.end());
  std::set<int> keep;
  std::vector<int> optional;
  for (int v : sa)
    if (sb.count(v)) keep.insert(v);
  for (int v : sa)
    if (!sb.count(v)) optional.push_back(v);
  for (int v : sb)
    if (!sa.count(v)) optional.push_back(v);
  for (int v : optional)
    if (rng() % 2) keep.insert(v);
  keep.insert(inst.depot);
  // Preserve the first parent's visiting order, then append the rest in the
  // second parent's order.
  std::vector<int> seq;
  for (int v : a.seq)
    if (keep.count(v)) seq.push_back(v);
  for (int v : b.seq)
    if (keep.count(v) && !sa.count(v)) seq.push_back(v);
  return make_tour(inst, std::move(seq));
}

void mutate(const Instance& inst, Tour& t, std::mt19937& rng) {
  if (rng() % 2 && t.seq.size() > 2) {
    size_t i = 1 + rng() % (t.seq.size() - 1);
    std::vector<int> seq = t.seq;
    seq.erase(seq.begin() + i);
    t = make_tour(inst, std::move(seq));
  } else {
    std::vector<int> missing;
    std::set<int> in(t.seq.begin(), t.seq.end());
    for (int v = 0; v < inst.n; ++v)
      if (!in.count(v)) missing.push_back(v);
    if (missing.empty()) return;
    int v = missing[rng() % missing.size()];
    std::vector<int> seq = t.seq;
    seq.insert(seq.begin() + 1 + rng() % seq.size(), v);
    t = make_tour(inst, std::move(seq));
  }
}

}  // namespace

std::vector<Tour> heur_vp_population(const Instance& inst,
                                     const LpSolution& sol, std::mt19937& rng,
                                     const HeurParams& params) {
  std::vector<Tour> pop;
  for (int i = 0; i < params.pop_size; ++i)
    pop.push_back(vp_sample(inst, sol, rng));

  for (int gen = 0; gen < params.generations; ++gen) {
    // Tournament parent selection among npar random members.
    auto pick = [&]() -> const Tour& {
      int best = int(rng() % pop.size());
      for (int k = 1; k < params.npar; ++k) {
        int cand = int(rng() % pop.size());
        if (tour_better(pop[cand], pop[best])) best = cand;
      }
      return pop[best];
    };
    Tour child = crossover(inst, pick(), pick(), rng);
    mutate(inst, child, rng);
    // Periodic full repair (drop-to-distance every d2d generations);
    // otherwise only enforce feasibility cheaply.
    if (gen % params.d2d == params.d2d - 1)
      child = repair_pipeline(inst, child);
    else if (!tour_feasible(inst, child))
      child = drop_until_feasible(inst, child);
    int worst = 0;
    for (int i = 1; i < int(pop.size()); ++i)
      if (tour_better(pop[worst], pop[i])) worst = i;
    if (tour_better(child, pop[worst])) pop[worst] = child;
  }
  std::sort(pop.begin(), pop.end(),
            [](const Tour& a, const Tour& b) { return tour_better(a, b); });
  return pop;
}

}  // namespace opbac
