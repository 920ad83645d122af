#include "opbac/mincut.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>

namespace opbac {

namespace {

constexpr double kEps = 1e-9;
constexpr double kZero = 1e-7;

struct Arc {
  int to;
  int rev;
  double cap;
};

struct FlowNetwork {
  int n;
  std::vector<std::vector<Arc>> adj;

  explicit FlowNetwork(int n_) : n(n_), adj(n_) {}

  void add_edge(int u, int v, double c) {
    adj[u].push_back({v, int(adj[v].size()), c});
    adj[v].push_back({u, int(adj[u].size()) - 1, c});
  }
};

}  // namespace

std::pair<double, VertexSet> min_cut_st(int n, const std::vector<Edge>& edges,
                                        const std::vector<double>& cap, int s,
                                        int t) {
  FlowNetwork net(n);
  for (size_t i = 0; i < edges.size(); ++i)
    if (cap[i] > kEps) net.add_edge(edges[i].u, edges[i].v, cap[i]);

  // Phase-1 push-relabel: only nodes below height n are discharged; that is
  // enough to determine the max-flow value and a minimum cut.
  std::vector<double> excess(n, 0.0);
  std::vector<int> height(n, 0);
  std::vector<int> cur(n, 0);
  std::vector<int> height_count(2 * n + 2, 0);
  std::vector<std::vector<int>> bucket(n + 1);
  std::vector<char> in_bucket(n, 0);
  int highest = 0;

  height[s] = n;
  height_count[0] = n - 1;
  height_count[n] += 1;
  for (Arc& a : net.adj[s]) {
    if (a.cap <= kEps) continue;
    double f = a.cap;
    excess[a.to] += f;
    net.adj[a.to][a.rev].cap += f;
    a.cap = 0.0;
  }
  auto activate = [&](int v) {
    if (v == s || v == t || in_bucket[v] || excess[v] <= kEps || height[v] >= n)
      return;
    in_bucket[v] = 1;
    bucket[height[v]].push_back(v);
    highest = std::max(highest, height[v]);
  };
  for (int v = 0; v < n; ++v) activate(v);

  while (highest >= 0) {
    if (bucket[highest].empty()) {
      --highest;
      continue;
    }
    int u = bucket[highest].back();
    bucket[highest].pop_back();
    in_bucket[u] = 0;
    if (excess[u] <= kEps || height[u] >= n) continue;

    while (excess[u] > kEps && height[u] < n) {
      if (cur[u] == int(net.adj[u].size())) {
        // Relabel u; apply the gap heuristic when its old level empties.
        int old = height[u];
        int nh = 2 * n + 1;
        for (const Arc& a : net.adj[u])
          if (a.cap > kEps) nh = std::min(nh, height[a.to] + 1);
        height_count[old] -= 1;
        height[u] = nh;
        height_count[nh] += 1;
        cur[u] = 0;
        if (height_count[old] == 0 && old < n) {
          for (int v = 0; v < n; ++v)
            if (v != s && v != u && height[v] > old && height[v] < n) {
              height_count[height[v]] -= 1;
              height[v] = n + 1;
              height_count[n + 1] += 1;
            }
        }
      } else {
        Arc& a = net.adj[u][cur[u]];
        if (a.cap > kEps && height[u] == height[a.to] + 1) {
          double f = std::min(excess[u], a.cap);
          a.cap -= f;
          net.adj[a.to][a.rev].cap += f;
          excess[u] -= f;
          excess[a.to] += f;
          activate(a.to);
        } else {
          ++cur[u];
        }
      }
    }
    activate(u);
  }

  double value = excess[t];
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  if (value <= kEps) {
    // Disconnected endpoints: the source side is s's component.
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (const Arc& a : net.adj[u]) {
        double orig = a.cap + net.adj[a.to][a.rev].cap;  // undirected capacity
        if (orig > kEps && !seen[a.to]) {
          seen[a.to] = 1;
          q.push(a.to);
        }
      }
    }
  } else {
    // Source side = complement of the set that reaches t in the residual
    // network (valid after phase 1 since the height function rules out any
    // residual s-t path).
    q.push(t);
    seen[t] = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (const Arc& a : net.adj[u])
        if (net.adj[a.to][a.rev].cap > kEps && !seen[a.to]) {
          seen[a.to] = 1;
          q.push(a.to);
        }
    }
    for (int v = 0; v < n; ++v) seen[v] = !seen[v];
  }
  std::vector<int> side;
  for (int v = 0; v < n; ++v)
    if (seen[v]) side.push_back(v);
  return {value, VertexSet{std::move(side)}};
}

namespace {

// Working contracted graph used by shrink and contract_pair. `ybar` is the
// shrunk-vector value the rules compare against: a rule-based contraction of
// vertices sharing the common value c keeps c (half the supernode coboundary),
// while plain merges (S3) fall back to the sum. `ysum`/`sbar` are aggregates.
struct Contractor {
  std::vector<std::vector<int>> members;
  std::vector<double> ybar;
  std::vector<double> ysum;
  std::vector<int64_t> sbar;
  std::vector<std::unordered_map<int, double>> adj;
  std::vector<char> alive;

  int contract(int a, int b, double merged_rule_y) {
    // Merge b into a; returns a.
    members[a].insert(members[a].end(), members[b].begin(), members[b].end());
    ybar[a] = merged_rule_y;
    ysum[a] += ysum[b];
    sbar[a] += sbar[b];
    for (auto [w, c] : adj[b]) {
      adj[w].erase(b);
      if (w == a) continue;
      adj[a][w] += c;
      adj[w][a] += c;
    }
    adj[a].erase(b);
    adj[b].clear();
    alive[b] = 0;
    return a;
  }

  bool apply_rules_once(bool use_c2, bool s1_only) {
    int n = int(members.size());
    for (int u = 0; u < n; ++u) {
      if (!alive[u]) continue;
      for (auto [v, c] : adj[u]) {
        if (v < u) continue;
        if (s1_only) {
          // S1: x_uv = y_u = y_v = 1
          if (std::abs(c - 1.0) < kZero && std::abs(ybar[u] - 1.0) < kZero &&
              std::abs(ybar[v] - 1.0) < kZero) {
            contract(u, v, 1.0);
            return true;
          }
        } else {
          // C1: x_uv = y_u = y_v
          if (std::abs(c - ybar[u]) < kZero && std::abs(c - ybar[v]) < kZero) {
            contract(u, v, c);
            return true;
          }
        }
      }
    }
    if (use_c2) {
      // C2: x_uv + x_vw = 2 y_v with y_u = y_v = y_w; contract {u, v, w}.
      for (int v = 0; v < n; ++v) {
        if (!alive[v]) continue;
        std::vector<std::pair<int, double>> nbrs(adj[v].begin(), adj[v].end());
        for (size_t i = 0; i < nbrs.size(); ++i)
          for (size_t j = i + 1; j < nbrs.size(); ++j) {
            auto [u, cu] = nbrs[i];
            auto [w, cw] = nbrs[j];
            if (std::abs(cu + cw - 2.0 * ybar[v]) < kZero &&
                std::abs(ybar[u] - ybar[v]) < kZero &&
                std::abs(ybar[w] - ybar[v]) < kZero) {
              int a = contract(u, v, ybar[v]);
              contract(a, w, ybar[w]);
              return true;
            }
          }
      }
    }
    return false;
  }

  void run_rules(ShrinkStrategy strategy) {
    bool s1 = strategy == ShrinkStrategy::S1 || strategy == ShrinkStrategy::S1S3;
    bool c2 = strategy == ShrinkStrategy::C1C2 || strategy == ShrinkStrategy::C1C2S3;
    if (strategy == ShrinkStrategy::None) return;
    while (apply_rules_once(c2, s1)) {
    }
  }

  ShrunkGraph compact(int depot) const {
    ShrunkGraph out;
    int n = int(members.size());
    std::vector<int> remap(n, -1);
    for (int v = 0; v < n; ++v) {
      if (!alive[v]) continue;
      remap[v] = out.size();
      out.members.push_back(members[v]);
      out.ybar.push_back(ybar[v]);
      out.ysum.push_back(ysum[v]);
      out.sbar.push_back(sbar[v]);
      if (std::find(members[v].begin(), members[v].end(), depot) !=
          members[v].end())
        out.depot_node = remap[v];
    }
    for (int u = 0; u < n; ++u) {
      if (!alive[u]) continue;
      for (auto [v, c] : adj[u]) {
        if (v < u || !alive[v]) continue;
        out.edges.emplace_back(remap[u], remap[v]);
        out.cap.push_back(c);
      }
    }
    return out;
  }
};

int find_depot(const ShrunkGraph& g) {
  for (int v = 0; v < g.size(); ++v)
    if (v == g.depot_node) return g.members[v].front();
  return 0;
}

}  // namespace

ShrunkGraph shrink(const SupportGraph& g, ShrinkStrategy strategy,
                   const std::vector<int64_t>& scores) {
  Contractor c;
  int k = int(g.verts.size());
  std::vector<int> index(g.n, -1);
  c.members.resize(k);
  c.ybar.resize(k);
  c.ysum.resize(k);
  c.sbar.resize(k);
  c.adj.resize(k);
  c.alive.assign(k, 1);
  for (int i = 0; i < k; ++i) {
    int v = g.verts[i];
    index[v] = i;
    c.members[i] = {v};
    c.ybar[i] = g.y[v];
    c.ysum[i] = g.y[v];
    c.sbar[i] = scores.empty() ? 0 : scores[v];
  }
  for (size_t e = 0; e < g.edges.size(); ++e) {
    int u = index[g.edges[e].u], v = index[g.edges[e].v];
    if (u < 0 || v < 0) continue;
    c.adj[u][v] += g.cap[e];
    c.adj[v][u] += g.cap[e];
  }
  c.run_rules(strategy);
  return c.compact(g.depot);
}

ShrunkGraph contract_pair(const ShrunkGraph& g, int a, int b,
                          ShrinkStrategy strategy) {
  Contractor c;
  int k = g.size();
  c.members = g.members;
  c.ybar = g.ybar;
  c.ysum = g.ysum;
  c.sbar = g.sbar;
  c.adj.resize(k);
  c.alive.assign(k, 1);
  for (size_t e = 0; e < g.edges.size(); ++e) {
    c.adj[g.edges[e].u][g.edges[e].v] += g.cap[e];
    c.adj[g.edges[e].v][g.edges[e].u] += g.cap[e];
  }
  c.contract(a, b, c.ybar[a] + c.ybar[b]);
  c.run_rules(strategy);
  return c.compact(find_depot(g));
}

}  // namespace opbac
