#include "opbac/cutpool.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace opbac {

namespace {

bool crosses(const VertexSet& s, const Edge& e) {
  return s.contains(e.u) != s.contains(e.v);
}

bool tooth_crosses(const Edge& tooth, const Edge& e) {
  int hits = int(e.u == tooth.u || e.u == tooth.v) +
             int(e.v == tooth.u || e.v == tooth.v);
  return hits == 1;
}

std::pair<lp::Sense, double> row_meta(const Cut& cut) {
  return std::visit(
      [](const auto& c) -> std::pair<lp::Sense, double> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, SecCut>)
          return {lp::Sense::GE, -2.0};
        else if constexpr (std::is_same_v<T, CcCut>)
          return {lp::Sense::GE, 2.0};
        else if constexpr (std::is_same_v<T, BlossomCut>)
          return {lp::Sense::GE, 1.0 - double(c.teeth.size())};
        else if constexpr (std::is_same_v<T, EdgeCoverCut>)
          return {lp::Sense::LE, double(c.f.size()) - 1.0};
        else if constexpr (std::is_same_v<T, CycleCoverCut>)
          return {lp::Sense::LE, -1.0};
        else if constexpr (std::is_same_v<T, VertexCoverCut>)
          return {lp::Sense::LE, double(c.q.size()) - 1.0};
        else if constexpr (std::is_same_v<T, PathCut>)
          return {lp::Sense::LE, 0.0};
        else
          return {lp::Sense::GE, 0.0};  // logical
      },
      cut);
}

std::vector<std::pair<int, double>> y_coefs(const Cut& cut, int depot) {
  std::vector<std::pair<int, double>> out;
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, SecCut>) {
          out = {{c.l, -2.0}, {c.r, -2.0}};
        } else if constexpr (std::is_same_v<T, BlossomCut>) {
          for (int v : c.link) out.emplace_back(v, -2.0);
          for (int v : c.root) out.emplace_back(v, -2.0);
        } else if constexpr (std::is_same_v<T, CycleCoverCut>) {
          for (int v : c.vf) out.emplace_back(v, -1.0);
        } else if constexpr (std::is_same_v<T, VertexCoverCut>) {
          for (int v : c.q) out.emplace_back(v, 1.0);
        } else if constexpr (std::is_same_v<T, PathCut>) {
          for (int v : c.seq) out.emplace_back(v, -1.0);
          out.emplace_back(c.seq.back(), 1.0);  // cancels to 0 on i_k
          out.emplace_back(depot, 1.0);
        } else if constexpr (std::is_same_v<T, LogicalCut>) {
          out = {{c.v, 1.0}};
        }
      },
      cut);
  // Merge duplicate vertices (path i_k, or depot inside V(P) never happens).
  std::map<int, double> merged;
  for (auto [v, cf] : out) merged[v] += cf;
  out.clear();
  for (auto [v, cf] : merged)
    if (cf != 0.0) out.emplace_back(v, cf);
  return out;
}

}  // namespace

double edge_coef(const Cut& cut, int /*depot*/, const Edge& e) {
  return std::visit(
      [&](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, SecCut>) {
          return crosses(c.h, e) ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, CcCut>) {
          return crosses(c.t, e) ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, BlossomCut>) {
          double coef = crosses(c.h, e) ? 1.0 : 0.0;
          for (const Edge& tooth : c.teeth)
            if (tooth_crosses(tooth, e)) coef += 1.0;
          return coef;
        } else if constexpr (std::is_same_v<T, EdgeCoverCut>) {
          return std::find(c.f.begin(), c.f.end(), e) != c.f.end() ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, CycleCoverCut>) {
          return std::find(c.f.begin(), c.f.end(), e) != c.f.end() ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, VertexCoverCut>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, PathCut>) {
          double coef = 0.0;
          for (size_t i = 0; i + 1 < c.seq.size(); ++i)
            if (Edge(c.seq[i], c.seq[i + 1]) == e) coef += 1.0;
          int ik = c.seq.back();
          if ((e.u == ik && c.w.contains(e.v)) ||
              (e.v == ik && c.w.contains(e.u)))
            coef -= 1.0;
          return coef;
        } else {  // LogicalCut
          return c.e == e ? -1.0 : 0.0;
        }
      },
      cut);
}

void validate_cut(const Cut& cut, int n, int depot, const Instance* inst) {
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, SecCut>) {
          if (c.h.size() < 3 || c.h.size() > n - 3)
            throw InvalidCut("SEC: handle size out of range");
          if (!c.h.contains(c.l) || c.h.contains(c.r))
            throw InvalidCut("SEC: l must be inside H, r outside");
        } else if constexpr (std::is_same_v<T, CcCut>) {
          if (!c.t.contains(depot)) throw InvalidCut("CC: depot not in T");
          if (c.t.size() < 2 || c.t.size() >= n)
            throw InvalidCut("CC: set size out of range");
        } else if constexpr (std::is_same_v<T, BlossomCut>) {
          size_t t = c.teeth.size();
          if (t < 3 || t % 2 == 0)
            throw InvalidCut("blossom: teeth count must be odd and >= 3");
          std::set<int> used;
          for (const Edge& tooth : c.teeth) {
            if (!used.insert(tooth.u).second || !used.insert(tooth.v).second)
              throw InvalidCut("blossom: teeth not disjoint");
            if (c.h.contains(tooth.u) == c.h.contains(tooth.v))
              throw InvalidCut("blossom: tooth does not cross the handle");
            int in = c.h.contains(tooth.u) ? tooth.u : tooth.v;
            int out = c.h.contains(tooth.u) ? tooth.v : tooth.u;
            if (!c.link.contains(in) || !c.root.contains(out))
              throw InvalidCut("blossom: link/root sets inconsistent");
          }
          if (c.link.size() + c.root.size() != 2 * int(t))
            throw InvalidCut("blossom: link/root sets inconsistent");
        } else if constexpr (std::is_same_v<T, EdgeCoverCut>) {
          if (c.f.empty()) throw InvalidCut("edge cover: empty set");
          if (inst) {
            int64_t total = 0, smallest = INT64_MAX;
            for (const Edge& e : c.f) {
              int64_t d = inst->distance(e.u, e.v);
              total += d;
              smallest = std::min(smallest, d);
            }
            if (total <= inst->d0)
              throw InvalidCut("edge cover: total length within budget");
            if (total - smallest > inst->d0)
              throw InvalidCut("edge cover: not minimal");
          }
        } else if constexpr (std::is_same_v<T, CycleCoverCut>) {
          std::map<int, int> deg;
          for (const Edge& e : c.f) {
            deg[e.u]++;
            deg[e.v]++;
            if (!c.vf.contains(e.u) || !c.vf.contains(e.v))
              throw InvalidCut("cycle cover: V(F) mismatch");
          }
          if (int(deg.size()) != c.vf.size())
            throw InvalidCut("cycle cover: V(F) mismatch");
          for (auto [v, d] : deg)
            if (d != 2) throw InvalidCut("cycle cover: F is not a cycle");
          if (c.f.size() != size_t(c.vf.size()))
            throw InvalidCut("cycle cover: F is not a single cycle");
          if (inst) {
            int64_t total = 0;
            for (const Edge& e : c.f) total += inst->distance(e.u, e.v);
            if (total <= inst->d0)
              throw InvalidCut("cycle cover: cycle within budget");
          }
        } else if constexpr (std::is_same_v<T, VertexCoverCut>) {
          if (c.q.empty()) throw InvalidCut("vertex cover: empty set");
        } else if constexpr (std::is_same_v<T, PathCut>) {
          if (c.seq.size() < 2) throw InvalidCut("path: too short");
          std::set<int> seen(c.seq.begin(), c.seq.end());
          if (seen.size() != c.seq.size()) throw InvalidCut("path: not simple");
          if (seen.count(depot)) throw InvalidCut("path: contains the depot");
          for (int v : c.w)
            if (seen.count(v)) throw InvalidCut("path: W overlaps V(P)");
        } else {  // LogicalCut
          if (c.e.u != c.v && c.e.v != c.v)
            throw InvalidCut("logical: edge not incident to vertex");
        }
      },
      cut);
}

CutRow render_row(const Cut& cut, int n, int depot,
                  const std::vector<Edge>& edges, const Instance* inst) {
  validate_cut(cut, n, depot, inst);
  CutRow row;
  auto [sense, rhs] = row_meta(cut);
  row.sense = sense;
  row.rhs = rhs;
  row.ycoefs = y_coefs(cut, depot);
  for (const Edge& e : edges) {
    double cf = edge_coef(cut, depot, e);
    if (cf != 0.0) row.xcoefs.emplace_back(e, cf);
  }
  return row;
}

double violation(const Cut& cut, int n, int depot, const LpSolution& sol) {
  (void)n;
  auto [sense, rhs] = row_meta(cut);
  double lhs = 0.0;
  for (auto [v, cf] : y_coefs(cut, depot)) lhs += cf * sol.y[v];
  for (size_t i = 0; i < sol.edges.size(); ++i) {
    if (sol.x[i] == 0.0) continue;
    double cf = edge_coef(cut, depot, sol.edges[i]);
    if (cf != 0.0) lhs += cf * sol.x[i];
  }
  if (sense == lp::Sense::GE) return std::max(0.0, rhs - lhs);
  return std::max(0.0, lhs - rhs);
}

// ---------------------------------------------------------------------------

SubsetRegistry::SubsetRegistry(int n)
    : n_(n), vertex_pi_(n, 0.0), by_vertex_(n) {}

int SubsetRegistry::intern(const VertexSet& s) {
  std::vector<uint64_t> bits((n_ + 63) / 64, 0);
  for (int v : s) bits[v / 64] |= uint64_t(1) << (v % 64);
  auto it = index_.find(bits);
  if (it != index_.end()) {
    if (refs_[it->second]++ == 0) {
      ++live_;
      for (int v : sets_[it->second]) by_vertex_[v].push_back(it->second);
    }
    return it->second;
  }
  int id = int(sets_.size());
  sets_.push_back(s);
  bits_.push_back(bits);
  refs_.push_back(1);
  pi_.push_back(0.0);
  index_.emplace(std::move(bits), id);
  for (int v : s) by_vertex_[v].push_back(id);
  ++live_;
  return id;
}

void SubsetRegistry::release(int id) {
  if (refs_[id] > 0 && --refs_[id] == 0) {
    --live_;
    vertex_lists_dirty_ = true;
  }
}

void SubsetRegistry::rebuild_vertex_lists() {
  for (auto& lst : by_vertex_) lst.clear();
  for (size_t id = 0; id < sets_.size(); ++id)
    if (refs_[id] > 0)
      for (int v : sets_[id]) by_vertex_[v].push_back(int(id));
  vertex_lists_dirty_ = false;
}

bool SubsetRegistry::member(int id, int v) const {
  return bits_[id][v / 64] >> (v % 64) & 1;
}

const VertexSet& SubsetRegistry::subset(int id) const { return sets_[id]; }

void SubsetRegistry::reset_duals() {
  if (vertex_lists_dirty_) rebuild_vertex_lists();
  std::fill(pi_.begin(), pi_.end(), 0.0);
  std::fill(vertex_pi_.begin(), vertex_pi_.end(), 0.0);
}

void SubsetRegistry::accumulate(int id, double pi) {
  pi_[id] += pi;
  for (int v : sets_[id]) vertex_pi_[v] += pi;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<int64_t> canonical_key(const Cut& cut, int n, bool sec_set_only) {
  std::vector<int64_t> key;
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, SecCut>) {
          key.push_back(0);
          VertexSet h = c.h;
          int l = c.l, r = c.r;
          if (2 * h.size() > n || (2 * h.size() == n && !h.contains(0))) {
            std::vector<int> comp;
            for (int v = 0; v < n; ++v)
              if (!h.contains(v)) comp.push_back(v);
            h = VertexSet{std::move(comp)};
            std::swap(l, r);
          }
          for (int v : h) key.push_back(v);
          if (!sec_set_only) {
            key.push_back(-1);
            key.push_back(l);
            key.push_back(r);
          }
        } else if constexpr (std::is_same_v<T, CcCut>) {
          key.push_back(1);
          for (int v : c.t) key.push_back(v);
        } else if constexpr (std::is_same_v<T, BlossomCut>) {
          key.push_back(2);
          for (int v : c.h) key.push_back(v);
          key.push_back(-1);
          std::vector<Edge> teeth = c.teeth;
          std::sort(teeth.begin(), teeth.end());
          for (const Edge& t : teeth) {
            key.push_back(t.u);
            key.push_back(t.v);
          }
        } else if constexpr (std::is_same_v<T, EdgeCoverCut> ||
                             std::is_same_v<T, CycleCoverCut>) {
          key.push_back(std::is_same_v<T, EdgeCoverCut> ? 3 : 4);
          std::vector<Edge> f = c.f;
          std::sort(f.begin(), f.end());
          for (const Edge& e : f) {
            key.push_back(e.u);
            key.push_back(e.v);
          }
        } else if constexpr (std::is_same_v<T, VertexCoverCut>) {
          key.push_back(5);
          for (int v : c.q) key.push_back(v);
        } else if constexpr (std::is_same_v<T, PathCut>) {
          key.push_back(6);
          std::vector<int> seq = c.seq;
          std::vector<int> rev(seq.rbegin(), seq.rend());
          if (rev < seq) seq = rev;
          for (int v : seq) key.push_back(v);
        } else {  // LogicalCut
          key.push_back(7);
          key.push_back(c.v);
          key.push_back(c.e.u);
          key.push_back(c.e.v);
        }
      },
      cut);
  return key;
}

// Smaller of S and its complement, used for subset interning so that the
// pricing upper bound stays as tight as possible.
VertexSet smaller_side(const VertexSet& s, int n) {
  if (s.size() * 2 <= n) return s;
  std::vector<int> comp;
  for (int v = 0; v < n; ++v)
    if (!s.contains(v)) comp.push_back(v);
  return VertexSet{std::move(comp)};
}

}  // namespace

CutPool::CutPool(int n, int depot) : n_(n), depot_(depot), registry_(n) {}

std::pair<int, bool> CutPool::register_cut(const Cut& cut) {
  validate_cut(cut, n_, depot_, nullptr);
  auto key = canonical_key(cut, n_, false);
  auto it = canon_.find(key);
  if (it != canon_.end()) return {it->second, false};

  CutPoolParams defaults;
  if (std::holds_alternative<SecCut>(cut)) {
    auto set_key = canonical_key(cut, n_, true);
    int& count = sec_count_[set_key];
    if (count >= defaults.sec_per_set) return {-1, false};
    ++count;
  }

  PoolEntry entry;
  entry.cut = cut;
  if (const auto* sec = std::get_if<SecCut>(&cut)) {
    entry.subset_ids.push_back(registry_.intern(smaller_side(sec->h, n_)));
  } else if (const auto* cc = std::get_if<CcCut>(&cut)) {
    entry.subset_ids.push_back(registry_.intern(smaller_side(cc->t, n_)));
  } else if (const auto* bl = std::get_if<BlossomCut>(&cut)) {
    entry.subset_ids.push_back(registry_.intern(smaller_side(bl->h, n_)));
    for (const Edge& tooth : bl->teeth)
      entry.subset_ids.push_back(registry_.intern(VertexSet{{tooth.u, tooth.v}}));
  }
  int handle = int(entries_.size());
  entries_.push_back(std::move(entry));
  canon_.emplace(std::move(key), handle);
  return {handle, true};
}

void CutPool::accumulate_subset_duals(const lp::LpModel& lp) {
  registry_.reset_duals();
  for (const PoolEntry& entry : entries_) {
    if (entry.row_id < 0 || entry.subset_ids.empty()) continue;
    // GE rows have nonpositive raw duals at optimality in this backend;
    // the paper's pi_S is their magnitude.
    double pi = -lp.row_dual(entry.row_id);
    if (pi == 0.0) continue;
    for (int id : entry.subset_ids) registry_.accumulate(id, pi);
  }
}

std::vector<int> CutPool::expire_aged(lp::LpModel& lp,
                                      const CutPoolParams& params) {
  std::vector<int> removed;
  for (PoolEntry& entry : entries_) {
    if (entry.row_id < 0) continue;
    auto [sense, rhs] = row_meta(entry.cut);
    double activity = lp.row_activity(entry.row_id);
    double slack = sense == lp::Sense::GE ? activity - rhs : rhs - activity;
    if (slack > params.dust)
      ++entry.age;
    else
      entry.age = 0;
    if (entry.age >= params.max_age) {
      removed.push_back(entry.row_id);
      lp.remove_rows({entry.row_id});
      entry.row_id = -1;
      entry.age = 0;
    }
  }
  return removed;
}

std::vector<int> CutPool::active_handles() const {
  std::vector<int> out;
  for (int h = 0; h < size(); ++h)
    if (entries_[h].row_id >= 0) out.push_back(h);
  return out;
}

std::vector<int> CutPool::inactive_handles() const {
  std::vector<int> out;
  for (int h = 0; h < size(); ++h)
    if (entries_[h].row_id < 0) out.push_back(h);
  return out;
}

}  // namespace opbac
