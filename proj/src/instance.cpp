#include "opbac/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace opbac {

VertexSet::VertexSet(std::vector<int> verts) : verts_(std::move(verts)) {
  std::sort(verts_.begin(), verts_.end());
  verts_.erase(std::unique(verts_.begin(), verts_.end()), verts_.end());
}

bool VertexSet::contains(int v) const {
  return std::binary_search(verts_.begin(), verts_.end(), v);
}

void VertexSet::insert(int v) {
  auto it = std::lower_bound(verts_.begin(), verts_.end(), v);
  if (it == verts_.end() || *it != v) verts_.insert(it, v);
}

void VertexSet::erase(int v) {
  auto it = std::lower_bound(verts_.begin(), verts_.end(), v);
  if (it != verts_.end() && *it == v) verts_.erase(it);
}

namespace {

int64_t nint(double x) { return int64_t(std::llround(x)); }

double geo_radians(double coord) {
  constexpr double kPi = 3.141592;
  double deg = std::trunc(coord);
  double min = coord - deg;
  return kPi * (deg + 5.0 * min / 3.0) / 180.0;
}

int64_t geo_distance(std::pair<double, double> a, std::pair<double, double> b) {
  constexpr double kRadius = 6378.388;
  double lat_i = geo_radians(a.first), lon_i = geo_radians(a.second);
  double lat_j = geo_radians(b.first), lon_j = geo_radians(b.second);
  double q1 = std::cos(lon_i - lon_j);
  double q2 = std::cos(lat_i - lat_j);
  double q3 = std::cos(lat_i + lat_j);
  return int64_t(kRadius * std::acos(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)) + 1.0);
}

}  // namespace

int64_t Instance::distance(int u, int v) const {
  if (u == v) return 0;
  if (metric == Metric::EXPLICIT) return matrix[size_t(u) * n + v];
  double dx = coords[u].first - coords[v].first;
  double dy = coords[u].second - coords[v].second;
  switch (metric) {
    case Metric::EUC_2D:
      return nint(std::sqrt(dx * dx + dy * dy));
    case Metric::CEIL_2D:
      return int64_t(std::ceil(std::sqrt(dx * dx + dy * dy)));
    case Metric::ATT: {
      double r = std::sqrt((dx * dx + dy * dy) / 10.0);
      int64_t t = nint(r);
      return t < r ? t + 1 : t;
    }
    case Metric::GEO:
      return geo_distance(coords[u], coords[v]);
    default:
      return 0;
  }
}

int64_t Instance::score_total() const {
  return std::accumulate(scores.begin(), scores.end(), int64_t{0});
}

std::vector<int> Instance::nearest(int v, int k) const {
  std::vector<int> others;
  others.reserve(n - 1);
  for (int u = 0; u < n; ++u)
    if (u != v) others.push_back(u);
  k = std::min<int>(k, int(others.size()));
  std::partial_sort(others.begin(), others.begin() + k, others.end(),
                    [&](int a, int b) {
                      int64_t da = distance(v, a), db = distance(v, b);
                      return da != db ? da < db : a < b;
                    });
  others.resize(k);
  return others;
}

namespace {

struct Tokenizer {
  std::istringstream in;
  explicit Tokenizer(const std::string& text) : in(text) {}

  bool next(std::string& tok) { return bool(in >> tok); }
  double next_number(const char* what) {
    double x;
    if (!(in >> x)) throw ParseError(std::string("expected number in ") + what);
    return x;
  }
};

Metric parse_metric(const std::string& s) {
  if (s == "EUC_2D") return Metric::EUC_2D;
  if (s == "CEIL_2D") return Metric::CEIL_2D;
  if (s == "ATT") return Metric::ATT;
  if (s == "GEO") return Metric::GEO;
  if (s == "EXPLICIT") return Metric::EXPLICIT;
  throw UnsupportedMetric("unsupported EDGE_WEIGHT_TYPE: " + s);
}

}  // namespace

Instance parse_instance(const std::string& content) {
  Instance inst;
  std::string format;
  bool have_dim = false, have_limit = false, have_metric = false;
  bool have_coords = false, have_weights = false, have_scores = false;

  std::istringstream lines(content);
  std::string line;
  std::vector<std::string> body;
  // Split "KEY : value" headers from section bodies first.
  std::vector<std::pair<std::string, std::string>> sections;
  std::string current_section;
  std::string current_body;
  auto flush = [&] {
    if (!current_section.empty()) sections.emplace_back(current_section, current_body);
    current_section.clear();
    current_body.clear();
  };
  while (std::getline(lines, line)) {
    std::string trimmed = line;
    auto first = trimmed.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    trimmed = trimmed.substr(first, trimmed.find_last_not_of(" \t\r") - first + 1);
    if (trimmed == "EOF") break;
    auto colon = trimmed.find(':');
    bool header = colon != std::string::npos &&
                  trimmed.find_first_of("0123456789.-") > trimmed.find_first_not_of(" \t");
    if (header && current_section.empty()) {
      std::string key = trimmed.substr(0, colon);
      std::string value = trimmed.substr(colon + 1);
      auto strip = [](std::string s) {
        auto b = s.find_first_not_of(" \t");
        if (b == std::string::npos) return std::string();
        return s.substr(b, s.find_last_not_of(" \t") - b + 1);
      };
      key = strip(key);
      value = strip(value);
      if (key == "NAME") inst.name = value;
      else if (key == "DIMENSION") { inst.n = std::stoi(value); have_dim = true; }
      else if (key == "COST_LIMIT") { inst.d0 = int64_t(std::llround(std::stod(value))); have_limit = true; }
      else if (key == "EDGE_WEIGHT_TYPE") { inst.metric = parse_metric(value); have_metric = true; }
      else if (key == "EDGE_WEIGHT_FORMAT") format = value;
      continue;
    }
    if (trimmed.find("SECTION") != std::string::npos && trimmed.find(' ') == std::string::npos) {
      flush();
      current_section = trimmed;
      continue;
    }
    if (!current_section.empty()) {
      current_body += trimmed;
      current_body += '\n';
    }
  }
  flush();

  if (!have_dim) throw ParseError("missing section: DIMENSION");
  if (!have_metric) throw ParseError("missing section: EDGE_WEIGHT_TYPE");
  if (!have_limit) throw ParseError("missing section: COST_LIMIT");
  if (inst.n < 3) throw ParseError("DIMENSION must be at least 3");
  if (inst.d0 <= 0) throw ParseError("COST_LIMIT must be positive");

  for (auto& [name, text] : sections) {
    Tokenizer tok(text);
    if (name == "NODE_COORD_SECTION") {
      inst.coords.assign(inst.n, {0.0, 0.0});
      for (int i = 0; i < inst.n; ++i) {
        double id = tok.next_number("NODE_COORD_SECTION");
        double x = tok.next_number("NODE_COORD_SECTION");
        double y = tok.next_number("NODE_COORD_SECTION");
        int v = int(id) - 1;
        if (v < 0 || v >= inst.n) throw ParseError("bad node id in NODE_COORD_SECTION");
        inst.coords[v] = {x, y};
      }
      have_coords = true;
    } else if (name == "EDGE_WEIGHT_SECTION") {
      std::vector<int64_t> vals;
      std::string t;
      while (tok.next(t)) vals.push_back(int64_t(std::llround(std::stod(t))));
      int n = inst.n;
      inst.matrix.assign(size_t(n) * n, 0);
      auto at = [&](int i, int j) -> int64_t& { return inst.matrix[size_t(i) * n + j]; };
      size_t k = 0;
      auto take = [&]() -> int64_t {
        if (k >= vals.size()) throw ParseError("EDGE_WEIGHT_SECTION too short");
        return vals[k++];
      };
      if (format == "FULL_MATRIX") {
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) at(i, j) = take();
      } else if (format == "UPPER_ROW") {
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j) at(i, j) = at(j, i) = take();
      } else if (format == "LOWER_DIAG_ROW") {
        for (int i = 0; i < n; ++i)
          for (int j = 0; j <= i; ++j) at(i, j) = at(j, i) = take();
      } else {
        throw UnsupportedMetric("unsupported EDGE_WEIGHT_FORMAT: " + format);
      }
      have_weights = true;
    } else if (name == "NODE_SCORE_SECTION") {
      inst.scores.assign(inst.n, 0);
      for (int i = 0; i < inst.n; ++i) {
        double id = tok.next_number("NODE_SCORE_SECTION");
        double s = tok.next_number("NODE_SCORE_SECTION");
        int v = int(id) - 1;
        if (v < 0 || v >= inst.n) throw ParseError("bad node id in NODE_SCORE_SECTION");
        if (s < 0) throw ParseError("negative score in NODE_SCORE_SECTION");
        inst.scores[v] = int64_t(std::llround(s));
      }
      have_scores = true;
    }
    // DEPOT_SECTION and DISPLAY_DATA_SECTION are ignored: the depot is node 1.
  }

  if (inst.metric == Metric::EXPLICIT) {
    if (!have_weights) throw ParseError("missing section: EDGE_WEIGHT_SECTION");
  } else if (!have_coords) {
    throw ParseError("missing section: NODE_COORD_SECTION");
  }
  if (!have_scores) throw ParseError("missing section: NODE_SCORE_SECTION");
  inst.depot = 0;
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::vector<Edge> star_set(const VertexSet& s, const std::vector<Edge>& edges, int n) {
  if (s.empty()) throw DegenerateSet("star_set: empty set");
  if (s.size() == n) throw DegenerateSet("star_set: set equals V");
  std::vector<Edge> out;
  for (const Edge& e : edges)
    if (s.contains(e.u) != s.contains(e.v)) out.push_back(e);
  return out;
}

}  // namespace opbac
