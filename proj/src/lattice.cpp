// Copyright 2026 The qdouble Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qdouble/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qdouble {

namespace {

int pmod(int a, int n) {
  int r = a % n;
  return r < 0 ? r + n : r;
}

// Geometric edge descriptor, before looking up whether it lies in the region.
struct EdgeDesc {
  EdgeDir dir;
  int x;
  int y;
};

// Edges of face (x,y) in the order bottom, right, top, left with their
// counterclockwise traversal signs.
std::array<std::pair<EdgeDesc, int>, 4> face_edges(Face f) {
  return {{{{EdgeDir::Right, f.x, f.y}, +1},
           {{EdgeDir::Up, f.x + 1, f.y}, +1},
           {{EdgeDir::Right, f.x, f.y + 1}, -1},
           {{EdgeDir::Up, f.x, f.y}, -1}}};
}

}  // namespace

std::vector<int> Ribbon::direct_edges() const {
  std::vector<int> out;
  for (const auto& t : triangles)
    if (t.kind == TriangleKind::Direct) out.push_back(t.edge);
  return out;
}

std::vector<int> Ribbon::dual_edges() const {
  std::vector<int> out;
  for (const auto& t : triangles)
    if (t.kind == TriangleKind::Dual) out.push_back(t.edge);
  return out;
}

// ---------------------------------------------------------------------------
// Region

Region::Region(RegionKind kind, int width, int height) : kind_(kind), width_(width), height_(height) {
  if (width < 2 || height < 2) throw std::invalid_argument("region dimensions must be >= 2");
  if (width > 64 || height > 64) throw std::invalid_argument("region dimensions must be <= 64");
  build();
}

Region build_region(RegionKind kind, int width, int height) { return Region(kind, width, height); }

Region Region::parse(std::string_view spec) {
  std::string s;
  for (char c : spec) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  auto colon = s.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("region spec needs 'kind:size', got '" + s + "'");
  std::string kind = s.substr(0, colon);
  std::string size = s.substr(colon + 1);
  auto to_int = [&](const std::string& t) {
    if (t.empty() || t.size() > 4 ||
        !std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw std::invalid_argument("bad region size '" + size + "'");
    return std::stoi(t);
  };
  if (kind == "lambda") {
    int L = to_int(size);
    if (L < 1) throw std::invalid_argument("lambda:L needs L >= 1");
    return Region(RegionKind::Free, 2 * L + 1, 2 * L + 1);
  }
  auto x = size.find('x');
  if (x == std::string::npos) throw std::invalid_argument("region size must be WxH, got '" + size + "'");
  int w = to_int(size.substr(0, x));
  int h = to_int(size.substr(x + 1));
  if (kind == "free") return Region(RegionKind::Free, w, h);
  if (kind == "torus") return Region(RegionKind::Torus, w, h);
  throw std::invalid_argument("unknown region kind '" + kind + "'");
}

std::string Region::name() const {
  return std::string(is_torus() ? "torus:" : "free:") + std::to_string(width_) + "x" + std::to_string(height_);
}

void Region::build() {
  const int m = width_, n = height_;
  const bool torus = is_torus();
  const int hw = torus ? m : m - 1;  // horizontal edges per row
  const int vh = torus ? n : n - 1;  // rows of vertical edges
  num_h_ = hw * n;
  edges_.clear();
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < hw; ++x)
      edges_.push_back(Edge{{x, y}, normalize(Vertex{x + 1, y}), EdgeDir::Right, static_cast<int>(edges_.size())});
  for (int y = 0; y < vh; ++y)
    for (int x = 0; x < m; ++x)
      edges_.push_back(Edge{{x, y}, normalize(Vertex{x, y + 1}), EdgeDir::Up, static_cast<int>(edges_.size())});

  stars_.clear();
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < m; ++x)
      if (auto s = star(Vertex{x, y})) stars_.push_back(*s);

  plaqs_.clear();
  const int fw = torus ? m : m - 1;
  const int fh = torus ? n : n - 1;
  for (int y = 0; y < fh; ++y)
    for (int x = 0; x < fw; ++x) plaqs_.push_back(*plaquette(Face{x, y}));
}

Vertex Region::normalize(Vertex v) const {
  if (is_torus()) return {pmod(v.x, width_), pmod(v.y, height_)};
  return v;
}

Face Region::normalize(Face f) const {
  if (is_torus()) return {pmod(f.x, width_), pmod(f.y, height_)};
  return f;
}

bool Region::contains_vertex(Vertex v) const {
  if (is_torus()) return true;
  return v.x >= 0 && v.x < width_ && v.y >= 0 && v.y < height_;
}

bool Region::contains_face(Face f) const {
  if (is_torus()) return true;
  return f.x >= 0 && f.x < width_ - 1 && f.y >= 0 && f.y < height_ - 1;
}

std::optional<int> Region::h_edge(int x, int y) const {
  if (is_torus()) return pmod(y, height_) * width_ + pmod(x, width_);
  if (x < 0 || x >= width_ - 1 || y < 0 || y >= height_) return std::nullopt;
  return y * (width_ - 1) + x;
}

std::optional<int> Region::v_edge(int x, int y) const {
  if (is_torus()) return num_h_ + pmod(y, height_) * width_ + pmod(x, width_);
  if (x < 0 || x >= width_ || y < 0 || y >= height_ - 1) return std::nullopt;
  return num_h_ + y * width_ + x;
}

std::optional<int> Region::edge_between(Vertex a, Vertex b) const {
  a = normalize(a);
  b = normalize(b);
  for (const auto& [dx, dy] : std::array<std::pair<int, int>, 4>{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}}) {
    if (normalize(Vertex{a.x + dx, a.y + dy}) != b) continue;
    if (dx == 1) return h_edge(a.x, a.y);
    if (dx == -1) return h_edge(a.x - 1, a.y);
    if (dy == 1) return v_edge(a.x, a.y);
    return v_edge(a.x, a.y - 1);
  }
  return std::nullopt;
}

std::optional<Star> Region::star(Vertex v) const {
  if (!contains_vertex(v)) return std::nullopt;
  v = normalize(v);
  auto r = h_edge(v.x, v.y);
  auto u = v_edge(v.x, v.y);
  auto l = h_edge(v.x - 1, v.y);
  auto d = v_edge(v.x, v.y - 1);
  if (!r || !u || !l || !d) return std::nullopt;
  return Star{v, {{{*r, true}, {*u, true}, {*l, false}, {*d, false}}}};
}

std::optional<Plaquette> Region::plaquette(Face f) const {
  if (!contains_face(f)) return std::nullopt;
  f = normalize(f);
  Plaquette p{f, {}};
  auto fe = face_edges(f);
  for (int k = 0; k < 4; ++k) {
    const auto& [d, s] = fe[k];
    auto e = d.dir == EdgeDir::Right ? h_edge(d.x, d.y) : v_edge(d.x, d.y);
    if (!e) return std::nullopt;
    p.edges[k] = {*e, s};
  }
  return p;
}

std::array<Face, 4> Region::faces_around(Vertex v) const {
  return {normalize(Face{v.x, v.y}), normalize(Face{v.x - 1, v.y}), normalize(Face{v.x - 1, v.y - 1}),
          normalize(Face{v.x, v.y - 1})};
}

std::vector<Site> Region::sites() const {
  std::vector<Site> out;
  for (const auto& p : plaqs_) {
    const Face f = p.f;
    for (Vertex v : {Vertex{f.x, f.y}, Vertex{f.x + 1, f.y}, Vertex{f.x + 1, f.y + 1}, Vertex{f.x, f.y + 1}})
      out.push_back(Site{normalize(v), f});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Site> Region::interior_sites() const {
  std::vector<Site> out;
  for (const auto& s : sites())
    if (is_interior_site(s)) out.push_back(s);
  return out;
}

bool Region::is_interior_site(const Site& s) const {
  return has_star(s.v) && contains_face(s.f) && adjacent_face(s);
}

std::vector<Site> Region::boundary_sites() const {
  std::vector<Site> out;
  if (is_torus()) return out;
  for (int fy = -1; fy <= height_ - 1; ++fy)
    for (int fx = -1; fx <= width_ - 1; ++fx) {
      Face f{fx, fy};
      if (contains_face(f)) continue;
      for (Vertex v : {Vertex{fx, fy}, Vertex{fx + 1, fy}, Vertex{fx + 1, fy + 1}, Vertex{fx, fy + 1}})
        if (contains_vertex(v)) out.push_back(Site{v, f});
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Region::is_boundary_site(const Site& s) const {
  if (is_torus()) return false;
  if (!contains_vertex(s.v) || contains_face(s.f) || !adjacent_face(s)) return false;
  return s.f.x >= -1 && s.f.x <= width_ - 1 && s.f.y >= -1 && s.f.y <= height_ - 1;
}

bool Region::adjacent_face(const Site& s) const {
  for (const Face& f : faces_around(s.v))
    if (f == normalize(s.f)) return true;
  return false;
}

bool Region::adjacent(const Site& a, const Site& b) const {
  return step_triangle(a, b).has_value();
}

std::optional<Triangle> Region::step_triangle(const Site& a0, const Site& b0) const {
  const Site a{normalize(a0.v), normalize(a0.f)};
  const Site b{normalize(b0.v), normalize(b0.f)};
  if (a == b) return std::nullopt;
  if (a.f == b.f && a.v != b.v) {
    // Direct step along an edge of the common face.
    for (const auto& [d, s] : face_edges(a.f)) {
      Vertex tail = normalize(Vertex{d.x, d.y});
      Vertex head = normalize(d.dir == EdgeDir::Right ? Vertex{d.x + 1, d.y} : Vertex{d.x, d.y + 1});
      int sign = 0;
      if (a.v == tail && b.v == head) sign = +1;
      else if (a.v == head && b.v == tail) sign = -1;
      if (sign == 0) continue;
      auto e = d.dir == EdgeDir::Right ? h_edge(d.x, d.y) : v_edge(d.x, d.y);
      if (!e) return std::nullopt;
      return Triangle{*e, TriangleKind::Direct, sign};
    }
    return std::nullopt;
  }
  if (a.v == b.v && a.f != b.f) {
    // Dual step: rotate around v across the edge incident to v.
    auto around = faces_around(a.v);
    int i = -1, j = -1;
    for (int k = 0; k < 4; ++k) {
      if (around[k] == a.f && i < 0) i = k;
      if (around[k] == b.f && j < 0) j = k;
    }
    if (i < 0 || j < 0) return std::nullopt;
    int lo;
    if (pmod(j - i, 4) == 1) lo = i;
    else if (pmod(i - j, 4) == 1) lo = j;
    else return std::nullopt;
    // Shared edge between around[lo] and around[lo+1]: up, left, down, right.
    const Vertex v = a.v;
    EdgeDesc d;
    switch (lo) {
      case 0: d = {EdgeDir::Up, v.x, v.y}; break;
      case 1: d = {EdgeDir::Right, v.x - 1, v.y}; break;
      case 2: d = {EdgeDir::Up, v.x, v.y - 1}; break;
      default: d = {EdgeDir::Right, v.x, v.y}; break;
    }
    auto e = d.dir == EdgeDir::Right ? h_edge(d.x, d.y) : v_edge(d.x, d.y);
    if (!e) return std::nullopt;
    // Orientation of the crossed edge as seen from the face being left.
    const Face from = a0.f;
    int sigma = 0;
    for (const auto& [fd, s] : face_edges(from)) {
      Vertex t1 = normalize(Vertex{fd.x, fd.y});
      if (fd.dir == d.dir && t1 == normalize(Vertex{d.x, d.y})) sigma = s;
    }
    if (sigma == 0) return std::nullopt;
    return Triangle{*e, TriangleKind::Dual, -sigma};
  }
  return std::nullopt;
}

Ribbon Region::rectangle_ribbon(int x0, int y0, int w, int h) const {
  if (w < 2 || h < 2) throw std::invalid_argument("rectangle ribbon needs w, h >= 2");
  // Rim vertices counterclockwise from the lower-left corner, with the face
  // inside the rectangle that borders each rim edge.
  std::vector<Vertex> rim;
  std::vector<Face> face;
  for (int x = x0; x < x0 + w - 1; ++x) rim.push_back({x, y0}), face.push_back({x, y0});
  for (int y = y0; y < y0 + h - 1; ++y) rim.push_back({x0 + w - 1, y}), face.push_back({x0 + w - 2, y});
  for (int x = x0 + w - 1; x > x0; --x) rim.push_back({x, y0 + h - 1}), face.push_back({x - 1, y0 + h - 2});
  for (int y = y0 + h - 1; y > y0; --y) rim.push_back({x0, y}), face.push_back({x0, y - 1});
  const std::size_t P = rim.size();
  std::vector<Site> sites;
  sites.push_back(Site{rim[0], face[0]});
  for (std::size_t k = 0; k < P; ++k) {
    Vertex next = rim[(k + 1) % P];
    sites.push_back(Site{next, face[k]});
    Face nf = face[(k + 1) % P];
    if (k + 1 < P && nf != face[k]) sites.push_back(Site{next, nf});
  }
  return make_ribbon(*this, sites);
}

int Region::coord_distance(Vertex a, Vertex b) const {
  int dx = std::abs(a.x - b.x), dy = std::abs(a.y - b.y);
  if (is_torus()) {
    dx = std::min(dx, width_ - dx);
    dy = std::min(dy, height_ - dy);
  }
  return dx + dy;
}

// ---------------------------------------------------------------------------
// Ribbons

bool validate_ribbon(const Region& region, const Ribbon& r, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (r.sites.size() < 2) return fail("ribbon needs at least two sites");
  if (r.triangles.size() + 1 != r.sites.size()) return fail("triangle count does not match site count");
  std::set<Site> distinct;
  for (std::size_t i = 0; i < r.sites.size(); ++i) {
    Site s{region.normalize(r.sites[i].v), region.normalize(r.sites[i].f)};
    if (!region.contains_vertex(s.v)) return fail("site vertex outside region: " + format_site(s));
    bool last_closing = (i + 1 == r.sites.size()) && r.closed();
    if (!last_closing && !distinct.insert(s).second) return fail("ribbon revisits site " + format_site(s));
  }
  if (distinct.size() < 2) return fail("ribbon needs at least two distinct sites");
  std::set<int> used;
  for (std::size_t i = 0; i + 1 < r.sites.size(); ++i) {
    auto t = region.step_triangle(r.sites[i], r.sites[i + 1]);
    if (!t) return fail("sites " + format_site(r.sites[i]) + " and " + format_site(r.sites[i + 1]) +
                        " are not adjacent inside the region");
    if (!(*t == r.triangles[i])) return fail("triangle does not match its sites");
    if (!used.insert(t->edge).second) return fail("ribbon uses edge " + std::to_string(t->edge) + " twice");
  }
  return true;
}

Ribbon make_ribbon(const Region& region, const std::vector<Site>& sites) {
  Ribbon r;
  r.sites = sites;
  for (std::size_t i = 0; i + 1 < sites.size(); ++i) {
    auto t = region.step_triangle(sites[i], sites[i + 1]);
    if (!t)
      throw std::invalid_argument("sites " + format_site(sites[i]) + " and " + format_site(sites[i + 1]) +
                                  " are not adjacent inside the region");
    r.triangles.push_back(*t);
  }
  for (auto& s : r.sites) s = Site{region.normalize(s.v), region.normalize(s.f)};
  std::string why;
  if (!validate_ribbon(region, r, &why)) throw std::invalid_argument("invalid ribbon: " + why);
  return r;
}

Ribbon boundary_ribbon(const Region& region) {
  if (region.is_torus()) throw std::invalid_argument("no boundary: torus region");
  if (region.width() < 3 || region.height() < 3)
    throw std::invalid_argument("boundary ribbon needs a region of at least 3x3");
  return region.rectangle_ribbon(0, 0, region.width(), region.height());
}

Ribbon concat(const Ribbon& r0, const Ribbon& r1) {
  if (!(r0.end() == r1.start())) throw std::invalid_argument("concat: endpoint mismatch");
  Ribbon out = r0;
  out.sites.insert(out.sites.end(), r1.sites.begin() + 1, r1.sites.end());
  out.triangles.insert(out.triangles.end(), r1.triangles.begin(), r1.triangles.end());
  return out;
}

Ribbon reverse(const Ribbon& r) {
  Ribbon out;
  out.sites.assign(r.sites.rbegin(), r.sites.rend());
  out.triangles.assign(r.triangles.rbegin(), r.triangles.rend());
  for (auto& t : out.triangles) t.sign = -t.sign;
  return out;
}

namespace {

// Neighbouring sites in a fixed order: direct steps then dual steps.
std::vector<Site> site_neighbours(const Region& region, const Site& s) {
  std::vector<Site> out;
  const Face f = s.f;
  for (Vertex v : {Vertex{f.x, f.y}, Vertex{f.x + 1, f.y}, Vertex{f.x + 1, f.y + 1}, Vertex{f.x, f.y + 1}}) {
    Site t{region.normalize(v), f};
    if (region.contains_vertex(t.v) && region.step_triangle(s, t)) out.push_back(t);
  }
  for (Face g : region.faces_around(s.v)) {
    Site t{s.v, g};
    if (region.step_triangle(s, t)) out.push_back(t);
  }
  return out;
}

// Step is "horizontal" if it moves the vertex or the face along x.
bool horizontal_step(const Triangle& t, const Region& region) {
  const bool h_edge = region.edge(t.edge).dir == EdgeDir::Right;
  return t.kind == TriangleKind::Direct ? h_edge : !h_edge;
}

std::optional<Ribbon> bfs_route(const Region& region, const Site& s0, const Site& s1, int phases,
                                bool first_horizontal) {
  using State = std::pair<Site, int>;
  std::map<State, State> parent;
  std::deque<State> queue;
  State start{s0, 0};
  parent[start] = start;
  queue.push_back(start);
  std::optional<State> goal;
  while (!queue.empty() && !goal) {
    State cur = queue.front();
    queue.pop_front();
    for (const Site& nb : site_neighbours(region, cur.first)) {
      Triangle t = *region.step_triangle(cur.first, nb);
      bool horiz = horizontal_step(t, region);
      for (int ph = cur.second; ph < phases; ++ph) {
        bool want_h = (ph == 0) == first_horizontal;
        if (phases > 1 && horiz != want_h) continue;
        State next{nb, ph};
        if (parent.count(next)) break;
        parent[next] = cur;
        if (nb == s1) {
          goal = next;
          break;
        }
        queue.push_back(next);
        break;
      }
      if (goal) break;
    }
  }
  if (!goal) return std::nullopt;
  std::vector<Site> path;
  for (State cur = *goal;; cur = parent[cur]) {
    path.push_back(cur.first);
    if (cur == start) break;
  }
  std::reverse(path.begin(), path.end());
  Ribbon r;
  r.sites = path;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) r.triangles.push_back(*region.step_triangle(path[i], path[i + 1]));
  if (!validate_ribbon(region, r)) return std::nullopt;
  return r;
}

// Depth-limited search over self-avoiding ribbons, for endpoint pairs where
// the shortest site path reuses an edge.
std::optional<Ribbon> dfs_route(const Region& region, const Site& s0, const Site& s1) {
  std::vector<Site> path{s0};
  std::vector<Triangle> tris;
  std::set<Site> on_path{s0};
  std::set<int> used;
  long budget = 2000000;
  std::function<bool(int)> go = [&](int depth) -> bool {
    if (path.back() == s1) return true;
    if (depth == 0 || --budget < 0) return false;
    for (const Site& nb : site_neighbours(region, path.back())) {
      if (on_path.count(nb)) continue;
      Triangle t = *region.step_triangle(path.back(), nb);
      if (used.count(t.edge)) continue;
      path.push_back(nb);
      tris.push_back(t);
      on_path.insert(nb);
      used.insert(t.edge);
      if (go(depth - 1)) return true;
      path.pop_back();
      tris.pop_back();
      on_path.erase(nb);
      used.erase(t.edge);
    }
    return false;
  };
  const int max_depth = 4 * (region.width() + region.height()) + 8;
  for (int depth = 1; depth <= max_depth && budget > 0; ++depth) {
    if (go(depth)) {
      Ribbon r{path, tris};
      if (validate_ribbon(region, r)) return r;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

Ribbon ribbon_between(const Region& region, const Site& a, const Site& b, Routing routing) {
  const Site s0{region.normalize(a.v), region.normalize(a.f)};
  const Site s1{region.normalize(b.v), region.normalize(b.f)};
  if (s0 == s1) throw std::invalid_argument("ribbon_between: identical sites");
  const bool hfirst = routing == Routing::HorizontalFirst;
  if (auto r = bfs_route(region, s0, s1, 2, hfirst)) return *r;
  if (auto r = bfs_route(region, s0, s1, 2, !hfirst)) return *r;
  if (auto r = bfs_route(region, s0, s1, 1, true)) return *r;
  if (auto r = dfs_route(region, s0, s1)) return *r;
  throw std::invalid_argument("no valid ribbon between " + format_site(s0) + " and " + format_site(s1));
}

Ribbon ribbon_to_boundary(const Region& region, const Site& s) {
  if (region.is_torus()) throw std::invalid_argument("no boundary: torus region");
  if (!region.is_interior_site(s)) throw std::invalid_argument("site " + format_site(s) + " is not interior");
  // Breadth-first distances over the site graph.
  std::map<Site, int> dist;
  std::deque<Site> queue{s};
  dist[s] = 0;
  while (!queue.empty()) {
    Site cur = queue.front();
    queue.pop_front();
    if (region.is_boundary_site(cur)) continue;
    for (const Site& nb : site_neighbours(region, cur)) {
      if (dist.count(nb)) continue;
      dist[nb] = dist[cur] + 1;
      queue.push_back(nb);
    }
  }
  std::optional<Site> best;
  auto key = [&](const Site& t) {
    return std::make_tuple(dist[t], -t.v.x, -t.v.y, -t.f.x, -t.f.y);
  };
  for (const Site& t : region.boundary_sites()) {
    if (!dist.count(t)) continue;
    if (!best || key(t) < key(*best)) best = t;
  }
  if (!best) throw std::invalid_argument("no boundary site reachable from " + format_site(s));
  return ribbon_between(region, s, *best, Routing::HorizontalFirst);
}

std::string format_site(const Site& s) {
  std::ostringstream os;
  os << "((" << s.v.x << "," << s.v.y << "),(" << s.f.x << "," << s.f.y << "))";
  return os.str();
}

}  // namespace qdouble
