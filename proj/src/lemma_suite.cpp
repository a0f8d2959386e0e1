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

#include "qdouble/lemma_suite.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"

#include "qdouble/linear_op.hpp"
#include "qdouble/operators.hpp"
#include "qdouble/spectral.hpp"
#include "qdouble/states.hpp"

namespace qdouble {

void enforce_dim_cap(const Group& group, const Region& region, double log2_cap) {
  const double bits = region.num_edges() * std::log2(static_cast<double>(group.size()));
  if (bits > log2_cap + 1e-9) {
    std::ostringstream os;
    os << "dimension " << group.name() << "^" << region.num_edges() << " = 2^" << bits << " exceeds the cap 2^"
       << log2_cap;
    throw DimensionCapError(os.str());
  }
}

namespace {

constexpr double kCountTol = 0.5;  // integer comparisons: residual is |difference|

// Skip with a reason.
struct Skip {
  std::string reason;
};

struct Outcome {
  double residual = 0.0;
  std::string note;
};

Ribbon sub_ribbon(const Ribbon& r, std::size_t a, std::size_t b) {
  Ribbon out;
  out.sites.assign(r.sites.begin() + a, r.sites.begin() + b + 1);
  out.triangles.assign(r.triangles.begin() + a, r.triangles.begin() + b);
  return out;
}

std::optional<Ribbon> try_between(const Region& R, const Site& a, const Site& b,
                                  Routing routing = Routing::HorizontalFirst) {
  try {
    return ribbon_between(R, a, b, routing);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

// Net displacement of the direct path and of the dual path. Two ribbons
// with equal endpoints and equal displacements differ by a contractible loop.
std::array<int, 4> displacement(const Region& R, const Ribbon& r) {
  std::array<int, 4> d{0, 0, 0, 0};
  for (std::size_t i = 0; i < r.triangles.size(); ++i) {
    const Triangle& t = r.triangles[i];
    const Edge& e = R.edge(t.edge);
    const int axis = e.dir == EdgeDir::Right ? 0 : 1;
    if (t.kind == TriangleKind::Direct) {
      d[axis] += r.sites[i].v == e.tail ? 1 : -1;
    } else {
      const Face low = e.dir == EdgeDir::Right ? Face{e.tail.x, e.tail.y - 1} : Face{e.tail.x - 1, e.tail.y};
      d[3 - axis] += r.sites[i].f == R.normalize(low) ? 1 : -1;
    }
  }
  return d;
}

// x and y share their end sites and nothing else, apart from the edges of
// the triangles at the two junctions.
bool disjoint_detour(const Ribbon& x, const Ribbon& y) {
  std::set<Site> xs(x.sites.begin() + 1, x.sites.end() - 1);
  for (std::size_t i = 1; i + 1 < y.sites.size(); ++i)
    if (xs.count(y.sites[i])) return false;
  auto inner_edges = [](const Ribbon& r) {
    std::set<int> e;
    for (std::size_t i = 1; i + 1 < r.triangles.size(); ++i) e.insert(r.triangles[i].edge);
    return e;
  };
  const std::set<int> ex = inner_edges(x), ey = inner_edges(y);
  for (const Ribbon* r : {&x, &y})
    for (std::size_t i = 0; i < r->triangles.size(); ++i)
      if ((r == &x ? ey : ex).count(r->triangles[i].edge)) return false;
  return true;
}

// Up to `count` ribbons from a to b, distinct from `base` and differing from
// it by a contractible detour. With `framed` the detour must close up into a
// ribbon, so both carry the same framing.
std::vector<Ribbon> find_alternatives(const Region& R, const Ribbon& base, std::size_t count, bool framed) {
  const Site a = base.start(), b = base.end();
  const auto disp = displacement(R, base);
  std::vector<Ribbon> out;
  auto offer = [&](const Ribbon& r) {
    if (out.size() >= count || r == base || !validate_ribbon(R, r) || displacement(R, r) != disp) return;
    std::size_t p = 0, q = 0;
    const std::size_t nb = base.triangles.size(), nr = r.triangles.size();
    while (p < std::min(nb, nr) && base.sites[p + 1] == r.sites[p + 1]) ++p;
    while (q < std::min(nb, nr) - p && base.sites[nb - q - 1] == r.sites[nr - q - 1]) ++q;
    if (p + q >= nb || p + q >= nr) return;
    const Ribbon x = sub_ribbon(base, p, nb - q), y = sub_ribbon(r, p, nr - q);
    if (framed ? !validate_ribbon(R, concat(x, reverse(y))) : !disjoint_detour(x, y)) return;
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  };
  for (Routing rt : {Routing::HorizontalFirst, Routing::VerticalFirst})
    if (auto r = try_between(R, a, b, rt)) offer(*r);
  // bounded depth-first search over site paths
  const std::size_t max_len = base.triangles.size() + 6;
  std::size_t budget = 200000;
  std::vector<Site> path{a};
  std::set<Site> seen{a};
  std::set<int> used;
  std::vector<Triangle> tris;
  std::function<void()> dfs = [&] {
    if (out.size() >= count || budget == 0) return;
    --budget;
    const Site cur = path.back();
    if (cur == b && path.size() > 1) {
      offer(Ribbon{path, tris});
      return;
    }
    if (tris.size() >= max_len) return;
    std::vector<Site> next;
    for (const Face& f : R.faces_around(cur.v)) next.push_back(Site{cur.v, R.normalize(f)});
    const Face f = cur.f;
    for (Vertex v : {Vertex{f.x, f.y}, Vertex{f.x + 1, f.y}, Vertex{f.x + 1, f.y + 1}, Vertex{f.x, f.y + 1}})
      if (R.is_torus() || R.contains_vertex(v)) next.push_back(Site{R.normalize(v), cur.f});
    for (const Site& n : next) {
      if (seen.count(n)) continue;
      const auto t = R.step_triangle(cur, n);
      if (!t || used.count(t->edge)) continue;
      path.push_back(n);
      seen.insert(n);
      used.insert(t->edge);
      tris.push_back(*t);
      dfs();
      tris.pop_back();
      used.erase(t->edge);
      seen.erase(n);
      path.pop_back();
    }
  };
  dfs();
  return out;
}

class Context {
 public:
  Context(const Group& g, const Region& r, std::uint64_t seed) : model(g, r), seed(seed) {
    const Region& R = model.region();
    if (R.stars().empty()) throw std::invalid_argument("region has no star");
    const Vertex v0 = R.stars().front().v;
    s0 = Site{v0, R.normalize(Face{v0.x, v0.y})};
    std::optional<Site> pick;
    for (const auto& st : R.stars()) {
      Site s{st.v, R.normalize(Face{st.v.x, st.v.y})};
      if (st.v != v0 && s.f != s0.f) {
        pick = s;
        break;
      }
    }
    if (!pick)
      for (const auto& s : R.sites())
        if (s.v != s0.v && s.f != s0.f) {
          pick = s;
          break;
        }
    if (!pick) throw std::invalid_argument("region too small for an open ribbon");
    s1 = *pick;
    open = ribbon_between(R, s0, s1);
  }

  Model model;
  std::uint64_t seed;
  Site s0, s1;
  Ribbon open;

  const Region& region() const { return model.region(); }
  const Group& group() const { return model.group(); }
  int q() const { return model.q(); }
  bool free() const { return !region().is_torus(); }

  double dist(const LinearOp& a, const LinearOp& b) const { return op_distance(a, b, seed).residual; }

  const GroundBasis& ground() {
    if (!ground_) ground_ = ground_space(model.hamiltonian(Boundary::None), SpectralMethod::ProjectorRank);
    return *ground_;
  }
  // At most `cap` ground vectors, evenly strided.
  std::vector<SparseState> ground_subset(std::size_t cap = 256) {
    const auto& all = ground().vectors;
    if (all.size() <= cap) return all;
    std::vector<SparseState> out;
    const std::size_t stride = (all.size() + cap - 1) / cap;
    for (std::size_t i = 0; i < all.size(); i += stride) out.push_back(all[i]);
    return out;
  }
  const GroundBasis& ker_eps_mu() {
    if (!ker_) ker_ = ground_space(model.hamiltonian(Boundary::EpsMu), SpectralMethod::Auto);
    return *ker_;
  }
  GroundBasis ground_subset_basis(std::size_t cap = 256) {
    GroundBasis b;
    b.vectors = ground_subset(cap);
    return b;
  }

 private:
  std::optional<GroundBasis> ground_;
  std::optional<GroundBasis> ker_;
};

using CheckFn = std::function<Outcome(Context&)>;

struct CheckDef {
  CheckInfo info;
  CheckFn fn;
};

double vec_dist(const SparseState& a, const SparseState& b) { return (a - b).norm(); }

// ---------------------------------------------------------------- relations

Outcome rel_star_mult(Context& c) {
  double r = 0.0;
  const Group& G = c.group();
  for (const auto& st : c.region().stars())
    for (int g = 0; g < c.q(); ++g)
      for (int h = 0; h < c.q(); ++h)
        r = std::max(r, c.dist(c.model.star_op(st.v, g) * c.model.star_op(st.v, h),
                               c.model.star_op(st.v, G.add(g, h))));
  return {r, ""};
}

Outcome rel_star_adjoint(Context& c) {
  double r = 0.0;
  for (const auto& st : c.region().stars())
    for (int g = 0; g < c.q(); ++g)
      r = std::max(r, c.dist(c.model.star_op(st.v, c.group().neg(g)).adjoint(), c.model.star_op(st.v, g)));
  return {r, ""};
}

Outcome rel_plaq_orth(Context& c) {
  double r = 0.0;
  for (const auto& p : c.region().plaquettes())
    for (int h = 0; h < c.q(); ++h) {
      const LinearOp bh = c.model.plaquette_op(p.f, h);
      r = std::max(r, c.dist(bh.adjoint(), bh));
      for (int k = 0; k < c.q(); ++k)
        r = std::max(r, c.dist(bh * c.model.plaquette_op(p.f, k), h == k ? bh : LinearOp::zero(c.model.space())));
    }
  return {r, ""};
}

Outcome rel_star_plaq(Context& c) {
  double r = 0.0;
  for (const auto& st : c.region().stars())
    for (const Face& f : c.region().faces_around(st.v)) {
      if (!c.region().contains_face(f)) continue;
      for (int g = 0; g < c.q(); ++g)
        for (int h = 0; h < c.q(); ++h) {
          const LinearOp a = c.model.star_op(st.v, g), b = c.model.plaquette_op(f, h);
          r = std::max(r, c.dist(a * b, b * a));
        }
    }
  return {r, ""};
}

Outcome rel_commute_other(Context& c) {
  double r = 0.0;
  const auto& stars = c.region().stars();
  const auto& plaqs = c.region().plaquettes();
  for (std::size_t i = 0; i < stars.size(); ++i)
    for (std::size_t j = i + 1; j < stars.size(); ++j)
      for (int g = 1; g < c.q(); ++g)
        for (int h = 1; h < c.q(); ++h) {
          const LinearOp a = c.model.star_op(stars[i].v, g), b = c.model.star_op(stars[j].v, h);
          r = std::max(r, c.dist(a * b, b * a));
        }
  for (std::size_t i = 0; i < plaqs.size(); ++i)
    for (std::size_t j = i + 1; j < plaqs.size(); ++j)
      for (int g = 0; g < c.q(); ++g)
        for (int h = 0; h < c.q(); ++h) {
          const LinearOp a = c.model.plaquette_op(plaqs[i].f, g), b = c.model.plaquette_op(plaqs[j].f, h);
          r = std::max(r, c.dist(a * b, b * a));
        }
  for (const auto& st : stars)
    for (const auto& p : plaqs) {
      const auto around = c.region().faces_around(st.v);
      if (std::find(around.begin(), around.end(), p.f) != around.end()) continue;
      for (int g = 1; g < c.q(); ++g)
        for (int h = 0; h < c.q(); ++h) {
          const LinearOp a = c.model.star_op(st.v, g), b = c.model.plaquette_op(p.f, h);
          r = std::max(r, c.dist(a * b, b * a));
        }
    }
  return {r, ""};
}

Outcome rel_projectors(Context& c) {
  double r = 0.0;
  auto proj = [&](const LinearOp& p) {
    r = std::max(r, c.dist(p * p, p));
    r = std::max(r, c.dist(p.adjoint(), p));
  };
  for (const auto& st : c.region().stars()) proj(c.model.star_proj(st.v));
  for (const auto& p : c.region().plaquettes()) proj(c.model.plaquette_proj(p.f));
  return {r, ""};
}

// ---------------------------------------------------------- ribbon (a)-(h)

Outcome eq_ribprop1(Context& c) {
  double r = 0.0;
  const Group& G = c.group();
  for (int chi = 0; chi < c.q(); ++chi)
    for (int cc = 0; cc < c.q(); ++cc) {
      const LinearOp f = c.model.ribbon_op_char(c.open, chi, cc);
      r = std::max(r, c.dist(f.adjoint(), c.model.ribbon_op_char(c.open, G.neg(chi), G.neg(cc))));
      for (int xi = 0; xi < c.q(); ++xi)
        for (int d = 0; d < c.q(); ++d)
          r = std::max(r, c.dist(f * c.model.ribbon_op_char(c.open, xi, d),
                                 c.model.ribbon_op_char(c.open, G.add(chi, xi), G.add(cc, d))));
    }
  return {r, ""};
}

Outcome eq_ribstarrel(Context& c) {
  const Region& R = c.region();
  const Group& G = c.group();
  const Site a = c.open.start(), b = c.open.end();
  double r = 0.0;
  for (int chi = 0; chi < c.q(); ++chi)
    for (int cc = 0; cc < c.q(); ++cc) {
      const LinearOp f = c.model.ribbon_op_char(c.open, chi, cc);
      for (int k = 0; k < c.q(); ++k) {
        const cplx ck = G.chi(chi, k);
        for (const auto& st : R.stars()) {
          const LinearOp A = c.model.star_op(st.v, k);
          cplx s{1.0, 0.0};
          if (st.v == a.v) s = ck;
          else if (st.v == b.v) s = std::conj(ck);
          r = std::max(r, c.dist(A * f, s * (f * A)));
        }
        for (const auto& p : R.plaquettes()) {
          Elem m = k;
          if (p.f == a.f) m = G.add(k, G.neg(cc));
          else if (p.f == b.f) m = G.add(cc, k);
          r = std::max(r, c.dist(c.model.plaquette_op(p.f, k) * f, f * c.model.plaquette_op(p.f, m)));
        }
      }
    }
  return {r, ""};
}

Outcome eq_ribHamrel(Context& c) {
  const Region& R = c.region();
  const Group& G = c.group();
  const Site a = c.open.start(), b = c.open.end();
  const Hamiltonian H = c.model.hamiltonian(Boundary::None);
  const cplx inv_q = 1.0 / static_cast<double>(c.q());
  double r = 0.0;
  for (int chi = 0; chi < c.q(); ++chi)
    for (int cc = 0; cc < c.q(); ++cc) {
      const LinearOp f = c.model.ribbon_op_char(c.open, chi, cc);
      LinearOp rhs = LinearOp::zero(c.model.space());
      if (R.contains_face(a.f))
        rhs += c.model.plaquette_proj(a.f) - c.model.plaquette_op(a.f, G.neg(cc));
      if (R.contains_face(b.f)) rhs += c.model.plaquette_proj(b.f) - c.model.plaquette_op(b.f, cc);
      for (int k = 0; k < c.q(); ++k) {
        const cplx ck = G.chi(chi, k);
        if (R.has_star(a.v)) rhs += (inv_q * (1.0 - ck)) * c.model.star_op(a.v, k);
        if (R.has_star(b.v)) rhs += (inv_q * (1.0 - std::conj(ck))) * c.model.star_op(b.v, k);
      }
      r = std::max(r, c.dist(finite_commutator(H, f), f * rhs));
    }
  return {r, "star sum carries the 1/|G| of A_v"};
}

std::vector<Ribbon> closed_loops(const Region& R) {
  std::vector<Ribbon> loops;
  auto add = [&](const std::function<Ribbon()>& make) {
    try {
      Ribbon l = make();
      if (std::find(loops.begin(), loops.end(), l) == loops.end()) loops.push_back(l);
    } catch (const std::exception&) {
    }
  };
  if (!R.is_torus()) add([&] { return boundary_ribbon(R); });
  add([&] { return R.rectangle_ribbon(0, 0, std::min(3, R.width()), std::min(3, R.height())); });
  if (R.width() >= 4 && R.height() >= 4) add([&] { return R.rectangle_ribbon(1, 1, 3, 3); });
  return loops;
}

Outcome eq_closedribbon(Context& c) {
  const auto loops = closed_loops(c.region());
  if (loops.empty()) throw Skip{"no closed ribbon fits"};
  const auto ground = c.ground_subset(64);
  double r = 0.0;
  for (const auto& l : loops)
    for (int chi = 0; chi < c.q(); ++chi)
      for (int cc = 0; cc < c.q(); ++cc) {
        const LinearOp f = c.model.ribbon_op_char(l, chi, cc);
        const CompiledOp fc(f);
        for (const auto& w : ground) r = std::max(r, vec_dist(fc.apply(w), w));
        for (const auto& st : c.region().stars())
          for (int g = 1; g < c.q(); ++g) {
            const LinearOp A = c.model.star_op(st.v, g);
            r = std::max(r, c.dist(f * A, A * f));
          }
        for (const auto& p : c.region().plaquettes())
          for (int h = 0; h < c.q(); ++h) {
            const LinearOp B = c.model.plaquette_op(p.f, h);
            r = std::max(r, c.dist(f * B, B * f));
          }
      }
  return {r, std::to_string(loops.size()) + " loops"};
}

Outcome eq_ribbonconcatenation(Context& c) {
  const Ribbon& rho = c.open;
  if (rho.triangles.size() < 2) throw Skip{"ribbon too short to split"};
  const Group& G = c.group();
  double r = 0.0;
  for (std::size_t k = 1; k < rho.triangles.size(); ++k) {
    const Ribbon r0 = sub_ribbon(rho, 0, k), r1 = sub_ribbon(rho, k, rho.triangles.size());
    for (int chi = 0; chi < c.q(); ++chi)
      for (int cc = 0; cc < c.q(); ++cc)
        r = std::max(r, c.dist(c.model.ribbon_op_char(rho, chi, cc),
                               c.model.ribbon_op_char(r0, chi, cc) * c.model.ribbon_op_char(r1, chi, cc)));
    // group-element basis: F^{h,g} = sum_k F_0^{h,k} F_1^{h,g-k}
    for (int h = 0; h < c.q(); ++h)
      for (int g = 0; g < c.q(); ++g) {
        LinearOp sum = LinearOp::zero(c.model.space());
        for (int m = 0; m < c.q(); ++m)
          sum += c.model.ribbon_op(r0, h, m) * c.model.ribbon_op(r1, h, G.add(g, G.neg(m)));
        r = std::max(r, c.dist(c.model.ribbon_op(rho, h, g), sum));
      }
  }
  return {r, ""};
}

// Single-triangle ribbons: one dual triangle crossing every edge and one
// direct triangle along the first edge of every star.
Outcome eq_qdgsspan(Context& c) {
  const Region& R = c.region();
  const Model& m = c.model;
  const Index dim = m.space()->dim();
  if (dim > (Index(1) << 14)) throw Skip{"dimension above 2^14"};
  const Group& G = c.group();
  const int E = R.num_edges();

  auto single = [&](int e, TriangleKind kind) -> std::optional<Ribbon> {
    const Edge& ed = R.edge(e);
    for (Vertex v : {ed.tail, ed.head}) {
      const auto faces = R.faces_around(v);
      for (int i = 0; i < 4; ++i) {
        std::vector<std::pair<Site, Site>> steps;
        if (kind == TriangleKind::Dual) steps.push_back({Site{v, faces[i]}, Site{v, faces[(i + 1) % 4]}});
        else steps.push_back({Site{ed.tail, faces[i]}, Site{ed.head, faces[i]}});
        for (const auto& [a, b] : steps) {
          try {
            Ribbon rb = make_ribbon(R, {a, b});
            if (rb.triangles.size() == 1 && rb.triangles[0].edge == e && rb.triangles[0].kind == kind) return rb;
          } catch (const std::exception&) {
          }
        }
      }
    }
    return std::nullopt;
  };

  std::vector<std::vector<LinearOp>> shifts(E);  // shifts[e][a] = F^{iota,a} on the dual triangle of e
  for (int e = 0; e < E; ++e) {
    auto rb = single(e, TriangleKind::Dual);
    if (!rb) throw std::runtime_error("no dual triangle across edge " + std::to_string(e));
    for (int a = 0; a < c.q(); ++a) shifts[e].push_back(m.ribbon_op_char(*rb, 0, a));
  }
  // Direct triangles on a spanning forest that separates gauge orbits: on a
  // torus a tree over all vertices, on a free region every star joined to
  // the rim (rim vertices carry no gauge freedom).
  std::vector<int> tree;
  {
    std::map<Vertex, bool> reached;
    std::vector<Vertex> frontier;
    for (const auto& e : R.edges())
      for (Vertex v : {e.tail, e.head}) reached[R.normalize(v)] = false;
    if (R.is_torus()) {
      frontier.push_back(R.stars().front().v);
    } else {
      for (auto& [v, r] : reached)
        if (!R.has_star(v)) frontier.push_back(v);
    }
    for (Vertex v : frontier) reached[v] = true;
    for (std::size_t i = 0; i < frontier.size(); ++i)
      for (const auto& e : R.edges()) {
        const Vertex t = R.normalize(e.tail), h = R.normalize(e.head);
        Vertex other;
        if (t == frontier[i]) other = h;
        else if (h == frontier[i]) other = t;
        else continue;
        if (reached[other]) continue;
        reached[other] = true;
        tree.push_back(e.index);
        frontier.push_back(other);
      }
  }
  std::vector<std::vector<LinearOp>> phases;  // per tree edge, per character
  for (int e : tree) {
    auto rb = single(e, TriangleKind::Direct);
    if (!rb) throw std::runtime_error("no direct triangle on edge " + std::to_string(e));
    std::vector<LinearOp> row;
    for (int chi = 0; chi < c.q(); ++chi) row.push_back(m.ribbon_op_char(*rb, chi, 0));
    phases.push_back(std::move(row));
  }

  const SparseState omega = vector_seed_ground(m);
  SpanAccumulator acc;
  std::size_t generators = 0;
  std::vector<Elem> a(E, 0);
  for (Index x = 0; x < dim && acc.rank() < dim; ++x) {
    Index t = x;
    for (int e = 0; e < E; ++e) {
      a[e] = static_cast<Elem>(t % c.q());
      t /= c.q();
    }
    SparseState base = omega;
    for (int e = 0; e < E; ++e)
      if (a[e] != 0) base = shifts[e][a[e]].apply(base);
    const std::size_t combos = static_cast<std::size_t>(std::pow(c.q(), phases.size()));
    for (std::size_t p = 0; p < combos; ++p) {
      SparseState v = base;
      std::size_t u = p;
      for (const auto& row : phases) {
        const Elem chi = static_cast<Elem>(u % c.q());
        u /= c.q();
        if (chi != 0) v = row[chi].apply(v);
      }
      acc.add(v);
      ++generators;
    }
  }
  (void)G;
  std::ostringstream os;
  os << "rank " << acc.rank() << " of " << dim << " from " << generators << " products";
  return {std::abs(static_cast<double>(dim) - static_cast<double>(acc.rank())), os.str()};
}

Outcome eq_ribbonrelation(Context& c) {
  const Region& R = c.region();
  if (R.width() < 3 || R.height() < 3) throw Skip{"region too small for a single crossing"};
  const Vertex v = R.stars().front().v;
  const BraidTable t = braid_table(c.group(), R, v, c.seed);
  std::size_t mismatched = 0;
  for (const auto& e : t.entries)
    if (e.measured != e.predicted) ++mismatched;
  std::ostringstream os;
  os << mismatched << " of " << t.entries.size() << " crossing scalars differ from chi(d) conj(xi(c))";
  return {t.max_residual, os.str()};
}

Outcome eq_ribbonpathind(Context& c) {
  const Region& R = c.region();
  std::vector<std::pair<Ribbon, Ribbon>> pairs;
  for (const auto& s : R.interior_sites())
    for (const auto& t : R.sites()) {
      if (pairs.size() >= 3) break;
      if (t.v == s.v) continue;
      auto base = try_between(R, s, t);
      if (!base) continue;
      for (const auto& alt : find_alternatives(R, *base, 1, true)) pairs.push_back({*base, alt});
    }
  if (pairs.empty()) throw Skip{"no pair of distinct ribbons with shared endpoints"};
  const auto ground = c.ground_subset(64);
  double r = 0.0;
  for (const auto& [r1, r2] : pairs)
    for (int chi = 0; chi < c.q(); ++chi)
      for (int cc = 0; cc < c.q(); ++cc) {
        const CompiledOp f1(c.model.ribbon_op_char(r1, chi, cc)), f2(c.model.ribbon_op_char(r2, chi, cc));
        for (const auto& w : ground) r = std::max(r, vec_dist(f1.apply(w), f2.apply(w)));
      }
  return {r, std::to_string(pairs.size()) + " ribbon pairs"};
}

// ------------------------------------------------------ charge projectors

Outcome eq_localprojgs(Context& c) {
  const auto ground = c.ground_subset(64);
  double r = 0.0;
  for (const auto& st : c.region().stars())
    for (int chi = 0; chi < c.q(); ++chi) {
      const CompiledOp d(c.model.charge_proj_vertex(st.v, chi));
      for (const auto& w : ground) r = std::max(r, vec_dist(d.apply(w), chi == 0 ? w : 0.0 * w));
    }
  for (const auto& p : c.region().plaquettes())
    for (int cc = 0; cc < c.q(); ++cc) {
      const CompiledOp d(c.model.charge_proj_face(p.f, cc));
      for (const auto& w : ground) r = std::max(r, vec_dist(d.apply(w), cc == 0 ? w : 0.0 * w));
    }
  return {r, ""};
}

// end = 0: D F = F D^{x - y}; end = 1: D F = F D^{x + y}.
Outcome localproj_ribbon(Context& c, int end) {
  const Site s = end == 0 ? c.open.start() : c.open.end();
  const Region& R = c.region();
  const Group& G = c.group();
  const bool star = R.has_star(s.v), face = R.contains_face(s.f);
  if (!star && !face) throw Skip{"endpoint carries no projector"};
  double r = 0.0;
  for (int xi = 0; xi < c.q(); ++xi)
    for (int d = 0; d < c.q(); ++d) {
      const LinearOp f = c.model.ribbon_op_char(c.open, xi, d);
      for (int x = 0; x < c.q(); ++x) {
        if (star) {
          const Elem y = end == 0 ? G.add(x, G.neg(xi)) : G.add(x, xi);
          r = std::max(r, c.dist(c.model.charge_proj_vertex(s.v, x) * f, f * c.model.charge_proj_vertex(s.v, y)));
        }
        if (face) {
          const Elem y = end == 0 ? G.add(x, G.neg(d)) : G.add(d, x);
          r = std::max(r, c.dist(c.model.charge_proj_face(s.f, x) * f, f * c.model.charge_proj_face(s.f, y)));
        }
      }
    }
  return {r, star && face ? "" : (star ? "vertex only" : "face only")};
}

Outcome eq_localprojribbonrelation1(Context& c) { return localproj_ribbon(c, 0); }
Outcome eq_localprojribbonrelation2(Context& c) { return localproj_ribbon(c, 1); }

Outcome eq_localprojorth(Context& c) {
  const Site s = c.s0;
  const LinearOp zero = LinearOp::zero(c.model.space());
  double r = 0.0;
  for (int x = 0; x < c.q(); ++x)
    for (int y = 0; y < c.q(); ++y) {
      const LinearOp dv = c.model.charge_proj_vertex(s.v, x), df = c.model.charge_proj_face(s.f, x);
      r = std::max(r, c.dist(dv * c.model.charge_proj_vertex(s.v, y), x == y ? dv : zero));
      r = std::max(r, c.dist(df * c.model.charge_proj_face(s.f, y), x == y ? df : zero));
    }
  return {r, ""};
}

Outcome eq_localprojcomplete(Context& c) {
  const Site s = c.s0;
  LinearOp sv = LinearOp::zero(c.model.space()), sf = sv, ss = sv;
  for (int x = 0; x < c.q(); ++x) {
    sv += c.model.charge_proj_vertex(s.v, x);
    sf += c.model.charge_proj_face(s.f, x);
    for (int y = 0; y < c.q(); ++y) ss += c.model.charge_proj_site(s, x, y);
  }
  const LinearOp I = c.model.identity();
  return {std::max({c.dist(sv, I), c.dist(sf, I), c.dist(ss, I)}), ""};
}

Outcome eq_globcharge(Context& c) {
  const Region& R = c.region();
  const double q = c.q();
  double r = 0.0;
  LinearOp sv = LinearOp::zero(c.model.space()), sf = sv;
  const bool small = c.model.space()->dim() <= (Index(1) << 20);
  const bool brute_v = small && std::pow(q, R.stars().size()) <= 4096;
  const bool brute_f = small && std::pow(q, R.plaquettes().size()) <= 4096;
  for (int x = 0; x < c.q(); ++x) {
    const LinearOp dv = c.model.global_charge_vertex(x), df = c.model.global_charge_face(x);
    sv += dv;
    sf += df;
    if (brute_v) r = std::max(r, c.dist(dv, c.model.global_charge_vertex_bruteforce(x)));
    if (brute_f) r = std::max(r, c.dist(df, c.model.global_charge_face_bruteforce(x)));
  }
  r = std::max({r, c.dist(sv, c.model.identity()), c.dist(sf, c.model.identity())});
  return {r, brute_v && brute_f ? "" : "configuration sums skipped (too many terms)"};
}

Outcome prop_vproj(Context& c, ChargeType type) {
  const LinearOp v = c.model.boundary_wilson(type);
  return {std::max(c.dist(v * v, v), c.dist(v.adjoint(), v)), ""};
}

Outcome lemma_ribchargeinv(Context& c) {
  const Region& R = c.region();
  const auto inner = R.interior_sites();
  std::vector<Ribbon> ribbons;
  for (std::size_t i = 0; i < inner.size() && ribbons.size() < 3; ++i)
    for (std::size_t j = i + 1; j < inner.size() && ribbons.size() < 3; ++j)
      if (auto rb = try_between(R, inner[i], inner[j])) ribbons.push_back(*rb);
  if (ribbons.empty()) throw Skip{"fewer than two interior sites"};
  double r = 0.0;
  for (const auto& rb : ribbons)
    for (int xi = 0; xi < c.q(); ++xi)
      for (int d = 0; d < c.q(); ++d) {
        const LinearOp f = c.model.ribbon_op_char(rb, xi, d);
        for (int x = 0; x < c.q(); ++x) {
          const LinearOp dv = c.model.global_charge_vertex(x), df = c.model.global_charge_face(x);
          r = std::max({r, c.dist(dv * f, f * dv), c.dist(df * f, f * df)});
        }
      }
  return {r, std::to_string(ribbons.size()) + " ribbons"};
}

Outcome lemma_globprojboundaryop(Context& c, ChargeType type) {
  return {op_distance_probes(c.model.global_nontrivial(type), c.model.boundary_wilson(type), c.seed, 8).residual,
          "8 probes"};
}

// ------------------------------------------------- boundary Hamiltonian

Outcome lemma_gsspan_psd(Context& c) {
  const auto low = spectrum_lowest(c.model.hamiltonian(Boundary::EpsMu), 1);
  std::ostringstream os;
  os << std::setprecision(17) << "min eigenvalue " << low.front().value;
  return {std::max(0.0, -low.front().value), os.str()};
}

Outcome lemma_gsspan_kernel(Context& c) {
  const Region& R = c.region();
  const Model& m = c.model;
  const GroundBasis& ker = c.ker_eps_mu();
  const GroundBasis& gl = c.ground();
  const auto inner = R.interior_sites(), bnd = R.boundary_sites();
  if (inner.empty()) throw Skip{"no interior site"};
  std::vector<LinearOp> el{m.identity()}, mg{m.identity()};
  for (const auto& b : bnd)
    if (auto rb = try_between(R, inner.front(), b))
      for (int chi = 1; chi < c.q(); ++chi) el.push_back(m.ribbon_op_char(*rb, chi, 0));
  for (const auto& s : inner)
    for (const auto& b : bnd)
      if (auto rb = try_between(R, s, b))
        for (int cc = 1; cc < c.q(); ++cc) mg.push_back(m.ribbon_op_char(*rb, 0, cc));

  const CompiledOp H(m.hamiltonian(Boundary::EpsMu).op);
  double member = 0.0;
  SpanAccumulator acc;
  std::size_t generators = 0;
  for (const auto& a : el)
    for (const auto& b : mg) {
      const CompiledOp op(a * b);
      const SparseState w0 = op.apply(gl.vectors.front());
      member = std::max(member, H.apply(w0).norm() / w0.norm());
      if (acc.rank() >= ker.dim()) continue;
      for (const auto& w : gl.vectors) {
        acc.add(op.apply(w));
        ++generators;
      }
    }
  std::ostringstream os;
  os << "kernel " << ker.dim() << ", span " << acc.rank() << " (" << generators << " vectors), max |H g| "
     << member;
  double r = std::abs(static_cast<double>(ker.dim()) - static_cast<double>(acc.rank()));
  if (member > kKernelBasisTol) r = std::max(r, 1.0);
  return {r, os.str()};
}

Outcome lemma_gsspan_subspaces(Context& c) {
  const CompiledOp H(c.model.hamiltonian(Boundary::EpsMu).op);
  double r = c.ker_eps_mu().max_residual;
  std::size_t de = 0, dm = 0;
  for (Boundary b : {Boundary::Eps, Boundary::Mu}) {
    const GroundBasis k = ground_space(c.model.hamiltonian(b));
    (b == Boundary::Eps ? de : dm) = k.dim();
    r = std::max(r, k.max_residual);
    for (const auto& v : k.vectors) r = std::max(r, H.apply(v).norm());
  }
  std::ostringstream os;
  os << "dims eps " << de << ", mu " << dm << ", eps_mu " << c.ker_eps_mu().dim();
  return {r, os.str()};
}

Outcome cor_sectors(Context& c) {
  const SectorTable t = sector_dims(c.model, c.ker_eps_mu());
  double r = std::abs(static_cast<double>(t.sum()) - static_cast<double>(t.total));
  std::ostringstream os;
  for (const auto& e : t.entries) {
    if (e.dim == 0) r += 1.0;
    os << c.group().format(e.chi) << "," << c.group().format(e.c) << ":" << e.dim << " ";
  }
  os << "total " << t.total;
  return {r, os.str()};
}

// ------------------------------------------------------------- energies

double energy_residual(Context& c, const Ribbon& rho, Elem chi, Elem cc, double expected) {
  const GroundBasis g = c.ground_subset_basis(64);
  const EnergyCheck e = excitation_energy_check(c.model, rho, chi, cc, g);
  return std::max({std::abs(e.energy - expected), e.max_residual, e.max_spread});
}

double ribenergy(int C, Elem chi, Elem c) { return C * (2.0 - (chi == 0) - (c == 0)); }

Outcome eq_ribenergy_c2(Context& c) {
  const Region& R = c.region();
  const auto inner = R.interior_sites();
  std::optional<Ribbon> rho;
  for (std::size_t i = 0; i < inner.size() && !rho; ++i)
    for (std::size_t j = i + 1; j < inner.size() && !rho; ++j)
      if (inner[i].v != inner[j].v && inner[i].f != inner[j].f) rho = try_between(R, inner[i], inner[j]);
  double r = 0.0;
  if (rho) {
    for (int chi = 0; chi < c.q(); ++chi)
      for (int cc = 0; cc < c.q(); ++cc) r = std::max(r, energy_residual(c, *rho, chi, cc, ribenergy(2, chi, cc)));
    return {r, "interior endpoints " + format_site(rho->start()) + " " + format_site(rho->end())};
  }
  // Single star: the second endpoint sits on a rim vertex of S_L, which has
  // no star term, so only the magnetic half is realizable.
  for (const auto& t : R.sites())
    if (t.v != c.s0.v && t.f != c.s0.f && (rho = try_between(R, c.s0, t))) break;
  if (!rho) throw Skip{"no ribbon with both endpoints in S_L"};
  for (int cc = 0; cc < c.q(); ++cc) r = std::max(r, energy_residual(c, *rho, 0, cc, ribenergy(2, 0, cc)));
  return {r, "one star: magnetic charges only"};
}

Outcome eq_ribenergy_c1(Context& c) {
  const Ribbon rho = ribbon_to_boundary(c.region(), c.s0);
  double r = 0.0;
  for (int chi = 0; chi < c.q(); ++chi)
    for (int cc = 0; cc < c.q(); ++cc) r = std::max(r, energy_residual(c, rho, chi, cc, ribenergy(1, chi, cc)));
  return {r, ""};
}

Outcome eq_ribenergy_c0(Context& c) {
  const Region& R = c.region();
  const auto bnd = R.boundary_sites();
  std::optional<Ribbon> rho;
  for (std::size_t i = 0; i < bnd.size() && !rho; ++i)
    for (std::size_t j = i + 1; j < bnd.size() && !rho; ++j)
      if (bnd[i].v != bnd[j].v && bnd[i].f != bnd[j].f) rho = try_between(R, bnd[i], bnd[j]);
  if (!rho) throw Skip{"no ribbon between boundary sites"};
  double r = 0.0;
  for (int chi = 0; chi < c.q(); ++chi)
    for (int cc = 0; cc < c.q(); ++cc) r = std::max(r, energy_residual(c, *rho, chi, cc, 0.0));
  return {r, ""};
}

Outcome lemma_gshambound(Context& c) { return {gshambound_check(c.model, c.ker_eps_mu().vectors), ""}; }

// ------------------------------------------------------------ states

Outcome singleexc_zero_energy(Context& c) {
  const CompiledOp H(c.model.hamiltonian(Boundary::EpsMu).op);
  double r = 0.0;
  for (int chi = 0; chi < c.q(); ++chi)
    for (int cc = 0; cc < c.q(); ++cc)
      r = std::max(r, H.apply(single_excitation_state(c.model, c.s0, chi, cc).vector).norm());
  return {r, ""};
}

Outcome singleexc_energy(Context& c) {
  const CompiledOp H(c.model.hamiltonian(Boundary::None).op);
  double r = 0.0;
  for (int chi = 0; chi < c.q(); ++chi)
    for (int cc = 0; cc < c.q(); ++cc) {
      const SparseState v = single_excitation_state(c.model, c.s0, chi, cc).vector;
      const double e = ribenergy(1, chi, cc);
      r = std::max(r, (H.apply(v) - e * v).norm());
    }
  return {r, ""};
}

Outcome singleexc_pathind(Context& c) {
  const Region& R = c.region();
  std::vector<std::pair<Ribbon, Ribbon>> pairs;
  for (const auto& s : R.interior_sites())
    for (const auto& b : R.boundary_sites()) {
      if (pairs.size() >= 3) break;
      auto base = try_between(R, s, b);
      if (!base) continue;
      for (const auto& alt : find_alternatives(R, *base, 1, false)) pairs.push_back({*base, alt});
    }
  if (pairs.empty()) throw Skip{"no second ribbon to the same boundary site"};
  // Pure charges must agree exactly. Two ribbons into a boundary site always
  // end on the same edge through different triangle kinds, so their framings
  // differ; a dyon (chi,c) then picks up a power of its spin chi(c).
  const Group& G = c.group();
  double r = 0.0;
  std::size_t twisted = 0;
  for (const auto& [base, alt] : pairs)
    for (int chi = 0; chi < c.q(); ++chi)
      for (int cc = 0; cc < c.q(); ++cc) {
        const SparseState x = single_excitation_state(c.model, base, chi, cc).vector;
        const SparseState y = single_excitation_state(c.model, alt, chi, cc).vector;
        if (chi == 0 || cc == 0) {
          r = std::max(r, vec_dist(x, y));
          continue;
        }
        const cplx theta = G.chi(chi, cc);
        double best = vec_dist(x, y);
        for (cplx ph : {theta, std::conj(theta)}) best = std::min(best, vec_dist(x, ph * y));
        if (vec_dist(x, y) > kKernelBasisTol) ++twisted;
        r = std::max(r, best);
      }
  return {r, std::to_string(pairs.size()) + " ribbon pairs, " + std::to_string(twisted) +
                 " dyon comparisons equal up to the spin chi(c)"};
}

double weight_residual(const SectorWeights& w, const std::function<double(Elem, Elem)>& expected) {
  double r = 0.0;
  for (const auto& e : w.entries) r = std::max(r, std::abs(e.lambda - expected(e.chi, e.c)));
  return r;
}

Outcome weights_ground(Context& c) {
  auto triv = [](Elem chi, Elem cc) { return chi == 0 && cc == 0 ? 1.0 : 0.0; };
  double r = weight_residual(sector_weights(frustration_free_state(c.model, GroundChoice::VectorSeed), c.model), triv);
  r = std::max(r, weight_residual(sector_weights(StateFunctional::uniform(c.ground_subset(64)), c.model), triv));
  return {r, ""};
}

Outcome weights_single(Context& c) {
  double r = 0.0;
  for (int chi = 0; chi < c.q(); ++chi)
    for (int cc = 0; cc < c.q(); ++cc) {
      const auto ex = single_excitation_state(c.model, c.s0, chi, cc);
      r = std::max(r, weight_residual(sector_weights(ex.state, c.model), [&](Elem x, Elem y) {
                     return x == static_cast<Elem>(chi) && y == static_cast<Elem>(cc) ? 1.0 : 0.0;
                   }));
    }
  return {r, ""};
}

Outcome weights_mixture(Context& c) {
  const Elem x1 = 0, c1 = static_cast<Elem>(c.q() - 1), x2 = static_cast<Elem>(c.q() - 1), c2 = 0;
  const auto a = single_excitation_state(c.model, c.s0, x1, c1), b = single_excitation_state(c.model, c.s0, x2, c2);
  const StateFunctional mix = StateFunctional::combine(a.state, 0.3, b.state, 0.7);
  double r = weight_residual(sector_weights(mix, c.model), [&](Elem x, Elem y) {
    return (x == x1 && y == c1 ? 0.3 : 0.0) + (x == x2 && y == c2 ? 0.7 : 0.0);
  });
  const StateFunctional cond = conditional_sector_state(mix, c.model, x2, c2);
  r = std::max(r, weight_residual(sector_weights(cond, c.model),
                                  [&](Elem x, Elem y) { return x == x2 && y == c2 ? 1.0 : 0.0; }));
  return {r, ""};
}

Outcome spectral_parity(Context& c) {
  const Hamiltonian H = c.model.hamiltonian(Boundary::None);
  std::vector<double> ev;
  if (c.model.space()->dim() <= (Index(1) << 18)) {
    ev = full_spectrum(H);
  } else {
    for (const auto& p : spectrum_lowest(H, 16)) ev.push_back(p.value);
  }
  std::set<long> distinct;
  double off = 0.0;
  std::size_t odd = 0;
  for (double e : ev) {
    const long n = std::lround(e);
    off = std::max(off, std::abs(e - static_cast<double>(n)));
    distinct.insert(n);
    if (n % 2 != 0) ++odd;
  }
  std::ostringstream os;
  os << "eigenvalues {";
  bool first = true;
  for (long n : distinct) {
    os << (first ? "" : ",") << n;
    first = false;
  }
  os << "}, " << odd << " of " << ev.size() << (ev.size() < c.model.space()->dim() ? " lowest" : "") << " odd";
  return {static_cast<double>(odd) + off, os.str()};
}

const std::vector<CheckDef>& registry() {
  using CT = ChargeType;
  static const std::vector<CheckDef> defs = [] {
    std::vector<CheckDef> d = {
        {{"cor.sectors", "sector dimensions of the boundary kernel add up", kCountTol, true}, cor_sectors},
        {{"eq.closedribbon", "closed ribbons fix ground states and commute with the terms", kKernelBasisTol},
         eq_closedribbon},
        {{"eq.globcharge", "global charge projectors against configuration sums", kAlgebraTol, true}, eq_globcharge},
        {{"eq.localprojcomplete", "site charge projectors sum to the identity", kAlgebraTol},
         eq_localprojcomplete},
        {{"eq.localprojgs", "ground states carry trivial local charge", kKernelBasisTol}, eq_localprojgs},
        {{"eq.localprojorth", "site charge projectors are orthogonal", kAlgebraTol}, eq_localprojorth},
        {{"eq.localprojribbonrelation1", "charge shift at the ribbon start", kAlgebraTol},
         eq_localprojribbonrelation1},
        {{"eq.localprojribbonrelation2", "charge shift at the ribbon end", kAlgebraTol}, eq_localprojribbonrelation2},
        {{"eq.qdgsspan", "ribbon products on ground states span the space", kCountTol}, eq_qdgsspan},
        {{"eq.ribbonconcatenation", "ribbon operators factor over concatenation", kAlgebraTol},
         eq_ribbonconcatenation},
        {{"eq.ribbonpathind", "ribbons with equal endpoints agree on ground states", kKernelBasisTol},
         eq_ribbonpathind},
        {{"eq.ribbonrelation", "crossing ribbons commute up to chi(d) conj(xi(c))", kAlgebraTol}, eq_ribbonrelation},
        {{"eq.ribenergy.c0", "ribbon energy, no endpoint in S_L", kKernelBasisTol, true}, eq_ribenergy_c0},
        {{"eq.ribenergy.c1", "ribbon energy, one endpoint in S_L", kKernelBasisTol, true}, eq_ribenergy_c1},
        {{"eq.ribenergy.c2", "ribbon energy, both endpoints in S_L", kKernelBasisTol}, eq_ribenergy_c2},
        {{"eq.ribHamrel", "commutator of H_L with an open ribbon", kAlgebraTol}, eq_ribHamrel},
        {{"eq.ribprop1", "products and adjoints along one ribbon", kAlgebraTol}, eq_ribprop1},
        {{"eq.ribstarrel", "star and plaquette terms at the ribbon ends", kAlgebraTol}, eq_ribstarrel},
        {{"lemma.globprojboundaryop.eps", "electric global projector equals the boundary operator", kKernelBasisTol,
          true},
         [](Context& c) { return lemma_globprojboundaryop(c, CT::Electric); }},
        {{"lemma.globprojboundaryop.mu", "magnetic global projector equals the boundary operator", kKernelBasisTol,
          true},
         [](Context& c) { return lemma_globprojboundaryop(c, CT::Magnetic); }},
        {{"lemma.gshambound", "H_L - D^eps - D^mu vanishes on the boundary kernel", kKernelBasisTol, true},
         lemma_gshambound},
        {{"lemma.gsspan.kernel", "boundary kernel equals the span of the generating set", kCountTol, true},
         lemma_gsspan_kernel},
        {{"lemma.gsspan.psd", "boundary Hamiltonian is positive", kAlgebraTol, true}, lemma_gsspan_psd},
        {{"lemma.gsspan.subspaces", "single-type kernels lie in the boundary kernel", kKernelBasisTol, true},
         lemma_gsspan_subspaces},
        {{"lemma.ribchargeinv", "global charges commute with interior ribbons", kAlgebraTol, true},
         lemma_ribchargeinv},
        {{"prop.vproj.eps", "electric boundary operator is a projection", kAlgebraTol, true},
         [](Context& c) { return prop_vproj(c, CT::Electric); }},
        {{"prop.vproj.mu", "magnetic boundary operator is a projection", kAlgebraTol, true},
         [](Context& c) { return prop_vproj(c, CT::Magnetic); }},
        {{"rel.commute_other", "disjoint terms commute", kAlgebraTol}, rel_commute_other},
        {{"rel.plaq_orth", "plaquette operators are orthogonal projections", kAlgebraTol}, rel_plaq_orth},
        {{"rel.projectors", "A_v and B_f are projections", kAlgebraTol}, rel_projectors},
        {{"rel.star_adjoint", "adjoint of a star operator", kAlgebraTol}, rel_star_adjoint},
        {{"rel.star_mult", "star operators multiply as the group", kAlgebraTol}, rel_star_mult},
        {{"rel.star_plaq", "neighbouring star and plaquette commute", kAlgebraTol}, rel_star_plaq},
        {{"spectral.parity", "H_L spectrum against even integers", 0.5, false, true}, spectral_parity},
        {{"states.singleexc.energy", "single excitation energy under H_L", kKernelBasisTol, true}, singleexc_energy},
        {{"states.singleexc.pathind", "single excitation independent of the ribbon", kKernelBasisTol, true},
         singleexc_pathind},
        {{"states.singleexc.zero_energy", "single excitation lies in the boundary kernel", kKernelBasisTol, true},
         singleexc_zero_energy},
        {{"states.weights.ground", "ground state has trivial sector weight", kKernelBasisTol, true}, weights_ground},
        {{"states.weights.mixture", "sector weights of a mixture", kKernelBasisTol, true}, weights_mixture},
        {{"states.weights.single", "sector weights of single excitations", kKernelBasisTol, true}, weights_single},
    };
    std::sort(d.begin(), d.end(), [](const CheckDef& a, const CheckDef& b) { return a.info.id < b.info.id; });
    return d;
  }();
  return defs;
}

CheckResult execute(const CheckDef& def, Context& ctx, double threshold) {
  CheckResult r;
  r.id = def.info.id;
  r.anchor = def.info.anchor;
  r.region = ctx.region().name();
  r.group = ctx.group().name();
  r.threshold = threshold;
  r.informational = def.info.informational;
  const auto t0 = std::chrono::steady_clock::now();
  if (def.info.needs_boundary && ctx.region().is_torus()) {
    r.skipped = true;
    r.note = "no boundary";
  } else {
    try {
      Outcome o = def.fn(ctx);
      r.residual = o.residual;
      r.note = o.note;
      r.pass = r.residual < r.threshold;
    } catch (const Skip& s) {
      r.skipped = true;
      r.note = s.reason;
    } catch (const std::exception& e) {
      throw std::runtime_error(def.info.id + ": " + e.what());
    }
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

void tally(VerificationReport& rep) {
  rep.passed = rep.failed = rep.skipped = rep.informational = 0;
  for (const auto& r : rep.results) {
    if (r.skipped) ++rep.skipped;
    else if (r.informational) ++rep.informational;
    else if (r.pass) ++rep.passed;
    else ++rep.failed;
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << x;
  return os.str();
}

}  // namespace

std::vector<Ribbon> alternative_ribbons(const Region& region, const Ribbon& base, std::size_t count, bool framed) {
  return find_alternatives(region, base, count, framed);
}

const std::vector<CheckInfo>& check_catalog() {
  static const std::vector<CheckInfo> cat = [] {
    std::vector<CheckInfo> out;
    for (const auto& d : registry()) out.push_back(d.info);
    return out;
  }();
  return cat;
}

VerificationReport run_suite(const Group& group, const Region& region, std::uint64_t seed,
                             const std::map<std::string, double>& threshold_overrides) {
  enforce_dim_cap(group, region);
  for (const auto& [id, v] : threshold_overrides) {
    (void)v;
    const auto& reg = registry();
    if (std::none_of(reg.begin(), reg.end(), [&](const CheckDef& d) { return d.info.id == id; }))
      throw std::invalid_argument("unknown check id in overrides: " + id);
  }
  Context ctx(group, region, seed);
  VerificationReport rep;
  rep.seed = seed;
  rep.group = group.name();
  rep.region = region.name();
  rep.threshold_overrides = threshold_overrides;
  for (const auto& def : registry()) {
    auto it = threshold_overrides.find(def.info.id);
    rep.results.push_back(execute(def, ctx, it == threshold_overrides.end() ? def.info.threshold : it->second));
  }
  tally(rep);
  return rep;
}

CheckResult run_check(const std::string& id, const Group& group, const Region& region, std::uint64_t seed) {
  std::vector<const CheckDef*> hits;
  for (const auto& d : registry())
    if (d.info.id == id || d.info.id.rfind(id + ".", 0) == 0) hits.push_back(&d);
  if (hits.empty()) throw std::invalid_argument("unknown check id: " + id);
  enforce_dim_cap(group, region);
  Context ctx(group, region, seed);
  if (hits.size() == 1 && hits.front()->info.id == id) return execute(*hits.front(), ctx, hits.front()->info.threshold);

  CheckResult out;
  out.id = id;
  out.region = region.name();
  out.group = group.name();
  out.threshold = std::numeric_limits<double>::infinity();
  out.pass = true;
  out.skipped = true;
  for (const auto* d : hits) {
    const CheckResult r = execute(*d, ctx, d->info.threshold);
    out.anchor += (out.anchor.empty() ? "" : "; ") + r.anchor;
    out.wall_seconds += r.wall_seconds;
    if (!r.note.empty()) out.note += (out.note.empty() ? "" : "; ") + r.id + ": " + r.note;
    if (r.skipped) continue;
    out.skipped = false;
    out.residual = std::max(out.residual, r.residual);
    out.threshold = std::min(out.threshold, r.threshold);
    out.pass = out.pass && r.pass;
  }
  if (out.skipped) {
    out.pass = false;
    out.threshold = hits.front()->info.threshold;
  }
  return out;
}

std::string format_report(const VerificationReport& rep) {
  std::ostringstream os;
  os << "group " << rep.group << ", region " << rep.region << ", seed " << rep.seed << "\n";
  std::size_t w = 5;
  for (const auto& r : rep.results) w = std::max(w, r.id.size());
  os << std::left << std::setw(static_cast<int>(w) + 2) << "check" << std::setw(7) << "status" << std::setw(12)
     << "residual" << std::setw(12) << "threshold" << "note\n";
  for (const auto& r : rep.results) {
    const char* status = r.skipped ? "skip" : r.informational ? "info" : r.pass ? "pass" : "FAIL";
    os << std::left << std::setw(static_cast<int>(w) + 2) << r.id << std::setw(7) << status << std::setw(12)
       << (r.skipped ? std::string("-") : fmt(r.residual)) << std::setw(12) << fmt(r.threshold) << r.note << "\n";
  }
  os << rep.passed << " passed, " << rep.failed << " failed, " << rep.skipped << " skipped, " << rep.informational
     << " informational\n";
  return os.str();
}

std::string report_json(const VerificationReport& rep) {
  nlohmann::ordered_json j;
  j["group"] = rep.group;
  j["region"] = rep.region;
  j["seed"] = rep.seed;
  j["threshold_overrides"] = rep.threshold_overrides;
  j["summary"] = {{"passed", rep.passed},
                  {"failed", rep.failed},
                  {"skipped", rep.skipped},
                  {"informational", rep.informational}};
  auto& arr = j["results"] = nlohmann::ordered_json::array();
  for (const auto& r : rep.results)
    arr.push_back({{"id", r.id},
                   {"anchor", r.anchor},
                   {"region", r.region},
                   {"group", r.group},
                   {"residual", r.residual},
                   {"threshold", r.threshold},
                   {"pass", r.pass},
                   {"skipped", r.skipped},
                   {"informational", r.informational},
                   {"note", r.note},
                   {"wall_seconds", r.wall_seconds}});
  return j.dump(2);
}

BraidTable braid_table(const Group& group, const Region& region, Vertex v, std::uint64_t seed) {
  const Model m(group, region);
  const int x = v.x, y = v.y;
  auto S = [&](int vx, int vy, int fx, int fy) {
    return Site{region.normalize(Vertex{vx, vy}), region.normalize(Face{fx, fy})};
  };
  const Ribbon rho = make_ribbon(region, {S(x - 1, y, x - 1, y - 1), S(x, y, x - 1, y - 1), S(x, y, x, y - 1),
                                          S(x + 1, y, x, y - 1)});
  const Ribbon sigma =
      make_ribbon(region, {S(x, y - 1, x, y - 1), S(x, y, x, y - 1), S(x, y, x, y), S(x, y + 1, x, y)});
  const int q = group.size(), ex = group.exponent();
  BraidTable t;
  std::vector<std::pair<Index, cplx>> col;
  for (int chi = 0; chi < q; ++chi)
    for (int c = 0; c < q; ++c) {
      const LinearOp A = m.ribbon_op_char(rho, chi, c);
      for (int xi = 0; xi < q; ++xi)
        for (int d = 0; d < q; ++d) {
          const LinearOp B = m.ribbon_op_char(sigma, xi, d);
          const LinearOp ab = A * B, ba = B * A;
          // Both products are single monomials with the same shift; their
          // ratio on any basis vector is the crossing scalar.
          col.clear();
          CompiledOp(ab).column(0, col);
          const cplx num = col.empty() ? cplx{} : col.front().second;
          col.clear();
          CompiledOp(ba).column(0, col);
          const cplx den = col.empty() ? cplx{} : col.front().second;
          if (std::abs(den) < 1e-12) throw std::runtime_error("braid_table: vanishing product");
          const cplx s = num / den;
          const double consistency = op_distance(ab, s * ba, seed).residual;
          const double turns = std::arg(s) / (2.0 * std::numbers::pi);
          const long p = std::lround(turns * ex);
          BraidEntry e;
          e.chi = chi;
          e.c = c;
          e.xi = xi;
          e.d = d;
          e.measured = Phase(p, ex);
          e.predicted = group.phase(chi, d) * group.phase(xi, c).conj();
          e.residual = std::abs(s - e.predicted.value()) + consistency;
          t.max_residual = std::max(t.max_residual, e.residual);
          t.max_rounding = std::max(t.max_rounding, std::abs(s - e.measured.value()) + consistency);
          t.entries.push_back(e);
        }
    }
  return t;
}

BraidTable braid_table(const Group& group, std::uint64_t seed) {
  return braid_table(group, Region(RegionKind::Free, 3, 3), Vertex{1, 1}, seed);
}

}  // namespace qdouble
