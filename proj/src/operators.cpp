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

#include "qdouble/operators.hpp"

#include <cctype>
#include <stdexcept>

namespace qdouble {

Boundary parse_boundary(std::string_view s) {
  std::string t;
  for (char c : s) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "none") return Boundary::None;
  if (t == "eps") return Boundary::Eps;
  if (t == "mu") return Boundary::Mu;
  if (t == "eps_mu") return Boundary::EpsMu;
  throw std::invalid_argument("unknown boundary '" + std::string(s) + "' (none, eps, mu, eps_mu)");
}

std::string boundary_name(Boundary b) {
  switch (b) {
    case Boundary::None: return "none";
    case Boundary::Eps: return "eps";
    case Boundary::Mu: return "mu";
    case Boundary::EpsMu: return "eps_mu";
  }
  return "none";
}

Model::Model(Group group, Region region)
    : group_(std::move(group)),
      region_(std::move(region)),
      space_(std::make_shared<const HilbertSpace>(group_, region_.num_edges())) {}

void Model::check_vertex(Vertex v) const {
  if (!region_.has_star(v))
    throw std::invalid_argument("vertex (" + std::to_string(v.x) + "," + std::to_string(v.y) +
                                ") is not a full star of " + region_.name());
}

void Model::check_face(Face f) const {
  if (!region_.contains_face(f))
    throw std::invalid_argument("face (" + std::to_string(f.x) + "," + std::to_string(f.y) + ") is not in " +
                                region_.name());
}

void Model::check_ribbon(const Ribbon& r) const {
  std::string why;
  if (!validate_ribbon(region_, r, &why)) throw std::invalid_argument("ribbon leaves region or is invalid: " + why);
}

void Model::check_elem(Elem g) const {
  if (g >= static_cast<Elem>(q())) throw std::invalid_argument("group element out of range");
}

LinearForm Model::holonomy(Face f) const {
  check_face(f);
  auto p = *region_.plaquette(f);
  LinearForm form;
  for (const auto& pe : p.edges) form.terms.emplace_back(pe.edge, pe.sign);
  return form;
}

LinearForm Model::ribbon_form(const Ribbon& r) const {
  LinearForm form;
  for (const auto& t : r.triangles)
    if (t.kind == TriangleKind::Direct) form.terms.emplace_back(t.edge, t.sign);
  return form;
}

std::vector<std::pair<int, Elem>> Model::ribbon_shift(const Ribbon& r, Elem h) const {
  std::vector<std::pair<int, Elem>> s;
  for (const auto& t : r.triangles)
    if (t.kind == TriangleKind::Dual) s.emplace_back(t.edge, t.sign > 0 ? h : group_.neg(h));
  return s;
}

LinearOp Model::star_op(Vertex v, Elem g) const {
  check_vertex(v);
  check_elem(g);
  auto st = *region_.star(v);
  std::vector<std::pair<int, Elem>> s;
  for (const auto& se : st.edges) s.emplace_back(se.edge, se.outgoing ? g : group_.neg(g));
  return LinearOp::shift(space_, s);
}

LinearOp Model::plaquette_op(Face f, Elem h) const {
  check_elem(h);
  std::vector<cplx> table(q(), cplx(0.0, 0.0));
  table[h] = 1.0;
  return LinearOp::diag(space_, holonomy(f), std::move(table));
}

LinearOp Model::star_proj(Vertex v) const {
  LinearOp out(space_);
  for (int g = 0; g < q(); ++g) out += star_op(v, static_cast<Elem>(g));
  return (1.0 / q()) * out;
}

LinearOp Model::plaquette_proj(Face f) const { return plaquette_op(f, 0); }

LinearOp Model::ribbon_op(const Ribbon& r, Elem h, Elem g) const {
  check_ribbon(r);
  check_elem(h);
  check_elem(g);
  std::vector<cplx> table(q(), cplx(0.0, 0.0));
  table[g] = 1.0;
  LinearOp d = LinearOp::diag(space_, ribbon_form(r), std::move(table));
  return LinearOp::shift(space_, ribbon_shift(r, h)) * d;
}

LinearOp Model::ribbon_op_char(const Ribbon& r, Elem chi, Elem c) const {
  check_ribbon(r);
  check_elem(chi);
  check_elem(c);
  std::vector<cplx> table(q());
  for (int z = 0; z < q(); ++z) table[z] = std::conj(group_.chi(chi, static_cast<Elem>(z)));
  LinearOp d = LinearOp::diag(space_, ribbon_form(r), std::move(table));
  return LinearOp::shift(space_, ribbon_shift(r, group_.neg(c))) * d;
}

LinearOp Model::charge_proj_vertex(Vertex v, Elem chi) const {
  check_elem(chi);
  LinearOp out(space_);
  for (int g = 0; g < q(); ++g)
    out += std::conj(group_.chi(chi, static_cast<Elem>(g))) * star_op(v, static_cast<Elem>(g));
  return (1.0 / q()) * out;
}

LinearOp Model::charge_proj_face(Face f, Elem c) const { return plaquette_op(f, c); }

LinearOp Model::charge_proj_site(const Site& s, Elem chi, Elem c) const {
  return charge_proj_vertex(s.v, chi) * charge_proj_face(s.f, c);
}

LinearOp Model::global_charge_vertex(Elem chi) const {
  check_elem(chi);
  if (region_.stars().empty()) throw std::invalid_argument("global charge: region has no stars");
  LinearOp out(space_);
  for (int g = 0; g < q(); ++g) {
    std::vector<std::pair<int, Elem>> s;
    for (const auto& st : region_.stars())
      for (const auto& se : st.edges) s.emplace_back(se.edge, se.outgoing ? g : group_.neg(g));
    out += std::conj(group_.chi(chi, static_cast<Elem>(g))) * LinearOp::shift(space_, s);
  }
  return (1.0 / q()) * out;
}

LinearOp Model::global_charge_face(Elem c) const {
  check_elem(c);
  if (region_.plaquettes().empty()) throw std::invalid_argument("global charge: region has no plaquettes");
  LinearForm total;
  for (const auto& p : region_.plaquettes())
    for (const auto& pe : p.edges) total.terms.emplace_back(pe.edge, pe.sign);
  // (1/|G|) sum_xi conj(xi(c)) xi(sum_f hol_f) = delta(sum_f hol_f = c).
  std::vector<cplx> table(q(), cplx(0.0, 0.0));
  for (int z = 0; z < q(); ++z) {
    PhaseSum sum;
    for (int xi = 0; xi < q(); ++xi)
      sum.add(group_.phase(static_cast<Elem>(xi), c).conj() * group_.phase(static_cast<Elem>(xi), static_cast<Elem>(z)));
    table[z] = sum.value() / static_cast<double>(q());
  }
  return LinearOp::diag(space_, total, std::move(table));
}

LinearOp Model::global_charge_proj(Elem chi, Elem c) const {
  return global_charge_vertex(chi) * global_charge_face(c);
}

LinearOp Model::global_nontrivial(ChargeType type) const {
  if (type == ChargeType::Electric) return identity() - global_charge_vertex(0);
  return identity() - global_charge_face(0);
}

LinearOp Model::global_charge_vertex_bruteforce(Elem chi) const {
  const auto& stars = region_.stars();
  if (stars.empty()) throw std::invalid_argument("global charge: region has no stars");
  LinearOp out(space_);
  std::vector<Elem> cfg(stars.size(), 0);
  while (true) {
    Elem total = 0;
    for (Elem c : cfg) total = group_.add(total, c);  // characters multiply like elements
    if (total == chi) {
      LinearOp prod = identity();
      for (std::size_t i = 0; i < stars.size(); ++i) prod = prod * charge_proj_vertex(stars[i].v, cfg[i]);
      out += prod;
    }
    std::size_t i = 0;
    while (i < cfg.size() && ++cfg[i] == static_cast<Elem>(q())) cfg[i++] = 0;
    if (i == cfg.size()) break;
  }
  return out;
}

LinearOp Model::global_charge_face_bruteforce(Elem c) const {
  const auto& plaqs = region_.plaquettes();
  if (plaqs.empty()) throw std::invalid_argument("global charge: region has no plaquettes");
  LinearOp out(space_);
  std::vector<Elem> cfg(plaqs.size(), 0);
  while (true) {
    Elem total = 0;
    for (Elem x : cfg) total = group_.add(total, x);
    if (total == c) {
      LinearOp prod = identity();
      for (std::size_t i = 0; i < plaqs.size(); ++i) prod = prod * plaquette_op(plaqs[i].f, cfg[i]);
      out += prod;
    }
    std::size_t i = 0;
    while (i < cfg.size() && ++cfg[i] == static_cast<Elem>(q())) cfg[i++] = 0;
    if (i == cfg.size()) break;
  }
  return out;
}

LinearOp Model::boundary_wilson(ChargeType type) const {
  Ribbon rim = boundary_ribbon(region_);
  LinearOp out(space_);
  for (int k = 0; k < q(); ++k) {
    if (type == ChargeType::Electric) out += identity() - ribbon_op_char(rim, 0, static_cast<Elem>(k));
    else out += identity() - ribbon_op_char(rim, static_cast<Elem>(k), 0);
  }
  return (1.0 / q()) * out;
}

Hamiltonian Model::hamiltonian(Boundary boundary) const {
  if (boundary != Boundary::None && region_.is_torus())
    throw std::invalid_argument("no boundary: boundary terms need a free region");
  Hamiltonian H{LinearOp(space_), {}, boundary};
  for (const auto& st : region_.stars()) H.terms.push_back(identity() - star_proj(st.v));
  for (const auto& p : region_.plaquettes()) H.terms.push_back(identity() - plaquette_proj(p.f));
  if (boundary == Boundary::Eps || boundary == Boundary::EpsMu)
    H.terms.push_back(cplx(-1.0, 0.0) * boundary_wilson(ChargeType::Electric));
  if (boundary == Boundary::Mu || boundary == Boundary::EpsMu)
    H.terms.push_back(cplx(-1.0, 0.0) * boundary_wilson(ChargeType::Magnetic));
  for (const auto& t : H.terms) H.op += t;
  return H;
}

int Model::interior_endpoints(const Ribbon& r) const {
  return static_cast<int>(region_.is_interior_site(r.start())) + static_cast<int>(region_.is_interior_site(r.end()));
}

double Model::expected_energy(const Ribbon& r, Elem chi, Elem c) const {
  const Site a = r.start(), b = r.end();
  if (a.v == b.v || a.f == b.f)
    throw std::invalid_argument("expected_energy: endpoints share a vertex or a face");
  double e = 0.0;
  for (const Site& s : {a, b}) {
    if (region_.has_star(s.v) && chi != 0) e += 1.0;
    if (region_.contains_face(s.f) && c != 0) e += 1.0;
  }
  return e;
}

LinearOp finite_commutator(const Hamiltonian& H, const LinearOp& a) { return commutator(H.op, a); }

}  // namespace qdouble
