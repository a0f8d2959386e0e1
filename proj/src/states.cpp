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

#include "qdouble/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "qdouble/spectral.hpp"

namespace qdouble {

StateFunctional StateFunctional::pure(SparseState v) {
  double n = v.norm();
  if (n < 1e-300) throw std::invalid_argument("pure state: zero vector");
  v.scale(1.0 / n);
  StateFunctional s;
  s.vectors_.push_back(std::move(v));
  s.weights_.push_back(1.0);
  return s;
}

StateFunctional StateFunctional::mixture(std::vector<SparseState> vectors, std::vector<double> weights) {
  if (vectors.size() != weights.size() || vectors.empty())
    throw std::invalid_argument("mixture: need one weight per vector");
  StateFunctional s;
  double total = 0.0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (weights[i] < 0) throw std::invalid_argument("mixture: negative weight");
    double n = vectors[i].norm();
    if (weights[i] == 0.0 || n < 1e-300) continue;
    vectors[i].scale(1.0 / n);
    s.vectors_.push_back(std::move(vectors[i]));
    s.weights_.push_back(weights[i]);
    total += weights[i];
  }
  if (total <= 0) throw std::invalid_argument("mixture: zero total weight");
  for (double& w : s.weights_) w /= total;
  return s;
}

StateFunctional StateFunctional::uniform(std::vector<SparseState> vectors) {
  std::vector<double> w(vectors.size(), 1.0);
  return mixture(std::move(vectors), std::move(w));
}

StateFunctional StateFunctional::combine(const StateFunctional& a, double wa, const StateFunctional& b, double wb) {
  std::vector<SparseState> v;
  std::vector<double> w;
  for (std::size_t i = 0; i < a.vectors_.size(); ++i) {
    v.push_back(a.vectors_[i]);
    w.push_back(wa * a.weights_[i]);
  }
  for (std::size_t i = 0; i < b.vectors_.size(); ++i) {
    v.push_back(b.vectors_[i]);
    w.push_back(wb * b.weights_[i]);
  }
  return mixture(std::move(v), std::move(w));
}

cplx StateFunctional::expect(const LinearOp& a) const { return expect(CompiledOp(a)); }

cplx StateFunctional::expect(const CompiledOp& a) const {
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < vectors_.size(); ++i) s += weights_[i] * inner(vectors_[i], a.apply(vectors_[i]));
  return s;
}

double StateFunctional::trace() const {
  double s = 0.0;
  for (std::size_t i = 0; i < vectors_.size(); ++i) s += weights_[i] * std::pow(vectors_[i].norm(), 2);
  return s;
}

namespace {

SparseState project_ground(const Model& model, SparseState v) {
  for (const auto& p : model.region().plaquettes()) v = model.plaquette_proj(p.f).apply(v);
  for (const auto& st : model.region().stars()) {
    v = model.star_proj(st.v).apply(v);
    v.canonicalize(1e-15);
  }
  return v;
}

}  // namespace

SparseState vector_seed_ground(const Model& model) {
  SparseState v = project_ground(model, SparseState::basis(0));
  double n = v.norm();
  if (n < 1e-12) throw std::logic_error("ground projector annihilates the identity configuration");
  v.scale(1.0 / n);
  return v;
}

std::vector<SparseState> ground_samples(const Model& model, std::size_t count, std::uint64_t seed) {
  const Region& R = model.region();
  const Group& G = model.group();
  const HilbertSpace& S = *model.space();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, model.q() - 1);
  std::vector<SparseState> out;
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<Elem> cfg(static_cast<std::size_t>(R.num_edges()), 0);
    for (int y = 0; y < R.height(); ++y)
      for (int x = 0; x < R.width(); ++x) {
        const Vertex v{x, y};
        const Elem g = static_cast<Elem>(pick(rng));
        for (Vertex w : {Vertex{x + 1, y}, Vertex{x, y + 1}, Vertex{x - 1, y}, Vertex{x, y - 1}}) {
          auto e = R.edge_between(v, R.normalize(w));
          if (!e) continue;
          Elem& d = cfg[static_cast<std::size_t>(*e)];
          d = R.edge(*e).tail == v ? G.add(d, g) : G.add(d, G.neg(g));
        }
      }
    SparseState v = project_ground(model, SparseState::basis(S.encode(cfg)));
    v.normalize();
    out.push_back(std::move(v));
  }
  return out;
}

StateFunctional frustration_free_state(const Model& model, GroundChoice choice) {
  if (choice == GroundChoice::VectorSeed) return StateFunctional::pure(vector_seed_ground(model));
  GroundBasis g = ground_space(model.hamiltonian(Boundary::None));
  return StateFunctional::uniform(std::move(g.vectors));
}

Excitation single_excitation_state(const Model& model, const Site& s, Elem chi, Elem c) {
  if (!model.region().is_interior_site(s)) throw std::invalid_argument("site " + format_site(s) + " is not interior");
  return single_excitation_state(model, ribbon_to_boundary(model.region(), s), chi, c);
}

Excitation single_excitation_state(const Model& model, const Ribbon& rho, Elem chi, Elem c) {
  Excitation ex;
  ex.site = rho.start();
  ex.ribbon = rho;
  ex.chi = chi;
  ex.c = c;
  ex.omega = vector_seed_ground(model);
  ex.vector = model.ribbon_op_char(rho, chi, c).apply(ex.omega);
  ex.vector.normalize();
  ex.state = StateFunctional::pure(ex.vector);
  return ex;
}

double SectorWeights::sum() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.lambda;
  return s;
}

double SectorWeights::at(Elem chi, Elem c) const {
  for (const auto& e : entries)
    if (e.chi == chi && e.c == c) return e.lambda;
  throw std::out_of_range("sector weight not present");
}

SectorWeights sector_weights(const StateFunctional& omega, const Model& model) {
  SectorWeights w;
  for (int chi = 0; chi < model.q(); ++chi)
    for (int c = 0; c < model.q(); ++c) {
      double l = omega.expect(model.global_charge_proj(static_cast<Elem>(chi), static_cast<Elem>(c))).real();
      w.entries.push_back({static_cast<Elem>(chi), static_cast<Elem>(c), l});
    }
  return w;
}

StateFunctional conditional_sector_state(const StateFunctional& omega, const Model& model, Elem chi, Elem c) {
  CompiledOp D(model.global_charge_proj(chi, c));
  std::vector<SparseState> v;
  std::vector<double> w;
  double total = 0.0;
  for (std::size_t i = 0; i < omega.vectors().size(); ++i) {
    SparseState dv = D.apply(omega.vectors()[i]);
    double n2 = std::pow(dv.norm(), 2);
    total += omega.weights()[i] * n2;
    if (n2 < 1e-24) continue;
    v.push_back(std::move(dv));
    w.push_back(omega.weights()[i] * n2);
  }
  if (total <= 1e-10) throw std::invalid_argument("conditional state: vanishing sector weight");
  return StateFunctional::mixture(std::move(v), std::move(w));
}

cplx conditional_one_sided(const StateFunctional& omega, const Model& model, Elem chi, Elem c, const LinearOp& a) {
  LinearOp D = model.global_charge_proj(chi, c);
  double wd = omega.expect(D).real();
  if (wd <= 1e-10) throw std::invalid_argument("conditional state: vanishing sector weight");
  return omega.expect(a * D) / wd;
}

LinearOp charge_transport(const Model& model, const Ribbon& rho, Elem chi, Elem c, const LinearOp& a) {
  LinearOp F = model.ribbon_op_char(rho, chi, c);
  return F.adjoint() * a * F;
}

GshamTerms gsham_terms(const Model& model, const SparseState& psi) {
  double n2 = std::pow(psi.norm(), 2);
  auto ev = [&](const LinearOp& op) { return inner(psi, op.apply(psi)).real() / n2; };
  GshamTerms t;
  t.h = ev(model.hamiltonian(Boundary::None).op);
  t.eps = ev(model.global_nontrivial(ChargeType::Electric));
  t.mu = ev(model.global_nontrivial(ChargeType::Magnetic));
  return t;
}

double gshambound_check(const Model& model, const std::vector<SparseState>& vectors) {
  LinearOp X = model.hamiltonian(Boundary::None).op - model.global_nontrivial(ChargeType::Electric) -
               model.global_nontrivial(ChargeType::Magnetic);
  CompiledOp C(X);
  double worst = 0.0;
  for (const auto& psi : vectors) {
    double n2 = std::pow(psi.norm(), 2);
    worst = std::max(worst, std::abs(inner(psi, C.apply(psi))) / n2);
  }
  return worst;
}

namespace {

Site shifted(const Site& s, int dx, int dy) { return {{s.v.x + dx, s.v.y + dy}, {s.f.x + dx, s.f.y + dy}}; }

Ribbon translate(const Region& target, const Ribbon& r, int dx, int dy) {
  std::vector<Site> sites;
  for (const auto& s : r.sites) sites.push_back(shifted(s, dx, dy));
  return make_ribbon(target, sites);
}

// Continues r from its end to the nearest reachable boundary site of the region.
Ribbon extend_to_boundary(const Region& region, const Ribbon& r) {
  if (region.is_boundary_site(r.end())) return r;
  auto targets = region.boundary_sites();
  std::stable_sort(targets.begin(), targets.end(), [&](const Site& a, const Site& b) {
    return region.coord_distance(a.v, r.end().v) < region.coord_distance(b.v, r.end().v);
  });
  for (const Site& t : targets) {
    for (Routing routing : {Routing::HorizontalFirst, Routing::VerticalFirst}) {
      try {
        Ribbon full = concat(r, ribbon_between(region, r.end(), t, routing));
        if (validate_ribbon(region, full)) return full;
      } catch (const std::invalid_argument&) {
      }
    }
  }
  throw std::invalid_argument("embedding mismatch: cannot extend ribbon to the boundary");
}

// Probe operators around s, built in the given model with s shifted by (dx, dy).
std::vector<LinearOp> probe_family(const Model& m, const Region& small, const Site& s, int dx, int dy) {
  std::vector<LinearOp> ops;
  const Site t = shifted(s, dx, dy);
  const int q = m.q();
  for (int g = 0; g < q; ++g) ops.push_back(m.star_op(t.v, static_cast<Elem>(g)));
  for (int h = 0; h < q; ++h) ops.push_back(m.plaquette_op(t.f, static_cast<Elem>(h)));
  for (int chi = 0; chi < q; ++chi)
    for (int c = 0; c < q; ++c) ops.push_back(m.charge_proj_site(t, static_cast<Elem>(chi), static_cast<Elem>(c)));
  for (const auto& st : small.stars()) ops.push_back(m.star_proj({st.v.x + dx, st.v.y + dy}));
  for (const auto& p : small.plaquettes()) ops.push_back(m.plaquette_proj({p.f.x + dx, p.f.y + dy}));
  // Wilson loop around the 2x2 block of faces at s.v.
  const int x0 = s.v.x - 1, y0 = s.v.y - 1;
  if (x0 >= 0 && y0 >= 0 && x0 + 2 < small.width() && y0 + 2 < small.height()) {
    Ribbon loop = m.region().rectangle_ribbon(x0 + dx, y0 + dy, 3, 3);
    for (int xi = 0; xi < q; ++xi)
      for (int d = 0; d < q; ++d) ops.push_back(m.ribbon_op_char(loop, static_cast<Elem>(xi), static_cast<Elem>(d)));
  }
  return ops;
}

}  // namespace

ConstancyResult eventual_constancy_check(const Model& small, const Model& large, int dx, int dy, const Site& s,
                                         Elem chi, Elem c) {
  if (small.group().orders() != large.group().orders()) throw std::invalid_argument("embedding mismatch: groups differ");
  const Region& rs = small.region();
  const Region& rl = large.region();
  if (rs.is_torus() || rl.is_torus()) throw std::invalid_argument("embedding mismatch: free regions required");
  if (dx < 0 || dy < 0 || dx + rs.width() > rl.width() || dy + rs.height() > rl.height())
    throw std::invalid_argument("embedding mismatch: small region does not fit at the offset");
  Ribbon rho_s = ribbon_to_boundary(rs, s);
  Ribbon rho_l = extend_to_boundary(rl, translate(rl, rho_s, dx, dy));

  Excitation es = single_excitation_state(small, rho_s, chi, c);
  Excitation el = single_excitation_state(large, rho_l, chi, c);
  auto ps = probe_family(small, rs, s, 0, 0);
  auto pl = probe_family(large, rs, s, dx, dy);
  ConstancyResult out;
  out.probes = ps.size();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    cplx a = es.state.expect(ps[i]);
    cplx b = el.state.expect(pl[i]);
    out.small_values.push_back(a);
    out.large_values.push_back(b);
    out.max_deviation = std::max(out.max_deviation, std::abs(a - b));
  }
  return out;
}

}  // namespace qdouble
