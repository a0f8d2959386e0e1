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


#include <cmath>

#include "doctest.h"
#include "qdouble/lemma_suite.hpp"
#include "qdouble/spectral.hpp"
#include "qdouble/states.hpp"

using namespace qdouble;

namespace {

constexpr double kTol = 1e-10;

Model model(const char* g, const char* r) { return Model(Group::parse(g), Region::parse(r)); }

// Small operator family on the edges of face f.
std::vector<LinearOp> probes_at(const Model& m, Face f) {
  std::vector<LinearOp> out = {m.plaquette_proj(f)};
  const auto p = *m.region().plaquette(f);
  for (const auto& pe : p.edges) {
    out.push_back(LinearOp::shift(m.space(), {{pe.edge, 1}}));
    LinearForm l;
    l.terms = {{pe.edge, 1}};
    std::vector<cplx> table;
    for (int g = 0; g < m.q(); ++g) table.push_back(m.group().chi(1, g));
    out.push_back(LinearOp::diag(m.space(), l, table));
  }
  out.push_back(out[1] * out.back());
  return out;
}

}  // namespace

TEST_CASE("frustration-free states satisfy every term") {
  const Model m = model("Z3", "free:3x3");
  for (auto choice : {GroundChoice::VectorSeed, GroundChoice::UniformMixture}) {
    const StateFunctional w = frustration_free_state(m, choice);
    CHECK(std::abs(w.trace() - 1.0) < kTol);
    for (const auto& st : m.region().stars()) CHECK(std::abs(w.expect(m.identity() - m.star_proj(st.v))) < kTol);
    for (const auto& p : m.region().plaquettes()) CHECK(std::abs(w.expect(m.identity() - m.plaquette_proj(p.f))) < kTol);
  }
}

TEST_CASE("ground states are locally indistinguishable") {
  const Model m = model("Z2", "free:4x4");
  const StateFunctional seed = frustration_free_state(m, GroundChoice::VectorSeed);
  const StateFunctional mix = StateFunctional::uniform(ground_samples(m, 12, 9));
  for (const auto& a : probes_at(m, Face{1, 1})) CHECK(std::abs(seed.expect(a) - mix.expect(a)) < kTol);
}

TEST_CASE("open ribbons have zero ground expectation") {
  const Model m = model("Z2", "free:4x4");
  const StateFunctional w = frustration_free_state(m);
  const Ribbon r = ribbon_between(m.region(), Site{{1, 1}, {0, 0}}, Site{{2, 2}, {2, 2}});
  for (int chi = 0; chi < 2; ++chi)
    for (int c = 0; c < 2; ++c) {
      const cplx e = w.expect(m.ribbon_op_char(r, chi, c));
      if (chi == 0 && c == 0) CHECK(std::abs(e - 1.0) < kTol);
      else CHECK(std::abs(e) < kTol);
    }
}

TEST_CASE("single excitations") {
  const Model m = model("Z3", "free:3x3");
  const LinearOp HL = m.hamiltonian().op;
  const LinearOp Hb = m.hamiltonian(Boundary::EpsMu).op;
  const Site s{{1, 1}, {0, 0}};
  for (int chi = 0; chi < 3; ++chi)
    for (int c = 0; c < 3; ++c) {
      CAPTURE(chi);
      CAPTURE(c);
      const Excitation ex = single_excitation_state(m, s, chi, c);
      CHECK(ex.site == s);
      CHECK(std::abs(ex.vector.norm() - 1.0) < kTol);
      CHECK(Hb.apply(ex.vector).norm() < kTol);
      const double want = (chi != 0) + (c != 0);
      CHECK(std::abs(ex.state.expect(HL) - want) < kTol);
      CHECK((HL.apply(ex.vector) - want * ex.vector).norm() < kTol);
    }
  CHECK_THROWS_AS(single_excitation_state(m, Site{{0, 0}, {0, 0}}, 1, 1), std::invalid_argument);
}

TEST_CASE("pure charges do not depend on the ribbon") {
  const Model m = model("Z3", "free:4x4");
  const Region& R = m.region();
  const Site s{{1, 1}, {1, 1}};
  std::size_t compared = 0;
  for (const auto& b : R.boundary_sites()) {
    if (compared >= 3) break;
    Ribbon x;
    try {
      x = ribbon_between(R, s, b);
    } catch (const std::invalid_argument&) {
      continue;
    }
    const auto alts = alternative_ribbons(R, x, 1, false);
    if (alts.empty()) continue;
    const Ribbon& y = alts.front();
    CHECK(y.start() == x.start());
    CHECK(y.end() == x.end());
    CHECK_FALSE(y == x);
    for (int k = 1; k < 3; ++k) {
      const SparseState ex = single_excitation_state(m, x, k, 0).vector;
      const SparseState ey = single_excitation_state(m, y, k, 0).vector;
      CHECK((ex - ey).norm() < 1e-12);
      const SparseState mx = single_excitation_state(m, x, 0, k).vector;
      const SparseState my = single_excitation_state(m, y, 0, k).vector;
      CHECK((mx - my).norm() < 1e-12);
    }
    ++compared;
  }
  CHECK(compared > 0);
}

TEST_CASE("sector weights") {
  const Model m = model("Z3", "free:3x3");
  const SectorWeights w0 = sector_weights(frustration_free_state(m), m);
  CHECK(w0.entries.size() == 9);
  CHECK(std::abs(w0.sum() - 1.0) < kTol);
  CHECK(std::abs(w0.at(0, 0) - 1.0) < kTol);
  const Site s{{1, 1}, {0, 0}};
  for (int chi = 0; chi < 3; ++chi)
    for (int c = 0; c < 3; ++c) {
      const SectorWeights w = sector_weights(single_excitation_state(m, s, chi, c).state, m);
      for (const auto& e : w.entries)
        CHECK(std::abs(e.lambda - ((e.chi == Elem(chi) && e.c == Elem(c)) ? 1.0 : 0.0)) < kTol);
    }
  const StateFunctional mix =
      StateFunctional::combine(frustration_free_state(m), 1.0, single_excitation_state(m, s, 1, 2).state, 1.0);
  const SectorWeights wm = sector_weights(mix, m);
  CHECK(std::abs(wm.at(0, 0) - 0.5) < kTol);
  CHECK(std::abs(wm.at(1, 2) - 0.5) < kTol);
  CHECK(std::abs(wm.sum() - 1.0) < kTol);
}

TEST_CASE("conditional states") {
  const Model m = model("Z2", "free:3x3");
  const Site s{{1, 1}, {0, 0}};
  const StateFunctional w0 = frustration_free_state(m);
  const StateFunctional w11 = single_excitation_state(m, s, 1, 1).state;
  const StateFunctional mix = StateFunctional::combine(w0, 1.0, w11, 1.0);
  const StateFunctional cond = conditional_sector_state(mix, m, 1, 1);
  const StateFunctional same = conditional_sector_state(w0, m, 0, 0);
  for (const auto& a : probes_at(m, Face{0, 0})) {
    CHECK(std::abs(cond.expect(a) - w11.expect(a)) < kTol);
    CHECK(std::abs(same.expect(a) - w0.expect(a)) < kTol);
    CHECK(std::abs(conditional_one_sided(mix, m, 1, 1, a) - cond.expect(a)) < kTol);
  }
  CHECK_THROWS_AS(conditional_sector_state(w0, m, 1, 0), std::invalid_argument);
}

TEST_CASE("charge transport") {
  const Model m = model("Z3", "free:3x3");
  const Site s{{1, 1}, {0, 0}};
  const Ribbon rho = ribbon_to_boundary(m.region(), s);
  const StateFunctional w0 = frustration_free_state(m);
  const auto probes = probes_at(m, Face{0, 0});
  CHECK(op_distance(charge_transport(m, rho, 1, 2, m.identity()), m.identity(), 3).residual < 1e-12);
  for (int chi = 0; chi < 3; ++chi)
    for (int c = 0; c < 3; ++c) {
      const StateFunctional w = single_excitation_state(m, s, chi, c).state;
      for (const auto& a : probes) {
        CHECK(std::abs(w0.expect(charge_transport(m, rho, chi, c, a)) - w.expect(a)) < kTol);
        for (const auto& b : probes)
          CHECK(op_distance(charge_transport(m, rho, chi, c, a * b),
                            charge_transport(m, rho, chi, c, a) * charge_transport(m, rho, chi, c, b), 3)
                    .residual < 1e-12);
      }
    }
}

TEST_CASE("ground-state energy splits into charge terms") {
  const Model m = model("Z2", "free:3x3");
  const Site s{{1, 1}, {0, 0}};
  const GshamTerms g0 = gsham_terms(m, vector_seed_ground(m));
  CHECK(std::abs(g0.h) < kTol);
  CHECK(std::abs(g0.eps) < kTol);
  CHECK(std::abs(g0.mu) < kTol);
  const GshamTerms g11 = gsham_terms(m, single_excitation_state(m, s, 1, 1).vector);
  CHECK(std::abs(g11.h - 2.0) < kTol);
  CHECK(std::abs(g11.eps + g11.mu - 2.0) < kTol);
  const GshamTerms g10 = gsham_terms(m, single_excitation_state(m, s, 1, 0).vector);
  CHECK(std::abs(g10.h - 1.0) < kTol);
  CHECK(std::abs(g10.eps - 1.0) < kTol);
  CHECK(std::abs(g10.mu) < kTol);
  const GroundBasis k = ground_space(m.hamiltonian(Boundary::EpsMu));
  CHECK(k.dim() == 1280);
  std::vector<SparseState> some(k.vectors.begin(), k.vectors.begin() + 64);
  CHECK(gshambound_check(m, some) < kTol);
}

TEST_CASE("expectations settle as the region grows") {
  const Model small = model("Z2", "free:3x3");
  const Model large = model("Z2", "free:4x4");
  for (int chi = 0; chi < 2; ++chi)
    for (int c = 0; c < 2; ++c) {
      const ConstancyResult r = eventual_constancy_check(small, large, 1, 1, Site{{1, 1}, {0, 0}}, chi, c);
      CHECK(r.probes > 0);
      CHECK(r.small_values.size() == r.probes);
      CHECK(r.max_deviation < kTol);
    }
  CHECK_THROWS_AS(eventual_constancy_check(small, model("Z3", "free:4x4"), 1, 1, Site{{1, 1}, {0, 0}}, 1, 1),
                  std::invalid_argument);
}
