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


#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "oracle.hpp"
#include "qdouble/operators.hpp"
#include "qdouble/states.hpp"

using namespace qdouble;

namespace {

constexpr double kTol = 1e-12;

double dist(const LinearOp& a, const LinearOp& b) { return op_distance(a, b, 7).residual; }

Ribbon centre_ribbon(const Region& R) {
  const auto in = R.interior_sites();
  return ribbon_to_boundary(R, in.front());
}

}  // namespace

TEST_CASE("star and plaquette operators match the reference action") {
  for (const char* region : {"free:3x3", "torus:2x2", "free:4x3"}) {
    CAPTURE(region);
    const Model m(Group::parse("Z3"), Region::parse(region));
    const Region& R = m.region();
    const auto& H = *m.space();
    for (Index x : oracle::random_basis(H, 40, 3)) {
      const auto d = oracle::decode(H, x);
      for (const auto& st : R.stars())
        for (int g = 0; g < 3; ++g) {
          const SparseState y = m.star_op(st.v, g).apply(SparseState::basis(x));
          REQUIRE(y.size() == 1);
          CHECK(y.entries[0].first == oracle::encode(H, oracle::star(R, 3, st.v, g, d)));
        }
      for (const auto& p : R.plaquettes())
        for (int h = 0; h < 3; ++h) {
          const SparseState y = m.plaquette_op(p.f, h).apply(SparseState::basis(x));
          const bool hit = oracle::holonomy(R, 3, p.f, d) == h;
          CHECK(y.norm() == doctest::Approx(hit ? 1.0 : 0.0));
        }
    }
  }
}

TEST_CASE("star relations") {
  for (const char* group : {"Z2", "Z3", "Z2xZ2"}) {
    CAPTURE(group);
    const Model m(Group::parse(group), Region::parse("free:3x3"));
    const Vertex v{1, 1};
    const int q = m.q();
    CHECK(dist(m.star_op(v, 0), m.identity()) < kTol);
    for (int g = 0; g < q; ++g) {
      CHECK(dist(m.star_op(v, g).adjoint(), m.star_op(v, m.group().neg(g))) < kTol);
      for (int h = 0; h < q; ++h) CHECK(dist(m.star_op(v, g) * m.star_op(v, h), m.star_op(v, m.group().add(g, h))) < kTol);
    }
    const LinearOp A = m.star_proj(v);
    CHECK(dist(A * A, A) < kTol);
    CHECK(dist(A.adjoint(), A) < kTol);
  }
}

TEST_CASE("toric code convention") {
  const Model m(Group::parse("Z2"), Region::parse("free:3x3"));
  const LinearOp A = m.star_proj({1, 1});
  const LinearOp Atc = 2.0 * A - m.identity();
  // (2A - I)^2 = I: eigenvalues are +-1, so those of A are 0 and 1.
  CHECK(dist(Atc * Atc, m.identity()) < kTol);
  CHECK(dist(Atc, m.star_op({1, 1}, 1)) < kTol);
}

TEST_CASE("plaquette relations") {
  const Model m(Group::parse("Z3"), Region::parse("free:3x3"));
  for (const auto& p : m.region().plaquettes()) {
    for (int h = 0; h < 3; ++h)
      for (int k = 0; k < 3; ++k)
        CHECK(dist(m.plaquette_op(p.f, h) * m.plaquette_op(p.f, k), h == k ? m.plaquette_op(p.f, h) : 0.0 * m.identity()) < kTol);
    const LinearOp B = m.plaquette_proj(p.f);
    CHECK(dist(B * B, B) < kTol);
    CHECK(dist(B, m.plaquette_op(p.f, 0)) < kTol);
    // The all-identity configuration is flat.
    CHECK((B.apply(SparseState::basis(0)) - SparseState::basis(0)).norm() < kTol);
    for (int g = 0; g < 3; ++g)
      for (int h = 0; h < 3; ++h)
        CHECK(dist(m.star_op({1, 1}, g) * m.plaquette_op(p.f, h), m.plaquette_op(p.f, h) * m.star_op({1, 1}, g)) < kTol);
  }
}

TEST_CASE("all stars commute with all plaquettes") {
  const Model m(Group::parse("Z2"), Region::parse("free:4x4"));
  for (const auto& st : m.region().stars())
    for (const auto& p : m.region().plaquettes())
      CHECK(dist(m.star_proj(st.v) * m.plaquette_proj(p.f), m.plaquette_proj(p.f) * m.star_proj(st.v)) < kTol);
}

TEST_CASE("ribbon operators") {
  for (const char* group : {"Z2", "Z3"}) {
    CAPTURE(group);
    const Model m(Group::parse(group), Region::parse("free:3x3"));
    const Group& G = m.group();
    const int q = m.q();
    const Ribbon r = ribbon_between(m.region(), Site{{1, 1}, {0, 0}}, Site{{2, 1}, {1, 1}});
    CHECK(dist(m.ribbon_op_char(r, 0, 0), m.identity()) < kTol);
    for (int h = 0; h < q; ++h) {
      LinearOp S = LinearOp::zero(m.space());
      for (int g = 0; g < q; ++g) S += m.ribbon_op(r, h, g);
      // Summing over g leaves the bare shift, a unitary.
      CHECK(dist(S, LinearOp::shift(m.space(), m.ribbon_shift(r, h))) < kTol);
      CHECK(dist(S.adjoint() * S, m.identity()) < kTol);
    }
    for (int g = 0; g < q; ++g)
      for (const auto& t : m.ribbon_op(r, 0, g).terms()) CHECK(t.mono.shift.empty());
    // Same-ribbon products: F^{chi,c} F^{xi,d} = F^{chi xi, c d}.
    for (int chi = 0; chi < q; ++chi)
      for (int c = 0; c < q; ++c)
        for (int xi = 0; xi < q; ++xi)
          for (int d = 0; d < q; ++d)
            CHECK(dist(m.ribbon_op_char(r, chi, c) * m.ribbon_op_char(r, xi, d),
                       m.ribbon_op_char(r, G.add(chi, xi), G.add(c, d))) < kTol);
  }
  const Model z2(Group::parse("Z2"), Region::parse("free:3x3"));
  const Ribbon r = centre_ribbon(z2.region());
  for (int chi = 0; chi < 2; ++chi) CHECK(dist(z2.ribbon_op_char(r, chi, 1) * z2.ribbon_op_char(r, chi, 1), z2.identity()) < kTol);
}

TEST_CASE("ribbon concatenation") {
  const Model m(Group::parse("Z3"), Region::parse("free:4x4"));
  const Group& G = m.group();
  const auto in = m.region().interior_sites();
  const Ribbon r = ribbon_between(m.region(), in.front(), in.back());
  REQUIRE(r.triangles.size() >= 2);
  const std::size_t mid = r.triangles.size() / 2;
  Ribbon r0, r1;
  r0.sites.assign(r.sites.begin(), r.sites.begin() + mid + 1);
  r0.triangles.assign(r.triangles.begin(), r.triangles.begin() + mid);
  r1.sites.assign(r.sites.begin() + mid, r.sites.end());
  r1.triangles.assign(r.triangles.begin() + mid, r.triangles.end());
  for (int h = 0; h < 3; ++h)
    for (int g = 0; g < 3; ++g) {
      // Abelian form: F^{h,g} = sum_k F_0^{h,k} F_1^{h,g-k}.
      LinearOp sum = LinearOp::zero(m.space());
      for (int k = 0; k < 3; ++k) sum += m.ribbon_op(r0, h, k) * m.ribbon_op(r1, h, G.add(g, G.neg(k)));
      CHECK(dist(sum, m.ribbon_op(r, h, g)) < kTol);
    }
  for (int chi = 0; chi < 3; ++chi)
    for (int c = 0; c < 3; ++c)
      CHECK(dist(m.ribbon_op_char(r0, chi, c) * m.ribbon_op_char(r1, chi, c), m.ribbon_op_char(r, chi, c)) < kTol);
}

TEST_CASE("local charge projectors") {
  const Model m(Group::parse("Z3"), Region::parse("free:3x3"));
  const Site s{{1, 1}, {0, 0}};
  CHECK(dist(m.charge_proj_vertex(s.v, 0), m.star_proj(s.v)) < kTol);
  CHECK(dist(m.charge_proj_face(s.f, 0), m.plaquette_proj(s.f)) < kTol);
  LinearOp total = LinearOp::zero(m.space());
  for (int chi = 0; chi < 3; ++chi) {
    for (int xi = 0; xi < 3; ++xi)
      CHECK(dist(m.charge_proj_vertex(s.v, chi) * m.charge_proj_vertex(s.v, xi),
                 chi == xi ? m.charge_proj_vertex(s.v, chi) : 0.0 * m.identity()) < kTol);
    for (int c = 0; c < 3; ++c) total += m.charge_proj_site(s, chi, c);
  }
  CHECK(dist(total, m.identity()) < kTol);
}

TEST_CASE("global charge projectors") {
  const Model m(Group::parse("Z2"), Region::parse("free:3x3"));
  CHECK(dist(m.global_charge_vertex(0) + m.global_nontrivial(ChargeType::Electric), m.identity()) < kTol);
  CHECK(dist(m.global_charge_face(0) + m.global_nontrivial(ChargeType::Magnetic), m.identity()) < kTol);
  for (int chi = 0; chi < 2; ++chi) CHECK(dist(m.global_charge_vertex(chi), m.global_charge_vertex_bruteforce(chi)) < kTol);
  for (int c = 0; c < 2; ++c) CHECK(dist(m.global_charge_face(c), m.global_charge_face_bruteforce(c)) < kTol);

  // Reference: total flux of a configuration.
  const Model z3(Group::parse("Z3"), Region::parse("free:3x3"));
  const auto& H = *z3.space();
  for (Index x : oracle::random_basis(H, 30, 5)) {
    const auto d = oracle::decode(H, x);
    int flux = 0;
    for (const auto& p : z3.region().plaquettes()) flux += oracle::holonomy(z3.region(), 3, p.f, d);
    for (int c = 0; c < 3; ++c)
      CHECK(z3.global_charge_face(c).apply(SparseState::basis(x)).norm() ==
            doctest::Approx(oracle::mod(flux, 3) == c ? 1.0 : 0.0));
  }
}

TEST_CASE("boundary Wilson loops") {
  for (const char* group : {"Z2", "Z3"}) {
    CAPTURE(group);
    const Model m(Group::parse(group), Region::parse("free:3x3"));
    const SparseState omega = vector_seed_ground(m);
    for (ChargeType t : {ChargeType::Electric, ChargeType::Magnetic}) {
      const LinearOp V = m.boundary_wilson(t);
      CHECK(dist(V * V, V) < kTol);
      CHECK(dist(V.adjoint(), V) < kTol);
      CHECK(op_distance_probes(V, m.global_nontrivial(t), 7, 8).residual < 1e-10);
      CHECK(V.apply(omega).norm() < kTol);
      CHECK(m.global_nontrivial(t).apply(omega).norm() < kTol);
    }
  }
}

TEST_CASE("torus Hamiltonian against a reference matrix") {
  const Model m(Group::parse("Z2"), Region::parse("torus:2x2"));
  const Region& R = m.region();
  const auto& S = *m.space();
  const int n = static_cast<int>(S.dim());
  Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    const auto d = oracle::decode(S, x);
    for (const auto& st : R.stars()) {
      ref(x, x) += 0.5;
      ref(oracle::encode(S, oracle::star(R, 2, st.v, 1, d)), x) -= 0.5;
    }
    for (const auto& p : R.plaquettes()) ref(x, x) += oracle::holonomy(R, 2, p.f, d) != 0 ? 1.0 : 0.0;
  }
  const auto dense = to_dense_matrix(m.hamiltonian().op);
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(dense[i * n + j] - ref(i, j)));
  CHECK(worst < kTol);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ref);
  const auto ev = es.eigenvalues();
  int zeros = 0;
  for (int i = 0; i < n; ++i) zeros += std::abs(ev(i)) < 1e-9;
  CHECK(zeros == 4);
  CHECK(ev(4) == doctest::Approx(2.0));
  for (int i = 0; i < n; ++i) CHECK(std::abs(ev(i) - std::round(ev(i))) < 1e-9);
}

TEST_CASE("Hamiltonian terms") {
  const Model m(Group::parse("Z2"), Region::parse("free:3x3"));
  const Hamiltonian H = m.hamiltonian();
  CHECK(H.terms.size() == 5);
  CHECK(H.boundary == Boundary::None);
  const Hamiltonian Hb = m.hamiltonian(Boundary::EpsMu);
  CHECK(Hb.terms.size() == 7);
  CHECK(dist(Hb.op, H.op - m.global_nontrivial(ChargeType::Electric) - m.global_nontrivial(ChargeType::Magnetic)) < kTol);
  CHECK(dist(finite_commutator(H, m.star_proj({1, 1})), 0.0 * m.identity()) < kTol);
  CHECK(parse_boundary("EPS_MU") == Boundary::EpsMu);
  CHECK(boundary_name(Boundary::Mu) == "mu");
  CHECK_THROWS_AS(parse_boundary("both"), std::invalid_argument);
}

TEST_CASE("expected energies") {
  const Model m(Group::parse("Z3"), Region::parse("free:3x3"));
  const Ribbon r = centre_ribbon(m.region());
  CHECK(m.interior_endpoints(r) == 1);
  CHECK(m.expected_energy(r, 1, 1) == 2.0);
  CHECK(m.expected_energy(r, 1, 0) == 1.0);
  CHECK(m.expected_energy(r, 0, 2) == 1.0);
  CHECK(m.expected_energy(r, 0, 0) == 0.0);
}

TEST_CASE("invalid arguments") {
  const Model m(Group::parse("Z2"), Region::parse("free:3x3"));
  CHECK_THROWS_AS(m.star_op({0, 0}, 1), std::invalid_argument);
  CHECK_THROWS_AS(m.star_op({1, 1}, 2), std::invalid_argument);
  CHECK_THROWS_AS(m.plaquette_op({2, 2}, 0), std::invalid_argument);
}
