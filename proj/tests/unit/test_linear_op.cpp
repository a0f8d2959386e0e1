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
#include <memory>

#include "doctest.h"
#include "oracle.hpp"
#include "qdouble/linear_op.hpp"

using namespace qdouble;

namespace {

SpacePtr space(const char* group, int edges) { return std::make_shared<HilbertSpace>(Group::parse(group), edges); }

double dense_dist(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("mixed radix indexing") {
  for (const char* g : {"Z2", "Z3", "Z4", "Z2xZ3"}) {
    CAPTURE(g);
    const auto H = space(g, 4);
    const Index q = static_cast<Index>(H->group().size());
    CHECK(H->dim() == q * q * q * q);
    CHECK(std::abs(H->log2_dim() - 4.0 * std::log2(static_cast<double>(q))) < 1e-12);
    for (Index x = 0; x < H->dim(); ++x) {
      const auto d = H->decode(x);
      REQUIRE(d.size() == 4);
      CHECK(H->encode(d) == x);
      // Oracle: edge e is digit e in base q, edge 0 least significant.
      Index y = x;
      for (int e = 0; e < 4; ++e, y /= q) CHECK(d[e] == y % q);
      for (int e = 0; e < 4; ++e) {
        CHECK(H->digit(x, e) == d[e]);
        const Elem v = (d[e] + 1) % q;
        auto d2 = d;
        d2[e] = v;
        CHECK(H->with_digit(x, e, v) == H->encode(d2));
      }
    }
  }
  CHECK(space("Z2", 70)->dim() == 0);
  CHECK(std::abs(space("Z2", 70)->log2_dim() - 70.0) < 1e-12);
}

TEST_CASE("sparse states") {
  SparseState a{{{3, 1.0}, {1, 2.0}, {3, 1.0}}};
  a.canonicalize();
  REQUIRE(a.size() == 2);
  CHECK(a.entries[0].first == 1);
  CHECK(a.entries[1].second == cplx(2.0));
  CHECK(std::abs(a.norm() - std::sqrt(8.0)) < 1e-15);
  const SparseState b = SparseState::basis(1);
  CHECK(inner(b, a) == cplx(2.0));
  CHECK((a - a).norm() == 0.0);
  CHECK(inner(cplx(0, 1) * b, b) == cplx(0, -1));
  a.normalize();
  CHECK(std::abs(a.norm() - 1.0) < 1e-15);
  const auto dense = a.to_dense(5);
  CHECK(SparseState::from_dense(dense).entries == a.entries);
}

TEST_CASE("shift and diagonal operators against direct action") {
  const auto H = space("Z3", 3);
  const LinearOp T = LinearOp::shift(H, {{0, 1}, {2, 2}});
  LinearForm l;
  l.terms = {{0, 1}, {1, -1}};
  std::vector<cplx> table = {1.0, 2.0, cplx(0, 1)};
  const LinearOp D = LinearOp::diag(H, l, table);
  for (Index x = 0; x < H->dim(); ++x) {
    auto d = oracle::decode(*H, x);
    const SparseState tx = T.apply(SparseState::basis(x));
    auto d2 = d;
    d2[0] = (d2[0] + 1) % 3;
    d2[2] = (d2[2] + 2) % 3;
    REQUIRE(tx.size() == 1);
    CHECK(tx.entries[0].first == oracle::encode(*H, d2));
    CHECK(tx.entries[0].second == cplx(1.0));

    const SparseState dx = D.apply(SparseState::basis(x));
    const cplx want = table[oracle::mod(d[0] - d[1], 3)];
    CHECK((dx - want * SparseState::basis(x)).norm() < 1e-15);
  }
}

TEST_CASE("composition, adjoint and compiled application agree with dense matrices") {
  const auto H = space("Z3", 3);
  LinearForm l;
  l.terms = {{1, 1}, {2, 1}};
  const LinearOp A = LinearOp::shift(H, {{1, 1}}) + cplx(0.5, 0.25) * LinearOp::diag(H, l, {1.0, -1.0, 0.5});
  const LinearOp B = LinearOp::shift(H, {{0, 2}, {1, 1}}) * LinearOp::diag(H, l, {0.0, 1.0, cplx(0, 1)});
  const std::size_t n = H->dim();
  const auto a = to_dense_matrix(A), b = to_dense_matrix(B);
  std::vector<cplx> ab(n * n, 0.0), ad(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) ab[i * n + j] += a[i * n + k] * b[k * n + j];
      ad[i * n + j] = std::conj(a[j * n + i]);
    }
  CHECK(dense_dist(to_dense_matrix(A * B), ab) < 1e-14);
  CHECK(dense_dist(to_dense_matrix(A.adjoint()), ad) < 1e-14);

  const StateVector v = random_state(n, 11);
  StateVector w(n);
  CompiledOp(A * B).apply(v, w);
  StateVector ref(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ref[i] += ab[i * n + j] * v[j];
  CHECK(dense_dist(w, ref) < 1e-13);
  CHECK(dense_dist((A * B).apply(v), ref) < 1e-13);

  const SparseState sv = SparseState::from_dense(v);
  CHECK(dense_dist(CompiledOp(A * B).apply(sv).to_dense(n), ref) < 1e-13);
}

TEST_CASE("column appends") {
  const auto H = space("Z2", 2);
  const CompiledOp T(LinearOp::shift(H, {{0, 1}}));
  std::vector<std::pair<Index, cplx>> out;
  T.column(0, out);
  T.column(0, out);
  CHECK(out.size() == 2);
}

TEST_CASE("identity and scalars") {
  const auto H = space("Z2xZ2", 2);
  const LinearOp I = LinearOp::identity(H);
  const StateVector v = random_state(H->dim(), 3);
  CHECK(dense_dist(I.apply(v), v) == 0.0);
  CHECK(LinearOp::zero(H).is_zero());
  CHECK((I - I).is_zero());
  CHECK(op_distance(LinearOp::scalar(H, 2.0), I + I, 1).residual == 0.0);
}

TEST_CASE("op_distance") {
  const auto H = space("Z3", 6);
  const LinearOp T = LinearOp::shift(H, {{0, 1}});
  LinearForm l;
  l.terms = {{0, 1}};
  const LinearOp D = LinearOp::diag(H, l, {1.0, 0.0, 0.0});
  // T D - D T has a single entry of modulus 1 in every column whose edge-0
  // digit is 0 or 2, and nothing else.
  const auto d = op_distance(T * D, D * T, 5);
  CHECK(d.method == "exhaustive");
  CHECK(std::abs(d.residual - 1.0) < 1e-12);
  CHECK(op_distance(T * T * T, LinearOp::identity(H), 5).residual < 1e-15);
  const auto p = op_distance_probes(T * D, D * T, 5, 8);
  CHECK(p.method == "probes");
  CHECK(p.probes == 8);
  CHECK(p.residual > 0.1);
  CHECK(op_distance_probes(T * D, T * D, 5, 8).residual < 1e-15);
}

TEST_CASE("commutator") {
  const auto H = space("Z2", 3);
  const LinearOp X = LinearOp::shift(H, {{0, 1}});
  LinearForm l;
  l.terms = {{0, 1}};
  const LinearOp Z = LinearOp::diag(H, l, {1.0, -1.0});
  // XZ = -ZX, so [X, Z] = 2XZ.
  CHECK(op_distance(commutator(X, Z), 2.0 * (X * Z), 1).residual < 1e-15);
  CHECK(op_distance(commutator(X, X), LinearOp::zero(H), 1).residual == 0.0);
}
