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
#include <numeric>
#include <stdexcept>

#include "doctest.h"
#include "qdouble/group.hpp"

using namespace qdouble;

namespace {

const char* kGroups[] = {"Z2", "Z3", "Z4", "Z2xZ2", "Z2xZ3", "Z6", "Z2xZ4"};

}  // namespace

TEST_CASE("make drops trivial factors") {
  CHECK(Group::make({2}).size() == 2);
  const Group g = Group::make({1, 3});
  CHECK(g.orders() == std::vector<int>{3});
  CHECK(g.size() == 3);
  CHECK(Group::make({2, 2}).size() == 4);
  CHECK(Group::make({2, 4}).exponent() == 4);
  CHECK(Group::make({2, 3}).exponent() == 6);
  CHECK_THROWS_AS(Group::make({1}), std::invalid_argument);
  CHECK_THROWS_AS(Group::make({0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Group::make({}), std::invalid_argument);
}

TEST_CASE("parse") {
  CHECK(Group::parse("Z2").orders() == std::vector<int>{2});
  CHECK(Group::parse("z2xZ4").orders() == std::vector<int>{2, 4});
  CHECK(Group::parse("Z3").name() == "Z3");
  CHECK_THROWS_AS(Group::parse("Z0"), std::invalid_argument);
  CHECK_THROWS_AS(Group::parse("Q8"), std::invalid_argument);
  CHECK_THROWS_AS(Group::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(Group::parse("Z2x"), std::invalid_argument);
}

TEST_CASE("phase is reduced into [0,1)") {
  CHECK(Phase(2, 4) == Phase(1, 2));
  CHECK(Phase(3, 2) == Phase(1, 2));
  CHECK(Phase(-1, 4) == Phase(3, 4));
  CHECK(Phase(4, 4).str() == "0");
  CHECK(Phase(1, 4).str() == "1/4");
  CHECK(Phase(1, 4) * Phase(1, 4) == Phase(1, 2));
  CHECK(Phase(1, 3).conj() == Phase(2, 3));
  CHECK(Phase(1, 2).value() == cplx(-1.0, 0.0));
  CHECK(Phase(1, 4).value() == cplx(0.0, 1.0));
  CHECK(std::abs(Phase(1, 3).value() - std::polar(1.0, 2.0 * M_PI / 3.0)) < 1e-15);
}

TEST_CASE("element arithmetic") {
  const Group z3 = Group::parse("Z3");
  CHECK(z3.mul(z3.element({1}), z3.element({2})) == z3.identity());
  const Group v4 = Group::parse("Z2xZ2");
  CHECK(v4.inv(v4.element({1, 0})) == v4.element({1, 0}));
  CHECK(z3.element({4}) == z3.element({1}));
  CHECK(z3.element({-1}) == z3.element({2}));
  CHECK_THROWS(v4.element({1}));
  for (const char* name : kGroups) {
    CAPTURE(name);
    const Group G = Group::parse(name);
    const auto els = G.enumerate_elements();
    REQUIRE(els.size() == static_cast<std::size_t>(G.size()));
    CHECK(els.front() == G.identity());
    for (const auto& g : els) {
      CHECK(G.mul(g, G.identity()) == g);
      CHECK(G.mul(g, G.inv(g)) == G.identity());
      CHECK(G.unpack(G.pack(g)) == g);
      for (const auto& h : els) {
        CHECK(G.mul(g, h) == G.mul(h, g));
        CHECK(G.pack(G.mul(g, h)) == G.add(G.pack(g), G.pack(h)));
      }
    }
  }
}

TEST_CASE("enumeration order is lexicographic") {
  const Group G = Group::parse("Z2xZ2");
  const auto els = G.enumerate_elements();
  REQUIRE(els.size() == 4);
  CHECK(els[0].digits == std::vector<int>{0, 0});
  CHECK(els[1].digits == std::vector<int>{0, 1});
  CHECK(els[2].digits == std::vector<int>{1, 0});
  CHECK(els[3].digits == std::vector<int>{1, 1});
}

TEST_CASE("character values") {
  const Group z2 = Group::parse("Z2");
  CHECK(z2.char_eval(z2.character({1}), z2.element({1})) == Phase(1, 2));
  const Group z4 = Group::parse("Z4");
  CHECK(z4.char_eval(z4.character({1}), z4.element({1})) == Phase(1, 4));
  CHECK(z4.chi(1, 1) == cplx(0.0, 1.0));
  const Group z3 = Group::parse("Z3");
  CHECK(z3.dual_inv(z3.character({1})) == z3.character({2}));
  CHECK(z2.dual_mul(z2.character({1}), z2.character({1})) == z2.trivial_character());
  CHECK(z3.enumerate_characters().size() == 3);
}

TEST_CASE("characters are homomorphisms") {
  for (const char* name : kGroups) {
    CAPTURE(name);
    const Group G = Group::parse(name);
    const int q = G.size();
    for (Elem chi = 0; chi < static_cast<Elem>(q); ++chi) {
      CHECK(G.phase(chi, 0) == Phase());
      for (Elem g = 0; g < static_cast<Elem>(q); ++g) {
        // Packed and digit APIs agree, and the cached value matches the exact phase.
        CHECK(G.phase(chi, g) == G.char_eval(G.unpack_character(chi), G.unpack(g)));
        CHECK(std::abs(G.chi(chi, g) - G.phase(chi, g).value()) < 1e-15);
        CHECK(G.phase(chi, G.neg(g)) == G.phase(chi, g).conj());
        for (Elem h = 0; h < static_cast<Elem>(q); ++h)
          CHECK(G.phase(chi, G.add(g, h)) == G.phase(chi, g) * G.phase(chi, h));
      }
    }
  }
}

TEST_CASE("character orthonormality") {
  const Group z2 = Group::parse("Z2");
  CHECK(std::abs(z2.char_inner(z2.character({1}), z2.character({1})) - 1.0) < 1e-15);
  const Group z3 = Group::parse("Z3");
  CHECK(std::abs(z3.char_inner(z3.trivial_character(), z3.character({1}))) < 1e-15);
  for (const char* name : kGroups) {
    CAPTURE(name);
    const Group G = Group::parse(name);
    const auto chars = G.enumerate_characters();
    for (const auto& a : chars)
      for (const auto& b : chars) {
        // Oracle: direct sum of the cached complex values.
        cplx s = 0.0;
        for (Elem g = 0; g < static_cast<Elem>(G.size()); ++g)
          s += std::conj(G.chi(G.pack(a), g)) * G.chi(G.pack(b), g);
        s /= static_cast<double>(G.size());
        const double want = a == b ? 1.0 : 0.0;
        CHECK(std::abs(G.char_inner(a, b) - want) < 1e-15);
        CHECK(std::abs(s - want) < 1e-12);
      }
  }
}

TEST_CASE("phase sums cancel exactly") {
  const Group z3 = Group::parse("Z3");
  PhaseSum s;
  for (Elem g = 0; g < 3; ++g) s.add(z3.phase(1, g));
  CHECK(s.value() == cplx(0.0, 0.0));
  PhaseSum t;
  t.add(Phase(1, 4), 2);
  t.add(Phase(3, 4), 2);
  CHECK(t.value() == cplx(0.0, 0.0));
}

TEST_CASE("format") {
  CHECK(Group::parse("Z3").format(2) == "2");
  const Group G = Group::parse("Z2xZ3");
  CHECK(G.format(G.pack(G.element({1, 2}))) == "(1,2)");
}
