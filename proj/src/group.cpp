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

#include "qdouble/group.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qdouble {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::int64_t mod(std::int64_t a, std::int64_t n) {
  std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

std::vector<std::int64_t> prime_factors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Phase

Phase::Phase(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw std::invalid_argument("Phase: denominator must be positive");
  num = mod(num, den);
  std::int64_t g = std::gcd(num, den);
  if (g == 0) g = den;
  num_ = num / g;
  den_ = den / g;
}

Phase Phase::operator*(const Phase& other) const {
  std::int64_t l = std::lcm(den_, other.den_);
  return Phase(num_ * (l / den_) + other.num_ * (l / other.den_), l);
}

Phase Phase::conj() const { return Phase(-num_, den_); }

cplx Phase::value() const {
  // Exact on the axes; everything else goes through sin/cos once.
  if (num_ == 0) return {1.0, 0.0};
  if (4 * num_ == den_) return {0.0, 1.0};
  if (2 * num_ == den_) return {-1.0, 0.0};
  if (4 * num_ == 3 * den_) return {0.0, -1.0};
  double a = kTwoPi * static_cast<double>(num_) / static_cast<double>(den_);
  return {std::cos(a), std::sin(a)};
}

std::string Phase::str() const {
  if (num_ == 0) return "0";
  return std::to_string(num_) + "/" + std::to_string(den_);
}

// ---------------------------------------------------------------------------
// PhaseSum

void PhaseSum::add(const Phase& p, std::int64_t count) {
  if (count != 0) terms_.emplace_back(p, count);
}

cplx PhaseSum::value() const {
  if (terms_.empty()) return {0.0, 0.0};
  std::int64_t L = 1;
  for (const auto& t : terms_) L = std::lcm(L, t.first.den());
  std::vector<std::int64_t> counts(static_cast<std::size_t>(L), 0);
  for (const auto& [p, c] : terms_) counts[p.num() * (L / p.den())] += c;

  // sum_{j} w^{a + j L/p} = 0 for every prime p | L. Subtracting the minimum
  // over each coset removes complete sets of roots without changing the sum.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::int64_t p : prime_factors(L)) {
      std::int64_t step = L / p;
      for (std::int64_t a = 0; a < step; ++a) {
        std::int64_t lo = counts[a], hi = counts[a];
        for (std::int64_t j = 1; j < p; ++j) {
          lo = std::min(lo, counts[a + j * step]);
          hi = std::max(hi, counts[a + j * step]);
        }
        // Shift toward zero: remove positive sets, or add back negative ones.
        std::int64_t shift = 0;
        if (lo > 0) shift = lo;
        else if (hi < 0) shift = hi;
        if (shift != 0) {
          for (std::int64_t j = 0; j < p; ++j) counts[a + j * step] -= shift;
          changed = true;
        }
      }
    }
  }
  cplx acc{0.0, 0.0};
  for (std::int64_t k = 0; k < L; ++k) {
    if (counts[k] != 0) acc += static_cast<double>(counts[k]) * Phase(k, L).value();
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Group

Group Group::make(std::vector<int> orders) {
  Group G;
  for (int n : orders) {
    if (n < 1) throw std::invalid_argument("group factor orders must be >= 1");
    if (n > 1) G.orders_.push_back(n);
  }
  if (G.orders_.empty()) throw std::invalid_argument("trivial group is not supported");
  std::int64_t size = 1;
  std::int64_t expo = 1;
  for (int n : G.orders_) {
    size *= n;
    expo = std::lcm(expo, static_cast<std::int64_t>(n));
    if (size > 256) throw std::invalid_argument("group too large (|G| <= 256)");
  }
  G.size_ = static_cast<int>(size);
  G.exponent_ = static_cast<int>(expo);

  auto tables = std::make_shared<Tables>();
  const int q = G.size_;
  tables->add.resize(static_cast<std::size_t>(q) * q);
  tables->neg.resize(q);
  tables->chi.resize(static_cast<std::size_t>(q) * q);
  std::vector<GroupElement> elems(q);
  for (int a = 0; a < q; ++a) elems[a] = G.unpack(static_cast<Elem>(a));
  for (int a = 0; a < q; ++a) {
    tables->neg[a] = G.pack(G.inv(elems[a]));
    for (int b = 0; b < q; ++b) {
      tables->add[a * q + b] = G.pack(G.mul(elems[a], elems[b]));
      Character chi{elems[a].digits};
      tables->chi[a * q + b] = G.char_eval(chi, elems[b]).value();
    }
  }
  tables->scale.resize(static_cast<std::size_t>(G.exponent_) * q);
  for (int a = 0; a < q; ++a) {
    Elem acc = 0;
    for (int m = 0; m < G.exponent_; ++m) {
      tables->scale[static_cast<std::size_t>(m) * q + a] = acc;
      acc = tables->add[acc * q + a];
    }
  }
  G.tables_ = std::move(tables);
  return G;
}

Group Group::parse(std::string_view spec) {
  std::string s;
  for (char ch : spec) {
    if (!std::isspace(static_cast<unsigned char>(ch)))
      s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  if (s.empty()) throw std::invalid_argument("empty group spec");
  std::vector<int> orders;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find('x', pos);
    std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (tok.size() < 2 || tok[0] != 'z')
      throw std::invalid_argument("bad group factor '" + tok + "' in '" + std::string(spec) + "'");
    std::string digits = tok.substr(1);
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
        digits.size() > 6)
      throw std::invalid_argument("bad group order '" + digits + "'");
    int n = std::stoi(digits);
    if (n < 1) throw std::invalid_argument("group order must be >= 1, got " + digits);
    orders.push_back(n);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return make(orders);
}

std::string Group::name() const {
  std::string out;
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    if (i) out += "x";
    out += "Z" + std::to_string(orders_[i]);
  }
  return out;
}

void Group::check_digits(const std::vector<int>& digits) const {
  if (digits.size() != orders_.size())
    throw std::invalid_argument("element does not belong to group " + name());
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] < 0 || digits[i] >= orders_[i])
      throw std::invalid_argument("digit out of range for group " + name());
  }
}

GroupElement Group::identity() const { return GroupElement{std::vector<int>(orders_.size(), 0)}; }

GroupElement Group::element(std::vector<int> digits) const {
  if (digits.size() != orders_.size())
    throw std::invalid_argument("element does not belong to group " + name());
  for (std::size_t i = 0; i < digits.size(); ++i) digits[i] = static_cast<int>(mod(digits[i], orders_[i]));
  return GroupElement{std::move(digits)};
}

GroupElement Group::mul(const GroupElement& g, const GroupElement& h) const {
  check_digits(g.digits);
  check_digits(h.digits);
  GroupElement out{g.digits};
  for (std::size_t i = 0; i < orders_.size(); ++i) out.digits[i] = (g.digits[i] + h.digits[i]) % orders_[i];
  return out;
}

GroupElement Group::inv(const GroupElement& g) const {
  check_digits(g.digits);
  GroupElement out{g.digits};
  for (std::size_t i = 0; i < orders_.size(); ++i) out.digits[i] = (orders_[i] - g.digits[i]) % orders_[i];
  return out;
}

Character Group::trivial_character() const { return Character{std::vector<int>(orders_.size(), 0)}; }

Character Group::character(std::vector<int> digits) const { return Character{element(std::move(digits)).digits}; }

Character Group::dual_mul(const Character& a, const Character& b) const {
  return Character{mul(GroupElement{a.digits}, GroupElement{b.digits}).digits};
}

Character Group::dual_inv(const Character& a) const { return Character{inv(GroupElement{a.digits}).digits}; }

Phase Group::char_eval(const Character& chi, const GroupElement& g) const {
  check_digits(chi.digits);
  check_digits(g.digits);
  std::int64_t num = 0;
  for (std::size_t i = 0; i < orders_.size(); ++i)
    num += static_cast<std::int64_t>(chi.digits[i]) * g.digits[i] * (exponent_ / orders_[i]);
  return Phase(num, exponent_);
}

cplx Group::char_inner(const Character& chi1, const Character& chi2) const {
  PhaseSum sum;
  for (const auto& g : enumerate_elements()) sum.add(char_eval(chi1, g).conj() * char_eval(chi2, g));
  return sum.value() / static_cast<double>(size_);
}

std::vector<GroupElement> Group::enumerate_elements() const {
  std::vector<GroupElement> out;
  out.reserve(size_);
  std::vector<int> d(orders_.size(), 0);
  for (int k = 0; k < size_; ++k) {
    out.push_back(GroupElement{d});
    for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) {
      if (++d[i] < orders_[i]) break;
      d[i] = 0;
    }
  }
  return out;
}

std::vector<Character> Group::enumerate_characters() const {
  std::vector<Character> out;
  for (auto& g : enumerate_elements()) out.push_back(Character{std::move(g.digits)});
  return out;
}

Elem Group::pack(const GroupElement& g) const {
  check_digits(g.digits);
  Elem e = 0;
  for (int i = static_cast<int>(orders_.size()) - 1; i >= 0; --i) e = e * orders_[i] + g.digits[i];
  return e;
}

Elem Group::pack(const Character& chi) const { return pack(GroupElement{chi.digits}); }

GroupElement Group::unpack(Elem e) const {
  if (e >= static_cast<Elem>(size_)) throw std::invalid_argument("packed element out of range");
  GroupElement g{std::vector<int>(orders_.size())};
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    g.digits[i] = static_cast<int>(e % orders_[i]);
    e /= orders_[i];
  }
  return g;
}

Character Group::unpack_character(Elem e) const { return Character{unpack(e).digits}; }

Phase Group::phase(Elem chi, Elem g) const {
  return char_eval(unpack_character(chi), unpack(g));
}

std::string Group::format(Elem e) const {
  GroupElement g = unpack(e);
  if (g.digits.size() == 1) return std::to_string(g.digits[0]);
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < g.digits.size(); ++i) os << (i ? "," : "") << g.digits[i];
  os << ")";
  return os.str();
}

}  // namespace qdouble
