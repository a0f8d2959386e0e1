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

#ifndef QDOUBLE_GROUP_HPP
#define QDOUBLE_GROUP_HPP

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qdouble {

using cplx = std::complex<double>;

/// Packed group element: mixed-radix integer, little-endian in factor order.
using Elem = std::uint32_t;

/// Exact root of unity e^{2 pi i q} with q = num/den reduced into [0, 1).
class Phase {
 public:
  Phase() = default;
  Phase(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Phase operator*(const Phase& other) const;
  Phase conj() const;
  bool operator==(const Phase&) const = default;

  /// The only lossy step. Quarter turns are returned exactly.
  cplx value() const;
  std::string str() const;  // "p/q", or "0"

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Accumulates a multiset of exact phases and sums them, cancelling complete
/// sets of p-th roots of unity exactly before converting to floating point.
class PhaseSum {
 public:
  void add(const Phase& p, std::int64_t count = 1);
  cplx value() const;

 private:
  std::vector<std::pair<Phase, std::int64_t>> terms_;
};

class Group;

struct GroupElement {
  std::vector<int> digits;
  bool operator==(const GroupElement&) const = default;
};

/// Character of an abelian group, stored under the canonical isomorphism
/// with G for the fixed factor decomposition.
struct Character {
  std::vector<int> digits;
  bool operator==(const Character&) const = default;
};

/// Finite abelian group Z_{n_1} x ... x Z_{n_k}.
///
/// Besides the digit-vector API, the group exposes packed arithmetic on
/// `Elem` through precomputed tables; the Hilbert space code works
/// exclusively with packed elements.
class Group {
 public:
  /// Drops order-1 factors. Throws std::invalid_argument for the trivial
  /// group or orders < 1.
  static Group make(std::vector<int> orders);
  /// "Z2", "z3", "Z2xZ4".
  static Group parse(std::string_view spec);

  const std::vector<int>& orders() const { return orders_; }
  int size() const { return size_; }
  /// lcm of the factor orders.
  int exponent() const { return exponent_; }
  std::string name() const;

  bool operator==(const Group& other) const { return orders_ == other.orders_; }

  // Digit-level API.
  GroupElement identity() const;
  GroupElement element(std::vector<int> digits) const;
  GroupElement mul(const GroupElement& g, const GroupElement& h) const;
  GroupElement inv(const GroupElement& g) const;
  Character trivial_character() const;
  Character character(std::vector<int> digits) const;
  Character dual_mul(const Character& a, const Character& b) const;
  Character dual_inv(const Character& a) const;
  Phase char_eval(const Character& chi, const GroupElement& g) const;
  /// (1/|G|) sum_g conj(chi1(g)) chi2(g), summed exactly.
  cplx char_inner(const Character& chi1, const Character& chi2) const;
  /// Lexicographic on digits, first factor most significant; first is e.
  std::vector<GroupElement> enumerate_elements() const;
  std::vector<Character> enumerate_characters() const;

  // Packed API.
  Elem pack(const GroupElement& g) const;
  Elem pack(const Character& chi) const;
  GroupElement unpack(Elem e) const;
  Character unpack_character(Elem e) const;
  Elem add(Elem a, Elem b) const { return tables_->add[a * size_ + b]; }
  Elem neg(Elem a) const { return tables_->neg[a]; }
  /// m * a (m taken modulo the exponent).
  Elem scale(Elem a, int m) const {
    int r = m % exponent_;
    if (r < 0) r += exponent_;
    return tables_->scale[static_cast<std::size_t>(r) * size_ + a];
  }
  /// Exact exponent of chi(g) for packed chi and g.
  Phase phase(Elem chi, Elem g) const;
  /// chi(g) as a complex number (cached).
  cplx chi(Elem chi, Elem g) const { return tables_->chi[chi * size_ + g]; }
  std::string format(Elem e) const;  // "(d0,d1)" or "d0"

 private:
  struct Tables {
    std::vector<Elem> add;
    std::vector<Elem> neg;
    std::vector<Elem> scale;  // [m * |G| + a], m in [0, exponent)
    std::vector<cplx> chi;
  };

  void check_digits(const std::vector<int>& digits) const;

  std::vector<int> orders_;
  int size_ = 1;
  int exponent_ = 1;
  std::shared_ptr<const Tables> tables_;
};

}  // namespace qdouble

#endif  // QDOUBLE_GROUP_HPP
