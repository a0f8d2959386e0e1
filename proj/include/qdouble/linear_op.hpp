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

#ifndef QDOUBLE_LINEAR_OP_HPP
#define QDOUBLE_LINEAR_OP_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qdouble/group.hpp"

namespace qdouble {

using Index = std::uint64_t;
using StateVector = std::vector<cplx>;

/// (C^{|G|})^{\otimes E} with mixed-radix basis indexing, edge 0 least
/// significant.
class HilbertSpace {
 public:
  HilbertSpace(Group group, int num_edges);

  const Group& group() const { return group_; }
  int num_edges() const { return num_edges_; }
  /// |G|^E, or 0 if it does not fit in 63 bits.
  Index dim() const { return dim_; }
  /// log2(|G|^E), usable when dim() overflows.
  double log2_dim() const;
  Index stride(int e) const { return strides_[e]; }

  Elem digit(Index x, int e) const {
    if (pow2_) return static_cast<Elem>((x >> (bits_ * e)) & mask_);
    return static_cast<Elem>((x / strides_[e]) % q_);
  }
  Index with_digit(Index x, int e, Elem v) const {
    return x - static_cast<Index>(digit(x, e)) * strides_[e] + static_cast<Index>(v) * strides_[e];
  }
  std::vector<Elem> decode(Index x) const;
  Index encode(std::span<const Elem> digits) const;

 private:
  Group group_;
  int num_edges_;
  Index dim_ = 0;
  Index q_;
  bool pow2_ = false;
  int bits_ = 0;
  Index mask_ = 0;
  std::vector<Index> strides_;
};

using SpacePtr = std::shared_ptr<const HilbertSpace>;

/// Sparse vector: sorted (index, amplitude) pairs without duplicates.
struct SparseState {
  std::vector<std::pair<Index, cplx>> entries;

  static SparseState basis(Index x) { return SparseState{{{x, cplx(1.0, 0.0)}}}; }
  /// Sorts, merges duplicates, drops entries with |a| <= drop.
  void canonicalize(double drop = 0.0);
  double norm() const;
  void normalize();
  void scale(cplx s);
  std::size_t size() const { return entries.size(); }
  StateVector to_dense(Index dim) const;
  static SparseState from_dense(std::span<const cplx> v, double drop = 0.0);
};

SparseState operator+(const SparseState& a, const SparseState& b);
SparseState operator-(const SparseState& a, const SparseState& b);
SparseState operator*(cplx s, const SparseState& a);
cplx inner(const SparseState& a, const SparseState& b);  // <a, b>, antilinear in a
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
double norm(std::span<const cplx> a);

/// Integer combination sum_k m_k x_{e_k} of edge values.
struct LinearForm {
  std::vector<std::pair<int, int>> terms;  // (edge, multiplier), sorted by edge
  bool operator==(const LinearForm&) const = default;
  auto operator<=>(const LinearForm&) const = default;
};

/// Diagonal factor x -> table[l(x)].
struct DiagFactor {
  LinearForm form;
  std::vector<cplx> table;  // indexed by packed group element
  bool operator==(const DiagFactor&) const = default;
};

/// M|x> = prod_k table_k[l_k(x)] |x + shift>.
struct Monomial {
  std::vector<std::pair<int, Elem>> shift;  // sorted by edge, no identity entries
  std::vector<DiagFactor> factors;          // sorted by form, distinct forms
  bool operator==(const Monomial&) const = default;
};

struct Term {
  cplx coef{1.0, 0.0};
  Monomial mono;
};

/// Matrix-free operator: a finite sum of weighted monomials. All model
/// operators (stars, plaquettes, ribbons, projectors, Hamiltonians) are
/// exactly of this form for abelian G, so composition and adjoints are
/// computed symbolically and never materialize a matrix.
class LinearOp {
 public:
  LinearOp() = default;
  explicit LinearOp(SpacePtr space) : space_(std::move(space)) {}

  static LinearOp zero(SpacePtr space) { return LinearOp(std::move(space)); }
  static LinearOp identity(SpacePtr space);
  static LinearOp scalar(SpacePtr space, cplx c);
  /// x_e -> x_e + shift_e on the listed edges.
  static LinearOp shift(SpacePtr space, const std::vector<std::pair<int, Elem>>& shift);
  static LinearOp diag(SpacePtr space, const LinearForm& form, std::vector<cplx> table);

  const SpacePtr& space() const { return space_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  LinearOp adjoint() const;
  /// Sorted set of edges the operator acts on nontrivially.
  std::vector<int> support() const;

  LinearOp& operator+=(const LinearOp& other);
  LinearOp& operator-=(const LinearOp& other);
  LinearOp& operator*=(cplx s);
  friend LinearOp operator+(LinearOp a, const LinearOp& b) { return a += b; }
  friend LinearOp operator-(LinearOp a, const LinearOp& b) { return a -= b; }
  friend LinearOp operator*(cplx s, LinearOp a) { return a *= s; }
  friend LinearOp operator*(LinearOp a, cplx s) { return a *= s; }
  /// Composition: (a * b)|x> = a(b|x>).
  friend LinearOp operator*(const LinearOp& a, const LinearOp& b);

  /// Dense application: out = A in. Requires dim() to fit in memory.
  void apply(std::span<const cplx> in, std::span<cplx> out) const;
  StateVector apply(const StateVector& in) const;
  SparseState apply(const SparseState& in) const;

  /// Same operator on the |S|-edge space of the listed edges (which must
  /// contain the support); edge k of the result is edges[k].
  LinearOp restrict_to(const std::vector<int>& edges) const;

  /// Bound on the operator norm: sum_t |c_t| max|d_t|.
  double norm_bound() const;

 private:
  void add_term(const Term& t);

  SpacePtr space_;
  std::vector<Term> terms_;
};

LinearOp commutator(const LinearOp& a, const LinearOp& b);

/// A LinearOp with its per-term evaluation tables built once, for repeated
/// application (column generation, iterative solvers).
class CompiledOp {
 public:
  explicit CompiledOp(const LinearOp& op);
  const SpacePtr& space() const { return space_; }
  /// Appends the nonzero entries of A|x> (unmerged).
  void column(Index x, std::vector<std::pair<Index, cplx>>& out) const;
  SparseState apply(const SparseState& in) const;
  void apply(std::span<const cplx> in, std::span<cplx> out) const;

 private:
  struct Impl;
  SpacePtr space_;
  std::shared_ptr<const Impl> impl_;
};

/// Result of comparing two operators.
struct OpDistance {
  double residual = 0.0;  // max column norm (exhaustive) or max relative probe residual
  std::string method;     // "exhaustive" or "probes"
  int probes = 0;
};

/// ||A - B|| by the exhaustive column scan when the difference depends on few
/// enough edges, otherwise by seeded random probes on the joint support.
OpDistance op_distance(const LinearOp& a, const LinearOp& b, std::uint64_t seed, int probes = 8);
/// Same, always with dense random probes on the full space.
OpDistance op_distance_probes(const LinearOp& a, const LinearOp& b, std::uint64_t seed, int probes = 8);

/// Deterministic random complex vector (components uniform in the unit square).
StateVector random_state(Index dim, std::uint64_t seed);

/// Dense matrix in row-major order, for small spaces.
std::vector<cplx> to_dense_matrix(const LinearOp& a);

}  // namespace qdouble

#endif  // QDOUBLE_LINEAR_OP_HPP
