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

#ifndef QDOUBLE_STATES_HPP
#define QDOUBLE_STATES_HPP

#include <cstdint>
#include <vector>

#include "qdouble/linear_op.hpp"
#include "qdouble/operators.hpp"

namespace qdouble {

/// Finite-volume state: rho = sum_i w_i |v_i><v_i| with unit vectors v_i
/// and weights summing to one. A pure state has a single vector.
class StateFunctional {
 public:
  StateFunctional() = default;
  static StateFunctional pure(SparseState v);
  static StateFunctional mixture(std::vector<SparseState> vectors, std::vector<double> weights);
  static StateFunctional uniform(std::vector<SparseState> vectors);
  /// a * wa + b * wb, weights renormalized.
  static StateFunctional combine(const StateFunctional& a, double wa, const StateFunctional& b, double wb);

  bool is_pure() const { return vectors_.size() == 1; }
  const std::vector<SparseState>& vectors() const { return vectors_; }
  const std::vector<double>& weights() const { return weights_; }

  cplx expect(const LinearOp& a) const;
  cplx expect(const CompiledOp& a) const;
  /// omega(I).
  double trace() const;

 private:
  std::vector<SparseState> vectors_;
  std::vector<double> weights_;
};

/// prod_v A_v prod_f B_f |e,...,e>, normalized.
SparseState vector_seed_ground(const Model& model);

/// Random elements of G_L: the star projectors applied to random gauge
/// transforms of the identity configuration (gauge moves at every vertex,
/// rim included, so the samples span G_L).
std::vector<SparseState> ground_samples(const Model& model, std::size_t count, std::uint64_t seed);

enum class GroundChoice { VectorSeed, UniformMixture };

StateFunctional frustration_free_state(const Model& model, GroundChoice choice = GroundChoice::VectorSeed);

struct Excitation {
  Site site;
  Ribbon ribbon;
  Elem chi = 0;
  Elem c = 0;
  SparseState omega;   // ground vector the ribbon acts on
  SparseState vector;  // F_rho^{chi,c} omega, normalized
  StateFunctional state;
};

/// F_rho^{chi,c} Omega for the default ribbon from an interior site s to the
/// boundary and the vector-seed Omega.
Excitation single_excitation_state(const Model& model, const Site& s, Elem chi, Elem c);
Excitation single_excitation_state(const Model& model, const Ribbon& rho, Elem chi, Elem c);

struct SectorWeight {
  Elem chi = 0;
  Elem c = 0;
  double lambda = 0.0;
};

struct SectorWeights {
  std::vector<SectorWeight> entries;  // characters outer, fluxes inner
  double sum() const;
  double at(Elem chi, Elem c) const;
};

/// lambda_{chi,c} = omega(D_L^{chi,c}).
SectorWeights sector_weights(const StateFunctional& omega, const Model& model);

/// A -> omega(D A D) / omega(D) with D = D_L^{chi,c}.
StateFunctional conditional_sector_state(const StateFunctional& omega, const Model& model, Elem chi, Elem c);
/// omega(A D) / omega(D), the one-sided form.
cplx conditional_one_sided(const StateFunctional& omega, const Model& model, Elem chi, Elem c, const LinearOp& a);

/// F_rho^{chi,c*} A F_rho^{chi,c}.
LinearOp charge_transport(const Model& model, const Ribbon& rho, Elem chi, Elem c, const LinearOp& a);

struct GshamTerms {
  double h = 0.0;    // <H_L>
  double eps = 0.0;  // <D_L^eps>
  double mu = 0.0;   // <D_L^mu>
};

GshamTerms gsham_terms(const Model& model, const SparseState& psi);
/// max_psi |<psi, (H_L - D^eps - D^mu) psi>| over the given vectors.
double gshambound_check(const Model& model, const std::vector<SparseState>& vectors);

struct ConstancyResult {
  double max_deviation = 0.0;
  std::size_t probes = 0;
  std::vector<cplx> small_values;
  std::vector<cplx> large_values;
};

/// Single-excitation expectations of a probe family around s, evaluated in
/// `small` and in `large` with `small` placed at offset (dx, dy). The large
/// ribbon continues the small one to the large boundary.
ConstancyResult eventual_constancy_check(const Model& small, const Model& large, int dx, int dy, const Site& s,
                                         Elem chi, Elem c);

}  // namespace qdouble

#endif  // QDOUBLE_STATES_HPP
