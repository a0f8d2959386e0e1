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

#ifndef QDOUBLE_OPERATORS_HPP
#define QDOUBLE_OPERATORS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "qdouble/group.hpp"
#include "qdouble/lattice.hpp"
#include "qdouble/linear_op.hpp"

namespace qdouble {

enum class Boundary { None, Eps, Mu, EpsMu };
enum class ChargeType { Electric, Magnetic };

Boundary parse_boundary(std::string_view s);
std::string boundary_name(Boundary b);

struct Hamiltonian {
  LinearOp op;
  std::vector<LinearOp> terms;  // I - A_v, I - B_f, then -V terms
  Boundary boundary = Boundary::None;
};

/// The quantum double model for an abelian group on a region.
///
/// Conventions: A_v^g adds g to the edges leaving v and subtracts it from
/// the edges entering v; B_f^h projects on counterclockwise holonomy h;
/// F_rho^{h,g} = delta(W_rho = g) T_h, where W_rho is the signed sum of the
/// direct edges and T_h shifts every dual edge by +-h.
class Model {
 public:
  Model(Group group, Region region);

  const Group& group() const { return group_; }
  const Region& region() const { return region_; }
  const SpacePtr& space() const { return space_; }
  int q() const { return group_.size(); }

  LinearOp identity() const { return LinearOp::identity(space_); }

  LinearForm holonomy(Face f) const;
  LinearForm ribbon_form(const Ribbon& r) const;
  std::vector<std::pair<int, Elem>> ribbon_shift(const Ribbon& r, Elem h) const;

  LinearOp star_op(Vertex v, Elem g) const;
  LinearOp plaquette_op(Face f, Elem h) const;
  LinearOp star_proj(Vertex v) const;
  LinearOp plaquette_proj(Face f) const;

  LinearOp ribbon_op(const Ribbon& r, Elem h, Elem g) const;
  LinearOp ribbon_op_char(const Ribbon& r, Elem chi, Elem c) const;

  LinearOp charge_proj_vertex(Vertex v, Elem chi) const;
  LinearOp charge_proj_face(Face f, Elem c) const;
  LinearOp charge_proj_site(const Site& s, Elem chi, Elem c) const;

  /// D_L^chi via (1/|G|) sum_g conj(chi(g)) prod_v A_v^g.
  LinearOp global_charge_vertex(Elem chi) const;
  /// D_L^c: projector onto total flux c, i.e. delta(sum_f hol_f = c).
  LinearOp global_charge_face(Elem c) const;
  LinearOp global_charge_proj(Elem chi, Elem c) const;
  /// D_L^eps = I - D_L^iota, D_L^mu = I - D_L^e.
  LinearOp global_nontrivial(ChargeType type) const;
  /// Configuration-sum definitions, exponential in the number of stars or
  /// faces. Oracle for tiny regions.
  LinearOp global_charge_vertex_bruteforce(Elem chi) const;
  LinearOp global_charge_face_bruteforce(Elem c) const;

  /// V_L^eps, V_L^mu built from the boundary ribbon.
  LinearOp boundary_wilson(ChargeType type) const;

  Hamiltonian hamiltonian(Boundary boundary = Boundary::None) const;

  /// Number of endpoints of r that are interior sites.
  int interior_endpoints(const Ribbon& r) const;
  /// Energy F_rho^{chi,c} adds to a ground state of H_L: each endpoint whose
  /// vertex carries a star contributes 1 - delta_{chi,iota}, each endpoint
  /// whose face is a plaquette 1 - delta_{c,e}. Requires distinct endpoint
  /// vertices and faces.
  double expected_energy(const Ribbon& r, Elem chi, Elem c) const;

 private:
  void check_vertex(Vertex v) const;
  void check_face(Face f) const;
  void check_ribbon(const Ribbon& r) const;
  void check_elem(Elem g) const;

  Group group_;
  Region region_;
  SpacePtr space_;
};

/// [H, A], the finite-volume derivation.
LinearOp finite_commutator(const Hamiltonian& H, const LinearOp& a);

}  // namespace qdouble

#endif  // QDOUBLE_OPERATORS_HPP
