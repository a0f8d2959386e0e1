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

#ifndef QDOUBLE_SPECTRAL_HPP
#define QDOUBLE_SPECTRAL_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "qdouble/linear_op.hpp"
#include "qdouble/operators.hpp"

namespace qdouble {

/// Eigenvalues below this count as zero.
inline constexpr double kKernelTol = 1e-8;

enum class SpectralMethod { Auto, Dense, Block, ProjectorRank, Iterative };

SpectralMethod parse_method(const std::string& s);
std::string method_name(SpectralMethod m);

struct GroundBasis {
  std::vector<SparseState> vectors;  // orthonormal
  std::string method;
  double max_residual = 0.0;    // max ||H v||
  double max_gram_error = 0.0;  // max |<v_i, v_j> - delta_ij| (0 if not computed)
  std::size_t dim() const { return vectors.size(); }
};

struct Eigenpair {
  double value = 0.0;
  double residual = 0.0;
};

/// Kernel of H. Dense: full diagonalization (dim <= 4096). Block: the
/// basis splits into orbits of the shifts appearing in H and each orbit
/// block is diagonalized separately. ProjectorRank: range of the product of
/// the star and plaquette projectors (boundary None only). Iterative:
/// Chebyshev-filtered subspace iteration (needs an upper bound on the
/// kernel dimension, pass it via max_dim).
GroundBasis ground_space(const Hamiltonian& H, SpectralMethod method = SpectralMethod::Auto,
                         std::size_t max_dim = 64, std::uint64_t seed = 7);

/// Lowest k eigenvalues with residuals ||Hv - lambda v||, nondecreasing.
std::vector<Eigenpair> spectrum_lowest(const Hamiltonian& H, int k, SpectralMethod method = SpectralMethod::Auto,
                                       std::uint64_t seed = 7);

/// Every eigenvalue of H (block method). Only for moderate dimensions.
std::vector<double> full_spectrum(const Hamiltonian& H);

/// Numerical rank of a set of sparse vectors (each normalized first), with
/// singular value threshold tol. Vectors are split into groups with
/// connected supports and each group is handled by an SVD.
std::size_t numerical_rank(const std::vector<SparseState>& vectors, double tol = kKernelTol);
/// Orthonormal basis of the span, same splitting.
std::vector<SparseState> orthonormal_basis(const std::vector<SparseState>& vectors, double tol = kKernelTol);

/// Span of a stream of sparse vectors, built by Gram-Schmidt inside groups
/// of vectors with connected supports. Suited to very many vectors whose
/// supports fall into small groups.
class SpanAccumulator {
 public:
  explicit SpanAccumulator(double tol = kKernelTol) : tol_(tol) {}
  /// Adds v; returns true if it enlarged the span.
  bool add(const SparseState& v);
  std::size_t rank() const { return rank_; }
  std::vector<SparseState> basis() const;

 private:
  struct Group {
    std::vector<Index> rows;  // sorted support of the group
    std::vector<SparseState> basis;
    bool alive = true;
  };
  std::size_t find_group(std::size_t g);

  double tol_;
  std::size_t rank_ = 0;
  std::vector<Group> groups_;
  std::vector<std::size_t> parent_;
  std::unordered_map<Index, std::size_t> owner_;
};

struct SectorEntry {
  Elem chi = 0;
  Elem c = 0;
  std::size_t dim = 0;
};

struct SectorTable {
  std::vector<SectorEntry> entries;  // characters outer, fluxes inner
  std::size_t total = 0;             // dim of ker H^{eps,mu}
  std::size_t sum() const;
};

/// Dimensions of D_L^{chi,c} ker H^{eps,mu}.
SectorTable sector_dims(const Model& model);
SectorTable sector_dims(const Model& model, const GroundBasis& ker_eps_mu);

struct EnergyCheck {
  double energy = 0.0;         // common eigenvalue of H_L on F Omega
  double max_residual = 0.0;   // max ||H F Omega - energy F Omega|| / ||F Omega||
  double max_spread = 0.0;     // max deviation of the Rayleigh quotients
  std::size_t vectors = 0;
};

/// H_L F_rho^{chi,c} Omega for every Omega of the ground basis.
EnergyCheck excitation_energy_check(const Model& model, const Ribbon& rho, Elem chi, Elem c,
                                    const GroundBasis& ground);

}  // namespace qdouble

#endif  // QDOUBLE_SPECTRAL_HPP
