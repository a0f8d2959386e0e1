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

#include "qdouble/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <iterator>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <unordered_map>

namespace qdouble {

namespace {

using MatC = Eigen::MatrixXcd;

constexpr Index kDenseMax = 4096;
constexpr Index kAutoDenseMax = 256;
constexpr std::size_t kBlockMax = 4096;
constexpr Index kBlockDimMax = Index(1) << 28;

double residual_norm(const CompiledOp& H, const SparseState& v, double lambda) {
  SparseState hv = H.apply(v);
  return (hv - cplx(lambda, 0.0) * v).norm();
}

// Shift vectors present in H, each as a list of (edge, element).
std::vector<std::vector<std::pair<int, Elem>>> distinct_shifts(const LinearOp& op) {
  std::vector<std::vector<std::pair<int, Elem>>> out;
  for (const auto& t : op.terms()) {
    if (t.mono.shift.empty()) continue;
    if (std::find(out.begin(), out.end(), t.mono.shift) == out.end()) out.push_back(t.mono.shift);
  }
  return out;
}

// Calls fn(orbit, block) for every orbit of the basis under the shifts of H.
void for_each_block(const LinearOp& op, const std::function<void(const std::vector<Index>&, const MatC&)>& fn) {
  const HilbertSpace& S = *op.space();
  const Index dim = S.dim();
  if (dim == 0 || dim > kBlockDimMax) throw std::length_error("block diagonalization: dimension too large");
  const Group& G = S.group();
  auto shifts = distinct_shifts(op);
  CompiledOp H(op);
  std::vector<bool> seen(dim, false);
  std::vector<Index> orbit;
  std::vector<std::pair<Index, cplx>> col;
  for (Index x0 = 0; x0 < dim; ++x0) {
    if (seen[x0]) continue;
    orbit.clear();
    orbit.push_back(x0);
    seen[x0] = true;
    for (std::size_t head = 0; head < orbit.size(); ++head) {
      const Index x = orbit[head];
      for (const auto& s : shifts) {
        Index y = x;
        for (const auto& [e, g] : s) y = S.with_digit(y, e, G.add(S.digit(y, e), g));
        if (!seen[y]) {
          seen[y] = true;
          orbit.push_back(y);
        }
      }
      if (orbit.size() > kBlockMax) throw std::length_error("block diagonalization: orbit too large");
    }
    std::sort(orbit.begin(), orbit.end());
    const auto n = static_cast<Eigen::Index>(orbit.size());
    MatC block = MatC::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      col.clear();
      H.column(orbit[j], col);
      for (const auto& [y, v] : col) {
        auto it = std::lower_bound(orbit.begin(), orbit.end(), y);
        if (it == orbit.end() || *it != y) throw std::logic_error("block diagonalization: orbit not closed");
        block(it - orbit.begin(), j) += v;
      }
    }
    fn(orbit, block);
  }
}

MatC dense_matrix(const LinearOp& op) {
  const Index dim = op.space()->dim();
  if (dim == 0 || dim > kDenseMax) throw std::length_error("dense method: dimension too large");
  CompiledOp H(op);
  MatC m = MatC::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  std::vector<std::pair<Index, cplx>> col;
  for (Index j = 0; j < dim; ++j) {
    col.clear();
    H.column(j, col);
    for (const auto& [i, v] : col) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += v;
  }
  return m;
}

SparseState column_to_sparse(const Eigen::VectorXcd& v, const std::vector<Index>* rows) {
  SparseState s;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > 1e-14) s.entries.emplace_back(rows ? (*rows)[i] : static_cast<Index>(i), v(i));
  s.canonicalize();
  return s;
}

void check_hermitian(const MatC& m) {
  double err = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (err > 1e-10) throw std::runtime_error("Hamiltonian block is not hermitian");
}

struct Pair {
  double value;
  SparseState vec;
};

// Lowest eigenpairs from the block decomposition.
std::vector<Pair> block_lowest(const LinearOp& op, std::size_t k) {
  auto cmp = [](const Pair& a, const Pair& b) { return a.value < b.value; };
  std::priority_queue<Pair, std::vector<Pair>, decltype(cmp)> heap(cmp);
  for_each_block(op, [&](const std::vector<Index>& orbit, const MatC& block) {
    check_hermitian(block);
    Eigen::SelfAdjointEigenSolver<MatC> es(block);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      double lam = es.eigenvalues()(i);
      if (heap.size() < k) heap.push({lam, column_to_sparse(es.eigenvectors().col(i), &orbit)});
      else if (lam < heap.top().value - 1e-12) {
        heap.pop();
        heap.push({lam, column_to_sparse(es.eigenvectors().col(i), &orbit)});
      } else
        break;
    }
  });
  std::vector<Pair> out;
  while (!heap.empty()) {
    out.push_back(heap.top());
    heap.pop();
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// Chebyshev-filtered subspace iteration on dense vectors.
std::vector<Pair> iterative_lowest(const LinearOp& op, std::size_t k, std::size_t block, std::uint64_t seed) {
  const Index dim = op.space()->dim();
  if (dim == 0 || dim > (Index(1) << 26)) throw std::length_error("iterative method: dimension too large");
  block = std::min<std::size_t>(std::max(block, k + 4), static_cast<std::size_t>(dim));
  CompiledOp H(op);
  const double upper = op.norm_bound();
  const auto n = static_cast<Eigen::Index>(dim);
  const auto b = static_cast<Eigen::Index>(block);
  MatC X(n, b);
  for (Eigen::Index j = 0; j < b; ++j) {
    StateVector r = random_state(dim, seed + 1000003ull * static_cast<std::uint64_t>(j + 1));
    X.col(j) = Eigen::Map<Eigen::VectorXcd>(r.data(), n);
  }
  auto apply = [&](const MatC& in) {
    MatC out(n, in.cols());
    for (Eigen::Index j = 0; j < in.cols(); ++j)
      H.apply(std::span<const cplx>(in.col(j).data(), dim), std::span<cplx>(out.col(j).data(), dim));
    return out;
  };
  auto orthonormalize = [&](MatC& M) {
    Eigen::HouseholderQR<MatC> qr(M);
    M = qr.householderQ() * MatC::Identity(n, M.cols());
  };
  orthonormalize(X);
  Eigen::VectorXd ritz;
  for (int iter = 0; iter < 400; ++iter) {
    MatC HX = apply(X);
    MatC T = X.adjoint() * HX;
    T = 0.5 * (T + T.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<MatC> es(T);
    X = (X * es.eigenvectors()).eval();
    HX = (HX * es.eigenvectors()).eval();
    ritz = es.eigenvalues();
    double worst = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      auto r = HX.col(static_cast<Eigen::Index>(i)) - ritz(static_cast<Eigen::Index>(i)) * X.col(static_cast<Eigen::Index>(i));
      worst = std::max(worst, r.norm());
    }
    if (worst < 1e-10) {
      std::vector<Pair> out;
      for (std::size_t i = 0; i < k; ++i) out.push_back({ritz(static_cast<Eigen::Index>(i)), column_to_sparse(X.col(static_cast<Eigen::Index>(i)), nullptr)});
      return out;
    }
    // Filter: damp [cut, upper], amplify below cut.
    const double cut = ritz(b - 1);
    const double e = (upper - cut) / 2.0;
    const double c = (upper + cut) / 2.0;
    if (e <= 0) break;
    MatC Y = (apply(X) - c * X) / e;
    MatC Xprev = X;
    for (int d = 2; d <= 10; ++d) {
      MatC Ynew = 2.0 * (apply(Y) - c * Y) / e - Xprev;
      Xprev = Y;
      Y = Ynew;
    }
    X = Y;
    orthonormalize(X);
  }
  throw std::runtime_error("iterative eigensolver did not converge");
}

std::vector<Pair> lowest_pairs(const LinearOp& op, std::size_t k, SpectralMethod method, std::uint64_t seed) {
  const Index dim = op.space()->dim();
  if (dim == 0) throw std::length_error("dimension overflows");
  if (method == SpectralMethod::Auto) method = dim <= kAutoDenseMax ? SpectralMethod::Dense : SpectralMethod::Block;
  k = std::min<std::size_t>(k, static_cast<std::size_t>(dim));
  if (method == SpectralMethod::Dense) {
    MatC m = dense_matrix(op);
    check_hermitian(m);
    Eigen::SelfAdjointEigenSolver<MatC> es(m);
    std::vector<Pair> out;
    for (std::size_t i = 0; i < k; ++i)
      out.push_back({es.eigenvalues()(static_cast<Eigen::Index>(i)),
                     column_to_sparse(es.eigenvectors().col(static_cast<Eigen::Index>(i)), nullptr)});
    return out;
  }
  if (method == SpectralMethod::Block) return block_lowest(op, k);
  if (method == SpectralMethod::Iterative) return iterative_lowest(op, k, k + 8, seed);
  throw std::invalid_argument("spectrum: unsupported method " + method_name(method));
}

}  // namespace

SpectralMethod parse_method(const std::string& s) {
  if (s == "auto") return SpectralMethod::Auto;
  if (s == "dense") return SpectralMethod::Dense;
  if (s == "block") return SpectralMethod::Block;
  if (s == "projector_rank") return SpectralMethod::ProjectorRank;
  if (s == "iterative") return SpectralMethod::Iterative;
  throw std::invalid_argument("unknown method '" + s + "'");
}

std::string method_name(SpectralMethod m) {
  switch (m) {
    case SpectralMethod::Auto: return "auto";
    case SpectralMethod::Dense: return "dense";
    case SpectralMethod::Block: return "block";
    case SpectralMethod::ProjectorRank: return "projector_rank";
    case SpectralMethod::Iterative: return "iterative";
  }
  return "auto";
}

GroundBasis ground_space(const Hamiltonian& Ham, SpectralMethod method, std::size_t max_dim, std::uint64_t seed) {
  const LinearOp& op = Ham.op;
  const Index dim = op.space()->dim();
  if (dim == 0) throw std::length_error("dimension overflows");
  if (method == SpectralMethod::Auto) method = dim <= kAutoDenseMax ? SpectralMethod::Dense : SpectralMethod::Block;
  CompiledOp H(op);
  GroundBasis out;
  out.method = method_name(method);

  if (method == SpectralMethod::Dense) {
    MatC m = dense_matrix(op);
    check_hermitian(m);
    Eigen::SelfAdjointEigenSolver<MatC> es(m);
    for (Eigen::Index i = 0; i < es.eigenvalues().size() && es.eigenvalues()(i) < kKernelTol; ++i)
      out.vectors.push_back(column_to_sparse(es.eigenvectors().col(i), nullptr));
  } else if (method == SpectralMethod::Block) {
    for_each_block(op, [&](const std::vector<Index>& orbit, const MatC& block) {
      check_hermitian(block);
      Eigen::SelfAdjointEigenSolver<MatC> es(block);
      for (Eigen::Index i = 0; i < es.eigenvalues().size() && es.eigenvalues()(i) < kKernelTol; ++i)
        out.vectors.push_back(column_to_sparse(es.eigenvectors().col(i), &orbit));
    });
  } else if (method == SpectralMethod::ProjectorRank) {
    if (Ham.boundary != Boundary::None)
      throw std::invalid_argument("projector_rank needs H = sum of (I - P) with commuting projectors P");
    // Diagonal projectors filter basis states; the others are applied.
    std::vector<CompiledOp> diag, offdiag;
    for (const auto& t : Ham.terms) {
      LinearOp P = LinearOp::identity(op.space()) - t;
      bool is_diag = std::all_of(P.terms().begin(), P.terms().end(), [](const Term& u) { return u.mono.shift.empty(); });
      (is_diag ? diag : offdiag).emplace_back(P);
    }
    if (dim > kBlockDimMax) throw std::length_error("projector_rank: dimension too large");
    std::vector<bool> covered(dim, false);
    std::vector<SparseState> images;
    std::vector<std::pair<Index, cplx>> col;
    for (Index x = 0; x < dim; ++x) {
      if (covered[x]) continue;
      bool pass = true;
      for (const auto& P : diag) {
        col.clear();
        P.column(x, col);
        cplx s{0.0, 0.0};
        for (const auto& [y, v] : col) s += v;
        if (std::abs(s) < 0.5) {
          pass = false;
          break;
        }
      }
      if (!pass) continue;
      SparseState v = SparseState::basis(x);
      for (const auto& P : offdiag) v = P.apply(v);
      v.canonicalize(1e-14);
      if (v.size() == 0) continue;
      // P A_v^g = P, so every basis state in the image has the same image.
      for (const auto& [y, a] : v.entries) covered[y] = true;
      images.push_back(std::move(v));
    }
    out.vectors = orthonormal_basis(images);
  } else if (method == SpectralMethod::Iterative) {
    auto pairs = iterative_lowest(op, max_dim + 1, max_dim + 8, seed);
    if (pairs.back().value < kKernelTol)
      throw std::runtime_error("iterative kernel: dimension exceeds max_dim, increase it");
    for (auto& p : pairs)
      if (p.value < kKernelTol) out.vectors.push_back(std::move(p.vec));
    out.vectors = orthonormal_basis(out.vectors);
  } else {
    throw std::invalid_argument("ground_space: unsupported method");
  }

  for (const auto& v : out.vectors) out.max_residual = std::max(out.max_residual, H.apply(v).norm());
  if (out.vectors.size() <= 512) {
    for (std::size_t i = 0; i < out.vectors.size(); ++i)
      for (std::size_t j = i; j < out.vectors.size(); ++j) {
        cplx g = inner(out.vectors[i], out.vectors[j]);
        out.max_gram_error = std::max(out.max_gram_error, std::abs(g - (i == j ? 1.0 : 0.0)));
      }
  } else {
    for (const auto& v : out.vectors) out.max_gram_error = std::max(out.max_gram_error, std::abs(v.norm() - 1.0));
  }
  return out;
}

std::vector<Eigenpair> spectrum_lowest(const Hamiltonian& Ham, int k, SpectralMethod method, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("spectrum_lowest: k must be >= 1");
  auto pairs = lowest_pairs(Ham.op, static_cast<std::size_t>(k), method, seed);
  CompiledOp H(Ham.op);
  std::vector<Eigenpair> out;
  for (const auto& p : pairs) out.push_back({p.value, residual_norm(H, p.vec, p.value)});
  std::sort(out.begin(), out.end(), [](const Eigenpair& a, const Eigenpair& b) { return a.value < b.value; });
  return out;
}

std::vector<double> full_spectrum(const Hamiltonian& Ham) {
  std::vector<double> out;
  for_each_block(Ham.op, [&](const std::vector<Index>&, const MatC& block) {
    check_hermitian(block);
    Eigen::SelfAdjointEigenSolver<MatC> es(block, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
  });
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Groups of vectors whose supports are connected through shared indices.
std::vector<std::vector<std::size_t>> support_components(const std::vector<SparseState>& vectors) {
  std::vector<std::size_t> parent(vectors.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  std::unordered_map<Index, std::size_t> owner;
  for (std::size_t i = 0; i < vectors.size(); ++i)
    for (const auto& [x, a] : vectors[i].entries) {
      auto [it, fresh] = owner.emplace(x, i);
      if (!fresh) parent[find(i)] = find(it->second);
    }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < vectors.size(); ++i)
    if (vectors[i].size() > 0) groups[find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [r, g] : groups) out.push_back(std::move(g));
  return out;
}

template <typename Fn>
void for_each_component_svd(const std::vector<SparseState>& vectors, bool want_u, Fn fn) {
  for (const auto& comp : support_components(vectors)) {
    std::vector<Index> rows;
    for (std::size_t i : comp)
      for (const auto& [x, a] : vectors[i].entries) rows.push_back(x);
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    if (static_cast<double>(rows.size()) * static_cast<double>(comp.size()) > 4e7)
      throw std::length_error("numerical rank: component too large");
    MatC M = MatC::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(comp.size()));
    for (std::size_t j = 0; j < comp.size(); ++j) {
      const SparseState& v = vectors[comp[j]];
      double nv = v.norm();
      for (const auto& [x, a] : v.entries) {
        auto r = std::lower_bound(rows.begin(), rows.end(), x) - rows.begin();
        M(r, static_cast<Eigen::Index>(j)) = a / nv;
      }
    }
    if (want_u) {
      Eigen::BDCSVD<MatC> svd(M, Eigen::ComputeThinU);
      fn(rows, svd.singularValues(), &svd.matrixU());
    } else {
      Eigen::BDCSVD<MatC> svd(M);
      fn(rows, svd.singularValues(), nullptr);
    }
  }
}

}  // namespace

std::size_t numerical_rank(const std::vector<SparseState>& vectors, double tol) {
  std::size_t rank = 0;
  for_each_component_svd(vectors, false, [&](const std::vector<Index>&, const Eigen::VectorXd& s, const MatC*) {
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > tol) ++rank;
  });
  return rank;
}

std::vector<SparseState> orthonormal_basis(const std::vector<SparseState>& vectors, double tol) {
  std::vector<SparseState> out;
  for_each_component_svd(vectors, true, [&](const std::vector<Index>& rows, const Eigen::VectorXd& s, const MatC* U) {
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > tol) out.push_back(column_to_sparse(U->col(i), &rows));
  });
  return out;
}

std::size_t SpanAccumulator::find_group(std::size_t g) {
  while (parent_[g] != g) g = parent_[g] = parent_[parent_[g]];
  return g;
}

bool SpanAccumulator::add(const SparseState& v) {
  const double nv = v.norm();
  if (nv < 1e-300) return false;
  // Groups touched by v.
  std::vector<std::size_t> touched;
  for (const auto& [x, a] : v.entries) {
    auto it = owner_.find(x);
    if (it == owner_.end()) continue;
    std::size_t g = find_group(it->second);
    if (std::find(touched.begin(), touched.end(), g) == touched.end()) touched.push_back(g);
  }
  std::size_t target;
  if (touched.empty()) {
    target = groups_.size();
    groups_.emplace_back();
    parent_.push_back(target);
  } else {
    target = touched.front();
    for (std::size_t k = 1; k < touched.size(); ++k) {
      Group& other = groups_[touched[k]];
      Group& t = groups_[target];
      for (auto& b : other.basis) t.basis.push_back(std::move(b));
      std::vector<Index> rows;
      std::merge(t.rows.begin(), t.rows.end(), other.rows.begin(), other.rows.end(), std::back_inserter(rows));
      t.rows = std::move(rows);
      other = Group{};
      other.alive = false;
      parent_[touched[k]] = target;
    }
  }
  Group& grp = groups_[target];
  std::vector<Index> rows;
  for (const auto& [x, a] : v.entries) rows.push_back(x);
  std::vector<Index> merged;
  std::set_union(grp.rows.begin(), grp.rows.end(), rows.begin(), rows.end(), std::back_inserter(merged));
  grp.rows = std::move(merged);
  for (const auto& [x, a] : v.entries) owner_[x] = target;
  // The group is full once its basis spans all of its rows.
  if (grp.basis.size() >= grp.rows.size()) return false;
  SparseState w = v;
  w.scale(1.0 / nv);
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : grp.basis) w = w - inner(b, w) * b;
  w.canonicalize(1e-15);
  const double r = w.norm();
  if (r <= tol_) return false;
  w.scale(1.0 / r);
  grp.basis.push_back(std::move(w));
  ++rank_;
  return true;
}

std::vector<SparseState> SpanAccumulator::basis() const {
  std::vector<SparseState> out;
  for (const auto& g : groups_)
    if (g.alive) out.insert(out.end(), g.basis.begin(), g.basis.end());
  return out;
}

std::size_t SectorTable::sum() const {
  std::size_t s = 0;
  for (const auto& e : entries) s += e.dim;
  return s;
}

SectorTable sector_dims(const Model& model) {
  GroundBasis ker = ground_space(model.hamiltonian(Boundary::EpsMu), SpectralMethod::Auto);
  return sector_dims(model, ker);
}

SectorTable sector_dims(const Model& model, const GroundBasis& ker) {
  SectorTable table;
  table.total = ker.dim();
  for (int chi = 0; chi < model.q(); ++chi)
    for (int c = 0; c < model.q(); ++c) {
      CompiledOp D(model.global_charge_proj(static_cast<Elem>(chi), static_cast<Elem>(c)));
      std::vector<SparseState> images;
      for (const auto& v : ker.vectors) {
        SparseState w = D.apply(v);
        w.canonicalize(1e-12);
        if (w.norm() > 1e-10) images.push_back(std::move(w));
      }
      table.entries.push_back({static_cast<Elem>(chi), static_cast<Elem>(c), numerical_rank(images)});
    }
  return table;
}

EnergyCheck excitation_energy_check(const Model& model, const Ribbon& rho, Elem chi, Elem c,
                                    const GroundBasis& ground) {
  if (rho.closed()) throw std::invalid_argument("excitation_energy_check: ribbon must be open");
  CompiledOp H(model.hamiltonian(Boundary::None).op);
  CompiledOp F(model.ribbon_op_char(rho, chi, c));
  EnergyCheck out;
  bool first = true;
  for (const auto& omega : ground.vectors) {
    SparseState phi = F.apply(omega);
    double nphi = phi.norm();
    if (nphi < 1e-12) continue;
    SparseState hphi = H.apply(phi);
    double e = inner(phi, hphi).real() / (nphi * nphi);
    if (first) {
      out.energy = e;
      first = false;
    }
    out.max_spread = std::max(out.max_spread, std::abs(e - out.energy));
    out.max_residual = std::max(out.max_residual, (hphi - cplx(out.energy, 0.0) * phi).norm() / nphi);
    ++out.vectors;
  }
  if (first) throw std::runtime_error("excitation_energy_check: empty ground basis");
  return out;
}

}  // namespace qdouble
