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

#include "qdouble/linear_op.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace qdouble {

namespace {

constexpr double kDropCoef = 1e-14;

int pmod(int a, int n) {
  int r = a % n;
  return r < 0 ? r + n : r;
}

}  // namespace

// ---------------------------------------------------------------------------
// HilbertSpace

HilbertSpace::HilbertSpace(Group group, int num_edges)
    : group_(std::move(group)), num_edges_(num_edges), q_(static_cast<Index>(group_.size())) {
  if (num_edges < 0) throw std::invalid_argument("negative edge count");
  strides_.resize(num_edges + 1);
  Index s = 1;
  bool overflow = false;
  for (int e = 0; e <= num_edges; ++e) {
    strides_[e] = overflow ? 0 : s;
    if (e < num_edges) {
      if (s > (Index(1) << 62) / q_) overflow = true;
      else s *= q_;
    }
  }
  dim_ = overflow ? 0 : strides_[num_edges];
  if ((q_ & (q_ - 1)) == 0) {
    pow2_ = true;
    while ((Index(1) << bits_) < q_) ++bits_;
    mask_ = q_ - 1;
  }
}

double HilbertSpace::log2_dim() const { return num_edges_ * std::log2(static_cast<double>(q_)); }

std::vector<Elem> HilbertSpace::decode(Index x) const {
  std::vector<Elem> d(num_edges_);
  for (int e = 0; e < num_edges_; ++e) d[e] = digit(x, e);
  return d;
}

Index HilbertSpace::encode(std::span<const Elem> digits) const {
  if (static_cast<int>(digits.size()) != num_edges_) throw std::invalid_argument("digit count mismatch");
  Index x = 0;
  for (int e = 0; e < num_edges_; ++e) x += static_cast<Index>(digits[e]) * strides_[e];
  return x;
}

// ---------------------------------------------------------------------------
// Vectors

void SparseState::canonicalize(double drop) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t w = 0;
  for (std::size_t i = 0; i < entries.size();) {
    Index x = entries[i].first;
    cplx a{0.0, 0.0};
    while (i < entries.size() && entries[i].first == x) a += entries[i++].second;
    if (std::abs(a) > drop) entries[w++] = {x, a};
  }
  entries.resize(w);
}

double SparseState::norm() const {
  double s = 0.0;
  for (const auto& [x, a] : entries) s += std::norm(a);
  return std::sqrt(s);
}

void SparseState::normalize() {
  double n = norm();
  if (n == 0.0) throw std::runtime_error("cannot normalize the zero vector");
  scale(cplx(1.0 / n, 0.0));
}

void SparseState::scale(cplx s) {
  for (auto& e : entries) e.second *= s;
}

StateVector SparseState::to_dense(Index dim) const {
  StateVector v(dim, cplx(0.0, 0.0));
  for (const auto& [x, a] : entries) {
    if (x >= dim) throw std::out_of_range("sparse index beyond dimension");
    v[x] += a;
  }
  return v;
}

SparseState SparseState::from_dense(std::span<const cplx> v, double drop) {
  SparseState s;
  for (Index x = 0; x < v.size(); ++x)
    if (std::abs(v[x]) > drop) s.entries.emplace_back(x, v[x]);
  return s;
}

SparseState operator+(const SparseState& a, const SparseState& b) {
  SparseState out;
  out.entries.reserve(a.size() + b.size());
  out.entries = a.entries;
  out.entries.insert(out.entries.end(), b.entries.begin(), b.entries.end());
  out.canonicalize();
  return out;
}

SparseState operator-(const SparseState& a, const SparseState& b) { return a + cplx(-1.0, 0.0) * b; }

SparseState operator*(cplx s, const SparseState& a) {
  SparseState out = a;
  out.scale(s);
  return out;
}

cplx inner(const SparseState& a, const SparseState& b) {
  cplx s{0.0, 0.0};
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a.entries[i].first < b.entries[j].first) ++i;
    else if (a.entries[i].first > b.entries[j].first) ++j;
    else s += std::conj(a.entries[i++].second) * b.entries[j++].second;
  }
  return s;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner: size mismatch");
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm(std::span<const cplx> a) {
  double s = 0.0;
  for (const auto& x : a) s += std::norm(x);
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Monomial algebra

namespace {

Elem eval_form(const Group& G, const LinearForm& form, const std::vector<std::pair<int, Elem>>& values) {
  // values sorted by edge; missing edges are the identity.
  Elem acc = 0;
  std::size_t j = 0;
  for (const auto& [e, m] : form.terms) {
    while (j < values.size() && values[j].first < e) ++j;
    if (j < values.size() && values[j].first == e) acc = G.add(acc, G.scale(values[j].second, m));
  }
  return acc;
}

void canonicalize_shift(const Group& G, std::vector<std::pair<int, Elem>>& s) {
  std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<int, Elem>> out;
  for (const auto& [e, g] : s) {
    if (!out.empty() && out.back().first == e) out.back().second = G.add(out.back().second, g);
    else out.emplace_back(e, g);
  }
  std::erase_if(out, [](const auto& p) { return p.second == 0; });
  s = std::move(out);
}

void canonicalize_form(const Group& G, LinearForm& f) {
  std::sort(f.terms.begin(), f.terms.end());
  std::vector<std::pair<int, int>> out;
  for (const auto& [e, m] : f.terms) {
    if (!out.empty() && out.back().first == e) out.back().second += m;
    else out.emplace_back(e, m);
  }
  for (auto& p : out) p.second = pmod(p.second, G.exponent());
  std::erase_if(out, [](const auto& p) { return p.second == 0; });
  f.terms = std::move(out);
}

// Puts a monomial in canonical form. Returns the scalar pulled out of it
// (0 if the monomial vanishes identically).
cplx simplify(const Group& G, Monomial& m) {
  canonicalize_shift(G, m.shift);
  cplx scalar{1.0, 0.0};
  std::map<LinearForm, std::vector<cplx>> merged;
  for (auto& f : m.factors) {
    canonicalize_form(G, f.form);
    if (f.form.terms.empty()) {
      scalar *= f.table[0];
      continue;
    }
    auto it = merged.find(f.form);
    if (it == merged.end()) merged.emplace(f.form, std::move(f.table));
    else
      for (std::size_t z = 0; z < it->second.size(); ++z) it->second[z] *= f.table[z];
  }
  m.factors.clear();
  for (auto& [form, table] : merged) {
    bool all_zero = true, constant = true;
    for (const auto& v : table) {
      if (v != cplx(0.0, 0.0)) all_zero = false;
      if (v != table[0]) constant = false;
    }
    if (all_zero) return {0.0, 0.0};
    if (constant) {
      scalar *= table[0];
      continue;
    }
    m.factors.push_back(DiagFactor{form, std::move(table)});
  }
  return scalar;
}

// m_a * m_b: b acts first.
Monomial compose(const Group& G, const Monomial& a, const Monomial& b) {
  Monomial out;
  out.shift = b.shift;
  out.shift.insert(out.shift.end(), a.shift.begin(), a.shift.end());
  out.factors = b.factors;
  for (const auto& f : a.factors) {
    Elem off = eval_form(G, f.form, b.shift);
    DiagFactor g{f.form, std::vector<cplx>(f.table.size())};
    for (std::size_t z = 0; z < f.table.size(); ++z) g.table[z] = f.table[G.add(static_cast<Elem>(z), off)];
    out.factors.push_back(std::move(g));
  }
  return out;
}

// Per-term evaluator: for each configuration of the touched edges, the
// amplitude and the index offset of the image.
struct Compiled {
  std::vector<int> edges;
  std::vector<Index> strides;
  bool tabulated = false;
  std::vector<cplx> val;
  std::vector<std::int64_t> dx;
  const Term* term = nullptr;
  std::vector<Elem> shift_of;                // per touched edge
  std::vector<std::vector<int>> mult_of;     // [factor][touched edge]
};

Compiled compile(const HilbertSpace& H, const Term& t) {
  const Group& G = H.group();
  Compiled c;
  c.term = &t;
  for (const auto& [e, g] : t.mono.shift) c.edges.push_back(e);
  for (const auto& f : t.mono.factors)
    for (const auto& [e, m] : f.form.terms) c.edges.push_back(e);
  std::sort(c.edges.begin(), c.edges.end());
  c.edges.erase(std::unique(c.edges.begin(), c.edges.end()), c.edges.end());
  const std::size_t k = c.edges.size();
  for (int e : c.edges) c.strides.push_back(H.stride(e));
  c.shift_of.assign(k, 0);
  for (const auto& [e, g] : t.mono.shift)
    c.shift_of[std::lower_bound(c.edges.begin(), c.edges.end(), e) - c.edges.begin()] = g;
  c.mult_of.assign(t.mono.factors.size(), std::vector<int>(k, 0));
  for (std::size_t i = 0; i < t.mono.factors.size(); ++i)
    for (const auto& [e, m] : t.mono.factors[i].form.terms)
      c.mult_of[i][std::lower_bound(c.edges.begin(), c.edges.end(), e) - c.edges.begin()] = m;

  const double q = G.size();
  if (std::pow(q, static_cast<double>(k)) <= 65536.0) {
    c.tabulated = true;
    std::size_t n = 1;
    for (std::size_t i = 0; i < k; ++i) n *= G.size();
    c.val.resize(n);
    c.dx.resize(n);
    std::vector<Elem> d(k, 0);
    for (std::size_t idx = 0; idx < n; ++idx) {
      std::size_t r = idx;
      for (std::size_t i = 0; i < k; ++i) {
        d[i] = static_cast<Elem>(r % G.size());
        r /= G.size();
      }
      cplx v = t.coef;
      for (std::size_t fi = 0; fi < t.mono.factors.size(); ++fi) {
        Elem z = 0;
        for (std::size_t i = 0; i < k; ++i)
          if (c.mult_of[fi][i]) z = G.add(z, G.scale(d[i], c.mult_of[fi][i]));
        v *= t.mono.factors[fi].table[z];
      }
      std::int64_t off = 0;
      for (std::size_t i = 0; i < k; ++i)
        if (c.shift_of[i])
          off += (static_cast<std::int64_t>(G.add(d[i], c.shift_of[i])) - static_cast<std::int64_t>(d[i])) *
                 static_cast<std::int64_t>(c.strides[i]);
      c.val[idx] = v;
      c.dx[idx] = off;
    }
  }
  return c;
}

inline void evaluate(const HilbertSpace& H, const Compiled& c, Index x, cplx& v, Index& y) {
  const Group& G = H.group();
  const std::size_t k = c.edges.size();
  if (c.tabulated) {
    std::size_t idx = 0;
    for (std::size_t i = k; i-- > 0;) idx = idx * G.size() + H.digit(x, c.edges[i]);
    v = c.val[idx];
    y = static_cast<Index>(static_cast<std::int64_t>(x) + c.dx[idx]);
    return;
  }
  Elem d[64];
  std::vector<Elem> big;
  Elem* dp = d;
  if (k > 64) {
    big.resize(k);
    dp = big.data();
  }
  for (std::size_t i = 0; i < k; ++i) dp[i] = H.digit(x, c.edges[i]);
  v = c.term->coef;
  for (std::size_t fi = 0; fi < c.term->mono.factors.size(); ++fi) {
    Elem z = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (c.mult_of[fi][i]) z = G.add(z, G.scale(dp[i], c.mult_of[fi][i]));
    v *= c.term->mono.factors[fi].table[z];
  }
  y = x;
  for (std::size_t i = 0; i < k; ++i)
    if (c.shift_of[i]) {
      Elem nd = G.add(dp[i], c.shift_of[i]);
      y = y - static_cast<Index>(dp[i]) * c.strides[i] + static_cast<Index>(nd) * c.strides[i];
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// LinearOp

LinearOp LinearOp::identity(SpacePtr space) { return scalar(std::move(space), cplx(1.0, 0.0)); }

LinearOp LinearOp::scalar(SpacePtr space, cplx c) {
  LinearOp op(std::move(space));
  if (c != cplx(0.0, 0.0)) op.terms_.push_back(Term{c, Monomial{}});
  return op;
}

LinearOp LinearOp::shift(SpacePtr space, const std::vector<std::pair<int, Elem>>& s) {
  LinearOp op(std::move(space));
  Term t{cplx(1.0, 0.0), Monomial{s, {}}};
  for (const auto& [e, g] : s)
    if (e < 0 || e >= op.space_->num_edges() || g >= static_cast<Elem>(op.space_->group().size()))
      throw std::invalid_argument("shift: edge or element out of range");
  t.coef *= simplify(op.space_->group(), t.mono);
  op.add_term(t);
  return op;
}

LinearOp LinearOp::diag(SpacePtr space, const LinearForm& form, std::vector<cplx> table) {
  LinearOp op(std::move(space));
  if (static_cast<int>(table.size()) != op.space_->group().size())
    throw std::invalid_argument("diag: table size must equal |G|");
  for (const auto& [e, m] : form.terms)
    if (e < 0 || e >= op.space_->num_edges()) throw std::invalid_argument("diag: edge out of range");
  Term t{cplx(1.0, 0.0), Monomial{{}, {DiagFactor{form, std::move(table)}}}};
  t.coef *= simplify(op.space_->group(), t.mono);
  if (t.coef != cplx(0.0, 0.0)) op.add_term(t);
  return op;
}

void LinearOp::add_term(const Term& t) {
  if (std::abs(t.coef) < kDropCoef) return;
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (it->mono == t.mono) {
      it->coef += t.coef;
      if (std::abs(it->coef) < kDropCoef) terms_.erase(it);
      return;
    }
  }
  terms_.push_back(t);
}

LinearOp& LinearOp::operator+=(const LinearOp& other) {
  if (!space_) space_ = other.space_;
  for (const auto& t : other.terms_) add_term(t);
  return *this;
}

LinearOp& LinearOp::operator-=(const LinearOp& other) {
  if (!space_) space_ = other.space_;
  for (auto t : other.terms_) {
    t.coef = -t.coef;
    add_term(t);
  }
  return *this;
}

LinearOp& LinearOp::operator*=(cplx s) {
  if (s == cplx(0.0, 0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coef *= s;
  return *this;
}

LinearOp operator*(const LinearOp& a, const LinearOp& b) {
  SpacePtr space = a.space_ ? a.space_ : b.space_;
  LinearOp out(space);
  if (!space) return out;
  const Group& G = space->group();
  for (const auto& ta : a.terms_)
    for (const auto& tb : b.terms_) {
      Term t{ta.coef * tb.coef, compose(G, ta.mono, tb.mono)};
      t.coef *= simplify(G, t.mono);
      out.add_term(t);
    }
  return out;
}

LinearOp LinearOp::adjoint() const {
  LinearOp out(space_);
  if (!space_) return out;
  const Group& G = space_->group();
  for (const auto& t : terms_) {
    Term a;
    a.coef = std::conj(t.coef);
    for (const auto& [e, g] : t.mono.shift) a.mono.shift.emplace_back(e, G.neg(g));
    for (const auto& f : t.mono.factors) {
      Elem off = eval_form(G, f.form, t.mono.shift);
      DiagFactor g{f.form, std::vector<cplx>(f.table.size())};
      for (std::size_t z = 0; z < f.table.size(); ++z)
        g.table[z] = std::conj(f.table[G.add(static_cast<Elem>(z), G.neg(off))]);
      a.mono.factors.push_back(std::move(g));
    }
    a.coef *= simplify(G, a.mono);
    out.add_term(a);
  }
  return out;
}

std::vector<int> LinearOp::support() const {
  std::vector<int> s;
  for (const auto& t : terms_) {
    for (const auto& [e, g] : t.mono.shift) s.push_back(e);
    for (const auto& f : t.mono.factors)
      for (const auto& [e, m] : f.form.terms) s.push_back(e);
  }
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

double LinearOp::norm_bound() const {
  double b = 0.0;
  for (const auto& t : terms_) {
    double m = std::abs(t.coef);
    for (const auto& f : t.mono.factors) {
      double mx = 0.0;
      for (const auto& v : f.table) mx = std::max(mx, std::abs(v));
      m *= mx;
    }
    b += m;
  }
  return b;
}

void LinearOp::apply(std::span<const cplx> in, std::span<cplx> out) const {
  if (!space_) throw std::logic_error("apply on an operator without a space");
  CompiledOp(*this).apply(in, out);
}

StateVector LinearOp::apply(const StateVector& in) const {
  StateVector out(in.size());
  apply(std::span<const cplx>(in), std::span<cplx>(out));
  return out;
}

SparseState LinearOp::apply(const SparseState& in) const {
  if (!space_) throw std::logic_error("apply on an operator without a space");
  return CompiledOp(*this).apply(in);
}

// ---------------------------------------------------------------------------
// CompiledOp

struct CompiledOp::Impl {
  std::vector<Term> terms;
  std::vector<Compiled> compiled;
};

CompiledOp::CompiledOp(const LinearOp& op) : space_(op.space()) {
  if (!space_) throw std::logic_error("CompiledOp: operator without a space");
  auto impl = std::make_shared<Impl>();
  impl->terms = op.terms();
  for (const auto& t : impl->terms) impl->compiled.push_back(compile(*space_, t));
  impl_ = std::move(impl);
}

void CompiledOp::column(Index x, std::vector<std::pair<Index, cplx>>& out) const {
  cplx v;
  Index y;
  for (const auto& c : impl_->compiled) {
    if (c.edges.empty()) {
      out.emplace_back(x, c.term->coef);
      continue;
    }
    evaluate(*space_, c, x, v, y);
    if (v != cplx(0.0, 0.0)) out.emplace_back(y, v);
  }
}

SparseState CompiledOp::apply(const SparseState& in) const {
  SparseState out;
  out.entries.reserve(in.size() * std::max<std::size_t>(1, impl_->compiled.size()));
  cplx v;
  Index y;
  for (const auto& c : impl_->compiled) {
    for (const auto& [x, a] : in.entries) {
      if (c.edges.empty()) {
        out.entries.emplace_back(x, c.term->coef * a);
        continue;
      }
      evaluate(*space_, c, x, v, y);
      if (v != cplx(0.0, 0.0)) out.entries.emplace_back(y, v * a);
    }
  }
  out.canonicalize();
  return out;
}

void CompiledOp::apply(std::span<const cplx> in, std::span<cplx> out) const {
  const Index dim = space_->dim();
  if (dim == 0 || in.size() != dim || out.size() != dim) throw std::invalid_argument("apply: dimension mismatch");
  std::fill(out.begin(), out.end(), cplx(0.0, 0.0));
  cplx v;
  Index y;
  for (const auto& c : impl_->compiled) {
    if (c.edges.empty()) {
      for (Index x = 0; x < dim; ++x) out[x] += c.term->coef * in[x];
      continue;
    }
    for (Index x = 0; x < dim; ++x) {
      if (in[x] == cplx(0.0, 0.0)) continue;
      evaluate(*space_, c, x, v, y);
      if (v != cplx(0.0, 0.0)) out[y] += v * in[x];
    }
  }
}

LinearOp LinearOp::restrict_to(const std::vector<int>& edges) const {
  if (!space_) throw std::logic_error("restrict_to on an operator without a space");
  std::map<int, int> remap;
  for (std::size_t k = 0; k < edges.size(); ++k) remap[edges[k]] = static_cast<int>(k);
  auto sub = std::make_shared<const HilbertSpace>(space_->group(), static_cast<int>(edges.size()));
  LinearOp out(sub);
  auto map_edge = [&](int e) {
    auto it = remap.find(e);
    if (it == remap.end()) throw std::invalid_argument("restrict_to: support not contained in edge list");
    return it->second;
  };
  for (auto t : terms_) {
    for (auto& [e, g] : t.mono.shift) e = map_edge(e);
    for (auto& f : t.mono.factors)
      for (auto& [e, m] : f.form.terms) e = map_edge(e);
    t.coef *= simplify(sub->group(), t.mono);
    out.add_term(t);
  }
  return out;
}

LinearOp commutator(const LinearOp& a, const LinearOp& b) { return a * b - b * a; }

// ---------------------------------------------------------------------------
// Comparison

StateVector random_state(Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uni = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
  StateVector v(dim);
  for (auto& x : v) {
    double re = uni();
    double im = uni();
    x = cplx(re, im);
  }
  return v;
}

OpDistance op_distance_probes(const LinearOp& a, const LinearOp& b, std::uint64_t seed, int probes) {
  const SpacePtr& space = a.space() ? a.space() : b.space();
  LinearOp d = a - b;
  OpDistance out{0.0, "probes", probes};
  const Index dim = space->dim();
  if (dim == 0 || dim > (Index(1) << 27)) throw std::length_error("probe comparison: dimension too large");
  StateVector y(dim);
  for (int p = 0; p < probes; ++p) {
    StateVector psi = random_state(dim, seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(p + 1));
    d.apply(psi, y);
    out.residual = std::max(out.residual, norm(y) / norm(psi));
  }
  return out;
}

OpDistance op_distance(const LinearOp& a, const LinearOp& b, std::uint64_t seed, int probes) {
  const SpacePtr& space = a.space() ? a.space() : b.space();
  LinearOp d = a - b;
  if (d.is_zero()) return OpDistance{0.0, "exhaustive", 0};
  const Group& G = space->group();

  // Monomials with different shifts send a basis vector to different basis
  // vectors, so each column splits into independent per-shift sums that
  // depend only on the edges entering the diagonal factors.
  std::map<std::vector<std::pair<int, Elem>>, std::vector<const Term*>> groups;
  std::vector<int> form_edges;
  for (const auto& t : d.terms()) {
    groups[t.mono.shift].push_back(&t);
    for (const auto& f : t.mono.factors)
      for (const auto& [e, m] : f.form.terms) form_edges.push_back(e);
  }
  std::sort(form_edges.begin(), form_edges.end());
  form_edges.erase(std::unique(form_edges.begin(), form_edges.end()), form_edges.end());

  const double configs = std::pow(static_cast<double>(G.size()), static_cast<double>(form_edges.size()));
  if (configs <= static_cast<double>(1 << 18)) {
    const std::size_t n = static_cast<std::size_t>(configs);
    const std::size_t k = form_edges.size();
    std::vector<std::pair<int, Elem>> values(k);
    double worst = 0.0;
    for (std::size_t idx = 0; idx < n; ++idx) {
      std::size_t r = idx;
      for (std::size_t i = 0; i < k; ++i) {
        values[i] = {form_edges[i], static_cast<Elem>(r % G.size())};
        r /= G.size();
      }
      double col = 0.0;
      for (const auto& [shift, terms] : groups) {
        cplx s{0.0, 0.0};
        for (const Term* t : terms) {
          cplx v = t->coef;
          for (const auto& f : t->mono.factors) v *= f.table[eval_form(G, f.form, values)];
          s += v;
        }
        col += std::norm(s);
      }
      worst = std::max(worst, std::sqrt(col));
    }
    return OpDistance{worst, "exhaustive", 0};
  }

  std::vector<int> supp = a.support();
  auto sb = b.support();
  supp.insert(supp.end(), sb.begin(), sb.end());
  std::sort(supp.begin(), supp.end());
  supp.erase(std::unique(supp.begin(), supp.end()), supp.end());
  return op_distance_probes(a.restrict_to(supp), b.restrict_to(supp), seed, probes);
}

std::vector<cplx> to_dense_matrix(const LinearOp& a) {
  const Index dim = a.space()->dim();
  if (dim == 0 || dim > 8192) throw std::length_error("to_dense_matrix: dimension too large");
  std::vector<cplx> m(dim * dim, cplx(0.0, 0.0));
  for (Index j = 0; j < dim; ++j) {
    SparseState col = a.apply(SparseState::basis(j));
    for (const auto& [i, v] : col.entries) m[i * dim + j] = v;
  }
  return m;
}

}  // namespace qdouble
