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

#ifndef QDOUBLE_LEMMA_SUITE_HPP
#define QDOUBLE_LEMMA_SUITE_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdouble/group.hpp"
#include "qdouble/lattice.hpp"

namespace qdouble {

inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kKernelBasisTol = 1e-10;
inline constexpr double kEigenTol = 1e-8;
/// log2 of the default dimension cap.
inline constexpr double kLog2DimCap = 26.0;

class DimensionCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws DimensionCapError if |G|^E exceeds 2^log2_cap.
void enforce_dim_cap(const Group& group, const Region& region, double log2_cap = kLog2DimCap);

struct CheckInfo {
  std::string id;
  std::string anchor;
  double threshold = kAlgebraTol;
  bool needs_boundary = false;
  bool informational = false;
};

/// Every check id, sorted.
const std::vector<CheckInfo>& check_catalog();

struct CheckResult {
  std::string id;
  std::string anchor;
  std::string region;
  std::string group;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
  bool skipped = false;
  bool informational = false;
  std::string note;  // skip reason or extra detail
  double wall_seconds = 0.0;
};

struct VerificationReport {
  std::vector<CheckResult> results;  // ordered by id
  std::uint64_t seed = 7;
  std::string group;
  std::string region;
  std::map<std::string, double> threshold_overrides;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
  std::size_t informational = 0;
  bool ok() const { return failed == 0; }
};

/// Runs the whole battery. Thresholds may be overridden per check id.
VerificationReport run_suite(const Group& group, const Region& region, std::uint64_t seed = 7,
                             const std::map<std::string, double>& threshold_overrides = {});

/// One check, or every check whose id starts with `id + "."` combined into a
/// single result (max residual, min threshold). Unknown ids throw
/// std::invalid_argument.
CheckResult run_check(const std::string& id, const Group& group, const Region& region, std::uint64_t seed = 7);

std::string format_report(const VerificationReport& report);
std::string report_json(const VerificationReport& report);

/// Up to `count` other ribbons with the endpoints of `base` that differ from it
/// by a contractible detour. With `framed` the detour itself closes into a
/// valid ribbon.
std::vector<Ribbon> alternative_ribbons(const Region& region, const Ribbon& base, std::size_t count, bool framed);

struct BraidEntry {
  Elem chi = 0;
  Elem c = 0;
  Elem xi = 0;
  Elem d = 0;
  Phase measured;   // s in F_rho F_sigma = s F_sigma F_rho
  Phase predicted;  // chi(d) conj(xi(c))
  double residual = 0.0;  // |s - predicted|
};

struct BraidTable {
  std::vector<BraidEntry> entries;  // (chi,c) outer, (xi,d) inner
  double max_residual = 0.0;  // against the prediction
  double max_rounding = 0.0;  // distance of measured scalars from the nearest exact phase
  bool matches() const { return max_residual < kAlgebraTol; }
};

/// Crossing scalars of a horizontal and a vertical ribbon through the star at
/// v (both three triangles long). Needs v and its four neighbours in the
/// region.
BraidTable braid_table(const Group& group, const Region& region, Vertex v, std::uint64_t seed = 7);
/// Same on free 3x3 around the centre.
BraidTable braid_table(const Group& group, std::uint64_t seed = 7);

}  // namespace qdouble

#endif  // QDOUBLE_LEMMA_SUITE_HPP
