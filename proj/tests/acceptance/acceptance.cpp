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


// One line per acceptance criterion. Exit status is 0 when every criterion
// passes; with --allow-known-divergence, failures that come only from the
// crossing-phase table on groups of exponent > 2 are reported but tolerated.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qdouble/lemma_suite.hpp"
#include "qdouble/spectral.hpp"
#include "qdouble/states.hpp"

using namespace qdouble;

namespace {

struct Verdict {
  bool pass = true;
  bool known_divergence = false;  // every failure is a crossing-phase mismatch
  std::string detail;
};

class Detail {
 public:
  void add(const std::string& s) { os_ << (first_ ? "" : "; ") << s; first_ = false; }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
  bool first_ = true;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1e", x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Case {
  const char* group;
  const char* region;
};

// A check passes a criterion when it passes its own threshold and, unless it
// is a count, stays under `tol`.
bool check_ok(const CheckResult& r, double tol) {
  if (r.skipped) return true;
  if (!r.pass) return false;
  return r.threshold >= 0.5 || r.residual < tol;
}

Verdict criterion1() {
  const std::vector<Case> cases = {{"Z2", "free:3x3"}, {"Z3", "free:3x3"}, {"Z2", "torus:3x3"}, {"Z4", "free:3x3"}};
  const std::vector<std::string> ids = {"rel",           "eq.ribprop1",           "eq.ribstarrel",
                                        "eq.ribHamrel",  "eq.ribenergy",          "eq.closedribbon",
                                        "eq.ribbonconcatenation", "eq.qdgsspan", "eq.ribbonrelation",
                                        "eq.ribbonpathind"};
  Verdict v;
  Detail d;
  bool other_failure = false;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& c : cases) {
    const Group G = Group::parse(c.group);
    const Region R = Region::parse(c.region);
    double worst = 0.0;
    int skipped = 0;
    for (const auto& id : ids) {
      const CheckResult r = run_check(id, G, R, 7);
      if (r.skipped) {
        ++skipped;
        continue;
      }
      if (r.threshold < 0.5) worst = std::max(worst, r.residual);
      if (!check_ok(r, kAlgebraTol)) {
        v.pass = false;
        d.add(std::string(c.group) + " " + c.region + " " + id + " residual " + sci(r.residual));
        if (id == "eq.ribbonrelation" && G.exponent() > 2) v.known_divergence = true;
        else other_failure = true;
      }
    }
    d.add(std::string(c.group) + " " + c.region + " max " + sci(worst) +
          (skipped ? ", " + std::to_string(skipped) + " skipped" : ""));
  }
  const double t = seconds_since(t0);
  if (t >= 300.0) {
    v.pass = false;
    other_failure = true;
  }
  if (other_failure) v.known_divergence = false;
  d.add("runtime " + std::to_string(static_cast<int>(t)) + " s");
  v.detail = d.str();
  return v;
}

Verdict criterion2() {
  Verdict v;
  Detail d;
  for (const char* g : {"Z2", "Z3"})
    for (const char* id : {"lemma.globprojboundaryop.eps", "lemma.globprojboundaryop.mu"}) {
      const CheckResult r = run_check(id, Group::parse(g), Region::parse("free:3x3"), 7);
      const bool ok = !r.skipped && r.residual < kKernelBasisTol;
      v.pass = v.pass && ok;
      d.add(std::string(g) + " " + (std::strstr(id, ".eps") ? "eps" : "mu") + " " + sci(r.residual));
    }
  v.detail = d.str();
  return v;
}

Verdict criterion3() {
  Verdict v;
  Detail d;
  const std::vector<std::pair<Case, std::size_t>> want = {
      {{"Z2", "torus:2x2"}, 4}, {{"Z2", "torus:3x3"}, 4}, {{"Z3", "torus:2x2"}, 9}};
  for (const auto& [c, n] : want) {
    const Model m(Group::parse(c.group), Region::parse(c.region));
    const std::size_t dim = ground_space(m.hamiltonian(), SpectralMethod::Auto, 64, 7).dim();
    v.pass = v.pass && dim == n;
    d.add(std::string(c.group) + " " + c.region + " " + std::to_string(dim));
  }
  v.detail = d.str();
  return v;
}

Verdict criterion4() {
  Verdict v;
  Detail d;
  const std::vector<std::pair<Case, const char*>> runs = {
      {{"Z2", "free:3x3"}, "eq.ribenergy"}, {{"Z3", "free:3x3"}, "eq.ribenergy"}, {{"Z2", "free:4x3"}, "eq.ribenergy.c2"}};
  for (const auto& [c, id] : runs) {
    const CheckResult r = run_check(id, Group::parse(c.group), Region::parse(c.region), 7);
    const bool ok = !r.skipped && r.pass && r.residual < kKernelBasisTol;
    v.pass = v.pass && ok;
    d.add(std::string(c.group) + " " + c.region + " " + id + " " + sci(r.residual));
  }
  v.detail = d.str();
  return v;
}

Verdict criterion5() {
  Verdict v;
  Detail d;
  for (const char* g : {"Z2", "Z3"}) {
    const Group G = Group::parse(g);
    const Region R = Region::parse("free:3x3");
    const CheckResult psd = run_check("lemma.gsspan.psd", G, R, 7);
    const CheckResult ker = run_check("lemma.gsspan.kernel", G, R, 7);
    const CheckResult sec = run_check("cor.sectors", G, R, 7);
    const bool ok = psd.pass && psd.residual < kAlgebraTol && ker.pass && ker.residual == 0.0 && sec.pass &&
                    sec.residual == 0.0;
    v.pass = v.pass && ok;
    d.add(std::string(g) + " psd " + sci(psd.residual) + ", " + ker.note + ", sectors " + sec.note);
  }
  v.detail = d.str();
  return v;
}

Verdict criterion6() {
  Verdict v;
  Detail d;
  for (const char* g : {"Z2", "Z3"}) {
    const CheckResult r = run_check("lemma.gshambound", Group::parse(g), Region::parse("free:3x3"), 7);
    v.pass = v.pass && !r.skipped && r.residual < kKernelBasisTol;
    d.add(std::string(g) + " " + sci(r.residual));
  }
  v.detail = d.str();
  return v;
}

Verdict criterion7() {
  Verdict v;
  Detail d;
  for (const char* g : {"Z2", "Z3"}) {
    const CheckResult r = run_check("states.weights", Group::parse(g), Region::parse("free:3x3"), 7);
    v.pass = v.pass && !r.skipped && r.residual < kKernelBasisTol;
    d.add(std::string(g) + " " + sci(r.residual));
  }
  v.detail = d.str();
  return v;
}

Verdict criterion8() {
  Verdict v;
  Detail d;
  bool other_failure = false;
  for (const char* g : {"Z2", "Z3", "Z4", "Z2xZ2"}) {
    const Group G = Group::parse(g);
    const BraidTable t = braid_table(G, 7);
    std::size_t wrong = 0;
    for (const auto& e : t.entries) wrong += !(e.measured == e.predicted);
    const bool exact = t.max_rounding < kAlgebraTol;
    if (!exact) other_failure = true;
    if (wrong) {
      v.pass = false;
      if (G.exponent() > 2) v.known_divergence = true;
      else other_failure = true;
    }
    d.add(std::string(g) + " " + std::to_string(t.entries.size() - wrong) + "/" + std::to_string(t.entries.size()));
  }
  const Group z2 = Group::parse("Z2");
  for (const auto& e : braid_table(z2, 7).entries)
    if (e.chi == 1 && e.c == 0 && e.xi == 0 && e.d == 1) {
      const bool minus_one = e.measured == Phase(1, 2);
      if (!minus_one) other_failure = true;
      v.pass = v.pass && minus_one;
      d.add("Z2 charge/flux " + e.measured.str());
    }
  if (other_failure) v.known_divergence = false;
  v.detail = d.str();
  return v;
}

Verdict criterion9() {
  Verdict v;
  Detail d;
  const Group G = Group::parse("Z2");
  const Model small(G, Region::parse("free:4x4"));
  const Model large(G, Region::parse("free:5x5"));
  double worst = 0.0;
  std::size_t probes = 0;
  for (Elem chi = 0; chi < 2; ++chi)
    for (Elem c = 0; c < 2; ++c) {
      const ConstancyResult r = eventual_constancy_check(small, large, 1, 1, Site{{1, 1}, {1, 1}}, chi, c);
      worst = std::max(worst, r.max_deviation);
      probes += r.probes;
    }
  v.pass = probes > 0 && worst < kKernelBasisTol;
  d.add("Z2 free:4x4 in free:5x5, " + std::to_string(probes) + " probes, max " + sci(worst));
  v.detail = d.str();
  return v;
}

Verdict criterion10() {
  Verdict v;
  const CheckResult r = run_check("eq.qdgsspan", Group::parse("Z2"), Region::parse("free:3x3"), 7);
  v.pass = !r.skipped && r.pass && r.residual == 0.0;
  v.detail = "Z2 free:3x3 " + r.note;
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  bool allow_known = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--allow-known-divergence") == 0) {
      allow_known = true;
    } else {
      std::fprintf(stderr, "usage: %s [--allow-known-divergence]\n", argv[0]);
      return 2;
    }
  }
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"operator algebra and ribbon properties", criterion1},
      {"boundary projectors equal boundary ribbon operators", criterion2},
      {"torus ground degeneracy", criterion3},
      {"ribbon energies", criterion4},
      {"boundary Hamiltonian structure", criterion5},
      {"ground-state energy identity", criterion6},
      {"sector weights", criterion7},
      {"crossing phase table", criterion8},
      {"eventual constancy", criterion9},
      {"ribbon products span the space", criterion10},
  };
  int failed = 0, tolerated = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.known_divergence = false;
      v.detail = std::string("error: ") + e.what();
    }
    const char* status = v.pass ? "PASS" : v.known_divergence ? "FAIL*" : "FAIL";
    std::printf("[%s] %2zu %s (%.1f s): %s\n", status, i + 1, criteria[i].first, seconds_since(t0), v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) (v.known_divergence ? tolerated : failed)++;
  }
  std::printf("%zu criteria, %zu passed, %d failed", criteria.size(), criteria.size() - failed - tolerated,
              failed + tolerated);
  if (tolerated) std::printf(" (%d only through the crossing-phase divergence, marked FAIL*)", tolerated);
  std::printf("\n");
  if (failed) return 1;
  return tolerated && !allow_known ? 1 : 0;
}
