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

#include "qdouble/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "qdouble/lemma_suite.hpp"
#include "qdouble/operators.hpp"
#include "qdouble/spectral.hpp"
#include "qdouble/states.hpp"

namespace qdouble {

namespace {

using json = nlohmann::ordered_json;

// Thrown for anything the user got wrong in the configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<int> parse_ints(const std::string& text) {
  std::string t;
  for (char ch : text) t.push_back(ch == '(' || ch == ')' || ch == '[' || ch == ']' ? ' ' : ch == ',' ? ' ' : ch);
  std::istringstream is(t);
  std::vector<int> out;
  std::string tok;
  while (is >> tok) {
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != tok.size()) throw std::invalid_argument("bad integer '" + tok + "' in '" + text + "'");
    out.push_back(v);
  }
  return out;
}

std::string num17(double x) {
  if (std::abs(x) < 1e-13) x = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

struct Setup {
  Group group;
  Region region;
  Boundary boundary;
  SpectralMethod method;
};

Setup resolve(const RunConfig& cfg) {
  try {
    Setup s{Group::parse(cfg.group), Region::parse(cfg.region), parse_boundary(cfg.boundary),
            parse_method(cfg.method)};
    if (cfg.k < 1) throw std::invalid_argument("k must be at least 1");
    return s;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

void check_cap(const RunConfig& cfg, const Setup& s) {
  // Indices are 64-bit, so even --unsafe-cap has a ceiling.
  enforce_dim_cap(s.group, s.region, cfg.unsafe_cap ? 62.0 : kLog2DimCap);
}

void require_free(const Setup& s, const char* task) {
  if (s.region.is_torus()) throw ConfigError(std::string(task) + " needs a free region");
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw ConfigError("cannot write " + cfg.out);
  f << text;
}

std::string label(const Group& G, Elem e) { return G.format(e); }

double energy(const LinearOp& H, const SparseState& v, double* residual) {
  const SparseState hv = H.apply(v);
  const double e = inner(v, hv).real();
  if (residual) *residual = (hv - e * v).norm();
  return e;
}

}  // namespace

Elem parse_label(const Group& group, const std::string& text) {
  const auto digits = parse_ints(text);
  if (digits.size() != group.orders().size())
    throw std::invalid_argument("label '" + text + "' needs " + std::to_string(group.orders().size()) + " digits");
  for (std::size_t i = 0; i < digits.size(); ++i)
    if (digits[i] < 0 || digits[i] >= group.orders()[i])
      throw std::invalid_argument("label '" + text + "' out of range for " + group.name());
  return group.pack(group.element(digits));
}

Site parse_site(const std::string& text) {
  const auto d = parse_ints(text);
  if (d.size() != 4) throw std::invalid_argument("site '" + text + "' must be x,y,fx,fy");
  return Site{Vertex{d[0], d[1]}, Face{d[2], d[3]}};
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Setup s = resolve(cfg);
  check_cap(cfg, s);
  VerificationReport rep;
  if (cfg.checks.empty()) {
    try {
      rep = run_suite(s.group, s.region, cfg.seed, cfg.thresholds);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else {
    rep.seed = cfg.seed;
    rep.group = s.group.name();
    rep.region = s.region.name();
    rep.threshold_overrides = cfg.thresholds;
    for (const auto& id : cfg.checks) {
      CheckResult r;
      try {
        r = run_check(id, s.group, s.region, cfg.seed);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      if (auto it = cfg.thresholds.find(id); it != cfg.thresholds.end() && !r.skipped) {
        r.threshold = it->second;
        r.pass = r.residual < r.threshold;
      }
      rep.results.push_back(r);
    }
    for (const auto& r : rep.results) {
      if (r.skipped) ++rep.skipped;
      else if (r.informational) ++rep.informational;
      else if (r.pass) ++rep.passed;
      else ++rep.failed;
    }
  }
  if (!cfg.timings)
    for (auto& r : rep.results) r.wall_seconds = 0.0;
  emit(cfg, out, cfg.json ? report_json(rep) + "\n" : format_report(rep));
  if (!rep.ok()) err << rep.failed << " check(s) failed\n";
  return rep.ok() ? kExitPass : kExitFail;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Setup s = resolve(cfg);
  check_cap(cfg, s);
  const Model model(s.group, s.region);
  const Hamiltonian H = model.hamiltonian(s.boundary);
  const Index dim = model.space()->dim();
  int k = cfg.k;
  if (static_cast<Index>(k) > dim) {
    err << "warning: k=" << k << " exceeds the dimension " << dim << ", clipped\n";
    k = static_cast<int>(dim);
  }
  const auto pairs = spectrum_lowest(H, k, s.method, cfg.seed);
  std::ostringstream os;
  if (cfg.json) {
    json j;
    j["group"] = s.group.name();
    j["region"] = s.region.name();
    j["boundary"] = boundary_name(s.boundary);
    j["method"] = method_name(s.method);
    j["seed"] = cfg.seed;
    j["k"] = k;
    auto& arr = j["eigenpairs"] = json::array();
    for (std::size_t i = 0; i < pairs.size(); ++i)
      arr.push_back({{"index", i},
                     {"eigenvalue", std::abs(pairs[i].value) < 1e-13 ? 0.0 : pairs[i].value},
                     {"residual", pairs[i].residual}});
    os << j.dump(2) << "\n";
  } else {
    os << "index,eigenvalue,residual\n";
    for (std::size_t i = 0; i < pairs.size(); ++i)
      os << i << "," << num17(pairs[i].value) << "," << num17(pairs[i].residual) << "\n";
  }
  emit(cfg, out, os.str());
  return kExitPass;
}

int cmd_sectors(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const Setup s = resolve(cfg);
  require_free(s, "sectors");
  check_cap(cfg, s);
  const Model model(s.group, s.region);
  const SectorTable table = sector_dims(model);
  const SectorWeights w = sector_weights(frustration_free_state(model), model);
  const Group& G = s.group;
  std::ostringstream os;
  if (cfg.json) {
    json j;
    j["group"] = G.name();
    j["region"] = s.region.name();
    j["total"] = table.total;
    j["sum"] = table.sum();
    auto& arr = j["sectors"] = json::array();
    for (const auto& e : table.entries)
      arr.push_back({{"chi", label(G, e.chi)}, {"c", label(G, e.c)}, {"dim", e.dim}, {"weight", w.at(e.chi, e.c)}});
    os << j.dump(2) << "\n";
  } else {
    os << "chi,c,dim,weight\n";
    for (const auto& e : table.entries)
      os << csv_field(label(G, e.chi)) << "," << csv_field(label(G, e.c)) << "," << e.dim << ","
         << num17(w.at(e.chi, e.c)) << "\n";
  }
  emit(cfg, out, os.str());
  return table.sum() == table.total ? kExitPass : kExitFail;
}

int cmd_braid(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Setup s = resolve(cfg);
  require_free(s, "braid");
  if (s.region.width() < 3 || s.region.height() < 3) throw ConfigError("braid needs at least 3x3 vertices");
  check_cap(cfg, s);
  const Group& G = s.group;
  const BraidTable t =
      braid_table(G, s.region, Vertex{s.region.width() / 2, s.region.height() / 2}, cfg.seed);
  const int q = G.size();
  const std::size_t n = static_cast<std::size_t>(q) * q;
  std::vector<std::string> labels;
  for (int chi = 0; chi < q; ++chi)
    for (int c = 0; c < q; ++c) labels.push_back(label(G, chi) + ";" + label(G, c));
  std::ostringstream os;
  if (cfg.json) {
    json j;
    j["group"] = G.name();
    j["region"] = s.region.name();
    j["labels"] = labels;
    json meas = json::array(), pred = json::array();
    for (std::size_t r = 0; r < n; ++r) {
      json a = json::array(), b = json::array();
      for (std::size_t col = 0; col < n; ++col) {
        a.push_back(t.entries[r * n + col].measured.str());
        b.push_back(t.entries[r * n + col].predicted.str());
      }
      meas.push_back(a);
      pred.push_back(b);
    }
    j["measured"] = meas;
    j["predicted"] = pred;
    j["max_residual"] = t.max_residual;
    j["max_rounding"] = t.max_rounding;
    j["matches"] = t.matches();
    os << j.dump(2) << "\n";
  } else {
    auto table = [&](const char* name, bool measured) {
      os << csv_field(name);
      for (const auto& l : labels) os << "," << csv_field(l);
      os << "\n";
      for (std::size_t r = 0; r < n; ++r) {
        os << csv_field(labels[r]);
        for (std::size_t col = 0; col < n; ++col) {
          const auto& e = t.entries[r * n + col];
          os << "," << (measured ? e.measured : e.predicted).str();
        }
        os << "\n";
      }
    };
    table("measured", true);
    os << "\n";
    table("predicted", false);
  }
  emit(cfg, out, os.str());
  if (!t.matches()) err << "measured crossing phases differ from the prediction (max " << t.max_residual << ")\n";
  return t.matches() ? kExitPass : kExitFail;
}

int cmd_excite(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Setup s = resolve(cfg);
  require_free(s, "excite");
  check_cap(cfg, s);
  const Group& G = s.group;
  Elem chi = 0, c = 0;
  Site site;
  try {
    chi = parse_label(G, cfg.chi);
    c = parse_label(G, cfg.c);
    if (cfg.site.empty()) {
      const auto in = s.region.interior_sites();
      if (in.empty()) throw std::invalid_argument("region has no interior site");
      site = in.front();
    } else {
      site = parse_site(cfg.site);
    }
    if (!s.region.is_interior_site(site)) throw std::invalid_argument("site " + format_site(site) + " is not interior");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const Model model(G, s.region);
  const Excitation ex = single_excitation_state(model, site, chi, c);
  double res_l = 0.0, res_b = 0.0;
  const double e_l = energy(model.hamiltonian(Boundary::None).op, ex.vector, &res_l);
  const double e_b = energy(model.hamiltonian(Boundary::EpsMu).op, ex.vector, &res_b);
  const SectorWeights w = sector_weights(ex.state, model);

  // A pair of ribbons from the site to one boundary site, the excitation's own
  // ribbon first. Dyons may differ by their spin.
  std::string path_note = "no alternative ribbon";
  double path_res = std::numeric_limits<double>::quiet_NaN();
  std::string path_phase;
  std::vector<Ribbon> bases = {ex.ribbon};
  for (const auto& b : s.region.boundary_sites()) {
    try {
      bases.push_back(ribbon_between(s.region, site, b));
    } catch (const std::invalid_argument&) {
    }
  }
  for (const auto& base : bases) {
    const auto alts = alternative_ribbons(s.region, base, 1, false);
    if (alts.empty()) continue;
    const SparseState x = single_excitation_state(model, base, chi, c).vector;
    const SparseState y = single_excitation_state(model, alts.front(), chi, c).vector;
    const Phase theta = G.phase(chi, c);
    path_res = std::numeric_limits<double>::infinity();
    for (const Phase& p : {Phase(), theta, theta.conj()}) {
      const double d = (x - p.value() * y).norm();
      if (d < path_res - 1e-12) {
        path_res = d;
        path_phase = p.str();
      }
    }
    path_note = "";
    break;
  }

  std::ostringstream os;
  if (cfg.json) {
    json j;
    j["group"] = G.name();
    j["region"] = s.region.name();
    j["site"] = format_site(site);
    j["chi"] = label(G, chi);
    j["c"] = label(G, c);
    j["ribbon_length"] = ex.ribbon.triangles.size();
    j["energy_H_L"] = std::abs(e_l) < 1e-13 ? 0.0 : e_l;
    j["residual_H_L"] = res_l;
    j["energy_H_eps_mu"] = std::abs(e_b) < 1e-13 ? 0.0 : e_b;
    j["residual_H_eps_mu"] = res_b;
    auto& arr = j["weights"] = json::array();
    for (const auto& e : w.entries)
      arr.push_back({{"chi", label(G, e.chi)}, {"c", label(G, e.c)}, {"lambda", e.lambda}});
    if (path_note.empty()) {
      j["path_residual"] = path_res;
      j["path_phase"] = path_phase;
    } else {
      j["path_residual"] = nullptr;
      j["path_note"] = path_note;
    }
    os << j.dump(2) << "\n";
  } else {
    os << "key,value\n";
    os << "site," << csv_field(format_site(site)) << "\n";
    os << "chi," << csv_field(label(G, chi)) << "\nc," << csv_field(label(G, c)) << "\n";
    os << "ribbon_length," << ex.ribbon.triangles.size() << "\n";
    os << "energy_H_L," << num17(e_l) << "\nresidual_H_L," << num17(res_l) << "\n";
    os << "energy_H_eps_mu," << num17(e_b) << "\nresidual_H_eps_mu," << num17(res_b) << "\n";
    for (const auto& e : w.entries)
      os << csv_field("weight " + label(G, e.chi) + ";" + label(G, e.c)) << "," << num17(e.lambda) << "\n";
    if (path_note.empty())
      os << "path_residual," << num17(path_res) << "\npath_phase," << path_phase << "\n";
    else
      os << "path_residual,nan\n";
  }
  emit(cfg, out, os.str());
  if (!path_note.empty()) err << "note: " << path_note << "\n";
  return kExitPass;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string config_path;
  std::vector<std::string> threshold_args;

  CLI::App app{"Quantum double models on small lattices", "qdouble"};
  app.fallthrough();
  app.require_subcommand(0, 1);
  app.set_version_flag("--version", "qdouble 0.1.0");
  app.add_option("--config", config_path, "JSON config file; flags win");
  auto* o_group = app.add_option("--group", cfg.group, "Z2, Z3, Z2xZ4 ...");
  auto* o_region = app.add_option("--region", cfg.region, "free:WxH, torus:WxH or lambda:L");
  auto* o_boundary = app.add_option("--boundary", cfg.boundary, "none, eps, mu, eps_mu");
  auto* o_seed = app.add_option("--seed", cfg.seed);
  auto* o_out = app.add_option("--out", cfg.out, "output file");
  auto* o_json = app.add_flag("--json", cfg.json, "JSON instead of CSV/text");
  auto* o_unsafe = app.add_flag("--unsafe-cap", cfg.unsafe_cap, "lift the 2^26 dimension cap");
  auto* o_timings = app.add_flag("--timings", cfg.timings, "report wall times");
  auto* o_k = app.add_option("-k,--k", cfg.k, "number of eigenvalues");
  auto* o_method = app.add_option("--method", cfg.method, "auto, dense, block, projector_rank, iterative");
  auto* o_site = app.add_option("--site", cfg.site, "x,y,fx,fy");
  auto* o_chi = app.add_option("--chi", cfg.chi, "character label");
  auto* o_c = app.add_option("--c", cfg.c, "flux label");
  auto* o_check = app.add_option("--check", cfg.checks, "check id or prefix (repeatable)");
  auto* o_thr = app.add_option("--threshold", threshold_args, "id=value (repeatable)");

  const std::vector<std::pair<std::string, CLI::App*>> subs = {
      {"verify", app.add_subcommand("verify", "run the check battery")},
      {"spectrum", app.add_subcommand("spectrum", "lowest eigenvalues")},
      {"sectors", app.add_subcommand("sectors", "sector dimensions of the boundary kernel")},
      {"braid", app.add_subcommand("braid", "crossing phases of ribbon operators")},
      {"excite", app.add_subcommand("excite", "single-excitation diagnostics")},
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) cfg.task = name;

    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError("cannot read " + config_path);
      json j;
      try {
        j = json::parse(f);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
      }
      if (!j.is_object()) throw ConfigError("config must be a JSON object");
      auto take = [&](const char* key, CLI::Option* opt, auto& field) {
        if (j.contains(key) && (opt == nullptr || opt->count() == 0)) field = j.at(key).get<std::decay_t<decltype(field)>>();
      };
      static const std::vector<std::string> known = {"task",   "group", "region",     "boundary", "seed",
                                                      "out",    "json",  "unsafe_cap", "timings",  "k",
                                                      "method", "site",  "chi",        "c",        "checks",
                                                      "thresholds"};
      for (const auto& item : j.items())
        if (std::find(known.begin(), known.end(), item.key()) == known.end())
          throw ConfigError("unknown config key '" + item.key() + "'");
      try {
        if (cfg.task.empty()) take("task", nullptr, cfg.task);
        take("group", o_group, cfg.group);
        take("region", o_region, cfg.region);
        take("boundary", o_boundary, cfg.boundary);
        take("seed", o_seed, cfg.seed);
        take("out", o_out, cfg.out);
        take("json", o_json, cfg.json);
        take("unsafe_cap", o_unsafe, cfg.unsafe_cap);
        take("timings", o_timings, cfg.timings);
        take("k", o_k, cfg.k);
        take("method", o_method, cfg.method);
        take("site", o_site, cfg.site);
        take("chi", o_chi, cfg.chi);
        take("c", o_c, cfg.c);
        take("checks", o_check, cfg.checks);
        if (j.contains("thresholds") && o_thr->count() == 0)
          cfg.thresholds = j.at("thresholds").get<std::map<std::string, double>>();
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
      }
    }
    for (const auto& t : threshold_args) {
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw ConfigError("--threshold expects id=value, got '" + t + "'");
      try {
        cfg.thresholds[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
      } catch (const std::exception&) {
        throw ConfigError("bad threshold value in '" + t + "'");
      }
    }

    if (cfg.task == "verify") return cmd_verify(cfg, out, err);
    if (cfg.task == "spectrum") return cmd_spectrum(cfg, out, err);
    if (cfg.task == "sectors") return cmd_sectors(cfg, out, err);
    if (cfg.task == "braid") return cmd_braid(cfg, out, err);
    if (cfg.task == "excite") return cmd_excite(cfg, out, err);
    if (cfg.task.empty()) throw ConfigError("no task given (verify, spectrum, sectors, braid, excite)");
    throw ConfigError("unknown task '" + cfg.task + "'");
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DimensionCapError& e) {
    err << "dimension cap: " << e.what() << "\n";
    return kExitCap;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }
}

}  // namespace qdouble
