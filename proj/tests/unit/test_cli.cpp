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


#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "qdouble/cli.hpp"

using namespace qdouble;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::vector<const char*> argv = {"qdouble"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::string temp_path(const char* name) { return (std::filesystem::temp_directory_path() / name).string(); }

}  // namespace

TEST_CASE("labels and sites") {
  const Group G = Group::parse("Z2xZ3");
  CHECK(parse_label(G, "(1,2)") == G.pack(G.element({1, 2})));
  CHECK(parse_label(G, "1,2") == G.pack(G.element({1, 2})));
  CHECK_THROWS(parse_label(G, "1"));
  CHECK_THROWS(parse_label(G, "(1,3)"));
  CHECK(parse_label(Group::parse("Z3"), "2") == 2);
  const Site s = parse_site("((1,1),(0,0))");
  CHECK(s == Site{{1, 1}, {0, 0}});
  CHECK(parse_site("2,1,1,0") == Site{{2, 1}, {1, 0}});
  CHECK_THROWS(parse_site("1,1"));
  CHECK_THROWS(parse_site("a,1,1,1"));
}

TEST_CASE("exit codes") {
  CHECK(cli({"verify", "--group", "Z2", "--region", "lambda:2"}).code == kExitCap);
  CHECK(cli({"verify", "--group", "Z0", "--region", "free:3x3"}).code == kExitConfig);
  CHECK(cli({"verify", "--group", "Z2", "--region", "free:9"}).code == kExitConfig);
  CHECK(cli({"verify", "--boundary", "both"}).code == kExitConfig);
  CHECK(cli({"verify", "--no-such-flag"}).code == kExitConfig);
  CHECK(cli({}).code == kExitConfig);
  CHECK(cli({"verify", "--check", "nope"}).code == kExitConfig);
  CHECK(cli({"verify", "--threshold", "rel.star_mult"}).code == kExitConfig);
  CHECK(cli({"--help"}).code == kExitPass);
  const Run ok = cli({"verify", "--group", "Z2", "--region", "free:3x3"});
  CHECK(ok.code == kExitPass);
  CHECK(ok.out.find("0 failed") != std::string::npos);
  CHECK(cli({"verify", "--region", "torus:2x2", "--threshold", "rel.star_mult=-1"}).code == kExitFail);
}

TEST_CASE("spectrum output") {
  const Run r = cli({"spectrum", "--group", "Z2", "--region", "torus:2x2", "-k", "6"});
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 7);
  CHECK(ls[0] == "index,eigenvalue,residual");
  for (int i = 1; i <= 4; ++i) CHECK(ls[i].rfind(std::to_string(i - 1) + ",0,", 0) == 0);
  for (int i = 5; i <= 6; ++i) {
    const auto a = ls[i].find(','), b = ls[i].find(',', a + 1);
    CHECK(std::stod(ls[i].substr(a + 1, b - a - 1)) == doctest::Approx(2.0));
  }
  const Run b = cli({"spectrum", "--group", "Z2", "--region", "free:3x3", "--boundary", "eps_mu", "-k", "1"});
  CHECK(lines(b.out).at(1).rfind("0,0,", 0) == 0);

  const Run clip = cli({"spectrum", "--group", "Z2", "--region", "torus:2x2", "-k", "1000"});
  CHECK(clip.code == 0);
  CHECK(clip.err.find("clipped") != std::string::npos);
  CHECK(lines(clip.out).size() == 257);
  CHECK(cli({"spectrum", "-k", "0"}).code == kExitConfig);
}

TEST_CASE("json is reproducible") {
  const std::vector<std::string> args = {"spectrum", "--group", "Z3", "--region", "torus:2x2", "-k", "10", "--json"};
  const Run a = cli(args), b = cli(args);
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["eigenpairs"].size() == 10);
  const std::vector<std::string> v = {"verify", "--region", "torus:2x2", "--json"};
  CHECK(cli(v).out == cli(v).out);
}

TEST_CASE("sectors") {
  const Run r = cli({"sectors", "--group", "Z2"});
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[0] == "chi,c,dim,weight");
  CHECK(ls[1].rfind("0,0,128,", 0) == 0);
  const auto j = nlohmann::json::parse(cli({"sectors", "--group", "Z2", "--json"}).out);
  CHECK(j["total"] == 1280);
  CHECK(j["sum"] == 1280);
  CHECK(cli({"sectors", "--region", "torus:2x2"}).code == kExitConfig);
}

TEST_CASE("braid") {
  const Run r = cli({"braid", "--group", "Z2", "--json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["matches"] == true);
  // Rows (chi;c), columns (xi;d): a charge against a flux gives -1.
  CHECK(j["measured"][2][1] == "1/2");
  CHECK(j["measured"][0][0] == "0");
  CHECK(j["measured"] == j["predicted"]);
}

TEST_CASE("excite") {
  const Run r = cli({"excite", "--group", "Z3", "--chi", "1", "--c", "1", "--json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["energy_H_L"].get<double>() == doctest::Approx(2.0));
  CHECK(std::abs(j["energy_H_eps_mu"].get<double>()) < 1e-10);
  double total = 0.0;
  for (const auto& w : j["weights"]) total += w["lambda"].get<double>();
  CHECK(total == doctest::Approx(1.0));
  CHECK(j["path_residual"].get<double>() < 1e-10);
  CHECK(cli({"excite", "--group", "Z3", "--site", "0,0,0,0"}).code == kExitConfig);
  CHECK(cli({"excite", "--group", "Z3", "--chi", "5"}).code == kExitConfig);
}

TEST_CASE("config file, flags win") {
  const std::string cfg = temp_path("qdouble_test_config.json");
  {
    std::ofstream f(cfg);
    f << R"({"task": "spectrum", "group": "Z3", "region": "torus:2x2", "k": 2, "json": true})";
  }
  const Run a = cli({"--config", cfg});
  CHECK(a.code == 0);
  auto j = nlohmann::json::parse(a.out);
  CHECK(j["group"] == "Z3");
  CHECK(j["eigenpairs"].size() == 2);
  const Run b = cli({"spectrum", "--config", cfg, "--group", "Z2", "-k", "3"});
  j = nlohmann::json::parse(b.out);
  CHECK(j["group"] == "Z2");
  CHECK(j["eigenpairs"].size() == 3);
  {
    std::ofstream f(cfg);
    f << R"({"group": "Z2", "colour": "red"})";
  }
  CHECK(cli({"verify", "--config", cfg}).code == kExitConfig);
  {
    std::ofstream f(cfg);
    f << "{not json";
  }
  CHECK(cli({"verify", "--config", cfg}).code == kExitConfig);
  CHECK(cli({"verify", "--config", temp_path("qdouble_missing.json")}).code == kExitConfig);
  std::remove(cfg.c_str());
}

TEST_CASE("output file") {
  const std::string out = temp_path("qdouble_test_out.csv");
  const Run r = cli({"spectrum", "--region", "torus:2x2", "-k", "1", "--out", out});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(out);
  std::string first;
  std::getline(f, first);
  CHECK(first == "index,eigenvalue,residual");
  std::remove(out.c_str());
}
