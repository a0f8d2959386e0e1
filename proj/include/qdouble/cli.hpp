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

#ifndef QDOUBLE_CLI_HPP
#define QDOUBLE_CLI_HPP

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "qdouble/group.hpp"
#include "qdouble/lattice.hpp"

namespace qdouble {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitConfig = 2, kExitCap = 3 };

struct RunConfig {
  std::string task;
  std::string group = "Z2";
  std::string region = "free:3x3";
  std::string boundary = "none";
  std::uint64_t seed = 7;
  std::string out;  // empty: standard output
  bool json = false;
  bool unsafe_cap = false;
  bool timings = false;
  int k = 6;
  std::string method = "auto";
  std::string site;  // "x,y,fx,fy"; empty picks the first interior site
  std::string chi = "1";
  std::string c = "1";
  std::vector<std::string> checks;
  std::map<std::string, double> thresholds;
};

/// Element or character label: "1", "(1,0)" or "1,0".
Elem parse_label(const Group& group, const std::string& label);
/// "x,y,fx,fy", brackets ignored.
Site parse_site(const std::string& text);

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sectors(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_braid(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_excite(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv (flags win over --config) and dispatches.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qdouble

#endif  // QDOUBLE_CLI_HPP
