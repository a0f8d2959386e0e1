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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qdouble/cli.hpp"
#include "qdouble/lemma_suite.hpp"
#include "qdouble/operators.hpp"
#include "qdouble/spectral.hpp"
#include "qdouble/states.hpp"

namespace py = pybind11;
using namespace qdouble;

namespace {

Model make_model(const std::string& group, const std::string& region) {
  const Group G = Group::parse(group);
  const Region R = Region::parse(region);
  enforce_dim_cap(G, R);
  return Model(G, R);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum double models for finite abelian groups";

  py::register_exception<DimensionCapError>(m, "DimensionCapError");

  py::class_<Group>(m, "Group")
      .def_static("parse", &Group::parse)
      .def_property_readonly("orders", &Group::orders)
      .def_property_readonly("size", &Group::size)
      .def_property_readonly("exponent", &Group::exponent)
      .def_property_readonly("name", &Group::name)
      .def("phase", [](const Group& g, Elem chi, Elem x) { return g.phase(chi, x).str(); })
      .def("format", &Group::format)
      .def("__repr__", [](const Group& g) { return "Group('" + g.name() + "')"; });

  py::class_<Region>(m, "Region")
      .def_static("parse", &Region::parse)
      .def_property_readonly("name", &Region::name)
      .def_property_readonly("width", &Region::width)
      .def_property_readonly("height", &Region::height)
      .def_property_readonly("is_torus", &Region::is_torus)
      .def_property_readonly("num_edges", &Region::num_edges)
      .def("__repr__", [](const Region& r) { return "Region('" + r.name() + "')"; });

  m.def(
      "verify_json",
      [](const std::string& group, const std::string& region, std::uint64_t seed) {
        py::gil_scoped_release release;
        return report_json(run_suite(Group::parse(group), Region::parse(region), seed));
      },
      py::arg("group"), py::arg("region"), py::arg("seed") = 7);

  m.def(
      "run_check",
      [](const std::string& id, const std::string& group, const std::string& region, std::uint64_t seed) {
        CheckResult r;
        {
          py::gil_scoped_release release;
          r = run_check(id, Group::parse(group), Region::parse(region), seed);
        }
        py::dict d;
        d["id"] = r.id;
        d["residual"] = r.residual;
        d["threshold"] = r.threshold;
        d["pass"] = r.pass;
        d["skipped"] = r.skipped;
        d["note"] = r.note;
        return d;
      },
      py::arg("id"), py::arg("group"), py::arg("region"), py::arg("seed") = 7);

  m.def("check_ids", [] {
    std::vector<std::string> ids;
    for (const auto& c : check_catalog()) ids.push_back(c.id);
    return ids;
  });

  m.def(
      "spectrum",
      [](const std::string& group, const std::string& region, const std::string& boundary, int k,
         const std::string& method, std::uint64_t seed) {
        const Model model = make_model(group, region);
        py::gil_scoped_release release;
        const auto pairs = spectrum_lowest(model.hamiltonian(parse_boundary(boundary)), k, parse_method(method), seed);
        std::vector<std::pair<double, double>> out;
        for (const auto& p : pairs) out.emplace_back(p.value, p.residual);
        return out;
      },
      py::arg("group"), py::arg("region"), py::arg("boundary") = "none", py::arg("k") = 6,
      py::arg("method") = "auto", py::arg("seed") = 7);

  m.def(
      "ground_dim",
      [](const std::string& group, const std::string& region, const std::string& boundary) {
        const Model model = make_model(group, region);
        py::gil_scoped_release release;
        const Hamiltonian H = model.hamiltonian(parse_boundary(boundary));
        return ground_space(H, SpectralMethod::Auto, std::size_t(1) << 20).dim();
      },
      py::arg("group"), py::arg("region"), py::arg("boundary") = "none");

  m.def(
      "sector_dims",
      [](const std::string& group, const std::string& region) {
        const Model model = make_model(group, region);
        SectorTable t;
        {
          py::gil_scoped_release release;
          t = sector_dims(model);
        }
        std::vector<std::tuple<Elem, Elem, std::size_t>> rows;
        for (const auto& e : t.entries) rows.emplace_back(e.chi, e.c, e.dim);
        return py::make_tuple(rows, t.total);
      },
      py::arg("group"), py::arg("region") = "free:3x3");

  m.def(
      "braid_table",
      [](const std::string& group, std::uint64_t seed) {
        BraidTable t;
        {
          py::gil_scoped_release release;
          t = braid_table(Group::parse(group), seed);
        }
        py::list rows;
        for (const auto& e : t.entries)
          rows.append(py::make_tuple(e.chi, e.c, e.xi, e.d, e.measured.str(), e.predicted.str()));
        return rows;
      },
      py::arg("group"), py::arg("seed") = 7);

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv = {"qdouble"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
