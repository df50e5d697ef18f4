#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pidkit/cli.hpp"
#include "pidkit/distribution_io.hpp"
#include "pidkit/error.hpp"
#include "pidkit/properties.hpp"

namespace py = pybind11;
using namespace pidkit;

namespace {

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

const RedundancyMeasure& measure(const std::string& id) { return *MeasureRegistry::builtin().get(id); }

py::dict atoms_dict(const PidResult& p) {
  py::dict out;
  for (std::size_t i = 0; i < p.lattice().size(); ++i) out[py::str(p.lattice().node(i).to_string())] = p.atom(i);
  return out;
}

}  // namespace

PYBIND11_MODULE(pidkit, m) {
  m.doc() = "Partial information decomposition on the redundancy lattice";

  // Later registrations are tried first, so the base class goes first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_OverflowError);

  py::class_<JointDistribution>(m, "Distribution")
      .def_static("from_json", &parse_distribution, py::arg("text"))
      .def_static("load", [](const std::string& path) { return load_distribution(path); }, py::arg("path"))
      .def_static("gate", [](const std::string& id) { return make_gate(id); }, py::arg("id"))
      .def("to_json", [](const JointDistribution& d) { return distribution_to_json(d).dump(); })
      .def_property_readonly("n_sources", &JointDistribution::n_sources)
      .def_property_readonly("target_arity", &JointDistribution::target_arity)
      .def_property_readonly("digest", &JointDistribution::digest)
      .def("mutual_information",
           [](const JointDistribution& d, const std::vector<int>& sources) {
             return marginal_mi(d, SourceSet::of(sources));
           },
           py::arg("sources"), "I(S_a;T) for the given 1-based source indices")
      .def(py::self == py::self)
      .def("__repr__", [](const JointDistribution& d) {
        return "<Distribution n_sources=" + std::to_string(d.n_sources()) +
               " target_arity=" + std::to_string(d.target_arity()) + ">";
      });

  m.def("measures", [] { return MeasureRegistry::builtin().ids(); });
  m.def("gates", &gate_ids);

  m.def(
      "redundancy",
      [](const JointDistribution& d, const std::string& antichain, const std::string& id) {
        return measure(id).evaluate(d, Antichain::parse(antichain));
      },
      py::arg("d"), py::arg("antichain"), py::arg("measure") = "imin");

  m.def(
      "atoms",
      [](const JointDistribution& d, const std::string& id, bool allow_large) {
        return atoms_dict(atoms_from_redundancy(d, measure(id), LatticeLimit{allow_large}));
      },
      py::arg("d"), py::arg("measure") = "imin", py::arg("allow_large") = false,
      "Atom of every antichain, keyed by its {1}{2} rendering, in lattice order");

  m.def(
      "consistency_residual",
      [](const JointDistribution& d, const std::string& id) {
        return consistency_check(atoms_from_redundancy(d, measure(id)), d).max_abs_residual();
      },
      py::arg("d"), py::arg("measure") = "imin");

  m.def("rsi", &rsi, py::arg("d"));

  m.def(
      "lattice",
      [](int n, bool allow_large) {
        std::vector<std::string> out;
        for (const auto& a : lattice_for(n, LatticeLimit{allow_large})->nodes()) out.push_back(a.to_string());
        return out;
      },
      py::arg("n"), py::arg("allow_large") = false);

  m.def(
      "parthood_count", [](int n, bool allow_large) { return enumerate_parthood(n, LatticeLimit{allow_large}).size(); },
      py::arg("n"), py::arg("allow_large") = false);

  m.def(
      "check",
      [](const JointDistribution& d, const std::string& property, const std::string& id, double tol,
         std::uint64_t seed, int trials) {
        const auto& meas = measure(id);
        PropertyReport r;
        switch (parse_property(property)) {
          case PropertyId::LP: r = check_lp(atoms_from_redundancy(d, meas), tol); break;
          case PropertyId::REI: r = check_rei(d, meas, ReiOptions{trials, seed, tol}); break;
          case PropertyId::TCR: r = check_tcr(d, meas, tol); break;
          case PropertyId::LM: r = check_lm(d, meas, tol); break;
          case PropertyId::SM: r = check_sm(d, meas, tol); break;
          case PropertyId::ID: r = check_id(d, meas, tol); break;
          case PropertyId::IID: r = check_iid(d, meas, tol); break;
          default: throw InputError("property '" + property + "' is only available through the CLI");
        }
        return to_python(cli::report_to_json(r));
      },
      py::arg("d"), py::arg("property"), py::arg("measure") = "imin", py::arg("tol") = kDefaultTolerance,
      py::arg("seed") = 0, py::arg("trials") = 32);

  m.def(
      "theorem_witness",
      [](const std::string& id, double tol) {
        const auto w = theorem_witness(measure(id), tol);
        py::dict steps;
        for (const auto& s : w.steps) steps[py::str(s.label)] = s.value;
        py::dict verdicts;
        for (const auto* r : {&w.lp, &w.rei, &w.tcr, &w.id, &w.theorem1, &w.theorem2}) {
          verdicts[py::str(std::string(to_string(r->property)))] = std::string(to_string(r->verdict));
        }
        py::dict out;
        out["steps"] = steps;
        out["verdicts"] = verdicts;
        out["conclusions"] = w.conclusions;
        return out;
      },
      py::arg("measure") = "imin", py::arg("tol") = kDefaultTolerance);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in process; returns (exit code, stdout, stderr)");
}
