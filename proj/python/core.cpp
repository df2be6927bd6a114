#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <circlewalk/circle_map.hpp>
#include <circlewalk/cli.hpp>
#include <circlewalk/cocycle.hpp>
#include <circlewalk/entropy.hpp>
#include <circlewalk/measure.hpp>
#include <circlewalk/thompson.hpp>

namespace py = pybind11;
using namespace circlewalk;

namespace {

Rational to_rational(const py::handle& x) { return Rational::parse(py::str(x).cast<std::string>()); }

py::object fraction(const Rational& r) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(r.str());
}

nlohmann::json to_json(const py::handle& obj) {
  if (py::isinstance<py::str>(obj)) return nlohmann::json::parse(obj.cast<std::string>());
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

py::object from_json(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact piecewise-affine circle maps and random-walk statistics.";
  m.def("version", &cli::version);

  py::class_<CircleMap>(m, "CircleMap")
      .def(py::init<>())
      .def_static("rotation", [](const py::object& t) { return CircleMap::rotation(to_rational(t)); })
      .def_static("from_json", [](const py::object& j) { return CircleMap::from_json(to_json(j)); })
      .def("to_json", [](const CircleMap& g) { return from_json(g.to_json()); })
      .def("__call__", [](const CircleMap& g, const py::object& x) { return fraction(g(CirclePoint(to_rational(x))).value()); })
      .def("inverse", &CircleMap::inverse)
      .def("compose", &CircleMap::compose)
      .def("__mul__", &CircleMap::compose)
      .def("is_identity", &CircleMap::is_identity)
      .def("is_in_thompson_t", &CircleMap::is_in_thompson_t)
      .def("breakpoints",
           [](const CircleMap& g) {
             py::list out;
             for (const auto& p : g.breakpoints()) out.append(fraction(p.value()));
             return out;
           })
      .def("support_interval",
           [](const CircleMap& g) {
             const Arc a = g.smallest_interval_containing_support();
             return py::make_tuple(fraction(a.left.value()), fraction(a.right.value()));
           })
      .def("cocycle",
           [](const CircleMap& g) {
             py::dict out;
             const auto c = cocycle(g);
             for (const auto& [x, r] : c.entries()) out[fraction(x.value())] = c.exponent(x);
             return out;
           })
      .def("__eq__", [](const CircleMap& a, const CircleMap& b) { return a == b; })
      .def("__hash__", &CircleMap::hash)
      .def("__repr__", [](const CircleMap& g) { return "CircleMap(" + g.str() + ")"; });

  m.def("remark_element", [](const py::object& y, int n) { return remark_element(CirclePoint(to_rational(y)), n); },
        py::arg("y"), py::arg("n"));

  py::class_<GeneratorSet>(m, "GeneratorSet")
      .def_static("load", [](const std::string& path) { return GeneratorSet::load(path); })
      .def_static("from_json", [](const py::object& j) { return GeneratorSet::from_json(to_json(j)); })
      .def("names",
           [](const GeneratorSet& s) {
             std::vector<std::string> out;
             for (const auto& g : s.generators()) out.push_back(g.name);
             return out;
           })
      .def("__getitem__", [](const GeneratorSet& s, const std::string& name) { return s.at(name).map; })
      .def("__contains__", [](const GeneratorSet& s, const std::string& name) { return s.contains(name); })
      .def("__len__", [](const GeneratorSet& s) { return s.generators().size(); })
      .def("word", &GeneratorSet::word)
      .def("verify_relation", [](const GeneratorSet& s, const Word& w) { return verify_relation(s, w); });

  m.def("default_generators", [] { return default_generators(); });
  m.def("default_relations", [] { return default_relations(); });

  py::class_<StepDistribution>(m, "StepDistribution")
      .def_static("from_json", [](const py::object& j, const GeneratorSet& gens) {
        return StepDistribution::from_json(to_json(j), gens);
      })
      .def("to_json", [](const StepDistribution& mu) { return from_json(mu.to_json()); })
      .def("__len__", &StepDistribution::size)
      .def("mass", [](const StepDistribution& mu, const CircleMap& g) { return fraction(mu.mass(g)); })
      .def("atoms",
           [](const StepDistribution& mu) {
             py::list out;
             for (const auto& a : mu.atoms()) out.append(py::make_tuple(a.label, fraction(a.weight), a.element));
             return out;
           })
      .def("__eq__", [](const StepDistribution& a, const StepDistribution& b) { return a == b; });

  m.def("default_measure", [] { return default_measure(); });
  m.def("default_lazy_measure", [] { return default_lazy_measure(); });
  m.def("lazify", &lazify);
  m.def("power", &power, py::arg("mu"), py::arg("s"));

  m.def(
      "entropy_curve",
      [](const StepDistribution& mu, int n_max, std::size_t cap) {
        const auto c = entropy_curve(mu, n_max, cap);
        py::list out;
        for (const auto& p : c.points) {
          py::dict d;
          d["n"] = p.n;
          d["entropy"] = p.entropy;
          d["support_size"] = p.support_size;
          out.append(d);
        }
        return out;
      },
      py::arg("mu"), py::arg("n_max"), py::arg("support_cap") = kDefaultSupportCap);
  m.def("bernoulli_entropy", [](const py::object& pa, const py::object& pe) {
    return bernoulli_entropy(to_rational(pa), to_rational(pe));
  });

  m.def("subcommands", &cli::subcommands);
  m.def("defaults", [](const std::string& name) { return from_json(cli::defaults(name)); });
  m.def(
      "run",
      [](const std::string& name, const py::object& config) {
        const nlohmann::json cfg = config.is_none() ? nlohmann::json::object() : to_json(config);
        cli::RunResult r;
        {
          py::gil_scoped_release release;
          r = cli::run(name, cfg);
        }
        py::dict out;
        out["files"] = r.files;
        out["summary"] = from_json(r.summary);
        return out;
      },
      py::arg("subcommand"), py::arg("config") = py::none());

  py::register_exception<cli::ConfigError>(m, "ConfigError", PyExc_ValueError);
}
