#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sponge/error.hpp"
#include "sponge/examples.hpp"
#include "sponge/model.hpp"
#include "sponge/oracle.hpp"
#include "sponge/potentials.hpp"
#include "sponge/pressure.hpp"
#include "sponge/scene.hpp"

namespace py = pybind11;
using namespace sponge;

namespace {

std::vector<std::string> orderings_1based(const std::vector<Permutation>& v) {
  std::vector<std::string> out;
  for (const auto& s : v) out.push_back(format_ordering(s));
  return out;
}

WeightedMeasure measure_for(const SpongeModel& m, const std::optional<std::vector<double>>& w) {
  return w ? make_measure(*w) : uniform_measure(m.size());
}

py::dict pressure_dict(const PressureResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["certified"] = r.certified;
  d["upper_bound"] = r.upper_bound;
  d["gap"] = r.gap();
  d["argmax_ordering"] = format_ordering(r.argmax_ordering);
  d["symbolic_only"] = r.symbolic_only;
  py::list per;
  for (const auto& o : r.per_ordering) {
    py::dict e;
    e["ordering"] = format_ordering(o.ordering);
    e["value"] = o.value;
    e["upper_bound"] = o.upper_bound;
    e["certified"] = o.certified;
    e["method"] = o.method;
    per.append(e);
  }
  d["per_ordering"] = per;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "L^q spectra and dimensions of self-affine sponges";

  py::register_exception<Error>(m, "SpongeError");
  py::register_exception<ParseError>(m, "ParseError", m.attr("SpongeError"));
  py::register_exception<ValidationError>(m, "ValidationError", m.attr("SpongeError"));
  py::register_exception<DomainError>(m, "DomainError", m.attr("SpongeError"));
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", m.attr("SpongeError"));

  py::class_<Scene>(m, "Scene")
      .def_readonly("name", &Scene::name)
      .def_readonly("notes", &Scene::notes)
      .def_readonly("weights", &Scene::weights)
      .def_property_readonly("dim", [](const Scene& s) { return s.ifs.dim(); })
      .def_property_readonly("size", [](const Scene& s) { return s.ifs.size(); })
      .def("to_json", &serialize_scene);

  m.def("parse_scene", &parse_scene, py::arg("text"));
  m.def("load_scene", &load_scene, py::arg("path_or_name"));
  m.def("builtin_scenes", &builtin_scenes);

  py::class_<SpongeModel>(m, "Model")
      .def(py::init([](const Scene& s) { return new SpongeModel(s.ifs); }), py::arg("scene"))
      .def_property_readonly("dim", &SpongeModel::dim)
      .def_property_readonly("size", &SpongeModel::size)
      .def_property_readonly("valid", [](const SpongeModel& mo) { return mo.validation().ok(); })
      .def_property_readonly("sppc", [](const SpongeModel& mo) { return mo.sppc().satisfied; })
      .def_property_readonly("admissible", [](const SpongeModel& mo) { return orderings_1based(mo.admissible()); })
      .def(
          "lq_spectrum",
          [](const SpongeModel& mo, const std::vector<double>& q, std::optional<std::vector<double>> w, int threads) {
            SpectrumOptions opt;
            opt.threads = threads;
            SpectrumResult r;
            {
              py::gil_scoped_release rel;
              r = lq_spectrum(mo, measure_for(mo, w), q, opt);
            }
            py::list out;
            for (const auto& p : r.points) {
              auto d = pressure_dict(p.pressure);
              d["q"] = p.q;
              out.append(d);
            }
            return out;
          },
          py::arg("q"), py::arg("weights") = py::none(), py::arg("threads") = 1)
      .def(
          "lq_value",
          [](const SpongeModel& mo, double q, std::optional<std::vector<double>> w) {
            return pressure_dict(lq_value(mo, measure_for(mo, w), q));
          },
          py::arg("q"), py::arg("weights") = py::none())
      .def("box_dimension", [](const SpongeModel& mo) { return pressure_dict(box_dimension(mo)); })
      .def(
          "measure_dimensions",
          [](const SpongeModel& mo, std::optional<std::vector<double>> w) {
            auto r = measure_dimensions(mo, measure_for(mo, w));
            py::dict d;
            d["frostman"] = r.frostman;
            d["box_of_measure"] = r.box_of_measure;
            d["closed_lower_frostman"] = r.closed_lower_frostman;
            d["closed_upper_box"] = r.closed_upper_box;
            d["certified"] = r.certified;
            d["entropy_dimension_proxy"] = r.entropy_dimension_proxy;
            d["asymptote_plus"] = r.asymptote_plus;
            d["asymptote_minus"] = r.asymptote_minus;
            d["asymptote_consistent"] = r.asymptote_consistent;
            return d;
          },
          py::arg("weights") = py::none())
      .def(
          "finite_scale_lq",
          [](const SpongeModel& mo, double q, int k, std::optional<std::vector<double>> w, std::uint64_t budget) {
            OracleOptions opt;
            opt.budget = budget;
            FiniteScalePressure r;
            {
              py::gil_scoped_release rel;
              r = finite_scale_lq(mo, measure_for(mo, w), q, std::ldexp(1.0, -k), opt);
            }
            py::dict d;
            d["delta"] = r.delta;
            d["estimate"] = r.estimate;
            d["log_Z"] = r.log_Z;
            d["cube_count"] = r.cube_count;
            return d;
          },
          py::arg("q"), py::arg("k"), py::arg("weights") = py::none(), py::arg("budget") = OracleOptions{}.budget);

  m.def("legendre_transform", &legendre_transform, py::arg("q"), py::arg("T"));
  m.def("carpet_spectrum", &examples::carpet_spectrum, py::arg("u"), py::arg("q"));
}
