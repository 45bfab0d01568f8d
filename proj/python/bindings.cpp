#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "flrdt/capacity.hpp"
#include "flrdt/cli.hpp"
#include "flrdt/error.hpp"
#include "flrdt/lifting.hpp"
#include "flrdt/oracle.hpp"

namespace py = pybind11;
using namespace flrdt;

// Results cross the boundary as JSON text; the Python side parses them.
namespace {

CapacityConfig capacity_config(const std::string& lift, int r, double tol_alpha) {
    CapacityConfig cfg;
    cfg.lift = lift_config_from_string(lift);
    cfg.r = r;
    cfg.tol_alpha = tol_alpha;
    return cfg;
}

} // namespace

PYBIND11_MODULE(_flrdt, m) {
    m.doc() = "Lifted random duality bounds for random feasibility problems";
    py::register_exception<Error>(m, "FlrdtError", PyExc_ValueError);

    m.def("noise_coefficients",
          [](int r, std::vector<double> p, std::vector<double> q, std::vector<double> c) {
              return nlohmann::json(noise_coefficients({r, std::move(p), std::move(q), std::move(c)})).dump();
          },
          py::arg("r"), py::arg("p"), py::arg("q"), py::arg("c"));

    m.def("dual_value",
          [](const std::string& family, double kappa, double alpha, const std::string& lift, int r) {
              py::gil_scoped_release release;
              const auto cfg = capacity_config(lift, r, 1e-3);
              return nlohmann::json(dual_value_at_alpha(perceptron_family_from_string(family), kappa, alpha, cfg))
                  .dump();
          },
          py::arg("family"), py::arg("kappa"), py::arg("alpha"), py::arg("lift") = "fully_lifted", py::arg("r") = 2);

    m.def("capacity",
          [](const std::string& family, double kappa, double lo, double hi, const std::string& lift, int r,
             double tol_alpha) {
              py::gil_scoped_release release;
              const auto cfg = capacity_config(lift, r, tol_alpha);
              return nlohmann::json(capacity_bisect(perceptron_family_from_string(family), kappa, lo, hi, cfg)).dump();
          },
          py::arg("family"), py::arg("kappa"), py::arg("lo"), py::arg("hi"), py::arg("lift") = "fully_lifted",
          py::arg("r") = 2, py::arg("tol_alpha") = 1e-3);

    m.def("empirical_transition",
          [](const std::string& family, int n, const std::vector<double>& alpha_grid, int trials, std::uint64_t seed,
             double kappa) {
              py::gil_scoped_release release;
              return nlohmann::json(
                         empirical_transition(perceptron_family_from_string(family), n, alpha_grid, trials, seed, kappa))
                  .dump();
          },
          py::arg("family"), py::arg("n"), py::arg("alpha_grid"), py::arg("trials"), py::arg("seed"),
          py::arg("kappa") = 0.0);

    m.def("feasibility_check",
          [](const std::string& family, int n, int m2, double kappa, std::uint64_t seed) {
              const auto inst = sample_instance(n, 0, m2, kappa, seed);
              const XFamily xf = perceptron_family_from_string(family) == PerceptronFamily::Binary
                                     ? XFamily::BinaryCorners
                                     : XFamily::Sphere;
              const auto rep = feasibility_check(inst, xf);
              return nlohmann::json{{"verdict", to_string(rep.verdict)},
                                    {"margin", rep.margin},
                                    {"witness", rep.witness},
                                    {"dual", rep.dual},
                                    {"patterns_checked", rep.patterns_checked}}
                  .dump();
          },
          py::arg("family"), py::arg("n"), py::arg("m"), py::arg("kappa"), py::arg("seed"));

    m.def("wilson_interval", &wilson_interval, py::arg("successes"), py::arg("trials"),
          py::arg("z") = 1.959963984540054);

    m.def("validate_config",
          [](const std::string& raw) { return validate_config(nlohmann::json::parse(raw)).dump(); }, py::arg("config"));

    m.def("run_job",
          [](const std::string& config, const std::string& out_dir, const std::string& format) {
              JobResult res;
              {
                  py::gil_scoped_release release;
                  res = run_job(nlohmann::json::parse(config), out_dir, format);
              }
              return py::make_tuple(res.exit_code, res.files, res.message);
          },
          py::arg("config"), py::arg("out_dir"), py::arg("format") = "csv");

    m.attr("__version__") = "0.1.0";
}
