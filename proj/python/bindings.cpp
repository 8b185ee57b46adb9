#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spinguide/analysis.hpp"
#include "spinguide/chain.hpp"
#include "spinguide/config.hpp"
#include "spinguide/propagator.hpp"
#include "spinguide/version.hpp"

namespace py = pybind11;
using namespace spinguide;

namespace {

py::array_t<std::complex<double>> amplitudes_array(const WaveFunction& psi) {
  py::array_t<std::complex<double>> arr(psi.amp.size());
  std::copy(psi.amp.begin(), psi.amp.end(), arr.mutable_data());
  return arr;
}

py::array_t<double> density_matrix(const EvolutionRecord& rec) {
  const std::size_t rows = rec.snapshots.size();
  const std::size_t cols = rows ? rec.snapshots.front().density.size() : 0;
  py::array_t<double> arr({rows, cols});
  auto view = arr.mutable_unchecked<2>();
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) view(i, j) = rec.snapshots[i].density[j];
  return arr;
}

}  // namespace

PYBIND11_MODULE(_spinguide, m) {
  m.doc() = "spin-guide magnon transport simulator";
  m.attr("__version__") = kVersion;

  py::class_<Grid1D>(m, "Grid1D")
      .def(py::init<double, double, int>(), py::arg("x_min"), py::arg("x_max"),
           py::arg("n_points"))
      .def_readonly("x_min", &Grid1D::x_min)
      .def_readonly("x_max", &Grid1D::x_max)
      .def_readonly("n_points", &Grid1D::n_points)
      .def_readonly("dx", &Grid1D::dx)
      .def("positions", [](const Grid1D& g) {
        py::array_t<double> xs(g.n_points);
        for (int j = 0; j < g.n_points; ++j) xs.mutable_data()[j] = g.position(j);
        return xs;
      });

  py::class_<WaveFunction>(m, "WaveFunction")
      .def_readonly("grid", &WaveFunction::grid)
      .def_property_readonly("amplitudes", &amplitudes_array)
      .def("norm_squared", [](const WaveFunction& psi) { return norm_squared(psi); });

  py::class_<PhysicalConstants>(m, "PhysicalConstants")
      .def(py::init([](double J, double B0, double w) {
             PhysicalConstants c{J, B0, w};
             c.validate();
             return c;
           }),
           py::arg("J") = 1.0, py::arg("B0") = 1.0, py::arg("w") = 1.0)
      .def_readonly("J", &PhysicalConstants::J)
      .def_readonly("B0", &PhysicalConstants::B0)
      .def_readonly("w", &PhysicalConstants::w);

  py::class_<GuideTrajectory>(m, "GuideTrajectory")
      .def("center", [](const GuideTrajectory& t, double time) { return center(t, time); })
      .def("velocity", [](const GuideTrajectory& t, double time) { return velocity(t, time); });
  m.def("stationary", [](double x0) { return GuideTrajectory{Stationary{x0}}; }, py::arg("x0"));
  m.def("linear", [](double x0, double v) { return GuideTrajectory{Linear{x0, v}}; },
        py::arg("x0"), py::arg("v"));
  m.def("corner",
        [](double r, double theta, double t_f) { return GuideTrajectory{Corner{r, theta, t_f}}; },
        py::arg("r"), py::arg("theta"), py::arg("t_f"));
  m.def("x_branch",
        [](double x_l, double theta, const std::string& direction) {
          if (direction != "lr" && direction != "rl")
            throw std::invalid_argument("direction must be 'lr' or 'rl'");
          return GuideTrajectory{XBranch{
              x_l, theta, direction == "lr" ? XDirection::LeftToRight : XDirection::RightToLeft}};
        },
        py::arg("x_l"), py::arg("theta"), py::arg("direction"));
  m.def("parallel_splitter",
        [](double r, double d, double mslope, double x_l, double t_f, const std::string& side) {
          if (side != "left" && side != "right")
            throw std::invalid_argument("side must be 'left' or 'right'");
          return GuideTrajectory{ParallelSplitterBranch{
              r, d, mslope, x_l, t_f,
              side == "left" ? SplitterSide::Left : SplitterSide::Right}};
        },
        py::arg("r"), py::arg("d"), py::arg("m"), py::arg("x_l"), py::arg("t_f"),
        py::arg("side"));

  py::class_<MetricsReport>(m, "MetricsReport")
      .def_readonly("fidelity", &MetricsReport::fidelity)
      .def_readonly("fidelity_phase_matched", &MetricsReport::fidelity_phase_matched)
      .def_readonly("reflection", &MetricsReport::reflection)
      .def_readonly("transmission", &MetricsReport::transmission)
      .def_readonly("total_fidelity", &MetricsReport::total_fidelity)
      .def_readonly("left_fraction", &MetricsReport::left_fraction)
      .def_readonly("right_fraction", &MetricsReport::right_fraction)
      .def_readonly("absorbed", &MetricsReport::absorbed)
      .def_readonly("final_norm2", &MetricsReport::final_norm2)
      .def_readonly("warnings", &MetricsReport::warnings);

  py::class_<EvolutionRecord>(m, "EvolutionRecord")
      .def_property_readonly("times", &EvolutionRecord::times)
      .def_property_readonly("densities", &density_matrix)
      .def_readonly("final_state", &EvolutionRecord::final_state)
      .def_readonly("final_norm2", &EvolutionRecord::final_norm2)
      .def_readonly("final_absorbed", &EvolutionRecord::final_absorbed);

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("record", &RunResult::record)
      .def_readonly("metrics", &RunResult::metrics);

  m.def("ground_mode", &ground_mode, py::arg("trajectory"), py::arg("t"), py::arg("constants"),
        py::arg("grid"));
  m.def("coupled_mode_frequency_closed_form", &coupled_mode_frequency_closed_form, py::arg("d"));
  m.def("two_state_gap",
        [](double d) {
          return effective_two_state_hamiltonian(d, PhysicalConstants{}).gap;
        },
        py::arg("d"));
  m.def("left_right_fraction", &left_right_fraction, py::arg("psi"));
  m.def("run_scenario_json",
        [](const std::string& config_json) {
          RunConfig cfg = parse_config(config_json);
          return run_scenario(cfg.scenario);
        },
        py::arg("config_json"),
        "Parse a config document (the same schema the CLI reads) and run its scenario.");
}
