// pybind11 veneer over the C++ core. Everything numerical lives in the
// library; this file only translates types (Eigen <-> numpy) and names.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "linres/controllability.hpp"
#include "linres/encoding.hpp"
#include "linres/errors.hpp"
#include "linres/linalg.hpp"
#include "linres/rng.hpp"
#include "linres/simulate.hpp"
#include "linres/topology.hpp"
#include "linres/version.hpp"

namespace py = pybind11;
using namespace linres;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cayley-Hamilton analysis of linear reservoir computers";
  m.attr("__version__") = kVersion;

  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_ArithmeticError);

  py::enum_<TopologyKind>(m, "TopologyKind")
      .value("DelayLine", TopologyKind::DelayLine)
      .value("Cyclic", TopologyKind::Cyclic)
      .value("RandomGaussian", TopologyKind::RandomGaussian)
      .value("Wigner", TopologyKind::Wigner);
  py::enum_<RescaleMode>(m, "RescaleMode")
      .value("AsDistributed", RescaleMode::AsDistributed)
      .value("ExactSpectralRadius", RescaleMode::ExactSpectralRadius);
  py::enum_<FixedQuantity>(m, "FixedQuantity")
      .value("SpectralRadius", FixedQuantity::SpectralRadius)
      .value("MaxSingularValue", FixedQuantity::MaxSingularValue);

  py::class_<ReservoirSpec>(m, "ReservoirSpec")
      .def(py::init<>())
      .def_readwrite("kind", &ReservoirSpec::kind)
      .def_readwrite("n", &ReservoirSpec::n)
      .def_readwrite("rho", &ReservoirSpec::rho)
      .def_readwrite("seed", &ReservoirSpec::seed)
      .def_readwrite("input_seed", &ReservoirSpec::input_seed)
      .def_readwrite("rescale_mode", &ReservoirSpec::rescale_mode);

  py::class_<Reservoir>(m, "Reservoir")
      .def_readonly("spec", &Reservoir::spec)
      .def_readonly("W", &Reservoir::W)
      .def_readonly("w", &Reservoir::w);

  m.def("build_reservoir", &build_reservoir, py::arg("spec"));
  m.def("build_delay_line", &build_delay_line, py::arg("n"), py::arg("rho"));
  m.def("build_cyclic", &build_cyclic, py::arg("n"), py::arg("rho"),
        py::arg("input_seed") = 0);
  m.def("build_random", &build_random, py::arg("n"), py::arg("rho"),
        py::arg("seed"), py::arg("input_seed") = 0,
        py::arg("mode") = RescaleMode::AsDistributed);
  m.def("build_wigner", &build_wigner, py::arg("n"), py::arg("rho"),
        py::arg("seed"), py::arg("input_seed") = 0,
        py::arg("mode") = RescaleMode::AsDistributed);
  m.def("check_aperiodic", &check_aperiodic, py::arg("w"),
        py::arg("tol") = 1e-9);

  py::class_<SpectrumSummary>(m, "SpectrumSummary")
      .def_readonly("spectral_radius", &SpectrumSummary::spectral_radius)
      .def_readonly("max_singular_value", &SpectrumSummary::max_singular_value);

  m.def("spectral_radius", &spectral_radius, py::arg("m"));
  m.def("spectrum_summary", &spectrum_summary, py::arg("m"));
  m.def("singular_values", &singular_values, py::arg("m"));
  m.def("numerical_rank", &numerical_rank, py::arg("m"),
        py::arg("tol") = std::nullopt);
  m.def("nullspace_basis", &nullspace_basis, py::arg("m"),
        py::arg("tol") = std::nullopt);
  m.def("char_poly_negated_coeffs", &char_poly_negated_coeffs, py::arg("m"));
  m.def("least_squares", &least_squares, py::arg("a"), py::arg("b"),
        py::arg("ridge") = 0.0);

  py::class_<CharCoeffs>(m, "CharCoeffs")
      .def_readonly("varphi", &CharCoeffs::varphi);
  m.def("char_coeffs",
        static_cast<CharCoeffs (*)(const Matrix&)>(&char_coeffs),
        py::arg("w"));
  m.def("companion_matrix", &companion_matrix, py::arg("coeffs"));

  py::class_<PhiState>(m, "PhiState")
      .def_readonly("k", &PhiState::k)
      .def_readonly("phi", &PhiState::phi);
  m.def("phi_sequence", &phi_sequence, py::arg("coeffs"), py::arg("horizon"));

  py::class_<EncodedInput>(m, "EncodedInput")
      .def_readonly("s", &EncodedInput::s)
      .def_readonly("horizon", &EncodedInput::horizon)
      .def_readonly("tail_estimate", &EncodedInput::tail_estimate);
  m.def("encode_input", &encode_input, py::arg("coeffs"), py::arg("window"),
        py::arg("horizon") = std::nullopt);
  m.def("encode_input_cyclic", &encode_input_cyclic, py::arg("rho"),
        py::arg("n"), py::arg("window"), py::arg("horizon") = std::nullopt);
  m.def("encode_input_delay", &encode_input_delay, py::arg("window"),
        py::arg("n"));
  m.def("truncation_horizon", &truncation_horizon, py::arg("rho"),
        py::arg("epsilon") = 1e-12, py::arg("min_horizon") = 1);

  py::class_<ControllabilityReport>(m, "ControllabilityReport")
      .def_readonly("C", &ControllabilityReport::C)
      .def_readonly("singular_values", &ControllabilityReport::singular_values)
      .def_readonly("rank", &ControllabilityReport::rank)
      .def_readonly("nullspace", &ControllabilityReport::nullspace)
      .def_readonly("column_norms", &ControllabilityReport::column_norms)
      .def_readonly("rank_tolerance", &ControllabilityReport::rank_tolerance);
  m.def("controllability_matrix", &controllability_matrix, py::arg("r"));
  m.def("analyze", &analyze, py::arg("c"), py::arg("tol") = std::nullopt);
  m.def("expected_column_norms", &expected_column_norms, py::arg("rho"),
        py::arg("n"));
  m.def("cyclic_controllability_tilde", &cyclic_controllability_tilde,
        py::arg("w"));
  m.def("indistinguishability_demo", &indistinguishability_demo, py::arg("r"),
        py::arg("s1"), py::arg("d_index"));

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("total_length", &ExperimentConfig::total_length)
      .def_readwrite("train_split", &ExperimentConfig::train_split)
      .def_readwrite("taus", &ExperimentConfig::taus)
      .def_readwrite("rhos", &ExperimentConfig::rhos)
      .def_readwrite("reservoir_size", &ExperimentConfig::reservoir_size)
      .def_readwrite("realizations", &ExperimentConfig::realizations)
      .def_readwrite("master_seed", &ExperimentConfig::master_seed)
      .def_readwrite("washout", &ExperimentConfig::washout)
      .def_readwrite("ridge", &ExperimentConfig::ridge)
      .def_readwrite("rescale_mode", &ExperimentConfig::rescale_mode)
      .def_readwrite("threads", &ExperimentConfig::threads);
  m.def("validate", &validate, py::arg("cfg"));

  m.def("gaussian_signal", &gaussian_signal, py::arg("length"),
        py::arg("seed"));
  m.def("run_reservoir", &run_reservoir, py::arg("r"), py::arg("input"));
  m.def("delayed_targets", &delayed_targets, py::arg("input"), py::arg("tau"));

  py::class_<TrainedReadout>(m, "TrainedReadout")
      .def_readonly("r", &TrainedReadout::r)
      .def_readonly("train_nrmse", &TrainedReadout::train_nrmse);
  m.def("train_readout", &train_readout, py::arg("states"), py::arg("targets"),
        py::arg("tau"), py::arg("cfg"));
  m.def("nrmse", &nrmse, py::arg("y"), py::arg("yhat"));
  m.def("accuracy", &accuracy, py::arg("nrmse_value"));
  m.def("test_gamma", &test_gamma, py::arg("states"), py::arg("targets"),
        py::arg("readout"), py::arg("cfg"));

  py::class_<GammaRecord>(m, "GammaRecord")
      .def_readonly("kind", &GammaRecord::kind)
      .def_readonly("n", &GammaRecord::n)
      .def_readonly("rho", &GammaRecord::rho)
      .def_readonly("tau", &GammaRecord::tau)
      .def_readonly("realization", &GammaRecord::realization)
      .def_readonly("gamma", &GammaRecord::gamma);
  py::class_<CurvePoint>(m, "CurvePoint")
      .def_readonly("tau", &CurvePoint::tau)
      .def_readonly("mean_gamma", &CurvePoint::mean_gamma)
      .def_readonly("std_gamma", &CurvePoint::std_gamma);
  py::class_<MemoryCurve>(m, "MemoryCurve")
      .def_readonly("kind", &MemoryCurve::kind)
      .def_readonly("rho", &MemoryCurve::rho)
      .def_readonly("points", &MemoryCurve::points);
  py::class_<MemoryCurveResult>(m, "MemoryCurveResult")
      .def_readonly("raw", &MemoryCurveResult::raw)
      .def_readonly("curve", &MemoryCurveResult::curve);
  m.def("memory_curve", &memory_curve, py::arg("kind"), py::arg("rho"),
        py::arg("cfg"), py::call_guard<py::gil_scoped_release>());

  py::class_<SweepPoint>(m, "SweepPoint")
      .def_readonly("rho", &SweepPoint::rho)
      .def_readonly("tau", &SweepPoint::tau)
      .def_readonly("mean_gamma", &SweepPoint::mean_gamma)
      .def_readonly("std_gamma", &SweepPoint::std_gamma);
  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("raw", &SweepResult::raw)
      .def_readonly("points", &SweepResult::points);
  m.def("sr_sweep", &sr_sweep, py::arg("kind"), py::arg("taus"),
        py::arg("rhos"), py::arg("cfg"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<RankRecord>(m, "RankRecord")
      .def_readonly("kind", &RankRecord::kind)
      .def_readonly("n", &RankRecord::n)
      .def_readonly("rho", &RankRecord::rho)
      .def_readonly("realization", &RankRecord::realization)
      .def_readonly("rank", &RankRecord::rank);
  py::class_<RankScanRow>(m, "RankScanRow")
      .def_readonly("kind", &RankScanRow::kind)
      .def_readonly("n", &RankScanRow::n)
      .def_readonly("mean_rank", &RankScanRow::mean_rank)
      .def_readonly("std_rank", &RankScanRow::std_rank);
  py::class_<RankScanResult>(m, "RankScanResult")
      .def_readonly("raw", &RankScanResult::raw)
      .def_readonly("rows", &RankScanResult::rows);
  m.def("rank_scan", &rank_scan, py::arg("kinds"), py::arg("ns"),
        py::arg("rho"), py::arg("fixed"), py::arg("cfg"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<Philox4x64>(m, "Philox4x64")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("key0"),
           py::arg("key1") = 0)
      .def("next_u64", &Philox4x64::next_u64)
      .def("next_unit", &Philox4x64::next_unit)
      .def("next_gaussian", &Philox4x64::next_gaussian);
  m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("role"),
        py::arg("index"));
}
