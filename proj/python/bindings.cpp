#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mzcg/benchmark_model.hpp"
#include "mzcg/cg_geometry.hpp"
#include "mzcg/config.hpp"
#include "mzcg/effective_models.hpp"
#include "mzcg/experiments.hpp"
#include "mzcg/memory_kernel.hpp"
#include "mzcg/sde_engine.hpp"

namespace py = pybind11;
using namespace mzcg;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<double> states_array(const Trajectory& t) {
    py::array_t<double> out({static_cast<py::ssize_t>(t.size()), static_cast<py::ssize_t>(t.dim)});
    std::copy(t.states.begin(), t.states.end(), out.mutable_data());
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Mori-Zwanzig coarse-graining of overdamped Langevin dynamics (C++ core)";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<RankDeficient>(m, "RankDeficient", base.ptr());
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());
    py::register_exception<GridMismatch>(m, "GridMismatch", base.ptr());
    py::register_exception<UnsupportedModel>(m, "UnsupportedModel", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());
    py::register_exception<NumericalBlowup>(m, "NumericalBlowup", base.ptr());

    py::class_<BenchmarkParams>(m, "BenchmarkParams")
        .def(py::init([](double mu, double lambda_, double tau, double omega, double beta,
                         bool deterministic) {
                 BenchmarkParams p{mu, lambda_, tau, omega, beta, deterministic};
                 p.validate();
                 return p;
             }),
             py::arg("mu") = 2.0, py::arg("lambda_") = 20.0, py::arg("tau") = 2.0,
             py::arg("omega") = 10.0, py::arg("beta") = 1.0, py::arg("deterministic") = false)
        .def_readwrite("mu", &BenchmarkParams::mu)
        .def_readwrite("lambda_", &BenchmarkParams::lambda)
        .def_readwrite("tau", &BenchmarkParams::tau)
        .def_readwrite("omega", &BenchmarkParams::omega)
        .def_readwrite("beta", &BenchmarkParams::beta)
        .def_readwrite("deterministic", &BenchmarkParams::deterministic)
        .def("__repr__", [](const BenchmarkParams& p) {
            return "BenchmarkParams(mu=" + format_double(p.mu) + ", lambda_=" +
                   format_double(p.lambda) + ", tau=" + format_double(p.tau) +
                   ", omega=" + format_double(p.omega) + ", beta=" + format_double(p.beta) + ")";
        });

    // Geometry
    py::class_<CGMap>(m, "CGMap")
        .def_readonly("phi", &CGMap::phi)
        .def_readonly("sigma", &CGMap::sigma)
        .def_readonly("sigma_sq", &CGMap::sigma_sq)
        .def_readonly("phi_star", &CGMap::phi_star)
        .def_readonly("psi", &CGMap::psi);
    m.def("build_cg_map", &build_cg_map, py::arg("phi"));
    m.def("decompose", [](const CGMap& map, const Eigen::VectorXd& x) {
        auto d = decompose(map, x);
        return py::make_tuple(d.h, d.xt);
    }, py::arg("map"), py::arg("x"));
    m.def("reconstruct", &reconstruct, py::arg("map"), py::arg("h"), py::arg("xt"));

    // Benchmark fields
    m.def("potential", &potential, py::arg("params"), py::arg("x"), py::arg("y"));
    m.def("grad_potential", &grad_potential, py::arg("params"), py::arg("x"), py::arg("y"));
    m.def("orthogonal_drift", &orthogonal_drift, py::arg("params"), py::arg("x"), py::arg("y"));
    m.def("effective_potential_grad", &effective_potential_grad, py::arg("params"), py::arg("h"));

    py::class_<NoiseStream>(m, "NoiseStream")
        .def(py::init([](std::uint64_t seed, std::uint64_t stream_id, std::uint64_t position) {
                 return NoiseStream{seed, stream_id, position};
             }),
             py::arg("master_seed"), py::arg("stream_id") = 0, py::arg("position") = 0)
        .def_readwrite("master_seed", &NoiseStream::master_seed)
        .def_readwrite("stream_id", &NoiseStream::stream_id)
        .def_readwrite("position", &NoiseStream::position)
        .def("pair_at", &NoiseStream::pair_at)
        .def("scalar_at", &NoiseStream::scalar_at);
    m.def("conditional_y_sample", &conditional_y_sample, py::arg("params"), py::arg("x"),
          py::arg("stream"));

    // Effective models
    py::enum_<ModelKind>(m, "ModelKind")
        .value("MemoryCorrected", ModelKind::MemoryCorrected)
        .value("MemoryFree", ModelKind::MemoryFree)
        .value("NaiveMemory", ModelKind::NaiveMemory);
    m.def("parse_model_kind", [](const std::string& s) { return parse_model_kind(s); });
    m.def("drift", [](ModelKind k, const BenchmarkParams& p, double h) { return drift({k, p}, h); },
          py::arg("kind"), py::arg("params"), py::arg("h"));
    m.def("diffusion",
          [](ModelKind k, const BenchmarkParams& p, double h) { return diffusion({k, p}, h); },
          py::arg("kind"), py::arg("params"), py::arg("h"));

    // Integration
    py::class_<IntegratorConfig>(m, "IntegratorConfig")
        .def(py::init([](double dt, double t_final, std::size_t stride) {
                 IntegratorConfig c{dt, t_final, stride};
                 c.validate();
                 return c;
             }),
             py::arg("dt"), py::arg("t_final"), py::arg("record_stride") = 1)
        .def_readwrite("dt", &IntegratorConfig::dt)
        .def_readwrite("t_final", &IntegratorConfig::t_final)
        .def_readwrite("record_stride", &IntegratorConfig::record_stride);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("dim", &Trajectory::dim)
        .def_property_readonly("times", [](const Trajectory& t) { return to_array(t.times); })
        .def_property_readonly("states", &states_array)
        .def("__len__", &Trajectory::size);

    m.def("simulate_full",
          [](const BenchmarkParams& p, std::array<double, 2> x0, const IntegratorConfig& cfg,
             const NoiseStream& stream, bool thermostat) {
              return simulate_full(p, x0, cfg, stream, thermostat);
          },
          py::arg("params"), py::arg("x0"), py::arg("cfg"), py::arg("stream"),
          py::arg("thermostat") = true, py::call_guard<py::gil_scoped_release>());
    m.def("simulate_scalar",
          [](ModelKind k, const BenchmarkParams& p, double h0, const IntegratorConfig& cfg,
             const NoiseStream& stream, bool thermostat) {
              return simulate_scalar({k, p}, h0, cfg, stream, thermostat);
          },
          py::arg("kind"), py::arg("params"), py::arg("h0"), py::arg("cfg"), py::arg("stream"),
          py::arg("thermostat") = true, py::call_guard<py::gil_scoped_release>());
    m.def("ensemble_mean", [](const std::vector<Trajectory>& runs) {
        auto stats = ensemble_mean(runs);
        py::array_t<double> se({static_cast<py::ssize_t>(stats.mean.size()),
                                static_cast<py::ssize_t>(stats.mean.dim)});
        std::copy(stats.std_error.begin(), stats.std_error.end(), se.mutable_data());
        return py::make_tuple(stats.mean, se);
    });

    // Memory kernel
    py::class_<KernelEstimate>(m, "KernelEstimate")
        .def_readonly("x0", &KernelEstimate::x0)
        .def_readonly("n_samples", &KernelEstimate::n_samples)
        .def_property_readonly("lags", [](const KernelEstimate& e) { return to_array(e.lags); })
        .def_property_readonly("values", [](const KernelEstimate& e) { return to_array(e.values); })
        .def_property_readonly("std_error",
                               [](const KernelEstimate& e) { return to_array(e.std_error); });
    m.def("default_orthogonal_dt", &default_orthogonal_dt, py::arg("params"));
    m.def("default_lag_grid", &default_lag_grid, py::arg("params"), py::arg("x0"), py::arg("dt"),
          py::arg("count") = 60);
    m.def("orthogonal_trajectory", &orthogonal_trajectory, py::arg("params"), py::arg("x0"),
          py::arg("y0"), py::arg("cfg"));
    m.def("empirical_kernel", &empirical_kernel, py::arg("params"), py::arg("x0"),
          py::arg("lags"), py::arg("n_samples"), py::arg("stream"), py::arg("cfg"),
          py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());
    m.def("fit_kernel_decay_rate", [](const KernelEstimate& e) -> std::optional<double> {
        auto fit = fit_kernel_decay(e);
        if (!fit) return std::nullopt;
        return -fit->slope;
    });
    m.def("kernel_decay_rate", &kernel_decay_rate, py::arg("params"), py::arg("h"));
    m.def("approx_kernel", &approx_kernel, py::arg("params"), py::arg("s"), py::arg("h"));
    m.def("approx_kernel_div", &approx_kernel_div, py::arg("params"), py::arg("s"), py::arg("h"));
    m.def("memory_integral_closed_form", [](const BenchmarkParams& p, double h) {
        auto r = memory_integral_closed_form(p, h);
        return py::make_tuple(r.drift_term, r.div_term);
    }, py::arg("params"), py::arg("h"));

    // Experiments
    m.def("run_experiment",
          [](const std::string& name, const std::map<std::string, std::string>& settings,
             bool desk_scale) {
              KeyValues overrides(settings.begin(), settings.end());
              const auto cfg = resolve_config(parse_experiment(name), desk_scale, {}, overrides);
              ExperimentResult r;
              {
                  py::gil_scoped_release release;
                  r = run_experiment(cfg);
              }
              py::dict summary;
              for (const auto& [k, v] : r.summary) summary[py::str(k)] = v;
              py::list files;
              for (const auto& f : r.files) files.append(f.string());
              return py::make_tuple(files, summary, r.blowup);
          },
          py::arg("experiment"), py::arg("settings") = std::map<std::string, std::string>{},
          py::arg("desk_scale") = false);
}
