#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mmuplink/cli.hpp"
#include "mmuplink/config.hpp"
#include "mmuplink/experiment.hpp"
#include "mmuplink/io.hpp"
#include "mmuplink/oracle.hpp"
#include "mmuplink/outage.hpp"
#include "mmuplink/propagation.hpp"

namespace py = pybind11;
using namespace mmuplink;

namespace {

RunConfig config_from(const std::string& path, const std::vector<std::string>& settings)
{
    RunConfig cfg = path.empty() ? RunConfig{} : load_run_config(path);
    for (const auto& s : settings)
        apply_assignment(cfg, s);
    return cfg;
}

py::dict row_dict(const SweepRow& r)
{
    py::dict d;
    d["cm_ratio"] = r.cm_ratio;
    d["d_r_km"] = r.d_r_km;
    d["beta_db"] = r.beta_db;
    d["shadowing"] = r.shadowing;
    d["hopping"] = r.hopping;
    d["fading_model"] = to_string(r.fading);
    d["avg_outage"] = r.avg_outage;
    d["std_outage"] = r.std_outage;
    d["rate_bpcu"] = r.rate_bpcu;
    d["ase_bpcu_per_km2"] = r.ase;
    d["n_trials"] = r.n_trials;
    d["seed"] = r.seed;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Frequency-hopping mmWave uplink outage simulator";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);
    py::register_exception<PlacementInfeasible>(m, "PlacementInfeasible", PyExc_RuntimeError);

    py::enum_<Diversity>(m, "Diversity").value("HOPPING", Diversity::Hopping).value("NONE", Diversity::NoHopping);

    py::class_<PropagationParams>(m, "PropagationParams")
        .def(py::init<>())
        .def_readwrite("alpha_min", &PropagationParams::alpha_min)
        .def_readwrite("alpha_max", &PropagationParams::alpha_max)
        .def_readwrite("sigma_min_db", &PropagationParams::sigma_min_db)
        .def_readwrite("sigma_max_db", &PropagationParams::sigma_max_db)
        .def_readwrite("m_min", &PropagationParams::m_min)
        .def_readwrite("m_max", &PropagationParams::m_max)
        .def_readwrite("mu_per_km", &PropagationParams::mu_per_km)
        .def_readwrite("d0_km", &PropagationParams::d0_km);

    m.def("alpha", &alpha, py::arg("d_km"), py::arg("params") = PropagationParams{});
    m.def("shadow_sigma", &shadow_sigma, py::arg("d_km"), py::arg("params") = PropagationParams{});
    m.def("nakagami_m", &nakagami_m, py::arg("d_km"), py::arg("params") = PropagationParams{});
    m.def("path_loss", &path_loss, py::arg("d_km"), py::arg("params") = PropagationParams{});

    py::class_<InterfererPeriodTerm>(m, "Term")
        .def(py::init([](double omega, double q, double duration, double m) {
                 return InterfererPeriodTerm{omega, q, duration, m};
             }),
             py::arg("omega"), py::arg("q"), py::arg("duration"), py::arg("m"))
        .def_readwrite("omega", &InterfererPeriodTerm::omega)
        .def_readwrite("q", &InterfererPeriodTerm::q)
        .def_readwrite("duration", &InterfererPeriodTerm::duration)
        .def_readwrite("m", &InterfererPeriodTerm::m);

    py::class_<InterferenceProfile>(m, "Profile")
        .def(py::init([](double gamma0, int m0, std::vector<InterfererPeriodTerm> terms) {
                 InterferenceProfile p;
                 p.gamma0 = gamma0;
                 p.m0 = m0;
                 p.terms = std::move(terms);
                 return p;
             }),
             py::arg("gamma0"), py::arg("m0"), py::arg("terms") = std::vector<InterfererPeriodTerm>{})
        .def_readwrite("gamma0", &InterferenceProfile::gamma0)
        .def_readwrite("m0", &InterferenceProfile::m0)
        .def_readwrite("terms", &InterferenceProfile::terms);

    m.def("conditional_outage", &conditional_outage, py::arg("profile"), py::arg("beta"),
          py::arg("diversity") = Diversity::Hopping);
    m.def(
        "estimate_outage",
        [](const InterferenceProfile& p, double beta, std::uint64_t draws, std::uint64_t seed, Diversity d) {
            py::gil_scoped_release release;
            const OracleEstimate e = estimate_outage(p, beta, draws, seed, d);
            return std::make_pair(e.outage, e.standard_error);
        },
        py::arg("profile"), py::arg("beta"), py::arg("draws") = 1'000'000, py::arg("seed") = 1,
        py::arg("diversity") = Diversity::Hopping, "(estimate, standard error)");
    m.def("code_rate", &code_rate, py::arg("beta"), py::arg("rate_loss") = kDefaultRateLoss);
    m.def("beta_for_rate", &beta_for_rate, py::arg("rate"), py::arg("rate_loss") = kDefaultRateLoss);
    m.def("typical_link_length", &typical_link_length, py::arg("cm_ratio"), py::arg("d_r0_km") = 0.1);

    m.def(
        "run_sweep",
        [](const std::string& config, const std::vector<std::string>& settings) {
            const RunConfig cfg = config_from(config, settings);
            cfg.experiment.validate();
            const NetworkTopology base = load_topology(cfg.topology, cfg.experiment.network.beam.sectors_per_station);
            std::vector<SweepRow> rows;
            {
                py::gil_scoped_release release;
                rows = run_sweep(cfg.experiment, base);
            }
            py::list out;
            for (const auto& r : rows)
                out.append(row_dict(r));
            return out;
        },
        py::arg("config") = "", py::arg("settings") = std::vector<std::string>{},
        "Sweep rows as dicts; `settings` are key=value overrides");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = run_cli(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "(exit code, stdout, stderr)");
}
