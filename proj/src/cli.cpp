#include "mmuplink/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include "CLI11.hpp"

#include "mmuplink/config.hpp"
#include "mmuplink/error.hpp"
#include "mmuplink/experiment.hpp"
#include "mmuplink/io.hpp"
#include "mmuplink/validation.hpp"

namespace mmuplink {

namespace {

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<unsigned> threads;
    std::vector<std::string> settings;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_trials)
{
    cmd->add_option("--config", o.config, "key = value configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "master seed");
    if (with_trials)
        cmd->add_option("--trials", o.trials, "Monte Carlo trials per grid point")->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", o.threads, "worker threads (default: MMUPLINK_THREADS or all cores)");
    cmd->add_option("--set", o.settings, "override a setting, key=value (repeatable)");
}

RunConfig resolve(const CommonOptions& o)
{
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_run_config(o.config);
    for (const std::string& s : o.settings)
        apply_assignment(cfg, s);
    if (o.seed)
        cfg.experiment.seed = *o.seed;
    if (o.trials)
        cfg.experiment.trials = *o.trials;
    if (o.out)
        cfg.out_dir = *o.out;
    if (o.format)
        cfg.format = *o.format;
    if (o.threads)
        cfg.experiment.threads = *o.threads;
    try {
        cfg.experiment.validate();
    } catch (const InvalidParameter& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

std::ofstream open_output(const std::filesystem::path& path)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError("cannot write '" + path.string() + "'");
    return f;
}

int cmd_sweep(const CommonOptions& o, std::ostream& out)
{
    const RunConfig cfg = resolve(o);
    const NetworkTopology base = load_topology(cfg.topology, cfg.experiment.network.beam.sectors_per_station);
    const std::vector<SweepRow> rows = run_sweep(cfg.experiment, base);
    const std::filesystem::path path = std::filesystem::path(cfg.out_dir) / ("sweep." + cfg.format);
    std::ofstream f = open_output(path);
    if (cfg.format == "json")
        write_sweep_json(f, rows);
    else
        write_sweep_csv(f, rows);
    out << "wrote " << rows.size() << " rows to " << path.string() << "\n";
    return kExitOk;
}

int cmd_rate_curve(const CommonOptions& o, std::optional<std::size_t> uplinks, std::optional<double> cm,
                   std::ostream& out)
{
    RunConfig cfg = resolve(o);
    if (uplinks)
        cfg.experiment.curve_uplinks = *uplinks;
    if (cm)
        cfg.experiment.curve_cm_ratio = *cm;
    try {
        cfg.experiment.validate();
    } catch (const InvalidParameter& e) {
        throw ConfigError(e.what());
    }
    const NetworkTopology base = load_topology(cfg.topology, cfg.experiment.network.beam.sectors_per_station);
    const RateCurves curves = run_rate_curve(cfg.experiment, base);
    const std::filesystem::path path = std::filesystem::path(cfg.out_dir) / "rate_curve.csv";
    std::ofstream f = open_output(path);
    write_rate_curve_csv(f, curves);
    out << "wrote " << curves.outage.size() << " uplink curves to " << path.string() << "\n";
    return kExitOk;
}

struct ValidateOptions {
    std::uint64_t draws = 1'000'000;
    std::size_t cases = 50;
    std::uint64_t seed = 1;
    int max_interferers = 5;
    std::optional<unsigned> threads;
};

int cmd_validate(const ValidateOptions& v, std::ostream& out)
{
    if (v.draws < 10'000)
        throw ConfigError("--draws must be at least 10000");
    Rng rng = make_stream(v.seed, 0x76616c69, 0);
    int failures = 0;
    out << "case,m0,interferers,beta,z,closed_form,oracle,stderr,result\n";
    for (std::size_t k = 0; k < v.cases; ++k) {
        const ValidationCase c = random_validation_case(rng, v.max_interferers);
        const ValidationResult r = validate_case(c, v.draws, mix_keys({v.seed, k}), v.threads.value_or(0));
        failures += r.pass ? 0 : 1;
        out << k << ',' << c.profile.m0 << ',' << c.profile.interferers.size() << ',' << format_double(c.beta) << ','
            << format_double(1.0 / c.profile.gamma0) << ',' << format_double(r.closed_form) << ','
            << format_double(r.estimate.outage) << ',' << format_double(r.sigma) << ','
            << (r.pass ? "pass" : "FAIL") << "\n";
    }
    const int allowance = binomial_allowance(v.cases);
    out << "failures " << failures << " of " << v.cases << ", allowance " << allowance << "\n";
    return failures <= allowance ? kExitOk : kExitFailure;
}

struct TopologyOptions {
    std::size_t stations = 121;
    double region_km = 30.0;
    double jitter_km = 0.8;
    std::uint64_t seed = 7;
    std::string out = "-";
};

int cmd_gen_topology(const TopologyOptions& t, std::ostream& out)
{
    const auto stations = generate_stations(t.stations, t.region_km, t.jitter_km, t.seed);
    if (t.out == "-") {
        write_topology_csv(out, stations);
        return kExitOk;
    }
    std::filesystem::path path(t.out);
    if (std::filesystem::is_directory(path))
        path /= "topology.csv";
    std::ofstream f = open_output(path);
    write_topology_csv(f, stations);
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Frequency-hopping mmWave uplink outage simulator"};
    app.require_subcommand(1);

    CommonOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "Average outage and area spectral efficiency over a C/M grid");
    add_common(sweep, sweep_opts, true);

    CommonOptions curve_opts;
    std::optional<std::size_t> uplinks;
    std::optional<double> curve_cm;
    auto* curve = app.add_subcommand("rate-curve", "Outage versus code rate for uplinks of one realization");
    add_common(curve, curve_opts, false);
    curve->add_option("--uplinks", uplinks, "uplinks reported individually")->check(CLI::PositiveNumber);
    curve->add_option("--cm-ratio", curve_cm, "C/M of the realization");

    ValidateOptions val_opts;
    auto* validate = app.add_subcommand("validate", "Closed-form outage against the Monte Carlo oracle");
    validate->add_option("--draws", val_opts.draws, "oracle draws per case (>= 10000)")->capture_default_str();
    validate->add_option("--cases", val_opts.cases, "randomized profiles")->capture_default_str()->check(CLI::PositiveNumber);
    validate->add_option("--seed", val_opts.seed, "master seed")->capture_default_str();
    validate->add_option("--max-interferers", val_opts.max_interferers, "interferers per profile")->capture_default_str()
        ->check(CLI::Range(0, 64));
    validate->add_option("--threads", val_opts.threads, "worker threads");

    TopologyOptions topo_opts;
    auto* gen = app.add_subcommand("gen-topology", "Write a perturbed-grid station layout");
    gen->add_option("--stations", topo_opts.stations, "station count")->capture_default_str()->check(CLI::PositiveNumber);
    gen->add_option("--region", topo_opts.region_km, "side of the square region, km")->capture_default_str()
        ->check(CLI::PositiveNumber);
    gen->add_option("--jitter", topo_opts.jitter_km, "maximum per-axis offset, km")->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    gen->add_option("--seed", topo_opts.seed, "layout seed")->capture_default_str();
    gen->add_option("--out", topo_opts.out, "output file or directory, - for stdout")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    try {
        if (sweep->parsed())
            return cmd_sweep(sweep_opts, out);
        if (curve->parsed())
            return cmd_rate_curve(curve_opts, uplinks, curve_cm, out);
        if (validate->parsed())
            return cmd_validate(val_opts, out);
        return cmd_gen_topology(topo_opts, out);
    } catch (const PlacementInfeasible& e) {
        err << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidParameter& e) {
        err << "invalid parameter: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

} // namespace mmuplink
