#include "mmuplink/config.hpp"

#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "mmuplink/error.hpp"
#include "mmuplink/io.hpp"

namespace mmuplink {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v)
{
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty())
            out.push_back(trim(item));
    if (out.empty())
        throw ConfigError("empty list");
    return out;
}

bool parse_flag(const std::string& v)
{
    if (v == "on" || v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "off" || v == "false" || v == "0" || v == "no")
        return false;
    throw ConfigError("not a flag: '" + v + "' (expected on/off)");
}

std::string join(const std::vector<std::string>& items)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i)
        out += (i ? "," : "") + items[i];
    return out;
}

struct Binding {
    std::string key;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

template <class Get>
Binding real(std::string key, Get field)
{
    return {std::move(key), [field](RunConfig& c, const std::string& v) { field(c) = parse_double(v); },
            [field](const RunConfig& c) { return format_double(field(const_cast<RunConfig&>(c))); }};
}

template <class T, class Get>
Binding integer(std::string key, Get field, long long min_value)
{
    return {std::move(key),
            [field, min_value](RunConfig& c, const std::string& v) {
                const long long n = parse_integer(v);
                if (n < min_value)
                    throw ConfigError("value must be at least " + std::to_string(min_value));
                field(c) = static_cast<T>(n);
            },
            [field](const RunConfig& c) { return std::to_string(field(const_cast<RunConfig&>(c))); }};
}

template <class Get>
Binding flag(std::string key, Get field)
{
    return {std::move(key), [field](RunConfig& c, const std::string& v) { field(c) = parse_flag(v); },
            [field](const RunConfig& c) { return std::string(field(const_cast<RunConfig&>(c)) ? "on" : "off"); }};
}

template <class Get>
Binding real_list(std::string key, Get field)
{
    return {std::move(key),
            [field](RunConfig& c, const std::string& v) {
                std::vector<double> out;
                for (const std::string& s : split_list(v))
                    out.push_back(parse_double(s));
                field(c) = out;
            },
            [field](const RunConfig& c) {
                std::vector<std::string> items;
                for (double d : field(const_cast<RunConfig&>(c)))
                    items.push_back(format_double(d));
                return join(items);
            }};
}

template <class Get>
Binding flag_list(std::string key, Get field)
{
    return {std::move(key),
            [field](RunConfig& c, const std::string& v) {
                std::vector<bool> out;
                for (const std::string& s : split_list(v))
                    out.push_back(parse_flag(s));
                field(c) = out;
            },
            [field](const RunConfig& c) {
                std::vector<std::string> items;
                for (bool b : field(const_cast<RunConfig&>(c)))
                    items.push_back(b ? "on" : "off");
                return join(items);
            }};
}

Binding text(std::string key, std::function<std::string&(RunConfig&)> field)
{
    return {std::move(key), [field](RunConfig& c, const std::string& v) { field(c) = v; },
            [field](const RunConfig& c) { return field(const_cast<RunConfig&>(c)); }};
}

const std::vector<Binding>& bindings()
{
    static const std::vector<Binding> table = [] {
        std::vector<Binding> b;
        // clang-format off
        b.push_back(text("topology.file", [](RunConfig& c) -> std::string& { return c.topology.file; }));
        b.push_back(integer<std::size_t>("topology.stations", [](RunConfig& c) -> auto& { return c.topology.stations; }, 1));
        b.push_back(real("topology.region_km", [](RunConfig& c) -> auto& { return c.topology.region_km; }));
        b.push_back(real("topology.window_km", [](RunConfig& c) -> auto& { return c.topology.window_km; }));
        b.push_back(real("topology.jitter_km", [](RunConfig& c) -> auto& { return c.topology.jitter_km; }));
        b.push_back(integer<std::uint64_t>("topology.seed", [](RunConfig& c) -> auto& { return c.topology.seed; }, 0));

        b.push_back(real("propagation.alpha_min", [](RunConfig& c) -> auto& { return c.experiment.network.propagation.alpha_min; }));
        b.push_back(real("propagation.alpha_max", [](RunConfig& c) -> auto& { return c.experiment.network.propagation.alpha_max; }));
        b.push_back(real("propagation.sigma_min_db", [](RunConfig& c) -> auto& { return c.experiment.network.propagation.sigma_min_db; }));
        b.push_back(real("propagation.sigma_max_db", [](RunConfig& c) -> auto& { return c.experiment.network.propagation.sigma_max_db; }));
        b.push_back(real("propagation.m_min", [](RunConfig& c) -> auto& { return c.experiment.network.propagation.m_min; }));
        b.push_back(real("propagation.m_max", [](RunConfig& c) -> auto& { return c.experiment.network.propagation.m_max; }));
        b.push_back(real("propagation.mu_per_km", [](RunConfig& c) -> auto& { return c.experiment.network.propagation.mu_per_km; }));
        b.push_back(real("propagation.d0_km", [](RunConfig& c) -> auto& { return c.experiment.network.propagation.d0_km; }));

        b.push_back(integer<int>("beam.sectors", [](RunConfig& c) -> auto& { return c.experiment.network.beam.sectors_per_station; }, 1));
        b.push_back(real("beam.sector_sidelobe", [](RunConfig& c) -> auto& { return c.experiment.network.beam.sector_sidelobe; }));
        b.push_back(real("beam.mobile_beamwidth_rad", [](RunConfig& c) -> auto& { return c.experiment.network.beam.mobile_beamwidth_rad; }));
        b.push_back(real("beam.mobile_sidelobe", [](RunConfig& c) -> auto& { return c.experiment.network.beam.mobile_sidelobe; }));

        b.push_back(integer<int>("hopping.channels", [](RunConfig& c) -> auto& { return c.experiment.network.hopping.channels; }, 1));
        b.push_back(integer<int>("hopping.block_size", [](RunConfig& c) -> auto& { return c.experiment.network.hopping.block_size; }, 1));
        b.push_back(real("hopping.slot_s", [](RunConfig& c) -> auto& { return c.experiment.network.hopping.slot_s; }));
        b.push_back(real("hopping.activity", [](RunConfig& c) -> auto& { return c.experiment.network.hopping.activity; }));
        b.push_back(real("hopping.light_speed_km_s", [](RunConfig& c) -> auto& { return c.experiment.network.hopping.light_speed_km_s; }));

        b.push_back(real("network.density_per_km2", [](RunConfig& c) -> auto& { return c.experiment.density_per_km2; }));
        b.push_back(real("network.pr_over_n_db", [](RunConfig& c) -> auto& { return c.experiment.network.pr_over_n_db; }));
        b.push_back(integer<int>("network.max_interferers", [](RunConfig& c) -> auto& { return c.experiment.network.max_interferers; }, 0));
        b.push_back({"network.m0_rounding",
                     [](RunConfig& c, const std::string& v) {
                         if (v == "floor") c.experiment.network.m0_rounding = M0Rounding::Floor;
                         else if (v == "nearest") c.experiment.network.m0_rounding = M0Rounding::Nearest;
                         else throw ConfigError("m0_rounding must be floor or nearest");
                     },
                     [](const RunConfig& c) {
                         return std::string(c.experiment.network.m0_rounding == M0Rounding::Floor ? "floor" : "nearest");
                     }});

        b.push_back(integer<std::size_t>("experiment.trials", [](RunConfig& c) -> auto& { return c.experiment.trials; }, 1));
        b.push_back(integer<std::uint64_t>("experiment.seed", [](RunConfig& c) -> auto& { return c.experiment.seed; }, 0));
        b.push_back(real("experiment.d_r0_km", [](RunConfig& c) -> auto& { return c.experiment.d_r0_km; }));
        b.push_back(real("experiment.rate_loss", [](RunConfig& c) -> auto& { return c.experiment.rate_loss; }));
        b.push_back(real_list("experiment.cm_grid", [](RunConfig& c) -> auto& { return c.experiment.cm_grid; }));
        b.push_back(real_list("experiment.beta_db", [](RunConfig& c) -> auto& { return c.experiment.beta_db; }));
        b.push_back(flag_list("experiment.shadowing", [](RunConfig& c) -> auto& { return c.experiment.shadowing; }));
        b.push_back(flag_list("experiment.hopping", [](RunConfig& c) -> auto& { return c.experiment.hopping; }));
        b.push_back({"experiment.fading",
                     [](RunConfig& c, const std::string& v) {
                         std::vector<FadingModel> out;
                         for (const std::string& s : split_list(v))
                             out.push_back(parse_fading(s));
                         c.experiment.fading = out;
                     },
                     [](const RunConfig& c) {
                         std::vector<std::string> items;
                         for (FadingModel f : c.experiment.fading)
                             items.push_back(to_string(f));
                         return join(items);
                     }});
        b.push_back(flag("experiment.keep_samples", [](RunConfig& c) -> auto& { return c.experiment.keep_samples; }));

        b.push_back(real("curve.cm_ratio", [](RunConfig& c) -> auto& { return c.experiment.curve_cm_ratio; }));
        b.push_back(integer<std::size_t>("curve.uplinks", [](RunConfig& c) -> auto& { return c.experiment.curve_uplinks; }, 1));
        b.push_back(integer<std::size_t>("curve.population", [](RunConfig& c) -> auto& { return c.experiment.curve_population; }, 0));
        b.push_back(flag("curve.shadowing", [](RunConfig& c) -> auto& { return c.experiment.curve_shadowing; }));
        b.push_back(real_list("curve.rates", [](RunConfig& c) -> auto& { return c.experiment.curve_rates; }));

        b.push_back(text("output.dir", [](RunConfig& c) -> std::string& { return c.out_dir; }));
        b.push_back({"output.format",
                     [](RunConfig& c, const std::string& v) {
                         if (v != "csv" && v != "json")
                             throw ConfigError("output.format must be csv or json");
                         c.format = v;
                     },
                     [](const RunConfig& c) { return c.format; }});
        // clang-format on
        return b;
    }();
    return table;
}

} // namespace

void apply_setting(RunConfig& config, const std::string& key, const std::string& value)
{
    for (const Binding& b : bindings()) {
        if (b.key != key)
            continue;
        try {
            b.set(config, trim(value));
        } catch (const Error& e) {
            throw ConfigError(key + ": " + e.what());
        }
        return;
    }
    throw ConfigError("unknown setting '" + key + "'");
}

void apply_assignment(RunConfig& config, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("expected key=value, got '" + assignment + "'");
    apply_setting(config, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void apply_config_text(RunConfig& config, const std::string& text, const std::string& origin)
{
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        if (trim(line).empty())
            continue;
        try {
            apply_assignment(config, line);
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

RunConfig load_run_config(const std::string& path, RunConfig base)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    apply_config_text(base, buf.str(), path);
    return base;
}

std::vector<std::string> config_keys()
{
    std::vector<std::string> keys;
    for (const Binding& b : bindings())
        keys.push_back(b.key);
    return keys;
}

std::string render_config(const RunConfig& config)
{
    std::string out;
    for (const Binding& b : bindings())
        out += b.key + " = " + b.get(config) + "\n";
    return out;
}

NetworkTopology load_topology(const TopologySource& source, int sectors_per_station)
{
    if (!(source.region_km > 0.0 && source.window_km > 0.0 && source.window_km <= source.region_km))
        throw ConfigError("need 0 < window_km <= region_km");
    std::vector<BaseStation> stations =
        source.file.empty() ? generate_stations(source.stations, source.region_km, source.jitter_km, source.seed)
                            : read_topology_csv(source.file);
    const Rect region{0.0, 0.0, source.region_km, source.region_km};
    return NetworkTopology(std::move(stations), sectors_per_station, region,
                           centered_square(region.center(), source.window_km));
}

} // namespace mmuplink
