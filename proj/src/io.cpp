#include "mmuplink/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "mmuplink/error.hpp"
#include "mmuplink/random.hpp"

namespace mmuplink {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos - start)));
        if (pos == std::string_view::npos)
            return out;
        start = pos + 1;
    }
}

const char* on_off(bool b) { return b ? "on" : "off"; }

} // namespace

std::string format_double(double v)
{
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

double parse_double(std::string_view s)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size() || s.empty() || !std::isfinite(v))
        throw ConfigError("not a finite number: '" + std::string(s) + "'");
    return v;
}

long long parse_integer(std::string_view s)
{
    s = trim(s);
    long long v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size() || s.empty())
        throw ConfigError("not an integer: '" + std::string(s) + "'");
    return v;
}

std::vector<BaseStation> generate_stations(std::size_t count, double side_km, double jitter_km, std::uint64_t seed)
{
    if (count < 1)
        throw InvalidParameter("need at least one station");
    if (!(side_km > 0.0) || !(jitter_km >= 0.0))
        throw InvalidParameter("region side must be positive and jitter nonnegative");
    const auto per_row = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(count))));
    const double spacing = side_km / static_cast<double>(per_row);
    Rng rng(mix_keys({seed, 0x746f706fULL}));
    std::uniform_real_distribution<double> offset(-jitter_km, jitter_km);

    std::vector<BaseStation> out;
    for (std::size_t n = 0; n < count; ++n) {
        Vec2 p{(static_cast<double>(n % per_row) + 0.5) * spacing, (static_cast<double>(n / per_row) + 0.5) * spacing};
        if (jitter_km > 0.0) {
            p.x = std::clamp(p.x + offset(rng), 0.0, side_km);
            p.y = std::clamp(p.y + offset(rng), 0.0, side_km);
        }
        out.push_back({static_cast<int>(n) + 1, p});
    }
    return out;
}

std::vector<BaseStation> read_topology_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("topology file is empty");
    const auto header = split(line, ',');
    if (header.size() != 3 || header[0] != "id" || header[1] != "x_km" || header[2] != "y_km")
        throw ConfigError("topology header must be 'id,x_km,y_km'");

    std::vector<BaseStation> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        const auto f = split(line, ',');
        if (f.size() != 3)
            throw ConfigError("topology line " + std::to_string(lineno) + ": expected 3 fields");
        out.push_back({static_cast<int>(parse_integer(f[0])), {parse_double(f[1]), parse_double(f[2])}});
    }
    if (out.empty())
        throw ConfigError("topology file lists no stations");
    return out;
}

std::vector<BaseStation> read_topology_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open topology file '" + path + "'");
    return read_topology_csv(in);
}

void write_topology_csv(std::ostream& out, const std::vector<BaseStation>& stations)
{
    out << "id,x_km,y_km\n";
    for (const BaseStation& b : stations)
        out << b.id << ',' << format_double(b.position.x) << ',' << format_double(b.position.y) << '\n';
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows)
{
    out << kSweepCsvHeader << '\n';
    for (const SweepRow& r : rows) {
        out << format_double(r.cm_ratio) << ',' << format_double(r.d_r_km) << ',' << format_double(r.beta_db) << ','
            << on_off(r.shadowing) << ',' << on_off(r.hopping) << ',' << to_string(r.fading) << ','
            << format_double(r.avg_outage) << ',' << format_double(r.std_outage) << ',' << format_double(r.rate_bpcu)
            << ',' << format_double(r.ase) << ',' << r.n_trials << ',' << r.seed << '\n';
    }
}

void write_sweep_json(std::ostream& out, const std::vector<SweepRow>& rows)
{
    nlohmann::json doc = nlohmann::json::array();
    for (const SweepRow& r : rows) {
        nlohmann::json row = {
            {"cm_ratio", r.cm_ratio},     {"d_r_km", r.d_r_km},         {"beta_db", r.beta_db},
            {"shadowing", r.shadowing},   {"hopping", r.hopping},       {"fading_model", to_string(r.fading)},
            {"avg_outage", r.avg_outage}, {"std_outage", r.std_outage}, {"rate_bpcu", r.rate_bpcu},
            {"ase_bpcu_per_km2", r.ase},  {"n_trials", r.n_trials},     {"seed", r.seed},
        };
        if (!r.samples.empty())
            row["samples"] = r.samples;
        doc.push_back(std::move(row));
    }
    out << doc.dump(2) << '\n';
}

void write_rate_curve_csv(std::ostream& out, const RateCurves& curves)
{
    out << "uplink_id,rate_bpcu,outage\n";
    for (std::size_t u = 0; u < curves.outage.size(); ++u)
        for (std::size_t k = 0; k < curves.rates.size(); ++k)
            out << u << ',' << format_double(curves.rates[k]) << ',' << format_double(curves.outage[u][k]) << '\n';
    for (std::size_t k = 0; k < curves.rates.size(); ++k)
        out << "avg," << format_double(curves.rates[k]) << ',' << format_double(curves.mean[k]) << '\n';
}

} // namespace mmuplink
