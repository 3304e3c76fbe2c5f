#include "mmuplink/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "mmuplink/error.hpp"
#include "mmuplink/parallel.hpp"

namespace mmuplink {

namespace {

constexpr int kReferenceAttempts = 1000;

std::vector<int> uniform_capacity(const NetworkTopology& topo, const HoppingConfig& hc)
{
    return std::vector<int>(topo.sector_count(), hc.sector_capacity());
}

NetworkParams params_for(const ExperimentConfig& config, bool shadowing, FadingModel fading)
{
    NetworkParams p = config.network;
    if (!shadowing)
        p.propagation = p.propagation.without_shadowing();
    p.fading = fading;
    return p;
}

} // namespace

void ExperimentConfig::validate() const
{
    network.validate();
    if (trials < 1)
        throw InvalidParameter("need at least one trial");
    if (!(density_per_km2 > 0.0))
        throw InvalidParameter("mobile density must be positive");
    if (!(d_r0_km > 0.0))
        throw InvalidParameter("d_r0 must be positive");
    if (!(rate_loss > 0.0))
        throw InvalidParameter("rate loss must be positive");
    if (cm_grid.empty() || beta_db.empty() || shadowing.empty() || hopping.empty() || fading.empty())
        throw InvalidParameter("sweep lists must not be empty");
    for (double cm : cm_grid)
        typical_link_length(cm, d_r0_km);
    typical_link_length(curve_cm_ratio, d_r0_km);
    if (curve_uplinks < 1)
        throw InvalidParameter("need at least one uplink");
    for (double r : curve_rates)
        if (!(r > 0.0))
            throw InvalidParameter("code rates must be positive");
}

double typical_link_length(double cm_ratio, double d_r0_km)
{
    if (!(cm_ratio >= 0.01 && cm_ratio <= 1.0))
        throw InvalidParameter("C/M must lie in [0.01, 1], got " + std::to_string(cm_ratio));
    return d_r0_km / (10.0 * std::sqrt(cm_ratio));
}

Scenario make_scenario(const NetworkTopology& base, double cm_ratio, const ExperimentConfig& config)
{
    Scenario s;
    s.cm_ratio = cm_ratio;
    s.d_r_km = typical_link_length(cm_ratio, config.d_r0_km);
    const double stations = static_cast<double>(base.station_count());
    s.mobiles = static_cast<std::size_t>(std::max<long long>(1, std::llround(stations / cm_ratio)));
    s.scale = std::sqrt(static_cast<double>(s.mobiles) / (config.density_per_km2 * base.region().area()));
    s.topology = base.scaled(s.scale);
    s.reference_station = s.topology.nearest_station(s.topology.window().center());
    return s;
}

PinnedMobile place_reference(const NetworkTopology& topo, std::size_t station, double d_r_km, Rng& rng)
{
    const Vec2 origin = topo.stations()[station].position;
    std::uniform_int_distribution<int> pick(0, topo.sectors_per_station() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int attempt = 0; attempt < kReferenceAttempts; ++attempt) {
        const Sector& sec = topo.sector(static_cast<int>(station) * topo.sectors_per_station() + pick(rng));
        const double theta = sec.offset + unit(rng) * sec.width;
        const Vec2 x = origin + d_r_km * Vec2{std::cos(theta), std::sin(theta)};
        // Bearings within an ulp of a beam edge can round into the neighbour.
        if (topo.covering_sector(station, x) == sec.id)
            return {x, sec.id};
    }
    throw InvalidParameter("could not place a reference mobile inside a sector");
}

Rng trial_stream(std::uint64_t seed, std::size_t grid_index, std::size_t trial)
{
    return make_stream(seed, grid_index, trial);
}

std::vector<InterferenceProfile> trial_profiles(const ExperimentConfig& config, const Scenario& scenario,
                                                std::size_t grid_index, std::size_t trial, bool shadowing,
                                                std::span<const FadingModel> fading)
{
    Rng rng = trial_stream(config.seed, grid_index, trial);
    const NetworkTopology& topo = scenario.topology;
    const PinnedMobile reference = place_reference(topo, scenario.reference_station, scenario.d_r_km, rng);
    const NetworkParams base = params_for(config, shadowing, FadingModel::DistanceDependent);
    const std::vector<int> capacity = uniform_capacity(topo, base.hopping);
    const Realization net =
        build_realization(topo, base.propagation, std::span(&reference, 1), scenario.mobiles, capacity, rng);

    std::vector<InterferenceProfile> out;
    for (FadingModel f : fading) {
        Rng local = rng;
        out.push_back(build_profile(net, topo, 0, reference.sector, params_for(config, shadowing, f), local));
    }
    return out;
}

double run_trial(const ExperimentConfig& config, const Scenario& scenario, std::size_t grid_index, std::size_t trial,
                 bool shadowing, FadingModel fading, Diversity diversity, double beta)
{
    const FadingModel models[] = {fading};
    const auto profiles = trial_profiles(config, scenario, grid_index, trial, shadowing, models);
    return conditional_outage(profiles.front(), beta, diversity);
}

SummaryStats summarize(std::span<const double> outages, double density_per_km2, double rate_bpcu)
{
    if (outages.empty())
        throw InvalidParameter("summarize needs at least one trial");
    SummaryStats s;
    const double n = static_cast<double>(outages.size());
    s.mean = std::accumulate(outages.begin(), outages.end(), 0.0) / n;
    if (outages.size() > 1) {
        double ss = 0.0;
        for (double e : outages)
            ss += (e - s.mean) * (e - s.mean);
        s.stddev = std::sqrt(ss / (n - 1.0));
    }
    s.ase = density_per_km2 * rate_bpcu * (1.0 - s.mean);
    return s;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, const NetworkTopology& base)
{
    config.validate();
    const std::size_t n_trials = config.trials;
    const std::size_t n_fading = config.fading.size();
    const std::size_t n_hop = config.hopping.size();
    const std::size_t n_beta = config.beta_db.size();

    std::vector<double> betas;
    for (double b : config.beta_db)
        betas.push_back(db_to_linear(b));

    std::vector<SweepRow> rows;
    for (std::size_t g = 0; g < config.cm_grid.size(); ++g) {
        const Scenario scenario = make_scenario(base, config.cm_grid[g], config);

        // outcome[shadow][fading][hop][beta][trial]
        std::vector<std::vector<double>> outcome(config.shadowing.size());
        for (std::size_t s = 0; s < config.shadowing.size(); ++s) {
            std::vector<double>& eps = outcome[s];
            eps.assign(n_fading * n_hop * n_beta * n_trials, 0.0);
            parallel_for(n_trials, config.threads, [&](std::size_t trial) {
                const auto profiles = trial_profiles(config, scenario, g, trial, config.shadowing[s], config.fading);
                for (std::size_t f = 0; f < n_fading; ++f)
                    for (std::size_t h = 0; h < n_hop; ++h)
                        for (std::size_t b = 0; b < n_beta; ++b) {
                            const Diversity d = config.hopping[h] ? Diversity::Hopping : Diversity::NoHopping;
                            eps[((f * n_hop + h) * n_beta + b) * n_trials + trial] =
                                conditional_outage(profiles[f], betas[b], d);
                        }
            });
        }

        for (std::size_t b = 0; b < n_beta; ++b)
            for (std::size_t s = 0; s < config.shadowing.size(); ++s)
                for (std::size_t h = 0; h < n_hop; ++h)
                    for (std::size_t f = 0; f < n_fading; ++f) {
                        const auto first = outcome[s].begin() +
                                           static_cast<std::ptrdiff_t>(((f * n_hop + h) * n_beta + b) * n_trials);
                        const std::span<const double> samples(&*first, n_trials);
                        SweepRow row;
                        row.cm_ratio = scenario.cm_ratio;
                        row.d_r_km = scenario.d_r_km;
                        row.beta_db = config.beta_db[b];
                        row.shadowing = config.shadowing[s];
                        row.hopping = config.hopping[h];
                        row.fading = config.fading[f];
                        row.rate_bpcu = code_rate(betas[b], config.rate_loss);
                        const SummaryStats st = summarize(samples, config.density_per_km2, row.rate_bpcu);
                        row.avg_outage = st.mean;
                        row.std_outage = st.stddev;
                        row.ase = st.ase;
                        row.n_trials = n_trials;
                        row.seed = config.seed;
                        if (config.keep_samples)
                            row.samples.assign(samples.begin(), samples.end());
                        rows.push_back(std::move(row));
                    }
    }
    return rows;
}

RateCurves rate_outage_curve(const Realization& net, const NetworkTopology& topo, std::span<const std::size_t> uplinks,
                             std::span<const double> rates, const NetworkParams& params, double rate_loss, Rng& rng,
                             Diversity diversity)
{
    if (uplinks.empty())
        throw InvalidParameter("need at least one uplink");
    RateCurves c;
    c.rates.assign(rates.begin(), rates.end());
    for (std::size_t u : uplinks) {
        if (u >= net.size() || !net.active(u))
            throw InvalidReference("uplink " + std::to_string(u) + " is not an active mobile");
        const InterferenceProfile profile = build_profile(net, topo, u, net.serving[u], params, rng);
        std::vector<double> curve;
        for (double r : rates)
            curve.push_back(conditional_outage(profile, beta_for_rate(r, rate_loss), diversity));
        c.outage.push_back(std::move(curve));
    }

    const double n = static_cast<double>(uplinks.size());
    for (std::size_t k = 0; k < rates.size(); ++k) {
        double sum = 0.0;
        for (const auto& curve : c.outage)
            sum += curve[k];
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& curve : c.outage)
            ss += (curve[k] - mean) * (curve[k] - mean);
        c.mean.push_back(mean);
        c.standard_error.push_back(uplinks.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0);
    }
    return c;
}

UplinkNetwork build_uplink_network(const ExperimentConfig& config, const NetworkTopology& base, double cm_ratio,
                                   std::size_t n_uplinks, bool shadowing, Rng& rng)
{
    UplinkNetwork out;
    out.scenario = make_scenario(base, cm_ratio, config);
    const NetworkTopology& topo = out.scenario.topology;

    std::vector<std::size_t> candidates;
    for (std::size_t s = 0; s < topo.station_count(); ++s)
        if (topo.window().contains(topo.stations()[s].position))
            candidates.push_back(s);
    if (candidates.empty())
        candidates.push_back(out.scenario.reference_station);
    if (n_uplinks > candidates.size() * static_cast<std::size_t>(topo.sectors_per_station()))
        throw InvalidParameter("more uplinks requested than sectors inside the measurement window");

    const double d0 = config.network.propagation.d0_km;
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    std::set<int> used;
    std::vector<PinnedMobile> pinned;
    const std::size_t budget = n_uplinks * static_cast<std::size_t>(kReferenceAttempts);
    for (std::size_t attempt = 0; pinned.size() < n_uplinks; ++attempt) {
        if (attempt >= budget)
            throw PlacementInfeasible("could not place the requested uplinks");
        const PinnedMobile p = place_reference(topo, candidates[pick(rng)], out.scenario.d_r_km, rng);
        if (used.contains(p.sector))
            continue;
        const bool crowded = std::any_of(pinned.begin(), pinned.end(),
                                         [&](const PinnedMobile& q) { return distance(p.position, q.position) < d0; });
        if (crowded)
            continue;
        used.insert(p.sector);
        pinned.push_back(p);
    }

    const NetworkParams params = params_for(config, shadowing, FadingModel::DistanceDependent);
    const std::vector<int> capacity = uniform_capacity(topo, params.hopping);
    out.realization = build_realization(topo, params.propagation, pinned,
                                        std::max(out.scenario.mobiles, n_uplinks), capacity, rng);
    out.uplinks.resize(n_uplinks);
    std::iota(out.uplinks.begin(), out.uplinks.end(), std::size_t{0});
    return out;
}

RateCurves run_rate_curve(const ExperimentConfig& config, const NetworkTopology& base)
{
    config.validate();
    const std::size_t population = std::max(config.curve_population, config.curve_uplinks);
    Rng rng = make_stream(config.seed, 0x63757276, 0);
    const UplinkNetwork net =
        build_uplink_network(config, base, config.curve_cm_ratio, population, config.curve_shadowing, rng);
    const NetworkParams params = params_for(config, config.curve_shadowing, FadingModel::DistanceDependent);
    RateCurves curves = rate_outage_curve(net.realization, net.scenario.topology, net.uplinks, config.curve_rates,
                                          params, config.rate_loss, rng);
    curves.outage.resize(config.curve_uplinks);
    return curves;
}

std::string to_string(FadingModel f) { return f == FadingModel::Rayleigh ? "rayleigh" : "distance"; }

FadingModel parse_fading(const std::string& s)
{
    if (s == "distance")
        return FadingModel::DistanceDependent;
    if (s == "rayleigh")
        return FadingModel::Rayleigh;
    throw InvalidParameter("unknown fading model '" + s + "' (expected distance or rayleigh)");
}

} // namespace mmuplink
