#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mmuplink/outage.hpp"
#include "mmuplink/radio.hpp"
#include "mmuplink/topology.hpp"

namespace mmuplink {

struct ExperimentConfig {
    NetworkParams network;
    double density_per_km2 = 20.0;
    double d_r0_km = 0.1;
    double rate_loss = kDefaultRateLoss;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::vector<double> cm_grid{0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
    std::vector<double> beta_db{3.0};
    std::vector<bool> shadowing{true, false};
    std::vector<bool> hopping{true, false};
    std::vector<FadingModel> fading{FadingModel::DistanceDependent};
    bool keep_samples = false;
    unsigned threads = 0; ///< 0 = default_threads()

    // Rate-outage curves from a single realization.
    double curve_cm_ratio = 0.1;
    std::size_t curve_uplinks = 8;     ///< curves reported individually
    std::size_t curve_population = 0; ///< uplinks averaged; 0 = curve_uplinks
    bool curve_shadowing = true;
    std::vector<double> curve_rates{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0,
                                    2.25, 2.5, 2.75, 3.0, 3.25, 3.5, 3.75, 4.0};

    void validate() const;
};

/// d_r = d_r0 / (10 sqrt(C/M)) for 0.01 <= C/M <= 1.
double typical_link_length(double cm_ratio, double d_r0_km);

/**
 * One densification point. The station layout keeps its shape and the
 * mobile density stays fixed; the network is rescaled so that
 * M = C / (C/M) mobiles fill it at that density.
 */
struct Scenario {
    double cm_ratio = 0.0;
    double d_r_km = 0.0;
    std::size_t mobiles = 0; ///< M, reference links included
    double scale = 1.0;      ///< coordinate factor relative to the base layout
    NetworkTopology topology;
    std::size_t reference_station = 0; ///< station nearest the window centre
};

Scenario make_scenario(const NetworkTopology& base, double cm_ratio, const ExperimentConfig& config);

/// A mobile at distance d_r from `station`, at a uniform bearing inside a
/// uniformly chosen sector of that station.
PinnedMobile place_reference(const NetworkTopology& topo, std::size_t station, double d_r_km, Rng& rng);

/// Stream for one trial of one grid point.
Rng trial_stream(std::uint64_t seed, std::size_t grid_index, std::size_t trial);

/**
 * Builds the trial's realization once and returns the reference link's
 * profile for each requested fading model. Interferer selection uses the
 * same stream state for every model.
 */
std::vector<InterferenceProfile> trial_profiles(const ExperimentConfig& config, const Scenario& scenario,
                                                std::size_t grid_index, std::size_t trial, bool shadowing,
                                                std::span<const FadingModel> fading);

/// Outage of the reference link for a single trial.
double run_trial(const ExperimentConfig& config, const Scenario& scenario, std::size_t grid_index, std::size_t trial,
                 bool shadowing, FadingModel fading, Diversity diversity, double beta);

struct SummaryStats {
    double mean = 0.0;
    double stddev = 0.0; ///< sample standard deviation (0 for a single trial)
    double ase = 0.0;    ///< lambda R (1 - mean)
};

SummaryStats summarize(std::span<const double> outages, double density_per_km2, double rate_bpcu);

struct SweepRow {
    double cm_ratio = 0.0;
    double d_r_km = 0.0;
    double beta_db = 0.0;
    bool shadowing = true;
    bool hopping = true;
    FadingModel fading = FadingModel::DistanceDependent;
    double avg_outage = 0.0;
    double std_outage = 0.0;
    double rate_bpcu = 0.0;
    double ase = 0.0;
    std::size_t n_trials = 0;
    std::uint64_t seed = 0;
    std::vector<double> samples; ///< per-trial outages when keep_samples
};

/// Rows ordered by grid point, then beta, shadowing, hopping, fading.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config, const NetworkTopology& base);

struct RateCurves {
    std::vector<double> rates;
    std::vector<std::vector<double>> outage; ///< [uplink][rate]
    std::vector<double> mean;
    std::vector<double> standard_error; ///< of the mean across uplinks
};

/// Outage versus code rate for each uplink (mobile index served by its
/// pinned sector) of one realization, plus the across-uplink average.
RateCurves rate_outage_curve(const Realization& net, const NetworkTopology& topo, std::span<const std::size_t> uplinks,
                             std::span<const double> rates, const NetworkParams& params, double rate_loss, Rng& rng,
                             Diversity diversity = Diversity::Hopping);

/// A realization with `n_uplinks` pinned typical-length links at distinct
/// sectors of stations inside the measurement window.
struct UplinkNetwork {
    Scenario scenario;
    Realization realization;
    std::vector<std::size_t> uplinks;
};

UplinkNetwork build_uplink_network(const ExperimentConfig& config, const NetworkTopology& base, double cm_ratio,
                                   std::size_t n_uplinks, bool shadowing, Rng& rng);

/**
 * Rate-outage curves of one realization at curve_cm_ratio. The average and
 * its standard error cover max(curve_population, curve_uplinks) typical
 * uplinks; the first curve_uplinks of them are returned individually.
 */
RateCurves run_rate_curve(const ExperimentConfig& config, const NetworkTopology& base);

std::string to_string(FadingModel f);
FadingModel parse_fading(const std::string& s);

} // namespace mmuplink
