#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmuplink/experiment.hpp"
#include "mmuplink/topology.hpp"

namespace mmuplink {

/// Where the base-station layout comes from: a CSV file, or the perturbed
/// grid generator when `file` is empty.
struct TopologySource {
    std::string file;
    std::size_t stations = 121;
    double region_km = 30.0; ///< side of the square network region
    double window_km = 20.0; ///< side of the centred measurement window
    double jitter_km = 0.8;
    std::uint64_t seed = 7;
};

struct RunConfig {
    ExperimentConfig experiment;
    TopologySource topology;
    std::string out_dir = ".";
    std::string format = "csv";
};

/**
 * Flat `key = value` settings, one per line, `#` starts a comment. Keys use
 * dotted namespaces (`propagation.alpha_min`, `experiment.cm_grid`); lists
 * are comma separated; flags accept on/off, true/false, 1/0.
 */
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// `key=value` form used by command-line overrides.
void apply_assignment(RunConfig& config, const std::string& assignment);

void apply_config_text(RunConfig& config, const std::string& text, const std::string& origin = "<config>");

/// Throws ConfigError when the file cannot be read or holds a bad setting.
RunConfig load_run_config(const std::string& path, RunConfig base = {});

/// Every recognised key.
std::vector<std::string> config_keys();

/// The configuration in the same format load_run_config reads.
std::string render_config(const RunConfig& config);

/// Stations from the source, wrapped in a topology with the configured
/// region and window.
NetworkTopology load_topology(const TopologySource& source, int sectors_per_station);

} // namespace mmuplink
