#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mmuplink/experiment.hpp"
#include "mmuplink/topology.hpp"

namespace mmuplink {

/// Shortest decimal that round-trips, independent of the C++ locale.
std::string format_double(double v);

double parse_double(std::string_view s);
long long parse_integer(std::string_view s);

/// Perturbed square grid of `count` stations over [0, side]^2. Each grid
/// point moves by an independent uniform offset in [-jitter, jitter] per
/// axis, clamped to the region. Ids run from 1.
std::vector<BaseStation> generate_stations(std::size_t count, double side_km, double jitter_km, std::uint64_t seed);

/// CSV with header `id,x_km,y_km`.
std::vector<BaseStation> read_topology_csv(std::istream& in);
std::vector<BaseStation> read_topology_csv(const std::string& path);
void write_topology_csv(std::ostream& out, const std::vector<BaseStation>& stations);

inline constexpr std::string_view kSweepCsvHeader =
    "cm_ratio,d_r_km,beta_db,shadowing,hopping,fading_model,avg_outage,std_outage,rate_bpcu,ase_bpcu_per_km2,n_trials,seed";

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_sweep_json(std::ostream& out, const std::vector<SweepRow>& rows);

/// Columns `uplink_id,rate_bpcu,outage`; the average curve uses uplink_id `avg`.
void write_rate_curve_csv(std::ostream& out, const RateCurves& curves);

} // namespace mmuplink
