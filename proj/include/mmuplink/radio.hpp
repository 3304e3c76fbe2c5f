#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <vector>

#include "mmuplink/geometry.hpp"
#include "mmuplink/propagation.hpp"
#include "mmuplink/random.hpp"
#include "mmuplink/topology.hpp"

namespace mmuplink {

struct BeamParams {
    int sectors_per_station = 24;
    double sector_sidelobe = 0.01;                         ///< b, linear
    double mobile_beamwidth_rad = 0.1 * std::numbers::pi;  ///< Theta
    double mobile_sidelobe = 0.1;                          ///< a, linear

    void validate() const;
};

/// Frequency-hopping parameters. Every sector uses the same block size.
struct HoppingConfig {
    int channels = 100;     ///< L, hopset size
    int block_size = 10;    ///< L_l, contiguous channels per hop
    double slot_s = 0.5e-3; ///< T
    double activity = 1.0;  ///< p_i
    double light_speed_km_s = 2.998e5;

    void validate() const;

    /// Maximum number of mobiles a sector can serve orthogonally, L / L_l.
    int sector_capacity() const { return channels / block_size; }
};

enum class FadingModel { DistanceDependent, Rayleigh };

/// Everything needed to turn a realization into an interference profile.
struct NetworkParams {
    PropagationParams propagation;
    BeamParams beam;
    HoppingConfig hopping;
    double pr_over_n_db = 30.0;
    int max_interferers = 30;
    M0Rounding m0_rounding = M0Rounding::Nearest;
    FadingModel fading = FadingModel::DistanceDependent;

    void validate() const;
};

/// One interferer during one of the four subframe periods.
struct InterfererPeriodTerm {
    double omega = 0.0;    ///< interference-to-reference power ratio
    double q = 0.0;        ///< collision probability
    double duration = 0.0; ///< fraction of the 2T subframe
    double m = 1.0;        ///< Nakagami parameter of the interferer link
};

struct InterferenceProfile {
    double gamma0 = 1.0; ///< fading-free SNR, linear
    int m0 = 1;          ///< integer Nakagami parameter of the reference link
    std::vector<InterfererPeriodTerm> terms;
    std::vector<std::size_t> interferers; ///< mobile indices kept, strongest first
};

double sector_beam_gain(const Sector& sector, double theta, const BeamParams& bp);

/// 1 when the directions from x toward s_j and toward s_serving are within
/// half a mainlobe beamwidth (strictly), a otherwise.
double mobile_beam_gain(Vec2 x, Vec2 s_j, Vec2 s_serving, const BeamParams& bp);

/// min(L_j / L_l, 1).
double spectral_factor(int block_ref, int block_other);

/// Hop transition time of an interferer relative to the reference, in [0, T).
double timing_offset(Vec2 s_j, Vec2 x_r, Vec2 x_i, const HoppingConfig& hc);

/// Fractional durations of the four subframe periods; they sum to one.
std::array<double, 4> fractional_durations(double t, double slot);

double collision_probability(int load, int block_interferer, int block_ref, int channels, double activity);

/// Largest number of mobiles of one sector that can collide with the
/// reference during a period, max(L_j / L_l, 1).
int interferers_per_sector(int block_ref, int block_other);

/// Interferers toward reference sector j: from every other sector either all
/// of its active mobiles or a uniform subset of max(L_j/L_l, 1) of them.
std::vector<std::size_t> select_interferers(const Realization& net, const NetworkTopology& topo, int ref_sector,
                                            const HoppingConfig& hc, Rng& rng);

double interference_ratio(std::size_t i, const Realization& net, const NetworkTopology& topo, int ref_sector,
                          const NetworkParams& params);

/// Gamma_0 = (P_r/N) 10^{xi/10} f(d_r). Requires d_r >= d0.
double snr_gamma0(double pr_over_n_db, double xi_db, double d_r_km, const PropagationParams& prop);

/// Interference profile of mobile r at its serving sector j.
/// Throws InvalidReference when r is not served by j.
InterferenceProfile build_profile(const Realization& net, const NetworkTopology& topo, std::size_t r,
                                  int ref_sector, const NetworkParams& params, Rng& rng);

} // namespace mmuplink
