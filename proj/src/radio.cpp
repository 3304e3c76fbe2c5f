#include "mmuplink/radio.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>

#include "mmuplink/error.hpp"

namespace mmuplink {

namespace {

constexpr double kLn10Over10 = 0.23025850929940458;

} // namespace

void BeamParams::validate() const
{
    if (sectors_per_station < 1)
        throw InvalidParameter("sectors per station must be at least 1");
    if (!(sector_sidelobe >= 0.0 && sector_sidelobe <= 1.0))
        throw InvalidParameter("sector sidelobe level must lie in [0, 1]");
    if (!(mobile_sidelobe >= 0.0 && mobile_sidelobe <= 1.0))
        throw InvalidParameter("mobile sidelobe level must lie in [0, 1]");
    if (!(mobile_beamwidth_rad > 0.0 && mobile_beamwidth_rad < kTwoPi))
        throw InvalidParameter("mobile beamwidth must lie in (0, 2pi)");
}

void HoppingConfig::validate() const
{
    if (channels < 1 || block_size < 1)
        throw InvalidParameter("hopset and block sizes must be positive");
    if (channels % block_size != 0)
        throw InvalidParameter("block size must divide the hopset size");
    if (channels / block_size < 2)
        throw InvalidParameter("need at least two spectral regions (L / L_l >= 2)");
    if (!(activity >= 0.0 && activity <= 1.0))
        throw InvalidParameter("activity probability must lie in [0, 1]");
    if (!(slot_s > 0.0))
        throw InvalidParameter("slot duration must be positive");
    if (!(light_speed_km_s > 0.0))
        throw InvalidParameter("propagation speed must be positive");
}

void NetworkParams::validate() const
{
    propagation.validate();
    beam.validate();
    hopping.validate();
    if (max_interferers < 0)
        throw InvalidParameter("interferer limit must be nonnegative");
}

double sector_beam_gain(const Sector& sector, double theta, const BeamParams& bp)
{
    return sector.covers(theta) ? 1.0 : bp.sector_sidelobe;
}

double mobile_beam_gain(Vec2 x, Vec2 s_j, Vec2 s_serving, const BeamParams& bp)
{
    const Vec2 u = s_j - x;
    const Vec2 v = s_serving - x;
    const double nu = norm(u);
    const double nv = norm(v);
    if (nu == 0.0 || nv == 0.0)
        throw UndefinedAngle("mobile coincides with a sector receiver");
    const double cosine = dot(u, v) / (nu * nv);
    return cosine > std::cos(0.5 * bp.mobile_beamwidth_rad) ? 1.0 : bp.mobile_sidelobe;
}

double spectral_factor(int block_ref, int block_other)
{
    if (block_ref <= 0 || block_other <= 0)
        throw InvalidParameter("block sizes must be positive");
    return std::min(static_cast<double>(block_ref) / block_other, 1.0);
}

double timing_offset(Vec2 s_j, Vec2 x_r, Vec2 x_i, const HoppingConfig& hc)
{
    const double delay = (distance(s_j, x_r) - distance(s_j, x_i)) / hc.light_speed_km_s;
    double t = std::fmod(delay, hc.slot_s);
    if (t < 0.0)
        t += hc.slot_s;
    if (t >= hc.slot_s)
        t = 0.0;
    return t;
}

std::array<double, 4> fractional_durations(double t, double slot)
{
    if (!(t >= 0.0 && t < slot))
        throw InvalidParameter("timing offset must lie in [0, T)");
    const double first = t / (2.0 * slot);
    const double second = 0.5 - first;
    return {first, second, first, second};
}

double collision_probability(int load, int block_interferer, int block_ref, int channels, double activity)
{
    const double occupied = std::max(static_cast<double>(load) * block_interferer, static_cast<double>(block_ref));
    const double q = occupied / channels * activity;
    if (q > 1.0)
        throw InvariantViolation("collision probability " + std::to_string(q) + " exceeds one; sector over capacity");
    return q;
}

int interferers_per_sector(int block_ref, int block_other)
{
    if (block_ref <= 0 || block_other <= 0)
        throw InvalidParameter("block sizes must be positive");
    return std::max(block_ref / block_other, 1);
}

std::vector<std::size_t> select_interferers(const Realization& net, const NetworkTopology& topo, int ref_sector,
                                            const HoppingConfig& hc, Rng& rng)
{
    std::vector<std::vector<std::size_t>> members(topo.sector_count());
    for (std::size_t i = 0; i < net.size(); ++i)
        if (net.active(i) && net.serving[i] != ref_sector)
            members[static_cast<std::size_t>(net.serving[i])].push_back(i);

    const int limit = interferers_per_sector(hc.block_size, hc.block_size);
    std::vector<std::size_t> out;
    for (const auto& m : members) {
        if (static_cast<int>(m.size()) <= limit)
            out.insert(out.end(), m.begin(), m.end());
        else
            std::sample(m.begin(), m.end(), std::back_inserter(out), limit, rng);
    }
    return out;
}

double interference_ratio(std::size_t i, const Realization& net, const NetworkTopology& topo, int ref_sector,
                          const NetworkParams& params)
{
    const int serving = net.serving[i];
    const Vec2 x = net.mobiles[i];
    const Vec2 s_j = topo.sector_position(ref_sector);
    const Vec2 s_g = topo.sector_position(serving);

    const double beam = mobile_beam_gain(x, s_j, s_g, params.beam) *
                        sector_beam_gain(topo.sector(ref_sector), bearing(s_j, x), params.beam);
    const double spectral = spectral_factor(params.hopping.block_size, params.hopping.block_size);

    const double d_j = distance(x, s_j);
    const double d_g = distance(x, s_g);
    const double log_ratio = kLn10Over10 * (net.shadow(i, ref_sector, d_j) - net.shadow(i, serving, d_g)) +
                             log_path_loss(d_j, params.propagation) - log_path_loss(d_g, params.propagation);
    return beam * spectral * std::exp(log_ratio);
}

double snr_gamma0(double pr_over_n_db, double xi_db, double d_r_km, const PropagationParams& prop)
{
    return db_to_linear(pr_over_n_db) * db_to_linear(xi_db) * path_loss(d_r_km, prop);
}

InterferenceProfile build_profile(const Realization& net, const NetworkTopology& topo, std::size_t r,
                                  int ref_sector, const NetworkParams& params, Rng& rng)
{
    if (r >= net.size() || net.serving[r] != ref_sector)
        throw InvalidReference("reference mobile " + std::to_string(r) + " is not served by sector " +
                               std::to_string(ref_sector));

    const PropagationParams& prop = params.propagation;
    const HoppingConfig& hc = params.hopping;
    const bool rayleigh = params.fading == FadingModel::Rayleigh;
    const Vec2 s_j = topo.sector_position(ref_sector);
    const Vec2 x_r = net.mobiles[r];
    const double d_raw = distance(x_r, s_j);
    const double d_r = std::max(d_raw, prop.d0_km);

    InterferenceProfile profile;
    profile.gamma0 = snr_gamma0(params.pr_over_n_db, net.shadow(r, ref_sector, d_raw), d_r, prop);
    profile.m0 = rayleigh ? 1 : reference_m0(d_r, prop, params.m0_rounding);

    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t i : select_interferers(net, topo, ref_sector, hc, rng))
        ranked.emplace_back(interference_ratio(i, net, topo, ref_sector, params), i);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    if (ranked.size() > static_cast<std::size_t>(params.max_interferers))
        ranked.resize(static_cast<std::size_t>(params.max_interferers));

    for (const auto& [omega, i] : ranked) {
        profile.interferers.push_back(i);
        const int g = net.serving[i];
        const double q = collision_probability(net.sector_load[static_cast<std::size_t>(g)], hc.block_size,
                                               hc.block_size, hc.channels, hc.activity);
        const double m = rayleigh ? 1.0 : nakagami_m(distance(s_j, net.mobiles[i]), prop);
        const auto durations = fractional_durations(timing_offset(s_j, x_r, net.mobiles[i], hc), hc.slot_s);
        for (double c : durations)
            if (q * c * omega > 0.0)
                profile.terms.push_back({omega, q, c, m});
    }
    return profile;
}

} // namespace mmuplink
