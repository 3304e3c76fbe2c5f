#include "mmuplink/oracle.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include "mmuplink/error.hpp"
#include "mmuplink/parallel.hpp"

namespace mmuplink {

namespace {

constexpr std::uint64_t kShards = 64;

} // namespace

SinrSampler::SinrSampler(const InterferenceProfile& profile, Diversity diversity)
    : z_(1.0 / profile.gamma0)
    , slots_(diversity == Diversity::Hopping ? 2 : 1)
    , reference_(static_cast<double>(profile.m0), 1.0 / profile.m0)
{
    if (profile.m0 < 1)
        throw InvalidParameter("reference Nakagami parameter must be a positive integer");
    for (const InterfererPeriodTerm& t : profile.terms) {
        if (!(t.m > 0.0))
            throw InvalidParameter("Nakagami parameter must be positive");
        terms_.push_back({t.omega * t.duration, t.q, std::gamma_distribution<double>(t.m, 1.0 / t.m)});
    }
}

double SinrSampler::operator()(Rng& rng)
{
    double signal = 0.0;
    for (int s = 0; s < slots_; ++s)
        signal += reference_(rng);
    signal /= slots_;

    double noise = z_;
    for (Term& t : terms_)
        if (unit_(rng) < t.q)
            noise += t.weight * t.gain(rng);
    return signal / noise;
}

double draw_sinr(const InterferenceProfile& profile, Rng& rng, Diversity diversity)
{
    return SinrSampler(profile, diversity)(rng);
}

OracleEstimate estimate_outage(const InterferenceProfile& profile, double beta, std::uint64_t draws,
                               std::uint64_t seed, Diversity diversity, unsigned threads)
{
    if (draws < kMinOracleDraws)
        throw InvalidParameter("oracle needs at least " + std::to_string(kMinOracleDraws) + " draws");

    std::atomic<std::uint64_t> hits{0};
    parallel_for(kShards, threads, [&](std::size_t shard) {
        const std::uint64_t n = draws / kShards + (shard < draws % kShards ? 1 : 0);
        Rng rng = make_stream(seed, shard);
        SinrSampler sample(profile, diversity);
        std::uint64_t local = 0;
        for (std::uint64_t k = 0; k < n; ++k)
            if (sample(rng) <= beta)
                ++local;
        hits += local;
    });

    OracleEstimate e;
    e.draws = draws;
    e.outage = static_cast<double>(hits.load()) / static_cast<double>(draws);
    e.standard_error = std::sqrt(e.outage * (1.0 - e.outage) / static_cast<double>(draws));
    return e;
}

} // namespace mmuplink
