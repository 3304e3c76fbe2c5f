#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mmuplink/outage.hpp"
#include "mmuplink/radio.hpp"
#include "mmuplink/random.hpp"

namespace mmuplink {

/// Monte Carlo outage estimate with its binomial standard error.
struct OracleEstimate {
    double outage = 0.0;
    double standard_error = 0.0;
    std::uint64_t draws = 0;
};

inline constexpr std::uint64_t kMinOracleDraws = 1000;

/**
 * Draws the subframe-average SINR straight from the link model: reference
 * gain averaged over the fading slots, and per term an independent
 * Bernoulli(q) collision with a Gamma(m, 1/m) fading gain.
 */
class SinrSampler {
public:
    SinrSampler(const InterferenceProfile& profile, Diversity diversity);

    double operator()(Rng& rng);

private:
    struct Term {
        double weight; // Omega * C
        double q;
        std::gamma_distribution<double> gain;
    };

    double z_;
    int slots_;
    std::gamma_distribution<double> reference_;
    std::vector<Term> terms_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

double draw_sinr(const InterferenceProfile& profile, Rng& rng, Diversity diversity = Diversity::Hopping);

/// Fraction of `draws` SINR samples at or below beta. Draws are split into
/// fixed shards with their own streams, so the result depends only on the
/// seed, never on the thread count.
OracleEstimate estimate_outage(const InterferenceProfile& profile, double beta, std::uint64_t draws,
                               std::uint64_t seed, Diversity diversity = Diversity::Hopping, unsigned threads = 0);

} // namespace mmuplink
