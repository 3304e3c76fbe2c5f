#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mmuplink/oracle.hpp"
#include "mmuplink/outage.hpp"
#include "mmuplink/radio.hpp"
#include "mmuplink/random.hpp"

namespace mmuplink {

/// A randomized profile plus the threshold it is checked at.
struct ValidationCase {
    InterferenceProfile profile;
    double beta = 1.0;
    Diversity diversity = Diversity::Hopping;
};

/**
 * 1..max_interferers interferers with four periods each (durations from a
 * uniform offset), m0 in {1, 2}, q ~ U[0,1], Omega log-uniform on
 * [1e-3, 10], m ~ U[0.6, 2.5], z log-uniform on [1e-4, 1] and beta
 * log-uniform on [0.25, 8]. Zero interferers when max_interferers is 0.
 */
ValidationCase random_validation_case(Rng& rng, int max_interferers = 5);

/// Gate multiplier on the standard error.
inline constexpr double kValidationSigmas = 4.0;

struct ValidationResult {
    double closed_form = 0.0;
    OracleEstimate estimate;
    double sigma = 0.0; ///< max of the oracle standard error and sqrt(eps (1 - eps) / draws)
    bool pass = false;
};

/**
 * Compares the closed form against the oracle. The binomial standard error
 * at the closed-form value guards against an estimate of exactly 0 or 1.
 */
ValidationResult validate_case(const ValidationCase& c, std::uint64_t draws, std::uint64_t seed,
                               unsigned threads = 0);

/// Two-sided tail mass of the gate for a correct closed form, 2 Phi(-4).
double gate_miss_probability();

/// Smallest k >= 2 with P[Binomial(cases, p) > k] <= 1e-6.
int binomial_allowance(std::size_t cases, double miss_probability = gate_miss_probability());

} // namespace mmuplink
