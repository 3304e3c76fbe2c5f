#include "mmuplink/validation.hpp"

#include <algorithm>
#include <cmath>

#include "mmuplink/error.hpp"

namespace mmuplink {

namespace {

double log_uniform(Rng& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

} // namespace

ValidationCase random_validation_case(Rng& rng, int max_interferers)
{
    if (max_interferers < 0)
        throw InvalidParameter("interferer count must be nonnegative");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> shape(0.6, 2.5);

    ValidationCase c;
    c.profile.m0 = std::uniform_int_distribution<int>(1, 2)(rng);
    c.profile.gamma0 = 1.0 / log_uniform(rng, 1e-4, 1.0);
    c.beta = log_uniform(rng, 0.25, 8.0);

    const int n = max_interferers == 0 ? 0 : std::uniform_int_distribution<int>(1, max_interferers)(rng);
    for (int i = 0; i < n; ++i) {
        const double omega = log_uniform(rng, 1e-3, 10.0);
        const double q = unit(rng);
        const double m = shape(rng);
        for (double duration : fractional_durations(unit(rng), 1.0))
            c.profile.terms.push_back({omega, q, duration, m});
        c.profile.interferers.push_back(static_cast<std::size_t>(i));
    }
    return c;
}

ValidationResult validate_case(const ValidationCase& c, std::uint64_t draws, std::uint64_t seed, unsigned threads)
{
    ValidationResult r;
    r.closed_form = conditional_outage(c.profile, c.beta, c.diversity);
    r.estimate = estimate_outage(c.profile, c.beta, draws, seed, c.diversity, threads);
    const double binomial = std::sqrt(r.closed_form * (1.0 - r.closed_form) / static_cast<double>(draws));
    r.sigma = std::max(r.estimate.standard_error, binomial);
    r.pass = std::abs(r.closed_form - r.estimate.outage) <= kValidationSigmas * r.sigma;
    return r;
}

double gate_miss_probability() { return std::erfc(kValidationSigmas / std::sqrt(2.0)); }

int binomial_allowance(std::size_t cases, double p)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw InvalidParameter("miss probability must lie in [0, 1]");
    const auto n = static_cast<int>(cases);
    // P[X <= k] accumulated from the pmf in log space.
    double cdf = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double log_pmf = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                               (k > 0 ? k * std::log(p) : 0.0) + (n - k > 0 ? (n - k) * std::log1p(-p) : 0.0);
        cdf += std::exp(log_pmf);
        if (k >= 2 && 1.0 - cdf <= 1e-6)
            return k;
    }
    return std::max(n, 2);
}

} // namespace mmuplink
