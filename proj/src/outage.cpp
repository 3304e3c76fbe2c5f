#include "mmuplink/outage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mmuplink/error.hpp"

namespace mmuplink {

namespace {

/// G_0 .. G_{t_max} of a single term.
void term_coefficients(const InterfererPeriodTerm& term, double beta0, int t_max, std::vector<double>& out)
{
    out.assign(static_cast<std::size_t>(t_max) + 1, 0.0);
    const double p = psi(beta0, term.omega, term.duration, term.m);
    const double psi_m = std::pow(p, term.m);
    out[0] = 1.0 - term.q * (1.0 - psi_m);

    const double x = term.omega * term.duration / term.m;
    double ratio = 1.0;
    double power = psi_m;
    for (int ell = 1; ell <= t_max; ++ell) {
        ratio *= (term.m + ell - 1) / ell;
        power *= x * p;
        out[static_cast<std::size_t>(ell)] = term.q * ratio * power;
    }
}

} // namespace

int reference_shape(int m0, Diversity diversity) { return diversity == Diversity::Hopping ? 2 * m0 : m0; }

double psi(double beta0, double omega, double duration, double m)
{
    if (!(m > 0.0))
        throw InvalidParameter("Nakagami parameter must be positive");
    if (!(omega >= 0.0 && duration >= 0.0))
        throw InvalidParameter("Omega and C must be nonnegative");
    return 1.0 / (beta0 * omega * duration / m + 1.0);
}

double g_coeff(int ell, double q, double omega, double duration, double m, double beta0)
{
    if (ell < 0)
        throw InvalidParameter("coefficient index must be nonnegative");
    std::vector<double> g;
    term_coefficients({omega, q, duration, m}, beta0, ell, g);
    return g.back();
}

std::vector<double> h_coefficients(std::span<const InterfererPeriodTerm> terms, double beta0, int t_max)
{
    if (t_max < 0)
        throw InvalidParameter("t_max must be nonnegative");
    const auto n = static_cast<std::size_t>(t_max) + 1;
    std::vector<double> h(n, 0.0);
    h[0] = 1.0;
    std::vector<double> g;
    std::vector<double> next(n);
    for (const InterfererPeriodTerm& term : terms) {
        term_coefficients(term, beta0, t_max, g);
        for (std::size_t t = 0; t < n; ++t) {
            double acc = 0.0;
            for (std::size_t ell = 0; ell <= t; ++ell)
                acc += h[t - ell] * g[ell];
            next[t] = acc;
        }
        h.swap(next);
    }
    return h;
}

double h_poly(int t, std::span<const InterfererPeriodTerm> terms, double beta0)
{
    return h_coefficients(terms, beta0, t).back();
}

double conditional_outage(const InterferenceProfile& profile, double beta, Diversity diversity)
{
    if (profile.m0 < 1)
        throw InvalidParameter("reference Nakagami parameter must be a positive integer");
    if (!(beta > 0.0))
        throw InvalidParameter("SINR threshold must be positive");
    if (!(profile.gamma0 > 0.0))
        throw InvalidParameter("Gamma_0 must be positive");
    for (const InterfererPeriodTerm& t : profile.terms)
        if (!(t.q >= 0.0 && t.q <= 1.0))
            throw InvalidParameter("collision probability must lie in [0, 1]");

    const int shape = reference_shape(profile.m0, diversity);
    const double beta0 = beta * shape;
    const double z = 1.0 / profile.gamma0;
    if (beta0 * z > 700.0)
        return 1.0; // exp underflows; every term of the sum is finite times zero
    const std::vector<double> h = h_coefficients(profile.terms, beta0, shape - 1);

    // z_pow[k] = z^k / k!
    std::vector<double> z_pow(static_cast<std::size_t>(shape));
    z_pow[0] = 1.0;
    for (int k = 1; k < shape; ++k)
        z_pow[static_cast<std::size_t>(k)] = z_pow[static_cast<std::size_t>(k - 1)] * z / k;

    double sum = 0.0;
    double beta0_pow = 1.0;
    for (int s = 0; s < shape; ++s) {
        double inner = 0.0;
        for (int t = 0; t <= s; ++t)
            inner += z_pow[static_cast<std::size_t>(s - t)] * h[static_cast<std::size_t>(t)];
        sum += beta0_pow * inner;
        beta0_pow *= beta0;
    }

    const double eps = 1.0 - std::exp(-beta0 * z) * sum;
    if (eps < -kOutageClampTolerance || eps > 1.0 + kOutageClampTolerance || std::isnan(eps))
        throw NumericalFailure("outage probability " + std::to_string(eps) + " outside [0, 1]");
    return std::clamp(eps, 0.0, 1.0);
}

double code_rate(double beta, double rate_loss)
{
    if (!(beta > 0.0) || !(rate_loss > 0.0))
        throw InvalidParameter("code_rate needs positive beta and rate loss");
    return std::log2(1.0 + rate_loss * beta);
}

double beta_for_rate(double rate, double rate_loss)
{
    if (!(rate > 0.0) || !(rate_loss > 0.0))
        throw InvalidParameter("beta_for_rate needs positive rate and rate loss");
    return std::expm1(rate * std::numbers::ln2) / rate_loss;
}

} // namespace mmuplink
