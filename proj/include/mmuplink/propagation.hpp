#pragma once

#include <random>

namespace mmuplink {

/// Distance-dependent millimetre-wave propagation model. All three
/// profiles share one tanh(mu d) transition between their extremes.
struct PropagationParams {
    double alpha_min = 2.3;     ///< LOS-like path-loss exponent
    double alpha_max = 4.7;     ///< NLOS-like path-loss exponent
    double sigma_min_db = 6.1;  ///< shadowing std-dev at short range, dB
    double sigma_max_db = 12.6; ///< shadowing std-dev at long range, dB
    double m_min = 1.0;         ///< Nakagami parameter at long range
    double m_max = 2.0;         ///< Nakagami parameter at short range
    double mu_per_km = 40.0;    ///< transition rate
    double d0_km = 0.004;       ///< reference distance

    void validate() const;

    /// Same model with sigma_min = sigma_max = 0.
    PropagationParams without_shadowing() const;

    bool has_shadowing() const { return sigma_max_db > 0.0; }
};

/// Rounding applied to the reference link's Nakagami parameter.
enum class M0Rounding { Floor, Nearest };

double alpha(double d_km, const PropagationParams& p);
double shadow_sigma(double d_km, const PropagationParams& p);
double nakagami_m(double d_km, const PropagationParams& p);

/// f(d) = (d/d0)^-alpha(d). Throws DomainError for d < d0.
double path_loss(double d_km, const PropagationParams& p);

/// path_loss with d clamped up to d0.
double clamped_path_loss(double d_km, const PropagationParams& p);

/// Natural log of clamped_path_loss; avoids underflow for long links.
double log_path_loss(double d_km, const PropagationParams& p);

int reference_m0(double d_r_km, const PropagationParams& p, M0Rounding mode = M0Rounding::Floor);

double db_to_linear(double db);
double linear_to_db(double linear);

/// One shadowing draw xi ~ N(0, sigma_s(d)^2), dB.
template <class Urbg>
double sample_shadow(double d_km, const PropagationParams& p, Urbg& rng)
{
    const double sigma = shadow_sigma(d_km, p);
    if (sigma == 0.0)
        return 0.0;
    return std::normal_distribution<double>(0.0, sigma)(rng);
}

} // namespace mmuplink
