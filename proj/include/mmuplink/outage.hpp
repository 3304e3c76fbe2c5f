#pragma once

#include <span>
#include <vector>

#include "mmuplink/radio.hpp"

namespace mmuplink {

/// Reference-link fading over a subframe: two independently faded hop slots,
/// or one constant fade when hopping is off.
enum class Diversity { Hopping, NoHopping };

/// Gamma shape of the subframe-average reference fading gain.
int reference_shape(int m0, Diversity diversity);

/// Psi = (beta0 Omega C / m + 1)^-1.
double psi(double beta0, double omega, double duration, double m);

/**
 * Coefficient G_l of one interferer-period term: the l-th term of the
 * expansion of E[W^l exp(-beta0 W)] / l! for W = I Omega C g, with
 * I ~ Bernoulli(q) and g ~ Gamma(m, 1/m). The gamma-function ratio is
 * accumulated as prod_{n=1..l} (m + n - 1) / n.
 */
double g_coeff(int ell, double q, double omega, double duration, double m, double beta0);

/// H_0 .. H_{t_max} by truncated sequence convolution of every term's
/// (G_0, ..., G_{t_max}).
std::vector<double> h_coefficients(std::span<const InterfererPeriodTerm> terms, double beta0, int t_max);

double h_poly(int t, std::span<const InterfererPeriodTerm> terms, double beta0);

/// Round-off excursions outside [0, 1] up to this size are clamped.
inline constexpr double kOutageClampTolerance = 1e-12;

/**
 * Outage probability P[gamma <= beta] of the reference link conditioned on
 * the profile. With K the reference shape and beta0 = K beta, evaluates
 *   1 - exp(-beta0 z) sum_{s<K} sum_{t<=s} beta0^s z^{s-t} / (s-t)! H_t
 * grouped so that z = 0 is handled exactly.
 */
double conditional_outage(const InterferenceProfile& profile, double beta, Diversity diversity = Diversity::Hopping);

inline constexpr double kDefaultRateLoss = 0.794;

/// R = log2(1 + l_s beta), bits per channel use.
double code_rate(double beta, double rate_loss = kDefaultRateLoss);
double beta_for_rate(double rate, double rate_loss = kDefaultRateLoss);

} // namespace mmuplink
