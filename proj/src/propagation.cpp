#include "mmuplink/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmuplink/error.hpp"

namespace mmuplink {

namespace {

void require_distance(double d_km)
{
    if (!(d_km >= 0.0))
        throw InvalidParameter("distance must be nonnegative, got " + std::to_string(d_km));
}

double transition(double d_km, const PropagationParams& p)
{
    require_distance(d_km);
    return std::tanh(p.mu_per_km * d_km);
}

} // namespace

void PropagationParams::validate() const
{
    if (!(alpha_min <= alpha_max))
        throw InvalidParameter("alpha_min must not exceed alpha_max");
    if (!(sigma_min_db >= 0.0 && sigma_min_db <= sigma_max_db))
        throw InvalidParameter("need 0 <= sigma_min <= sigma_max");
    if (!(m_min >= 0.5 && m_min <= m_max))
        throw InvalidParameter("need 0.5 <= m_min <= m_max");
    if (!(mu_per_km > 0.0))
        throw InvalidParameter("mu must be positive");
    if (!(d0_km > 0.0))
        throw InvalidParameter("d0 must be positive");
}

PropagationParams PropagationParams::without_shadowing() const
{
    PropagationParams p = *this;
    p.sigma_min_db = 0.0;
    p.sigma_max_db = 0.0;
    return p;
}

double alpha(double d_km, const PropagationParams& p)
{
    return p.alpha_min + (p.alpha_max - p.alpha_min) * transition(d_km, p);
}

double shadow_sigma(double d_km, const PropagationParams& p)
{
    return p.sigma_min_db + (p.sigma_max_db - p.sigma_min_db) * transition(d_km, p);
}

double nakagami_m(double d_km, const PropagationParams& p)
{
    return p.m_max - (p.m_max - p.m_min) * transition(d_km, p);
}

double path_loss(double d_km, const PropagationParams& p)
{
    if (!(d_km >= p.d0_km))
        throw DomainError("path loss is defined only for d >= d0");
    return std::pow(d_km / p.d0_km, -alpha(d_km, p));
}

double clamped_path_loss(double d_km, const PropagationParams& p)
{
    return path_loss(std::max(d_km, p.d0_km), p);
}

double log_path_loss(double d_km, const PropagationParams& p)
{
    const double d = std::max(d_km, p.d0_km);
    return -alpha(d, p) * std::log(d / p.d0_km);
}

int reference_m0(double d_r_km, const PropagationParams& p, M0Rounding mode)
{
    const double m = nakagami_m(d_r_km, p);
    const double r = mode == M0Rounding::Floor ? std::floor(m) : std::round(m);
    return std::max(1, static_cast<int>(r));
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

} // namespace mmuplink
