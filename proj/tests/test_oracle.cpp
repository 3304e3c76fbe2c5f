#include "doctest.h"

#include <cmath>
#include <limits>

#include "mmuplink/error.hpp"
#include "mmuplink/oracle.hpp"
#include "oracles.hpp"

using namespace mmuplink;
using doctest::Approx;

TEST_CASE("SINR concentrates at Gamma_0 for a nearly deterministic reference")
{
    InterferenceProfile p;
    p.m0 = 50;
    p.gamma0 = 20.0;
    Rng rng(1);
    SinrSampler sample(p, Diversity::Hopping);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
        sum += sample(rng);
    CHECK(sum / n == Approx(20.0).epsilon(0.02));
}

TEST_CASE("noise-free link without interferers never fails")
{
    InterferenceProfile p;
    p.gamma0 = std::numeric_limits<double>::infinity();
    Rng rng(2);
    CHECK(std::isinf(draw_sinr(p, rng)));
    const auto e = estimate_outage(p, 100.0, 10000, 3);
    CHECK(e.outage == 0.0);
    CHECK(conditional_outage(p, 100.0) == 0.0);
}

TEST_CASE("always-on interferer with nearly constant gains")
{
    InterferenceProfile p;
    p.m0 = 400;
    p.gamma0 = 4.0; // z = 0.25
    for (double c : {0.1, 0.4, 0.1, 0.4})
        p.terms.push_back({1.0, 1.0, c, 400.0});
    Rng rng(5);
    SinrSampler sample(p, Diversity::NoHopping);
    double sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i)
        sum += sample(rng);
    CHECK(sum / n == Approx(1.0 / 1.25).epsilon(0.01));
}

TEST_CASE("Monte Carlo outage matches the gamma CDF without interference")
{
    InterferenceProfile p;
    p.m0 = 1;
    p.gamma0 = db_to_linear(30.0);
    const double beta = db_to_linear(3.0);
    const double exact = oracle::gamma_cdf(2.0, 2.0 * beta / p.gamma0);
    const auto e = estimate_outage(p, beta, 10'000'000, 11);
    const double sigma = std::sqrt(exact * (1 - exact) / e.draws);
    CHECK(std::abs(e.outage - exact) <= 4.0 * sigma);
}

TEST_CASE("threshold limits")
{
    InterferenceProfile p;
    p.m0 = 2;
    p.gamma0 = 10.0;
    p.terms.push_back({0.5, 0.7, 0.5, 1.2});
    CHECK(estimate_outage(p, 1e-9, 10000, 1).outage == 0.0);
    CHECK(estimate_outage(p, 1e9, 10000, 1).outage == 1.0);
}

TEST_CASE("estimates depend on the seed, not the thread count")
{
    InterferenceProfile p;
    p.m0 = 1;
    p.gamma0 = 3.0;
    p.terms.push_back({0.8, 0.5, 0.3, 1.5});
    p.terms.push_back({0.8, 0.5, 0.7, 1.5});
    const auto a = estimate_outage(p, 1.0, 100003, 9, Diversity::Hopping, 1);
    const auto b = estimate_outage(p, 1.0, 100003, 9, Diversity::Hopping, 4);
    CHECK(a.outage == b.outage);
    CHECK(a.draws == 100003);
    const auto c = estimate_outage(p, 1.0, 100003, 10, Diversity::Hopping, 1);
    CHECK(c.outage != a.outage);
    CHECK_THROWS_AS(estimate_outage(p, 1.0, 10, 1), InvalidParameter);
}

TEST_CASE("three interferers with m0 = 2 agree with the closed form")
{
    InterferenceProfile p;
    p.m0 = 2;
    p.gamma0 = 40.0;
    const double omegas[] = {0.4, 0.15, 1.3};
    const double qs[] = {0.3, 0.9, 0.1};
    const double ms[] = {1.1, 1.7, 0.8};
    const double c1[] = {0.1, 0.35, 0.0};
    for (int i = 0; i < 3; ++i)
        for (double c : {c1[i], 0.5 - c1[i], c1[i], 0.5 - c1[i]})
            p.terms.push_back({omegas[i], qs[i], c, ms[i]});
    for (Diversity d : {Diversity::Hopping, Diversity::NoHopping})
        for (double beta : {0.3, 1.0, 3.0}) {
            const double exact = conditional_outage(p, beta, d);
            const auto e = estimate_outage(p, beta, 1'000'000, 21, d);
            const double sigma = std::max(e.standard_error, std::sqrt(exact * (1 - exact) / e.draws));
            CHECK(std::abs(e.outage - exact) <= 4.0 * sigma);
        }
}
