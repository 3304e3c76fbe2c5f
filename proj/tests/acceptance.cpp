// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"

#include "mmuplink/config.hpp"
#include "mmuplink/experiment.hpp"
#include "mmuplink/io.hpp"
#include "mmuplink/oracle.hpp"
#include "mmuplink/outage.hpp"
#include "mmuplink/propagation.hpp"
#include "mmuplink/radio.hpp"
#include "mmuplink/topology.hpp"
#include "mmuplink/validation.hpp"

using namespace mmuplink;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double log_uniform(Rng& rng, double lo, double hi)
{
    return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// 1. Closed form against the Monte Carlo oracle.
Verdict closed_form_vs_oracle()
{
    constexpr std::size_t kCases = 50;
    constexpr std::uint64_t kDraws = 1'000'000;
    const auto t0 = Clock::now();
    Rng rng = make_stream(2024, 1);
    int misses = 0;
    double worst = 0.0;
    for (std::size_t k = 0; k < kCases; ++k) {
        const ValidationCase c = random_validation_case(rng, 5);
        const ValidationResult r = validate_case(c, kDraws, mix_keys({2024, k}));
        misses += r.pass ? 0 : 1;
        worst = std::max(worst, std::abs(r.closed_form - r.estimate.outage) / r.sigma);
    }
    const double elapsed = seconds_since(t0);
    const int allowance = binomial_allowance(kCases);
    Verdict v;
    v.pass = misses <= allowance && allowance <= 2 && elapsed <= 300.0;
    v.detail = fmt("%d of %zu outside 4 sigma (allowed %d), worst %.2f sigma, %.1f s", misses, kCases, allowance,
                   worst, elapsed);
    return v;
}

// 2. Without interference the outage is the gamma CDF.
Verdict gamma_reduction()
{
    double worst = 0.0;
    int points = 0;
    for (int m0 = 1; m0 <= 10; ++m0)
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j) {
                const double beta = 0.25 * std::pow(32.0, i / 9.0);
                const double z = 1e-4 * std::pow(1e4, j / 9.0);
                InterferenceProfile p;
                p.m0 = m0;
                p.gamma0 = 1.0 / z;
                const double eps = conditional_outage(p, beta, Diversity::Hopping);
                const double ref = oracle::gamma_cdf(2.0 * m0, 2.0 * m0 * beta * z);
                worst = std::max(worst, std::abs(eps - ref));
                ++points;
            }
    InterferenceProfile spot;
    spot.m0 = 1;
    spot.gamma0 = db_to_linear(30.0);
    const double eps = conditional_outage(spot, db_to_linear(3.0), Diversity::Hopping);
    Verdict v;
    v.pass = points == 1000 && worst <= 1e-10 && std::abs(eps - 7.94e-6) <= 0.005e-6;
    v.detail = fmt("%d points, max |error| %.2e; spot value %.4e", points, worst, eps);
    return v;
}

// 3. Convolution against explicit enumeration of compositions.
Verdict convolution_vs_enumeration()
{
    Rng rng = make_stream(2024, 3);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const int n = std::uniform_int_distribution<int>(1, 5)(rng);
        const double beta0 = log_uniform(rng, 0.25, 16.0);
        std::vector<InterfererPeriodTerm> terms;
        std::vector<std::vector<double>> g;
        for (int i = 0; i < n; ++i) {
            const InterfererPeriodTerm t{log_uniform(rng, 1e-3, 10.0), std::uniform_real_distribution<double>()(rng),
                                         std::uniform_real_distribution<double>()(rng),
                                         std::uniform_real_distribution<double>(0.5, 3.0)(rng)};
            terms.push_back(t);
            std::vector<double> row;
            for (int ell = 0; ell <= 3; ++ell)
                row.push_back(oracle::g_closed(ell, {t.q, t.omega * t.duration, t.m}, beta0));
            g.push_back(row);
        }
        const std::vector<double> h = h_coefficients(terms, beta0, 3);
        for (int t = 0; t <= 3; ++t) {
            const double ref = oracle::h_enumeration(t, g);
            const double err = std::abs(h[static_cast<std::size_t>(t)] - ref);
            worst = std::max(worst, ref > 0.0 ? err / ref : err);
        }
    }
    Verdict v;
    v.pass = worst <= 1e-14;
    v.detail = fmt("1000 parameterizations, max relative error %.2e", worst);
    return v;
}

NetworkTopology default_topology(const RunConfig& cfg)
{
    return load_topology(cfg.topology, cfg.experiment.network.beam.sectors_per_station);
}

const SweepRow& find_row(const std::vector<SweepRow>& rows, double cm, double beta_db, bool shadowing, bool hopping,
                         FadingModel fading)
{
    for (const SweepRow& r : rows)
        if (r.cm_ratio == cm && r.beta_db == beta_db && r.shadowing == shadowing && r.hopping == hopping &&
            r.fading == fading)
            return r;
    throw std::runtime_error("missing sweep row");
}

double mean_se(const SweepRow& r) { return r.std_outage / std::sqrt(static_cast<double>(r.n_trials)); }

// 4 and 5 share one sweep: every beta and fading model reuses each trial's realization.
struct SweepVerdicts {
    Verdict trend;
    Verdict threshold;
};

SweepVerdicts densification_sweep()
{
    RunConfig cfg;
    cfg.experiment.trials = 1000;
    cfg.experiment.beta_db = {0.0, 3.0, 6.0};
    cfg.experiment.fading = {FadingModel::DistanceDependent, FadingModel::Rayleigh};
    const NetworkTopology base = default_topology(cfg);
    const auto t0 = Clock::now();
    const std::vector<SweepRow> rows = run_sweep(cfg.experiment, base);
    const double elapsed = seconds_since(t0);
    const auto& grid = cfg.experiment.cm_grid;
    const auto dd = FadingModel::DistanceDependent;

    SweepVerdicts out;
    Verdict& trend = out.trend;
    std::ostringstream d;
    int worst_inversions = 0;
    for (bool shadowing : {true, false})
        for (bool hopping : {true, false}) {
            int inversions = 0;
            bool beyond_2se = false;
            d << (shadowing ? "shadow" : "no-shadow") << '/' << (hopping ? "hop" : "no-hop") << ':';
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const SweepRow& r = find_row(rows, grid[k], 3.0, shadowing, hopping, dd);
                d << ' ' << fmt("%.4g", r.avg_outage);
                if (k == 0)
                    continue;
                const SweepRow& prev = find_row(rows, grid[k - 1], 3.0, shadowing, hopping, dd);
                if (r.avg_outage > prev.avg_outage) {
                    ++inversions;
                    const double se = std::hypot(mean_se(r), mean_se(prev));
                    beyond_2se = beyond_2se || r.avg_outage - prev.avg_outage > 2.0 * se;
                }
            }
            d << "; ";
            worst_inversions = std::max(worst_inversions, inversions);
            if (inversions > 1 || beyond_2se)
                trend.pass = false;
        }
    std::vector<double> hop_excess;
    for (double cm : grid) {
        const SweepRow& on = find_row(rows, cm, 3.0, false, true, dd);
        const SweepRow& off = find_row(rows, cm, 3.0, false, false, dd);
        if (on.avg_outage > off.avg_outage) {
            trend.pass = false;
            d << fmt("hopping worse without shadowing at C/M=%g (%.12g > %.12g); ", cm, on.avg_outage, off.avg_outage);
        }
    }
    if (elapsed > 900.0)
        trend.pass = false;
    d << fmt("max inversions %d; sweep %.0f s", worst_inversions, elapsed);
    trend.detail = d.str();

    Verdict& thr = out.threshold;
    std::ostringstream t;
    const SweepRow& a0 = find_row(rows, 1.0, 0.0, true, true, dd);
    const SweepRow& a6 = find_row(rows, 1.0, 6.0, true, true, dd);
    thr.pass = a6.ase > a0.ase;
    t << fmt("ASE at C/M=1: %.4g (0 dB) vs %.4g (6 dB)", a0.ase, a6.ase);
    for (double cm : grid) {
        if (cm < 0.2)
            continue;
        for (double beta : cfg.experiment.beta_db) {
            const SweepRow& ray = find_row(rows, cm, beta, true, true, FadingModel::Rayleigh);
            const SweepRow& dist = find_row(rows, cm, beta, true, true, dd);
            if (ray.avg_outage < dist.avg_outage) {
                thr.pass = false;
                t << fmt("; Rayleigh below distance-dependent at C/M=%g, %g dB (%.6g < %.6g)", cm, beta,
                         ray.avg_outage, dist.avg_outage);
            }
        }
    }
    const SweepRow& r1 = find_row(rows, 1.0, 3.0, true, true, FadingModel::Rayleigh);
    const SweepRow& d1 = find_row(rows, 1.0, 3.0, true, true, dd);
    t << fmt("; C/M=1, 3 dB: Rayleigh %.4g, distance-dependent %.4g", r1.avg_outage, d1.avg_outage);
    thr.detail = t.str();
    return out;
}

// 6. Rate-outage curves of one realization.
Verdict rate_curves()
{
    RunConfig cfg;
    cfg.experiment.curve_uplinks = 8;
    cfg.experiment.curve_population = 200;
    const RateCurves c = run_rate_curve(cfg.experiment, default_topology(cfg));
    bool monotone = true;
    for (const auto& curve : c.outage)
        for (std::size_t k = 1; k < curve.size(); ++k)
            monotone = monotone && curve[k] >= curve[k - 1];
    const std::size_t mid = (c.rates.size() - 1) / 2;
    double lo = 1.0, hi = 0.0;
    for (const auto& curve : c.outage) {
        lo = std::min(lo, curve[mid]);
        hi = std::max(hi, curve[mid]);
    }
    const double se = c.standard_error[mid];
    Verdict v;
    v.pass = c.outage.size() == 8 && monotone && hi - lo >= 10.0 * se;
    v.detail = fmt("%s; at R=%g spread %.4g vs 10 x SE %.4g (average %.4g over 200 uplinks)",
                   monotone ? "all curves nondecreasing" : "a curve decreases", c.rates[mid], hi - lo, 10.0 * se,
                   c.mean[mid]);
    return v;
}

// 7. Structural invariants.
Verdict invariants()
{
    std::vector<std::string> broken;
    auto require = [&](bool ok, const char* what) {
        if (!ok)
            broken.emplace_back(what);
    };
    Rng rng = make_stream(2024, 7);
    std::uniform_real_distribution<double> u01;

    bool durations = true, psi_range = true;
    for (int k = 0; k < 10000; ++k) {
        const double slot = log_uniform(rng, 1e-5, 1e-2);
        const auto c = fractional_durations(u01(rng) * slot, slot);
        double sum = 0.0;
        for (double x : c) {
            durations = durations && x >= 0.0;
            sum += x;
        }
        durations = durations && std::abs(sum - 1.0) <= 1e-12;
        const double p = psi(log_uniform(rng, 1e-3, 1e3), log_uniform(rng, 1e-6, 1e3), u01(rng),
                             std::uniform_real_distribution<double>(0.5, 4.0)(rng));
        psi_range = psi_range && p > 0.0 && p <= 1.0;
    }
    require(durations, "durations sum to one");
    require(psi_range, "Psi in (0, 1]");

    bool bounded = true, in_beta = true, in_z = true, in_omega = true;
    for (int k = 0; k < 1000; ++k) {
        const ValidationCase c = random_validation_case(rng, 5);
        const double eps = conditional_outage(c.profile, c.beta, c.diversity);
        bounded = bounded && eps >= 0.0 && eps <= 1.0;
        in_beta = in_beta && conditional_outage(c.profile, c.beta * 1.1, c.diversity) >= eps - 1e-12;
        InterferenceProfile louder_noise = c.profile;
        louder_noise.gamma0 /= 1.1;
        in_z = in_z && conditional_outage(louder_noise, c.beta, c.diversity) >= eps - 1e-12;
        for (std::size_t i = 0; i < c.profile.terms.size(); ++i) {
            InterferenceProfile louder = c.profile;
            louder.terms[i].omega *= 1.5;
            in_omega = in_omega && conditional_outage(louder, c.beta, c.diversity) >= eps - 1e-12;
        }
    }
    require(bounded, "outage in [0, 1]");
    require(in_beta, "outage nondecreasing in beta");
    require(in_z, "outage nondecreasing in z");
    require(in_omega, "outage nondecreasing in each Omega");

    RunConfig cfg;
    const NetworkTopology base = default_topology(cfg);
    bool partition = true;
    for (std::size_t s = 0; s < base.station_count(); ++s)
        for (int k = 0; k < 200; ++k) {
            const double theta = u01(rng) * kTwoPi;
            int covering = 0;
            for (int l = 0; l < base.sectors_per_station(); ++l)
                covering += base.sector(static_cast<int>(s) * base.sectors_per_station() + l).covers(theta) ? 1 : 0;
            partition = partition && covering == 1;
        }
    require(partition, "sectors partition every station's bearings");

    const ExperimentConfig& ex = cfg.experiment;
    const Scenario sc = make_scenario(base, 0.1, ex);
    const PropagationParams& prop = ex.network.propagation;
    Rng place_rng = make_stream(2024, 8);
    const PinnedMobile ref = place_reference(sc.topology, sc.reference_station, sc.d_r_km, place_rng);
    const std::vector<int> capacity(sc.topology.sector_count(), ex.network.hopping.sector_capacity());
    const Realization net = build_realization(sc.topology, prop, {&ref, 1}, sc.mobiles, capacity, place_rng);

    bool exclusion = true;
    const double d0sq = prop.d0_km * prop.d0_km;
    for (std::size_t i = 0; i < net.size(); ++i)
        for (std::size_t j = i + 1; j < net.size(); ++j) {
            const Vec2 dv = net.mobiles[i] - net.mobiles[j];
            exclusion = exclusion && dv.x * dv.x + dv.y * dv.y >= d0sq;
        }
    require(exclusion, "mobiles respect the exclusion zone");

    const ShadowFn xi = [&](std::size_t i, int sector, double d) { return net.shadow(i, sector, d); };
    const std::vector<int> generic = associate(sc.topology, net.mobiles, prop, xi);
    const std::vector<int> fast = associate(sc.topology, net.mobiles, prop, net.shadow);
    bool argmax = generic == fast;
    for (std::size_t i = 0; i < net.size() && argmax; ++i) {
        const double best = shadowed_log_gain(sc.topology, net.mobiles[i], i, generic[i], prop, xi);
        for (std::size_t s = 0; s < sc.topology.station_count(); ++s) {
            const int l = sc.topology.covering_sector(s, net.mobiles[i]);
            argmax = argmax && shadowed_log_gain(sc.topology, net.mobiles[i], i, l, prop, xi) <= best;
        }
    }
    require(argmax, "association maximises shadowed gain");

    const std::vector<int> loads = sector_loads(net.serving, sc.topology.sector_count());
    bool capacity_ok = loads == net.sector_load && net.serving[0] == ref.sector;
    for (std::size_t l = 0; l < loads.size(); ++l)
        capacity_ok = capacity_ok && loads[l] <= capacity[l];
    require(capacity_ok, "sector loads within capacity");

    ExperimentConfig small = ex;
    small.trials = 3;
    small.cm_grid = {0.2, 1.0};
    small.threads = 1;
    std::ostringstream a, b;
    write_sweep_csv(a, run_sweep(small, base));
    small.threads = 4;
    write_sweep_csv(b, run_sweep(small, base));
    const ValidationCase vc = random_validation_case(rng, 3);
    const OracleEstimate e1 = estimate_outage(vc.profile, vc.beta, 100000, 11, vc.diversity, 1);
    const OracleEstimate e2 = estimate_outage(vc.profile, vc.beta, 100000, 11, vc.diversity, 3);
    require(a.str() == b.str() && e1.outage == e2.outage, "bit-exact under a fixed seed");

    Verdict v;
    v.pass = broken.empty();
    if (v.pass) {
        v.detail = "11 invariant groups hold";
    } else {
        v.detail = "broken:";
        for (const auto& s : broken)
            v.detail += " [" + s + "]";
    }
    return v;
}

} // namespace

int main()
{
    int failed = 0;
    auto report = [&](int id, const char* name, const Verdict& v) {
        std::printf("criterion %d %-34s %s  %s\n", id, name, v.pass ? "PASS" : "FAIL", v.detail.c_str());
        std::fflush(stdout);
        failed += v.pass ? 0 : 1;
    };
    report(1, "closed form vs Monte Carlo", closed_form_vs_oracle());
    report(2, "gamma CDF reduction", gamma_reduction());
    report(3, "convolution vs enumeration", convolution_vs_enumeration());
    const SweepVerdicts sweep = densification_sweep();
    report(4, "densification trend", sweep.trend);
    report(5, "threshold and fading ordering", sweep.threshold);
    report(6, "rate-outage curves", rate_curves());
    report(7, "invariant suite", invariants());
    std::printf("%d of 7 criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
