#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mmuplink/error.hpp"
#include "mmuplink/topology.hpp"
#include "oracles.hpp"

using namespace mmuplink;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

NetworkTopology grid_topology(int per_row, double spacing, int zeta)
{
    std::vector<BaseStation> st;
    int id = 1;
    for (int r = 0; r < per_row; ++r)
        for (int c = 0; c < per_row; ++c)
            st.push_back({id++, {(c + 0.5) * spacing, (r + 0.5) * spacing}});
    const double side = per_row * spacing;
    const Rect region{0, 0, side, side};
    return NetworkTopology(st, zeta, region, centered_square(region.center(), 0.5 * side));
}

std::vector<Vec2> uniform_points(const Rect& r, std::size_t n, Rng& rng)
{
    std::uniform_real_distribution<double> ux(r.x_min, r.x_max), uy(r.y_min, r.y_max);
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = ux(rng);
        out.push_back({x, uy(rng)});
    }
    return out;
}

} // namespace

TEST_CASE("sector construction")
{
    const std::vector<BaseStation> one{{1, {0, 0}}};
    auto s1 = build_sectors(one, 1);
    REQUIRE(s1.size() == 1);
    CHECK(s1[0].offset == 0.0);
    CHECK(s1[0].width == Approx(2 * kPi));

    auto s24 = build_sectors(one, 24);
    REQUIRE(s24.size() == 24);
    for (const Sector& s : s24)
        CHECK(s.width == Approx(kPi / 12));

    const std::vector<BaseStation> two{{1, {0, 0}}, {2, {5, 5}}};
    auto s4 = build_sectors(two, 4);
    REQUIRE(s4.size() == 8);
    for (int k = 0; k < 8; ++k) {
        CHECK(s4[k].id == k);
        CHECK(s4[k].station == k / 4);
        CHECK(s4[k].offset == Approx((k % 4) * kPi / 2));
    }
    CHECK_THROWS_AS(build_sectors(one, 0), InvalidParameter);
}

TEST_CASE("covering sector uses half-open beams")
{
    const std::vector<BaseStation> st{{7, {0, 0}}};
    const auto s4 = build_sectors(st, 4);
    CHECK(covering_sector(st[0], s4, {1, 0}) == 0);
    CHECK(covering_sector(st[0], s4, {0, 1}) == 1);
    CHECK(covering_sector(st[0], s4, {-1, 0}) == 2);
    CHECK(covering_sector(st[0], s4, {0, -1}) == 3);

    const auto s24 = build_sectors(st, 24);
    // floor(0.30 / (pi/12)) = 1, the second beam.
    const int expected = static_cast<int>(std::floor(0.30 / (kPi / 12)));
    CHECK(expected == 1);
    CHECK(covering_sector(st[0], s24, {std::cos(0.30), std::sin(0.30)}) == expected);
    CHECK_THROWS_AS(covering_sector(st[0], s24, {0, 0}), UndefinedAngle);
}

TEST_CASE("sectors partition the circle")
{
    const std::vector<BaseStation> st{{1, {0, 0}}};
    for (int zeta : {1, 3, 24}) {
        for (double base : {0.0, 0.3, -1.0}) {
            const std::vector<double> off{base};
            const auto sectors = build_sectors(st, zeta, off);
            Rng rng(zeta);
            std::uniform_real_distribution<double> u(-10.0, 10.0);
            for (int i = 0; i < 2000; ++i) {
                const double theta = i < 24 ? base + i * kTwoPi / zeta : u(rng);
                const auto covering = std::count_if(sectors.begin(), sectors.end(),
                                                    [&](const Sector& s) { return s.covers(theta); });
                REQUIRE(covering == 1);
            }
        }
    }
}

TEST_CASE("topology validation and scaling")
{
    const Rect region{0, 0, 10, 10};
    CHECK_THROWS_AS(NetworkTopology({}, 4, region, region), InvalidParameter);
    CHECK_THROWS_AS(NetworkTopology({{1, {1, 1}}, {1, {2, 2}}}, 4, region, region), InvalidParameter);
    CHECK_THROWS_AS(NetworkTopology({{1, {1, 1}}}, 4, region, Rect{-1, 0, 5, 5}), InvalidParameter);

    const NetworkTopology t = grid_topology(3, 2.0, 6);
    CHECK(t.sector_count() == 54);
    CHECK(t.nearest_station(t.window().center()) == 4);
    const NetworkTopology s = t.scaled(0.5);
    CHECK(s.stations()[4].position == Vec2{1.5, 1.5});
    CHECK(s.region().area() == Approx(t.region().area() / 4));
    CHECK(t.covering_sector(0, {3.0, 1.0}) == 0);
}

TEST_CASE("placement: trivial cases and exclusion zones")
{
    Rng rng(1);
    const Rect r{0, 0, 1, 1};
    CHECK(place_mobiles(r, 0, 0.004, rng).empty());
    const auto two = place_mobiles(r, 2, 0.004, rng);
    REQUIRE(two.size() == 2);
    CHECK(distance(two[0], two[1]) >= 0.004);

    // Occupied points are respected too.
    const std::vector<Vec2> occupied{{0.5, 0.5}};
    const auto pts = place_mobiles(Rect{0.49, 0.49, 0.51, 0.51}, 5, 0.004, rng, occupied);
    for (Vec2 p : pts)
        CHECK(distance(p, occupied[0]) >= 0.004);

    // 0.01 x 0.01 km cannot host 100 disks of radius 0.004 km.
    CHECK_THROWS_AS(place_mobiles(Rect{0, 0, 0.01, 0.01}, 100, 0.004, rng), PlacementInfeasible);
    CHECK_THROWS_AS(place_mobiles(r, 3, 0.0, rng), InvalidParameter);
}

TEST_CASE("placement: 10^4 mobiles keep every pair apart and look uniform")
{
    Rng rng(2024);
    const Rect r{0, 0, 20, 20};
    const double d0 = 0.004;
    const auto pts = place_mobiles(r, 10000, d0, rng);
    REQUIRE(pts.size() == 10000);

    double min_d = 1e9;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            min_d = std::min(min_d, distance(pts[i], pts[j]));
    CHECK(min_d >= d0);

    int counts[16] = {};
    for (Vec2 p : pts) {
        REQUIRE(r.contains(p));
        const int cx = std::min(3, static_cast<int>(p.x / 5.0));
        const int cy = std::min(3, static_cast<int>(p.y / 5.0));
        ++counts[cy * 4 + cx];
    }
    const double expected = pts.size() / 16.0;
    double chi2 = 0.0;
    for (int c : counts)
        chi2 += (c - expected) * (c - expected) / expected;
    CHECK(chi2 < oracle::kChiSquare15At001);
}

TEST_CASE("association picks the strongest covering sector")
{
    const PropagationParams off = PropagationParams{}.without_shadowing();
    const ShadowFn none = [](std::size_t, int, double) { return 0.0; };

    SUBCASE("no shadowing: nearest station")
    {
        const Rect region{0, 0, 2, 1};
        const NetworkTopology t({{1, {0.5, 0.5}}, {2, {1.5, 0.5}}}, 24, region, region);
        Rng rng(5);
        const auto mobiles = uniform_points(region, 500, rng);
        const auto serving = associate(t, mobiles, off, none);
        for (std::size_t i = 0; i < mobiles.size(); ++i) {
            const std::size_t near = distance(mobiles[i], {0.5, 0.5}) < distance(mobiles[i], {1.5, 0.5}) ? 0 : 1;
            CHECK(serving[i] == t.covering_sector(near, mobiles[i]));
        }
    }

    SUBCASE("single station serves everyone whatever the shadowing")
    {
        const Rect region{0, 0, 1, 1};
        const NetworkTopology t({{3, {0.5, 0.5}}}, 24, region, region);
        Rng rng(6);
        const auto mobiles = uniform_points(region, 200, rng);
        const ShadowField field(99, PropagationParams{});
        const auto serving = associate(t, mobiles, PropagationParams{}, field);
        for (std::size_t i = 0; i < mobiles.size(); ++i)
            CHECK(serving[i] == t.covering_sector(0, mobiles[i]));
    }

    SUBCASE("equidistant stations: the +3 dB link wins")
    {
        const Rect region{0, 0, 2, 1};
        const NetworkTopology t({{1, {0.5, 0.5}}, {2, {1.5, 0.5}}}, 24, region, region);
        const std::vector<Vec2> mobile{{1.0, 0.5}};
        const ShadowFn favour_a = [&](std::size_t, int l, double) { return t.sector(l).station == 0 ? 3.0 : 0.0; };
        const ShadowFn favour_b = [&](std::size_t, int l, double) { return t.sector(l).station == 1 ? 3.0 : 0.0; };
        CHECK(t.sector(associate(t, mobile, PropagationParams{}, favour_a)[0]).station == 0);
        CHECK(t.sector(associate(t, mobile, PropagationParams{}, favour_b)[0]).station == 1);
        // Exact tie: lowest sector id.
        CHECK(t.sector(associate(t, mobile, PropagationParams{}, none)[0]).station == 0);
    }
}

TEST_CASE("fast association matches the generic evaluation and is an argmax")
{
    const NetworkTopology t = grid_topology(4, 0.3, 24);
    for (bool shadowing : {true, false}) {
        const PropagationParams prop = shadowing ? PropagationParams{} : PropagationParams{}.without_shadowing();
        const ShadowField field(1234, prop);
        const ShadowFn fn = [&](std::size_t i, int l, double d) { return field(i, l, d); };
        Rng rng(77);
        const auto mobiles = uniform_points(t.region(), 2000, rng);
        const auto fast = associate(t, mobiles, prop, field);
        const auto slow = associate(t, mobiles, prop, fn);
        CHECK(fast == slow);
        for (std::size_t i = 0; i < mobiles.size(); ++i) {
            const double chosen = shadowed_log_gain(t, mobiles[i], i, fast[i], prop, fn);
            for (std::size_t s = 0; s < t.station_count(); ++s) {
                const int l = t.covering_sector(s, mobiles[i]);
                REQUIRE(chosen >= shadowed_log_gain(t, mobiles[i], i, l, prop, fn));
            }
            const auto ranked = ranked_candidates(t, mobiles[i], i, prop, fn);
            CHECK(ranked.front() == fast[i]);
        }
    }
}

TEST_CASE("shadow field is a pure function of its keys")
{
    const ShadowField f(5, PropagationParams{});
    CHECK(f(3, 10, 0.2) == f(3, 10, 0.2));
    CHECK(f(3, 10, 0.2) != f(4, 10, 0.2));
    CHECK(f(3, 10, 0.2) != f(3, 11, 0.2));
    CHECK(ShadowField(5, PropagationParams{})(3, 10, 0.2) == f(3, 10, 0.2));
    CHECK(ShadowField(6, PropagationParams{})(3, 10, 0.2) != f(3, 10, 0.2));
    CHECK(ShadowField(5, PropagationParams{}.without_shadowing())(3, 10, 0.2) == 0.0);
    // Scales with sigma(d).
    const double ratio = f(3, 10, 0.5) / f(3, 10, 0.0);
    CHECK(ratio == Approx(shadow_sigma(0.5, PropagationParams{}) / shadow_sigma(0.0, PropagationParams{})));
}

TEST_CASE("capacity enforcement")
{
    const PropagationParams prop = PropagationParams{}.without_shadowing();
    const ShadowFn none = [](std::size_t, int, double) { return 0.0; };

    SUBCASE("loads within capacity: unchanged")
    {
        const NetworkTopology t = grid_topology(2, 1.0, 4);
        Rng rng(1);
        const auto mobiles = uniform_points(t.region(), 20, rng);
        auto serving = associate(t, mobiles, prop, none);
        const auto before = serving;
        const std::vector<int> cap(t.sector_count(), 10);
        enforce_capacity(t, mobiles, serving, cap, prop, none, rng, 0);
        CHECK(serving == before);
    }

    SUBCASE("12 mobiles in a 10-slot sector")
    {
        const Rect region{0, 0, 2, 1};
        const NetworkTopology t({{1, {0.5, 0.5}}, {2, {1.5, 0.5}}}, 1, region, region);
        std::vector<Vec2> mobiles;
        for (int i = 0; i < 12; ++i)
            mobiles.push_back({0.3 + 0.01 * i, 0.5});
        auto serving = associate(t, mobiles, prop, none);
        CHECK(std::count(serving.begin(), serving.end(), 0) == 12);
        const std::vector<int> cap{10, 10};
        Rng rng(3);
        const auto load = enforce_capacity(t, mobiles, serving, cap, prop, none, rng, 0);
        CHECK(load[0] == 10);
        CHECK(load[1] == 2);
        CHECK(std::count(serving.begin(), serving.end(), 0) == 10);
        CHECK(std::count(serving.begin(), serving.end(), 1) == 2);
    }

    SUBCASE("single full-circle sector: overflow goes inactive")
    {
        const Rect region{0, 0, 1, 1};
        const NetworkTopology t({{1, {0.5, 0.5}}}, 1, region, region);
        Rng rng(4);
        const auto mobiles = place_mobiles(region, 15, 0.004, rng);
        auto serving = associate(t, mobiles, prop, none);
        const std::vector<int> cap{10};
        const auto load = enforce_capacity(t, mobiles, serving, cap, prop, none, rng, 0);
        CHECK(load[0] == 10);
        CHECK(std::count(serving.begin(), serving.end(), kInactive) == 5);
    }

    SUBCASE("pinned mobiles are never evicted")
    {
        const Rect region{0, 0, 1, 1};
        const NetworkTopology t({{1, {0.5, 0.5}}}, 1, region, region);
        Rng rng(8);
        const auto mobiles = place_mobiles(region, 15, 0.004, rng);
        for (int trial = 0; trial < 20; ++trial) {
            auto serving = associate(t, mobiles, prop, none);
            const std::vector<int> cap{10};
            enforce_capacity(t, mobiles, serving, cap, prop, none, rng, 3);
            for (int i = 0; i < 3; ++i)
                CHECK(serving[i] == 0);
        }
    }
}

TEST_CASE("realizations respect capacity, exclusion and pinning")
{
    const NetworkTopology t = grid_topology(3, 0.2, 24);
    const PropagationParams prop{};
    const std::vector<int> cap(t.sector_count(), 10);
    const std::vector<PinnedMobile> pinned{{{0.31, 0.3}, t.covering_sector(4, {0.31, 0.3})}};
    Rng rng(99);
    const Realization r = build_realization(t, prop, pinned, 400, cap, rng);
    REQUIRE(r.size() == 400);
    CHECK(r.pinned == 1);
    CHECK(r.mobiles[0] == pinned[0].position);
    CHECK(r.serving[0] == pinned[0].sector);
    CHECK(r.sector_load == sector_loads(r.serving, t.sector_count()));
    for (int load : r.sector_load)
        CHECK(load <= 10);
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = i + 1; j < r.size(); ++j)
            REQUIRE(distance(r.mobiles[i], r.mobiles[j]) >= prop.d0_km);

    Rng again(99);
    const Realization r2 = build_realization(t, prop, pinned, 400, cap, again);
    CHECK(r2.mobiles == r.mobiles);
    CHECK(r2.serving == r.serving);
    CHECK(r2.xi(7, 3, t) == r.xi(7, 3, t));

    const std::vector<PinnedMobile> bad{{{0.3, 0.3}, 100000}};
    CHECK_THROWS_AS(build_realization(t, prop, bad, 10, cap, rng), InvalidParameter);
    CHECK_THROWS_AS(build_realization(t, prop, pinned, 0, cap, rng), InvalidParameter);
}
