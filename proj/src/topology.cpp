#include "mmuplink/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

#include "mmuplink/error.hpp"

namespace mmuplink {

namespace {

constexpr double kLn10Over10 = 0.23025850929940458;

int zeta_of(const Sector& s) { return static_cast<int>(std::lround(kTwoPi / s.width)); }

} // namespace

int sector_slot(double theta, double base_offset, int zeta)
{
    const double width = kTwoPi / zeta;
    const double rel = normalize_angle(theta - base_offset);
    const int k = static_cast<int>(std::floor(rel / width));
    return std::clamp(k, 0, zeta - 1);
}

bool Sector::covers(double theta) const { return sector_slot(theta, base_offset, zeta_of(*this)) == local; }

std::vector<Sector> build_sectors(std::span<const BaseStation> stations, int zeta,
                                  std::span<const double> station_offsets)
{
    if (zeta < 1)
        throw InvalidParameter("sectors per station must be at least 1");
    if (!station_offsets.empty() && station_offsets.size() != stations.size())
        throw InvalidParameter("need one sector offset per station");

    const double width = kTwoPi / zeta;
    std::vector<Sector> sectors;
    sectors.reserve(stations.size() * static_cast<std::size_t>(zeta));
    for (std::size_t s = 0; s < stations.size(); ++s) {
        const double base = station_offsets.empty() ? 0.0 : normalize_angle(station_offsets[s]);
        for (int k = 0; k < zeta; ++k) {
            Sector sec;
            sec.id = static_cast<int>(s) * zeta + k;
            sec.station = static_cast<int>(s);
            sec.station_id = stations[s].id;
            sec.local = k;
            sec.offset = normalize_angle(base + k * width);
            sec.width = width;
            sec.base_offset = base;
            sectors.push_back(sec);
        }
    }
    return sectors;
}

int covering_sector(const BaseStation& station, std::span<const Sector> sectors, Vec2 x)
{
    const double theta = bearing(station.position, x);
    for (const Sector& s : sectors)
        if (s.station_id == station.id && s.covers(theta))
            return s.id;
    throw InvalidParameter("no sector of station " + std::to_string(station.id) + " covers the point");
}

NetworkTopology::NetworkTopology(std::vector<BaseStation> stations, int zeta, Rect region, Rect window,
                                 std::vector<double> station_offsets)
    : stations_(std::move(stations))
    , offsets_(std::move(station_offsets))
    , region_(region)
    , window_(window)
    , zeta_(zeta)
{
    if (stations_.empty())
        throw InvalidParameter("topology needs at least one base station");
    if (!region_.contains(window_))
        throw InvalidParameter("measurement window must lie inside the network region");
    std::vector<int> ids;
    for (const BaseStation& b : stations_) {
        if (!std::isfinite(b.position.x) || !std::isfinite(b.position.y))
            throw InvalidParameter("station positions must be finite");
        ids.push_back(b.id);
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw InvalidParameter("station ids must be unique");
    sectors_ = build_sectors(stations_, zeta_, offsets_);
}

int NetworkTopology::covering_sector(std::size_t station, Vec2 x) const
{
    const double theta = bearing(stations_[station].position, x);
    const double base = offsets_.empty() ? 0.0 : normalize_angle(offsets_[station]);
    return static_cast<int>(station) * zeta_ + sector_slot(theta, base, zeta_);
}

std::size_t NetworkTopology::nearest_station(Vec2 p) const
{
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < stations_.size(); ++s) {
        const double d = distance(stations_[s].position, p);
        if (d < best_d) {
            best_d = d;
            best = s;
        }
    }
    return best;
}

NetworkTopology NetworkTopology::scaled(double s) const
{
    std::vector<BaseStation> st = stations_;
    for (BaseStation& b : st)
        b.position = s * b.position;
    return NetworkTopology(std::move(st), zeta_, region_.scaled(s), window_.scaled(s), offsets_);
}

std::vector<Vec2> place_mobiles(const Rect& region, std::size_t count, double d0, Rng& rng,
                                std::span<const Vec2> occupied)
{
    if (!(d0 > 0.0))
        throw InvalidParameter("exclusion radius must be positive");
    std::vector<Vec2> out;
    if (count == 0)
        return out;
    if (!(region.width() > 0.0 && region.height() > 0.0))
        throw InvalidParameter("placement region is empty");

    // Hash grid with cell side d0: any conflicting point is in the 3x3 block.
    std::unordered_map<std::uint64_t, std::vector<Vec2>> grid;
    auto cell = [&](Vec2 p) {
        return std::pair<std::int64_t, std::int64_t>{static_cast<std::int64_t>(std::floor((p.x - region.x_min) / d0)),
                                                      static_cast<std::int64_t>(std::floor((p.y - region.y_min) / d0))};
    };
    auto key = [](std::int64_t cx, std::int64_t cy) {
        return (static_cast<std::uint64_t>(cx) << 32) ^ static_cast<std::uint64_t>(cy & 0xffffffff);
    };
    auto insert = [&](Vec2 p) {
        auto [cx, cy] = cell(p);
        grid[key(cx, cy)].push_back(p);
    };
    auto conflicts = [&](Vec2 p) {
        auto [cx, cy] = cell(p);
        for (std::int64_t dx = -1; dx <= 1; ++dx)
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                auto it = grid.find(key(cx + dx, cy + dy));
                if (it == grid.end())
                    continue;
                for (Vec2 q : it->second)
                    if (distance(p, q) < d0)
                        return true;
            }
        return false;
    };

    grid.reserve(count + occupied.size());
    for (Vec2 p : occupied)
        insert(p);

    std::uniform_real_distribution<double> ux(region.x_min, region.x_max);
    std::uniform_real_distribution<double> uy(region.y_min, region.y_max);
    out.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        bool placed = false;
        for (int attempt = 0; attempt < kPlacementAttemptsPerMobile; ++attempt) {
            const double x = ux(rng);
            const Vec2 p{x, uy(rng)};
            if (!conflicts(p)) {
                insert(p);
                out.push_back(p);
                placed = true;
                break;
            }
        }
        if (!placed)
            throw PlacementInfeasible("could not place mobile " + std::to_string(n + 1) + " of " +
                                      std::to_string(count) + " with exclusion radius " + std::to_string(d0) + " km");
    }
    return out;
}

double ShadowField::operator()(std::size_t mobile, int sector, double d_km) const
{
    const double sigma = shadow_sigma(d_km, prop_);
    if (sigma == 0.0)
        return 0.0;
    return sigma * unit(mobile, sector);
}

double shadowed_log_gain(const NetworkTopology& topo, Vec2 x, std::size_t i, int sector_id,
                         const PropagationParams& prop, const ShadowFn& xi)
{
    const double d = distance(x, topo.sector_position(sector_id));
    return kLn10Over10 * xi(i, sector_id, d) + log_path_loss(d, prop);
}

std::vector<int> associate(const NetworkTopology& topo, std::span<const Vec2> mobiles,
                           const PropagationParams& prop, const ShadowFn& xi)
{
    std::vector<int> serving(mobiles.size(), kInactive);
    for (std::size_t i = 0; i < mobiles.size(); ++i) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < topo.station_count(); ++s) {
            const int l = topo.covering_sector(s, mobiles[i]);
            const double g = shadowed_log_gain(topo, mobiles[i], i, l, prop, xi);
            if (g > best) {
                best = g;
                serving[i] = l;
            }
        }
    }
    return serving;
}

std::vector<int> associate(const NetworkTopology& topo, std::span<const Vec2> mobiles,
                           const PropagationParams& prop, const ShadowField& field)
{
    std::vector<int> serving(mobiles.size(), kInactive);
    const auto stations = topo.stations();
    if (!field.enabled()) {
        // f(d) is strictly decreasing, so the strongest station is the nearest.
        for (std::size_t i = 0; i < mobiles.size(); ++i) {
            std::size_t best = 0;
            double best_d2 = std::numeric_limits<double>::infinity();
            for (std::size_t s = 0; s < stations.size(); ++s) {
                const Vec2 v = stations[s].position - mobiles[i];
                const double d2 = v.x * v.x + v.y * v.y;
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best = s;
                }
            }
            serving[i] = topo.covering_sector(best, mobiles[i]);
        }
        return serving;
    }

    const double d0 = prop.d0_km;
    const double t0 = std::tanh(prop.mu_per_km * d0);
    for (std::size_t i = 0; i < mobiles.size(); ++i) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < stations.size(); ++s) {
            const int l = topo.covering_sector(s, mobiles[i]);
            const double d = distance(mobiles[i], stations[s].position);
            const double t = std::tanh(prop.mu_per_km * d);
            const double sigma = prop.sigma_min_db + (prop.sigma_max_db - prop.sigma_min_db) * t;
            const double xi = sigma == 0.0 ? 0.0 : sigma * field.unit(i, l);
            const double dc = std::max(d, d0);
            const double a = prop.alpha_min + (prop.alpha_max - prop.alpha_min) * (d < d0 ? t0 : t);
            const double g = kLn10Over10 * xi + -a * std::log(dc / d0);
            if (g > best) {
                best = g;
                serving[i] = l;
            }
        }
    }
    return serving;
}

std::vector<int> ranked_candidates(const NetworkTopology& topo, Vec2 x, std::size_t i,
                                   const PropagationParams& prop, const ShadowFn& xi)
{
    std::vector<std::pair<double, int>> scored;
    scored.reserve(topo.station_count());
    for (std::size_t s = 0; s < topo.station_count(); ++s) {
        const int l = topo.covering_sector(s, x);
        scored.emplace_back(shadowed_log_gain(topo, x, i, l, prop, xi), l);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::vector<int> out;
    out.reserve(scored.size());
    for (const auto& [g, l] : scored)
        out.push_back(l);
    return out;
}

std::vector<int> sector_loads(std::span<const int> serving, std::size_t sector_count)
{
    std::vector<int> load(sector_count, 0);
    for (int l : serving)
        if (l != kInactive)
            ++load[static_cast<std::size_t>(l)];
    return load;
}

std::vector<int> enforce_capacity(const NetworkTopology& topo, std::span<const Vec2> mobiles,
                                  std::vector<int>& serving, std::span<const int> capacity,
                                  const PropagationParams& prop, const ShadowFn& xi, Rng& rng,
                                  std::size_t pinned)
{
    const std::size_t n_sectors = topo.sector_count();
    if (capacity.size() != n_sectors)
        throw InvalidParameter("need one capacity per sector");
    std::vector<int> load = sector_loads(serving, n_sectors);

    std::vector<std::vector<std::size_t>> members(n_sectors);
    for (std::size_t i = pinned; i < serving.size(); ++i)
        if (serving[i] != kInactive)
            members[static_cast<std::size_t>(serving[i])].push_back(i);

    for (std::size_t l = 0; l < n_sectors; ++l) {
        int excess = load[l] - capacity[l];
        if (excess <= 0)
            continue;
        std::vector<std::size_t>& movable = members[l];
        std::shuffle(movable.begin(), movable.end(), rng);
        excess = std::min<int>(excess, static_cast<int>(movable.size()));
        std::vector<std::size_t> evicted(movable.end() - excess, movable.end());
        movable.resize(movable.size() - static_cast<std::size_t>(excess));
        std::sort(evicted.begin(), evicted.end());

        for (std::size_t i : evicted) {
            --load[l];
            serving[i] = kInactive;
            for (int c : ranked_candidates(topo, mobiles[i], i, prop, xi)) {
                const auto cu = static_cast<std::size_t>(c);
                if (cu != l && load[cu] < capacity[cu]) {
                    serving[i] = c;
                    ++load[cu];
                    members[cu].push_back(i);
                    break;
                }
            }
        }
    }
    return load;
}

Realization build_realization(const NetworkTopology& topo, const PropagationParams& prop,
                              std::span<const PinnedMobile> pinned, std::size_t total_mobiles,
                              std::span<const int> capacity, Rng& rng)
{
    if (pinned.size() > total_mobiles)
        throw InvalidParameter("more pinned mobiles than total mobiles");

    Realization r;
    r.shadow = ShadowField(rng(), prop);
    r.pinned = pinned.size();

    std::vector<Vec2> fixed;
    for (const PinnedMobile& p : pinned) {
        if (p.sector < 0 || static_cast<std::size_t>(p.sector) >= topo.sector_count())
            throw InvalidParameter("pinned mobile has an invalid sector");
        fixed.push_back(p.position);
    }
    std::vector<Vec2> free = place_mobiles(topo.region(), total_mobiles - pinned.size(), prop.d0_km, rng, fixed);
    r.mobiles = std::move(fixed);
    r.mobiles.insert(r.mobiles.end(), free.begin(), free.end());

    const ShadowFn xi = [&r](std::size_t i, int l, double d) { return r.shadow(i, l, d); };
    r.serving = associate(topo, r.mobiles, prop, r.shadow);
    for (std::size_t i = 0; i < pinned.size(); ++i)
        r.serving[i] = pinned[i].sector;
    r.sector_load = enforce_capacity(topo, r.mobiles, r.serving, capacity, prop, xi, rng, r.pinned);
    return r;
}

} // namespace mmuplink
