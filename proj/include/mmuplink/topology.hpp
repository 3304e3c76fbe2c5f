#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mmuplink/geometry.hpp"
#include "mmuplink/propagation.hpp"
#include "mmuplink/random.hpp"

namespace mmuplink {

struct BaseStation {
    int id = 0;
    Vec2 position;
};

/**
 * One fixed angular beam of a base station. Sector ids are global and dense:
 * sector `local` of station index `station` has id `station * zeta + local`.
 * The beam covers bearings in the half-open interval [offset, offset + width).
 */
struct Sector {
    int id = 0;
    int station = 0;    ///< index into the station list
    int station_id = 0; ///< BaseStation::id of that station
    int local = 0;
    double offset = 0.0;
    double width = kTwoPi;
    double base_offset = 0.0; ///< offset of the station's first sector

    bool covers(double theta) const;
};

/// Local index of the sector of a zeta-beam station (first beam at
/// `base_offset`) that covers bearing `theta`.
int sector_slot(double theta, double base_offset, int zeta);

/// Uniform beams 2pi(k-1)/zeta per station, optionally rotated per station.
std::vector<Sector> build_sectors(std::span<const BaseStation> stations, int zeta,
                                  std::span<const double> station_offsets = {});

/// Sector of `station` whose beam contains the bearing toward `x`.
/// `sectors` may be the full list or only that station's sectors.
int covering_sector(const BaseStation& station, std::span<const Sector> sectors, Vec2 x);

class NetworkTopology {
public:
    NetworkTopology() = default;
    NetworkTopology(std::vector<BaseStation> stations, int zeta, Rect region, Rect window,
                    std::vector<double> station_offsets = {});

    const std::vector<BaseStation>& stations() const { return stations_; }
    const std::vector<Sector>& sectors() const { return sectors_; }
    const Sector& sector(int id) const { return sectors_[static_cast<std::size_t>(id)]; }
    const Rect& region() const { return region_; }
    const Rect& window() const { return window_; }
    int sectors_per_station() const { return zeta_; }
    std::size_t station_count() const { return stations_.size(); }
    std::size_t sector_count() const { return sectors_.size(); }

    /// Receiver position of a sector (its station's location).
    Vec2 sector_position(int sector_id) const { return stations_[static_cast<std::size_t>(sector(sector_id).station)].position; }

    /// Id of the sector of station index `station` covering `x`.
    int covering_sector(std::size_t station, Vec2 x) const;

    std::size_t nearest_station(Vec2 p) const;

    /// All coordinates multiplied by `s` about the origin.
    NetworkTopology scaled(double s) const;

private:
    std::vector<BaseStation> stations_;
    std::vector<double> offsets_;
    std::vector<Sector> sectors_;
    Rect region_;
    Rect window_;
    int zeta_ = 1;
};

inline constexpr int kPlacementAttemptsPerMobile = 10000;

/// Uniform clustering: `count` uniform points in `region`, each redrawn while
/// within `d0` of an accepted point or of any point in `occupied`.
/// Throws PlacementInfeasible after kPlacementAttemptsPerMobile failed draws
/// for a single mobile.
std::vector<Vec2> place_mobiles(const Rect& region, std::size_t count, double d0, Rng& rng,
                                std::span<const Vec2> occupied = {});

/// Shadowing factor xi_{i,l} in dB, given mobile index, sector id and link length.
using ShadowFn = std::function<double(std::size_t mobile, int sector, double d_km)>;

/**
 * Lazily materialised shadowing matrix. Each (mobile, sector) entry is a pure
 * function of the field seed, so the same pair always sees one draw and the
 * full mobile x sector matrix is never stored.
 */
class ShadowField {
public:
    ShadowField() = default;
    ShadowField(std::uint64_t seed, const PropagationParams& prop) : seed_(seed), prop_(prop) {}

    double operator()(std::size_t mobile, int sector, double d_km) const;
    bool enabled() const { return prop_.has_shadowing(); }

    /// The unit normal behind xi for this mobile and sector.
    double unit(std::size_t mobile, int sector) const
    {
        return counter_normal(mix_keys({seed_, mobile, static_cast<std::uint64_t>(sector)}));
    }

private:
    std::uint64_t seed_ = 0;
    PropagationParams prop_ = PropagationParams{}.without_shadowing();
};

inline constexpr int kInactive = -1;

/// ln(10^{xi/10} f(d)) for mobile `i` at `x` toward sector `sector_id`.
double shadowed_log_gain(const NetworkTopology& topo, Vec2 x, std::size_t i, int sector_id,
                         const PropagationParams& prop, const ShadowFn& xi);

/// Serving sector per mobile: argmax of shadowed gain over the covering
/// sector of every station. Ties go to the lowest sector id.
std::vector<int> associate(const NetworkTopology& topo, std::span<const Vec2> mobiles,
                           const PropagationParams& prop, const ShadowFn& xi);

/// Same result as the generic overload, evaluated without indirection.
/// Without shadowing the argmax is the nearest station.
std::vector<int> associate(const NetworkTopology& topo, std::span<const Vec2> mobiles,
                           const PropagationParams& prop, const ShadowField& field);

/// Covering sectors of every station ordered by shadowed gain, best first.
std::vector<int> ranked_candidates(const NetworkTopology& topo, Vec2 x, std::size_t i,
                                   const PropagationParams& prop, const ShadowFn& xi);

std::vector<int> sector_loads(std::span<const int> serving, std::size_t sector_count);

/**
 * Caps each sector at `capacity[l]` mobiles. Overflow mobiles, chosen
 * uniformly among the sector's non-pinned members, move to their best-ranked
 * candidate with spare capacity or become kInactive. Mobiles [0, pinned)
 * never move. Returns the resulting loads.
 */
std::vector<int> enforce_capacity(const NetworkTopology& topo, std::span<const Vec2> mobiles,
                                  std::vector<int>& serving, std::span<const int> capacity,
                                  const PropagationParams& prop, const ShadowFn& xi, Rng& rng,
                                  std::size_t pinned = 0);

/// A mobile with a fixed serving sector (reference links).
struct PinnedMobile {
    Vec2 position;
    int sector = 0;
};

/// One network realization; immutable once built.
struct Realization {
    std::vector<Vec2> mobiles;
    std::vector<int> serving;
    std::vector<int> sector_load;
    std::size_t pinned = 0;
    ShadowField shadow;

    std::size_t size() const { return mobiles.size(); }
    bool active(std::size_t i) const { return serving[i] != kInactive; }
    double xi(std::size_t i, int sector, const NetworkTopology& topo) const
    {
        return shadow(i, sector, distance(mobiles[i], topo.sector_position(sector)));
    }
};

/**
 * Places `total_mobiles` mobiles (the pinned ones first), associates the
 * free ones, then enforces per-sector capacity. Randomness: one draw seeds
 * the shadow field, then placement, then overflow selection.
 */
Realization build_realization(const NetworkTopology& topo, const PropagationParams& prop,
                              std::span<const PinnedMobile> pinned, std::size_t total_mobiles,
                              std::span<const int> capacity, Rng& rng);

} // namespace mmuplink
