#pragma once

#include <cstdint>
#include <vector>

#include "tilesplit/scalar.hpp"
#include "tilesplit/scheme.hpp"

namespace tilesplit {

enum class SimMode {
    /// Substitute the maximal-volume tie class, one distinct volume per step.
    Kakutani,
    /// Substitute every tile each step.
    Generation,
};

struct EngineOptions {
    SimMode mode = SimMode::Kakutani;
    std::size_t root_type = 0;
    /// Stop criteria; at least one of the three must be set.
    std::size_t max_steps = 0;       // 0 = unbounded
    long long max_tiles = 0;         // stop once the partition has this many
    double min_tile_volume = 0.0;    // stop once every tile is smaller
    /// Census snapshot cadence (0 = final state only; the final state is
    /// always included).
    std::size_t snapshot_every = 0;
    /// Keep explicit tile placements (same censuses, bounded by retain_cap).
    bool retain = false;
    std::size_t retain_cap = 1000000;
};

/// Aggregated contents of a partition state.
struct Census {
    long long total = 0;
    std::vector<long long> type_counts;     // per prototile
    std::vector<long long> edge_counts;     // per creating edge (root excluded)
    std::vector<double> type_volumes;
    std::vector<double> edge_volumes;       // per creating edge (root excluded)
    /// Volumes are also carried exactly when every beta^d and the root
    /// volume are rational.
    bool exact = false;
    std::vector<BigRat> type_volumes_exact;

    [[nodiscard]] double count_fraction(std::size_t type) const;
    [[nodiscard]] double volume_fraction(std::size_t type) const;
    [[nodiscard]] double total_volume() const;
};

struct Snapshot {
    std::size_t step = 0;
    /// Kakutani: the cumulative length value substituted at this step (the
    /// m-th distinct value of the path length sequence).  Generation: the
    /// step number.
    double threshold = 0.0;
    Census census;
    double wall_ms = 0.0;
};

/// A tile kept by retained mode.  `level` is its cumulative length (its
/// volume is root_volume * e^{-d * level}); `entry` is creating-edge id + 1,
/// with 0 for the root tile.
struct RetainedTile {
    Tile tile;
    double level = 0.0;
    std::size_t entry = 0;
};

struct SimResult {
    std::vector<Snapshot> snapshots;  // last entry is always the final state
    std::size_t steps = 0;
    std::vector<RetainedTile> tiles;  // retained mode only
};

/// Run the substitution process.  Deterministic: identical inputs give
/// identical results, including Random-policy runs (a SplitMix64 stream
/// seeded from the policy, consumed in canonical tile order; parents with a
/// single alternative consume nothing).  Aggregated and retained runs follow
/// bit-identical substitution streams.
///
/// Internally tiles of equal cumulative length are kept as one counted
/// class; exact scale tables use exact class keys, numeric ones merge within
/// 1e-9 relative.  Throws Error when no stop criterion is set or the retained
/// tile budget is exceeded.
[[nodiscard]] SimResult simulate(const Scheme& s, const EngineOptions& opt);

/// Image of every prototile marking point under the retained placements.
[[nodiscard]] std::vector<std::vector<double>> marking_points(
    const Scheme& s, const std::vector<RetainedTile>& tiles);

}  // namespace tilesplit
