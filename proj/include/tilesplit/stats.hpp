#pragma once

#include <cstdint>
#include <vector>

#include "tilesplit/graph.hpp"
#include "tilesplit/scheme.hpp"

namespace tilesplit {

/// Star discrepancy of a 1-D point set against the uniform measure on [0, 1]:
/// sup over t of |#(points < t)/N - t|, by the exact sorted-order formula.
/// The default entry point parallelizes the scan with OpenMP when available
/// (jobs = 0 uses all threads); the _serial variant is the plain reference
/// loop.  Both return bit-identical values.
[[nodiscard]] double star_discrepancy_1d(std::vector<double> points, int jobs = 0);
[[nodiscard]] double star_discrepancy_1d_serial(std::vector<double> points);

struct BoxDiscrepancyOptions {
    std::size_t boxes = 200;         // sampled axis-aligned boxes
    std::uint64_t seed = 1;          // box corners and volume samples
    std::size_t mc_samples = 100000; // volume samples for non-rectangular domains
    int jobs = 0;                    // OpenMP threads (0 = all); parallel entry only
};

/// Isotropic discrepancy proxy over a polygonal domain: the worst
/// |fraction of points inside B - vol(B n domain) / vol(domain)| over seeded
/// random axis-aligned boxes B inside the domain's bounding box.  For an
/// axis-aligned rectangular domain the reference volume is exact; otherwise
/// it is estimated once per call from a deterministic sample (hash-indexed,
/// so the result is independent of evaluation order).  Serial and parallel
/// entry points return bit-identical values.
[[nodiscard]] double box_discrepancy(const std::vector<std::vector<double>>& points,
                                     const std::vector<std::vector<double>>& domain,
                                     const BoxDiscrepancyOptions& opt = {});
[[nodiscard]] double box_discrepancy_serial(
    const std::vector<std::vector<double>>& points,
    const std::vector<std::vector<double>>& domain,
    const BoxDiscrepancyOptions& opt = {});

/// Limit frequencies, per prototile and per creating edge.
struct Frequencies {
    std::vector<double> count_fraction;
    std::vector<double> volume_fraction;
    std::vector<double> edge_count_fraction;
    std::vector<double> edge_volume_fraction;
};

/// Stationary frequencies of the maximal-volume substitution flow, from the
/// normalized adjugate weights q: an edge h -> r of contraction beta
/// contributes q_h (1 - beta^d) to counts (normalized over all edges) and
/// q_h beta^d log(1/beta) to volumes.  This is the limit law when the length
/// lattice is incommensurable; the (commensurable) fixed-scale limit along
/// generations is generation_limit_frequencies.
[[nodiscard]] Frequencies kakutani_limit_frequencies(const AssocGraph& g);

/// Generation limit of a fixed-scale scheme: counts follow the left Perron
/// row of the count matrix, volumes the stationary row of the weighted
/// matrix.  Throws NotFixedScale for multiscale input.
[[nodiscard]] Frequencies generation_limit_frequencies(const Scheme& s);

/// Expected absolute number of tiles per prototile when the maximal-volume
/// process has substituted everything of cumulative length below `threshold`:
/// e^{d l} sum over edges h -> j of q_h (1 - beta^d) / d.
[[nodiscard]] std::vector<double> predicted_tile_counts(const AssocGraph& g,
                                                        double threshold);

/// Convergence digest of a measurement series: mean and worst absolute
/// deviation over the last quarter, the same split by odd/even index, and an
/// oscillation verdict (parity means separated by more than five times the
/// within-parity spread).
struct SeriesSummary {
    double mean = 0.0;
    double spread = 0.0;
    double odd_mean = 0.0;
    double even_mean = 0.0;
    bool oscillating = false;
};

[[nodiscard]] SeriesSummary summarize_series(const std::vector<double>& xs);

}  // namespace tilesplit
