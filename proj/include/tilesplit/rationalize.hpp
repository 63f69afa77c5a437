#pragma once

#include <cstddef>
#include <vector>

#include "tilesplit/graph.hpp"
#include "tilesplit/scalar.hpp"
#include "tilesplit/scheme.hpp"

namespace tilesplit {

/// How the original maximal-volume sequence sits inside the generation
/// sequence of the rationalized scheme: state m of the former equals
/// generation k[m] of the latter (chain tiles collapsed).  k[m] is the
/// number of length quanta below the threshold popped at step m+1; it is
/// simply m unless some early quantum has no tile, which only happens while
/// short cumulative lengths are still unreachable from the root.
struct SubsequenceIndex {
    long a = 1;                 // residue classes; generations per lattice unit
    double unit = 0.0;          // length quantum of the rationalized scheme
    Scalar unit_scale;          // e^{unit}, exact when the lattice is exact
    std::vector<std::size_t> k; // k[0] = 0; filled well past any test horizon
};

struct RationalizationResult {
    /// Equal-contraction scheme: the slid originals first (same order), then
    /// the delay-chain tiles, one chain per (parent, child, quantum count)
    /// edge class in edge order.
    Scheme fixed_scheme;
    Scalar contraction;  // its common contraction e^{-unit}, exact when known

    /// Per prototile of fixed_scheme: the original prototile it is a scaled
    /// copy of, that scale (relative to the original, un-normalized
    /// prototile), and its chain depth (0 = slid original, m = becomes its
    /// source after m more generations).
    std::vector<std::size_t> source_type;
    std::vector<Scalar> prototile_scale;
    std::vector<std::size_t> chain_depth;

    /// Per original type: the length offset t_v applied to it, as a double
    /// and as e^{t_v}.  The root (type 0) is never slid.
    std::vector<double> slide;
    std::vector<Scalar> slide_scale;

    /// Per original edge id: how many length quanta the slid edge spans.
    std::vector<long long> edge_multiplier;

    SubsequenceIndex index;
};

/// Turn an irreducible commensurable scheme into an equal-contraction scheme
/// whose generation sequence contains the maximal-volume sequence of the
/// original.  Works on the volume-normalized scheme: every prototile is slid
/// along its residue offset so that each edge spans a whole number of
/// quanta, and an edge spanning q quanta runs through q-1 chain tiles with
/// one trivial rule each, ticking one quantum per generation.  Throws
/// IncommensurableInput when closed-path lengths generate a lattice of rank
/// above one, NumericVerdictNotAccepted when commensurability rests on the
/// floating-point heuristic and accept_numeric is false, and SlideInfeasible
/// if a slid edge leaves the quantum lattice or loses monotonicity.
[[nodiscard]] RationalizationResult rationalize(const Scheme& s,
                                                bool accept_numeric = false);

/// Replay both processes from type-0 roots and check that maximal-volume
/// states 1..m_max of the (normalized) original match generations k[1]..
/// k[m_max] of the rationalized scheme with chain tiles collapsed onto their
/// sources: per-type counts exactly, volumes exactly when both censuses are
/// exact and within tol otherwise.  Returns false on any mismatch; engine
/// errors propagate.
[[nodiscard]] bool verify_subsequence(const Scheme& original, const RationalizationResult& r,
                                      std::size_t m_max, double tol = 1e-9);

}  // namespace tilesplit
