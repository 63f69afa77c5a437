#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tilesplit/matrix.hpp"
#include "tilesplit/scheme.hpp"

namespace tilesplit {

/// Shared exact basis for edge lengths.  When every contraction ratio is an
/// exact root of a rational, each edge length is (1/L) * <vec, log primes>,
/// an integer vector in units of (1/L).  Linear independence of prime logs
/// over the rationals then makes commensurability questions decidable.
struct ExactLengths {
    bool available = false;
    std::vector<BigInt> primes;                     // ascending
    unsigned L = 1;                                 // common root denominator
    std::vector<std::vector<long long>> edge_vec;   // per edge id, size primes
};

/// Weighted directed graph associated with a scheme (one vertex per
/// prototile, one edge per canonical child; lengths log(1/beta) of the
/// normalized scheme).
struct AssocGraph {
    std::size_t n = 0;
    unsigned dimension = 1;
    std::vector<std::string> labels;
    std::vector<EdgeInfo> edges;                   // alpha == beta (normalized)
    std::vector<std::vector<std::size_t>> out;     // edge ids by source vertex
    std::vector<std::vector<std::size_t>> in;      // edge ids by target vertex
    ExactLengths exact;
};

/// Fill adjacency and the exact length basis from `edges`/`n`.
void finalize_graph(AssocGraph& g);

/// Normalize the scheme and build its graph.
[[nodiscard]] AssocGraph build_graph(const Scheme& s);

[[nodiscard]] std::vector<std::vector<std::size_t>> strongly_connected_components(
    const AssocGraph& g);
[[nodiscard]] bool is_strongly_connected(const AssocGraph& g);
/// Throws NotIrreducible when the graph is not strongly connected.
void require_irreducible(const AssocGraph& g);

/// A closed directed path, by edge ids.
struct CycleDescriptor {
    std::vector<std::size_t> edges;
    double length = 0.0;
};

/// Outcome of the closed-path length lattice analysis.
///
/// Commensurable: all closed-path lengths are integer multiples of a unit
/// u0 (given exactly as e^{u0} = unit_scale when lengths are exact).  `a` is
/// the number of distinct vertex residue classes modulo u0; slid edge
/// lengths live in (u0/a) * N.  Incommensurable: two closed paths whose
/// length ratio is provably irrational.  NumericHeuristic: lengths carry no
/// exact form; the verdict reports the best numeric guess and how it was
/// reached.
struct CommensurabilityVerdict {
    enum class Kind { Commensurable, Incommensurable, NumericHeuristic };
    Kind kind = Kind::Incommensurable;

    // Commensurable (and heuristically commensurable):
    double unit_length = 0.0;
    Scalar unit_scale = Scalar::one();  // e^{unit_length}, exact when available
    long a = 0;                         // vertex residue classes modulo the unit

    // Per-vertex residue data (root = vertex 0): potential delta_v, the
    // integer part floor(delta_v / u0), and the rank of the vertex's
    // fractional-residue class (0 .. a-1, ordered by fractional value).
    std::vector<double> potential;
    std::vector<std::vector<long long>> potential_vec;  // exact mode only
    std::vector<long long> floor_units;
    std::vector<long> class_rank;

    // Incommensurable:
    CycleDescriptor witness_a, witness_b;

    // NumericHeuristic:
    bool likely_commensurable = false;
    std::string note;
};

/// Decide the closed-path length lattice of a strongly connected graph.
[[nodiscard]] CommensurabilityVerdict commensurability(const AssocGraph& g);

/// M(s): entry (i,j) = sum over edges i->j of e^{-s * length}.
[[nodiscard]] Mat graph_matrix(const AssocGraph& g, double s);
/// dM/ds: entry (i,j) = sum over edges i->j of -length * e^{-s * length}.
[[nodiscard]] Mat graph_matrix_derivative(const AssocGraph& g, double s);

/// First `count` distinct cumulative path lengths from `root`, ascending.
/// Paths of equal exact length are merged (numerically: within 1e-9
/// relative).  Length 0 (the empty path) is not included.
[[nodiscard]] std::vector<double> path_length_sequence(const AssocGraph& g, std::size_t root,
                                                       std::size_t count);

}  // namespace tilesplit
