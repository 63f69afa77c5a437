#pragma once

#include <cstdint>
#include <vector>

#include "tilesplit/graph.hpp"
#include "tilesplit/matrix.hpp"
#include "tilesplit/scheme.hpp"

namespace tilesplit {

/// Perron data of a nonnegative matrix with strongly connected support:
/// spectral radius, positive right eigenvector with ||v||_1 = 1, and left
/// eigenvector scaled so that u . v = 1.
struct PerronEigen {
    double value = 0.0;
    std::vector<double> right;
    std::vector<double> left;
};

/// Power iteration on A + I (convergent for any irreducible nonnegative A,
/// periodic or not).  Throws NoConvergence when the residual does not reach
/// 1e-10 * max(1, ||A||_inf) within 1e5 rounds.
[[nodiscard]] PerronEigen perron_eigen(const Mat& a);

/// Cyclic structure of a nonnegative matrix with strongly connected support.
struct Primitivity {
    bool primitive = true;
    unsigned period = 1;
    /// period entries; classes[r] lists the vertices of cyclic class r
    /// (ascending), class 0 containing vertex 0.
    std::vector<std::vector<std::size_t>> classes;
    /// Diagonal block of A^period on each class, in class order.
    std::vector<Mat> blocks;
};

/// Period = gcd of all closed-walk lengths in the support digraph; the
/// classes and the diagonal blocks of A^period.  Throws NotIrreducible when
/// the support is not strongly connected.
[[nodiscard]] Primitivity analyze_primitivity(const Mat& a);

/// Spectral projection v u^T onto the Perron eigenspace; for primitive A,
/// (A / value)^k converges to it.
[[nodiscard]] Mat perron_projection(const Mat& a);

/// The unique s with spectral radius of M(s) equal to 1, by bisection to
/// 1e-12.  Equals the dimension whenever the scheme conserves volume.
[[nodiscard]] double solve_lambda(const AssocGraph& g);

/// adj(I - M(d)) normalized by -tr(adj(I - M(d)) * M'(d)).  For an
/// irreducible volume-conserving scheme the rows agree and give the
/// stationary frequency weights q.
struct QMatrix {
    Mat raw{0, 0};              // the normalized adjugate itself
    std::vector<double> q;      // column means of raw
    double row_spread = 0.0;    // worst column max-min across rows, relative
};

/// Throws SingularBeyondRankOne when adj(I - M(d)) vanishes (the eigenvalue
/// 1 of M(d) is not simple).
[[nodiscard]] QMatrix q_matrix(const AssocGraph& g);

/// Count substitution matrix S_ij of a fixed-scale scheme (children of type
/// j under parent i, first rule).  Verifies the conjugation identity
/// M(d) = alpha^d * D^-1 S D (D = diag of volumes) to 1e-12 and
/// mu(S) * alpha^d = 1 to 1e-10.  Throws NotFixedScale otherwise.
[[nodiscard]] Mat substitution_matrix(const Scheme& s);

/// Volume-weighted substitution matrix: entry (i,j) = sum over edges i->j of
/// beta^d.  Identical to graph_matrix(build_graph(s), d).
[[nodiscard]] Mat weighted_substitution_matrix(const Scheme& s);

}  // namespace tilesplit
