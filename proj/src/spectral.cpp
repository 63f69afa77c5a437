#include "tilesplit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>

#include "tilesplit/util.hpp"

namespace tilesplit {

namespace {

void check_square(const Mat& a) {
    if (a.rows != a.cols || a.rows == 0) throw Error("matrix must be square and non-empty");
}

// Strong connectivity of the support digraph: forward and backward
// reachability from vertex 0.
bool support_strongly_connected(const Mat& a) {
    const long n = a.rows;
    auto reach = [&](bool forward) {
        std::vector<char> vis(n, 0);
        std::deque<long> q{0};
        vis[0] = 1;
        long count = 1;
        while (!q.empty()) {
            long v = q.front();
            q.pop_front();
            for (long w = 0; w < n; ++w) {
                double entry = forward ? a(v, w) : a(w, v);
                if (entry != 0.0 && !vis[w]) {
                    vis[w] = 1;
                    ++count;
                    q.push_back(w);
                }
            }
        }
        return count == n;
    };
    return reach(true) && reach(false);
}

std::vector<double> column_iterate(const Mat& b, const std::vector<double>& v, bool left) {
    const long n = b.rows;
    std::vector<double> r(n, 0.0);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            if (left)
                r[j] += v[i] * b(i, j);
            else
                r[i] += b(i, j) * v[j];
        }
    return r;
}

std::vector<double> power_direction(const Mat& b, bool left) {
    const long n = b.rows;
    std::vector<double> v(n, 1.0 / (double)n);
    for (int iter = 0; iter < 100000; ++iter) {
        std::vector<double> w = column_iterate(b, v, left);
        double norm = std::accumulate(w.begin(), w.end(), 0.0);
        if (norm <= 0.0) throw NoConvergence("power iteration collapsed");
        for (double& x : w) x /= norm;
        double diff = 0.0;
        for (long i = 0; i < n; ++i) diff += std::fabs(w[i] - v[i]);
        v = std::move(w);
        if (diff < 1e-15) break;
    }
    return v;
}

}  // namespace

PerronEigen perron_eigen(const Mat& a) {
    check_square(a);
    const long n = a.rows;
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            if (a(i, j) < 0.0) throw Error("matrix must be nonnegative");

    // A + I is primitive whenever A is irreducible, so plain power iteration
    // converges even for periodic A.
    Mat b = a + Mat::identity(n);
    PerronEigen out;
    out.right = power_direction(b, false);
    out.left = power_direction(b, true);

    std::vector<double> av = column_iterate(a, out.right, false);
    out.value = std::accumulate(av.begin(), av.end(), 0.0);

    const double scale = std::max(1.0, inf_norm(a));
    double residual = 0.0;
    for (long i = 0; i < n; ++i) residual = std::max(residual, std::fabs(av[i] - out.value * out.right[i]));
    std::vector<double> ua = column_iterate(a, out.left, true);
    for (long i = 0; i < n; ++i) residual = std::max(residual, std::fabs(ua[i] - out.value * out.left[i]));
    if (residual > 1e-10 * scale) {
        std::ostringstream msg;
        msg << "power iteration residual " << residual << " exceeds tolerance";
        throw NoConvergence(msg.str());
    }

    double dot = 0.0;
    for (long i = 0; i < n; ++i) dot += out.left[i] * out.right[i];
    if (std::fabs(dot) < 1e-300) throw NoConvergence("degenerate left/right eigenvector pairing");
    for (double& x : out.left) x /= dot;
    return out;
}

Primitivity analyze_primitivity(const Mat& a) {
    check_square(a);
    if (!support_strongly_connected(a))
        throw NotIrreducible("matrix support is not strongly connected");
    const long n = a.rows;

    // BFS levels; the period is the gcd of level discrepancies over edges.
    std::vector<long> level(n, -1);
    std::deque<long> q{0};
    level[0] = 0;
    while (!q.empty()) {
        long v = q.front();
        q.pop_front();
        for (long w = 0; w < n; ++w)
            if (a(v, w) != 0.0 && level[w] < 0) {
                level[w] = level[v] + 1;
                q.push_back(w);
            }
    }
    long g = 0;
    for (long v = 0; v < n; ++v)
        for (long w = 0; w < n; ++w)
            if (a(v, w) != 0.0) g = std::gcd(g, std::labs(level[v] + 1 - level[w]));
    if (g <= 0) throw Error("period computation failed");

    Primitivity out;
    out.period = (unsigned)g;
    out.primitive = (g == 1);
    out.classes.assign(out.period, {});
    for (long v = 0; v < n; ++v) out.classes[(std::size_t)(level[v] % g)].push_back((std::size_t)v);

    Mat ap = mat_pow(a, out.period);
    for (const auto& cls : out.classes) {
        Mat block((long)cls.size(), (long)cls.size());
        for (std::size_t i = 0; i < cls.size(); ++i)
            for (std::size_t j = 0; j < cls.size(); ++j)
                block((long)i, (long)j) = ap((long)cls[i], (long)cls[j]);
        out.blocks.push_back(std::move(block));
    }
    return out;
}

Mat perron_projection(const Mat& a) {
    PerronEigen e = perron_eigen(a);
    const long n = a.rows;
    Mat p(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) p(i, j) = e.right[i] * e.left[j];
    return p;
}

double solve_lambda(const AssocGraph& g) {
    require_irreducible(g);
    auto radius = [&](double s) { return perron_eigen(graph_matrix(g, s)).value; };

    double lo = 0.0;
    if (radius(lo) < 1.0) throw NoConvergence("spectral radius below 1 at s = 0");
    double hi = 1.0;
    int guard = 0;
    while (radius(hi) >= 1.0) {
        hi *= 2.0;
        if (++guard > 60) throw NoConvergence("no upper bracket for the spectral radius");
    }
    while (hi - lo > 1e-12 * std::max(1.0, hi)) {
        double mid = 0.5 * (lo + hi);
        (radius(mid) >= 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

QMatrix q_matrix(const AssocGraph& g) {
    if (g.n > 64) throw Error("adjugate-based Q supports at most 64 types");
    const double d = (double)g.dimension;
    Mat m = graph_matrix(g, d);
    Mat a = Mat::identity((long)g.n) - m;
    Mat adj = adjugate(a);

    const double adj_scale = std::max(1.0, std::pow(std::max(1.0, inf_norm(a)), (double)(g.n ? g.n - 1 : 0)));
    if (inf_norm(adj) <= 1e-12 * adj_scale)
        throw SingularBeyondRankOne(
            "adjugate of I - M(d) vanishes: eigenvalue 1 of M(d) is not simple");

    Mat dm = graph_matrix_derivative(g, d);
    double denom = -trace(adj * dm);
    if (!(std::fabs(denom) > 1e-14 * adj_scale))
        throw SingularBeyondRankOne("normalization trace of the adjugate vanishes");

    QMatrix out;
    out.raw = (1.0 / denom) * adj;
    out.q.assign(g.n, 0.0);
    double maxabs = 0.0;
    for (long i = 0; i < out.raw.rows; ++i)
        for (long j = 0; j < out.raw.cols; ++j) maxabs = std::max(maxabs, std::fabs(out.raw(i, j)));
    double spread = 0.0;
    for (long j = 0; j < out.raw.cols; ++j) {
        double mn = out.raw(0, j), mx = out.raw(0, j), sum = 0.0;
        for (long i = 0; i < out.raw.rows; ++i) {
            mn = std::min(mn, out.raw(i, j));
            mx = std::max(mx, out.raw(i, j));
            sum += out.raw(i, j);
        }
        spread = std::max(spread, mx - mn);
        out.q[(std::size_t)j] = sum / (double)out.raw.rows;
    }
    out.row_spread = maxabs > 0.0 ? spread / maxabs : 0.0;
    if (out.row_spread > 1e-10)
        log(LogLevel::Warn, "Q rows disagree beyond tolerance (relative spread ",
            out.row_spread, "); using column means");
    return out;
}

Mat substitution_matrix(const Scheme& s) {
    Scalar alpha = fixed_scale_alpha(s);  // throws NotFixedScale
    auto counts = incidence_counts(s);
    const long n = (long)s.num_types();
    Mat sub(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) sub(i, j) = (double)counts[(std::size_t)i][(std::size_t)j];

    // Consistency: M(d) = alpha^d D^{-1} S D with D = diag(volumes), and the
    // Perron root mu(S) satisfies mu * alpha^d = 1.
    AssocGraph g = build_graph(s);
    Mat m = graph_matrix(g, (double)s.dimension);
    const double ad = alpha.pow_int((long)s.dimension).to_double();
    Mat conj(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            double vi = s.prototiles[(std::size_t)i].volume.to_double();
            double vj = s.prototiles[(std::size_t)j].volume.to_double();
            conj(i, j) = ad * sub(i, j) * vj / vi;
        }
    if (inf_norm(conj - m) > 1e-12 * std::max(1.0, inf_norm(m)))
        throw Error("count matrix does not reproduce the weighted matrix under conjugation");
    double mu = perron_eigen(sub).value;
    if (std::fabs(mu * ad - 1.0) > 1e-10)
        throw Error("Perron root of the count matrix is inconsistent with the contraction");
    return sub;
}

Mat weighted_substitution_matrix(const Scheme& s) {
    return graph_matrix(build_graph(s), (double)s.dimension);
}

}  // namespace tilesplit
