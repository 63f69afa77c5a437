#include "tilesplit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "tilesplit/spectral.hpp"
#include "tilesplit/util.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tilesplit {

namespace {

double star_term(const std::vector<double>& x, std::size_t i) {
    const double n = static_cast<double>(x.size());
    const double up = (static_cast<double>(i) + 1.0) / n - x[i];
    const double down = x[i] - static_cast<double>(i) / n;
    return std::max(up, down);
}

#ifdef _OPENMP
int resolve_threads(int jobs) { return jobs > 0 ? jobs : omp_get_max_threads(); }
#endif

// Precomputed state shared by the serial and parallel box kernels.
struct BoxSetup {
    std::size_t dim = 0;
    std::vector<double> lo, hi;       // domain bounding box
    bool rect = false;                // domain is exactly its bounding box
    double bbox_vol = 1.0;
    std::vector<double> blo, bhi;     // sampled boxes, flattened boxes x dim
    std::vector<double> samples;      // volume samples, flattened (non-rect)
    std::vector<unsigned char> in_domain;
    long long in_domain_total = 0;
};

bool point_in_polygon(const std::vector<std::vector<double>>& poly, double x, double y) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const double xi = poly[i][0], yi = poly[i][1];
        const double xj = poly[j][0], yj = poly[j][1];
        if ((yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi)
            inside = !inside;
    }
    return inside;
}

bool is_axis_rectangle(const std::vector<std::vector<double>>& poly, std::size_t dim) {
    if (dim == 1) return poly.size() == 2;
    if (dim != 2 || poly.size() != 4) return false;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % 4];
        const bool dx = std::fabs(a[0] - b[0]) > 1e-12;
        const bool dy = std::fabs(a[1] - b[1]) > 1e-12;
        if (dx == dy) return false;  // diagonal or degenerate edge
    }
    return true;
}

BoxSetup prepare_boxes(const std::vector<std::vector<double>>& points,
                       const std::vector<std::vector<double>>& domain,
                       const BoxDiscrepancyOptions& opt) {
    if (points.empty()) throw Error("box discrepancy of an empty point set");
    if (domain.size() < 2) throw Error("box discrepancy needs a domain outline");
    BoxSetup st;
    st.dim = domain.front().size();
    if (st.dim == 0) throw Error("box discrepancy domain has no coordinates");
    for (const auto& p : points)
        if (p.size() != st.dim) throw Error("point dimension does not match the domain");
    st.lo.assign(st.dim, 0.0);
    st.hi.assign(st.dim, 0.0);
    for (std::size_t a = 0; a < st.dim; ++a) {
        st.lo[a] = st.hi[a] = domain.front()[a];
        for (const auto& v : domain) {
            st.lo[a] = std::min(st.lo[a], v[a]);
            st.hi[a] = std::max(st.hi[a], v[a]);
        }
        if (!(st.hi[a] > st.lo[a])) throw Error("degenerate domain bounding box");
        st.bbox_vol *= st.hi[a] - st.lo[a];
    }
    st.rect = is_axis_rectangle(domain, st.dim);

    st.blo.resize(opt.boxes * st.dim);
    st.bhi.resize(opt.boxes * st.dim);
    for (std::size_t b = 0; b < opt.boxes; ++b)
        for (std::size_t a = 0; a < st.dim; ++a) {
            const std::uint64_t base = 2 * (b * st.dim + a);
            const double span = st.hi[a] - st.lo[a];
            const double u = st.lo[a] + span * hash_mix_double(opt.seed, base);
            const double v = st.lo[a] + span * hash_mix_double(opt.seed, base + 1);
            st.blo[b * st.dim + a] = std::min(u, v);
            st.bhi[b * st.dim + a] = std::max(u, v);
        }

    if (!st.rect) {
        if (st.dim != 2)
            throw Error("volume sampling needs a 2-D polygon domain");
        if (opt.mc_samples == 0) throw Error("volume sampling needs samples");
        st.samples.resize(opt.mc_samples * 2);
        st.in_domain.resize(opt.mc_samples);
        const std::uint64_t salt = opt.seed ^ 0xa2c1e0377b5f19d3ull;
        for (std::size_t j = 0; j < opt.mc_samples; ++j) {
            const double x = st.lo[0] + (st.hi[0] - st.lo[0]) * hash_mix_double(salt, 2 * j);
            const double y = st.lo[1] + (st.hi[1] - st.lo[1]) * hash_mix_double(salt, 2 * j + 1);
            st.samples[2 * j] = x;
            st.samples[2 * j + 1] = y;
            st.in_domain[j] = point_in_polygon(domain, x, y) ? 1 : 0;
            st.in_domain_total += st.in_domain[j];
        }
        if (st.in_domain_total == 0)
            throw Error("no volume sample fell inside the domain outline");
    }
    return st;
}

double box_value(const BoxSetup& st, const std::vector<std::vector<double>>& points,
                 std::size_t b) {
    const double* lo = &st.blo[b * st.dim];
    const double* hi = &st.bhi[b * st.dim];
    long long hits = 0;
    for (const auto& p : points) {
        bool in = true;
        for (std::size_t a = 0; a < st.dim && in; ++a)
            in = p[a] >= lo[a] && p[a] < hi[a];
        hits += in ? 1 : 0;
    }
    const double frac = static_cast<double>(hits) / static_cast<double>(points.size());

    double ref;
    if (st.rect) {
        double vol = 1.0;
        for (std::size_t a = 0; a < st.dim; ++a) vol *= hi[a] - lo[a];
        ref = vol / st.bbox_vol;
    } else {
        long long inside = 0;
        for (std::size_t j = 0; j < st.in_domain.size(); ++j) {
            if (!st.in_domain[j]) continue;
            const double x = st.samples[2 * j];
            const double y = st.samples[2 * j + 1];
            if (x >= lo[0] && x < hi[0] && y >= lo[1] && y < hi[1]) ++inside;
        }
        ref = static_cast<double>(inside) / static_cast<double>(st.in_domain_total);
    }
    return std::fabs(frac - ref);
}

std::vector<double> normalized(std::vector<double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    if (s <= 0.0) throw Error("cannot normalize a non-positive vector");
    for (double& x : v) x /= s;
    return v;
}

}  // namespace

double star_discrepancy_1d_serial(std::vector<double> points) {
    if (points.empty()) throw Error("star discrepancy of an empty point set");
    std::sort(points.begin(), points.end());
    double best = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        best = std::max(best, star_term(points, i));
    return best;
}

double star_discrepancy_1d(std::vector<double> points, int jobs) {
    if (points.empty()) throw Error("star discrepancy of an empty point set");
    std::sort(points.begin(), points.end());
    double best = 0.0;
#ifdef _OPENMP
    const long long n = static_cast<long long>(points.size());
#pragma omp parallel for reduction(max : best) num_threads(resolve_threads(jobs)) \
    schedule(static)
    for (long long i = 0; i < n; ++i)
        best = std::max(best, star_term(points, static_cast<std::size_t>(i)));
#else
    (void)jobs;
    for (std::size_t i = 0; i < points.size(); ++i)
        best = std::max(best, star_term(points, i));
#endif
    return best;
}

double box_discrepancy_serial(const std::vector<std::vector<double>>& points,
                              const std::vector<std::vector<double>>& domain,
                              const BoxDiscrepancyOptions& opt) {
    const BoxSetup st = prepare_boxes(points, domain, opt);
    double best = 0.0;
    for (std::size_t b = 0; b < opt.boxes; ++b)
        best = std::max(best, box_value(st, points, b));
    return best;
}

double box_discrepancy(const std::vector<std::vector<double>>& points,
                       const std::vector<std::vector<double>>& domain,
                       const BoxDiscrepancyOptions& opt) {
    const BoxSetup st = prepare_boxes(points, domain, opt);
    double best = 0.0;
#ifdef _OPENMP
    const long long nb = static_cast<long long>(opt.boxes);
#pragma omp parallel for reduction(max : best) num_threads(resolve_threads(opt.jobs)) \
    schedule(static)
    for (long long b = 0; b < nb; ++b)
        best = std::max(best, box_value(st, points, static_cast<std::size_t>(b)));
#else
    for (std::size_t b = 0; b < opt.boxes; ++b)
        best = std::max(best, box_value(st, points, b));
#endif
    return best;
}

Frequencies kakutani_limit_frequencies(const AssocGraph& g) {
    const QMatrix qm = q_matrix(g);
    const double d = static_cast<double>(g.dimension);
    Frequencies f;
    f.count_fraction.assign(g.n, 0.0);
    f.volume_fraction.assign(g.n, 0.0);
    f.edge_count_fraction.assign(g.edges.size(), 0.0);
    f.edge_volume_fraction.assign(g.edges.size(), 0.0);
    double cden = 0.0, vden = 0.0;
    for (const auto& e : g.edges) {
        const double bd = std::exp(-d * e.length);
        cden += qm.q[e.from] * (1.0 - bd);
        vden += qm.q[e.from] * bd * e.length;
    }
    if (cden <= 0.0 || vden <= 0.0) throw Error("degenerate frequency normalization");
    for (const auto& e : g.edges) {
        const double bd = std::exp(-d * e.length);
        const double ce = qm.q[e.from] * (1.0 - bd) / cden;
        const double ve = qm.q[e.from] * bd * e.length / vden;
        f.edge_count_fraction[e.id] = ce;
        f.edge_volume_fraction[e.id] = ve;
        f.count_fraction[e.to] += ce;
        f.volume_fraction[e.to] += ve;
    }
    return f;
}

Frequencies generation_limit_frequencies(const Scheme& s) {
    const Mat cnt = substitution_matrix(s);
    const PerronEigen pc = perron_eigen(cnt);
    const Mat wm = weighted_substitution_matrix(s);
    const PerronEigen pw = perron_eigen(wm);
    const std::vector<double> u = normalized(pc.left);
    const std::vector<double> w = normalized(pw.left);
    const double d = static_cast<double>(s.dimension);

    Frequencies f;
    f.count_fraction = u;
    f.volume_fraction = w;
    f.edge_count_fraction.assign(s.edges.size(), 0.0);
    f.edge_volume_fraction.assign(s.edges.size(), 0.0);
    for (const auto& e : s.edges) {
        f.edge_count_fraction[e.id] = u[e.from] / pc.value;
        f.edge_volume_fraction[e.id] = w[e.from] * std::exp(-d * e.length);
    }
    f.edge_count_fraction = normalized(std::move(f.edge_count_fraction));
    f.edge_volume_fraction = normalized(std::move(f.edge_volume_fraction));
    return f;
}

std::vector<double> predicted_tile_counts(const AssocGraph& g, double threshold) {
    const QMatrix qm = q_matrix(g);
    const double d = static_cast<double>(g.dimension);
    std::vector<double> out(g.n, 0.0);
    const double scale = std::exp(d * threshold) / d;
    for (const auto& e : g.edges)
        out[e.to] += qm.q[e.from] * (1.0 - std::exp(-d * e.length)) * scale;
    return out;
}

SeriesSummary summarize_series(const std::vector<double>& xs) {
    if (xs.empty()) throw Error("cannot summarize an empty series");
    const std::size_t quarter = std::max<std::size_t>(1, xs.size() / 4);
    const std::size_t start = xs.size() - quarter;

    SeriesSummary s;
    double sum = 0.0;
    for (std::size_t i = start; i < xs.size(); ++i) sum += xs[i];
    s.mean = sum / static_cast<double>(quarter);
    for (std::size_t i = start; i < xs.size(); ++i)
        s.spread = std::max(s.spread, std::fabs(xs[i] - s.mean));

    double osum = 0.0, esum = 0.0;
    std::size_t on = 0, en = 0;
    for (std::size_t i = start; i < xs.size(); ++i) {
        if (i % 2) {
            osum += xs[i];
            ++on;
        } else {
            esum += xs[i];
            ++en;
        }
    }
    s.odd_mean = on ? osum / static_cast<double>(on) : s.mean;
    s.even_mean = en ? esum / static_cast<double>(en) : s.mean;
    if (on >= 2 && en >= 2) {
        double within = 1e-12 * std::max(1.0, std::fabs(s.mean));
        for (std::size_t i = start; i < xs.size(); ++i) {
            const double m = i % 2 ? s.odd_mean : s.even_mean;
            within = std::max(within, std::fabs(xs[i] - m));
        }
        s.oscillating = std::fabs(s.odd_mean - s.even_mean) > 5.0 * within;
    }
    return s;
}

}  // namespace tilesplit
