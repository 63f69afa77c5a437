// Integration gate: eleven end-to-end checks covering conservation,
// spectral invariants, frequency laws, equidistribution, tile-count
// prediction, rationalization and cross-oracle agreement.  Prints one
// [PASS]/[FAIL] line per criterion; the exit status is the failure count.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tilesplit/engine.hpp"
#include "tilesplit/graph.hpp"
#include "tilesplit/rationalize.hpp"
#include "tilesplit/scheme.hpp"
#include "tilesplit/scheme_io.hpp"
#include "tilesplit/spectral.hpp"
#include "tilesplit/stats.hpp"
#include "tilesplit/util.hpp"

using namespace tilesplit;

namespace {

using Fails = std::vector<std::string>;

const std::vector<std::string> kConfigs = {
    "kakutani_third",  "kakutani_golden",     "kakutani_half_quarter",
    "rect_square",     "penrose_robinson",    "tr_rhombus_triangle",
    "nonprimitive_grid", "pinwheel_half",     "rauzy",
};

std::string cfg(const std::string& name) {
    return std::string(TILESPLIT_CONFIG_DIR) + "/" + name + ".json";
}

void expect(Fails& fails, bool ok, const std::string& msg) {
    if (!ok) fails.push_back(msg);
}

double rel(double x, double want) { return std::fabs(x - want) / std::fabs(want); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SimResult run(const Scheme& s, SimMode mode, std::size_t steps, long long max_tiles,
              std::size_t snapshot_every = 0, bool retain = false) {
    EngineOptions o;
    o.mode = mode;
    o.max_steps = steps;
    o.max_tiles = max_tiles;
    o.snapshot_every = snapshot_every;
    o.retain = retain;
    return simulate(s, o);
}

using IMat = std::vector<std::vector<long long>>;

IMat to_int(const Mat& m) {
    IMat r(m.rows, std::vector<long long>(m.cols, 0));
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) r[i][j] = std::llround(m(i, j));
    return r;
}

IMat imul(const IMat& a, const IMat& b) {
    const std::size_t n = a.size();
    IMat c(n, std::vector<long long>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

// ------------------------------------------------------------------
// 1. Volume conservation within every bundled scheme.
// ------------------------------------------------------------------
Fails c1_conservation() {
    Fails fails;
    const auto t0 = std::chrono::steady_clock::now();
    for (const std::string& name : kConfigs) {
        const Scheme s = load_scheme(cfg(name));
        const double d = static_cast<double>(s.dimension);
        std::vector<double> row(s.num_types(), 0.0);
        for (const EdgeInfo& e : compute_betas(s))
            row[e.from] += std::pow(e.beta.to_double(), d);
        for (std::size_t t = 0; t < s.num_types(); ++t)
            expect(fails, std::fabs(row[t] - 1.0) <= 1e-12,
                   name + ": children of type " + std::to_string(t) +
                       " cover a volume fraction of " + std::to_string(row[t]));
    }
    expect(fails, seconds_since(t0) < 1.0, "conservation sweep exceeded one second");
    return fails;
}

// ------------------------------------------------------------------
// 2. Spectral pipeline against closed forms.
// ------------------------------------------------------------------
Fails c2_spectral() {
    Fails fails;
    const double l2 = std::log(2.0), l3 = std::log(3.0);

    {  // rectangle/square: M(2) and the stationary weight matrix.
        const AssocGraph g = build_graph(load_scheme(cfg("rect_square")));
        const Mat m = graph_matrix(g, 2.0);
        const double want_m[2][2] = {{0.25, 0.75}, {4.0 / 9.0, 5.0 / 9.0}};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                expect(fails, std::fabs(m(i, j) - want_m[i][j]) <= 1e-10,
                       "rect_square M(2)[" + std::to_string(i) + "][" + std::to_string(j) +
                           "] = " + std::to_string(m(i, j)));
        const QMatrix qm = q_matrix(g);
        const double denom = 0.75 * l3 - l2 / 9.0;
        const double want_q[2] = {(4.0 / 9.0) / denom, 0.75 / denom};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                expect(fails, std::fabs(qm.raw(i, j) - want_q[j]) <= 1e-10,
                       "rect_square Q[" + std::to_string(i) + "][" + std::to_string(j) +
                           "] = " + std::to_string(qm.raw(i, j)));
    }

    {  // Robinson triangles: counts and growth rate.
        const Mat sm = substitution_matrix(load_scheme(cfg("penrose_robinson")));
        expect(fails,
               sm(0, 0) == 2.0 && sm(0, 1) == 1.0 && sm(1, 0) == 1.0 && sm(1, 1) == 1.0,
               "penrose_robinson substitution counts are not [[2,1],[1,1]]");
        expect(fails, rel(perron_eigen(sm).value, kPhi * kPhi) <= 1e-10,
               "penrose_robinson growth rate is not the squared golden ratio");
    }

    {  // Triangle/rhombus pair: counts, growth rate and its eigenvector.
        const Mat sm = substitution_matrix(load_scheme(cfg("tr_rhombus_triangle")));
        expect(fails,
               sm(0, 0) == 3.0 && sm(0, 1) == 2.0 && sm(1, 0) == 4.0 && sm(1, 1) == 3.0,
               "tr_rhombus_triangle substitution counts are not [[3,2],[4,3]]");
        const PerronEigen pe = perron_eigen(sm);
        const double silver = 1.0 + std::sqrt(2.0);
        expect(fails, rel(pe.value, silver * silver) <= 1e-10,
               "tr_rhombus_triangle growth rate is not the squared silver ratio");
        expect(fails, rel(pe.right[1] / pe.right[0], std::sqrt(2.0)) <= 1e-8,
               "tr_rhombus_triangle right eigenvector is not proportional to (1, sqrt 2)");
    }

    {  // Two-periodic example: cyclic block structure.
        const Primitivity pr =
            analyze_primitivity(substitution_matrix(load_scheme(cfg("nonprimitive_grid"))));
        expect(fails, !pr.primitive && pr.period == 2,
               "nonprimitive_grid is not two-periodic");
        bool saw_9 = false, saw_2x2 = false;
        for (const Mat& b : pr.blocks) {
            if (b.rows == 1 && b.cols == 1 && b(0, 0) == 9.0) saw_9 = true;
            if (b.rows == 2 && b.cols == 2 && b(0, 0) == 3.0 && b(0, 1) == 3.0 &&
                b(1, 0) == 6.0 && b(1, 1) == 6.0)
                saw_2x2 = true;
        }
        expect(fails, saw_9 && saw_2x2,
               "nonprimitive_grid period blocks are not [9] and [[3,3],[6,6]]");
    }
    return fails;
}

// ------------------------------------------------------------------
// 3. The decay exponent balancing the graph equals the dimension.
// ------------------------------------------------------------------
Fails c3_lambda() {
    Fails fails;
    for (const std::string& name : kConfigs) {
        const Scheme s = load_scheme(cfg(name));
        const double lam = solve_lambda(build_graph(s));
        expect(fails, std::fabs(lam - static_cast<double>(s.dimension)) <= 1e-10,
               name + ": balancing exponent " + std::to_string(lam) + " for dimension " +
                   std::to_string(s.dimension));
    }
    return fails;
}

// ------------------------------------------------------------------
// 4. Maximal-volume limit frequencies, rectangle/square, >= 1e6 tiles.
// ------------------------------------------------------------------
Fails c4_rect_frequencies() {
    Fails fails;
    const auto t0 = std::chrono::steady_clock::now();
    const Scheme s = load_scheme(cfg("rect_square"));
    const SimResult res = run(s, SimMode::Kakutani, 0, 1000000, 1);
    expect(fails, res.snapshots.back().census.total >= 1000000,
           "run stopped below one million tiles");

    // Individual states carry a few-percent almost-periodic wander (the two
    // edge lengths are nearly in a 12:19 ratio), so the limit is estimated
    // with the series digest: the mean over the last quarter of the trace.
    const std::size_t sq = s.type_index("S");
    std::vector<double> counts, vols;
    for (const Snapshot& snap : res.snapshots) {
        counts.push_back(snap.census.count_fraction(sq));
        vols.push_back(snap.census.volume_fraction(sq));
    }
    const double l2 = std::log(2.0), l3 = std::log(3.0);
    const double want_count = 25.0 / 43.0;
    const double want_vol = ((5.0 / 12.0) * l3 - l2 / 18.0) / (0.75 * l3 - l2 / 9.0);
    const double got_count = summarize_series(counts).mean;
    const double got_vol = summarize_series(vols).mean;
    expect(fails, rel(got_count, want_count) <= 0.01,
           "square count fraction " + std::to_string(got_count) +
               " is more than 1% from " + std::to_string(want_count));
    expect(fails, rel(got_vol, want_vol) <= 0.01,
           "square volume fraction " + std::to_string(got_vol) +
               " is more than 1% from " + std::to_string(want_vol));
    expect(fails, seconds_since(t0) < 60.0, "frequency run exceeded sixty seconds");
    return fails;
}

// ------------------------------------------------------------------
// 5. Entry-edge frequencies of the one-third interval scheme, >= 1e5.
// ------------------------------------------------------------------
Fails c5_red_black() {
    Fails fails;
    const Scheme s = load_scheme(cfg("kakutani_third"));
    const SimResult res = run(s, SimMode::Kakutani, 0, 100000);
    const Census& c = res.snapshots.back().census;
    expect(fails, c.total >= 100000, "run stopped below 1e5 intervals");

    // Edge 0 creates the shorter (one-third) child of every split.
    const double count_frac =
        static_cast<double>(c.edge_counts[0]) / static_cast<double>(c.total);
    const double vol_frac = c.edge_volumes[0] / c.total_volume();
    const double l3 = std::log(3.0), l32 = std::log(1.5);
    const double want_vol = (l3 / 3.0) / (l3 / 3.0 + 2.0 * l32 / 3.0);
    expect(fails, rel(count_frac, 2.0 / 3.0) <= 0.01,
           "short-child count fraction " + std::to_string(count_frac) +
               " is more than 1% from 2/3");
    expect(fails, rel(vol_frac, want_vol) <= 0.01,
           "short-child volume fraction " + std::to_string(vol_frac) +
               " is more than 1% from " + std::to_string(want_vol));
    return fails;
}

// ------------------------------------------------------------------
// 6. Generation limit frequencies of the Robinson triangles, two oracles.
// ------------------------------------------------------------------
Fails c6_generation_frequencies() {
    Fails fails;
    const Scheme s = load_scheme(cfg("penrose_robinson"));
    const IMat sm = to_int(substitution_matrix(s));
    const std::size_t o = s.type_index("O"), a = s.type_index("A");

    // Matrix power at forty generations.
    IMat p = sm;
    for (int k = 1; k < 40; ++k) p = imul(p, sm);
    const double na = static_cast<double>(p[0][a]), no = static_cast<double>(p[0][o]);
    const double count_frac = no / (na + no);
    const double va = s.prototiles[a].volume.to_double(),
                 vo = s.prototiles[o].volume.to_double();
    const double vol_frac = no * vo / (na * va + no * vo);
    expect(fails, std::fabs(count_frac - 1.0 / (kPhi + 1.0)) <= 1e-6,
           "forty-generation count fraction " + std::to_string(count_frac));
    expect(fails, std::fabs(vol_frac - 1.0 / (kPhi + 2.0)) <= 1e-6,
           "forty-generation volume fraction " + std::to_string(vol_frac));

    // Engine censuses match the matrix powers exactly through twelve.
    const SimResult res = run(s, SimMode::Generation, 12, 0, 1);
    IMat pk = sm;
    std::map<std::size_t, const Census*> by_step;
    for (const Snapshot& snap : res.snapshots) by_step[snap.step] = &snap.census;
    for (std::size_t k = 1; k <= 12; ++k) {
        const auto it = by_step.find(k);
        if (it == by_step.end()) {
            fails.push_back("no census at generation " + std::to_string(k));
            break;
        }
        for (std::size_t t = 0; t < s.num_types(); ++t)
            expect(fails, it->second->type_counts[t] == pk[0][t],
                   "generation " + std::to_string(k) + " count of type " +
                       s.prototiles[t].label + " is " +
                       std::to_string(it->second->type_counts[t]) + ", matrix power says " +
                       std::to_string(pk[0][t]));
        pk = imul(pk, sm);
    }
    return fails;
}

// ------------------------------------------------------------------
// 7. Maximal-volume oscillation of the Robinson triangles.
// ------------------------------------------------------------------
Fails c7_oscillation() {
    Fails fails;
    const Scheme s = load_scheme(cfg("penrose_robinson"));
    const SimResult res = run(s, SimMode::Kakutani, 30, 0, 1);
    const std::size_t o = s.type_index("O"), a = s.type_index("A");

    std::vector<double> o_series, a_series;
    for (const Snapshot& snap : res.snapshots) {
        o_series.push_back(snap.census.count_fraction(o));
        a_series.push_back(snap.census.count_fraction(a));
    }

    // Tail means split by step parity.
    double o_mean[2] = {0, 0}, a_mean[2] = {0, 0};
    int n_par[2] = {0, 0};
    for (std::size_t i = res.snapshots.size() - 12; i < res.snapshots.size(); ++i) {
        const int par = static_cast<int>(res.snapshots[i].step % 2);
        o_mean[par] += o_series[i];
        a_mean[par] += a_series[i];
        ++n_par[par];
    }
    for (int par = 0; par < 2; ++par) {
        o_mean[par] /= n_par[par];
        a_mean[par] /= n_par[par];
    }

    // One parity parks the narrow-triangle count share at 1/(phi+1), the
    // other parks the wide-triangle share at 2/(phi+2).
    const double want_o = 1.0 / (kPhi + 1.0), want_a = 2.0 / (kPhi + 2.0);
    expect(fails,
           std::min(rel(o_mean[0], want_o), rel(o_mean[1], want_o)) <= 0.01,
           "no parity holds the narrow-triangle share near " + std::to_string(want_o));
    expect(fails,
           std::min(rel(a_mean[0], want_a), rel(a_mean[1], want_a)) <= 0.01,
           "no parity holds the wide-triangle share near " + std::to_string(want_a));
    expect(fails, summarize_series(o_series).oscillating,
           "the oscillation classifier did not fire");
    return fails;
}

// ------------------------------------------------------------------
// 8. Marking equidistribution in one and two dimensions.
// ------------------------------------------------------------------
Fails c8_equidistribution() {
    Fails fails;

    const Scheme third = load_scheme(cfg("kakutani_third"));
    std::map<long long, double> star;
    for (long long n : {1000LL, 10000LL, 100000LL}) {
        const SimResult res = run(third, SimMode::Kakutani, 0, n, 0, true);
        std::vector<double> xs;
        for (const auto& p : marking_points(third, res.tiles)) xs.push_back(p[0]);
        star[n] = star_discrepancy_1d(std::move(xs));
    }
    expect(fails, star[10000] < 0.05,
           "interval star discrepancy at 1e4 is " + std::to_string(star[10000]));
    expect(fails, star[100000] < star[1000],
           "interval star discrepancy does not shrink from 1e3 to 1e5 (" +
               std::to_string(star[1000]) + " -> " + std::to_string(star[100000]) + ")");

    const Scheme rect = load_scheme(cfg("rect_square"));
    const auto& domain = rect.prototiles[0].polygon;
    std::map<long long, double> box;
    for (long long n : {1000LL, 10000LL, 100000LL}) {
        const SimResult res = run(rect, SimMode::Kakutani, 0, n, 0, true);
        box[n] = box_discrepancy(marking_points(rect, res.tiles), domain, {});
    }
    // Like the interval case, compared across the full two-decade span:
    // neighbouring decades share the same phase wander as the frequencies.
    expect(fails, box[100000] < box[1000],
           "box discrepancy does not shrink from 1e3 to 1e5 tiles (" +
               std::to_string(box[1000]) + " -> " + std::to_string(box[100000]) + ")");
    return fails;
}

// ------------------------------------------------------------------
// 9. Absolute tile-count prediction, rectangle/square, >= 1e5 tiles.
// ------------------------------------------------------------------
Fails c9_predicted_counts() {
    Fails fails;
    const Scheme s = load_scheme(cfg("rect_square"));
    const SimResult res = run(s, SimMode::Kakutani, 0, 100000);
    const Census& c = res.snapshots.back().census;
    expect(fails, c.total >= 100000, "run stopped below 1e5 tiles");

    const std::vector<double> want =
        predicted_tile_counts(build_graph(s), res.snapshots.back().threshold);
    for (std::size_t t = 0; t < s.num_types(); ++t)
        expect(fails, rel(static_cast<double>(c.type_counts[t]), want[t]) <= 0.05,
               "type " + s.prototiles[t].label + " count " +
                   std::to_string(c.type_counts[t]) + " vs predicted " +
                   std::to_string(want[t]));
    return fails;
}

// ------------------------------------------------------------------
// 10. Rationalization round trips.
// ------------------------------------------------------------------
Fails c10_rationalization() {
    Fails fails;

    {  // Triangle/rhombus pair: six prototiles at the square root of the
       // original contraction, and the subsequence property holds.
        const Scheme s = load_scheme(cfg("tr_rhombus_triangle"));
        const RationalizationResult r = rationalize(s, true);
        expect(fails, r.fixed_scheme.num_types() == 6,
               "expected 6 prototiles, got " + std::to_string(r.fixed_scheme.num_types()));
        expect(fails, is_fixed_scale(r.fixed_scheme),
               "rationalized scheme is not fixed-scale");
        const double want = std::sqrt(std::sqrt(2.0) - 1.0);
        expect(fails, rel(r.contraction.to_double(), want) <= 1e-9,
               "contraction " + std::to_string(r.contraction.to_double()) +
                   " is not sqrt(sqrt(2)-1)");
        expect(fails, verify_subsequence(s, r, 10),
               "subsequence verification failed through state 10");
    }

    {  // Golden-ratio intervals.
        const Scheme s = load_scheme(cfg("kakutani_golden"));
        const RationalizationResult r = rationalize(s, true);
        expect(fails, verify_subsequence(s, r, 15),
               "golden subsequence verification failed through state 15");
    }

    {  // One-third intervals: the length lattice has rank two.
        bool rejected = false;
        try {
            (void)rationalize(load_scheme(cfg("kakutani_third")), true);
        } catch (const IncommensurableInput&) {
            rejected = true;
        }
        expect(fails, rejected, "one-third scheme was not rejected");
    }
    return fails;
}

// ------------------------------------------------------------------
// 11. Cross-oracle agreement on small instances.
// ------------------------------------------------------------------

/// Lengths of every closed walk of up to eight edges.
std::vector<double> closed_walk_lengths(const AssocGraph& g) {
    std::vector<double> lengths;
    std::function<void(std::size_t, std::size_t, double, int)> dfs =
        [&](std::size_t start, std::size_t v, double acc, int depth) {
            if (depth == 8) return;
            for (const std::size_t ei : g.out[v]) {
                const EdgeInfo& e = g.edges[ei];
                const double len = acc + e.length;
                if (e.to == start) lengths.push_back(len);
                dfs(start, e.to, len, depth + 1);
            }
        };
    for (std::size_t v = 0; v < g.n; ++v) dfs(v, v, 0.0, 0);
    return lengths;
}

/// Approximate-gcd verdict over a set of walk lengths: returns the common
/// unit, or 0 when the lengths generate a lattice of rank above one.
double walk_unit(const std::vector<double>& lengths) {
    double gcd = 0.0;
    for (double l : lengths) {
        double a = std::max(gcd, l), b = std::min(gcd, l);
        while (b > 1e-9) {
            const double r = std::fmod(a, b);
            a = b;
            b = (r > b - 1e-9) ? 0.0 : r;  // treat near-multiples as exact
        }
        gcd = a;
        if (gcd < 1e-3) return 0.0;
    }
    for (double l : lengths)
        if (std::fabs(l - std::llround(l / gcd) * gcd) > 1e-6) return 0.0;
    return gcd;
}

Fails c11_oracles() {
    Fails fails;
    for (const std::string& name : kConfigs) {
        const Scheme s = load_scheme(cfg(name));
        const AssocGraph g = build_graph(s);
        if (g.n > 4) continue;

        const CommensurabilityVerdict v = commensurability(g);
        const bool verdict_comm =
            v.kind == CommensurabilityVerdict::Kind::Commensurable ||
            (v.kind == CommensurabilityVerdict::Kind::NumericHeuristic &&
             v.likely_commensurable);
        const double unit = walk_unit(closed_walk_lengths(g));
        expect(fails, (unit > 0.0) == verdict_comm,
               name + ": closed-walk enumeration says " +
                   (unit > 0.0 ? "commensurable" : "incommensurable") +
                   ", the cycle-basis verdict disagrees");
        if (unit > 0.0 && verdict_comm)
            expect(fails, rel(unit, v.unit_length) <= 1e-6,
                   name + ": walk unit " + std::to_string(unit) + " vs verdict unit " +
                       std::to_string(v.unit_length));
    }

    // Generation censuses of every uniform-contraction scheme match the
    // integer matrix powers through twelve generations.
    for (const std::string& name : kConfigs) {
        const Scheme s = load_scheme(cfg(name));
        if (!is_fixed_scale(s)) continue;
        const IMat sm = to_int(substitution_matrix(s));
        const SimResult res = run(s, SimMode::Generation, 12, 0, 1);
        std::map<std::size_t, const Census*> by_step;
        for (const Snapshot& snap : res.snapshots) by_step[snap.step] = &snap.census;
        IMat pk = sm;
        for (std::size_t k = 1; k <= 12; ++k) {
            const auto it = by_step.find(k);
            if (it == by_step.end()) {
                fails.push_back(name + ": no census at generation " + std::to_string(k));
                break;
            }
            for (std::size_t t = 0; t < s.num_types(); ++t)
                expect(fails, it->second->type_counts[t] == pk[0][t],
                       name + ": generation " + std::to_string(k) + " count of " +
                           s.prototiles[t].label + " is " +
                           std::to_string(it->second->type_counts[t]) +
                           ", matrix power says " + std::to_string(pk[0][t]));
            pk = imul(pk, sm);
        }
    }
    return fails;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Fails()> check;
    };
    const std::vector<Criterion> criteria = {
        {"volume conservation across every bundled scheme", c1_conservation},
        {"spectral invariants match their closed forms", c2_spectral},
        {"graph balancing exponent equals the dimension", c3_lambda},
        {"maximal-volume limit frequencies (rect_square, 1e6 tiles)", c4_rect_frequencies},
        {"entry-edge frequencies (kakutani_third, 1e5 intervals)", c5_red_black},
        {"generation limit frequencies, two oracles (penrose_robinson)",
         c6_generation_frequencies},
        {"maximal-volume oscillation (penrose_robinson)", c7_oscillation},
        {"marking equidistribution in one and two dimensions", c8_equidistribution},
        {"absolute tile-count prediction (rect_square, 1e5 tiles)", c9_predicted_counts},
        {"rationalization round trips", c10_rationalization},
        {"cross-oracle agreement (closed walks, matrix powers)", c11_oracles},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Fails fails;
        try {
            fails = criteria[i].check();
        } catch (const std::exception& e) {
            fails.push_back(std::string("unexpected error: ") + e.what());
        }
        if (fails.empty()) {
            std::printf("[PASS] %zu. %s\n", i + 1, criteria[i].name);
        } else {
            ++failures;
            std::string detail;
            for (const std::string& f : fails) detail += (detail.empty() ? "" : "; ") + f;
            std::printf("[FAIL] %zu. %s: %s\n", i + 1, criteria[i].name, detail.c_str());
        }
    }
    return failures;
}
