// Command-line front end: validate | analyze | simulate | stats | render |
// rationalize.  Exit codes: 0 success, 1 domain error, 2 usage or parse
// error.  Every report embeds the config hash and the seed in effect.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "tilesplit/engine.hpp"
#include "tilesplit/graph.hpp"
#include "tilesplit/rationalize.hpp"
#include "tilesplit/render.hpp"
#include "tilesplit/scheme.hpp"
#include "tilesplit/scheme_io.hpp"
#include "tilesplit/spectral.hpp"
#include "tilesplit/stats.hpp"
#include "tilesplit/util.hpp"

using nlohmann::json;
using namespace tilesplit;

namespace {

// ------------------------------------------------------------------
// Small shared helpers
// ------------------------------------------------------------------

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json scalar_json(const Scalar& s) {
    if (s.is_exact()) return json{{"exact", s.str()}, {"value", s.to_double()}};
    return json(s.to_double());
}

json mat_json(const Mat& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw Error("failed writing '" + path + "'");
}

void write_matrix_csv(const std::string& path, const Mat& m) {
    std::ostringstream out;
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) out << (j ? "," : "") << g17(m(i, j));
        out << "\n";
    }
    write_file(path, out.str());
}

struct LoadedScheme {
    Scheme scheme;
    std::string hash;
};

LoadedScheme load_with_hash(const std::string& path) {
    const std::string text = read_file(path);
    return {parse_scheme(text), config_hash(text)};
}

SimMode parse_mode(const std::string& mode) {
    if (mode == "kakutani") return SimMode::Kakutani;
    if (mode == "generation") return SimMode::Generation;
    throw Error("unknown mode '" + mode + "' (expected kakutani or generation)");
}

json census_json(const Scheme& s, const Census& c) {
    json counts = json::object(), volumes = json::object(), cfrac = json::object(),
         vfrac = json::object();
    for (std::size_t t = 0; t < s.num_types(); ++t) {
        const std::string& l = s.prototiles[t].label;
        counts[l] = c.type_counts[t];
        volumes[l] = c.type_volumes[t];
        cfrac[l] = c.count_fraction(t);
        vfrac[l] = c.volume_fraction(t);
    }
    json j{{"total", c.total},
           {"type_counts", counts},
           {"type_volumes", volumes},
           {"count_fractions", cfrac},
           {"volume_fractions", vfrac}};
    if (!c.edge_counts.empty() && c.total > 0) {
        const double tv = c.total_volume();
        json ecf = json::array(), evf = json::array();
        for (std::size_t e = 0; e < c.edge_counts.size(); ++e) {
            ecf.push_back(static_cast<double>(c.edge_counts[e]) /
                          static_cast<double>(c.total));
            evf.push_back(tv > 0 ? c.edge_volumes[e] / tv : 0.0);
        }
        j["edge_count_fractions"] = ecf;
        j["edge_volume_fractions"] = evf;
    }
    return j;
}

std::string trace_csv(const Scheme& s, const SimResult& res) {
    std::ostringstream out;
    out << "step,threshold,total";
    for (const auto& p : s.prototiles) out << ",count_" << p.label;
    for (const auto& p : s.prototiles) out << ",volume_" << p.label;
    for (const auto& p : s.prototiles) out << ",count_fraction_" << p.label;
    for (const auto& p : s.prototiles) out << ",volume_fraction_" << p.label;
    out << "\n";
    for (const Snapshot& snap : res.snapshots) {
        out << snap.step << "," << g17(snap.threshold) << "," << snap.census.total;
        for (std::size_t t = 0; t < s.num_types(); ++t)
            out << "," << snap.census.type_counts[t];
        for (std::size_t t = 0; t < s.num_types(); ++t)
            out << "," << g17(snap.census.type_volumes[t]);
        for (std::size_t t = 0; t < s.num_types(); ++t)
            out << "," << g17(snap.census.count_fraction(t));
        for (std::size_t t = 0; t < s.num_types(); ++t)
            out << "," << g17(snap.census.volume_fraction(t));
        out << "\n";
    }
    return out.str();
}

std::string tile_dump_csv(const Scheme& s, const std::vector<RetainedTile>& tiles) {
    const unsigned d = s.dimension;
    std::ostringstream out;
    out << "type,label,level,volume,last_edge";
    out << ",scale";
    for (unsigned i = 0; i < d; ++i)
        for (unsigned j = 0; j < d; ++j) out << ",r" << i << j;
    for (unsigned i = 0; i < d; ++i) out << ",t" << i;
    out << "\n";
    for (const RetainedTile& t : tiles) {
        out << t.tile.type << "," << s.prototiles[t.tile.type].label << "," << g17(t.level)
            << "," << g17(std::exp(-static_cast<double>(d) * t.level)) << ","
            << (t.entry == 0 ? -1 : static_cast<long long>(t.entry) - 1);
        out << "," << g17(t.tile.placement.scale.to_double());
        const auto& rot = t.tile.placement.rotation;
        for (unsigned i = 0; i < d; ++i)
            for (unsigned j = 0; j < d; ++j)
                out << "," << g17(rot.empty() ? (i == j ? 1.0 : 0.0) : rot[i * d + j]);
        const auto& tr = t.tile.placement.translation;
        for (unsigned i = 0; i < d; ++i) out << "," << g17(tr.empty() ? 0.0 : tr[i]);
        out << "\n";
    }
    return out.str();
}

/// Markings mapped into the unit frame of the root prototile (1-D: [0,1];
/// 2-D: points plus the root outline as the reference domain).
struct MarkingSet {
    std::vector<std::vector<double>> points;
    std::vector<std::vector<double>> domain;  // 2-D only
};

MarkingSet collect_markings(const Scheme& s, const std::vector<RetainedTile>& tiles,
                            std::size_t root_type) {
    MarkingSet m;
    m.points = marking_points(s, tiles);
    if (s.dimension == 1) {
        const auto outline = s.prototiles[root_type].polygon;
        double lo = 0.0, hi = s.prototiles[root_type].volume.to_double();
        if (!outline.empty()) {
            lo = hi = outline[0][0];
            for (const auto& v : outline) {
                lo = std::min(lo, v[0]);
                hi = std::max(hi, v[0]);
            }
        }
        const double span = hi - lo;
        for (auto& p : m.points) p[0] = (p[0] - lo) / span;
    } else {
        m.domain = s.prototiles[root_type].polygon;
        if (m.domain.empty())
            throw Error("discrepancy needs an outline on the root prototile");
    }
    return m;
}

double marking_discrepancy(const Scheme& s, const MarkingSet& m, int jobs) {
    if (s.dimension == 1) {
        std::vector<double> xs;
        xs.reserve(m.points.size());
        for (const auto& p : m.points) xs.push_back(p[0]);
        return star_discrepancy_1d(std::move(xs), jobs);
    }
    BoxDiscrepancyOptions opt;
    opt.jobs = jobs;
    return box_discrepancy(m.points, m.domain, opt);
}

// ------------------------------------------------------------------
// Subcommand argument bundles
// ------------------------------------------------------------------

struct SimArgs {
    std::string scheme_path;
    std::string mode = "kakutani";
    std::size_t steps = 0;
    long long max_tiles = 0;
    double min_volume = 0.0;
    std::size_t snapshot_every = 0;
    std::optional<std::uint64_t> seed;
    int jobs = 1;

    EngineOptions options() const {
        EngineOptions o;
        o.mode = parse_mode(mode);
        o.max_steps = steps;
        o.max_tiles = max_tiles;
        o.min_tile_volume = min_volume;
        o.snapshot_every = snapshot_every;
        return o;
    }
};

void add_sim_flags(CLI::App* cmd, SimArgs& a, bool with_jobs) {
    cmd->add_option("--scheme", a.scheme_path, "scheme config file")->required();
    cmd->add_option("--mode", a.mode, "kakutani (maximal volume) or generation")
        ->check(CLI::IsMember({"kakutani", "generation"}));
    cmd->add_option("--steps", a.steps, "stop after this many steps");
    cmd->add_option("--max-tiles", a.max_tiles, "stop once the partition has this many tiles");
    cmd->add_option("--min-volume", a.min_volume, "stop once every tile is smaller");
    cmd->add_option("--snapshot-every", a.snapshot_every, "census cadence (0 = final only)");
    cmd->add_option("--seed", a.seed, "override the rule-policy seed");
    if (with_jobs) cmd->add_option("--jobs", a.jobs, "parallel batch width");
}

Scheme seeded(const LoadedScheme& ls, const SimArgs& a) {
    Scheme s = ls.scheme;
    if (a.seed) s.policy.seed = *a.seed;
    return s;
}

// ------------------------------------------------------------------
// validate
// ------------------------------------------------------------------

int cmd_validate(const std::string& path, bool relaxed) {
    const std::string text = read_file(path);  // ParseError -> exit 2
    json report;
    report["command"] = "validate";
    report["config"] = path;
    report["config_hash"] = config_hash(text);
    try {
        const Scheme s = parse_scheme(text);
        validate_scheme(s, /*allow_unit_beta=*/relaxed);
        report["ok"] = true;
        report["dimension"] = s.dimension;
        report["types"] = s.num_types();
        report["edges"] = s.edges.size();
        report["fixed_scale"] = is_fixed_scale(s);
        std::printf("%s\n", report.dump(2).c_str());
        return 0;
    } catch (const InvalidScheme& e) {
        report["ok"] = false;
        report["error"] = e.what();
        std::printf("%s\n", report.dump(2).c_str());
        return 1;
    }
}

// ------------------------------------------------------------------
// analyze
// ------------------------------------------------------------------

json graph_json(const AssocGraph& g) {
    json edges = json::array();
    for (const EdgeInfo& e : g.edges)
        edges.push_back(json{{"id", e.id},
                             {"from", g.labels[e.from]},
                             {"to", g.labels[e.to]},
                             {"beta", e.beta.to_double()},
                             {"beta_pow_d", std::pow(e.beta.to_double(), g.dimension)},
                             {"length", e.length}});
    return json{{"vertices", g.labels},
                {"edges", edges},
                {"exact_lengths", g.exact.available}};
}

json verdict_json(const CommensurabilityVerdict& v) {
    json out;
    switch (v.kind) {
        case CommensurabilityVerdict::Kind::Commensurable:
            out["kind"] = "commensurable";
            break;
        case CommensurabilityVerdict::Kind::Incommensurable:
            out["kind"] = "incommensurable";
            break;
        case CommensurabilityVerdict::Kind::NumericHeuristic:
            out["kind"] = "numeric_heuristic";
            break;
    }
    if (v.kind == CommensurabilityVerdict::Kind::Incommensurable) {
        out["witness_lengths"] = {v.witness_a.length, v.witness_b.length};
    } else {
        out["unit_length"] = v.unit_length;
        out["unit_scale"] = scalar_json(v.unit_scale);
        out["residue_classes"] = v.a;
    }
    if (v.kind == CommensurabilityVerdict::Kind::NumericHeuristic) {
        out["likely_commensurable"] = v.likely_commensurable;
        out["note"] = v.note;
    }
    return out;
}

std::string graph_dot(const AssocGraph& g) {
    std::ostringstream out;
    out << "digraph scheme {\n  rankdir=LR;\n";
    for (std::size_t v = 0; v < g.n; ++v)
        out << "  v" << v << " [label=\"" << g.labels[v] << "\"];\n";
    for (const EdgeInfo& e : g.edges) {
        char label[64];
        std::snprintf(label, sizeof label, "len=%.6g, beta^d=%.6g", e.length,
                      std::pow(e.beta.to_double(), g.dimension));
        out << "  v" << e.from << " -> v" << e.to << " [label=\"" << label << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

int cmd_analyze(const std::string& path, const std::string& dot_path,
                const std::string& matrix_base) {
    const LoadedScheme ls = load_with_hash(path);
    const Scheme& s = ls.scheme;
    validate_scheme(s, /*allow_unit_beta=*/true);

    const AssocGraph g = build_graph(s);
    if (!is_strongly_connected(g))
        throw NotIrreducible(
            "the association graph is not strongly connected; frequencies of reducible "
            "schemes need not equidistribute, so analysis stops here");

    json report;
    report["command"] = "analyze";
    report["config"] = path;
    report["config_hash"] = ls.hash;
    report["dimension"] = s.dimension;
    report["graph"] = graph_json(g);

    const double d = static_cast<double>(s.dimension);
    report["lambda"] = solve_lambda(g);
    report["matrix_m"] = mat_json(graph_matrix(g, d));
    report["matrix_m_prime"] = mat_json(graph_matrix_derivative(g, d));

    const CommensurabilityVerdict verdict = commensurability(g);
    report["verdict"] = verdict_json(verdict);

    const bool fixed = is_fixed_scale(s);
    report["fixed_scale"] = fixed;
    if (fixed) {
        const Mat sm = substitution_matrix(s);
        const PerronEigen pe = perron_eigen(sm);
        const Primitivity pr = analyze_primitivity(sm);
        json fx;
        fx["alpha"] = scalar_json(fixed_scale_alpha(s));
        fx["count_matrix"] = mat_json(sm);
        fx["weighted_matrix"] = mat_json(weighted_substitution_matrix(s));
        fx["mu"] = pe.value;
        fx["right_eigenvector"] = pe.right;
        fx["left_eigenvector"] = pe.left;
        fx["primitive"] = pr.primitive;
        fx["period"] = pr.period;
        if (!pr.primitive) {
            json classes = json::array(), blocks = json::array();
            for (const auto& cls : pr.classes) classes.push_back(cls);
            for (const Mat& b : pr.blocks) blocks.push_back(mat_json(b));
            fx["classes"] = classes;
            fx["blocks"] = blocks;
        }
        const Frequencies gen = generation_limit_frequencies(s);
        fx["generation_count_fractions"] = gen.count_fraction;
        fx["generation_volume_fractions"] = gen.volume_fraction;
        report["fixed_scale_analysis"] = fx;
        if (matrix_base.size()) write_matrix_csv(matrix_base + ".S.csv", sm);
    }

    if (verdict.kind == CommensurabilityVerdict::Kind::Incommensurable) {
        const QMatrix qm = q_matrix(g);
        const Frequencies fr = kakutani_limit_frequencies(g);
        json st;
        st["q"] = qm.q;
        st["q_matrix"] = mat_json(qm.raw);
        st["q_row_spread"] = qm.row_spread;
        st["count_fractions"] = fr.count_fraction;
        st["volume_fractions"] = fr.volume_fraction;
        st["edge_count_fractions"] = fr.edge_count_fraction;
        st["edge_volume_fractions"] = fr.edge_volume_fraction;
        report["stationary"] = st;
    } else if (!fixed) {
        report["hint"] =
            "all cycle lengths share a common unit but the contraction is not a single "
            "fixed scale; run the rationalize subcommand to obtain an equivalent "
            "fixed-scale scheme";
    }

    if (dot_path.size()) write_file(dot_path, graph_dot(g));
    if (matrix_base.size()) {
        write_matrix_csv(matrix_base + ".M.csv", graph_matrix(g, d));
        write_matrix_csv(matrix_base + ".Mprime.csv", graph_matrix_derivative(g, d));
    }

    std::printf("%s\n", report.dump(2).c_str());
    return 0;
}

// ------------------------------------------------------------------
// simulate
// ------------------------------------------------------------------

json sim_json(const Scheme& s, const LoadedScheme& ls, const SimArgs& a,
              const SimResult& res) {
    json snaps = json::array();
    for (const Snapshot& snap : res.snapshots) {
        // No wall-clock field: rerunning with the same seed must reproduce
        // the file byte for byte.
        json j = census_json(s, snap.census);
        j["step"] = snap.step;
        j["threshold"] = snap.threshold;
        snaps.push_back(std::move(j));
    }
    return json{{"command", "simulate"}, {"config", a.scheme_path},
                {"config_hash", ls.hash}, {"seed", s.policy.seed},
                {"mode", a.mode},         {"steps", res.steps},
                {"snapshots", snaps},     {"final", census_json(s, res.snapshots.back().census)}};
}

int cmd_simulate(const SimArgs& a, const std::string& out_base, std::size_t runs,
                 const std::string& tiles_csv) {
    const LoadedScheme ls = load_with_hash(a.scheme_path);
    if (runs <= 1) {
        Scheme s = seeded(ls, a);
        EngineOptions opt = a.options();
        opt.retain = !tiles_csv.empty();
        const SimResult res = simulate(s, opt);
        const json report = sim_json(s, ls, a, res);
        if (tiles_csv.size()) write_file(tiles_csv, tile_dump_csv(s, res.tiles));
        if (out_base.empty()) {
            std::printf("%s\n", report.dump(2).c_str());
        } else {
            write_file(out_base + ".json", report.dump(2) + "\n");
            write_file(out_base + ".csv", trace_csv(s, res));
            std::printf("%s\n",
                        json{{"command", "simulate"},
                             {"files", {out_base + ".json", out_base + ".csv"}}}
                            .dump(2)
                            .c_str());
        }
        return 0;
    }

    // Batch over consecutive seeds; each run is independent and owns its
    // engine, so batches parallelize trivially.
    if (out_base.empty()) throw Error("--runs needs --out to name the per-run files");
    const std::uint64_t seed0 = a.seed.value_or(ls.scheme.policy.seed);
    std::vector<std::string> files(runs);
    std::vector<std::string> errors(runs);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, a.jobs))
#endif
    for (std::size_t i = 0; i < runs; ++i) {
        try {
            SimArgs run = a;
            run.seed = seed0 + i;
            Scheme s = seeded(ls, run);
            const SimResult res = simulate(s, run.options());
            const std::string base = out_base + "_s" + std::to_string(seed0 + i);
            write_file(base + ".json", sim_json(s, ls, run, res).dump(2) + "\n");
            write_file(base + ".csv", trace_csv(s, res));
            files[i] = base;
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    for (const std::string& err : errors)
        if (!err.empty()) throw Error(err);
    std::printf("%s\n", json{{"command", "simulate"},
                             {"runs", runs},
                             {"seed_first", seed0},
                             {"files", files}}
                            .dump(2)
                            .c_str());
    return 0;
}

// ------------------------------------------------------------------
// stats
// ------------------------------------------------------------------

int cmd_stats(const SimArgs& a, const std::string& out_path, bool discrepancy,
              const std::string& curve_csv) {
    const LoadedScheme ls = load_with_hash(a.scheme_path);
    Scheme s = seeded(ls, a);
    EngineOptions opt = a.options();
    opt.retain = discrepancy;

    const SimResult res = simulate(s, opt);
    const Census& final = res.snapshots.back().census;
    const AssocGraph g = build_graph(s);

    json report;
    report["command"] = "stats";
    report["config"] = a.scheme_path;
    report["config_hash"] = ls.hash;
    report["seed"] = s.policy.seed;
    report["mode"] = a.mode;
    report["steps"] = res.steps;
    report["final"] = census_json(s, final);

    // Which limit law applies depends on the process and the length lattice.
    const bool fixed = is_fixed_scale(s);
    const CommensurabilityVerdict verdict = commensurability(g);
    const bool generation = parse_mode(a.mode) == SimMode::Generation;

    const Frequencies predicted = (generation && fixed)
                                      ? generation_limit_frequencies(s)
                                      : kakutani_limit_frequencies(g);
    json pred;
    pred["law"] = (generation && fixed) ? "generation_limit" : "maximal_volume_limit";
    pred["count_fractions"] = predicted.count_fraction;
    pred["volume_fractions"] = predicted.volume_fraction;
    pred["edge_count_fractions"] = predicted.edge_count_fraction;
    pred["edge_volume_fractions"] = predicted.edge_volume_fraction;
    if (!generation && verdict.kind != CommensurabilityVerdict::Kind::Incommensurable)
        pred["note"] =
            "the length lattice looks commensurable: maximal-volume fractions "
            "oscillate instead of converging (see the series summary)";
    report["prediction"] = std::move(pred);

    double worst_count = 0.0, worst_volume = 0.0;
    for (std::size_t t = 0; t < s.num_types(); ++t) {
        worst_count =
            std::max(worst_count, std::fabs(final.count_fraction(t) - predicted.count_fraction[t]));
        worst_volume = std::max(
            worst_volume, std::fabs(final.volume_fraction(t) - predicted.volume_fraction[t]));
    }
    report["max_abs_error"] = {{"count_fraction", worst_count},
                               {"volume_fraction", worst_volume}};

    if (!generation) {
        // Absolute tile-count prediction at the reached threshold.
        const double threshold = res.snapshots.back().threshold;
        const std::vector<double> want = predicted_tile_counts(g, threshold);
        json pc;
        pc["threshold"] = threshold;
        pc["predicted"] = want;
        json rel = json::array();
        for (std::size_t t = 0; t < s.num_types(); ++t)
            rel.push_back(want[t] > 0
                              ? (static_cast<double>(final.type_counts[t]) - want[t]) / want[t]
                              : 0.0);
        pc["relative_error"] = rel;
        report["predicted_counts"] = std::move(pc);
    }

    if (res.snapshots.size() >= 4) {
        json series = json::object();
        for (std::size_t t = 0; t < s.num_types(); ++t) {
            std::vector<double> xs;
            for (const Snapshot& snap : res.snapshots)
                xs.push_back(snap.census.count_fraction(t));
            const SeriesSummary sum = summarize_series(xs);
            series[s.prototiles[t].label] = json{{"mean", sum.mean},
                                                 {"spread", sum.spread},
                                                 {"odd_mean", sum.odd_mean},
                                                 {"even_mean", sum.even_mean},
                                                 {"oscillating", sum.oscillating}};
        }
        report["series"] = std::move(series);
    }

    if (discrepancy) {
        const MarkingSet m = collect_markings(s, res.tiles, opt.root_type);
        report["discrepancy"] = {{"points", m.points.size()},
                                 {"value", marking_discrepancy(s, m, a.jobs)}};
    }

    if (curve_csv.size()) {
        // Discrepancy at a short geometric ladder of step counts.
        std::ostringstream out;
        out << "N,value\n";
        for (int shift = 5; shift >= 0; --shift) {
            const std::size_t steps = std::max<std::size_t>(1, a.steps >> shift);
            EngineOptions copt = a.options();
            copt.max_steps = steps;
            copt.retain = true;
            const SimResult curve_res = simulate(s, copt);
            const MarkingSet m = collect_markings(s, curve_res.tiles, copt.root_type);
            out << m.points.size() << "," << g17(marking_discrepancy(s, m, a.jobs)) << "\n";
            if (steps == a.steps) break;
        }
        write_file(curve_csv, out.str());
        report["discrepancy_curve"] = curve_csv;
    }

    const std::string text = report.dump(2);
    if (out_path.size()) write_file(out_path, text + "\n");
    std::printf("%s\n", text.c_str());
    return 0;
}

// ------------------------------------------------------------------
// render
// ------------------------------------------------------------------

int cmd_render(const SimArgs& a, const std::string& out_path, const std::string& color_by,
               std::size_t rows, unsigned canvas, double stroke, std::size_t max_tiles) {
    const LoadedScheme ls = load_with_hash(a.scheme_path);
    Scheme s = seeded(ls, a);
    if (a.steps == 0) throw Error("render needs --steps");

    RenderSpec spec;
    spec.color_by = color_by == "edge" ? ColorBy::Edge : ColorBy::Type;
    spec.canvas_px = canvas;
    spec.stroke_width = stroke;
    spec.max_tiles = max_tiles;

    std::vector<std::vector<RetainedTile>> tile_rows;
    for (std::size_t r = 1; r <= rows; ++r) {
        EngineOptions opt = a.options();
        opt.max_steps = rows == 1 ? a.steps : std::max<std::size_t>(1, a.steps * r / rows);
        opt.retain = true;
        opt.retain_cap = max_tiles;
        tile_rows.push_back(simulate(s, opt).tiles);
    }
    write_file(out_path, render_svg(s, tile_rows, spec));
    std::printf("%s\n", json{{"command", "render"},
                             {"config_hash", ls.hash},
                             {"out", out_path},
                             {"rows", rows}}
                            .dump(2)
                            .c_str());
    return 0;
}

// ------------------------------------------------------------------
// rationalize
// ------------------------------------------------------------------

int cmd_rationalize(const std::string& path, const std::string& out_path,
                    const std::string& index_path, bool accept_numeric, std::size_t verify_m) {
    const LoadedScheme ls = load_with_hash(path);
    const RationalizationResult r = rationalize(ls.scheme, accept_numeric);

    json index;
    index["a"] = r.index.a;
    index["unit"] = r.index.unit;
    index["unit_scale"] = scalar_json(r.index.unit_scale);
    index["k"] = r.index.k;

    json report;
    report["command"] = "rationalize";
    report["config"] = path;
    report["config_hash"] = ls.hash;
    report["contraction"] = scalar_json(r.contraction);
    report["prototiles"] = [&] {
        json arr = json::array();
        for (std::size_t p = 0; p < r.fixed_scheme.num_types(); ++p)
            arr.push_back(json{{"label", r.fixed_scheme.prototiles[p].label},
                               {"source", ls.scheme.prototiles[r.source_type[p]].label},
                               {"transit_depth", r.chain_depth[p]},
                               {"slide", r.slide[r.source_type[p]]}});
        return arr;
    }();
    report["edge_multipliers"] = r.edge_multiplier;
    report["index"] = index;

    if (verify_m > 0) {
        const bool ok = verify_subsequence(ls.scheme, r, verify_m);
        report["verified_through"] = verify_m;
        report["verified"] = ok;
        if (!ok) {
            std::fprintf(stderr, "subsequence verification failed by state %zu\n", verify_m);
            std::printf("%s\n", report.dump(2).c_str());
            return 1;
        }
    }

    if (out_path.size()) {
        write_file(out_path, serialize_scheme(r.fixed_scheme));
        report["out"] = out_path;
        const std::string ipath = index_path.empty() ? out_path + ".index.json" : index_path;
        write_file(ipath, index.dump(2) + "\n");
        report["index_out"] = ipath;
    }
    std::printf("%s\n", report.dump(2).c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiscale substitution schemes: analysis, simulation and statistics"};
    app.require_subcommand(1);

    // validate
    std::string v_path;
    bool v_relaxed = false;
    CLI::App* validate = app.add_subcommand("validate", "check a scheme config");
    validate->add_option("--scheme", v_path, "scheme config file")->required();
    validate->add_flag("--relaxed", v_relaxed,
                       "accept ratio-one transit edges (rationalized configs)");

    // analyze
    std::string an_path, an_dot, an_matrix;
    CLI::App* analyze = app.add_subcommand("analyze", "graph, spectral and frequency analysis");
    analyze->add_option("--scheme", an_path, "scheme config file")->required();
    analyze->add_option("--dot", an_dot, "write the association graph in DOT format");
    analyze->add_option("--matrix-csv", an_matrix, "write matrices as CSV to this base path");

    // simulate
    SimArgs sim_args;
    std::string sim_out, sim_tiles;
    std::size_t sim_runs = 1;
    CLI::App* sim = app.add_subcommand("simulate", "run the substitution process");
    add_sim_flags(sim, sim_args, /*with_jobs=*/true);
    sim->add_option("--out", sim_out, "trace base path (.json and .csv)");
    sim->add_option("--runs", sim_runs, "batch of consecutive seeds");
    sim->add_option("--tiles-csv", sim_tiles, "dump the final tiles to CSV");

    // stats
    SimArgs st_args;
    std::string st_out, st_curve;
    bool st_disc = false;
    CLI::App* stats = app.add_subcommand("stats", "simulate and compare with the limit laws");
    add_sim_flags(stats, st_args, /*with_jobs=*/true);
    stats->add_option("--out", st_out, "write the JSON report here too");
    stats->add_flag("--discrepancy", st_disc, "compute the marking discrepancy");
    stats->add_option("--curve-csv", st_curve, "write a discrepancy ladder as CSV");

    // render
    SimArgs rd_args;
    std::string rd_out, rd_color = "type";
    std::size_t rd_rows = 1, rd_max_tiles = 1000000;
    unsigned rd_canvas = 800;
    double rd_stroke = 1.0;
    CLI::App* render = app.add_subcommand("render", "draw partition states as SVG");
    add_sim_flags(render, rd_args, /*with_jobs=*/false);
    render->add_option("--out", rd_out, "output SVG path")->required();
    render->add_option("--color-by", rd_color, "type or edge")
        ->check(CLI::IsMember({"type", "edge"}));
    render->add_option("--rows", rd_rows, "stack this many successive states");
    render->add_option("--canvas", rd_canvas, "canvas size in pixels");
    render->add_option("--stroke", rd_stroke, "stroke width");

    // rationalize
    std::string ra_path, ra_out, ra_index;
    bool ra_accept = false;
    std::size_t ra_verify = 0;
    CLI::App* ration =
        app.add_subcommand("rationalize", "convert a commensurable scheme to fixed scale");
    ration->add_option("--scheme", ra_path, "scheme config file")->required();
    ration->add_option("--out", ra_out, "write the fixed-scale config here");
    ration->add_option("--index-out", ra_index, "write the generation index map here");
    ration->add_flag("--accept-numeric", ra_accept,
                     "accept a floating-point commensurability verdict");
    ration->add_option("--verify", ra_verify,
                       "check the subsequence property through this many states");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(validate)) return cmd_validate(v_path, v_relaxed);
        if (app.got_subcommand(analyze)) return cmd_analyze(an_path, an_dot, an_matrix);
        if (app.got_subcommand(sim)) return cmd_simulate(sim_args, sim_out, sim_runs, sim_tiles);
        if (app.got_subcommand(stats)) return cmd_stats(st_args, st_out, st_disc, st_curve);
        if (app.got_subcommand(render))
            return cmd_render(rd_args, rd_out, rd_color, rd_rows, rd_canvas, rd_stroke,
                              rd_max_tiles);
        if (app.got_subcommand(ration))
            return cmd_rationalize(ra_path, ra_out, ra_index, ra_accept, ra_verify);
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
