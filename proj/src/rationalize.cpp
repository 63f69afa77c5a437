#include "tilesplit/rationalize.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tilesplit/engine.hpp"
#include "tilesplit/util.hpp"

namespace tilesplit {

namespace {

/// e^{(1/L) <vec, log primes>} as an exact scalar.
Scalar scalar_from_vec(const ExactLengths& ex, const std::vector<long long>& vec) {
    Scalar acc = Scalar::one();
    for (std::size_t k = 0; k < vec.size(); ++k) {
        if (vec[k] == 0) continue;
        acc = acc * Scalar::from_power(BigRat(ex.primes[k]),
                                       BigRat(vec[k], static_cast<long long>(ex.L)));
    }
    return acc;
}

std::vector<double> scaled_vec(const std::vector<double>& v, double f) {
    std::vector<double> out = v;
    for (double& x : out) x *= f;
    return out;
}

std::vector<std::vector<double>> scaled_poly(const std::vector<std::vector<double>>& poly,
                                             double f) {
    auto out = poly;
    for (auto& vertex : out)
        for (double& x : vertex) x *= f;
    return out;
}

std::string fresh_label(std::set<std::string>& used, const std::string& base) {
    if (used.insert(base).second) return base;
    for (int n = 2;; ++n) {
        std::string candidate = base + "#" + std::to_string(n);
        if (used.insert(candidate).second) return candidate;
    }
}

}  // namespace

RationalizationResult rationalize(const Scheme& s, bool accept_numeric) {
    const Scheme sigma = normalize_scheme(s);
    AssocGraph g = build_graph(s);
    require_irreducible(g);
    const CommensurabilityVerdict verdict = commensurability(g);

    using Kind = CommensurabilityVerdict::Kind;
    if (verdict.kind == Kind::Incommensurable) {
        std::ostringstream msg;
        msg << "cannot rationalize: closed paths of lengths " << verdict.witness_a.length
            << " and " << verdict.witness_b.length << " generate a length lattice of rank 2";
        throw IncommensurableInput(msg.str());
    }
    if (verdict.kind == Kind::NumericHeuristic) {
        if (!verdict.likely_commensurable)
            throw IncommensurableInput("no common closed-path length unit found (" + verdict.note +
                                       ")");
        if (!accept_numeric)
            throw NumericVerdictNotAccepted(
                "commensurability of this scheme rests on a floating-point heuristic (" +
                verdict.note + "); pass accept_numeric to use it anyway");
    }

    const bool exact = verdict.kind == Kind::Commensurable && verdict.unit_scale.is_exact() &&
                       g.exact.available && verdict.potential_vec.size() == g.n;
    const unsigned d = sigma.dimension;
    const std::size_t n = sigma.num_types();
    const double u0 = verdict.unit_length;
    const long a = verdict.a;
    const double u = u0 / static_cast<double>(a);

    RationalizationResult r;
    r.index.a = a;
    r.index.unit = u;

    // Quantum scale e^{u} and the per-vertex slides t_v = f_v - rank_v * u,
    // where f_v is the fractional residue of vertex v.  Sliding a tile of
    // type v by t_v puts every cumulative length on the lattice u * Z.
    const Scalar root_unit = exact ? verdict.unit_scale.nth_root(static_cast<unsigned>(a))
                                   : Scalar::from_double(std::exp(u));
    r.index.unit_scale = root_unit;
    const Scalar alpha_p = root_unit.reciprocal();
    r.contraction = alpha_p;

    std::vector<double> t(n, 0.0);
    std::vector<Scalar> et(n, Scalar::one());
    for (std::size_t v = 0; v < n; ++v) {
        const double f =
            verdict.potential[v] - static_cast<double>(verdict.floor_units[v]) * u0;
        t[v] = f - static_cast<double>(verdict.class_rank[v]) * u;
        if (exact) {
            et[v] = scalar_from_vec(g.exact, verdict.potential_vec[v]) /
                    verdict.unit_scale.pow_int(static_cast<long>(verdict.floor_units[v])) /
                    root_unit.pow_int(verdict.class_rank[v]);
        } else {
            et[v] = Scalar::from_double(std::exp(t[v]));
        }
    }
    r.slide = t;
    r.slide_scale = et;

    // Every slid edge length must be a whole positive number of quanta; the
    // ordering of tile volumes along substitutions (monotonicity) is exactly
    // positivity of the slid lengths.
    std::vector<long long> kmul(g.edges.size(), 0);
    for (const EdgeInfo& e : g.edges) {
        const double b = e.length + t[e.from] - t[e.to];
        const long long q = std::llround(b / u);
        if (q < 1 || std::fabs(b - static_cast<double>(q) * u) > 1e-6 * u) {
            std::ostringstream msg;
            msg << "slid edge " << e.id << " (" << g.labels[e.from] << " -> " << g.labels[e.to]
                << ") has length " << b << ", not a positive multiple of the quantum " << u;
            throw SlideInfeasible(msg.str());
        }
        kmul[e.id] = q;
    }
    r.edge_multiplier = kmul;

    // Prototiles: the slid originals keep their labels and order; scaling a
    // normalized prototile by e^{-t_v} multiplies its volume by e^{-d t_v}.
    Scheme& out = r.fixed_scheme;
    out.dimension = d;
    out.policy = sigma.policy;

    std::set<std::string> used;
    for (std::size_t v = 0; v < n; ++v) used.insert(sigma.prototiles[v].label);

    const double alpha_d = alpha_p.to_double();
    for (std::size_t v = 0; v < n; ++v) {
        Prototile p;
        p.label = sigma.prototiles[v].label;
        p.volume = et[v].pow_int(-static_cast<long>(d));
        const double sv = std::exp(-t[v]);
        p.marking_point = scaled_vec(sigma.prototiles[v].marking_point, sv);
        p.polygon = scaled_poly(sigma.prototiles[v].polygon, sv);
        out.prototiles.push_back(std::move(p));
        r.source_type.push_back(v);
        r.chain_depth.push_back(0);
        r.prototile_scale.push_back(et[v].reciprocal() /
                                    s.prototiles[v].volume.nth_root(d));
    }

    // One chain per (parent, child, quanta) class of parallel edges, created
    // in edge order.  Stage m is the source scaled m quanta down; its single
    // rule hands the region to stage m-1 (finally the slid source) whole.
    std::map<std::tuple<std::size_t, std::size_t, long long>, std::vector<std::size_t>> chains;
    for (const EdgeInfo& e : g.edges) {
        const long long q = kmul[e.id];
        if (q < 2) continue;
        const auto key = std::make_tuple(e.from, e.to, q);
        if (chains.count(key)) continue;
        std::vector<std::size_t> stage_types;
        const double sj = std::exp(-t[e.to]);
        for (long long m = 1; m < q; ++m) {
            Prototile p;
            p.label =
                fresh_label(used, sigma.prototiles[e.to].label + "@" + std::to_string(m));
            p.volume = et[e.to].pow_int(-static_cast<long>(d)) *
                       alpha_p.pow_int(static_cast<long>(d) * m);
            const double sm = sj * std::pow(alpha_d, static_cast<double>(m));
            p.marking_point = scaled_vec(sigma.prototiles[e.to].marking_point, sm);
            p.polygon = scaled_poly(sigma.prototiles[e.to].polygon, sm);
            stage_types.push_back(out.prototiles.size());
            out.prototiles.push_back(std::move(p));
            r.source_type.push_back(e.to);
            r.chain_depth.push_back(static_cast<std::size_t>(m));
            r.prototile_scale.push_back(et[e.to].reciprocal() /
                                        s.prototiles[e.to].volume.nth_root(d) *
                                        alpha_p.pow_int(static_cast<long>(m)));
        }
        chains.emplace(key, std::move(stage_types));
    }

    // Rules.  Substituting a slid parent follows the original alternatives;
    // every child contracts by exactly e^{-u} and an edge of q quanta enters
    // its chain at stage q-1.
    out.rules.resize(out.prototiles.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double si = std::exp(-t[i]);
        for (const Rule& rule : sigma.rules[i]) {
            Rule nr;
            for (const SubstitutionTile& st : rule) {
                const long long q = kmul[st.edge_id];
                SubstitutionTile child;
                child.child_type =
                    q == 1 ? st.child_type
                           : chains.at(std::make_tuple(i, st.child_type, q))
                                 [static_cast<std::size_t>(q - 2)];
                child.placement.scale = alpha_p;
                child.placement.rotation = st.placement.rotation;
                child.placement.translation = scaled_vec(st.placement.translation, si);
                nr.push_back(std::move(child));
            }
            out.rules[i].push_back(std::move(nr));
        }
    }
    for (const auto& [key, stage_types] : chains) {
        const std::size_t target = std::get<1>(key);
        for (std::size_t m = 0; m < stage_types.size(); ++m) {
            SubstitutionTile child;
            child.child_type = m == 0 ? target : stage_types[m - 1];
            child.placement.scale = alpha_p;
            out.rules[stage_types[m]].push_back(Rule{child});
        }
    }

    finalize_scheme(out);
    validate_scheme(out, /*allow_unit_beta=*/true);

    // Generation index: quantum slot s carries a maximal-volume threshold
    // exactly when generation s contains a slid original (depth-0) tile;
    // chain-only generations are pure clock ticks of the new scheme.  The
    // slots are found by boolean reachability from the type-0 root.
    const std::size_t horizon = 64;
    std::vector<char> present(out.prototiles.size(), 0);
    present[0] = 1;
    r.index.k.clear();
    for (std::size_t slot = 0; slot <= horizon; ++slot) {
        bool active = false;
        for (std::size_t p = 0; p < present.size(); ++p)
            if (present[p] && r.chain_depth[p] == 0) active = true;
        if (active) r.index.k.push_back(slot);
        std::vector<char> next(present.size(), 0);
        for (std::size_t p = 0; p < present.size(); ++p) {
            if (!present[p]) continue;
            for (const SubstitutionTile& st : out.rules[p][0]) next[st.child_type] = 1;
        }
        present = std::move(next);
    }
    return r;
}

bool verify_subsequence(const Scheme& original, const RationalizationResult& r,
                        std::size_t m_max, double tol) {
    const Scheme sigma = normalize_scheme(original);
    const std::size_t n = sigma.num_types();
    const std::size_t np = r.fixed_scheme.num_types();
    if (r.source_type.size() != np || r.chain_depth.size() != np || r.slide.size() != n ||
        r.slide_scale.size() != n)
        throw Error("rationalization result tables are inconsistent");
    if (m_max >= r.index.k.size()) throw Error("m_max exceeds the stored generation index");
    for (std::size_t p = 0; p < np; ++p)
        if (r.source_type[p] >= n) throw Error("rationalization source type out of range");

    // No volume adjustment is needed when collapsing: a chain stage's
    // prototile volume absorbs its slide and depth factors, so every tile of
    // the rationalized scheme carries exactly the volume of the original
    // tile it stands for.
    for (std::size_t m = 1; m <= m_max; ++m) {
        EngineOptions gen;
        gen.mode = SimMode::Generation;
        gen.max_steps = r.index.k[m];
        const Census cg = simulate(r.fixed_scheme, gen).snapshots.back().census;

        EngineOptions kak;
        kak.mode = SimMode::Kakutani;
        kak.max_steps = m;
        const Census ck = simulate(sigma, kak).snapshots.back().census;

        std::vector<long long> counts(n, 0);
        for (std::size_t p = 0; p < np; ++p) counts[r.source_type[p]] += cg.type_counts[p];
        for (std::size_t j = 0; j < n; ++j) {
            if (counts[j] != ck.type_counts[j]) {
                log(LogLevel::Info,
                    "subsequence check failed at state %zu: %lld tiles of '%s' collapsed vs %lld",
                    m, counts[j], sigma.prototiles[j].label.c_str(), ck.type_counts[j]);
                return false;
            }
        }

        if (cg.exact && ck.exact) {
            std::vector<BigRat> volumes(n, BigRat(0));
            for (std::size_t p = 0; p < np; ++p)
                volumes[r.source_type[p]] += cg.type_volumes_exact[p];
            for (std::size_t j = 0; j < n; ++j)
                if (volumes[j] != ck.type_volumes_exact[j]) {
                    log(LogLevel::Info, "subsequence check failed at state %zu: volume of '%s'",
                        m, sigma.prototiles[j].label.c_str());
                    return false;
                }
        } else {
            std::vector<double> volumes(n, 0.0);
            for (std::size_t p = 0; p < np; ++p)
                volumes[r.source_type[p]] += cg.type_volumes[p];
            for (std::size_t j = 0; j < n; ++j)
                if (std::fabs(volumes[j] - ck.type_volumes[j]) > tol) {
                    log(LogLevel::Info, "subsequence check failed at state %zu: volume of '%s'",
                        m, sigma.prototiles[j].label.c_str());
                    return false;
                }
        }
    }
    return true;
}

}  // namespace tilesplit
