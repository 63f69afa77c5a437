#include "tilesplit/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "tilesplit/util.hpp"

namespace tilesplit {

namespace {

long long floor_div(long long a, long long b) {
    long long q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

std::vector<long long> vec_add(const std::vector<long long>& a, const std::vector<long long>& b) {
    std::vector<long long> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

std::vector<long long> vec_sub(const std::vector<long long>& a, const std::vector<long long>& b) {
    std::vector<long long> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

bool vec_zero(const std::vector<long long>& a) {
    return std::all_of(a.begin(), a.end(), [](long long x) { return x == 0; });
}

bool vec_parallel(const std::vector<long long>& a, const std::vector<long long>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            __int128 lhs = (__int128)a[i] * b[j];
            __int128 rhs = (__int128)a[j] * b[i];
            if (lhs != rhs) return false;
        }
    return true;
}

// Real value of an exponent vector: (1/L) * sum vec[k] * log(primes[k]).
double vec_value(const std::vector<long long>& v, const std::vector<double>& log_primes,
                 unsigned L) {
    double s = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) s += (double)v[k] * log_primes[k];
    return s / (double)L;
}

// Greatest common divisor of two positive reals by a capped Euclid run.
// A partial quotient above 1e6 is treated as an exact division.
double real_gcd(double x, double y, double floor_tol) {
    x = std::fabs(x);
    y = std::fabs(y);
    if (x < y) std::swap(x, y);
    while (y > floor_tol) {
        double q = std::round(x / y);
        if (q >= 1e6) return y;
        double r = std::fabs(x - q * y);
        x = y;
        y = r;
        if (x < y) std::swap(x, y);
    }
    return x;
}

struct TreeData {
    std::vector<std::size_t> tree_edge;   // edge into v on the BFS tree (root: npos)
    std::vector<std::size_t> ret_edge;    // first edge of v's return path to root
    std::vector<double> delta;            // potential: tree path length root -> v
    std::vector<std::vector<long long>> delta_vec;  // exact potentials (if available)
};

constexpr std::size_t kNone = (std::size_t)-1;

TreeData build_trees(const AssocGraph& g) {
    TreeData t;
    t.tree_edge.assign(g.n, kNone);
    t.ret_edge.assign(g.n, kNone);
    t.delta.assign(g.n, 0.0);
    if (g.exact.available) t.delta_vec.assign(g.n, std::vector<long long>(g.exact.primes.size(), 0));

    std::vector<char> vis(g.n, 0);
    std::deque<std::size_t> q{0};
    vis[0] = 1;
    while (!q.empty()) {
        std::size_t v = q.front();
        q.pop_front();
        for (std::size_t e : g.out[v]) {
            std::size_t w = g.edges[e].to;
            if (vis[w]) continue;
            vis[w] = 1;
            t.tree_edge[w] = e;
            t.delta[w] = t.delta[v] + g.edges[e].length;
            if (g.exact.available) t.delta_vec[w] = vec_add(t.delta_vec[v], g.exact.edge_vec[e]);
            q.push_back(w);
        }
    }
    // Reverse BFS from the root gives, for every vertex, an outgoing edge
    // that starts a shortest (fewest-edges) path back to the root.
    std::fill(vis.begin(), vis.end(), 0);
    q.push_back(0);
    vis[0] = 1;
    while (!q.empty()) {
        std::size_t v = q.front();
        q.pop_front();
        for (std::size_t e : g.in[v]) {
            std::size_t w = g.edges[e].from;
            if (vis[w]) continue;
            vis[w] = 1;
            t.ret_edge[w] = e;
            q.push_back(w);
        }
    }
    return t;
}

// Closed path through edge e: tree path root -> from(e), then e, then the
// return path to(e) -> root.
CycleDescriptor cycle_through(const AssocGraph& g, const TreeData& t, std::size_t e) {
    CycleDescriptor c;
    std::vector<std::size_t> prefix;
    for (std::size_t v = g.edges[e].from; t.tree_edge[v] != kNone; v = g.edges[t.tree_edge[v]].from)
        prefix.push_back(t.tree_edge[v]);
    std::reverse(prefix.begin(), prefix.end());
    c.edges = std::move(prefix);
    c.edges.push_back(e);
    for (std::size_t v = g.edges[e].to; v != 0; v = g.edges[t.ret_edge[v]].to)
        c.edges.push_back(t.ret_edge[v]);
    for (std::size_t id : c.edges) c.length += g.edges[id].length;
    return c;
}

std::vector<long long> cycle_vector(const AssocGraph& g, const CycleDescriptor& c) {
    std::vector<long long> v(g.exact.primes.size(), 0);
    for (std::size_t id : c.edges) v = vec_add(v, g.exact.edge_vec[id]);
    return v;
}

CommensurabilityVerdict exact_verdict(const AssocGraph& g, const TreeData& t) {
    CommensurabilityVerdict out;
    const std::size_t P = g.exact.primes.size();
    std::vector<double> log_primes(P);
    for (std::size_t k = 0; k < P; ++k) log_primes[k] = log_bigint(g.exact.primes[k]);

    // Closed paths through every edge generate the full closed-path lattice.
    std::vector<CycleDescriptor> cycles;
    std::vector<std::vector<long long>> cvecs;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        CycleDescriptor c = cycle_through(g, t, e);
        cvecs.push_back(cycle_vector(g, c));
        cycles.push_back(std::move(c));
    }

    // Rank of the lattice: commensurable iff every generator is parallel to
    // the first one.  Distinct prime exponent vectors have irrational value
    // ratios, so two non-parallel generators are a proof of incommensurability.
    std::size_t first = kNone;
    for (std::size_t i = 0; i < cvecs.size(); ++i)
        if (!vec_zero(cvecs[i])) {
            first = i;
            break;
        }
    if (first == kNone) throw Error("closed-path lattice is degenerate");
    for (std::size_t i = 0; i < cvecs.size(); ++i) {
        if (vec_zero(cvecs[i])) continue;
        if (!vec_parallel(cvecs[first], cvecs[i])) {
            out.kind = CommensurabilityVerdict::Kind::Incommensurable;
            out.witness_a = cycles[first];
            out.witness_b = cycles[i];
            return out;
        }
    }

    // Primitive direction, oriented toward positive length.
    std::vector<long long> prim = cvecs[first];
    long long content = 0;
    for (long long x : prim) content = std::gcd(content, std::llabs(x));
    for (long long& x : prim) x /= content;
    if (vec_value(prim, log_primes, g.exact.L) < 0)
        for (long long& x : prim) x = -x;
    std::size_t pivot = 0;
    while (prim[pivot] == 0) ++pivot;

    long long mult_gcd = 0;
    for (const auto& v : cvecs) {
        if (vec_zero(v)) continue;
        mult_gcd = std::gcd(mult_gcd, std::llabs(v[pivot] / prim[pivot]));
    }
    std::vector<long long> unit = prim;
    for (long long& x : unit) x *= mult_gcd;

    BigRat base(1);
    for (std::size_t k = 0; k < P; ++k) {
        if (unit[k] == 0) continue;
        BigInt pw = boost::multiprecision::pow(g.exact.primes[k], (unsigned)std::llabs(unit[k]));
        if (unit[k] > 0)
            base *= BigRat(pw);
        else
            base /= BigRat(pw);
    }
    out.kind = CommensurabilityVerdict::Kind::Commensurable;
    out.unit_scale = Scalar::from_power(base, BigRat(1, (long)g.exact.L));
    out.unit_length = out.unit_scale.log();
    const double u0 = out.unit_length;

    // Vertex residues modulo the unit.  The canonical residue vector is the
    // exact class key; its fractional value in [0, u0) orders the classes.
    out.potential = t.delta;
    out.potential_vec = t.delta_vec;
    out.floor_units.assign(g.n, 0);
    out.class_rank.assign(g.n, 0);
    const long long A = std::llabs(unit[pivot]);
    std::map<std::vector<long long>, std::vector<std::size_t>> classes;
    for (std::size_t v = 0; v < g.n; ++v) {
        long long r0 = ((t.delta_vec[v][pivot] % A) + A) % A;
        long long m = (t.delta_vec[v][pivot] - r0) / unit[pivot];
        std::vector<long long> res = t.delta_vec[v];
        for (std::size_t k = 0; k < P; ++k) res[k] -= m * unit[k];
        classes[res].push_back(v);
    }
    struct ClassInfo {
        double frac;
        std::vector<long long> key;
        std::vector<std::size_t> members;
    };
    std::vector<ClassInfo> infos;
    for (auto& [key, members] : classes) {
        double val = vec_value(key, log_primes, g.exact.L);
        double frac = std::fmod(val, u0);
        if (frac < 0) frac += u0;
        if (vec_zero(key)) frac = 0.0;
        infos.push_back({frac, key, members});
    }
    std::sort(infos.begin(), infos.end(), [](const ClassInfo& x, const ClassInfo& y) {
        if (x.frac != y.frac) return x.frac < y.frac;
        return x.key < y.key;
    });
    out.a = (long)infos.size();
    for (std::size_t r = 0; r < infos.size(); ++r)
        for (std::size_t v : infos[r].members) {
            out.class_rank[v] = (long)r;
            out.floor_units[v] = llround((t.delta[v] - infos[r].frac) / u0);
        }
    return out;
}

CommensurabilityVerdict numeric_verdict(const AssocGraph& g, const TreeData& t) {
    CommensurabilityVerdict out;
    out.kind = CommensurabilityVerdict::Kind::NumericHeuristic;

    // Residues of all edges against the tree potential generate the lattice.
    std::vector<double> res;
    double max_res = 0.0;
    for (const auto& e : g.edges) {
        double r = e.length + t.delta[e.from] - t.delta[e.to];
        max_res = std::max(max_res, std::fabs(r));
        res.push_back(r);
    }
    const double zero_tol = 1e-12 * std::max(1.0, max_res);
    std::vector<double> nz;
    for (double r : res)
        if (std::fabs(r) > zero_tol) nz.push_back(std::fabs(r));
    if (nz.empty()) throw Error("closed-path lattice is degenerate");

    const double floor_tol = 1e-10 * max_res;
    double u = nz[0];
    for (std::size_t i = 1; i < nz.size(); ++i) u = real_gcd(u, nz[i], floor_tol);

    double min_nz = *std::min_element(nz.begin(), nz.end());
    if (u <= floor_tol || u < 1e-6 * min_nz) {
        out.likely_commensurable = false;
        std::ostringstream note;
        note << "capped Euclid on " << nz.size()
             << " cycle residues collapsed below tolerance (gcd " << u
             << "); lengths look incommensurable";
        out.note = note.str();
        return out;
    }

    // Refine the unit by least squares over the fitted multiples, then make
    // sure every residue is close to a multiple of it.
    double num = 0.0, den = 0.0;
    for (double r : nz) {
        double k = std::round(r / u);
        num += k * r;
        den += k * k;
    }
    u = num / den;
    double worst = 0.0;
    for (double r : nz) {
        double k = std::round(r / u);
        worst = std::max(worst, std::fabs(r - k * u) / std::max(1.0, r));
    }
    if (worst > 1e-8) {
        out.likely_commensurable = false;
        std::ostringstream note;
        note << "candidate unit " << u << " does not fit all cycle residues (worst relative error "
             << worst << "); lengths look incommensurable";
        out.note = note.str();
        return out;
    }

    out.likely_commensurable = true;
    out.unit_length = u;
    out.unit_scale = Scalar::from_double(std::exp(u));
    out.potential = t.delta;
    out.floor_units.assign(g.n, 0);
    out.class_rank.assign(g.n, 0);

    // Fractional residues of the vertex potentials, clustered within
    // tolerance (values wrapping past u0 belong with 0).
    std::vector<double> frac(g.n);
    std::vector<long long> fl(g.n);
    const double ctol = 1e-7 * u;
    for (std::size_t v = 0; v < g.n; ++v) {
        double f = std::fmod(t.delta[v], u);
        if (f < 0) f += u;
        long long n0 = llround((t.delta[v] - f) / u);
        if (f < ctol) {
            f = 0.0;
        } else if (u - f < ctol) {
            f = 0.0;
            n0 += 1;
        }
        frac[v] = f;
        fl[v] = n0;
    }
    std::vector<std::size_t> order(g.n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return frac[x] < frac[y]; });
    long rank = -1;
    double last = -1.0;
    std::vector<double> reps;
    for (std::size_t v : order) {
        if (rank < 0 || frac[v] - last > ctol) {
            ++rank;
            reps.push_back(frac[v]);
        }
        last = frac[v];
        out.class_rank[v] = rank;
        out.floor_units[v] = fl[v];
    }
    out.a = rank + 1;
    std::ostringstream note;
    note << "unit " << u << " from capped Euclid over " << nz.size()
         << " cycle residues (worst relative fit error " << worst << "), " << out.a
         << " vertex residue class" << (out.a == 1 ? "" : "es");
    out.note = note.str();
    return out;
}

}  // namespace

void finalize_graph(AssocGraph& g) {
    g.out.assign(g.n, {});
    g.in.assign(g.n, {});
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        g.out[g.edges[e].from].push_back(e);
        g.in[g.edges[e].to].push_back(e);
    }

    g.exact = ExactLengths{};
    g.exact.available = std::all_of(g.edges.begin(), g.edges.end(),
                                    [](const EdgeInfo& e) { return e.beta.is_exact(); });
    if (!g.exact.available) return;

    std::set<BigInt> prime_set;
    unsigned L = 1;
    for (const auto& e : g.edges) {
        L = (unsigned)std::lcm(L, e.beta.root());
        for (const auto& [p, _] : factorize(boost::multiprecision::numerator(e.beta.base())))
            prime_set.insert(p);
        for (const auto& [p, _] : factorize(boost::multiprecision::denominator(e.beta.base())))
            prime_set.insert(p);
    }
    g.exact.primes.assign(prime_set.begin(), prime_set.end());
    g.exact.L = L;
    std::map<BigInt, std::size_t> index;
    for (std::size_t k = 0; k < g.exact.primes.size(); ++k) index[g.exact.primes[k]] = k;

    for (const auto& e : g.edges) {
        // length = log(1/beta) = (1/root) * (log den - log num)
        std::vector<long long> v(g.exact.primes.size(), 0);
        long long scale = (long long)(L / e.beta.root());
        for (const auto& [p, exp] : factorize(boost::multiprecision::numerator(e.beta.base())))
            v[index[p]] -= scale * (long long)exp;
        for (const auto& [p, exp] : factorize(boost::multiprecision::denominator(e.beta.base())))
            v[index[p]] += scale * (long long)exp;
        g.exact.edge_vec.push_back(std::move(v));
    }
}

AssocGraph build_graph(const Scheme& s) {
    Scheme norm = normalize_scheme(s);
    AssocGraph g;
    g.n = norm.num_types();
    g.dimension = norm.dimension;
    for (const auto& p : norm.prototiles) g.labels.push_back(p.label);
    g.edges = norm.edges;
    finalize_graph(g);
    return g;
}

std::vector<std::vector<std::size_t>> strongly_connected_components(const AssocGraph& g) {
    // Iterative Tarjan.
    std::vector<long> index(g.n, -1), low(g.n, 0);
    std::vector<char> on_stack(g.n, 0);
    std::vector<std::size_t> stck;
    std::vector<std::vector<std::size_t>> comps;
    long counter = 0;

    struct Frame {
        std::size_t v;
        std::size_t next_out = 0;
    };
    for (std::size_t start = 0; start < g.n; ++start) {
        if (index[start] >= 0) continue;
        std::vector<Frame> frames{{start}};
        index[start] = low[start] = counter++;
        stck.push_back(start);
        on_stack[start] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.next_out < g.out[f.v].size()) {
                std::size_t e = g.out[f.v][f.next_out++];
                std::size_t w = g.edges[e].to;
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stck.push_back(w);
                    on_stack[w] = 1;
                    frames.push_back({w});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                std::size_t v = f.v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
                if (low[v] == index[v]) {
                    std::vector<std::size_t> comp;
                    for (;;) {
                        std::size_t w = stck.back();
                        stck.pop_back();
                        on_stack[w] = 0;
                        comp.push_back(w);
                        if (w == v) break;
                    }
                    std::sort(comp.begin(), comp.end());
                    comps.push_back(std::move(comp));
                }
            }
        }
    }
    return comps;
}

bool is_strongly_connected(const AssocGraph& g) {
    return strongly_connected_components(g).size() == 1;
}

void require_irreducible(const AssocGraph& g) {
    auto comps = strongly_connected_components(g);
    if (comps.size() == 1) return;
    std::ostringstream msg;
    msg << "type graph is not strongly connected: " << comps.size()
        << " components of sizes";
    for (const auto& c : comps) msg << " " << c.size();
    throw NotIrreducible(msg.str());
}

CommensurabilityVerdict commensurability(const AssocGraph& g) {
    require_irreducible(g);
    TreeData t = build_trees(g);
    if (g.exact.available) return exact_verdict(g, t);
    return numeric_verdict(g, t);
}

Mat graph_matrix(const AssocGraph& g, double s) {
    Mat m((long)g.n, (long)g.n);
    for (const auto& e : g.edges) m((long)e.from, (long)e.to) += std::exp(-s * e.length);
    return m;
}

Mat graph_matrix_derivative(const AssocGraph& g, double s) {
    Mat m((long)g.n, (long)g.n);
    for (const auto& e : g.edges)
        m((long)e.from, (long)e.to) += -e.length * std::exp(-s * e.length);
    return m;
}

std::vector<double> path_length_sequence(const AssocGraph& g, std::size_t root,
                                         std::size_t count) {
    std::vector<double> out;
    if (count == 0) return out;

    if (g.exact.available) {
        const std::size_t P = g.exact.primes.size();
        std::vector<double> log_primes(P);
        for (std::size_t k = 0; k < P; ++k) log_primes[k] = log_bigint(g.exact.primes[k]);
        using State = std::pair<std::vector<long long>, std::size_t>;  // (vector, vertex)
        std::set<State> seen;
        std::set<std::vector<long long>> recorded;
        using Entry = std::pair<double, State>;
        std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
        State init{std::vector<long long>(P, 0), root};
        seen.insert(init);
        pq.push({0.0, init});
        while (!pq.empty()) {
            auto [len, st] = pq.top();
            pq.pop();
            const auto& [vec, v] = st;
            if (!vec_zero(vec) && !recorded.count(vec)) {
                if (out.size() == count) return out;
                recorded.insert(vec);
                out.push_back(len);
            }
            for (std::size_t e : g.out[v]) {
                State nxt{vec_add(vec, g.exact.edge_vec[e]), g.edges[e].to};
                if (seen.count(nxt)) continue;
                double nlen = vec_value(nxt.first, log_primes, g.exact.L);
                seen.insert(nxt);
                pq.push({nlen, std::move(nxt)});
            }
        }
        return out;
    }

    auto close = [](double a, double b) { return std::fabs(a - b) <= 1e-9 * std::max(1.0, b); };
    std::vector<std::vector<double>> visited(g.n);  // sorted per-vertex lengths
    auto vertex_seen = [&](std::size_t v, double len) {
        auto& vs = visited[v];
        auto it = std::lower_bound(vs.begin(), vs.end(), len - 1e-9 * std::max(1.0, len) - 1e-12);
        return it != vs.end() && close(*it, len);
    };
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
    visited[root].push_back(0.0);
    pq.push({0.0, root});
    while (!pq.empty()) {
        auto [len, v] = pq.top();
        pq.pop();
        if (len > 0.0 && (out.empty() || !close(len, out.back()))) {
            if (out.size() == count) return out;
            out.push_back(len);
        }
        for (std::size_t e : g.out[v]) {
            double nlen = len + g.edges[e].length;
            std::size_t w = g.edges[e].to;
            if (vertex_seen(w, nlen)) continue;
            auto& vs = visited[w];
            vs.insert(std::upper_bound(vs.begin(), vs.end(), nlen), nlen);
            pq.push({nlen, w});
        }
    }
    return out;
}

}  // namespace tilesplit
