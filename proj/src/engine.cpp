#include "tilesplit/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "tilesplit/graph.hpp"
#include "tilesplit/util.hpp"

namespace tilesplit {

namespace {

// Tiles are aggregated per cumulative-length class; inside a class they are
// grouped by (prototile, creating edge + 1), with 0 marking the root tile.
using GroupKey = std::pair<std::size_t, std::size_t>;
using Groups = std::map<GroupKey, long long>;
// Class key: the cumulative length as a double plus, for exact scale tables,
// the exact exponent vector over the prime basis (the double is derived from
// the vector, so the pair order is by value first and canonical).
using ClassKey = std::pair<double, std::vector<long long>>;

constexpr long long kCountGuard = 4000000000000000000LL;

double merge_tol(double v) { return 1e-9 * std::max(1.0, std::fabs(v)); }

// A placed tile kept by retained mode, with its class key alongside.
struct ETile {
    Tile tile;
    double val = 0.0;
    std::vector<long long> vec;
    std::size_t entry = 0;
};

class Engine {
  public:
    Engine(const Scheme& s, const EngineOptions& opt)
        : s_(s), opt_(opt), graph_(build_graph(s)), rng_(s.policy.seed) {
        if (opt_.root_type >= s_.num_types()) throw Error("root type out of range");
        if (opt_.max_steps == 0 && opt_.max_tiles == 0 && opt_.min_tile_volume <= 0.0)
            throw Error("no stop criterion set (max_steps, max_tiles or min_tile_volume)");
        if (opt_.mode == SimMode::Kakutani) {
            // A ratio-1 edge would re-enter the maximal-volume class it came
            // from, so the threshold could never advance past it.
            for (const EdgeInfo& e : s_.edges)
                if (e.length <= 0.0)
                    throw Error("maximal-volume mode needs strictly contracting children, but a "
                                "child of '" + s_.prototiles[e.from].label +
                                "' keeps its parent's volume; run generation mode instead");
        }
        dim_ = s_.dimension;
        exact_keys_ = graph_.exact.available;
        if (exact_keys_) {
            L_ = graph_.exact.L;
            logp_.reserve(graph_.exact.primes.size());
            for (const auto& p : graph_.exact.primes) logp_.push_back(log_bigint(p));
        }
        rr_.assign(s_.num_types(), 0);
        rule_size_.reserve(s_.num_types());
        for (std::size_t t = 0; t < s_.num_types(); ++t)
            rule_size_.push_back(s_.rules[t][0].size());

        const Scalar& rv = s_.prototiles[opt_.root_type].volume;
        root_vol_ = rv.to_double();
        exact_vol_ = exact_keys_ && rv.is_rational();
        if (exact_vol_) {
            root_vol_rat_ = rv.rational();
            for (const auto& ev : graph_.exact.edge_vec)
                for (long long c : ev)
                    if ((static_cast<long long>(dim_) * c) % L_ != 0) exact_vol_ = false;
        }
    }

    SimResult run() {
        t0_ = std::chrono::steady_clock::now();
        SimResult res;
        if (opt_.retain) {
            ETile root;
            root.tile.type = opt_.root_type;
            if (exact_keys_) root.vec.assign(logp_.size(), 0);
            tiles_.push_back(std::move(root));
        } else {
            ClassKey key{0.0, exact_keys_ ? std::vector<long long>(logp_.size(), 0)
                                          : std::vector<long long>{}};
            classes_[std::move(key)][GroupKey{opt_.root_type, 0}] = 1;
            total_ = 1;
        }
        for (;;) {
            if (opt_.max_steps && steps_ >= opt_.max_steps) break;
            const long long tot = opt_.retain ? static_cast<long long>(tiles_.size()) : total_;
            if (opt_.max_tiles && tot >= opt_.max_tiles) break;
            if (tot == 0) break;
            if (opt_.min_tile_volume > 0.0 &&
                root_vol_ * std::exp(-static_cast<double>(dim_) * min_value()) <
                    opt_.min_tile_volume)
                break;
            if (opt_.retain)
                step_retained();
            else
                step_counted();
            ++steps_;
            if (opt_.snapshot_every && steps_ % opt_.snapshot_every == 0)
                res.snapshots.push_back(make_snapshot());
        }
        if (res.snapshots.empty() || res.snapshots.back().step != steps_)
            res.snapshots.push_back(make_snapshot());
        res.steps = steps_;
        if (opt_.retain) {
            res.tiles.reserve(tiles_.size());
            for (const auto& t : tiles_) res.tiles.push_back({t.tile, t.val, t.entry});
        }
        return res;
    }

  private:
    // ---- shared helpers -------------------------------------------------

    double value_of(const std::vector<long long>& vec) const {
        double v = 0.0;
        for (std::size_t k = 0; k < vec.size(); ++k)
            v += static_cast<double>(vec[k]) * logp_[k];
        return v / static_cast<double>(L_);
    }

    BigRat exact_volume(const std::vector<long long>& vec) const {
        BigRat v = root_vol_rat_;
        for (std::size_t k = 0; k < vec.size(); ++k) {
            const long long e = static_cast<long long>(dim_) * vec[k] / L_;
            if (e > 0)
                v /= BigRat(boost::multiprecision::pow(graph_.exact.primes[k],
                                                       static_cast<unsigned>(e)));
            else if (e < 0)
                v *= BigRat(boost::multiprecision::pow(graph_.exact.primes[k],
                                                       static_cast<unsigned>(-e)));
        }
        return v;
    }

    // How many of `c` same-class parents of `type` take each alternative.
    // Consumes policy state exactly like `c` calls of pick_one.
    std::vector<long long> split_counts(std::size_t type, long long c) {
        const std::size_t n = s_.rules[type].size();
        std::vector<long long> out(n, 0);
        if (n == 1) {
            out[0] = c;
            return out;
        }
        switch (s_.policy.kind) {
            case RulePolicyKind::Fixed:
                out[s_.policy.index % n] = c;
                break;
            case RulePolicyKind::RoundRobin: {
                const std::size_t t = static_cast<std::size_t>(rr_[type] % n);
                const long long base = c / static_cast<long long>(n);
                const long long rem = c % static_cast<long long>(n);
                for (std::size_t j = 0; j < n; ++j)
                    out[j] = base +
                             (static_cast<long long>((j + n - t) % n) < rem ? 1 : 0);
                rr_[type] += static_cast<std::uint64_t>(c);
                break;
            }
            case RulePolicyKind::Random:
                for (long long i = 0; i < c; ++i) ++out[rng_.next_below(n)];
                break;
        }
        return out;
    }

    std::size_t pick_one(std::size_t type) {
        const std::size_t n = s_.rules[type].size();
        if (n == 1) return 0;
        switch (s_.policy.kind) {
            case RulePolicyKind::Fixed:
                return s_.policy.index % n;
            case RulePolicyKind::RoundRobin:
                return static_cast<std::size_t>(rr_[type]++ % n);
            case RulePolicyKind::Random:
                return static_cast<std::size_t>(rng_.next_below(n));
        }
        return 0;
    }

    double min_value() const {
        if (!opt_.retain) return classes_.begin()->first.first;
        double m = tiles_.front().val;
        for (const auto& t : tiles_) m = std::min(m, t.val);
        return m;
    }

    Snapshot make_snapshot() const {
        Snapshot snap;
        snap.step = steps_;
        snap.threshold = opt_.mode == SimMode::Kakutani ? last_threshold_
                                                        : static_cast<double>(steps_);
        snap.census = opt_.retain ? census_retained() : census_counted();
        snap.wall_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0_)
                           .count();
        return snap;
    }

    Census empty_census() const {
        Census c;
        c.type_counts.assign(s_.num_types(), 0);
        c.edge_counts.assign(s_.edges.size(), 0);
        c.type_volumes.assign(s_.num_types(), 0.0);
        c.edge_volumes.assign(s_.edges.size(), 0.0);
        c.exact = exact_vol_;
        if (exact_vol_) c.type_volumes_exact.assign(s_.num_types(), BigRat(0));
        return c;
    }

    void census_add(Census& c, std::size_t type, std::size_t entry, long long cnt,
                    double val, const BigRat* evol) const {
        c.total += cnt;
        c.type_counts[type] += cnt;
        const double vol = static_cast<double>(cnt) * root_vol_ *
                           std::exp(-static_cast<double>(dim_) * val);
        if (entry) {
            c.edge_counts[entry - 1] += cnt;
            c.edge_volumes[entry - 1] += vol;
        }
        c.type_volumes[type] += vol;
        if (evol) c.type_volumes_exact[type] += *evol * cnt;
    }

    Census census_counted() const {
        Census c = empty_census();
        for (const auto& [key, g] : classes_) {
            BigRat evol;
            if (exact_vol_) evol = exact_volume(key.second);
            for (const auto& [gk, cnt] : g)
                census_add(c, gk.first, gk.second, cnt, key.first,
                           exact_vol_ ? &evol : nullptr);
        }
        return c;
    }

    Census census_retained() const {
        Census c = empty_census();
        std::map<std::vector<long long>, BigRat> cache;
        for (const auto& t : tiles_) {
            const BigRat* evol = nullptr;
            if (exact_vol_) {
                auto it = cache.find(t.vec);
                if (it == cache.end()) it = cache.emplace(t.vec, exact_volume(t.vec)).first;
                evol = &it->second;
            }
            census_add(c, t.tile.type, t.entry, 1, t.val, evol);
        }
        return c;
    }

    // ---- counted (aggregated) mode --------------------------------------

    void insert_counted(const ClassKey& parent, std::size_t edge, long long c) {
        const EdgeInfo& ei = graph_.edges[edge];
        if (exact_keys_) {
            std::vector<long long> vec = parent.second;
            const auto& ev = graph_.exact.edge_vec[edge];
            for (std::size_t k = 0; k < vec.size(); ++k) vec[k] += ev[k];
            const double v = value_of(vec);
            classes_[ClassKey{v, std::move(vec)}][GroupKey{ei.to, edge + 1}] += c;
        } else {
            const double v = parent.first + ei.length;
            const double tol = merge_tol(v);
            auto it = classes_.lower_bound(ClassKey{v - tol, {}});
            if (it == classes_.end() || it->first.first > v + tol)
                it = classes_.emplace(ClassKey{v, std::vector<long long>{}}, Groups{})
                         .first;
            it->second[GroupKey{ei.to, edge + 1}] += c;
        }
        total_ += c;
        if (total_ > kCountGuard) throw Error("tile count exceeds the 64-bit budget");
    }

    void substitute_groups(const ClassKey& key, const Groups& g) {
        for (const auto& [gk, c] : g) {
            const auto counts = split_counts(gk.first, c);
            const auto& alts = s_.rules[gk.first];
            for (std::size_t j = 0; j < counts.size(); ++j) {
                if (!counts[j]) continue;
                for (const auto& st : alts[j]) insert_counted(key, st.edge_id, counts[j]);
            }
        }
    }

    void step_counted() {
        if (opt_.mode == SimMode::Kakutani) {
            auto it = classes_.begin();
            const ClassKey key = it->first;
            const Groups g = std::move(it->second);
            classes_.erase(it);
            last_threshold_ = key.first;
            for (const auto& [gk, c] : g) total_ -= c;
            substitute_groups(key, g);
        } else {
            const auto old = std::move(classes_);
            classes_.clear();
            total_ = 0;
            for (const auto& [key, g] : old) substitute_groups(key, g);
        }
    }

    // ---- retained (explicit placement) mode -----------------------------

    // Substitution order inside a class batch is (prototile, entry, position),
    // matching the aggregated mode's group iteration, so both modes consume
    // the rule policy identically.
    void order_batch(std::vector<std::size_t>& batch) const {
        std::sort(batch.begin(), batch.end(), [&](std::size_t a, std::size_t b) {
            const ETile& x = tiles_[a];
            const ETile& y = tiles_[b];
            return std::tie(x.tile.type, x.entry, a) < std::tie(y.tile.type, y.entry, b);
        });
    }

    void check_cap(std::size_t projected) const {
        if (projected > opt_.retain_cap)
            throw Error("retained tile budget exceeded (cap " +
                        std::to_string(opt_.retain_cap) + ", step needs " +
                        std::to_string(projected) + ")");
    }

    void substitute_tile(const ETile& t, std::vector<ETile>& out) {
        const std::size_t alt = pick_one(t.tile.type);
        for (auto& child : apply_rule(s_, t.tile.type, t.tile.placement, alt)) {
            ETile e2;
            e2.entry = child.last_edge + 1;
            if (exact_keys_) {
                e2.vec = t.vec;
                const auto& ev = graph_.exact.edge_vec[child.last_edge];
                for (std::size_t k = 0; k < e2.vec.size(); ++k) e2.vec[k] += ev[k];
                e2.val = value_of(e2.vec);
            } else {
                e2.val = t.val + graph_.edges[child.last_edge].length;
            }
            e2.tile = std::move(child);
            out.push_back(std::move(e2));
        }
    }

    void step_retained() {
        if (opt_.mode == SimMode::Kakutani) {
            std::size_t mi = 0;
            for (std::size_t i = 1; i < tiles_.size(); ++i)
                if (std::tie(tiles_[i].val, tiles_[i].vec) <
                    std::tie(tiles_[mi].val, tiles_[mi].vec))
                    mi = i;
            std::vector<std::size_t> batch;
            if (exact_keys_) {
                for (std::size_t i = 0; i < tiles_.size(); ++i)
                    if (tiles_[i].vec == tiles_[mi].vec) batch.push_back(i);
            } else {
                const double v = tiles_[mi].val;
                const double tol = merge_tol(v);
                for (std::size_t i = 0; i < tiles_.size(); ++i)
                    if (tiles_[i].val <= v + tol) batch.push_back(i);
            }
            last_threshold_ = tiles_[mi].val;
            std::size_t projected = tiles_.size() - batch.size();
            for (std::size_t i : batch) projected += rule_size_[tiles_[i].tile.type];
            check_cap(projected);
            order_batch(batch);
            std::vector<ETile> children;
            for (std::size_t i : batch) substitute_tile(tiles_[i], children);
            std::vector<bool> drop(tiles_.size(), false);
            for (std::size_t i : batch) drop[i] = true;
            std::vector<ETile> next;
            next.reserve(projected);
            for (std::size_t i = 0; i < tiles_.size(); ++i)
                if (!drop[i]) next.push_back(std::move(tiles_[i]));
            for (auto& c : children) next.push_back(std::move(c));
            tiles_ = std::move(next);
        } else {
            std::size_t projected = 0;
            for (const auto& t : tiles_) projected += rule_size_[t.tile.type];
            check_cap(projected);
            // Cluster equal-length classes, then order like the counted mode.
            std::vector<std::size_t> order(tiles_.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::vector<std::size_t> cluster(tiles_.size(), 0);
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return std::tie(tiles_[a].val, tiles_[a].vec, a) <
                       std::tie(tiles_[b].val, tiles_[b].vec, b);
            });
            std::size_t cid = 0;
            double rep = 0.0;
            for (std::size_t i = 0; i < order.size(); ++i) {
                if (i > 0) {
                    const ETile& prev = tiles_[order[i - 1]];
                    const ETile& cur = tiles_[order[i]];
                    const bool same = exact_keys_ ? cur.vec == prev.vec
                                                  : cur.val - rep <= merge_tol(rep);
                    if (!same) {
                        ++cid;
                        rep = cur.val;
                    }
                } else {
                    rep = tiles_[order[i]].val;
                }
                cluster[order[i]] = cid;
            }
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return std::tie(cluster[a], tiles_[a].tile.type, tiles_[a].entry, a) <
                       std::tie(cluster[b], tiles_[b].tile.type, tiles_[b].entry, b);
            });
            std::vector<ETile> next;
            next.reserve(projected);
            for (std::size_t i : order) substitute_tile(tiles_[i], next);
            tiles_ = std::move(next);
        }
    }

    // ---- members --------------------------------------------------------

    const Scheme& s_;
    EngineOptions opt_;
    AssocGraph graph_;
    unsigned dim_ = 1;
    bool exact_keys_ = false;
    bool exact_vol_ = false;
    long L_ = 1;
    std::vector<double> logp_;
    std::vector<std::size_t> rule_size_;
    SplitMix64 rng_;
    std::vector<std::uint64_t> rr_;
    double root_vol_ = 1.0;
    BigRat root_vol_rat_;

    std::map<ClassKey, Groups> classes_;
    long long total_ = 0;
    std::vector<ETile> tiles_;
    double last_threshold_ = 0.0;
    std::size_t steps_ = 0;
    std::chrono::steady_clock::time_point t0_;
};

}  // namespace

double Census::count_fraction(std::size_t type) const {
    return total > 0 ? static_cast<double>(type_counts[type]) / static_cast<double>(total)
                     : 0.0;
}

double Census::total_volume() const {
    double v = 0.0;
    for (double x : type_volumes) v += x;
    return v;
}

double Census::volume_fraction(std::size_t type) const {
    const double tv = total_volume();
    return tv > 0.0 ? type_volumes[type] / tv : 0.0;
}

SimResult simulate(const Scheme& s, const EngineOptions& opt) {
    Engine eng(s, opt);
    return eng.run();
}

std::vector<std::vector<double>> marking_points(const Scheme& s,
                                                const std::vector<RetainedTile>& tiles) {
    std::vector<std::vector<double>> pts;
    pts.reserve(tiles.size());
    for (const auto& t : tiles) {
        const auto& mp = s.prototiles[t.tile.type].marking_point;
        const std::vector<double> x =
            mp.empty() ? std::vector<double>(s.dimension, 0.0) : mp;
        pts.push_back(t.tile.placement.apply(x, s.dimension));
    }
    return pts;
}

}  // namespace tilesplit
