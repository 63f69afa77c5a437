#include "tilesplit/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace tilesplit {

namespace {

std::vector<double> identity_rot(unsigned d) {
    std::vector<double> r(d * d, 0.0);
    for (unsigned i = 0; i < d; ++i) r[i * d + i] = 1.0;
    return r;
}

const std::vector<double>& rot_or_identity(const std::vector<double>& r, unsigned d,
                                           std::vector<double>& scratch) {
    if (!r.empty()) return r;
    scratch = identity_rot(d);
    return scratch;
}

std::vector<double> trans_or_zero(const std::vector<double>& t, unsigned d) {
    if (!t.empty()) return t;
    return std::vector<double>(d, 0.0);
}

bool scalar_close(const Scalar& x, const Scalar& y) {
    if (x.is_exact() && y.is_exact()) return x.compare(y) == 0;
    return std::fabs(x.to_double() - y.to_double()) <=
           1e-12 * std::max(1.0, std::fabs(x.to_double()));
}

double polygon_area_2d(const std::vector<std::vector<double>>& poly) {
    double s = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % poly.size()];
        s += p[0] * q[1] - q[0] * p[1];
    }
    return std::fabs(s) / 2.0;
}

}  // namespace

std::vector<double> Placement::apply(const std::vector<double>& x, unsigned dim) const {
    std::vector<double> scratch;
    const auto& rot = rot_or_identity(rotation, dim, scratch);
    std::vector<double> out = trans_or_zero(translation, dim);
    double s = scale.to_double();
    for (unsigned i = 0; i < dim; ++i)
        for (unsigned j = 0; j < dim; ++j) out[i] += s * rot[i * dim + j] * x[j];
    return out;
}

Placement compose(const Placement& outer, const Placement& inner, unsigned dim) {
    Placement r;
    r.scale = outer.scale * inner.scale;
    std::vector<double> so, si;
    const auto& ro = rot_or_identity(outer.rotation, dim, so);
    const auto& ri = rot_or_identity(inner.rotation, dim, si);
    r.rotation.assign(dim * dim, 0.0);
    for (unsigned i = 0; i < dim; ++i)
        for (unsigned k = 0; k < dim; ++k)
            for (unsigned j = 0; j < dim; ++j)
                r.rotation[i * dim + j] += ro[i * dim + k] * ri[k * dim + j];
    r.translation = outer.apply(trans_or_zero(inner.translation, dim), dim);
    return r;
}

std::size_t Scheme::type_index(const std::string& label) const {
    for (std::size_t i = 0; i < prototiles.size(); ++i)
        if (prototiles[i].label == label) return i;
    throw ParseError("unknown prototile label '" + label + "'");
}

bool Scheme::all_volumes_one() const {
    return std::all_of(prototiles.begin(), prototiles.end(),
                       [](const Prototile& p) { return p.volume.is_one(); });
}

void finalize_scheme(Scheme& s) {
    if (s.prototiles.empty()) throw InvalidScheme("scheme has no prototiles");
    if (s.rules.size() != s.prototiles.size())
        throw InvalidScheme("every prototile needs a rule list");
    s.edges.clear();
    for (std::size_t i = 0; i < s.rules.size(); ++i) {
        if (s.rules[i].empty())
            throw InvalidScheme("prototile '" + s.prototiles[i].label + "' has no rule");
        Rule& canon = s.rules[i][0];
        if (canon.empty())
            throw InvalidScheme("empty rule for prototile '" + s.prototiles[i].label + "'");
        for (SubstitutionTile& st : canon) {
            if (st.child_type >= s.prototiles.size())
                throw InvalidScheme("rule child type out of range");
            EdgeInfo e;
            e.id = s.edges.size();
            e.from = i;
            e.to = st.child_type;
            e.alpha = st.placement.scale;
            st.edge_id = e.id;
            s.edges.push_back(std::move(e));
        }
        // Sibling rules must present the same children; match each of their
        // slots to a distinct canonical slot to share its edge id.
        for (std::size_t r = 1; r < s.rules[i].size(); ++r) {
            Rule& alt = s.rules[i][r];
            std::vector<bool> used(canon.size(), false);
            for (SubstitutionTile& st : alt) {
                bool matched = false;
                for (std::size_t c = 0; c < canon.size(); ++c) {
                    if (used[c] || canon[c].child_type != st.child_type) continue;
                    if (!scalar_close(canon[c].placement.scale, st.placement.scale)) continue;
                    st.edge_id = canon[c].edge_id;
                    used[c] = true;
                    matched = true;
                    break;
                }
                if (!matched)
                    throw InvalidScheme(
                        "alternative rules for prototile '" + s.prototiles[i].label +
                        "' do not share one multiset of (child type, scale) pairs");
            }
            if (alt.size() != canon.size())
                throw InvalidScheme("alternative rules for prototile '" + s.prototiles[i].label +
                                    "' have different child counts");
        }
    }
    // Fill beta and length.
    auto betas = compute_betas(s);
    s.edges = std::move(betas);
}

std::vector<EdgeInfo> compute_betas(const Scheme& s) {
    std::vector<EdgeInfo> out;
    for (std::size_t i = 0; i < s.rules.size(); ++i) {
        const Rule& canon = s.rules[i][0];
        for (const SubstitutionTile& st : canon) {
            EdgeInfo e;
            e.id = out.size();
            e.from = i;
            e.to = st.child_type;
            e.alpha = st.placement.scale;
            Scalar ratio = s.prototiles[st.child_type].volume / s.prototiles[i].volume;
            e.beta = ratio.nth_root(s.dimension) * e.alpha;
            // Ratio 1 (a chain tile passing its region on unchanged) is
            // representable; validate_scheme rejects it unless asked not to.
            if (e.beta > Scalar::one())
                throw InvalidScheme("contraction ratio for a child of '" + s.prototiles[i].label +
                                    "' is " + e.beta.str() + "; every ratio must be at most 1");
            e.length = e.beta.is_one() ? 0.0 : -e.beta.log();
            out.push_back(std::move(e));
        }
    }
    return out;
}

void validate_scheme(const Scheme& s, bool allow_unit_beta) {
    if (s.dimension == 0) throw InvalidScheme("dimension must be at least 1");
    const unsigned d = s.dimension;
    std::set<std::string> labels;
    for (const Prototile& p : s.prototiles) {
        if (p.label.empty()) throw InvalidScheme("prototile with empty label");
        if (!labels.insert(p.label).second)
            throw InvalidScheme("duplicate prototile label '" + p.label + "'");
        if (!p.marking_point.empty() && p.marking_point.size() != d)
            throw InvalidScheme("marking point of '" + p.label + "' has wrong dimension");
        if (!p.polygon.empty()) {
            if (p.polygon.size() < (d == 1 ? 2u : d + 1u))
                throw InvalidScheme("outline of '" + p.label + "' has too few vertices");
            for (const auto& v : p.polygon)
                if (v.size() != d)
                    throw InvalidScheme("outline vertex of '" + p.label + "' has wrong dimension");
            double extent = 0.0;
            if (d == 1)
                extent = std::fabs(p.polygon[1][0] - p.polygon[0][0]);
            else if (d == 2)
                extent = polygon_area_2d(p.polygon);
            if (d <= 2) {
                double v = p.volume.to_double();
                if (std::fabs(extent - v) > 1e-9 * std::max(1.0, v))
                    throw InvalidScheme("outline of '" + p.label + "' encloses " +
                                        std::to_string(extent) + " but the declared volume is " +
                                        std::to_string(v));
            }
            if (!p.marking_point.empty()) {
                for (unsigned k = 0; k < d; ++k) {
                    double lo = p.polygon[0][k], hi = p.polygon[0][k];
                    for (const auto& v : p.polygon) {
                        lo = std::min(lo, v[k]);
                        hi = std::max(hi, v[k]);
                    }
                    if (p.marking_point[k] < lo - 1e-9 || p.marking_point[k] > hi + 1e-9)
                        throw InvalidScheme("marking point of '" + p.label +
                                            "' lies outside its outline");
                }
            }
        }
    }
    if (s.rules.size() != s.prototiles.size())
        throw InvalidScheme("every prototile needs a rule list");
    for (std::size_t i = 0; i < s.rules.size(); ++i) {
        for (const Rule& rule : s.rules[i]) {
            for (const SubstitutionTile& st : rule) {
                if (st.child_type >= s.prototiles.size())
                    throw InvalidScheme("rule child type out of range");
                const Placement& pl = st.placement;
                if (!pl.rotation.empty()) {
                    if (pl.rotation.size() != std::size_t(d) * d)
                        throw InvalidScheme("rotation matrix has wrong shape in a rule of '" +
                                            s.prototiles[i].label + "'");
                    // R^T R must be the identity to 1e-12.
                    for (unsigned a = 0; a < d; ++a)
                        for (unsigned b = 0; b < d; ++b) {
                            double dot = 0.0;
                            for (unsigned k = 0; k < d; ++k)
                                dot += pl.rotation[k * d + a] * pl.rotation[k * d + b];
                            double want = (a == b) ? 1.0 : 0.0;
                            if (std::fabs(dot - want) > 1e-12)
                                throw InvalidScheme("non-orthogonal rotation in a rule of '" +
                                                    s.prototiles[i].label + "'");
                        }
                }
                if (!pl.translation.empty() && pl.translation.size() != d)
                    throw InvalidScheme("translation has wrong dimension in a rule of '" +
                                        s.prototiles[i].label + "'");
            }
        }
    }
    // Edge table: betas in range and volume conservation per parent.
    auto edges = compute_betas(s);
    if (!allow_unit_beta) {
        for (const EdgeInfo& e : edges)
            if (e.beta.is_one())
                throw InvalidScheme("a child of '" + s.prototiles[e.from].label +
                                    "' (edge " + std::to_string(e.id) +
                                    ") has contraction ratio exactly 1; every child must be "
                                    "strictly smaller than its parent");
    }
    for (std::size_t i = 0; i < s.prototiles.size(); ++i) {
        bool all_rational = true;
        BigRat exact_sum = 0;
        double num_sum = 0.0;
        for (const EdgeInfo& e : edges) {
            if (e.from != i) continue;
            Scalar bd = e.beta.pow_int(static_cast<long>(d));
            if (bd.is_rational())
                exact_sum += bd.rational();
            else
                all_rational = false;
            num_sum += bd.to_double();
        }
        if (all_rational) {
            if (exact_sum != 1)
                throw InvalidScheme("children of '" + s.prototiles[i].label +
                                    "' cover volume fraction " + format_rational(exact_sum) +
                                    " of their parent; rules must conserve volume");
        } else if (std::fabs(num_sum - 1.0) > 1e-9) {
            throw InvalidScheme("children of '" + s.prototiles[i].label +
                                "' cover volume fraction " + std::to_string(num_sum) +
                                " of their parent; rules must conserve volume");
        }
    }
    // Sibling-rule multiset agreement (also enforced during finalize).
    Scheme copy = s;
    finalize_scheme(copy);
}

Scheme normalize_scheme(const Scheme& s) {
    const unsigned d = s.dimension;
    Scheme out;
    out.dimension = d;
    out.policy = s.policy;
    out.prototiles = s.prototiles;
    std::vector<double> factor(s.prototiles.size(), 1.0);
    for (std::size_t i = 0; i < s.prototiles.size(); ++i) {
        const Scalar& vol = s.prototiles[i].volume;
        factor[i] = std::pow(vol.to_double(), -1.0 / static_cast<double>(d));
        Prototile& p = out.prototiles[i];
        p.volume = Scalar::one();
        for (double& x : p.marking_point) x *= factor[i];
        for (auto& v : p.polygon)
            for (double& x : v) x *= factor[i];
    }
    out.rules = s.rules;
    for (std::size_t i = 0; i < out.rules.size(); ++i) {
        for (Rule& rule : out.rules[i]) {
            for (SubstitutionTile& st : rule) {
                Scalar ratio = s.prototiles[st.child_type].volume / s.prototiles[i].volume;
                st.placement.scale = ratio.nth_root(d) * st.placement.scale;
                for (double& x : st.placement.translation) x *= factor[i];
            }
        }
    }
    finalize_scheme(out);
    return out;
}

std::vector<Tile> apply_rule(const Scheme& s, std::size_t parent_type, const Placement& frame,
                             std::size_t rule_index) {
    if (parent_type >= s.rules.size()) throw Error("parent type out of range");
    const auto& alts = s.rules[parent_type];
    if (rule_index >= alts.size()) throw Error("rule alternative out of range");
    const Rule& rule = alts[rule_index];
    std::vector<Tile> out;
    out.reserve(rule.size());
    for (const SubstitutionTile& st : rule) {
        Tile t;
        t.type = st.child_type;
        t.placement = compose(frame, st.placement, s.dimension);
        t.last_edge = st.edge_id;
        out.push_back(std::move(t));
    }
    return out;
}

bool is_fixed_scale(const Scheme& s) {
    const Scalar* first = nullptr;
    for (const auto& alts : s.rules)
        for (const Rule& rule : alts)
            for (const SubstitutionTile& st : rule) {
                if (!first)
                    first = &st.placement.scale;
                else if (!scalar_close(*first, st.placement.scale))
                    return false;
            }
    return first != nullptr;
}

Scalar fixed_scale_alpha(const Scheme& s) {
    if (!is_fixed_scale(s))
        throw NotFixedScale("the scheme applies more than one contraction value");
    return s.rules[0][0][0].placement.scale;
}

std::vector<std::vector<long>> incidence_counts(const Scheme& s) {
    std::vector<std::vector<long>> k(s.num_types(), std::vector<long>(s.num_types(), 0));
    for (std::size_t i = 0; i < s.rules.size(); ++i)
        for (const SubstitutionTile& st : s.rules[i][0]) ++k[i][st.child_type];
    return k;
}

}  // namespace tilesplit
