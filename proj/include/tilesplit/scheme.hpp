#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tilesplit/scalar.hpp"

namespace tilesplit {

/// Similarity map x -> scale * rotation * x + translation.
struct Placement {
    Scalar scale = Scalar::one();
    std::vector<double> rotation;     // d x d row-major; empty means identity
    std::vector<double> translation;  // size d; empty means zero

    [[nodiscard]] std::vector<double> apply(const std::vector<double>& x, unsigned dim) const;
};

/// Compose two similarity maps: (outer o inner)(x) = outer(inner(x)).
[[nodiscard]] Placement compose(const Placement& outer, const Placement& inner, unsigned dim);

/// One child in a substitution rule, in the parent's own coordinates.
struct SubstitutionTile {
    std::size_t child_type = 0;
    Placement placement;     // placement.scale is the contraction alpha
    std::size_t edge_id = 0; // index into Scheme::edges, shared across sibling rules
};

/// An ordered list of children replacing one parent.
using Rule = std::vector<SubstitutionTile>;

struct Prototile {
    std::string label;
    Scalar volume = Scalar::one();
    std::vector<double> marking_point;           // in prototile coordinates
    std::vector<std::vector<double>> polygon;    // optional outline; empty = none
};

enum class RulePolicyKind { Fixed, RoundRobin, Random };

/// How a rule alternative is chosen when a parent has several rules.
/// Selection is always reduced modulo the parent's alternative count, so one
/// policy works for schemes whose parents have different numbers of rules.
struct RulePolicy {
    RulePolicyKind kind = RulePolicyKind::Fixed;
    std::size_t index = 0;   // Fixed: which alternative
    std::uint64_t seed = 0;  // Random: PRNG seed
};

/// One canonical parent-to-child incidence.  Edges are defined on the first
/// rule of each parent; sibling rules reuse them (they must present the same
/// multiset of (child type, alpha) pairs).
struct EdgeInfo {
    std::size_t id = 0;
    std::size_t from = 0;  // parent prototile
    std::size_t to = 0;    // child prototile
    Scalar alpha;          // contraction applied to the child prototile
    Scalar beta;           // (vol_to / vol_from)^(1/d) * alpha, in (0,1)
    double length = 0.0;   // log(1 / beta)
};

struct Scheme {
    unsigned dimension = 1;
    std::vector<Prototile> prototiles;
    /// rules[i] holds the alternatives for parent i; at least one each.
    std::vector<std::vector<Rule>> rules;
    RulePolicy policy;

    /// Canonical edge list; filled by finalize_scheme / load_scheme.
    std::vector<EdgeInfo> edges;

    [[nodiscard]] std::size_t num_types() const { return prototiles.size(); }
    [[nodiscard]] std::size_t type_index(const std::string& label) const;  // throws ParseError
    [[nodiscard]] bool all_volumes_one() const;
};

/// A concrete tile of a partition: a prototile under a global placement.
struct Tile {
    std::size_t type = 0;
    Placement placement;
    std::size_t last_edge = 0;  // edge that created it; 0-edge for the root
};

/// Assign edge ids: sequential over each parent's first rule, then matched by
/// (child type, alpha) for sibling rules.  Throws InvalidScheme when sibling
/// rules disagree on the multiset.  Called by load_scheme.
void finalize_scheme(Scheme& s);

/// The contraction table: beta = (vol_child / vol_parent)^(1/d) * alpha for
/// every canonical edge, in edge-id order.  Throws InvalidScheme when any
/// value exceeds 1; exactly 1 (a chain tile handing its region on unchanged)
/// is kept with length 0 and left to validate_scheme to reject or accept.
[[nodiscard]] std::vector<EdgeInfo> compute_betas(const Scheme& s);

/// Full consistency check: labels, rule shapes, orthogonal rotations (1e-12),
/// beta range, per-parent volume conservation (sum of beta^d = 1; exact for
/// exact tables, 1e-9 otherwise), sibling-rule multisets, marking points and
/// polygon geometry.  Throws InvalidScheme with a specific message.  By
/// default each child must be strictly smaller than its parent (beta < 1);
/// allow_unit_beta permits beta = 1 edges, which rationalized fixed-scale
/// schemes use for their chain tiles.
void validate_scheme(const Scheme& s, bool allow_unit_beta = false);

/// Rescale every prototile to volume 1 (alpha becomes beta, translations are
/// rescaled by the parent's factor, outlines and markings by their own).
/// Idempotent; preserves the beta table and edge ids.
[[nodiscard]] Scheme normalize_scheme(const Scheme& s);

/// Substitute a parent tile located by `frame`, using the given alternative.
/// Children are returned in rule order with composed global placements.
[[nodiscard]] std::vector<Tile> apply_rule(const Scheme& s, std::size_t parent_type,
                                           const Placement& frame, std::size_t rule_index);

/// True when every child of every rule uses one and the same alpha.
[[nodiscard]] bool is_fixed_scale(const Scheme& s);

/// That common alpha; throws NotFixedScale otherwise.
[[nodiscard]] Scalar fixed_scale_alpha(const Scheme& s);

/// Per-edge substitution counts k_ij: entry (i,j) counts rule-0 children of
/// type j under parent i.
[[nodiscard]] std::vector<std::vector<long>> incidence_counts(const Scheme& s);

}  // namespace tilesplit
