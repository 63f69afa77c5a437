#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tilesplit/util.hpp"

namespace tilesplit {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Parse "p/q" or "p" (arbitrary-precision integers) into a rational.
/// Throws ParseError on malformed input or q = 0.
[[nodiscard]] BigRat parse_rational(const std::string& text);

/// Format a rational as "p/q" ("p" when q = 1).
[[nodiscard]] std::string format_rational(const BigRat& r);

/// Exact integer k-th root: returns x with x^k == n, or nullopt.
[[nodiscard]] std::optional<BigInt> exact_iroot(const BigInt& n, unsigned k);

/// Prime factorization of a positive integer (trial division + Pollard rho).
/// Returned as (prime, exponent) pairs, primes ascending.
[[nodiscard]] std::vector<std::pair<BigInt, int>> factorize(BigInt n);

/// log of a positive big integer, usable far beyond double range.
[[nodiscard]] double log_bigint(const BigInt& n);

/// log of a positive rational.
[[nodiscard]] double log_bigrat(const BigRat& r);

/// A strictly positive scale value.  Exact values are q-th roots of positive
/// rationals, b^(1/r) — the smallest algebra containing rationals and all the
/// d-th roots taken by the volume-normalized scale formula
/// beta = (vol_j / vol_i)^(1/d) * alpha, and closed under multiplication,
/// division, integer powers and integer roots.  Values that fall outside it
/// (the golden ratio, 1 + sqrt 2, ...) are carried as plain doubles instead,
/// and any operation touching a numeric value yields a numeric value.
///
/// Exact representation is canonical (root r minimal, base reduced), so
/// equality and total order are decidable exactly.
class Scalar {
  public:
    /// Defaults to exact 1.
    Scalar() : exact_(true), base_(1), root_(1), approx_(1.0) {}

    [[nodiscard]] static Scalar from_rational(BigRat r);
    [[nodiscard]] static Scalar from_int(long v) { return from_rational(BigRat(v)); }
    [[nodiscard]] static Scalar from_double(double v);
    /// base^(p/q) with exact rational base.
    [[nodiscard]] static Scalar from_power(const BigRat& base, const BigRat& exponent);
    [[nodiscard]] static Scalar one() { return {}; }

    [[nodiscard]] bool is_exact() const { return exact_; }
    [[nodiscard]] bool is_rational() const { return exact_ && root_ == 1; }
    [[nodiscard]] bool is_one() const;

    /// Exact rational value; only valid when is_rational().
    [[nodiscard]] const BigRat& rational() const { return base_; }
    /// Exact base b of b^(1/r); only valid when is_exact().
    [[nodiscard]] const BigRat& base() const { return base_; }
    /// Exact root r of b^(1/r); only valid when is_exact().
    [[nodiscard]] unsigned root() const { return root_; }

    [[nodiscard]] double to_double() const { return approx_; }
    /// Natural log of the value (numeric).
    [[nodiscard]] double log() const;

    [[nodiscard]] Scalar operator*(const Scalar& o) const;
    [[nodiscard]] Scalar operator/(const Scalar& o) const;
    [[nodiscard]] Scalar reciprocal() const;
    /// Integer power (k may be negative).
    [[nodiscard]] Scalar pow_int(long k) const;
    /// Exact k-th root (k >= 1); always representable for exact values.
    [[nodiscard]] Scalar nth_root(unsigned k) const;

    /// Three-way compare by value: -1, 0, +1.  Exact vs exact is decided
    /// exactly; any numeric operand falls back to double comparison.
    [[nodiscard]] int compare(const Scalar& o) const;

    [[nodiscard]] bool operator==(const Scalar& o) const { return compare(o) == 0; }
    [[nodiscard]] bool operator<(const Scalar& o) const { return compare(o) < 0; }
    [[nodiscard]] bool operator<=(const Scalar& o) const { return compare(o) <= 0; }
    [[nodiscard]] bool operator>(const Scalar& o) const { return compare(o) > 0; }
    [[nodiscard]] bool operator>=(const Scalar& o) const { return compare(o) >= 0; }

    /// Human-readable form: "2/3", "(1/5)^(1/2)", or a bare double.
    [[nodiscard]] std::string str() const;

  private:
    void canonicalize();
    void refresh_approx();

    bool exact_;
    BigRat base_;    // value = base_^(1/root_) when exact
    unsigned root_;  // >= 1, minimal
    double approx_;  // always maintained
};

}  // namespace tilesplit
