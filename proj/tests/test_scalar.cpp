#include "doctest.h"
#include "tilesplit/scalar.hpp"

#include <cmath>

using namespace tilesplit;

TEST_CASE("splitmix64 reference stream") {
    // First outputs of the reference implementation for seed 0.
    SplitMix64 g(0);
    CHECK(g.next() == 0xE220A8397B1DCDAFull);
    CHECK(g.next() == 0x6E789E6AA1B965F4ull);
    CHECK(g.next() == 0x06C45D188009454Full);
    SplitMix64 h(0);
    double d = h.next_double();
    CHECK(d >= 0.0);
    CHECK(d < 1.0);
}

TEST_CASE("hash_mix is order independent") {
    CHECK(hash_mix(42, 7) == hash_mix(42, 7));
    CHECK(hash_mix(42, 7) != hash_mix(42, 8));
    CHECK(hash_mix(42, 7) != hash_mix(43, 7));
}

TEST_CASE("parse_rational accepts p/q and p") {
    CHECK(parse_rational("3/4") == BigRat(3, 4));
    CHECK(parse_rational("-2/6") == BigRat(-1, 3));
    CHECK(parse_rational("7") == BigRat(7));
    CHECK(parse_rational("+5/10") == BigRat(1, 2));
    CHECK(parse_rational("123456789012345678901234567890/3") ==
          BigRat(BigInt("123456789012345678901234567890"), 3));
    CHECK_THROWS_AS((void)parse_rational(""), ParseError);
    CHECK_THROWS_AS((void)parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS((void)parse_rational("a/b"), ParseError);
    CHECK_THROWS_AS((void)parse_rational("1.5"), ParseError);
    CHECK_THROWS_AS((void)parse_rational("1/"), ParseError);
}

TEST_CASE("format_rational round-trips") {
    for (const char* s : {"3/4", "-1/3", "7", "0", "22/7"}) {
        CHECK(format_rational(parse_rational(s)) == s);
    }
}

TEST_CASE("exact_iroot") {
    CHECK(exact_iroot(BigInt(64), 2) == BigInt(8));
    CHECK(exact_iroot(BigInt(64), 3) == BigInt(4));
    CHECK(exact_iroot(BigInt(64), 6) == BigInt(2));
    CHECK(exact_iroot(BigInt(1) << 100, 2) == BigInt(1) << 50);
    CHECK(!exact_iroot(BigInt(63), 2).has_value());
    CHECK(!exact_iroot(BigInt(2), 3).has_value());
    CHECK(exact_iroot(BigInt(1), 5) == BigInt(1));
    CHECK(exact_iroot(BigInt(0), 3) == BigInt(0));
}

TEST_CASE("factorize") {
    auto f = factorize(BigInt(360));
    REQUIRE(f.size() == 3);
    CHECK(f[0] == std::pair<BigInt, int>(2, 3));
    CHECK(f[1] == std::pair<BigInt, int>(3, 2));
    CHECK(f[2] == std::pair<BigInt, int>(5, 1));

    auto p = factorize(BigInt("2305843009213693951"));  // Mersenne prime 2^61-1
    REQUIRE(p.size() == 1);
    CHECK(p[0].second == 1);

    // Semiprime beyond the trial-division bound exercises Pollard rho.
    BigInt a("1000003"), b("1000033");
    auto sp = factorize(a * b);
    REQUIRE(sp.size() == 2);
    CHECK(sp[0].first == a);
    CHECK(sp[1].first == b);

    CHECK(factorize(BigInt(1)).empty());
}

TEST_CASE("log_bigint far beyond double range") {
    BigInt huge = BigInt(1) << 5000;
    CHECK(log_bigint(huge) == doctest::Approx(5000.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(log_bigint(BigInt(1000)) == doctest::Approx(std::log(1000.0)));
    CHECK(log_bigrat(BigRat(1, 3)) == doctest::Approx(-std::log(3.0)));
}

TEST_CASE("scalar canonicalization") {
    Scalar s = Scalar::from_power(parse_rational("4/9"), parse_rational("1/2"));
    CHECK(s.is_rational());
    CHECK(s.rational() == BigRat(2, 3));

    Scalar c = Scalar::from_power(parse_rational("8/27"), parse_rational("1/3"));
    CHECK(c.is_rational());
    CHECK(c.rational() == BigRat(2, 3));

    Scalar h = Scalar::from_power(parse_rational("2/4"), parse_rational("1/2"));
    CHECK(h.is_exact());
    CHECK(!h.is_rational());
    CHECK(h.base() == BigRat(1, 2));
    CHECK(h.root() == 2);

    // 64^(1/6) = 2
    Scalar k = Scalar::from_power(parse_rational("64"), parse_rational("1/6"));
    CHECK(k.is_rational());
    CHECK(k.rational() == BigRat(2));

    // 4^(1/6) = 2^(1/3): partial reduction
    Scalar q = Scalar::from_power(parse_rational("4"), parse_rational("1/6"));
    CHECK(q.base() == BigRat(2));
    CHECK(q.root() == 3);
}

TEST_CASE("scalar from_power exponent handling") {
    CHECK(Scalar::from_power(parse_rational("8"), parse_rational("2/3")).rational() == BigRat(4));
    Scalar inv = Scalar::from_power(parse_rational("2"), parse_rational("-1/2"));
    CHECK(inv.base() == BigRat(1, 2));
    CHECK(inv.root() == 2);
    CHECK(Scalar::from_power(parse_rational("5"), parse_rational("0")).is_one());
    CHECK_THROWS_AS((void)Scalar::from_power(parse_rational("-2"), parse_rational("1/2")),
                    InvalidScheme);
}

TEST_CASE("scalar arithmetic closure") {
    Scalar r2inv = Scalar::from_power(parse_rational("1/2"), parse_rational("1/2"));
    Scalar p = r2inv * r2inv;
    CHECK(p.is_rational());
    CHECK(p.rational() == BigRat(1, 2));

    Scalar m = r2inv * Scalar::from_power(parse_rational("1/8"), parse_rational("1/2"));
    CHECK(m.is_rational());
    CHECK(m.rational() == BigRat(1, 4));

    Scalar d = Scalar::from_rational(BigRat(1, 2)) / r2inv;
    CHECK(d == r2inv);

    CHECK(r2inv.reciprocal().base() == BigRat(2));
    CHECK((r2inv.reciprocal() * r2inv).is_one());

    // Mixed roots: 2^(1/2) * 2^(1/3) = 2^(5/6)
    Scalar x = Scalar::from_power(parse_rational("2"), parse_rational("1/2")) *
               Scalar::from_power(parse_rational("2"), parse_rational("1/3"));
    CHECK(x.base() == BigRat(32));
    CHECK(x.root() == 6);
    CHECK(x.to_double() == doctest::Approx(std::pow(2.0, 5.0 / 6.0)));
}

TEST_CASE("scalar pow_int and nth_root") {
    Scalar r2inv = Scalar::from_power(parse_rational("1/2"), parse_rational("1/2"));
    CHECK(r2inv.pow_int(2).rational() == BigRat(1, 2));
    Scalar cube = r2inv.pow_int(3);
    CHECK(cube.base() == BigRat(1, 8));
    CHECK(cube.root() == 2);
    CHECK(r2inv.pow_int(-2).rational() == BigRat(2));
    CHECK(r2inv.pow_int(0).is_one());

    CHECK(Scalar::from_int(16).nth_root(4).rational() == BigRat(2));
    Scalar q = Scalar::from_int(2).nth_root(2).nth_root(2);
    CHECK(q.base() == BigRat(2));
    CHECK(q.root() == 4);
}

TEST_CASE("scalar exact comparison") {
    Scalar r = Scalar::from_power(parse_rational("1/2"), parse_rational("1/2"));
    Scalar tt = Scalar::from_rational(BigRat(2, 3));
    // (1/2)^(1/2) vs 2/3: squares are 1/2 vs 4/9, so the root is larger.
    CHECK(r > tt);
    CHECK(tt < r);
    CHECK(r == r);
    CHECK(r >= r);
    // Values whose doubles collide but whose exact forms differ by ~1e-25.
    BigRat close1(BigInt("10000000000000000000000000"), BigInt("20000000000000000000000001"));
    BigRat close2(BigInt("10000000000000000000000000"), BigInt("20000000000000000000000003"));
    CHECK(Scalar::from_rational(close1) > Scalar::from_rational(close2));
}

TEST_CASE("scalar numeric values and contagion") {
    double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    Scalar b = Scalar::from_double(std::pow(phi, -1.5));
    CHECK(!b.is_exact());
    CHECK(b.to_double() == doctest::Approx(0.48586827175664565).epsilon(1e-15));
    CHECK(b.log() == doctest::Approx(-1.5 * std::log(phi)));

    Scalar mixed = b * Scalar::from_rational(BigRat(1, 2));
    CHECK(!mixed.is_exact());
    CHECK(mixed.to_double() == doctest::Approx(b.to_double() / 2.0));

    CHECK_THROWS_AS((void)Scalar::from_double(0.0), InvalidScheme);
    CHECK_THROWS_AS((void)Scalar::from_double(-1.0), InvalidScheme);
    CHECK_THROWS_AS((void)Scalar::from_rational(BigRat(0)), InvalidScheme);
}

TEST_CASE("scalar str") {
    CHECK(Scalar::from_rational(BigRat(2, 3)).str() == "2/3");
    CHECK(Scalar::from_power(parse_rational("1/5"), parse_rational("1/2")).str() == "(1/5)^(1/2)");
    CHECK(Scalar::from_int(4).str() == "4");
}

TEST_CASE("scalar log is exact-friendly") {
    Scalar r = Scalar::from_power(parse_rational("1/2"), parse_rational("1/2"));
    CHECK(r.log() == doctest::Approx(-0.5 * std::log(2.0)).epsilon(1e-15));
    Scalar big = Scalar::from_rational(BigRat(BigInt(1) << 2000, 3));
    CHECK(big.log() == doctest::Approx(2000 * std::log(2.0) - std::log(3.0)).epsilon(1e-12));
}

// Frozen scale table for the two-prototile rectangle/square system used across
// the test suite: a 2x1 rectangle splits into a unit square, a half-scale copy
// of itself and two half-scale squares; the unit square splits into two
// third-scale rectangles, a third-scale square and a two-thirds-scale square.
TEST_CASE("rectangle/square contraction table") {
    const unsigned d = 2;
    auto beta = [&](const BigRat& vol_child, const BigRat& vol_parent, const BigRat& alpha) {
        return (Scalar::from_rational(vol_child) / Scalar::from_rational(vol_parent))
                   .nth_root(d) *
               Scalar::from_rational(alpha);
    };
    BigRat vr(2), vs(1);

    Scalar b_rs1 = beta(vs, vr, BigRat(1));     // unit square inside the rectangle
    Scalar b_rr = beta(vr, vr, BigRat(1, 2));   // half-scale rectangle
    Scalar b_rs2 = beta(vs, vr, BigRat(1, 2));  // half-scale squares (x2)
    Scalar b_sr = beta(vr, vs, BigRat(1, 3));   // third-scale rectangles (x2)
    Scalar b_ss1 = beta(vs, vs, BigRat(1, 3));
    Scalar b_ss2 = beta(vs, vs, BigRat(2, 3));

    CHECK(b_rs1.base() == BigRat(1, 2));
    CHECK(b_rs1.root() == 2);
    CHECK(b_rr.rational() == BigRat(1, 2));
    CHECK(b_rs2.base() == BigRat(1, 8));
    CHECK(b_rs2.root() == 2);
    CHECK(b_sr.base() == BigRat(2, 9));
    CHECK(b_sr.root() == 2);
    CHECK(b_ss1.rational() == BigRat(1, 3));
    CHECK(b_ss2.rational() == BigRat(2, 3));

    // Each parent's children must tile its full volume: sum of beta^d is 1.
    auto sq = [](const Scalar& s) { return s.pow_int(2); };
    Scalar row_r = sq(b_rs1) * Scalar::one();
    BigRat sum_r = sq(b_rs1).rational() + sq(b_rr).rational() + 2 * sq(b_rs2).rational();
    CHECK(sum_r == BigRat(1));
    BigRat sum_s = 2 * sq(b_sr).rational() + sq(b_ss1).rational() + sq(b_ss2).rational();
    CHECK(sum_s == BigRat(1));
    (void)row_r;
}

TEST_CASE("fnv1a64_hex is stable") {
    CHECK(fnv1a64_hex("") == "cbf29ce484222325");
    CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a64_hex("hello") == fnv1a64_hex("hello"));
    CHECK(fnv1a64_hex("hello") != fnv1a64_hex("hellp"));
}
