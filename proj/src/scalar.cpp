#include "tilesplit/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tilesplit {

namespace {

using boost::multiprecision::denominator;
using boost::multiprecision::numerator;

BigInt parse_bigint(const std::string& text) {
    if (text.empty()) throw ParseError("empty integer literal");
    std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    if (i == text.size()) throw ParseError("malformed integer literal '" + text + "'");
    for (std::size_t j = i; j < text.size(); ++j)
        if (text[j] < '0' || text[j] > '9')
            throw ParseError("malformed integer literal '" + text + "'");
    BigInt v(text.substr(i));
    return text[0] == '-' ? -v : v;
}

BigInt ipow(BigInt b, unsigned k) {
    BigInt r = 1;
    while (k) {
        if (k & 1u) r *= b;
        b *= b;
        k >>= 1u;
    }
    return r;
}

BigRat rat_pow(const BigRat& b, unsigned k) {
    return BigRat(ipow(numerator(b), k), ipow(denominator(b), k));
}

// --- Miller-Rabin over cpp_int -------------------------------------------

BigInt mulmod(const BigInt& a, const BigInt& b, const BigInt& m) { return a * b % m; }

BigInt powmod(BigInt b, BigInt e, const BigInt& m) {
    BigInt r = 1;
    b %= m;
    while (e > 0) {
        if ((e & 1) != 0) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

bool is_probable_prime(const BigInt& n) {
    if (n < 2) return false;
    for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    BigInt d = n - 1;
    unsigned r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (int a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        BigInt x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (unsigned i = 1; i < r; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

BigInt pollard_rho(const BigInt& n) {
    if (n % 2 == 0) return 2;
    SplitMix64 rng(0x5eed5eedULL + static_cast<std::uint64_t>(n % 1000003));
    while (true) {
        BigInt x = BigInt(rng.next()) % n;
        BigInt y = x;
        BigInt c = BigInt(rng.next()) % n + 1;
        BigInt d = 1;
        while (d == 1) {
            x = (mulmod(x, x, n) + c) % n;
            y = (mulmod(y, y, n) + c) % n;
            y = (mulmod(y, y, n) + c) % n;
            BigInt diff = x > y ? x - y : y - x;
            if (diff == 0) break;
            d = gcd(diff, n);
        }
        if (d != 1 && d != n) return d;
    }
}

void factor_into(BigInt n, std::vector<std::pair<BigInt, int>>& out) {
    if (n <= 1) return;
    if (is_probable_prime(n)) {
        out.emplace_back(n, 1);
        return;
    }
    BigInt d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

BigRat parse_rational(const std::string& text) {
    auto slash = text.find('/');
    BigInt num, den = 1;
    if (slash == std::string::npos) {
        num = parse_bigint(text);
    } else {
        num = parse_bigint(text.substr(0, slash));
        den = parse_bigint(text.substr(slash + 1));
        if (den == 0) throw ParseError("zero denominator in '" + text + "'");
    }
    return BigRat(num, den);
}

std::string format_rational(const BigRat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

std::optional<BigInt> exact_iroot(const BigInt& n, unsigned k) {
    if (n < 0) return std::nullopt;
    if (n == 0 || n == 1 || k == 1) return n;
    // Newton iteration from a power-of-two upper bound.
    unsigned bits = boost::multiprecision::msb(n) + 1;
    BigInt x = BigInt(1) << (bits / k + 1);
    while (true) {
        BigInt xk1 = ipow(x, k - 1);
        BigInt next = ((k - 1) * x + n / xk1) / k;
        if (next >= x) break;
        x = next;
    }
    if (ipow(x, k) == n) return x;
    return std::nullopt;
}

std::vector<std::pair<BigInt, int>> factorize(BigInt n) {
    if (n <= 0) throw Error("factorize expects a positive integer");
    std::vector<std::pair<BigInt, int>> flat;
    // Trial division by small primes first; Pollard rho for what remains.
    for (long p = 2; p < 100000 && BigInt(p) * p <= n; p == 2 ? p = 3 : p += 2) {
        while (n % p == 0) {
            flat.emplace_back(p, 1);
            n /= p;
        }
    }
    factor_into(n, flat);
    std::sort(flat.begin(), flat.end());
    std::vector<std::pair<BigInt, int>> out;
    for (auto& [p, e] : flat) {
        if (!out.empty() && out.back().first == p)
            out.back().second += e;
        else
            out.emplace_back(p, e);
    }
    return out;
}

double log_bigint(const BigInt& n) {
    if (n <= 0) throw Error("log of non-positive integer");
    unsigned bits = boost::multiprecision::msb(n) + 1;
    if (bits <= 900) return std::log(n.convert_to<double>());
    BigInt top = n >> (bits - 64);
    return std::log(top.convert_to<double>()) + static_cast<double>(bits - 64) * std::log(2.0);
}

double log_bigrat(const BigRat& r) {
    return log_bigint(numerator(r)) - log_bigint(denominator(r));
}

// ============================================================
// Scalar
// ============================================================

Scalar Scalar::from_rational(BigRat r) {
    if (r <= 0) throw InvalidScheme("scale values must be positive, got " + format_rational(r));
    Scalar s;
    s.exact_ = true;
    s.base_ = std::move(r);
    s.root_ = 1;
    s.refresh_approx();
    return s;
}

Scalar Scalar::from_double(double v) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw InvalidScheme("numeric scale values must be finite and positive");
    Scalar s;
    s.exact_ = false;
    s.base_ = 0;
    s.root_ = 1;
    s.approx_ = v;
    return s;
}

Scalar Scalar::from_power(const BigRat& base, const BigRat& exponent) {
    if (base <= 0) throw InvalidScheme("power base must be positive");
    BigInt p = numerator(exponent), q = denominator(exponent);  // q > 0
    if (q > 1000000) throw InvalidScheme("power exponent denominator too large");
    bool invert = p < 0;
    if (invert) p = -p;
    if (p > 1000000) throw InvalidScheme("power exponent numerator too large");
    Scalar s;
    s.exact_ = true;
    s.base_ = rat_pow(base, p.convert_to<unsigned>());
    if (invert && s.base_ != 0) s.base_ = 1 / s.base_;
    s.root_ = q.convert_to<unsigned>();
    if (p == 0) {
        s.base_ = 1;
        s.root_ = 1;
    }
    s.canonicalize();
    s.refresh_approx();
    return s;
}

bool Scalar::is_one() const {
    if (exact_) return base_ == 1;
    return approx_ == 1.0;
}

double Scalar::log() const {
    if (exact_) return log_bigrat(base_) / static_cast<double>(root_);
    return std::log(approx_);
}

void Scalar::refresh_approx() {
    double lb = log_bigrat(base_);
    approx_ = std::exp(lb / static_cast<double>(root_));
    // Exact rationals in double range deserve the exactly-rounded quotient.
    if (root_ == 1) {
        double n = numerator(base_).convert_to<double>();
        double d = denominator(base_).convert_to<double>();
        if (std::isfinite(n) && std::isfinite(d) && d != 0.0) approx_ = n / d;
    }
}

void Scalar::canonicalize() {
    if (!exact_) return;
    if (base_ == 1) {
        root_ = 1;
        return;
    }
    if (root_ == 1) return;
    for (unsigned p = 2; p <= root_;) {
        if (root_ % p == 0) {
            auto rn = exact_iroot(numerator(base_), p);
            auto rd = rn ? exact_iroot(denominator(base_), p) : std::nullopt;
            if (rn && rd) {
                base_ = BigRat(*rn, *rd);
                root_ /= p;
                continue;  // same prime may divide the root again
            }
        }
        ++p;
    }
}

Scalar Scalar::operator*(const Scalar& o) const {
    if (!exact_ || !o.exact_) return from_double(approx_ * o.approx_);
    unsigned l = std::lcm(root_, o.root_);
    Scalar s;
    s.exact_ = true;
    s.base_ = rat_pow(base_, l / root_) * rat_pow(o.base_, l / o.root_);
    s.root_ = l;
    s.canonicalize();
    s.refresh_approx();
    return s;
}

Scalar Scalar::reciprocal() const {
    if (!exact_) return from_double(1.0 / approx_);
    Scalar s = *this;
    s.base_ = 1 / s.base_;
    s.refresh_approx();
    return s;
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.reciprocal(); }

Scalar Scalar::pow_int(long k) const {
    if (k == 0) return one();
    bool invert = k < 0;
    unsigned uk = static_cast<unsigned>(invert ? -k : k);
    Scalar s;
    if (!exact_) {
        s = from_double(std::pow(approx_, static_cast<double>(uk)));
    } else {
        s.exact_ = true;
        s.base_ = rat_pow(base_, uk);
        s.root_ = root_;
        s.canonicalize();
        s.refresh_approx();
    }
    return invert ? s.reciprocal() : s;
}

Scalar Scalar::nth_root(unsigned k) const {
    if (k == 0) throw Error("0th root");
    if (k == 1) return *this;
    if (!exact_) return from_double(std::pow(approx_, 1.0 / static_cast<double>(k)));
    Scalar s = *this;
    s.root_ *= k;
    s.canonicalize();
    s.refresh_approx();
    return s;
}

int Scalar::compare(const Scalar& o) const {
    if (exact_ && o.exact_) {
        // Raising to the lcm power preserves order for positive values.
        unsigned l = std::lcm(root_, o.root_);
        BigRat a = rat_pow(base_, l / root_);
        BigRat b = rat_pow(o.base_, l / o.root_);
        if (a < b) return -1;
        if (b < a) return 1;
        return 0;
    }
    if (approx_ < o.approx_) return -1;
    if (o.approx_ < approx_) return 1;
    return 0;
}

std::string Scalar::str() const {
    if (!exact_) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", approx_);
        return buf;
    }
    if (root_ == 1) return format_rational(base_);
    return "(" + format_rational(base_) + ")^(1/" + std::to_string(root_) + ")";
}

}  // namespace tilesplit
