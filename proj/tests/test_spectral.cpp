#include "doctest.h"
#include "tilesplit/spectral.hpp"
#include "tilesplit/scheme_io.hpp"
#include "tilesplit/util.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

using namespace tilesplit;

namespace {

std::string cfg(const char* name) {
    return std::string(TILESPLIT_CONFIG_DIR) + "/" + name + ".json";
}

const char* kAllConfigs[] = {
    "kakutani_third",  "kakutani_golden",     "kakutani_half_quarter",
    "rect_square",     "penrose_robinson",    "pinwheel_half",
    "nonprimitive_grid", "tr_rhombus_triangle", "rauzy",
};

Mat mat2(double a, double b, double c, double d) {
    Mat m(2, 2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

AssocGraph make_graph(std::size_t n,
                      const std::vector<std::tuple<std::size_t, std::size_t, Scalar>>& edges) {
    AssocGraph g;
    g.n = n;
    for (std::size_t v = 0; v < n; ++v) g.labels.push_back(std::string(1, char('A' + v)));
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto& [from, to, beta] = edges[i];
        EdgeInfo e;
        e.id = i;
        e.from = from;
        e.to = to;
        e.alpha = beta;
        e.beta = beta;
        e.length = -beta.log();
        g.edges.push_back(e);
    }
    finalize_graph(g);
    return g;
}

void check_eigen_pair(const Mat& a, const PerronEigen& e, double tol) {
    const long n = a.rows;
    double s1 = 0.0;
    for (double x : e.right) {
        CHECK(x > 0.0);
        s1 += x;
    }
    CHECK(s1 == doctest::Approx(1.0).epsilon(1e-12));
    double dot = 0.0;
    for (long i = 0; i < n; ++i) dot += e.left[i] * e.right[i];
    CHECK(dot == doctest::Approx(1.0).epsilon(1e-10));
    for (long i = 0; i < n; ++i) {
        double av = 0.0, ua = 0.0;
        for (long j = 0; j < n; ++j) {
            av += a(i, j) * e.right[j];
            ua += e.left[j] * a(j, i);
        }
        CHECK(av == doctest::Approx(e.value * e.right[i]).epsilon(tol));
        CHECK(ua == doctest::Approx(e.value * e.left[i]).epsilon(tol));
    }
}

}  // namespace

TEST_CASE("Perron data against closed forms") {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;

    SUBCASE("Robinson triangle counts") {
        Mat a = mat2(2, 1, 1, 1);
        PerronEigen e = perron_eigen(a);
        CHECK(e.value == doctest::Approx(phi * phi).epsilon(1e-12));
        CHECK(e.right[0] == doctest::Approx(phi / (1.0 + phi)).epsilon(1e-12));
        CHECK(e.right[1] == doctest::Approx(1.0 / (1.0 + phi)).epsilon(1e-12));
        check_eigen_pair(a, e, 1e-11);
    }

    SUBCASE("triangle/rhombus counts") {
        Mat a = mat2(3, 2, 4, 3);
        PerronEigen e = perron_eigen(a);
        const double sr2 = std::sqrt(2.0);
        CHECK(e.value == doctest::Approx(3.0 + 2.0 * sr2).epsilon(1e-12));
        // right eigenvector proportional to (1, sqrt 2)
        CHECK(e.right[1] / e.right[0] == doctest::Approx(sr2).epsilon(1e-11));
        // left eigenvector proportional to (sqrt 2, 1)
        CHECK(e.left[0] / e.left[1] == doctest::Approx(sr2).epsilon(1e-11));
        check_eigen_pair(a, e, 1e-11);
    }

    SUBCASE("periodic matrix converges through the shifted iteration") {
        Mat a = mat2(0, 1, 2, 0);
        PerronEigen e = perron_eigen(a);
        CHECK(e.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
        CHECK(e.right[1] / e.right[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-11));
        check_eigen_pair(a, e, 1e-11);
    }

    SUBCASE("one by one") {
        Mat a(1, 1);
        a(0, 0) = 5.0;
        PerronEigen e = perron_eigen(a);
        CHECK(e.value == doctest::Approx(5.0).epsilon(1e-14));
        CHECK(e.right[0] == doctest::Approx(1.0));
        CHECK(e.left[0] == doctest::Approx(1.0));
    }

    SUBCASE("three-cycle permutation") {
        Mat a(3, 3);
        a(0, 1) = a(1, 2) = a(2, 0) = 1.0;
        PerronEigen e = perron_eigen(a);
        CHECK(e.value == doctest::Approx(1.0).epsilon(1e-12));
        for (double x : e.right) CHECK(x == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    }

    SUBCASE("negative entries are rejected") {
        Mat a = mat2(1, -1, 1, 1);
        CHECK_THROWS_AS(static_cast<void>(perron_eigen(a)), Error);
    }
}

TEST_CASE("primitivity analysis") {
    SUBCASE("grid scheme: period 2 with frozen blocks") {
        Mat s = substitution_matrix(load_scheme(cfg("nonprimitive_grid")));
        REQUIRE(s.rows == 3);
        // counts: S -> R1 + R2, R1 -> 3 S, R2 -> 6 S
        CHECK(s(0, 1) == 1.0);
        CHECK(s(0, 2) == 1.0);
        CHECK(s(1, 0) == 3.0);
        CHECK(s(2, 0) == 6.0);

        Primitivity p = analyze_primitivity(s);
        CHECK(!p.primitive);
        CHECK(p.period == 2);
        REQUIRE(p.classes.size() == 2);
        CHECK(p.classes[0] == std::vector<std::size_t>{0});
        CHECK(p.classes[1] == std::vector<std::size_t>{1, 2});
        REQUIRE(p.blocks.size() == 2);
        CHECK(p.blocks[0].rows == 1);
        CHECK(p.blocks[0](0, 0) == doctest::Approx(9.0));
        CHECK(p.blocks[1].rows == 2);
        CHECK(p.blocks[1](0, 0) == doctest::Approx(3.0));
        CHECK(p.blocks[1](0, 1) == doctest::Approx(3.0));
        CHECK(p.blocks[1](1, 0) == doctest::Approx(6.0));
        CHECK(p.blocks[1](1, 1) == doctest::Approx(6.0));
    }

    SUBCASE("primitive matrices report period 1") {
        Mat a = substitution_matrix(load_scheme(cfg("penrose_robinson")));
        Primitivity p = analyze_primitivity(a);
        CHECK(p.primitive);
        CHECK(p.period == 1);
        REQUIRE(p.classes.size() == 1);
        CHECK(p.classes[0] == std::vector<std::size_t>{0, 1});
        CHECK(inf_norm(p.blocks[0] - a) == 0.0);
    }

    SUBCASE("swap matrix has period 2") {
        Mat a = mat2(0, 1, 1, 0);
        Primitivity p = analyze_primitivity(a);
        CHECK(p.period == 2);
        CHECK(p.blocks[0](0, 0) == doctest::Approx(1.0));
        CHECK(p.blocks[1](0, 0) == doctest::Approx(1.0));
    }

    SUBCASE("three-cycle has period 3") {
        Mat a(3, 3);
        a(0, 1) = a(1, 2) = a(2, 0) = 1.0;
        CHECK(analyze_primitivity(a).period == 3);
    }

    SUBCASE("reducible support is rejected") {
        Mat a = mat2(1, 1, 0, 1);
        CHECK_THROWS_AS(static_cast<void>(analyze_primitivity(a)), NotIrreducible);
    }

    SUBCASE("period matches the brute-force walk gcd on random supports") {
        for (std::uint64_t seed = 1; seed <= 25; ++seed) {
            CAPTURE(seed);
            SplitMix64 rng(seed);
            std::size_t n = 2 + rng.next_below(3);
            Mat a((long)n, (long)n);
            for (std::size_t v = 0; v < n; ++v) a((long)v, (long)((v + 1) % n)) = 1.0;
            std::size_t extra = rng.next_below(4);
            for (std::size_t i = 0; i < extra; ++i)
                a((long)rng.next_below(n), (long)rng.next_below(n)) = 1.0;

            Primitivity p = analyze_primitivity(a);
            // gcd of walk lengths k <= 24 with (A^k)_{00} > 0
            long g = 0;
            Mat pw = Mat::identity((long)n);
            for (int k = 1; k <= 24; ++k) {
                pw = pw * a;
                if (pw(0, 0) > 0.0) g = std::gcd(g, (long)k);
                // keep entries bounded; only the support matters
                for (long i = 0; i < pw.rows; ++i)
                    for (long j = 0; j < pw.cols; ++j)
                        if (pw(i, j) > 0.0) pw(i, j) = 1.0;
            }
            REQUIRE(g > 0);
            CHECK((long)p.period == g);
        }
    }
}

TEST_CASE("spectral projection attracts matrix powers") {
    auto check_projection = [](const Mat& a) {
        PerronEigen e = perron_eigen(a);
        Mat p = perron_projection(a);
        Mat scaled = (1.0 / e.value) * a;
        CHECK(inf_norm(mat_pow(scaled, 64) - p) < 1e-8);
        // P is idempotent and commutes with A/mu.
        CHECK(inf_norm(p * p - p) < 1e-10);
        CHECK(inf_norm(scaled * p - p) < 1e-10);
        CHECK(inf_norm(p * scaled - p) < 1e-10);
    };
    check_projection(substitution_matrix(load_scheme(cfg("penrose_robinson"))));
    check_projection(substitution_matrix(load_scheme(cfg("tr_rhombus_triangle"))));
    check_projection(graph_matrix(build_graph(load_scheme(cfg("rect_square"))), 2.0));
}

TEST_CASE("lambda solver") {
    SUBCASE("volume conservation forces lambda = dimension") {
        for (const char* name : kAllConfigs) {
            CAPTURE(name);
            Scheme s = load_scheme(cfg(name));
            double lambda = solve_lambda(build_graph(s));
            CHECK(lambda == doctest::Approx((double)s.dimension).epsilon(1e-10));
        }
    }

    SUBCASE("non-conserving single vertex against scalar bisection") {
        AssocGraph g = make_graph(1, {{0, 0, Scalar::from_rational(BigRat(1, 2))},
                                      {0, 0, Scalar::from_rational(BigRat(1, 3))}});
        double lambda = solve_lambda(g);
        // oracle: solve 2^-s + 3^-s = 1 directly
        double lo = 0.0, hi = 4.0;
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lo + hi);
            (std::pow(2.0, -mid) + std::pow(3.0, -mid) >= 1.0 ? lo : hi) = mid;
        }
        CHECK(lambda == doctest::Approx(lo).epsilon(1e-11));
        CHECK(lambda < 1.0);  // strictly sub-conserving
    }

    SUBCASE("non-conserving two-vertex against scalar bisection") {
        AssocGraph g = make_graph(2, {{0, 0, Scalar::from_rational(BigRat(1, 2))},
                                      {0, 1, Scalar::from_rational(BigRat(1, 2))},
                                      {1, 0, Scalar::from_rational(BigRat(1, 3))}});
        double lambda = solve_lambda(g);
        // Perron root of [[2^-s, 2^-s], [3^-s, 0]] is 1 exactly when
        // 1 - 2^-s - 6^-s = 0.
        double lo = 0.0, hi = 4.0;
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lo + hi);
            double f = 1.0 - std::pow(2.0, -mid) - std::pow(6.0, -mid);
            (f <= 0.0 ? lo : hi) = mid;
        }
        CHECK(lambda == doctest::Approx(lo).epsilon(1e-11));
    }
}

TEST_CASE("stationary frequency weights") {
    SUBCASE("rectangle/square closed form") {
        QMatrix qm = q_matrix(build_graph(load_scheme(cfg("rect_square"))));
        const double l2 = std::log(2.0), l3 = std::log(3.0);
        const double denom = 0.75 * l3 - l2 / 9.0;
        REQUIRE(qm.q.size() == 2);
        CHECK(qm.q[0] == doctest::Approx((4.0 / 9.0) / denom).epsilon(1e-12));
        CHECK(qm.q[1] == doctest::Approx(0.75 / denom).epsilon(1e-12));
        CHECK(qm.row_spread < 1e-10);
        // Rows of the raw normalized adjugate agree.
        for (long j = 0; j < 2; ++j)
            CHECK(qm.raw(0, j) == doctest::Approx(qm.raw(1, j)).epsilon(1e-10));
        // Normalization: sum_h q_h sum_jk beta^d log(1/beta) = 1.
        AssocGraph g = build_graph(load_scheme(cfg("rect_square")));
        Mat md = graph_matrix_derivative(g, 2.0);
        double norm = 0.0;
        for (long i = 0; i < 2; ++i)
            for (long j = 0; j < 2; ++j) norm += qm.q[(std::size_t)i] * (-md(i, j));
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("single type reduces to the reciprocal mean length") {
        QMatrix qm = q_matrix(build_graph(load_scheme(cfg("kakutani_third"))));
        const double expect = 1.0 / (std::log(3.0) / 3.0 + 2.0 / 3.0 * std::log(1.5));
        REQUIRE(qm.q.size() == 1);
        CHECK(qm.q[0] == doctest::Approx(expect).epsilon(1e-12));
        CHECK(qm.row_spread == 0.0);
    }

    SUBCASE("non-simple eigenvalue 1 is rejected") {
        // Two disconnected vertices, each with loops of total weight 1:
        // I - M(1) vanishes identically.
        AssocGraph g = make_graph(2, {{0, 0, Scalar::from_rational(BigRat(1, 2))},
                                      {0, 0, Scalar::from_rational(BigRat(1, 2))},
                                      {1, 1, Scalar::from_rational(BigRat(1, 2))},
                                      {1, 1, Scalar::from_rational(BigRat(1, 2))}});
        CHECK_THROWS_AS(static_cast<void>(q_matrix(g)), SingularBeyondRankOne);
    }
}

TEST_CASE("count substitution matrices of fixed-scale schemes") {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;

    SUBCASE("Robinson triangles") {
        Scheme s = load_scheme(cfg("penrose_robinson"));
        Mat sub = substitution_matrix(s);
        CHECK(sub(0, 0) == 2.0);
        CHECK(sub(0, 1) == 1.0);
        CHECK(sub(1, 0) == 1.0);
        CHECK(sub(1, 1) == 1.0);
        PerronEigen e = perron_eigen(sub);
        CHECK(e.value == doctest::Approx(phi * phi).epsilon(1e-12));

        // Count fractions: left eigenvector of S normalized to sum 1.
        double sum = e.left[0] + e.left[1];
        CHECK(e.left[0] / sum == doctest::Approx(1.0 / phi).epsilon(1e-11));
        CHECK(e.left[1] / sum == doctest::Approx(1.0 / (phi + 1.0)).epsilon(1e-11));

        // Volume fractions: left eigenvector of the weighted matrix M(2).
        PerronEigen w = perron_eigen(weighted_substitution_matrix(s));
        CHECK(w.value == doctest::Approx(1.0).epsilon(1e-12));
        double wsum = w.left[0] + w.left[1];
        CHECK(w.left[0] / wsum == doctest::Approx((phi + 1.0) / (phi + 2.0)).epsilon(1e-9));
        CHECK(w.left[1] / wsum == doctest::Approx(1.0 / (phi + 2.0)).epsilon(1e-9));
    }

    SUBCASE("triangle/rhombus") {
        Mat sub = substitution_matrix(load_scheme(cfg("tr_rhombus_triangle")));
        CHECK(sub(0, 0) == 3.0);
        CHECK(sub(0, 1) == 2.0);
        CHECK(sub(1, 0) == 4.0);
        CHECK(sub(1, 1) == 3.0);
        PerronEigen e = perron_eigen(sub);
        const double silver = 1.0 + std::sqrt(2.0);
        CHECK(e.value == doctest::Approx(silver * silver).epsilon(1e-12));
        CHECK(e.right[1] / e.right[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-11));
    }

    SUBCASE("pinwheel dissection") {
        Mat sub = substitution_matrix(load_scheme(cfg("pinwheel_half")));
        REQUIRE(sub.rows == 1);
        CHECK(sub(0, 0) == 5.0);
    }

    SUBCASE("multiscale schemes are rejected") {
        CHECK_THROWS_AS(static_cast<void>(substitution_matrix(load_scheme(cfg("kakutani_third")))),
                        NotFixedScale);
        CHECK_THROWS_AS(static_cast<void>(substitution_matrix(load_scheme(cfg("rect_square")))),
                        NotFixedScale);
    }

    SUBCASE("weighted matrix equals the graph matrix at s = d") {
        for (const char* name : kAllConfigs) {
            CAPTURE(name);
            Scheme s = load_scheme(cfg(name));
            Mat w = weighted_substitution_matrix(s);
            Mat m = graph_matrix(build_graph(s), (double)s.dimension);
            CHECK(inf_norm(w - m) == 0.0);
        }
    }
}
