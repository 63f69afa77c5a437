#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <string>
#include <vector>

#include "tilesplit/util.hpp"

namespace tilesplit {

/// Dense row-major double matrix; small sizes only (graph matrices).
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
    Mat(std::size_t r, std::size_t c, std::initializer_list<double> v) : rows(r), cols(c), a(v) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline Mat operator*(const Mat& x, const Mat& y) {
    Mat r(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            double v = x(i, k);
            if (v == 0.0) continue;
            for (std::size_t j = 0; j < y.cols; ++j) r(i, j) += v * y(k, j);
        }
    return r;
}

inline Mat operator+(const Mat& x, const Mat& y) {
    Mat r = x;
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
    return r;
}

inline Mat operator-(const Mat& x, const Mat& y) {
    Mat r = x;
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] -= y.a[i];
    return r;
}

inline Mat operator*(double s, const Mat& x) {
    Mat r = x;
    for (double& v : r.a) v *= s;
    return r;
}

/// x as a column vector: A x.
inline std::vector<double> mat_vec(const Mat& m, const std::vector<double>& x) {
    std::vector<double> r(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) r[i] += m(i, j) * x[j];
    return r;
}

/// x as a row vector: x A.
inline std::vector<double> vec_mat(const std::vector<double>& x, const Mat& m) {
    std::vector<double> r(m.cols, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) r[j] += x[i] * m(i, j);
    return r;
}

inline Mat mat_pow(Mat base, unsigned long k) {
    Mat r = Mat::identity(base.rows);
    while (k) {
        if (k & 1ul) r = r * base;
        base = base * base;
        k >>= 1ul;
    }
    return r;
}

/// Largest absolute row sum.
inline double inf_norm(const Mat& m) {
    double best = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) s += std::fabs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

/// Determinant by LU with partial pivoting.
inline double det(Mat m) {
    if (m.rows != m.cols) throw Error("determinant of non-square matrix");
    std::size_t n = m.rows;
    double d = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t i = c + 1; i < n; ++i)
            if (std::fabs(m(i, c)) > std::fabs(m(p, c))) p = i;
        if (m(p, c) == 0.0) return 0.0;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            d = -d;
        }
        d *= m(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            double f = m(i, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return d;
}

/// Classical adjugate via cofactors: adj(A)(j,i) = (-1)^(i+j) det(minor(i,j)).
/// Well-defined for singular input, which is the case this library needs.
inline Mat adjugate(const Mat& m) {
    if (m.rows != m.cols) throw Error("adjugate of non-square matrix");
    std::size_t n = m.rows;
    if (n == 1) {
        Mat r(1, 1);
        r(0, 0) = 1.0;
        return r;
    }
    Mat r(n, n);
    Mat minor(n - 1, n - 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t a = 0, ai = 0; a < n; ++a) {
                if (a == i) continue;
                for (std::size_t b = 0, bj = 0; b < n; ++b) {
                    if (b == j) continue;
                    minor(ai, bj) = m(a, b);
                    ++bj;
                }
                ++ai;
            }
            double c = det(minor);
            r(j, i) = ((i + j) % 2 == 0) ? c : -c;
        }
    return r;
}

inline double trace(const Mat& m) {
    double t = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) t += m(i, i);
    return t;
}

/// One row per matrix row, comma-separated, 17 significant digits.
inline std::string to_csv(const Mat& m) {
    std::string out;
    char buf[40];
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
            out += buf;
            out += (j + 1 == m.cols) ? '\n' : ',';
        }
    }
    return out;
}

}  // namespace tilesplit
