#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace tetquad {

/// Minimal 3-vector used throughout the library.
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    Vec3& operator-=(const Vec3& o) {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    Vec3& operator*=(double s) {
        x *= s;
        y *= s;
        z *= s;
        return *this;
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    if (n == 0.0) throw std::domain_error("cannot normalize zero vector");
    return v / n;
}

/// Row-major 3x3 matrix.  Rows are addressed as m[i], entries as m(i,j).
struct Mat3 {
    std::array<std::array<double, 3>, 3> m{};

    double& operator()(int i, int j) { return m[static_cast<size_t>(i)][static_cast<size_t>(j)]; }
    double operator()(int i, int j) const {
        return m[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }

    static Mat3 identity() {
        Mat3 r;
        r(0, 0) = r(1, 1) = r(2, 2) = 1.0;
        return r;
    }

    static Mat3 from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
        Mat3 r;
        r.m = {{{r0.x, r0.y, r0.z}, {r1.x, r1.y, r1.z}, {r2.x, r2.y, r2.z}}};
        return r;
    }

    Vec3 row(int i) const { return {(*this)(i, 0), (*this)(i, 1), (*this)(i, 2)}; }

    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
        return r;
    }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }
};

/// Row vector times matrix: (y A)_j = sum_i y_i A_ij.
inline Vec3 row_times(const Vec3& y, const Mat3& a) {
    return {y.x * a(0, 0) + y.y * a(1, 0) + y.z * a(2, 0),
            y.x * a(0, 1) + y.y * a(1, 1) + y.z * a(2, 1),
            y.x * a(0, 2) + y.y * a(1, 2) + y.z * a(2, 2)};
}

inline double det(const Mat3& a) {
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

/// Solve M X = B for the 3x3 matrix X by Gaussian elimination with partial
/// pivoting.  Throws if M is numerically singular.
inline Mat3 solve3(Mat3 m, Mat3 b) {
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
        if (m(piv, col) == 0.0) throw std::domain_error("solve3: singular matrix");
        if (piv != col) {
            std::swap(m.m[static_cast<size_t>(piv)], m.m[static_cast<size_t>(col)]);
            std::swap(b.m[static_cast<size_t>(piv)], b.m[static_cast<size_t>(col)]);
        }
        const double inv = 1.0 / m(col, col);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = m(r, col) * inv;
            if (f == 0.0) continue;
            for (int c = 0; c < 3; ++c) {
                m(r, c) -= f * m(col, c);
                b(r, c) -= f * b(col, c);
            }
        }
    }
    Mat3 x;
    for (int r = 0; r < 3; ++r) {
        const double inv = 1.0 / m(r, r);
        for (int c = 0; c < 3; ++c) x(r, c) = b(r, c) * inv;
    }
    return x;
}

}  // namespace tetquad
