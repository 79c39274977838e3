#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <type_traits>

#include "tetquad/vec.hpp"

namespace tetquad::detail {

// Integrand values may be scalars, Vec3, or fixed-size arrays of doubles
// (e.g. a batch of monomials integrated in one pass).  These helpers give
// the integrators a uniform accumulate / max-norm / finiteness interface.

template <typename T>
struct is_std_array : std::false_type {};
template <typename V, std::size_t N>
struct is_std_array<std::array<V, N>> : std::true_type {};

template <typename T>
concept IntegrandValue =
    std::is_same_v<T, double> || std::is_same_v<T, Vec3> || is_std_array<T>::value;

inline void accumulate(double& acc, double scale, double v) { acc += scale * v; }

inline void accumulate(Vec3& acc, double scale, const Vec3& v) { acc += v * scale; }

template <std::size_t N>
inline void accumulate(std::array<double, N>& acc, double scale, const std::array<double, N>& v) {
    for (std::size_t i = 0; i < N; ++i) acc[i] += scale * v[i];
}

inline double max_abs(double v) { return std::abs(v); }

inline double max_abs(const Vec3& v) {
    return std::max({std::abs(v.x), std::abs(v.y), std::abs(v.z)});
}

template <std::size_t N>
inline double max_abs(const std::array<double, N>& v) {
    double m = 0.0;
    for (double c : v) m = std::max(m, std::abs(c));
    return m;
}

inline bool all_finite(double v) { return std::isfinite(v); }

inline bool all_finite(const Vec3& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

template <std::size_t N>
inline bool all_finite(const std::array<double, N>& v) {
    for (double c : v)
        if (!std::isfinite(c)) return false;
    return true;
}

inline double sub_max_abs(double a, double b) { return std::abs(a - b); }

inline double sub_max_abs(const Vec3& a, const Vec3& b) { return max_abs(a - b); }

template <std::size_t N>
inline double sub_max_abs(const std::array<double, N>& a, const std::array<double, N>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < N; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

template <typename T>
inline void add_into(T& acc, const T& v) {
    accumulate(acc, 1.0, v);
}

}  // namespace tetquad::detail
