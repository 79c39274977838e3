#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace tetquad {

enum class RuleKind { legendre, jacobi };

/// One-dimensional Gaussian quadrature rule on [-1, 1].
///
/// For kind == jacobi the rule integrates p(t) (1+t)^gamma exactly for
/// polynomials p of degree <= 2n-1; for kind == legendre the weight is 1
/// (and gamma is stored as 0).  Nodes are strictly increasing and lie in
/// the open interval (-1, 1); all weights are positive.
struct QuadratureRule1D {
    RuleKind kind = RuleKind::legendre;
    double gamma = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;

    int size() const { return static_cast<int>(nodes.size()); }
};

namespace detail {

constexpr int kMaxRuleLength = 64;

/// Eigenvalues and first eigenvector components of a symmetric tridiagonal
/// matrix, by the implicit-shift QL iteration (the classical Golub-Welsch
/// companion).  d holds the diagonal, e the subdiagonal (e[0..n-2]); on
/// return d holds the eigenvalues in ascending order and z the first
/// component of each normalized eigenvector.
inline void tridiag_eigen(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    if (n == 1) return;
    e.resize(static_cast<size_t>(n));
    e[static_cast<size_t>(n) - 1] = 0.0;
    const double prec = 2.220446049250313e-16;
    const int max_iter = 60;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        for (;;) {
            int m = l;
            for (; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= prec * dd) break;
            }
            if (m == l) break;
            if (++iter > max_iter) throw std::runtime_error("tridiag_eigen: no convergence");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    // Sort ascending, carrying the eigenvector components along.
    for (int i = 1; i < n; ++i) {
        const double dv = d[i], zv = z[i];
        int j = i - 1;
        for (; j >= 0 && d[j] > dv; --j) {
            d[j + 1] = d[j];
            z[j + 1] = z[j];
        }
        d[j + 1] = dv;
        z[j + 1] = zv;
    }
}

/// Golub-Welsch rule for the Jacobi weight (1-t)^0 (1+t)^g on [-1, 1].
/// Recurrence coefficients are those of the monic Jacobi polynomials
/// P^(0,g); g = 0 reduces to Legendre.
inline QuadratureRule1D golub_welsch_jacobi(int n, double g, RuleKind kind) {
    const double mu0 = std::pow(2.0, g + 1.0) / (g + 1.0);
    std::vector<double> diag(static_cast<size_t>(n)), sub(static_cast<size_t>(n), 0.0);
    diag[0] = g / (g + 2.0);
    for (int k = 1; k < n; ++k) {
        const double tkb = 2.0 * k + g;
        diag[static_cast<size_t>(k)] = g * g / (tkb * (tkb + 2.0));
        const double num = 2.0 * k * (k + g);
        sub[static_cast<size_t>(k)] = std::sqrt(num * num / (tkb * tkb * (tkb * tkb - 1.0)));
    }
    // tridiag_eigen wants the subdiagonal at indices 0..n-2.
    std::vector<double> e(static_cast<size_t>(n), 0.0);
    for (int k = 0; k < n - 1; ++k) e[static_cast<size_t>(k)] = sub[static_cast<size_t>(k) + 1];
    std::vector<double> z(static_cast<size_t>(n), 0.0);
    z[0] = 1.0;
    tridiag_eigen(diag, e, z);

    QuadratureRule1D rule;
    rule.kind = kind;
    rule.gamma = (kind == RuleKind::jacobi) ? g : 0.0;
    rule.nodes = diag;
    rule.weights.resize(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k)
        rule.weights[static_cast<size_t>(k)] =
            mu0 * z[static_cast<size_t>(k)] * z[static_cast<size_t>(k)];
    return rule;
}

/// Enforce the exact mirror symmetry of Legendre rules that the eigenvalue
/// path only delivers to rounding.
inline void symmetrize(QuadratureRule1D& rule) {
    const int n = rule.size();
    for (int i = 0; i < n / 2; ++i) {
        const int j = n - 1 - i;
        const double t = 0.5 * (rule.nodes[static_cast<size_t>(j)] - rule.nodes[static_cast<size_t>(i)]);
        rule.nodes[static_cast<size_t>(i)] = -t;
        rule.nodes[static_cast<size_t>(j)] = t;
        const double w =
            0.5 * (rule.weights[static_cast<size_t>(i)] + rule.weights[static_cast<size_t>(j)]);
        rule.weights[static_cast<size_t>(i)] = w;
        rule.weights[static_cast<size_t>(j)] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<size_t>(n) / 2] = 0.0;
}

struct RuleCacheKey {
    RuleKind kind;
    int n;
    std::uint64_t gamma_bits;
    bool operator<(const RuleCacheKey& o) const {
        return std::tie(kind, n, gamma_bits) < std::tie(o.kind, o.n, o.gamma_bits);
    }
};

inline const QuadratureRule1D& cached_rule(RuleKind kind, int n, double gamma) {
    static std::mutex mtx;
    static std::map<RuleCacheKey, std::unique_ptr<QuadratureRule1D>> cache;

    std::uint64_t bits = 0;
    std::memcpy(&bits, &gamma, sizeof bits);
    const RuleCacheKey key{kind, n, bits};

    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto rule = std::make_unique<QuadratureRule1D>(golub_welsch_jacobi(n, gamma, kind));
        if (kind == RuleKind::legendre) symmetrize(*rule);
        it = cache.emplace(key, std::move(rule)).first;
    }
    return *it->second;
}

}  // namespace detail

/// n-point Gauss-Legendre rule on [-1, 1], exact for polynomials of degree
/// <= 2n-1.  Rules are cached; repeated calls return bit-identical rules.
inline QuadratureRule1D gauss_legendre(int n) {
    if (n < 1 || n > detail::kMaxRuleLength)
        throw std::invalid_argument("gauss_legendre: rule length must be in [1, 64]");
    return detail::cached_rule(RuleKind::legendre, n, 0.0);
}

/// n-point Gauss-Jacobi rule for the weight (1+t)^gamma (1-t)^0 on [-1, 1].
inline QuadratureRule1D gauss_jacobi(int n, double gamma) {
    if (n < 1 || n > detail::kMaxRuleLength)
        throw std::invalid_argument("gauss_jacobi: rule length must be in [1, 64]");
    if (!(gamma > -1.0)) throw std::invalid_argument("gauss_jacobi: gamma must be > -1");
    return detail::cached_rule(RuleKind::jacobi, n, gamma);
}

/// Nodes and weights of a rule mapped affinely to [lo, hi].  Weights are
/// scaled by (hi-lo)/2; the (rho/2)^(gamma+1) factor needed when a Jacobi
/// rule absorbs a radial power is the caller's responsibility.
struct MappedRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline MappedRule affine_map(const QuadratureRule1D& rule, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("affine_map: requires lo < hi");
    const double mid = 0.5 * (hi + lo);
    const double half = 0.5 * (hi - lo);
    MappedRule out;
    out.nodes.resize(rule.nodes.size());
    out.weights.resize(rule.weights.size());
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        out.nodes[i] = mid + half * rule.nodes[i];
        out.weights[i] = half * rule.weights[i];
    }
    return out;
}

}  // namespace tetquad
