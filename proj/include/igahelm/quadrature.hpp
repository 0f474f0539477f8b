#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"

namespace igahelm {

inline constexpr int kMinQuadOrder = 2;
inline constexpr int kMaxQuadOrder = 10;

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

inline GaussLegendre1D compute_gauss_legendre(int order) {
    GaussLegendre1D r;
    r.nodes.resize(static_cast<std::size_t>(order));
    r.weights.resize(static_cast<std::size_t>(order));
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Newton on P_order starting from the Chebyshev-like guess
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged root
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= order; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = order * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(order - 1 - i);
        r.nodes[lo] = -x;
        r.nodes[hi] = x;
        r.weights[lo] = w;
        r.weights[hi] = w;
    }
    if (order % 2 == 1) r.nodes[static_cast<std::size_t>(order / 2)] = 0.0;
    return r;
}

} // namespace detail

/// Cached reference rule for orders 2..10.
inline const GaussLegendre1D& gauss_legendre(int order) {
    if (order < kMinQuadOrder || order > kMaxQuadOrder)
        throw ValidationError("unsupported quadrature order " + std::to_string(order) + " (allowed 2..10)");
    static const std::array<GaussLegendre1D, kMaxQuadOrder + 1> table = [] {
        std::array<GaussLegendre1D, kMaxQuadOrder + 1> t{};
        for (int q = kMinQuadOrder; q <= kMaxQuadOrder; ++q) t[static_cast<std::size_t>(q)] = detail::compute_gauss_legendre(q);
        return t;
    }();
    return table[static_cast<std::size_t>(order)];
}

/// Rule mapped to [a, b].
inline GaussLegendre1D gauss_rule_1d(int order, double a, double b) {
    const auto& ref = gauss_legendre(order);
    GaussLegendre1D r;
    const double h = 0.5 * (b - a);
    const double c = 0.5 * (a + b);
    for (std::size_t k = 0; k < ref.nodes.size(); ++k) {
        r.nodes.push_back(c + h * ref.nodes[k]);
        r.weights.push_back(h * ref.weights[k]);
    }
    return r;
}

struct QuadPoint {
    double xi;
    double eta;
    double weight;
};

/// Tensor Gauss-Legendre rule on [a,b] x [c,d]; xi runs fastest.
struct QuadratureRule {
    int order = 0;
    std::vector<QuadPoint> points;
};

inline QuadratureRule gauss_rule(int order, double a, double b, double c, double d) {
    const auto rx = gauss_rule_1d(order, a, b);
    const auto ry = gauss_rule_1d(order, c, d);
    QuadratureRule q;
    q.order = order;
    q.points.reserve(rx.nodes.size() * ry.nodes.size());
    for (std::size_t l = 0; l < ry.nodes.size(); ++l)
        for (std::size_t k = 0; k < rx.nodes.size(); ++k)
            q.points.push_back({rx.nodes[k], ry.nodes[l], rx.weights[k] * ry.weights[l]});
    return q;
}

} // namespace igahelm
