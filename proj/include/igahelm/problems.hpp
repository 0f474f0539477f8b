#pragma once

// Benchmark problem cases for -lap(u) - k^2 u = f with u = g on the boundary.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"

namespace igahelm {

inline constexpr double kRadiusFloor = 1e-12;

using ScalarFn = std::function<double(double, double)>;
using GradFn = std::function<std::array<double, 2>(double, double)>;

struct ProblemCase {
    std::string name;
    ScalarFn k_squared;
    ScalarFn forcing;          // direct formula; may be non-finite at singular points
    ScalarFn forcing_guarded;  // radius clamped to kRadiusFloor; empty when no singularity
    ScalarFn g;
    std::optional<ScalarFn> exact_u;
    std::optional<GradFn> exact_grad;  // clamped near singular points
    std::vector<Point2> singular_params;
    std::vector<Point2> singular_points;  // images of singular_params under F

    bool has_exact() const noexcept { return exact_u.has_value() && exact_grad.has_value(); }
};

/// Forcing evaluation that never returns NaN/inf at singular points.
inline double eval_forcing_guarded(const ProblemCase& pc, double x, double y) {
    return pc.forcing_guarded ? pc.forcing_guarded(x, y) : pc.forcing(x, y);
}

/// -lap u = 2 pi^2 sin(pi x) sin(pi y), u = sin(pi x) sin(pi y).
inline ProblemCase poisson_oscillatory() {
    constexpr double pi = std::numbers::pi;
    ProblemCase pc;
    pc.name = "poisson_oscillatory";
    pc.k_squared = [](double, double) { return 0.0; };
    pc.forcing = [](double x, double y) { return 2 * pi * pi * std::sin(pi * x) * std::sin(pi * y); };
    auto u = [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); };
    pc.g = u;
    pc.exact_u = u;
    pc.exact_grad = [](double x, double y) {
        return std::array<double, 2>{pi * std::cos(pi * x) * std::sin(pi * y), pi * std::sin(pi * x) * std::cos(pi * y)};
    };
    return pc;
}

/// u = x^2 + y, which lies in the biquadratic space on an identity map; -lap u = -2.
inline ProblemCase quadratic_patch() {
    ProblemCase pc;
    pc.name = "quadratic_patch";
    pc.k_squared = [](double, double) { return 0.0; };
    pc.forcing = [](double, double) { return -2.0; };
    auto u = [](double x, double y) { return x * x + y; };
    pc.g = u;
    pc.exact_u = u;
    pc.exact_grad = [](double x, double) { return std::array<double, 2>{2 * x, 1.0}; };
    return pc;
}

namespace detail {
inline double distance(double x, double y, Point2 c) { return std::hypot(x - c.x, y - c.y); }

inline void check_anchor(Point2 a) {
    if (!(a.x > 0.0 && a.x < 1.0 && a.y > 0.0 && a.y < 1.0))
        throw DomainError("anchor must lie in the open unit square");
}
} // namespace detail

/// u = sum_s exp(c_s r_s) with r_s the distance to F(anchor_s). The gradient of u
/// jumps at each anchor image.
inline ProblemCase poisson_exp_cones(std::array<double, 3> coeffs, std::array<Point2, 3> anchors, const ControlNet& net) {
    ProblemCase pc;
    pc.name = "poisson_exp_cones";
    std::array<Point2, 3> centers{};
    for (std::size_t s = 0; s < 3; ++s) {
        detail::check_anchor(anchors[s]);
        centers[s] = eval_map(net, anchors[s].x, anchors[s].y);
        pc.singular_params.push_back(anchors[s]);
        pc.singular_points.push_back(centers[s]);
    }
    pc.k_squared = [](double, double) { return 0.0; };
    auto u = [=](double x, double y) {
        double v = 0.0;
        for (std::size_t s = 0; s < 3; ++s) v += std::exp(coeffs[s] * detail::distance(x, y, centers[s]));
        return v;
    };
    // lap exp(c r) = c exp(c r) (c + 1/r) in the plane
    auto make_forcing = [=](double floor) {
        return [=](double x, double y) {
            double lap = 0.0;
            for (std::size_t s = 0; s < 3; ++s) {
                const double r = std::max(detail::distance(x, y, centers[s]), floor);
                const double c = coeffs[s];
                lap += c * std::exp(c * r) * (c + 1.0 / r);
            }
            return -lap;
        };
    };
    pc.forcing = make_forcing(0.0);
    pc.forcing_guarded = make_forcing(kRadiusFloor);
    pc.g = u;
    pc.exact_u = u;
    pc.exact_grad = [=](double x, double y) {
        std::array<double, 2> gr{0.0, 0.0};
        for (std::size_t s = 0; s < 3; ++s) {
            const double r = std::max(detail::distance(x, y, centers[s]), kRadiusFloor);
            const double c = coeffs[s];
            const double f = c * std::exp(c * r) / r;
            gr[0] += f * (x - centers[s].x);
            gr[1] += f * (y - centers[s].y);
        }
        return gr;
    };
    return pc;
}

/// Variable-frequency Helmholtz case: k = 1/(alpha + r), u = sin(k), alpha = 1/(M pi),
/// r the distance to F(anchor). The forcing is the exact residual -lap u - k^2 u:
///   f = (alpha - r) cos(k) / ((alpha + r)^3 r) + (k^4 - k^2) sin(k).
inline ProblemCase helmholtz_variable_frequency(int M, Point2 anchor, const ControlNet& net) {
    if (M < 1) throw DomainError("helmholtz_variable_frequency: M must be >= 1");
    detail::check_anchor(anchor);
    const double alpha = 1.0 / (M * std::numbers::pi);
    const Point2 c = eval_map(net, anchor.x, anchor.y);

    ProblemCase pc;
    pc.name = "helmholtz_variable_frequency";
    pc.singular_params = {anchor};
    pc.singular_points = {c};
    pc.k_squared = [=](double x, double y) {
        const double k = 1.0 / (alpha + detail::distance(x, y, c));
        return k * k;
    };
    auto make_forcing = [=](double floor) {
        return [=](double x, double y) {
            const double r = std::max(detail::distance(x, y, c), floor);
            const double k = 1.0 / (alpha + r);
            const double s = alpha + r;
            return (alpha - r) * std::cos(k) / (s * s * s * r) + (k * k * k * k - k * k) * std::sin(k);
        };
    };
    pc.forcing = make_forcing(0.0);
    pc.forcing_guarded = make_forcing(kRadiusFloor);
    auto u = [=](double x, double y) { return std::sin(1.0 / (alpha + detail::distance(x, y, c))); };
    pc.g = u;
    pc.exact_u = u;
    pc.exact_grad = [=](double x, double y) {
        const double r = std::max(detail::distance(x, y, c), kRadiusFloor);
        const double k = 1.0 / (alpha + r);
        const double f = -std::cos(k) * k * k / r;
        return std::array<double, 2>{f * (x - c.x), f * (y - c.y)};
    };
    return pc;
}

} // namespace igahelm
