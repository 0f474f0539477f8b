#pragma once

// Built-in synthetic domains used in place of externally parametrized regions.

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "geometry.hpp"

namespace igahelm {

enum class BuiltinDomain { unit_square, stretched_annulus_patch, puzzle_like };

inline std::string_view to_string(BuiltinDomain d) {
    switch (d) {
        case BuiltinDomain::unit_square: return "unit_square";
        case BuiltinDomain::stretched_annulus_patch: return "stretched_annulus_patch";
        case BuiltinDomain::puzzle_like: return "puzzle_like";
    }
    return "?";
}

inline std::optional<BuiltinDomain> parse_builtin_domain(std::string_view s) {
    if (s == "unit_square") return BuiltinDomain::unit_square;
    if (s == "stretched_annulus_patch") return BuiltinDomain::stretched_annulus_patch;
    if (s == "puzzle_like") return BuiltinDomain::puzzle_like;
    return std::nullopt;
}

/// Control points at the Greville grid of a uniform n x m space, P(i,j) = map(g_i, g_j).
/// Exact for affine maps; a smooth approximant otherwise.
inline ControlNet greville_sampled_net(std::size_t n, std::size_t m, const std::function<Point2(double, double)>& map) {
    auto kx = KnotVector::uniform(n - 2);
    auto ky = KnotVector::uniform(m - 2);
    const auto gx = greville(kx);
    const auto gy = greville(ky);
    Grid2<Point2> pts(n, m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < n; ++i) pts(i, j) = map(gx[i], gy[j]);
    return ControlNet(std::move(kx), std::move(ky), std::move(pts));
}

namespace detail {

// Quadratic spline interpolant of a planar curve at the Greville sites of kv.
inline std::vector<Point2> interpolate_curve(const KnotVector& kv, const std::function<Point2(double)>& curve) {
    const auto sites = greville(kv);
    const auto lu = greville_collocation(kv);
    std::vector<double> xs(sites.size());
    std::vector<double> ys(sites.size());
    for (std::size_t k = 0; k < sites.size(); ++k) {
        const Point2 p = curve(sites[k]);
        xs[k] = p.x;
        ys[k] = p.y;
    }
    const auto cx = lu.solve(xs);
    const auto cy = lu.solve(ys);
    std::vector<Point2> out(sites.size());
    for (std::size_t k = 0; k < sites.size(); ++k) out[k] = {cx[k], cy[k]};
    return out;
}

inline constexpr double kPuzzleAmplitude = 0.05;
inline constexpr std::size_t kPuzzleMinSize = 8;

} // namespace detail

/// Synthetic control nets on uniform knot vectors with n x m control points.
///  - unit_square: identity map laid out at the Greville grid;
///  - stretched_annulus_patch: quarter annulus 1 <= r <= 2 with a radially stretched parametrization;
///  - puzzle_like: Coons net bounded by sinusoidally perturbed square edges.
inline ControlNet builtin_domain(BuiltinDomain which, std::size_t n, std::size_t m) {
    if (n < 4 || m < 4) throw ValidationError("builtin_domain: n and m must be at least 4");
    switch (which) {
        case BuiltinDomain::unit_square:
            return greville_sampled_net(n, m, [](double u, double v) { return Point2{u, v}; });
        case BuiltinDomain::stretched_annulus_patch:
            return greville_sampled_net(n, m, [](double u, double v) {
                const double r = 1.0 + u + 0.5 * u * (1.0 - u);
                const double th = 0.5 * std::numbers::pi * v;
                return Point2{r * std::cos(th), r * std::sin(th)};
            });
        case BuiltinDomain::puzzle_like: break;
    }

    if (n < detail::kPuzzleMinSize || m < detail::kPuzzleMinSize)
        throw ValidationError("builtin_domain: puzzle_like needs at least 8 x 8 control points to carry its boundary wiggles");

    constexpr double A = detail::kPuzzleAmplitude;
    constexpr double pi = std::numbers::pi;
    auto kx = KnotVector::uniform(n - 2);
    auto ky = KnotVector::uniform(m - 2);
    const auto south = detail::interpolate_curve(kx, [](double t) { return Point2{t, A * std::sin(4 * pi * t)}; });
    const auto north = detail::interpolate_curve(kx, [](double t) { return Point2{t, 1.0 + A * std::sin(4 * pi * t)}; });
    const auto west = detail::interpolate_curve(ky, [](double t) { return Point2{-A * std::sin(3 * pi * t), t}; });
    const auto east = detail::interpolate_curve(ky, [](double t) { return Point2{1.0 - A * std::sin(3 * pi * t), t}; });

    const auto gx = greville(kx);
    const auto gy = greville(ky);
    const Point2 c00 = south.front(), c10 = south.back(), c01 = north.front(), c11 = north.back();
    Grid2<Point2> pts(n, m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const double u = gx[i];
            const double v = gy[j];
            pts(i, j) = (1 - v) * south[i] + v * north[i] + (1 - u) * west[j] + u * east[j] -
                        ((1 - u) * (1 - v) * c00 + u * (1 - v) * c10 + (1 - u) * v * c01 + u * v * c11);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        pts(i, 0) = south[i];
        pts(i, m - 1) = north[i];
    }
    for (std::size_t j = 0; j < m; ++j) {
        pts(0, j) = west[j];
        pts(n - 1, j) = east[j];
    }
    ControlNet net(std::move(kx), std::move(ky), std::move(pts));
    const auto rep = validate_injectivity(net, 3);
    if (!rep.pass) throw ValidationError("builtin_domain: puzzle_like construction is not injective at this size");
    return net;
}

} // namespace igahelm
