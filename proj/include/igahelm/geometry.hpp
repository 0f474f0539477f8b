#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "quadrature.hpp"
#include "spline.hpp"

namespace igahelm {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
    friend bool operator==(const Point2&, const Point2&) = default;
};

/// Row-major 2x2 matrix.
struct Mat2 {
    double a00 = 0, a01 = 0, a10 = 0, a11 = 0;

    double det() const noexcept { return a00 * a11 - a01 * a10; }
    Mat2 transpose() const noexcept { return {a00, a10, a01, a11}; }
    Mat2 inverse() const {
        const double d = det();
        return {a11 / d, -a01 / d, -a10 / d, a00 / d};
    }
    std::array<double, 2> operator*(const std::array<double, 2>& v) const noexcept {
        return {a00 * v[0] + a01 * v[1], a10 * v[0] + a11 * v[1]};
    }
    friend Mat2 operator*(const Mat2& l, const Mat2& r) noexcept {
        return {l.a00 * r.a00 + l.a01 * r.a10, l.a00 * r.a01 + l.a01 * r.a11,
                l.a10 * r.a00 + l.a11 * r.a10, l.a10 * r.a01 + l.a11 * r.a11};
    }
};

inline constexpr double kDetFloor = 1e-12;

/// Tensor-product biquadratic control net: F(xi, eta) = sum P(i,j) B_i(xi) B_j(eta).
class ControlNet {
public:
    ControlNet(KnotVector kv_xi, KnotVector kv_eta, Grid2<Point2> points)
        : space_(std::move(kv_xi), std::move(kv_eta)), points_(std::move(points)) {
        if (points_.n() != space_.n() || points_.m() != space_.m())
            throw ValidationError("ControlNet: grid is " + std::to_string(points_.n()) + "x" +
                                  std::to_string(points_.m()) + " but knot vectors give " +
                                  std::to_string(space_.n()) + "x" + std::to_string(space_.m()));
        for (const auto& p : points_.flat())
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw ValidationError("ControlNet: non-finite coordinate");
    }

    const TensorSpace& space() const noexcept { return space_; }
    const KnotVector& kv_xi() const noexcept { return space_.kv_xi(); }
    const KnotVector& kv_eta() const noexcept { return space_.kv_eta(); }
    const Grid2<Point2>& points() const noexcept { return points_; }
    std::size_t n() const noexcept { return space_.n(); }
    std::size_t m() const noexcept { return space_.m(); }

    friend bool operator==(const ControlNet&, const ControlNet&) = default;

private:
    TensorSpace space_;
    Grid2<Point2> points_;
};

namespace detail {
inline void check_param(double xi, double eta, const char* who) {
    if (!(xi >= 0.0 && xi <= 1.0 && eta >= 0.0 && eta <= 1.0))
        throw DomainError(std::string(who) + ": parameter outside the unit square (" + std::to_string(xi) + ", " +
                          std::to_string(eta) + ")");
}
} // namespace detail

inline Point2 eval_map(const ControlNet& net, double xi, double eta) {
    detail::check_param(xi, eta, "eval_map");
    const BasisEval bx = eval_basis(net.kv_xi(), xi);
    const BasisEval by = eval_basis(net.kv_eta(), eta);
    Point2 out;
    for (std::size_t b = 0; b < 3; ++b)
        for (std::size_t a = 0; a < 3; ++a)
            out = out + (bx.values[a] * by.values[b]) * net.points()(bx.first_index + a, by.first_index + b);
    return out;
}

/// Jacobian of F with the metric inverse (J^T J)^{-1} used by the pullback.
struct JacobianData {
    Mat2 J;  // (x_xi, x_eta; y_xi, y_eta)
    double det = 0.0;
    Mat2 metric_inv;
};

/// Jacobian without the singularity check (det may be tiny or negative).
inline Mat2 jacobian_matrix(const ControlNet& net, double xi, double eta) {
    detail::check_param(xi, eta, "jacobian");
    const BasisEval bx = eval_basis(net.kv_xi(), xi);
    const BasisEval by = eval_basis(net.kv_eta(), eta);
    Mat2 J;
    for (std::size_t b = 0; b < 3; ++b) {
        for (std::size_t a = 0; a < 3; ++a) {
            const Point2& p = net.points()(bx.first_index + a, by.first_index + b);
            const double dxi = bx.derivs[a] * by.values[b];
            const double deta = bx.values[a] * by.derivs[b];
            J.a00 += p.x * dxi;
            J.a01 += p.x * deta;
            J.a10 += p.y * dxi;
            J.a11 += p.y * deta;
        }
    }
    return J;
}

inline JacobianData jacobian(const ControlNet& net, double xi, double eta) {
    JacobianData jd;
    jd.J = jacobian_matrix(net, xi, eta);
    jd.det = jd.J.det();
    if (!(std::abs(jd.det) >= kDetFloor)) throw GeometryError("singular geometry: |det J| below 1e-12", xi, eta);
    jd.metric_inv = (jd.J.transpose() * jd.J).inverse();
    return jd;
}

struct InjectivityReport {
    bool pass = false;
    double min_det = std::numeric_limits<double>::infinity();
    double max_det = -std::numeric_limits<double>::infinity();
    double at_xi = 0.0;
    double at_eta = 0.0;
    std::size_t samples = 0;
};

/// Sample det J on a Gauss grid of `samples_per_element` points per direction in
/// every element. Failure is reported, not thrown.
inline InjectivityReport validate_injectivity(const ControlNet& net, int samples_per_element = 3) {
    if (samples_per_element < 2) throw ValidationError("validate_injectivity: need at least 2 samples per element");
    InjectivityReport rep;
    for (const auto& ey : elements(net.kv_eta())) {
        for (const auto& ex : elements(net.kv_xi())) {
            const auto rule = gauss_rule(samples_per_element, ex.a, ex.b, ey.a, ey.b);
            for (const auto& q : rule.points) {
                const double d = jacobian_matrix(net, q.xi, q.eta).det();
                ++rep.samples;
                rep.max_det = std::max(rep.max_det, d);
                if (d < rep.min_det) {
                    rep.min_det = d;
                    rep.at_xi = q.xi;
                    rep.at_eta = q.eta;
                }
            }
        }
    }
    rep.pass = rep.min_det > 0.0;
    return rep;
}

/// Same map over enlarged knot vectors (each listed knot inserted once, in order).
inline ControlNet refine_geometry(const ControlNet& net, std::span<const double> new_knots_xi,
                                  std::span<const double> new_knots_eta) {
    auto [kx, gx] = insert_knots_xi<Point2>(net.kv_xi(), net.points(), new_knots_xi);
    auto [ky, gy] = insert_knots_eta<Point2>(net.kv_eta(), gx, new_knots_eta);
    return ControlNet(std::move(kx), std::move(ky), std::move(gy));
}

} // namespace igahelm
