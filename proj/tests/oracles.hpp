#pragma once

// Reference implementations used only by the tests. They are deliberately
// naive (linear scans, full sums, dense matrices) and share no code paths
// with the library kernels they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "igahelm.hpp"

namespace oracle {

using igahelm::Point2;

// Index of the knot interval [U[s], U[s+1]) containing t, by scanning every interval.
inline std::size_t linear_span(const std::vector<double>& U, double t) {
    const std::size_t last = U.size() - 4;  // last index with a nonzero interval for clamped quadratics
    std::size_t found = 2;
    for (std::size_t s = 2; s <= last; ++s)
        if (U[s] < U[s + 1] && U[s] <= t && (t < U[s + 1] || (t == 1.0 && U[s + 1] == 1.0))) found = s;
    return found;
}

// Recursive Cox-de Boor for arbitrary degree with 0/0 := 0.
inline double bspline(const std::vector<double>& U, std::size_t i, int p, double t) {
    if (p == 0) {
        if (U[i] <= t && t < U[i + 1]) return 1.0;
        // right end: the last nonzero interval is closed
        if (t == U.back() && U[i] < U[i + 1] && U[i + 1] == U.back()) return 1.0;
        return 0.0;
    }
    double v = 0.0;
    const double d1 = U[i + p] - U[i];
    const double d2 = U[i + p + 1] - U[i + 1];
    if (d1 > 0) v += (t - U[i]) / d1 * bspline(U, i, p - 1, t);
    if (d2 > 0) v += (U[i + p + 1] - t) / d2 * bspline(U, i + 1, p - 1, t);
    return v;
}

inline double bspline_deriv(const std::vector<double>& U, std::size_t i, int p, double t) {
    double v = 0.0;
    const double d1 = U[i + p] - U[i];
    const double d2 = U[i + p + 1] - U[i + 1];
    if (d1 > 0) v += p / d1 * bspline(U, i, p - 1, t);
    if (d2 > 0) v -= p / d2 * bspline(U, i + 1, p - 1, t);
    return v;
}

struct FullEval {
    Point2 x;
    double j00 = 0, j01 = 0, j10 = 0, j11 = 0;
};

// Map and Jacobian by summing over every control point.
inline FullEval full_map(const igahelm::ControlNet& net, double xi, double eta) {
    const auto& Ux = net.kv_xi().knots();
    const auto& Uy = net.kv_eta().knots();
    FullEval out;
    for (std::size_t j = 0; j < net.m(); ++j) {
        const double by = bspline(Uy, j, 2, eta), dby = bspline_deriv(Uy, j, 2, eta);
        for (std::size_t i = 0; i < net.n(); ++i) {
            const double bx = bspline(Ux, i, 2, xi), dbx = bspline_deriv(Ux, i, 2, xi);
            const Point2 p = net.points()(i, j);
            out.x = out.x + (bx * by) * p;
            out.j00 += p.x * dbx * by;
            out.j01 += p.x * bx * dby;
            out.j10 += p.y * dbx * by;
            out.j11 += p.y * bx * dby;
        }
    }
    return out;
}

// Gaussian elimination with partial pivoting on a dense copy.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::abs(A[r][k]) > std::abs(A[piv][k])) piv = r;
        if (A[piv][k] == 0.0) throw std::runtime_error("dense_solve: singular matrix");
        std::swap(A[k], A[piv]);
        std::swap(b[k], b[piv]);
        for (std::size_t r = k + 1; r < n; ++r) {
            const double f = A[r][k] / A[k][k];
            if (f == 0.0) continue;
            for (std::size_t c = k; c < n; ++c) A[r][c] -= f * A[k][c];
            b[r] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t c = k + 1; c < n; ++c) s -= A[k][c] * x[c];
        x[k] = s / A[k][k];
    }
    return x;
}

struct DenseSystem {
    std::vector<std::vector<double>> A;
    std::vector<double> b;
};

// Direct evaluation of the discrete bilinear form and load vector entry by
// entry with global basis functions. Each entry integrates over the elements
// in the intersection of the two supports with the 3-point Gauss rule.
inline DenseSystem dense_assembly(const igahelm::ControlNet& net, const igahelm::ProblemCase& pc,
                                  const igahelm::LiftCoefficients& lift) {
    const auto& Ux = net.kv_xi().knots();
    const auto& Uy = net.kv_eta().knots();
    const std::size_t n = net.n(), m = net.m(), N = n * m;
    const double g = std::sqrt(0.6);
    const std::array<double, 3> gx{-g, 0.0, g};
    const std::array<double, 3> gw{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

    auto breaks = [](const std::vector<double>& U) {
        std::vector<double> d(U.begin(), U.end());
        d.erase(std::unique(d.begin(), d.end()), d.end());
        return d;
    };
    const auto bx = breaks(Ux), by = breaks(Uy);

    struct QP {
        double xi, eta, w, k2, src, det;
        double G00, G01, G11;
        double ug, dug0, dug1;
    };
    // quadrature data per element, computed from full sums
    std::vector<std::vector<QP>> qdata((bx.size() - 1) * (by.size() - 1));
    for (std::size_t ey = 0; ey + 1 < by.size(); ++ey) {
        for (std::size_t ex = 0; ex + 1 < bx.size(); ++ex) {
            auto& list = qdata[ey * (bx.size() - 1) + ex];
            const double a = bx[ex], b = bx[ex + 1], c = by[ey], d = by[ey + 1];
            for (int qy = 0; qy < 3; ++qy) {
                for (int qx = 0; qx < 3; ++qx) {
                    QP q{};
                    q.xi = 0.5 * (a + b) + 0.5 * (b - a) * gx[qx];
                    q.eta = 0.5 * (c + d) + 0.5 * (d - c) * gx[qy];
                    q.w = gw[qx] * gw[qy] * 0.25 * (b - a) * (d - c);
                    const FullEval fe = full_map(net, q.xi, q.eta);
                    q.det = fe.j00 * fe.j11 - fe.j01 * fe.j10;
                    // (J^T J)^{-1}
                    const double m00 = fe.j00 * fe.j00 + fe.j10 * fe.j10;
                    const double m01 = fe.j00 * fe.j01 + fe.j10 * fe.j11;
                    const double m11 = fe.j01 * fe.j01 + fe.j11 * fe.j11;
                    const double md = m00 * m11 - m01 * m01;
                    q.G00 = m11 / md;
                    q.G01 = -m01 / md;
                    q.G11 = m00 / md;
                    q.k2 = pc.k_squared(fe.x.x, fe.x.y);
                    for (std::size_t j = 0; j < m; ++j)
                        for (std::size_t i = 0; i < n; ++i) {
                            const double vx = bspline(Ux, i, 2, q.xi), vy = bspline(Uy, j, 2, q.eta);
                            const double d0 = bspline_deriv(Ux, i, 2, q.xi) * vy;
                            const double d1 = vx * bspline_deriv(Uy, j, 2, q.eta);
                            const double delta = lift.delta(i, j);
                            q.ug += delta * vx * vy;
                            q.dug0 += delta * d0;
                            q.dug1 += delta * d1;
                        }
                    q.src = igahelm::eval_forcing_guarded(pc, fe.x.x, fe.x.y) + q.k2 * q.ug;
                    list.push_back(q);
                }
            }
        }
    }

    auto support = [](const std::vector<double>& U, const std::vector<double>& brk, std::size_t i) {
        std::vector<std::size_t> out;
        for (std::size_t e = 0; e + 1 < brk.size(); ++e)
            if (brk[e] >= U[i] && brk[e + 1] <= U[i + 3]) out.push_back(e);
        return out;
    };

    DenseSystem sys{std::vector<std::vector<double>>(N, std::vector<double>(N, 0.0)), std::vector<double>(N, 0.0)};
    for (std::size_t p = 0; p < N; ++p) {
        const std::size_t ip = p % n, jp = p / n;
        if (ip == 0 || jp == 0 || ip == n - 1 || jp == m - 1) {
            sys.A[p][p] = 1.0;
            continue;
        }
        const auto sxp = support(Ux, bx, ip), syp = support(Uy, by, jp);
        for (std::size_t ey : syp)
            for (std::size_t ex : sxp)
                for (const auto& q : qdata[ey * (bx.size() - 1) + ex]) {
                    const double vx = bspline(Ux, ip, 2, q.xi), vy = bspline(Uy, jp, 2, q.eta);
                    const double d0 = bspline_deriv(Ux, ip, 2, q.xi) * vy, d1 = vx * bspline_deriv(Uy, jp, 2, q.eta);
                    const double wd = q.w * std::abs(q.det);
                    const double flux = (q.G00 * q.dug0 + q.G01 * q.dug1) * d0 + (q.G01 * q.dug0 + q.G11 * q.dug1) * d1;
                    sys.b[p] += wd * (q.src * vx * vy - flux);
                }
        for (std::size_t r = 0; r < N; ++r) {
            const std::size_t ir = r % n, jr = r / n;
            if ((ir > ip ? ir - ip : ip - ir) > 2 || (jr > jp ? jr - jp : jp - jr) > 2) continue;
            double s = 0.0;
            for (std::size_t ey : syp)
                for (std::size_t ex : sxp)
                    for (const auto& q : qdata[ey * (bx.size() - 1) + ex]) {
                        const double px = bspline(Ux, ip, 2, q.xi), py = bspline(Uy, jp, 2, q.eta);
                        const double rx = bspline(Ux, ir, 2, q.xi), ry = bspline(Uy, jr, 2, q.eta);
                        const double p0 = bspline_deriv(Ux, ip, 2, q.xi) * py, p1 = px * bspline_deriv(Uy, jp, 2, q.eta);
                        const double r0 = bspline_deriv(Ux, ir, 2, q.xi) * ry, r1 = rx * bspline_deriv(Uy, jr, 2, q.eta);
                        const double stiff = (q.G00 * p0 + q.G01 * p1) * r0 + (q.G01 * p0 + q.G11 * p1) * r1;
                        s += q.w * std::abs(q.det) * (stiff - q.k2 * px * py * rx * ry);
                    }
            sys.A[p][r] = s;
        }
    }
    return sys;
}

inline std::vector<double> random_uniform(std::mt19937_64& rng, std::size_t count, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> out(count);
    for (auto& v : out) v = d(rng);
    return out;
}

// A random clamped quadratic knot vector with `elements` nonzero intervals and
// optionally some double interior knots.
inline igahelm::KnotVector random_knots(std::mt19937_64& rng, std::size_t elements, bool doubles) {
    std::uniform_real_distribution<double> d(0.05, 0.95);
    std::vector<double> interior;
    while (interior.size() + 1 < elements) {
        const double t = d(rng);
        bool near = false;
        for (double s : interior) near = near || std::abs(s - t) < 1e-3;
        if (!near) interior.push_back(t);
    }
    std::sort(interior.begin(), interior.end());
    std::vector<double> U{0, 0, 0};
    for (std::size_t k = 0; k < interior.size(); ++k) {
        U.push_back(interior[k]);
        if (doubles && k % 3 == 1) U.push_back(interior[k]);
    }
    U.insert(U.end(), {1, 1, 1});
    return igahelm::KnotVector(std::move(U));
}

// Identity-like net with small random perturbations of the interior points.
inline igahelm::ControlNet perturbed_net(std::mt19937_64& rng, const igahelm::KnotVector& kx, const igahelm::KnotVector& ky,
                                         double amplitude) {
    const auto gx = igahelm::greville(kx), gy = igahelm::greville(ky);
    std::uniform_real_distribution<double> d(-amplitude, amplitude);
    igahelm::Grid2<Point2> pts(gx.size(), gy.size());
    for (std::size_t j = 0; j < gy.size(); ++j)
        for (std::size_t i = 0; i < gx.size(); ++i) {
            Point2 p{gx[i], gy[j]};
            if (i > 0 && j > 0 && i + 1 < gx.size() && j + 1 < gy.size()) p = p + Point2{d(rng), d(rng)};
            pts(i, j) = p;
        }
    return igahelm::ControlNet(kx, ky, std::move(pts));
}

// Five-point finite-difference Laplacian.
inline double fd_laplacian(const std::function<double(double, double)>& u, double x, double y, double h) {
    return (u(x + h, y) + u(x - h, y) + u(x, y + h) + u(x, y - h) - 4.0 * u(x, y)) / (h * h);
}

} // namespace oracle
