#pragma once

// Boundary lift u_g^h: interpolates the Dirichlet data at the images of the
// Greville abscissas on the four boundary curves; interior coefficients are zero.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "spline.hpp"

namespace igahelm {

inline constexpr double kCornerTolerance = 1e-9;

struct LiftCoefficients {
    Grid2<double> delta;
};

/// Solve the south/north systems (matrix B1 over xi) and the west/east systems
/// (matrix B2 over eta). South/north write the corner coefficients; the west/east
/// solutions must agree there to within kCornerTolerance * max(1, |g|).
inline LiftCoefficients build_lift(const TensorSpace& space, const ControlNet& net,
                                   const std::function<double(double, double)>& g) {
    if (!(space.kv_xi() == net.kv_xi() && space.kv_eta() == net.kv_eta()))
        throw ValidationError("build_lift: space and net must share knot vectors");
    const std::size_t n = space.n();
    const std::size_t m = space.m();
    const auto gx = greville(space.kv_xi());
    const auto gy = greville(space.kv_eta());
    const BandedLU b1 = greville_collocation(space.kv_xi());
    const BandedLU b2 = greville_collocation(space.kv_eta());

    auto sample = [&](double xi, double eta) {
        const Point2 p = eval_map(net, xi, eta);
        return g(p.x, p.y);
    };

    std::vector<double> rs(n), rn(n), rw(m), re(m);
    for (std::size_t k = 0; k < n; ++k) {
        rs[k] = sample(gx[k], 0.0);
        rn[k] = sample(gx[k], 1.0);
    }
    for (std::size_t l = 0; l < m; ++l) {
        rw[l] = sample(0.0, gy[l]);
        re[l] = sample(1.0, gy[l]);
    }
    const auto south = b1.solve(rs);
    const auto north = b1.solve(rn);
    const auto west = b2.solve(rw);
    const auto east = b2.solve(re);

    auto check_corner = [](double a, double b, const char* which) {
        if (!(std::abs(a - b) <= kCornerTolerance * std::max(1.0, std::abs(a))))
            throw Error(std::string("build_lift: inconsistent corner coefficient at ") + which);
    };
    check_corner(south.front(), west.front(), "(0,0)");
    check_corner(south.back(), east.front(), "(1,0)");
    check_corner(north.front(), west.back(), "(0,1)");
    check_corner(north.back(), east.back(), "(1,1)");

    LiftCoefficients lift{Grid2<double>(n, m, 0.0)};
    for (std::size_t j = 1; j + 1 < m; ++j) {
        lift.delta(0, j) = west[j];
        lift.delta(n - 1, j) = east[j];
    }
    for (std::size_t i = 0; i < n; ++i) {
        lift.delta(i, 0) = south[i];
        lift.delta(i, m - 1) = north[i];
    }
    return lift;
}

/// u_g^h and its parametric gradient at (xi, eta).
inline ScalarEval eval_lift(const TensorSpace& space, const LiftCoefficients& lift, double xi, double eta) {
    return eval_field(space, lift.delta, xi, eta);
}

} // namespace igahelm
