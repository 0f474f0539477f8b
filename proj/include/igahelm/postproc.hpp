#pragma once

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "dirichlet.hpp"
#include "geometry.hpp"
#include "net_io.hpp"
#include "problems.hpp"
#include "quadrature.hpp"
#include "spline.hpp"

namespace igahelm {

inline constexpr int kDefaultErrorOrder = 5;

/// u^h = sum beta(i,j) B_i B_j with beta = delta + gamma.
struct SolutionField {
    TensorSpace space;
    Grid2<double> beta;
};

/// beta = delta + reshape(alpha), with alpha indexed by p = n*j + i.
inline SolutionField combine(const TensorSpace& space, const LiftCoefficients& lift, std::span<const double> alpha) {
    if (lift.delta.n() != space.n() || lift.delta.m() != space.m() || alpha.size() != space.dim())
        throw ValidationError("combine: dimension mismatch");
    SolutionField f{space, lift.delta};
    auto beta = f.beta.flat();
    for (std::size_t p = 0; p < alpha.size(); ++p) beta[p] += alpha[p];
    return f;
}

struct SolutionEval {
    double value = 0.0;
    std::array<double, 2> grad_param{};
    std::array<double, 2> grad_phys{};
};

/// Value with parametric and physical gradients; grad_xy = J^{-T} grad_(xi,eta).
inline SolutionEval eval_solution(const SolutionField& field, const ControlNet& net, double xi, double eta) {
    const ScalarEval s = eval_field(field.space, field.beta, xi, eta);
    const JacobianData jd = jacobian(net, xi, eta);
    SolutionEval out;
    out.value = s.value;
    out.grad_param = s.grad;
    out.grad_phys = jd.J.inverse().transpose() * s.grad;
    return out;
}

struct ErrorReport {
    double l2 = 0.0;
    double h1 = 0.0;
    std::size_t n = 0;
    std::size_t m = 0;
    int quadrature_order = kDefaultErrorOrder;
};

/// L2 and H1 errors integrated over the parameter square (no |det J| weight);
/// the H1 term uses parametric derivatives of u o F, obtained by the chain rule.
inline ErrorReport error_norms(const SolutionField& field, const ProblemCase& pc, const ControlNet& net,
                               int quad_order = kDefaultErrorOrder) {
    if (!pc.has_exact()) throw UnsupportedError("error_norms: problem '" + pc.name + "' has no exact solution");
    const auto& u = *pc.exact_u;
    const auto& du = *pc.exact_grad;
    double l2 = 0.0, semi = 0.0;
    for (const auto& ey : elements(field.space.kv_eta())) {
        for (const auto& ex : elements(field.space.kv_xi())) {
            double el2 = 0.0, esemi = 0.0;
            for (const auto& q : gauss_rule(quad_order, ex.a, ex.b, ey.a, ey.b).points) {
                const Point2 x = eval_map(net, q.xi, q.eta);
                const Mat2 J = jacobian_matrix(net, q.xi, q.eta);
                const ScalarEval uh = eval_field(field.space, field.beta, q.xi, q.eta);
                const auto g = du(x.x, x.y);
                const double e0 = u(x.x, x.y) - uh.value;
                const double exi = g[0] * J.a00 + g[1] * J.a10 - uh.grad[0];
                const double eeta = g[0] * J.a01 + g[1] * J.a11 - uh.grad[1];
                el2 += q.weight * e0 * e0;
                esemi += q.weight * (exi * exi + eeta * eeta);
            }
            l2 += el2;
            semi += esemi;
        }
    }
    ErrorReport rep;
    rep.l2 = std::sqrt(l2);
    rep.h1 = std::sqrt(l2 + semi);
    rep.n = field.space.n();
    rep.m = field.space.m();
    rep.quadrature_order = quad_order;
    return rep;
}

enum class GridFormat { csv, vtk };

/// Sample u^h on a resolution x resolution parametric grid (xi fastest) and
/// write CSV or legacy-VTK structured grid. Exact value and error columns are
/// included when the problem has an exact solution.
inline void export_grid(const SolutionField& field, const ProblemCase& pc, const ControlNet& net, int resolution,
                        const std::filesystem::path& path, GridFormat format) {
    if (resolution < 2) throw ValidationError("export_grid: resolution must be at least 2");
    const bool exact = pc.exact_u.has_value();
    const auto r = static_cast<std::size_t>(resolution);

    struct Sample {
        double xi, eta;
        Point2 x;
        SolutionEval s;
        double ue;
    };
    std::vector<Sample> samples;
    samples.reserve(r * r);
    for (std::size_t j = 0; j < r; ++j) {
        for (std::size_t i = 0; i < r; ++i) {
            const double xi = static_cast<double>(i) / static_cast<double>(r - 1);
            const double eta = static_cast<double>(j) / static_cast<double>(r - 1);
            const Point2 x = eval_map(net, xi, eta);
            samples.push_back({xi, eta, x, eval_solution(field, net, xi, eta), exact ? (*pc.exact_u)(x.x, x.y) : 0.0});
        }
    }

    std::ofstream os(path);
    if (!os) throw Error("export_grid: cannot open " + path.string());
    const auto f = format_double17;
    if (format == GridFormat::csv) {
        os << "xi,eta,x,y,u_h" << (exact ? ",u_exact,error" : "") << ",dudx_h,dudy_h\n";
        for (const auto& s : samples) {
            os << f(s.xi) << ',' << f(s.eta) << ',' << f(s.x.x) << ',' << f(s.x.y) << ',' << f(s.s.value);
            if (exact) os << ',' << f(s.ue) << ',' << f(s.ue - s.s.value);
            os << ',' << f(s.s.grad_phys[0]) << ',' << f(s.s.grad_phys[1]) << '\n';
        }
    } else {
        os << "# vtk DataFile Version 3.0\nisogeometric Helmholtz solution\nASCII\nDATASET STRUCTURED_GRID\n";
        os << "DIMENSIONS " << r << ' ' << r << " 1\nPOINTS " << r * r << " double\n";
        for (const auto& s : samples) os << f(s.x.x) << ' ' << f(s.x.y) << " 0\n";
        os << "POINT_DATA " << r * r << '\n';
        auto scalars = [&](const char* name, auto get) {
            os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
            for (const auto& s : samples) os << f(get(s)) << '\n';
        };
        scalars("u_h", [](const Sample& s) { return s.s.value; });
        if (exact) {
            scalars("u_exact", [](const Sample& s) { return s.ue; });
            scalars("error", [](const Sample& s) { return s.ue - s.s.value; });
        }
        os << "VECTORS grad_u_h double\n";
        for (const auto& s : samples) os << f(s.s.grad_phys[0]) << ' ' << f(s.s.grad_phys[1]) << " 0\n";
    }
    if (!os) throw Error("export_grid: write failed for " + path.string());
}

} // namespace igahelm
