#pragma once

// Element-loop assembly of the global system  A alpha = b.
//
// Rows in the interior set I0 hold the Galerkin equations
//   A(q,p) = int [grad psi_p^T (J^T J)^{-1} grad psi_q - k^2 psi_p psi_q] |det J|
//   b(q)   = int [(f + k^2 u_g) psi_q - grad u_g^T (J^T J)^{-1} grad psi_q] |det J|
// over the parameter square; rows in the boundary set I1 are identity rows with b = 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <thread>
#include <vector>

#include "dirichlet.hpp"
#include "geometry.hpp"
#include "problems.hpp"
#include "quadrature.hpp"
#include "sparse.hpp"
#include "spline.hpp"

namespace igahelm {

inline constexpr int kDefaultAssemblyOrder = 3;

struct ElementSystem {
    std::array<double, 81> matrix{};  // row-major 9x9
    std::array<double, 9> vector{};
    std::array<std::size_t, 9> indices{};  // global p = n*j + i, local order (i,j),(i,j+1),(i,j+2),(i+1,j),...
};

struct AssembledSystem {
    CsrMatrix matrix;
    std::vector<double> rhs;
    std::vector<std::size_t> interior_idx;
    std::vector<std::size_t> boundary_idx;
};

struct AssemblyOptions {
    int quad_order = kDefaultAssemblyOrder;
    unsigned threads = 1;
};

/// Local 9x9 matrix and 9-vector of the element [ex.a, ex.b] x [ey.a, ey.b].
inline ElementSystem element_system(const TensorSpace& space, const ControlNet& net, const ProblemCase& pc,
                                    const LiftCoefficients& lift, const Element& ex, const Element& ey,
                                    const QuadratureRule& rule) {
    ElementSystem es;
    const std::size_t i0 = ex.span - kDegree;
    const std::size_t j0 = ey.span - kDegree;
    for (std::size_t di = 0; di < 3; ++di)
        for (std::size_t dj = 0; dj < 3; ++dj) es.indices[3 * di + dj] = space.index(i0 + di, j0 + dj);

    const auto& P = net.points();
    const auto& D = lift.delta;
    std::array<double, 9> psi{};
    std::array<std::array<double, 2>, 9> dpsi{};

    for (const auto& q : rule.points) {
        const BasisEval bx = eval_basis(space.kv_xi(), q.xi);
        const BasisEval by = eval_basis(space.kv_eta(), q.eta);

        Point2 x;
        Mat2 J;
        double ug = 0.0;
        std::array<double, 2> dug{0.0, 0.0};
        for (std::size_t di = 0; di < 3; ++di) {
            for (std::size_t dj = 0; dj < 3; ++dj) {
                const std::size_t a = 3 * di + dj;
                psi[a] = bx.values[di] * by.values[dj];
                dpsi[a] = {bx.derivs[di] * by.values[dj], bx.values[di] * by.derivs[dj]};
                const Point2& p = P(i0 + di, j0 + dj);
                x = x + psi[a] * p;
                J.a00 += p.x * dpsi[a][0];
                J.a01 += p.x * dpsi[a][1];
                J.a10 += p.y * dpsi[a][0];
                J.a11 += p.y * dpsi[a][1];
                const double d = D(i0 + di, j0 + dj);
                ug += d * psi[a];
                dug[0] += d * dpsi[a][0];
                dug[1] += d * dpsi[a][1];
            }
        }
        const double det = J.det();
        if (!(std::abs(det) >= kDetFloor)) throw GeometryError("singular geometry: |det J| below 1e-12", q.xi, q.eta);
        const Mat2 G = (J.transpose() * J).inverse();
        const double wdet = q.weight * std::abs(det);
        const double k2 = pc.k_squared(x.x, x.y);
        const double f = eval_forcing_guarded(pc, x.x, x.y);
        const auto Gdug = G * dug;
        const double src = f + k2 * ug;

        for (std::size_t a = 0; a < 9; ++a) {
            const auto Gda = G * dpsi[a];
            for (std::size_t b = 0; b < 9; ++b) {
                const double stiff = Gda[0] * dpsi[b][0] + Gda[1] * dpsi[b][1];
                es.matrix[9 * a + b] += wdet * (stiff - k2 * psi[a] * psi[b]);
            }
            es.vector[a] += wdet * (src * psi[a] - (Gdug[0] * dpsi[a][0] + Gdug[1] * dpsi[a][1]));
        }
    }
    return es;
}

namespace detail {

// Tensor sparsity pattern: row (i,j) couples to (i',j') with |i-i'| <= 2 and |j-j'| <= 2.
struct TensorPattern {
    std::vector<std::size_t> row_ptr;
    std::vector<std::size_t> col_idx;
};

inline TensorPattern tensor_pattern(std::size_t n, std::size_t m) {
    TensorPattern pat;
    pat.row_ptr.reserve(n * m + 1);
    pat.row_ptr.push_back(0);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t jlo = j >= 2 ? j - 2 : 0, jhi = std::min(m - 1, j + 2);
            const std::size_t ilo = i >= 2 ? i - 2 : 0, ihi = std::min(n - 1, i + 2);
            for (std::size_t jj = jlo; jj <= jhi; ++jj)
                for (std::size_t ii = ilo; ii <= ihi; ++ii) pat.col_idx.push_back(n * jj + ii);
            pat.row_ptr.push_back(pat.col_idx.size());
        }
    }
    return pat;
}

// Position of column (ic,jc) inside the pattern row of (ir,jr).
inline std::size_t pattern_offset(std::size_t n, std::size_t ir, std::size_t jr, std::size_t ic, std::size_t jc) {
    const std::size_t ilo = ir >= 2 ? ir - 2 : 0, ihi = std::min(n - 1, ir + 2);
    const std::size_t jlo = jr >= 2 ? jr - 2 : 0;
    return (jc - jlo) * (ihi - ilo + 1) + (ic - ilo);
}

} // namespace detail

/// Assemble over all nonzero-width elements. Element systems are computed in
/// parallel one element row at a time and scattered serially in element order,
/// so the result is bit-identical for any thread count.
inline AssembledSystem assemble(const TensorSpace& space, const ControlNet& net, const ProblemCase& pc,
                                const LiftCoefficients& lift, const AssemblyOptions& opts = {}) {
    if (!(space.kv_xi() == net.kv_xi() && space.kv_eta() == net.kv_eta()))
        throw ValidationError("assemble: space and net must share knot vectors");
    if (lift.delta.n() != space.n() || lift.delta.m() != space.m())
        throw ValidationError("assemble: lift dimensions do not match the space");

    const std::size_t n = space.n();
    const std::size_t N = space.dim();
    auto pat = detail::tensor_pattern(n, space.m());
    std::vector<double> values(pat.col_idx.size(), 0.0);
    std::vector<double> rhs(N, 0.0);

    const auto ex_list = elements(space.kv_xi());
    const auto ey_list = elements(space.kv_eta());
    const unsigned threads = std::max(1u, opts.threads);
    std::vector<ElementSystem> batch(ex_list.size());

    for (const auto& ey : ey_list) {
        auto work = [&](std::size_t begin, std::size_t end) {
            for (std::size_t e = begin; e < end; ++e) {
                const auto& ex = ex_list[e];
                batch[e] = element_system(space, net, pc, lift, ex, ey,
                                          gauss_rule(opts.quad_order, ex.a, ex.b, ey.a, ey.b));
            }
        };
        if (threads == 1 || ex_list.size() < 2) {
            work(0, ex_list.size());
        } else {
            std::vector<std::jthread> pool;
            std::vector<std::exception_ptr> errors(threads);
            const std::size_t chunk = (ex_list.size() + threads - 1) / threads;
            for (unsigned t = 0; t < threads; ++t) {
                const std::size_t b = t * chunk, e = std::min(ex_list.size(), b + chunk);
                if (b >= e) break;
                pool.emplace_back([&, t, b, e] {
                    try {
                        work(b, e);
                    } catch (...) {
                        errors[t] = std::current_exception();
                    }
                });
            }
            pool.clear();
            for (auto& err : errors)
                if (err) std::rethrow_exception(err);
        }

        for (const auto& es : batch) {
            for (std::size_t a = 0; a < 9; ++a) {
                const auto [ir, jr] = space.unindex(es.indices[a]);
                const std::size_t base = pat.row_ptr[es.indices[a]];
                for (std::size_t b = 0; b < 9; ++b) {
                    const auto [ic, jc] = space.unindex(es.indices[b]);
                    values[base + detail::pattern_offset(n, ir, jr, ic, jc)] += es.matrix[9 * a + b];
                }
                rhs[es.indices[a]] += es.vector[a];
            }
        }
    }

    AssembledSystem sys;
    sys.matrix = CsrMatrix::from_parts(N, std::move(pat.row_ptr), std::move(pat.col_idx), std::move(values));
    sys.interior_idx = space.interior_indices();
    sys.boundary_idx = space.boundary_indices();
    for (std::size_t p : sys.boundary_idx) {
        sys.matrix.set_identity_row(p);
        rhs[p] = 0.0;
    }
    sys.matrix.prune();
    sys.rhs = std::move(rhs);
    return sys;
}

} // namespace igahelm
