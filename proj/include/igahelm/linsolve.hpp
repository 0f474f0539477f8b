#pragma once

#include <chrono>
#include <cmath>
#include <string_view>
#include <vector>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "assembly.hpp"
#include "errors.hpp"

namespace igahelm {

inline constexpr double kResidualBound = 1e-9;

enum class SolveMethod { sparse_lu };

inline std::string_view to_string(SolveMethod m) {
    switch (m) {
        case SolveMethod::sparse_lu: return "sparse_lu";
    }
    return "?";
}

struct SolveReport {
    std::vector<double> alpha;
    double residual_norm = 0.0;  // ||A alpha - b|| / max(1, ||b||)
    SolveMethod method = SolveMethod::sparse_lu;
    double factor_time = 0.0;
    double solve_time = 0.0;
};

inline double relative_residual(const CsrMatrix& a, std::span<const double> x, std::span<const double> b) {
    const auto ax = a.multiply(x);
    double rr = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        rr += (ax[i] - b[i]) * (ax[i] - b[i]);
        bb += b[i] * b[i];
    }
    return std::sqrt(rr) / std::max(1.0, std::sqrt(bb));
}

/// Sparse LU with partial pivoting (COLAMD column ordering). Handles the
/// indefinite matrices that arise for k^2 > 0. Boundary entries of alpha are
/// pinned to exactly zero.
inline SolveReport solve(const AssembledSystem& sys, SolveMethod method = SolveMethod::sparse_lu) {
    using Clock = std::chrono::steady_clock;
    const auto& A = sys.matrix;
    const auto n = static_cast<Eigen::Index>(A.size());

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(A.nonzeros());
    for (std::size_t r = 0; r < A.size(); ++r)
        for (std::size_t k = A.row_ptr()[r]; k < A.row_ptr()[r + 1]; ++k)
            trips.emplace_back(static_cast<int>(r), static_cast<int>(A.col_idx()[k]), A.values()[k]);
    Eigen::SparseMatrix<double> M(n, n);
    M.setFromTriplets(trips.begin(), trips.end());
    M.makeCompressed();

    SolveReport rep;
    rep.method = method;
    const auto t0 = Clock::now();
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(M);
    lu.factorize(M);
    const auto t1 = Clock::now();
    if (lu.info() != Eigen::Success) throw SolverError("sparse LU factorization failed: " + lu.lastErrorMessage(), INFINITY);

    const Eigen::Map<const Eigen::VectorXd> b(sys.rhs.data(), n);
    const Eigen::VectorXd x = lu.solve(b);
    const auto t2 = Clock::now();
    if (lu.info() != Eigen::Success) throw SolverError("sparse LU solve failed", INFINITY);

    rep.alpha.assign(x.data(), x.data() + n);
    for (std::size_t p : sys.boundary_idx) rep.alpha[p] = 0.0;
    rep.residual_norm = relative_residual(A, rep.alpha, sys.rhs);
    rep.factor_time = std::chrono::duration<double>(t1 - t0).count();
    rep.solve_time = std::chrono::duration<double>(t2 - t1).count();
    if (!(rep.residual_norm <= kResidualBound)) throw SolverError("residual above 1e-9", rep.residual_norm);
    return rep;
}

} // namespace igahelm
