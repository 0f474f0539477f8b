#pragma once

// Univariate quadratic B-spline kernel and the tensor-product space built on it.
//
// Indices are 0-based throughout: basis function i of a knot vector with n
// basis functions runs over 0..n-1, and the tensor index of (i, j) is n*j + i.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "banded.hpp"
#include "errors.hpp"
#include "grid.hpp"

namespace igahelm {

inline constexpr int kDegree = 2;
inline constexpr int kOrder = kDegree + 1;

/// Clamped quadratic knot vector on [0,1]: end knots of multiplicity exactly 3,
/// interior multiplicity at most 2.
class KnotVector {
public:
    KnotVector() : KnotVector(std::vector<double>{0, 0, 0, 1, 1, 1}) {}

    explicit KnotVector(std::vector<double> knots) : knots_(std::move(knots)) { validate(); }

    /// Open uniform knot vector with `elements` equal intervals.
    static KnotVector uniform(std::size_t elements) {
        if (elements < 1) throw ValidationError("KnotVector::uniform: need at least one element");
        std::vector<double> k{0.0, 0.0, 0.0};
        for (std::size_t e = 1; e < elements; ++e)
            k.push_back(static_cast<double>(e) / static_cast<double>(elements));
        k.insert(k.end(), {1.0, 1.0, 1.0});
        return KnotVector(std::move(k));
    }

    int degree() const noexcept { return kDegree; }
    const std::vector<double>& knots() const noexcept { return knots_; }
    double operator[](std::size_t k) const { return knots_[k]; }
    std::size_t size() const noexcept { return knots_.size(); }
    std::size_t basis_count() const noexcept { return knots_.size() - kOrder; }

    /// Number of stored knots exactly equal to t.
    int multiplicity(double t) const {
        const auto [lo, hi] = std::equal_range(knots_.begin(), knots_.end(), t);
        return static_cast<int>(hi - lo);
    }

    friend bool operator==(const KnotVector&, const KnotVector&) = default;

private:
    void validate() const {
        const std::size_t s = knots_.size();
        if (s < 6) throw ValidationError("KnotVector: need at least 6 knots (3 basis functions)");
        for (double k : knots_)
            if (!std::isfinite(k)) throw ValidationError("KnotVector: non-finite knot");
        for (std::size_t i = 1; i < s; ++i)
            if (knots_[i] < knots_[i - 1]) throw ValidationError("KnotVector: knots must be nondecreasing");
        if (knots_.front() != 0.0 || knots_.back() != 1.0)
            throw ValidationError("KnotVector: knots must start at 0 and end at 1");
        if (multiplicity(0.0) != 3 || multiplicity(1.0) != 3)
            throw ValidationError("KnotVector: end knots must have multiplicity exactly 3");
        for (std::size_t i = 3; i + 3 < s;) {
            std::size_t j = i;
            while (j + 1 < s - 3 && knots_[j + 1] == knots_[i]) ++j;
            if (j - i + 1 > 2)
                throw ValidationError("KnotVector: interior multiplicity above 2 at " + std::to_string(knots_[i]));
            i = j + 1;
        }
    }

    std::vector<double> knots_;
};

/// The three basis functions that may be nonzero at a parameter value.
struct BasisEval {
    std::size_t first_index = 0;
    std::array<double, 3> values{};
    std::array<double, 3> derivs{};
};

/// A nonzero-width knot interval [a, b]; `span` is the knot index with knots[span] == a.
struct Element {
    std::size_t span;
    double a;
    double b;
};

/// Knot index s of the interval [knots[s], knots[s+1]) containing t; t == 1 maps
/// to the last nonzero-width interval.
inline std::size_t find_span(const KnotVector& kv, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("find_span: parameter outside [0,1]: " + std::to_string(t));
    const auto& k = kv.knots();
    const std::size_t n = kv.basis_count();
    if (t >= 1.0) {
        std::size_t s = n;
        while (k[s] == k[s + 1]) --s;
        return s;
    }
    // first knot strictly greater than t, minus one
    const auto it = std::upper_bound(k.begin() + kDegree, k.begin() + static_cast<std::ptrdiff_t>(n) + 1, t);
    return static_cast<std::size_t>(it - k.begin()) - 1;
}

/// Cox-de Boor evaluation of the three active basis functions and their first derivatives.
inline BasisEval eval_basis(const KnotVector& kv, double t) {
    const std::size_t s = find_span(kv, t);
    const auto& U = kv.knots();

    // degree 1 values on span s: N_{s-1,1}, N_{s,1}
    const double w = U[s + 1] - U[s];
    const double n1_left = (U[s + 1] - t) / w;
    const double n1_right = (t - U[s]) / w;

    const double d_left = U[s + 1] - U[s - 1];
    const double d_right = U[s + 2] - U[s];
    const double a = n1_left / d_left;
    const double b = n1_right / d_right;

    BasisEval out;
    out.first_index = s - kDegree;
    out.values = {(U[s + 1] - t) * a, (t - U[s - 1]) * a + (U[s + 2] - t) * b, (t - U[s]) * b};
    out.derivs = {-2.0 * a, 2.0 * (a - b), 2.0 * b};
    return out;
}

/// Value of the single basis function `index` at t (zero outside its support).
inline double basis_value(const KnotVector& kv, std::size_t index, double t) {
    const BasisEval be = eval_basis(kv, t);
    if (index < be.first_index || index > be.first_index + 2) return 0.0;
    return be.values[index - be.first_index];
}

/// Greville abscissas: averages of two successive interior knots, one per basis function.
inline std::vector<double> greville(const KnotVector& kv) {
    const auto& k = kv.knots();
    std::vector<double> g(kv.basis_count());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = 0.5 * (k[i + 1] + k[i + 2]);
    return g;
}

/// All nonzero-width knot intervals in increasing order.
inline std::vector<Element> elements(const KnotVector& kv) {
    const auto& k = kv.knots();
    std::vector<Element> out;
    for (std::size_t s = kDegree; s < kv.basis_count(); ++s)
        if (k[s + 1] > k[s]) out.push_back({s, k[s], k[s + 1]});
    return out;
}

/// Factored collocation matrix [B_i(site_k)] at the Greville abscissas.
inline BandedLU greville_collocation(const KnotVector& kv) {
    const auto sites = greville(kv);
    BandedLU lu(sites.size(), 2, 2);
    for (std::size_t k = 0; k < sites.size(); ++k) {
        const BasisEval be = eval_basis(kv, sites[k]);
        for (std::size_t r = 0; r < 3; ++r) {
            const std::size_t i = be.first_index + r;
            if (be.values[r] != 0.0) lu.at(k, i) = be.values[r];
        }
    }
    lu.factor();
    return lu;
}

/// Boehm insertion of a single knot t into a coefficient sequence over kv.
/// T needs `T + T` and `double * T`.
template <typename T>
std::pair<KnotVector, std::vector<T>> insert_knot_once(const KnotVector& kv, std::span<const T> coeffs, double t) {
    if (!(t > 0.0 && t < 1.0)) throw DomainError("insert_knot: knot must lie in (0,1): " + std::to_string(t));
    if (coeffs.size() != kv.basis_count()) throw ValidationError("insert_knot: coefficient count mismatch");
    if (kv.multiplicity(t) >= 2)
        throw RefinementError("insert_knot: multiplicity of " + std::to_string(t) + " would exceed 2");

    const auto& U = kv.knots();
    const std::size_t s = find_span(kv, t);
    const std::size_t n = kv.basis_count();

    std::vector<T> q;
    q.reserve(n + 1);
    for (std::size_t i = 0; i + 1 < s; ++i) q.push_back(coeffs[i]);
    for (std::size_t i = s - 1; i <= s; ++i) {
        const double alpha = (t - U[i]) / (U[i + kDegree] - U[i]);
        q.push_back(alpha * coeffs[i] + (1.0 - alpha) * coeffs[i - 1]);
    }
    for (std::size_t i = s; i < n; ++i) q.push_back(coeffs[i]);

    std::vector<double> nk(U.begin(), U.end());
    nk.insert(nk.begin() + static_cast<std::ptrdiff_t>(s) + 1, t);
    return {KnotVector(std::move(nk)), std::move(q)};
}

/// Raise the multiplicity of t to `target_multiplicity` (1 or 2), transporting
/// coefficients so the represented spline is unchanged.
template <typename T>
std::pair<KnotVector, std::vector<T>> insert_knot(const KnotVector& kv, std::span<const T> coeffs, double t,
                                                  int target_multiplicity) {
    if (!(t > 0.0 && t < 1.0)) throw DomainError("insert_knot: knot must lie in (0,1): " + std::to_string(t));
    if (target_multiplicity > 2) throw RefinementError("insert_knot: interior multiplicity is capped at 2");
    std::pair<KnotVector, std::vector<T>> cur{kv, std::vector<T>(coeffs.begin(), coeffs.end())};
    while (cur.first.multiplicity(t) < target_multiplicity)
        cur = insert_knot_once<T>(cur.first, cur.second, t);
    return cur;
}

/// Insert knots (each entry once, in the order given) into a single coefficient sequence.
template <typename T>
std::pair<KnotVector, std::vector<T>> insert_knots(const KnotVector& kv, std::span<const T> coeffs,
                                                   std::span<const double> new_knots) {
    std::pair<KnotVector, std::vector<T>> cur{kv, std::vector<T>(coeffs.begin(), coeffs.end())};
    for (double t : new_knots) cur = insert_knot_once<T>(cur.first, cur.second, t);
    return cur;
}

/// Insert knots along the xi direction of a coefficient grid (applied to every xi line).
template <typename T>
std::pair<KnotVector, Grid2<T>> insert_knots_xi(const KnotVector& kv, const Grid2<T>& grid,
                                                std::span<const double> new_knots) {
    if (new_knots.empty()) return {kv, grid};
    KnotVector out_kv = kv;
    Grid2<T> out(kv.basis_count() + new_knots.size(), grid.m());
    for (std::size_t j = 0; j < grid.m(); ++j) {
        const auto line = grid.xi_line(j);
        auto [k2, c2] = insert_knots<T>(kv, line, new_knots);
        for (std::size_t i = 0; i < c2.size(); ++i) out(i, j) = c2[i];
        out_kv = std::move(k2);
    }
    return {out_kv, std::move(out)};
}

/// Insert knots along the eta direction of a coefficient grid (applied to every eta line).
template <typename T>
std::pair<KnotVector, Grid2<T>> insert_knots_eta(const KnotVector& kv, const Grid2<T>& grid,
                                                 std::span<const double> new_knots) {
    if (new_knots.empty()) return {kv, grid};
    KnotVector out_kv = kv;
    Grid2<T> out(grid.n(), kv.basis_count() + new_knots.size());
    for (std::size_t i = 0; i < grid.n(); ++i) {
        const auto line = grid.eta_line(i);
        auto [k2, c2] = insert_knots<T>(kv, line, new_knots);
        for (std::size_t j = 0; j < c2.size(); ++j) out(i, j) = c2[j];
        out_kv = std::move(k2);
    }
    return {out_kv, std::move(out)};
}

/// Tensor-product space S(kv_xi) x S(kv_eta) with the vectorized index p = n*j + i.
class TensorSpace {
public:
    TensorSpace(KnotVector kv_xi, KnotVector kv_eta) : kv_xi_(std::move(kv_xi)), kv_eta_(std::move(kv_eta)) {}

    const KnotVector& kv_xi() const noexcept { return kv_xi_; }
    const KnotVector& kv_eta() const noexcept { return kv_eta_; }
    std::size_t n() const noexcept { return kv_xi_.basis_count(); }
    std::size_t m() const noexcept { return kv_eta_.basis_count(); }
    std::size_t dim() const noexcept { return n() * m(); }

    std::size_t index(std::size_t i, std::size_t j) const noexcept { return n() * j + i; }
    std::pair<std::size_t, std::size_t> unindex(std::size_t p) const noexcept { return {p % n(), p / n()}; }

    /// True for basis functions that do not vanish on the boundary (the set I1).
    bool is_boundary(std::size_t p) const noexcept {
        const auto [i, j] = unindex(p);
        return i == 0 || j == 0 || i + 1 == n() || j + 1 == m();
    }

    std::vector<std::size_t> interior_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t p = 0; p < dim(); ++p)
            if (!is_boundary(p)) out.push_back(p);
        return out;
    }
    std::vector<std::size_t> boundary_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t p = 0; p < dim(); ++p)
            if (is_boundary(p)) out.push_back(p);
        return out;
    }

    friend bool operator==(const TensorSpace&, const TensorSpace&) = default;

private:
    KnotVector kv_xi_;
    KnotVector kv_eta_;
};

/// Value and parametric gradient of a scalar spline field.
struct ScalarEval {
    double value = 0.0;
    std::array<double, 2> grad{};  // (d/dxi, d/deta)
};

/// Evaluate sum_{i,j} c(i,j) B_i(xi) B_j(eta) from the 3x3 active block.
inline ScalarEval eval_field(const TensorSpace& space, const Grid2<double>& coeffs, double xi, double eta) {
    const BasisEval bx = eval_basis(space.kv_xi(), xi);
    const BasisEval by = eval_basis(space.kv_eta(), eta);
    ScalarEval out;
    for (std::size_t b = 0; b < 3; ++b) {
        for (std::size_t a = 0; a < 3; ++a) {
            const double c = coeffs(bx.first_index + a, by.first_index + b);
            out.value += c * bx.values[a] * by.values[b];
            out.grad[0] += c * bx.derivs[a] * by.values[b];
            out.grad[1] += c * bx.values[a] * by.derivs[b];
        }
    }
    return out;
}

} // namespace igahelm
