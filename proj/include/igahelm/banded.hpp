#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "errors.hpp"

namespace igahelm {

/// Square band matrix with `lower` sub- and `upper` super-diagonals, factored in
/// place by Gaussian elimination without pivoting. Intended for B-spline
/// collocation matrices at Schoenberg-Whitney sites, which are totally positive,
/// so the unpivoted factorization is stable.
class BandedLU {
public:
    BandedLU(std::size_t size, std::size_t lower, std::size_t upper)
        : n_(size), kl_(lower), ku_(upper), band_(size * (lower + upper + 1), 0.0) {}

    std::size_t size() const noexcept { return n_; }

    bool in_band(std::size_t r, std::size_t c) const noexcept {
        return c + kl_ >= r && r + ku_ >= c;
    }

    double& at(std::size_t r, std::size_t c) {
        if (!in_band(r, c)) throw ValidationError("BandedLU: entry outside band");
        return band_[r * width() + (c + kl_ - r)];
    }
    double get(std::size_t r, std::size_t c) const {
        return in_band(r, c) ? band_[r * width() + (c + kl_ - r)] : 0.0;
    }

    /// Factor A = LU in place. Throws if a pivot vanishes.
    void factor() {
        for (std::size_t k = 0; k < n_; ++k) {
            const double pivot = get(k, k);
            if (!(std::abs(pivot) > 0.0)) throw Error("BandedLU: zero pivot in collocation matrix");
            const std::size_t rmax = std::min(n_ - 1, k + kl_);
            const std::size_t cmax = std::min(n_ - 1, k + ku_);
            for (std::size_t r = k + 1; r <= rmax; ++r) {
                const double l = get(r, k) / pivot;
                at(r, k) = l;
                for (std::size_t c = k + 1; c <= cmax; ++c) at(r, c) -= l * get(k, c);
            }
        }
        factored_ = true;
    }

    /// Solve with a previously factored matrix; the factorization is reusable.
    std::vector<double> solve(std::span<const double> rhs) const {
        if (!factored_) throw Error("BandedLU: solve before factor");
        std::vector<double> x(rhs.begin(), rhs.end());
        for (std::size_t r = 0; r < n_; ++r) {
            const std::size_t c0 = r > kl_ ? r - kl_ : 0;
            for (std::size_t c = c0; c < r; ++c) x[r] -= get(r, c) * x[c];
        }
        for (std::size_t r = n_; r-- > 0;) {
            const std::size_t cmax = std::min(n_ - 1, r + ku_);
            for (std::size_t c = r + 1; c <= cmax; ++c) x[r] -= get(r, c) * x[c];
            x[r] /= get(r, r);
        }
        return x;
    }

private:
    std::size_t width() const noexcept { return kl_ + ku_ + 1; }

    std::size_t n_;
    std::size_t kl_;
    std::size_t ku_;
    std::vector<double> band_;
    bool factored_ = false;
};

} // namespace igahelm
