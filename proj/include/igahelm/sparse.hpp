#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <span>
#include <vector>

#include "errors.hpp"
#include "net_io.hpp"

namespace igahelm {

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/// Row-compressed square matrix with sorted, unique column indices per row.
class CsrMatrix {
public:
    CsrMatrix() = default;

    /// Consolidate a coordinate list. Duplicates are summed in their input order,
    /// so identical triplet sequences give identical bits.
    static CsrMatrix from_triplets(std::size_t size, std::span<const Triplet> triplets) {
        CsrMatrix a;
        a.n_ = size;
        std::vector<std::size_t> count(size + 1, 0);
        for (const auto& t : triplets) {
            if (t.row >= size || t.col >= size) throw ValidationError("CsrMatrix: triplet index out of range");
            ++count[t.row + 1];
        }
        std::partial_sum(count.begin(), count.end(), count.begin());

        // stable bucket by row
        std::vector<std::size_t> order(triplets.size());
        std::vector<std::size_t> fill(count.begin(), count.end() - 1);
        for (std::size_t k = 0; k < triplets.size(); ++k) order[fill[triplets[k].row]++] = k;

        a.row_ptr_.assign(size + 1, 0);
        for (std::size_t r = 0; r < size; ++r) {
            auto first = order.begin() + static_cast<std::ptrdiff_t>(count[r]);
            auto last = order.begin() + static_cast<std::ptrdiff_t>(count[r + 1]);
            std::stable_sort(first, last, [&](std::size_t x, std::size_t y) { return triplets[x].col < triplets[y].col; });
            for (auto it = first; it != last; ++it) {
                const auto& t = triplets[*it];
                if (a.col_idx_.size() > a.row_ptr_[r] && a.col_idx_.back() == t.col)
                    a.values_.back() += t.value;
                else {
                    a.col_idx_.push_back(t.col);
                    a.values_.push_back(t.value);
                }
            }
            a.row_ptr_[r + 1] = a.col_idx_.size();
        }
        return a;
    }

    /// Adopt raw CSR arrays; column indices must be sorted and unique within each row.
    static CsrMatrix from_parts(std::size_t size, std::vector<std::size_t> row_ptr, std::vector<std::size_t> col_idx,
                                std::vector<double> values) {
        if (row_ptr.size() != size + 1 || col_idx.size() != values.size() || row_ptr.back() != values.size())
            throw ValidationError("CsrMatrix: inconsistent CSR arrays");
        CsrMatrix a;
        a.n_ = size;
        a.row_ptr_ = std::move(row_ptr);
        a.col_idx_ = std::move(col_idx);
        a.values_ = std::move(values);
        return a;
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t nonzeros() const noexcept { return values_.size(); }
    const std::vector<std::size_t>& row_ptr() const noexcept { return row_ptr_; }
    const std::vector<std::size_t>& col_idx() const noexcept { return col_idx_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::vector<double>& values() noexcept { return values_; }

    std::size_t row_nonzeros(std::size_t r) const { return row_ptr_[r + 1] - row_ptr_[r]; }

    /// Stored value or 0.
    double at(std::size_t r, std::size_t c) const {
        const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
        const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
        const auto it = std::lower_bound(first, last, c);
        return (it != last && *it == c) ? values_[static_cast<std::size_t>(it - col_idx_.begin())] : 0.0;
    }

    /// Replace row r by the identity row e_r.
    void set_identity_row(std::size_t r) {
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) values_[k] = (col_idx_[k] == r) ? 1.0 : 0.0;
    }

    /// Drop stored zeros.
    void prune() {
        std::vector<std::size_t> rp(n_ + 1, 0), ci;
        std::vector<double> v;
        for (std::size_t r = 0; r < n_; ++r) {
            for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
                if (values_[k] != 0.0) {
                    ci.push_back(col_idx_[k]);
                    v.push_back(values_[k]);
                }
            }
            rp[r + 1] = ci.size();
        }
        row_ptr_ = std::move(rp);
        col_idx_ = std::move(ci);
        values_ = std::move(v);
    }

    std::vector<double> multiply(std::span<const double> x) const {
        std::vector<double> y(n_, 0.0);
        for (std::size_t r = 0; r < n_; ++r) {
            double s = 0.0;
            for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += values_[k] * x[col_idx_[k]];
            y[r] = s;
        }
        return y;
    }

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> col_idx_;
    std::vector<double> values_;
};

/// Matrix Market coordinate/real/general dump (1-based indices).
inline void write_matrix_market(const CsrMatrix& a, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw Error("write_matrix_market: cannot open " + path.string());
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << a.size() << ' ' << a.size() << ' ' << a.nonzeros() << '\n';
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t k = a.row_ptr()[r]; k < a.row_ptr()[r + 1]; ++k)
            os << r + 1 << ' ' << a.col_idx()[k] + 1 << ' ' << format_double17(a.values()[k]) << '\n';
    if (!os) throw Error("write_matrix_market: write failed for " + path.string());
}

} // namespace igahelm
