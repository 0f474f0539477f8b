#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace igahelm {

/// n x m coefficient grid stored with the first index running fastest,
/// so that the flat position of (i, j) is n*j + i.
template <typename T>
class Grid2 {
public:
    Grid2() = default;
    Grid2(std::size_t n, std::size_t m, const T& fill = T{}) : n_(n), m_(m), data_(n * m, fill) {}
    Grid2(std::size_t n, std::size_t m, std::vector<T> flat) : n_(n), m_(m), data_(std::move(flat)) {
        assert(data_.size() == n_ * m_);
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t m() const noexcept { return m_; }
    std::size_t size() const noexcept { return data_.size(); }

    T& operator()(std::size_t i, std::size_t j) { return data_[n_ * j + i]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[n_ * j + i]; }

    std::span<T> flat() noexcept { return data_; }
    std::span<const T> flat() const noexcept { return data_; }
    const std::vector<T>& values() const noexcept { return data_; }

    /// Entries (0..n-1, j): one line along the xi direction.
    std::vector<T> xi_line(std::size_t j) const {
        return {data_.begin() + static_cast<std::ptrdiff_t>(n_ * j),
                data_.begin() + static_cast<std::ptrdiff_t>(n_ * (j + 1))};
    }
    /// Entries (i, 0..m-1): one line along the eta direction.
    std::vector<T> eta_line(std::size_t i) const {
        std::vector<T> out(m_);
        for (std::size_t j = 0; j < m_; ++j) out[j] = (*this)(i, j);
        return out;
    }

    friend bool operator==(const Grid2&, const Grid2&) = default;

private:
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::vector<T> data_;
};

} // namespace igahelm
