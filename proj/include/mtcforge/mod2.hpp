#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "error.hpp"

namespace mtcforge {

using BitVector = std::vector<std::uint8_t>;

class Mod2Matrix {
public:
    Mod2Matrix() = default;
    Mod2Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), bits_(rows * cols, 0) {}

    // Accepts arbitrary integers and reduces them mod 2.
    static Mod2Matrix from_integers(const std::vector<std::vector<std::int64_t>>& rows) {
        const std::size_t nr = rows.size();
        const std::size_t nc = nr == 0 ? 0 : rows.front().size();
        Mod2Matrix out(nr, nc);
        for (std::size_t i = 0; i < nr; ++i) {
            if (rows[i].size() != nc) throw InputError("ragged matrix rows");
            for (std::size_t j = 0; j < nc; ++j) out.set(i, j, rows[i][j]);
        }
        return out;
    }

    static Mod2Matrix identity(std::size_t n) {
        Mod2Matrix out(n, n);
        for (std::size_t i = 0; i < n; ++i) out.set(i, i, 1);
        return out;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::uint8_t operator()(std::size_t i, std::size_t j) const { return bits_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, std::int64_t v) { bits_[i * cols_ + j] = std::uint8_t(v & 1); }

    BitVector apply(const BitVector& v) const {
        if (v.size() != cols_) throw InputError("vector length does not match column count");
        BitVector out(rows_, 0);
        for (std::size_t i = 0; i < rows_; ++i) {
            std::uint8_t acc = 0;
            for (std::size_t j = 0; j < cols_; ++j) acc ^= std::uint8_t((*this)(i, j) & v[j]);
            out[i] = acc;
        }
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint8_t> bits_;
};

namespace detail {

// Reduced row echelon form over F2; returns pivot column per pivot row.
inline std::vector<std::size_t> rref_in_place(Mod2Matrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && m(sel, col) == 0) ++sel;
        if (sel == m.rows()) continue;
        if (sel != row) {
            for (std::size_t j = 0; j < m.cols(); ++j) {
                const auto a = m(row, j);
                m.set(row, j, m(sel, j));
                m.set(sel, j, a);
            }
        }
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i != row && m(i, col) != 0) {
                for (std::size_t j = 0; j < m.cols(); ++j) m.set(i, j, m(i, j) ^ m(row, j));
            }
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace detail

inline std::size_t mod2_rank(Mod2Matrix m) { return detail::rref_in_place(m).size(); }

// Basis of {v : M v = 0 mod 2}, one vector per free column.
inline std::vector<BitVector> mod2_kernel(Mod2Matrix m) {
    const auto pivots = detail::rref_in_place(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<BitVector> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        BitVector v(m.cols(), 0);
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = m(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

// All 2^k elements of the span of a basis, starting with zero.
inline std::vector<BitVector> mod2_span(const std::vector<BitVector>& basis, std::size_t length) {
    std::vector<BitVector> out{BitVector(length, 0)};
    for (const auto& b : basis) {
        const std::size_t n = out.size();
        for (std::size_t i = 0; i < n; ++i) {
            BitVector v = out[i];
            for (std::size_t j = 0; j < length; ++j) v[j] ^= b[j];
            out.push_back(std::move(v));
        }
    }
    return out;
}

}  // namespace mtcforge
