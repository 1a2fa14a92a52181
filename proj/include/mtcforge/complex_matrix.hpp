#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "error.hpp"

namespace mtcforge {

using complex = std::complex<double>;

// Dense complex matrix; rejects non-finite entries at construction.
class ComplexMatrix {
public:
    using Storage = Eigen::MatrixXcd;

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols) : m_(Storage::Zero(Eigen::Index(rows), Eigen::Index(cols))) {}
    explicit ComplexMatrix(Storage m) : m_(std::move(m)) { check_finite(); }

    static ComplexMatrix from_rows(const std::vector<std::vector<complex>>& rows) {
        const std::size_t nr = rows.size();
        const std::size_t nc = nr == 0 ? 0 : rows.front().size();
        ComplexMatrix out(nr, nc);
        for (std::size_t i = 0; i < nr; ++i) {
            if (rows[i].size() != nc) throw InputError("ragged matrix rows");
            for (std::size_t j = 0; j < nc; ++j) out.m_(Eigen::Index(i), Eigen::Index(j)) = rows[i][j];
        }
        out.check_finite();
        return out;
    }

    static ComplexMatrix identity(std::size_t n) { return ComplexMatrix(Storage::Identity(Eigen::Index(n), Eigen::Index(n))); }

    std::size_t rows() const { return std::size_t(m_.rows()); }
    std::size_t cols() const { return std::size_t(m_.cols()); }

    complex operator()(std::size_t i, std::size_t j) const { return m_(Eigen::Index(i), Eigen::Index(j)); }

    void set(std::size_t i, std::size_t j, complex v) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw InputError("non-finite matrix entry");
        m_(Eigen::Index(i), Eigen::Index(j)) = v;
    }

    const Storage& eigen() const { return m_; }

    double max_abs() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }

    bool is_symmetric(double tol) const {
        if (rows() != cols()) return false;
        return m_.size() == 0 || (m_ - m_.transpose()).cwiseAbs().maxCoeff() <= tol;
    }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols() != b.rows()) throw InputError("matrix product shape mismatch");
        return ComplexMatrix(Storage(a.m_ * b.m_));
    }
    friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.rows() != b.rows() || a.cols() != b.cols()) throw InputError("matrix sum shape mismatch");
        return ComplexMatrix(Storage(a.m_ + b.m_));
    }
    friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.rows() != b.rows() || a.cols() != b.cols()) throw InputError("matrix difference shape mismatch");
        return ComplexMatrix(Storage(a.m_ - b.m_));
    }
    friend ComplexMatrix operator*(complex s, const ComplexMatrix& a) { return ComplexMatrix(Storage(s * a.m_)); }

private:
    void check_finite() const {
        if (!m_.allFinite()) throw InputError("non-finite matrix entry");
    }

    Storage m_;
};

// Largest entrywise modulus of a - b.
inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw InputError("matrix comparison shape mismatch");
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    return (a.eigen() - b.eigen()).cwiseAbs().maxCoeff();
}

}  // namespace mtcforge
