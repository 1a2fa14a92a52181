#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "complex_matrix.hpp"
#include "error.hpp"

namespace mtcforge {

// Complex C_n -> ... -> C_0 over the complex numbers, with boundary matrices written in
// the distinguished bases. Lengths and boundaries are given top-down: (dim C_n, ..., dim C_0)
// and (d_n, ..., d_1), where d_i has shape dim C_{i-1} x dim C_i.
class BasedChainComplex {
public:
    BasedChainComplex(std::vector<std::size_t> lengths_top_down, std::vector<ComplexMatrix> boundaries_top_down,
                      double tol = 1e-9) {
        if (lengths_top_down.empty()) throw InputError("chain complex needs at least one term");
        if (boundaries_top_down.size() + 1 != lengths_top_down.size())
            throw InputError("need exactly one boundary map between consecutive terms");
        dims_.assign(lengths_top_down.rbegin(), lengths_top_down.rend());
        boundaries_.assign(boundaries_top_down.rbegin(), boundaries_top_down.rend());
        for (std::size_t i = 1; i <= top(); ++i) {
            const auto& d = boundary(i);
            if (d.rows() != dims_[i - 1] || d.cols() != dims_[i])
                throw InputError("boundary d_" + std::to_string(i) + " has shape " + std::to_string(d.rows()) + "x" +
                                 std::to_string(d.cols()) + ", expected " + std::to_string(dims_[i - 1]) + "x" +
                                 std::to_string(dims_[i]));
        }
        for (std::size_t i = 2; i <= top(); ++i) {
            const double scale = std::max(1.0, boundary(i - 1).max_abs() * boundary(i).max_abs());
            const double err = composite_norm(i);
            if (err > tol * scale)
                throw InputError("d_" + std::to_string(i - 1) + " d_" + std::to_string(i) +
                                 " is not zero (max entry " + std::to_string(err) + ")");
        }
    }

    std::size_t top() const { return dims_.size() - 1; }
    std::size_t dim(std::size_t degree) const { return degree < dims_.size() ? dims_[degree] : 0; }
    const ComplexMatrix& boundary(std::size_t degree) const { return boundaries_.at(degree - 1); }

    std::vector<std::size_t> lengths_top_down() const { return {dims_.rbegin(), dims_.rend()}; }

    // Max entry of d_{i-1} d_i.
    double composite_norm(std::size_t i) const {
        const auto prod = boundary(i - 1) * boundary(i);
        return prod.max_abs();
    }

private:
    std::vector<std::size_t> dims_;
    std::vector<ComplexMatrix> boundaries_;
};

struct TorsionResult {
    std::optional<double> value;
    bool acyclic = false;
    // rank of d_i for i = 1..n, bottom-up.
    std::vector<std::size_t> per_degree_ranks;
};

// How the columns b_i spanning each image are picked.
enum class PivotRule { column_pivoted, forward, reverse };

namespace detail {

// Indices of columns of `a` whose images are independent at relative threshold `rel_tol`.
inline std::vector<std::size_t> select_independent_columns(const Eigen::MatrixXcd& a, PivotRule rule, double rel_tol) {
    const Eigen::Index n = a.cols();
    std::vector<std::size_t> chosen;
    if (n == 0 || a.rows() == 0) return chosen;
    const double max_norm = a.colwise().norm().maxCoeff();
    if (max_norm == 0.0) return chosen;
    const double threshold = rel_tol * max_norm;

    Eigen::MatrixXcd residual = a;
    std::vector<bool> used(std::size_t(n), false);
    auto project_out = [&](Eigen::Index k) {
        const Eigen::VectorXcd q = residual.col(k) / residual.col(k).norm();
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index c = 0; c < n; ++c) {
                if (used[std::size_t(c)]) continue;
                residual.col(c) -= q * q.dot(residual.col(c));
            }
        }
    };

    if (rule == PivotRule::column_pivoted) {
        while (true) {
            Eigen::Index best = -1;
            double best_norm = threshold;
            for (Eigen::Index c = 0; c < n; ++c) {
                if (used[std::size_t(c)]) continue;
                const double nrm = residual.col(c).norm();
                if (nrm > best_norm) {
                    best_norm = nrm;
                    best = c;
                }
            }
            if (best < 0) break;
            used[std::size_t(best)] = true;
            chosen.push_back(std::size_t(best));
            project_out(best);
        }
        std::sort(chosen.begin(), chosen.end());
        return chosen;
    }

    for (Eigen::Index step = 0; step < n; ++step) {
        const Eigen::Index c = rule == PivotRule::forward ? step : n - 1 - step;
        if (residual.col(c).norm() <= threshold) continue;
        used[std::size_t(c)] = true;
        chosen.push_back(std::size_t(c));
        project_out(c);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

}  // namespace detail

inline TorsionResult chain_torsion(const BasedChainComplex& complex, PivotRule rule = PivotRule::column_pivoted,
                                   double rank_tol = 1e-9) {
    const std::size_t n = complex.top();
    // b[i] = chosen columns of d_i, i = 1..n; b[0] and b[n+1] stay empty.
    std::vector<std::vector<std::size_t>> b(n + 2);
    TorsionResult result;
    for (std::size_t i = 1; i <= n; ++i) {
        b[i] = detail::select_independent_columns(complex.boundary(i).eigen(), rule, rank_tol);
        result.per_degree_ranks.push_back(b[i].size());
    }
    for (std::size_t i = 0; i <= n; ++i) {
        if (b[i + 1].size() + b[i].size() != complex.dim(i)) return result;
    }
    result.acyclic = true;

    double log_tau = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const auto d = Eigen::Index(complex.dim(i));
        if (d == 0) continue;
        Eigen::MatrixXcd transition = Eigen::MatrixXcd::Zero(d, d);
        Eigen::Index col = 0;
        if (i + 1 <= n) {
            const auto& up = complex.boundary(i + 1).eigen();
            for (auto c : b[i + 1]) transition.col(col++) = up.col(Eigen::Index(c));
        }
        for (auto c : b[i]) transition(Eigen::Index(c), col++) = 1.0;
        const double det = std::abs(transition.partialPivLu().determinant());
        if (!(det > 0.0)) {
            result.acyclic = false;
            return result;
        }
        log_tau += (i % 2 == 1 ? 1.0 : -1.0) * std::log(det);
    }
    result.value = std::exp(log_tau);
    return result;
}

// tau(total) = tau(sub) tau(quotient) within rel_tol, for acyclic complexes whose total
// basis is the sub basis followed by a lift of the quotient basis.
inline bool multiplicativity_check(const BasedChainComplex& sub, const BasedChainComplex& total,
                                   const BasedChainComplex& quotient, double rel_tol = 1e-6) {
    if (sub.top() != total.top() || quotient.top() != total.top())
        throw InputError("complexes have different lengths");
    for (std::size_t i = 0; i <= total.top(); ++i) {
        if (sub.dim(i) + quotient.dim(i) != total.dim(i))
            throw InputError("dim C_" + std::to_string(i) + " of total is not the sum of sub and quotient");
    }
    const auto ts = chain_torsion(sub);
    const auto tt = chain_torsion(total);
    const auto tq = chain_torsion(quotient);
    if (!ts.acyclic || !tt.acyclic || !tq.acyclic) throw InputError("multiplicativity needs acyclic complexes");
    const double expected = *ts.value * *tq.value;
    return std::abs(*tt.value - expected) <= rel_tol * std::max(std::abs(expected), std::abs(*tt.value));
}

}  // namespace mtcforge
