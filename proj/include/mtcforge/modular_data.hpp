#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "complex_matrix.hpp"
#include "error.hpp"
#include "phase.hpp"

namespace mtcforge {

// Unnormalized modular data; the unit label sits at index 0.
struct ModularData {
    std::vector<std::string> labels;
    std::vector<double> dims;
    std::vector<RationalPhase> twists;
    ComplexMatrix s_tilde;
    double total_dim_sq = 0.0;
    std::optional<std::vector<int>> grading;

    std::size_t rank() const { return labels.size(); }

    // Normalized S = S~ / D.
    ComplexMatrix s_matrix() const { return complex(1.0 / std::sqrt(total_dim_sq)) * s_tilde; }

    // Violated invariants, empty when the data is well formed.
    std::vector<std::string> violations(double tol = 1e-9) const {
        std::vector<std::string> out;
        const std::size_t n = rank();
        if (n == 0) {
            out.push_back("no labels");
            return out;
        }
        if (dims.size() != n || twists.size() != n || s_tilde.rows() != n || s_tilde.cols() != n) {
            out.push_back("field sizes disagree with the label count");
            return out;
        }
        if (grading && grading->size() != n) out.push_back("grading size disagrees with the label count");
        const double scale = std::max(1.0, s_tilde.max_abs());
        if (!s_tilde.is_symmetric(tol * scale)) out.push_back("S~ is not symmetric");
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(s_tilde(0, j) - complex(dims[j])) > tol * scale) {
                out.push_back("first row of S~ differs from dims at " + labels[j]);
                break;
            }
        }
        if (std::abs(s_tilde(0, 0) - 1.0) > tol) out.push_back("S~_00 != 1");
        double sum = 0.0;
        for (double d : dims) sum += d * d;
        if (!(total_dim_sq > 0.0) || std::abs(sum - total_dim_sq) > tol * std::max(1.0, total_dim_sq))
            out.push_back("sum of squared dims differs from total_dim_sq");
        if (!twists[0].is_zero()) out.push_back("unit twist is not trivial");
        return out;
    }

    void validate(double tol = 1e-9) const {
        const auto v = violations(tol);
        if (!v.empty()) throw InputError("invalid modular data: " + v.front());
    }
};

// The same data with labels listed as d.labels[order[0]], d.labels[order[1]], ...
inline ModularData permuted(const ModularData& d, const std::vector<std::size_t>& order) {
    if (order.size() != d.rank()) throw InputError("permutation size disagrees with the rank");
    std::vector<bool> seen(d.rank(), false);
    for (auto i : order) {
        if (i >= d.rank() || seen[i]) throw InputError("not a permutation of the labels");
        seen[i] = true;
    }
    ModularData out;
    out.s_tilde = ComplexMatrix(d.rank(), d.rank());
    if (d.grading) out.grading.emplace();
    for (std::size_t a = 0; a < order.size(); ++a) {
        out.labels.push_back(d.labels[order[a]]);
        out.dims.push_back(d.dims[order[a]]);
        out.twists.push_back(d.twists[order[a]]);
        if (d.grading) out.grading->push_back((*d.grading)[order[a]]);
        for (std::size_t b = 0; b < order.size(); ++b) out.s_tilde.set(a, b, d.s_tilde(order[a], order[b]));
    }
    out.total_dim_sq = d.total_dim_sq;
    return out;
}

}  // namespace mtcforge
