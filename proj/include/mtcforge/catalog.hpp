#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "complex_matrix.hpp"
#include "error.hpp"
#include "modular_data.hpp"
#include "phase.hpp"

namespace mtcforge {

// Quantum integer [n]_A = (A^{2n} - A^{-2n}) / (A^2 - A^{-2}) for A = e^{2 pi i t}, as a sine ratio.
inline double quantum_integer(const RationalPhase& a, std::int64_t n) {
    return (2 * n * a).sin2pi() / (2 * a).sin2pi();
}

// Number of labels r - 1 of TLJ(A), where r is the order of A^4.
inline std::int64_t tlj_order(const RationalPhase& a) {
    const auto a4 = 4 * a;
    if (a4.is_zero()) throw InputError("A^4 = 1 has no TLJ category");
    return a4.order();
}

// D(A) = sqrt(2r) / |A^2 - A^{-2}|
inline double tlj_total_dim(const RationalPhase& a) {
    const double r = double(tlj_order(a));
    return std::sqrt(2.0 * r) / std::abs(2.0 * (2 * a).sin2pi());
}

inline ModularData tlj_data(const RationalPhase& a) {
    const std::int64_t r = tlj_order(a);
    const std::size_t n = std::size_t(r - 1);
    ModularData out;
    out.s_tilde = ComplexMatrix(n, n);
    std::vector<int> grading;
    const auto minus_a = a + RationalPhase::make(1, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = std::int64_t(i);
        out.labels.push_back(std::to_string(i));
        out.dims.push_back((i % 2 ? -1.0 : 1.0) * quantum_integer(a, ii + 1));
        out.twists.push_back(ii * (ii + 2) * minus_a);
        grading.push_back(int(i % 2));
        for (std::size_t j = 0; j < n; ++j) {
            const auto jj = std::int64_t(j);
            const double sign = (i + j) % 2 ? -1.0 : 1.0;
            out.s_tilde.set(i, j, sign * quantum_integer(a, (ii + 1) * (jj + 1)));
        }
    }
    const double d = tlj_total_dim(a);
    out.total_dim_sq = d * d;
    out.grading = grading;
    return out;
}

inline ModularData su2_level(std::int64_t k) {
    if (k < 0) throw InputError("level must be nonnegative");
    const std::int64_t r = k + 2;
    const std::size_t n = std::size_t(k + 1);
    const double base = RationalPhase::make(1, 2 * r).sin2pi();
    ModularData out;
    out.s_tilde = ComplexMatrix(n, n);
    std::vector<int> grading;
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = std::int64_t(i);
        out.labels.push_back(std::to_string(i));
        out.twists.push_back(RationalPhase::make(ii * (ii + 2), 4 * r));
        grading.push_back(int(i % 2));
        for (std::size_t j = 0; j < n; ++j) {
            const auto jj = std::int64_t(j);
            out.s_tilde.set(i, j, RationalPhase::make((ii + 1) * (jj + 1), 2 * r).sin2pi() / base);
        }
        out.dims.push_back(out.s_tilde(0, i).real());
    }
    out.total_dim_sq = double(r) / (2.0 * base * base);
    out.grading = grading;
    return out;
}

// Adjoint subcategory of C(so_N, q, 2N), q = e^{m pi i / 2N}; labels 1, Z, Y_1..Y_r.
inline ModularData soN2_adjoint(std::int64_t N, std::int64_t m) {
    if (N < 5 || N % 2 == 0) throw InputError("N must be odd and at least 5");
    if (m % 2 == 0 || std::gcd(m, 2 * N) != 1) throw InputError("m must be odd and coprime to 2N");
    const std::int64_t r = (N - 1) / 2;
    const std::size_t n = std::size_t(r + 2);
    ModularData out;
    out.labels = {"1", "Z"};
    out.dims = {1.0, 1.0};
    out.twists = {RationalPhase{}, RationalPhase{}};
    for (std::int64_t k = 1; k <= r; ++k) {
        out.labels.push_back("Y" + std::to_string(k));
        out.dims.push_back(2.0);
        // q^{2(Nk - k^2)}
        out.twists.push_back(RationalPhase::make(m * (N * k - k * k), 2 * N));
    }
    out.s_tilde = ComplexMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double v = 0.0;
            if (i < 2 && j < 2)
                v = 1.0;
            else if (i < 2 || j < 2)
                v = 2.0;
            else
                v = 4.0 * RationalPhase::make(m * std::int64_t(i - 1) * std::int64_t(j - 1), N).cos2pi();
            out.s_tilde.set(i, j, v);
        }
    }
    out.total_dim_sq = 2.0 * double(N);
    return out;
}

// Sector-wise Deligne product of two Z2-graded data: even pairs then odd pairs, lexicographic.
inline ModularData graded_product(const ModularData& x, const ModularData& y) {
    if (!x.grading || !y.grading) throw InputError("graded product needs Z2-graded inputs");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (int g : {0, 1})
        for (std::size_t i = 0; i < x.rank(); ++i)
            for (std::size_t j = 0; j < y.rank(); ++j)
                if ((*x.grading)[i] == g && (*y.grading)[j] == g) pairs.emplace_back(i, j);
    ModularData out;
    const std::size_t n = pairs.size();
    out.s_tilde = ComplexMatrix(n, n);
    std::vector<int> grading;
    for (std::size_t a = 0; a < n; ++a) {
        const auto [i, j] = pairs[a];
        out.labels.push_back("(" + x.labels[i] + "," + y.labels[j] + ")");
        out.dims.push_back(x.dims[i] * y.dims[j]);
        out.twists.push_back(x.twists[i] + y.twists[j]);
        grading.push_back((*x.grading)[i]);
        for (std::size_t b = 0; b < n; ++b) {
            const auto [k, l] = pairs[b];
            out.s_tilde.set(a, b, x.s_tilde(i, k) * y.s_tilde(j, l));
        }
    }
    double total = 0.0;
    for (int g : {0, 1}) {
        double sx = 0.0, sy = 0.0;
        for (std::size_t i = 0; i < x.rank(); ++i)
            if ((*x.grading)[i] == g) sx += x.dims[i] * x.dims[i];
        for (std::size_t j = 0; j < y.rank(); ++j)
            if ((*y.grading)[j] == g) sy += y.dims[j] * y.dims[j];
        total += sx * sy;
    }
    out.total_dim_sq = total;
    out.grading = grading;
    return out;
}

struct ModularityReport {
    bool is_modular = false;
    std::vector<std::size_t> transparent_labels;
    double s_det_modulus = 0.0;

    friend bool operator==(const ModularityReport&, const ModularityReport&) = default;
};

// Labels whose S~ row is proportional to the dims row; modular iff that is the unit alone.
inline ModularityReport find_transparent(const ModularData& d, double tol = 1e-9) {
    ModularityReport rep;
    const std::size_t n = d.rank();
    for (std::size_t i = 0; i < n; ++i) {
        const complex kappa = d.s_tilde(i, 0) / d.dims[0];
        double row_scale = 0.0, err = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row_scale = std::max(row_scale, std::abs(d.s_tilde(i, j)));
            err = std::max(err, std::abs(d.s_tilde(i, j) - kappa * d.dims[j]));
        }
        if (err <= tol * std::max(1.0, row_scale)) rep.transparent_labels.push_back(i);
    }
    rep.s_det_modulus = n == 0 ? 0.0 : std::abs(d.s_matrix().eigen().partialPivLu().determinant());
    rep.is_modular = rep.transparent_labels.size() == 1 && rep.transparent_labels[0] == 0;
    return rep;
}

struct FusionRules {
    std::size_t rank = 0;
    // values[(i * rank + j) * rank + k] = N_{ij}^k before rounding
    std::vector<double> values;
    std::vector<std::int64_t> coeffs;
    // largest distance of a value (including any imaginary part) from its rounded integer
    double max_deviation = 0.0;
    bool nonnegative = true;

    double value(std::size_t i, std::size_t j, std::size_t k) const { return values[(i * rank + j) * rank + k]; }
    std::int64_t operator()(std::size_t i, std::size_t j, std::size_t k) const { return coeffs[(i * rank + j) * rank + k]; }
};

// N_{ij}^k = sum_m S_im S_jm conj(S_km) / S_0m with S = S~ / D.
inline FusionRules verlinde_fusion(const ModularData& d, double tol = 1e-9) {
    if (!find_transparent(d, tol).is_modular) throw InputError("Verlinde formula needs modular data");
    const std::size_t n = d.rank();
    const auto s = d.s_matrix().eigen();
    FusionRules out;
    out.rank = n;
    out.values.resize(n * n * n);
    out.coeffs.resize(n * n * n);
    const auto ni = Eigen::Index(n);
    const bool real = s.imag().cwiseAbs().maxCoeff() <= 1e-14 * std::max(1.0, s.cwiseAbs().maxCoeff());
    auto record = [&](std::size_t i, std::size_t j, std::size_t k, complex v) {
        const double rounded = std::round(v.real());
        out.values[(i * n + j) * n + k] = v.real();
        out.coeffs[(i * n + j) * n + k] = std::int64_t(rounded);
        out.max_deviation = std::max(out.max_deviation, std::abs(v - complex(rounded)));
        if (rounded < 0.0) out.nonnegative = false;
    };
    if (real) {
        const Eigen::MatrixXd sr = s.real();
        for (std::size_t i = 0; i < n; ++i) {
            Eigen::VectorXd ratio(ni);
            for (Eigen::Index m = 0; m < ni; ++m) ratio(m) = sr(Eigen::Index(i), m) / sr(0, m);
            const Eigen::MatrixXd fused = sr * ratio.asDiagonal() * sr.transpose();
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) record(i, j, k, fused(Eigen::Index(j), Eigen::Index(k)));
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            Eigen::VectorXcd ratio(ni);
            for (Eigen::Index m = 0; m < ni; ++m) ratio(m) = s(Eigen::Index(i), m) / s(0, m);
            const Eigen::MatrixXcd fused = s * ratio.asDiagonal() * s.adjoint();
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) record(i, j, k, fused(Eigen::Index(j), Eigen::Index(k)));
        }
    }
    return out;
}

// Max |sum_m N_ij^m N_mk^l - sum_m N_jk^m N_im^l| over (i, k) pairs: every pair when
// rank <= full_rank_limit, otherwise `samples` x `samples` seeded pairs always including the unit.
inline double fusion_associativity_defect(const FusionRules& f, std::size_t full_rank_limit = 32,
                                          std::size_t samples = 8, std::uint64_t seed = 1) {
    const std::size_t n = f.rank;
    const auto ni = Eigen::Index(n);
    std::vector<std::size_t> picks(n);
    std::iota(picks.begin(), picks.end(), std::size_t{0});
    if (n > full_rank_limit) {
        std::mt19937_64 rng(seed);
        std::shuffle(picks.begin() + 1, picks.end(), rng);
        picks.resize(std::min(n, samples));
    }
    // left[i](j, m) = N_ij^m ; right[k](m, l) = N_mk^l
    auto left = [&](std::size_t i) {
        Eigen::MatrixXd a(ni, ni);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t m = 0; m < n; ++m) a(Eigen::Index(j), Eigen::Index(m)) = f.value(i, j, m);
        return a;
    };
    auto right = [&](std::size_t k) {
        Eigen::MatrixXd a(ni, ni);
        for (std::size_t m = 0; m < n; ++m)
            for (std::size_t l = 0; l < n; ++l) a(Eigen::Index(m), Eigen::Index(l)) = f.value(m, k, l);
        return a;
    };
    double defect = 0.0;
    for (auto i : picks) {
        const auto li = left(i);
        for (auto k : picks) {
            // sum_m N_jk^m N_im^l = (right(k) restricted as (j, m)) * (left(i) as (m, l))
            const Eigen::MatrixXd lhs = li * right(k);
            const Eigen::MatrixXd rhs = right(k) * li;
            defect = std::max(defect, (lhs - rhs).cwiseAbs().maxCoeff());
        }
    }
    return defect;
}

}  // namespace mtcforge
