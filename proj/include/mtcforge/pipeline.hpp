#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "central.hpp"
#include "chebyshev.hpp"
#include "complex_matrix.hpp"
#include "error.hpp"
#include "modular_data.hpp"
#include "phase.hpp"
#include "seifert.hpp"
#include "torus_bundle.hpp"

namespace mtcforge {

// (generator^exponent, Sym^sym_degree)
struct LoopOperator {
    std::string generator;
    std::int64_t exponent = 1;
    int sym_degree = 0;

    friend bool operator==(const LoopOperator&, const LoopOperator&) = default;
};

struct CandidateData {
    std::string tag;
    std::vector<std::string> labels;
    std::size_t unit = 0;
    std::vector<RationalPhase> cs;
    std::vector<double> tor;
    std::vector<std::vector<LoopOperator>> loops;
    int epsilon = 1;
    // Eigenvalue phase phi of rho_beta(g) per generator; tr rho_beta(g^e) = 2 cos(2 pi e phi).
    std::vector<std::map<std::string, RationalPhase>> holonomy;
    std::vector<CentralRep> central;
    ModularData data;

    std::size_t rank() const { return labels.size(); }
};

// W_beta(alpha) = prod over alpha's loop operators of Delta_deg(eps tr rho_beta(g^e)).
inline double w_symbol(const CandidateData& c, std::size_t beta, std::size_t alpha) {
    double w = 1.0;
    for (const auto& op : c.loops.at(alpha)) {
        const auto it = c.holonomy.at(beta).find(op.generator);
        if (it == c.holonomy.at(beta).end()) throw InputError("no holonomy recorded for generator " + op.generator);
        const double trace = 2.0 * (op.exponent * it->second).cos2pi();
        w *= chebyshev(op.sym_degree, double(c.epsilon) * trace);
    }
    return w;
}

namespace detail {

// Fills c.data from CS, torsion and W-symbols: S~_ab = W_b(a) W_0(b), theta_a = -(CS_a - CS_0), D^2 = 2 Tor_0.
inline void assemble(CandidateData& c, std::optional<std::vector<int>> grading) {
    const std::size_t n = c.rank();
    if (c.unit != 0) throw InputError("the unit must be the first label");
    std::vector<std::vector<double>> w(n, std::vector<double>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) w[a][b] = w_symbol(c, b, a);
    ModularData& d = c.data;
    d.labels = c.labels;
    d.s_tilde = ComplexMatrix(n, n);
    d.dims.clear();
    d.twists.clear();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) d.s_tilde.set(a, b, w[a][b] * w[b][c.unit]);
        d.twists.push_back(-(c.cs[a] - c.cs[c.unit]));
    }
    for (std::size_t b = 0; b < n; ++b) d.dims.push_back(d.s_tilde(c.unit, b).real());
    d.total_dim_sq = 2.0 * c.tor[c.unit];
    d.grading = std::move(grading);
}

// Re-expresses central reps on manifold characters in candidate order; order[i] = manifold index of label i.
inline std::vector<CentralRep> reorder_central(const std::vector<CentralRep>& reps, const std::vector<std::size_t>& order,
                                               std::size_t manifold_count) {
    std::vector<std::optional<std::size_t>> position(manifold_count);
    for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
    std::vector<CentralRep> out;
    for (const auto& rep : reps) {
        CentralRep r;
        r.sigma = rep.sigma;
        for (auto src : order) {
            const auto img = rep.image[src];
            r.image.push_back(img ? position[*img] : std::nullopt);
            r.cs_shift.push_back(rep.cs_shift[src]);
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace detail

enum class UnitChoice { canonical, reseated };

// r with M = (3,1),(3,1),(r,1), or nullopt.
inline std::optional<std::int64_t> m_family_index(const SeifertData& m) {
    const auto& f = m.fibers;
    if (f[0].p == 3 && f[0].q == 1 && f[1].p == 3 && f[1].q == 1 && f[2].q == 1) return f[2].p;
    return std::nullopt;
}

inline CandidateData sfs_candidate(const SeifertData& m, UnitChoice unit = UnitChoice::canonical, int epsilon = -1) {
    const auto chars = enumerate_characters(m);
    std::vector<std::size_t> order;
    CandidateData c;
    c.tag = m.tag();
    c.epsilon = epsilon;
    if (unit == UnitChoice::canonical) {
        order.resize(chars.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (const auto& chi : chars) {
            c.labels.push_back(chi.label());
            std::vector<LoopOperator> ops;
            for (std::size_t k = 0; k < 3; ++k)
                ops.push_back({"x" + std::to_string(k + 1), m.fibers[k].c, int(chi.j[k])});
            c.loops.push_back(std::move(ops));
        }
    } else {
        const auto r = m_family_index(m);
        if (!r) throw InputError("reseated unit is only defined for (3,1),(3,1),(r,1), got " + m.tag());
        // rho~_j = rho_{r-2-j}, where rho_i is the character with j_3 = i.
        for (std::int64_t j = 0; j <= *r - 2; ++j) {
            const std::int64_t target = *r - 2 - j;
            std::size_t idx = 0;
            while (chars[idx].j[2] != target) ++idx;
            order.push_back(idx);
            c.labels.push_back(std::to_string(j));
            c.loops.push_back({{"x3", 1, int(j)}});
        }
        c.tag += "~";
    }
    std::vector<int> grading;
    for (auto idx : order) {
        const auto& chi = chars[idx];
        c.cs.push_back(cs_invariant(m, chi));
        c.tor.push_back(torsion(m, chi));
        std::map<std::string, RationalPhase> hol;
        for (std::size_t k = 0; k < 3; ++k) hol["x" + std::to_string(k + 1)] = chi.eigen_phase(m, k);
        c.holonomy.push_back(std::move(hol));
        grading.push_back(int(chi.j[0] % 2));
    }
    c.central = detail::reorder_central(central_reps(m), order, chars.size());
    c.unit = 0;
    detail::assemble(c, unit == UnitChoice::canonical ? std::optional<std::vector<int>>(grading) : std::nullopt);
    return c;
}

inline CandidateData torus_candidate(const TorusMonodromy& t, int epsilon = 1) {
    const auto chars = enumerate_torus_characters(t);
    CandidateData c;
    c.tag = t.tag();
    c.epsilon = epsilon;
    for (const auto& chi : chars) {
        c.labels.push_back(chi.label());
        c.cs.push_back(torus_cs(t, chi));
        c.tor.push_back(torus_torsion(t, chi));
        if (chi.reducible())
            c.loops.push_back({{"x", 1, 0}});
        else
            c.loops.push_back({{"x", t.m * chi.k, 1}});
        c.holonomy.push_back({{"x", chi.x_phase(t)}, {"y", chi.y_phase(t)}});
    }
    c.central = torus_central_reps(t);
    c.unit = 0;
    detail::assemble(c, std::nullopt);
    return c;
}

// The comparison category for three-fiber candidates: TLJ(A_1) (x)gr TLJ(A_2) (x)gr TLJ(A_3).
inline ModularData sfs_catalog_product(const SeifertData& m) {
    return graded_product(graded_product(tlj_data(m.fibers[0].kauffman), tlj_data(m.fibers[1].kauffman)),
                          tlj_data(m.fibers[2].kauffman));
}

// TLJ(e^{2 pi i / 4r}) listed in the canonical M(r) label order: even labels, then odd.
inline ModularData m_family_tlj(std::int64_t r) {
    const auto d = tlj_data(RationalPhase::make(1, 4 * r));
    std::vector<std::size_t> order;
    for (std::size_t parity : {0, 1})
        for (std::size_t j = parity; j < d.rank(); j += 2) order.push_back(j);
    return permuted(d, order);
}

enum class CentralClass { bosonic, fermionic, neither };

inline const char* to_string(CentralClass c) {
    switch (c) {
        case CentralClass::bosonic: return "bosonic";
        case CentralClass::fermionic: return "fermionic";
        default: return "neither";
    }
}

struct AdmissibilityReport {
    double sum_inverse_2tor = 0.0;
    double gauss_sum_modulus = 0.0;
    double target_modulus = 0.0;
    std::vector<std::size_t> s_X;
    double s_L = 1.0;
    std::vector<std::vector<std::size_t>> orbits;
    std::vector<CentralClass> bosonic_fermionic;
    bool admissible = false;

    friend bool operator==(const AdmissibilityReport&, const AdmissibilityReport&) = default;
};

inline CentralClass classify(const CentralRep& rep) {
    if (!rep.keeps_labels()) return CentralClass::neither;
    bool all_zero = true;
    for (const auto& s : rep.cs_shift) {
        if (s.is_zero()) continue;
        all_zero = false;
        if (s != RationalPhase::make(1, 2)) return CentralClass::neither;
    }
    return all_zero ? CentralClass::bosonic : CentralClass::fermionic;
}

inline AdmissibilityReport admissibility_report(const CandidateData& c, double tol = 1e-9) {
    AdmissibilityReport rep;
    const std::size_t n = c.rank();
    std::complex<double> gauss = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        rep.sum_inverse_2tor += 1.0 / (2.0 * c.tor[a]);
        gauss += (-c.cs[a]).to_complex() / (2.0 * c.tor[a]);
    }
    rep.gauss_sum_modulus = std::abs(gauss);

    const double tor0 = c.tor[c.unit];
    std::vector<bool> in_sx(n, false);
    in_sx[c.unit] = true;
    for (const auto& sigma : c.central) {
        const auto img = sigma.image[c.unit];
        if (img && c.cs[*img] == c.cs[c.unit] && std::abs(c.tor[*img] - tor0) <= tol * tor0) in_sx[*img] = true;
    }
    for (std::size_t a = 0; a < n; ++a)
        if (in_sx[a]) rep.s_X.push_back(a);

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    bool fermionic_in_g0 = false;
    for (const auto& sigma : c.central) {
        rep.bosonic_fermionic.push_back(classify(sigma));
        const auto img = sigma.image[c.unit];
        if (!img || !in_sx[*img]) continue;
        if (rep.bosonic_fermionic.back() == CentralClass::fermionic) fermionic_in_g0 = true;
        for (std::size_t a = 0; a < n; ++a)
            if (sigma.image[a]) parent[find(a)] = find(*sigma.image[a]);
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t a = 0; a < n; ++a) groups[find(a)].push_back(a);
    for (auto& [root, members] : groups) rep.orbits.push_back(members);
    std::sort(rep.orbits.begin(), rep.orbits.end());

    rep.s_L = fermionic_in_g0 ? std::sqrt(2.0) : 1.0;
    rep.target_modulus = std::sqrt(double(rep.s_X.size())) / (rep.s_L * std::sqrt(2.0 * tor0));
    rep.admissible = std::abs(rep.sum_inverse_2tor - 1.0) < tol && std::abs(rep.gauss_sum_modulus - rep.target_modulus) < tol;
    return rep;
}

struct Certificate {
    bool pass = false;
    std::size_t rank = 0;
    double max_s_delta = 0.0;
    double max_dim_delta = 0.0;
    double total_dim_sq_rel_delta = 0.0;
    bool twists_equal = false;

    friend bool operator==(const Certificate&, const Certificate&) = default;
};

inline Certificate certify(const ModularData& got, const ModularData& expected, double tol = 1e-9) {
    if (got.rank() != expected.rank())
        throw InputError("rank mismatch: " + std::to_string(got.rank()) + " vs " + std::to_string(expected.rank()));
    Certificate cert;
    cert.rank = got.rank();
    cert.max_s_delta = max_abs_diff(got.s_tilde, expected.s_tilde);
    for (std::size_t i = 0; i < got.rank(); ++i)
        cert.max_dim_delta = std::max(cert.max_dim_delta, std::abs(got.dims[i] - expected.dims[i]));
    cert.total_dim_sq_rel_delta = std::abs(got.total_dim_sq - expected.total_dim_sq) / expected.total_dim_sq;
    cert.twists_equal = got.twists == expected.twists;
    cert.pass = cert.twists_equal && cert.max_s_delta < tol && cert.max_dim_delta < tol;
    return cert;
}

inline Certificate certify(const CandidateData& c, const ModularData& expected, double tol = 1e-9) {
    return certify(c.data, expected, tol);
}

// Largest relative gap between d_a^2 and D^2 / (2 Tor_a), with d_a = W_0(a).
inline double torsion_dimension_defect(const CandidateData& c) {
    double worst = 0.0;
    for (std::size_t a = 0; a < c.rank(); ++a) {
        const double expected = c.data.total_dim_sq / (2.0 * c.tor[a]);
        const double d = c.data.dims[a];
        worst = std::max(worst, std::abs(d * d - expected) / std::max(1.0, expected));
    }
    return worst;
}

struct Sl2zDiagnostics {
    double s4_defect = 0.0;
    double st3_defect = 0.0;
    std::complex<double> lambda{};
};

// Residuals of S^4 = 1 and (ST)^3 = lambda S^2 with lambda fitted by least squares.
inline Sl2zDiagnostics sl2z_diagnostics(const ModularData& d) {
    const auto s = d.s_matrix().eigen();
    const auto n = s.rows();
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) t(i, i) = d.twists[std::size_t(i)].to_complex();
    const Eigen::MatrixXcd s2 = s * s;
    const Eigen::MatrixXcd st = s * t;
    const Eigen::MatrixXcd st3 = st * st * st;
    Sl2zDiagnostics out;
    out.s4_defect = (s2 * s2 - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    const std::complex<double> denom = s2.cwiseAbs2().sum();
    out.lambda = (s2.conjugate().cwiseProduct(st3)).sum() / denom;
    out.st3_defect = (st3 - out.lambda * s2).cwiseAbs().maxCoeff();
    return out;
}

}  // namespace mtcforge
