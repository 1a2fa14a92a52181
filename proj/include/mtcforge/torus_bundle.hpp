#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "central.hpp"
#include "complex_matrix.hpp"
#include "error.hpp"
#include "mod2.hpp"
#include "phase.hpp"
#include "torsion.hpp"

namespace mtcforge {

struct TorusMonodromy {
    std::int64_t a = 0, b = 0, c = 0, d = 0;
    std::int64_t N = 0;
    // Meaningful only when supported.
    std::int64_t c_tilde = 0;
    std::int64_t m = 0;
    std::int64_t r = 0;
    bool supported = false;

    std::string tag() const {
        return "torus(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "," +
               std::to_string(d) + ")";
    }

    // Why the pipeline does not handle this monodromy; empty when supported.
    std::string unsupported_reason() const {
        if (supported) return {};
        if (N <= 4) return "N = a+d+2 = " + std::to_string(N) + " is not > 4";
        if (N % 2 == 0) return "N = " + std::to_string(N) + " is even; the even-N family is an open case";
        return "gcd(c, N) = " + std::to_string(std::gcd(c, N)) + " > 1; the non-coprime family is an open case";
    }
};

inline TorusMonodromy make_torus_bundle(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    if (a * d - b * c != 1)
        throw InputError("monodromy determinant is " + std::to_string(a * d - b * c) + ", expected 1");
    if (std::abs(a + d) <= 2) throw InputError("|a+d| = " + std::to_string(std::abs(a + d)) + " <= 2, not Anosov");
    TorusMonodromy t{a, b, c, d, a + d + 2, 0, 0, 0, false};
    t.supported = t.N > 4 && t.N % 2 == 1 && std::gcd(c, t.N) == 1;
    if (t.supported) {
        while (mod_floor(c * t.c_tilde, t.N) != 1) ++t.c_tilde;
        t.m = -2 * t.c_tilde - t.N;
        t.r = (t.N - 1) / 2;
    }
    return t;
}

struct TorusCharacter {
    enum class Kind { reducible_plus, reducible_minus, irreducible };
    Kind kind = Kind::irreducible;
    std::int64_t k = 0;
    std::int64_t l = 0;
    int eps_x = 0;
    int eps_y = 0;
    std::complex<double> u{};
    std::complex<double> v{};

    bool reducible() const { return kind != Kind::irreducible; }

    std::string label() const {
        switch (kind) {
            case Kind::reducible_plus: return "rho+";
            case Kind::reducible_minus: return "rho-";
            default: return "rho" + std::to_string(k);
        }
    }

    // Eigenvalue phases of rho(x) and rho(y); for the parabolic reducible ones the sign (-1)^eps.
    RationalPhase x_phase(const TorusMonodromy& t) const {
        return reducible() ? RationalPhase::make(eps_x, 2) : RationalPhase::make(k, t.N);
    }
    RationalPhase y_phase(const TorusMonodromy& t) const {
        return reducible() ? RationalPhase::make(eps_y, 2) : RationalPhase::make(l, t.N);
    }
};

inline void require_supported(const TorusMonodromy& t) {
    if (!t.supported) throw UnsupportedError(t.tag() + " is not supported: " + t.unsupported_reason());
}

inline std::vector<TorusCharacter> enumerate_torus_characters(const TorusMonodromy& t) {
    require_supported(t);
    const double a = double(t.a), c = double(t.c), d = double(t.d);
    const double disc = std::sqrt((a + d) * (a + d) - 4.0);
    const std::complex<double> u = (d - a + disc) / (2.0 * c);
    const std::complex<double> root = std::sqrt(c * u + a);
    std::vector<TorusCharacter> out;
    for (int sign : {1, -1}) {
        TorusCharacter chi;
        chi.kind = sign > 0 ? TorusCharacter::Kind::reducible_plus : TorusCharacter::Kind::reducible_minus;
        chi.u = u;
        chi.v = double(sign) / root;
        out.push_back(chi);
    }
    for (std::int64_t k = 1; k <= t.r; ++k) {
        TorusCharacter chi;
        chi.k = k;
        chi.l = mod_floor(-t.c_tilde * (t.a + 1) * k, t.N);
        out.push_back(chi);
    }
    return out;
}

// CS of the reducible character with signs (eps_x, eps_y): ((a+d+2) ex ey + b ex + c ey) / 4.
inline RationalPhase torus_cs_reducible(const TorusMonodromy& t, int eps_x, int eps_y) {
    return RationalPhase::make(t.N * eps_x * eps_y + t.b * eps_x + t.c * eps_y, 4);
}

inline RationalPhase torus_cs(const TorusMonodromy& t, const TorusCharacter& chi) {
    if (chi.reducible()) return torus_cs_reducible(t, chi.eps_x, chi.eps_y);
    require_supported(t);
    return RationalPhase::make(-t.c_tilde * chi.k * chi.k, t.N);
}

inline double torus_torsion(const TorusMonodromy& t, const TorusCharacter& chi) {
    const double n = std::abs(double(t.N));
    return chi.reducible() ? n : n / 4.0;
}

// Abelianized relations mod 2 on (x, y, h).
inline Mod2Matrix torus_relation_matrix(const TorusMonodromy& t) {
    return Mod2Matrix::from_integers({{t.a + 1, t.c, 0}, {t.b, t.d + 1, 0}});
}

// sigma = (x, y, h). Flipping h exchanges rho+ and rho- and fixes each rho_k up to conjugacy;
// flipping x or y sends rho_k outside the list since -alpha is not an N-th root of unity.
inline std::vector<CentralRep> torus_central_reps(const TorusMonodromy& t) {
    const auto chars = enumerate_torus_characters(t);
    std::vector<CentralRep> out;
    for (const auto& sigma : mod2_span(mod2_kernel(torus_relation_matrix(t)), 3)) {
        CentralRep rep;
        rep.sigma = sigma;
        for (std::size_t i = 0; i < chars.size(); ++i) {
            const auto& chi = chars[i];
            std::optional<std::size_t> img;
            if (chi.reducible()) {
                if (!sigma[0] && !sigma[1]) img = sigma[2] ? (i == 0 ? 1 : 0) : i;
            } else if (!sigma[0] && !sigma[1]) {
                img = i;
            }
            rep.image.push_back(img);
            rep.cs_shift.push_back(img ? torus_cs(t, chars[*img]) - torus_cs(t, chi) : RationalPhase{});
        }
        out.push_back(std::move(rep));
    }
    return out;
}

using Mat2 = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3cd;

struct TorusRepresentation {
    Mat2 x, y, h;
};

inline TorusRepresentation torus_representation(const TorusMonodromy& t, const TorusCharacter& chi) {
    TorusRepresentation rho;
    if (chi.reducible()) {
        const double sx = chi.eps_x ? -1.0 : 1.0;
        const double sy = chi.eps_y ? -1.0 : 1.0;
        rho.x << sx, sx, 0.0, sx;
        rho.y << sy, sy * chi.u, 0.0, sy;
        rho.h << chi.v, 0.0, 0.0, 1.0 / chi.v;
    } else {
        const auto alpha = RationalPhase::make(chi.k, t.N).to_complex();
        const auto beta = RationalPhase::make(chi.l, t.N).to_complex();
        rho.x << alpha, 0.0, 0.0, 1.0 / alpha;
        rho.y << beta, 0.0, 0.0, 1.0 / beta;
        rho.h << 0.0, 1.0, -1.0, 0.0;
    }
    return rho;
}

// Adjoint action on sl2 in the basis e = [[0,1],[0,0]], h = diag(1,-1), f = [[0,0],[1,0]].
inline Mat3 adjoint(const Mat2& g) {
    const Mat2 gi = g.inverse();
    std::array<Mat2, 3> basis;
    basis[0] << 0, 1, 0, 0;
    basis[1] << 1, 0, 0, -1;
    basis[2] << 0, 0, 1, 0;
    Mat3 out;
    for (int j = 0; j < 3; ++j) {
        const Mat2 img = g * basis[std::size_t(j)] * gi;
        out(0, j) = img(0, 1);
        out(1, j) = img(0, 0);
        out(2, j) = img(1, 0);
    }
    return out;
}

// Integer Laurent polynomial in commuting x, y: (i, j) -> coefficient of x^i y^j.
using LaurentPoly = std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t>;

namespace detail {

inline void add_monomial(LaurentPoly& p, std::int64_t i, std::int64_t j, std::int64_t coef) {
    auto& slot = p[{i, j}];
    slot += coef;
    if (slot == 0) p.erase({i, j});
}

// p / (z - 1) in the variable selected by `axis` (0 = x, 1 = y); p must vanish at z = 1.
inline LaurentPoly divide_by_z_minus_one(const LaurentPoly& p, int axis) {
    std::map<std::int64_t, std::map<std::int64_t, std::int64_t>> lines;
    for (const auto& [mono, coef] : p) {
        const auto along = axis == 0 ? mono.first : mono.second;
        const auto across = axis == 0 ? mono.second : mono.first;
        lines[across][along] += coef;
    }
    LaurentPoly out;
    for (const auto& [across, coeffs] : lines) {
        if (coeffs.empty()) continue;
        const std::int64_t lo = coeffs.begin()->first;
        const std::int64_t hi = coeffs.rbegin()->first;
        std::int64_t running = 0;
        for (std::int64_t e = lo; e <= hi; ++e) {
            const auto it = coeffs.find(e);
            running += it == coeffs.end() ? 0 : it->second;
            // quotient coefficient at degree e is minus the running sum of coefficients up to e
            if (e < hi && running != 0)
                add_monomial(out, axis == 0 ? e : across, axis == 0 ? across : e, -running);
        }
        if (running != 0) throw InputError("polynomial does not vanish at 1");
    }
    return out;
}

}  // namespace detail

// The w(x, y) making the cell structure's d_3 compose to zero with d_2:
// w = -P / ((x-1)(y-1)) with P = x^a - x^b + x^b y^d - x^a y^c + x^{a+b}(y^c - y^d).
inline LaurentPoly derived_w(const TorusMonodromy& t) {
    LaurentPoly p;
    detail::add_monomial(p, t.a, 0, 1);
    detail::add_monomial(p, t.b, 0, -1);
    detail::add_monomial(p, t.b, t.d, 1);
    detail::add_monomial(p, t.a, t.c, -1);
    detail::add_monomial(p, t.a + t.b, t.c, 1);
    detail::add_monomial(p, t.a + t.b, t.d, -1);
    auto w = detail::divide_by_z_minus_one(detail::divide_by_z_minus_one(p, 0), 1);
    for (auto& [mono, coef] : w) coef = -coef;
    return w;
}

namespace detail {

struct Letter {
    int gen;  // 0 = x, 1 = y, 2 = h
    int exp;  // +1 or -1
};

inline std::vector<Letter> power(int gen, std::int64_t n) {
    return std::vector<Letter>(std::size_t(std::abs(n)), Letter{gen, n >= 0 ? 1 : -1});
}

inline std::vector<Letter> concat(std::initializer_list<std::vector<Letter>> parts) {
    std::vector<Letter> out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

}  // namespace detail

// Twisted cellular complex C_3 -> C_2 -> C_1 -> C_0 of the torus bundle with coefficients in
// Adj o rho, dimensions (3, 9, 9, 3). Generators x, y, h; relators
//   y x y^-1 x^-1,   h^-1 x h y^-c x^-a,   h x^b y^d h^-1 y^-1.
// Group elements act on the right through g -> Adj(rho(g))^{-1}.
// `w` defaults to derived_w(t); any supplied w must have coefficient sum 1.
inline BasedChainComplex build_adjoint_complex(const TorusMonodromy& t, const TorusCharacter& chi,
                                               std::optional<LaurentPoly> w = std::nullopt, double tol = 1e-9) {
    using detail::Letter;
    const LaurentPoly poly = w ? *w : derived_w(t);
    std::int64_t coef_sum = 0;
    for (const auto& [mono, coef] : poly) coef_sum += coef;
    if (coef_sum != 1) throw InputError("w must have coefficient sum 1, got " + std::to_string(coef_sum));

    const auto rho = torus_representation(t, chi);
    const std::array<Mat3, 3> ad{adjoint(rho.x), adjoint(rho.y), adjoint(rho.h)};
    const std::array<Mat3, 3> ad_inv{ad[0].inverse(), ad[1].inverse(), ad[2].inverse()};
    const Mat3 id = Mat3::Identity();

    // Fox derivative of `word` in generator `gen`, pushed through g -> Adj(rho(g))^{-1}.
    auto fox = [&](const std::vector<Letter>& word, int gen) {
        Mat3 acc = Mat3::Zero();
        Mat3 prefix = id;
        for (const auto& letter : word) {
            const Mat3 next = prefix * (letter.exp > 0 ? ad[std::size_t(letter.gen)] : ad_inv[std::size_t(letter.gen)]);
            if (letter.gen == gen) {
                if (letter.exp > 0)
                    acc += prefix.inverse();
                else
                    acc -= next.inverse();
            }
            prefix = next;
        }
        return acc;
    };

    using detail::concat;
    using detail::power;
    const std::array<std::vector<Letter>, 3> relators{
        std::vector<Letter>{{1, 1}, {0, 1}, {1, -1}, {0, -1}},
        concat({{{2, -1}, {0, 1}, {2, 1}}, power(1, -t.c), power(0, -t.a)}),
        concat({{{2, 1}}, power(0, t.b), power(1, t.d), {{2, -1}, {1, -1}}}),
    };

    Eigen::MatrixXcd d1 = Eigen::MatrixXcd::Zero(3, 9);
    Eigen::MatrixXcd d2 = Eigen::MatrixXcd::Zero(9, 9);
    Eigen::MatrixXcd d3 = Eigen::MatrixXcd::Zero(9, 3);
    for (int g = 0; g < 3; ++g) {
        d1.block(0, 3 * g, 3, 3) = ad_inv[std::size_t(g)] - id;
        for (int i = 0; i < 3; ++i) d2.block(3 * g, 3 * i, 3, 3) = fox(relators[std::size_t(i)], g);
    }
    Mat3 w_matrix = Mat3::Zero();
    for (const auto& [mono, coef] : poly) {
        Mat3 mx = id, my = id;
        for (std::int64_t e = 0; e < std::abs(mono.first); ++e) mx = mx * (mono.first > 0 ? ad[0] : ad_inv[0]);
        for (std::int64_t e = 0; e < std::abs(mono.second); ++e) my = my * (mono.second > 0 ? ad[1] : ad_inv[1]);
        w_matrix += double(coef) * (mx * my).inverse();
    }
    d3.block(0, 0, 3, 3) = id - w_matrix * ad_inv[2];
    d3.block(3, 0, 3, 3) = ad_inv[2] * (id - ad_inv[1]);
    d3.block(6, 0, 3, 3) = id - ad_inv[0];

    return BasedChainComplex({3, 9, 9, 3}, {ComplexMatrix(d3), ComplexMatrix(d2), ComplexMatrix(d1)}, tol);
}

}  // namespace mtcforge
