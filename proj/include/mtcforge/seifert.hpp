#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "central.hpp"
#include "error.hpp"
#include "mod2.hpp"
#include "phase.hpp"

namespace mtcforge {

struct SeifertFiber {
    std::int64_t p = 0;
    std::int64_t q = 0;
    std::int64_t r = 0;
    std::int64_t s = 0;
    std::int64_t c = 0;
    // A = e^{2 pi i t}, the Kauffman variable attached to the fiber.
    RationalPhase kauffman;

    friend bool operator==(const SeifertFiber&, const SeifertFiber&) = default;
};

// Fiber data for an explicit solution (r, s) of p s - q r = 1.
inline SeifertFiber make_fiber_with(std::int64_t p, std::int64_t q, std::int64_t r, std::int64_t s) {
    if (p < 2) throw InputError("fiber p must be at least 2, got " + std::to_string(p));
    if (std::gcd(p, q) != 1)
        throw InputError("fiber (" + std::to_string(p) + "," + std::to_string(q) + ") is not coprime");
    if (p * s - q * r != 1) throw InputError("(r, s) does not satisfy p s - q r = 1");
    SeifertFiber f{p, q, r, s, 0, {}};
    if (mod_floor(q, 2) == 1)
        f.c = p * q * s - r;
    else
        f.c = p * q * s - r * (p - 1) * (p - 1);
    // A = -exp(2 pi i c / 4p)
    f.kauffman = RationalPhase::make(1, 2) + RationalPhase::make(f.c, 4 * p);
    return f;
}

// Canonical representative 0 <= r < p.
inline SeifertFiber make_fiber(std::int64_t p, std::int64_t q) {
    if (p < 2) throw InputError("fiber p must be at least 2, got " + std::to_string(p));
    if (std::gcd(p, q) != 1)
        throw InputError("fiber (" + std::to_string(p) + "," + std::to_string(q) + ") is not coprime");
    // -q r = 1 mod p
    std::int64_t r = 0;
    while (mod_floor(-q * r, p) != 1 % p) ++r;
    const std::int64_t s = (1 + q * r) / p;
    return make_fiber_with(p, q, r, s);
}

struct SeifertData {
    std::array<SeifertFiber, 3> fibers;

    friend bool operator==(const SeifertData&, const SeifertData&) = default;

    std::string tag() const {
        std::string out = "sfs";
        for (const auto& f : fibers) out += "(" + std::to_string(f.p) + "," + std::to_string(f.q) + ")";
        return out;
    }
};

inline SeifertData make_sfs(const std::array<std::pair<std::int64_t, std::int64_t>, 3>& pairs) {
    SeifertData m;
    for (std::size_t k = 0; k < 3; ++k) m.fibers[k] = make_fiber(pairs[k].first, pairs[k].second);
    return m;
}

struct SfsCharacter {
    std::array<std::int64_t, 3> j{};
    // rho(h) = e^{2 pi i lambda}, lambda in {0, 1/2}
    RationalPhase lambda;
    // twice the eigenvalue exponents: rho(x_k) has eigenvalues e^{+-2 pi i n_k / p_k}, n_k = two_n[k] / 2
    std::array<std::int64_t, 3> two_n{};

    friend bool operator==(const SfsCharacter&, const SfsCharacter&) = default;

    // Eigenvalue phase n_k / p_k of rho(x_k).
    RationalPhase eigen_phase(const SeifertData& m, std::size_t k) const {
        return RationalPhase::make(two_n[k], 2 * m.fibers[k].p);
    }

    std::string label() const {
        return "(" + std::to_string(j[0]) + "," + std::to_string(j[1]) + "," + std::to_string(j[2]) + ")";
    }
};

// 2 n_{p,q}(j)
inline std::int64_t twice_n(const SeifertFiber& f, std::int64_t j) {
    if (mod_floor(f.q, 2) == 0 && j % 2 == 0) return f.p - 1 - j;
    return j + 1;
}

inline SfsCharacter make_sfs_character(const SeifertData& m, const std::array<std::int64_t, 3>& j) {
    const std::int64_t parity = mod_floor(j[0], 2);
    SfsCharacter chi;
    chi.j = j;
    chi.lambda = parity == 0 ? RationalPhase::make(1, 2) : RationalPhase{};
    for (std::size_t k = 0; k < 3; ++k) {
        if (j[k] < 0 || j[k] > m.fibers[k].p - 2)
            throw InputError("j_" + std::to_string(k + 1) + " = " + std::to_string(j[k]) + " out of range");
        if (mod_floor(j[k], 2) != parity) throw InputError("j entries must share parity");
        chi.two_n[k] = twice_n(m.fibers[k], j[k]);
    }
    return chi;
}

inline std::vector<SfsCharacter> enumerate_characters(const SeifertData& m) {
    std::vector<SfsCharacter> out;
    for (std::int64_t parity : {0, 1}) {
        for (std::int64_t a = parity; a <= m.fibers[0].p - 2; a += 2)
            for (std::int64_t b = parity; b <= m.fibers[1].p - 2; b += 2)
                for (std::int64_t c = parity; c <= m.fibers[2].p - 2; c += 2)
                    out.push_back(make_sfs_character(m, {a, b, c}));
    }
    return out;
}

inline void check_character(const SeifertData& m, const SfsCharacter& chi) {
    if (make_sfs_character(m, chi.j) != chi) throw InputError("character " + chi.label() + " does not belong to " + m.tag());
}

// CS = sum r_k n_k^2 / p_k (lambda = 0) or sum (r_k n_k^2 / p_k - q_k s_k / 4) (lambda = 1/2), mod 1.
inline RationalPhase cs_invariant(const SeifertData& m, const SfsCharacter& chi) {
    check_character(m, chi);
    RationalPhase cs;
    const bool half = !chi.lambda.is_zero();
    for (std::size_t k = 0; k < 3; ++k) {
        const auto& f = m.fibers[k];
        cs += RationalPhase::make(f.r * chi.two_n[k] * chi.two_n[k], 4 * f.p);
        if (half) cs -= RationalPhase::make(f.q * f.s, 4);
    }
    return cs;
}

// Tor = prod p_k / (4 sin^2(2 pi r_k n_k / p_k)).
inline double torsion(const SeifertData& m, const SfsCharacter& chi) {
    check_character(m, chi);
    double tor = 1.0;
    for (std::size_t k = 0; k < 3; ++k) {
        const auto& f = m.fibers[k];
        const double sn = RationalPhase::make(f.r * chi.two_n[k], 2 * f.p).sin2pi();
        tor *= static_cast<double>(f.p) / (4.0 * sn * sn);
    }
    return tor;
}

inline bool z2_homology_sphere(const SeifertData& m) {
    const auto& f = m.fibers;
    const std::int64_t e = f[0].q * f[1].p * f[2].p + f[0].p * f[1].q * f[2].p + f[0].p * f[1].p * f[2].q;
    return mod_floor(e, 2) == 1;
}

// Abelianized relations mod 2 on (x1, x2, x3, h): p_k x_k + q_k h and x1 + x2 + x3.
inline Mod2Matrix sfs_relation_matrix(const SeifertData& m) {
    const auto& f = m.fibers;
    return Mod2Matrix::from_integers({{f[0].p, 0, 0, f[0].q},
                                      {0, f[1].p, 0, f[1].q},
                                      {0, 0, f[2].p, f[2].q},
                                      {1, 1, 1, 0}});
}

namespace detail {

// Character with data (two_n, lambda); nullopt if the triple leaves the admissible range.
inline std::optional<SfsCharacter> sfs_character_from_eigen(const SeifertData& m, const std::array<std::int64_t, 3>& two_n,
                                                            const RationalPhase& lambda) {
    std::array<std::int64_t, 3> j{};
    const bool half = !lambda.is_zero();
    for (std::size_t k = 0; k < 3; ++k) {
        const auto& f = m.fibers[k];
        if (half && mod_floor(f.q, 2) == 0)
            j[k] = f.p - 1 - two_n[k];
        else
            j[k] = two_n[k] - 1;
        if (j[k] < 0 || j[k] > f.p - 2) return std::nullopt;
        if (mod_floor(j[k], 2) != (half ? 0 : 1)) return std::nullopt;
    }
    auto chi = make_sfs_character(m, j);
    if (chi.two_n != two_n || chi.lambda != lambda) return std::nullopt;
    return chi;
}

}  // namespace detail

// Every sigma in H^1(M; Z2) with its action on the character list. The first entry is trivial.
inline std::vector<CentralRep> central_reps(const SeifertData& m) {
    const auto chars = enumerate_characters(m);
    const auto sigmas = mod2_span(mod2_kernel(sfs_relation_matrix(m)), 4);
    std::vector<CentralRep> out;
    for (const auto& sigma : sigmas) {
        CentralRep rep;
        rep.sigma = sigma;
        for (const auto& chi : chars) {
            auto two_n = chi.two_n;
            for (std::size_t k = 0; k < 3; ++k) {
                // -rho(x_k): n -> n + p/2, reflected into (0, p/2) as p/2 - n.
                if (sigma[k]) two_n[k] = m.fibers[k].p - two_n[k];
            }
            const RationalPhase lambda = sigma[3] ? chi.lambda + RationalPhase::make(1, 2) : chi.lambda;
            const auto img = detail::sfs_character_from_eigen(m, two_n, lambda);
            if (!img) {
                rep.image.push_back(std::nullopt);
                rep.cs_shift.push_back({});
                continue;
            }
            std::size_t idx = 0;
            while (chars[idx] != *img) ++idx;
            rep.image.push_back(idx);
            rep.cs_shift.push_back(cs_invariant(m, *img) - cs_invariant(m, chi));
        }
        out.push_back(std::move(rep));
    }
    return out;
}

}  // namespace mtcforge
