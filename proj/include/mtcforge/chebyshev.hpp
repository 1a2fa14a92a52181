#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "error.hpp"

namespace mtcforge {

// Delta_j(t): Delta_0 = 1, Delta_1 = t, Delta_{j+2} = t Delta_{j+1} - Delta_j.
// Forward recursion stays defined where the sine-ratio form degenerates.
template <typename T>
T chebyshev(int j, T t) {
    if (j < 0) throw InputError("chebyshev degree must be nonnegative");
    T prev = T(1);
    if (j == 0) return prev;
    T cur = t;
    for (int k = 1; k < j; ++k) {
        T next = t * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

enum class SumMode { closed_form, literal };

namespace detail {

inline std::complex<double> parity_exp_sum_literal(std::int64_t p, std::int64_t j, std::int64_t l, std::int64_t r,
                                                    int parity) {
    // e^{k pi i / p} for k mod 2p, cached per thread for the last p seen.
    thread_local std::int64_t cached_p = 0;
    thread_local std::vector<std::complex<double>> roots;
    const std::int64_t den = 2 * p;
    if (cached_p != p) {
        roots.resize(std::size_t(den));
        for (std::int64_t k = 0; k < den; ++k)
            roots[std::size_t(k)] = std::polar(1.0, std::numbers::pi * static_cast<double>(k) / static_cast<double>(p));
        cached_p = p;
    }
    const std::int64_t rr = ((r % den) + den) % den;
    auto term = [&](std::int64_t k, std::int64_t m) {
        const std::int64_t kk = ((k % den) + den) % den;
        return roots[std::size_t((kk * m % den) * rr % den)];
    };
    std::complex<double> acc = 0.0;
    for (std::int64_t m = 1; m <= p - 1; ++m) {
        if (m % 2 != parity) continue;
        acc += term(j + l, m) - term(j - l, m) - term(-j + l, m) + term(-j - l, m);
    }
    return acc;
}

inline std::int64_t parity_exp_sum_closed(std::int64_t p, std::int64_t j, std::int64_t l, int parity) {
    const std::int64_t sign = parity == 0 ? 1 : -1;
    const bool hits_p = j + l == p;
    if (p % 2 == 1) {
        if (j == l) return -p;
        if ((j + l) % 2 == 1) return hits_p ? sign * p : 0;
        return 0;
    }
    if (j == l) {
        if (!hits_p) return -p;
        return parity == 0 ? 0 : -2 * p;
    }
    if ((j + l) % 2 == 1) return 0;
    return hits_p ? sign * p : 0;
}

}  // namespace detail

// T(p,j,l,*) = sum over m in [1,p-1] with m = * mod 2 of
//   e^{(j+l)m r pi i/p} - e^{(j-l)m r pi i/p} - e^{(-j+l)m r pi i/p} + e^{(-j-l)m r pi i/p}.
// The closed form holds for 1 <= j,l <= p-1 and r an odd unit mod p; other inputs are
// rejected in that mode since the sum then depends on r beyond its class mod p.
inline std::complex<double> parity_exp_sum(std::int64_t p, std::int64_t j, std::int64_t l, std::int64_t r, int parity,
                                           SumMode mode = SumMode::closed_form) {
    if (p < 2) throw InputError("p must be at least 2");
    if (parity != 0 && parity != 1) throw InputError("parity must be 0 or 1");
    if (std::gcd(r, p) != 1) throw InputError("r must be a unit mod p");
    if (mode == SumMode::literal) return detail::parity_exp_sum_literal(p, j, l, r, parity);
    if (j < 1 || j > p - 1 || l < 1 || l > p - 1)
        throw InputError("closed form needs 1 <= j, l <= p-1, got j=" + std::to_string(j) + " l=" + std::to_string(l));
    if (r % 2 == 0) throw InputError("closed form needs r odd");
    return static_cast<double>(detail::parity_exp_sum_closed(p, j, l, parity));
}

}  // namespace mtcforge
