#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <ostream>
#include <string>

#include "error.hpp"

namespace mtcforge {

// An element t of Q/Z standing for e^{2 pi i t}; always kept as 0 <= num < den, reduced.
class RationalPhase {
public:
    constexpr RationalPhase() = default;

    static RationalPhase make(std::int64_t num, std::int64_t den) {
        if (den == 0) throw InputError("phase denominator must be nonzero");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        num %= den;
        if (num < 0) num += den;
        const std::int64_t g = std::gcd(num, den);
        RationalPhase out;
        out.num_ = num / g;
        out.den_ = den / g;
        return out;
    }

    constexpr std::int64_t num() const { return num_; }
    constexpr std::int64_t den() const { return den_; }

    // Multiplicative order of e^{2 pi i t}.
    constexpr std::int64_t order() const { return den_; }

    bool is_zero() const { return num_ == 0; }

    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    // Angle 2 pi t taken from the representative closest to zero, which keeps
    // sin/cos accurate for large denominators.
    double angle() const {
        std::int64_t n = num_;
        if (2 * n > den_) n -= den_;
        return 2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(den_);
    }

    double cos2pi() const { return std::cos(angle()); }
    double sin2pi() const { return std::sin(angle()); }

    std::complex<double> to_complex() const { return std::polar(1.0, angle()); }

    RationalPhase operator-() const { return make(-num_, den_); }

    friend RationalPhase operator+(const RationalPhase& a, const RationalPhase& b) {
        const std::int64_t g = std::gcd(a.den_, b.den_);
        const std::int64_t l = a.den_ / g * b.den_;
        return make(a.num_ * (l / a.den_) + b.num_ * (l / b.den_), l);
    }
    friend RationalPhase operator-(const RationalPhase& a, const RationalPhase& b) { return a + (-b); }

    // Integer scaling k*t, reduced mod 1 before multiplying to stay within 64 bits.
    friend RationalPhase operator*(std::int64_t k, const RationalPhase& a) {
        const std::int64_t kk = ((k % a.den_) + a.den_) % a.den_;
        return make(static_cast<std::int64_t>((static_cast<__int128>(kk) * a.num_) % a.den_), a.den_);
    }
    friend RationalPhase operator*(const RationalPhase& a, std::int64_t k) { return k * a; }

    RationalPhase& operator+=(const RationalPhase& o) { return *this = *this + o; }
    RationalPhase& operator-=(const RationalPhase& o) { return *this = *this - o; }

    friend bool operator==(const RationalPhase&, const RationalPhase&) = default;
    friend auto operator<=>(const RationalPhase& a, const RationalPhase& b) {
        return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
    }

    std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

    friend std::ostream& operator<<(std::ostream& os, const RationalPhase& p) { return os << p.str(); }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline RationalPhase phase_normalize(std::int64_t num, std::int64_t den) { return RationalPhase::make(num, den); }

// Proper residue in [0, m) for m > 0.
constexpr std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace mtcforge
