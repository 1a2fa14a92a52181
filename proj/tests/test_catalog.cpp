#include "catch_amalgamated.hpp"

#include <mtcforge/catalog.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <vector>

using namespace mtcforge;
using Catch::Approx;

namespace {

using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;
const double sqrt5 = std::sqrt(5.0);
const double golden = (1.0 + sqrt5) / 2.0;
const double golden_conj = (1.0 - sqrt5) / 2.0;

cd kauffman(const RationalPhase& a) { return std::polar(1.0, 2 * pi * double(a.num()) / double(a.den())); }

// [n]_A = (A^{2n} - A^{-2n}) / (A^2 - A^{-2}) in complex arithmetic.
cd brute_qint(cd a, std::int64_t n) {
    return (std::pow(a, 2.0 * double(n)) - std::pow(a, -2.0 * double(n))) / (a * a - 1.0 / (a * a));
}

// Smallest r >= 1 with (A^4)^r = 1 numerically.
std::int64_t brute_order(cd a) {
    const cd a4 = std::pow(a, 4.0);
    cd acc = a4;
    for (std::int64_t r = 1; r < 10000; ++r, acc *= a4)
        if (std::abs(acc - 1.0) < 1e-9) return r;
    return 0;
}

std::vector<RationalPhase> sample_kauffman(std::int64_t max_den) {
    std::vector<RationalPhase> out;
    for (std::int64_t den = 3; den <= max_den; ++den)
        for (std::int64_t num = 0; num < den; ++num) {
            if (std::gcd(num, den) != 1) continue;
            const auto a = RationalPhase::make(num, den);
            if (!(4 * a).is_zero()) out.push_back(a);
        }
    return out;
}

// Verlinde coefficients by the plain triple sum.
double brute_fusion(const ModularData& d, std::size_t i, std::size_t j, std::size_t k) {
    const double D = std::sqrt(d.total_dim_sq);
    cd acc = 0.0;
    for (std::size_t m = 0; m < d.rank(); ++m)
        acc += d.s_tilde(i, m) * d.s_tilde(j, m) * std::conj(d.s_tilde(k, m)) / d.s_tilde(0, m) / D / D;
    return acc.real();
}

ModularData even_part(const ModularData& d) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < d.rank(); ++i)
        if ((*d.grading)[i] == 0) keep.push_back(i);
    ModularData out;
    out.s_tilde = ComplexMatrix(keep.size(), keep.size());
    double total = 0.0;
    for (std::size_t a = 0; a < keep.size(); ++a) {
        out.labels.push_back(d.labels[keep[a]]);
        out.dims.push_back(d.dims[keep[a]]);
        out.twists.push_back(d.twists[keep[a]]);
        total += d.dims[keep[a]] * d.dims[keep[a]];
        for (std::size_t b = 0; b < keep.size(); ++b) out.s_tilde.set(a, b, d.s_tilde(keep[a], keep[b]));
    }
    out.total_dim_sq = total;
    return out;
}

void require_matrix(const ComplexMatrix& got, const std::vector<std::vector<double>>& expected, double tol = 1e-9) {
    REQUIRE(got.rows() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
        for (std::size_t j = 0; j < expected[i].size(); ++j) {
            INFO(i << "," << j);
            REQUIRE(std::abs(got(i, j) - cd(expected[i][j])) < tol);
        }
}

}  // namespace

TEST_CASE("TLJ examples") {
    const auto a = RationalPhase::make(7, 12);
    const auto d = tlj_data(a);
    REQUIRE(d.rank() == 2);
    CHECK(d.twists[0].is_zero());
    CHECK(d.twists[1] == RationalPhase::make(1, 4));
    require_matrix(d.s_tilde, {{1, -1}, {-1, -1}});
    CHECK(d.grading == std::vector<int>{0, 1});

    const auto b = tlj_data(RationalPhase::make(2, 5));
    REQUIRE(b.rank() == 4);
    require_matrix(b.s_tilde, {{1, golden_conj, golden_conj, 1},
                               {golden_conj, -1, -1, golden_conj},
                               {golden_conj, -1, -1, golden_conj},
                               {1, golden_conj, golden_conj, 1}});

    CHECK_THROWS_AS(tlj_data(RationalPhase::make(1, 4)), InputError);
    CHECK_THROWS_AS(tlj_data(RationalPhase::make(1, 2)), InputError);
    CHECK_THROWS_AS(tlj_data(RationalPhase{}), InputError);
}

TEST_CASE("TLJ data against complex-arithmetic formulas") {
    for (const auto& a : sample_kauffman(40)) {
        const auto d = tlj_data(a);
        const cd A = kauffman(a);
        const auto r = brute_order(A);
        INFO(a);
        REQUIRE(tlj_order(a) == r);
        REQUIRE(d.rank() == std::size_t(r - 1));
        REQUIRE(d.dims[0] == 1.0);
        REQUIRE(d.twists[0].is_zero());
        for (std::size_t i = 0; i < d.rank(); ++i) {
            const auto ii = std::int64_t(i);
            const double sign_i = i % 2 ? -1.0 : 1.0;
            REQUIRE(std::abs(d.dims[i] - sign_i * brute_qint(A, ii + 1)) < 1e-9);
            REQUIRE(std::abs(d.twists[i].to_complex() - std::pow(-A, double(ii * (ii + 2)))) < 1e-9);
            for (std::size_t j = 0; j < d.rank(); ++j) {
                const auto jj = std::int64_t(j);
                const double sign = (i + j) % 2 ? -1.0 : 1.0;
                REQUIRE(std::abs(d.s_tilde(i, j) - sign * brute_qint(A, (ii + 1) * (jj + 1))) < 1e-9);
            }
        }
        const double D = std::sqrt(2.0 * double(r)) / std::abs(A * A - 1.0 / (A * A));
        REQUIRE(std::sqrt(d.total_dim_sq) == Approx(D).epsilon(1e-12));
        REQUIRE(d.violations().empty());
    }
}

TEST_CASE("TLJ modularity and the even subcategory") {
    for (const auto& a : sample_kauffman(48)) {
        const auto d = tlj_data(a);
        const auto r = tlj_order(a);
        INFO(a);
        const bool primitive_4r = a.den() == 4 * r;
        REQUIRE(find_transparent(d).is_modular == primitive_4r);
        if (r % 2 == 1 && a.den() == 2 * r && r > 1) REQUIRE(find_transparent(even_part(d)).is_modular);
    }
}

TEST_CASE("TLJ sector dimensions") {
    for (const auto& a : sample_kauffman(40)) {
        const auto d = tlj_data(a);
        double even = 0.0, odd = 0.0;
        for (std::size_t i = 0; i < d.rank(); ++i) ((*d.grading)[i] ? odd : even) += d.dims[i] * d.dims[i];
        INFO(a);
        if (tlj_order(a) >= 3) {
            REQUIRE(even == Approx(d.total_dim_sq / 2.0).epsilon(1e-9));
            REQUIRE(odd == Approx(d.total_dim_sq / 2.0).epsilon(1e-9));
        } else {
            // r = 2: the single label 0 is even and the odd sector is empty
            REQUIRE(d.rank() == 1);
            REQUIRE(even == 1.0);
            REQUIRE(odd == 0.0);
            REQUIRE(d.total_dim_sq == Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("changing A to -A") {
    for (const auto& a : sample_kauffman(36)) {
        const auto d = tlj_data(a);
        const auto e = tlj_data(a + RationalPhase::make(1, 2));
        INFO(a);
        REQUIRE(max_abs_diff(d.s_tilde, e.s_tilde) < 1e-9);
        for (std::size_t j = 0; j < d.rank(); ++j)
            REQUIRE(e.twists[j] == d.twists[j] + RationalPhase::make(std::int64_t(j % 2), 2));
    }
}

TEST_CASE("SU(2) levels") {
    const auto k0 = su2_level(0);
    CHECK(k0.rank() == 1);
    CHECK(k0.dims == std::vector<double>{1.0});
    CHECK(k0.total_dim_sq == Approx(1.0));

    const auto k2 = su2_level(2);
    REQUIRE(k2.rank() == 3);
    CHECK(k2.dims[1] == Approx(std::sqrt(2.0)));
    CHECK(k2.dims[2] == Approx(1.0));
    CHECK(k2.twists[1] == RationalPhase::make(3, 16));
    CHECK(k2.twists[2] == RationalPhase::make(1, 2));

    const auto k3 = su2_level(3);
    CHECK(k3.dims[1] == Approx(golden));

    CHECK_THROWS_AS(su2_level(-1), InputError);

    for (std::int64_t k = 0; k <= 30; ++k) {
        const auto d = su2_level(k);
        const double r = double(k + 2);
        REQUIRE(d.rank() == std::size_t(k + 1));
        REQUIRE(d.violations().empty());
        REQUIRE(find_transparent(d).is_modular);
        for (std::size_t i = 0; i < d.rank(); ++i) {
            REQUIRE(d.dims[i] > 0.0);
            for (std::size_t j = 0; j < d.rank(); ++j)
                REQUIRE(std::abs(d.s_tilde(i, j) - std::sin(double((i + 1) * (j + 1)) * pi / r) / std::sin(pi / r)) < 1e-9);
        }
    }
}

TEST_CASE("SO(N)_2 adjoint data") {
    const auto d = soN2_adjoint(5, -7);
    REQUIRE(d.rank() == 4);
    CHECK(d.labels == std::vector<std::string>{"1", "Z", "Y1", "Y2"});
    CHECK(d.dims == std::vector<double>{1, 1, 2, 2});
    CHECK(d.total_dim_sq == 10.0);
    CHECK(std::abs(d.s_tilde(2, 2).real() - 4.0 * std::cos(4.0 * pi / 5.0)) < 1e-12);
    CHECK(d.violations().empty());

    CHECK_THROWS_AS(soN2_adjoint(6, -7), InputError);
    CHECK_THROWS_AS(soN2_adjoint(3, 1), InputError);
    CHECK_THROWS_AS(soN2_adjoint(5, 5), InputError);
    CHECK_THROWS_AS(soN2_adjoint(5, 2), InputError);

    for (std::int64_t n = 5; n <= 31; n += 2)
        for (std::int64_t ct = 1; ct < n; ++ct) {
            if (std::gcd(ct, n) != 1) continue;
            const std::int64_t m = -2 * ct - n;
            const auto e = soN2_adjoint(n, m);
            INFO(n << " " << m);
            REQUIRE(e.violations().empty());
            for (std::size_t j = 0; j < e.rank(); ++j) REQUIRE(std::abs(e.s_tilde(0, j) - e.s_tilde(1, j)) < 1e-12);
            for (std::int64_t k = 1; k <= (n - 1) / 2; ++k) {
                REQUIRE(e.twists[std::size_t(k + 1)] == RationalPhase::make(ct * k * k, n));
                // theta = q^{2(Nk - k^2)} evaluated as a complex power of q = e^{m pi i / 2N}
                const cd q = std::polar(1.0, double(m) * pi / (2.0 * double(n)));
                REQUIRE(std::abs(e.twists[std::size_t(k + 1)].to_complex() - std::pow(q, 2.0 * double(n * k - k * k))) < 1e-9);
            }
            const auto rep = find_transparent(e);
            REQUIRE_FALSE(rep.is_modular);
            REQUIRE(rep.transparent_labels == std::vector<std::size_t>{0, 1});
        }
}

TEST_CASE("graded products") {
    const auto four = graded_product(tlj_data(RationalPhase::make(7, 12)), tlj_data(RationalPhase::make(2, 5)));
    REQUIRE(four.rank() == 4);
    CHECK(four.labels == std::vector<std::string>{"(0,0)", "(0,2)", "(1,1)", "(1,3)"});
    const double f = golden_conj;
    require_matrix(four.s_tilde, {{1, f, -f, -1}, {f, -1, 1, -f}, {-f, 1, 1, -f}, {-1, -f, -f, -1}});

    const auto six = graded_product(su2_level(2), su2_level(3));
    REQUIRE(six.rank() == 6);
    const double g = golden, s2 = std::sqrt(2.0), gs = golden * std::sqrt(2.0);
    require_matrix(six.s_tilde, {{1, g, 1, g, gs, s2},
                                 {g, -1, g, -1, -s2, gs},
                                 {1, g, 1, g, -gs, -s2},
                                 {g, -1, g, -1, s2, -gs},
                                 {gs, -s2, -gs, s2, 0, 0},
                                 {s2, gs, -s2, -gs, 0, 0}});
    const std::vector<cd> t{1.0,
                            std::polar(1.0, 4 * pi / 5),
                            -1.0,
                            -std::polar(1.0, 4 * pi / 5),
                            std::polar(1.0, 27 * pi / 40),
                            cd(0, -1) * std::polar(1.0, 3 * pi / 8)};
    for (std::size_t i = 0; i < 6; ++i) REQUIRE(std::abs(six.twists[i].to_complex() - t[i]) < 1e-9);
    CHECK(find_transparent(six).is_modular);

    // a rank-1 even category is a unit for the even block
    const auto x = tlj_data(RationalPhase::make(2, 5));
    const auto unit = su2_level(0);
    const auto even_only = graded_product(x, unit);
    REQUIRE(even_only.rank() == 2);
    CHECK(even_only.labels == std::vector<std::string>{"(0,0)", "(2,0)"});
    CHECK(std::abs(even_only.s_tilde(1, 1) - x.s_tilde(2, 2)) < 1e-12);

    ModularData ungraded = x;
    ungraded.grading.reset();
    CHECK_THROWS_AS(graded_product(ungraded, x), InputError);
}

TEST_CASE("graded products keep the invariants") {
    const auto sample = sample_kauffman(20);
    for (std::size_t i = 0; i < sample.size(); i += 3)
        for (std::size_t j = i; j < sample.size(); j += 5) {
            const auto x = tlj_data(sample[i]);
            const auto y = tlj_data(sample[j]);
            const auto p = graded_product(x, y);
            INFO(sample[i] << " " << sample[j]);
            REQUIRE(p.violations().empty());
            double sx[2] = {0, 0}, sy[2] = {0, 0};
            for (std::size_t a = 0; a < x.rank(); ++a) sx[(*x.grading)[a]] += x.dims[a] * x.dims[a];
            for (std::size_t b = 0; b < y.rank(); ++b) sy[(*y.grading)[b]] += y.dims[b] * y.dims[b];
            REQUIRE(p.total_dim_sq == Approx(sx[0] * sy[0] + sx[1] * sy[1]).epsilon(1e-12));
        }
}

TEST_CASE("SU(2) graded-product parity") {
    for (std::int64_t m = 0; m <= 6; ++m)
        for (std::int64_t n = 0; n <= 6; ++n) {
            const auto p = graded_product(su2_level(m), su2_level(n));
            const auto rep = find_transparent(p);
            INFO(m << " " << n);
            if (m == 0 && n == 0) {
                // both factors are rank 1 with an empty odd sector; the product is the trivial modular category
                REQUIRE(p.rank() == 1);
                REQUIRE(rep.is_modular);
                continue;
            }
            REQUIRE(rep.is_modular == (m % 2 != n % 2));
            if (m % 2 == n % 2) {
                const std::string top = "(" + std::to_string(m) + "," + std::to_string(n) + ")";
                bool found = false;
                for (auto idx : rep.transparent_labels) found = found || p.labels[idx] == top;
                REQUIRE(found);
                REQUIRE(rep.s_det_modulus < 1e-6);
            } else {
                REQUIRE(rep.s_det_modulus == Approx(1.0).epsilon(1e-9));
            }
        }
}

TEST_CASE("Verlinde fusion") {
    const auto k2 = su2_level(2);
    const auto f = verlinde_fusion(k2);
    CHECK(f(1, 1, 0) == 1);
    CHECK(f(1, 1, 1) == 0);
    CHECK(f(1, 1, 2) == 1);
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k) CHECK(f(0, j, k) == (j == k ? 1 : 0));

    const auto tlj16 = tlj_data(RationalPhase::make(1, 16));
    const auto g = verlinde_fusion(tlj16);
    CHECK(g.max_deviation < 1e-6);
    CHECK(g.nonnegative);
    CHECK(fusion_associativity_defect(g) < 1e-6);

    CHECK_THROWS_AS(verlinde_fusion(soN2_adjoint(5, -7)), InputError);

    // against the plain triple sum, including complex S from the graded product
    for (const auto& d : {su2_level(5), graded_product(su2_level(2), su2_level(3)), tlj_data(RationalPhase::make(3, 20))}) {
        const auto h = verlinde_fusion(d);
        for (std::size_t i = 0; i < d.rank(); ++i)
            for (std::size_t j = 0; j < d.rank(); ++j)
                for (std::size_t k = 0; k < d.rank(); ++k)
                    REQUIRE(h.value(i, j, k) == Approx(brute_fusion(d, i, j, k)).margin(1e-9));
        REQUIRE(h.max_deviation < 1e-6);
        REQUIRE(h.nonnegative);
        REQUIRE(fusion_associativity_defect(h) < 1e-6);
    }

    for (std::int64_t k = 0; k <= 20; ++k) {
        const auto h = verlinde_fusion(su2_level(k));
        // su(2)_k truncated Clebsch-Gordan rule
        for (std::int64_t a = 0; a <= k; ++a)
            for (std::int64_t b = 0; b <= k; ++b)
                for (std::int64_t c = 0; c <= k; ++c) {
                    const bool allowed = c >= std::abs(a - b) && c <= std::min(a + b, 2 * k - a - b) && (a + b + c) % 2 == 0;
                    REQUIRE(h(std::size_t(a), std::size_t(b), std::size_t(c)) == (allowed ? 1 : 0));
                }
    }
}

TEST_CASE("sampled associativity agrees with the full check") {
    const auto d = graded_product(su2_level(6), su2_level(9));
    const auto f = verlinde_fusion(d);
    REQUIRE(d.rank() == 35);
    CHECK(fusion_associativity_defect(f, 8, 4, 7) < 1e-6);
    CHECK(fusion_associativity_defect(f) < 1e-6);
    CHECK(fusion_associativity_defect(f, 64) < 1e-6);

    // a perturbed rule is caught
    FusionRules broken = f;
    for (std::size_t j = 0; j < f.rank; ++j) broken.values[(1 * f.rank + j) * f.rank + j] += 1.0;
    CHECK(fusion_associativity_defect(broken, 64) > 0.5);
}
