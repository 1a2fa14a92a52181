#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "catalog.hpp"
#include "chebyshev.hpp"
#include "error.hpp"
#include "pipeline.hpp"
#include "seifert.hpp"
#include "serialize.hpp"
#include "torsion.hpp"
#include "torus_bundle.hpp"

namespace mtcforge::verify {

using Fiber = std::pair<std::int64_t, std::int64_t>;
using FiberTriple = std::array<Fiber, 3>;

struct Config {
    std::int64_t max_p = 9;
    std::int64_t lemma_max_p = 50;
    std::int64_t p_cap = 25;
    std::int64_t max_N = 13;
    std::int64_t max_entry = 20;
    std::int64_t max_level = 6;
    std::int64_t max_r = 12;
    std::size_t oracle_samples = 40;
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    double tol = 1e-9;

    void validate() const {
        if (!(tol > 0.0)) throw InputError("tolerance must be positive");
        if (max_p < 2) throw InputError("--max-p must be at least 2");
        if (max_p > p_cap)
            throw InputError("--max-p " + std::to_string(max_p) + " exceeds the fiber cap " + std::to_string(p_cap));
        if (lemma_max_p < 2) throw InputError("lemma sums need p >= 2");
        if (max_N < 5) throw InputError("--max-N must be at least 5");
        if (max_entry < 1) throw InputError("--max-entry must be positive");
        if (max_level < 0) throw InputError("--max-level must be nonnegative");
        if (max_r < 2 || max_r > p_cap) throw InputError("--max-r must lie in [2, fiber cap]");
        if (jobs == 0) throw InputError("--jobs must be positive");
    }
};

struct Failure {
    std::string item;
    std::string detail;
};

struct SuiteResult {
    std::string name;
    std::string ref;
    std::size_t cases = 0;
    std::vector<Failure> failures;

    bool pass() const { return failures.empty(); }
};

// f(0), ..., f(n-1) on up to `jobs` threads; results keep index order.
template <typename F>
auto parallel_map(std::size_t n, unsigned jobs, F&& f) -> std::vector<decltype(f(std::size_t{0}))> {
    using R = decltype(f(std::size_t{0}));
    std::vector<R> out(n);
    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, unsigned(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    out[i] = f(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return out;
}

// (p, q) with 2 <= p <= max_p, 0 < |q| < p, gcd(p, q) = 1, ordered by p then q.
inline std::vector<Fiber> fibers_up_to(std::int64_t max_p) {
    std::vector<Fiber> out;
    for (std::int64_t p = 2; p <= max_p; ++p)
        for (std::int64_t q = -(p - 1); q <= p - 1; ++q)
            if (q != 0 && std::gcd(p, q) == 1) out.emplace_back(p, q);
    return out;
}

// Unordered fiber multisets, each listed in nondecreasing fiber order.
inline std::vector<FiberTriple> sfs_sweep(std::int64_t max_p) {
    const auto fibers = fibers_up_to(max_p);
    std::vector<FiberTriple> out;
    for (std::size_t i = 0; i < fibers.size(); ++i)
        for (std::size_t j = i; j < fibers.size(); ++j)
            for (std::size_t k = j; k < fibers.size(); ++k) out.push_back({fibers[i], fibers[j], fibers[k]});
    return out;
}

// Supported monodromies with odd N in [5, max_N] and entries bounded by `bound`, ordered by (N, a, b, c).
inline std::vector<TorusMonodromy> supported_monodromies(std::int64_t max_N, std::int64_t bound) {
    std::vector<TorusMonodromy> out;
    for (std::int64_t n = 5; n <= max_N; n += 2)
        for (std::int64_t a = -bound; a <= bound; ++a) {
            const std::int64_t d = n - 2 - a;
            if (std::abs(d) > bound) continue;
            for (std::int64_t b = -bound; b <= bound; ++b)
                for (std::int64_t c = -bound; c <= bound; ++c) {
                    if (a * d - b * c != 1) continue;
                    const auto t = make_torus_bundle(a, b, c, d);
                    if (t.supported) out.push_back(t);
                }
        }
    return out;
}

inline std::string describe(const FiberTriple& f) {
    std::string out = "sfs";
    for (const auto& [p, q] : f) out += "(" + std::to_string(p) + "," + std::to_string(q) + ")";
    return out;
}

inline std::string fmt(double x) { return io::format12(x); }

namespace detail {

struct SfsOutcome {
    std::optional<std::string> realization, dichotomy, admissibility;
};

inline SfsOutcome check_sfs(const FiberTriple& f, double tol) {
    SfsOutcome out;
    const auto m = make_sfs(f);
    const auto c = sfs_candidate(m);
    const auto cert = certify(c, sfs_catalog_product(m), tol);
    if (!cert.pass)
        out.realization = "max |dS~| " + fmt(cert.max_s_delta) + ", max |d dim| " + fmt(cert.max_dim_delta) +
                          (cert.twists_equal ? "" : ", twists differ");
    const bool sphere = z2_homology_sphere(m);
    const auto mod = find_transparent(c.data, tol);
    if (mod.is_modular != sphere)
        out.dichotomy = std::string("modular ") + (mod.is_modular ? "true" : "false") + " but Z2 homology sphere " +
                        (sphere ? "true" : "false") + " (rank " + std::to_string(c.rank()) + ")";
    const auto adm = admissibility_report(c, tol);
    std::string bad;
    if (std::abs(adm.sum_inverse_2tor - 1.0) >= tol) bad = "sum 1/(2Tor) = " + fmt(adm.sum_inverse_2tor);
    if (sphere) {
        const double target = 1.0 / std::sqrt(2.0 * c.tor[c.unit]);
        if (std::abs(adm.gauss_sum_modulus - target) >= tol)
            bad += (bad.empty() ? "" : "; ") + std::string("Gauss modulus ") + fmt(adm.gauss_sum_modulus) +
                   " vs 1/sqrt(2Tor(unit)) " + fmt(target);
    }
    if (!bad.empty()) out.admissibility = bad;
    return out;
}

struct TorusOutcome {
    std::optional<std::string> realization, admissibility;
};

inline TorusOutcome check_torus(const TorusMonodromy& t, double tol) {
    TorusOutcome out;
    const auto c = torus_candidate(t);
    const auto cert = certify(c, soN2_adjoint(t.N, t.m), tol);
    std::string bad;
    if (!cert.pass) bad = "SO(N)_2 certification: max |dS~| " + fmt(cert.max_s_delta) + (cert.twists_equal ? "" : ", twists differ");
    const auto mod = find_transparent(c.data, tol);
    if (mod.transparent_labels != std::vector<std::size_t>{0, 1})
        bad += (bad.empty() ? "" : "; ") + std::to_string(mod.transparent_labels.size()) + " transparent labels";
    if (!bad.empty()) out.realization = bad;
    const auto adm = admissibility_report(c, tol);
    bad.clear();
    if (std::abs(adm.sum_inverse_2tor - 1.0) >= tol) bad = "sum 1/(2Tor) = " + fmt(adm.sum_inverse_2tor);
    const double target = 1.0 / std::sqrt(double(t.N));
    if (std::abs(adm.gauss_sum_modulus - target) >= tol)
        bad += (bad.empty() ? "" : "; ") + std::string("Gauss modulus ") + fmt(adm.gauss_sum_modulus) + " vs 1/sqrt(N) " + fmt(target);
    if (!bad.empty()) out.admissibility = bad;
    return out;
}

inline void add(SuiteResult& s, const std::string& item, const std::optional<std::string>& failure) {
    ++s.cases;
    if (failure) s.failures.push_back({item, *failure});
}

}  // namespace detail

// Largest |1/sqrt(2 Tor_a) - |d_a| / D| over labels, with d and D from the comparison category.
inline double torsion_dimension_gap(const CandidateData& c, const ModularData& expected) {
    const double D = std::sqrt(expected.total_dim_sq);
    double worst = 0.0;
    for (std::size_t a = 0; a < c.rank(); ++a)
        worst = std::max(worst, std::abs(1.0 / std::sqrt(2.0 * c.tor[a]) - std::abs(expected.dims[a]) / D));
    return worst;
}

inline std::optional<std::string> check_m_family(std::int64_t r, double tol) {
    const auto m = make_sfs({{{3, 1}, {3, 1}, {r, 1}}});
    std::string bad;
    const auto canon = sfs_candidate(m);
    const auto tlj = m_family_tlj(r);
    if (!certify(canon, tlj, tol).pass) bad = "canonical unit does not certify against TLJ(1/" + std::to_string(4 * r) + ")";
    const auto gap_c = torsion_dimension_gap(canon, tlj);
    if (gap_c >= tol) bad += (bad.empty() ? "" : "; ") + std::string("canonical torsion/dimension gap ") + fmt(gap_c);
    const auto reseated = sfs_candidate(m, UnitChoice::reseated);
    const auto su2 = su2_level(r - 2);
    if (!certify(reseated, su2, tol).pass) bad += (bad.empty() ? "" : "; ") + std::string("reseated unit does not certify against SU(2)_") + std::to_string(r - 2);
    const auto gap_r = torsion_dimension_gap(reseated, su2);
    if (gap_r >= tol) bad += (bad.empty() ? "" : "; ") + std::string("reseated torsion/dimension gap ") + fmt(gap_r);
    if (bad.empty()) return std::nullopt;
    return bad;
}

inline SuiteResult lemma_sums(const Config& cfg) {
    SuiteResult s{"lemma-sums", "closed form of the parity-restricted exponential sum T(p,j,l,*) against literal summation", 0, {}};
    struct Part {
        std::size_t cases = 0;
        std::vector<Failure> failures;
    };
    const auto parts = parallel_map(std::size_t(cfg.lemma_max_p - 1), cfg.jobs, [&](std::size_t i) {
        const std::int64_t p = std::int64_t(i) + 2;
        Part part;
        for (std::int64_t r = 1; r < 2 * p; r += 2) {
            if (std::gcd(r, p) != 1) continue;
            for (std::int64_t j = 1; j <= p - 1; ++j)
                for (std::int64_t l = 1; l <= p - 1; ++l)
                    for (int parity : {0, 1}) {
                        ++part.cases;
                        const auto closed = parity_exp_sum(p, j, l, r, parity);
                        const auto literal = parity_exp_sum(p, j, l, r, parity, SumMode::literal);
                        if (std::abs(closed - literal) > cfg.tol * double(p))
                            part.failures.push_back({"p=" + std::to_string(p) + " j=" + std::to_string(j) + " l=" + std::to_string(l) +
                                                         " r=" + std::to_string(r) + " parity=" + std::to_string(parity),
                                                     "closed " + fmt(closed.real()) + " vs literal " + fmt(literal.real())});
                    }
        }
        return part;
    });
    for (const auto& part : parts) {
        s.cases += part.cases;
        s.failures.insert(s.failures.end(), part.failures.begin(), part.failures.end());
    }
    return s;
}

inline SuiteResult su2_parity(const Config& cfg) {
    SuiteResult s{"su2-parity", "SU(2)_m (x)gr SU(2)_n is modular iff m and n have different parity", 0, {}};
    for (std::int64_t m = 0; m <= cfg.max_level; ++m)
        for (std::int64_t n = 0; n <= cfg.max_level; ++n) {
            const auto d = graded_product(su2_level(m), su2_level(n));
            const bool modular = find_transparent(d, cfg.tol).is_modular;
            const bool expected = (m - n) % 2 != 0;
            std::optional<std::string> bad;
            if (modular != expected)
                bad = std::string("modular ") + (modular ? "true" : "false") + " at rank " + std::to_string(d.rank());
            detail::add(s, "(" + std::to_string(m) + "," + std::to_string(n) + ")", bad);
        }
    return s;
}

// Seeded sample of supported monodromies, kept in enumeration order.
inline std::vector<TorusMonodromy> oracle_sample(const Config& cfg) {
    const auto all = supported_monodromies(cfg.max_N, cfg.max_entry);
    std::vector<std::size_t> pick(all.size());
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    std::mt19937_64 rng(cfg.seed);
    std::shuffle(pick.begin(), pick.end(), rng);
    pick.resize(std::min(pick.size(), cfg.oracle_samples));
    std::sort(pick.begin(), pick.end());
    std::vector<TorusMonodromy> out;
    for (auto i : pick) out.push_back(all[i]);
    return out;
}

inline SuiteResult oracle(const Config& cfg) {
    SuiteResult s{"oracle", "chain torsion of the adjoint cell complex equals N/4 (irreducible) and N (reducible)", 0, {}};
    const auto sample = oracle_sample(cfg);
    const auto results = parallel_map(sample.size(), cfg.jobs, [&](std::size_t i) {
        const auto& t = sample[i];
        std::vector<std::pair<std::string, std::optional<std::string>>> rows;
        for (const auto& chi : enumerate_torus_characters(t)) {
            const double closed = torus_torsion(t, chi);
            const auto res = chain_torsion(build_adjoint_complex(t, chi));
            std::optional<std::string> bad;
            if (!res.acyclic || !res.value)
                bad = "complex is not acyclic";
            else if (std::abs(*res.value - closed) > 1e-6 * closed)
                bad = "oracle " + fmt(*res.value) + " vs closed form " + fmt(closed);
            rows.emplace_back(t.tag() + " " + chi.label(), bad);
        }
        return rows;
    });
    for (const auto& rows : results)
        for (const auto& [item, bad] : rows) detail::add(s, item, bad);
    return s;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"realization", "dichotomy", "oracle", "lemma-sums", "admissibility", "su2-parity"};
    return names;
}

// Runs the named suites ("all" expands to every suite) in suite_names() order.
inline std::vector<SuiteResult> run(const std::vector<std::string>& requested, const Config& cfg) {
    cfg.validate();
    auto wanted = [&](const std::string& name) {
        return std::find(requested.begin(), requested.end(), "all") != requested.end() ||
               std::find(requested.begin(), requested.end(), name) != requested.end();
    };
    for (const auto& r : requested)
        if (r != "all" && std::find(suite_names().begin(), suite_names().end(), r) == suite_names().end())
            throw InputError("unknown suite \"" + r + "\"");

    SuiteResult realization{"realization",
                            "three-fiber candidates equal the graded TLJ product; M(r) realizes TLJ(e^{2 pi i/4r}) and SU(2)_{r-2}; "
                            "torus candidates equal the SO(N)_2 adjoint data with rho- as the only non-unit transparent label",
                            0, {}};
    SuiteResult dichotomy{"dichotomy", "three-fiber graded products are modular exactly for Z2 homology spheres", 0, {}};
    SuiteResult admissibility{"admissibility",
                              "sum of 1/(2Tor) is 1; Gauss-sum modulus is 1/sqrt(2Tor(unit)) on Z2 homology spheres and 1/sqrt(N) on torus bundles",
                              0, {}};
    const bool need_sfs = wanted("realization") || wanted("dichotomy") || wanted("admissibility");
    const bool need_torus = wanted("realization") || wanted("admissibility");
    if (need_sfs) {
        const auto sweep = sfs_sweep(cfg.max_p);
        const auto outcomes = parallel_map(sweep.size(), cfg.jobs, [&](std::size_t i) { return detail::check_sfs(sweep[i], cfg.tol); });
        for (std::size_t i = 0; i < sweep.size(); ++i) {
            const auto item = describe(sweep[i]);
            detail::add(realization, item, outcomes[i].realization);
            detail::add(dichotomy, item, outcomes[i].dichotomy);
            detail::add(admissibility, item, outcomes[i].admissibility);
        }
    }
    if (wanted("realization"))
        for (std::int64_t r = 2; r <= cfg.max_r; ++r) detail::add(realization, "M(" + std::to_string(r) + ")", check_m_family(r, cfg.tol));
    if (need_torus) {
        const auto tori = supported_monodromies(cfg.max_N, cfg.max_entry);
        const auto outcomes = parallel_map(tori.size(), cfg.jobs, [&](std::size_t i) { return detail::check_torus(tori[i], cfg.tol); });
        for (std::size_t i = 0; i < tori.size(); ++i) {
            detail::add(realization, tori[i].tag(), outcomes[i].realization);
            detail::add(admissibility, tori[i].tag(), outcomes[i].admissibility);
        }
    }

    std::vector<SuiteResult> out;
    for (const auto& name : suite_names()) {
        if (!wanted(name)) continue;
        if (name == "realization") out.push_back(std::move(realization));
        if (name == "dichotomy") out.push_back(std::move(dichotomy));
        if (name == "admissibility") out.push_back(std::move(admissibility));
        if (name == "oracle") out.push_back(oracle(cfg));
        if (name == "lemma-sums") out.push_back(lemma_sums(cfg));
        if (name == "su2-parity") out.push_back(su2_parity(cfg));
    }
    return out;
}

inline io::json to_json(const SuiteResult& s) {
    io::json j;
    j["suite"] = s.name;
    j["ref"] = s.ref;
    j["pass"] = s.pass();
    j["cases"] = s.cases;
    j["failure_count"] = s.failures.size();
    io::json list = io::json::array();
    for (const auto& f : s.failures) list.push_back({{"case", f.item}, {"detail", f.detail}});
    j["failures"] = std::move(list);
    return j;
}

}  // namespace mtcforge::verify
