#include "catch_amalgamated.hpp"

#include <mtcforge/verify.hpp>

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

using namespace mtcforge;

namespace {

std::size_t choose3_with_repetition(std::size_t n) { return n * (n + 1) * (n + 2) / 6; }

const verify::SuiteResult& find(const std::vector<verify::SuiteResult>& rs, const std::string& name) {
    for (const auto& r : rs)
        if (r.name == name) return r;
    throw std::runtime_error("suite " + name + " missing");
}

}  // namespace

TEST_CASE("parallel_map keeps index order for any worker count") {
    for (unsigned jobs : {1u, 2u, 3u, 8u}) {
        const auto out = verify::parallel_map(1000, jobs, [](std::size_t i) { return i * i + 1; });
        REQUIRE(out.size() == 1000);
        for (std::size_t i = 0; i < out.size(); ++i) REQUIRE(out[i] == i * i + 1);
    }
    REQUIRE(verify::parallel_map(0, 4, [](std::size_t i) { return i; }).empty());
    REQUIRE_THROWS_AS(verify::parallel_map(50, 3,
                                           [](std::size_t i) {
                                               if (i == 17) throw InputError("boom");
                                               return i;
                                           }),
                      InputError);
}

TEST_CASE("fiber sweep enumerates unordered multisets of coprime signed fibers") {
    for (std::int64_t max_p : {2, 3, 5, 9}) {
        std::size_t n = 0;
        for (std::int64_t p = 2; p <= max_p; ++p)
            for (std::int64_t q = 1; q < p; ++q) n += 2 * (std::gcd(p, q) == 1);
        REQUIRE(verify::fibers_up_to(max_p).size() == n);
        const auto sweep = verify::sfs_sweep(max_p);
        REQUIRE(sweep.size() == choose3_with_repetition(n));
        std::set<verify::FiberTriple> distinct(sweep.begin(), sweep.end());
        REQUIRE(distinct.size() == sweep.size());
        for (const auto& f : sweep) {
            REQUIRE(f[0] <= f[1]);
            REQUIRE(f[1] <= f[2]);
        }
    }
    REQUIRE(verify::sfs_sweep(9).size() == 27720);
}

TEST_CASE("supported monodromies match a direct filter") {
    const auto got = verify::supported_monodromies(9, 6);
    std::size_t want = 0;
    for (std::int64_t a = -6; a <= 6; ++a)
        for (std::int64_t b = -6; b <= 6; ++b)
            for (std::int64_t c = -6; c <= 6; ++c)
                for (std::int64_t d = -6; d <= 6; ++d) {
                    const std::int64_t n = a + d + 2;
                    if (a * d - b * c == 1 && n >= 5 && n <= 9 && n % 2 == 1 && std::gcd(c, n) == 1) ++want;
                }
    REQUIRE(got.size() == want);
    for (const auto& t : got) {
        REQUIRE(t.supported);
        REQUIRE(t.a * t.d - t.b * t.c == 1);
    }
    for (std::size_t i = 1; i < got.size(); ++i) REQUIRE(got[i - 1].N <= got[i].N);
}

TEST_CASE("config validation") {
    verify::Config cfg;
    REQUIRE_NOTHROW(cfg.validate());
    cfg.max_p = 30;
    REQUIRE_THROWS_AS(cfg.validate(), InputError);
    cfg = {};
    cfg.tol = 0.0;
    REQUIRE_THROWS_AS(cfg.validate(), InputError);
    cfg = {};
    cfg.jobs = 0;
    REQUIRE_THROWS_AS(cfg.validate(), InputError);
    REQUIRE_THROWS_AS(verify::run({"nonsense"}, verify::Config{}), InputError);
}

TEST_CASE("small suites report the expected outcomes") {
    verify::Config cfg;
    cfg.max_p = 5;
    cfg.lemma_max_p = 12;
    cfg.max_N = 7;
    cfg.max_entry = 8;
    cfg.max_r = 6;
    cfg.oracle_samples = 5;
    cfg.jobs = 2;
    const auto rs = verify::run({"all"}, cfg);
    REQUIRE(rs.size() == verify::suite_names().size());
    for (std::size_t i = 0; i < rs.size(); ++i) REQUIRE(rs[i].name == verify::suite_names()[i]);

    const auto tori = verify::supported_monodromies(7, 8).size();
    const auto sweep = verify::sfs_sweep(5).size();
    REQUIRE(find(rs, "realization").cases == sweep + 5 + tori);
    REQUIRE(find(rs, "realization").pass());
    REQUIRE(find(rs, "lemma-sums").pass());
    REQUIRE(find(rs, "oracle").pass());
    REQUIRE(find(rs, "oracle").cases > 5);

    // Known exceptions: products with two or more p = 2 fibers.
    for (const auto& f : find(rs, "dichotomy").failures) REQUIRE(f.item.find("(2,") != std::string::npos);
    for (const auto& f : find(rs, "admissibility").failures) REQUIRE(f.item.find("(2,") != std::string::npos);

    const auto& su2 = find(rs, "su2-parity");
    REQUIRE(su2.cases == 49);
    REQUIRE(su2.failures.size() == 1);
    REQUIRE(su2.failures[0].item == "(0,0)");
}

TEST_CASE("oracle sampling is deterministic per seed") {
    verify::Config cfg;
    cfg.max_N = 9;
    cfg.max_entry = 6;
    cfg.oracle_samples = 4;
    auto tags = [&](std::uint64_t seed) {
        cfg.seed = seed;
        std::vector<std::string> out;
        for (const auto& t : verify::oracle_sample(cfg)) out.push_back(t.tag());
        return out;
    };
    const auto first = tags(3);
    REQUIRE(first.size() == 4);
    REQUIRE(tags(3) == first);
    std::set<std::vector<std::string>> seen;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) seen.insert(tags(seed));
    REQUIRE(seen.size() > 1);

    const auto all = verify::supported_monodromies(9, 6);
    std::vector<std::string> order;
    for (const auto& t : all) order.push_back(t.tag());
    std::size_t last = 0;
    for (const auto& tag : first) {
        const auto pos = std::size_t(std::find(order.begin(), order.end(), tag) - order.begin());
        REQUIRE(pos < order.size());
        REQUIRE(pos >= last);
        last = pos;
    }

    cfg.seed = 5;
    cfg.jobs = 1;
    const auto one = verify::oracle(cfg);
    cfg.jobs = 4;
    const auto four = verify::oracle(cfg);
    REQUIRE(one.cases == four.cases);
    REQUIRE(one.failures.size() == four.failures.size());
    cfg.oracle_samples = 1000;
    REQUIRE(verify::oracle_sample(cfg).size() == all.size());
}

TEST_CASE("suite JSON carries name, ref, counts and failures") {
    verify::Config cfg;
    const auto s = verify::su2_parity(cfg);
    const auto j = verify::to_json(s);
    REQUIRE(j.at("suite") == "su2-parity");
    REQUIRE(j.at("ref").is_string());
    REQUIRE(j.at("cases") == 49);
    REQUIRE(j.at("failure_count") == s.failures.size());
    REQUIRE(j.at("failures").size() == s.failures.size());
    REQUIRE(j.at("pass") == s.pass());
}
