#include <CLI11.hpp>

#include <mtcforge/catalog.hpp>
#include <mtcforge/pipeline.hpp>
#include <mtcforge/serialize.hpp>
#include <mtcforge/torsion.hpp>
#include <mtcforge/torus_bundle.hpp>
#include <mtcforge/verify.hpp>

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace mtcforge;
using io::json;

namespace {

enum class Format { json, csv, pretty };

struct RunConfig {
    Format format = Format::json;
    double tol = 1e-9;
    std::int64_t p_cap = 25;
};

std::vector<std::int64_t> parse_ints(const std::string& text, std::size_t count, const std::string& what) {
    std::vector<std::int64_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find(',', pos), text.size());
        std::int64_t v = 0;
        const char* first = text.data() + pos;
        const char* last = text.data() + end;
        if (*first == '+') ++first;
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || first == last) throw InputError(what + " \"" + text + "\" is not a list of integers");
        out.push_back(v);
        pos = end + 1;
    }
    if (out.size() != count) throw InputError(what + " \"" + text + "\" needs " + std::to_string(count) + " integers");
    return out;
}

std::string name(const RationalPhase& t) { return std::to_string(t.num()) + "/" + std::to_string(t.den()); }

std::string labels_of(const CandidateData& c, const std::vector<std::size_t>& idx) {
    std::string out;
    for (auto i : idx) out += (out.empty() ? "" : ", ") + c.labels[i];
    return out;
}

struct Check {
    std::string against;
    Certificate cert;
};

void print_table(std::ostream& out, const CandidateData& c) {
    out << "labels:\n";
    out << "  " << std::left << std::setw(12) << "label" << std::setw(10) << "CS" << std::setw(16) << "Tor" << std::setw(16) << "dim"
        << "twist\n";
    for (std::size_t a = 0; a < c.rank(); ++a)
        out << "  " << std::setw(12) << c.labels[a] << std::setw(10) << name(c.cs[a]) << std::setw(16) << io::format12(c.tor[a])
            << std::setw(16) << io::format12(c.data.dims[a]) << name(c.data.twists[a]) << '\n';
    out << std::right << "S~:\n";
    for (std::size_t a = 0; a < c.rank(); ++a) {
        out << " ";
        for (std::size_t b = 0; b < c.rank(); ++b) {
            auto z = c.data.s_tilde(a, b);
            if (std::abs(z.real()) < 1e-12) z.real(0.0);
            if (std::abs(z.imag()) < 1e-12) z.imag(0.0);
            std::ostringstream cell;
            cell << io::format12(z.real());
            if (io::round12(z.imag()) != 0.0) cell << (z.imag() < 0 ? "-" : "+") << io::format12(std::abs(z.imag())) << "i";
            out << ' ' << std::setw(14) << cell.str();
        }
        out << '\n';
    }
}

void print_reports(std::ostream& out, const CandidateData& c, const ModularityReport& mod, const AdmissibilityReport& adm,
                   const std::vector<Check>& checks) {
    out << "modular: " << (mod.is_modular ? "true" : "false") << '\n';
    out << "transparent: " << labels_of(c, mod.transparent_labels) << '\n';
    out << "admissibility: sum 1/(2Tor) = " << io::format12(adm.sum_inverse_2tor) << ", |Gauss sum| = " << io::format12(adm.gauss_sum_modulus)
        << ", target = " << io::format12(adm.target_modulus) << ", admissible: " << (adm.admissible ? "true" : "false") << '\n';
    for (const auto& ch : checks)
        out << "certification vs " << ch.against << ": " << (ch.cert.pass ? "pass" : "FAIL") << " (max |dS~| "
            << io::format12(ch.cert.max_s_delta) << ", max |d dim| " << io::format12(ch.cert.max_dim_delta)
            << ", twists " << (ch.cert.twists_equal ? "equal" : "differ") << ")\n";
}

int emit_candidate(const RunConfig& cfg, const CandidateData& c, json header, const std::vector<Check>& checks,
                   const std::string& pretty_header, const std::string& pretty_tail) {
    const auto mod = find_transparent(c.data, cfg.tol);
    const auto adm = admissibility_report(c, cfg.tol);
    bool ok = true;
    for (const auto& ch : checks) ok = ok && ch.cert.pass;
    switch (cfg.format) {
        case Format::csv:
            std::cout << io::to_csv(c);
            break;
        case Format::pretty:
            std::cout << pretty_header << "rank: " << c.rank() << '\n';
            print_table(std::cout, c);
            print_reports(std::cout, c, mod, adm, checks);
            std::cout << pretty_tail;
            break;
        case Format::json: {
            header["candidate"] = io::to_json(c);
            header["modularity"] = io::to_json(mod);
            header["admissibility"] = io::to_json(adm);
            json certs = json::array();
            for (const auto& ch : checks) certs.push_back(io::to_json(ch.cert, ch.against));
            header["certifications"] = std::move(certs);
            std::cout << io::emit(header) << '\n';
            break;
        }
    }
    return ok ? 0 : 1;
}

int cmd_sfs(const RunConfig& cfg, const std::vector<std::string>& fiber_args, const std::string& unit_name) {
    if (fiber_args.size() != 3) throw InputError("expected three --fiber p,q flags, got " + std::to_string(fiber_args.size()));
    std::array<std::pair<std::int64_t, std::int64_t>, 3> pairs;
    for (std::size_t k = 0; k < 3; ++k) {
        const auto v = parse_ints(fiber_args[k], 2, "fiber");
        if (v[0] > cfg.p_cap) throw InputError("fiber p = " + std::to_string(v[0]) + " exceeds the cap " + std::to_string(cfg.p_cap));
        pairs[k] = {v[0], v[1]};
    }
    const auto m = make_sfs(pairs);
    const UnitChoice unit = unit_name == "reseated" ? UnitChoice::reseated : UnitChoice::canonical;
    const auto c = sfs_candidate(m, unit);

    std::vector<Check> checks;
    const auto r = m_family_index(m);
    if (unit == UnitChoice::canonical) {
        std::string product;
        for (const auto& f : m.fibers) product += (product.empty() ? "" : " (x)gr ") + std::string("TLJ(") + name(f.kauffman) + ")";
        checks.push_back({product, certify(c, sfs_catalog_product(m), cfg.tol)});
        if (r) checks.push_back({"TLJ(1/" + std::to_string(4 * *r) + ")", certify(c, m_family_tlj(*r), cfg.tol)});
    } else {
        checks.push_back({"SU(2)_" + std::to_string(*r - 2), certify(c, su2_level(*r - 2), cfg.tol)});
    }

    json header;
    header["manifold"] = m.tag();
    header["unit"] = unit_name;
    header["z2_homology_sphere"] = z2_homology_sphere(m);
    std::ostringstream head;
    head << "manifold: " << m.tag() << "\nunit: " << unit_name << "\nZ2 homology sphere: " << (z2_homology_sphere(m) ? "true" : "false")
         << '\n';
    return emit_candidate(cfg, c, std::move(header), checks, head.str(), "");
}

int cmd_torus(const RunConfig& cfg, const std::string& monodromy, bool with_oracle) {
    const auto v = parse_ints(monodromy, 4, "monodromy");
    const auto t = make_torus_bundle(v[0], v[1], v[2], v[3]);
    require_supported(t);
    const auto c = torus_candidate(t);
    const std::vector<Check> checks{{"SO(" + std::to_string(t.N) + ")_2 adjoint", certify(c, soN2_adjoint(t.N, t.m), cfg.tol)}};

    json header;
    header["manifold"] = t.tag();
    header["N"] = t.N;
    header["c_tilde"] = t.c_tilde;
    header["m"] = t.m;
    std::ostringstream head, tail;
    head << "manifold: " << t.tag() << "\nN: " << t.N << "\nc~: " << t.c_tilde << "\nm: " << t.m << '\n';
    if (with_oracle) {
        json rows = json::array();
        tail << "torsion oracle:\n";
        for (const auto& chi : enumerate_torus_characters(t)) {
            const auto start = std::chrono::steady_clock::now();
            const auto res = chain_torsion(build_adjoint_complex(t, chi));
            const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            const double closed = torus_torsion(t, chi);
            if (!res.value) throw UnsupportedError("adjoint complex of " + chi.label() + " is not acyclic");
            const double rel = std::abs(*res.value - closed) / closed;
            rows.push_back({{"label", chi.label()},
                            {"oracle", io::round12(*res.value)},
                            {"closed_form", io::round12(closed)},
                            {"relative_delta", io::round12(rel)}});
            tail << "  " << chi.label() << ": oracle " << io::format12(*res.value) << ", closed form " << io::format12(closed)
                 << ", relative delta " << io::format12(rel) << " (" << std::fixed << std::setprecision(3) << ms << " ms)\n"
                 << std::defaultfloat;
        }
        header["torsion_oracle"] = json{{"ref", "chain torsion of the adjoint cell complex against N/4 and N"}, {"values", rows}};
    }
    return emit_candidate(cfg, c, std::move(header), checks, head.str(), tail.str());
}

int cmd_verify(const RunConfig& cfg, verify::Config vc, const std::vector<std::string>& suites) {
    vc.tol = cfg.tol;
    vc.p_cap = cfg.p_cap;
    const auto start = std::chrono::steady_clock::now();
    const auto results = verify::run(suites, vc);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = true;
    for (const auto& s : results) ok = ok && s.pass();
    for (const auto& s : results)
        if (!s.pass()) std::cerr << "verify: suite " << s.name << " has " << s.failures.size() << " failing case(s)\n";
    switch (cfg.format) {
        case Format::csv:
            std::cout << "suite,cases,failures,pass\n";
            for (const auto& s : results)
                std::cout << s.name << ',' << s.cases << ',' << s.failures.size() << ',' << (s.pass() ? "true" : "false") << '\n';
            break;
        case Format::pretty:
            for (const auto& s : results) {
                std::cout << s.name << ": " << (s.pass() ? "pass" : "FAIL") << " (" << s.cases << " cases, " << s.failures.size()
                          << " failures)\n";
                for (const auto& f : s.failures) std::cout << "  " << f.item << ": " << f.detail << '\n';
            }
            std::cout << "elapsed: " << std::fixed << std::setprecision(2) << seconds << " s\n";
            break;
        case Format::json: {
            json j;
            j["pass"] = ok;
            j["config"] = {{"max_p", vc.max_p},         {"lemma_max_p", vc.lemma_max_p}, {"max_N", vc.max_N},
                           {"max_entry", vc.max_entry}, {"max_level", vc.max_level},     {"max_r", vc.max_r},
                           {"oracle_samples", vc.oracle_samples}, {"seed", vc.seed},     {"jobs", vc.jobs},
                           {"tol", vc.tol}};
            json list = json::array();
            for (const auto& s : results) list.push_back(verify::to_json(s));
            j["suites"] = std::move(list);
            std::cout << io::emit(j) << '\n';
            break;
        }
    }
    return ok ? 0 : 1;
}

double env_tolerance() {
    const char* raw = std::getenv("MTCFORGE_TOL");
    if (!raw || !*raw) return 1e-9;
    char* end = nullptr;
    const double v = std::strtod(raw, &end);
    if (*end != '\0' || !(v > 0.0) || !std::isfinite(v)) throw InputError(std::string("MTCFORGE_TOL=\"") + raw + "\" is not a positive number");
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mtcforge: modular data from Seifert fibered spaces and torus bundles"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string format = "json";
    double tol_flag = 0.0;
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "pretty"}));
    app.add_option("--tol", tol_flag, "Comparison tolerance (default MTCFORGE_TOL or 1e-9)");
    app.add_option("--p-cap", cfg.p_cap, "Largest fiber order accepted")->check(CLI::PositiveNumber);

    auto* sfs = app.add_subcommand("sfs", "Seifert fibered space over S^2 with three singular fibers");
    std::vector<std::string> fibers;
    std::string unit = "canonical";
    sfs->add_option("--fiber", fibers, "Singular fiber p,q (three times)")->required();
    sfs->add_option("--unit", unit, "Unit character")->check(CLI::IsMember({"canonical", "reseated"}));

    auto* torus = app.add_subcommand("torus", "Torus bundle over the circle");
    std::string monodromy;
    bool oracle = false;
    torus->add_option("--monodromy", monodromy, "Monodromy a,b,c,d")->required();
    torus->add_flag("--oracle", oracle, "Compare closed-form torsions with the chain-complex oracle");

    auto* ver = app.add_subcommand("verify", "Run the property suites");
    verify::Config vc;
    std::vector<std::string> suites{"all"};
    std::int64_t max_p = 0;
    ver->add_option("--suite", suites, "Suites to run: all, realization, dichotomy, oracle, lemma-sums, admissibility, su2-parity");
    ver->add_option("--max-p", max_p, "Largest p for fiber sweeps and lemma sums (defaults 9 and 50)");
    ver->add_option("--max-N", vc.max_N, "Largest N for torus bundle sweeps");
    ver->add_option("--max-entry", vc.max_entry, "Bound on |monodromy entries|");
    ver->add_option("--max-level", vc.max_level, "Largest SU(2) level in the parity sweep");
    ver->add_option("--max-r", vc.max_r, "Largest r in the M(r) realizations");
    ver->add_option("--samples", vc.oracle_samples, "Monodromies sampled for the torsion oracle");
    ver->add_option("--seed", vc.seed, "Seed for oracle sampling");
    ver->add_option("--jobs", vc.jobs, "Worker threads");

    for (auto* sub : {sfs, torus, ver}) {
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "pretty"}));
        sub->add_option("--tol", tol_flag, "Comparison tolerance");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        cfg.format = format == "csv" ? Format::csv : format == "pretty" ? Format::pretty : Format::json;
        cfg.tol = tol_flag > 0.0 ? tol_flag : env_tolerance();
        if (tol_flag < 0.0) throw InputError("--tol must be positive");
        if (sfs->parsed()) return cmd_sfs(cfg, fibers, unit);
        if (torus->parsed()) return cmd_torus(cfg, monodromy, oracle);
        if (max_p > 0) {
            vc.max_p = max_p;
            vc.lemma_max_p = max_p;
        }
        bool sweeps = false;
        for (const auto& s : suites) sweeps = sweeps || (s != "lemma-sums" && s != "su2-parity" && s != "oracle");
        if (!sweeps) vc.max_p = std::min(vc.max_p, cfg.p_cap);
        return cmd_verify(cfg, vc, suites);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const UnsupportedError& e) {
        std::cerr << "unsupported: " << e.what() << '\n';
        return 2;
    }
}
