#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "complex_matrix.hpp"
#include "error.hpp"
#include "modular_data.hpp"
#include "phase.hpp"
#include "pipeline.hpp"

namespace mtcforge::io {

using json = nlohmann::ordered_json;

// Every emitted float goes through this, so re-emitting parsed output is byte-identical.
inline double round12(double x) {
    if (!std::isfinite(x)) throw InputError("cannot serialize a non-finite value");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    const double out = std::strtod(buf, nullptr);
    return out == 0.0 ? 0.0 : out;
}

inline std::string format12(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", round12(x));
    return buf;
}

namespace detail {

inline const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing JSON field \"") + key + "\"");
    return j.at(key);
}

inline double number(const json& j) {
    if (!j.is_number()) throw InputError("expected a JSON number");
    return j.get<double>();
}

}  // namespace detail

inline json to_json(const RationalPhase& t) { return json{{"num", t.num()}, {"den", t.den()}}; }

inline RationalPhase phase_from_json(const json& j) {
    return RationalPhase::make(detail::field(j, "num").get<std::int64_t>(), detail::field(j, "den").get<std::int64_t>());
}

inline json to_json(complex z) { return json::array({round12(z.real()), round12(z.imag())}); }

inline complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw InputError("complex values are [re, im] pairs");
    return {detail::number(j[0]), detail::number(j[1])};
}

inline json to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ComplexMatrix matrix_from_json(const json& j) {
    if (!j.is_array()) throw InputError("matrices are arrays of rows");
    std::vector<std::vector<complex>> rows;
    for (const auto& row : j) {
        if (!row.is_array()) throw InputError("matrix row is not an array");
        rows.emplace_back();
        for (const auto& z : row) rows.back().push_back(complex_from_json(z));
    }
    return ComplexMatrix::from_rows(rows);
}

template <typename T, typename F>
json array_of(const std::vector<T>& xs, F&& f) {
    json out = json::array();
    for (const auto& x : xs) out.push_back(f(x));
    return out;
}

inline json to_json(const ModularData& d) {
    json j;
    j["rank"] = d.rank();
    j["labels"] = d.labels;
    j["dims"] = array_of(d.dims, round12);
    j["twists"] = array_of(d.twists, [](const RationalPhase& t) { return to_json(t); });
    j["s_tilde"] = to_json(d.s_tilde);
    j["total_dim_sq"] = round12(d.total_dim_sq);
    j["grading"] = d.grading ? json(*d.grading) : json(nullptr);
    return j;
}

inline ModularData modular_data_from_json(const json& j) {
    ModularData d;
    d.labels = detail::field(j, "labels").get<std::vector<std::string>>();
    for (const auto& x : detail::field(j, "dims")) d.dims.push_back(detail::number(x));
    for (const auto& t : detail::field(j, "twists")) d.twists.push_back(phase_from_json(t));
    d.s_tilde = matrix_from_json(detail::field(j, "s_tilde"));
    d.total_dim_sq = detail::number(detail::field(j, "total_dim_sq"));
    if (j.contains("grading") && !j.at("grading").is_null()) d.grading = j.at("grading").get<std::vector<int>>();
    if (j.contains("rank") && j.at("rank").get<std::size_t>() != d.rank()) throw InputError("rank disagrees with labels");
    return d;
}

inline json to_json(const ModularityReport& r) {
    json j;
    j["ref"] = "modular iff the unit is the only label with S~ row proportional to the dims";
    j["is_modular"] = r.is_modular;
    j["transparent_labels"] = r.transparent_labels;
    j["s_det_modulus"] = round12(r.s_det_modulus);
    return j;
}

inline ModularityReport modularity_from_json(const json& j) {
    ModularityReport r;
    r.is_modular = detail::field(j, "is_modular").get<bool>();
    r.transparent_labels = detail::field(j, "transparent_labels").get<std::vector<std::size_t>>();
    r.s_det_modulus = detail::number(detail::field(j, "s_det_modulus"));
    return r;
}

inline CentralClass central_class_from_string(const std::string& s) {
    if (s == "bosonic") return CentralClass::bosonic;
    if (s == "fermionic") return CentralClass::fermionic;
    if (s == "neither") return CentralClass::neither;
    throw InputError("unknown central class \"" + s + "\"");
}

inline json to_json(const AdmissibilityReport& r) {
    json j;
    j["ref"] = "admissible: sum of 1/(2Tor) is 1 and |sum e^{-2 pi i CS}/(2Tor)| = sqrt|s(X)| / (s_L sqrt(2Tor(unit)))";
    j["admissible"] = r.admissible;
    j["sum_inverse_2tor"] = round12(r.sum_inverse_2tor);
    j["gauss_sum_modulus"] = round12(r.gauss_sum_modulus);
    j["target_modulus"] = round12(r.target_modulus);
    j["s_X"] = r.s_X;
    j["s_L"] = round12(r.s_L);
    j["orbits"] = r.orbits;
    j["central_classes"] = array_of(r.bosonic_fermionic, [](CentralClass c) { return std::string(to_string(c)); });
    return j;
}

inline AdmissibilityReport admissibility_from_json(const json& j) {
    AdmissibilityReport r;
    r.admissible = detail::field(j, "admissible").get<bool>();
    r.sum_inverse_2tor = detail::number(detail::field(j, "sum_inverse_2tor"));
    r.gauss_sum_modulus = detail::number(detail::field(j, "gauss_sum_modulus"));
    r.target_modulus = detail::number(detail::field(j, "target_modulus"));
    r.s_X = detail::field(j, "s_X").get<std::vector<std::size_t>>();
    r.s_L = detail::number(detail::field(j, "s_L"));
    r.orbits = detail::field(j, "orbits").get<std::vector<std::vector<std::size_t>>>();
    for (const auto& s : detail::field(j, "central_classes")) r.bosonic_fermionic.push_back(central_class_from_string(s.get<std::string>()));
    return r;
}

inline json to_json(const Certificate& c, const std::string& against) {
    json j;
    j["ref"] = "entrywise S~ and dims within tolerance, twists equal as exact phases";
    j["against"] = against;
    j["pass"] = c.pass;
    j["rank"] = c.rank;
    j["max_s_delta"] = round12(c.max_s_delta);
    j["max_dim_delta"] = round12(c.max_dim_delta);
    j["total_dim_sq_rel_delta"] = round12(c.total_dim_sq_rel_delta);
    j["twists_equal"] = c.twists_equal;
    return j;
}

inline Certificate certificate_from_json(const json& j) {
    Certificate c;
    c.pass = detail::field(j, "pass").get<bool>();
    c.rank = detail::field(j, "rank").get<std::size_t>();
    c.max_s_delta = detail::number(detail::field(j, "max_s_delta"));
    c.max_dim_delta = detail::number(detail::field(j, "max_dim_delta"));
    c.total_dim_sq_rel_delta = detail::number(detail::field(j, "total_dim_sq_rel_delta"));
    c.twists_equal = detail::field(j, "twists_equal").get<bool>();
    return c;
}

// Per-label invariants of a candidate plus its modular data.
inline json to_json(const CandidateData& c) {
    json j;
    j["tag"] = c.tag;
    j["rank"] = c.rank();
    j["unit"] = c.unit;
    j["epsilon"] = c.epsilon;
    json rows = json::array();
    for (std::size_t a = 0; a < c.rank(); ++a) {
        json row;
        row["label"] = c.labels[a];
        row["cs"] = to_json(c.cs[a]);
        row["tor"] = round12(c.tor[a]);
        row["dim"] = round12(c.data.dims[a]);
        row["twist"] = to_json(c.data.twists[a]);
        rows.push_back(std::move(row));
    }
    j["characters"] = std::move(rows);
    j["modular_data"] = to_json(c.data);
    return j;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

inline std::string fraction(const RationalPhase& t) { return std::to_string(t.num()) + "/" + std::to_string(t.den()); }

// One row per label: label, twist, dim, CS, Tor.
inline std::string to_csv(const CandidateData& c) {
    std::ostringstream out;
    out << "label,twist,dim,cs,tor\n";
    for (std::size_t a = 0; a < c.rank(); ++a)
        out << csv_field(c.labels[a]) << ',' << fraction(c.data.twists[a]) << ',' << format12(c.data.dims[a]) << ','
            << fraction(c.cs[a]) << ',' << format12(c.tor[a]) << '\n';
    return out.str();
}

inline std::string emit(const json& j) { return j.dump(2); }

inline json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace mtcforge::io
