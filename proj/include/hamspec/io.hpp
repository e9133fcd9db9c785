#pragma once

// JSON encodings shared by the CLI and file formats.
//
// ScalarExpr: {"1": "-1/2", "a0": "1/2", "~": 0.25} -- rational coefficients
// keyed by symbol, plus an optional inexact numeric part under "~". Symbol
// values travel separately in a {"name": value} table.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hamspec/errors.hpp"
#include "hamspec/ls_selector.hpp"
#include "hamspec/orbit.hpp"
#include "hamspec/scalar_expr.hpp"

namespace hamspec {

// Insertion-ordered objects keep reports in a stable, readable field order.
using Json = nlohmann::ordered_json;

inline constexpr const char* kOrbitSchema = "orbit-models/1";

inline Json number_or_null(double x) {
    if (std::isfinite(x)) return x;
    if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
    return nullptr;
}

inline Json to_json(const ScalarExpr& e) {
    Json j = Json::object();
    for (const auto& [name, q] : e.coefficients()) j[name] = to_string(q);
    if (!e.exact()) j["~"] = e.inexact_part();
    return j;
}

inline void collect_symbols(const ScalarExpr& e, std::map<std::string, double>& table) {
    for (const auto& [name, v] : e.symbol_values())
        if (e.coefficient(name) != 0) table[name] = v;
}

inline Json symbol_table_json(const std::map<std::string, double>& table) {
    Json j = Json::object();
    for (const auto& [name, v] : table) j[name] = v;
    return j;
}

inline ScalarExpr scalar_from_json(const Json& j, const std::map<std::string, double>& symbols) {
    if (j.is_number()) return ScalarExpr::numeric(j.get<double>());
    if (j.is_string()) return ScalarExpr::constant(parse_rational(j.get<std::string>()));
    if (!j.is_object()) throw ValidationError("scalar must be an object, a rational string or a number");
    ScalarExpr e;
    for (const auto& [name, value] : j.items()) {
        if (name == "~") {
            if (!value.is_number()) throw ValidationError("inexact part must be a number");
            e += ScalarExpr::numeric(value.get<double>());
            continue;
        }
        Rational q = value.is_string() ? parse_rational(value.get<std::string>())
                     : value.is_number_integer() ? Rational(value.get<long long>())
                                                 : throw ValidationError("coefficient of " + name + " must be a rational string");
        if (name == ScalarExpr::kOne) {
            e += ScalarExpr::constant(q);
            continue;
        }
        auto it = symbols.find(name);
        if (it == symbols.end()) throw ValidationError("symbol " + name + " missing from the symbol table");
        e += ScalarExpr::symbol(name, it->second) * q;
    }
    return e;
}

inline Json to_json(const RecapLattice& lat) {
    Json j;
    j["lambda0"] = lat.lambda0 ? to_json(*lat.lambda0) : Json(nullptr);
    j["two_n"] = lat.two_n ? Json(*lat.two_n) : Json(nullptr);
    j["sign"] = lat.sign;
    return j;
}

inline RecapLattice lattice_from_json(const Json& j, const std::map<std::string, double>& symbols) {
    RecapLattice lat;
    if (j.contains("lambda0") && !j["lambda0"].is_null()) lat.lambda0 = scalar_from_json(j["lambda0"], symbols);
    if (j.contains("two_n") && !j["two_n"].is_null()) lat.two_n = j["two_n"].get<int>();
    lat.sign = j.value("sign", 1);
    lat.validate();
    return lat;
}

inline Json to_json(const OrbitRecord& r) {
    Json j;
    j["id"] = r.id;
    j["period"] = r.period;
    j["action"] = to_json(r.action);
    j["mean_index"] = to_json(r.mean_index);
    j["capping_class"] = r.capping_class;
    j["nondegenerate"] = r.nondegenerate;
    return j;
}

inline OrbitRecord record_from_json(const Json& j, const std::map<std::string, double>& symbols) {
    if (!j.is_object()) throw ValidationError("orbit record must be an object");
    OrbitRecord r;
    r.id = j.at("id").get<std::string>();
    r.period = j.value("period", 1);
    if (r.period < 1) throw ValidationError("record " + r.id + ": period must be positive");
    r.action = scalar_from_json(j.at("action"), symbols);
    r.mean_index = scalar_from_json(j.at("mean_index"), symbols);
    r.capping_class = j.value("capping_class", 0LL);
    r.nondegenerate = j.value("nondegenerate", true);
    return r;
}

struct OrbitFile {
    std::map<std::string, double> symbols;
    RecapLattice lattice;
    std::vector<OrbitRecord> records;
};

inline Json to_json(const OrbitFile& f) {
    std::map<std::string, double> table = f.symbols;
    for (const auto& r : f.records) {
        collect_symbols(r.action, table);
        collect_symbols(r.mean_index, table);
    }
    if (f.lattice.lambda0) collect_symbols(*f.lattice.lambda0, table);
    Json j;
    j["schema"] = kOrbitSchema;
    j["symbols"] = symbol_table_json(table);
    j["lattice"] = to_json(f.lattice);
    j["records"] = Json::array();
    for (const auto& r : f.records) j["records"].push_back(to_json(r));
    return j;
}

/// Accepts the full object form or a bare array of records without symbols.
inline OrbitFile orbit_file_from_json(const Json& j) {
    OrbitFile f;
    const Json* records = &j;
    if (j.is_object()) {
        if (j.contains("schema") && j["schema"] != kOrbitSchema)
            throw ValidationError("unsupported orbit file schema " + j["schema"].dump());
        if (j.contains("symbols"))
            for (const auto& [name, v] : j["symbols"].items()) {
                if (!v.is_number()) throw ValidationError("symbol " + name + " needs a numeric value");
                f.symbols[name] = v.get<double>();
            }
        f.lattice = j.contains("lattice") ? lattice_from_json(j["lattice"], f.symbols) : RecapLattice::aspherical();
        records = &j.at("records");
    } else if (!j.is_array()) {
        throw ValidationError("orbit file must be an object or an array of records");
    }
    for (const auto& r : *records) f.records.push_back(record_from_json(r, f.symbols));
    return f;
}

struct ComplexFile {
    SimplicialComplex complex;
    std::optional<PLFunction> function;
};

inline Chain chain_from_json(const Json& j) {
    Chain c;
    for (const auto& s : j) c.push_back(s.get<Simplex>());
    return c;
}

/// {"vertices": n, "simplices": [[...]], "basis_cycles": {...}, "values": [...]}
/// or {"builtin": "torus" | "sphere" | "circle", "values": [...]}.
inline ComplexFile complex_file_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("complex file must be a JSON object");
    auto build = [&]() {
        if (j.contains("builtin")) {
            const std::string name = j["builtin"].get<std::string>();
            if (name == "torus") return SimplicialComplex::torus();
            if (name == "sphere") return SimplicialComplex::sphere();
            if (name == "circle") return SimplicialComplex::circle(j.value("circle_vertices", 4));
            throw ValidationError("unknown builtin complex " + name);
        }
        const int n = j.at("vertices").is_array() ? static_cast<int>(j["vertices"].size()) : j["vertices"].get<int>();
        std::vector<Simplex> simplices;
        for (const auto& s : j.at("simplices")) simplices.push_back(s.get<Simplex>());
        SimplicialComplex cx(n, simplices);
        if (j.contains("basis_cycles")) {
            const Json& b = j["basis_cycles"];
            if (b.is_object()) {
                for (const auto& [name, c] : b.items())
                    cx.add_basis_cycle({name, c.at("degree").get<int>(), chain_from_json(c.at("chain"))});
            } else {
                for (const auto& c : b)
                    cx.add_basis_cycle({c.at("name").get<std::string>(), c.at("degree").get<int>(),
                                        chain_from_json(c.at("chain"))});
            }
        }
        if (j.contains("cup_length")) cx.set_cup_length(j["cup_length"].get<int>());
        return cx;
    };
    ComplexFile f{build(), std::nullopt};
    if (j.contains("values")) f.function = PLFunction{j["values"].get<std::vector<double>>()};
    return f;
}

}  // namespace hamspec
