// hamspec: command-line front end. One subcommand per module, one JSON report
// per run. Exit status: 0 success, 1 invalid input, 2 numerical failure.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "hamspec/cpn.hpp"
#include "hamspec/index.hpp"
#include "hamspec/io.hpp"
#include "hamspec/ls_selector.hpp"
#include "hamspec/novikov.hpp"
#include "hamspec/spectra.hpp"
#include "hamspec/version.hpp"

namespace fs = std::filesystem;
using namespace hamspec;

namespace {

constexpr const char* kReportDirEnv = "HAMSPEC_REPORT_DIR";

struct Globals {
    std::uint64_t seed = 1;
    std::string report;
    std::string csv;
};

Json report_header(const std::string& schema, const std::string& command) {
    Json j;
    j["schema"] = schema;
    j["toolkit_version"] = kToolkitVersion;
    j["command"] = command;
    return j;
}

/// Relative output paths land in $HAMSPEC_REPORT_DIR when it is set.
fs::path resolve_output(const std::string& path) {
    fs::path p(path);
    const char* dir = std::getenv(kReportDirEnv);
    if (p.is_relative() && dir && *dir) p = fs::path(dir) / p;
    return p;
}

void write_atomic(const fs::path& target, const std::string& text) {
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot write " + tmp.string());
        out << text;
        out.flush();
        if (!out) throw ValidationError("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

/// No --report: stdout, or <command>.json under $HAMSPEC_REPORT_DIR when set.
void emit_report(const Json& report, const Globals& g, const std::string& command) {
    const std::string text = report.dump(2) + "\n";
    if (!g.report.empty()) {
        write_atomic(resolve_output(g.report), text);
        return;
    }
    const char* dir = std::getenv(kReportDirEnv);
    if (dir && *dir) {
        write_atomic(fs::path(dir) / (command + ".json"), text);
        return;
    }
    std::cout << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Json read_json(const std::string& path) {
    try {
        return Json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

/// Config files hand comma lists over as several values; rejoin them.
std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : ",") + p;
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

double parse_double(const std::string& s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("not a number: '" + s + "'");
    }
}

/// Deterministic symbol values: uniform in [0, 1) with 53 random bits.
class SymbolSampler {
public:
    explicit SymbolSampler(std::uint64_t seed) : rng_(seed) {}
    double next() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 rng_;
};

/// "3/4" and "0.25" are rationals, "a" is a fresh symbol with a sampled value,
/// "a=0.7320508" pins the value.
ScalarExpr parse_scalar_token(const std::string& token, SymbolSampler& sampler) {
    static const std::regex identifier("[A-Za-z_][A-Za-z0-9_]*");
    const std::string t = trim(token);
    if (t.empty()) throw ValidationError("empty value in list");
    if (const auto eq = t.find('='); eq != std::string::npos) {
        const std::string name = trim(t.substr(0, eq));
        if (!std::regex_match(name, identifier)) throw ValidationError("bad symbol name '" + name + "'");
        return ScalarExpr::symbol(name, parse_double(trim(t.substr(eq + 1))));
    }
    if (std::regex_match(t, identifier)) return ScalarExpr::symbol(t, sampler.next());
    return ScalarExpr::constant(parse_rational(t));
}

Json scalar_report(const ScalarExpr& e) {
    Json j;
    j["expr"] = e.str();
    j["exact"] = to_json(e);
    j["value"] = number_or_null(e.evaluate());
    return j;
}

Json optional_scalar(const std::optional<ScalarExpr>& e) { return e ? scalar_report(*e) : Json(nullptr); }

// ---------------------------------------------------------------- index

struct IndexOptions {
    std::string path;
    std::string hessian;
    double time = 1.0;
    int steps = 0;
};

/// "2,1;1,3" or the JSON form [[2,1],[1,3]]; entries may be rational strings.
Matrix parse_matrix(const std::string& text) {
    if (!text.empty() && text.front() == '[') {
        Json j;
        try {
            j = Json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ValidationError(std::string("hessian: ") + e.what());
        }
        const int n = static_cast<int>(j.size());
        Matrix m(n, n);
        for (int r = 0; r < n; ++r) {
            if (!j[r].is_array() || static_cast<int>(j[r].size()) != n) throw DimensionError("hessian must be square");
            for (int c = 0; c < n; ++c) {
                const Json& x = j[r][c];
                m(r, c) = x.is_string() ? to_double(parse_rational(x.get<std::string>())) : x.get<double>();
            }
        }
        return m;
    }
    const auto rows = split(text, ';');
    const int n = static_cast<int>(rows.size());
    Matrix m(n, n);
    for (int r = 0; r < n; ++r) {
        const auto cols = split(rows[r], ',');
        if (static_cast<int>(cols.size()) != n) throw DimensionError("hessian must be square");
        for (int c = 0; c < n; ++c) m(r, c) = to_double(parse_rational(cols[c]));
    }
    return m;
}

Json index_result_json(const IndexResult& r) {
    Json j;
    j["cz"] = r.cz ? Json(*r.cz) : Json(nullptr);
    j["degenerate"] = !r.cz.has_value();
    j["mean_index"] = r.mean;
    j["polar_mean_index"] = r.polar_mean;
    j["polar_defect_bound"] = r.defect_bound;
    j["endpoint_det"] = r.endpoint_det;
    j["loop"] = r.loop;
    j["crossings"] = Json::array();
    for (const auto& c : r.crossings)
        j["crossings"].push_back({{"t", c.t}, {"kernel_dimension", c.kernel_dimension}, {"signature", c.signature}});
    return j;
}

Json run_index(const IndexOptions& o) {
    Json j = report_header("index-engine/1", "index");
    const std::string& hessian = o.hessian;
    if (o.path.empty() == hessian.empty()) throw ValidationError("index needs exactly one of --path or --hessian");
    if (!o.path.empty()) {
        std::ifstream in(o.path);
        if (!in) throw ValidationError("cannot open " + o.path);
        const SymplecticPath p = read_path_table(in);
        j["input"] = {{"kind", "path"}, {"file", fs::path(o.path).filename().string()},
                      {"dimension", p.dimension()}, {"samples", p.size()}, {"T", p.end_time()}};
        j["result"] = index_result_json(mean_index_path(p));
        return j;
    }
    const QuadraticHamiltonian h(parse_matrix(hessian));
    j["input"] = {{"kind", "quadratic"}, {"hessian", hessian}, {"dimension", h.dimension()}, {"T", o.time}};
    const IndexResult r = o.steps > 0 ? mean_index_path(flow_path(h, o.time, o.steps)) : index_of_flow(h, o.time);
    j["result"] = index_result_json(r);
    const QuadraticMeanIndex closed = mean_index_quadratic(h, o.time);
    j["closed_form_mean_index"] = closed.mean;
    j["closed_form_fell_back"] = closed.fell_back;
    return j;
}

// ---------------------------------------------------------------- cpn

struct CpnOptions {
    int n = 1;
    std::vector<std::string> alphas;
    std::string c;
    bool normalize = false;
};

Json run_cpn(const CpnOptions& o, const Globals& g) {
    SymbolSampler sampler(g.seed);
    std::vector<ScalarExpr> alphas;
    for (const auto& t : split(join(o.alphas), ',')) alphas.push_back(parse_scalar_token(t, sampler));
    ScalarExpr c = o.c.empty() ? ScalarExpr{} : parse_scalar_token(o.c, sampler);
    CPnSystem sys = make_cpn_system(o.n, alphas, c);
    if (o.normalize) sys = normalize_hamiltonian(sys);
    const auto records = cpn_fixed_point_orbits(sys);

    OrbitFile file{{}, sys.lattice, records};
    for (const auto& a : sys.alphas) collect_symbols(a, file.symbols);
    const Json body = to_json(file);

    Json j = report_header(kOrbitSchema, "cpn");
    j["seed"] = g.seed;
    j["n"] = sys.n;
    j["normalized"] = o.normalize;
    j["independent_symbols"] = sys.independent;
    j["alphas"] = Json::array();
    for (const auto& a : sys.alphas) j["alphas"].push_back(a.str());
    j["c"] = scalar_report(sys.c);
    j["slope"] = scalar_report(sys.lattice.slope());
    j["monotonicity"] = scalar_report(sys.lattice.monotonicity());
    j["symbols"] = body["symbols"];
    j["lattice"] = body["lattice"];
    j["records"] = body["records"];
    for (std::size_t i = 0; i < records.size(); ++i) {
        const ScalarExpr aug = augmented_action(records[i], sys.lattice);
        j["records"][i]["augmented_action"] = to_json(aug);
        j["records"][i]["augmented_action_zero"] = aug.is_zero();
    }
    return j;
}

// ---------------------------------------------------------------- spectra

struct SpectraOptions {
    std::string orbits;
    int k_max = 20;
    int window = 5;
    int stabilize_l = 0;
    int stabilize_k = 64;
    int resonance_bound = 0;
    int order_l = 0;
};

Json residues_json(const SpectrumMod& s) {
    Json j = Json::array();
    for (const auto& r : s.residues) j.push_back(r.str());
    return j;
}

Json run_spectra(const SpectraOptions& o, const Globals& g) {
    if (o.k_max < 1) throw ValidationError("--k-max must be positive");
    const OrbitFile file = orbit_file_from_json(read_json(o.orbits));
    const RecapLattice& lat = file.lattice;
    bool exact = true;
    for (const auto& r : file.records) exact = exact && r.action.exact() && r.mean_index.exact();

    Json j = report_header("spectra-lab/1", "spectra");
    j["input"] = fs::path(o.orbits).filename().string();
    j["records"] = file.records.size();
    j["lattice"] = to_json(lat);
    j["comparison"] = exact ? "exact" : "tolerance 1e-9";
    j["capping_window"] = o.window;
    j["capping_window_note"] = "recappings searched only within the window around the representative with action in [0, lambda0)";

    const int window = lat.lambda0 ? o.window : 0;
    const GapSeries series = gap_series(file.records, o.k_max, window, lat);
    Json table = Json::array();
    std::ostringstream csv;
    csv << "k,residue-count,min-action-gap,min-index-gap\n";
    csv << std::setprecision(17);
    for (const auto& e : series.entries) {
        const SpectrumMod act = spectrum_mod(file.records, e.k, SpectrumKind::Action, lat);
        const SpectrumMod idx = spectrum_mod(file.records, e.k, SpectrumKind::Index, lat);
        Json row;
        row["k"] = e.k;
        row["action_residues"] = residues_json(act);
        row["index_residues"] = residues_json(idx);
        row["min_action_gap"] = optional_scalar(e.action_gap);
        row["min_index_gap"] = optional_scalar(e.index_gap);
        if (e.witness)
            row["witness"] = {{"x", e.witness->x}, {"y", e.witness->y},
                              {"recap_x", e.witness->shift_x}, {"recap_y", e.witness->shift_y}};
        else
            row["witness"] = nullptr;
        row["coincidences"] = e.coincidences;
        table.push_back(row);
        csv << e.k << ',' << act.residues.size() << ',';
        if (e.action_gap) csv << e.action_gap->evaluate();
        csv << ',';
        if (e.index_gap) csv << e.index_gap->evaluate();
        csv << '\n';
    }
    j["iterates"] = table;
    j["max_min_action_gap"] = optional_scalar(series.max_action_gap);
    j["max_min_index_gap"] = optional_scalar(series.max_index_gap);
    j["action_gap_bound"] = optional_scalar(series.action_bound);
    j["within_action_gap_bound"] = series.within_action_bound;

    const NormalizedSpectra ns = normalized_spectra(file.records, lat);
    Json norm;
    norm["actions_mod_lambda0_Q"] = Json::array();
    for (const auto& a : ns.actions) norm["actions_mod_lambda0_Q"].push_back(a.str());
    norm["indices_mod_Q"] = Json::array();
    for (const auto& d : ns.indices) norm["indices_mod_Q"].push_back(d.str());
    norm["exact"] = ns.exact;
    j["normalized_spectra"] = norm;
    j["geometric_identity_violations"] = geometric_identity_violations(file.records, lat);

    Json aug = Json::array();
    std::vector<std::string> seen;
    for (const auto& r : file.records) {
        if (std::find(seen.begin(), seen.end(), r.id) != seen.end()) continue;
        seen.push_back(r.id);
        aug.push_back({{"id", r.id}, {"augmented_action", scalar_report(augmented_action(r, lat, true))}});
    }
    j["augmented_actions"] = aug;
    Json pairs = Json::array();
    for (const auto& [x, y] : augmented_equality_pairs(file.records, lat, exact)) pairs.push_back({x, y});
    j["augmented_equal_pairs"] = pairs;

    if (o.stabilize_l > 0) {
        const auto st = stabilization_check(file.records, o.stabilize_l, o.stabilize_k, lat);
        Json s;
        s["l"] = o.stabilize_l;
        s["K"] = o.stabilize_k;
        s["stabilizes"] = st.stabilizes;
        s["counterexample_k"] = st.counterexample_k ? Json(*st.counterexample_k) : Json(nullptr);
        s["missing"] = Json::array();
        for (const auto& m : st.missing) s["missing"].push_back(m.str());
        j["stabilization"] = s;
    }
    if (o.resonance_bound > 0) {
        std::vector<ScalarExpr> indices;
        std::vector<std::string> ids;
        for (const auto& r : file.records) {
            if (std::find(ids.begin(), ids.end(), r.id) != ids.end()) continue;
            ids.push_back(r.id);
            indices.push_back(r.mean_index / Rational(r.period));
        }
        Json rel = Json::array();
        for (const auto& r : resonance_search(indices, lat, o.resonance_bound))
            rel.push_back({{"coefficients", r.coefficients}, {"sum", r.residual.str()}});
        j["resonances"] = {{"ids", ids}, {"bound", o.resonance_bound}, {"relations", rel}};
    }
    if (o.order_l > 0) {
        const auto rep = cpn_order_check(file.records, lat, o.order_l);
        Json oc;
        oc["L"] = o.order_l;
        oc["action_shift"] = rep.shifted ? scalar_report(rep.shift) : Json(nullptr);
        oc["pairs"] = Json::array();
        for (const auto& p : rep.pairs) {
            Json q;
            q["x"] = p.x;
            q["y"] = p.y;
            q["action_difference"] = scalar_report(p.action_difference);
            q["first_valid_l"] = p.first_valid_l;
            q["k_l_defining_inequalities"] = p.k_l_defining_inequalities;
            q["max_scaled_error"] = p.max_scaled_error;
            q["limit"] = p.scale_factor;
            q["residual"] = p.residual;
            q["residual_exact_zero"] = p.residual_exact_zero;
            q["empirical_residual"] = p.empirical_residual;
            q["augmented_difference"] = p.augmented_difference;
            q["order_disagreements"] = p.order_disagreements;
            q["order_violations"] = p.order_violations;
            oc["pairs"].push_back(q);
        }
        j["order_check"] = oc;
    }
    if (!g.csv.empty()) write_atomic(resolve_output(g.csv), csv.str());
    return j;
}

// ---------------------------------------------------------------- qh

struct QhOptions {
    std::string manifold = "cpn:1";
    std::string expr;
    bool uniruled = false;
};

Json run_qh(const QhOptions& o) {
    const ManifoldSpec m = ManifoldSpec::parse(o.manifold);
    Json j = report_header("novikov-qh/1", "qh");
    j["manifold"] = m.str();
    j["minimal_chern"] = m.aspherical() ? Json(nullptr) : Json(m.minimal_chern());
    j["lattice"] = to_json(m.lattice());
    if (!o.expr.empty()) {
        const QHClass x = parse_qh(m, o.expr);
        j["expr"] = o.expr;
        j["class"] = x.str();
        const auto deg = x.degree();
        j["degree"] = deg ? Json(*deg) : Json(nullptr);
        j["homogeneous"] = deg.has_value() || x.is_zero();
        j["I_omega"] = optional_scalar(valuation(x));
    }
    if (o.uniruled) {
        const auto w = check_uniruled_condition(m);
        if (!w) {
            j["uniruled_witness"] = nullptr;
        } else {
            Json wj;
            wj["alpha"] = w->alpha.str();
            wj["u"] = w->u.str();
            wj["w"] = w->w.str();
            wj["product"] = qh_product(w->u.scaled(w->alpha), w->w).str();
            wj["I_omega_alpha"] = optional_scalar(valuation(w->alpha, m.lattice()));
            wj["valuation_equals_lambda0"] = w->condition_a;
            wj["codegree_below_2N"] = w->condition_b;
            j["uniruled_witness"] = wj;
        }
    }
    return j;
}

// ---------------------------------------------------------------- ls

struct LsOptions {
    std::string complex;
    std::string builtin;
    std::vector<std::string> values;
};

Json run_ls(const LsOptions& o, const Globals& g) {
    if (o.complex.empty() == o.builtin.empty()) throw ValidationError("ls needs exactly one of --complex or --builtin");
    Json spec = o.complex.empty() ? Json{{"builtin", o.builtin}} : read_json(o.complex);
    const ComplexFile file = complex_file_from_json(spec);
    const SimplicialComplex& cx = file.complex;
    PLFunction f;
    std::string source;
    if (!o.values.empty()) {
        for (const auto& t : split(join(o.values), ',')) f.values.push_back(parse_double(t));
        source = "flag";
    } else if (file.function) {
        f = *file.function;
        source = "file";
    } else {
        SymbolSampler sampler(g.seed);
        for (int v = 0; v < cx.vertex_count(); ++v) f.values.push_back(sampler.next());
        source = "seeded";
    }
    const SelectorTable t = selector_table(cx, f);
    const FiltrationReduction red(cx, f);

    Json j = report_header("ls-selector/1", "ls");
    j["complex"] = o.complex.empty() ? o.builtin : fs::path(o.complex).filename().string();
    j["vertices"] = cx.vertex_count();
    j["simplices"] = cx.simplices().size();
    j["betti_z2"] = red.betti();
    j["function_source"] = source;
    if (source == "seeded") j["seed"] = g.seed;
    j["values"] = f.values;
    j["ties_broken_by_vertex_order"] = t.ties_broken;
    Json sel = Json::array();
    for (const auto& [name, v] : t.values)
        sel.push_back({{"class", name}, {"degree", cx.basis_cycle(name).degree}, {"value", number_or_null(v)}});
    j["selectors"] = sel;
    j["distinct_values"] = t.distinct;
    j["cup_length"] = t.cup_length ? Json(*t.cup_length) : Json(nullptr);
    if (t.cup_length) j["meets_cup_length_bound"] = t.distinct >= *t.cup_length + 1;
    return j;
}

// ---------------------------------------------------------------- equidist

struct EquidistOptions {
    std::string a = "golden";
    double eps = 0.1;
    std::int64_t m = 1000000;
    double start = 0.0;
};

Json run_equidist(const EquidistOptions& o, const Globals& g) {
    SymbolSampler sampler(g.seed);
    const ScalarExpr a = o.a == "golden" ? ScalarExpr::numeric((1 + std::sqrt(5.0)) / 2) : parse_scalar_token(o.a, sampler);
    const auto r = equidistribution_experiment(a, o.eps, o.m, o.start);
    Json j = report_header("spectra-lab/1", "equidist");
    j["a"] = o.a;
    j["a_value"] = a.evaluate();
    j["eps"] = o.eps;
    j["m"] = o.m;
    j["arc"] = {{"start", o.start}, {"length", o.eps}, {"endpoints", "open"}};
    j["exact_positions"] = r.exact_positions;
    j["hits"] = r.hits;
    j["frequency"] = r.frequency;
    j["deviation"] = std::fabs(r.frequency - o.eps);
    j["deviation_scale"] = 3.0 / std::sqrt(static_cast<double>(o.m));
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hamspec: spectral invariants of Hamiltonian model systems"};
    app.set_config("--config", "", "INI file; [section] names match subcommands, flags win on conflict");
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "seed for sampled symbol values and random functions");
    app.add_option("--report", g.report, "report path (default: stdout, or $" + std::string(kReportDirEnv) + ")");
    app.add_option("--csv", g.csv, "also write the per-k table as CSV (spectra)");

    IndexOptions io;
    auto* index = app.add_subcommand("index", "Conley-Zehnder and mean index of a path or quadratic flow");
    index->add_option("--path", io.path, "path table file");
    index->add_option("--hessian", io.hessian, "symmetric matrix: rows separated by ';', entries by ',', or a JSON array of rows");
    index->add_option("--time", io.time, "flow time T");
    index->add_option("--steps", io.steps, "samples of the flow (default: adaptive)");

    CpnOptions co;
    auto* cpn = app.add_subcommand("cpn", "fixed-point orbit records of a torus-action Hamiltonian on CP^n");
    cpn->add_option("--n", co.n, "complex dimension")->required();
    cpn->add_option("--alphas", co.alphas, "n+1 comma-separated rationals, symbols or name=value")->required();
    cpn->add_option("--c", co.c, "additive constant");
    cpn->add_flag("--normalize", co.normalize, "subtract the mean of H");

    SpectraOptions so;
    auto* spectra = app.add_subcommand("spectra", "spectra, gaps and order checks for an orbit file");
    spectra->add_option("--orbits", so.orbits, "orbit record file")->required();
    spectra->add_option("--k-max", so.k_max, "largest iteration");
    spectra->add_option("--window", so.window, "capping window");
    spectra->add_option("--stabilize-l", so.stabilize_l, "check k S(l) = S(kl)");
    spectra->add_option("--stabilize-k", so.stabilize_k, "largest k for the stabilization check");
    spectra->add_option("--resonance-bound", so.resonance_bound, "coefficient bound for resonance search");
    spectra->add_option("--order-l", so.order_l, "run the CP^n order check up to L");

    QhOptions qo;
    auto* qh = app.add_subcommand("qh", "quantum homology arithmetic");
    qh->add_option("--manifold", qo.manifold, "cpn:N, cpn:AxB, torus:2N, optional /z2");
    qh->add_option("--expr", qo.expr, "expression such as u*u*u or q^-1*[pt]");
    qh->add_flag("--uniruled", qo.uniruled, "search for a uniruledness witness");

    LsOptions lo;
    auto* ls = app.add_subcommand("ls", "sublevel selector values of a PL function");
    ls->add_option("--complex", lo.complex, "complex file");
    ls->add_option("--builtin", lo.builtin, "circle, sphere or torus");
    ls->add_option("--values", lo.values, "comma-separated vertex values");

    EquidistOptions eo;
    auto* equidist = app.add_subcommand("equidist", "frequency of k a mod 1 in an open arc");
    equidist->add_option("--a", eo.a, "golden, a rational, or name=value");
    equidist->add_option("--eps", eo.eps, "arc length in (0, 1]");
    equidist->add_option("--m", eo.m, "number of iterations");
    equidist->add_option("--start", eo.start, "arc start as a fraction of the circle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        Json report;
        std::string name;
        if (index->parsed()) report = run_index(io), name = "index";
        else if (cpn->parsed()) report = run_cpn(co, g), name = "cpn";
        else if (spectra->parsed()) report = run_spectra(so, g), name = "spectra";
        else if (qh->parsed()) report = run_qh(qo), name = "qh";
        else if (ls->parsed()) report = run_ls(lo, g), name = "ls";
        else report = run_equidist(eo, g), name = "equidist";
        emit_report(report, g, name);
        return 0;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 1;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
}
