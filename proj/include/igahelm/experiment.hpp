#pragma once

// Batch experiment runner: domain -> problem -> refinement schedule -> per-level
// lift, assembly, solve and error norms, written as a CSV convergence table.

#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "assembly.hpp"
#include "config.hpp"
#include "dirichlet.hpp"
#include "domains.hpp"
#include "linsolve.hpp"
#include "net_io.hpp"
#include "postproc.hpp"
#include "problems.hpp"
#include "refine.hpp"

namespace igahelm {

enum class ProblemId { poisson_oscillatory, poisson_exp_cones, helmholtz_variable_frequency, quadratic_patch };

inline std::optional<ProblemId> parse_problem_id(std::string_view s) {
    if (s == "poisson_oscillatory") return ProblemId::poisson_oscillatory;
    if (s == "poisson_exp_cones") return ProblemId::poisson_exp_cones;
    if (s == "helmholtz_variable_frequency") return ProblemId::helmholtz_variable_frequency;
    if (s == "quadratic_patch") return ProblemId::quadratic_patch;
    return std::nullopt;
}

struct DomainSpec {
    std::optional<BuiltinDomain> builtin;
    std::size_t n = 0;
    std::size_t m = 0;
    std::filesystem::path file;
};

struct ProblemSpec {
    ProblemId id = ProblemId::poisson_oscillatory;
    int M = 1;
    Point2 anchor{0.5, 0.5};
    std::array<double, 3> coefficients{7.0, 7.0, 7.0};
    std::array<Point2, 3> anchors{Point2{0.25, 0.25}, Point2{0.5, 0.5}, Point2{0.75, 0.75}};
};

/// One schedule entry. Steps apply in this order: uniform passes, interval
/// insertions, clustering (with optional double center), double knots.
struct LevelSpec {
    bool from_initial = false;
    int uniform = 0;
    std::vector<IntervalCount> intervals_xi;
    std::vector<IntervalCount> intervals_eta;
    std::optional<Point2> cluster_center;
    int cluster_knots = 9;
    bool double_center = false;
    std::vector<double> double_xi;
    std::vector<double> double_eta;
};

struct OutputSpec {
    std::filesystem::path table = "convergence.csv";
    std::filesystem::path field;  // optional; "{level}" is replaced by the level number
    GridFormat field_format = GridFormat::csv;
    int resolution = 101;
    std::filesystem::path matrix;  // optional Matrix Market dump; "{level}" supported
    bool record_timings = false;
};

struct ExperimentConfig {
    DomainSpec domain;
    ProblemSpec problem;
    std::vector<LevelSpec> schedule;
    int assembly_order = kDefaultAssemblyOrder;
    int error_order = kDefaultErrorOrder;
    SolveMethod method = SolveMethod::sparse_lu;
    unsigned threads = 1;
    OutputSpec output;
    std::filesystem::path output_dir = ".";
};

struct Diagnostic {
    std::string message;
};

namespace detail {

inline ParseError cfg_error(const config::Value& v, const std::string& what) { return ParseError(what, v.line); }

inline double as_number(const config::Value& v, const std::string& key) {
    if (!v.is_number()) throw cfg_error(v, "'" + key + "' must be a number");
    return std::get<double>(v.data);
}

inline int as_int(const config::Value& v, const std::string& key) {
    const double d = as_number(v, key);
    if (d != std::floor(d)) throw cfg_error(v, "'" + key + "' must be an integer");
    return static_cast<int>(d);
}

inline std::string as_string(const config::Value& v, const std::string& key) {
    if (!v.is_string()) throw cfg_error(v, "'" + key + "' must be a string");
    return std::get<std::string>(v.data);
}

inline bool as_bool(const config::Value& v, const std::string& key) {
    if (!v.is_bool()) throw cfg_error(v, "'" + key + "' must be true or false");
    return std::get<bool>(v.data);
}

inline std::vector<double> as_numbers(const config::Value& v, const std::string& key) {
    if (!v.is_array()) throw cfg_error(v, "'" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : std::get<config::Array>(v.data)) out.push_back(as_number(e, key));
    return out;
}

inline Point2 as_point(const config::Value& v, const std::string& key) {
    const auto xs = as_numbers(v, key);
    if (xs.size() != 2) throw cfg_error(v, "'" + key + "' must be [xi, eta]");
    return {xs[0], xs[1]};
}

inline std::vector<IntervalCount> as_intervals(const config::Value& v, const std::string& key) {
    if (!v.is_array()) throw cfg_error(v, "'" + key + "' must be an array of [a, b, count]");
    std::vector<IntervalCount> out;
    for (const auto& e : std::get<config::Array>(v.data)) {
        const auto xs = as_numbers(e, key);
        if (xs.size() != 3 || xs[2] != std::floor(xs[2]) || xs[2] < 1)
            throw cfg_error(e, "'" + key + "' entries must be [a, b, count]");
        out.push_back({xs[0], xs[1], static_cast<int>(xs[2])});
    }
    return out;
}

inline void reject_unknown(const config::Table& t, std::initializer_list<const char*> known, const std::string& where) {
    for (const auto& [k, v] : t.entries) {
        bool ok = false;
        for (const char* kk : known) ok = ok || k == kk;
        if (!ok) throw ParseError("unknown key '" + k + "' in " + where, v.line);
    }
}

inline std::string substitute_level(const std::filesystem::path& p, std::size_t level) {
    std::string s = p.string();
    const auto pos = s.find("{level}");
    if (pos != std::string::npos) s.replace(pos, 7, std::to_string(level));
    return s;
}

} // namespace detail

/// Build a typed config from a parsed document. Relative file paths in [domain]
/// resolve against `base_dir`.
inline ExperimentConfig from_document(const config::Document& doc, const std::filesystem::path& base_dir = ".") {
    using namespace detail;
    ExperimentConfig cfg;
    reject_unknown(doc.root, {"version"}, "top level");
    const auto* ver = doc.root.find("version");
    if (!ver || as_int(*ver, "version") != 1) throw ParseError("config must declare version = 1", ver ? ver->line : 0);
    for (const auto& [name, t] : doc.tables)
        if (name != "domain" && name != "problem" && name != "quadrature" && name != "solver" && name != "output")
            throw ParseError("unknown table [" + name + "]", t.line);
    for (const auto& [name, arr] : doc.table_arrays)
        if (name != "level") throw ParseError("unknown table array [[" + name + "]]", arr.front().line);

    if (const auto it = doc.tables.find("domain"); it != doc.tables.end()) {
        const auto& t = it->second;
        reject_unknown(t, {"builtin", "n", "m", "file"}, "[domain]");
        if (const auto* v = t.find("builtin")) {
            const auto name = as_string(*v, "builtin");
            cfg.domain.builtin = parse_builtin_domain(name);
            if (!cfg.domain.builtin) throw cfg_error(*v, "unknown builtin domain '" + name + "'");
            const auto* n = t.find("n");
            const auto* m = t.find("m");
            if (!n || !m) throw ParseError("[domain] builtin needs n and m", t.line);
            const int ni = as_int(*n, "n"), mi = as_int(*m, "m");
            if (ni < 0 || mi < 0) throw ParseError("[domain] n and m must be positive", t.line);
            cfg.domain.n = static_cast<std::size_t>(ni);
            cfg.domain.m = static_cast<std::size_t>(mi);
        }
        if (const auto* v = t.find("file")) {
            if (cfg.domain.builtin) throw cfg_error(*v, "[domain] takes either builtin or file, not both");
            std::filesystem::path p = as_string(*v, "file");
            cfg.domain.file = p.is_absolute() ? p : base_dir / p;
        }
    }
    if (!cfg.domain.builtin && cfg.domain.file.empty()) throw ParseError("[domain] needs builtin or file", 0);

    if (const auto it = doc.tables.find("problem"); it != doc.tables.end()) {
        const auto& t = it->second;
        reject_unknown(t, {"id", "M", "anchor", "coefficients", "anchors"}, "[problem]");
        const auto* id = t.find("id");
        if (!id) throw ParseError("[problem] needs id", t.line);
        const auto name = as_string(*id, "id");
        const auto pid = parse_problem_id(name);
        if (!pid) throw cfg_error(*id, "unknown problem '" + name + "'");
        cfg.problem.id = *pid;
        if (const auto* v = t.find("M")) cfg.problem.M = as_int(*v, "M");
        if (const auto* v = t.find("anchor")) cfg.problem.anchor = as_point(*v, "anchor");
        if (const auto* v = t.find("coefficients")) {
            const auto c = as_numbers(*v, "coefficients");
            if (c.size() != 3) throw cfg_error(*v, "'coefficients' needs three values");
            cfg.problem.coefficients = {c[0], c[1], c[2]};
        }
        if (const auto* v = t.find("anchors")) {
            if (!v->is_array() || std::get<config::Array>(v->data).size() != 3)
                throw cfg_error(*v, "'anchors' needs three [xi, eta] points");
            const auto& arr = std::get<config::Array>(v->data);
            for (std::size_t s = 0; s < 3; ++s) cfg.problem.anchors[s] = as_point(arr[s], "anchors");
        }
    } else {
        throw ParseError("config needs a [problem] table", 0);
    }

    if (const auto it = doc.tables.find("quadrature"); it != doc.tables.end()) {
        reject_unknown(it->second, {"assembly", "error"}, "[quadrature]");
        if (const auto* v = it->second.find("assembly")) cfg.assembly_order = as_int(*v, "assembly");
        if (const auto* v = it->second.find("error")) cfg.error_order = as_int(*v, "error");
    }
    if (const auto it = doc.tables.find("solver"); it != doc.tables.end()) {
        reject_unknown(it->second, {"method", "threads"}, "[solver]");
        if (const auto* v = it->second.find("method")) {
            if (as_string(*v, "method") != "sparse_lu") throw cfg_error(*v, "unknown solver method");
        }
        if (const auto* v = it->second.find("threads")) {
            const int th = as_int(*v, "threads");
            if (th < 1) throw cfg_error(*v, "'threads' must be >= 1");
            cfg.threads = static_cast<unsigned>(th);
        }
    }
    if (const auto it = doc.tables.find("output"); it != doc.tables.end()) {
        const auto& t = it->second;
        reject_unknown(t, {"table", "field", "field_format", "resolution", "matrix", "record_timings"}, "[output]");
        if (const auto* v = t.find("table")) cfg.output.table = as_string(*v, "table");
        if (const auto* v = t.find("field")) cfg.output.field = as_string(*v, "field");
        if (const auto* v = t.find("field_format")) {
            const auto f = as_string(*v, "field_format");
            if (f == "csv")
                cfg.output.field_format = GridFormat::csv;
            else if (f == "vtk")
                cfg.output.field_format = GridFormat::vtk;
            else
                throw cfg_error(*v, "field_format must be csv or vtk");
        }
        if (const auto* v = t.find("resolution")) cfg.output.resolution = as_int(*v, "resolution");
        if (const auto* v = t.find("matrix")) cfg.output.matrix = as_string(*v, "matrix");
        if (const auto* v = t.find("record_timings")) cfg.output.record_timings = as_bool(*v, "record_timings");
    }

    if (const auto it = doc.table_arrays.find("level"); it != doc.table_arrays.end()) {
        for (const auto& t : it->second) {
            reject_unknown(t,
                           {"base", "uniform", "intervals_xi", "intervals_eta", "cluster_center", "cluster_knots",
                            "double_center", "double_xi", "double_eta"},
                           "[[level]]");
            LevelSpec lv;
            if (const auto* v = t.find("base")) {
                const auto b = as_string(*v, "base");
                if (b == "initial")
                    lv.from_initial = true;
                else if (b != "previous")
                    throw cfg_error(*v, "base must be \"initial\" or \"previous\"");
            }
            if (const auto* v = t.find("uniform")) lv.uniform = as_int(*v, "uniform");
            if (const auto* v = t.find("intervals_xi")) lv.intervals_xi = as_intervals(*v, "intervals_xi");
            if (const auto* v = t.find("intervals_eta")) lv.intervals_eta = as_intervals(*v, "intervals_eta");
            if (const auto* v = t.find("cluster_center")) lv.cluster_center = as_point(*v, "cluster_center");
            if (const auto* v = t.find("cluster_knots")) lv.cluster_knots = as_int(*v, "cluster_knots");
            if (const auto* v = t.find("double_center")) lv.double_center = as_bool(*v, "double_center");
            if (const auto* v = t.find("double_xi")) lv.double_xi = as_numbers(*v, "double_xi");
            if (const auto* v = t.find("double_eta")) lv.double_eta = as_numbers(*v, "double_eta");
            cfg.schedule.push_back(std::move(lv));
        }
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    return from_document(config::parse_file(path), path.parent_path().empty() ? "." : path.parent_path());
}

inline ControlNet make_domain(const DomainSpec& d) {
    if (d.builtin) return builtin_domain(*d.builtin, d.n, d.m);
    return load_net(d.file);
}

inline ProblemCase make_problem(const ProblemSpec& p, const ControlNet& net) {
    switch (p.id) {
        case ProblemId::poisson_oscillatory: return poisson_oscillatory();
        case ProblemId::quadratic_patch: return quadratic_patch();
        case ProblemId::poisson_exp_cones: return poisson_exp_cones(p.coefficients, p.anchors, net);
        case ProblemId::helmholtz_variable_frequency: return helmholtz_variable_frequency(p.M, p.anchor, net);
    }
    throw ValidationError("unknown problem id");
}

/// Apply one schedule entry to `net`.
inline ControlNet refine_level(const LevelSpec& lv, ControlNet net) {
    for (int k = 0; k < lv.uniform; ++k) net = apply_plan(uniform_midpoint_plan(net.space()), net);
    if (!lv.intervals_xi.empty() || !lv.intervals_eta.empty())
        net = apply_plan(interval_plan(net.space(), lv.intervals_xi, lv.intervals_eta), net);
    if (lv.cluster_center) net = apply_plan(cluster_plan(net.space(), *lv.cluster_center, lv.cluster_knots, lv.double_center), net);
    if (!lv.double_xi.empty() || !lv.double_eta.empty())
        net = apply_plan(double_knot_plan(net.space(), lv.double_xi, lv.double_eta), net);
    return net;
}

/// Dry-run checks: files, domain construction and injectivity, anchor ranges,
/// quadrature orders, schedule. Never throws.
inline std::vector<Diagnostic> validate(const ExperimentConfig& cfg) {
    std::vector<Diagnostic> out;
    auto add = [&](std::string s) { out.push_back({std::move(s)}); };
    auto in_open_square = [](Point2 p) { return p.x > 0.0 && p.x < 1.0 && p.y > 0.0 && p.y < 1.0; };

    if (cfg.schedule.empty()) add("schedule: at least one [[level]] is required");
    if (cfg.assembly_order < kMinQuadOrder || cfg.assembly_order > kMaxQuadOrder)
        add("quadrature: assembly order must be in 2..10");
    if (cfg.error_order < kMinQuadOrder || cfg.error_order > kMaxQuadOrder) add("quadrature: error order must be in 2..10");
    if (cfg.output.resolution < 2) add("output: resolution must be at least 2");

    const auto& p = cfg.problem;
    if (p.id == ProblemId::helmholtz_variable_frequency) {
        if (!in_open_square(p.anchor)) add("problem: anchor must lie in (0,1)^2");
        if (p.M < 1) add("problem: M must be >= 1");
    }
    if (p.id == ProblemId::poisson_exp_cones)
        for (const auto& a : p.anchors)
            if (!in_open_square(a)) add("problem: anchors must lie in (0,1)^2");
    for (std::size_t l = 0; l < cfg.schedule.size(); ++l) {
        const auto& lv = cfg.schedule[l];
        if (lv.uniform < 0) add("level " + std::to_string(l + 1) + ": uniform must be >= 0");
        if (lv.cluster_center && !in_open_square(*lv.cluster_center))
            add("level " + std::to_string(l + 1) + ": cluster_center must lie in (0,1)^2");
        if (lv.cluster_knots < 1) add("level " + std::to_string(l + 1) + ": cluster_knots must be >= 1");
    }

    if (!cfg.domain.builtin && !std::filesystem::exists(cfg.domain.file)) {
        add("domain: net file not found: " + cfg.domain.file.string());
        return out;
    }
    try {
        const ControlNet net = make_domain(cfg.domain);
        const auto rep = validate_injectivity(net, 3);
        if (!rep.pass)
            add("domain: det J <= 0 at (" + std::to_string(rep.at_xi) + ", " + std::to_string(rep.at_eta) + ")");
        if (out.empty()) (void)make_problem(p, net);
    } catch (const std::exception& e) {
        add(std::string("domain: ") + e.what());
    }
    return out;
}

struct LevelResult {
    std::size_t level = 0;
    std::size_t n = 0;
    std::size_t m = 0;
    double l2 = 0.0;
    double h1 = 0.0;
    double residual = 0.0;
    double assembly_time = 0.0;
    double solve_time = 0.0;
};

inline constexpr const char* kTableHeader = "level,n,m,N,L2,H1,assembly_time,solve_time";

inline std::string format_table(const std::vector<LevelResult>& rows) {
    std::ostringstream os;
    os << kTableHeader << '\n';
    for (const auto& r : rows)
        os << r.level << ',' << r.n << ',' << r.m << ',' << r.n * r.m << ',' << format_double17(r.l2) << ','
           << format_double17(r.h1) << ',' << format_double17(r.assembly_time) << ','
           << format_double17(r.solve_time) << '\n';
    return os.str();
}

/// Run every level; writes the convergence table (and optional exports) under
/// cfg.output_dir and returns the rows. Timing columns are 0 unless
/// output.record_timings is set, which keeps tables byte-reproducible.
inline std::vector<LevelResult> run(const ExperimentConfig& cfg, std::ostream* log = nullptr) {
    if (const auto diags = validate(cfg); !diags.empty()) {
        std::string msg = "invalid config:";
        for (const auto& d : diags) msg += "\n  " + d.message;
        throw ValidationError(msg);
    }
    using Clock = std::chrono::steady_clock;
    const ControlNet initial = make_domain(cfg.domain);
    const ProblemCase pc = make_problem(cfg.problem, initial);
    auto resolve = [&](const std::filesystem::path& p, std::size_t level) {
        const std::filesystem::path q = detail::substitute_level(p, level);
        return q.is_absolute() ? q : cfg.output_dir / q;
    };

    std::vector<LevelResult> rows;
    ControlNet net = initial;
    for (std::size_t l = 0; l < cfg.schedule.size(); ++l) {
        const auto& lv = cfg.schedule[l];
        net = refine_level(lv, lv.from_initial ? initial : net);
        const TensorSpace& space = net.space();

        const auto t0 = Clock::now();
        const LiftCoefficients lift = build_lift(space, net, pc.g);
        const AssembledSystem sys = assemble(space, net, pc, lift, {cfg.assembly_order, cfg.threads});
        const auto t1 = Clock::now();
        const SolveReport sol = solve(sys, cfg.method);
        const auto t2 = Clock::now();
        const SolutionField field = combine(space, lift, sol.alpha);
        const ErrorReport err = error_norms(field, pc, net, cfg.error_order);

        LevelResult r;
        r.level = l + 1;
        r.n = space.n();
        r.m = space.m();
        r.l2 = err.l2;
        r.h1 = err.h1;
        r.residual = sol.residual_norm;
        if (cfg.output.record_timings) {
            r.assembly_time = std::chrono::duration<double>(t1 - t0).count();
            r.solve_time = std::chrono::duration<double>(t2 - t1).count();
        }
        rows.push_back(r);
        if (log)
            *log << "level " << r.level << ": " << r.n << "x" << r.m << "  L2 " << format_double(r.l2) << "  H1 "
                 << format_double(r.h1) << "  residual " << format_double(r.residual) << '\n';

        const bool last = l + 1 == cfg.schedule.size();
        auto wants = [&](const std::filesystem::path& p) {
            return !p.empty() && (last || p.string().find("{level}") != std::string::npos);
        };
        if (wants(cfg.output.field))
            export_grid(field, pc, net, cfg.output.resolution, resolve(cfg.output.field, l + 1), cfg.output.field_format);
        if (wants(cfg.output.matrix)) write_matrix_market(sys.matrix, resolve(cfg.output.matrix, l + 1));
    }

    const auto table_path = resolve(cfg.output.table, rows.size());
    std::ofstream os(table_path, std::ios::binary);
    if (!os) throw Error("cannot write table " + table_path.string());
    os << format_table(rows);
    if (!os) throw Error("write failed for " + table_path.string());
    return rows;
}

} // namespace igahelm
