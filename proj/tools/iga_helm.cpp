#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "igahelm.hpp"

namespace {

// IGA_HELM_LOG: 0 = quiet, 1 = per-level summary (default), 2 = also echo config details.
int log_level() {
    const char* env = std::getenv("IGA_HELM_LOG");
    if (!env || !*env) return 1;
    try {
        return std::stoi(env);
    } catch (...) {
        return 1;
    }
}

void report(const std::exception& e) {
    std::cerr << "error: " << e.what();
    if (const auto* pe = dynamic_cast<const igahelm::ParseError*>(&e); pe && pe->line() > 0)
        std::cerr << " (line " << pe->line() << ")";
    if (const auto* ge = dynamic_cast<const igahelm::GeometryError*>(&e))
        std::cerr << " at (xi, eta) = (" << ge->xi() << ", " << ge->eta() << ")";
    if (const auto* se = dynamic_cast<const igahelm::SolverError*>(&e))
        std::cerr << " [residual " << se->residual() << "]";
    std::cerr << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Isogeometric Galerkin solver for the Helmholtz equation with Dirichlet data"};
    app.require_subcommand(1);
    app.fallthrough();

    unsigned threads = 0;
    int quad_order = 0;
    std::string output_dir;
    app.add_option("--threads", threads, "Assembly threads (overrides the config)")->check(CLI::PositiveNumber);
    app.add_option("--quad-order", quad_order, "Assembly quadrature order (overrides the config)")
        ->check(CLI::Range(igahelm::kMinQuadOrder, igahelm::kMaxQuadOrder));
    app.add_option("--output-dir", output_dir, "Directory for tables and exports");

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run an experiment config");
    run->add_option("config", config_path, "Experiment config file")->required();

    auto* validate = app.add_subcommand("validate", "Check an experiment config without solving");
    validate->add_option("config", config_path, "Experiment config file")->required();

    std::string domain_name, net_path;
    std::size_t n = 0, m = 0;
    auto* export_domain = app.add_subcommand("export-domain", "Write a built-in domain's control net");
    export_domain->add_option("name", domain_name, "unit_square | stretched_annulus_patch | puzzle_like")->required();
    export_domain->add_option("n", n, "Basis count in xi")->required();
    export_domain->add_option("m", m, "Basis count in eta")->required();
    export_domain->add_option("path", net_path, "Output file")->required();

    CLI11_PARSE(app, argc, argv);
    const int verbosity = log_level();

    try {
        if (*export_domain) {
            const auto which = igahelm::parse_builtin_domain(domain_name);
            if (!which) throw igahelm::ValidationError("unknown domain '" + domain_name + "'");
            igahelm::save_net(igahelm::builtin_domain(*which, n, m), net_path);
            return 0;
        }

        auto cfg = igahelm::load_config(config_path);
        if (threads > 0) cfg.threads = threads;
        if (quad_order > 0) cfg.assembly_order = quad_order;
        if (!output_dir.empty()) cfg.output_dir = output_dir;

        if (*validate) {
            const auto diags = igahelm::validate(cfg);
            for (const auto& d : diags) std::cerr << "diagnostic: " << d.message << '\n';
            if (diags.empty() && verbosity > 0) std::cout << "ok\n";
            return diags.empty() ? 0 : 2;
        }

        if (verbosity > 1)
            std::cerr << "levels: " << cfg.schedule.size() << ", threads: " << cfg.threads
                      << ", assembly order: " << cfg.assembly_order << '\n';
        std::filesystem::create_directories(cfg.output_dir);
        igahelm::run(cfg, verbosity > 0 ? &std::cout : nullptr);
        return 0;
    } catch (const std::exception& e) {
        report(e);
        return 1;
    }
}
