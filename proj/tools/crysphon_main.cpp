// Command-line front end: space-group analysis, bundle holonomy reports,
// dispersion sweeps, and wave simulation from a YAML config or a built-in
// fixture.
//
// Exit codes: 0 success, 1 usage/schema error, 2 domain validation error,
// 3 numerical instability refusal.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "crysphon/config.hpp"
#include "crysphon/dispersion.hpp"
#include "crysphon/fixtures.hpp"
#include "crysphon/section.hpp"
#include "crysphon/wave.hpp"

namespace {

using namespace crysphon;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitUnstable = 3;

struct CommonOpts {
    std::string config_path;
    std::string fixture_name;
    std::string out_path;
};

CrystalConfig load_config(const CommonOpts& opts) {
    if (!opts.fixture_name.empty()) return fixture(opts.fixture_name);
    if (opts.config_path.empty())
        throw config_error("no input: pass --config <path> or --fixture <name>");
    std::ifstream in(opts.config_path);
    if (!in) throw config_error("cannot open config file: " + opts.config_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::string rat_vec_str(const RatVec& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += to_string(v[i]);
    }
    return out + ")";
}

std::string int_vec_str(const IntVec& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += v[i].str();
    }
    return out + ")";
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open output file: " + path);
    out << text;
}

int cmd_analyze(const CommonOpts& opts) {
    CrystalConfig cfg = load_config(opts);
    SpaceGroup sg = build_space_group(cfg);
    std::cout << "group order: " << sg.order() << "\n";

    bool any_nonzero = false;
    std::ostringstream table;
    for (std::size_t p = 0; p < sg.order(); ++p)
        for (std::size_t q = 0; q < sg.order(); ++q) {
            IntVec c = sg.cocycle(p, q);
            bool zero = true;
            for (const auto& x : c) zero = zero && x == 0;
            if (!zero) {
                any_nonzero = true;
                table << "  c(" << p << "," << q << ") = " << int_vec_str(c) << "\n";
            }
        }
    if (any_nonzero)
        std::cout << "cocycle table (nonzero entries):\n" << table.str();
    else
        std::cout << "cocycle table: all zero\n";

    auto identity_report = sg.verify_cocycle_identity();
    std::cout << "cocycle identity: "
              << (identity_report.ok ? "holds for all triples" : "VIOLATED") << "\n";
    for (auto [p, q, r] : identity_report.violations)
        std::cout << "  violated at (" << p << "," << q << "," << r << ")\n";

    auto verdict = sg.is_symmorphic();
    if (verdict.symmorphic)
        std::cout << "symmorphic: yes, origin shift t = " << rat_vec_str(*verdict.origin_shift)
                  << "\n";
    else
        std::cout << "symmorphic: no\n";
    return identity_report.ok ? kExitOk : kExitDomain;
}

int cmd_holonomy(const CommonOpts& opts) {
    CrystalConfig cfg = load_config(opts);
    SpaceGroup sg = build_space_group(cfg);
    FlatBundle bundle = build_bundle(cfg, sg);

    auto validation = bundle.validate();
    std::cout << "bundle validation: " << (validation.ok() ? "ok" : "FAILED") << "\n";
    for (auto [e, rev] : validation.inverse_violations)
        std::cout << "  edges " << e << " and " << rev << " are not inverse\n";
    for (auto t : validation.triangle_violations)
        std::cout << "  triangle " << t << " violates the cocycle condition\n";
    if (!validation.ok()) return kExitDomain;

    auto basis = bundle.loop_basis(0);
    std::cout << "loop basis size: " << basis.size() << "\n";
    for (std::size_t i = 0; i < basis.size(); ++i) {
        std::size_t h = bundle.holonomy_element(basis[i]);
        std::cout << "holonomy generator " << i << ": element " << h << ", shift "
                  << rat_vec_str(sg.translation(h)) << "\n";
    }

    auto fixed = bundle.equilibrium_sections(0);
    if (fixed.empty) {
        std::cout << "equilibrium sections: none (holonomy has no fixed point)\n";
    } else if (fixed.dimension == 0) {
        std::cout << "equilibrium sections: " << fixed.representatives.size()
                  << " isolated fixed point(s):\n";
        for (const auto& v : fixed.representatives)
            std::cout << "  " << rat_vec_str(v.coords) << "\n";
    } else {
        std::cout << "equilibrium sections: subtorus of dimension " << fixed.dimension
                  << " through:\n";
        for (const auto& v : fixed.representatives)
            std::cout << "  " << rat_vec_str(v.coords) << "\n";
    }

    if (cfg.bundle && cfg.bundle->section) {
        if (fixed.empty) {
            std::cout << "section check skipped: no equilibrium section exists\n";
        } else {
            const auto& sc = *cfg.bundle->section;
            SectionField s = build_compatible_section(bundle, fixed.representatives.front(),
                                                      sc.samples, sc.overlap, sc.amplitude);
            auto gluing = check_section_gluing(bundle, s, 1e-12);
            auto deriv = check_derivative_gluing(bundle, covariant_differential(s), 1e-10);
            std::cout << "section gluing: " << (gluing.pass ? "pass" : "FAIL")
                      << ", max residual " << gluing.max_residual << "\n";
            std::cout << "derivative gluing: " << (deriv.pass ? "pass" : "FAIL")
                      << ", central residual " << deriv.max_residual_central
                      << ", one-sided allowance " << deriv.max_residual_onesided << "\n";

            std::ostringstream csv;
            csv << "edge,from,to,element,section_residual,lambda,shift,lambda_constant,"
                   "ambiguous,deriv_central,deriv_onesided\n";
            for (std::size_t e = 0; e < gluing.edges.size(); ++e) {
                const auto& ge = gluing.edges[e];
                const auto& de = deriv.edges[e];
                const Edge& edge = bundle.base().edges()[ge.edge];
                csv << ge.edge << ',' << edge.from << ',' << edge.to << ','
                    << bundle.transition(ge.edge) << ',' << detail::format_double(ge.residual)
                    << ',';
                for (std::size_t i = 0; i < ge.lambda.size(); ++i) {
                    if (i) csv << ';';
                    csv << ge.lambda[i];
                }
                csv << ',';
                for (std::size_t i = 0; i < ge.shift.size(); ++i) {
                    if (i) csv << ';';
                    csv << to_string(ge.shift[i]);
                }
                csv << ',' << (ge.lambda_constant ? 1 : 0) << ',' << (ge.ambiguous ? 1 : 0) << ','
                    << detail::format_double(de.residual_central) << ','
                    << detail::format_double(de.residual_onesided) << "\n";
            }
            if (!opts.out_path.empty()) write_output(opts.out_path, csv.str());
            if (!gluing.pass || !deriv.pass) return kExitDomain;
        }
    }
    return kExitOk;
}

std::pair<Eigen::MatrixXd, ElasticTensor> build_elasticity(const CrystalConfig& cfg) {
    if (!cfg.elasticity) throw config_error("elasticity: section missing from config");
    const auto& ec = *cfg.elasticity;
    switch (ec.model) {
        case ElasticModel::isotropic:
            return assemble_isotropic({ec.lambda, ec.mu, ec.density}, cfg.dim);
        case ElasticModel::cubic: {
            if (cfg.dim != 3) throw config_error("elasticity.model: cubic requires dim = 3");
            return assemble_cubic({ec.c11, ec.c12, ec.c44, ec.density});
        }
        case ElasticModel::full_tensor: {
            ElasticTensor c(cfg.dim, false);
            std::size_t idx = 0;
            for (std::size_t a = 0; a < cfg.dim; ++a)
                for (std::size_t b = 0; b < cfg.dim; ++b)
                    for (std::size_t i = 0; i < cfg.dim; ++i)
                        for (std::size_t j = 0; j < cfg.dim; ++j) c(a, b, i, j) = ec.tensor[idx++];
            if (c.major_asymmetry() > 1e-12 * std::max(1.0, c.max_abs()))
                throw validation_error("elasticity.tensor: major symmetry violated");
            if (c.minor_asymmetry() < 1e-12 * std::max(1.0, c.max_abs())) c.set_objective(true);
            Eigen::MatrixXd rho =
                ec.density * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(cfg.dim),
                                                       static_cast<Eigen::Index>(cfg.dim));
            return {rho, c};
        }
    }
    throw config_error("elasticity.model: unknown");
}

int cmd_dispersion(const CommonOpts& opts, std::optional<std::size_t> samples_override,
                   bool project, bool allow_unstable) {
    CrystalConfig cfg = load_config(opts);
    if (!cfg.kpath) throw config_error("kpath: section missing from config");
    auto [rho, c] = build_elasticity(cfg);
    if (project) {
        SpaceGroup sg = build_space_group(cfg);
        auto reps = sg.cartesian_representation();
        c = project_invariant(c, reps);
        rho = project_invariant_density(rho, reps);
    }
    std::vector<Eigen::VectorXd> waypoints;
    for (const auto& w : cfg.kpath->waypoints) {
        Eigen::VectorXd k(static_cast<Eigen::Index>(w.size()));
        for (std::size_t i = 0; i < w.size(); ++i) k(static_cast<Eigen::Index>(i)) = w[i];
        waypoints.push_back(std::move(k));
    }
    std::size_t samples = samples_override.value_or(cfg.kpath->samples_per_segment);
    auto rows = kpath_sweep(rho, c, waypoints, samples);
    std::ostringstream csv;
    write_dispersion_csv(csv, rows, cfg.dim);
    write_output(opts.out_path, csv.str());
    bool unstable = false;
    for (const auto& row : rows) unstable = unstable || row.unstable;
    if (unstable && !allow_unstable) {
        std::cerr << "unstable: negative Christoffel eigenvalues on the path "
                     "(re-run with --allow-unstable to keep the table)\n";
        return kExitUnstable;
    }
    return kExitOk;
}

int cmd_simulate(const CommonOpts& opts, std::optional<std::size_t> samples_override,
                 std::optional<double> cfl_override) {
    CrystalConfig cfg = load_config(opts);
    if (!cfg.simulation) throw config_error("simulation: section missing from config");
    auto [rho, c] = build_elasticity(cfg);
    const auto& sc = *cfg.simulation;
    Eigen::VectorXd dir(static_cast<Eigen::Index>(sc.direction.size()));
    for (std::size_t i = 0; i < sc.direction.size(); ++i)
        dir(static_cast<Eigen::Index>(i)) = sc.direction[i];

    std::size_t n = samples_override.value_or(sc.samples);
    double cfl = cfl_override.value_or(sc.cfl);
    WaveState initial = single_mode_state(rho, c, dir, n, sc.mode, sc.branch, sc.amplitude);
    double dt = cfl * initial.h / max_sound_speed(rho, c, dir);
    WaveSummary summary = simulate_wave(rho, c, initial, dt, sc.steps, 0.5, sc.mode);

    std::cout << "grid: " << n << " points, dt = " << dt << ", steps = " << sc.steps << "\n";
    std::cout << "energy drift (relative): " << summary.energy_drift << "\n";
    for (const auto& mode : summary.modes) {
        std::cout << "branch " << mode.branch << ": predicted omega = " << mode.predicted_omega;
        if (mode.excited)
            std::cout << ", observed omega = " << mode.observed_omega << " (relative error "
                      << std::abs(mode.observed_omega - mode.predicted_omega) /
                             std::max(mode.predicted_omega, 1e-300)
                      << ")";
        else
            std::cout << ", not excited";
        std::cout << "\n";
    }
    std::ostringstream csv;
    write_energy_csv(csv, summary.energy);
    if (!opts.out_path.empty()) write_output(opts.out_path, csv.str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"crystallographic symmetry, flat torus bundles, and acoustic phonons"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::optional<std::size_t> samples_override;
    std::optional<double> cfl_override;
    bool project_invariant_flag = false;
    bool allow_unstable = false;
    std::string dump_name;

    auto add_common = [&](CLI::App* cmd, bool with_out = true) {
        cmd->add_option("--config", opts.config_path, "YAML config path");
        cmd->add_option("--fixture", opts.fixture_name, "built-in fixture name");
        if (with_out) cmd->add_option("--out", opts.out_path, "output CSV path");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "space-group report");
    add_common(analyze, false);

    CLI::App* holonomy = app.add_subcommand("holonomy", "bundle and gluing report");
    add_common(holonomy);

    CLI::App* disp = app.add_subcommand("dispersion", "k-path dispersion table");
    add_common(disp);
    disp->add_option_function<std::size_t>(
        "--samples", [&](std::size_t v) { samples_override = v; }, "samples per path segment");
    disp->add_flag("--project-invariant", project_invariant_flag,
                   "project tensors onto the point-group-invariant subspace first");
    disp->add_flag("--allow-unstable", allow_unstable,
                   "emit the table even when negative eigenvalues appear");

    CLI::App* sim = app.add_subcommand("simulate", "leapfrog wave run with energy series");
    add_common(sim);
    sim->add_option_function<std::size_t>(
        "--samples", [&](std::size_t v) { samples_override = v; }, "grid points");
    sim->add_option_function<double>(
        "--cfl", [&](double v) { cfl_override = v; }, "CFL factor for the time step");

    CLI::App* fixtures_cmd = app.add_subcommand("fixtures", "built-in configurations");
    CLI::App* fixtures_list = fixtures_cmd->add_subcommand("list", "list fixture names");
    CLI::App* fixtures_dump = fixtures_cmd->add_subcommand("dump", "print a fixture config");
    fixtures_dump->add_option("name", dump_name, "fixture name")->required();
    fixtures_cmd->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(opts);
        if (holonomy->parsed()) return cmd_holonomy(opts);
        if (disp->parsed())
            return cmd_dispersion(opts, samples_override, project_invariant_flag, allow_unstable);
        if (sim->parsed()) return cmd_simulate(opts, samples_override, cfl_override);
        if (fixtures_cmd->parsed()) {
            if (fixtures_list->parsed()) {
                for (const auto& name : fixture_names()) std::cout << name << "\n";
                return kExitOk;
            }
            if (fixtures_dump->parsed()) {
                std::cout << emit_config(fixture(dump_name));
                return kExitOk;
            }
        }
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const stability_error& e) {
        std::cerr << "stability refusal: " << e.what() << "\n";
        return kExitUnstable;
    } catch (const validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitUsage;
}
