#include "fracstep/cli.hpp"

#include <CLI11.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "fracstep/config.hpp"
#include "fracstep/csv.hpp"
#include "fracstep/harness.hpp"
#include "fracstep/kernel.hpp"
#include "fracstep/special.hpp"
#include "fracstep/stability.hpp"
#include "fracstep/weights.hpp"

namespace fracstep {

namespace {

void emit(std::ostream& out, const std::string& path, const std::string& text) {
    if (path.empty()) {
        out << text;
    } else {
        csv::atomic_write(path, text);
    }
}

SchemeId scheme_from(int k, int i) {
    try {
        return make_scheme(k, i);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

Complex complex_flag(const std::string& text) {
    try {
        return parse_complex(text);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

std::string weights_csv(const WeightTable& table) {
    csv::Writer w({"n", "omega"});
    for (std::size_t n = 0; n <= table.n_max(); ++n) {
        w.cell(static_cast<long long>(n)).cell(table.omega(n));
        w.end_row();
    }
    w.section({"n", "j", "w"});
    for (std::size_t n = static_cast<std::size_t>(table.scheme().k); n <= table.n_max(); ++n) {
        const auto row = table.starting(n);
        for (std::size_t j = 0; j < row.size(); ++j) {
            w.cell(static_cast<long long>(n)).cell(static_cast<long long>(j)).cell(row[j]);
            w.end_row();
        }
    }
    return w.text();
}

std::string trajectory_csv(const SolveReport& report, const ProblemSpec& problem) {
    csv::Writer w({"n", "t", "u_re", "u_im", "exact_re", "exact_im", "abs_err"});
    const auto& traj = report.trajectory;
    for (std::size_t n = 0; n < traj.values.size(); ++n) {
        const double t = traj.grid.t(n);
        w.cell(static_cast<long long>(n)).cell(t);
        w.cell(traj.values[n].real()).cell(traj.values[n].imag());
        if (problem.has_exact()) {
            const Complex e = problem.exact(t);
            w.cell(e.real()).cell(e.imag()).cell(report.errors[n]);
        } else {
            w.empty().empty().empty();
        }
        w.end_row();
    }
    return w.text();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Solver and diagnostics for Caputo fractional initial value problems"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "Cap on worker threads for converge (0 = all cores)")
        ->check(CLI::Range(0u, 1024u));

    auto positive = CLI::PositiveNumber;
    auto open_unit = CLI::Range(std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0), "(0,1)");

    int k = 1, i = 1, q = 1, r = 1, degree = 2;
    double alpha = 0.5, beta = 1.0;
    std::size_t n_max = 0, terms = kDefaultLocusTerms, samples = kDefaultLocusSamples;
    std::string out_path, config_path, z_text;
    std::vector<std::size_t> m_list{32, 64, 128, 256, 512};
    bool dump_kernel = false;

    const std::string complex_help = "complex number written RE+IMi, RE-IMi, RE or IMi";

    auto* weights = app.add_subcommand("weights", "Write convolution and starting weights as CSV");
    weights->add_option("--k", k, "Interpolant degree k")->required()->check(CLI::Range(1, 3));
    weights->add_option("--i", i, "Shift pattern i, 1 <= i <= k")->required()->check(CLI::Range(1, 3));
    weights->add_option("--alpha", alpha, "Order alpha in (0,1)")->required()->check(open_unit);
    weights->add_option("--n", n_max, "Largest weight index N")->required()->check(CLI::Range(0, 10000000));
    weights->add_option("--out", out_path, "Output CSV (stdout if omitted)");
    weights->add_flag("--dump-kernel", dump_kernel, "Write I_{n,q}^r as n,value instead");
    weights->add_option("--q", q, "Kernel shift q (with --dump-kernel)")->check(CLI::Range(1, 3));
    weights->add_option("--r", r, "Kernel order r (with --dump-kernel)")->check(CLI::Range(1, 3));

    auto* solve_cmd = app.add_subcommand("solve", "Solve one problem and write its trajectory");
    solve_cmd->add_option("--config", config_path, "JSON run description")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--out", out_path, "Output CSV (stdout if omitted)");

    auto* converge = app.add_subcommand("converge", "Error table over schemes, alphas and grids");
    converge->add_option("--config", config_path, "JSON run description")->required()->check(CLI::ExistingFile);
    converge->add_option("--out", out_path, "Output CSV (stdout if omitted)");

    auto* trunc = app.add_subcommand("truncation", "Truncation error of t^degree under one scheme");
    trunc->add_option("--k", k, "Interpolant degree k")->required()->check(CLI::Range(1, 3));
    trunc->add_option("--i", i, "Shift pattern i")->required()->check(CLI::Range(1, 3));
    trunc->add_option("--alpha", alpha, "Order alpha in (0,1)")->required()->check(open_unit);
    trunc->add_option("--degree", degree, "Monomial degree")->required()->check(CLI::Range(1, 12));
    trunc->add_option("--M", m_list, "Grid sizes (default 32 64 128 256 512)")->expected(2, 64);
    trunc->add_option("--out", out_path, "Output CSV (stdout if omitted)");

    auto* locus = app.add_subcommand("locus", "Sample the truncated boundary locus");
    locus->add_option("--k", k, "Interpolant degree k")->required()->check(CLI::Range(1, 3));
    locus->add_option("--i", i, "Shift pattern i")->required()->check(CLI::Range(1, 3));
    locus->add_option("--alpha", alpha, "Order alpha in (0,1)")->required()->check(open_unit);
    locus->add_option("--terms", terms, "Series truncation N")->check(CLI::Range(1, 1000000));
    locus->add_option("--samples", samples, "Number of angles")->check(CLI::Range(16, 10000000));
    locus->add_option("--out", out_path, "Output CSV (stdout if omitted)");

    auto* member = app.add_subcommand("member", "Is z = lambda dt^alpha in the stability region?");
    member->add_option("--k", k, "Interpolant degree k")->required()->check(CLI::Range(1, 3));
    member->add_option("--i", i, "Shift pattern i")->required()->check(CLI::Range(1, 3));
    member->add_option("--alpha", alpha, "Order alpha in (0,1)")->required()->check(open_unit);
    member->add_option("--z", z_text, complex_help)->required();
    member->add_option("--terms", terms, "Series truncation N")->check(CLI::Range(1, 1000000));
    member->add_option("--samples", samples, "Initial number of angles")->check(CLI::Range(16, 10000000));

    auto* mlf = app.add_subcommand("mlf", "Evaluate E_{alpha,beta}(z), printed as re,im");
    mlf->add_option("--alpha", alpha, "alpha in (0,2]")->required()->check(CLI::Range(std::nextafter(0.0, 1.0), 2.0));
    mlf->add_option("--beta", beta, "beta > 0")->required()->check(positive);
    mlf->add_option("--z", z_text, complex_help)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 1;
    }

    try {
        if (weights->parsed()) {
            const SchemeId s = scheme_from(k, i);
            if (dump_kernel) {
                if (weights->count("--q") + weights->count("--r") != 2) {
                    throw ConfigError("--dump-kernel needs --q and --r");
                }
                const auto table = kernel_table(alpha, q, r, n_max);
                csv::Writer w({"n", "value"});
                for (std::size_t n = 0; n <= n_max; ++n) {
                    w.cell(static_cast<long long>(n)).cell(table.values()[n]);
                    w.end_row();
                }
                emit(out, out_path, w.text());
            } else {
                emit(out, out_path, weights_csv(weight_table(s, alpha, n_max)));
            }
        } else if (solve_cmd->parsed()) {
            const RunConfig cfg = load_config(config_path);
            if (cfg.alphas.size() != 1 || cfg.schemes.size() != 1 || !cfg.single_M) {
                throw ConfigError("solve needs a single alpha, a single scheme and grid.M");
            }
            const ProblemSpec problem = cfg.build_problem(cfg.alphas[0]);
            SolveOptions opts;
            opts.starting = cfg.start_mode();
            opts.newton = cfg.newton;
            const auto report =
                solve(problem, cfg.schemes[0], GridSpec::make(cfg.T, cfg.M_list[0]), opts);
            emit(out, out_path, trajectory_csv(report, problem));
            if (report.blowup) {
                err << "warning: |u_n| exceeded 1e30 at step " << *report.blowup_step
                    << "; trajectory truncated\n";
            }
        } else if (converge->parsed()) {
            const RunConfig cfg = load_config(config_path);
            ConvergenceSetup setup;
            setup.schemes = cfg.schemes;
            setup.alphas = cfg.alphas;
            setup.M_list = cfg.M_list;
            setup.T = cfg.T;
            setup.options.starting = cfg.start_mode();
            setup.options.newton = cfg.newton;
            setup.threads = threads;
            const auto rows =
                run_convergence([&cfg](double a) { return cfg.build_problem(a); }, setup);
            emit(out, out_path, convergence_csv(rows));
        } else if (trunc->parsed()) {
            const SchemeId s = scheme_from(k, i);
            const auto study = run_truncation_study(s, alpha, degree, m_list);
            csv::Writer w({"M", "max_tau", "head_tau", "tail_tau"});
            for (const auto& smp : study.samples) {
                w.cell(static_cast<long long>(smp.M)).cell(smp.max_tau).cell(smp.head_tau).cell(smp.tail_tau);
                w.end_row();
            }
            emit(out, out_path, w.text());
            err << "order " << csv::format(study.order) << " head " << csv::format(study.head_order)
                << " tail " << csv::format(study.tail_order) << "\n";
        } else if (locus->parsed()) {
            const auto curve = boundary_locus(scheme_from(k, i), alpha, terms, samples);
            csv::Writer w({"theta", "re", "im"});
            for (std::size_t m = 0; m < curve.points.size(); ++m) {
                w.cell(curve.thetas[m]).cell(curve.points[m].real()).cell(curve.points[m].imag());
                w.end_row();
            }
            emit(out, out_path, w.text());
        } else if (member->parsed()) {
            const SchemeId s = scheme_from(k, i);
            const Complex z = complex_flag(z_text);
            const auto res = in_stability_region(s, alpha, z, terms, samples);
            out << to_string(res.verdict) << "," << csv::format(res.margin) << "\n";
            if (res.verdict == Verdict::Boundary) {
                err << "error: z is within sampling resolution of the locus; refine --samples\n";
                return 2;
            }
        } else if (mlf->parsed()) {
            const Complex z = complex_flag(z_text);
            const Complex v = mittag_leffler(alpha, beta, z);
            out << csv::format(v.real()) << "," << csv::format(v.imag()) << "\n";
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const NewtonDiverged& e) {
        err << "error: newton_diverged step=" << e.step() << " residual=" << csv::format(e.residual())
            << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace fracstep
