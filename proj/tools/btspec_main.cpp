// btspec: spectral toolkit for the Bloch-Torrey operator -Lap + igx on
// periodically perforated planar domains. Subcommands cover single-fiber
// monodromy spectra, q-sweeps, truncated-strip cross-checks, eigenfunction
// reconstruction, pseudospectra sampling and the large-g Airy report.

#include <CLI11.hpp>
#include <json.hpp>

#include "btspec/io.hpp"
#include "btspec/parallel.hpp"
#include "btspec/rng.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <optional>

using namespace btspec;
using nlohmann::json;

namespace {

constexpr int EXIT_BAD_CONFIG = 2;
constexpr int EXIT_NUMERICAL = 3;
constexpr int EXIT_VALIDATION = 4;

struct CliOverrides {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    bool plots = false;
};

RunConfig load_config(const CliOverrides& cli) {
    RunConfig cfg = parse_config_file(cli.config_path);
    if (!cli.out_dir.empty()) cfg.out_dir = cli.out_dir;
    if (cli.seed) {
        cfg.seed = *cli.seed;
        cfg.resolved["seed"] = std::to_string(*cli.seed);
    }
    if (cli.threads) cfg.threads = *cli.threads;
    if (cli.plots) cfg.plots = true;
    std::filesystem::create_directories(cfg.out_dir);
    return cfg;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json branch_counts(const SpectrumResult& spec) {
    return json{{"detected", spec.detected},
                {"count", spec.values.size()},
                {"monodromy_applications", spec.matvecs}};
}

int cmd_spectrum(const CliOverrides& cli) {
    RunConfig cfg = load_config(cli);
    auto t0 = std::chrono::steady_clock::now();
    SpectrumResult spec = monodromy_spectrum(cfg.problem());
    write_text_file(cfg.out_dir + "/spectrum.csv", spectrum_csv(cfg, spec.values));
    if (cfg.plots)
        write_text_file(cfg.out_dir + "/spectrum.svg", spectral_curves_svg(spec.values));
    write_text_file(cfg.out_dir + "/summary.json",
                    summary_json(cfg, "spectrum", branch_counts(spec).dump(), seconds_since(t0)));
    if (!spec.detected) {
        std::fprintf(stderr, "spectrum: no Ritz pair converged (spectrum not detected)\n");
        return EXIT_NUMERICAL;
    }
    std::printf("spectrum: %zu branch values -> %s/spectrum.csv\n", spec.values.size(),
                cfg.out_dir.c_str());
    return 0;
}

int cmd_sweep(const CliOverrides& cli) {
    RunConfig cfg = load_config(cli);
    auto t0 = std::chrono::steady_clock::now();
    std::vector<double> qs = cfg.sweep_q_list();
    SweepResult sweep = sweep_q(cfg.problem(), qs, cfg.effective_threads());

    std::vector<BranchEigenvalue> all;
    json per_q = json::array();
    int matched = 0;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        const auto& branch = sweep.branches[i];
        all.insert(all.end(), branch.values.begin(), branch.values.end());
        per_q.push_back(json{{"q", qs[i]},
                             {"count", branch.values.size()},
                             {"error", sweep.failures[i]}});
    }
    for (const auto& stage : sweep.matches) matched += static_cast<int>(stage.size());

    write_text_file(cfg.out_dir + "/spectrum.csv", spectrum_csv(cfg, all));
    if (cfg.plots) write_text_file(cfg.out_dir + "/curves.svg", spectral_curves_svg(all));
    json payload{{"parameters", qs.size()},
                 {"branches", all.size()},
                 {"continuation_matches", matched},
                 {"per_q", per_q}};
    write_text_file(cfg.out_dir + "/summary.json",
                    summary_json(cfg, "sweep", payload.dump(), seconds_since(t0)));
    std::printf("sweep: %zu q points, %zu branch values -> %s/spectrum.csv\n", qs.size(),
                all.size(), cfg.out_dir.c_str());
    return 0;
}

int cmd_strip(const CliOverrides& cli) {
    RunConfig cfg = load_config(cli);
    auto t0 = std::chrono::steady_clock::now();
    StripConfig sc = cfg.strip();
    SpectrumResult spec = strip_spectrum(sc);

    // automatic L vs L+2 sensitivity probe on the dominant branch
    double sensitivity = -1.0;
    if (spec.detected) {
        StripConfig wide = sc;
        wide.L = sc.L + 2;
        SpectrumResult check = strip_spectrum(wide);
        if (check.detected) {
            sensitivity = 1e300;
            for (const auto& v : check.values)
                sensitivity = std::min(sensitivity,
                                       band_distance(spec.values.front().lambda, v.lambda, cfg.g));
        }
    }

    write_text_file(cfg.out_dir + "/spectrum.csv", spectrum_csv(cfg, spec.values));
    json payload = branch_counts(spec);
    payload["L"] = sc.L;
    payload["L_sensitivity"] = sensitivity;
    write_text_file(cfg.out_dir + "/summary.json",
                    summary_json(cfg, "strip", payload.dump(), seconds_since(t0)));
    if (!spec.detected) {
        std::fprintf(stderr, "strip: no Ritz pair converged\n");
        return EXIT_NUMERICAL;
    }
    std::printf("strip: %zu branch values (L sensitivity %.3e) -> %s/spectrum.csv\n",
                spec.values.size(), sensitivity, cfg.out_dir.c_str());
    return 0;
}

int cmd_crosscheck(const CliOverrides& cli) {
    RunConfig cfg = load_config(cli);
    auto t0 = std::chrono::steady_clock::now();
    SpectrumResult mono = monodromy_spectrum(cfg.problem());
    SpectrumResult strip = strip_spectrum(cfg.strip());
    if (!mono.detected || !strip.detected) {
        std::fprintf(stderr, "crosscheck: a branch set is empty (mono=%d strip=%d)\n",
                     static_cast<int>(mono.detected), static_cast<int>(strip.detected));
        return EXIT_NUMERICAL;
    }

    const cdouble lam1 = mono.values.front().lambda;
    const double tol = 0.05 * std::abs(lam1);
    PseudoInvarianceReport report = pseudo_invariance_check(mono.values, strip.values, cfg.g, tol);

    // the acceptance-style statistic: dominant monodromy value against the
    // nearest strip branch, modulo ig
    double dominant_match = 1e300;
    for (const auto& v : strip.values)
        dominant_match = std::min(dominant_match, band_distance(lam1, v.lambda, cfg.g));

    std::vector<BranchEigenvalue> all = mono.values;
    all.insert(all.end(), strip.values.begin(), strip.values.end());
    write_text_file(cfg.out_dir + "/spectrum.csv", spectrum_csv(cfg, all));

    json pairs = json::array();
    for (const auto& p : report.pairs)
        pairs.push_back(json{{"strip_index", p.strip_index},
                             {"mono_index", p.mono_index},
                             {"mismatch", p.mismatch}});
    json payload{{"dominant_lambda_re", lam1.real()},
                 {"dominant_lambda_im", lam1.imag()},
                 {"dominant_match", dominant_match},
                 {"dominant_match_rel", dominant_match / std::abs(lam1)},
                 {"max_mismatch", report.max_mismatch},
                 {"tolerance", tol},
                 {"pairs", pairs}};
    write_text_file(cfg.out_dir + "/summary.json",
                    summary_json(cfg, "crosscheck", payload.dump(), seconds_since(t0)));
    std::printf("crosscheck: dominant match %.3e (%.2f%% of |lambda1|) -> %s/summary.json\n",
                dominant_match, 100.0 * dominant_match / std::abs(lam1), cfg.out_dir.c_str());
    return 0;
}

int cmd_reconstruct(const CliOverrides& cli) {
    RunConfig cfg = load_config(cli);
    if (cfg.p0 != 0.0) throw ConfigError("reconstruct: p0 must be 0");
    auto t0 = std::chrono::steady_clock::now();
    SpectrumResult mono = monodromy_spectrum(cfg.problem());
    if (!mono.detected) {
        std::fprintf(stderr, "reconstruct: no converged monodromy pair\n");
        return EXIT_NUMERICAL;
    }
    ReconstructResult rec = reconstruct_eigenfunction(
        cfg.problem(), mono.values.front().mu, mono.vectors.front(), cfg.L,
        std::max(1e-6, 100.0 * cfg.arnoldi_tol));

    write_text_file(cfg.out_dir + "/eigenfunction.csv", eigenfunction_csv(cfg, rec));
    json payload{{"lambda0_re", rec.lambda0.real()},
                 {"lambda0_im", rec.lambda0.imag()},
                 {"windowed_residual", rec.residual},
                 {"localization_x2", rec.localization},
                 {"translate_pairing_abs", std::abs(rec.translate_pairing)},
                 {"strip_L", rec.strip_L}};
    write_text_file(cfg.out_dir + "/summary.json",
                    summary_json(cfg, "reconstruct", payload.dump(), seconds_since(t0)));
    std::printf("reconstruct: residual %.3e, localization %.3f -> %s/eigenfunction.csv\n",
                rec.residual, rec.localization, cfg.out_dir.c_str());
    return 0;
}

int cmd_pseudospectra(const CliOverrides& cli) {
    RunConfig cfg = load_config(cli);
    if (!(cfg.z_re_max >= cfg.z_re_min) || !(cfg.z_im_max >= cfg.z_im_min))
        throw ConfigError("pseudospectra: z window is empty");
    auto t0 = std::chrono::steady_clock::now();

    CellGrid grid = build_strip_grid(cfg.N, cfg.L, cfg.hole_shape());
    SparseMatrix A = assemble_strip_bt(grid, cfg.g, cfg.q);

    std::vector<cdouble> zs;
    for (int j = 0; j < cfg.z_nim; ++j)
        for (int i = 0; i < cfg.z_nre; ++i) {
            double re = cfg.z_nre == 1 ? cfg.z_re_min
                                       : cfg.z_re_min + (cfg.z_re_max - cfg.z_re_min) * i /
                                             (cfg.z_nre - 1);
            double im = cfg.z_nim == 1 ? cfg.z_im_min
                                       : cfg.z_im_min + (cfg.z_im_max - cfg.z_im_min) * j /
                                             (cfg.z_nim - 1);
            zs.emplace_back(re, im);
        }

    PseudospectraOptions opts;
    opts.seed = cfg.seed;
    opts.solver = SolveOptions{std::max(cfg.solver_tol, 1e-10), cfg.solver_maxit, 50, 50};
    opts.threads = cfg.effective_threads();
    PseudospectraGrid result = pseudospectra_grid(A, zs, opts);

    int converged = 0;
    for (char c : result.converged) converged += c;
    write_text_file(cfg.out_dir + "/pseudospectra.csv", pseudospectra_csv(cfg, result));
    if (cfg.plots)
        write_text_file(cfg.out_dir + "/pseudospectra.svg",
                        pseudospectra_svg(result, cfg.z_nre, cfg.z_nim));
    json payload{{"points", zs.size()}, {"converged", converged}};
    write_text_file(cfg.out_dir + "/summary.json",
                    summary_json(cfg, "pseudospectra", payload.dump(), seconds_since(t0)));
    std::printf("pseudospectra: %d/%zu points converged -> %s/pseudospectra.csv\n", converged,
                zs.size(), cfg.out_dir.c_str());
    return 0;
}

int cmd_asymptotics(const CliOverrides& cli) {
    RunConfig cfg = load_config(cli);
    if (cfg.g_values.size() < 3)
        throw ConfigError("asymptotics: g_values needs at least 3 ascending entries");
    auto t0 = std::chrono::steady_clock::now();

    std::vector<ProblemConfig> configs;
    for (std::size_t i = 0; i < cfg.g_values.size(); ++i) {
        ProblemConfig p = cfg.problem();
        p.g = cfg.g_values[i];
        if (!cfg.N_values.empty()) p.N = static_cast<int>(cfg.N_values[i]);
        p.s = cfg.s_values.empty() || cfg.s_values[i] == 0.0
                  ? cfg.effective_s(p.g)
                  : static_cast<int>(cfg.s_values[i]);
        configs.push_back(p);
    }
    AsymptoticReport report = asymptotic_report(configs, cfg.effective_threads());

    write_text_file(cfg.out_dir + "/asymptotics.csv", asymptotics_csv(cfg, report));
    json rows = json::array();
    for (const auto& row : report.rows)
        rows.push_back(json{{"g", row.g},
                            {"missing", row.missing},
                            {"re_scaled", row.re_scaled},
                            {"im_scaled", row.im_scaled}});
    json payload{{"target_re", report.target_re},
                 {"target_im", report.target_im},
                 {"fit_exponent", report.fit.exponent},
                 {"fit_prefactor", report.fit.prefactor},
                 {"fit_rms", report.fit.rms},
                 {"rows", rows}};
    write_text_file(cfg.out_dir + "/summary.json",
                    summary_json(cfg, "asymptotics", payload.dump(), seconds_since(t0)));
    std::printf("asymptotics: fit exponent %.4f (target 2/3) -> %s/asymptotics.csv\n",
                report.fit.exponent, cfg.out_dir.c_str());
    return 0;
}

int cmd_validate(const CliOverrides& cli) {
    RunConfig cfg = load_config(cli);
    auto t0 = std::chrono::steady_clock::now();
    bool all_pass = true;
    json checks = json::array();
    auto record = [&](const std::string& name, bool pass, double worst) {
        std::printf("%s %s (worst %.3e)\n", pass ? "PASS" : "FAIL", name.c_str(), worst);
        checks.push_back(json{{"name", name}, {"pass", pass}, {"worst", worst}});
        all_pass = all_pass && pass;
    };

    // weighted-shift oracle on hole-free cells
    {
        double worst = 0.0;
        for (int N : {2, 4, 8}) {
            ProblemConfig p = cfg.problem();
            p.shape = HoleShape::none();
            p.N = N;
            p.Nt = 64;
            p.s = 1;
            p.arnoldi_m = N * N;
            p.arnoldi_tol = 1e-10;
            SpectrumResult spec = monodromy_spectrum(p, 1e-300);
            std::vector<double> expect;
            for (int m = 0; m < N; ++m)
                for (cdouble mu : no_hole_monodromy_eigs(p, m)) expect.push_back(std::abs(mu));
            for (const auto& v : spec.values) {
                double best = 1e300;
                for (double e : expect) best = std::min(best, std::abs(std::abs(v.mu) - e));
                worst = std::max(worst, best);
            }
            if (!spec.detected) worst = 1e300;
        }
        record("no-hole weighted-shift oracle (moduli to 1e-8)", worst <= 1e-8, worst);
    }

    // contraction of the configured monodromy
    {
        ProblemConfig p = cfg.problem();
        CellGrid grid = build_cell_grid(p.N, p.shape);
        MonodromyContext ctx(p, grid);
        RngStream rng(cfg.seed);
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            cvector w(ctx.dof_count());
            for (auto& x : w) x = cdouble(rng.next_double() - 0.5, rng.next_double() - 0.5);
            cvector kw;
            ctx.monodromy_apply(w, kw);
            worst = std::max(worst, norm2(kw) / norm2(w));
        }
        record("monodromy contraction ||Kw|| <= ||w|| (1 + 1e-12)", worst <= 1.0 + 1e-12, worst);
    }

    // unfold consistency
    {
        double worst = 0.0;
        const double t_g = cfg.problem().t_g();
        RngStream rng(cfg.seed + 1);
        for (int trial = 0; trial < 200; ++trial) {
            cdouble lambda(10.0 * rng.next_double(),
                           cfg.g * (rng.next_double() - 0.5) * 0.999);
            worst = std::max(worst,
                             std::abs(unfold(std::exp(-t_g * lambda), t_g) - lambda) /
                                 (1.0 + std::abs(lambda)));
        }
        bool examples = std::abs(unfold(std::exp(-1.0), 1.0) - 1.0) < 1e-12 &&
                        std::abs(unfold(cdouble(0.0, 0.5), 1.0) -
                                 cdouble(std::log(2.0), -PI / 2.0)) < 1e-12 &&
                        std::abs(unfold(-std::exp(-2.0), 1.0) - cdouble(2.0, -PI)) < 1e-12;
        record("unfold/refold round trip (1e-12) and examples", worst <= 1e-12 && examples,
               worst);
    }

    json payload{{"pass", all_pass}, {"checks", checks}};
    write_text_file(cfg.out_dir + "/validate.json",
                    summary_json(cfg, "validate", payload.dump(), seconds_since(t0)));
    return all_pass ? 0 : EXIT_VALIDATION;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"btspec: Floquet/monodromy spectra of the Bloch-Torrey operator "
                 "on perforated periodic domains"};
    app.require_subcommand(1);

    CliOverrides cli;
    struct Sub {
        const char* name;
        const char* desc;
        int (*run)(const CliOverrides&);
    };
    const Sub subs[] = {
        {"spectrum", "single-(g,q) monodromy branch set", cmd_spectrum},
        {"sweep", "q-sweep with continuation matching", cmd_sweep},
        {"strip", "truncated-strip spectrum", cmd_strip},
        {"crosscheck", "monodromy vs strip pseudo-invariance", cmd_crosscheck},
        {"reconstruct", "eigenfunction on the strip with residual", cmd_reconstruct},
        {"pseudospectra", "resolvent-norm grid", cmd_pseudospectra},
        {"asymptotics", "g-sweep Airy report and power-law fit", cmd_asymptotics},
        {"validate", "oracle and invariant suites", cmd_validate},
    };
    int (*selected)(const CliOverrides&) = nullptr;
    for (const auto& sub : subs) {
        CLI::App* s = app.add_subcommand(sub.name, sub.desc);
        s->add_option("--config", cli.config_path, "run configuration file")->required();
        s->add_option("--out", cli.out_dir, "output directory (overrides config)");
        s->add_option_function<std::uint64_t>(
            "--seed", [&cli](const std::uint64_t& v) { cli.seed = v; }, "seed override");
        s->add_option_function<int>(
            "--threads", [&cli](const int& v) { cli.threads = v; }, "worker threads");
        s->add_flag("--plots", cli.plots, "emit SVG plots");
        s->callback([&selected, run = sub.run] { selected = run; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? EXIT_BAD_CONFIG : 0;
    }

    try {
        return selected(cli);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return EXIT_BAD_CONFIG;
    } catch (const SolverError& e) {
        std::fprintf(stderr, "numerical failure: %s (best residual %.3e after %d iterations)\n",
                     e.what(), e.best_residual, e.iterations);
        return EXIT_NUMERICAL;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return EXIT_NUMERICAL;
    }
}
