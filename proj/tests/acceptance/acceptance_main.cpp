// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. The expensive branch sets are computed once and shared between
// criteria (the Airy sweep feeds the resolvent bound and the invariant
// checks; the g=20 run feeds the reconstruction).

#include "btspec/config.hpp"
#include "btspec/io.hpp"
#include "btspec/parallel.hpp"
#include "btspec/rng.hpp"
#include "btspec/spectra.hpp"

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <vector>

using namespace btspec;

namespace {

int g_failures = 0;

void report(const char* id, bool pass, const std::string& detail) {
    std::printf("%-4s %-60s %s\n", id, detail.c_str(), pass ? "PASS" : "FAIL");
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

double now_minus(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// shared state across criteria
std::vector<ProblemConfig> airy_configs;                  // A3 configs, ascending g
std::vector<SpectrumResult> airy_spectra;                 // A3 results (shared with A5/A6)
ProblemConfig g20_config;                                 // A4/A7 monodromy config
SpectrumResult g20_spectrum;

ProblemConfig make_config(double g, int N, int Nt, int s, const HoleShape& shape) {
    ProblemConfig c;
    c.g = g;
    c.N = N;
    c.Nt = Nt;
    c.s = s;
    c.shape = shape;
    c.arnoldi_m = 16;
    c.arnoldi_tol = 1e-7;
    c.seed = 1;
    c.solver_tol = 1e-9;
    c.solver_maxit = 8000;
    return c;
}

void criterion_a1() {
    auto t0 = std::chrono::steady_clock::now();
    ProblemConfig c;
    c.g = 2.0 * PI;
    c.N = 64;
    c.Nt = 512;
    // push every step solve to its attainable floor: the 1e-12 agreement
    // target leaves no room for per-step solver noise across 512 steps
    c.solver_tol = 3e-15;
    c.solver_maxit = 60000;
    CellGrid grid = build_cell_grid(c.N, HoleShape::none());
    MonodromyContext ctx(c, grid);

    cvector w = make_plane_wave(grid, 0, 0);
    for (int j = 0; j < ctx.steps(); ++j) ctx.cn_step(w, j);
    cdouble rho = no_hole_plane_wave_rho(c, 0, 0);
    cvector expect = make_plane_wave(grid, 0, 0);
    double err = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        err = std::max(err, std::abs(w[i] - rho * expect[i]) / std::abs(rho));

    double lam = -std::log(std::abs(rho)) / c.t_g();
    const double target = 4.0 * PI * PI / 3.0;
    double rel = std::abs(lam - target) / target;

    report("A1", err <= 1e-12 && rel <= 0.02,
           fmt("integrator oracle: wave err %.2e, -ln rho/t_g off by %.2e (%.0fs)", err, rel,
               now_minus(t0)));
}

void criterion_a2() {
    auto t0 = std::chrono::steady_clock::now();
    RngStream rng(2024);
    double worst = 0.0;
    bool monotone = true;
    for (int trial = 0; trial < 3; ++trial) {
        double g = 3.0 + 12.0 * rng.next_double();
        double q = 2.0 * PI * rng.next_double();
        double p0 = 2.0 * PI * rng.next_double();
        double prev_log_mod = 0.0;
        for (int N : {2, 4, 8}) {
            // the weighted-shift eigenvector basis is badly conditioned when
            // the per-mode weights span many decades, so the Ritz moduli only
            // track the closed form when both the Arnoldi residuals and the
            // per-step solves sit well below the 1e-8 comparison target
            ProblemConfig c;
            c.g = g;
            c.q = q;
            c.p0 = p0;
            c.N = N;
            c.Nt = 256;
            c.s = 1;
            c.arnoldi_m = N * N;
            c.arnoldi_tol = 1e-12;
            c.seed = rng.next_u64();
            c.solver_tol = 5e-14;
            c.solver_maxit = 20000;
            SpectrumResult spec = monodromy_spectrum(c, 1e-300);
            if (!spec.detected) {
                worst = 1e300;
                continue;
            }
            std::vector<double> expect;
            for (int m = 0; m < N; ++m)
                for (cdouble mu : no_hole_monodromy_eigs(c, m)) expect.push_back(std::abs(mu));
            for (const auto& v : spec.values) {
                double best = 1e300;
                for (double e : expect) best = std::min(best, std::abs(std::abs(v.mu) - e));
                worst = std::max(worst, best);
            }
            // monotone modulus decrease, in the regime where the time step
            // resolves every dispersion value (scalar closed form, so the
            // large Nt costs nothing)
            ProblemConfig cm = c;
            cm.Nt = 16 * N * N;
            double log_mod = no_hole_monodromy_log_modulus(cm, 0);
            if (N > 2 && log_mod >= prev_log_mod) monotone = false;
            prev_log_mod = log_mod;
        }
    }
    report("A2", worst <= 1e-8 && monotone,
           fmt("weighted-shift oracle: worst modulus gap %.2e, monotone=%d (%.0fs)", worst,
               static_cast<int>(monotone), now_minus(t0)));
}

void criterion_a3() {
    auto t0 = std::chrono::steady_clock::now();
    const double radius = 0.25;
    const HoleShape disk = HoleShape::disk(radius);
    const double g_list[] = {250.0, 500.0, 1000.0, 2000.0};
    const int n_list[] = {128, 128, 256, 256};

    RunConfig rc; // only for the auto-s rule
    rc.s = 0;     // engage the |mu|^s <= mu_target choice
    rc.mu_target = 0.1;
    airy_configs.clear();
    for (int i = 0; i < 4; ++i) {
        int s = rc.effective_s(g_list[i]);
        airy_configs.push_back(make_config(g_list[i], n_list[i], 128, s, disk));
    }

    airy_spectra.assign(4, SpectrumResult{});
    parallel_for(4, 2, [&](int i) { airy_spectra[i] = monodromy_spectrum(airy_configs[i]); });

    std::vector<std::pair<double, std::vector<BranchEigenvalue>>> per_g;
    for (int i = 0; i < 4; ++i) per_g.push_back({g_list[i], airy_spectra[i].values});
    AsymptoticReport rep = asymptotic_report_from_values(per_g, radius);

    bool all_present = true;
    for (const auto& row : rep.rows) all_present = all_present && !row.missing;

    bool exponent_ok = all_present && std::abs(rep.fit.exponent - 2.0 / 3.0) <= 0.05;
    double re2000 = all_present ? rep.rows[3].re_scaled : 0.0;
    double im2000 = all_present ? rep.rows[3].im_scaled : 0.0;
    bool re_ok = all_present && std::abs(re2000 - rep.target_re) <= 0.15 * rep.target_re;
    bool im_ok = all_present && std::abs(im2000 - rep.target_im) <= 0.5;
    bool monotone = all_present;
    for (int i = 1; all_present && i < 4; ++i) {
        if (std::abs(rep.rows[i].re_scaled - rep.target_re) >
            std::abs(rep.rows[i - 1].re_scaled - rep.target_re))
            monotone = false;
        if (std::abs(rep.rows[i].im_scaled - rep.target_im) >
            std::abs(rep.rows[i - 1].im_scaled - rep.target_im))
            monotone = false;
    }

    report("A3", exponent_ok && re_ok && im_ok && monotone,
           fmt("Airy law: exponent %.4f, re2000 %.4f (tgt %.4f), im2000 %.4f (tgt %.4f), "
               "monotone=%d (%.0fs)",
               rep.fit.exponent, re2000, rep.target_re, im2000, rep.target_im,
               static_cast<int>(monotone), now_minus(t0)));
}

void criterion_a4() {
    auto t0 = std::chrono::steady_clock::now();
    g20_config = make_config(20.0, 64, 256, 1, HoleShape::disk(0.25));
    g20_config.arnoldi_tol = 1e-9;
    g20_config.solver_tol = 1e-12;
    g20_spectrum = monodromy_spectrum(g20_config);

    // The truncated strip hybridizes one branch copy per hole into a
    // near-degenerate cluster, which caps the Arnoldi residuals reachable at
    // moderate m; 2e-6 certifies the values far beyond the 5% criterion.
    StripConfig sc;
    sc.shape = HoleShape::disk(0.25);
    sc.N = 64;
    sc.L = 4;
    sc.g = 20.0;
    sc.Nt = 128;
    sc.arnoldi_m = 20;
    sc.arnoldi_tol = 2e-6;
    sc.seed = 1;
    sc.solver = SolveOptions{1e-11, 8000, 50, 50};
    SpectrumResult strip = strip_spectrum(sc);

    bool both = g20_spectrum.detected && strip.detected;
    double rel = 1e300;
    if (both) {
        const cdouble lam1 = g20_spectrum.values.front().lambda;
        double best = 1e300;
        for (const auto& v : strip.values)
            best = std::min(best, band_distance(lam1, v.lambda, 20.0));
        rel = best / std::abs(lam1);
    }
    report("A4", both && rel <= 0.05,
           fmt("pseudo-invariance crosscheck: dominant mismatch %.3f%% (%.0fs)", 100.0 * rel,
               now_minus(t0)));
}

void criterion_a5() {
    auto t0 = std::chrono::steady_clock::now();
    const double g = 1000.0;
    const double g23 = std::pow(g, 2.0 / 3.0);
    const double a1h = 0.5 * std::abs(airy_first_zero());

    CellGrid grid = build_strip_grid(64, 2, HoleShape::disk(0.25));
    SparseMatrix A = assemble_strip_bt(grid, g, 0.0);
    std::vector<cdouble> zs;
    for (double f : {0.0, 0.125, 0.25, 0.375}) zs.emplace_back(0.5 * a1h * g23, f * g);

    PseudospectraOptions opts;
    opts.solver = SolveOptions{1e-8, 40000, 50, 50};
    opts.threads = 2;
    PseudospectraGrid psg = pseudospectra_grid(A, zs, opts);

    bool all_converged = true;
    std::vector<double> scaled;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        all_converged = all_converged && psg.converged[i];
        scaled.push_back(psg.value[i] * g23);
    }
    std::vector<double> sorted = scaled;
    std::sort(sorted.begin(), sorted.end());
    double median = 0.5 * (sorted[1] + sorted[2]);
    double worst = sorted.back();
    bool bounded = worst <= 10.0 * median;

    // spectral exclusion from the shared g=1000 monodromy run
    const double floor_re = (a1h - 0.35) * g23;
    bool exclusion = airy_spectra.size() == 4 && airy_spectra[2].detected;
    if (exclusion)
        for (const auto& v : airy_spectra[2].values)
            exclusion = exclusion && v.lambda.real() >= floor_re;

    report("A5", all_converged && bounded && exclusion,
           fmt("resolvent bound: max/median %.2f, scaled max %.2f, exclusion floor %.1f ok=%d "
               "(%.0fs)",
               worst / median, worst, floor_re, static_cast<int>(exclusion), now_minus(t0)));
}

void criterion_a6() {
    auto t0 = std::chrono::steady_clock::now();
    // contraction + branch invariants on every config exercised above
    std::vector<ProblemConfig> configs = airy_configs;
    configs.push_back(g20_config);
    {
        ProblemConfig a1c;
        a1c.g = 2.0 * PI;
        a1c.N = 64;
        a1c.Nt = 512;
        a1c.solver_tol = 1e-13;
        configs.push_back(a1c);
    }

    double worst_contraction = 0.0;
    parallel_for(static_cast<int>(configs.size()), 2, [&](int ci) {
        const ProblemConfig& c = configs[ci];
        CellGrid grid = build_cell_grid(c.N, c.shape);
        MonodromyContext ctx(c, grid);
        RngStream rng(7000 + ci);
        for (int trial = 0; trial < 3; ++trial) {
            cvector w(ctx.dof_count());
            for (auto& x : w) x = cdouble(rng.next_double() - 0.5, rng.next_double() - 0.5);
            cvector kw;
            ctx.monodromy_apply(w, kw);
            double ratio = norm2(kw) / norm2(w);
            if (ratio > worst_contraction) worst_contraction = ratio;
        }
    });

    bool branch_ok = true;
    double worst_mu = 0.0, worst_re = 0.0;
    auto scan = [&](const SpectrumResult& spec, double g) {
        for (const auto& v : spec.values) {
            worst_mu = std::max(worst_mu, std::abs(v.mu));
            worst_re = std::min(worst_re, v.lambda.real() / g);
            if (std::abs(v.mu) > 1.0 + 1e-10) branch_ok = false;
            if (v.lambda.real() < -1e-10 * g) branch_ok = false;
            if (v.lambda.imag() < -0.5 * g || v.lambda.imag() >= 0.5 * g) branch_ok = false;
        }
    };
    for (std::size_t i = 0; i < airy_spectra.size(); ++i)
        scan(airy_spectra[i], airy_configs[i].g);
    scan(g20_spectrum, g20_config.g);

    report("A6", worst_contraction <= 1.0 + 1e-12 && branch_ok,
           fmt("contraction/accretivity: max ||Kw||/||w|| %.6f, max |mu| %.6f (%.0fs)",
               worst_contraction, worst_mu, now_minus(t0)));
}

void criterion_a7() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = g20_spectrum.detected;
    double residual = 1e300, localization = 0.0;
    if (ok) {
        ReconstructResult rec = reconstruct_eigenfunction(
            g20_config, g20_spectrum.values.front().mu, g20_spectrum.vectors.front(), 4, 1e-6);
        residual = rec.residual;
        localization = rec.localization;
        ok = residual <= 5e-2 && localization >= 0.9;
    }
    report("A7", ok,
           fmt("reconstruction: windowed residual %.3e, localization %.3f (%.0fs)", residual,
               localization, now_minus(t0)));
}

void criterion_a8() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string why = "kernel unit suite";

    // Arnoldi on a prescribed-diagonal triangular matrix
    {
        const int n = 20;
        RngStream rng(5);
        SparseBuilder b(n);
        for (int i = 0; i < n; ++i) {
            b.add(i, i, 1.0 - 0.1 * i);
            for (int j = i + 1; j < n; ++j)
                b.add(i, j, cdouble(0.3 * (rng.next_double() - 0.5),
                                    0.3 * (rng.next_double() - 0.5)));
        }
        SparseMatrix T = b.build();
        ArnoldiOptions aopts;
        aopts.m = n;
        aopts.tol = 1e-9;
        RitzSet rs = arnoldi([&](const cvector& x, cvector& y) { T.apply(x, y); }, n, aopts);
        std::vector<double> got, expect;
        for (const auto& p : rs.pairs) got.push_back(p.value.real());
        for (int i = 0; i < n; ++i) expect.push_back(1.0 - 0.1 * i);
        std::sort(got.begin(), got.end());
        std::sort(expect.begin(), expect.end());
        for (int i = 0; i < n; ++i)
            if (std::abs(got[i] - expect[i]) > 1e-8) ok = false;
        if (!ok) why += " [arnoldi]";
    }

    // iterative solve vs an elimination oracle
    {
        const int n = 60;
        SparseBuilder b(n);
        for (int i = 0; i < n; ++i) {
            b.add(i, i, 2.0);
            if (i > 0) b.add(i, i - 1, -1.0);
            if (i + 1 < n) b.add(i, i + 1, -1.0);
        }
        SparseMatrix A = b.build();
        RngStream rng(17);
        cvector rhs(n);
        for (auto& x : rhs) x = cdouble(rng.next_double() - 0.5, rng.next_double() - 0.5);
        cvector x = solve(A, rhs, {1e-12, 2000, 50, 50}).x;

        // dense elimination, written out here so it shares nothing with solve()
        std::vector<cvector> M(n, cvector(n, 0.0));
        cvector bb = rhs;
        for (int i = 0; i < n; ++i)
            for (int k = A.row_ptr()[i]; k < A.row_ptr()[i + 1]; ++k)
                M[i][A.cols()[k]] = A.vals()[k];
        for (int k = 0; k < n; ++k) {
            int p = k;
            for (int i = k + 1; i < n; ++i)
                if (std::abs(M[i][k]) > std::abs(M[p][k])) p = i;
            std::swap(M[k], M[p]);
            std::swap(bb[k], bb[p]);
            for (int i = k + 1; i < n; ++i) {
                cdouble f = M[i][k] / M[k][k];
                for (int j = k; j < n; ++j) M[i][j] -= f * M[k][j];
                bb[i] -= f * bb[k];
            }
        }
        for (int i = n - 1; i >= 0; --i) {
            cdouble s = bb[i];
            for (int j = i + 1; j < n; ++j) s -= M[i][j] * bb[j];
            bb[i] = s / M[i][i];
        }
        double scale = 0.0, err = 0.0;
        for (int i = 0; i < n; ++i) {
            scale = std::max(scale, std::abs(bb[i]));
            err = std::max(err, std::abs(x[i] - bb[i]));
        }
        if (err > 1e-8 * scale) {
            ok = false;
            why += " [solve]";
        }
    }

    // airy zero
    if (std::abs(airy_first_zero() - (-2.3381074)) > 1e-6) {
        ok = false;
        why += " [airy]";
    }

    // unfold round trips
    {
        RngStream rng(9);
        for (int trial = 0; trial < 100; ++trial) {
            double g = 1.0 + 30.0 * rng.next_double();
            double t_g = 2.0 * PI / g;
            cdouble lambda(8.0 * rng.next_double(), g * (rng.next_double() - 0.5) * 0.999);
            if (std::abs(unfold(std::exp(-t_g * lambda), t_g) - lambda) >
                1e-12 * (1.0 + std::abs(lambda))) {
                ok = false;
                why += " [unfold]";
                break;
            }
        }
    }

    // byte-identical CSV bodies across reruns of the same config and seed
    {
        RunConfig cfg = parse_config_text(
            "shape = disk\nradius = 0.25\ng = 20\nN = 12\nNt = 64\narnoldi_m = 16\n"
            "arnoldi_tol = 1e-9\nseed = 11\nsolver_tol = 1e-12\n");
        std::string csv1 = spectrum_csv(cfg, monodromy_spectrum(cfg.problem()).values);
        std::string csv2 = spectrum_csv(cfg, monodromy_spectrum(cfg.problem()).values);
        if (csv1 != csv2 || csv1.empty()) {
            ok = false;
            why += " [csv-rerun]";
        }
    }

    report("A8", ok, fmt("%s (%.0fs)", why.c_str(), now_minus(t0)));
}

} // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    std::printf("btspec acceptance suite\n");
    criterion_a1();
    criterion_a2();
    criterion_a3();
    criterion_a4();
    criterion_a5();
    criterion_a6();
    criterion_a7();
    criterion_a8();
    std::printf("total: %.0fs, %d failure(s)\n", now_minus(t0), g_failures);
    return g_failures == 0 ? 0 : 1;
}
