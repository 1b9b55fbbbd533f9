#include "btspec/spectra.hpp"

#include "btspec/parallel.hpp"
#include "btspec/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace btspec {

const char* method_name(BranchEigenvalue::Method m) {
    return m == BranchEigenvalue::Method::monodromy ? "monodromy" : "strip";
}

cdouble unfold(cdouble mu, double t_eff) {
    if (mu == cdouble(0.0)) throw Error("unfold: mu = 0 has no finite eigenvalue");
    if (!(t_eff > 0.0)) throw Error("unfold: t_eff must be positive");
    // principal Log with Arg in (-pi, pi], so Im lambda lands in
    // [-pi/t_eff, pi/t_eff); flush -0.0 so Arg(-r) = +pi, not -pi
    if (mu.imag() == 0.0) mu = cdouble(mu.real(), 0.0);
    cdouble lambda = -std::log(mu) / t_eff;
    // Arg just above -pi can round Im onto the excluded band edge
    const double half_band = PI / t_eff;
    if (lambda.imag() >= half_band) lambda = {lambda.real(), -half_band};
    return lambda;
}

cdouble band_fold(cdouble lambda, double g) {
    double im = lambda.imag();
    double n = std::floor(im / g + 0.5);
    im -= n * g;
    if (im >= 0.5 * g) im -= g; // guard the half-open edge
    return {lambda.real(), im};
}

double band_distance(cdouble a, cdouble b, double g) {
    cdouble fa = band_fold(a, g), fb = band_fold(b, g);
    double best = std::abs(fa - fb);
    for (double n : {-1.0, 1.0})
        best = std::min(best, std::abs(fa - fb + cdouble(0.0, n * g)));
    return best;
}

SpectrumResult monodromy_spectrum(const ProblemConfig& config, double mu_floor) {
    config.validate();
    CellGrid grid = build_cell_grid(config.N, config.shape);
    MonodromyContext ctx(config, grid);

    const int n = ctx.dof_count();
    LinearMap powered = [&](const cvector& x, cvector& y) {
        ctx.monodromy_power_apply(x, config.s, y);
    };
    LinearMap single = [&](const cvector& x, cvector& y) { ctx.monodromy_apply(x, y); };

    ArnoldiOptions aopts;
    aopts.m = std::min(config.arnoldi_m, n);
    aopts.tol = config.arnoldi_tol;
    aopts.seed = config.seed;
    RitzSet ritz = arnoldi(powered, n, aopts);

    SpectrumResult out;
    out.matvecs = ritz.matvecs * config.s;
    const double t_g = config.t_g();
    for (auto& pair : ritz.pairs) {
        if (!pair.converged || std::abs(pair.value) < mu_floor) continue;
        auto [mu1, res1] = rayleigh_refine(single, pair.vector);
        ++out.matvecs;
        if (std::abs(mu1) < mu_floor) continue;
        BranchEigenvalue bev;
        bev.lambda = unfold(mu1, t_g);
        bev.mu = mu1;
        bev.residual = res1;
        bev.q = config.q;
        bev.p0 = config.p0;
        bev.g = config.g;
        bev.s = config.s;
        bev.method = BranchEigenvalue::Method::monodromy;
        out.values.push_back(bev);
        out.vectors.push_back(std::move(pair.vector));
    }
    out.detected = !out.values.empty();

    // ascending Re lambda = descending |mu|
    std::vector<std::size_t> order(out.values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return out.values[a].lambda.real() < out.values[b].lambda.real();
    });
    SpectrumResult sorted;
    sorted.detected = out.detected;
    sorted.matvecs = out.matvecs;
    for (std::size_t i : order) {
        sorted.values.push_back(out.values[i]);
        sorted.vectors.push_back(std::move(out.vectors[i]));
    }
    return sorted;
}

namespace {

// the per-step CN factors are real (the dispersion is real), so the plane
// wave amplification is a signed real; returned as (log |rho|, sign)
std::pair<double, int> plane_wave_log_rho(const ProblemConfig& config, int k, int m) {
    const int nt = config.steps_per_period();
    const double dt = config.t_g() / nt;
    const double q = wrap_to_2pi(config.q); // mirrors the propagator's reduction
    double log_abs = 0.0;
    int sign = 1;
    for (int j = 0; j < nt; ++j) {
        double pj = config.p0 - config.g * (j + 0.5) * dt;
        double sigma = discrete_dispersion(k, m, pj, q, config.N);
        double f = (1.0 - 0.5 * dt * sigma) / (1.0 + 0.5 * dt * sigma);
        if (f == 0.0) return {-std::numeric_limits<double>::infinity(), 1};
        if (f < 0.0) {
            sign = -sign;
            f = -f;
        }
        log_abs += std::log(f);
    }
    return {log_abs, sign};
}

} // namespace

cdouble no_hole_plane_wave_rho(const ProblemConfig& config, int k, int m) {
    auto [log_abs, sign] = plane_wave_log_rho(config, k, m);
    return sign * std::exp(log_abs);
}

double no_hole_monodromy_log_modulus(const ProblemConfig& config, int m) {
    if (config.shape.has_hole())
        throw Error("no_hole_monodromy_eigs: config must have no hole");
    double total = 0.0;
    for (int k = 0; k < config.N; ++k) total += plane_wave_log_rho(config, k, m).first;
    return total / config.N;
}

std::vector<cdouble> no_hole_monodromy_eigs(const ProblemConfig& config, int m) {
    if (config.shape.has_hole())
        throw Error("no_hole_monodromy_eigs: config must have no hole");
    const int N = config.N;
    // product of the rho_k accumulated in log space (it underflows a double
    // long before the N-th root does)
    double log_total = 0.0;
    int sign = 1;
    for (int k = 0; k < N; ++k) {
        auto [log_abs, s] = plane_wave_log_rho(config, k, m);
        log_total += log_abs;
        sign *= s;
    }
    // mode-wrap sign: on the cell-centered grid e^{2 pi i N x_j} = (-1)^{N-1},
    // so closing the weighted-shift cycle picks up -1 for even N
    if (N % 2 == 0) sign = -sign;

    std::vector<cdouble> eigs(N);
    const double modulus = std::exp(log_total / N);
    const double arg0 = (sign < 0 ? PI : 0.0) / N;
    for (int r = 0; r < N; ++r)
        eigs[r] = std::polar(modulus, arg0 + 2.0 * PI * r / N);
    return eigs;
}

namespace {

// nearest-neighbor continuation between adjacent branch sets; pairs are
// accepted while closer than half the smallest gap inside the source set
std::vector<std::pair<int, int>> match_branches(const std::vector<BranchEigenvalue>& a,
                                                const std::vector<BranchEigenvalue>& b) {
    std::vector<std::pair<int, int>> out;
    if (a.empty() || b.empty()) return out;

    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            min_gap = std::min(min_gap, std::abs(a[i].lambda - a[j].lambda));
    const double threshold = a.size() > 1 ? 0.5 * min_gap
                                          : std::numeric_limits<double>::infinity();

    struct Cand {
        double d;
        int i, j;
    };
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            double d = std::abs(a[i].lambda - b[j].lambda);
            if (d <= threshold) cands.push_back({d, static_cast<int>(i), static_cast<int>(j)});
        }
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) { return x.d < y.d; });
    std::vector<char> used_a(a.size(), 0), used_b(b.size(), 0);
    for (const auto& c : cands) {
        if (used_a[c.i] || used_b[c.j]) continue;
        used_a[c.i] = used_b[c.j] = 1;
        out.emplace_back(c.i, c.j);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

SweepResult sweep_q(const ProblemConfig& config, const std::vector<double>& q_values,
                    int threads) {
    if (q_values.empty()) throw Error("sweep_q: empty q list");
    SweepResult sweep;
    sweep.parameters = q_values;
    sweep.branches.resize(q_values.size());
    sweep.failures.assign(q_values.size(), "");

    parallel_for(static_cast<int>(q_values.size()), threads, [&](int i) {
        ProblemConfig c = config;
        c.q = q_values[i];
        try {
            sweep.branches[i] = monodromy_spectrum(c);
        } catch (const std::exception& e) {
            sweep.failures[i] = e.what(); // record and keep sweeping
        }
    });

    for (std::size_t i = 0; i + 1 < q_values.size(); ++i)
        sweep.matches.push_back(match_branches(sweep.branches[i].values,
                                               sweep.branches[i + 1].values));
    return sweep;
}

double StripConfig::period() const {
    if (T > 0.0) return T;
    if (g > 0.0) return 2.0 * PI / g;
    throw Error("strip: g = 0 requires an explicit T");
}

SpectrumResult strip_spectrum(const StripConfig& cfg) {
    CellGrid grid = build_strip_grid(cfg.N, cfg.L, cfg.shape);
    SparseMatrix A = assemble_strip_bt(grid, cfg.g, cfg.q);
    const double T = cfg.period();

    LinearMap semigroup = [&](const cvector& x, cvector& y) {
        y = strip_semigroup_apply(A, T, cfg.Nt, x, cfg.solver);
    };
    ArnoldiOptions aopts;
    aopts.m = std::min(cfg.arnoldi_m, grid.active_count());
    aopts.tol = cfg.arnoldi_tol;
    aopts.seed = cfg.seed;
    RitzSet ritz = arnoldi(semigroup, grid.active_count(), aopts);

    SpectrumResult out;
    out.matvecs = ritz.matvecs;
    for (auto& pair : ritz.pairs) {
        if (!pair.converged || std::abs(pair.value) < 1e-14) continue;
        BranchEigenvalue bev;
        bev.lambda = unfold(pair.value, T);
        bev.mu = pair.value;
        bev.residual = pair.residual;
        bev.q = cfg.q;
        bev.p0 = 0.0;
        bev.g = cfg.g;
        bev.s = 1;
        bev.method = BranchEigenvalue::Method::strip;
        out.values.push_back(bev);
        out.vectors.push_back(std::move(pair.vector));
    }
    out.detected = !out.values.empty();
    std::vector<std::size_t> order(out.values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return out.values[a].lambda.real() < out.values[b].lambda.real();
    });
    SpectrumResult sorted;
    sorted.detected = out.detected;
    sorted.matvecs = out.matvecs;
    for (std::size_t i : order) {
        sorted.values.push_back(out.values[i]);
        sorted.vectors.push_back(std::move(out.vectors[i]));
    }
    return sorted;
}

PseudoInvarianceReport pseudo_invariance_check(const std::vector<BranchEigenvalue>& mono,
                                               const std::vector<BranchEigenvalue>& strip,
                                               double g, double tol) {
    PseudoInvarianceReport report;
    report.tol = tol;
    for (std::size_t i = 0; i < strip.size(); ++i) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < mono.size(); ++j) {
            double d = band_distance(strip[i].lambda, mono[j].lambda, g);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(j);
            }
        }
        if (best >= 0) {
            report.pairs.push_back({static_cast<int>(i), best, best_d});
            report.max_mismatch = std::max(report.max_mismatch, best_d);
        }
    }
    report.pass = report.max_mismatch <= tol;
    return report;
}

ReconstructResult reconstruct_eigenfunction(const ProblemConfig& config, cdouble mu,
                                            const cvector& w0, int L,
                                            double accept_residual) {
    config.validate();
    if (config.p0 != 0.0)
        throw Error("reconstruct: monodromy pair must come from p0 = 0");
    CellGrid cell = build_cell_grid(config.N, config.shape);
    MonodromyContext ctx(config, cell);
    if (static_cast<int>(w0.size()) != ctx.dof_count())
        throw Error("reconstruct: vector size mismatch");

    // reject non-converged input pairs
    LinearMap single = [&](const cvector& x, cvector& y) { ctx.monodromy_apply(x, y); };
    auto [mu_check, res_check] = rayleigh_refine(single, w0);
    if (res_check > accept_residual || std::abs(mu_check - mu) > accept_residual)
        throw Error("reconstruct: (mu, w0) is not a converged monodromy pair");

    const cdouble lambda0 = unfold(mu, config.t_g());
    std::vector<cvector> snaps;
    ctx.evolve_with_snapshots(w0, snaps);

    CellGrid strip = build_strip_grid(config.N, L, config.shape);
    SparseMatrix A = assemble_strip_bt(strip, config.g, config.q);

    const int nt = static_cast<int>(snaps.size());
    const double dt = ctx.dt();
    cvector u(strip.active_count(), 0.0);
    for (int j = 0; j < nt; ++j) {
        const double tj = j * dt;
        const double pj = config.p0 - config.g * tj; // gauge phase at the snapshot time
        const cdouble weight = std::exp(tj * lambda0) / static_cast<double>(nt);
        for (int i = 0; i < strip.active_count(); ++i) {
            auto [ix, iy] = strip.point_of_active(i);
            const double x = strip.x_coord(ix);
            const int cell_dof = cell.active_index(ix % config.N, iy);
            u[i] += weight * std::polar(1.0, pj * x) * snaps[j][cell_dof];
        }
    }

    ReconstructResult out;
    out.lambda0 = lambda0;
    out.strip_N = config.N;
    out.strip_L = L;

    cvector r = A.apply(u);
    axpy(-lambda0, u, r);
    double rw = 0.0, uw = 0.0, utotal = 0.0, uinner = 0.0;
    for (int i = 0; i < strip.active_count(); ++i) {
        auto [ix, iy] = strip.point_of_active(i);
        (void)iy;
        const double x = strip.x_coord(ix);
        const double u2 = std::norm(u[i]);
        utotal += u2;
        if (std::abs(x) <= 2.0) uinner += u2;
        if (std::abs(x) <= L - 1.0) {
            rw += std::norm(r[i]);
            uw += u2;
        }
    }
    if (utotal == 0.0) throw Error("reconstruct: averaged state vanished");
    out.residual = uw > 0.0 ? std::sqrt(rw / uw) : std::numeric_limits<double>::infinity();
    out.localization = uinner / utotal;

    // bilinear pairing with the one-cell translate (tau_1 u)(x) = u(x-1)
    cdouble pairing = 0.0;
    for (int i = 0; i < strip.active_count(); ++i) {
        auto [ix, iy] = strip.point_of_active(i);
        int jx = ix - config.N;
        if (jx < 0) continue;
        int t = strip.active_index(jx, iy);
        if (t >= 0) pairing += u[i] * u[t];
    }
    out.translate_pairing = pairing / utotal;
    out.u = std::move(u);
    return out;
}

PseudospectraGrid pseudospectra_grid(const SparseMatrix& A, const std::vector<cdouble>& z_values,
                                     const PseudospectraOptions& opts) {
    PseudospectraGrid grid;
    grid.z = z_values;
    grid.value.assign(z_values.size(), 0.0);
    grid.converged.assign(z_values.size(), 0);

    parallel_for(static_cast<int>(z_values.size()), opts.threads, [&](int idx) {
        SparseMatrix Az = A;
        Az.shift_diagonal(-z_values[idx]);
        SparseMatrix AzH = Az.conjugate_transpose();

        const int n = A.n();
        RngStream rng(opts.seed + static_cast<std::uint64_t>(idx));
        cvector x(n);
        for (int i = 0; i < n; ++i)
            x[i] = cdouble(rng.next_double() - 0.5, rng.next_double() - 0.5);
        scale(1.0 / norm2(x), x);

        double sigma_prev = -1.0;
        try {
            for (int it = 0; it < opts.maxit; ++it) {
                // one inverse-normal-equations step: two solves
                cvector w = solve(AzH, x, opts.solver).x;
                cvector y = solve(Az, w, opts.solver).x;
                double nu = std::real(dot(x, y)); // Rayleigh quotient of (Az^H Az)^{-1}
                if (!(nu > 0.0)) break;
                double sigma = 1.0 / std::sqrt(nu);
                double ynorm = norm2(y);
                if (ynorm == 0.0) break;
                scale(1.0 / ynorm, y);
                x.swap(y);
                if (sigma_prev > 0.0 && std::abs(sigma - sigma_prev) <= opts.tol * sigma) {
                    grid.value[idx] = 1.0 / sigma;
                    grid.converged[idx] = 1;
                    break;
                }
                sigma_prev = sigma;
            }
        } catch (const SolverError&) {
            // z sits (numerically) on the spectrum: flag and move on
            grid.converged[idx] = 0;
        }
    });
    return grid;
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw Error("fit_power_law: need at least 3 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [g, v] : points) {
        if (!(g > 0.0) || !(v > 0.0))
            throw Error("fit_power_law: nonpositive data rejected");
        double lx = std::log(g), ly = std::log(v);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(points.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw Error("fit_power_law: degenerate abscissae");
    PowerLawFit fit;
    fit.exponent = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.exponent * sx) / n;
    fit.prefactor = std::exp(intercept);
    double ss = 0.0;
    for (const auto& [g, v] : points) {
        double r = std::log(v) - (intercept + fit.exponent * std::log(g));
        ss += r * r;
    }
    fit.rms = std::sqrt(ss / n);
    return fit;
}

AsymptoticReport asymptotic_report_from_values(
    const std::vector<std::pair<double, std::vector<BranchEigenvalue>>>& per_g, double r) {
    AsymptoticReport report;
    const double a1 = std::abs(airy_first_zero());
    report.target_re = 0.5 * a1;
    report.target_im = 0.5 * std::sqrt(3.0) * a1;

    std::vector<std::pair<double, double>> fit_points;
    for (const auto& [g, values] : per_g) {
        AsymptoticRow row;
        row.g = g;
        if (values.empty()) {
            row.missing = true;
            report.rows.push_back(row);
            continue;
        }
        // minimal Re lambda; the exact conjugate pair at q = 0 ties in Re, so
        // prefer the upper-half-band member (the quasimode sits at x = +r)
        double min_re = values.front().lambda.real();
        for (const auto& v : values) min_re = std::min(min_re, v.lambda.real());
        const BranchEigenvalue* pick = nullptr;
        const double re_slack = 1e-6 * std::abs(min_re) + 1e-12;
        for (const auto& v : values) {
            if (v.lambda.real() > min_re + re_slack) continue;
            if (!pick || v.lambda.imag() > pick->lambda.imag()) pick = &v;
        }
        row.lambda_min = pick->lambda;
        const double scale = std::pow(g, -2.0 / 3.0);
        row.re_scaled = pick->lambda.real() * scale;
        row.im_scaled = (g * r - pick->lambda.imag()) * scale;
        report.rows.push_back(row);
        if (pick->lambda.real() > 0.0) fit_points.emplace_back(g, pick->lambda.real());
    }
    if (fit_points.size() >= 3) report.fit = fit_power_law(fit_points);
    return report;
}

AsymptoticReport asymptotic_report(const std::vector<ProblemConfig>& configs, int threads) {
    if (configs.empty()) throw Error("asymptotic_report: no configs");
    for (std::size_t i = 1; i < configs.size(); ++i) {
        if (configs[i].g <= configs[i - 1].g)
            throw Error("asymptotic_report: configs must be ascending in g");
        if (configs[i].q != configs[0].q || configs[i].shape.kind != configs[0].shape.kind)
            throw Error("asymptotic_report: configs must share shape and q");
    }
    std::vector<std::pair<double, std::vector<BranchEigenvalue>>> per_g(configs.size());
    parallel_for(static_cast<int>(configs.size()), threads, [&](int i) {
        per_g[i].first = configs[i].g;
        try {
            per_g[i].second = monodromy_spectrum(configs[i]).values;
        } catch (const std::exception&) {
            // row reported as a gap
        }
    });
    return asymptotic_report_from_values(per_g, configs[0].shape.max_x_extent());
}

} // namespace btspec
