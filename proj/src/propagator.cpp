#include "btspec/propagator.hpp"

#include <cmath>

namespace btspec {

MonodromyContext::MonodromyContext(const ProblemConfig& config, const CellGrid& grid)
    : config_(config), grid_(&grid), stencil_(grid) {
    config_.validate();
    if (grid.topology != GridTopology::torus_cell)
        throw Error("MonodromyContext: torus-cell grid required");
    // q enters every step identically; reducing it here makes runs at q and
    // q + 2 pi k bit-identical (p0 stays raw: the schedule drifts through it)
    config_.q = wrap_to_2pi(config_.q);

    const int nt = config_.steps_per_period();
    dt_ = config_.t_g() / nt;
    phase_schedule_.resize(nt);
    for (int j = 0; j < nt; ++j)
        phase_schedule_[j] = config_.p0 - config_.g * (j + 0.5) * dt_;

    realignment_.resize(grid.active_count());
    for (int i = 0; i < grid.active_count(); ++i)
        realignment_[i] = std::polar(1.0, -2.0 * PI * grid.active_x()[i]);
}

void MonodromyContext::cn_step(cvector& w, int j) const {
    if (j < 0 || j >= steps()) throw Error("cn_step: step index out of range");
    stencil_.fill_cn_lhs(phase_schedule_[j], config_.q, 0.5 * dt_, lhs_);

    // rhs = (I - dt/2 B) w = 2w - (I + dt/2 B) w, one spmv on the lhs matrix
    lhs_.apply(w, rhs_);
    for (std::size_t i = 0; i < w.size(); ++i) rhs_[i] = 2.0 * w[i] - rhs_[i];

    SolveOptions opts;
    opts.tol = config_.solver_tol;
    opts.maxit = config_.solver_maxit;
    // the step matrix is near identity, so the rhs is an excellent first guess
    w = solve(lhs_, rhs_, opts, &rhs_).x;
}

void MonodromyContext::monodromy_apply(const cvector& w0, cvector& out) const {
    if (static_cast<int>(w0.size()) != dof_count())
        throw Error("monodromy_apply: state size mismatch");
    out = w0;
    for (int j = 0; j < steps(); ++j) cn_step(out, j);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= realignment_[i];
}

cvector MonodromyContext::monodromy_apply(const cvector& w0) const {
    cvector out;
    monodromy_apply(w0, out);
    return out;
}

void MonodromyContext::monodromy_power_apply(const cvector& w0, int s, cvector& out) const {
    if (s < 1) throw Error("monodromy_power_apply: s >= 1 required");
    monodromy_apply(w0, out);
    cvector tmp;
    for (int rep = 1; rep < s; ++rep) {
        monodromy_apply(out, tmp);
        out.swap(tmp);
    }
}

void MonodromyContext::evolve_with_snapshots(const cvector& w0,
                                             std::vector<cvector>& snapshots) const {
    snapshots.clear();
    snapshots.reserve(steps());
    cvector w = w0;
    for (int j = 0; j < steps(); ++j) {
        snapshots.push_back(w);
        cn_step(w, j);
    }
}

cvector strip_semigroup_apply(const SparseMatrix& A, double T, int Nt, const cvector& w,
                              const SolveOptions& solver) {
    if (!(T > 0.0) || Nt < 1) throw Error("strip_semigroup_apply: need T > 0, Nt >= 1");
    const double half_dt = 0.5 * T / Nt;

    SparseMatrix lhs = A;
    for (auto& v : lhs.vals()) v *= half_dt;
    lhs.shift_diagonal(1.0);

    cvector x = w, rhs(w.size());
    for (int j = 0; j < Nt; ++j) {
        lhs.apply(x, rhs);
        for (std::size_t i = 0; i < x.size(); ++i) rhs[i] = 2.0 * x[i] - rhs[i];
        x = solve(lhs, rhs, solver, &rhs).x;
    }
    return x;
}

std::pair<cdouble, double> rayleigh_refine(const LinearMap& apply, const cvector& v) {
    double vv = norm2(v);
    if (vv == 0.0) throw Error("rayleigh_refine: zero vector");
    cvector av(v.size());
    apply(v, av);
    cdouble mu = dot(v, av) / cdouble(vv * vv);
    axpy(-mu, v, av);
    return {mu, norm2(av) / vv};
}

} // namespace btspec
