// Python bindings for the btspec core: grids, operators, monodromy spectra,
// strip cross-checks, pseudospectra and the Airy-law report.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "btspec/io.hpp"
#include "btspec/spectra.hpp"

namespace py = pybind11;
using namespace btspec;

namespace {

cvector to_cvector(const py::array_t<cdouble>& arr) {
    auto buf = arr.request();
    if (buf.ndim != 1) throw Error("expected a 1-d complex array");
    const cdouble* p = static_cast<const cdouble*>(buf.ptr);
    return cvector(p, p + buf.shape[0]);
}

py::array_t<cdouble> to_numpy(const cvector& v) {
    py::array_t<cdouble> out(v.size());
    std::copy(v.begin(), v.end(), static_cast<cdouble*>(out.request().ptr));
    return out;
}

} // namespace

PYBIND11_MODULE(btspec, m) {
    m.doc() = "Floquet/monodromy spectra of the Bloch-Torrey operator -Lap + igx "
              "on periodically perforated planar domains";
    m.attr("__version__") = TOOL_VERSION;

    py::class_<HoleShape>(m, "HoleShape")
        .def_static("none", &HoleShape::none)
        .def_static("disk", &HoleShape::disk, py::arg("r"))
        .def_static("ellipse", &HoleShape::ellipse, py::arg("a"), py::arg("b"))
        .def_property_readonly("max_x_extent", &HoleShape::max_x_extent)
        .def_property_readonly("has_hole", &HoleShape::has_hole);

    m.def("signed_distance", &signed_distance, py::arg("shape"), py::arg("x"), py::arg("y"));

    py::class_<CellGrid>(m, "CellGrid")
        .def_readonly("N", &CellGrid::N)
        .def_readonly("L", &CellGrid::L)
        .def_readonly("nx", &CellGrid::nx)
        .def_readonly("ny", &CellGrid::ny)
        .def_property_readonly("active_count", &CellGrid::active_count)
        .def_property_readonly("masked_count", &CellGrid::masked_count)
        .def_property_readonly("total_points", &CellGrid::total_points)
        .def("is_masked", &CellGrid::is_masked, py::arg("ix"), py::arg("iy"))
        .def("active_index", &CellGrid::active_index, py::arg("ix"), py::arg("iy"))
        .def("point_of_active", &CellGrid::point_of_active, py::arg("k"))
        .def("x_coord", &CellGrid::x_coord, py::arg("ix"))
        .def("y_coord", &CellGrid::y_coord, py::arg("iy"));

    m.def("build_cell_grid", &build_cell_grid, py::arg("N"), py::arg("shape"));
    m.def("build_strip_grid", &build_strip_grid, py::arg("N"), py::arg("L"), py::arg("shape"));

    py::class_<SparseMatrix>(m, "SparseMatrix")
        .def_property_readonly("n", &SparseMatrix::n)
        .def_property_readonly("nnz", &SparseMatrix::nnz)
        .def("apply",
             [](const SparseMatrix& A, const py::array_t<cdouble>& x) {
                 return to_numpy(A.apply(to_cvector(x)));
             })
        .def("to_csr", [](const SparseMatrix& A) {
            return py::make_tuple(py::cast(A.row_ptr()), py::cast(A.cols()),
                                  to_numpy(A.vals()));
        });

    py::class_<BlochPhases>(m, "BlochPhases")
        .def(py::init<double, double>(), py::arg("p"), py::arg("q"))
        .def_readonly("p", &BlochPhases::p)
        .def_readonly("q", &BlochPhases::q);

    m.def("discrete_dispersion", &discrete_dispersion, py::arg("k"), py::arg("m"), py::arg("p"),
          py::arg("q"), py::arg("N"));
    m.def("assemble_cell_bloch", &assemble_cell_bloch, py::arg("grid"), py::arg("phases"));
    m.def("assemble_strip_bt", &assemble_strip_bt, py::arg("grid"), py::arg("g"), py::arg("q"));
    m.def("make_plane_wave", [](const CellGrid& g, int k, int mm) {
        return to_numpy(make_plane_wave(g, k, mm));
    });

    py::class_<ProblemConfig>(m, "ProblemConfig")
        .def(py::init([](double g, double q, double p0, const HoleShape& shape, int N, int Nt,
                         int s, int arnoldi_m, double arnoldi_tol, std::uint64_t seed,
                         double solver_tol, int solver_maxit) {
                 ProblemConfig c;
                 c.g = g;
                 c.q = q;
                 c.p0 = p0;
                 c.shape = shape;
                 c.N = N;
                 c.Nt = Nt;
                 c.s = s;
                 c.arnoldi_m = arnoldi_m;
                 c.arnoldi_tol = arnoldi_tol;
                 c.seed = seed;
                 c.solver_tol = solver_tol;
                 c.solver_maxit = solver_maxit;
                 c.validate();
                 return c;
             }),
             py::arg("g"), py::arg("q") = 0.0, py::arg("p0") = 0.0,
             py::arg("shape") = HoleShape::none(), py::arg("N") = 16, py::arg("Nt") = 0,
             py::arg("s") = 1, py::arg("arnoldi_m") = 20, py::arg("arnoldi_tol") = 1e-9,
             py::arg("seed") = 1, py::arg("solver_tol") = 1e-12, py::arg("solver_maxit") = 4000)
        .def_readwrite("g", &ProblemConfig::g)
        .def_readwrite("q", &ProblemConfig::q)
        .def_readwrite("p0", &ProblemConfig::p0)
        .def_readwrite("N", &ProblemConfig::N)
        .def_readwrite("Nt", &ProblemConfig::Nt)
        .def_readwrite("s", &ProblemConfig::s)
        .def_property_readonly("t_g", &ProblemConfig::t_g)
        .def_property_readonly("steps_per_period", &ProblemConfig::steps_per_period);

    py::class_<MonodromyContext>(m, "MonodromyContext")
        .def(py::init<const ProblemConfig&, const CellGrid&>(), py::arg("config"),
             py::arg("grid"), py::keep_alive<1, 3>())
        .def_property_readonly("dof_count", &MonodromyContext::dof_count)
        .def_property_readonly("dt", &MonodromyContext::dt)
        .def_property_readonly("steps", &MonodromyContext::steps)
        .def("apply",
             [](const MonodromyContext& ctx, const py::array_t<cdouble>& w) {
                 return to_numpy(ctx.monodromy_apply(to_cvector(w)));
             })
        .def("power_apply", [](const MonodromyContext& ctx, const py::array_t<cdouble>& w,
                               int s) {
            cvector out;
            ctx.monodromy_power_apply(to_cvector(w), s, out);
            return to_numpy(out);
        });

    py::class_<BranchEigenvalue>(m, "BranchEigenvalue")
        .def_readonly("lam", &BranchEigenvalue::lambda)
        .def_readonly("mu", &BranchEigenvalue::mu)
        .def_readonly("residual", &BranchEigenvalue::residual)
        .def_readonly("q", &BranchEigenvalue::q)
        .def_readonly("p0", &BranchEigenvalue::p0)
        .def_readonly("g", &BranchEigenvalue::g)
        .def_readonly("s", &BranchEigenvalue::s)
        .def_property_readonly("method",
                               [](const BranchEigenvalue& b) { return method_name(b.method); });

    py::class_<SpectrumResult>(m, "SpectrumResult")
        .def_readonly("values", &SpectrumResult::values)
        .def_readonly("detected", &SpectrumResult::detected)
        .def_readonly("matvecs", &SpectrumResult::matvecs)
        .def("vector", [](const SpectrumResult& s, std::size_t i) {
            return to_numpy(s.vectors.at(i));
        });

    m.def("unfold", &unfold, py::arg("mu"), py::arg("t_eff"));
    m.def("band_fold", &band_fold, py::arg("lam"), py::arg("g"));
    m.def("band_distance", &band_distance, py::arg("a"), py::arg("b"), py::arg("g"));
    m.def("monodromy_spectrum", &monodromy_spectrum, py::arg("config"),
          py::arg("mu_floor") = 1e-14, py::call_guard<py::gil_scoped_release>());
    m.def("no_hole_monodromy_eigs", &no_hole_monodromy_eigs, py::arg("config"), py::arg("m"));
    m.def("no_hole_plane_wave_rho", &no_hole_plane_wave_rho, py::arg("config"), py::arg("k"),
          py::arg("m"));
    m.def("no_hole_monodromy_log_modulus", &no_hole_monodromy_log_modulus, py::arg("config"),
          py::arg("m"));

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("parameters", &SweepResult::parameters)
        .def_readonly("matches", &SweepResult::matches)
        .def_readonly("failures", &SweepResult::failures)
        .def("branch", [](const SweepResult& s, std::size_t i) { return s.branches.at(i); });
    m.def("sweep_q", &sweep_q, py::arg("config"), py::arg("q_values"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());

    py::class_<StripConfig>(m, "StripConfig")
        .def(py::init([](const HoleShape& shape, int N, int L, double g, double q, double T,
                         int Nt, int arnoldi_m, double arnoldi_tol, std::uint64_t seed,
                         double solver_tol, int solver_maxit) {
                 StripConfig sc;
                 sc.shape = shape;
                 sc.N = N;
                 sc.L = L;
                 sc.g = g;
                 sc.q = q;
                 sc.T = T;
                 sc.Nt = Nt;
                 sc.arnoldi_m = arnoldi_m;
                 sc.arnoldi_tol = arnoldi_tol;
                 sc.seed = seed;
                 sc.solver = SolveOptions{solver_tol, solver_maxit, 50, 50};
                 return sc;
             }),
             py::arg("shape") = HoleShape::none(), py::arg("N") = 16, py::arg("L") = 2,
             py::arg("g") = 0.0, py::arg("q") = 0.0, py::arg("T") = 0.0, py::arg("Nt") = 128,
             py::arg("arnoldi_m") = 20, py::arg("arnoldi_tol") = 1e-9, py::arg("seed") = 1,
             py::arg("solver_tol") = 1e-12, py::arg("solver_maxit") = 8000);
    m.def("strip_spectrum", &strip_spectrum, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<PseudoInvarianceReport>(m, "PseudoInvarianceReport")
        .def_readonly("max_mismatch", &PseudoInvarianceReport::max_mismatch)
        .def_readonly("tol", &PseudoInvarianceReport::tol)
        .def_readonly("pass_", &PseudoInvarianceReport::pass)
        .def("pairs", [](const PseudoInvarianceReport& r) {
            std::vector<std::tuple<int, int, double>> out;
            for (const auto& p : r.pairs) out.emplace_back(p.strip_index, p.mono_index, p.mismatch);
            return out;
        });
    m.def("pseudo_invariance_check", &pseudo_invariance_check, py::arg("mono"), py::arg("strip"),
          py::arg("g"), py::arg("tol"));

    py::class_<ReconstructResult>(m, "ReconstructResult")
        .def_property_readonly("u", [](const ReconstructResult& r) { return to_numpy(r.u); })
        .def_readonly("lambda0", &ReconstructResult::lambda0)
        .def_readonly("residual", &ReconstructResult::residual)
        .def_readonly("localization", &ReconstructResult::localization)
        .def_readonly("translate_pairing", &ReconstructResult::translate_pairing);
    m.def(
        "reconstruct_eigenfunction",
        [](const ProblemConfig& c, cdouble mu, const py::array_t<cdouble>& w0, int L,
           double accept_residual) {
            return reconstruct_eigenfunction(c, mu, to_cvector(w0), L, accept_residual);
        },
        py::arg("config"), py::arg("mu"), py::arg("w0"), py::arg("L"),
        py::arg("accept_residual") = 1e-6);

    py::class_<PseudospectraGrid>(m, "PseudospectraGrid")
        .def_property_readonly("z", [](const PseudospectraGrid& g) { return to_numpy(g.z); })
        .def_readonly("value", &PseudospectraGrid::value)
        .def_property_readonly("converged", [](const PseudospectraGrid& g) {
            std::vector<bool> out(g.converged.begin(), g.converged.end());
            return out;
        });
    m.def(
        "pseudospectra_grid",
        [](const SparseMatrix& A, const std::vector<cdouble>& zs, double tol, int maxit,
           std::uint64_t seed, double solver_tol, int solver_maxit, int threads) {
            PseudospectraOptions opts;
            opts.tol = tol;
            opts.maxit = maxit;
            opts.seed = seed;
            opts.solver = SolveOptions{solver_tol, solver_maxit, 50, 50};
            opts.threads = threads;
            return pseudospectra_grid(A, zs, opts);
        },
        py::arg("A"), py::arg("z_values"), py::arg("tol") = 1e-3, py::arg("maxit") = 200,
        py::arg("seed") = 7, py::arg("solver_tol") = 1e-8, py::arg("solver_maxit") = 20000,
        py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());

    m.def("airy_ai", &airy_ai, py::arg("x"));
    m.def("airy_first_zero", &airy_first_zero);

    py::class_<PowerLawFit>(m, "PowerLawFit")
        .def_readonly("exponent", &PowerLawFit::exponent)
        .def_readonly("prefactor", &PowerLawFit::prefactor)
        .def_readonly("rms", &PowerLawFit::rms);
    m.def("fit_power_law", &fit_power_law, py::arg("points"));

    py::class_<AsymptoticRow>(m, "AsymptoticRow")
        .def_readonly("g", &AsymptoticRow::g)
        .def_readonly("lambda_min", &AsymptoticRow::lambda_min)
        .def_readonly("re_scaled", &AsymptoticRow::re_scaled)
        .def_readonly("im_scaled", &AsymptoticRow::im_scaled)
        .def_readonly("missing", &AsymptoticRow::missing);
    py::class_<AsymptoticReport>(m, "AsymptoticReport")
        .def_readonly("rows", &AsymptoticReport::rows)
        .def_readonly("target_re", &AsymptoticReport::target_re)
        .def_readonly("target_im", &AsymptoticReport::target_im)
        .def_readonly("fit", &AsymptoticReport::fit);
    m.def("asymptotic_report", &asymptotic_report, py::arg("configs"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("asymptotic_report_from_values", &asymptotic_report_from_values, py::arg("per_g"),
          py::arg("r"));

    m.def(
        "solve",
        [](const SparseMatrix& A, const py::array_t<cdouble>& b, double tol, int maxit) {
            auto r = solve(A, to_cvector(b), SolveOptions{tol, maxit, 50, 50});
            return py::make_tuple(to_numpy(r.x), r.iterations, r.residual);
        },
        py::arg("A"), py::arg("b"), py::arg("tol") = 1e-12, py::arg("maxit") = 4000);

    m.def(
        "arnoldi",
        [](const SparseMatrix& A, int mdim, double tol, std::uint64_t seed) {
            ArnoldiOptions opts;
            opts.m = mdim;
            opts.tol = tol;
            opts.seed = seed;
            RitzSet rs = arnoldi([&](const cvector& x, cvector& y) { A.apply(x, y); }, A.n(),
                                 opts);
            std::vector<std::tuple<cdouble, double, bool>> out;
            for (const auto& p : rs.pairs) out.emplace_back(p.value, p.residual, p.converged);
            return out;
        },
        py::arg("A"), py::arg("m"), py::arg("tol") = 1e-10, py::arg("seed") = 1);
}
