#pragma once

#include "btspec/airy.hpp"
#include "btspec/propagator.hpp"

#include <optional>
#include <string>

namespace btspec {

/// An unfolded spectral value lambda = -Log(mu)/t_g with its provenance.
/// Im(lambda) lies in the fundamental band [-g/2, g/2); the full spectrum of
/// the fiber operator is the ig Z lattice over these representatives.
struct BranchEigenvalue {
    cdouble lambda;
    cdouble mu;          // single-period monodromy value
    double residual = 0; // ||K v - mu v|| / ||v||, single-period map
    double q = 0, p0 = 0, g = 0;
    int s = 1;           // periods composed in the Arnoldi stage
    enum class Method { monodromy, strip } method = Method::monodromy;
};

const char* method_name(BranchEigenvalue::Method m);

struct SpectrumResult {
    std::vector<BranchEigenvalue> values;  // sorted by ascending Re lambda
    std::vector<cvector> vectors;          // Ritz vectors aligned with values
    bool detected = false;                 // false: no Ritz pair converged
    int matvecs = 0;                       // single-period monodromy applications
};

/// lambda = -Log(mu)/t_eff with the principal Log, Im lambda in
/// [-pi/t_eff, pi/t_eff); for one period t_eff = t_g this is [-g/2, g/2).
/// mu = 0 signals a pure decay mode and has no finite unfolding.
cdouble unfold(cdouble mu, double t_eff);

/// Fold Im(lambda) to the fundamental band [-g/2, g/2).
cdouble band_fold(cdouble lambda, double g);

/// Distance between band representatives modulo the ig lattice.
double band_distance(cdouble a, cdouble b, double g);

/// Arnoldi on the s-period monodromy; converged Ritz pairs are refined with a
/// single-period Rayleigh quotient (this undoes the mod-g/s Im aliasing of
/// mu^s), unfolded and returned with the single-period residual. Ritz values
/// with |mu| below mu_floor carry no finite eigenvalue and are dropped.
SpectrumResult monodromy_spectrum(const ProblemConfig& config, double mu_floor = 1e-14);

/// Closed-form eigenvalues of the no-hole monodromy in the y-mode sector m.
/// The pre-realignment evolution is diagonal on plane waves with factors
/// rho_k; realignment shifts x-modes down by one, so the monodromy is a
/// cyclic weighted shift: eigenvalues are the N-th roots of the product of
/// the rho_k (times the mode-wrap sign of the cell-centered grid).
std::vector<cdouble> no_hole_monodromy_eigs(const ProblemConfig& config, int m);

/// Scalar per-step product: the exact amplification of plane wave (k, m)
/// under the Nt Crank-Nicolson steps, before realignment.
cdouble no_hole_plane_wave_rho(const ProblemConfig& config, int k, int m);

/// log of the common eigenvalue modulus in sector m, the mean of log |rho_k|;
/// stays finite where the raw product would underflow.
double no_hole_monodromy_log_modulus(const ProblemConfig& config, int m);

struct SweepResult {
    std::vector<double> parameters;                 // q values (or g values)
    std::vector<SpectrumResult> branches;           // one entry per parameter
    // matches[i] pairs branch indices of parameters[i] with parameters[i+1];
    // a partial injection, nearest-neighbor with a 0.5 * min-gap threshold
    std::vector<std::vector<std::pair<int, int>>> matches;
    std::vector<std::string> failures;              // per-parameter error notes
};

SweepResult sweep_q(const ProblemConfig& config, const std::vector<double>& q_values,
                    int threads = 1);

/// Truncated-strip computation: Arnoldi on the constant-coefficient CN
/// semigroup exp(-T A) with A = -Lap_h + i g x. Im lambda is determined
/// modulo 2 pi / T, which for T = t_g is exactly the pseudo-invariance band.
struct StripConfig {
    HoleShape shape;
    int N = 16;
    int L = 4;
    double g = 0.0;   // g >= 0 here; g = 0 needs an explicit T
    double q = 0.0;
    double T = 0.0;   // 0 -> t_g = 2 pi / g
    int Nt = 128;
    int arnoldi_m = 20;
    double arnoldi_tol = 1e-9;
    std::uint64_t seed = 1;
    SolveOptions solver;

    double period() const;
};

SpectrumResult strip_spectrum(const StripConfig& cfg);

/// Pairing of strip values against monodromy values modulo ig.
struct PseudoInvarianceReport {
    struct Pair {
        int strip_index;
        int mono_index;
        double mismatch; // band distance
    };
    std::vector<Pair> pairs;
    double max_mismatch = 0.0;
    double tol = 0.0;
    bool pass = false; // max_mismatch <= tol (vacuously true when empty)
};

PseudoInvarianceReport pseudo_invariance_check(const std::vector<BranchEigenvalue>& mono,
                                               const std::vector<BranchEigenvalue>& strip,
                                               double g, double tol);

/// Prop-4.6-style reconstruction: evolve the monodromy eigenvector over one
/// period, un-gauge each snapshot to the strip with e^{i p(t) x}, weight by
/// e^{t lambda0} and average (the discrete p-integral). Returns the strip
/// state with residual/localization diagnostics.
struct ReconstructResult {
    cvector u;                    // on the active DOFs of the strip grid
    cdouble lambda0;
    double residual = 0.0;        // ||(A - lambda0) u|| / ||u|| over |x| <= L-1
    double localization = 0.0;    // fraction of ||u||^2 inside |x| <= 2
    cdouble translate_pairing;    // bilinear <u, conj(tau_1 u)> / ||u||^2
    int strip_N = 0, strip_L = 0;
};

ReconstructResult reconstruct_eigenfunction(const ProblemConfig& config, cdouble mu,
                                            const cvector& w0, int L,
                                            double accept_residual = 1e-6);

/// Resolvent-norm samples ||(A - z)^{-1}|| = 1/sigma_min(A - z) by inverse
/// power iteration on the normal equations (two linear solves per step).
struct PseudospectraGrid {
    std::vector<cdouble> z;
    std::vector<double> value;   // resolvent norm; meaningful when converged
    std::vector<char> converged; // 0 where the iteration or a solve diverged
};

struct PseudospectraOptions {
    double tol = 1e-3; // relative change of sigma between iterations
    int maxit = 200;
    std::uint64_t seed = 7;
    SolveOptions solver{1e-8, 20000, 50, 50};
    int threads = 1;
};

PseudospectraGrid pseudospectra_grid(const SparseMatrix& A, const std::vector<cdouble>& z_values,
                                     const PseudospectraOptions& opts = {});

struct PowerLawFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double rms = 0.0; // rms residual in log space
};

/// Least squares on (log g, log value); values must be positive.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points);

/// Airy-law report: for each g the branch value with minimal Re lambda,
/// scaled against the Theorem-5.1/5.2 targets |a1|/2 and (sqrt3/2)|a1|
/// (in g variables lambda ~ i g r + |a1| e^{-i pi/3} g^{2/3}).
struct AsymptoticRow {
    double g = 0.0;
    cdouble lambda_min;
    double re_scaled = 0.0;  // Re lambda * g^{-2/3}
    double im_scaled = 0.0;  // (g r - Im lambda) * g^{-2/3}
    bool missing = false;    // no converged branch at this g
};

struct AsymptoticReport {
    std::vector<AsymptoticRow> rows;
    double target_re = 0.0;  // |a1|/2
    double target_im = 0.0;  // (sqrt3/2)|a1|
    PowerLawFit fit;         // power law of Re lambda_min vs g
};

/// Core report from precomputed branch sets (one list per g, ascending g);
/// r is the hole's maximal x-extent.
AsymptoticReport asymptotic_report_from_values(
    const std::vector<std::pair<double, std::vector<BranchEigenvalue>>>& per_g, double r);

/// Convenience wrapper: runs monodromy_spectrum per config (all sharing shape
/// and q, ascending g), possibly in parallel.
AsymptoticReport asymptotic_report(const std::vector<ProblemConfig>& configs, int threads = 1);

} // namespace btspec
