#pragma once

#include "btspec/operators.hpp"
#include "btspec/spectra.hpp"

#include <map>
#include <string>

namespace btspec {

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

/// File-backed run configuration: plain "key = value" lines, '#' comments,
/// unknown keys rejected. Every run embeds the resolved key set in its
/// outputs, so parsing is loss-free and deterministic.
struct RunConfig {
    // core problem
    double g = 20.0;          // gradient strength (> 0)
    double q = 0.0;           // y-quasimomentum, radians
    double p0 = 0.0;          // initial x-Floquet parameter, radians
    std::string shape = "disk"; // none | disk | ellipse
    double radius = 0.25;     // disk radius, cell units
    double ellipse_a = 0.3;   // ellipse semi-axes, cell units
    double ellipse_b = 0.2;
    int N = 64;               // grid points per cell side
    int Nt = 0;               // CN steps per period (0 = default 256)
    int s = 1;                // monodromy periods composed (0 = auto)
    double mu_target = 0.1;   // auto-s target: |mu|^s <= mu_target
    int arnoldi_m = 24;
    double arnoldi_tol = 1e-9;
    std::uint64_t seed = 1;
    double solver_tol = 1e-12;
    int solver_maxit = 4000;

    // run control
    int threads = 0;          // 0 = hardware concurrency
    std::string out_dir = "out";
    bool plots = false;

    // sweep
    std::vector<double> q_values;
    std::string q_range;      // "start:stop:count" alternative to q_values

    // asymptotics
    std::vector<double> g_values;
    std::vector<double> N_values;
    std::vector<double> s_values; // 0 entries = auto

    // strip / crosscheck / reconstruct
    int L = 4;
    double T = 0.0;           // semigroup horizon (0 = t_g)
    int strip_Nt = 128;
    int strip_arnoldi_m = 20;

    // pseudospectra window
    double z_re_min = 0.0, z_re_max = 0.0;
    double z_im_min = 0.0, z_im_max = 0.0;
    int z_nre = 1, z_nim = 1;

    /// Resolved key set, in file order with defaults filled in, for embedding
    /// in outputs.
    std::map<std::string, std::string> resolved;

    HoleShape hole_shape() const;
    ProblemConfig problem() const;
    StripConfig strip(bool with_hole = true) const;
    std::vector<double> sweep_q_list() const;
    int effective_threads() const;

    /// s > 0 passes through; s = 0 picks the smallest s with the predicted
    /// |mu|^s at or below mu_target (the Airy-law estimate of Re lambda).
    int effective_s(double g_value) const;

    void validate() const;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

} // namespace btspec
