#pragma once

#include "btspec/config.hpp"
#include "btspec/spectra.hpp"

#include <string>

namespace btspec {

inline constexpr const char* TOOL_VERSION = "0.1.0";

/// Caveat carried by every spectral output: sweeps approximate the spectrum
/// from inside (Prop-type inclusion); equality is conjectural.
inline constexpr const char* SUBSET_CAVEAT =
    "branch sets are a subset approximation of the fiber spectrum; "
    "equality with the full union over q is a conjecture, not a result";

/// 17-significant-digit decimal formatting shared by all CSV writers; the
/// bodies are byte-identical across reruns of the same config and seed.
std::string format_g17(double x);

std::string spectrum_csv(const RunConfig& cfg, const std::vector<BranchEigenvalue>& values);
std::string pseudospectra_csv(const RunConfig& cfg, const PseudospectraGrid& grid);
std::string asymptotics_csv(const RunConfig& cfg, const AsymptoticReport& report);
std::string eigenfunction_csv(const RunConfig& cfg, const ReconstructResult& rec);

/// JSON run summary: config echo, counts, fit results, wall time. Timestamps
/// live only here, never in the CSV bodies.
std::string summary_json(const RunConfig& cfg, const std::string& command,
                         const std::string& payload_json, double wall_seconds);

/// Scatter of branch values (Re lambda vs Im lambda, colored by q).
std::string spectral_curves_svg(const std::vector<BranchEigenvalue>& values);
/// Heatmap of log10 resolvent norm over the sampled z window.
std::string pseudospectra_svg(const PseudospectraGrid& grid, int nre, int nim);

void write_text_file(const std::string& path, const std::string& content);

} // namespace btspec
