#include "btspec/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace btspec {

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

std::string csv_header(const RunConfig& cfg) {
    std::ostringstream out;
    out << "# btspec " << TOOL_VERSION << "\n";
    out << "# caveat: " << SUBSET_CAVEAT << "\n";
    for (const auto& [k, v] : cfg.resolved) out << "# config: " << k << " = " << v << "\n";
    return out.str();
}

} // namespace

std::string spectrum_csv(const RunConfig& cfg, const std::vector<BranchEigenvalue>& values) {
    std::ostringstream out;
    out << csv_header(cfg);
    out << "q,p0,g,s,re_lambda,im_lambda,abs_mu,residual,method\n";
    for (const auto& v : values) {
        out << format_g17(v.q) << ',' << format_g17(v.p0) << ',' << format_g17(v.g) << ','
            << v.s << ',' << format_g17(v.lambda.real()) << ',' << format_g17(v.lambda.imag())
            << ',' << format_g17(std::abs(v.mu)) << ',' << format_g17(v.residual) << ','
            << method_name(v.method) << "\n";
    }
    return out.str();
}

std::string pseudospectra_csv(const RunConfig& cfg, const PseudospectraGrid& grid) {
    std::ostringstream out;
    out << csv_header(cfg);
    out << "re_z,im_z,resolvent_norm,converged\n";
    for (std::size_t i = 0; i < grid.z.size(); ++i) {
        out << format_g17(grid.z[i].real()) << ',' << format_g17(grid.z[i].imag()) << ','
            << format_g17(grid.value[i]) << ',' << (grid.converged[i] ? 1 : 0) << "\n";
    }
    return out.str();
}

std::string asymptotics_csv(const RunConfig& cfg, const AsymptoticReport& report) {
    std::ostringstream out;
    out << csv_header(cfg);
    out << "g,re_lambda_min,im_lambda_min,re_scaled,im_scaled,target_re,target_im\n";
    for (const auto& row : report.rows) {
        if (row.missing) {
            out << format_g17(row.g) << ",nan,nan,nan,nan," << format_g17(report.target_re)
                << ',' << format_g17(report.target_im) << "\n";
            continue;
        }
        out << format_g17(row.g) << ',' << format_g17(row.lambda_min.real()) << ','
            << format_g17(row.lambda_min.imag()) << ',' << format_g17(row.re_scaled) << ','
            << format_g17(row.im_scaled) << ',' << format_g17(report.target_re) << ','
            << format_g17(report.target_im) << "\n";
    }
    return out.str();
}

std::string eigenfunction_csv(const RunConfig& cfg, const ReconstructResult& rec) {
    std::ostringstream out;
    out << csv_header(cfg);
    out << "# lambda0 = " << format_g17(rec.lambda0.real()) << " + "
        << format_g17(rec.lambda0.imag()) << "i\n";
    out << "x,y,re_u,im_u\n";
    CellGrid grid = build_strip_grid(rec.strip_N, rec.strip_L, cfg.hole_shape());
    for (int i = 0; i < grid.active_count(); ++i) {
        auto [ix, iy] = grid.point_of_active(i);
        out << format_g17(grid.x_coord(ix)) << ',' << format_g17(grid.y_coord(iy)) << ','
            << format_g17(rec.u[i].real()) << ',' << format_g17(rec.u[i].imag()) << "\n";
    }
    return out.str();
}

std::string summary_json(const RunConfig& cfg, const std::string& command,
                         const std::string& payload_json, double wall_seconds) {
    nlohmann::json j;
    j["tool"] = "btspec";
    j["version"] = TOOL_VERSION;
    j["command"] = command;
    j["caveat"] = SUBSET_CAVEAT;
    j["wall_time_s"] = wall_seconds;
    j["timestamp_unix"] = static_cast<long long>(std::time(nullptr));
    nlohmann::json cfgj = nlohmann::json::object();
    for (const auto& [k, v] : cfg.resolved) cfgj[k] = v;
    j["config"] = cfgj;
    j["result"] = nlohmann::json::parse(payload_json);
    return j.dump(2) + "\n";
}

namespace {

// simple diverging palette over [0, 1]
std::string heat_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    int r = static_cast<int>(255 * std::min(1.0, 2.0 * t));
    int b = static_cast<int>(255 * std::min(1.0, 2.0 * (1.0 - t)));
    int g = static_cast<int>(128 * (1.0 - std::abs(2.0 * t - 1.0)));
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

} // namespace

std::string spectral_curves_svg(const std::vector<BranchEigenvalue>& values) {
    const int W = 640, H = 480, M = 50;
    double re_min = 0, re_max = 1, im_min = -1, im_max = 1, q_max = 1e-12;
    if (!values.empty()) {
        re_min = re_max = values[0].lambda.real();
        im_min = im_max = values[0].lambda.imag();
        for (const auto& v : values) {
            re_min = std::min(re_min, v.lambda.real());
            re_max = std::max(re_max, v.lambda.real());
            im_min = std::min(im_min, v.lambda.imag());
            im_max = std::max(im_max, v.lambda.imag());
            q_max = std::max(q_max, v.q);
        }
    }
    double re_span = std::max(re_max - re_min, 1e-12), im_span = std::max(im_max - im_min, 1e-12);
    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << W / 2 << "' y='20' text-anchor='middle' font-size='14'>"
           "branch values: Im vs Re, colored by q</text>\n";
    out << "<line x1='" << M << "' y1='" << H - M << "' x2='" << W - M << "' y2='" << H - M
        << "' stroke='black'/>\n";
    out << "<line x1='" << M << "' y1='" << M << "' x2='" << M << "' y2='" << H - M
        << "' stroke='black'/>\n";
    for (const auto& v : values) {
        double x = M + (v.lambda.real() - re_min) / re_span * (W - 2 * M);
        double y = H - M - (v.lambda.imag() - im_min) / im_span * (H - 2 * M);
        out << "<circle cx='" << x << "' cy='" << y << "' r='4' fill='"
            << heat_color(v.q / q_max) << "'/>\n";
    }
    out << "<text x='" << W - M << "' y='" << H - M + 30 << "' text-anchor='end' font-size='12'>"
        << "Re in [" << format_g17(re_min) << ", " << format_g17(re_max) << "]</text>\n";
    out << "<text x='" << M << "' y='" << M - 8 << "' font-size='12'>Im in ["
        << format_g17(im_min) << ", " << format_g17(im_max) << "]</text>\n";
    out << "</svg>\n";
    return out.str();
}

std::string pseudospectra_svg(const PseudospectraGrid& grid, int nre, int nim) {
    const int cell = std::max(2, 480 / std::max(nre, nim));
    const int W = nre * cell + 100, H = nim * cell + 60;
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < grid.value.size(); ++i) {
        if (!grid.converged[i] || grid.value[i] <= 0.0) continue;
        lo = std::min(lo, std::log10(grid.value[i]));
        hi = std::max(hi, std::log10(grid.value[i]));
    }
    if (lo > hi) { lo = 0.0; hi = 1.0; }
    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << W / 2 << "' y='16' text-anchor='middle' font-size='13'>"
           "log10 resolvent norm (x: Re z, y: Im z)</text>\n";
    for (int j = 0; j < nim; ++j) {
        for (int i = 0; i < nre; ++i) {
            std::size_t idx = static_cast<std::size_t>(j) * nre + i;
            if (idx >= grid.value.size()) continue;
            std::string color = "#888888"; // diverged points in grey
            if (grid.converged[idx] && grid.value[idx] > 0.0)
                color = heat_color((std::log10(grid.value[idx]) - lo) / std::max(hi - lo, 1e-12));
            out << "<rect x='" << 50 + i * cell << "' y='" << 30 + (nim - 1 - j) * cell
                << "' width='" << cell << "' height='" << cell << "' fill='" << color << "'/>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << content;
}

} // namespace btspec
