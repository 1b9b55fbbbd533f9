#include "btspec/config.hpp"

#include "btspec/airy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace btspec {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for '" + key + "': " + v);
    }
}

int parse_int(const std::string& key, const std::string& v) {
    double x = parse_double(key, v);
    if (x != std::floor(x)) throw ConfigError("config: '" + key + "' must be an integer");
    return static_cast<int>(x);
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: '" + key + "' must be a boolean");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw ConfigError("config: empty list for '" + key + "'");
    return out;
}

std::string format_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
        if (i) out += ", ";
        out += buf;
    }
    return out;
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
        if (c.resolved.count(key))
            throw ConfigError("config: duplicate key '" + key + "'");
        c.resolved[key] = val;

        if (key == "g") c.g = parse_double(key, val);
        else if (key == "q") c.q = parse_double(key, val);
        else if (key == "p0") c.p0 = parse_double(key, val);
        else if (key == "shape") c.shape = val;
        else if (key == "radius") c.radius = parse_double(key, val);
        else if (key == "ellipse_a") c.ellipse_a = parse_double(key, val);
        else if (key == "ellipse_b") c.ellipse_b = parse_double(key, val);
        else if (key == "N") c.N = parse_int(key, val);
        else if (key == "Nt") c.Nt = parse_int(key, val);
        else if (key == "s") c.s = parse_int(key, val);
        else if (key == "mu_target") c.mu_target = parse_double(key, val);
        else if (key == "arnoldi_m") c.arnoldi_m = parse_int(key, val);
        else if (key == "arnoldi_tol") c.arnoldi_tol = parse_double(key, val);
        else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_double(key, val));
        else if (key == "solver_tol") c.solver_tol = parse_double(key, val);
        else if (key == "solver_maxit") c.solver_maxit = parse_int(key, val);
        else if (key == "threads") c.threads = parse_int(key, val);
        else if (key == "out_dir") c.out_dir = val;
        else if (key == "plots") c.plots = parse_bool(key, val);
        else if (key == "q_values") c.q_values = parse_list(key, val);
        else if (key == "q_range") c.q_range = val;
        else if (key == "g_values") c.g_values = parse_list(key, val);
        else if (key == "N_values") c.N_values = parse_list(key, val);
        else if (key == "s_values") c.s_values = parse_list(key, val);
        else if (key == "L") c.L = parse_int(key, val);
        else if (key == "T") c.T = parse_double(key, val);
        else if (key == "strip_Nt") c.strip_Nt = parse_int(key, val);
        else if (key == "strip_arnoldi_m") c.strip_arnoldi_m = parse_int(key, val);
        else if (key == "z_re_min") c.z_re_min = parse_double(key, val);
        else if (key == "z_re_max") c.z_re_max = parse_double(key, val);
        else if (key == "z_im_min") c.z_im_min = parse_double(key, val);
        else if (key == "z_im_max") c.z_im_max = parse_double(key, val);
        else if (key == "z_nre") c.z_nre = parse_int(key, val);
        else if (key == "z_nim") c.z_nim = parse_int(key, val);
        else throw ConfigError("config: unknown key '" + key + "'");
    }

    // fill the resolved map with the defaults that were not set explicitly
    auto put = [&](const std::string& k, const std::string& v) {
        if (!c.resolved.count(k)) c.resolved[k] = v;
    };
    char buf[64];
    auto fmt = [&](double x) {
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        return std::string(buf);
    };
    put("g", fmt(c.g));
    put("q", fmt(c.q));
    put("p0", fmt(c.p0));
    put("shape", c.shape);
    if (c.shape == "disk") put("radius", fmt(c.radius));
    if (c.shape == "ellipse") {
        put("ellipse_a", fmt(c.ellipse_a));
        put("ellipse_b", fmt(c.ellipse_b));
    }
    put("N", std::to_string(c.N));
    put("Nt", std::to_string(c.Nt));
    put("s", std::to_string(c.s));
    put("arnoldi_m", std::to_string(c.arnoldi_m));
    put("arnoldi_tol", fmt(c.arnoldi_tol));
    put("seed", std::to_string(c.seed));
    put("solver_tol", fmt(c.solver_tol));
    put("solver_maxit", std::to_string(c.solver_maxit));
    if (!c.q_values.empty()) c.resolved["q_values"] = format_list(c.q_values);
    if (!c.g_values.empty()) c.resolved["g_values"] = format_list(c.g_values);

    c.validate();
    return c;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void RunConfig::validate() const {
    if (!(g > 0.0)) throw ConfigError("config: g must be positive");
    if (shape != "none" && shape != "disk" && shape != "ellipse")
        throw ConfigError("config: shape must be none | disk | ellipse");
    if (N < 2) throw ConfigError("config: N >= 2 required");
    if (Nt != 0 && Nt < 8) throw ConfigError("config: Nt >= 8 (or 0 for the default)");
    if (s < 0) throw ConfigError("config: s >= 0 required (0 = auto)");
    if (!(mu_target > 0.0 && mu_target < 1.0))
        throw ConfigError("config: mu_target must lie in (0, 1)");
    if (arnoldi_m < 1) throw ConfigError("config: arnoldi_m >= 1 required");
    if (!(arnoldi_tol > 0.0)) throw ConfigError("config: arnoldi_tol must be positive");
    if (!(solver_tol > 0.0)) throw ConfigError("config: solver_tol must be positive");
    if (solver_maxit < 1) throw ConfigError("config: solver_maxit >= 1 required");
    if (threads < 0) throw ConfigError("config: threads >= 0 required");
    if (L < 0) throw ConfigError("config: L >= 0 required");
    if (T < 0.0) throw ConfigError("config: T >= 0 required (0 = t_g)");
    if (strip_Nt < 1) throw ConfigError("config: strip_Nt >= 1 required");
    if (z_nre < 1 || z_nim < 1) throw ConfigError("config: pseudospectra resolution >= 1");
    if (!N_values.empty() && N_values.size() != g_values.size())
        throw ConfigError("config: N_values must match g_values in length");
    if (!s_values.empty() && s_values.size() != g_values.size())
        throw ConfigError("config: s_values must match g_values in length");
    hole_shape(); // shape parameter ranges
}

HoleShape RunConfig::hole_shape() const {
    if (shape == "none") return HoleShape::none();
    if (shape == "disk") {
        try {
            return HoleShape::disk(radius);
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
    }
    try {
        return HoleShape::ellipse(ellipse_a, ellipse_b);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

ProblemConfig RunConfig::problem() const {
    ProblemConfig p;
    p.g = g;
    p.q = q;
    p.p0 = p0;
    p.shape = hole_shape();
    p.N = N;
    p.Nt = Nt;
    p.s = effective_s(g);
    p.arnoldi_m = arnoldi_m;
    p.arnoldi_tol = arnoldi_tol;
    p.seed = seed;
    p.solver_tol = solver_tol;
    p.solver_maxit = solver_maxit;
    return p;
}

StripConfig RunConfig::strip(bool with_hole) const {
    StripConfig sc;
    sc.shape = with_hole ? hole_shape() : HoleShape::none();
    sc.N = N;
    sc.L = L;
    sc.g = g;
    sc.q = q;
    sc.T = T;
    sc.Nt = strip_Nt;
    sc.arnoldi_m = strip_arnoldi_m;
    sc.arnoldi_tol = arnoldi_tol;
    sc.seed = seed;
    sc.solver = SolveOptions{solver_tol, solver_maxit, 50, 50};
    return sc;
}

std::vector<double> RunConfig::sweep_q_list() const {
    if (!q_values.empty() && !q_range.empty())
        throw ConfigError("config: give q_values or q_range, not both");
    if (!q_values.empty()) return q_values;
    if (q_range.empty()) throw ConfigError("config: sweep needs q_values or q_range");
    double start, stop;
    int count;
    char c1, c2;
    std::istringstream ss(q_range);
    if (!(ss >> start >> c1 >> stop >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1)
        throw ConfigError("config: q_range must be start:stop:count");
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i)
        out[i] = count == 1 ? start : start + (stop - start) * i / (count - 1);
    return out;
}

int RunConfig::effective_threads() const {
    if (threads > 0) return threads;
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

int RunConfig::effective_s(double g_value) const {
    if (s > 0) return s;
    // |mu| estimate from the Airy law Re lambda ~ (|a1|/2) g^{2/3}
    double re_lambda = 0.5 * std::abs(airy_first_zero()) * std::pow(g_value, 2.0 / 3.0);
    double log_mu = -re_lambda * 2.0 * PI / g_value;
    int chosen = static_cast<int>(std::ceil(std::log(mu_target) / log_mu));
    return std::max(1, chosen);
}

} // namespace btspec
