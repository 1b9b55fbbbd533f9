#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace btspec {

using cdouble = std::complex<double>;
using cvector = std::vector<cdouble>;

inline constexpr double PI = 3.14159265358979323846;

/// Conjugate-linear in the first argument: <a,b> = sum conj(a_i) b_i.
inline cdouble dot(const cvector& a, const cvector& b) {
    cdouble s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

/// Non-conjugated pairing: sum a_i b_i.
inline cdouble bilinear_dot(const cvector& a, const cvector& b) {
    cdouble s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const cvector& a) {
    double s = 0.0;
    for (const auto& v : a) s += std::norm(v);
    return std::sqrt(s);
}

/// y += alpha * x
inline void axpy(cdouble alpha, const cvector& x, cvector& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(cdouble alpha, cvector& x) {
    for (auto& v : x) v *= alpha;
}

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace btspec
