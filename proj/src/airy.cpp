#include "btspec/airy.hpp"

#include "btspec/types.hpp"

#include <cmath>

namespace btspec {

namespace {

// Ai(0) = 3^{-2/3}/Gamma(2/3) and Ai'(0) = -3^{-1/3}/Gamma(1/3)
constexpr double AI0 = 0.35502805388781723926;
constexpr double AIP0 = -0.25881940379280679841;

// Ai(x) = Ai(0) f(x) + Ai'(0) g(x) with f'' = xf, g'' = xg
double maclaurin(double x) {
    const double x3 = x * x * x;
    double f = 1.0, tf = 1.0;
    double g = x, tg = x;
    for (int k = 0; k < 60; ++k) {
        tf *= x3 / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
        tg *= x3 / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
        f += tf;
        g += tg;
        if (std::abs(tf) < 1e-18 && std::abs(tg) < 1e-18) break;
    }
    return AI0 * f + AIP0 * g;
}

// u_0 = 1, u_{k+1} = u_k (6k+1)(6k+3)(6k+5) / (216 (k+1)(2k+1))
double u_coeff(int k) {
    double u = 1.0;
    for (int i = 0; i < k; ++i)
        u *= (6.0 * i + 1.0) * (6.0 * i + 3.0) * (6.0 * i + 5.0) /
             (216.0 * (i + 1.0) * (2.0 * i + 1.0));
    return u;
}

double asymptotic_positive(double x) {
    const double zeta = (2.0 / 3.0) * std::pow(x, 1.5);
    double sum = 0.0, term = 1.0;
    for (int k = 0; k <= 8; ++k) {
        sum += term;
        term *= -u_coeff(k + 1) / u_coeff(k) / zeta;
    }
    return std::exp(-zeta) / (2.0 * std::sqrt(PI) * std::pow(x, 0.25)) * sum;
}

double asymptotic_negative(double xabs) {
    const double zeta = (2.0 / 3.0) * std::pow(xabs, 1.5);
    double ceven = 0.0, codd = 0.0;
    for (int k = 0; k <= 4; ++k) {
        double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        ceven += sgn * u_coeff(2 * k) / std::pow(zeta, 2.0 * k);
        codd += sgn * u_coeff(2 * k + 1) / std::pow(zeta, 2.0 * k + 1.0);
    }
    const double phase = zeta - PI / 4.0;
    return (std::cos(phase) * ceven + std::sin(phase) * codd) /
           (std::sqrt(PI) * std::pow(xabs, 0.25));
}

} // namespace

double airy_ai(double x) {
    if (std::abs(x) > 20.0) throw Error("airy_ai: |x| <= 20 supported");
    if (std::abs(x) <= 8.0) return maclaurin(x);
    return x > 0.0 ? asymptotic_positive(x) : asymptotic_negative(-x);
}

double airy_first_zero() {
    double lo = -3.0, hi = -2.0;
    double flo = airy_ai(lo);
    while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        double fm = airy_ai(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace btspec
