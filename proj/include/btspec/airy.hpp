#pragma once

namespace btspec {

/// Ai(x) for |x| <= 20: Maclaurin series up to |x| = 8, standard asymptotic
/// expansions beyond. Throws outside the supported domain.
double airy_ai(double x);

/// Rightmost zero a1 of Ai, by bisection on [-3, -2] to 1e-10.
/// a1 = -2.33810741045976704 controls the g^{2/3} spectral asymptotics.
double airy_first_zero();

} // namespace btspec
