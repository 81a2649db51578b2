#pragma once

#include <functional>
#include <span>
#include <vector>

namespace rearr::quad {

using Integrand = std::function<double(double)>;

/// 16-point Gauss-Legendre on each panel [knots[i], knots[i+1]].
/// Integrands with jumps or kinks integrate exactly-to-rounding as long as
/// every discontinuity is a knot.
double gauss_panels(const Integrand& f, std::span<const double> knots);

/// Nodes and weights of the composite 16-point rule on the given panels.
struct CompositeRule {
  std::vector<double> x;
  std::vector<double> w;
};
CompositeRule gauss_rule(std::span<const double> knots);

/// Integral of f over [a, b] (0 < a < b) after the substitution s = exp(u),
/// with `panels` equal panels in u. Suited to power and log behaviour at 0.
double log_panels(const Integrand& f, double a, double b, int panels);

/// Double-exponential rule on a finite interval; tolerates endpoint singularities.
double tanh_sinh(const Integrand& f, double a, double b);

/// Double-exponential rule on [a, +inf).
double exp_sinh(const Integrand& f, double a);

/// `n` log-spaced points from a to b inclusive (0 < a <= b).
std::vector<double> log_space(double a, double b, int n);

/// Divergence test on values of a truncated integral J(tau) at three nested
/// cutoffs tau0 > tau0^2 > tau0^4. Divergent when J grows and the second
/// increment keeps at least 2/3 of the first; this separates log and log-log
/// growth from convergent tails, whose increments collapse.
bool nested_growth_diverges(double j1, double j2, double j3, double cap = 1e12);

/// Nested cutoffs used by nested_growth_diverges, scaled by `mass`.
std::vector<double> nested_cutoffs(double mass);

}  // namespace rearr::quad
