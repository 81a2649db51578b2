#pragma once

namespace rearr::special {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

/// Standard normal density.
double normal_pdf(double x);

/// Standard normal CDF, erfc-based so the lower tail keeps full relative accuracy.
double normal_cdf(double x);

/// Upper tail 1 - normal_cdf(x) without cancellation.
double normal_sf(double x);

/// Inverse of normal_cdf on (0, 1). Rational initial guess followed by one
/// Newton step against normal_cdf. Evaluated on the lower half and mirrored,
/// so normal_quantile(1 - p) == -normal_quantile(p) whenever 1 - p is exact.
double normal_quantile(double p);

/// Volume of the unit ball in R^n, via lgamma.
double unit_ball_volume(int n);

}  // namespace rearr::special
