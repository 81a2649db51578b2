#include "rearr/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "rearr/error.hpp"

namespace rearr::quad {

namespace {
using Rule = boost::math::quadrature::gauss<double, 16>;

double panel(const Integrand& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  // Boost stores the non-negative half of a symmetric rule; 16 is even, no zero node.
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += w[i] * (f(mid - half * x[i]) + f(mid + half * x[i]));
  }
  return s * half;
}
}  // namespace

double gauss_panels(const Integrand& f, std::span<const double> knots) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (knots[i + 1] > knots[i]) s += panel(f, knots[i], knots[i + 1]);
  }
  return s;
}

CompositeRule gauss_rule(std::span<const double> knots) {
  CompositeRule r;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (!(knots[i + 1] > knots[i])) continue;
    const double half = 0.5 * (knots[i + 1] - knots[i]);
    const double mid = 0.5 * (knots[i] + knots[i + 1]);
    for (std::size_t k = x.size(); k-- > 0;) {
      r.x.push_back(mid - half * x[k]);
      r.w.push_back(half * w[k]);
    }
    for (std::size_t k = 0; k < x.size(); ++k) {
      r.x.push_back(mid + half * x[k]);
      r.w.push_back(half * w[k]);
    }
  }
  return r;
}

double log_panels(const Integrand& f, double a, double b, int panels) {
  require(a > 0.0 && b >= a && panels >= 1, "log_panels: need 0 < a <= b");
  if (b == a) return 0.0;
  const double ua = std::log(a);
  const double ub = std::log(b);
  const double du = (ub - ua) / panels;
  const Integrand g = [&](double u) {
    const double s = std::exp(u);
    return f(s) * s;
  };
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = ua + i * du;
    const double hi = (i + 1 == panels) ? ub : ua + (i + 1) * du;
    sum += panel(g, lo, hi);
  }
  return sum;
}

double tanh_sinh(const Integrand& f, double a, double b) {
  if (b <= a) return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> rule;
  return rule.integrate(f, a, b);
}

double exp_sinh(const Integrand& f, double a) {
  static thread_local boost::math::quadrature::exp_sinh<double> rule;
  if (a == 0.0) return rule.integrate(f);
  return rule.integrate([&](double u) { return f(u + a); });
}

std::vector<double> log_space(double a, double b, int n) {
  require(a > 0.0 && b >= a && n >= 1, "log_space: need 0 < a <= b, n >= 1");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = a;
    return out;
  }
  const double la = std::log(a);
  const double lb = std::log(b);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / (n - 1));
  out.front() = a;
  out.back() = b;
  return out;
}

bool nested_growth_diverges(double j1, double j2, double j3, double cap) {
  if (!std::isfinite(j3) || j3 > cap) return true;
  const double d1 = j2 - j1;
  const double d2 = j3 - j2;
  if (!(d2 > 0.0)) return false;
  return d2 >= (2.0 / 3.0) * d1;
}

std::vector<double> nested_cutoffs(double mass) { return {mass * 1e-3, mass * 1e-6, mass * 1e-12}; }

}  // namespace rearr::quad
