#include "rearr/norms.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <sstream>
#include <vector>

#include "rearr/error.hpp"
#include "rearr/quadrature.hpp"

namespace rearr {

namespace {

/// Panels on [a, b] (a > 0) with ratio at most 2 between consecutive knots.
double geometric_gauss(const quad::Integrand& f, double a, double b) {
  if (!(b > a)) return 0.0;
  std::vector<double> knots{a};
  while (knots.back() * 2.0 < b) knots.push_back(knots.back() * 2.0);
  knots.push_back(b);
  return quad::gauss_panels(f, knots);
}

/// Panels of width at most `width` on [a, b].
double uniform_gauss(const quad::Integrand& f, double a, double b, double width) {
  if (!(b > a)) return 0.0;
  const int n = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
  std::vector<double> knots(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) knots[static_cast<std::size_t>(i)] = a + (b - a) * i / n;
  knots.back() = b;
  return quad::gauss_panels(f, knots);
}

double finish(double sum, double power, double cap) {
  if (!std::isfinite(sum)) return kInfinity;
  const double v = (power == 1.0) ? sum : std::pow(std::max(sum, 0.0), 1.0 / power);
  return v > cap ? kInfinity : v;
}

std::string fmt(double x) {
  if (std::isinf(x)) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double parse_number(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "INF") return kInfinity;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw PreconditionError("norm descriptor: bad number '" + s + "'");
  }
  require(used == s.size(), "norm descriptor: bad number '" + s + "'");
  return v;
}

struct Layout {
  std::span<const double> b;  // breakpoints
  std::span<const double> v;  // values
  double length;
  double mass;
  double total;  // ∫ f* over (0, length)
};

Layout layout(const NormDescriptor& norm, const StepFunction& f) {
  Layout l{f.breaks(), f.values(), f.length(), norm.mass.value_or(f.length()), f.total_integral()};
  require(l.mass >= l.length * (1.0 - 1e-12), "norm: mass shorter than the rearrangement");
  return l;
}

double lp_value(const NormDescriptor& n, const StepFunction& f, double cap) {
  const auto v = f.values();
  const auto b = f.breaks();
  if (std::isinf(n.p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
  }
  double s = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) s += std::pow(std::fabs(v[j]), n.p) * (b[j + 1] - b[j]);
  return finish(s, n.p, cap);
}

double lorentz_value(const NormDescriptor& n, const StepFunction& f, double cap) {
  const Layout l = layout(n, f);
  const double p = n.p;
  const double q = n.q;
  if (l.v.empty() || l.total == 0.0) return 0.0;
  if (std::isinf(q)) {
    // sup of t^{1/p - 1} (c + v t) on each piece; c = F(b_j) - v b_j.
    const double a = 1.0 / p - 1.0;
    double best = 0.0;
    auto g = [&](double t, double c, double v) { return std::pow(t, a) * (c + v * t); };
    for (std::size_t j = 0; j < l.v.size(); ++j) {
      const double lo = l.b[j];
      const double hi = l.b[j + 1];
      const double c = f.prefix(j) - l.v[j] * lo;
      if (lo > 0.0) best = std::max(best, g(lo, c, l.v[j]));
      best = std::max(best, g(hi, c, l.v[j]));
      if (l.v[j] != 0.0 && a + 1.0 != 0.0) {
        const double tc = -a * c / (l.v[j] * (a + 1.0));
        if (tc > lo && tc < hi) best = std::max(best, g(tc, c, l.v[j]));
      }
    }
    if (l.mass > l.length) {
      if (a > 0.0) best = std::max(best, std::isinf(l.mass) ? kInfinity : g(l.mass, l.total, 0.0));
    }
    return best > cap ? kInfinity : best;
  }
  double s = 0.0;
  // First piece: f** = v0, ∫_0^b (v0 t^{1/p})^q dt/t = v0^q b^{q/p} p/q.
  s += std::pow(l.v[0], q) * std::pow(l.b[1], q / p) * p / q;
  for (std::size_t j = 1; j < l.v.size(); ++j) {
    const double pj = f.prefix(j);
    const double vj = l.v[j];
    const double bj = l.b[j];
    s += geometric_gauss(
        [&](double t) {
          const double F = pj + vj * (t - bj);
          return std::pow(t, q / p - 1.0) * std::pow(F / t, q);
        },
        bj, l.b[j + 1]);
  }
  if (l.mass > l.length) {
    const double e = q / p - q;
    const double P = std::pow(l.total, q);
    if (e == 0.0) {
      s += std::isinf(l.mass) ? kInfinity : P * std::log(l.mass / l.length);
    } else if (std::isinf(l.mass)) {
      s += (e < 0.0) ? -P * std::pow(l.length, e) / e : kInfinity;
    } else {
      s += P * (std::pow(l.mass, e) - std::pow(l.length, e)) / e;
    }
  }
  return finish(s, q, cap);
}

double lorentz_osc_value(const NormDescriptor& n, const StepFunction& f, double cap) {
  const Layout l = layout(n, f);
  const double q = n.q;
  double s = 0.0;
  // On piece j the oscillation is E_j / t, so ∫ (E_j/t)^q dt/t = E_j^q (b_j^{-q} - b_{j+1}^{-q}) / q.
  for (std::size_t j = 1; j < l.v.size(); ++j) {
    const double e = f.excess(j);
    if (e == 0.0) continue;
    s += std::pow(e, q) * (std::pow(l.b[j], -q) - std::pow(l.b[j + 1], -q)) / q;
  }
  if (l.mass > l.length && l.total != 0.0) {
    const double upper = std::isinf(l.mass) ? 0.0 : std::pow(l.mass, -q);
    s += std::pow(std::fabs(l.total), q) * (std::pow(l.length, -q) - upper) / q;
  }
  return finish(s, q, cap);
}

double linf_inf_value(const NormDescriptor& n, const StepFunction& f) {
  const Layout l = layout(n, f);
  double best = 0.0;
  for (std::size_t j = 1; j < l.v.size(); ++j) best = std::max(best, f.excess(j) / l.b[j]);
  if (l.mass > l.length && !l.v.empty()) best = std::max(best, std::max(0.0, l.total) / l.length);
  return best;
}

double bwh_value(const NormDescriptor& nd, const StepFunction& f, double cap) {
  const Layout l = layout(nd, f);
  require(std::fabs(l.mass - 1.0) <= 1e-12, "BWH norm: requires M = 1");
  const double n = nd.p;
  if (l.v.empty() || l.total == 0.0) return 0.0;
  double s = 0.0;
  if (l.v[0] > 0.0) {
    if (n <= 1.0) return kInfinity;
    // u = 1 + log(1/s): ∫_u1^∞ u^{-n} du = u1^{1-n}/(n-1).
    const double u1 = 1.0 + std::log(1.0 / l.b[1]);
    s += std::pow(l.v[0], n) * std::pow(u1, 1.0 - n) / (n - 1.0);
  }
  auto piece = [&](double pj, double vj, double bj, double lo, double hi) {
    return geometric_gauss(
        [&](double t) {
          const double avg = (pj + vj * (t - bj)) / t;
          return std::pow(avg / (1.0 + std::log(1.0 / t)), n) / t;
        },
        lo, hi);
  };
  for (std::size_t j = 1; j < l.v.size(); ++j) s += piece(f.prefix(j), l.v[j], l.b[j], l.b[j], l.b[j + 1]);
  if (l.length < 1.0) s += piece(l.total, 0.0, l.length, l.length, 1.0);
  return finish(s, n, cap);
}

double lq_log_l_value(const NormDescriptor& nd, const StepFunction& f, double cap) {
  const Layout l = layout(nd, f);
  require(std::fabs(l.mass - 1.0) <= 1e-12, "LqLogL norm: requires M = 1");
  const double q = nd.q;
  const double a = nd.alpha;
  if (l.v.empty()) return 0.0;
  double s = 0.0;
  if (l.v[0] != 0.0) {
    // ∫_0^b (1 + log 1/t)^a dt = e Γ(a + 1, 1 + log 1/b).
    const double x = 1.0 + std::log(1.0 / l.b[1]);
    s += std::pow(std::fabs(l.v[0]), q) * std::exp(1.0) * boost::math::tgamma(a + 1.0, x);
  }
  for (std::size_t j = 1; j < l.v.size(); ++j) {
    if (l.v[j] == 0.0) continue;
    s += std::pow(std::fabs(l.v[j]), q) *
         geometric_gauss([&](double t) { return std::pow(1.0 + std::log(1.0 / t), a); }, l.b[j], l.b[j + 1]);
  }
  return finish(s, q, cap);
}

double fk_value(const NormDescriptor& nd, const StepFunction& f, double cap) {
  const Layout l = layout(nd, f);
  require(std::fabs(l.mass - 1.0) <= 1e-12, "FK norm: requires M = 1");
  const double q = nd.q;
  if (l.v.empty()) return 0.0;
  // Inner G(t) = ∫_0^t f*^q is piecewise linear with knots Q_j.
  std::vector<double> Q(l.v.size() + 1, 0.0);
  for (std::size_t j = 0; j < l.v.size(); ++j) Q[j + 1] = Q[j] + std::pow(std::fabs(l.v[j]), q) * (l.b[j + 1] - l.b[j]);
  double s = 0.0;
  if (l.v[0] != 0.0) {
    const double u = std::log(1.0 / l.b[1]);
    s += std::fabs(l.v[0]) * std::sqrt(q) * boost::math::tgamma(0.5, u / q);
  }
  // With t = exp(-w^2) the weight dt / (t (log 1/t)^{1/2}) becomes 2 dw.
  for (std::size_t j = 1; j < l.v.size(); ++j) {
    const double wlo = std::sqrt(std::max(0.0, std::log(1.0 / l.b[j + 1])));
    const double whi = std::sqrt(std::log(1.0 / l.b[j]));
    const double qj = Q[j];
    const double rate = std::pow(std::fabs(l.v[j]), q);
    const double bj = l.b[j];
    s += uniform_gauss(
        [&](double w) {
          const double t = std::exp(-w * w);
          return 2.0 * std::pow(qj + rate * (t - bj), 1.0 / q);
        },
        wlo, whi, 0.25);
  }
  if (l.length < 1.0) s += 2.0 * std::pow(Q.back(), 1.0 / q) * std::sqrt(std::log(1.0 / l.length));
  return finish(s, 1.0, cap);
}

}  // namespace

NormDescriptor NormDescriptor::lp(double p) {
  require(p >= 1.0, "Lp: p >= 1");
  NormDescriptor n;
  n.kind = NormKind::Lp;
  n.p = p;
  return n;
}

NormDescriptor NormDescriptor::lorentz(double p, double q) {
  require(p > 0.0 && std::isfinite(p) && q >= 1.0, "Lorentz: p in (0, inf), q in [1, inf]");
  NormDescriptor n;
  n.kind = NormKind::Lorentz;
  n.p = p;
  n.q = q;
  return n;
}

NormDescriptor NormDescriptor::lorentz_osc(double q) {
  require(q >= 1.0 && std::isfinite(q), "LorentzOsc: q in [1, inf)");
  NormDescriptor n;
  n.kind = NormKind::LorentzOsc;
  n.q = q;
  return n;
}

NormDescriptor NormDescriptor::linf_inf() {
  NormDescriptor n;
  n.kind = NormKind::LinfInf;
  return n;
}

NormDescriptor NormDescriptor::bwh(double nn) {
  require(nn >= 1.0 && std::isfinite(nn), "BWH: n >= 1");
  NormDescriptor n;
  n.kind = NormKind::BWH;
  n.p = nn;
  return n;
}

NormDescriptor NormDescriptor::lq_log_l(double q, double alpha) {
  require(q >= 1.0 && std::isfinite(q) && alpha > -1.0, "LqLogL: q >= 1, alpha > -1");
  NormDescriptor n;
  n.kind = NormKind::LqLogL;
  n.q = q;
  n.alpha = alpha;
  return n;
}

NormDescriptor NormDescriptor::fiorenza_karadzhov(double q) {
  require(q >= 1.0 && std::isfinite(q), "FK: q >= 1");
  NormDescriptor n;
  n.kind = NormKind::FK;
  n.q = q;
  return n;
}

NormDescriptor NormDescriptor::with_mass(double m) const {
  require(m > 0.0, "norm: mass must be positive");
  NormDescriptor n = *this;
  n.mass = m;
  return n;
}

NormDescriptor NormDescriptor::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) args.push_back(parse_number(item));
  }
  auto want = [&](std::size_t k) {
    require(args.size() == k, "norm descriptor '" + text + "': expected " + std::to_string(k) + " parameter(s)");
  };
  if (head == "Lp") return want(1), lp(args[0]);
  if (head == "Lorentz") return want(2), lorentz(args[0], args[1]);
  if (head == "LorentzOsc") return want(1), lorentz_osc(args[0]);
  if (head == "LinfInf") return want(0), linf_inf();
  if (head == "BWH") return want(1), bwh(args[0]);
  if (head == "LqLogL") return want(2), lq_log_l(args[0], args[1]);
  if (head == "FK") return want(1), fiorenza_karadzhov(args[0]);
  throw PreconditionError("unknown norm kind '" + head + "'");
}

std::string NormDescriptor::to_string() const {
  switch (kind) {
    case NormKind::Lp: return "Lp:" + fmt(p);
    case NormKind::Lorentz: return "Lorentz:" + fmt(p) + "," + fmt(q);
    case NormKind::LorentzOsc: return "LorentzOsc:" + fmt(q);
    case NormKind::LinfInf: return "LinfInf";
    case NormKind::BWH: return "BWH:" + fmt(p);
    case NormKind::LqLogL: return "LqLogL:" + fmt(q) + "," + fmt(alpha);
    case NormKind::FK: return "FK:" + fmt(q);
  }
  return "?";
}

double evaluate(const NormDescriptor& norm, const StepFunction& f_star, double cap) {
  const bool any_input = norm.kind == NormKind::LorentzOsc || norm.kind == NormKind::LinfInf;
  if (!any_input) {
    require(f_star.non_increasing(), "norm " + norm.to_string() + ": input must be non-increasing");
    for (double v : f_star.values()) require(v >= 0.0, "norm " + norm.to_string() + ": input must be non-negative");
  }
  switch (norm.kind) {
    case NormKind::Lp: return lp_value(norm, f_star, cap);
    case NormKind::Lorentz: return lorentz_value(norm, f_star, cap);
    case NormKind::LorentzOsc: return lorentz_osc_value(norm, f_star, cap);
    case NormKind::LinfInf: return linf_inf_value(norm, f_star);
    case NormKind::BWH: return bwh_value(norm, f_star, cap);
    case NormKind::LqLogL: return lq_log_l_value(norm, f_star, cap);
    case NormKind::FK: return fk_value(norm, f_star, cap);
  }
  return 0.0;
}

double fundamental_function(const NormDescriptor& norm, double t) {
  const double m = norm.mass.value_or(t);
  require(t > 0.0 && t <= m, "fundamental_function: t in (0, M]");
  return evaluate(norm.mass ? norm : norm.with_mass(m), StepFunction::indicator(t));
}

double bwh_norm(const StepFunction& f_star, double n) {
  return evaluate(NormDescriptor::bwh(n).with_mass(1.0), f_star);
}

double fiorenza_karadzhov_norm(const StepFunction& f_star, double q) {
  return evaluate(NormDescriptor::fiorenza_karadzhov(q).with_mass(1.0), f_star);
}

double classical_linf_q_integral(const StepFunction& f, double q, double tau, std::optional<double> mass) {
  require(q >= 1.0 && tau > 0.0, "classical_linf_q_integral: q >= 1, tau > 0");
  const double M = mass.value_or(f.length());
  const auto b = f.breaks();
  const auto v = f.values();
  double s = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double lo = std::max(b[j], tau);
    const double hi = b[j + 1];
    if (!(hi > lo)) continue;
    if (j == 0) {
      s += std::pow(std::fabs(v[0]), q) * std::log(hi / lo);
      continue;
    }
    const double pj = f.prefix(j);
    const double vj = v[j];
    const double bj = b[j];
    s += geometric_gauss([&](double t) { return std::pow(std::fabs(pj + vj * (t - bj)) / t, q) / t; }, lo, hi);
  }
  if (M > f.length() && f.total_integral() != 0.0) {
    const double lo = std::max(tau, f.length());
    const double upper = std::isinf(M) ? 0.0 : std::pow(M, -q);
    if (M > lo) s += std::pow(std::fabs(f.total_integral()), q) * (std::pow(lo, -q) - upper) / q;
  }
  return s;
}

bool classical_linf_q_diverges(const StepFunction& f, double q, std::optional<double> mass) {
  const double M = mass.value_or(f.length());
  const double scale = std::isfinite(M) ? M : 1.0;
  const auto cuts = quad::nested_cutoffs(scale);
  const double j1 = classical_linf_q_integral(f, q, cuts[0], mass);
  const double j2 = classical_linf_q_integral(f, q, cuts[1], mass);
  const double j3 = classical_linf_q_integral(f, q, cuts[2], mass);
  return quad::nested_growth_diverges(j1, j2, j3);
}

}  // namespace rearr
