#include <algorithm>
#include <cmath>

#include "ineq_detail.hpp"
#include "rearr/error.hpp"
#include "rearr/inequalities.hpp"
#include "rearr/quadrature.hpp"
#include "rearr/special.hpp"

namespace rearr {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

/// L^1 norm of |d^j f|, with d^0 f = f.
double derivative_l1(const GridFunction& f, int j) {
  if (j == 0) return f.abs().sum_weighted();
  return kth_derivative_modulus(f, j).lp_norm(1.0);
}

bool vanishes_at_one(const Profile& profile) {
  return profile.flags().symmetric || profile(std::min(1.0, profile.mass())) == 0.0;
}

}  // namespace

VerificationReport verify_higher_order(const GridFunction& f, int k, const Profile& profile, const VerifyOptions& opt) {
  require(k >= 2, "verify_higher_order: k >= 2");
  const MeasureSpace& space = *f.space;
  require(std::fabs(space.total_mass() - 1.0) <= 1e-12, "verify_higher_order: unit mass required");
  require(std::fabs(profile.mass() - 1.0) <= 1e-12, "verify_higher_order: profile mass must be 1");
  std::vector<double> ts;
  for (double t : verification_grid(space, opt, 0.5))
    if (t < 0.5) ts.push_back(t);
  require(!ts.empty(), "verify_higher_order: empty grid");

  const PiecewiseAverage dk(decreasing_rearrangement(kth_derivative_modulus(f, k).as_function()));
  const StepFunction fs = decreasing_rearrangement(f);
  const PiecewiseAverage fss(fs);
  std::vector<double> norms(static_cast<std::size_t>(k) + 1, 0.0);
  for (int j = 0; j < k; ++j) norms[static_cast<std::size_t>(j)] = derivative_l1(f, j);

  // Shared panels on [t_min, 1/2]; every grid point is a knot.
  std::vector<double> knots = ts;
  for (double x : quad::log_space(ts.front(), 0.5, 256)) knots.push_back(x);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  auto inv = [&profile](double z) { return 1.0 / profile(z); };
  // A(u) = ∫_u^{1/2} dz / I(z) at the knots and at the panel nodes.
  std::vector<double> A(knots.size(), 0.0);
  for (std::size_t i = knots.size() - 1; i-- > 0;) A[i] = A[i + 1] + detail::geometric_gl(inv, knots[i], knots[i + 1]);
  const quad::CompositeRule rule = quad::gauss_rule(knots);
  constexpr std::size_t kNodes = 16;
  std::vector<double> A_node(rule.x.size());
  std::vector<double> h_node(rule.x.size());
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    const std::size_t panel = i / kNodes;
    A_node[i] = A[panel + 1] + detail::geometric_gl(inv, rule.x[i], knots[panel + 1]);
    h_node[i] = rule.w[i] * dk(rule.x[i]) * inv(rule.x[i]);
  }

  auto r = detail::make_report("higher_order", opt, profile.label());
  std::vector<double> cor_lhs;
  std::vector<double> cor_rhs;
  const double ck = 1.0 / factorial(k - 1);
  for (double t : ts) {
    const auto pos = static_cast<std::size_t>(std::lower_bound(knots.begin(), knots.end(), t) - knots.begin());
    const double At = A[pos];
    double main = 0.0;
    double cor = 0.0;
    for (std::size_t i = pos * kNodes; i < rule.x.size(); ++i) {
      const double J = At - A_node[i];
      main += h_node[i] * std::pow(J, k - 1);
      cor += h_node[i] * std::pow(J, k);
    }
    const double phi = t / profile(t);
    double lower = 0.0;
    for (int j = 1; j <= k - 1; ++j) lower += std::pow(At, k - j - 1) * norms[static_cast<std::size_t>(k - j)];
    r.t.push_back(t);
    r.lhs.push_back(fs.oscillation(t));
    r.rhs.push_back(ck * phi * (main + lower));
    double cor_tail = 0.0;
    for (int j = 1; j <= k; ++j) cor_tail += std::pow(At, k - j) * norms[static_cast<std::size_t>(k - j)];
    cor_lhs.push_back(fss(t));
    cor_rhs.push_back(cor + cor_tail);
  }
  r.metadata["k"] = k;
  r.metadata["derivative_l1"] = numbers_json(std::vector<double>(norms.begin(), norms.begin() + k));
  r.metadata["corollary_lhs"] = numbers_json(cor_lhs);
  r.metadata["corollary_rhs"] = numbers_json(cor_rhs);
  r.metadata["corollary_constant"] = number_json(empirical_constant(cor_lhs, cor_rhs));
  r.metadata["panels"] = knots.size() - 1;
  finalize_inequality(r, 1.0, opt.slack);
  return r;
}

TransferenceIntegral transference_integral(const Profile& profile) {
  // Profiles vanishing at full mass are integrated on (0, 1/2]; the singularity
  // at t = 1 comes from I(1) = 0, not from the small-t condition.
  require(profile.mass() >= 1.0 - 1e-12, "transference_integral: profile must be defined on (0, 1)");
  const double U = vanishes_at_one(profile) ? 0.5 : 1.0;
  // t = exp(-u^2): dt / (I(t) (log 1/t)^{1/2}) = 2 exp(-u^2) / I(exp(-u^2)) du.
  auto integrand = [&profile](double u) {
    const double t = std::exp(-u * u);
    if (!(t > 0.0)) return 0.0;
    return 2.0 * t / profile(t);
  };
  const double u0 = std::sqrt(std::log(1.0 / U));
  TransferenceIntegral out;
  double acc = 0.0;
  double from = u0;
  for (double tau : detail::kDeepCutoffs) {
    const double to = std::sqrt(std::log(1.0 / tau));
    const int panels = std::max(8, static_cast<int>(std::ceil((to - from) / 0.125)));
    std::vector<double> knots(static_cast<std::size_t>(panels) + 1);
    for (int i = 0; i <= panels; ++i) knots[static_cast<std::size_t>(i)] = from + (to - from) * i / panels;
    acc += quad::gauss_panels(integrand, knots);
    out.cutoffs.push_back(tau);
    out.partial.push_back(acc);
    from = to;
  }
  out.divergent = quad::nested_growth_diverges(out.partial[0], out.partial[1], out.partial[2]);
  out.value = out.divergent ? std::numeric_limits<double>::infinity() : out.partial.back();
  return out;
}

VerificationReport verify_transference(const GridFunction& f, const Profile& profile, double p,
                                       const VerifyOptions& opt) {
  require(p >= 1.0, "verify_transference: p >= 1");
  const MeasureSpace& space = *f.space;
  require(std::fabs(space.total_mass() - 1.0) <= 1e-12, "verify_transference: unit mass required");
  detail::require_profile_covers(space, profile, "verify_transference");
  const TransferenceIntegral ti = transference_integral(profile);
  const bool inf = std::isinf(p);
  const double upper = vanishes_at_one(profile) ? 0.5 : 1.0;
  const auto ts = verification_grid(space, opt, upper);
  const auto R = detail::rearrange_with_gradient(f);
  const StepFunction& fs = R.f_star;
  const auto b = fs.breaks();

  // Per-piece contribution of ‖(f** - f*) χ_(b_j, c)‖_p^p (or the sup), with f** - f* = E_j / s.
  auto piece = [&](std::size_t j, double c) {
    const double e = fs.excess(j);
    if (!(e > 0.0) || !(c > b[j])) return 0.0;
    if (inf) return e / b[j];
    if (p == 1.0) return e * std::log(c / b[j]);
    return std::pow(e, p) * (std::pow(b[j], 1.0 - p) - std::pow(c, 1.0 - p)) / (p - 1.0);
  };
  std::vector<double> cum(fs.pieces() + 1, 0.0);
  for (std::size_t j = 0; j < fs.pieces(); ++j)
    cum[j + 1] = inf ? std::max(cum[j], piece(j, b[j + 1])) : cum[j] + piece(j, b[j + 1]);
  auto osc_norm = [&](double t) {
    if (t >= fs.length()) t = fs.length();
    const std::size_t j = fs.piece_at(t);
    const double part = piece(j, t);
    const double s = inf ? std::max(cum[j], part) : cum[j] + part;
    return inf ? s : std::pow(s, 1.0 / p);
  };
  const double N = inf ? (R.grad_star.empty() ? 0.0 : R.grad_star.values()[0])
                       : evaluate(NormDescriptor::lorentz(p, p).with_mass(space.total_mass()), R.grad_star);

  auto r = detail::make_report("larusa", opt, profile.label());
  r.t = ts;
  for (double t : ts) {
    r.lhs.push_back(osc_norm(t));
    r.rhs.push_back(t / profile(t) * N);
  }
  // ∫_0^1 osc_norm(t) dt / (t (log 1/t)^{1/2}) = 2 ∫_0^∞ osc_norm(exp(-w^2)) dw; zero below b_1.
  double integrated = 0.0;
  if (fs.pieces() > 1) {
    std::vector<double> knots{0.0};
    for (std::size_t j = 1; j < b.size(); ++j)
      if (b[j] < 1.0) knots.push_back(std::sqrt(std::log(1.0 / b[j])));
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    integrated = 2.0 * quad::gauss_panels([&](double w) { return osc_norm(std::exp(-w * w)); }, knots);
  }
  r.metadata["p"] = number_json(p);
  r.metadata["grad_maximal_norm"] = number_json(N);
  r.metadata["transference_divergent"] = ti.divergent;
  r.metadata["transference_value"] = number_json(ti.value);
  r.metadata["transference_cutoffs"] = numbers_json(ti.cutoffs);
  r.metadata["transference_partial"] = numbers_json(ti.partial);
  r.metadata["integrated_lhs"] = number_json(integrated);
  r.metadata["integrated_constant"] =
      number_json(ti.divergent ? 0.0 : safe_ratio(integrated, ti.value * N));
  finalize_inequality(r, std::nullopt);
  return r;
}

double gamma_transference_constant(int n) {
  require(n >= 1, "gamma_transference_constant: n >= 1");
  const double kappa = n * std::pow(special::unit_ball_volume(n), 1.0 / n);
  // t = exp(-u^2) turns t^{1/n - 1} (ln 1/t)^{-1/2} dt into 2 exp(-u^2/n) du.
  const double integral = quad::exp_sinh([n](double u) { return 2.0 * std::exp(-u * u / n); }, 0.0);
  return integral / kappa;
}

}  // namespace rearr
