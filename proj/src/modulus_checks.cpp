#include <algorithm>
#include <cmath>
#include <random>

#include "ineq_detail.hpp"
#include "rearr/error.hpp"
#include "rearr/inequalities.hpp"
#include "rearr/quadrature.hpp"

namespace rearr {

namespace {

void require_cube(const MeasureSpace& space, const char* who) {
  require(space.kind() == SpaceKind::UnitCube, std::string(who) + ": UnitCube required");
}

/// ∫_a^b t^{-1/p - 1} dt.
double power_weight_integral(double a, double b, double p) {
  if (std::isinf(p)) return std::log(b / a);
  return p * (std::pow(a, -1.0 / p) - std::pow(b, -1.0 / p));
}

}  // namespace

VerificationReport verify_oscillation_modulus(const GridFunction& f, double p, const VerifyOptions& opt) {
  const MeasureSpace& space = *f.space;
  require_cube(space, "verify_oscillation_modulus");
  const double n = space.dimension();
  const auto ts = verification_grid(space, opt);
  const StepFunction fs = decreasing_rearrangement(f);
  const ModulusTable omega(f, p, 1.0);
  auto r = detail::make_report("tres", opt, "");
  r.t = ts;
  for (double t : ts) {
    r.lhs.push_back(fs.oscillation(t));
    const double phi = std::isinf(p) ? 1.0 : std::pow(t, 1.0 / p);
    r.rhs.push_back(omega(std::pow(t, 1.0 / n)) / phi);
  }
  r.metadata["p"] = number_json(p);
  r.metadata["shift_radii"] = omega.radii().size();
  finalize_inequality(r, std::nullopt);
  return r;
}

VerificationReport verify_garsia(const GridFunction& f, double p, const VerifyOptions& opt) {
  const MeasureSpace& space = *f.space;
  require_cube(space, "verify_garsia");
  const double n = space.dimension();
  const auto ts = verification_grid(space, opt, 0.5);
  const StepFunction fs = signed_rearrangement(f);
  const ModulusTable omega(f, p, 1.0);
  const auto& radii = omega.radii();
  const auto& vals = omega.values();
  // ω(t^{1/n}) is constant on [ρ_k^n, ρ_{k+1}^n).
  std::vector<double> jumps;
  for (double rho : radii) jumps.push_back(std::min(1.0, std::pow(rho, n)));
  auto tail = [&](double x) {
    double acc = 0.0;
    for (std::size_t k = 0; k < jumps.size(); ++k) {
      const double a = std::max(x, jumps[k]);
      const double b = k + 1 < jumps.size() ? jumps[k + 1] : 1.0;
      if (b > a) acc += vals[k] * power_weight_integral(a, b, p);
    }
    return acc;
  };
  const double centre = fs(0.5);
  std::vector<double> upper_branch;
  std::vector<double> lower_branch;
  auto r = detail::make_report("degarsia", opt, "");
  r.t = ts;
  for (double x : ts) {
    const double a = fs(x) - centre;
    const double b = centre - fs(1.0 - x);
    upper_branch.push_back(a);
    lower_branch.push_back(b);
    r.lhs.push_back(std::max({a, b, 0.0}));
    r.rhs.push_back(tail(x));
  }
  r.metadata["p"] = number_json(p);
  r.metadata["upper_branch"] = numbers_json(upper_branch);
  r.metadata["lower_branch"] = numbers_json(lower_branch);
  r.metadata["upper_branch_constant"] = number_json(empirical_constant(upper_branch, r.rhs));
  r.metadata["lower_branch_constant"] = number_json(empirical_constant(lower_branch, r.rhs));
  finalize_inequality(r, std::nullopt);
  return r;
}

double morrey_constant(int n, double p) {
  require(n >= 1, "morrey_constant: n >= 1");
  require(p > n, "morrey_constant: need p > n");
  const double q = std::isinf(p) ? 1.0 : p / (p - 1.0);
  const double e = 1.0 - 1.0 / n;
  auto g = [&](double t) { return std::pow(t / std::pow(std::min(t, 1.0 - t), e), q); };
  const double s = quad::tanh_sinh(g, 0.0, 0.5) + quad::tanh_sinh(g, 0.5, 1.0);
  return std::pow(s, 1.0 / q);
}

VerificationReport morrey_holder_check(const GridFunction& f, double p, const VerifyOptions& opt) {
  const MeasureSpace& space = *f.space;
  require_cube(space, "morrey_holder_check");
  const int n = space.dimension();
  require(p > n, "morrey_holder_check: need p > n");
  const double C = morrey_constant(n, p);
  const double grad_p = gradient_modulus(f).lp_norm(p);
  const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
  const double osc = *hi - *lo;
  const double exponent = 1.0 - n / p;
  const int r_axis = space.cells_per_axis();

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto draw_cell = [&] {
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int& i : idx) i = std::min(r_axis - 1, static_cast<int>(unif(rng) * r_axis));
    return space.linear_index(idx);
  };
  auto rep = detail::make_report("morrey", opt, "");
  std::vector<std::pair<double, double>> pairs;
  while (pairs.size() < 200) {
    const std::size_t a = draw_cell();
    const std::size_t b = draw_cell();
    if (a == b) continue;
    const double d = space.distance(a, b);
    const double df = std::fabs(f.values[a] - f.values[b]);
    pairs.emplace_back(d, df);
    rep.t.push_back(d);
    rep.lhs.push_back(df);
    rep.rhs.push_back(std::pow(d, exponent) * grad_p);
  }
  // Log-log fit of the largest difference in each dyadic distance band.
  std::vector<double> xs;
  std::vector<double> ys;
  for (int k = 0; k < 64; ++k) {
    const double top = std::pow(2.0, -k);
    const double bottom = top / 2.0;
    double best = 0.0;
    for (const auto& [d, df] : pairs)
      if (d > bottom && d <= top) best = std::max(best, df);
    if (best > 0.0) {
      xs.push_back(std::log(std::sqrt(top * bottom)));
      ys.push_back(std::log(best));
    }
  }
  double fit = std::nan("");
  if (xs.size() >= 2) {
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx > 0.0) fit = sxy / sxx;
  }
  rep.metadata["p"] = number_json(p);
  rep.metadata["morrey_C"] = C;
  rep.metadata["oscillation"] = osc;
  rep.metadata["oscillation_bound"] = 2.0 * C * grad_p;
  rep.metadata["oscillation_bound_holds"] = osc <= 2.0 * C * grad_p * (1.0 + 1e-3 + opt.slack);
  rep.metadata["holder_exponent"] = exponent;
  rep.metadata["holder_exponent_fit"] = number_json(fit);
  finalize_inequality(rep, std::nullopt);
  return rep;
}

}  // namespace rearr
