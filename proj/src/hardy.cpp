#include <algorithm>
#include <cmath>
#include <string>

#include "ineq_detail.hpp"
#include "rearr/error.hpp"
#include "rearr/inequalities.hpp"
#include "rearr/quadrature.hpp"

namespace rearr {

namespace {

void require_probability_profile(const Profile& profile, const char* who) {
  require(std::fabs(profile.mass() - 1.0) <= 1e-12, std::string(who) + ": profile mass must be 1");
}

void require_probability_space(const MeasureSpace& space, const char* who) {
  require(std::fabs(space.total_mass() - 1.0) <= 1e-12, std::string(who) + ": probability space required");
}

}  // namespace

std::vector<double> hardy_operator(const std::function<double(double)>& g, std::span<const double> knots,
                                   const Profile& profile, std::span<const double> ts) {
  require_probability_profile(profile, "hardy_operator");
  std::vector<double> pts;
  for (double k : knots)
    if (k > 0.0 && k < 0.5) pts.push_back(k);
  for (double t : ts) {
    require(t > 0.0, "hardy_operator: t must be positive");
    if (t < 0.5) pts.push_back(t);
  }
  pts.push_back(0.5);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  auto h = [&](double s) { return g(s) / profile(s); };
  std::vector<double> q(pts.size(), 0.0);
  for (std::size_t k = pts.size() - 1; k-- > 0;) q[k] = q[k + 1] + detail::geometric_gl(h, pts[k], pts[k + 1]);
  std::vector<double> out;
  out.reserve(ts.size());
  for (double t : ts) {
    if (t >= 0.5) {
      out.push_back(0.0);
      continue;
    }
    const auto it = std::lower_bound(pts.begin(), pts.end(), t);
    out.push_back(q[static_cast<std::size_t>(it - pts.begin())]);
  }
  return out;
}

double hardy_operator(const std::function<double(double)>& g, std::span<const double> knots, const Profile& profile,
                      double t) {
  const double ts[1] = {t};
  return hardy_operator(g, knots, profile, ts).front();
}

VerificationReport poincare_identity_check(const GridFunction& g, const Profile& profile, PoincareMesh mesh,
                                           const VerifyOptions& opt) {
  const MeasureSpace& space = *g.space;
  require_probability_space(space, "poincare_identity_check");
  require_probability_profile(profile, "poincare_identity_check");
  const StepFunction gs = signed_rearrangement(g);
  const auto b = gs.breaks();
  const auto v = gs.values();
  const std::size_t m = v.size();
  std::vector<double> mid(m);
  for (std::size_t j = 0; j < m; ++j) mid[j] = 0.5 * (b[j] + b[j + 1]);

  // Piecewise-linear interpolant through (mid_j, v_j), constant outside.
  auto segment = [&](double s) -> std::size_t {
    return static_cast<std::size_t>(std::upper_bound(mid.begin(), mid.end(), s) - mid.begin());
  };
  auto interp = [&](double s) {
    const std::size_t k = segment(s);
    if (k == 0) return v.front();
    if (k >= m) return v.back();
    const double lam = (s - mid[k - 1]) / (mid[k] - mid[k - 1]);
    return v[k - 1] + lam * (v[k] - v[k - 1]);
  };
  auto slope = [&](double s) {
    const std::size_t k = segment(s);
    if (k == 0 || k >= m) return 0.0;
    return (v[k - 1] - v[k]) / (mid[k] - mid[k - 1]);
  };
  auto flux = [&](double s) { return profile(s) * slope(s); };
  const double centre = interp(0.5);

  const auto grid = verification_grid(space, opt, 0.5);
  std::vector<double> ts;
  if (mesh == PoincareMesh::Midpoints) {
    for (double t : grid) {
      const double x = mid[gs.piece_at(t)];
      if (x < 0.5 && (ts.empty() || x > ts.back())) ts.push_back(x);
    }
  } else {
    for (double t : grid)
      if (t < 0.5) ts.push_back(t);
  }
  auto r = detail::make_report("robusta", opt, profile.label());
  r.t = ts;
  r.rhs = hardy_operator(flux, mid, profile, ts);
  double scale = 1.0;
  for (double x : v) scale = std::max(scale, std::fabs(x));
  double eps = 1e-9 * scale;
  for (double t : ts) r.lhs.push_back((mesh == PoincareMesh::Midpoints ? interp(t) : gs(t)) - centre);
  if (mesh == PoincareMesh::TGrid) {
    double jump = 0.0;
    for (std::size_t j = 1; j < m; ++j)
      if (b[j] >= ts.front() && b[j] <= 0.5) jump = std::max(jump, v[j - 1] - v[j]);
    eps += jump;
  }
  r.metadata["mesh"] = mesh == PoincareMesh::Midpoints ? "midpoints" : "t_grid";
  r.metadata["median"] = centre;
  finalize_identity(r, eps);
  return r;
}

namespace {

struct FamilyMember {
  std::string label;
  std::function<double(double)> h;
  std::vector<double> knots;
};

std::vector<FamilyMember> hardy_family(const Profile& profile, double p) {
  std::vector<FamilyMember> fam;
  for (int i = 0; i < 16; ++i) {
    const double a = 0.5 * std::pow(2.0, -i);
    fam.push_back({"chi(0," + std::to_string(a) + ")", [a](double s) { return s < a ? 1.0 : 0.0; }, {a}});
  }
  for (int i = 0; i < 16; ++i) {
    const double b = 0.5 * (1.0 - std::pow(2.0, -0.5 * (i + 1)));
    fam.push_back({"chi(" + std::to_string(b) + ",1/2)", [b](double s) { return s >= b ? 1.0 : 0.0; }, {b}});
  }
  const double lo = std::isinf(p) ? 0.0 : -1.0 / p;
  for (int i = 0; i < 16; ++i) {
    const double alpha = lo + (i + 1) * (3.0 - lo) / 16.0;
    fam.push_back({"s^" + std::to_string(alpha), [alpha](double s) { return std::pow(s, alpha); }, {}});
  }
  fam.push_back({"I", [&profile](double s) { return profile(s); }, {}});
  fam.push_back({"1", [](double) { return 1.0; }, {}});
  return fam;
}

}  // namespace

HardyNormEstimate hardy_norm_estimate(const Profile& profile, double p) {
  require_probability_profile(profile, "hardy_norm_estimate");
  require(p >= 1.0, "hardy_norm_estimate: p >= 1");
  const bool inf = std::isinf(p);
  const auto base = quad::log_space(1e-14, 0.5, 240);
  HardyNormEstimate est;
  for (const auto& member : hardy_family(profile, p)) {
    std::vector<double> knots = base;
    for (double k : member.knots) knots.push_back(k);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    const auto qk = hardy_operator(member.h, knots, profile, knots);
    auto hI = [&](double x) { return member.h(x) / profile(x); };
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
      const double a = knots[k];
      const double c = knots[k + 1];
      if (inf) {
        num = std::max(num, std::fabs(qk[k]));
        den = std::max({den, std::fabs(member.h(a)), std::fabs(member.h(0.5 * (a + c)))});
        continue;
      }
      const double panel[2] = {a, c};
      const double qc = qk[k + 1];
      num += quad::gauss_panels([&](double x) { return std::pow(std::fabs(qc + detail::geometric_gl(hI, x, c)), p); },
                                panel);
      den += quad::gauss_panels([&](double x) { return std::pow(std::fabs(member.h(x)), p); }, panel);
    }
    if (!(den > 0.0)) continue;
    const double ratio = inf ? num / den : std::pow(num / den, 1.0 / p);
    est.ratios.emplace_back(member.label, ratio);
    if (ratio > est.value) {
      est.value = ratio;
      est.argmax = member.label;
    }
  }
  return est;
}

VerificationReport poincare_chain_check(const GridFunction& g, const NormDescriptor& norm, const Profile& profile,
                                        const VerifyOptions& opt) {
  require(norm.kind == NormKind::Lp, "poincare_chain_check: only L^p norms are supported");
  const MeasureSpace& space = *g.space;
  require_probability_space(space, "poincare_chain_check");
  const double p = norm.p;
  const double mean = g.sum_weighted();
  GridFunction centred = g;
  for (double& x : centred.values) x -= mean;
  const auto w = space.weights();
  auto lp = [&](const std::vector<double>& vals) {
    if (std::isinf(p)) {
      double m = 0.0;
      for (double x : vals) m = std::max(m, std::fabs(x));
      return m;
    }
    double s = 0.0;
    for (std::size_t c = 0; c < vals.size(); ++c) s += w[c] * std::pow(std::fabs(vals[c]), p);
    return std::pow(s, 1.0 / p);
  };
  const auto grad = gradient_modulus(g);
  const HardyNormEstimate est = hardy_norm_estimate(profile, p);
  const StepFunction gs = signed_rearrangement(g);
  auto r = detail::make_report("poincare_chain", opt, profile.label());
  r.t = {0.5};
  r.lhs = {lp(centred.values)};
  r.rhs = {lp(grad.values)};
  r.metadata["mean"] = mean;
  r.metadata["median"] = gs(0.5);
  r.metadata["abs_l1"] = g.abs().sum_weighted();
  r.metadata["hardy_norm_lower_bound"] = est.value;
  r.metadata["hardy_argmax"] = est.argmax;
  nlohmann::json ratios = nlohmann::json::object();
  for (const auto& [label, value] : est.ratios) ratios[label] = number_json(value);
  r.metadata["hardy_ratios"] = ratios;
  r.metadata["norm"] = norm.to_string();
  finalize_inequality(r, 4.0 * est.value, opt.slack);
  return r;
}

}  // namespace rearr
