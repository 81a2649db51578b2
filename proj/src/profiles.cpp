#include "rearr/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rearr/error.hpp"
#include "rearr/special.hpp"

namespace rearr {

namespace {
constexpr int kCheckPoints = 1000;
constexpr double kConcavityTol = 1e-12;
constexpr double kSymmetryTol = 1e-10;
}  // namespace

Profile::Profile(std::string label, double mass, Evaluator eval, Flags flags, nlohmann::json params)
    : label_(std::move(label)), mass_(mass), eval_(std::move(eval)), flags_(flags), params_(std::move(params)) {
  require(mass_ > 0.0, "Profile: mass must be positive");
}

double Profile::operator()(double t) const {
  require(t >= 0.0 && t <= mass_, "Profile: t outside [0, M]");
  if (t == 0.0 && flags_.zero_at_zero) return 0.0;
  if (t == mass_ && flags_.zero_at_zero && flags_.symmetric) return 0.0;
  return eval_(t);
}

double Profile::check_upper() const { return std::isfinite(mass_) ? mass_ : 1.0; }

std::vector<double> Profile::check_grid() const {
  const double up = check_upper();
  std::vector<double> g(kCheckPoints);
  for (int i = 0; i < kCheckPoints; ++i) g[static_cast<std::size_t>(i)] = up * (i + 1.0) / (kCheckPoints + 1.0);
  return g;
}

bool Profile::check_positive() const {
  for (double t : check_grid())
    if (!((*this)(t) > 0.0)) return false;
  return true;
}

bool Profile::check_concave() const {
  const auto g = check_grid();
  std::vector<double> v(g.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    v[i] = (*this)(g[i]);
    peak = std::max(peak, std::fabs(v[i]));
  }
  for (std::size_t i = 1; i + 1 < g.size(); ++i)
    if (v[i - 1] - 2.0 * v[i] + v[i + 1] > kConcavityTol * std::max(peak, 1.0)) return false;
  return true;
}

bool Profile::check_symmetric() const {
  if (!std::isfinite(mass_)) return false;
  double peak = 0.0;
  double worst = 0.0;
  for (double t : check_grid()) {
    const double a = (*this)(t);
    const double b = (*this)(mass_ - t);
    peak = std::max(peak, std::fabs(a));
    worst = std::max(worst, std::fabs(a - b));
  }
  return worst <= kSymmetryTol * std::max(peak, 1e-300);
}

void Profile::verify_flags() const {
  require(check_positive(), "Profile '" + label_ + "': not positive on the interior");
  if (flags_.concave) require(check_concave(), "Profile '" + label_ + "': declared concave, check failed");
  if (flags_.symmetric) require(check_symmetric(), "Profile '" + label_ + "': declared symmetric, check failed");
}

nlohmann::json Profile::to_json() const {
  nlohmann::json j = params_;
  j["label"] = label_;
  j["flags"] = {{"concave", flags_.concave},
                {"symmetric", flags_.symmetric},
                {"zero_at_zero", flags_.zero_at_zero},
                {"lower_bound_only", flags_.lower_bound_only}};
  return j;
}

Profile euclidean_profile(int n, double mass) {
  require(n >= 1, "euclidean_profile: n >= 1");
  const double gamma_n = special::unit_ball_volume(n);
  const double coeff = n * std::pow(gamma_n, 1.0 / n);
  const double expo = 1.0 - 1.0 / n;
  Profile::Flags flags{true, false, n >= 2, false};
  Profile p("euclidean_" + std::to_string(n), mass,
            [coeff, expo](double t) { return coeff * std::pow(t, expo); }, flags,
            {{"kind", "euclidean"}, {"n", n}, {"mass", std::isfinite(mass) ? nlohmann::json(mass) : nlohmann::json("inf")}});
  p.verify_flags();
  return p;
}

Profile gaussian_profile() {
  Profile::Flags flags{true, true, true, false};
  Profile p("gaussian", 1.0,
            [](double t) {
              if (t <= 0.0 || t >= 1.0) return 0.0;
              const double q = std::min(t, 1.0 - t);
              return special::normal_pdf(special::normal_quantile(q));
            },
            flags, {{"kind", "gaussian"}});
  p.verify_flags();
  return p;
}

Profile interval_profile() {
  Profile::Flags flags{true, true, true, false};
  Profile p("interval", 1.0, [](double t) { return (t > 0.0 && t < 1.0) ? 1.0 : 0.0; }, flags, {{"kind", "interval"}});
  p.verify_flags();
  return p;
}

Profile cube_lower_bound_profile(double c) {
  require(c > 0.0, "cube_lower_bound_profile: c > 0");
  Profile::Flags flags{true, true, true, true};
  Profile p("cube_lower_bound", 1.0,
            [c](double t) {
              const double u = std::min(t, 1.0 - t);
              if (u <= 0.0) return 0.0;
              return c * u * std::sqrt(std::log(1.0 / u));
            },
            flags, {{"kind", "cube_lower_bound"}, {"c", c}});
  p.verify_flags();
  return p;
}

Profile constant_profile(double c, double mass) {
  require(c > 0.0, "constant_profile: c > 0");
  Profile::Flags flags{true, false, false, false};
  Profile p("constant", mass, [c](double) { return c; }, flags,
            {{"kind", "constant"}, {"c", c}, {"mass", std::isfinite(mass) ? nlohmann::json(mass) : nlohmann::json("inf")}});
  p.verify_flags();
  return p;
}

Profile relative_min_profile(const Profile& base, double mass) {
  require(mass > 0.0 && mass <= base.mass(), "relative_min_profile: need 0 < mass <= M(base)");
  Profile::Flags flags{base.flags().concave, true, base.flags().zero_at_zero, base.flags().lower_bound_only};
  Profile p("relmin_" + base.label(), mass,
            [base, mass](double s) {
              const double other = mass - s;
              return std::min(base(s), base(std::max(other, 0.0)));
            },
            flags, {{"kind", "relative_min"}, {"base", base.to_json()}, {"mass", mass}});
  p.verify_flags();
  return p;
}

Profile tabulated_profile(std::string label, std::vector<double> t, std::vector<double> values, double mass) {
  require(t.size() == values.size() && t.size() >= 2, "tabulated_profile: need >= 2 matching samples");
  for (std::size_t i = 0; i + 1 < t.size(); ++i) require(t[i + 1] > t[i], "tabulated_profile: t must increase");
  require(t.front() > 0.0 && t.back() < mass, "tabulated_profile: samples must lie in (0, M)");
  for (double v : values) require(v > 0.0, "tabulated_profile: values must be positive");
  const std::size_t n = t.size();
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (values[i + 1] - values[i]) / (t[i + 1] - t[i]);
  // Fritsch-Carlson slopes.
  std::vector<double> m(n);
  m[0] = delta[0];
  m[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) m[i] = (delta[i - 1] * delta[i] <= 0.0) ? 0.0 : 0.5 * (delta[i - 1] + delta[i]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (delta[i] == 0.0) {
      m[i] = m[i + 1] = 0.0;
      continue;
    }
    const double a = m[i] / delta[i];
    const double b = m[i + 1] / delta[i];
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double tau = 3.0 / std::sqrt(s);
      m[i] = tau * a * delta[i];
      m[i + 1] = tau * b * delta[i];
    }
  }
  auto eval = [t, values, m, mass](double x) {
    const std::size_t n = t.size();
    if (x <= t.front()) return values.front() * x / t.front();
    if (x >= t.back()) {
      if (!std::isfinite(mass)) return values.back();
      return values.back() * (mass - x) / (mass - t.back());
    }
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    const std::size_t i = std::min(static_cast<std::size_t>(it - t.begin()) - 1, n - 2);
    const double h = t[i + 1] - t[i];
    const double s = (x - t[i]) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * values[i] + h10 * h * m[i] + h01 * values[i + 1] + h11 * h * m[i + 1];
  };
  nlohmann::json params{{"kind", "tabulated"}, {"t", t}, {"I", values}, {"mass", mass}};
  Profile probe(label, mass, eval, Profile::Flags{false, false, true, false}, params);
  Profile::Flags flags{probe.check_concave(), probe.check_symmetric(), true, false};
  Profile p(std::move(label), mass, eval, flags, params);
  p.verify_flags();
  return p;
}

Profile profile_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  auto mass_of = [&](double fallback) {
    if (!j.contains("mass")) return fallback;
    if (j["mass"].is_string()) return std::numeric_limits<double>::infinity();
    return j["mass"].get<double>();
  };
  if (kind == "euclidean") return euclidean_profile(j.at("n").get<int>(), mass_of(std::numeric_limits<double>::infinity()));
  if (kind == "gaussian") return gaussian_profile();
  if (kind == "interval") return interval_profile();
  if (kind == "cube_lower_bound") return cube_lower_bound_profile(j.value("c", 1.0));
  if (kind == "constant") return constant_profile(j.at("c").get<double>(), mass_of(1.0));
  if (kind == "relative_min") return relative_min_profile(profile_from_json(j.at("base")), mass_of(1.0));
  if (kind == "tabulated")
    return tabulated_profile(j.value("label", std::string("tabulated")), j.at("t").get<std::vector<double>>(),
                             j.at("I").get<std::vector<double>>(), mass_of(1.0));
  throw PreconditionError("unknown profile kind: " + kind);
}

PhiMap phi_of(const Profile& profile) {
  PhiMap out;
  out.phi = [profile](double t) { return t / profile(t); };
  bool ok = true;
  double prev = 0.0;
  bool first = true;
  for (double t : profile.check_grid()) {
    const double v = out.phi(t);
    if (!std::isfinite(v)) {
      ok = false;
      break;
    }
    if (!first && v < prev * (1.0 - 1e-12)) {
      ok = false;
      break;
    }
    prev = v;
    first = false;
  }
  out.non_decreasing_certificate = ok;
  return out;
}

EquivalenceConstants gaussian_equivalence_constants(const Profile& profile, double t_lo, double t_hi, int nodes) {
  require(t_lo > 0.0 && t_lo <= t_hi && t_hi <= 0.5, "gaussian_equivalence_constants: need 0 < t_lo <= t_hi <= 1/2");
  EquivalenceConstants c{std::numeric_limits<double>::infinity(), 0.0};
  const int n = (t_lo == t_hi) ? 1 : nodes;
  for (int i = 0; i < n; ++i) {
    const double t = (n == 1) ? t_lo : std::exp(std::log(t_lo) + (std::log(t_hi) - std::log(t_lo)) * i / (n - 1));
    const double r = profile(t) / (t * std::sqrt(std::log(1.0 / t)));
    c.c_min = std::min(c.c_min, r);
    c.c_max = std::max(c.c_max, r);
  }
  return c;
}

EquivalenceConstants gaussian_equivalence_constants(double t_lo, double t_hi, int nodes) {
  static const Profile g = gaussian_profile();
  return gaussian_equivalence_constants(g, t_lo, t_hi, nodes);
}

bool gaussian_type_check(const Profile& profile, double c) {
  require(c > 0.0, "gaussian_type_check: c > 0");
  const double hi = std::min(0.5, profile.check_upper());
  for (int i = 0; i < kCheckPoints; ++i) {
    // Log-spaced from 1e-12 up to (just below) 1/2.
    const double t = std::exp(std::log(1e-12) + (std::log(hi * (1.0 - 1e-9)) - std::log(1e-12)) * i / (kCheckPoints - 1));
    const double lhs = profile(t);
    if (!(lhs >= c * t * std::sqrt(std::log(1.0 / t)))) return false;
  }
  return true;
}

}  // namespace rearr
