#include <chrono>
#include <cmath>

#include "doctest.h"
#include "rearr/corpus.hpp"
#include "rearr/error.hpp"
#include "rearr/inequalities.hpp"
#include "rearr/special.hpp"

using namespace rearr;

namespace {

GridFunction S(const SpacePtr& s, const std::string& e) { return sample_expression(s, Expression::parse(e)); }

SpacePtr gauss() {
  static SpacePtr g = share(MeasureSpace::gaussian_line(4096));
  return g;
}

SpacePtr cube(int n, int r) { return share(MeasureSpace::unit_cube(n, r)); }

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

TEST_CASE("Hardy operator") {
  const auto g = gaussian_profile();
  const std::vector<double> none;
  for (double t : {1e-6, 0.01, 0.2, 0.49}) {
    CHECK(hardy_operator([&g](double s) { return g(s); }, none, g, t) == doctest::Approx(0.5 - t).epsilon(1e-12));
    CHECK(hardy_operator([](double) { return 0.0; }, none, g, t) == 0.0);
    // ∫_t^{1/2} ds / I_γ(s) = -Φ^{-1}(t) after s = Φ(x).
    CHECK(std::fabs(hardy_operator([](double) { return 1.0; }, none, g, t) + special::normal_quantile(t)) < 1e-8);
  }
  CHECK(hardy_operator([](double) { return 1.0; }, none, g, 0.7) == 0.0);
  CHECK_THROWS_AS(hardy_operator([](double) { return 1.0; }, none, g, 0.0), PreconditionError);
}

TEST_CASE("Poincare identity") {
  auto c = poincare_identity_check(GridFunction::constant(gauss(), 2.0), gaussian_profile());
  CHECK(max_abs(c.lhs) == 0.0);
  CHECK(max_abs(c.rhs) == 0.0);

  auto x = poincare_identity_check(S(gauss(), "x1"), gaussian_profile());
  CHECK(x.verdict.kind == VerdictKind::IdentityWithin);
  for (std::size_t i = 0; i < x.t.size(); ++i)
    CHECK(std::fabs(x.lhs[i] - special::normal_quantile(1.0 - x.t[i])) < 1e-6);

  const std::string e = "0.3*sin(5*x1 + 1) + 0.2*sin(11*x1)";
  auto coarse = poincare_identity_check(S(cube(1, 256), e), interval_profile(), PoincareMesh::TGrid);
  auto fine = poincare_identity_check(S(cube(1, 1024), e), interval_profile(), PoincareMesh::TGrid);
  CHECK(coarse.empirical_constant / fine.empirical_constant >= 1.5);
}

TEST_CASE("Hardy norm and Poincare chain") {
  auto h = hardy_norm_estimate(relative_min_profile(euclidean_profile(1), 1.0), 1.0);
  CHECK(h.value == doctest::Approx(0.25).epsilon(0.1));
  CHECK(h.value <= 0.25 + 1e-12);
  CHECK(h.ratios.size() == 50);

  auto c = poincare_chain_check(GridFunction::constant(gauss(), 1.0), NormDescriptor::lp(2), gaussian_profile());
  CHECK(max_abs(c.lhs) < 1e-12);
  auto x = poincare_chain_check(S(gauss(), "x1"), NormDescriptor::lp(2), gaussian_profile());
  CHECK(x.passed());
  REQUIRE(x.explicit_constant);
  CHECK(x.lhs[0] <= *x.explicit_constant * x.rhs[0]);
  CHECK(x.metadata.contains("hardy_norm_lower_bound"));
  CHECK_THROWS_AS(poincare_chain_check(S(gauss(), "x1"), NormDescriptor::lorentz(2, 2), gaussian_profile()),
                  PreconditionError);
}

TEST_CASE("L^p modulus inequality") {
  auto c = verify_oscillation_modulus(GridFunction::constant(cube(1, 64), 3.0), 2.0);
  CHECK(max_abs(c.lhs) == 0.0);
  auto a = verify_oscillation_modulus(S(cube(2, 64), "x1"), 2.0);
  auto b = verify_oscillation_modulus(S(cube(2, 128), "x1"), 2.0);
  CHECK(std::isfinite(a.empirical_constant));
  CHECK(std::fabs(b.empirical_constant - a.empirical_constant) < 0.05);
  for (double eps : {0.2, 0.1, 0.05}) {
    auto r = verify_oscillation_modulus(S(cube(1, 128), smoothed_indicator_expression(0.5, eps)), 2.0);
    CHECK(std::isfinite(r.empirical_constant));
    CHECK(r.passed());
  }
  CHECK_THROWS_AS(verify_oscillation_modulus(S(gauss(), "x1"), 2.0), PreconditionError);
}

TEST_CASE("Garsia-Rodemich display") {
  auto c = verify_garsia(GridFunction::constant(cube(1, 64), 1.0), 2.0);
  CHECK(max_abs(c.lhs) == 0.0);
  CHECK(c.passed());
  auto x = verify_garsia(S(cube(1, 256), "x1"), 2.0);
  CHECK(std::isfinite(x.empirical_constant));
  for (std::size_t i = 0; i < x.t.size(); ++i)
    if (x.t[i] < 0.5) CHECK(x.lhs[i] == doctest::Approx(0.5 - x.t[i]).epsilon(2.0 / 256));
  double prev = 0.0;
  for (double w : {0.2, 0.05}) {
    auto steep = verify_garsia(S(cube(1, 512), "min(1, max(0, (x1 - 0.5)/" + format_number(w) + " + 0.5))"), 2.0);
    CHECK(std::isfinite(steep.empirical_constant));
    CHECK(steep.empirical_constant >= prev);
    prev = steep.empirical_constant;
  }
}

TEST_CASE("Morrey") {
  CHECK(morrey_constant(1, 2.0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-10));
  CHECK_THROWS_AS(morrey_constant(2, 2.0), PreconditionError);
  auto c = morrey_holder_check(GridFunction::constant(cube(1, 256), 2.0), 2.0);
  CHECK(c.metadata["oscillation"].get<double>() == 0.0);
  auto x = morrey_holder_check(S(cube(1, 1024), "x1"), 2.0);
  CHECK(x.metadata["oscillation_bound_holds"].get<bool>());
  CHECK(x.metadata["oscillation"].get<double>() <= 2.0 * morrey_constant(1, 2.0) * 1.0 + 1e-12);
  CHECK(x.metadata["holder_exponent_fit"].get<double>() >= 0.5);
  CHECK_THROWS_AS(morrey_holder_check(S(cube(2, 32), "x1"), 2.0), PreconditionError);
}

TEST_CASE("higher order") {
  const auto unit = interval_profile();
  auto c = verify_higher_order(GridFunction::constant(cube(1, 256), 1.0), 2, unit);
  CHECK(max_abs(c.lhs) == 0.0);

  auto start = std::chrono::steady_clock::now();
  // f = x^2/2, I = 1: f* = (1-t)^2/2, |D^2 f| = 1, ||f'||_1 = 1/2.
  auto q = verify_higher_order(S(cube(1, 1024), "x1^2/2"), 2, unit);
  CHECK(q.passed());
  for (std::size_t i = 0; i < q.t.size(); ++i) {
    const double t = q.t[i];
    const double osc = (1.0 - std::pow(1.0 - t, 3)) / (6.0 * t) - 0.5 * (1.0 - t) * (1.0 - t);
    const double rhs = t * (0.5 * (0.5 - t) * (0.5 - t) + 0.5);
    CHECK(osc <= rhs);
    CHECK(q.rhs[i] == doctest::Approx(rhs).epsilon(2e-3));
    CHECK(std::fabs(q.lhs[i] - osc) <= 2.0 / 1024);
    CHECK(q.lhs[i] <= q.rhs[i] * (1 + 1e-3));
  }
  auto b = verify_higher_order(S(cube(1, 1024), "16*x1^2*(1 - x1)^2"), 3, unit);
  CHECK(b.passed());
  CHECK(b.metadata.contains("corollary_constant"));
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(60));
  CHECK_THROWS_AS(verify_higher_order(S(cube(1, 64), "x1"), 1, unit), PreconditionError);

  // I = 2 overestimates the profile of [0, 1], and the check reports it.
  const auto two = relative_min_profile(euclidean_profile(1), 1.0);
  CHECK_FALSE(verify_higher_order(S(cube(1, 1024), "x1^2/2"), 2, two).passed());
}

TEST_CASE("transference") {
  for (int n : {1, 2, 5}) {
    auto ti = transference_integral(euclidean_profile(n, 1.0));
    const double closed = std::exp(std::lgamma(1.0 + 0.5 * n) / n) / std::sqrt(static_cast<double>(n));
    CHECK_FALSE(ti.divergent);
    CHECK(ti.value == doctest::Approx(closed).epsilon(1e-6));
  }
  CHECK(transference_integral(gaussian_profile()).divergent);
  auto z = verify_transference(GridFunction::constant(gauss(), 0.0), gaussian_profile(), 2.0);
  CHECK(max_abs(z.lhs) == 0.0);
  auto t = verify_transference(S(cube(1, 512), "max(0, 0.5 - abs(x1 - 0.5))"), interval_profile(), 2.0);
  CHECK(std::isfinite(t.empirical_constant));
}

TEST_CASE("Gamma transference constant") {
  CHECK(gamma_transference_constant(1) == doctest::Approx(0.8862269).epsilon(1e-7));
  CHECK(gamma_transference_constant(2) == doctest::Approx(0.7071068).epsilon(1e-7));
  double sup = 0.0;
  for (int n = 1; n <= 64; ++n) sup = std::max(sup, gamma_transference_constant(n));
  CHECK(sup <= 1.0);
  CHECK_THROWS_AS(gamma_transference_constant(0), PreconditionError);
}
