#include <cmath>

#include "doctest.h"
#include "rearr/error.hpp"
#include "rearr/profiles.hpp"
#include "rearr/special.hpp"

using namespace rearr;

TEST_CASE("euclidean profile") {
  auto i1 = euclidean_profile(1);
  for (double t : {0.01, 0.5, 3.0}) CHECK(i1(t) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(euclidean_profile(2)(1.0) == doctest::Approx(3.5449077018110318).epsilon(1e-14));
  for (int n : {1, 2, 3, 7})
    for (double t : {1e-4, 0.2, 0.9}) {
      const double cn = n * std::pow(special::unit_ball_volume(n), 1.0 / n);
      CHECK(t / euclidean_profile(n)(t) == doctest::Approx(std::pow(t, 1.0 / n) / cn).epsilon(1e-13));
    }
  CHECK(euclidean_profile(3).flags().concave);
  CHECK_THROWS_AS(euclidean_profile(0), PreconditionError);
}

TEST_CASE("gaussian profile") {
  auto g = gaussian_profile();
  CHECK(g(0.5) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
  for (double t : {0.01, 0.1, 0.3}) CHECK(std::fabs(g(t) - g(1.0 - t)) <= 1e-12);
  CHECK(g.flags().symmetric);
  CHECK(g.flags().concave);
  CHECK(g(0.0) == 0.0);
  CHECK(g(1.0) == 0.0);
  CHECK_THROWS_AS(g(1.5), PreconditionError);

  double prev_gap = 1.0;
  for (double t : {1e-3, 1e-6, 1e-9}) {
    const double gap = std::fabs(g(t) / (t * std::sqrt(2.0 * std::log(1.0 / t))) - 1.0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 0.05);
}

TEST_CASE("equivalence constants") {
  auto c = gaussian_equivalence_constants(1e-6, 0.4);
  CHECK(c.c_min > 0.5);
  CHECK(c.c_max < 2.5);
  CHECK(std::isfinite(c.c_min));
  auto c2 = gaussian_equivalence_constants(1e-6, 0.4, 2000);
  CHECK(c2.c_min == doctest::Approx(c.c_min).epsilon(0.01));
  CHECK(c2.c_max == doctest::Approx(c.c_max).epsilon(0.01));

  auto d = gaussian_equivalence_constants(0.1, 0.1);
  CHECK(d.c_min == d.c_max);

  // t^{1/2} dominates t (log 1/t)^{1/2} near 0: the upper constant is unbounded.
  auto e = euclidean_profile(2);
  double prev = 0.0;
  for (double lo : {1e-3, 1e-6, 1e-9, 1e-12}) {
    const double cmax = gaussian_equivalence_constants(e, lo, 0.4).c_max;
    CHECK(cmax > 2.0 * prev);
    prev = cmax;
  }
}

TEST_CASE("relative minimum profile") {
  for (int n : {1, 2, 3}) {
    auto base = euclidean_profile(n);
    auto r = relative_min_profile(base, 1.0);
    const double cn = n * std::pow(special::unit_ball_volume(n), 1.0 / n);
    for (double s : {0.1, 0.5, 0.8})
      CHECK(r(s) == doctest::Approx(cn * std::pow(std::min(s, 1.0 - s), 1.0 - 1.0 / n)).epsilon(1e-13));
    CHECK(r(0.5) == doctest::Approx(base(0.5)).epsilon(1e-14));
    CHECK(r.flags().symmetric);
  }
  auto g = gaussian_profile();
  auto rg = relative_min_profile(g, 1.0);
  for (double t : g.check_grid()) CHECK(rg(t) == doctest::Approx(g(t)).epsilon(1e-12));
}

TEST_CASE("phi map") {
  auto p = phi_of(euclidean_profile(2));
  CHECK(p.non_decreasing_certificate);
  const double c2 = 2.0 * std::sqrt(special::kPi);
  CHECK(p.phi(0.3) == doctest::Approx(std::sqrt(0.3) / c2).epsilon(1e-13));
  CHECK(phi_of(gaussian_profile()).non_decreasing_certificate);
  auto k = phi_of(constant_profile(3.0, 1.0));
  CHECK(k.non_decreasing_certificate);
  CHECK(k.phi(0.6) == doctest::Approx(0.2));
}

TEST_CASE("gaussian type check") {
  CHECK(gaussian_type_check(gaussian_profile(), 0.5));
  // Pinned by sweep: t^{1/2} exceeds c t (log 1/t)^{1/2} near 0 for every c.
  CHECK(gaussian_type_check(euclidean_profile(2), 1.0));
  CHECK(gaussian_type_check(euclidean_profile(2), 0.01));
  auto zero = Profile("zero", 1.0, [](double) { return 0.0; }, Profile::Flags{}, nlohmann::json::object());
  CHECK_FALSE(gaussian_type_check(zero, 0.1));
}

TEST_CASE("cube lower bound and interval profiles") {
  auto q = cube_lower_bound_profile();
  CHECK(q.flags().lower_bound_only);
  CHECK(q(0.25) == doctest::Approx(0.25 * std::sqrt(std::log(4.0))).epsilon(1e-13));
  CHECK(q(0.25) == doctest::Approx(q(0.75)).epsilon(1e-13));
  auto i = interval_profile();
  CHECK(i(0.3) == 1.0);
  CHECK(i(1.0) == 0.0);
}

TEST_CASE("tabulated profile and flag verification") {
  std::vector<double> t{0.1, 0.25, 0.5, 0.75, 0.9};
  std::vector<double> v{0.2, 0.4, 0.5, 0.4, 0.2};
  auto p = tabulated_profile("tab", t, v, 1.0);
  for (std::size_t k = 0; k < t.size(); ++k) CHECK(p(t[k]) == doctest::Approx(v[k]).epsilon(1e-14));
  CHECK(p(0.6) > 0.4);
  CHECK(p(0.6) < 0.5);

  auto bad = Profile("bad", 1.0, [](double s) { return s * s * (1 - s); }, Profile::Flags{true, false, true, false},
                     nlohmann::json::object());
  CHECK_THROWS_AS(bad.verify_flags(), PreconditionError);
}

TEST_CASE("profile JSON round trip") {
  for (const auto& p : {euclidean_profile(3), euclidean_profile(2, 1.0), gaussian_profile(), interval_profile(),
                        cube_lower_bound_profile(0.5), constant_profile(2.0, 1.0),
                        relative_min_profile(euclidean_profile(2), 1.0)}) {
    auto q = profile_from_json(p.to_json());
    CHECK(q.label() == p.label());
    CHECK(q.mass() == p.mass());
    for (double t : {0.05, 0.3, 0.7}) CHECK(q(t) == p(t));
  }
  CHECK_THROWS_AS(profile_from_json({{"kind", "nope"}}), PreconditionError);
}
