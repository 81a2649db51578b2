#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "rearr/error.hpp"
#include "rearr/norms.hpp"
#include "rearr/special.hpp"

using namespace rearr;

namespace {

StepFunction log_step() {
  std::vector<double> br{0.0};
  std::vector<double> v;
  for (int i = 400; i >= 0; --i) br.push_back(std::pow(10.0, -0.05 * i));
  for (std::size_t j = 0; j + 1 < br.size(); ++j) v.push_back(std::log(1.0 / br[j + 1]));
  return StepFunction(br, v);
}

}  // namespace

TEST_CASE("descriptor text round trip") {
  for (const char* s : {"Lp:2", "Lp:inf", "Lorentz:2,2", "LorentzOsc:3", "LinfInf", "BWH:4", "LqLogL:2,1", "FK:2"}) {
    auto d = NormDescriptor::parse(s);
    CHECK(d.to_string() == s);
  }
  CHECK_THROWS_AS(NormDescriptor::parse("Lp"), PreconditionError);
  CHECK_THROWS_AS(NormDescriptor::parse("Weird:1"), PreconditionError);
}

TEST_CASE("closed-form values") {
  auto one = StepFunction::indicator(1.0);
  CHECK(evaluate(NormDescriptor::lorentz(2, 2).with_mass(kInfinity), one) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  for (double q : {1.0, 2.0, 3.0})
    for (double a : {0.1, 1.0})
      CHECK(evaluate(NormDescriptor::lorentz_osc(q).with_mass(kInfinity), StepFunction::indicator(a)) ==
            doctest::Approx(std::pow(1.0 / q, 1.0 / q)).epsilon(1e-10));
  CHECK(bwh_norm(one, 2.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fiorenza_karadzhov_norm(one, 2.0) == doctest::Approx(std::sqrt(2.0 * special::kPi)).epsilon(1e-10));
  auto f = StepFunction({0.0, 0.5, 1.0}, {2.0, 1.0});
  CHECK(evaluate(NormDescriptor::lp(1), f) == doctest::Approx(1.5));
  CHECK(evaluate(NormDescriptor::lp(2), f) == doctest::Approx(std::sqrt(2.5)));
  CHECK(evaluate(NormDescriptor::lp(kInfinity), f) == 2.0);
}

TEST_CASE("zero function has zero norm") {
  const StepFunction zero = StepFunction::constant(0.0, 1.0);
  for (const char* s : {"Lp:2", "Lorentz:2,2", "LorentzOsc:2", "LinfInf", "BWH:2", "LqLogL:2,1", "FK:2"})
    CHECK(evaluate(NormDescriptor::parse(s), zero) == 0.0);
}

TEST_CASE("classical L(inf, q) integral diverges for nonzero data") {
  CHECK(classical_linf_q_diverges(StepFunction::indicator(1.0), 2.0));
  CHECK_FALSE(classical_linf_q_diverges(StepFunction::constant(0.0, 1.0), 2.0));
  std::vector<double> br, v;
  for (int i = 0; i <= 256; ++i) br.push_back(i / 256.0);
  for (int i = 0; i < 256; ++i) v.push_back(1.0 - (i + 1) / 256.0 + 1e-3);
  CHECK(classical_linf_q_diverges(StepFunction(br, v), 2.0));
  // sup(f** - f*) of χ_[0,1): zero on (0, 1), and sup_{t>1} 1/t = 1 on (0, ∞).
  CHECK(evaluate(NormDescriptor::linf_inf(), StepFunction::indicator(1.0)) == 0.0);
  CHECK(evaluate(NormDescriptor::linf_inf().with_mass(kInfinity), StepFunction::indicator(1.0)) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("BWH contains logarithmic functions") {
  const double n = bwh_norm(log_step(), 2.0);
  CHECK(std::isfinite(n));
  CHECK(n > 1.0);
}

TEST_CASE("Fiorenza-Karadzhov dominates LqLogL") {
  // Embedding constant pinned by sweep: the minimum ratio over this family is 1.7725.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const int m = 1 + static_cast<int>(rng() % 12);
    std::vector<double> len(static_cast<std::size_t>(m)), val(static_cast<std::size_t>(m));
    double tot = 0.0;
    for (auto& l : len) tot += (l = u(rng) + 0.01);
    for (auto& l : len) l /= tot;
    for (auto& x : val) x = 5.0 * u(rng);
    std::sort(val.rbegin(), val.rend());
    auto f = StepFunction::from_lengths(len, val);
    CHECK(fiorenza_karadzhov_norm(f, 2.0) >= 1.7 * evaluate(NormDescriptor::lq_log_l(2, 1), f));
  }
}

TEST_CASE("fundamental functions") {
  for (double p : {1.0, 2.0, 4.0})
    for (double t : {0.1, 0.5})
      CHECK(fundamental_function(NormDescriptor::lp(p), t) == doctest::Approx(std::pow(t, 1.0 / p)).epsilon(1e-12));
  CHECK(fundamental_function(NormDescriptor::lp(kInfinity), 0.3) == 1.0);
  CHECK(fundamental_function(NormDescriptor::lorentz(2, 2).with_mass(kInfinity), 1.0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("norms are rearrangement invariant and homogeneous") {
  auto f = StepFunction({0.0, 0.2, 0.7, 1.0}, {3.0, 1.0, 0.5});
  for (const char* s : {"Lp:3", "Lorentz:2,3", "BWH:3", "FK:2", "LqLogL:2,1"}) {
    auto d = NormDescriptor::parse(s);
    CHECK(evaluate(d, f.scaled(2.5)) == doctest::Approx(2.5 * evaluate(d, f)).epsilon(1e-10));
  }
}
