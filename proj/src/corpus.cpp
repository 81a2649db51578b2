#include "rearr/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "rearr/error.hpp"
#include "rearr/gradient.hpp"

namespace rearr {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string smoothed_indicator_expression(double a, double eps) {
  return "min(1, max(0, (" + format_number(a + eps) + " - x1)/" + format_number(eps) + "))";
}

namespace {

struct Frame {
  int n = 1;
  double centre = 0.0;
  double scale = 1.0;
  bool bounded = true;
  double lower = 0.0;
  double upper = 1.0;
};

Frame frame_of(const MeasureSpace& s) {
  Frame f;
  f.n = s.dimension();
  if (s.kind() == SpaceKind::GaussianLine) {
    f.centre = 0.0;
    f.scale = 1.0;
    f.bounded = false;
  } else {
    f.lower = s.lower();
    f.upper = s.upper();
    f.centre = 0.5 * (f.lower + f.upper);
    f.scale = 0.5 * (f.upper - f.lower);
  }
  return f;
}

std::string point(const Frame& f, double offset) {
  std::string out;
  for (int d = 0; d < f.n; ++d) out += ", " + format_number(f.centre + (d == 0 ? offset : 0.0));
  return out;
}

std::string coord(int d) { return "x" + std::to_string(d + 1); }

}  // namespace

std::vector<CorpusSpec> corpus_specs(const MeasureSpace& space, std::uint64_t seed) {
  const Frame fr = frame_of(space);
  const std::string c = format_number(fr.centre);
  const std::string s = format_number(fr.scale);
  std::vector<CorpusSpec> out;
  out.push_back({"linear", "linear", "x1"});
  if (fr.n >= 2) {
    out.push_back({"linear_mixed", "linear", "x1 + 0.5*x2"});
  } else {
    out.push_back({"linear_affine", "linear", "3 - 2*x1"});
  }
  out.push_back({"distance_centre", "distance", "dist(x" + point(fr, 0.0) + ")"});
  if (fr.bounded) {
    std::string e = "min(";
    for (int d = 0; d < fr.n; ++d) {
      if (d) e += ", ";
      e += coord(d) + " - " + format_number(fr.lower) + ", " + format_number(fr.upper) + " - " + coord(d);
    }
    out.push_back({"distance_boundary", "distance", e + ")"});
  } else {
    out.push_back({"distance_point", "distance", "abs(x1 - 1)"});
  }
  out.push_back({"tent", "tent", "max(0, " + s + " - abs(x1 - " + c + "))"});
  out.push_back({"bump", "bump", "max(0, 1 - (dist(x" + point(fr, 0.0) + ")/" + s + ")^2)^2"});
  out.push_back({"bump_offset", "bump",
                 "max(0, 1 - (dist(x" + point(fr, fr.scale / 3.0) + ")/" + format_number(fr.scale / 2.0) + ")^2)^2"});
  out.push_back({"indicator_wide", "indicator-smoothed", smoothed_indicator_expression(fr.centre, 0.2 * fr.scale)});
  out.push_back({"indicator_sharp", "indicator-smoothed", smoothed_indicator_expression(fr.centre, 0.05 * fr.scale)});

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> freq(0.5, 3.0);
  std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
  std::uniform_real_distribution<double> mix(-1.0, 1.0);
  for (int m = 0; m < 3; ++m) {
    std::string e;
    for (int k = 0; k < 4; ++k) {
      const double a = amp(rng);
      const double w = freq(rng) / fr.scale;
      const double ph = phase(rng);
      std::string arg = format_number(w) + "*(x1";
      for (int d = 1; d < fr.n; ++d) arg += " + " + format_number(mix(rng)) + "*" + coord(d);
      arg += ") + " + format_number(ph);
      if (k) e += " + ";
      e += format_number(a) + "*sin(" + arg + ")";
    }
    out.push_back({"random_lipschitz_" + std::to_string(m + 1), "random-Lipschitz", e});
  }
  return out;
}

GridFunction sample_expression(const SpacePtr& space, const Expression& e) {
  require(e.max_coordinate() < space->dimension(), "sample_expression: expression uses more coordinates than the space");
  return GridFunction::sample(space, [&e](std::span<const double> x) { return e(x); });
}

bool resolved_on_grid(const GridFunction& f) {
  const MeasureSpace& space = *f.space;
  const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
  const double range = *hi - *lo;
  const GradientField g = gradient_modulus(f);
  // Largest per-cell change |∇f| times the distance to a neighbour.
  double step = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c) {
    for (int d = 0; d < space.dimension(); ++d)
      for (int dir : {-1, 1}) {
        const std::size_t nb = space.neighbor(c, d, dir);
        if (nb != MeasureSpace::npos) step = std::max(step, g.values[c] * space.distance(c, nb));
      }
  }
  return std::isfinite(step) && !(range > 0.0 && step > 0.25 * range);
}

TestCorpus make_corpus(const SpacePtr& space, std::uint64_t seed) {
  TestCorpus corpus;
  corpus.seed = seed;
  for (const auto& spec : corpus_specs(*space, seed)) {
    GridFunction f = sample_expression(space, Expression::parse(spec.expression));
    if (!resolved_on_grid(f)) {
      corpus.skipped.push_back(spec.label);
      continue;
    }
    corpus.entries.push_back({spec.label, spec.family, spec.expression, std::move(f)});
  }
  return corpus;
}

}  // namespace rearr
