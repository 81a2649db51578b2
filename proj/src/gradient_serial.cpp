#include <algorithm>
#include <cmath>

#include "rearr/error.hpp"
#include "rearr/gradient.hpp"

namespace rearr {

namespace detail {

double first_order_axis(const GridFunction& f, std::size_t cell, int axis) {
  const MeasureSpace& s = *f.space;
  double best = 0.0;
  for (int dir : {-1, 1}) {
    const std::size_t nb = s.neighbor(cell, axis, dir);
    if (nb == MeasureSpace::npos) continue;
    best = std::max(best, std::fabs(f.values[nb] - f.values[cell]) / s.distance(cell, nb));
  }
  return best;
}

std::vector<std::vector<int>> multi_indices(int dimension, int order) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(dimension), 0);
  // Compositions of `order` into `dimension` non-negative parts, lexicographic.
  auto rec = [&](auto&& self, int axis, int left) -> void {
    if (axis == dimension - 1) {
      cur[static_cast<std::size_t>(axis)] = left;
      out.push_back(cur);
      return;
    }
    for (int a = left; a >= 0; --a) {
      cur[static_cast<std::size_t>(axis)] = a;
      self(self, axis + 1, left - a);
    }
  };
  rec(rec, 0, order);
  return out;
}

double mixed_difference(const GridFunction& f, std::size_t cell, const std::vector<int>& alpha) {
  const MeasureSpace& s = *f.space;
  const int n = s.dimension();
  const int r = s.cells_per_axis();
  std::vector<int> start(static_cast<std::size_t>(n));
  int order = 0;
  for (int d = 0; d < n; ++d) {
    const int a = alpha[static_cast<std::size_t>(d)];
    start[static_cast<std::size_t>(d)] = std::clamp(s.coordinate_index(cell, d) - a / 2, 0, r - 1 - a);
    order += a;
  }
  std::vector<int> j(static_cast<std::size_t>(n), 0);
  std::vector<int> idx(static_cast<std::size_t>(n));
  double sum = 0.0;
  while (true) {
    double coeff = 1.0;
    for (int d = 0; d < n; ++d) {
      const int a = alpha[static_cast<std::size_t>(d)];
      const int jd = j[static_cast<std::size_t>(d)];
      // (-1)^{a - jd} C(a, jd)
      double c = 1.0;
      for (int m = 1; m <= jd; ++m) c = c * (a - m + 1) / m;
      if ((a - jd) % 2) c = -c;
      coeff *= c;
      idx[static_cast<std::size_t>(d)] = start[static_cast<std::size_t>(d)] + jd;
    }
    sum += coeff * f.values[s.linear_index(idx)];
    int d = n - 1;
    while (d >= 0) {
      if (++j[static_cast<std::size_t>(d)] <= alpha[static_cast<std::size_t>(d)]) break;
      j[static_cast<std::size_t>(d)] = 0;
      --d;
    }
    if (d < 0) break;
  }
  return sum / std::pow(s.spacing(), order);
}

std::vector<std::vector<int>> half_space_shifts(int dimension, int cells_per_axis, double spacing, double t_max) {
  const int reach = std::min(cells_per_axis - 1, static_cast<int>(std::floor(t_max / spacing * (1.0 + 1e-12))));
  std::vector<std::vector<int>> out;
  if (reach < 1) return out;
  std::vector<int> h(static_cast<std::size_t>(dimension), -reach);
  const double limit = t_max * t_max * (1.0 + 1e-12);
  while (true) {
    int first = 0;
    for (int v : h)
      if (v != 0) {
        first = v;
        break;
      }
    if (first > 0) {
      double len2 = 0.0;
      for (int v : h) len2 += (v * spacing) * (v * spacing);
      if (len2 <= limit) out.push_back(h);
    }
    int d = dimension - 1;
    while (d >= 0) {
      if (++h[static_cast<std::size_t>(d)] <= reach) break;
      h[static_cast<std::size_t>(d)] = -reach;
      --d;
    }
    if (d < 0) break;
  }
  return out;
}

double shift_norm(const GridFunction& f, const std::vector<int>& h, double p) {
  const MeasureSpace& s = *f.space;
  const int n = s.dimension();
  const int r = s.cells_per_axis();
  std::vector<int> lo(static_cast<std::size_t>(n));
  std::vector<int> hi(static_cast<std::size_t>(n));
  std::ptrdiff_t offset = 0;
  for (int d = 0; d < n; ++d) {
    const int hd = h[static_cast<std::size_t>(d)];
    lo[static_cast<std::size_t>(d)] = std::max(0, -hd);
    hi[static_cast<std::size_t>(d)] = r - 1 - std::max(0, hd);
    if (lo[static_cast<std::size_t>(d)] > hi[static_cast<std::size_t>(d)]) return 0.0;
    offset += static_cast<std::ptrdiff_t>(hd) * static_cast<std::ptrdiff_t>(s.stride(d));
  }
  const bool inf = std::isinf(p);
  const bool square = (p == 2.0);
  const auto w = s.weights();
  const double* v = f.values.data();
  double acc = 0.0;
  double mass = 0.0;
  std::vector<int> idx(lo);
  const int last = n - 1;
  while (true) {
    idx[static_cast<std::size_t>(last)] = lo[static_cast<std::size_t>(last)];
    const std::size_t base = s.linear_index(idx);
    const int count = hi[static_cast<std::size_t>(last)] - lo[static_cast<std::size_t>(last)] + 1;
    for (int i = 0; i < count; ++i) {
      const std::size_t c = base + static_cast<std::size_t>(i);
      const double diff = std::fabs(v[static_cast<std::ptrdiff_t>(c) + offset] - v[c]);
      if (inf) {
        acc = std::max(acc, diff);
      } else {
        acc += w[c] * (square ? diff * diff : std::pow(diff, p));
      }
      mass += w[c];
    }
    int d = last - 1;
    while (d >= 0) {
      if (++idx[static_cast<std::size_t>(d)] <= hi[static_cast<std::size_t>(d)]) break;
      idx[static_cast<std::size_t>(d)] = lo[static_cast<std::size_t>(d)];
      --d;
    }
    if (d < 0) break;
  }
  if (inf) return acc;
  if (mass <= 0.0) return 0.0;
  return square ? std::sqrt(acc / mass) : std::pow(acc / mass, 1.0 / p);
}

double combine_multi(double acc, double v, MultiIndexNorm rule) {
  switch (rule) {
    case MultiIndexNorm::L2: return acc + v * v;
    case MultiIndexNorm::Linf: return std::max(acc, v);
    case MultiIndexNorm::L1: return acc + v;
  }
  return acc;
}

double finish_multi(double acc, MultiIndexNorm rule) { return rule == MultiIndexNorm::L2 ? std::sqrt(acc) : acc; }

}  // namespace detail

namespace serial {

GradientField gradient_modulus(const GridFunction& f) {
  const MeasureSpace& s = *f.space;
  GradientField g{f.space, std::vector<double>(f.size(), 0.0)};
  for (std::size_t c = 0; c < f.size(); ++c) {
    double best = 0.0;
    for (int d = 0; d < s.dimension(); ++d) best = std::max(best, detail::first_order_axis(f, c, d));
    g.values[c] = best;
  }
  return g;
}

GradientField kth_derivative_modulus(const GridFunction& f, int k, MultiIndexNorm rule) {
  const MeasureSpace& s = *f.space;
  require(k >= 1, "kth_derivative_modulus: k >= 1");
  require(s.kind() != SpaceKind::GaussianLine, "kth_derivative_modulus: needs a uniform grid");
  require(s.cells_per_axis() > 2 * k, "kth_derivative_modulus: need cells_per_axis > 2k");
  GradientField g{f.space, std::vector<double>(f.size(), 0.0)};
  const auto alphas = detail::multi_indices(s.dimension(), k);
  for (std::size_t c = 0; c < f.size(); ++c) {
    double acc = 0.0;
    if (k == 1) {
      for (int d = 0; d < s.dimension(); ++d) acc = detail::combine_multi(acc, detail::first_order_axis(f, c, d), rule);
    } else {
      for (const auto& a : alphas) acc = detail::combine_multi(acc, std::fabs(detail::mixed_difference(f, c, a)), rule);
    }
    g.values[c] = detail::finish_multi(acc, rule);
  }
  return g;
}

std::vector<std::pair<double, double>> shift_norms(const GridFunction& f, double p, double t_max) {
  const MeasureSpace& s = *f.space;
  require(s.kind() == SpaceKind::UnitCube || s.kind() == SpaceKind::EuclideanBox,
          "modulus_of_continuity: UnitCube or EuclideanBox only");
  const double h = s.spacing();
  const auto shifts = detail::half_space_shifts(s.dimension(), s.cells_per_axis(), h, t_max);
  std::vector<std::pair<double, double>> out(shifts.size());
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    double len2 = 0.0;
    for (int v : shifts[i]) len2 += (v * h) * (v * h);
    out[i] = {std::sqrt(len2), detail::shift_norm(f, shifts[i], p)};
  }
  return out;
}

}  // namespace serial

}  // namespace rearr
