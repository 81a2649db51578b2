#include "rearr/gradient.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rearr/error.hpp"

namespace rearr {

double GradientField::max() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, v);
  return m;
}

double GradientField::lp_norm(double p) const {
  if (std::isinf(p)) return max();
  const auto w = space->weights();
  double s = 0.0;
  for (std::size_t c = 0; c < values.size(); ++c) s += w[c] * std::pow(values[c], p);
  return std::pow(s, 1.0 / p);
}

GradientField gradient_modulus(const GridFunction& f) {
  require(f.space != nullptr, "gradient_modulus: function without space");
  const MeasureSpace& s = *f.space;
  GradientField g{f.space, std::vector<double>(f.size(), 0.0)};
  const auto n = static_cast<std::ptrdiff_t>(f.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < n; ++c) {
    double best = 0.0;
    for (int d = 0; d < s.dimension(); ++d)
      best = std::max(best, detail::first_order_axis(f, static_cast<std::size_t>(c), d));
    g.values[static_cast<std::size_t>(c)] = best;
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
  const auto n = static_cast<std::ptrdiff_t>(f.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ci = 0; ci < n; ++ci) {
    const auto c = static_cast<std::size_t>(ci);
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

ModulusTable::ModulusTable(const GridFunction& f, double p, double t_max) : p_(p) {
  const MeasureSpace& s = *f.space;
  require(p >= 1.0, "modulus_of_continuity: p >= 1");
  require(s.kind() == SpaceKind::UnitCube || s.kind() == SpaceKind::EuclideanBox,
          "modulus_of_continuity: UnitCube or EuclideanBox only");
  const double h = s.spacing();
  const auto shifts = detail::half_space_shifts(s.dimension(), s.cells_per_axis(), h, t_max);
  std::vector<std::pair<double, double>> rows(shifts.size());
  const auto m = static_cast<std::ptrdiff_t>(shifts.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    const auto& sh = shifts[static_cast<std::size_t>(i)];
    double len2 = 0.0;
    for (int v : sh) len2 += (v * h) * (v * h);
    rows[static_cast<std::size_t>(i)] = {std::sqrt(len2), detail::shift_norm(f, sh, p)};
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  double running = 0.0;
  for (const auto& [len, val] : rows) {
    running = std::max(running, val);
    if (!radii_.empty() && len <= radii_.back() * (1.0 + 1e-12)) {
      values_.back() = running;
    } else {
      radii_.push_back(len);
      values_.push_back(running);
    }
  }
}

double ModulusTable::operator()(double t) const {
  const auto it = std::upper_bound(radii_.begin(), radii_.end(), t * (1.0 + 1e-12));
  if (it == radii_.begin()) return 0.0;
  return values_[static_cast<std::size_t>(it - radii_.begin()) - 1];
}

double modulus_of_continuity(const GridFunction& f, double t, double p) { return ModulusTable(f, p, t)(t); }

namespace {

double dilated_mass_1d(const std::vector<std::pair<double, double>>& runs, const MeasureSpace& s, double h) {
  double m = 0.0;
  double cur_lo = 0.0;
  double cur_hi = 0.0;
  bool open = false;
  for (const auto& [lo, hi] : runs) {
    const double a = lo - h;
    const double b = hi + h;
    if (open && a <= cur_hi) {
      cur_hi = std::max(cur_hi, b);
      continue;
    }
    if (open) m += s.mass_between(cur_lo, cur_hi);
    cur_lo = a;
    cur_hi = b;
    open = true;
  }
  if (open) m += s.mass_between(cur_lo, cur_hi);
  return m;
}

PerimeterEstimate minkowski_1d(const std::vector<bool>& A, const MeasureSpace& s) {
  const auto b = s.boundaries();
  std::vector<std::pair<double, double>> runs;
  double width = std::numeric_limits<double>::infinity();
  const std::size_t m = A.size();
  for (std::size_t i = 0; i < m;) {
    if (!A[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < m && A[j]) ++j;
    runs.emplace_back(b[i], b[j]);
    // Widths of the cells on either side of each free end.
    if (i > 0) width = std::min({width, b[i] - b[i - 1], b[i + 1] - b[i]});
    if (j < m) width = std::min({width, b[j] - b[j - 1], b[j + 1] - b[j]});
    i = j;
  }
  PerimeterEstimate out;
  for (const auto& [lo, hi] : runs) out.set_mass += s.mass_between(lo, hi);
  if (!std::isfinite(width)) width = b[1] - b[0];
  for (double k : {4.0, 2.0, 1.0}) {
    const double h = k * width;
    out.h.push_back(h);
    out.estimates.push_back(std::max(0.0, dilated_mass_1d(runs, s, h) - out.set_mass) / h);
  }
  out.extrapolated = std::max(0.0, 2.0 * out.estimates[2] - out.estimates[1]);
  return out;
}

PerimeterEstimate minkowski_nd(const std::vector<bool>& A, const MeasureSpace& s) {
  const int n = s.dimension();
  const int r = s.cells_per_axis();
  const double w = s.spacing();
  PerimeterEstimate out;
  for (std::size_t c = 0; c < A.size(); ++c)
    if (A[c]) out.set_mass += s.weight(c);
  for (double k : {4.0, 2.0, 1.0}) {
    const double h = k * w;
    // Offsets (in cells) within distance h, including the half-space mirror images.
    std::vector<std::vector<int>> offsets;
    for (auto sh : detail::half_space_shifts(n, r, w, h)) {
      offsets.push_back(sh);
      for (int& v : sh) v = -v;
      offsets.push_back(sh);
    }
    std::vector<char> grown(A.size(), 0);
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (std::size_t c = 0; c < A.size(); ++c) {
      if (!A[c]) continue;
      grown[c] = 1;
      const auto base = s.multi_index(c);
      for (const auto& off : offsets) {
        bool inside = true;
        for (int d = 0; d < n; ++d) {
          const int v = base[static_cast<std::size_t>(d)] + off[static_cast<std::size_t>(d)];
          if (v < 0 || v >= r) {
            inside = false;
            break;
          }
          idx[static_cast<std::size_t>(d)] = v;
        }
        if (inside) grown[s.linear_index(idx)] = 1;
      }
    }
    double mass = 0.0;
    for (std::size_t c = 0; c < A.size(); ++c)
      if (grown[c]) mass += s.weight(c);
    out.h.push_back(h);
    out.estimates.push_back(std::max(0.0, mass - out.set_mass) / h);
  }
  out.extrapolated = std::max(0.0, 2.0 * out.estimates[2] - out.estimates[1]);
  return out;
}

}  // namespace

PerimeterEstimate minkowski_content(const std::vector<bool>& A, const MeasureSpace& space) {
  require(A.size() == space.size(), "minkowski_content: indicator size mismatch");
  require(std::any_of(A.begin(), A.end(), [](bool b) { return b; }), "minkowski_content: A must be nonempty");
  return space.dimension() == 1 ? minkowski_1d(A, space) : minkowski_nd(A, space);
}

VerificationReport isoperimetric_check(const std::vector<bool>& A, const MeasureSpace& space, const Profile& profile) {
  const PerimeterEstimate est = minkowski_content(A, space);
  VerificationReport r;
  r.id = "iso";
  r.function_label = "indicator";
  r.profile_label = profile.label();
  const double t = std::min(est.set_mass, profile.mass());
  r.t = {t};
  r.lhs = {profile(t)};
  r.rhs = {est.extrapolated};
  r.metadata["h"] = numbers_json(est.h);
  r.metadata["estimates"] = numbers_json(est.estimates);
  r.metadata["lower_bound_only"] = profile.flags().lower_bound_only;
  finalize_inequality(r, 1.0, 1e-3);
  return r;
}

}  // namespace rearr
