#include "rearr/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rearr/error.hpp"
#include "rearr/special.hpp"

namespace rearr {

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::UnitCube: return "unit_cube";
    case SpaceKind::GaussianLine: return "gaussian_line";
    case SpaceKind::WeightedInterval: return "weighted_interval";
    case SpaceKind::EuclideanBox: return "euclidean_box";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// MeasureSpace

void MeasureSpace::build_tensor_grid(double lower, double upper, double cell_weight) {
  lower_ = lower;
  upper_ = upper;
  const std::size_t r = static_cast<std::size_t>(cells_per_axis_);
  std::size_t n = 1;
  for (int d = 0; d < dimension_; ++d) n *= r;
  weights_.assign(n, cell_weight);
  centers_.resize(n * static_cast<std::size_t>(dimension_));
  const double h = (upper - lower) / cells_per_axis_;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t rem = c;
    for (int d = dimension_ - 1; d >= 0; --d) {
      const std::size_t i = rem % r;
      rem /= r;
      centers_[c * static_cast<std::size_t>(dimension_) + static_cast<std::size_t>(d)] = lower + (static_cast<double>(i) + 0.5) * h;
    }
  }
  if (dimension_ == 1) {
    boundaries_.resize(r + 1);
    for (std::size_t i = 0; i <= r; ++i) boundaries_[i] = lower + static_cast<double>(i) * h;
    boundaries_.back() = upper;
  }
}

MeasureSpace MeasureSpace::unit_cube(int dimension, int cells_per_axis) {
  require(dimension >= 1 && cells_per_axis >= 1, "unit_cube: dimension >= 1 and cells_per_axis >= 1");
  MeasureSpace s;
  s.kind_ = SpaceKind::UnitCube;
  s.dimension_ = dimension;
  s.cells_per_axis_ = cells_per_axis;
  s.build_tensor_grid(0.0, 1.0, std::pow(1.0 / cells_per_axis, dimension));
  s.total_mass_ = 1.0;
  return s;
}

MeasureSpace MeasureSpace::euclidean_box(int dimension, double side, int cells_per_axis) {
  require(dimension >= 1 && cells_per_axis >= 1 && side > 0.0, "euclidean_box: bad parameters");
  MeasureSpace s;
  s.kind_ = SpaceKind::EuclideanBox;
  s.dimension_ = dimension;
  s.cells_per_axis_ = cells_per_axis;
  s.build_tensor_grid(-0.5 * side, 0.5 * side, std::pow(side / cells_per_axis, dimension));
  s.total_mass_ = std::pow(side, dimension);
  return s;
}

MeasureSpace MeasureSpace::weighted_interval(double a, double b, std::vector<double> density) {
  require(a < b, "weighted_interval: a < b");
  require(!density.empty(), "weighted_interval: need at least one weight sample");
  for (double w : density) require(w > 0.0 && std::isfinite(w), "weighted_interval: weights must be positive");
  MeasureSpace s;
  s.kind_ = SpaceKind::WeightedInterval;
  s.dimension_ = 1;
  s.cells_per_axis_ = static_cast<int>(density.size());
  const double h = (b - a) / static_cast<double>(density.size());
  s.build_tensor_grid(a, b, 0.0);
  for (std::size_t i = 0; i < density.size(); ++i) s.weights_[i] = density[i] * h;
  s.total_mass_ = std::accumulate(s.weights_.begin(), s.weights_.end(), 0.0);
  s.density_ = std::move(density);
  return s;
}

MeasureSpace MeasureSpace::gaussian_line(int nodes, double radius) {
  require(nodes >= 2, "gaussian_line: at least two nodes");
  require(radius > 0.0, "gaussian_line: radius > 0");
  require(special::normal_cdf(radius) - special::normal_cdf(-radius) >= 1.0 - 1e-12,
          "gaussian_line: truncation radius must capture mass >= 1 - 1e-12");
  MeasureSpace s;
  s.kind_ = SpaceKind::GaussianLine;
  s.dimension_ = 1;
  s.cells_per_axis_ = nodes;
  s.radius_ = radius;
  s.lower_ = -radius;
  s.upper_ = radius;
  const double tail = special::normal_cdf(-radius);
  s.gauss_norm_ = 1.0 - 2.0 * tail;
  const std::size_t m = static_cast<std::size_t>(nodes);
  const double step = s.gauss_norm_ / static_cast<double>(m);
  // Quantile of lower-tail probability tail + k*step/2, mirrored for the upper half.
  auto quantile_half = [&](std::size_t k2) {
    const double p = tail + static_cast<double>(k2) * 0.5 * step;
    return special::normal_quantile(p);
  };
  s.boundaries_.resize(m + 1);
  s.boundaries_[0] = -radius;
  s.boundaries_[m] = radius;
  for (std::size_t i = 1; i < m; ++i) {
    if (2 * i < m) s.boundaries_[i] = quantile_half(2 * i);
    else if (2 * i == m) s.boundaries_[i] = 0.0;
    else s.boundaries_[i] = -s.boundaries_[m - i];
  }
  s.centers_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (2 * i + 1 < m) s.centers_[i] = quantile_half(2 * i + 1);
    else if (2 * i + 1 == m) s.centers_[i] = 0.0;
    else s.centers_[i] = -s.centers_[m - 1 - i];
  }
  s.weights_.assign(m, 1.0 / static_cast<double>(m));
  s.total_mass_ = 1.0;
  return s;
}

double MeasureSpace::spacing() const {
  require(uniform_spacing(), "spacing: GaussianLine cells are not uniform");
  return (upper_ - lower_) / cells_per_axis_;
}

std::size_t MeasureSpace::stride(int axis) const {
  std::size_t s = 1;
  for (int d = dimension_ - 1; d > axis; --d) s *= static_cast<std::size_t>(cells_per_axis_);
  return s;
}

int MeasureSpace::coordinate_index(std::size_t cell, int axis) const {
  return static_cast<int>((cell / stride(axis)) % static_cast<std::size_t>(cells_per_axis_));
}

std::vector<int> MeasureSpace::multi_index(std::size_t cell) const {
  std::vector<int> out(static_cast<std::size_t>(dimension_));
  for (int d = 0; d < dimension_; ++d) out[static_cast<std::size_t>(d)] = coordinate_index(cell, d);
  return out;
}

std::size_t MeasureSpace::linear_index(std::span<const int> multi) const {
  std::size_t c = 0;
  for (int d = 0; d < dimension_; ++d) c = c * static_cast<std::size_t>(cells_per_axis_) + static_cast<std::size_t>(multi[static_cast<std::size_t>(d)]);
  return c;
}

std::size_t MeasureSpace::neighbor(std::size_t cell, int axis, int direction) const {
  const int i = coordinate_index(cell, axis) + direction;
  if (i < 0 || i >= cells_per_axis_) return npos;
  return direction > 0 ? cell + stride(axis) : cell - stride(axis);
}

double MeasureSpace::distance(std::size_t a, std::size_t b) const {
  double s = 0.0;
  const auto ca = center(a);
  const auto cb = center(b);
  for (int d = 0; d < dimension_; ++d) {
    const double diff = ca[static_cast<std::size_t>(d)] - cb[static_cast<std::size_t>(d)];
    s += diff * diff;
  }
  return std::sqrt(s);
}

double MeasureSpace::face_weight(std::size_t cell, int axis) const {
  switch (kind_) {
    case SpaceKind::UnitCube:
    case SpaceKind::EuclideanBox:
      return std::pow(spacing(), dimension_ - 1);
    case SpaceKind::WeightedInterval: {
      const std::size_t i = cell;
      return 0.5 * (density_[i] + density_[std::min(i + 1, density_.size() - 1)]);
    }
    case SpaceKind::GaussianLine:
      (void)axis;
      return special::normal_pdf(boundaries_[cell + 1]) / gauss_norm_;
  }
  return 0.0;
}

std::span<const double> MeasureSpace::boundaries() const {
  require(dimension_ == 1, "boundaries: one-dimensional spaces only");
  return boundaries_;
}

double MeasureSpace::mass_between(double lo, double hi) const {
  require(dimension_ == 1, "mass_between: one-dimensional spaces only");
  lo = std::max(lo, lower_);
  hi = std::min(hi, upper_);
  if (hi <= lo) return 0.0;
  switch (kind_) {
    case SpaceKind::UnitCube:
    case SpaceKind::EuclideanBox:
      return hi - lo;
    case SpaceKind::GaussianLine: {
      const double raw = (hi <= 0.0) ? special::normal_cdf(hi) - special::normal_cdf(lo)
                       : (lo >= 0.0) ? special::normal_sf(lo) - special::normal_sf(hi)
                                     : 1.0 - special::normal_cdf(lo) - special::normal_sf(hi);
      return raw / gauss_norm_;
    }
    case SpaceKind::WeightedInterval: {
      const double h = spacing();
      double m = 0.0;
      const auto first = static_cast<std::size_t>(std::clamp((lo - lower_) / h, 0.0, static_cast<double>(density_.size() - 1)));
      for (std::size_t i = first; i < density_.size(); ++i) {
        const double a = boundaries_[i];
        const double b = boundaries_[i + 1];
        if (a >= hi) break;
        const double overlap = std::min(b, hi) - std::max(a, lo);
        if (overlap > 0.0) m += overlap * density_[i];
      }
      return m;
    }
  }
  return 0.0;
}

nlohmann::json MeasureSpace::descriptor() const {
  nlohmann::json j;
  j["kind"] = to_string(kind_);
  switch (kind_) {
    case SpaceKind::UnitCube:
      j["dimension"] = dimension_;
      j["cells_per_axis"] = cells_per_axis_;
      break;
    case SpaceKind::GaussianLine:
      j["nodes"] = cells_per_axis_;
      j["radius"] = radius_;
      break;
    case SpaceKind::WeightedInterval:
      j["a"] = lower_;
      j["b"] = upper_;
      j["weights"] = density_;
      break;
    case SpaceKind::EuclideanBox:
      j["dimension"] = dimension_;
      j["side"] = side();
      j["cells_per_axis"] = cells_per_axis_;
      break;
  }
  return j;
}

MeasureSpace MeasureSpace::from_descriptor(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "unit_cube") return unit_cube(j.at("dimension").get<int>(), j.at("cells_per_axis").get<int>());
  if (kind == "gaussian_line") return gaussian_line(j.at("nodes").get<int>(), j.value("radius", 8.0));
  if (kind == "weighted_interval")
    return weighted_interval(j.at("a").get<double>(), j.at("b").get<double>(), j.at("weights").get<std::vector<double>>());
  if (kind == "euclidean_box")
    return euclidean_box(j.at("dimension").get<int>(), j.at("side").get<double>(), j.at("cells_per_axis").get<int>());
  throw PreconditionError("unknown space kind: " + kind);
}

std::string MeasureSpace::short_name() const {
  switch (kind_) {
    case SpaceKind::UnitCube: return "cube" + std::to_string(dimension_) + "d_r" + std::to_string(cells_per_axis_);
    case SpaceKind::GaussianLine: return "gauss_m" + std::to_string(cells_per_axis_);
    case SpaceKind::WeightedInterval: return "weighted_m" + std::to_string(cells_per_axis_);
    case SpaceKind::EuclideanBox: return "box" + std::to_string(dimension_) + "d_r" + std::to_string(cells_per_axis_);
  }
  return "space";
}

// ---------------------------------------------------------------------------
// GridFunction

GridFunction::GridFunction(SpacePtr s, std::vector<double> v) : space(std::move(s)), values(std::move(v)) {
  require(space != nullptr, "GridFunction: null space");
  require(values.size() == space->size(), "GridFunction: value count does not match the partition");
  for (double x : values) require(std::isfinite(x), "GridFunction: values must be finite");
}

GridFunction GridFunction::sample(SpacePtr s, const Formula& formula) {
  std::vector<double> v(s->size());
  for (std::size_t c = 0; c < v.size(); ++c) v[c] = formula(s->center(c));
  return GridFunction(std::move(s), std::move(v));
}

GridFunction GridFunction::constant(SpacePtr s, double c) {
  const std::size_t n = s->size();
  return GridFunction(std::move(s), std::vector<double>(n, c));
}

GridFunction GridFunction::scaled(double c) const {
  std::vector<double> v(values);
  for (double& x : v) x *= c;
  return GridFunction(space, std::move(v));
}

GridFunction GridFunction::abs() const {
  std::vector<double> v(values);
  for (double& x : v) x = std::fabs(x);
  return GridFunction(space, std::move(v));
}

double GridFunction::sum_weighted() const {
  double s = 0.0;
  for (std::size_t c = 0; c < values.size(); ++c) s += values[c] * space->weight(c);
  return s;
}

// ---------------------------------------------------------------------------
// StepFunction

StepFunction::StepFunction(std::vector<double> breaks, std::vector<double> values)
    : breaks_(std::move(breaks)), values_(std::move(values)) {
  require(breaks_.size() == values_.size() + 1, "StepFunction: need one more breakpoint than values");
  require(breaks_.front() == 0.0, "StepFunction: first breakpoint must be 0");
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
    require(breaks_[i + 1] > breaks_[i], "StepFunction: breakpoints must be strictly increasing");
  for (double v : values_) require(std::isfinite(v), "StepFunction: values must be finite");
  prefix_.resize(breaks_.size());
  prefix_[0] = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i)
    prefix_[i + 1] = prefix_[i] + values_[i] * (breaks_[i + 1] - breaks_[i]);
}

StepFunction StepFunction::from_lengths(std::span<const double> lengths, std::span<const double> values) {
  require(lengths.size() == values.size(), "StepFunction::from_lengths: size mismatch");
  std::vector<double> b{0.0};
  std::vector<double> v;
  double acc = 0.0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    require(lengths[i] >= 0.0, "StepFunction::from_lengths: negative length");
    if (lengths[i] == 0.0) continue;
    const double next = acc + lengths[i];
    if (next <= acc) continue;
    acc = next;
    b.push_back(acc);
    v.push_back(values[i]);
  }
  return StepFunction(std::move(b), std::move(v));
}

StepFunction StepFunction::indicator(double a) { return StepFunction({0.0, a}, {1.0}); }

StepFunction StepFunction::constant(double c, double length) { return StepFunction({0.0, length}, {c}); }

std::size_t StepFunction::piece_at(double t) const {
  if (values_.empty()) return 0;
  if (t <= 0.0) return 0;
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
  const auto idx = static_cast<std::size_t>(it - breaks_.begin());
  return std::min(idx == 0 ? 0 : idx - 1, values_.size() - 1);
}

double StepFunction::operator()(double t) const {
  if (values_.empty() || t >= length()) return 0.0;
  return values_[piece_at(t)];
}

double StepFunction::integral(double t) const {
  if (values_.empty() || t <= 0.0) return 0.0;
  if (t >= length()) return prefix_.back();
  const std::size_t j = piece_at(t);
  return prefix_[j] + values_[j] * (t - breaks_[j]);
}

double StepFunction::excess(std::size_t j) const {
  if (j >= values_.size()) return std::max(0.0, prefix_.back());
  return std::max(0.0, prefix_[j] - values_[j] * breaks_[j]);
}

double StepFunction::oscillation(double t) const {
  require(t > 0.0, "oscillation: t must be positive");
  if (values_.empty()) return 0.0;
  if (t >= length()) return std::max(0.0, prefix_.back()) / t;
  return excess(piece_at(t)) / t;
}

bool StepFunction::non_increasing() const {
  for (std::size_t i = 0; i + 1 < values_.size(); ++i)
    if (values_[i + 1] > values_[i]) return false;
  return true;
}

StepFunction StepFunction::scaled(double c) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= c;
  return StepFunction(breaks_, std::move(v));
}

StepFunction StepFunction::powered(double p) const {
  std::vector<double> v(values_);
  for (double& x : v) x = std::pow(std::fabs(x), p);
  return StepFunction(breaks_, std::move(v));
}

nlohmann::json StepFunction::to_json() const { return {{"breakpoints", breaks_}, {"values", values_}}; }

StepFunction StepFunction::from_json(const nlohmann::json& j) {
  return StepFunction(j.at("breakpoints").get<std::vector<double>>(), j.at("values").get<std::vector<double>>());
}

double PiecewiseAverage::operator()(double t) const {
  require(t > 0.0, "maximal_average: evaluation at t = 0 is undefined; use the clamped grid");
  return source_.integral(t) / t;
}

// ---------------------------------------------------------------------------
// Operations

double distribution_function(const GridFunction& f, double t) {
  require(t >= 0.0, "distribution_function: t must be non-negative");
  double m = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c)
    if (std::fabs(f.values[c]) > t) m += f.space->weight(c);
  return m;
}

namespace {

StepFunction sorted_step(const GridFunction& f, bool absolute) {
  const std::size_t n = f.size();
  std::vector<double> key(n);
  for (std::size_t c = 0; c < n; ++c) key[c] = absolute ? std::fabs(f.values[c]) : f.values[c];
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
  std::vector<double> breaks{0.0};
  std::vector<double> values;
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t c = order[k];
    acc += f.space->weight(c);
    if (!values.empty() && values.back() == key[c]) {
      breaks.back() = acc;
    } else {
      values.push_back(key[c]);
      breaks.push_back(acc);
    }
  }
  return StepFunction(std::move(breaks), std::move(values));
}

}  // namespace

StepFunction decreasing_rearrangement(const GridFunction& f) { return sorted_step(f, true); }

StepFunction signed_rearrangement(const GridFunction& f) { return sorted_step(f, false); }

PiecewiseAverage maximal_average(const StepFunction& g) { return PiecewiseAverage(g); }

double oscillation(const GridFunction& f, double t) { return decreasing_rearrangement(f).oscillation(t); }

GridFunction truncation(const GridFunction& f, double t1, TruncationCeiling t2) {
  require(t1 >= 0.0, "truncation: t1 must be non-negative");
  require(t2.is_unbounded || t2.value > t1, "truncation: need t1 < t2");
  std::vector<double> v(f.size());
  for (std::size_t c = 0; c < f.size(); ++c) {
    const double a = std::fabs(f.values[c]);
    if (!t2.is_unbounded && a >= t2.value) v[c] = t2.value - t1;
    else if (a > t1) v[c] = a - t1;
    else v[c] = 0.0;
  }
  return GridFunction(f.space, std::move(v));
}

double support_measure(const GridFunction& f) {
  double m = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c)
    if (f.values[c] != 0.0) m += f.space->weight(c);
  return m;
}

double level_tail_integral(const GridFunction& f, double t) {
  const StepFunction fs = decreasing_rearrangement(f);
  const double level = fs(t);
  // μ_f is a step function of the level s with jumps at the distinct |values|;
  // integrate it from `level` upward one level interval at a time.
  std::vector<double> a(f.size());
  for (std::size_t c = 0; c < f.size(); ++c) a[c] = std::fabs(f.values[c]);
  std::vector<std::size_t> order(a.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x] > a[y]; });
  double total = 0.0;
  double mass_above = 0.0;  // μ{|f| > s} for s just below the current level
  for (std::size_t k = 0; k < order.size(); ++k) {
    const double v = a[order[k]];
    if (v <= level) break;
    mass_above += f.space->weight(order[k]);
    const double next = (k + 1 < order.size()) ? std::max(a[order[k + 1]], level) : level;
    total += mass_above * (v - next);
  }
  return total;
}

double step_distribution(const StepFunction& g, double t) {
  double m = 0.0;
  const auto b = g.breaks();
  const auto v = g.values();
  for (std::size_t j = 0; j < v.size(); ++j)
    if (v[j] > t) m += b[j + 1] - b[j];
  return m;
}

bool truncation_sensitive(const StepFunction& f_star, double relative) {
  if (f_star.empty()) return false;
  const auto v = f_star.values();
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::fabs(x));
  return std::fabs(v.back()) > relative * peak;
}

std::vector<double> t_grid(double mass, const GridOptions& opt) {
  require(mass > 0.0 && std::isfinite(mass), "t_grid: mass must be positive and finite");
  require(opt.t_min_fraction > 0.0 && opt.t_min_fraction < 0.5, "t_grid: t_min fraction in (0, 1/2)");
  const double lo = mass * opt.t_min_fraction;
  return t_grid_range(lo, mass - lo, opt.nodes);
}

std::vector<double> t_grid_range(double lo, double hi, int nodes) {
  require(lo > 0.0 && hi >= lo && nodes >= 1, "t_grid_range: need 0 < lo <= hi");
  std::vector<double> out(static_cast<std::size_t>(nodes));
  if (nodes == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < nodes; ++i) out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (nodes - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

nlohmann::json to_json(const GridFunction& f) {
  nlohmann::json j;
  j["space"] = f.space->descriptor();
  std::vector<double> centers;
  centers.reserve(f.size() * static_cast<std::size_t>(f.space->dimension()));
  for (std::size_t c = 0; c < f.size(); ++c)
    for (double x : f.space->center(c)) centers.push_back(x);
  j["cell_centers"] = centers;
  j["weights"] = std::vector<double>(f.space->weights().begin(), f.space->weights().end());
  j["values"] = f.values;
  return j;
}

GridFunction grid_function_from_json(const nlohmann::json& j) {
  auto space = share(MeasureSpace::from_descriptor(j.at("space")));
  return GridFunction(std::move(space), j.at("values").get<std::vector<double>>());
}

}  // namespace rearr
