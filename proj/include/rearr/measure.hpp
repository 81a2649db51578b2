#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace rearr {

enum class SpaceKind { UnitCube, GaussianLine, WeightedInterval, EuclideanBox };

std::string to_string(SpaceKind kind);

/// A measure space partitioned into weighted cells with a tensor-grid
/// geometry. GaussianLine uses equal-probability cells, so every cell carries
/// mass 1/m and the total is normalised to exactly one.
class MeasureSpace {
 public:
  static MeasureSpace unit_cube(int dimension, int cells_per_axis);
  static MeasureSpace gaussian_line(int nodes, double radius = 8.0);
  static MeasureSpace weighted_interval(double a, double b, std::vector<double> density);
  static MeasureSpace euclidean_box(int dimension, double side, int cells_per_axis);

  SpaceKind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  int cells_per_axis() const { return cells_per_axis_; }
  std::size_t size() const { return weights_.size(); }
  double total_mass() const { return total_mass_; }
  bool is_probability() const { return kind_ == SpaceKind::UnitCube || kind_ == SpaceKind::GaussianLine; }
  bool uniform_spacing() const { return kind_ != SpaceKind::GaussianLine; }

  std::span<const double> weights() const { return weights_; }
  double weight(std::size_t cell) const { return weights_[cell]; }
  std::span<const double> center(std::size_t cell) const {
    return {centers_.data() + cell * static_cast<std::size_t>(dimension_), static_cast<std::size_t>(dimension_)};
  }
  /// Cell width along every axis; throws for GaussianLine.
  double spacing() const;

  /// Lower/upper coordinate of the domain along each axis.
  double lower() const { return lower_; }
  double upper() const { return upper_; }

  /// Multi-index helpers (axis 0 varies slowest).
  std::vector<int> multi_index(std::size_t cell) const;
  std::size_t linear_index(std::span<const int> multi) const;
  std::size_t stride(int axis) const;
  int coordinate_index(std::size_t cell, int axis) const;

  /// Neighbour along +axis / -axis, or npos when at the boundary.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t neighbor(std::size_t cell, int axis, int direction) const;
  /// Metric distance between the centres of two cells.
  double distance(std::size_t a, std::size_t b) const;

  /// Weight of the face between `cell` and its +axis neighbour (surface
  /// measure used by discrete total variation and perimeters).
  double face_weight(std::size_t cell, int axis) const;

  /// One-dimensional spaces only: cell boundaries (size()+1 values) and the
  /// exact measure of an interval intersected with the domain.
  std::span<const double> boundaries() const;
  double mass_between(double lo, double hi) const;

  // Descriptor parameters.
  double radius() const { return radius_; }
  double side() const { return upper_ - lower_; }
  std::span<const double> density() const { return density_; }

  nlohmann::json descriptor() const;
  static MeasureSpace from_descriptor(const nlohmann::json& j);
  std::string short_name() const;

 private:
  MeasureSpace() = default;
  void build_tensor_grid(double lower, double upper, double cell_weight);

  SpaceKind kind_ = SpaceKind::UnitCube;
  int dimension_ = 1;
  int cells_per_axis_ = 1;
  double total_mass_ = 0.0;
  double lower_ = 0.0;
  double upper_ = 1.0;
  double radius_ = 0.0;
  double gauss_norm_ = 1.0;
  std::vector<double> weights_;
  std::vector<double> centers_;
  std::vector<double> boundaries_;
  std::vector<double> density_;
};

using SpacePtr = std::shared_ptr<const MeasureSpace>;

inline SpacePtr share(MeasureSpace s) { return std::make_shared<const MeasureSpace>(std::move(s)); }

/// A function given by one value per cell of its space.
struct GridFunction {
  SpacePtr space;
  std::vector<double> values;

  GridFunction() = default;
  GridFunction(SpacePtr s, std::vector<double> v);

  using Formula = std::function<double(std::span<const double>)>;
  static GridFunction sample(SpacePtr s, const Formula& formula);
  static GridFunction constant(SpacePtr s, double c);

  std::size_t size() const { return values.size(); }
  GridFunction scaled(double c) const;
  GridFunction abs() const;
  double sum_weighted() const;
};

/// Right-continuous piecewise-constant function on [0, length()).
/// Breakpoints are strictly increasing, starting at 0. Prefix integrals are
/// cached so ∫_0^t is exact piecewise-linear evaluation.
class StepFunction {
 public:
  StepFunction() : breaks_{0.0} , prefix_{0.0} {}
  StepFunction(std::vector<double> breaks, std::vector<double> values);

  /// Step given by lengths rather than breakpoints; zero-length pieces are dropped.
  static StepFunction from_lengths(std::span<const double> lengths, std::span<const double> values);
  static StepFunction indicator(double a);
  static StepFunction constant(double c, double length);

  std::size_t pieces() const { return values_.size(); }
  double length() const { return breaks_.back(); }
  std::span<const double> breaks() const { return breaks_; }
  std::span<const double> values() const { return values_; }
  bool empty() const { return values_.empty(); }

  /// Index of the piece containing t (t clamped into [0, length)).
  std::size_t piece_at(double t) const;
  /// Value at t; zero for t >= length().
  double operator()(double t) const;
  /// ∫_0^t g, with g = 0 beyond length().
  double integral(double t) const;
  double total_integral() const { return prefix_.back(); }
  /// Cached ∫_0^{breaks[j]}.
  double prefix(std::size_t j) const { return prefix_[j]; }

  /// f**(t) - f*(t), evaluated as (F(a) - v a)/t on the piece [a, b) holding t,
  /// so it is exactly zero on the first piece.
  double oscillation(double t) const;
  /// The numerator F(a_j) - v_j a_j of the oscillation on piece j, clamped at 0.
  double excess(std::size_t j) const;

  bool non_increasing() const;
  StepFunction scaled(double c) const;
  StepFunction powered(double p) const;

  nlohmann::json to_json() const;
  static StepFunction from_json(const nlohmann::json& j);

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;
  std::vector<double> prefix_;
};

/// t ↦ (1/t)∫_0^t g(s) ds over a step function, evaluated exactly.
class PiecewiseAverage {
 public:
  explicit PiecewiseAverage(StepFunction source) : source_(std::move(source)) {}
  double operator()(double t) const;
  const StepFunction& source() const { return source_; }

 private:
  StepFunction source_;
};

/// Upper truncation level; `unbounded()` stands for t2 = +inf.
struct TruncationCeiling {
  bool is_unbounded = false;
  double value = 0.0;
  static TruncationCeiling unbounded() { return {true, 0.0}; }
  static TruncationCeiling at(double v) { return {false, v}; }
};

double distribution_function(const GridFunction& f, double t);
StepFunction decreasing_rearrangement(const GridFunction& f);
StepFunction signed_rearrangement(const GridFunction& f);
PiecewiseAverage maximal_average(const StepFunction& g);
double oscillation(const GridFunction& f, double t);
GridFunction truncation(const GridFunction& f, double t1, TruncationCeiling t2);
double support_measure(const GridFunction& f);
/// ∫_{f*(t)}^∞ μ_f(s) ds, summed over the level structure of μ_f.
double level_tail_integral(const GridFunction& f, double t);

/// Lebesgue measure of {s : g(s) > t}.
double step_distribution(const StepFunction& g, double t);

/// Flags EuclideanBox runs whose rearrangement has not decayed at the box edge.
bool truncation_sensitive(const StepFunction& f_star, double relative = 1e-6);

struct GridOptions {
  double t_min_fraction = 1e-6;
  int nodes = 256;
};

/// Log-spaced evaluation grid on [t_min, M - t_min], t_min = M * fraction.
std::vector<double> t_grid(double mass, const GridOptions& opt = {});
/// Log-spaced grid on [lo, hi].
std::vector<double> t_grid_range(double lo, double hi, int nodes);

nlohmann::json to_json(const GridFunction& f);
GridFunction grid_function_from_json(const nlohmann::json& j);

}  // namespace rearr
