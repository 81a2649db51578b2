#pragma once

#include <vector>

#include "rearr/measure.hpp"
#include "rearr/profiles.hpp"
#include "rearr/report.hpp"

namespace rearr {

/// Per-cell nonnegative field on the partition of its source.
struct GradientField {
  SpacePtr space;
  std::vector<double> values;

  GridFunction as_function() const { return GridFunction(space, values); }
  double max() const;
  /// ‖field‖_{L^p} on the source space.
  double lp_norm(double p) const;
};

/// Combination rule over the multi-indices of a k-th derivative.
enum class MultiIndexNorm { L2, Linf, L1 };

/// Discrete limsup: max over axis neighbours of |Δf| / distance.
GradientField gradient_modulus(const GridFunction& f);

/// Magnitude of all k-th order mixed differences divided by h^k. For k = 1
/// each axis uses the neighbour max, so 1-D output equals gradient_modulus.
GradientField kth_derivative_modulus(const GridFunction& f, int k, MultiIndexNorm combine = MultiIndexNorm::L2);

/// ω(t) = sup_{|h| <= t} ‖f(· + h) - f‖_{L^p(overlap)} over lattice shifts,
/// precomputed once for every shift up to `t_max`.
class ModulusTable {
 public:
  ModulusTable(const GridFunction& f, double p, double t_max);
  double operator()(double t) const;
  /// Distinct shift lengths and the running sup at each.
  const std::vector<double>& radii() const { return radii_; }
  const std::vector<double>& values() const { return values_; }
  double p() const { return p_; }

 private:
  double p_;
  std::vector<double> radii_;
  std::vector<double> values_;
};

double modulus_of_continuity(const GridFunction& f, double t, double p);

struct PerimeterEstimate {
  std::vector<double> h;
  std::vector<double> estimates;
  double extrapolated = 0.0;
  double set_mass = 0.0;
};

/// (μ(A_h) - μ(A))/h for h ∈ {4, 2, 1}·w, w the width of the cells on the
/// boundary of A, with the Richardson value 2E(w) - E(2w).
PerimeterEstimate minkowski_content(const std::vector<bool>& A, const MeasureSpace& space);

/// I(μ(A)) <= μ⁺(A).
VerificationReport isoperimetric_check(const std::vector<bool>& A, const MeasureSpace& space, const Profile& profile);

/// Serial reference kernels, kept for equality tests and benchmarks.
namespace serial {
GradientField gradient_modulus(const GridFunction& f);
GradientField kth_derivative_modulus(const GridFunction& f, int k, MultiIndexNorm combine = MultiIndexNorm::L2);
/// Unsorted per-shift values (length, L^p difference), in shift enumeration order.
std::vector<std::pair<double, double>> shift_norms(const GridFunction& f, double p, double t_max);
}  // namespace serial

namespace detail {
/// Lattice shifts with |h|·spacing <= t_max in the half-space (first nonzero coordinate > 0).
std::vector<std::vector<int>> half_space_shifts(int dimension, int cells_per_axis, double spacing, double t_max);
/// L^p norm of f(· + h) - f over the overlap, normalised by the overlap mass.
double shift_norm(const GridFunction& f, const std::vector<int>& h, double p);
/// Value of the k-th mixed difference for multi-index alpha at `cell`.
double mixed_difference(const GridFunction& f, std::size_t cell, const std::vector<int>& alpha);
std::vector<std::vector<int>> multi_indices(int dimension, int order);
double first_order_axis(const GridFunction& f, std::size_t cell, int axis);
double combine_multi(double acc, double v, MultiIndexNorm rule);
double finish_multi(double acc, MultiIndexNorm rule);
}  // namespace detail

}  // namespace rearr
