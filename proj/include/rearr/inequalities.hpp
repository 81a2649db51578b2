#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "rearr/gradient.hpp"
#include "rearr/measure.hpp"
#include "rearr/norms.hpp"
#include "rearr/profiles.hpp"
#include "rearr/report.hpp"

namespace rearr {

struct VerifyOptions {
  GridOptions grid;
  /// The grid is clamped to [k w, M - k w], w the largest cell weight; below
  /// that scale the step rearrangement does not resolve the profile.
  int resolution_cells = 4;
  /// Extra multiplicative tolerance on explicit constants.
  double slack = 0.0;
  std::string label = "f";
  std::uint64_t seed = 1;
};

/// Log grid on [max(t_min, k w), min(upper, M - k w)].
std::vector<double> verification_grid(const MeasureSpace& space, const VerifyOptions& opt,
                                       double upper = std::numeric_limits<double>::infinity());

/// Largest relative excess of the continuum boundary density over the discrete
/// perimeter (mass between neighbouring centres per unit length) of half-line
/// cell sets with mass in [lo, hi]. Zero for uniform and multi-dimensional grids.
double partition_defect(const MeasureSpace& space, double lo, double hi);

/// An increasing function φ together with its label.
struct Phi {
  std::string label;
  std::function<double(double)> eval;
  static Phi from_profile(const Profile& profile);
  static Phi power(double exponent, double coefficient = 1.0);
};

/// f** - f* <= (t/I(t)) |∇f|**.
VerificationReport verify_oscillation(const GridFunction& f, const Profile& profile, const VerifyOptions& opt = {});

/// I(t) (-f*)'(t) <= d/dt ∫_{|f| > f*(t)} |∇f|, on t-grid midpoints.
VerificationReport verify_mazya_talenti(const GridFunction& f, const Profile& profile, const VerifyOptions& opt = {});

/// ∫_0^t (I (-f*)')*(s) ds <= ∫_0^t |∇f|*(s) ds.
VerificationReport verify_polya_szego(const GridFunction& f, const Profile& profile, const VerifyOptions& opt = {});

/// ∫_0^∞ I(μ_f(t)) dt <= ‖|∇f|‖_1.
VerificationReport verify_bobkov_houdre(const GridFunction& f, const Profile& profile, const VerifyOptions& opt = {});

/// ‖f‖_p <= φ(‖f‖_0) ‖|∇f|‖_p.
VerificationReport verify_coulhon(const GridFunction& f, const Phi& phi, double p, const VerifyOptions& opt = {});

/// ((f^p)**)^{1/p} - f* <= 2^{(k+1)/p - 1} φ ((|∇f|^p)**)^{1/p}, k < p <= k + 1.
/// Samples are the display multiplied through by φ(t).
VerificationReport verify_coulhon_pointwise(const GridFunction& f, const Phi& phi, double p,
                                            const VerifyOptions& opt = {});
double coulhon_pointwise_constant(double p);

/// The three facts about [|f| - f*(t)]_+ at breakpoints t of f*: support at
/// most t, discrete coarea for the edge variation, and the L^1 identity.
VerificationReport truncation_identity_check(const GridFunction& f, std::span<const double> breakpoints,
                                             const VerifyOptions& opt = {});

/// Hypothesis ∫_t^1 I(s)/s^2 ds <= c I(t)/t and the conclusion
/// ∫_0^t (f** - f*) I(s)/s ds <= C ∫_0^t |∇f|*.
VerificationReport verify_self_improvement(const GridFunction& f, const Profile& profile, const VerifyOptions& opt = {});

struct HypothesisResult {
  bool satisfied = false;
  double constant = 0.0;
  std::vector<double> cutoffs;
  std::vector<double> values;
};
HypothesisResult self_improvement_hypothesis(const Profile& profile);

/// Q_I g(t) = ∫_t^{1/2} g(s)/I(s) ds for t < 1/2, zero otherwise. `knots` lists
/// the discontinuities of g in (0, 1/2).
double hardy_operator(const std::function<double(double)>& g, std::span<const double> knots, const Profile& profile,
                      double t);
std::vector<double> hardy_operator(const std::function<double(double)>& g, std::span<const double> knots,
                                   const Profile& profile, std::span<const double> ts);

enum class PoincareMesh { Midpoints, TGrid };

/// g*(t) - g*(1/2) = Q_I(I (-g*)')(t) on (t_min, 1/2), with g* the midpoint
/// interpolant of the rearrangement. On the TGrid mesh the left side uses the
/// step rearrangement, so the error measures the derivative discretisation.
VerificationReport poincare_identity_check(const GridFunction& g, const Profile& profile,
                                           PoincareMesh mesh = PoincareMesh::Midpoints, const VerifyOptions& opt = {});

struct HardyNormEstimate {
  double value = 0.0;
  std::string argmax;
  std::vector<std::pair<std::string, double>> ratios;
};
/// Lower bound for ‖Q_I‖_{L^p -> L^p} over the fixed 50-member family.
HardyNormEstimate hardy_norm_estimate(const Profile& profile, double p);

/// ‖g - ∫g‖_p <= 4 Q̂ ‖|∇g|‖_p with Q̂ from hardy_norm_estimate.
VerificationReport poincare_chain_check(const GridFunction& g, const NormDescriptor& norm, const Profile& profile,
                                        const VerifyOptions& opt = {});

/// f** - f* <= c ω_{L^p}(t^{1/n}, f) / t^{1/p}.
VerificationReport verify_oscillation_modulus(const GridFunction& f, double p, const VerifyOptions& opt = {});

/// f^s(x) - f^s(1/2) <= c ∫_x^1 ω_{L^p}(t^{1/n}, f) t^{-1/p} dt/t and the mirrored branch.
VerificationReport verify_garsia(const GridFunction& f, double p, const VerifyOptions& opt = {});

/// Osc(f) versus 2 C ‖|∇f|‖_p and the pairwise Hölder bound with exponent 1 - n/p.
VerificationReport morrey_holder_check(const GridFunction& f, double p, const VerifyOptions& opt = {});
/// ‖t / min(t, 1 - t)^{1 - 1/n}‖_{L^{p'}(0,1)}.
double morrey_constant(int n, double p);

/// Iterated k-th order display and its corollary.
VerificationReport verify_higher_order(const GridFunction& f, int k, const Profile& profile,
                                       const VerifyOptions& opt = {});

struct TransferenceIntegral {
  bool divergent = false;
  double value = 0.0;
  std::vector<double> cutoffs;
  std::vector<double> partial;
};
/// ∫_0^1 dt / (I(t) (log 1/t)^{1/2}) with nested-cutoff divergence detection.
TransferenceIntegral transference_integral(const Profile& profile);

/// (a) the transference integral, (b) the pointwise and integrated displays
/// for f with X = L^p.
VerificationReport verify_transference(const GridFunction& f, const Profile& profile, double p,
                                       const VerifyOptions& opt = {});

/// (1/(n γ_n^{1/n})) ∫_0^1 t^{1/n} dt / (t (ln 1/t)^{1/2}) by quadrature.
double gamma_transference_constant(int n);

}  // namespace rearr
