#pragma once

#include <limits>
#include <optional>
#include <string>

#include "rearr/measure.hpp"

namespace rearr {

enum class NormKind { Lp, Lorentz, LorentzOsc, LinfInf, BWH, LqLogL, FK };

/// A rearrangement-invariant norm on the representation space (0, M).
/// When `mass` is empty the length of the evaluated f* is used.
struct NormDescriptor {
  NormKind kind = NormKind::Lp;
  double p = 1.0;
  double q = 1.0;
  double alpha = 0.0;
  std::optional<double> mass;

  static NormDescriptor lp(double p);
  static NormDescriptor lorentz(double p, double q);
  static NormDescriptor lorentz_osc(double q);
  static NormDescriptor linf_inf();
  static NormDescriptor bwh(double n);
  static NormDescriptor lq_log_l(double q, double alpha);
  static NormDescriptor fiorenza_karadzhov(double q);

  NormDescriptor with_mass(double m) const;

  /// Compact form: "Lp:2", "Lp:inf", "Lorentz:2,2", "LorentzOsc:3", "LinfInf",
  /// "BWH:4", "LqLogL:2,1", "FK:2".
  static NormDescriptor parse(const std::string& text);
  std::string to_string() const;
};

constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// ‖f‖_X = ‖f*‖ on (0, M). Returns +inf when the defining integral diverges
/// or exceeds `cap`.
double evaluate(const NormDescriptor& norm, const StepFunction& f_star, double cap = 1e12);

/// ‖χ_[0,t)‖ on (0, M).
double fundamental_function(const NormDescriptor& norm, double t);

/// Convenience wrappers for the BWH and Fiorenza-Karadzhov norms on (0, 1).
double bwh_norm(const StepFunction& f_star, double n);
double fiorenza_karadzhov_norm(const StepFunction& f_star, double q);

/// ∫_tau^M f**(s)^q ds/s evaluated exactly on step data (M = f_star.length()
/// unless `mass` is given).
double classical_linf_q_integral(const StepFunction& f_star, double q, double tau,
                                 std::optional<double> mass = std::nullopt);

/// True when the truncated integral keeps growing over the nested cutoffs
/// {1e-3, 1e-6, 1e-12}·M.
bool classical_linf_q_diverges(const StepFunction& f_star, double q, std::optional<double> mass = std::nullopt);

}  // namespace rearr
