#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

namespace rearr {

/// An isoperimetric profile I(t) on (0, M) together with its structural flags.
/// Built-in constructors verify the flags on a 1000-point grid and throw on
/// violation. Evaluation outside [0, M] is rejected; at the endpoints a
/// zero-at-zero profile returns 0 (and a symmetric one returns 0 at M).
class Profile {
 public:
  using Evaluator = std::function<double(double)>;

  struct Flags {
    bool concave = false;
    bool symmetric = false;
    bool zero_at_zero = false;
    bool lower_bound_only = false;
  };

  Profile(std::string label, double mass, Evaluator eval, Flags flags, nlohmann::json params);

  double operator()(double t) const;
  double mass() const { return mass_; }
  /// Upper end of the check grid: M for finite mass, 1 otherwise.
  double check_upper() const;
  const Flags& flags() const { return flags_; }
  const std::string& label() const { return label_; }
  const nlohmann::json& params() const { return params_; }
  nlohmann::json to_json() const;

  /// 1000-point check grid strictly inside (0, check_upper()).
  std::vector<double> check_grid() const;
  bool check_concave() const;
  bool check_symmetric() const;
  bool check_positive() const;
  /// Throws PreconditionError when a declared flag fails on the check grid.
  void verify_flags() const;

 private:
  std::string label_;
  double mass_;
  Evaluator eval_;
  Flags flags_;
  nlohmann::json params_;
};

using ProfilePtr = std::shared_ptr<const Profile>;

/// I_n(t) = n γ_n^{1/n} t^{1-1/n} on (0, mass); mass defaults to +inf.
Profile euclidean_profile(int n, double mass = std::numeric_limits<double>::infinity());

/// I_γ(t) = φ(Φ^{-1}(t)) on (0, 1).
Profile gaussian_profile();

/// Exact profile of the unit interval with Lebesgue measure: 1 on (0, 1), 0 at the ends.
Profile interval_profile();

/// Gaussian-type lower bound c·u(log 1/u)^{1/2}, u = min(t, 1-t), for the unit
/// cube Q_n (constant 1). Flagged lower_bound_only.
Profile cube_lower_bound_profile(double c = 1.0);

/// I ≡ c on (0, mass).
Profile constant_profile(double c, double mass);

/// s ↦ min(base(s), base(mass - s)) on (0, mass).
Profile relative_min_profile(const Profile& base, double mass);

/// Monotone-cubic (Fritsch-Carlson) interpolation through (t_i, I_i).
Profile tabulated_profile(std::string label, std::vector<double> t, std::vector<double> values, double mass);

Profile profile_from_json(const nlohmann::json& j);

struct PhiMap {
  std::function<double(double)> phi;
  bool non_decreasing_certificate = false;
};

/// φ(t) = t / I(t) with a grid certificate of monotonicity.
PhiMap phi_of(const Profile& profile);

struct EquivalenceConstants {
  double c_min;
  double c_max;
};

/// min/max of I(t) / (t (log 1/t)^{1/2}) over a log grid on [t_lo, t_hi].
EquivalenceConstants gaussian_equivalence_constants(const Profile& profile, double t_lo, double t_hi, int nodes = 1000);
EquivalenceConstants gaussian_equivalence_constants(double t_lo, double t_hi, int nodes = 1000);

/// True when I(t) >= c t (log 1/t)^{1/2} on the check grid in (0, 1/2).
bool gaussian_type_check(const Profile& profile, double c);

}  // namespace rearr
