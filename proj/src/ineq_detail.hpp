#pragma once

#include <array>
#include <functional>
#include <vector>

#include "rearr/gradient.hpp"
#include "rearr/inequalities.hpp"
#include "rearr/measure.hpp"

namespace rearr::detail {

/// f*, |∇f| and |∇f|* for one function.
struct Rearranged {
  StepFunction f_star;
  GradientField grad;
  StepFunction grad_star;
};

Rearranged rearrange_with_gradient(const GridFunction& f);

/// Piece of f* holding each cell, following the stable sort used by the rearrangement.
std::vector<std::size_t> cell_piece_index(const GridFunction& f, const StepFunction& f_star);

/// Edge perimeter Σ face_w of {pieces <= i} for every piece i of f*.
std::vector<double> level_perimeters(const GridFunction& f, const StepFunction& f_star);

/// Gauss-Legendre on log-spaced panels with ratio at most 2 (0 < a <= b).
double geometric_gl(const std::function<double(double)>& f, double a, double b);

/// Cutoffs deep enough that power-law tails with large exponents have settled.
inline constexpr std::array<double, 3> kDeepCutoffs{1e-75, 1e-150, 1e-300};

/// Constant tolerance for explicit-constant checks on [lo, hi].
double explicit_slack(const MeasureSpace& space, const VerifyOptions& opt, double lo, double hi);

/// Fails unless the profile is defined on the whole representation interval.
void require_profile_covers(const MeasureSpace& space, const Profile& profile, const char* who);

VerificationReport make_report(const char* id, const VerifyOptions& opt, const std::string& profile_label);

}  // namespace rearr::detail
