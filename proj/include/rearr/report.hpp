#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace rearr {

enum class VerdictKind { HoldsWithConstant, IdentityWithin, Violated, Skipped };

std::string to_string(VerdictKind kind);

struct Verdict {
  VerdictKind kind = VerdictKind::Skipped;
  /// Constant for HoldsWithConstant, max error for IdentityWithin.
  double value = 0.0;
  /// Location and ratio of the worst sample for Violated.
  double t = 0.0;
  double ratio = 0.0;
  std::string status;
};

/// Outcome of one inequality or identity over a t-grid.
struct VerificationReport {
  std::string id;
  std::string function_label;
  std::string profile_label;
  std::vector<double> t;
  std::vector<double> lhs;
  std::vector<double> rhs;
  double empirical_constant = 0.0;
  /// Explicit constant from the inequality, if any. Only such reports are pass/fail.
  std::optional<double> explicit_constant;
  Verdict verdict;
  nlohmann::json metadata = nlohmann::json::object();

  bool passed() const { return verdict.kind != VerdictKind::Violated; }
  bool skipped() const { return verdict.kind == VerdictKind::Skipped; }
  nlohmann::json to_json() const;
};

inline constexpr int kReportSchemaVersion = 1;

/// Absolute level below which a left-hand sample counts as zero.
inline constexpr double kZeroTolerance = 1e-12;

/// lhs/rhs with 0/0 -> 0 and x/0 -> +inf.
double safe_ratio(double lhs, double rhs, double zero_tol = kZeroTolerance);

/// Max of safe_ratio over the samples; `worst` receives the argmax index.
double empirical_constant(const std::vector<double>& lhs, const std::vector<double>& rhs,
                          std::size_t* worst = nullptr, double zero_tol = kZeroTolerance);

/// Fills constant and verdict for an inequality lhs <= c rhs. With an explicit
/// constant the verdict is pass/fail at c (1 + 1e-3 + slack); otherwise it only
/// requires a finite constant.
void finalize_inequality(VerificationReport& r, std::optional<double> explicit_constant, double slack = 0.0);

/// Fills verdict for an identity lhs == rhs within `eps` (max absolute error).
void finalize_identity(VerificationReport& r, double eps);

void mark_skipped(VerificationReport& r, std::string status);

/// JSON number, or the strings "inf" / "-inf" / "nan".
nlohmann::json number_json(double x);
nlohmann::json numbers_json(const std::vector<double>& xs);

}  // namespace rearr
