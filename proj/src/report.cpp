#include "rearr/report.hpp"

#include <cmath>
#include <limits>

#include "rearr/error.hpp"

namespace rearr {

std::string to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::HoldsWithConstant: return "holds_with_constant";
    case VerdictKind::IdentityWithin: return "identity_within";
    case VerdictKind::Violated: return "violated";
    case VerdictKind::Skipped: return "skipped";
  }
  return "unknown";
}

nlohmann::json number_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

nlohmann::json numbers_json(const std::vector<double>& xs) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : xs) a.push_back(number_json(x));
  return a;
}

double safe_ratio(double lhs, double rhs, double zero_tol) {
  if (lhs <= zero_tol) return 0.0;
  if (!(rhs > 0.0)) return std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

double empirical_constant(const std::vector<double>& lhs, const std::vector<double>& rhs, std::size_t* worst,
                          double zero_tol) {
  require(lhs.size() == rhs.size(), "empirical_constant: lhs/rhs size mismatch");
  double best = 0.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    const double r = safe_ratio(lhs[i], rhs[i], zero_tol);
    if (r > best || std::isnan(r)) {
      best = std::isnan(r) ? std::numeric_limits<double>::infinity() : r;
      arg = i;
    }
  }
  if (worst) *worst = arg;
  return best;
}

void finalize_inequality(VerificationReport& r, std::optional<double> explicit_constant, double slack) {
  std::size_t worst = 0;
  r.empirical_constant = empirical_constant(r.lhs, r.rhs, &worst);
  r.explicit_constant = explicit_constant;
  r.metadata["slack"] = slack;
  const double t_worst = r.t.empty() ? 0.0 : r.t[std::min(worst, r.t.size() - 1)];
  bool ok = std::isfinite(r.empirical_constant);
  if (ok && explicit_constant) ok = r.empirical_constant <= *explicit_constant * (1.0 + 1e-3 + slack);
  if (ok) {
    r.verdict = {VerdictKind::HoldsWithConstant, r.empirical_constant, 0.0, 0.0,
                 explicit_constant ? "explicit constant" : "constant unspecified; finiteness only"};
  } else {
    r.verdict = {VerdictKind::Violated, r.empirical_constant, t_worst, r.empirical_constant, "ratio exceeds bound"};
  }
}

void finalize_identity(VerificationReport& r, double eps) {
  require(r.lhs.size() == r.rhs.size(), "finalize_identity: size mismatch");
  double err = 0.0;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < r.lhs.size(); ++i) {
    const double e = std::fabs(r.lhs[i] - r.rhs[i]);
    if (e > err || std::isnan(e)) {
      err = std::isnan(e) ? std::numeric_limits<double>::infinity() : e;
      worst = i;
    }
  }
  r.empirical_constant = err;
  r.metadata["tolerance"] = eps;
  if (err <= eps) {
    r.verdict = {VerdictKind::IdentityWithin, err, 0.0, 0.0, "identity"};
  } else {
    const double t = r.t.empty() ? 0.0 : r.t[std::min(worst, r.t.size() - 1)];
    r.verdict = {VerdictKind::Violated, err, t, err, "identity error exceeds tolerance"};
  }
}

void mark_skipped(VerificationReport& r, std::string status) {
  r.verdict = {VerdictKind::Skipped, 0.0, 0.0, 0.0, std::move(status)};
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["id"] = id;
  j["function"] = function_label;
  j["profile"] = profile_label;
  j["t"] = numbers_json(t);
  j["lhs"] = numbers_json(lhs);
  j["rhs"] = numbers_json(rhs);
  j["empirical_constant"] = number_json(empirical_constant);
  j["explicit_constant"] = explicit_constant ? number_json(*explicit_constant) : nlohmann::json(nullptr);
  j["verdict"] = {{"kind", to_string(verdict.kind)},
                  {"value", number_json(verdict.value)},
                  {"t", number_json(verdict.t)},
                  {"ratio", number_json(verdict.ratio)},
                  {"status", verdict.status}};
  j["metadata"] = metadata;
  return j;
}

}  // namespace rearr
