#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "rearr/report.hpp"

namespace rearr {

/// CSV field quoted per RFC 4180 when it holds a comma, quote or line break.
std::string csv_field(const std::string& s);

/// "%.17g", with "inf", "-inf" and "nan" for non-finite values.
std::string csv_number(double x);

/// Writes rows with CRLF line endings. The first row is the header.
void write_csv(const std::filesystem::path& path, const std::vector<std::vector<std::string>>& rows);

/// Two-column (t, value) table.
void write_series_csv(const std::filesystem::path& path, const std::vector<double>& t, const std::vector<double>& v);

/// Pretty-printed JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  /// Draw as a step function (horizontal then vertical segments).
  bool steps = false;
};

struct PlotOptions {
  std::string title;
  bool log_x = false;
  bool log_y = false;
  int width = 640;
  int height = 400;
};

/// Static SVG line plot. Non-finite points and non-positive values on log axes are dropped.
std::string render_svg(const std::vector<PlotSeries>& series, const PlotOptions& opt);
void write_svg(const std::filesystem::path& path, const std::vector<PlotSeries>& series, const PlotOptions& opt);

/// lhs and rhs against t on a log t axis.
void write_report_svg(const std::filesystem::path& path, const VerificationReport& r);

/// Letters, digits, '-', '_' and '.' kept; everything else becomes '_'.
std::string sanitize_filename(const std::string& s);

}  // namespace rearr
