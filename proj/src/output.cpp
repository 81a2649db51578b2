#include "rearr/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "rearr/error.hpp"

namespace rearr {

namespace fs = std::filesystem;

namespace {

std::ofstream open_for_write(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(const fs::path& path, const std::vector<std::vector<std::string>>& rows) {
  auto out = open_for_write(path);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << csv_field(row[i]);
    }
    out << "\r\n";
  }
}

void write_series_csv(const fs::path& path, const std::vector<double>& t, const std::vector<double>& v) {
  require(t.size() == v.size(), "write_series_csv: column lengths differ");
  std::vector<std::vector<std::string>> rows{{"t", "value"}};
  for (std::size_t i = 0; i < t.size(); ++i) rows.push_back({csv_number(t[i]), csv_number(v[i])});
  write_csv(path, rows);
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  auto out = open_for_write(path);
  out << j.dump(2) << "\n";
}

std::string render_svg(const std::vector<PlotSeries>& series, const PlotOptions& opt) {
  const double left = 70, right = 20, top = 40, bottom = 50;
  const double pw = opt.width - left - right;
  const double ph = opt.height - top - bottom;
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!opt.log_x || x > 0) && (!opt.log_y || y > 0);
  };
  auto tx = [&](double x) { return opt.log_x ? std::log10(x) : x; };
  auto ty = [&](double y) { return opt.log_y ? std::log10(y) : y; };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  if (!(x0 <= x1)) x0 = 0, x1 = 1;
  if (!(y0 <= y1)) y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-300) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-300) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return left + (tx(x) - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + (1.0 - (ty(y) - y0) / (y1 - y0)) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
    << "\" viewBox=\"0 0 " << opt.width << ' ' << opt.height << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << fixed(opt.width / 2.0) << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"14\">" << xml_escape(opt.title) << "</text>\n";
  o << "<rect x=\"" << fixed(left) << "\" y=\"" << fixed(top) << "\" width=\"" << fixed(pw) << "\" height=\""
    << fixed(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  auto axis_label = [](double v, bool log) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", log ? std::pow(10.0, v) : v);
    return std::string(buf);
  };
  for (int k = 0; k <= 4; ++k) {
    const double fx = x0 + (x1 - x0) * k / 4.0;
    const double fy = y0 + (y1 - y0) * k / 4.0;
    const double sx = left + pw * k / 4.0;
    const double sy = top + ph * (1.0 - k / 4.0);
    o << "<text x=\"" << fixed(sx) << "\" y=\"" << fixed(top + ph + 18) << "\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"11\">" << axis_label(fx, opt.log_x) << "</text>\n";
    o << "<text x=\"" << fixed(left - 6) << "\" y=\"" << fixed(sy + 4) << "\" text-anchor=\"end\" "
      << "font-family=\"sans-serif\" font-size=\"11\">" << axis_label(fy, opt.log_y) << "</text>\n";
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kColours[k % (sizeof kColours / sizeof *kColours)];
    std::string pts;
    bool have_prev = false;
    double prev_y = 0.0;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      if (s.steps && have_prev) pts += fixed(px(s.x[i])) + "," + fixed(py(prev_y)) + " ";
      pts += fixed(px(s.x[i])) + "," + fixed(py(s.y[i])) + " ";
      prev_y = s.y[i];
      have_prev = true;
    }
    if (!pts.empty()) pts.pop_back();
    o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
    o << "<text x=\"" << fixed(left + 10) << "\" y=\"" << fixed(top + 16 + 14.0 * k) << "\" fill=\"" << colour
      << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void write_svg(const fs::path& path, const std::vector<PlotSeries>& series, const PlotOptions& opt) {
  auto out = open_for_write(path);
  out << render_svg(series, opt);
}

void write_report_svg(const fs::path& path, const VerificationReport& r) {
  PlotOptions opt;
  opt.title = r.id + " / " + r.function_label + (r.profile_label.empty() ? "" : " / " + r.profile_label);
  opt.log_x = true;
  write_svg(path, {{"lhs", r.t, r.lhs, false}, {"rhs", r.t, r.rhs, false}}, opt);
}

std::string sanitize_filename(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out.empty() ? "_" : out;
}

}  // namespace rearr
