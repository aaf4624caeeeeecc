#include "nmosc/text_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nmosc/errors.hpp"

namespace nmosc {

namespace fs = std::filesystem;

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void atomic_write_file(const fs::path& path, std::string_view content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create file: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed: " + path.string() + ": " + ec.message());
}

TabulatedDensity read_two_column_csv(const fs::path& path) {
  const std::string text = read_text_file(path);
  std::istringstream in(text);
  TabulatedDensity table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    for (auto& ch : line)
      if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
    std::istringstream fields(line);
    double w = 0.0, j = 0.0;
    if (!(fields >> w >> j)) {
      if (line_no == 1) continue;  // header
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected two numeric columns");
    }
    table.omega.push_back(w);
    table.j.push_back(j);
  }
  if (table.omega.size() < 2)
    throw IoError(path.string() + ": need at least two (omega, J) samples");
  return table;
}

namespace {

std::string format_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

void write_svg_line_plot(const fs::path& path, const std::string& title,
                         const std::string& x_label, const std::string& y_label,
                         const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.empty()) throw DomainError("svg plot: empty or mismatched data");

  constexpr double kWidth = 900.0, kHeight = 600.0;
  constexpr double kLeft = 80.0, kRight = 30.0, kTop = 50.0, kBottom = 60.0;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  double x_min = xs.front(), x_max = xs.front();
  double y_min = 0.0, y_max = 0.0;
  bool have_y = false;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    x_min = std::min(x_min, xs[i]);
    x_max = std::max(x_max, xs[i]);
    if (std::isfinite(ys[i])) {
      if (!have_y) {
        y_min = y_max = ys[i];
        have_y = true;
      } else {
        y_min = std::min(y_min, ys[i]);
        y_max = std::max(y_max, ys[i]);
      }
    }
  }
  if (!have_y) {
    y_min = -1.0;
    y_max = 1.0;
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) {
    y_max += 0.5;
    y_min -= 0.5;
  }
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return kTop + (y_max - y) / (y_max - y_min) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"28\" font-family=\"sans-serif\" font-size=\"18\""
      << " text-anchor=\"middle\">" << title << "</text>\n";

  // axes
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
      << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kTop + plot_h << "\" stroke=\"black\"/>\n";

  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double fx = x_min + (x_max - x_min) * i / kTicks;
    const double gx = px(fx);
    svg << "<line x1=\"" << gx << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << gx << "\" y2=\""
        << kTop + plot_h + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << gx << "\" y=\"" << kTop + plot_h + 20
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
        << format_tick(fx) << "</text>\n";
    const double fy = y_min + (y_max - y_min) * i / kTicks;
    const double gy = py(fy);
    svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << gy << "\" x2=\"" << kLeft << "\" y2=\"" << gy
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << gy + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">" << format_tick(fy)
        << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 15
      << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" << x_label
      << "</text>\n";
  svg << "<text x=\"20\" y=\"" << kTop + plot_h / 2
      << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\""
      << " transform=\"rotate(-90 20 " << kTop + plot_h / 2 << ")\">" << y_label << "</text>\n";

  // polyline, broken at non-finite samples
  std::string points;
  auto flush = [&]() {
    if (!points.empty()) {
      svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"" << points
          << "\"/>\n";
      points.clear();
    }
  };
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(ys[i])) {
      flush();
      continue;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(xs[i]), py(ys[i]));
    points += buf;
  }
  flush();
  svg << "</svg>\n";

  atomic_write_file(path, svg.str());
}

}  // namespace nmosc
