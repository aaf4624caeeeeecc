#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nmosc/spectral_density.hpp"

namespace nmosc {

// 17 significant digits: enough to round-trip a double, and the fixed
// formatting that makes identical runs byte-identical.
std::string format_g17(double v);

std::string read_text_file(const std::filesystem::path& path);

// write-temp-then-rename
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

// Two-column (omega, J) CSV, strictly increasing omega; an optional header
// line is skipped when its first field is not numeric.
TabulatedDensity read_two_column_csv(const std::filesystem::path& path);

// Self-contained single-file line plot with a fixed viewport and linear
// axes.
void write_svg_line_plot(const std::filesystem::path& path, const std::string& title,
                         const std::string& x_label, const std::string& y_label,
                         const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace nmosc
