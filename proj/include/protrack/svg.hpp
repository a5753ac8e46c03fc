#pragma once

#include "protrack/metrics.hpp"

#include <filesystem>
#include <string>

namespace protrack {

/// Self-contained SVG line plot of a metric curve, with the raw data embedded
/// as a comment so plots stay reviewable in diffs.
void write_svg_plot(const std::filesystem::path& path, const EvalCurves& curves,
                    const std::string& title, const std::string& x_label,
                    const std::string& y_label);

}  // namespace protrack
