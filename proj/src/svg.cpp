#include "protrack/svg.hpp"

#include "protrack/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace protrack {

void write_svg_plot(const std::filesystem::path& path, const EvalCurves& curves,
                    const std::string& title, const std::string& x_label,
                    const std::string& y_label) {
  if (curves.thresholds.empty()) throw std::invalid_argument("cannot plot an empty curve");
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write plot: " + path.string());

  constexpr int width = 640, height = 480, margin = 56;
  const double x_min = curves.thresholds.front();
  const double x_max = std::max(curves.thresholds.back(), x_min + 1e-12);
  const auto sx = [&](double x) {
    return margin + (x - x_min) / (x_max - x_min) * (width - 2 * margin);
  };
  const auto sy = [&](double y) { return height - margin - y * (height - 2 * margin); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<!-- data: threshold,value\n";
  char buf[96];
  for (size_t i = 0; i < curves.thresholds.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", curves.thresholds[i], curves.values[i]);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "summary %.17g\n", curves.summary);
  out << buf << "-->\n";

  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // axes
  out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
      << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
      << height - margin << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double fy = k / 5.0;
    out << "<line x1=\"" << margin - 4 << "\" y1=\"" << sy(fy) << "\" x2=\"" << margin << "\" y2=\""
        << sy(fy) << "\" stroke=\"black\"/>\n";
    std::snprintf(buf, sizeof buf, "%.1f", fy);
    out << "<text x=\"" << margin - 8 << "\" y=\"" << sy(fy) + 4
        << "\" font-size=\"12\" text-anchor=\"end\">" << buf << "</text>\n";
    const double fx = x_min + fy * (x_max - x_min);
    out << "<line x1=\"" << sx(fx) << "\" y1=\"" << height - margin << "\" x2=\"" << sx(fx)
        << "\" y2=\"" << height - margin + 4 << "\" stroke=\"black\"/>\n";
    std::snprintf(buf, sizeof buf, "%g", fx);
    out << "<text x=\"" << sx(fx) << "\" y=\"" << height - margin + 18
        << "\" font-size=\"12\" text-anchor=\"middle\">" << buf << "</text>\n";
  }

  out << "<polyline fill=\"none\" stroke=\"#c62828\" stroke-width=\"2\" points=\"";
  for (size_t i = 0; i < curves.thresholds.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.2f,%.2f ", sx(curves.thresholds[i]), sy(curves.values[i]));
    out << buf;
  }
  out << "\"/>\n";

  out << "<text x=\"" << width / 2 << "\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">" << title;
  std::snprintf(buf, sizeof buf, " (summary %.4f)", curves.summary);
  out << buf << "</text>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
      << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n";
  out << "<text x=\"16\" y=\"" << height / 2 << "\" font-size=\"13\" text-anchor=\"middle\" "
      << "transform=\"rotate(-90 16 " << height / 2 << ")\">" << y_label << "</text>\n";
  out << "</svg>\n";
}

}  // namespace protrack
