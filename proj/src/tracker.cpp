#include "protrack/tracker.hpp"

#include "protrack/errors.hpp"
#include "protrack/png_io.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace protrack {

std::vector<TrackerOutput> Tracker::run(std::span<const Image> frames, const BBox& b1) {
  if (frames.empty()) throw std::invalid_argument("run_tracker needs at least one frame");
  std::vector<TrackerOutput> out;
  out.reserve(frames.size());
  init(frames[0], b1);
  out.push_back({b1, std::numeric_limits<double>::max(), true});
  for (size_t i = 1; i < frames.size(); ++i) out.push_back(step(frames[i]));
  return out;
}

std::vector<TrackerOutput> run_tracker(Tracker& tracker, std::span<const Image> frames, const BBox& b1) {
  return tracker.run(frames, b1);
}

OracleTracker::OracleTracker(std::vector<Annotation> annotations, bool always_report)
    : annotations_(std::move(annotations)), always_report_(always_report) {}

void OracleTracker::init(const Image&, const BBox& b1) {
  frame_ = 0;
  last_box_ = b1;
}

TrackerOutput OracleTracker::step(const Image&) {
  ++frame_;
  if (frame_ >= annotations_.size()) return {last_box_, 1.0, always_report_};
  const Annotation& a = annotations_[frame_];
  if (a.present()) {
    last_box_ = *a.box;
    return {last_box_, 1.0, true};
  }
  return {last_box_, 1.0, always_report_};
}

void ExternalTracker::init(const Image&, const BBox&) {
  throw std::logic_error("external trackers run whole sequences; use run()");
}

TrackerOutput ExternalTracker::step(const Image&) {
  throw std::logic_error("external trackers run whole sequences; use run()");
}

std::vector<TrackerOutput> ExternalTracker::run(std::span<const Image> frames, const BBox& b1) {
  if (frames.empty()) throw std::invalid_argument("run_tracker needs at least one frame");

  const auto dir = std::filesystem::temp_directory_path() /
                   ("protrack-ext-" + std::to_string(::getpid()) + "-" +
                    std::to_string(reinterpret_cast<std::uintptr_t>(this)));
  std::filesystem::create_directories(dir);
  for (size_t i = 0; i < frames.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "%06zu.png", i);
    write_png8(dir / name, frames[i]);
  }

  std::ostringstream cmd;
  cmd.precision(17);
  cmd << command_ << " " << dir.string() << " " << b1.x << ',' << b1.y << ',' << b1.w << ',' << b1.h;

  std::string text;
  {
    std::FILE* pipe = ::popen(cmd.str().c_str(), "r");
    if (!pipe) throw IoError("cannot launch external tracker: " + command_);
    char buf[4096];
    size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) text.append(buf, got);
    const int status = ::pclose(pipe);
    if (status != 0) {
      std::filesystem::remove_all(dir);
      throw IoError("external tracker exited with status " + std::to_string(status));
    }
  }
  std::filesystem::remove_all(dir);

  std::vector<TrackerOutput> out = parse_tracker_output(text);
  if (out.size() != frames.size())
    throw ProtocolError("external tracker returned " + std::to_string(out.size()) + " lines for " +
                        std::to_string(frames.size()) + " frames");
  return out;
}

std::vector<TrackerOutput> parse_tracker_output(const std::string& text) {
  std::vector<TrackerOutput> out;
  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    TrackerOutput t;
    double x, y, w, h, conf;
    char c1, c2, c3, c4;
    std::istringstream ls(line);
    if (!(ls >> x >> c1 >> y >> c2 >> w >> c3 >> h >> c4 >> conf) || c1 != ',' || c2 != ',' ||
        c3 != ',' || c4 != ',')
      throw ParseError("tracker output: expected `x,y,w,h,confidence`", line_no);
    if (!std::isfinite(conf)) throw ParseError("tracker output: confidence must be finite", line_no);
    t.box = {x, y, w, h};
    t.confidence = conf;
    t.reported = true;
    out.push_back(t);
  }
  return out;
}

std::string serialize_tracker_output(std::span<const TrackerOutput> outputs) {
  std::ostringstream out;
  out.precision(17);
  for (const TrackerOutput& t : outputs)
    out << t.box.x << ',' << t.box.y << ',' << t.box.w << ',' << t.box.h << ',' << t.confidence << '\n';
  return out.str();
}

}  // namespace protrack
