#pragma once

#include "protrack/geometry.hpp"
#include "protrack/image.hpp"
#include "protrack/tracker_output.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace protrack {

struct Annotation;

/// The tracker contract: given the first frame and its box, predict a box
/// per subsequent frame. Implementations never mutate input frames.
class Tracker {
 public:
  virtual ~Tracker() = default;

  virtual void init(const Image& frame, const BBox& b1) = 0;
  virtual TrackerOutput step(const Image& frame) = 0;

  /// Whole-sequence run. Frame 0 echoes b1 with the maximum-representable
  /// confidence sentinel; batch trackers may override.
  virtual std::vector<TrackerOutput> run(std::span<const Image> frames, const BBox& b1);
};

/// Sequential init + step over a frame list.
std::vector<TrackerOutput> run_tracker(Tracker& tracker, std::span<const Image> frames, const BBox& b1);

/// Protocol fixture: replays ground truth. Reports exactly on target-present
/// frames, or on every frame when always_report is set (carrying the last
/// known box through absent spans). Constant unit confidence.
class OracleTracker final : public Tracker {
 public:
  explicit OracleTracker(std::vector<Annotation> annotations, bool always_report = false);

  void init(const Image& frame, const BBox& b1) override;
  TrackerOutput step(const Image& frame) override;

 private:
  std::vector<Annotation> annotations_;
  bool always_report_;
  size_t frame_ = 0;
  BBox last_box_;
};

/// Runs an external tracker process:
///   command <frames_dir> <x,y,w,h>
/// Frames are written as numbered 8-bit PNGs; the process prints one line per
/// frame, `x,y,w,h,confidence`, to standard output.
class ExternalTracker final : public Tracker {
 public:
  explicit ExternalTracker(std::string command) : command_(std::move(command)) {}

  void init(const Image& frame, const BBox& b1) override;
  TrackerOutput step(const Image& frame) override;
  std::vector<TrackerOutput> run(std::span<const Image> frames, const BBox& b1) override;

 private:
  std::string command_;
};

/// Parses the external wire format: one `x,y,w,h,confidence` line per frame.
std::vector<TrackerOutput> parse_tracker_output(const std::string& text);
std::string serialize_tracker_output(std::span<const TrackerOutput> outputs);

}  // namespace protrack
