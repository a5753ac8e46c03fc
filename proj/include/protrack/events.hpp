#pragma once

#include "protrack/image.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace protrack {

/// One sensor event: timestamp, pixel, ON/OFF polarity.
struct EventRecord {
  std::int64_t t = 0;  // microseconds
  int x = 0;
  int y = 0;
  int polarity = 1;  // +1 or -1

  bool operator==(const EventRecord&) const = default;
};

/// Per-pixel {+1, 0, -1} summary of event activity in a time window.
struct PolarityImage {
  Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> values;

  Index width() const { return values.cols(); }
  Index height() const { return values.rows(); }
};

struct EventParse {
  std::vector<EventRecord> records;
  std::vector<std::string> warnings;  // e.g. non-monotone timestamps
};

/// Parses `t,x,y,p` CSV lines; p in {1, 0, -1} with 0 read as OFF (-1).
/// An optional header line is detected by a non-numeric first field.
/// Coordinates are validated against sensor dims when both are positive.
/// Timestamps out of order produce a warning, not an error.
EventParse parse_event_stream(std::istream& source, int sensor_w = 0, int sensor_h = 0);
EventParse parse_event_stream(const std::string& text, int sensor_w = 0, int sensor_h = 0);

/// Canonical CSV form: `t,x,y,p` with p in {1, -1}, LF line ends, no header.
std::string serialize_event_stream(std::span<const EventRecord> events);

/// Net polarity sum per pixel over [t0, t1). Exposed so window additivity of
/// the pre-sign sums is testable.
Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> accumulate_sum(
    std::span<const EventRecord> events, std::int64_t t0, std::int64_t t1, Index w, Index h);

/// Sign of the net polarity sum per pixel over [t0, t1); sign(0) = 0.
PolarityImage accumulate(std::span<const EventRecord> events, std::int64_t t0, std::int64_t t1,
                         Index w, Index h);

/// +1 -> (1,0,0), -1 -> (0,0,1), 0 -> background (mid-gray by default).
Image polarity_to_color(const PolarityImage& p, double background = 0.5);

/// Encodes {-1,0,+1} as intensities {0, 0.5, 1} for single-channel transport.
Image polarity_encode(const PolarityImage& p);

}  // namespace protrack
