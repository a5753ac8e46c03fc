#include "protrack/events.hpp"

#include "protrack/errors.hpp"

#include <charconv>
#include <istream>
#include <sstream>
#include <string_view>

namespace protrack {

namespace {

bool parse_int(std::string_view field, std::int64_t& out) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

EventParse parse_event_stream(std::istream& source, int sensor_w, int sensor_h) {
  EventParse result;
  std::string line;
  long line_no = 0;
  bool first_data_line = true;
  std::int64_t prev_t = 0;
  bool warned_order = false;

  while (std::getline(source, line)) {
    ++line_no;
    const std::string_view stripped = trim(line);
    if (stripped.empty()) continue;

    const auto fields = split_fields(stripped);
    // Header detection: a non-numeric first field on the first line.
    if (first_data_line) {
      std::int64_t probe = 0;
      if (!parse_int(trim(fields[0]), probe)) {
        first_data_line = false;
        continue;
      }
    }
    first_data_line = false;

    if (fields.size() != 4)
      throw ParseError("event record needs 4 fields `t,x,y,p`, got " + std::to_string(fields.size()), line_no);

    std::int64_t t = 0, x = 0, y = 0, p = 0;
    if (!parse_int(trim(fields[0]), t) || !parse_int(trim(fields[1]), x) ||
        !parse_int(trim(fields[2]), y) || !parse_int(trim(fields[3]), p))
      throw ParseError("malformed event record: " + std::string(stripped), line_no);

    if (p != 1 && p != 0 && p != -1)
      throw ParseError("event polarity must be 1, 0 or -1, got " + std::to_string(p), line_no);
    if (x < 0 || y < 0 || (sensor_w > 0 && x >= sensor_w) || (sensor_h > 0 && y >= sensor_h))
      throw ParseError("event coordinates (" + std::to_string(x) + "," + std::to_string(y) +
                           ") outside sensor dimensions",
                       line_no);

    if (!result.records.empty() && t < prev_t && !warned_order) {
      result.warnings.push_back("non-monotone timestamp at line " + std::to_string(line_no));
      warned_order = true;
    }
    prev_t = t;

    // Some datasets encode OFF as 0.
    result.records.push_back({t, static_cast<int>(x), static_cast<int>(y), p == 0 ? -1 : static_cast<int>(p)});
  }
  return result;
}

EventParse parse_event_stream(const std::string& text, int sensor_w, int sensor_h) {
  std::istringstream stream(text);
  return parse_event_stream(stream, sensor_w, sensor_h);
}

std::string serialize_event_stream(std::span<const EventRecord> events) {
  std::string out;
  for (const EventRecord& e : events) {
    out += std::to_string(e.t);
    out += ',';
    out += std::to_string(e.x);
    out += ',';
    out += std::to_string(e.y);
    out += ',';
    out += std::to_string(e.polarity);
    out += '\n';
  }
  return out;
}

Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> accumulate_sum(
    std::span<const EventRecord> events, std::int64_t t0, std::int64_t t1, Index w, Index h) {
  if (!(t0 < t1)) throw std::invalid_argument("accumulate requires t0 < t1");
  Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> sum =
      Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>::Zero(h, w);
  for (const EventRecord& e : events) {
    if (e.t < t0 || e.t >= t1) continue;
    if (e.x < 0 || e.x >= w || e.y < 0 || e.y >= h) continue;
    sum(e.y, e.x) += e.polarity;
  }
  return sum;
}

PolarityImage accumulate(std::span<const EventRecord> events, std::int64_t t0, std::int64_t t1,
                         Index w, Index h) {
  PolarityImage out;
  out.values = accumulate_sum(events, t0, t1, w, h).sign();
  return out;
}

Image polarity_to_color(const PolarityImage& p, double background) {
  Image out(p.height(), p.width(), 3);
  for (Index y = 0; y < p.height(); ++y)
    for (Index x = 0; x < p.width(); ++x) {
      const int v = p.values(y, x);
      if (v > 0) {
        out.at(y, x, 0) = 1.0;
      } else if (v < 0) {
        out.at(y, x, 2) = 1.0;
      } else {
        out.at(y, x, 0) = background;
        out.at(y, x, 1) = background;
        out.at(y, x, 2) = background;
      }
    }
  return out;
}

Image polarity_encode(const PolarityImage& p) {
  Image out(p.height(), p.width(), 1);
  out.plane(0) = (p.values.cast<double>() + 1.0) / 2.0;
  return out;
}

}  // namespace protrack
