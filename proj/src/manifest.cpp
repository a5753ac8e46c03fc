#include "protrack/manifest.hpp"

#include "protrack/errors.hpp"
#include "protrack/events.hpp"
#include "protrack/png_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace protrack {

using nlohmann::json;

const StreamSpec* Manifest::find(ModalityKind kind) const {
  for (const StreamSpec& s : streams)
    if (s.kind == kind) return &s;
  return nullptr;
}

namespace {

NormPolicy norm_from_json(const json& j) {
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "fixed_range") return NormPolicy::fixed_range(j.at("lo").get<double>(), j.at("hi").get<double>());
  if (mode == "percentile") return NormPolicy::percentile(j.at("lo").get<double>(), j.at("hi").get<double>());
  if (mode == "minmax") return NormPolicy::minmax();
  throw ParseError("unknown normalization mode: " + mode);
}

json norm_to_json(const NormPolicy& p) {
  switch (p.mode) {
    case NormPolicy::Mode::FixedRange: return {{"mode", "fixed_range"}, {"lo", p.lo}, {"hi", p.hi}};
    case NormPolicy::Mode::Percentile: return {{"mode", "percentile"}, {"lo", p.lo}, {"hi", p.hi}};
    case NormPolicy::Mode::MinMax: return {{"mode", "minmax"}};
  }
  return {};
}

}  // namespace

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path.string());

  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("manifest " + path.string() + ": " + e.what());
  }

  Manifest m;
  m.base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  try {
    m.name = j.at("name").get<std::string>();
    m.groundtruth_path = j.at("groundtruth").get<std::string>();
    if (j.contains("event_window_us")) m.event_window_us = j.at("event_window_us").get<std::int64_t>();
    for (const json& js : j.at("streams")) {
      StreamSpec s;
      s.kind = modality_from_string(js.at("kind").get<std::string>());
      s.pattern = js.at("pattern").get<std::string>();
      s.bit_depth = js.value("bit_depth", 8);
      if (s.bit_depth != 8 && s.bit_depth != 16)
        throw ParseError("manifest " + path.string() + ": bit_depth must be 8 or 16");
      if (js.contains("norm")) s.norm = norm_from_json(js.at("norm"));
      m.streams.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw ParseError("manifest " + path.string() + ": " + e.what());
  }

  size_t n_visible = 0;
  for (const StreamSpec& s : m.streams) n_visible += s.kind == ModalityKind::Visible;
  if (n_visible == 0) throw ConfigError("manifest " + path.string() + ": no visible stream");
  if (n_visible > 1) throw ConfigError("manifest " + path.string() + ": more than one visible stream");
  return m;
}

void save_manifest(const std::filesystem::path& path, const Manifest& m) {
  json j;
  j["name"] = m.name;
  j["groundtruth"] = m.groundtruth_path;
  if (m.event_window_us) j["event_window_us"] = *m.event_window_us;
  j["streams"] = json::array();
  for (const StreamSpec& s : m.streams) {
    json js{{"kind", to_string(s.kind)}, {"pattern", s.pattern}, {"bit_depth", s.bit_depth}};
    if (s.norm) js["norm"] = norm_to_json(*s.norm);
    j["streams"].push_back(std::move(js));
  }
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest: " + path.string());
  out << j.dump(2) << "\n";
}

namespace {

// Glob with `*` wildcards (no directory recursion inside a wildcard).
bool glob_match(const std::string& pattern, const std::string& text) {
  size_t p = 0, t = 0, star = std::string::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

}  // namespace

std::vector<std::filesystem::path> expand_pattern(const std::filesystem::path& base,
                                                  const std::string& pattern) {
  const std::filesystem::path full = base / pattern;
  if (pattern.find('*') == std::string::npos) {
    if (!std::filesystem::exists(full)) return {};
    return {full};
  }

  const std::filesystem::path dir = full.parent_path();
  const std::string leaf = full.filename().string();
  if (dir.string().find('*') != std::string::npos)
    throw ConfigError("glob wildcards are only supported in the file name: " + pattern);
  if (!std::filesystem::is_directory(dir)) return {};

  std::vector<std::filesystem::path> matches;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && glob_match(leaf, entry.path().filename().string()))
      matches.push_back(entry.path());
  std::sort(matches.begin(), matches.end());
  return matches;
}

namespace {

bool is_nan_token(std::string_view s) {
  return s == "nan" || s == "NaN" || s == "NAN";
}

double parse_real(std::string_view field, long line_no) {
  std::string buf(field);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || buf.empty())
    throw ParseError("ground truth: non-numeric token '" + buf + "'", line_no);
  return v;
}

}  // namespace

std::vector<Annotation> parse_groundtruth(const std::string& text) {
  std::vector<Annotation> out;
  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) {
      out.push_back(Annotation::absent());
      continue;
    }
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 4)
      throw ParseError("ground truth: expected 4 comma-separated values", line_no);

    if (std::all_of(fields.begin(), fields.end(), [](const std::string& f) { return is_nan_token(f); })) {
      out.push_back(Annotation::absent());
      continue;
    }
    BBox box{parse_real(fields[0], line_no), parse_real(fields[1], line_no),
             parse_real(fields[2], line_no), parse_real(fields[3], line_no)};
    if (box.w < 0.0 || box.h < 0.0) throw ParseError("ground truth: negative box extent", line_no);
    out.push_back(Annotation::of(box));
  }
  return out;
}

std::string serialize_groundtruth(std::span<const Annotation> annotations) {
  std::ostringstream out;
  out.precision(17);
  for (const Annotation& a : annotations) {
    if (a.present())
      out << a.box->x << ',' << a.box->y << ',' << a.box->w << ',' << a.box->h << '\n';
    else
      out << "nan,nan,nan,nan\n";
  }
  return out.str();
}

namespace {

// Rescales a fixed-range policy from raw units to the stored [0,1] scale.
NormPolicy scale_policy(const NormPolicy& p, int bit_depth) {
  if (p.mode != NormPolicy::Mode::FixedRange) return p;
  const double divisor = bit_depth == 16 ? 65535.0 : 255.0;
  return NormPolicy::fixed_range(p.lo / divisor, p.hi / divisor);
}

std::vector<Image> load_image_stream(const Manifest& m, const StreamSpec& spec,
                                     const std::vector<std::filesystem::path>& files) {
  std::vector<Image> frames;
  frames.reserve(files.size());
  for (const auto& file : files) {
    LoadedPng png = read_png(file);
    if (png.bit_depth != spec.bit_depth)
      throw IoError("manifest " + m.name + ": " + file.string() + " is " +
                    std::to_string(png.bit_depth) + "-bit, manifest says " +
                    std::to_string(spec.bit_depth));
    frames.push_back(std::move(png.image));
  }
  return frames;
}

std::vector<Image> accumulate_event_stream(const Manifest& m, const std::filesystem::path& csv,
                                           size_t n_frames, Index w, Index h) {
  std::ifstream in(csv);
  if (!in) throw IoError("cannot open event stream: " + csv.string());
  EventParse parsed = parse_event_stream(in, static_cast<int>(w), static_cast<int>(h));

  std::int64_t t0 = parsed.records.empty() ? 0 : parsed.records.front().t;
  std::int64_t t_last = t0;
  for (const EventRecord& e : parsed.records) t_last = std::max(t_last, e.t);

  std::int64_t window = m.event_window_us.value_or(0);
  if (window <= 0) {
    // Default: the inter-frame interval, i.e. N windows covering the stream.
    window = (t_last - t0) / static_cast<std::int64_t>(n_frames) + 1;
  }

  std::vector<Image> frames;
  frames.reserve(n_frames);
  for (size_t i = 0; i < n_frames; ++i) {
    const std::int64_t a = t0 + window * static_cast<std::int64_t>(i);
    frames.push_back(polarity_encode(accumulate(parsed.records, a, a + window, w, h)));
  }
  return frames;
}

}  // namespace

ModalSequence load_sequence(const Manifest& m) {
  ModalSequence seq;
  seq.name = m.name;

  const StreamSpec* visible = m.find(ModalityKind::Visible);
  if (!visible) throw ConfigError("manifest " + m.name + ": no visible stream");

  const auto visible_files = expand_pattern(m.base_dir, visible->pattern);
  if (visible_files.empty())
    throw ConfigError("manifest " + m.name + ": pattern '" + visible->pattern + "' matches no files");

  std::vector<Image> visible_frames = load_image_stream(m, *visible, visible_files);
  for (Image& f : visible_frames)
    if (f.channels() == 1) f = replicate3(f.plane(0));  // grayscale visible replicates to 3 channels
  const Index vw = visible_frames.front().width();
  const Index vh = visible_frames.front().height();
  const size_t n = visible_frames.size();
  seq.streams[ModalityKind::Visible] = std::move(visible_frames);

  for (const StreamSpec& spec : m.streams) {
    if (spec.kind == ModalityKind::Visible) continue;
    if (seq.streams.count(spec.kind))
      throw ConfigError("manifest " + m.name + ": duplicate " + std::string(to_string(spec.kind)) + " stream");

    std::vector<Image> frames;
    const bool is_event_csv = spec.kind == ModalityKind::Event && spec.pattern.ends_with(".csv");
    if (is_event_csv) {
      const auto files = expand_pattern(m.base_dir, spec.pattern);
      if (files.empty())
        throw ConfigError("manifest " + m.name + ": pattern '" + spec.pattern + "' matches no files");
      if (files.size() != 1)
        throw ConfigError("manifest " + m.name + ": event stream expects one CSV file");
      frames = accumulate_event_stream(m, files[0], n, vw, vh);
    } else {
      const auto files = expand_pattern(m.base_dir, spec.pattern);
      if (files.empty())
        throw ConfigError("manifest " + m.name + ": pattern '" + spec.pattern + "' matches no files");
      if (files.size() != n)
        throw ConfigError("manifest " + m.name + ": " + std::string(to_string(spec.kind)) + " stream has " +
                          std::to_string(files.size()) + " frames, visible has " + std::to_string(n));
      frames = load_image_stream(m, spec, files);
      for (Image& f : frames) {
        if (f.width() != vw || f.height() != vh) f = resample_bilinear(f, vw, vh);
      }
    }
    if (spec.norm) seq.aux_norm[spec.kind] = scale_policy(*spec.norm, spec.bit_depth);
    seq.streams[spec.kind] = std::move(frames);
  }

  std::ifstream gt(m.base_dir / m.groundtruth_path);
  if (!gt) throw IoError("cannot open ground truth: " + (m.base_dir / m.groundtruth_path).string());
  std::ostringstream text;
  text << gt.rdbuf();
  seq.annotations = parse_groundtruth(text.str());
  if (seq.annotations.size() != n)
    throw ConfigError("manifest " + m.name + ": " + std::to_string(seq.annotations.size()) +
                      " annotations for " + std::to_string(n) + " frames");

  seq.validate();
  return seq;
}

}  // namespace protrack
