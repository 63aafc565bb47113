#pragma once

// Benchmark sequences in the OTB layout: `img/` with numbered frames plus
// `groundtruth_rect.txt` holding one 1-based `x,y,w,h` box per line.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "etrack/bench/ppm.hpp"
#include "etrack/core.hpp"

namespace etrack::bench {

namespace fs = std::filesystem;

struct Sequence {
  std::string name;
  std::vector<fs::path> frame_paths;  // on-disk sequences
  std::vector<Image> frames;          // in-memory (synthetic) sequences
  std::vector<BoundingBox> groundtruth;

  std::size_t size() const { return frames.empty() ? frame_paths.size() : frames.size(); }
  Image frame(std::size_t i) const { return frames.empty() ? read_pnm(frame_paths.at(i).string()) : frames.at(i); }
  bool has_full_groundtruth() const { return groundtruth.size() == size(); }
};

/// Parses one groundtruth/results line; commas, tabs and spaces all separate fields.
/// Converts 1-based x,y to the internal 0-based convention.
inline BoundingBox parse_box_line(const std::string& line) {
  std::string norm = line;
  std::replace(norm.begin(), norm.end(), ',', ' ');
  std::replace(norm.begin(), norm.end(), '\t', ' ');
  std::istringstream is(norm);
  double v[4];
  for (double& x : v)
    if (!(is >> x)) throw LoadError("expected 4 numbers in box line: '" + line + "'");
  std::string rest;
  if (is >> rest) throw LoadError("trailing fields in box line: '" + line + "'");
  BoundingBox b{v[0] - 1.0, v[1] - 1.0, v[2], v[3]};
  if (!b.is_valid()) throw LoadError("non-positive box size in line: '" + line + "'");
  return b;
}

inline std::string format_number(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  std::string s(buf);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

/// 1-based `x,y,w,h`.
inline std::string format_box_line(const BoundingBox& b) {
  return format_number(b.x + 1.0) + "," + format_number(b.y + 1.0) + "," + format_number(b.w) + "," +
         format_number(b.h);
}

inline std::vector<BoundingBox> read_boxes(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open box file: " + path.string());
  std::vector<BoundingBox> boxes;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    try {
      boxes.push_back(parse_box_line(line));
    } catch (const LoadError& e) {
      throw LoadError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return boxes;
}

inline void write_boxes(const fs::path& path, const std::vector<BoundingBox>& boxes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write box file: " + path.string());
  for (const auto& b : boxes) out << format_box_line(b) << '\n';
}

namespace detail {

inline bool numeric_stem(const fs::path& p, unsigned long long& value) {
  const std::string stem = p.stem().string();
  if (stem.empty()) return false;
  const auto res = std::from_chars(stem.data(), stem.data() + stem.size(), value);
  return res.ec == std::errc{} && res.ptr == stem.data() + stem.size();
}

}  // namespace detail

inline Sequence load_sequence(const fs::path& dir) {
  const fs::path img_dir = dir / "img";
  const fs::path gt_path = dir / "groundtruth_rect.txt";
  if (!fs::is_directory(img_dir)) throw LoadError("missing image folder: " + img_dir.string());
  if (!fs::is_regular_file(gt_path)) throw LoadError("missing groundtruth file: " + gt_path.string());

  std::vector<std::pair<unsigned long long, fs::path>> found;
  for (const auto& entry : fs::directory_iterator(img_dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    unsigned long long n = 0;
    if (!detail::numeric_stem(entry.path(), n)) continue;
    if (ext != ".ppm" && ext != ".pgm" && ext != ".pnm")
      throw LoadError("unsupported frame format (only binary PPM/PGM are decoded): " + entry.path().string());
    found.emplace_back(n, entry.path());
  }
  std::sort(found.begin(), found.end());

  Sequence seq;
  seq.name = dir.filename().string();
  if (seq.name.empty()) seq.name = dir.parent_path().filename().string();
  for (auto& [n, p] : found) seq.frame_paths.push_back(p);
  if (seq.frame_paths.size() < 2)
    throw LoadError("sequence needs at least 2 frames, found " + std::to_string(seq.frame_paths.size()));

  seq.groundtruth = read_boxes(gt_path);
  if (seq.groundtruth.size() != 1 && seq.groundtruth.size() != seq.frame_paths.size())
    throw LoadError(gt_path.string() + ": " + std::to_string(seq.groundtruth.size()) + " boxes for " +
                    std::to_string(seq.frame_paths.size()) + " frames (line " +
                    std::to_string(std::min(seq.groundtruth.size(), seq.frame_paths.size()) + 1) + ")");
  return seq;
}

/// Writes frames as img/0001.ppm ... plus groundtruth_rect.txt.
inline void save_sequence(const Sequence& seq, const fs::path& dir) {
  fs::create_directories(dir / "img");
  for (std::size_t i = 0; i < seq.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "%04zu.%s", i + 1, seq.frame(i).channels == 3 ? "ppm" : "pgm");
    write_pnm((dir / "img" / name).string(), seq.frame(i));
  }
  write_boxes(dir / "groundtruth_rect.txt", seq.groundtruth);
}

}  // namespace etrack::bench
