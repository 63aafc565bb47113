#pragma once

// Template features (gray, HOG, Color Names) pooled onto a cell grid, plus
// per-pixel color-bin indices for the histogram model.

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "etrack/core.hpp"

namespace etrack {

/// rows x cols cell grid with one Grid2D plane per channel.
struct FeatureMap {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Grid2D> channels;

  FeatureMap() = default;
  FeatureMap(std::size_t r, std::size_t c, std::size_t l) : rows(r), cols(c), channels(l, Grid2D(r, c)) {}

  std::size_t num_channels() const { return channels.size(); }
  Grid2D& operator[](std::size_t l) { return channels[l]; }
  const Grid2D& operator[](std::size_t l) const { return channels[l]; }
};

// ---------------------------------------------------------------------------
// Windows

inline std::vector<double> hann1d(std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (n <= 1) return w;
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1)));
  w.front() = 0.0;
  w.back() = 0.0;
  return w;
}

inline Grid2D hann2d(std::size_t rows, std::size_t cols) {
  if (rows < 1 || cols < 1) throw InvalidInput("hann2d: dims must be >= 1");
  const auto wr = hann1d(rows);
  const auto wc = hann1d(cols);
  Grid2D g(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) g(r, c) = wr[r] * wc[c];
  return g;
}

inline void apply_window(FeatureMap& f, const Grid2D& window) {
  if (window.rows != f.rows || window.cols != f.cols) throw InvalidInput("apply_window: shape mismatch");
  for (auto& ch : f.channels)
    for (std::size_t i = 0; i < ch.size(); ++i) ch.values[i] *= window.values[i];
}

// ---------------------------------------------------------------------------
// Color quantization

inline constexpr std::size_t kColorBins = 32;
inline constexpr std::size_t kNumColorCells = kColorBins * kColorBins * kColorBins;

/// Index of the RGB quantization cell for 8-bit channel values; R varies fastest.
inline std::uint32_t color_bin_index(int r, int g, int b, std::size_t bins = kColorBins) {
  const int width = static_cast<int>(256 / bins);
  const auto nb = static_cast<std::uint32_t>(bins);
  return static_cast<std::uint32_t>(r / width) + nb * static_cast<std::uint32_t>(g / width) +
         nb * nb * static_cast<std::uint32_t>(b / width);
}

inline std::uint32_t pixel_bin_index(const Image& img, std::size_t r, std::size_t c, std::size_t bins = kColorBins) {
  return color_bin_index(to_byte(img.at(r, c, 0)), to_byte(img.at(r, c, 1)), to_byte(img.at(r, c, 2)), bins);
}

struct BinIndexMap {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint32_t> values;

  std::uint32_t operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

inline BinIndexMap bin_index_map(const Image& patch, std::size_t bins = kColorBins) {
  if (!patch.is_rgb()) throw InvalidInput("bin_index_map: RGB patch required");
  BinIndexMap m{patch.height, patch.width, std::vector<std::uint32_t>(patch.height * patch.width)};
  for (std::size_t r = 0; r < patch.height; ++r)
    for (std::size_t c = 0; c < patch.width; ++c) m.values[r * patch.width + c] = pixel_bin_index(patch, r, c, bins);
  return m;
}

// ---------------------------------------------------------------------------
// Color Names lookup table

inline constexpr std::size_t kNumColorNames = 11;

class ColorNamesTable {
 public:
  using Row = std::array<double, kNumColorNames>;

  static constexpr std::array<const char*, kNumColorNames> kNames = {
      "black", "blue", "brown", "grey", "green", "orange", "pink", "purple", "red", "white", "yellow"};

  /// Deterministic stand-in for the learned table: Gaussian soft assignment of each
  /// quantization-cell center to 11 prototype colors, renormalized per row.
  static ColorNamesTable fallback() {
    static constexpr std::array<std::array<double, 3>, kNumColorNames> protos = {{
        {0.0, 0.0, 0.0},
        {0.0, 0.0, 1.0},
        {0.5, 0.4, 0.25},
        {0.5, 0.5, 0.5},
        {0.0, 1.0, 0.0},
        {1.0, 0.8, 0.0},
        {1.0, 0.5, 1.0},
        {1.0, 0.0, 1.0},
        {1.0, 0.0, 0.0},
        {1.0, 1.0, 1.0},
        {1.0, 1.0, 0.0},
    }};
    constexpr double sigma = 0.15;
    ColorNamesTable t;
    t.rows_.resize(kNumColorCells);
    for (std::size_t idx = 0; idx < kNumColorCells; ++idx) {
      const double rgb[3] = {(static_cast<double>(8 * (idx % 32)) + 3.5) / 255.0,
                             (static_cast<double>(8 * ((idx / 32) % 32)) + 3.5) / 255.0,
                             (static_cast<double>(8 * (idx / 1024)) + 3.5) / 255.0};
      std::array<double, kNumColorNames> d2{};
      double dmin = 1e300;
      for (std::size_t k = 0; k < kNumColorNames; ++k) {
        double s = 0.0;
        for (int ch = 0; ch < 3; ++ch) s += (rgb[ch] - protos[k][ch]) * (rgb[ch] - protos[k][ch]);
        d2[k] = s;
        dmin = std::min(dmin, s);
      }
      double sum = 0.0;
      Row& row = t.rows_[idx];
      for (std::size_t k = 0; k < kNumColorNames; ++k) {
        row[k] = std::exp(-(d2[k] - dmin) / (2.0 * sigma * sigma));
        sum += row[k];
      }
      for (auto& v : row) v /= sum;
    }
    return t;
  }

  /// Parses the text format: 32768 non-empty lines of 11 whitespace-separated floats.
  static ColorNamesTable parse(std::istream& in) {
    ColorNamesTable t;
    t.rows_.reserve(kNumColorCells);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      if (t.rows_.size() == kNumColorCells)
        throw TableLoadError("color names table: more than 32768 rows (line " + std::to_string(lineno) + ")");
      std::istringstream ls(line);
      Row row{};
      std::size_t n = 0;
      double v;
      while (ls >> v) {
        if (n == kNumColorNames)
          throw TableLoadError("color names table: too many fields on line " + std::to_string(lineno));
        row[n++] = v;
      }
      if (!ls.eof() || n != kNumColorNames)
        throw TableLoadError("color names table: expected 11 numbers on line " + std::to_string(lineno));
      double sum = 0.0;
      for (double x : row) {
        if (!(x >= 0.0) || !std::isfinite(x))
          throw TableLoadError("color names table: negative or non-finite entry on line " + std::to_string(lineno));
        sum += x;
      }
      if (std::abs(sum - 1.0) > 1e-4)
        throw TableLoadError("color names table: row does not sum to 1 on line " + std::to_string(lineno));
      t.rows_.push_back(row);
    }
    if (t.rows_.size() != kNumColorCells)
      throw TableLoadError("color names table: expected 32768 rows, got " + std::to_string(t.rows_.size()));
    return t;
  }

  static ColorNamesTable load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TableLoadError("cannot open color names table: " + path);
    return parse(in);
  }

  const Row& operator[](std::size_t idx) const { return rows_[idx]; }
  std::size_t size() const { return rows_.size(); }

 private:
  std::vector<Row> rows_;
};

// ---------------------------------------------------------------------------
// Extractors

namespace detail {

inline void check_cell_fit(std::size_t h, std::size_t w, std::size_t cell, const char* who) {
  if (cell < 1) throw InvalidInput(std::string(who) + ": cell must be >= 1");
  if (h < cell || w < cell) throw InvalidInput(std::string(who) + ": patch smaller than one cell");
}

}  // namespace detail

/// Luminance average-pooled over cell x cell blocks, shifted to [-0.5, 0.5].
inline FeatureMap extract_gray(const Image& patch, std::size_t cell) {
  if (patch.channels != 1 && patch.channels != 3) throw InvalidInput("extract_gray: 1 or 3 channels required");
  detail::check_cell_fit(patch.height, patch.width, cell, "extract_gray");
  const Grid2D lum = luminance(patch);
  const std::size_t rows = patch.height / cell, cols = patch.width / cell;
  FeatureMap f(rows, cols, 1);
  const double inv = 1.0 / static_cast<double>(cell * cell);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      double s = 0.0;
      for (std::size_t y = r * cell; y < (r + 1) * cell; ++y)
        for (std::size_t x = c * cell; x < (c + 1) * cell; ++x) s += lum(y, x);
      f[0](r, c) = s * inv - 0.5;
    }
  return f;
}

/// Unsigned-orientation gradient histograms (bin centers at k*pi/bins, linear
/// interpolation between neighbors), accumulated per cell and normalized by
/// sqrt(|h|^2 + eps^2).
inline FeatureMap extract_hog(const Image& patch, std::size_t cell = 4, std::size_t bins = 9) {
  if (patch.channels != 1 && patch.channels != 3) throw InvalidInput("extract_hog: 1 or 3 channels required");
  detail::check_cell_fit(patch.height, patch.width, cell, "extract_hog");
  if (bins < 1) throw InvalidInput("extract_hog: bins must be >= 1");
  constexpr double eps = 1e-2;

  const Grid2D lum = luminance(patch);
  const std::size_t H = patch.height, W = patch.width;
  const std::size_t rows = H / cell, cols = W / cell;
  FeatureMap f(rows, cols, bins);
  const double bin_width = std::numbers::pi / static_cast<double>(bins);

  for (std::size_t y = 0; y < rows * cell; ++y) {
    const std::size_t yu = y == 0 ? 0 : y - 1, yd = std::min(y + 1, H - 1);
    for (std::size_t x = 0; x < cols * cell; ++x) {
      const std::size_t xl = x == 0 ? 0 : x - 1, xr = std::min(x + 1, W - 1);
      const double gx = lum(y, xr) - lum(y, xl);
      const double gy = lum(yd, x) - lum(yu, x);
      const double mag = std::sqrt(gx * gx + gy * gy);
      if (mag == 0.0) continue;
      double theta = std::atan2(gy, gx);
      if (theta < 0.0) theta += std::numbers::pi;
      if (theta >= std::numbers::pi) theta -= std::numbers::pi;
      const double pos = theta / bin_width;
      const double fl = std::floor(pos);
      const double frac = pos - fl;
      const std::size_t lo = static_cast<std::size_t>(fl) % bins;
      const std::size_t hi = (lo + 1) % bins;
      const std::size_t cr = y / cell, cc = x / cell;
      f[lo](cr, cc) += mag * (1.0 - frac);
      f[hi](cr, cc) += mag * frac;
    }
  }

  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      double n2 = 0.0;
      for (std::size_t b = 0; b < bins; ++b) n2 += f[b](r, c) * f[b](r, c);
      const double inv = 1.0 / std::sqrt(n2 + eps * eps);
      for (std::size_t b = 0; b < bins; ++b) f[b](r, c) *= inv;
    }
  return f;
}

/// Color Names probabilities looked up per pixel and average-pooled per cell.
inline FeatureMap extract_cn(const Image& patch, const ColorNamesTable& table, std::size_t cell) {
  if (!patch.is_rgb()) throw InvalidInput("extract_cn: RGB patch required");
  if (table.size() != kNumColorCells) throw InvalidInput("extract_cn: color names table not loaded");
  detail::check_cell_fit(patch.height, patch.width, cell, "extract_cn");
  const std::size_t rows = patch.height / cell, cols = patch.width / cell;
  FeatureMap f(rows, cols, kNumColorNames);
  const double inv = 1.0 / static_cast<double>(cell * cell);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      std::array<double, kNumColorNames> acc{};
      for (std::size_t y = r * cell; y < (r + 1) * cell; ++y)
        for (std::size_t x = c * cell; x < (c + 1) * cell; ++x) {
          const auto& row = table[pixel_bin_index(patch, y, x)];
          for (std::size_t k = 0; k < kNumColorNames; ++k) acc[k] += row[k];
        }
      for (std::size_t k = 0; k < kNumColorNames; ++k) f[k](r, c) = acc[k] * inv;
    }
  return f;
}

}  // namespace etrack
