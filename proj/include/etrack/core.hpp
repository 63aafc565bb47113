#pragma once

// Geometry, image containers and resampling shared by every tracker module.
//
// Coordinates are 0-based and continuous: pixel (r, c) covers [c, c+1) x [r, r+1),
// so a box (x, y, w, h) has its center at (x + w/2, y + h/2).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "etrack/error.hpp"

namespace etrack {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  bool is_valid() const { return w > 0.0 && h > 0.0 && std::isfinite(x) && std::isfinite(y); }
  Point2 center() const { return {x + 0.5 * w, y + 0.5 * h}; }
  double area() const { return w * h; }

  static BoundingBox from_center(Point2 c, double w, double h) {
    return {c.x - 0.5 * w, c.y - 0.5 * h, w, h};
  }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Row-major grid of doubles; backing store for responses, labels and windows.
struct Grid2D {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Grid2D() = default;
  Grid2D(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), values(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

  std::size_t size() const { return values.size(); }
  bool same_shape(const Grid2D& o) const { return rows == o.rows && cols == o.cols; }
};

/// Interleaved image with 1 (gray) or 3 (RGB) channels, values in [0,1].
struct Image {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 0;
  std::vector<double> data;

  Image() = default;
  Image(std::size_t h, std::size_t w, std::size_t ch, double fill = 0.0)
      : height(h), width(w), channels(ch), data(h * w * ch, fill) {}

  double& at(std::size_t r, std::size_t c, std::size_t ch = 0) {
    return data[(r * width + c) * channels + ch];
  }
  double at(std::size_t r, std::size_t c, std::size_t ch = 0) const {
    return data[(r * width + c) * channels + ch];
  }

  bool is_rgb() const { return channels == 3; }
  bool empty() const { return data.empty(); }
};

inline double rect_iou(const BoundingBox& a, const BoundingBox& b) {
  const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = ix * iy;
  if (inter <= 0.0) return 0.0;
  const double uni = a.area() + b.area() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

inline double center_distance(const BoundingBox& a, const BoundingBox& b) {
  const Point2 ca = a.center();
  const Point2 cb = b.center();
  return std::hypot(ca.x - cb.x, ca.y - cb.y);
}

/// Shrinks/moves `box` so it lies inside a frame of the given size with w,h >= min_side.
inline BoundingBox clamp_box(BoundingBox box, double frame_w, double frame_h, double min_side = 4.0) {
  box.w = std::clamp(box.w, std::min(min_side, frame_w), frame_w);
  box.h = std::clamp(box.h, std::min(min_side, frame_h), frame_h);
  box.x = std::clamp(box.x, 0.0, frame_w - box.w);
  box.y = std::clamp(box.y, 0.0, frame_h - box.h);
  return box;
}

namespace detail {

// Bilinear lookup at fractional index coordinates with clamp-to-border.
inline double sample_bilinear(const Image& img, double sy, double sx, std::size_t ch) {
  const double maxy = static_cast<double>(img.height - 1);
  const double maxx = static_cast<double>(img.width - 1);
  sy = std::clamp(sy, 0.0, maxy);
  sx = std::clamp(sx, 0.0, maxx);
  const auto y0 = static_cast<std::size_t>(sy);
  const auto x0 = static_cast<std::size_t>(sx);
  const std::size_t y1 = std::min(y0 + 1, img.height - 1);
  const std::size_t x1 = std::min(x0 + 1, img.width - 1);
  const double fy = sy - static_cast<double>(y0);
  const double fx = sx - static_cast<double>(x0);
  const double top = img.at(y0, x0, ch) + fx * (img.at(y0, x1, ch) - img.at(y0, x0, ch));
  const double bot = img.at(y1, x0, ch) + fx * (img.at(y1, x1, ch) - img.at(y1, x0, ch));
  return top + fy * (bot - top);
}

}  // namespace detail

/// Bilinear crop of `region` (may extend past the borders; edges are replicated)
/// resampled to out_h x out_w.
inline Image crop_resize(const Image& img, const BoundingBox& region, std::size_t out_h, std::size_t out_w) {
  if (region.w < 1.0 || region.h < 1.0 || !std::isfinite(region.x) || !std::isfinite(region.y))
    throw InvalidRegion("crop_resize: degenerate region");
  if (out_h < 1 || out_w < 1) throw InvalidInput("crop_resize: output size must be >= 1");
  if (img.empty()) throw InvalidInput("crop_resize: empty image");

  Image out(out_h, out_w, img.channels);
  const double step_y = region.h / static_cast<double>(out_h);
  const double step_x = region.w / static_cast<double>(out_w);

  std::vector<double> xs(out_w);
  for (std::size_t j = 0; j < out_w; ++j) xs[j] = region.x + (static_cast<double>(j) + 0.5) * step_x - 0.5;

  for (std::size_t i = 0; i < out_h; ++i) {
    const double sy = region.y + (static_cast<double>(i) + 0.5) * step_y - 0.5;
    for (std::size_t j = 0; j < out_w; ++j)
      for (std::size_t ch = 0; ch < img.channels; ++ch)
        out.at(i, j, ch) = std::clamp(detail::sample_bilinear(img, sy, xs[j], ch), 0.0, 1.0);
  }
  return out;
}

/// Bilinear resampling with pixel-center alignment: output cell i samples the
/// input at (i + 0.5) * in/out - 0.5, clamped to the valid range.
inline Grid2D resample_grid(const Grid2D& g, std::size_t out_rows, std::size_t out_cols) {
  if (out_rows < 1 || out_cols < 1) throw InvalidInput("resample_grid: output size must be >= 1");
  if (g.size() == 0) throw InvalidInput("resample_grid: empty grid");
  if (out_rows == g.rows && out_cols == g.cols) return g;

  struct Tap {
    std::size_t i0, i1;
    double f;
  };
  auto taps = [](std::size_t in, std::size_t out) {
    std::vector<Tap> t(out);
    const double scale = static_cast<double>(in) / static_cast<double>(out);
    const double maxv = static_cast<double>(in - 1);
    for (std::size_t k = 0; k < out; ++k) {
      const double s = std::clamp((static_cast<double>(k) + 0.5) * scale - 0.5, 0.0, maxv);
      const auto i0 = static_cast<std::size_t>(s);
      t[k] = {i0, std::min(i0 + 1, in - 1), s - static_cast<double>(i0)};
    }
    return t;
  };
  const auto ry = taps(g.rows, out_rows);
  const auto rx = taps(g.cols, out_cols);

  Grid2D out(out_rows, out_cols);
  for (std::size_t i = 0; i < out_rows; ++i) {
    const Tap ty = ry[i];
    for (std::size_t j = 0; j < out_cols; ++j) {
      const Tap tx = rx[j];
      const double top = g(ty.i0, tx.i0) + tx.f * (g(ty.i0, tx.i1) - g(ty.i0, tx.i0));
      const double bot = g(ty.i1, tx.i0) + tx.f * (g(ty.i1, tx.i1) - g(ty.i1, tx.i0));
      out(i, j) = top + ty.f * (bot - top);
    }
  }
  return out;
}

/// Luminance (BT.601 weights) of a 1- or 3-channel image.
inline Grid2D luminance(const Image& img) {
  Grid2D out(img.height, img.width);
  if (img.channels == 1) {
    out.values = img.data;
    return out;
  }
  if (img.channels != 3) throw InvalidInput("luminance: image must have 1 or 3 channels");
  for (std::size_t p = 0; p < out.size(); ++p) {
    const double* px = &img.data[p * 3];
    out.values[p] = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
  }
  return out;
}

/// Maps a [0,1] intensity to its 8-bit code (round to nearest, clamped).
inline int to_byte(double v) {
  return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace etrack
