#pragma once

// One-dimensional correlation filter over a geometric scale pyramid. Each pyramid
// level is a crop of (step^k * base) about the target center, resized to a fixed
// template and described by gray HOG; the filter runs along the scale axis.

#include <cmath>
#include <vector>

#include "etrack/core.hpp"
#include "etrack/dft.hpp"
#include "etrack/features.hpp"

namespace etrack {

struct ScaleParams {
  std::size_t num_scales = 33;
  double step = 1.02;
  double sigma = 1.5;  // label width, in scale steps
  double lambda = 0.001;
  std::size_t template_size = 32;
  std::size_t cell = 4;
  std::size_t hog_bins = 9;
};

/// D x S sample matrix, stored dim-major: at(d, n) = values[d * scales + n].
struct ScaleSamples {
  std::size_t dims = 0;
  std::size_t scales = 0;
  std::vector<double> values;

  double& at(std::size_t d, std::size_t n) { return values[d * scales + n]; }
  double at(std::size_t d, std::size_t n) const { return values[d * scales + n]; }
};

struct ScaleFilter {
  std::size_t dims = 0;
  std::size_t scales = 0;
  std::vector<cplx> numerator;  // dims x scales
  std::vector<double> denominator;
  double lambda = 0.0;

  bool empty() const { return numerator.empty(); }
};

inline std::size_t center_index(const ScaleParams& p) { return p.num_scales / 2; }

/// step^(n - center) for every pyramid level; exactly 1 at the center.
inline std::vector<double> scale_factors(const ScaleParams& p) {
  std::vector<double> f(p.num_scales);
  const auto c = static_cast<long>(center_index(p));
  for (std::size_t n = 0; n < p.num_scales; ++n) f[n] = std::pow(p.step, static_cast<double>(static_cast<long>(n) - c));
  return f;
}

inline ScaleSamples build_scale_samples(const Image& img, Point2 center, double base_w, double base_h,
                                        const ScaleParams& p = {}) {
  if (!(base_w > 0.0) || !(base_h > 0.0)) throw InvalidInput("build_scale_samples: degenerate base size");
  if (p.num_scales < 1) throw InvalidInput("build_scale_samples: need at least one scale");
  const auto factors = scale_factors(p);
  const auto window = hann1d(p.num_scales);
  const std::size_t cells = p.template_size / p.cell;

  ScaleSamples s{cells * cells * p.hog_bins, p.num_scales, {}};
  s.values.assign(s.dims * s.scales, 0.0);
  for (std::size_t n = 0; n < p.num_scales; ++n) {
    // Crops below one pixel are clamped; the window kills the outer levels anyway.
    const double w = std::max(1.0, base_w * factors[n]);
    const double h = std::max(1.0, base_h * factors[n]);
    const Image patch = crop_resize(img, BoundingBox::from_center(center, w, h), p.template_size, p.template_size);
    const FeatureMap hog = extract_hog(patch, p.cell, p.hog_bins);
    std::size_t d = 0;
    for (std::size_t ch = 0; ch < hog.num_channels(); ++ch)
      for (std::size_t c = 0; c < hog.cols; ++c)
        for (std::size_t r = 0; r < hog.rows; ++r) s.at(d++, n) = hog[ch](r, c) * window[n];
  }
  return s;
}

inline std::vector<double> scale_label(std::size_t num_scales, double sigma) {
  std::vector<double> y(num_scales);
  const double c = static_cast<double>(num_scales / 2);
  for (std::size_t n = 0; n < num_scales; ++n) {
    const double d = static_cast<double>(n) - c;
    y[n] = std::exp(-d * d / (2.0 * sigma * sigma));
  }
  return y;
}

inline ScaleFilter train_scale(const ScaleSamples& samples, double sigma, double lambda) {
  if (samples.dims == 0 || samples.scales == 0) throw InvalidInput("train_scale: empty samples");
  const auto yf = dft::forward_1d(scale_label(samples.scales, sigma));
  ScaleFilter f{samples.dims, samples.scales, std::vector<cplx>(samples.dims * samples.scales),
                std::vector<double>(samples.scales, lambda), lambda};
  std::vector<cplx> row(samples.scales);
  for (std::size_t d = 0; d < samples.dims; ++d) {
    dft::forward_real_1d(&samples.values[d * samples.scales], 1, samples.scales, row.data());
    for (std::size_t k = 0; k < samples.scales; ++k) {
      f.numerator[d * samples.scales + k] = dft::mul_conj(yf[k], row[k]);
      f.denominator[k] += std::norm(row[k]);
    }
  }
  return f;
}

inline std::vector<double> scale_response(const ScaleFilter& f, const ScaleSamples& z) {
  if (f.empty()) throw InvalidInput("scale_response: filter not trained");
  if (z.dims != f.dims || z.scales != f.scales) throw InvalidInput("scale_response: sample shape mismatch");
  std::vector<cplx> acc(f.scales), row(f.scales);
  for (std::size_t d = 0; d < f.dims; ++d) {
    dft::forward_real_1d(&z.values[d * z.scales], 1, z.scales, row.data());
    for (std::size_t k = 0; k < f.scales; ++k) acc[k] += dft::mul_conj(f.numerator[d * f.scales + k], row[k]);
  }
  for (std::size_t k = 0; k < f.scales; ++k) acc[k] /= f.denominator[k];
  const auto r = dft::inverse_1d(acc);
  std::vector<double> out(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) out[k] = r[k].real();
  return out;
}

/// step^(argmax - center) with the first maximum winning ties.
inline double multiplier_for_index(std::size_t idx, const ScaleParams& p) {
  return std::pow(p.step, static_cast<double>(static_cast<long>(idx) - static_cast<long>(center_index(p))));
}

inline double detect_scale(const ScaleFilter& f, const ScaleSamples& z, const ScaleParams& p = {}) {
  const auto r = scale_response(f, z);
  std::size_t best = 0;
  for (std::size_t k = 1; k < r.size(); ++k)
    if (r[k] > r[best]) best = k;
  return multiplier_for_index(best, p);
}

inline ScaleFilter interpolate(const ScaleFilter& old, const ScaleFilter& fresh, double eta) {
  if (old.dims != fresh.dims || old.scales != fresh.scales) throw InvalidInput("interpolate: scale filter shapes differ");
  ScaleFilter out = old;
  for (std::size_t i = 0; i < out.numerator.size(); ++i)
    out.numerator[i] = (1.0 - eta) * old.numerator[i] + eta * fresh.numerator[i];
  for (std::size_t i = 0; i < out.denominator.size(); ++i)
    out.denominator[i] = (1.0 - eta) * old.denominator[i] + eta * fresh.denominator[i];
  return out;
}

/// Applies a scale multiplier to `box` about its center and keeps the result inside
/// the frame with both sides >= min_side.
inline BoundingBox apply_scale(const BoundingBox& box, double multiplier, double frame_w, double frame_h,
                               double min_side = 4.0) {
  return clamp_box(BoundingBox::from_center(box.center(), box.w * multiplier, box.h * multiplier), frame_w, frame_h,
                   min_side);
}

}  // namespace etrack
