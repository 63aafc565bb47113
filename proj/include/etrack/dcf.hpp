#pragma once

// Linear multi-channel discriminative correlation filter, trained in closed form
// in the Fourier domain.
//
// The filter stores numerator_l = conj(Y) . X_l and the shared denominator
// sum_l conj(X_l) . X_l + lambda. Detection evaluates
//   response = IDFT( sum_l conj(numerator_l) . Z_l / denominator ),
// which is the prediction of the ridge regression over all cyclic shifts of x.
// With this orientation a circular shift of the input by (p, q) shifts the
// response by (+p, +q), so the response peak follows the target.

#include <cmath>
#include <vector>

#include "etrack/dft.hpp"
#include "etrack/features.hpp"

namespace etrack {

struct GaussianLabel {
  Grid2D grid;
  double sigma = 0.0;
};

/// Gaussian regression target peaked at (rows/2, cols/2) with
/// sigma = sqrt(target_w_cells * target_h_cells) * sigma_factor.
inline GaussianLabel make_label(std::size_t rows, std::size_t cols, double target_w_cells, double target_h_cells,
                                double sigma_factor = 1.0 / 16.0) {
  if (rows < 1 || cols < 1) throw InvalidInput("make_label: dims must be >= 1");
  GaussianLabel y{Grid2D(rows, cols), std::sqrt(target_w_cells * target_h_cells) * sigma_factor};
  if (!(y.sigma > 0.0)) throw InvalidInput("make_label: sigma must be positive");
  const double cm = static_cast<double>(rows / 2), cn = static_cast<double>(cols / 2);
  const double k = 1.0 / (2.0 * y.sigma * y.sigma);
  for (std::size_t m = 0; m < rows; ++m)
    for (std::size_t n = 0; n < cols; ++n) {
      const double dm = static_cast<double>(m) - cm, dn = static_cast<double>(n) - cn;
      y.grid(m, n) = std::exp(-(dm * dm + dn * dn) * k);
    }
  return y;
}

struct CorrelationFilter {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<ComplexGrid> numerator;  // one per channel
  Grid2D denominator;
  double lambda = 0.0;

  std::size_t channels() const { return numerator.size(); }
  bool empty() const { return numerator.empty(); }
};

/// How update_models blends a fresh filter into the running one.
enum class FilterBlend {
  kSeparate,  // interpolate numerator and denominator independently
  kQuotient,  // interpolate the assembled numerator/denominator ratio
};

inline CorrelationFilter train_filter(const FeatureMap& x, const GaussianLabel& y, double lambda) {
  if (x.rows != y.grid.rows || x.cols != y.grid.cols) throw InvalidInput("train_filter: feature/label size mismatch");
  if (x.num_channels() == 0) throw InvalidInput("train_filter: no channels");
  if (!(lambda > 0.0)) throw InvalidInput("train_filter: lambda must be positive");

  CorrelationFilter f;
  f.rows = x.rows;
  f.cols = x.cols;
  f.lambda = lambda;
  f.denominator = Grid2D(x.rows, x.cols, lambda);
  const ComplexGrid yf = dft::forward_2d(y.grid);
  f.numerator.reserve(x.num_channels());
  for (const Grid2D& ch : x.channels) {
    ComplexGrid xf = dft::forward_2d(ch);
    for (std::size_t i = 0; i < xf.size(); ++i) {
      f.denominator.values[i] += std::norm(xf.values[i]);
      xf.values[i] = dft::mul_conj(yf.values[i], xf.values[i]);
    }
    f.numerator.push_back(std::move(xf));
  }
  return f;
}

/// Complex response before discarding the imaginary part (which vanishes for
/// real inputs up to rounding).
inline ComplexGrid detect_complex(const CorrelationFilter& f, const FeatureMap& z) {
  if (f.empty()) throw InvalidInput("detect: filter not trained");
  if (z.rows != f.rows || z.cols != f.cols || z.num_channels() != f.channels())
    throw InvalidInput("detect: feature map does not match filter dimensions");
  ComplexGrid acc(f.rows, f.cols);
  for (std::size_t l = 0; l < f.channels(); ++l) {
    const ComplexGrid zf = dft::forward_2d(z[l]);
    const ComplexGrid& num = f.numerator[l];
    for (std::size_t i = 0; i < acc.size(); ++i) acc.values[i] += dft::mul_conj(num.values[i], zf.values[i]);
  }
  for (std::size_t i = 0; i < acc.size(); ++i) acc.values[i] /= f.denominator.values[i];
  return dft::inverse_2d(acc);
}

inline Grid2D detect(const CorrelationFilter& f, const FeatureMap& z) {
  const ComplexGrid r = detect_complex(f, z);
  Grid2D out(r.rows, r.cols);
  for (std::size_t i = 0; i < r.size(); ++i) out.values[i] = r.values[i].real();
  return out;
}

/// (1 - eta) * old + eta * fresh.
inline CorrelationFilter interpolate(const CorrelationFilter& old, const CorrelationFilter& fresh, double eta,
                                     FilterBlend mode = FilterBlend::kSeparate) {
  if (old.rows != fresh.rows || old.cols != fresh.cols || old.channels() != fresh.channels())
    throw InvalidInput("interpolate: filter shapes differ");
  CorrelationFilter out = old;
  const double keep = 1.0 - eta;
  if (mode == FilterBlend::kSeparate) {
    for (std::size_t l = 0; l < out.channels(); ++l)
      for (std::size_t i = 0; i < out.numerator[l].size(); ++i)
        out.numerator[l].values[i] = keep * old.numerator[l].values[i] + eta * fresh.numerator[l].values[i];
    for (std::size_t i = 0; i < out.denominator.size(); ++i)
      out.denominator.values[i] = keep * old.denominator.values[i] + eta * fresh.denominator.values[i];
    return out;
  }
  // Quotient mode keeps a unit denominator after the first blend.
  for (std::size_t l = 0; l < out.channels(); ++l)
    for (std::size_t i = 0; i < out.numerator[l].size(); ++i)
      out.numerator[l].values[i] = keep * old.numerator[l].values[i] / old.denominator.values[i] +
                                   eta * fresh.numerator[l].values[i] / fresh.denominator.values[i];
  std::fill(out.denominator.values.begin(), out.denominator.values.end(), 1.0);
  return out;
}

}  // namespace etrack
