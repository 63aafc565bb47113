#pragma once

// Response normalization, relative-entropy fusion and peak localization.
//
// Minimizing sum_l KL(P_l || Q) over the simplex gives, via the Lagrange
// condition sum_l p_l / q = lambda, the pointwise mean q = (1/i) sum_l p_l.

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "etrack/core.hpp"

namespace etrack {

/// Nonnegative grid summing to one.
struct ProbabilityMap {
  Grid2D grid;

  std::size_t rows() const { return grid.rows; }
  std::size_t cols() const { return grid.cols; }
  double operator()(std::size_t r, std::size_t c) const { return grid(r, c); }
};

struct GridIndex {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const GridIndex&, const GridIndex&) = default;
};

/// Row-major first maximum.
inline GridIndex argmax(const Grid2D& g) {
  if (g.size() == 0) throw InvalidInput("argmax: empty grid");
  std::size_t best = 0;
  for (std::size_t i = 1; i < g.size(); ++i)
    if (g.values[i] > g.values[best]) best = i;
  return {best / g.cols, best % g.cols};
}

inline double max_value(const Grid2D& g) {
  const GridIndex i = argmax(g);
  return g(i.row, i.col);
}

/// Min-shift normalization: p = (r - min r + eps) / sum(r - min r + eps).
inline ProbabilityMap to_prob(const Grid2D& response, double eps = 1e-12) {
  if (response.size() == 0) throw InvalidInput("to_prob: empty response");
  double mn = std::numeric_limits<double>::infinity();
  for (double v : response.values) {
    if (!std::isfinite(v)) throw InvalidInput("to_prob: non-finite response");
    mn = std::min(mn, v);
  }
  ProbabilityMap p{Grid2D(response.rows, response.cols)};
  double sum = 0.0;
  for (std::size_t i = 0; i < response.size(); ++i) {
    p.grid.values[i] = response.values[i] - mn + eps;
    sum += p.grid.values[i];
  }
  for (double& v : p.grid.values) v /= sum;
  return p;
}

/// Relative entropy sum p log(p/q), with 0 log(0/q) = 0.
inline double kl_div(const ProbabilityMap& p, const ProbabilityMap& q) {
  if (!p.grid.same_shape(q.grid)) throw InvalidInput("kl_div: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    const double pi = p.grid.values[i];
    if (pi > 0.0) s += pi * std::log(pi / q.grid.values[i]);
  }
  return s;
}

/// Closed-form minimizer of sum_l w_l KL(P_l || Q) subject to sum Q = 1: the
/// weighted mean of the maps. Empty `weights` means uniform.
inline ProbabilityMap fuse(std::span<const ProbabilityMap> maps, std::span<const double> weights = {}) {
  if (maps.empty()) throw InvalidInput("fuse: no maps");
  if (!weights.empty() && weights.size() != maps.size()) throw InvalidInput("fuse: weight count mismatch");
  const Grid2D& ref = maps.front().grid;
  double wsum = 0.0;
  for (std::size_t l = 0; l < maps.size(); ++l) {
    if (!maps[l].grid.same_shape(ref)) throw InvalidInput("fuse: map dimensions differ");
    const double w = weights.empty() ? 1.0 : weights[l];
    if (!(w >= 0.0)) throw InvalidInput("fuse: negative weight");
    wsum += w;
  }
  if (!(wsum > 0.0)) throw InvalidInput("fuse: weights sum to zero");

  ProbabilityMap q{Grid2D(ref.rows, ref.cols)};
  for (std::size_t l = 0; l < maps.size(); ++l) {
    const double w = (weights.empty() ? 1.0 : weights[l]) / wsum;
    for (std::size_t i = 0; i < ref.size(); ++i) q.grid.values[i] += w * maps[l].grid.values[i];
  }
  return q;
}

inline ProbabilityMap fuse(const std::vector<ProbabilityMap>& maps, const std::vector<double>& weights = {}) {
  return fuse(std::span<const ProbabilityMap>(maps), std::span<const double>(weights));
}

inline GridIndex peak(const ProbabilityMap& q) { return argmax(q.grid); }

}  // namespace etrack
