#pragma once

// One-pass-evaluation curves: center-error precision and IoU success.

#include <vector>

#include "etrack/core.hpp"

namespace etrack::bench {

struct PrecisionCurve {
  std::vector<double> thresholds;  // 0..50 px
  std::vector<double> values;
  double at20 = 0.0;
};

struct SuccessCurve {
  std::vector<double> thresholds;  // 0, 0.05, ..., 1
  std::vector<double> values;
  double auc = 0.0;
};

namespace detail {
inline void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw InvalidInput("trajectory and groundtruth lengths differ");
  if (a == 0) throw InvalidInput("empty trajectory");
}
}  // namespace detail

/// Fraction of frames whose center error is <= t, for t = 0..50.
inline PrecisionCurve precision_curve(const std::vector<BoundingBox>& traj, const std::vector<BoundingBox>& gt) {
  detail::check_lengths(traj.size(), gt.size());
  std::vector<double> err(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) err[i] = center_distance(traj[i], gt[i]);
  PrecisionCurve pc;
  for (int t = 0; t <= 50; ++t) {
    std::size_t hit = 0;
    for (double e : err)
      if (e <= t) ++hit;
    pc.thresholds.push_back(t);
    pc.values.push_back(static_cast<double>(hit) / static_cast<double>(err.size()));
  }
  pc.at20 = pc.values[20];
  return pc;
}

/// Fraction of frames whose IoU is strictly greater than tau, for tau = k/20;
/// AUC is the mean over the 21 thresholds.
inline SuccessCurve success_curve(const std::vector<BoundingBox>& traj, const std::vector<BoundingBox>& gt) {
  detail::check_lengths(traj.size(), gt.size());
  std::vector<double> iou(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) iou[i] = rect_iou(traj[i], gt[i]);
  SuccessCurve sc;
  double sum = 0.0;
  for (int k = 0; k <= 20; ++k) {
    const double tau = k / 20.0;
    std::size_t hit = 0;
    for (double v : iou)
      if (v > tau) ++hit;
    const double frac = static_cast<double>(hit) / static_cast<double>(iou.size());
    sc.thresholds.push_back(tau);
    sc.values.push_back(frac);
    sum += frac;
  }
  sc.auc = sum / 21.0;
  return sc;
}

inline double mean_iou(const std::vector<BoundingBox>& traj, const std::vector<BoundingBox>& gt) {
  detail::check_lengths(traj.size(), gt.size());
  double s = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) s += rect_iou(traj[i], gt[i]);
  return s / static_cast<double>(traj.size());
}

inline double mean_center_error(const std::vector<BoundingBox>& traj, const std::vector<BoundingBox>& gt) {
  detail::check_lengths(traj.size(), gt.size());
  double s = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) s += center_distance(traj[i], gt[i]);
  return s / static_cast<double>(traj.size());
}

}  // namespace etrack::bench
