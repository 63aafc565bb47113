#pragma once

#include <chrono>
#include <memory>
#include <vector>

#include "etrack/bench/sequence.hpp"
#include "etrack/tracker.hpp"

namespace etrack::bench {

struct Trajectory {
  std::vector<BoundingBox> boxes;
  std::vector<Peaks> peaks;      // frame 0 holds zeros (initialization frame)
  std::vector<bool> updated;
  double seconds = 0.0;          // wall time over the tracked frames, excluding init
  std::size_t tracked_frames = 0;

  double fps() const { return seconds > 0.0 ? static_cast<double>(tracked_frames) / seconds : 0.0; }
  std::size_t size() const { return boxes.size(); }
  std::size_t skipped_updates() const {
    std::size_t n = 0;
    for (std::size_t i = 1; i < updated.size(); ++i)
      if (!updated[i]) ++n;
    return n;
  }
};

/// One-pass evaluation: initialize on the first groundtruth box, track every frame once.
inline Trajectory run_ope(const TrackerConfig& cfg, const Sequence& seq,
                          std::shared_ptr<const ColorNamesTable> cn_table = nullptr) {
  if (seq.groundtruth.empty()) throw InvalidInput("run_ope: sequence has no initial box");
  if (seq.size() < 2) throw InvalidInput("run_ope: sequence needs at least 2 frames");
  Trajectory traj;
  TrackerState st;
  try {
    st = init(seq.frame(0), seq.groundtruth.front(), cfg, std::move(cn_table));
  } catch (const Error& e) {
    throw TrackError(0, e.what());
  }
  traj.boxes.push_back(st.box);
  traj.peaks.push_back({});
  traj.updated.push_back(true);

  using clock = std::chrono::steady_clock;
  for (std::size_t i = 1; i < seq.size(); ++i) {
    const Image frame = seq.frame(i);
    const auto t0 = clock::now();
    FrameResult r;
    try {
      r = step(st, frame);
    } catch (const Error& e) {
      throw TrackError(i, e.what());
    }
    traj.seconds += std::chrono::duration<double>(clock::now() - t0).count();
    traj.boxes.push_back(r.box);
    traj.peaks.push_back(r.peaks);
    traj.updated.push_back(r.updated);
  }
  traj.tracked_frames = seq.size() - 1;
  return traj;
}

}  // namespace etrack::bench
