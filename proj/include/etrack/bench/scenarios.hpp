#pragma once

// Canned synthetic scenarios used by the acceptance suite and `etrack synth`.

#include "etrack/bench/synth.hpp"

namespace etrack::bench::scenarios {

/// 64x64 noise-textured target translating 3 px/frame over a noise background.
inline SynthSpec translation(std::size_t frames = 50, std::uint64_t seed = 7) {
  SynthParams p;
  SynthSpec& s = p.base;
  s.name = "translation";
  s.width = 320;
  s.height = 240;
  s.frames = frames;
  s.initial_box = {40, 80, 64, 64};
  s.target_color = {0.55, 0.45, 0.40};
  s.target_contrast = 0.8;
  s.texture_scale = 5.0;
  s.background_contrast = 0.6;
  s.background_scale = 9.0;
  s.seed = seed;
  s.background_seed = seed + 100;
  p.velocity_x = 3.0;
  p.velocity_y = 0.0;
  return expand(p);
}

/// Distinctly colored two-tone target whose texture re-randomizes every frame
/// while its shape oscillates strongly and it drifts across the canvas.
inline SynthSpec deformation(std::size_t frames = 60, std::uint64_t seed = 11) {
  SynthParams p;
  SynthSpec& s = p.base;
  s.name = "deformation";
  s.width = 320;
  s.height = 240;
  s.frames = frames;
  s.initial_box = {40, 90, 56, 56};
  s.texture = TargetTexture::kMosaic;
  s.texture_changes = true;
  s.target_color = {0.90, 0.15, 0.10};
  s.target_color2 = {0.95, 0.75, 0.05};
  s.target_contrast = 0.2;
  s.texture_scale = 8.0;
  s.background_color = {0.45, 0.50, 0.55};
  s.background_contrast = 0.6;
  s.background_saturation = 0.1;
  s.background_scale = 7.0;
  s.seed = seed;
  s.background_seed = seed + 100;
  p.velocity_x = 3.5;
  p.velocity_y = 0.5;
  p.deform_amp = 0.3;
  p.deform_period = 12.0;
  return expand(p);
}

/// Gray textured target under a global illumination ramp (gain 1.0 -> 1.8).
inline SynthSpec illumination(std::size_t frames = 60, std::uint64_t seed = 13) {
  SynthParams p;
  SynthSpec& s = p.base;
  s.name = "illumination";
  s.width = 320;
  s.height = 240;
  s.frames = frames;
  s.initial_box = {50, 70, 60, 60};
  s.target_color = {0.42, 0.42, 0.42};
  s.target_contrast = 0.3;
  s.texture_scale = 5.0;
  s.background_color = {0.23, 0.23, 0.23};
  s.background_contrast = 0.12;
  s.background_scale = 8.0;
  s.seed = seed;
  s.background_seed = seed + 100;
  p.velocity_x = 2.5;
  p.velocity_y = 1.0;
  p.gain_start = 1.0;
  p.gain_end = 1.8;
  p.gain_ramp_start = 21;
  p.gain_ramp_frames = 4;
  return expand(p);
}

/// Slow translation; with `occluded` a full-height band hides the target for 30 frames.
inline SynthSpec occlusion(bool occluded, std::size_t frames = 70, std::uint64_t seed = 17) {
  SynthParams p;
  SynthSpec& s = p.base;
  s.name = occluded ? "occlusion" : "occlusion_control";
  s.width = 320;
  s.height = 240;
  s.frames = frames;
  s.initial_box = {60, 80, 60, 60};
  s.target_color = {0.7, 0.35, 0.25};
  s.target_contrast = 0.7;
  s.texture_scale = 5.0;
  s.background_contrast = 0.5;
  s.background_scale = 9.0;
  s.seed = seed;
  s.background_seed = seed + 100;
  p.velocity_x = 1.5;
  if (occluded) {
    p.occlusion_start = 21;
    p.occlusion_frames = 30;
  }
  return expand(p);
}

/// Target growing 1% per frame about a fixed center.
inline SynthSpec growth(std::size_t frames = 41, std::uint64_t seed = 19) {
  SynthParams p;
  SynthSpec& s = p.base;
  s.name = "growth";
  s.width = 320;
  s.height = 240;
  s.frames = frames;
  s.initial_box = {130, 90, 50, 50};
  s.target_color = {0.5, 0.5, 0.5};
  s.target_contrast = 0.8;
  s.texture_scale = 5.0;
  s.background_contrast = 0.5;
  s.background_scale = 9.0;
  s.seed = seed;
  s.background_seed = seed + 100;
  p.growth = 1.01;
  return expand(p);
}

}  // namespace etrack::bench::scenarios
