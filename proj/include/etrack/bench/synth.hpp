#pragma once

// Deterministic synthetic sequences: a textured target moving over a value-noise
// background, with per-frame motion, deformation, illumination gain and optional
// occluder programs. Frames are quantized to 8 bits so that in-memory and
// saved-to-disk sequences are identical.

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "etrack/bench/ppm.hpp"
#include "etrack/bench/sequence.hpp"
#include "etrack/config.hpp"
#include "etrack/core.hpp"

namespace etrack::bench {

using Color = std::array<double, 3>;

enum class TargetTexture { kNoise, kMosaic, kSolid };

struct SynthSpec {
  std::string name = "synthetic";
  std::size_t width = 320;
  std::size_t height = 240;
  std::size_t frames = 50;

  BoundingBox initial_box{40, 40, 64, 64};
  Color target_color{0.5, 0.5, 0.5};
  Color target_color2{0.5, 0.5, 0.5};  // second mosaic color
  double target_contrast = 0.5;
  double texture_scale = 6.0;          // noise lattice / mosaic block size, in initial-target pixels
  TargetTexture texture = TargetTexture::kNoise;
  bool texture_changes = false;        // re-randomize the target texture every frame

  Color background_color{0.5, 0.5, 0.5};
  double background_contrast = 0.5;
  double background_saturation = 0.0;  // amplitude of independent per-channel noise
  double background_scale = 8.0;
  bool background_changes = false;

  Color occluder_color{0.3, 0.3, 0.3};
  double occluder_contrast = 0.4;

  // Per-frame programs, each of length `frames`.
  std::vector<Point2> motion;                          // center displacement applied entering frame n
  std::vector<std::pair<double, double>> deformation;  // (w, h) multipliers of the initial size
  std::vector<double> gain;
  std::vector<std::optional<BoundingBox>> occluders;

  std::uint64_t background_seed = 1;
  std::uint64_t seed = 1;
};

/// Fills every program with its neutral value (static, undeformed, unit gain, no occluder).
inline void reset_programs(SynthSpec& s) {
  s.motion.assign(s.frames, Point2{});
  s.deformation.assign(s.frames, {1.0, 1.0});
  s.gain.assign(s.frames, 1.0);
  s.occluders.assign(s.frames, std::nullopt);
}

namespace detail {

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline double hash_unit(std::uint64_t seed, std::int64_t a, std::int64_t b, std::uint64_t c = 0) {
  std::uint64_t h = splitmix(seed ^ splitmix(static_cast<std::uint64_t>(a) * 0x100000001B3ULL));
  h = splitmix(h ^ static_cast<std::uint64_t>(b));
  h = splitmix(h ^ c);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Smooth value noise in [0,1]: hashed lattice values, smoothstep-interpolated.
struct ValueNoise {
  std::uint64_t seed;
  double scale;

  double operator()(double x, double y) const {
    const double gx = x / scale, gy = y / scale;
    const double fx0 = std::floor(gx), fy0 = std::floor(gy);
    const auto ix = static_cast<std::int64_t>(fx0), iy = static_cast<std::int64_t>(fy0);
    double tx = gx - fx0, ty = gy - fy0;
    tx = tx * tx * (3.0 - 2.0 * tx);
    ty = ty * ty * (3.0 - 2.0 * ty);
    const double v00 = hash_unit(seed, ix, iy), v10 = hash_unit(seed, ix + 1, iy);
    const double v01 = hash_unit(seed, ix, iy + 1), v11 = hash_unit(seed, ix + 1, iy + 1);
    const double top = v00 + tx * (v10 - v00), bot = v01 + tx * (v11 - v01);
    return top + ty * (bot - top);
  }
};

// Fraction of pixel (r, c) covered by box b.
inline double coverage(std::size_t r, std::size_t c, const BoundingBox& b) {
  const double x0 = static_cast<double>(c), y0 = static_cast<double>(r);
  const double ox = std::max(0.0, std::min(x0 + 1.0, b.x + b.w) - std::max(x0, b.x));
  const double oy = std::max(0.0, std::min(y0 + 1.0, b.y + b.h) - std::max(y0, b.y));
  return ox * oy;
}

}  // namespace detail

inline void validate_spec(const SynthSpec& s) {
  if (s.frames < 2) throw SpecError("synthetic sequence needs at least 2 frames");
  if (s.width < 8 || s.height < 8) throw SpecError("canvas too small");
  if (s.motion.size() != s.frames || s.deformation.size() != s.frames || s.gain.size() != s.frames ||
      s.occluders.size() != s.frames)
    throw SpecError("every program must have one entry per frame");
  for (double g : s.gain)
    if (!(g > 0.0)) throw SpecError("gain must be > 0");
  if (!s.initial_box.is_valid()) throw SpecError("initial target box must have positive size");
  if (!(s.texture_scale > 0.0) || !(s.background_scale > 0.0)) throw SpecError("texture scales must be > 0");
}

/// Groundtruth boxes implied by the motion and deformation programs.
inline std::vector<BoundingBox> synth_groundtruth(const SynthSpec& s) {
  std::vector<BoundingBox> gt;
  Point2 c = s.initial_box.center();
  for (std::size_t n = 0; n < s.frames; ++n) {
    c.x += s.motion[n].x;
    c.y += s.motion[n].y;
    const auto [mw, mh] = s.deformation[n];
    if (!(mw > 0.0) || !(mh > 0.0)) throw SpecError("deformation multipliers must be > 0");
    const BoundingBox b = BoundingBox::from_center(c, s.initial_box.w * mw, s.initial_box.h * mh);
    if (b.x < 0.0 || b.y < 0.0 || b.x + b.w > static_cast<double>(s.width) || b.y + b.h > static_cast<double>(s.height))
      throw SpecError("target leaves the canvas at frame " + std::to_string(n + 1));
    gt.push_back(b);
  }
  return gt;
}

inline Image render_frame(const SynthSpec& s, std::size_t n, const BoundingBox& target) {
  const detail::ValueNoise bg_lum{s.background_seed * 4 + (s.background_changes ? n * 7919 : 0), s.background_scale};
  const std::array<detail::ValueNoise, 3> bg_chroma = {
      detail::ValueNoise{detail::splitmix(bg_lum.seed + 1), s.background_scale},
      detail::ValueNoise{detail::splitmix(bg_lum.seed + 2), s.background_scale},
      detail::ValueNoise{detail::splitmix(bg_lum.seed + 3), s.background_scale}};
  const std::uint64_t tex_seed = detail::splitmix(s.seed) + (s.texture_changes ? detail::splitmix(n + 1) : 0);
  const detail::ValueNoise tex{tex_seed, s.texture_scale};
  const detail::ValueNoise occ{detail::splitmix(s.seed + 0xABCDEF), 5.0};

  Image img(s.height, s.width, 3);
  for (std::size_t r = 0; r < s.height; ++r)
    for (std::size_t c = 0; c < s.width; ++c) {
      const double px = static_cast<double>(c) + 0.5, py = static_cast<double>(r) + 0.5;
      Color bg{};
      const double l = s.background_contrast * (bg_lum(px, py) - 0.5);
      for (int ch = 0; ch < 3; ++ch)
        bg[ch] = s.background_color[ch] + l + s.background_saturation * (bg_chroma[ch](px, py) - 0.5);
      Color out = bg;

      const double cov = detail::coverage(r, c, target);
      if (cov > 0.0) {
        // Texture coordinates in initial-target pixels, so deformation stretches the texture.
        const double tu = std::clamp((px - target.x) / target.w, 0.0, 1.0) * s.initial_box.w;
        const double tv = std::clamp((py - target.y) / target.h, 0.0, 1.0) * s.initial_box.h;
        Color fg{};
        switch (s.texture) {
          case TargetTexture::kNoise: {
            const double t = s.target_contrast * (tex(tu, tv) - 0.5);
            for (int ch = 0; ch < 3; ++ch) fg[ch] = s.target_color[ch] + t;
            break;
          }
          case TargetTexture::kMosaic: {
            const auto bx = static_cast<std::int64_t>(std::floor(tu / s.texture_scale));
            const auto by = static_cast<std::int64_t>(std::floor(tv / s.texture_scale));
            const Color& base = detail::hash_unit(tex_seed, bx, by) < 0.5 ? s.target_color : s.target_color2;
            const double t = s.target_contrast * (detail::hash_unit(tex_seed, bx, by, 1) - 0.5);
            for (int ch = 0; ch < 3; ++ch) fg[ch] = base[ch] + t;
            break;
          }
          case TargetTexture::kSolid: fg = s.target_color; break;
        }
        for (int ch = 0; ch < 3; ++ch) out[ch] = cov * fg[ch] + (1.0 - cov) * bg[ch];
      }

      if (const auto& o = s.occluders[n]) {
        const double oc = detail::coverage(r, c, *o);
        if (oc > 0.0) {
          const double t = s.occluder_contrast * (occ(px, py) - 0.5);
          for (int ch = 0; ch < 3; ++ch) out[ch] = oc * (s.occluder_color[ch] + t) + (1.0 - oc) * out[ch];
        }
      }
      for (int ch = 0; ch < 3; ++ch) img.at(r, c, ch) = std::clamp(out[ch] * s.gain[n], 0.0, 1.0);
    }
  return quantize8(std::move(img));
}

inline Sequence gen_synthetic(const SynthSpec& s) {
  validate_spec(s);
  Sequence seq;
  seq.name = s.name;
  seq.groundtruth = synth_groundtruth(s);
  seq.frames.reserve(s.frames);
  for (std::size_t n = 0; n < s.frames; ++n) seq.frames.push_back(render_frame(s, n, seq.groundtruth[n]));
  return seq;
}

// ---------------------------------------------------------------------------
// Text description: `key = value` scalars expanded into per-frame programs.

struct SynthParams {
  SynthSpec base;
  double velocity_x = 0.0, velocity_y = 0.0;  // px per frame
  double growth = 1.0;                        // per-frame size multiplier
  double deform_amp = 0.0;                    // w *= 1 + a sin, h *= 1 - a sin
  double deform_period = 20.0;
  double gain_start = 1.0, gain_end = 1.0;    // linear ramp, over the whole sequence by default
  std::size_t gain_ramp_start = 0;            // 1-based first frame of the ramp (0: frame 1)
  std::size_t gain_ramp_frames = 0;           // 0: ramp until the last frame
  std::size_t occlusion_start = 0, occlusion_frames = 0;  // 1-based start frame
  std::optional<BoundingBox> occluder;        // defaults to the covered target box
};

inline SynthSpec expand(const SynthParams& p) {
  SynthSpec s = p.base;
  reset_programs(s);
  const double r0 = p.gain_ramp_start > 0 ? static_cast<double>(p.gain_ramp_start - 1) : 0.0;
  const double rlen = p.gain_ramp_frames > 0 ? static_cast<double>(p.gain_ramp_frames)
                                             : static_cast<double>(s.frames - 1) - r0;
  for (std::size_t n = 0; n < s.frames; ++n) {
    const double t = static_cast<double>(n);
    if (n > 0) s.motion[n] = {p.velocity_x, p.velocity_y};
    const double g = std::pow(p.growth, t);
    const double d = p.deform_amp * std::sin(2.0 * std::numbers::pi * t / p.deform_period);
    s.deformation[n] = {g * (1.0 + d), g * (1.0 - d)};
    const double ramp = rlen > 0 ? std::clamp((t - r0) / rlen, 0.0, 1.0) : (t >= r0 ? 1.0 : 0.0);
    s.gain[n] = p.gain_start + (p.gain_end - p.gain_start) * ramp;
  }
  if (p.occlusion_frames > 0) {
    const auto gt = synth_groundtruth(s);
    for (std::size_t n = p.occlusion_start > 0 ? p.occlusion_start - 1 : 0;
         n < std::min(s.frames, p.occlusion_start - 1 + p.occlusion_frames); ++n) {
      if (p.occluder) {
        s.occluders[n] = *p.occluder;
      } else {
        // A full-height band wider than the target by a quarter of its width on each side.
        const BoundingBox& b = gt[n];
        s.occluders[n] = BoundingBox{b.x - 0.25 * b.w, 0.0, 1.5 * b.w, static_cast<double>(s.height)};
      }
    }
  }
  return s;
}

inline SynthParams parse_synth_params(std::istream& in) {
  SynthParams p;
  SynthSpec& s = p.base;
  std::optional<BoundingBox> occ;
  double ox = 0, oy = 0, ow = 0, oh = 0;
  bool has_occ = false;
  auto num = [](const std::string& k, const std::string& v) { return etrack::detail::parse_double(k, v); };
  auto cnt = [](const std::string& k, const std::string& v) { return etrack::detail::parse_count(k, v); };
  auto flag = [](const std::string& k, const std::string& v) { return etrack::detail::parse_bool(k, v); };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = etrack::detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw SpecError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string k = etrack::detail::trim(line.substr(0, eq));
    const std::string v = etrack::detail::trim(line.substr(eq + 1));
    try {
      if (k == "name") s.name = v;
      else if (k == "width") s.width = cnt(k, v);
      else if (k == "height") s.height = cnt(k, v);
      else if (k == "frames") s.frames = cnt(k, v);
      else if (k == "target_x") s.initial_box.x = num(k, v) - 1.0;
      else if (k == "target_y") s.initial_box.y = num(k, v) - 1.0;
      else if (k == "target_w") s.initial_box.w = num(k, v);
      else if (k == "target_h") s.initial_box.h = num(k, v);
      else if (k == "target_r") s.target_color[0] = num(k, v);
      else if (k == "target_g") s.target_color[1] = num(k, v);
      else if (k == "target_b") s.target_color[2] = num(k, v);
      else if (k == "target2_r") s.target_color2[0] = num(k, v);
      else if (k == "target2_g") s.target_color2[1] = num(k, v);
      else if (k == "target2_b") s.target_color2[2] = num(k, v);
      else if (k == "target_contrast") s.target_contrast = num(k, v);
      else if (k == "texture_scale") s.texture_scale = num(k, v);
      else if (k == "texture") {
        if (v == "noise") s.texture = TargetTexture::kNoise;
        else if (v == "mosaic") s.texture = TargetTexture::kMosaic;
        else if (v == "solid") s.texture = TargetTexture::kSolid;
        else throw SpecError("unknown texture: " + v);
      } else if (k == "texture_changes") s.texture_changes = flag(k, v);
      else if (k == "background_r") s.background_color[0] = num(k, v);
      else if (k == "background_g") s.background_color[1] = num(k, v);
      else if (k == "background_b") s.background_color[2] = num(k, v);
      else if (k == "background_contrast") s.background_contrast = num(k, v);
      else if (k == "background_saturation") s.background_saturation = num(k, v);
      else if (k == "background_scale") s.background_scale = num(k, v);
      else if (k == "background_changes") s.background_changes = flag(k, v);
      else if (k == "background_seed") s.background_seed = cnt(k, v);
      else if (k == "seed") s.seed = cnt(k, v);
      else if (k == "velocity_x") p.velocity_x = num(k, v);
      else if (k == "velocity_y") p.velocity_y = num(k, v);
      else if (k == "growth") p.growth = num(k, v);
      else if (k == "deform_amp") p.deform_amp = num(k, v);
      else if (k == "deform_period") p.deform_period = num(k, v);
      else if (k == "gain_start") p.gain_start = num(k, v);
      else if (k == "gain_end") p.gain_end = num(k, v);
      else if (k == "gain_ramp_start") p.gain_ramp_start = cnt(k, v);
      else if (k == "gain_ramp_frames") p.gain_ramp_frames = cnt(k, v);
      else if (k == "occlusion_start") p.occlusion_start = cnt(k, v);
      else if (k == "occlusion_frames") p.occlusion_frames = cnt(k, v);
      else if (k == "occluder_x") { ox = num(k, v) - 1.0; has_occ = true; }
      else if (k == "occluder_y") { oy = num(k, v) - 1.0; has_occ = true; }
      else if (k == "occluder_w") { ow = num(k, v); has_occ = true; }
      else if (k == "occluder_h") { oh = num(k, v); has_occ = true; }
      else throw SpecError("unknown synth key: " + k);
    } catch (const ConfigError& e) {
      throw SpecError(e.what());
    }
  }
  if (has_occ) p.occluder = BoundingBox{ox, oy, ow, oh};
  if (p.occlusion_frames > 0 && p.occlusion_start == 0) throw SpecError("occlusion_start is 1-based");
  return p;
}

inline SynthParams load_synth_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open synth spec: " + path);
  return parse_synth_params(in);
}

}  // namespace etrack::bench
