#pragma once

// Tracker configuration and its `key = value` text form.

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "etrack/error.hpp"
#include "etrack/scale.hpp"

namespace etrack {

struct TrackerConfig {
  double search_scale = 2.0;
  std::size_t patch_size = 150;
  std::size_t cell = 4;
  std::size_t hist_bins = 32;
  double fg_shrink = 0.85;
  double lambda = 0.001;
  double label_sigma_factor = 1.0 / 16.0;
  double eta_t = 0.02;
  double eta_s = 0.04;
  double gamma_q = 0.5;
  double gamma_t = 0.7;
  double gamma_s = 0.5;
  std::size_t history_len = 10;

  std::size_t num_scales = 33;
  double scale_step = 1.02;
  double scale_sigma = 1.5;
  double eta_scale = 0.02;
  std::size_t scale_template = 32;
  bool use_scale = true;

  double weight_gray = 1.0;
  double weight_hog = 1.0;
  double weight_cn = 1.0;
  double weight_ch = 1.0;

  bool use_gray = true;
  bool use_hog = true;
  bool use_cn = true;
  bool use_ch = true;

  // Interpolate the assembled filter quotient instead of numerator/denominator.
  bool blend_quotient = false;

  ScaleParams scale_params() const {
    ScaleParams p;
    p.num_scales = num_scales;
    p.step = scale_step;
    p.sigma = scale_sigma;
    p.lambda = lambda;
    p.template_size = scale_template;
    return p;
  }

  bool any_feature() const { return use_gray || use_hog || use_cn || use_ch; }

  void validate() const {
    auto rate = [](double v, const char* name) {
      if (!(v > 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must be in (0,1]");
    };
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be > 0");
    };
    rate(eta_t, "eta_t");
    rate(eta_s, "eta_s");
    rate(eta_scale, "eta_scale");
    rate(fg_shrink, "fg_shrink");
    positive(gamma_q, "gamma_q");
    positive(gamma_t, "gamma_t");
    positive(gamma_s, "gamma_s");
    positive(search_scale, "search_scale");
    positive(lambda, "lambda");
    positive(label_sigma_factor, "label_sigma_factor");
    positive(scale_step, "scale_step");
    positive(scale_sigma, "scale_sigma");
    if (history_len < 1) throw ConfigError("history_len must be >= 1");
    if (cell < 1 || patch_size < cell) throw ConfigError("patch_size must hold at least one cell");
    if (hist_bins < 1 || hist_bins > 256 || 256 % hist_bins != 0) throw ConfigError("hist_bins must divide 256");
    if (num_scales < 1) throw ConfigError("num_scales must be >= 1");
    if (scale_template < 4) throw ConfigError("scale_template must be >= 4");
    for (double w : {weight_gray, weight_hog, weight_cn, weight_ch})
      if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("fusion weights must be finite and >= 0");
    if (!any_feature()) throw ConfigError("at least one feature must be enabled");
  }
};

namespace detail {

struct ConfigField {
  std::function<void(TrackerConfig&, const std::string&)> set;
  std::function<std::string(const TrackerConfig&)> get;
};

inline double parse_double(const std::string& key, const std::string& v) {
  if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + key + ": '" + v + "'");
  }
  if (pos != v.size()) throw ConfigError("bad number for " + key + ": '" + v + "'");
  return out;
}

inline std::size_t parse_count(const std::string& key, const std::string& v) {
  const double d = parse_double(key, v);
  if (!(d >= 0.0) || d != std::floor(d) || d > 1e9) throw ConfigError("bad count for " + key + ": '" + v + "'");
  return static_cast<std::size_t>(d);
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("bad boolean for " + key + ": '" + v + "'");
}

inline std::string fmt_double(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline const std::map<std::string, ConfigField>& config_fields() {
  static const std::map<std::string, ConfigField> fields = [] {
    std::map<std::string, ConfigField> f;
#define ETRACK_DOUBLE(name)                                                                     \
  f[#name] = {[](TrackerConfig& c, const std::string& v) { c.name = parse_double(#name, v); }, \
              [](const TrackerConfig& c) { return fmt_double(c.name); }}
#define ETRACK_COUNT(name)                                                                     \
  f[#name] = {[](TrackerConfig& c, const std::string& v) { c.name = parse_count(#name, v); }, \
              [](const TrackerConfig& c) { return std::to_string(c.name); }}
#define ETRACK_BOOL(name)                                                                     \
  f[#name] = {[](TrackerConfig& c, const std::string& v) { c.name = parse_bool(#name, v); }, \
              [](const TrackerConfig& c) { return std::string(c.name ? "true" : "false"); }}
    ETRACK_DOUBLE(search_scale);
    ETRACK_COUNT(patch_size);
    ETRACK_COUNT(cell);
    ETRACK_COUNT(hist_bins);
    ETRACK_DOUBLE(fg_shrink);
    ETRACK_DOUBLE(lambda);
    ETRACK_DOUBLE(label_sigma_factor);
    ETRACK_DOUBLE(eta_t);
    ETRACK_DOUBLE(eta_s);
    ETRACK_DOUBLE(gamma_q);
    ETRACK_DOUBLE(gamma_t);
    ETRACK_DOUBLE(gamma_s);
    ETRACK_COUNT(history_len);
    ETRACK_COUNT(num_scales);
    ETRACK_DOUBLE(scale_step);
    ETRACK_DOUBLE(scale_sigma);
    ETRACK_DOUBLE(eta_scale);
    ETRACK_COUNT(scale_template);
    ETRACK_BOOL(use_scale);
    ETRACK_DOUBLE(weight_gray);
    ETRACK_DOUBLE(weight_hog);
    ETRACK_DOUBLE(weight_cn);
    ETRACK_DOUBLE(weight_ch);
    ETRACK_BOOL(use_gray);
    ETRACK_BOOL(use_hog);
    ETRACK_BOOL(use_cn);
    ETRACK_BOOL(use_ch);
    ETRACK_BOOL(blend_quotient);
#undef ETRACK_DOUBLE
#undef ETRACK_COUNT
#undef ETRACK_BOOL
    return f;
  }();
  return fields;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Sets one field by name; unknown keys raise ConfigError naming the key.
inline void set_config_value(TrackerConfig& cfg, const std::string& key, const std::string& value) {
  const auto& fields = detail::config_fields();
  const auto it = fields.find(key);
  if (it == fields.end()) throw ConfigError("unknown config key: " + key);
  it->second.set(cfg, value);
}

/// Parses `key = value` lines over the defaults. Blank lines and `#` comments are skipped.
inline TrackerConfig parse_config(std::istream& in, TrackerConfig base = {}) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    set_config_value(base, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  base.validate();
  return base;
}

inline TrackerConfig load_config(const std::string& path, TrackerConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_config(in, base);
}

inline std::string format_config(const TrackerConfig& cfg) {
  std::ostringstream os;
  for (const auto& [key, field] : detail::config_fields()) os << key << " = " << field.get(cfg) << '\n';
  return os.str();
}

/// Applies a comma-separated feature list ("gray,hog,cn,ch") as the enabled set.
inline void apply_feature_list(TrackerConfig& cfg, const std::string& list) {
  cfg.use_gray = cfg.use_hog = cfg.use_cn = cfg.use_ch = false;
  std::istringstream is(list);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    tok = detail::trim(tok);
    if (tok == "gray") cfg.use_gray = true;
    else if (tok == "hog") cfg.use_hog = true;
    else if (tok == "cn") cfg.use_cn = true;
    else if (tok == "ch") cfg.use_ch = true;
    else if (!tok.empty()) throw ConfigError("unknown feature: " + tok);
  }
  if (!cfg.any_feature()) throw ConfigError("feature list enables nothing");
}

}  // namespace etrack
