// etrack: track, evaluate, synthesize and self-check from the command line.
//
//   etrack track    --seq DIR --out FILE [--config FILE] [--cn-table FILE] [--features LIST]
//   etrack eval     --results FILE --gt FILE --out PREFIX
//   etrack synth    (--spec FILE | --scenario NAME) --out DIR [--seed N]
//   etrack selftest
//
// Exit status: 0 success, 1 usage error, 2 data error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "etrack/bench/metrics.hpp"
#include "etrack/bench/ope.hpp"
#include "etrack/bench/scenarios.hpp"
#include "etrack/bench/sequence.hpp"
#include "etrack/bench/synth.hpp"
#include "etrack/config.hpp"
#include "etrack/testing/selftest.hpp"

namespace fs = std::filesystem;
using namespace etrack;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kData = 2;

struct TrackArgs {
  std::string seq, out, config, cn_table, features;
};

struct EvalArgs {
  std::string results, gt, out;
};

struct SynthArgs {
  std::string spec, scenario, out;
  std::optional<std::uint64_t> seed;
};

std::string timing_path(const std::string& results) { return results + ".timing"; }

int run_track(const TrackArgs& a) {
  TrackerConfig cfg;
  if (!a.config.empty()) cfg = load_config(a.config);
  if (!a.features.empty()) {
    apply_feature_list(cfg, a.features);
    cfg.validate();
  }
  std::shared_ptr<const ColorNamesTable> table;
  if (!a.cn_table.empty()) table = std::make_shared<const ColorNamesTable>(ColorNamesTable::load(a.cn_table));

  const bench::Sequence seq = bench::load_sequence(a.seq);
  const bench::Trajectory traj = bench::run_ope(cfg, seq, table);
  bench::write_boxes(a.out, traj.boxes);

  // Timing lives in a sidecar so the results file itself stays deterministic.
  std::ofstream t(timing_path(a.out));
  t << "frames=" << traj.tracked_frames << "\nseconds=" << traj.seconds << "\nfps=" << traj.fps()
    << "\nskipped_updates=" << traj.skipped_updates() << '\n';
  std::printf("%s: %zu frames, %.1f fps, %zu skipped updates\n", seq.name.c_str(), seq.size(), traj.fps(),
              traj.skipped_updates());
  return kOk;
}

std::optional<double> read_fps(const std::string& results) {
  std::ifstream in(timing_path(results));
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("fps=", 0) == 0) return std::stod(line.substr(4));
  return std::nullopt;
}

void write_curve(const std::string& path, const std::vector<double>& thr, const std::vector<double>& val) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write " + path);
  out << "threshold,value\n";
  for (std::size_t i = 0; i < thr.size(); ++i) out << bench::format_number(thr[i]) << ',' << bench::format_number(val[i]) << '\n';
}

int run_eval(const EvalArgs& a) {
  const auto traj = bench::read_boxes(a.results);
  const auto gt = bench::read_boxes(a.gt);
  if (traj.size() != gt.size())
    throw LoadError(a.results + ": " + std::to_string(traj.size()) + " boxes but groundtruth has " +
                    std::to_string(gt.size()));
  const auto pc = bench::precision_curve(traj, gt);
  const auto sc = bench::success_curve(traj, gt);
  write_curve(a.out + "_precision.csv", pc.thresholds, pc.values);
  write_curve(a.out + "_success.csv", sc.thresholds, sc.values);
  const auto fps = read_fps(a.results);
  std::printf("precision@20=%.6f auc=%.6f fps=%s\n", pc.at20, sc.auc,
              fps ? bench::format_number(std::round(*fps * 10.0) / 10.0).c_str() : "n/a");
  return kOk;
}

const std::map<std::string, bench::SynthSpec (*)()>& scenario_table() {
  static const std::map<std::string, bench::SynthSpec (*)()> t = {
      {"translation", [] { return bench::scenarios::translation(); }},
      {"deformation", [] { return bench::scenarios::deformation(); }},
      {"illumination", [] { return bench::scenarios::illumination(); }},
      {"occlusion", [] { return bench::scenarios::occlusion(true); }},
      {"occlusion_control", [] { return bench::scenarios::occlusion(false); }},
      {"growth", [] { return bench::scenarios::growth(); }},
  };
  return t;
}

int run_synth(const SynthArgs& a) {
  bench::SynthSpec spec;
  if (!a.spec.empty()) {
    bench::SynthParams p = bench::load_synth_params(a.spec);
    if (a.seed) {
      p.base.seed = *a.seed;
      p.base.background_seed = *a.seed + 100;
    }
    spec = bench::expand(p);
  } else {
    const auto it = scenario_table().find(a.scenario);
    if (it == scenario_table().end()) throw SpecError("unknown scenario: " + a.scenario);
    spec = it->second();
    if (a.seed) {
      spec.seed = *a.seed;
      spec.background_seed = *a.seed + 100;
    }
  }
  const bench::Sequence seq = bench::gen_synthetic(spec);
  bench::save_sequence(seq, a.out);
  std::printf("%s: %zu frames written to %s\n", seq.name.c_str(), seq.size(), a.out.c_str());
  return kOk;
}

int run_selftest() {
  bool ok = true;
  for (const auto& r : testing::run_selftest()) {
    std::printf("%s\n", testing::format_result(r).c_str());
    ok = ok && r.passed;
  }
  return ok ? kOk : kData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"etrack: correlation-filter and color-histogram visual tracker"};
  app.require_subcommand(1);

  TrackArgs ta;
  auto* track = app.add_subcommand("track", "Track one sequence (OTB layout) and write 1-based x,y,w,h results");
  track->add_option("--seq", ta.seq, "Sequence directory with img/ and groundtruth_rect.txt")->required();
  track->add_option("--out", ta.out, "Results file")->required();
  track->add_option("--config", ta.config, "Tracker config file (key = value)");
  track->add_option("--cn-table", ta.cn_table, "Color Names table (32768 lines of 11 values)");
  track->add_option("--features", ta.features, "Enabled models, e.g. gray,hog,cn,ch");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Precision and success curves of a results file");
  eval->add_option("--results", ea.results, "Results file")->required();
  eval->add_option("--gt", ea.gt, "Groundtruth file")->required();
  eval->add_option("--out", ea.out, "Output prefix for the CSV curves")->required();

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Render a synthetic sequence");
  auto* spec_opt = synth->add_option("--spec", sa.spec, "Synthetic sequence description (key = value)");
  auto* scen_opt = synth->add_option("--scenario", sa.scenario,
                                     "Built-in scenario: translation, deformation, illumination, occlusion, "
                                     "occlusion_control, growth");
  spec_opt->excludes(scen_opt);
  synth->add_option("--out", sa.out, "Output directory")->required();
  synth->add_option("--seed", sa.seed, "Random seed (overrides the spec)");

  app.add_subcommand("selftest", "Run the oracle suites");

  try {
    app.parse(argc, argv);
    if (synth->parsed() && sa.spec.empty() && sa.scenario.empty())
      throw CLI::RequiredError("synth needs --spec or --scenario");
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (track->parsed()) return run_track(ta);
    if (eval->parsed()) return run_eval(ea);
    if (synth->parsed()) return run_synth(sa);
    return run_selftest();
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kData;
  }
}
