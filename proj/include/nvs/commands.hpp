#pragma once

#include "nvs/manifest.hpp"
#include "nvs/metrics.hpp"
#include "nvs/remote.hpp"

namespace nvs {

inline constexpr const char* kToolVersion = "nvs 0.1.0";

// Scene synthesis: ground-truth cloud + surfaces, the reference view
// (analytic render + point map derived initial cloud), and the reference
// pose file.
struct SynthParams {
  SceneRecipe recipe;
  double focal_px = 128.0;
  int width = 128;
  int height = 128;
  std::string out_dir;
};
RunManifest cmd_synth(const SynthParams& params);

struct RenderParams {
  std::string cloud_path;
  std::string traj_path;
  int splat_radius_px = 1;
  std::string out_dir;
};
RunManifest cmd_render(const RenderParams& params);

enum class CompleterChoice { passthrough, oracle, remote };

struct CompleterParams {
  CompleterChoice choice = CompleterChoice::passthrough;
  std::string endpoint;            // remote
  double timeout_s = 30.0;         // remote
  double oracle_density = 20000.0; // oracle: dense resampling density
  uint64_t oracle_seed = 1234;     // oracle: dense resampling seed
  std::string scene_path;          // oracle input; also enables coverage reporting
};

// Builds the configured completer; loads the scene (when given) into
// scene_out for oracle construction and coverage instrumentation.
std::unique_ptr<ViewCompleter> make_completer(const CompleterParams& params,
                                              std::optional<SyntheticScene>& scene_out);

struct PlanParams {
  std::string cloud_path;
  std::string ref_image_path;
  std::string ref_pose_path;
  PlannerConfig config;
  CompleterParams completer;
  std::string halves = "both";  // left | right | both
  bool reset_between_halves = true;
  int coverage_samples = 20000;
  double coverage_eps = 0.05;
  std::string out_dir;
};
RunManifest cmd_plan(const PlanParams& params);

struct BaselineParams {
  std::string cloud_path;
  std::string ref_image_path;
  std::string ref_pose_path;
  int steps = 3;
  double step_deg = 20.0;  // positive = leftward
  int frames_per_segment = 25;
  int splat_radius_px = 1;
  double voxel_rho = 0.0;
  CompleterParams completer;
  int coverage_samples = 20000;
  double coverage_eps = 0.05;
  std::string out_dir;
};
RunManifest cmd_baseline(const BaselineParams& params);

// Metric dispatch: any combination of trajectory pair, frame directory pair,
// and cloud+scene coverage; writes report.json.
struct EvalParams {
  std::string gen_traj_path;
  std::string gt_traj_path;
  std::string gen_frames_dir;
  std::string gt_frames_dir;
  std::string cloud_path;
  std::string scene_path;
  int samples = 20000;
  double eps = 0.05;
  uint64_t seed = 0;
  std::string out_dir;
};
Json cmd_eval(const EvalParams& params, RunManifest* manifest_out = nullptr);

struct ReplayOutcome {
  bool identical = true;
  std::vector<std::string> differences;
};
// Re-runs the manifest's command with identical parameters into out_dir and
// compares artifact hashes.
ReplayOutcome cmd_replay(const std::string& manifest_path, const std::string& out_dir);

}  // namespace nvs
