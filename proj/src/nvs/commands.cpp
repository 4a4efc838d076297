#include "nvs/commands.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>

#include "nvs/image_io.hpp"

namespace nvs {
namespace fs = std::filesystem;

namespace {

class StageTimer {
 public:
  explicit StageTimer(RunManifest& manifest) : manifest_(manifest) {}
  void mark(const std::string& stage) {
    const auto now = std::chrono::steady_clock::now();
    manifest_.timings_ms[stage] =
        std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
  }

 private:
  RunManifest& manifest_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

// Writes out_dir-relative artifacts and records their hashes.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(const std::string& out_dir) : root_(out_dir) {
    fs::create_directories(root_);
  }

  void write_bytes(const std::string& rel, const std::vector<uint8_t>& bytes) {
    const fs::path path = root_ / rel;
    fs::create_directories(path.parent_path());
    write_file(path.string(), bytes);
    hashes_[rel] = sha256_hex(bytes);
  }

  void write_text(const std::string& rel, const std::string& text) {
    write_bytes(rel, std::vector<uint8_t>(text.begin(), text.end()));
  }

  void write_cloud(const std::string& rel, const ColoredPointCloud& cloud) {
    const fs::path path = root_ / rel;
    fs::create_directories(path.parent_path());
    write_ply(path.string(), cloud);
    hashes_[rel] = sha256_file(path.string());
  }

  std::string path_of(const std::string& rel) const { return (root_ / rel).string(); }
  const std::map<std::string, std::string>& hashes() const { return hashes_; }

 private:
  fs::path root_;
  std::map<std::string, std::string> hashes_;
};

Json json_from_completer_params(const CompleterParams& p) {
  const char* names[] = {"passthrough", "oracle", "remote"};
  return Json{{"choice", names[static_cast<int>(p.choice)]},
              {"endpoint", p.endpoint},
              {"timeout_s", p.timeout_s},
              {"oracle_density", p.oracle_density},
              {"oracle_seed", p.oracle_seed},
              {"scene_path", p.scene_path}};
}

CompleterParams completer_params_from_json(const Json& j) {
  CompleterParams p;
  const std::string choice = j.at("choice").get<std::string>();
  if (choice == "passthrough") {
    p.choice = CompleterChoice::passthrough;
  } else if (choice == "oracle") {
    p.choice = CompleterChoice::oracle;
  } else if (choice == "remote") {
    p.choice = CompleterChoice::remote;
  } else {
    throw Error::validation("InvalidConfig", "unknown completer choice: " + choice);
  }
  p.endpoint = j.value("endpoint", std::string());
  p.timeout_s = j.value("timeout_s", p.timeout_s);
  p.oracle_density = j.value("oracle_density", p.oracle_density);
  p.oracle_seed = j.value("oracle_seed", p.oracle_seed);
  p.scene_path = j.value("scene_path", std::string());
  return p;
}

Json json_from_synth_params(const SynthParams& p) {
  return Json{{"recipe", json_from_scene_recipe(p.recipe)},
              {"focal_px", p.focal_px},
              {"width", p.width},
              {"height", p.height}};
}

SynthParams synth_params_from_json(const Json& j) {
  SynthParams p;
  p.recipe = scene_recipe_from_json(j.at("recipe"));
  p.focal_px = j.at("focal_px").get<double>();
  p.width = j.at("width").get<int>();
  p.height = j.at("height").get<int>();
  return p;
}

Json json_from_render_params(const RenderParams& p) {
  return Json{{"cloud", p.cloud_path}, {"trajectory", p.traj_path},
              {"splat_radius_px", p.splat_radius_px}};
}

RenderParams render_params_from_json(const Json& j) {
  RenderParams p;
  p.cloud_path = j.at("cloud").get<std::string>();
  p.traj_path = j.at("trajectory").get<std::string>();
  p.splat_radius_px = j.value("splat_radius_px", p.splat_radius_px);
  return p;
}

Json json_from_plan_params(const PlanParams& p) {
  return Json{{"cloud", p.cloud_path},
              {"ref_image", p.ref_image_path},
              {"ref_pose", p.ref_pose_path},
              {"config", json_from_planner_config(p.config)},
              {"completer", json_from_completer_params(p.completer)},
              {"halves", p.halves},
              {"reset_between_halves", p.reset_between_halves},
              {"coverage_samples", p.coverage_samples},
              {"coverage_eps", p.coverage_eps}};
}

PlanParams plan_params_from_json(const Json& j) {
  PlanParams p;
  p.cloud_path = j.at("cloud").get<std::string>();
  p.ref_image_path = j.at("ref_image").get<std::string>();
  p.ref_pose_path = j.at("ref_pose").get<std::string>();
  p.config = planner_config_from_json(j.at("config"));
  p.completer = completer_params_from_json(j.at("completer"));
  p.halves = j.value("halves", p.halves);
  p.reset_between_halves = j.value("reset_between_halves", p.reset_between_halves);
  p.coverage_samples = j.value("coverage_samples", p.coverage_samples);
  p.coverage_eps = j.value("coverage_eps", p.coverage_eps);
  return p;
}

Json json_from_baseline_params(const BaselineParams& p) {
  return Json{{"cloud", p.cloud_path},
              {"ref_image", p.ref_image_path},
              {"ref_pose", p.ref_pose_path},
              {"steps", p.steps},
              {"step_deg", p.step_deg},
              {"L", p.frames_per_segment},
              {"splat_radius_px", p.splat_radius_px},
              {"voxel_rho", p.voxel_rho},
              {"completer", json_from_completer_params(p.completer)},
              {"coverage_samples", p.coverage_samples},
              {"coverage_eps", p.coverage_eps}};
}

BaselineParams baseline_params_from_json(const Json& j) {
  BaselineParams p;
  p.cloud_path = j.at("cloud").get<std::string>();
  p.ref_image_path = j.at("ref_image").get<std::string>();
  p.ref_pose_path = j.at("ref_pose").get<std::string>();
  p.steps = j.at("steps").get<int>();
  p.step_deg = j.at("step_deg").get<double>();
  p.frames_per_segment = j.value("L", p.frames_per_segment);
  p.splat_radius_px = j.value("splat_radius_px", p.splat_radius_px);
  p.voxel_rho = j.value("voxel_rho", p.voxel_rho);
  p.completer = completer_params_from_json(j.at("completer"));
  p.coverage_samples = j.value("coverage_samples", p.coverage_samples);
  p.coverage_eps = j.value("coverage_eps", p.coverage_eps);
  return p;
}

Json json_from_eval_params(const EvalParams& p) {
  return Json{{"gen_traj", p.gen_traj_path}, {"gt_traj", p.gt_traj_path},
              {"gen_frames", p.gen_frames_dir}, {"gt_frames", p.gt_frames_dir},
              {"cloud", p.cloud_path},     {"scene", p.scene_path},
              {"samples", p.samples},      {"eps", p.eps},
              {"seed", p.seed}};
}

EvalParams eval_params_from_json(const Json& j) {
  EvalParams p;
  p.gen_traj_path = j.value("gen_traj", std::string());
  p.gt_traj_path = j.value("gt_traj", std::string());
  p.gen_frames_dir = j.value("gen_frames", std::string());
  p.gt_frames_dir = j.value("gt_frames", std::string());
  p.cloud_path = j.value("cloud", std::string());
  p.scene_path = j.value("scene", std::string());
  p.samples = j.value("samples", p.samples);
  p.eps = j.value("eps", p.eps);
  p.seed = j.value("seed", p.seed);
  return p;
}

std::string frame_rel(const std::string& prefix, int step, const char* kind, int index,
                      const char* ext) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%sstep_%02d/%s_%03d.%s", prefix.c_str(), step, kind, index,
                ext);
  return buf;
}

void write_plan_result_artifacts(ArtifactWriter& writer, const std::string& prefix,
                                 const PlanResult& result) {
  for (size_t step = 0; step < result.segment_masks.size(); ++step) {
    const size_t L = result.segment_masks[step].size();
    for (size_t i = 0; i < L; ++i) {
      writer.write_bytes(frame_rel(prefix, static_cast<int>(step), "frame", static_cast<int>(i), "png"),
                         encode_image_png(result.frames[step * L + i]));
      writer.write_bytes(frame_rel(prefix, static_cast<int>(step), "mask", static_cast<int>(i), "png"),
                         encode_mask_png(result.segment_masks[step][i]));
    }
  }
}

}  // namespace

std::unique_ptr<ViewCompleter> make_completer(const CompleterParams& params,
                                              std::optional<SyntheticScene>& scene_out) {
  if (!params.scene_path.empty()) scene_out = read_scene_json(params.scene_path);
  switch (params.choice) {
    case CompleterChoice::passthrough:
      return std::make_unique<PassthroughCompleter>();
    case CompleterChoice::oracle:
      if (!scene_out) {
        throw Error::validation("InvalidConfig", "oracle completer requires --scene");
      }
      return std::make_unique<OracleCompleter>(*scene_out, params.oracle_density,
                                               params.oracle_seed);
    case CompleterChoice::remote:
      if (params.endpoint.empty()) {
        throw Error::validation("InvalidConfig", "remote completer requires --endpoint");
      }
      return std::make_unique<RemoteCompleter>(RemoteConfig{params.endpoint, params.timeout_s, 0});
  }
  throw Error::internal("InvalidConfig", "unreachable completer choice");
}

RunManifest cmd_synth(const SynthParams& params) {
  // Validate everything before any file is created.
  if (!(params.recipe.density > 0.0)) {
    throw Error::validation("InvalidDensity", "density must be > 0");
  }
  const CameraIntrinsics k(params.focal_px, params.width, params.height);
  k.validate();
  const SyntheticScene scene = make_synthetic_scene(params.recipe);

  RunManifest manifest;
  manifest.tool_version = kToolVersion;
  manifest.command = "synth";
  manifest.seed = params.recipe.seed;
  manifest.params = json_from_synth_params(params);
  StageTimer timer(manifest);

  ArtifactWriter writer(params.out_dir);
  writer.write_cloud("scene.ply", scene.cloud);
  writer.write_text("surfaces.json", json_from_scene(scene, params.recipe).dump(2) + "\n");
  timer.mark("scene");

  // Reference view: analytic render plus the point-map derived initial cloud.
  Image ref_rgb;
  DepthMap ref_depth;
  HoleMask ref_mask;
  render_scene_analytic(scene, scene.reference_pose, k, ref_rgb, ref_depth, ref_mask);
  writer.write_bytes("ref_rgb.png", encode_image_png(ref_rgb));
  writer.write_bytes("ref_depth.pfm", encode_depth_pfm(ref_depth));
  writer.write_bytes("ref_mask.png", encode_mask_png(ref_mask));

  const PointMap pm = pointmap_from_scene(scene, scene.reference_pose, k);
  const ColoredPointCloud init_cloud = cloud_from_pointmaps({{pm, scene.reference_pose}});
  writer.write_cloud("init_cloud.ply", init_cloud);

  Trajectory ref_traj;
  ref_traj.intrinsics = k;
  ref_traj.poses.push_back(scene.reference_pose);
  writer.write_text("ref_pose.json", trajectory_to_string(ref_traj));
  timer.mark("reference");

  manifest.artifacts = writer.hashes();
  manifest.save(writer.path_of("manifest.json"));
  return manifest;
}

RunManifest cmd_render(const RenderParams& params) {
  const ColoredPointCloud cloud = read_ply(params.cloud_path);
  const Trajectory traj = read_trajectory(params.traj_path);
  if (params.splat_radius_px < 0) {
    throw Error::validation("InvalidConfig", "splat radius must be >= 0");
  }

  RunManifest manifest;
  manifest.tool_version = kToolVersion;
  manifest.command = "render";
  manifest.params = json_from_render_params(params);
  manifest.add_input("cloud", params.cloud_path);
  manifest.add_input("trajectory", params.traj_path);
  StageTimer timer(manifest);

  ArtifactWriter writer(params.out_dir);
  const std::vector<RenderOutput> renders = render_trajectory(cloud, traj, params.splat_radius_px);
  for (size_t i = 0; i < renders.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "frames/frame_%03d.png", static_cast<int>(i));
    writer.write_bytes(buf, encode_image_png(renders[i].rgb));
    std::snprintf(buf, sizeof(buf), "masks/mask_%03d.png", static_cast<int>(i));
    writer.write_bytes(buf, encode_mask_png(renders[i].mask));
    std::snprintf(buf, sizeof(buf), "depth/depth_%03d.pfm", static_cast<int>(i));
    writer.write_bytes(buf, encode_depth_pfm(renders[i].depth));
  }
  timer.mark("render");

  manifest.artifacts = writer.hashes();
  manifest.save(writer.path_of("manifest.json"));
  return manifest;
}

RunManifest cmd_plan(const PlanParams& params) {
  params.config.validate();
  if (params.halves != "left" && params.halves != "right" && params.halves != "both") {
    throw Error::validation("InvalidConfig", "halves must be left, right, or both");
  }

  const ColoredPointCloud init_cloud = read_ply(params.cloud_path);
  const Image ref_image = read_image_png(params.ref_image_path);
  const Trajectory ref_traj = read_trajectory(params.ref_pose_path);
  const CameraIntrinsics& k = ref_traj.intrinsics;
  const Pose ref_pose = ref_traj.poses.front();
  if (ref_image.width != k.width || ref_image.height != k.height) {
    throw Error::validation("ShapeMismatch", "reference image does not match intrinsics");
  }

  std::optional<SyntheticScene> scene;
  std::unique_ptr<ViewCompleter> completer = make_completer(params.completer, scene);

  RunManifest manifest;
  manifest.tool_version = kToolVersion;
  manifest.command = "plan";
  manifest.seed = params.config.seed;
  manifest.params = json_from_plan_params(params);
  manifest.add_input("cloud", params.cloud_path);
  manifest.add_input("ref_image", params.ref_image_path);
  manifest.add_input("ref_pose", params.ref_pose_path);
  if (!params.completer.scene_path.empty()) {
    manifest.add_input("scene", params.completer.scene_path);
  }
  StageTimer timer(manifest);

  const RenderOutput reference_render =
      render(init_cloud, ref_pose, k, params.config.splat_radius_px);
  const SearchSpace full_space = build_search_space(reference_render, ref_pose, k,
                                                    params.config.grid_azimuth,
                                                    params.config.grid_elevation);
  timer.mark("search_space");

  std::vector<std::string> halves;
  if (params.halves == "both") {
    halves = {"left", "right"};
  } else {
    halves = {params.halves};
  }

  ArtifactWriter writer(params.out_dir);
  Json records = Json::array();
  ColoredPointCloud cloud = init_cloud;
  std::pair<Image, Pose> reference{ref_image, ref_pose};

  StepObserver observer;
  if (scene) {
    observer = [&](int, const ColoredPointCloud& c, PlanStepRecord& rec) {
      rec.coverage_after =
          surface_coverage(c, *scene, params.coverage_samples, params.coverage_eps,
                           params.config.seed);
    };
  }

  for (const std::string& half : halves) {
    const SearchSpace space = half == "left" ? full_space.with_azimuth_range(0.0, M_PI / 2.0)
                                             : full_space.with_azimuth_range(-M_PI / 2.0, 0.0);
    PlanResult result =
        plan_and_synthesize(cloud, reference, k, params.config, space, *completer, observer);
    write_plan_result_artifacts(writer, half + "/", result);

    Json half_records = json_from_plan_records(result.records);
    for (Json& jr : half_records) {
      jr["half"] = half;
      records.push_back(std::move(jr));
    }

    cloud = std::move(result.cloud);
    if (!params.reset_between_halves && !result.records.empty()) {
      reference = {result.frames.back(), result.records.back().chosen_pose};
    }
    timer.mark("plan_" + half);
  }

  writer.write_cloud("fused.ply", cloud);
  writer.write_text("plan_records.json", records.dump(2) + "\n");
  timer.mark("write");

  manifest.artifacts = writer.hashes();
  manifest.save(writer.path_of("manifest.json"));
  return manifest;
}

RunManifest cmd_baseline(const BaselineParams& params) {
  if (params.steps < 1) throw Error::validation("InvalidConfig", "steps must be >= 1");
  if (params.frames_per_segment < 2) {
    throw Error::validation("InvalidConfig", "L must be >= 2");
  }

  const ColoredPointCloud init_cloud = read_ply(params.cloud_path);
  const Image ref_image = read_image_png(params.ref_image_path);
  const Trajectory ref_traj = read_trajectory(params.ref_pose_path);
  const CameraIntrinsics& k = ref_traj.intrinsics;
  const Pose ref_pose = ref_traj.poses.front();

  std::optional<SyntheticScene> scene;
  std::unique_ptr<ViewCompleter> completer = make_completer(params.completer, scene);

  RunManifest manifest;
  manifest.tool_version = kToolVersion;
  manifest.command = "baseline";
  manifest.params = json_from_baseline_params(params);
  manifest.add_input("cloud", params.cloud_path);
  manifest.add_input("ref_image", params.ref_image_path);
  manifest.add_input("ref_pose", params.ref_pose_path);
  if (!params.completer.scene_path.empty()) {
    manifest.add_input("scene", params.completer.scene_path);
  }
  StageTimer timer(manifest);

  const RenderOutput reference_render = render(init_cloud, ref_pose, k, params.splat_radius_px);
  const SearchSpace space =
      build_search_space(reference_render, ref_pose, k);
  timer.mark("search_space");

  StepObserver observer;
  if (scene) {
    observer = [&](int, const ColoredPointCloud& c, PlanStepRecord& rec) {
      rec.coverage_after = surface_coverage(c, *scene, params.coverage_samples,
                                            params.coverage_eps, /*seed=*/0);
    };
  }

  PlanResult result = run_circular_baseline(
      init_cloud, {ref_image, ref_pose}, k, space, params.steps, params.step_deg,
      params.frames_per_segment, params.splat_radius_px, params.voxel_rho, *completer, observer);

  ArtifactWriter writer(params.out_dir);
  write_plan_result_artifacts(writer, "", result);
  writer.write_cloud("fused.ply", result.cloud);
  writer.write_text(
      "trajectory.json",
      trajectory_to_string(circular_baseline_trajectory(ref_pose, space, params.steps,
                                                        params.step_deg, k)));
  Json records = json_from_plan_records(result.records);
  writer.write_text("plan_records.json", records.dump(2) + "\n");
  timer.mark("baseline");

  manifest.artifacts = writer.hashes();
  manifest.save(writer.path_of("manifest.json"));
  return manifest;
}

namespace {

std::vector<std::string> sorted_pngs(const std::string& dir) {
  std::vector<std::string> out;
  if (!fs::is_directory(dir)) {
    throw Error::validation("IoFailure", dir + " is not a directory");
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      out.push_back(entry.path().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Json cmd_eval(const EvalParams& params, RunManifest* manifest_out) {
  Json report = Json::object();
  RunManifest manifest;
  manifest.tool_version = kToolVersion;
  manifest.command = "eval";
  manifest.seed = params.seed;
  manifest.params = json_from_eval_params(params);

  const bool have_traj = !params.gen_traj_path.empty() || !params.gt_traj_path.empty();
  const bool have_frames = !params.gen_frames_dir.empty() || !params.gt_frames_dir.empty();
  const bool have_coverage = !params.cloud_path.empty() || !params.scene_path.empty();
  if (!have_traj && !have_frames && !have_coverage) {
    throw Error::validation("InvalidConfig",
                            "eval needs trajectories, frame directories, or cloud+scene");
  }

  if (have_traj) {
    if (params.gen_traj_path.empty() || params.gt_traj_path.empty()) {
      throw Error::validation("InvalidConfig", "trajectory eval needs both gen and gt files");
    }
    manifest.add_input("gen_traj", params.gen_traj_path);
    manifest.add_input("gt_traj", params.gt_traj_path);
    const NormalizedTrajectory gen = normalize_trajectory(read_trajectory(params.gen_traj_path));
    const NormalizedTrajectory gt = normalize_trajectory(read_trajectory(params.gt_traj_path));
    const std::vector<double> r = per_frame_rotation_distance(gen, gt);
    const std::vector<double> t = per_frame_translation_distance(gen, gt);
    double r_sum = 0.0;
    double t_sum = 0.0;
    Json per_frame = Json::array();
    for (size_t i = 0; i < r.size(); ++i) {
      r_sum += r[i];
      t_sum += t[i];
      per_frame.push_back(Json{{"r_dist", r[i]}, {"t_dist", t[i]}});
    }
    report["r_dist"] = r_sum;
    report["t_dist"] = t_sum;
    report["r_dist_mean"] = r_sum / static_cast<double>(r.size());
    report["t_dist_mean"] = t_sum / static_cast<double>(t.size());
    report["per_frame"] = per_frame;
  }

  if (have_frames) {
    if (params.gen_frames_dir.empty() || params.gt_frames_dir.empty()) {
      throw Error::validation("InvalidConfig", "frame eval needs both gen and gt directories");
    }
    const std::vector<std::string> gen_files = sorted_pngs(params.gen_frames_dir);
    const std::vector<std::string> gt_files = sorted_pngs(params.gt_frames_dir);
    if (gen_files.size() != gt_files.size()) {
      throw Error::validation("LengthMismatch",
                              "frame counts differ: " + std::to_string(gen_files.size()) + " vs " +
                                  std::to_string(gt_files.size()));
    }
    Json psnrs = Json::array();
    for (size_t i = 0; i < gen_files.size(); ++i) {
      const Image a = read_image_png(gen_files[i]);
      const Image b = read_image_png(gt_files[i]);
      if (!a.same_shape(b)) {
        throw Error::validation("ShapeMismatch", "frame " + std::to_string(i) + " shape differs");
      }
      psnrs.push_back(json_from_metric(psnr(a, b)));
    }
    report["psnr"] = psnrs;
  }

  if (have_coverage) {
    if (params.cloud_path.empty() || params.scene_path.empty()) {
      throw Error::validation("InvalidConfig", "coverage eval needs both --cloud and --scene");
    }
    manifest.add_input("cloud", params.cloud_path);
    manifest.add_input("scene", params.scene_path);
    const ColoredPointCloud cloud = read_ply(params.cloud_path);
    const SyntheticScene scene = read_scene_json(params.scene_path);
    report["coverage"] = surface_coverage(cloud, scene, params.samples, params.eps, params.seed);
  }

  if (!params.out_dir.empty()) {
    ArtifactWriter writer(params.out_dir);
    writer.write_text("report.json", report.dump(2) + "\n");
    manifest.artifacts = writer.hashes();
    manifest.save(writer.path_of("manifest.json"));
  }
  if (manifest_out) *manifest_out = manifest;
  return report;
}

ReplayOutcome cmd_replay(const std::string& manifest_path, const std::string& out_dir) {
  const RunManifest recorded = RunManifest::load(manifest_path);

  for (const auto& [name, entry] : recorded.inputs) {
    const std::string path = entry.at("path").get<std::string>();
    const std::string expected = entry.at("sha256").get<std::string>();
    const std::string actual = sha256_file(path);
    if (actual != expected) {
      throw Error::validation("InputChanged",
                              "input '" + name + "' (" + path + ") no longer matches the manifest");
    }
  }

  RunManifest replayed;
  if (recorded.command == "synth") {
    SynthParams p = synth_params_from_json(recorded.params);
    p.out_dir = out_dir;
    replayed = cmd_synth(p);
  } else if (recorded.command == "render") {
    RenderParams p = render_params_from_json(recorded.params);
    p.out_dir = out_dir;
    replayed = cmd_render(p);
  } else if (recorded.command == "plan") {
    PlanParams p = plan_params_from_json(recorded.params);
    p.out_dir = out_dir;
    replayed = cmd_plan(p);
  } else if (recorded.command == "baseline") {
    BaselineParams p = baseline_params_from_json(recorded.params);
    p.out_dir = out_dir;
    replayed = cmd_baseline(p);
  } else if (recorded.command == "eval") {
    EvalParams p = eval_params_from_json(recorded.params);
    p.out_dir = out_dir;
    cmd_eval(p, &replayed);
  } else {
    throw Error::validation("InvalidConfig", "unknown command in manifest: " + recorded.command);
  }

  ReplayOutcome outcome;
  for (const auto& [rel, sha] : recorded.artifacts) {
    const auto it = replayed.artifacts.find(rel);
    if (it == replayed.artifacts.end()) {
      outcome.identical = false;
      outcome.differences.push_back("missing artifact: " + rel);
    } else if (it->second != sha) {
      outcome.identical = false;
      outcome.differences.push_back("hash mismatch: " + rel);
    }
  }
  for (const auto& [rel, sha] : replayed.artifacts) {
    if (!recorded.artifacts.count(rel)) {
      outcome.identical = false;
      outcome.differences.push_back("new artifact: " + rel);
    }
  }
  return outcome;
}

}  // namespace nvs
