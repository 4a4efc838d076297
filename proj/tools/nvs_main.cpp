#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "nvs/commands.hpp"
#include "nvs/image_io.hpp"

namespace {

int exit_code_for(const nvs::Error& e) {
  switch (e.kind()) {
    case nvs::ErrorKind::validation:
      return 2;
    case nvs::ErrorKind::contract:
    case nvs::ErrorKind::protocol:
      return 3;
    case nvs::ErrorKind::transport:
      return 4;
    case nvs::ErrorKind::internal:
      return 5;
  }
  return 5;
}

nvs::Json parse_json_file(const std::string& path) {
  const auto bytes = nvs::read_file(path);
  try {
    return nvs::Json::parse(bytes.begin(), bytes.end());
  } catch (const nvs::Json::exception& e) {
    throw nvs::Error::validation("InvalidJson", path + ": " + e.what());
  }
}

nvs::CompleterChoice parse_completer(const std::string& name) {
  if (name == "passthrough") return nvs::CompleterChoice::passthrough;
  if (name == "oracle") return nvs::CompleterChoice::oracle;
  if (name == "remote") return nvs::CompleterChoice::remote;
  throw nvs::Error::validation("InvalidConfig", "unknown completer: " + name);
}

void add_completer_flags(CLI::App* cmd, std::string& completer, nvs::CompleterParams& params) {
  cmd->add_option("--completer", completer, "passthrough, oracle, or remote")
      ->check(CLI::IsMember({"passthrough", "oracle", "remote"}));
  cmd->add_option("--endpoint", params.endpoint, "completion service URL (remote)");
  cmd->add_option("--timeout-s", params.timeout_s, "remote request timeout in seconds");
  cmd->add_option("--scene", params.scene_path,
                  "surfaces.json (oracle completer input; enables coverage reporting)");
  cmd->add_option("--oracle-density", params.oracle_density, "oracle dense resampling density");
  cmd->add_option("--oracle-seed", params.oracle_seed, "oracle dense resampling seed");
}

void finalize_completer(const std::string& name, nvs::CompleterParams& params) {
  params.choice = parse_completer(name);
  if (const char* env = std::getenv("NVS_REMOTE_ENDPOINT"); env && *env) {
    params.endpoint = env;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point-cloud novel view synthesis planning toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", nvs::kToolVersion);

  // synth
  nvs::SynthParams synth;
  std::string synth_recipe_json;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic scene and reference view");
  auto* synth_recipe_opt =
      synth_cmd->add_option("--recipe", synth.recipe.name, "box_room, occluder, or spheres");
  synth_cmd->add_option("--recipe-json", synth_recipe_json,
                        "recipe document {recipe, density, seed, scale}");
  synth_cmd->add_option("--density", synth.recipe.density, "surface samples per unit area");
  synth_cmd->add_option("--seed", synth.recipe.seed, "sampling seed");
  synth_cmd->add_option("--scale", synth.recipe.scale, "scene scale factor");
  synth_cmd->add_option("--width", synth.width, "image width");
  synth_cmd->add_option("--height", synth.height, "image height");
  synth_cmd->add_option("--focal", synth.focal_px, "focal length in pixels");
  synth_cmd->add_option("--out", synth.out_dir, "output directory")->required();

  // render
  nvs::RenderParams render;
  auto* render_cmd = app.add_subcommand("render", "Render a trajectory from a point cloud");
  render_cmd->add_option("--cloud", render.cloud_path, "input PLY")->required();
  render_cmd->add_option("--traj", render.traj_path, "trajectory JSON")->required();
  render_cmd->add_option("--splat-radius", render.splat_radius_px, "splat radius in pixels");
  render_cmd->add_option("--out", render.out_dir, "output directory")->required();

  // plan
  nvs::PlanParams plan;
  std::string plan_completer = "passthrough";
  std::string plan_config_path;
  auto* plan_cmd = app.add_subcommand("plan", "Run NBV trajectory planning with view synthesis");
  plan_cmd->add_option("--cloud", plan.cloud_path, "initial cloud PLY")->required();
  plan_cmd->add_option("--ref-image", plan.ref_image_path, "reference image PNG")->required();
  plan_cmd->add_option("--ref-pose", plan.ref_pose_path, "reference pose trajectory JSON")
      ->required();
  plan_cmd->add_option("--config", plan_config_path, "planner config JSON");
  auto* opt_n = plan_cmd->add_option("--N", plan.config.max_steps, "max predicted poses");
  auto* opt_k = plan_cmd->add_option("--K", plan.config.candidates_per_step, "candidates per step");
  auto* opt_theta = plan_cmd->add_option("--theta", plan.config.threshold, "utility threshold");
  auto* opt_l = plan_cmd->add_option("--L", plan.config.frames_per_segment, "frames per segment");
  auto* opt_nbh =
      plan_cmd->add_option("--neighborhood-deg", plan.config.neighborhood_deg, "candidate radius");
  auto* opt_ga = plan_cmd->add_option("--grid-azimuth", plan.config.grid_azimuth, "azimuth grid");
  auto* opt_ge =
      plan_cmd->add_option("--grid-elevation", plan.config.grid_elevation, "elevation grid");
  auto* opt_sr =
      plan_cmd->add_option("--splat-radius", plan.config.splat_radius_px, "splat radius (px)");
  auto* opt_rho = plan_cmd->add_option("--voxel-rho", plan.config.voxel_rho,
                                       "fusion voxel dedup resolution (0 = off)");
  auto* opt_seed = plan_cmd->add_option("--seed", plan.config.seed, "run seed");
  plan_cmd->add_option("--halves", plan.halves, "left, right, or both")
      ->check(CLI::IsMember({"left", "right", "both"}));
  plan_cmd->add_flag("!--no-reset", plan.reset_between_halves,
                     "continue from the last pose instead of resetting between halves");
  plan_cmd->add_option("--coverage-samples", plan.coverage_samples, "coverage probe count");
  plan_cmd->add_option("--coverage-eps", plan.coverage_eps, "coverage distance threshold");
  add_completer_flags(plan_cmd, plan_completer, plan.completer);
  plan_cmd->add_option("--out", plan.out_dir, "output directory")->required();

  // baseline
  nvs::BaselineParams baseline;
  std::string baseline_completer = "passthrough";
  auto* baseline_cmd =
      app.add_subcommand("baseline", "Run the predefined circular trajectory baseline");
  baseline_cmd->add_option("--cloud", baseline.cloud_path, "initial cloud PLY")->required();
  baseline_cmd->add_option("--ref-image", baseline.ref_image_path, "reference image PNG")
      ->required();
  baseline_cmd->add_option("--ref-pose", baseline.ref_pose_path, "reference pose trajectory JSON")
      ->required();
  baseline_cmd->add_option("--steps", baseline.steps, "number of movements");
  baseline_cmd->add_option("--step-deg", baseline.step_deg,
                           "degrees per movement (positive = leftward)");
  baseline_cmd->add_option("--L", baseline.frames_per_segment, "frames per segment");
  baseline_cmd->add_option("--splat-radius", baseline.splat_radius_px, "splat radius (px)");
  baseline_cmd->add_option("--voxel-rho", baseline.voxel_rho, "fusion voxel dedup resolution");
  baseline_cmd->add_option("--coverage-samples", baseline.coverage_samples,
                           "coverage probe count");
  baseline_cmd->add_option("--coverage-eps", baseline.coverage_eps,
                           "coverage distance threshold");
  add_completer_flags(baseline_cmd, baseline_completer, baseline.completer);
  baseline_cmd->add_option("--out", baseline.out_dir, "output directory")->required();

  // eval
  nvs::EvalParams eval;
  auto* eval_cmd = app.add_subcommand("eval", "Pose, image, and coverage metrics");
  eval_cmd->add_option("--gen-traj", eval.gen_traj_path, "generated trajectory JSON");
  eval_cmd->add_option("--gt-traj", eval.gt_traj_path, "ground-truth trajectory JSON");
  eval_cmd->add_option("--gen-frames", eval.gen_frames_dir, "generated frames directory");
  eval_cmd->add_option("--gt-frames", eval.gt_frames_dir, "ground-truth frames directory");
  eval_cmd->add_option("--cloud", eval.cloud_path, "cloud PLY for coverage");
  eval_cmd->add_option("--scene", eval.scene_path, "surfaces.json for coverage");
  eval_cmd->add_option("--samples", eval.samples, "coverage probe count");
  eval_cmd->add_option("--eps", eval.eps, "coverage distance threshold");
  eval_cmd->add_option("--seed", eval.seed, "coverage probe seed");
  eval_cmd->add_option("--out", eval.out_dir, "output directory for report.json");

  // replay
  std::string replay_manifest;
  std::string replay_out;
  auto* replay_cmd =
      app.add_subcommand("replay", "Re-run a manifest and verify artifact hashes match");
  replay_cmd->add_option("--manifest", replay_manifest, "manifest.json to replay")->required();
  replay_cmd->add_option("--out", replay_out, "output directory for the replayed run")
      ->required();

  // serve
  std::string serve_host = "127.0.0.1";
  int serve_port = 8080;
  auto* serve_cmd =
      app.add_subcommand("serve", "Host a passthrough completion service on /v1/complete");
  serve_cmd->add_option("--host", serve_host, "bind address");
  serve_cmd->add_option("--port", serve_port, "bind port");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*synth_cmd) {
      if (!synth_recipe_json.empty()) {
        nvs::SceneRecipe file_recipe =
            nvs::scene_recipe_from_json(parse_json_file(synth_recipe_json));
        if (*synth_recipe_opt) file_recipe.name = synth.recipe.name;
        synth.recipe = file_recipe;
      } else if (!*synth_recipe_opt) {
        throw nvs::Error::validation("InvalidConfig", "synth needs --recipe or --recipe-json");
      }
      const nvs::RunManifest manifest = nvs::cmd_synth(synth);
      std::cout << "synth: " << manifest.artifacts.size() << " artifacts in " << synth.out_dir
                << "\n";
    } else if (*render_cmd) {
      const nvs::RunManifest manifest = nvs::cmd_render(render);
      std::cout << "render: " << manifest.artifacts.size() << " artifacts in " << render.out_dir
                << "\n";
    } else if (*plan_cmd) {
      if (!plan_config_path.empty()) {
        nvs::PlannerConfig file_config =
            nvs::planner_config_from_json(parse_json_file(plan_config_path));
        // Explicit flags win over the config file.
        nvs::PlannerConfig merged = file_config;
        if (*opt_n) merged.max_steps = plan.config.max_steps;
        if (*opt_k) merged.candidates_per_step = plan.config.candidates_per_step;
        if (*opt_theta) merged.threshold = plan.config.threshold;
        if (*opt_l) merged.frames_per_segment = plan.config.frames_per_segment;
        if (*opt_nbh) merged.neighborhood_deg = plan.config.neighborhood_deg;
        if (*opt_ga) merged.grid_azimuth = plan.config.grid_azimuth;
        if (*opt_ge) merged.grid_elevation = plan.config.grid_elevation;
        if (*opt_sr) merged.splat_radius_px = plan.config.splat_radius_px;
        if (*opt_rho) merged.voxel_rho = plan.config.voxel_rho;
        if (*opt_seed) merged.seed = plan.config.seed;
        plan.config = merged;
      }
      finalize_completer(plan_completer, plan.completer);
      const nvs::RunManifest manifest = nvs::cmd_plan(plan);
      std::cout << "plan: " << manifest.artifacts.size() << " artifacts in " << plan.out_dir
                << "\n";
    } else if (*baseline_cmd) {
      finalize_completer(baseline_completer, baseline.completer);
      const nvs::RunManifest manifest = nvs::cmd_baseline(baseline);
      std::cout << "baseline: " << manifest.artifacts.size() << " artifacts in "
                << baseline.out_dir << "\n";
    } else if (*eval_cmd) {
      const nvs::Json report = nvs::cmd_eval(eval);
      std::cout << report.dump(2) << "\n";
    } else if (*replay_cmd) {
      const nvs::ReplayOutcome outcome = nvs::cmd_replay(replay_manifest, replay_out);
      if (!outcome.identical) {
        for (const std::string& diff : outcome.differences) {
          std::cerr << "replay mismatch: " << diff << "\n";
        }
        return 5;
      }
      std::cout << "replay: byte-identical artifacts\n";
    } else if (*serve_cmd) {
      auto server =
          nvs::CompletionServer(std::make_shared<nvs::PassthroughCompleter>());
      server.start(serve_host, serve_port);
      std::cout << "serving /v1/complete on " << serve_host << ":" << server.port() << "\n";
      server.wait();
    }
  } catch (const nvs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 5;
  }
  return 0;
}
