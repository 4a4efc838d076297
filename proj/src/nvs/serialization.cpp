#include "nvs/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "nvs/image_io.hpp"

namespace nvs {
namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Eigen::Vector3d vec3_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw Error::validation("InvalidJson", "expected a 3-element array");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Json json_from_vec3(const Eigen::Vector3d& v) { return Json::array({v.x(), v.y(), v.z()}); }

}  // namespace

Json json_from_pose(const Pose& pose) {
  Json rot = Json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) rot.push_back(pose.rotation(r, c));
  }
  return Json{{"rotation", rot}, {"translation", json_from_vec3(pose.translation)}};
}

Pose pose_from_json(const Json& j) {
  const Json& rot = j.at("rotation");
  if (!rot.is_array() || rot.size() != 9) {
    throw Error::validation("InvalidJson", "pose rotation must have 9 row-major entries");
  }
  Pose pose;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) pose.rotation(r, c) = rot[3 * r + c].get<double>();
  }
  pose.translation = vec3_from_json(j.at("translation"));
  if (!is_valid_rotation(pose.rotation)) {
    throw Error::validation("InvalidRotation", "pose rotation is not orthonormal (det +1)");
  }
  return pose;
}

Json json_from_intrinsics(const CameraIntrinsics& k) {
  return Json{{"focal_px", k.focal_px}, {"cx", k.principal_x}, {"cy", k.principal_y},
              {"width", k.width},       {"height", k.height}};
}

CameraIntrinsics intrinsics_from_json(const Json& j) {
  CameraIntrinsics k(j.at("focal_px").get<double>(), j.at("cx").get<double>(),
                     j.at("cy").get<double>(), j.at("width").get<int>(),
                     j.at("height").get<int>());
  k.validate();
  return k;
}

std::string trajectory_to_string(const Trajectory& traj) {
  if (traj.poses.empty()) {
    throw Error::validation("EmptyInput", "cannot serialize an empty trajectory");
  }
  std::ostringstream out;
  const CameraIntrinsics& k = traj.intrinsics;
  out << "{\n  \"intrinsics\": {\"focal_px\": " << g17(k.focal_px)
      << ", \"cx\": " << g17(k.principal_x) << ", \"cy\": " << g17(k.principal_y)
      << ", \"width\": " << k.width << ", \"height\": " << k.height << "},\n  \"poses\": [\n";
  for (size_t i = 0; i < traj.poses.size(); ++i) {
    const Pose& p = traj.poses[i];
    out << "    {\"rotation\": [";
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        out << g17(p.rotation(r, c));
        if (r != 2 || c != 2) out << ", ";
      }
    }
    out << "], \"translation\": [" << g17(p.translation.x()) << ", " << g17(p.translation.y())
        << ", " << g17(p.translation.z()) << "]}";
    out << (i + 1 < traj.poses.size() ? ",\n" : "\n");
  }
  out << "  ]\n}\n";
  return out.str();
}

void write_trajectory(const std::string& path, const Trajectory& traj) {
  const std::string text = trajectory_to_string(traj);
  write_file(path, std::vector<uint8_t>(text.begin(), text.end()));
}

Trajectory trajectory_from_string(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error::validation("InvalidJson", std::string("trajectory parse error: ") + e.what());
  }
  Trajectory traj;
  traj.intrinsics = intrinsics_from_json(j.at("intrinsics"));
  for (const Json& jp : j.at("poses")) traj.poses.push_back(pose_from_json(jp));
  if (traj.poses.empty()) {
    throw Error::validation("EmptyInput", "trajectory file contains no poses");
  }
  return traj;
}

Trajectory read_trajectory(const std::string& path) {
  const std::vector<uint8_t> bytes = read_file(path);
  return trajectory_from_string(std::string(bytes.begin(), bytes.end()));
}

Json json_from_planner_config(const PlannerConfig& config) {
  return Json{{"N", config.max_steps},
              {"K", config.candidates_per_step},
              {"theta", config.threshold},
              {"L", config.frames_per_segment},
              {"neighborhood_deg", config.neighborhood_deg},
              {"grid_azimuth", config.grid_azimuth},
              {"grid_elevation", config.grid_elevation},
              {"splat_radius_px", config.splat_radius_px},
              {"voxel_rho", config.voxel_rho},
              {"seed", config.seed}};
}

PlannerConfig planner_config_from_json(const Json& j) {
  PlannerConfig config;
  config.max_steps = j.value("N", config.max_steps);
  config.candidates_per_step = j.value("K", config.candidates_per_step);
  config.threshold = j.value("theta", config.threshold);
  config.frames_per_segment = j.value("L", config.frames_per_segment);
  config.neighborhood_deg = j.value("neighborhood_deg", config.neighborhood_deg);
  config.grid_azimuth = j.value("grid_azimuth", config.grid_azimuth);
  config.grid_elevation = j.value("grid_elevation", config.grid_elevation);
  config.splat_radius_px = j.value("splat_radius_px", config.splat_radius_px);
  config.voxel_rho = j.value("voxel_rho", config.voxel_rho);
  config.seed = j.value("seed", config.seed);
  config.validate();
  return config;
}

Json json_from_plan_records(const std::vector<PlanStepRecord>& records) {
  Json out = Json::array();
  for (const PlanStepRecord& rec : records) {
    Json jr{{"step", rec.step},
            {"chosen_index", rec.chosen_index},
            {"chosen_pose", json_from_pose(rec.chosen_pose)},
            {"candidate_ratios", rec.candidate_ratios},
            {"candidate_utilities", rec.candidate_utilities},
            {"cloud_size_after", rec.cloud_size_after}};
    Json poses = Json::array();
    for (const Pose& p : rec.candidate_poses) poses.push_back(json_from_pose(p));
    jr["candidate_poses"] = poses;
    Json segment = Json::array();
    for (const Pose& p : rec.segment_trajectory.poses) segment.push_back(json_from_pose(p));
    jr["segment_poses"] = segment;
    if (std::isfinite(rec.coverage_after)) jr["coverage_after"] = rec.coverage_after;
    out.push_back(std::move(jr));
  }
  return out;
}

Json json_from_scene_recipe(const SceneRecipe& recipe) {
  return Json{{"recipe", recipe.name},
              {"density", recipe.density},
              {"seed", recipe.seed},
              {"scale", recipe.scale}};
}

SceneRecipe scene_recipe_from_json(const Json& j) {
  SceneRecipe recipe;
  recipe.name = j.at("recipe").get<std::string>();
  recipe.density = j.value("density", recipe.density);
  recipe.seed = j.value("seed", recipe.seed);
  recipe.scale = j.value("scale", recipe.scale);
  return recipe;
}

namespace {

Json json_from_color_field(const ColorField& tex) {
  Json wave = Json::array();
  for (const Eigen::Vector3d& w : tex.wave) wave.push_back(json_from_vec3(w));
  return Json{{"base", tex.base}, {"amp", tex.amp}, {"phase", tex.phase}, {"wave", wave}};
}

ColorField color_field_from_json(const Json& j) {
  ColorField tex;
  for (int c = 0; c < 3; ++c) {
    tex.base[c] = j.at("base")[c].get<double>();
    tex.amp[c] = j.at("amp")[c].get<double>();
    tex.phase[c] = j.at("phase")[c].get<double>();
    tex.wave[c] = vec3_from_json(j.at("wave")[c]);
  }
  return tex;
}

}  // namespace

Json json_from_scene(const SyntheticScene& scene, const SceneRecipe& recipe) {
  Json prims = Json::array();
  for (const Primitive& prim : scene.surfaces) {
    Json jp{{"texture", json_from_color_field(prim.texture)}};
    if (prim.kind == Primitive::Kind::box) {
      jp["kind"] = "box";
      jp["min"] = json_from_vec3(prim.box_min);
      jp["max"] = json_from_vec3(prim.box_max);
    } else {
      jp["kind"] = "sphere";
      jp["center"] = json_from_vec3(prim.center);
      jp["radius"] = prim.radius;
    }
    prims.push_back(std::move(jp));
  }
  return Json{{"recipe", json_from_scene_recipe(recipe)},
              {"reference_pose", json_from_pose(scene.reference_pose)},
              {"primitives", prims}};
}

SyntheticScene scene_from_json(const Json& j, SceneRecipe* recipe) {
  SyntheticScene scene;
  scene.reference_pose = pose_from_json(j.at("reference_pose"));
  for (const Json& jp : j.at("primitives")) {
    const std::string kind = jp.at("kind").get<std::string>();
    ColorField tex = color_field_from_json(jp.at("texture"));
    if (kind == "box") {
      scene.surfaces.push_back(
          Primitive::box(vec3_from_json(jp.at("min")), vec3_from_json(jp.at("max")), tex));
    } else if (kind == "sphere") {
      scene.surfaces.push_back(
          Primitive::sphere(vec3_from_json(jp.at("center")), jp.at("radius").get<double>(), tex));
    } else {
      throw Error::validation("InvalidJson", "unknown primitive kind: " + kind);
    }
  }
  if (recipe) *recipe = scene_recipe_from_json(j.at("recipe"));
  return scene;
}

void write_scene_json(const std::string& path, const SyntheticScene& scene,
                      const SceneRecipe& recipe) {
  const std::string text = json_from_scene(scene, recipe).dump(2) + "\n";
  write_file(path, std::vector<uint8_t>(text.begin(), text.end()));
}

SyntheticScene read_scene_json(const std::string& path, SceneRecipe* recipe) {
  const std::vector<uint8_t> bytes = read_file(path);
  Json j;
  try {
    j = Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::exception& e) {
    throw Error::validation("InvalidJson", std::string("scene parse error: ") + e.what());
  }
  return scene_from_json(j, recipe);
}

Json json_from_metric(double value) {
  if (std::isfinite(value)) return value;
  return value > 0 ? "inf" : "-inf";
}

}  // namespace nvs
