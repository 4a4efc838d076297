#pragma once

#include <json.hpp>

#include "nvs/planner.hpp"

namespace nvs {

using Json = nlohmann::json;

Json json_from_pose(const Pose& pose);
Pose pose_from_json(const Json& j);

Json json_from_intrinsics(const CameraIntrinsics& k);
CameraIntrinsics intrinsics_from_json(const Json& j);

// Trajectory document: {"intrinsics": {...}, "poses": [{rotation, translation}]}.
// Numbers are emitted with 17 significant digits so the file round-trips
// bit-exactly.
std::string trajectory_to_string(const Trajectory& traj);
void write_trajectory(const std::string& path, const Trajectory& traj);
Trajectory trajectory_from_string(const std::string& text);
Trajectory read_trajectory(const std::string& path);

Json json_from_planner_config(const PlannerConfig& config);
PlannerConfig planner_config_from_json(const Json& j);

// One object per planning step: ratios, utilities, chosen index, poses.
Json json_from_plan_records(const std::vector<PlanStepRecord>& records);

Json json_from_scene_recipe(const SceneRecipe& recipe);
SceneRecipe scene_recipe_from_json(const Json& j);

// Scene document: analytic primitives plus the recipe and reference pose,
// enough to rebuild oracles without the sampled cloud.
Json json_from_scene(const SyntheticScene& scene, const SceneRecipe& recipe);
SyntheticScene scene_from_json(const Json& j, SceneRecipe* recipe = nullptr);
void write_scene_json(const std::string& path, const SyntheticScene& scene,
                      const SceneRecipe& recipe);
SyntheticScene read_scene_json(const std::string& path, SceneRecipe* recipe = nullptr);

// Serializes non-finite reals as the string "inf"/"-inf" (JSON has no
// infinity); used by the eval report for PSNR.
Json json_from_metric(double value);

}  // namespace nvs
