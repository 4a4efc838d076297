#pragma once

#include <functional>

#include "nvs/completer.hpp"

namespace nvs {

// Spherical cap of candidate camera positions around the scene center, all
// looking at it. Azimuth is measured in the horizontal plane from the
// reference viewing direction (positive = leftward, toward up x forward);
// elevation rises from the horizontal plane toward world up (-y). The
// elevation grid is half-open so the pole is never duplicated.
struct SearchSpace {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 1.0;
  double azimuth_min = -M_PI / 2.0;
  double azimuth_max = M_PI / 2.0;
  double elevation_min = 0.0;
  double elevation_max = M_PI / 2.0;
  int grid_azimuth = 12;
  int grid_elevation = 4;

  // Local frame: horizontal reference direction, its horizontal perpendicular,
  // and world up.
  Eigen::Vector3d h0 = Eigen::Vector3d(0.0, 0.0, 1.0);
  Eigen::Vector3d side = Eigen::Vector3d(1.0, 0.0, 0.0);
  Eigen::Vector3d up = Eigen::Vector3d(0.0, -1.0, 0.0);

  Eigen::Vector3d direction(double azimuth, double elevation) const;
  double grid_azimuth_at(int ia) const;
  double grid_elevation_at(int ie) const;
  Pose grid_pose(int ia, int ie) const;  // on-sphere pose looking at center
  int grid_size() const { return grid_azimuth * grid_elevation; }

  // Restricts the azimuth interval, keeping the frame and grid resolution.
  SearchSpace with_azimuth_range(double lo, double hi) const;
};

struct PlannerConfig {
  int max_steps = 3;             // N: the loop runs N+1 steps (while step <= N)
  int candidates_per_step = 5;   // K
  double threshold = 0.6;        // theta in (0, 1)
  int frames_per_segment = 25;   // L
  double neighborhood_deg = 30.0;
  int grid_azimuth = 12;
  int grid_elevation = 4;
  int splat_radius_px = 1;
  double voxel_rho = 0.0;
  uint64_t seed = 0;

  void validate() const;
};

// Audit trail of one planning step.
struct PlanStepRecord {
  int step = 0;
  Pose chosen_pose;
  int chosen_index = 0;
  std::vector<Pose> candidate_poses;
  std::vector<double> candidate_ratios;
  std::vector<double> candidate_utilities;
  Trajectory segment_trajectory;
  size_t cloud_size_after = 0;
  double coverage_after = std::numeric_limits<double>::quiet_NaN();  // set when a scene is known
};

struct PlanResult {
  ColoredPointCloud cloud;
  std::vector<PlanStepRecord> records;
  std::vector<Image> frames;
  // Pre-completion hole masks of each step's segment renders.
  std::vector<std::vector<HoleMask>> segment_masks;
};

// Builds the quarter-sphere search space from the reference render: the
// center is the unprojected center pixel, the radius its depth (median of
// finite depths when the center pixel is a hole). Throws DegenerateRender
// when the render has no finite depth at all.
SearchSpace build_search_space(const RenderOutput& reference_render, const Pose& reference_pose,
                               const CameraIntrinsics& k, int grid_azimuth = 12,
                               int grid_elevation = 4);

// Piecewise hole-ratio utility: ratio below the threshold counts as gain,
// above it as excess (1 - ratio); the boundary belongs to the first branch.
double utility(double ratio, double theta);

// Deterministic argmax of utility over ratios, ties to the lowest index.
std::pair<int, std::vector<double>> choose_best_utility(const std::vector<double>& ratios,
                                                        double theta);

// The K grid poses nearest to `current` on the sphere (the single nearest
// grid pose stands in for `current` itself and is excluded), spread across
// azimuth columns; expands past neighborhood_deg when too few poses qualify.
std::vector<Pose> sample_candidates(const SearchSpace& space, const Pose& current, int k_poses,
                                    double neighborhood_deg);

// Renders each candidate's hole mask and returns the utility argmax plus the
// per-candidate audit record.
std::pair<int, PlanStepRecord> select_nbv(const ColoredPointCloud& cloud,
                                          const std::vector<Pose>& candidates,
                                          const CameraIntrinsics& k, double theta,
                                          int splat_radius_px);

using StepObserver = std::function<void(int step, const ColoredPointCloud& cloud,
                                        PlanStepRecord& record)>;

// The full planning loop: iteratively samples candidates, picks the next
// best view, renders the interpolated segment, completes it, and fuses the
// completed frames back into the cloud. Runs max_steps + 1 iterations.
PlanResult plan_and_synthesize(const ColoredPointCloud& scene_init,
                               const std::pair<Image, Pose>& reference,
                               const CameraIntrinsics& k, const PlannerConfig& config,
                               const SearchSpace& space, ViewCompleter& completer,
                               const StepObserver& observer = {});

// Waypoints of the predefined circular baseline: the reference position
// rotated about the vertical axis through the center by i * step_deg
// (i = 1..steps), each looking at the center.
std::vector<Pose> circular_baseline_poses(const Pose& reference_pose, const SearchSpace& space,
                                          int steps, double step_deg);
Trajectory circular_baseline_trajectory(const Pose& reference_pose, const SearchSpace& space,
                                        int steps, double step_deg, const CameraIntrinsics& k);

// Runs the same render-complete-fuse pipeline as the planner along the fixed
// circular waypoints (no view selection). Produces steps * L frames.
PlanResult run_circular_baseline(const ColoredPointCloud& scene_init,
                                 const std::pair<Image, Pose>& reference,
                                 const CameraIntrinsics& k, const SearchSpace& space, int steps,
                                 double step_deg, int frames_per_segment, int splat_radius_px,
                                 double voxel_rho, ViewCompleter& completer,
                                 const StepObserver& observer = {});

}  // namespace nvs
