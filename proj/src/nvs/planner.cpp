#include "nvs/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nvs {

Eigen::Vector3d SearchSpace::direction(double azimuth, double elevation) const {
  return std::cos(elevation) * (std::cos(azimuth) * h0 + std::sin(azimuth) * side) +
         std::sin(elevation) * up;
}

double SearchSpace::grid_azimuth_at(int ia) const {
  if (grid_azimuth == 1) return 0.5 * (azimuth_min + azimuth_max);
  return azimuth_min + (azimuth_max - azimuth_min) * ia / (grid_azimuth - 1);
}

double SearchSpace::grid_elevation_at(int ie) const {
  return elevation_min + (elevation_max - elevation_min) * ie / grid_elevation;
}

Pose SearchSpace::grid_pose(int ia, int ie) const {
  const Eigen::Vector3d pos =
      center + radius * direction(grid_azimuth_at(ia), grid_elevation_at(ie));
  return look_at(pos, center, up);
}

SearchSpace SearchSpace::with_azimuth_range(double lo, double hi) const {
  SearchSpace out = *this;
  out.azimuth_min = lo;
  out.azimuth_max = hi;
  return out;
}

void PlannerConfig::validate() const {
  if (max_steps < 0) throw Error::validation("InvalidConfig", "N must be >= 0");
  if (candidates_per_step < 1) throw Error::validation("InvalidConfig", "K must be >= 1");
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error::validation("InvalidConfig", "theta must lie in (0, 1)");
  }
  if (frames_per_segment < 2) throw Error::validation("InvalidConfig", "L must be >= 2");
  if (!(neighborhood_deg > 0.0)) {
    throw Error::validation("InvalidConfig", "neighborhood_deg must be > 0");
  }
  if (grid_azimuth < 1 || grid_elevation < 1) {
    throw Error::validation("InvalidConfig", "grid resolution must be >= 1");
  }
  if (splat_radius_px < 0) throw Error::validation("InvalidConfig", "splat radius must be >= 0");
  if (voxel_rho < 0.0) throw Error::validation("InvalidConfig", "voxel_rho must be >= 0");
}

SearchSpace build_search_space(const RenderOutput& reference_render, const Pose& reference_pose,
                               const CameraIntrinsics& k, int grid_azimuth, int grid_elevation) {
  const int cx = k.width / 2;
  const int cy = k.height / 2;
  double depth;
  if (!reference_render.mask.at(cy, cx)) {
    depth = reference_render.depth.at(cy, cx);
  } else {
    std::vector<float> finite;
    for (float d : reference_render.depth.data) {
      if (std::isfinite(d)) finite.push_back(d);
    }
    if (finite.empty()) {
      throw Error::validation("DegenerateRender", "reference render has no covered pixels");
    }
    std::sort(finite.begin(), finite.end());
    const size_t n = finite.size();
    depth = n % 2 == 1 ? finite[n / 2] : 0.5 * (double(finite[n / 2 - 1]) + double(finite[n / 2]));
  }

  SearchSpace space;
  space.center = unproject(cx, cy, depth, reference_pose, k);
  space.radius = depth;
  space.grid_azimuth = grid_azimuth;
  space.grid_elevation = grid_elevation;
  space.up = Eigen::Vector3d(0.0, -1.0, 0.0);

  const Eigen::Vector3d r0 = reference_pose.translation - space.center;
  Eigen::Vector3d h = r0 - r0.dot(space.up) * space.up;
  if (h.norm() < 1e-9) h = Eigen::Vector3d(1.0, 0.0, 0.0);  // reference looks straight down/up
  space.h0 = h.normalized();
  space.side = space.up.cross(space.h0);
  return space;
}

double utility(double ratio, double theta) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) {
    throw Error::validation("InvalidRatio", "hole ratio must lie in [0, 1]");
  }
  if (!(theta > 0.0 && theta < 1.0)) {
    throw Error::validation("InvalidConfig", "theta must lie in (0, 1)");
  }
  return ratio <= theta ? ratio : 1.0 - ratio;
}

std::pair<int, std::vector<double>> choose_best_utility(const std::vector<double>& ratios,
                                                        double theta) {
  if (ratios.empty()) {
    throw Error::validation("EmptyInput", "no candidate ratios");
  }
  std::vector<double> utilities;
  utilities.reserve(ratios.size());
  for (double r : ratios) utilities.push_back(utility(r, theta));
  int best = 0;
  for (int i = 1; i < static_cast<int>(utilities.size()); ++i) {
    if (utilities[i] > utilities[best]) best = i;
  }
  return {best, std::move(utilities)};
}

std::vector<Pose> sample_candidates(const SearchSpace& space, const Pose& current, int k_poses,
                                    double neighborhood_deg) {
  if (k_poses < 1) throw Error::validation("InvalidConfig", "K must be >= 1");
  const int total = space.grid_size();
  if (k_poses > total - 1) {
    throw Error::validation("NotEnoughCandidates",
                            "K exceeds the number of available grid poses");
  }

  const Eigen::Vector3d r_cur = (current.translation - space.center).normalized();
  struct Entry {
    double angle;
    int index;  // ie * grid_azimuth + ia
    int ia;
  };
  std::vector<Entry> entries;
  entries.reserve(total);
  for (int ie = 0; ie < space.grid_elevation; ++ie) {
    for (int ia = 0; ia < space.grid_azimuth; ++ia) {
      const Eigen::Vector3d dir =
          space.direction(space.grid_azimuth_at(ia), space.grid_elevation_at(ie));
      const double angle = std::acos(std::clamp(dir.dot(r_cur), -1.0, 1.0));
      entries.push_back({angle, ie * space.grid_azimuth + ia, ia});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.angle != b.angle ? a.angle < b.angle : a.index < b.index;
  });

  // The nearest grid pose stands in for the current pose itself.
  const std::vector<Entry> pool(entries.begin() + 1, entries.end());

  const double neighborhood = neighborhood_deg * M_PI / 180.0;
  std::vector<Entry> within;
  for (const Entry& e : pool) {
    if (e.angle <= neighborhood) within.push_back(e);
  }

  std::vector<int> picked;
  picked.reserve(k_poses);
  if (static_cast<int>(within.size()) < k_poses) {
    for (int i = 0; i < k_poses; ++i) picked.push_back(pool[i].index);
  } else {
    // Round-robin across azimuth columns, best column first, so the K picks
    // cover the neighborhood instead of clustering on one side.
    std::vector<std::vector<Entry>> columns(space.grid_azimuth);
    for (const Entry& e : within) columns[e.ia].push_back(e);  // stays angle-sorted
    std::vector<int> order;
    for (int ia = 0; ia < space.grid_azimuth; ++ia) {
      if (!columns[ia].empty()) order.push_back(ia);
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double da = columns[a].front().angle;
      const double db = columns[b].front().angle;
      return da != db ? da < db : a < b;
    });
    size_t round = 0;
    while (static_cast<int>(picked.size()) < k_poses) {
      bool any = false;
      for (int ia : order) {
        if (round < columns[ia].size()) {
          picked.push_back(columns[ia][round].index);
          any = true;
          if (static_cast<int>(picked.size()) == k_poses) break;
        }
      }
      if (!any) break;
      ++round;
    }
  }

  std::vector<Pose> out;
  out.reserve(picked.size());
  for (int index : picked) {
    out.push_back(space.grid_pose(index % space.grid_azimuth, index / space.grid_azimuth));
  }
  return out;
}

std::pair<int, PlanStepRecord> select_nbv(const ColoredPointCloud& cloud,
                                          const std::vector<Pose>& candidates,
                                          const CameraIntrinsics& k, double theta,
                                          int splat_radius_px) {
  if (candidates.empty()) {
    throw Error::validation("EmptyInput", "select_nbv needs at least one candidate");
  }
  PlanStepRecord record;
  record.candidate_poses = candidates;
  record.candidate_ratios.reserve(candidates.size());
  for (const Pose& pose : candidates) {
    const RenderOutput out = render(cloud, pose, k, splat_radius_px);
    record.candidate_ratios.push_back(hole_ratio(out.mask));
  }
  auto [best, utilities] = choose_best_utility(record.candidate_ratios, theta);
  record.candidate_utilities = std::move(utilities);
  record.chosen_index = best;
  record.chosen_pose = candidates[best];
  return {best, std::move(record)};
}

namespace {

// Renders, completes, and fuses one trajectory segment; shared by the NBV
// planner and the circular baseline.
struct SegmentOutcome {
  Trajectory trajectory;
  std::vector<Image> frames;
  std::vector<HoleMask> masks;
};

SegmentOutcome complete_and_fuse_segment(ColoredPointCloud& cloud, const Pose& from, const Pose& to,
                                         const Image& reference_image, const CameraIntrinsics& k,
                                         int frames_per_segment, int splat_radius_px,
                                         double voxel_rho, ViewCompleter& completer, int step) {
  SegmentOutcome outcome;
  outcome.trajectory.intrinsics = k;
  outcome.trajectory.poses = interpolate_poses(from, to, frames_per_segment);

  const std::vector<RenderOutput> renders =
      render_trajectory(cloud, outcome.trajectory, splat_radius_px);

  CompletionRequest req;
  req.trajectory = outcome.trajectory;
  req.renders = renders;
  req.reference_images.emplace_back(0, reference_image);

  CompletionResponse resp;
  try {
    resp = completer.complete(req);
    validate_response(req, resp);
  } catch (const Error& e) {
    throw Error(e.kind(), "CompleterError",
                "completer '" + completer.name() + "' failed at step " + std::to_string(step) +
                    ": " + e.what());
  }

  if (resp.depths) {
    for (size_t i = 0; i < resp.frames.size(); ++i) {
      cloud = fuse_novel_view(cloud, resp.frames[i], (*resp.depths)[i], renders[i].mask,
                              outcome.trajectory.poses[i], k, voxel_rho);
    }
  }
  outcome.masks.reserve(renders.size());
  for (const RenderOutput& r : renders) outcome.masks.push_back(r.mask);
  outcome.frames = std::move(resp.frames);
  return outcome;
}

}  // namespace

PlanResult plan_and_synthesize(const ColoredPointCloud& scene_init,
                               const std::pair<Image, Pose>& reference,
                               const CameraIntrinsics& k, const PlannerConfig& config,
                               const SearchSpace& space, ViewCompleter& completer,
                               const StepObserver& observer) {
  config.validate();
  k.validate();

  PlanResult result;
  result.cloud = scene_init;
  Pose current = reference.second;
  Image current_reference = reference.first;

  for (int step = 0; step <= config.max_steps; ++step) {
    const std::vector<Pose> candidates =
        sample_candidates(space, current, config.candidates_per_step, config.neighborhood_deg);
    auto [best, record] = select_nbv(result.cloud, candidates, k, config.threshold,
                                     config.splat_radius_px);
    record.step = step;

    SegmentOutcome outcome = complete_and_fuse_segment(
        result.cloud, current, candidates[best], current_reference, k, config.frames_per_segment,
        config.splat_radius_px, config.voxel_rho, completer, step);

    record.segment_trajectory = outcome.trajectory;
    record.cloud_size_after = result.cloud.size();
    current = candidates[best];
    current_reference = outcome.frames.back();
    result.frames.insert(result.frames.end(), outcome.frames.begin(), outcome.frames.end());
    result.segment_masks.push_back(std::move(outcome.masks));
    if (observer) observer(step, result.cloud, record);
    result.records.push_back(std::move(record));
  }
  return result;
}

std::vector<Pose> circular_baseline_poses(const Pose& reference_pose, const SearchSpace& space,
                                          int steps, double step_deg) {
  if (steps < 1) throw Error::validation("InvalidConfig", "steps must be >= 1");
  std::vector<Pose> out;
  out.reserve(steps);
  const Eigen::Vector3d offset = reference_pose.translation - space.center;
  for (int i = 1; i <= steps; ++i) {
    const double angle = i * step_deg * M_PI / 180.0;
    const Eigen::Vector3d pos =
        space.center + Eigen::AngleAxisd(angle, space.up).toRotationMatrix() * offset;
    out.push_back(look_at(pos, space.center, space.up));
  }
  return out;
}

Trajectory circular_baseline_trajectory(const Pose& reference_pose, const SearchSpace& space,
                                        int steps, double step_deg, const CameraIntrinsics& k) {
  Trajectory traj;
  traj.intrinsics = k;
  traj.poses = circular_baseline_poses(reference_pose, space, steps, step_deg);
  return traj;
}

PlanResult run_circular_baseline(const ColoredPointCloud& scene_init,
                                 const std::pair<Image, Pose>& reference,
                                 const CameraIntrinsics& k, const SearchSpace& space, int steps,
                                 double step_deg, int frames_per_segment, int splat_radius_px,
                                 double voxel_rho, ViewCompleter& completer,
                                 const StepObserver& observer) {
  k.validate();
  PlanResult result;
  result.cloud = scene_init;

  Pose current = look_at(reference.second.translation, space.center, space.up);
  Image current_reference = reference.first;
  const std::vector<Pose> waypoints =
      circular_baseline_poses(reference.second, space, steps, step_deg);
  for (int step = 0; step < steps; ++step) {
    SegmentOutcome outcome = complete_and_fuse_segment(
        result.cloud, current, waypoints[step], current_reference, k, frames_per_segment,
        splat_radius_px, voxel_rho, completer, step);

    PlanStepRecord record;
    record.step = step;
    record.chosen_pose = waypoints[step];
    record.chosen_index = 0;
    record.segment_trajectory = outcome.trajectory;
    record.cloud_size_after = result.cloud.size();
    current = waypoints[step];
    current_reference = outcome.frames.back();
    result.frames.insert(result.frames.end(), outcome.frames.begin(), outcome.frames.end());
    result.segment_masks.push_back(std::move(outcome.masks));
    if (observer) observer(step, result.cloud, record);
    result.records.push_back(std::move(record));
  }
  return result;
}

}  // namespace nvs
