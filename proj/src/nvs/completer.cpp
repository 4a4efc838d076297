#include "nvs/completer.hpp"

#include <cmath>

#include "nvs/image_io.hpp"

namespace nvs {

void validate_request(const CompletionRequest& req) {
  const size_t L = req.trajectory.poses.size();
  if (L == 0) {
    throw Error::contract("ContractViolation", "completion request with empty trajectory");
  }
  if (req.renders.size() != L) {
    throw Error::contract("ContractViolation", "renders and trajectory lengths disagree");
  }
  const CameraIntrinsics& k = req.trajectory.intrinsics;
  k.validate();
  for (const RenderOutput& r : req.renders) {
    if (r.rgb.width != k.width || r.rgb.height != k.height || r.depth.width != k.width ||
        r.depth.height != k.height || r.mask.width != k.width || r.mask.height != k.height) {
      throw Error::contract("ContractViolation", "render shape disagrees with intrinsics");
    }
  }
  std::vector<bool> seen(L, false);
  for (const auto& [idx, img] : req.reference_images) {
    if (idx < 0 || static_cast<size_t>(idx) >= L) {
      throw Error::contract("ContractViolation", "reference index out of range");
    }
    if (seen[idx]) {
      throw Error::contract("ContractViolation", "duplicate reference index");
    }
    seen[idx] = true;
    if (img.width != k.width || img.height != k.height) {
      throw Error::contract("ContractViolation", "reference image shape disagrees with intrinsics");
    }
  }
}

void validate_response(const CompletionRequest& req, const CompletionResponse& resp,
                       bool quantized_references) {
  const size_t L = req.trajectory.poses.size();
  if (resp.frames.size() != L) {
    throw Error::contract("ContractViolation", "completer returned wrong frame count");
  }
  const CameraIntrinsics& k = req.trajectory.intrinsics;
  for (const Image& f : resp.frames) {
    if (f.width != k.width || f.height != k.height) {
      throw Error::contract("ContractViolation", "completed frame has wrong shape");
    }
  }
  for (const auto& [idx, img] : req.reference_images) {
    const Image expected = quantized_references
                               ? rgb8_to_image(img.width, img.height, image_to_rgb8(img))
                               : img;
    if (!(resp.frames[idx] == expected)) {
      throw Error::contract("ContractViolation",
                            "completer altered the reference frame at index " + std::to_string(idx));
    }
  }
  if (resp.depths) {
    if (resp.depths->size() != L) {
      throw Error::contract("ContractViolation", "completer returned wrong depth count");
    }
    for (size_t i = 0; i < L; ++i) {
      const DepthMap& d = (*resp.depths)[i];
      if (d.width != k.width || d.height != k.height) {
        throw Error::contract("ContractViolation", "completed depth has wrong shape");
      }
      const HoleMask& mask = req.renders[i].mask;
      for (size_t pix = 0; pix < mask.values.size(); ++pix) {
        if (!mask.values[pix] && !(std::isfinite(d.data[pix]) && d.data[pix] > 0.0f)) {
          throw Error::contract("ContractViolation",
                                "depth missing at a covered pixel in frame " + std::to_string(i));
        }
      }
    }
  }
}

CompletionResponse PassthroughCompleter::complete(const CompletionRequest& req) {
  validate_request(req);
  CompletionResponse resp;
  resp.frames.reserve(req.renders.size());
  resp.depths.emplace();
  resp.depths->reserve(req.renders.size());
  for (const RenderOutput& r : req.renders) {
    resp.frames.push_back(r.rgb);
    resp.depths->push_back(r.depth);
  }
  for (const auto& [idx, img] : req.reference_images) resp.frames[idx] = img;
  validate_response(req, resp);
  return resp;
}

OracleCompleter::OracleCompleter(SyntheticScene scene, double dense_density, uint64_t seed,
                                 int splat_radius_px)
    : scene_(std::move(scene)), splat_radius_px_(splat_radius_px) {
  dense_cloud_ = sample_primitives(scene_.surfaces, dense_density, seed);
}

CompletionResponse OracleCompleter::complete(const CompletionRequest& req) {
  validate_request(req);
  CompletionResponse resp;
  resp.frames.reserve(req.renders.size());
  resp.depths.emplace();
  resp.depths->reserve(req.renders.size());
  for (size_t i = 0; i < req.trajectory.poses.size(); ++i) {
    RenderOutput out =
        render(dense_cloud_, req.trajectory.poses[i], req.trajectory.intrinsics, splat_radius_px_);
    // Covered input pixels the dense resampling happens to miss keep the
    // input render; fusion only consumes hole pixels, so nothing is invented.
    const RenderOutput& in = req.renders[i];
    for (size_t pix = 0; pix < out.depth.data.size(); ++pix) {
      if (!in.mask.values[pix] && !std::isfinite(out.depth.data[pix])) {
        out.depth.data[pix] = in.depth.data[pix];
        for (int c = 0; c < 3; ++c) out.rgb.data[pix * 3 + c] = in.rgb.data[pix * 3 + c];
      }
    }
    resp.frames.push_back(std::move(out.rgb));
    resp.depths->push_back(std::move(out.depth));
  }
  for (const auto& [idx, img] : req.reference_images) resp.frames[idx] = img;
  validate_response(req, resp);
  return resp;
}

CompletionResponse oracle_complete(const SyntheticScene& scene, const CompletionRequest& req,
                                   double dense_density, uint64_t seed, int splat_radius_px) {
  OracleCompleter completer(scene, dense_density, seed, splat_radius_px);
  return completer.complete(req);
}

}  // namespace nvs
