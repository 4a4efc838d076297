#pragma once

#include <memory>

#include "nvs/renderer.hpp"
#include "nvs/scene.hpp"

namespace nvs {

// One segment of point-cloud renders to be turned into completed views. The
// reference entries pin ground-truth images at their trajectory positions:
// completed frames must reproduce them exactly.
struct CompletionRequest {
  std::vector<RenderOutput> renders;
  Trajectory trajectory;
  std::vector<std::pair<int, Image>> reference_images;
};

struct CompletionResponse {
  std::vector<Image> frames;
  std::optional<std::vector<DepthMap>> depths;
};

// Throws ContractViolation when lengths disagree, reference indices repeat or
// fall outside [0, L), or shapes mismatch the intrinsics.
void validate_request(const CompletionRequest& req);

// Response-side contract: L frames; frames at reference indices equal the
// provided references exactly; depths (if present) positive and finite
// wherever the input mask was 0. With quantized_references the comparison is
// made against the 8-bit round trip of each reference, matching what a PNG
// wire transfer preserves.
void validate_response(const CompletionRequest& req, const CompletionResponse& resp,
                       bool quantized_references = false);

// The "enhanced renderer" filling holes and correcting renders; implemented
// by a generative model in production and by the stand-ins below for testing
// and offline use.
class ViewCompleter {
 public:
  virtual ~ViewCompleter() = default;
  virtual CompletionResponse complete(const CompletionRequest& req) = 0;
  virtual std::string name() const = 0;
};

// Returns the renders unchanged (references spliced in); depth passes
// through, so holes carry no completable depth and fusion adds nothing.
class PassthroughCompleter : public ViewCompleter {
 public:
  CompletionResponse complete(const CompletionRequest& req) override;
  std::string name() const override { return "passthrough"; }
};

// Perfect completer for synthetic scenes: renders a dense resampling of the
// ground-truth surfaces at every requested pose, with metrically consistent
// depth. dense_density should be high enough that the dense render's hole
// ratio stays under 1%.
class OracleCompleter : public ViewCompleter {
 public:
  OracleCompleter(SyntheticScene scene, double dense_density, uint64_t seed,
                  int splat_radius_px = 1);

  CompletionResponse complete(const CompletionRequest& req) override;
  std::string name() const override { return "oracle"; }

  const ColoredPointCloud& dense_cloud() const { return dense_cloud_; }

 private:
  SyntheticScene scene_;
  ColoredPointCloud dense_cloud_;
  int splat_radius_px_;
};

CompletionResponse oracle_complete(const SyntheticScene& scene, const CompletionRequest& req,
                                   double dense_density, uint64_t seed, int splat_radius_px = 1);

}  // namespace nvs
