#pragma once

#include "demobot/hand_model.hpp"
#include "demobot/levmar.hpp"
#include "demobot/observations.hpp"

namespace demobot {

struct InsufficientObservations : std::runtime_error {
  explicit InsufficientObservations(const std::string& what) : std::runtime_error(what) {}
};

struct AlignOptions {
  double conf_threshold = 0.1;  // keypoints below this do not count as observed
  int min_keypoints = 6;
  bool optimize_beta = false;  // beta is solved on frame 0 and frozen by default
  double beta_min = 0.25;
  LmOptions lm = [] {
    LmOptions o;
    o.max_iters = 150;
    return o;
  }();
};

// Confidence-weighted reprojection least squares over (t, r, theta[, beta]).
// Tangent layout: [t(3), r(3), theta(15), beta(5 when optimized)].
class HandReprojectionProblem {
 public:
  HandReprojectionProblem(const HandModel& model, const Camera& cam,
                          const FrameDetections& det, bool optimize_beta,
                          double beta_min = 0.25);

  int dim() const;
  Eigen::VectorXd residual(const HandParams& p) const;
  Eigen::MatrixXd jacobian(const HandParams& p) const;
  HandParams retract(const HandParams& p, const Eigen::VectorXd& delta) const;

 private:
  const HandModel& model_;
  const Camera& cam_;
  const FrameDetections& det_;
  bool optimize_beta_;
  double beta_min_;
  Pose cam_from_world_;
};

struct AlignResult {
  HandParams params;
  double final_cost = 0.0;  // sum conf * ||reprojection - detection||^2, px^2
  int iters = 0;
  std::vector<double> cost_trace;
};

// Fits (theta, beta, R^h, t^h) to one frame of 2D detections with
// Levenberg-Marquardt on analytic Jacobians. Returned parameters respect
// joint limits and beta > 0; the cost trace is strictly decreasing across
// accepted steps.
AlignResult align_hand_pose(const HandModel& model, const Camera& cam,
                            const FrameDetections& det, const HandParams& init,
                            const AlignOptions& opts = {});

}  // namespace demobot
