#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "demobot/align.hpp"
#include "demobot/presets.hpp"
#include "demobot/rng.hpp"

using namespace demobot;

namespace {

Camera test_camera() {
  Camera cam;
  cam.K = {600, 600, 320, 240};
  cam.pose = make_lookat_pose({0.0, -0.9, 0.7}, {0.0, 0.1, 0.1});
  return cam;
}

HandParams random_truth(const HandModel& model, Rng& rng) {
  HandParams p = HandParams::neutral();
  for (int i = 0; i < p.theta.size(); ++i) p.theta[i] = rng.uniform(0.0, 1.1);
  const Eigen::Vector3d axis =
      Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()).normalized();
  p.global = Pose(quat_exp(axis * rng.uniform(0.0, 0.6)),
                  {rng.uniform(-0.08, 0.08), rng.uniform(0.0, 0.15), rng.uniform(0.08, 0.2)});
  (void)model;
  return p;
}

FrameDetections detections_from(const HandModel& model, const Camera& cam,
                                const HandParams& p, double conf = 1.0) {
  const auto uv = model.keypoints_2d(p, cam);
  FrameDetections det(uv.size());
  for (size_t k = 0; k < uv.size(); ++k) det[k] = {uv[k], conf};
  return det;
}

HandParams perturb(const HandModel& model, const HandParams& p, Rng& rng, double rad,
                   double meters) {
  HandParams out = p;
  for (int i = 0; i < out.theta.size(); ++i) out.theta[i] += rng.uniform(-rad, rad);
  model.clamp_theta(out.theta);
  const Eigen::Vector3d axis =
      Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()).normalized();
  out.global = Pose(quat_exp(axis * rng.uniform(0, rad)) * p.global.rotation,
                    p.global.translation + Eigen::Vector3d(rng.uniform(-meters, meters),
                                                           rng.uniform(-meters, meters),
                                                           rng.uniform(-meters, meters)));
  return out;
}

}  // namespace

TEST_CASE("align fixed point: detections from init give near-zero cost") {
  const HandModel model = HandModel::make_default();
  const Camera cam = test_camera();
  Rng rng(10);
  const HandParams truth = random_truth(model, rng);
  const FrameDetections det = detections_from(model, cam, truth);
  const AlignResult r = align_hand_pose(model, cam, det, truth);
  CHECK(r.final_cost < 1e-12);
  CHECK((r.params.theta - truth.theta).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((r.params.global.translation - truth.global.translation).norm() < 1e-7);
}

TEST_CASE("align round trip recovers perturbed ground truth") {
  const HandModel model = HandModel::make_default();
  const Camera cam = test_camera();
  Rng rng(20);
  for (int trial = 0; trial < 20; ++trial) {
    const HandParams truth = random_truth(model, rng);
    const FrameDetections det = detections_from(model, cam, truth);
    // <= 5 deg / 2 cm initial error.
    const HandParams init = perturb(model, truth, rng, 5.0 * M_PI / 180.0, 0.02);
    const AlignResult r = align_hand_pose(model, cam, det, init);
    CHECK((r.params.global.translation - truth.global.translation).norm() < 5e-3);
    CHECK((r.params.theta - truth.theta).cwiseAbs().maxCoeff() < 2.0 * M_PI / 180.0);
  }
}

TEST_CASE("align with beta optimization still reaches near-zero cost") {
  const HandModel model = HandModel::make_default();
  const Camera cam = test_camera();
  Rng rng(30);
  HandParams truth = random_truth(model, rng);
  for (int f = 0; f < truth.beta.size(); ++f) truth.beta[f] = rng.uniform(0.9, 1.1);
  const FrameDetections det = detections_from(model, cam, truth);
  HandParams init = perturb(model, truth, rng, 0.05, 0.01);
  init.beta.setOnes();
  AlignOptions opts;
  opts.optimize_beta = true;
  opts.lm.max_iters = 300;
  const AlignResult r = align_hand_pose(model, cam, det, init, opts);
  CHECK(r.final_cost < 1e-6);
  CHECK((r.params.beta.array() > 0).all());
}

TEST_CASE("align noise floor over 100 seeds") {
  const HandModel model = HandModel::make_default();
  const Camera cam = test_camera();
  Rng rng(40);
  const int n = model.keypoint_count();
  int ok = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const HandParams truth = random_truth(model, rng);
    FrameDetections det = detections_from(model, cam, truth);
    for (auto& d : det) d.uv += Eigen::Vector2d(rng.normal(), rng.normal());  // 1 px sigma
    const HandParams init = perturb(model, truth, rng, 0.03, 0.01);
    const AlignResult r = align_hand_pose(model, cam, det, init);
    if (r.final_cost <= 3.0 * n) ++ok;
  }
  CHECK(ok == 100);
}

TEST_CASE("align cost trace strictly decreases") {
  const HandModel model = HandModel::make_default();
  const Camera cam = test_camera();
  Rng rng(50);
  const HandParams truth = random_truth(model, rng);
  FrameDetections det = detections_from(model, cam, truth);
  for (auto& d : det) d.uv += Eigen::Vector2d(rng.normal(), rng.normal());
  const HandParams init = perturb(model, truth, rng, 0.08, 0.02);
  const AlignResult r = align_hand_pose(model, cam, det, init);
  REQUIRE(r.cost_trace.size() >= 2);
  for (size_t i = 1; i < r.cost_trace.size(); ++i)
    CHECK(r.cost_trace[i] < r.cost_trace[i - 1]);
}

TEST_CASE("align requires six confident keypoints") {
  const HandModel model = HandModel::make_default();
  const Camera cam = test_camera();
  Rng rng(60);
  const HandParams truth = random_truth(model, rng);
  FrameDetections det = detections_from(model, cam, truth);
  for (size_t k = 5; k < det.size(); ++k) det[k].conf = 0.0;  // 5 observed
  CHECK_THROWS_AS(align_hand_pose(model, cam, det, truth), InsufficientObservations);
  FrameDetections det6 = detections_from(model, cam, truth);
  for (size_t k = 6; k < det6.size(); ++k) det6[k].conf = 0.0;  // exactly 6
  CHECK_NOTHROW(align_hand_pose(model, cam, det6, truth));
}

TEST_CASE("reprojection jacobian matches central finite differences") {
  const HandModel model = HandModel::make_default();
  const Camera cam = test_camera();
  Rng rng(70);
  const HandParams truth = random_truth(model, rng);
  FrameDetections det = detections_from(model, cam, truth);
  for (auto& d : det) d.conf = rng.uniform(0.3, 1.0);
  const HandReprojectionProblem fit(model, cam, det, /*optimize_beta=*/true);
  const HandParams at = perturb(model, truth, rng, 0.05, 0.01);

  const Eigen::MatrixXd J = fit.jacobian(at);
  const double h = 1e-6;
  Eigen::MatrixXd J_fd(J.rows(), J.cols());
  for (int c = 0; c < J.cols(); ++c) {
    Eigen::VectorXd dp = Eigen::VectorXd::Zero(J.cols());
    dp[c] = h;
    const Eigen::VectorXd rp = fit.residual(fit.retract(at, dp));
    dp[c] = -h;
    const Eigen::VectorXd rm = fit.residual(fit.retract(at, dp));
    J_fd.col(c) = (rp - rm) / (2 * h);
  }
  CHECK((J - J_fd).norm() / std::max(1.0, J.norm()) < 1e-4);
}

TEST_CASE("align output respects joint limits and positive beta") {
  const HandModel model = HandModel::make_default();
  const Camera cam = test_camera();
  Rng rng(80);
  const HandParams truth = random_truth(model, rng);
  FrameDetections det = detections_from(model, cam, truth);
  for (auto& d : det) d.uv += 5.0 * Eigen::Vector2d(rng.normal(), rng.normal());
  AlignOptions opts;
  opts.optimize_beta = true;
  const AlignResult r = align_hand_pose(model, cam, det, truth, opts);
  for (int i = 0; i < r.params.theta.size(); ++i) {
    CHECK(r.params.theta[i] >= model.theta_lo(i));
    CHECK(r.params.theta[i] <= model.theta_hi(i));
  }
  CHECK((r.params.beta.array() > 0).all());
}
