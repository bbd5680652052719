#pragma once

#include "demobot/levmar.hpp"
#include "demobot/se3.hpp"

namespace demobot {

// Task objective for peg-in-hole pose refinement: axis co-linearity plus
// tip-to-entry endpoint distance. Endpoint [0] of the peg axis is the tip
// that enters the hole; endpoint [0] of the hole axis is the entry.
struct PegHoleObjective {
  Eigen::Vector3d peg_axis[2];   // peg frame, meters
  Eigen::Vector3d hole_axis[2];  // base-object frame, meters
  double w_axis = 1.0;
  double w_endpoint = 100.0;

  void validate() const;
};

// f_task(pose) = w_axis * (1 - |u_peg . u_hole|) + w_endpoint * ||tip - entry||^2
double peg_hole_cost(const Pose& obj_pose, const PegHoleObjective& objective,
                     const Pose& base_pose);

// Smooth residual form whose zeros coincide with f_task's: the cross
// product stands in for the co-linearity term. Tangent layout [t(3), r(3)];
// retract clamps to the trust region around the track pose.
class PegHoleProblem {
 public:
  PegHoleProblem(const PegHoleObjective& objective, const Pose& base_pose,
                 const Pose& track_pose, double trust_trans, double trust_rot);

  Eigen::VectorXd residual(const Pose& obj_pose) const;
  Eigen::MatrixXd jacobian(const Pose& obj_pose) const;
  Pose retract(const Pose& obj_pose, const Eigen::VectorXd& delta) const;
  bool at_trust_boundary(const Pose& obj_pose) const;

 private:
  PegHoleObjective objective_;
  Pose base_pose_;
  Pose track_pose_;
  double trust_trans_;
  double trust_rot_;
  Eigen::Vector3d hole_entry_world_;
  Eigen::Vector3d hole_dir_world_;  // unit
};

struct RefineOptions {
  double trust_trans = 0.03;  // m
  double trust_rot = 0.2;     // rad
  LmOptions lm = [] {
    LmOptions o;
    o.max_iters = 100;
    return o;
  }();
};

struct RefineResult {
  Pose pose;
  double cost_before = 0.0;
  double cost_after = 0.0;
  bool trust_clamped = false;
  int iters = 0;
  std::vector<double> cost_trace;  // true f_task at accepted iterates
};

// Minimizes f_task starting from the tracked pose; the result never leaves
// the trust region around it, and cost_after <= cost_before (acceptance is
// gated on the exact f_task).
RefineResult refine_object_pose(const Pose& track_pose, const PegHoleObjective& objective,
                                const Pose& base_pose, const RefineOptions& opts = {});

}  // namespace demobot
