#include "demobot/chain.hpp"

#include <algorithm>
#include <cmath>

#include "demobot/errors.hpp"
#include "demobot/rng.hpp"

namespace demobot {

int KinematicChain::add_joint(const std::string& name, const std::string& parent,
                              const Eigen::Vector3d& axis, const Pose& offset, double lo,
                              double hi) {
  if (frame_index(name) >= 0) throw ConfigError("duplicate joint name: " + name);
  if (lo > hi) throw ConfigError("joint " + name + ": lo > hi");
  int parent_idx = -1;
  if (!parent.empty()) {
    parent_idx = frame_index(parent);
    if (parent_idx < 0)
      throw ConfigError("joint " + name + ": unknown parent '" + parent +
                        "' (joints must be listed parent-first)");
  }
  const double axis_norm = axis.norm();
  if (axis_norm < 1e-12) throw ConfigError("joint " + name + ": zero axis");
  Joint j;
  j.name = name;
  j.parent = parent_idx;
  j.axis = axis / axis_norm;
  j.offset = offset;
  j.lo = lo;
  j.hi = hi;
  joints_.push_back(std::move(j));
  return static_cast<int>(joints_.size()) - 1;
}

void KinematicChain::set_keypoint_frames(const std::vector<std::string>& names) {
  keypoint_names_ = names;
  keypoint_indices_.clear();
  for (const auto& n : names) {
    const int idx = frame_index(n);
    if (idx < 0) throw ConfigError("unknown keypoint frame: " + n);
    keypoint_indices_.push_back(idx);
  }
}

void KinematicChain::set_end_effector(const std::string& name) {
  const int idx = frame_index(name);
  if (idx < 0) throw ConfigError("unknown end-effector frame: " + name);
  ee_name_ = name;
  ee_index_ = idx;
}

int KinematicChain::frame_index(const std::string& name) const {
  for (int i = 0; i < static_cast<int>(joints_.size()); ++i)
    if (joints_[i].name == name) return i;
  return -1;
}

std::vector<int> KinematicChain::movable_joints() const {
  std::vector<int> out;
  for (int i = 0; i < joint_count(); ++i)
    if (!joints_[i].fixed()) out.push_back(i);
  return out;
}

int KinematicChain::movable_count() const {
  return static_cast<int>(movable_joints().size());
}

void KinematicChain::check_config(const JointConfig& q) const {
  if (q.size() != joint_count())
    throw ContractViolation("joint config length " + std::to_string(q.size()) +
                            " != joint count " + std::to_string(joint_count()) +
                            " for chain '" + name_ + "'");
  if (!q.chain_id.empty() && !name_.empty() && q.chain_id != name_)
    throw ContractViolation("joint config for chain '" + q.chain_id +
                            "' used with chain '" + name_ + "'");
}

JointConfig KinematicChain::clamp(const JointConfig& q) const {
  check_config(q);
  JointConfig out = q;
  out.chain_id = name_;
  for (int i = 0; i < joint_count(); ++i)
    out.values[i] = std::clamp(q.values[i], joints_[i].lo, joints_[i].hi);
  return out;
}

bool KinematicChain::within_limits(const JointConfig& q, double tol) const {
  check_config(q);
  for (int i = 0; i < joint_count(); ++i)
    if (q.values[i] < joints_[i].lo - tol || q.values[i] > joints_[i].hi + tol) return false;
  return true;
}

FkResult KinematicChain::forward_kinematics(const JointConfig& q) const {
  check_config(q);
  FkResult result;
  result.frames.resize(joints_.size());
  for (int i = 0; i < joint_count(); ++i) {
    const Joint& j = joints_[i];
    double angle = q.values[i];
    const double clamped = std::clamp(angle, j.lo, j.hi);
    if (clamped != angle) {
      result.clamped = true;
      result.clamped_joints.push_back(i);
      angle = clamped;
    }
    const Pose local = j.offset * Pose::from_axis_angle(j.axis, angle);
    result.frames[i] = (j.parent < 0) ? local : result.frames[j.parent] * local;
  }
  return result;
}

std::vector<Eigen::Vector3d> KinematicChain::joint_positions_3d(const JointConfig& q) const {
  if (keypoint_indices_.empty())
    throw ConfigError("chain '" + name_ + "' has no keypoint frames configured");
  const FkResult fk = forward_kinematics(q);
  std::vector<Eigen::Vector3d> out;
  out.reserve(keypoint_indices_.size());
  for (const int idx : keypoint_indices_) out.push_back(fk.frames[idx].translation);
  return out;
}

Eigen::MatrixXd KinematicChain::jacobian(const JointConfig& q, const std::string& frame) const {
  const int idx = frame_index(frame);
  if (idx < 0) throw ConfigError("unknown frame: " + frame);
  return jacobian(q, idx);
}

Eigen::MatrixXd KinematicChain::jacobian(const JointConfig& q, int frame) const {
  if (frame < 0 || frame >= joint_count())
    throw ConfigError("frame index out of range: " + std::to_string(frame));
  const FkResult fk = forward_kinematics(q);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(6, joint_count());
  const Eigen::Vector3d p_frame = fk.frames[frame].translation;
  // Walk ancestors of `frame`; all other columns stay zero.
  for (int j = frame; j >= 0; j = joints_[j].parent) {
    const Eigen::Vector3d axis_world = fk.frames[j].rotation * joints_[j].axis;
    J.block<3, 1>(0, j) = axis_world.cross(p_frame - fk.frames[j].translation);
    J.block<3, 1>(3, j) = axis_world;
  }
  return J;
}

namespace {

// Deterministic jitter stream for IK restarts; solve_ik stays a pure
// function of its arguments.
constexpr std::uint64_t kIkJitterSeed = 0xDB5EEDull;

}  // namespace

IkResult KinematicChain::solve_ik(const Pose& target, const JointConfig& q_init,
                                  const IkParams& params, int frame) const {
  check_config(q_init);
  if (frame < 0) frame = ee_index_;
  if (frame < 0) throw ConfigError("chain '" + name_ + "' has no end-effector frame");

  IkResult result = solve_ik_attempt(target, clamp(q_init), params, frame);
  for (int attempt = 1; attempt <= params.restarts && !result.converged; ++attempt) {
    Rng jitter(kIkJitterSeed + static_cast<std::uint64_t>(attempt));
    JointConfig q_seed = q_init;
    if (attempt == 1) {
      // Local escape first, then full-range multistart.
      for (int j = 0; j < q_seed.size(); ++j) q_seed.values[j] += jitter.uniform(-0.4, 0.4);
    } else {
      for (int j = 0; j < q_seed.size(); ++j) {
        const Joint& jt = joints_[j];
        q_seed.values[j] = jt.fixed() ? jt.lo : jitter.uniform(jt.lo, jt.hi);
      }
    }
    IkResult retry = solve_ik_attempt(target, clamp(q_seed), params, frame);
    const double best_err = result.pos_error + result.rot_error;
    const double retry_err = retry.pos_error + retry.rot_error;
    if (retry.converged || retry_err < best_err) result = std::move(retry);
  }
  return result;
}

IkResult KinematicChain::solve_ik_attempt(const Pose& target, const JointConfig& q_start,
                                          const IkParams& params, int frame) const {
  const int n = joint_count();
  IkResult best;
  JointConfig q = q_start;

  auto error_at = [&](const JointConfig& qq, Eigen::Matrix<double, 6, 1>& e) {
    const FkResult fk = forward_kinematics(qq);
    const Pose& cur = fk.frames[frame];
    e.head<3>() = target.translation - cur.translation;
    e.tail<3>() = orientation_error(target.rotation, cur.rotation);
  };

  Eigen::Matrix<double, 6, 1> e;
  error_at(q, e);
  double err_norm = e.norm();
  best.q = q;
  best.pos_error = e.head<3>().norm();
  best.rot_error = e.tail<3>().norm();
  best.error_trace.push_back(err_norm);

  const double lambda2 = params.damping * params.damping;

  // Line search along `dir`; accepts the first strictly decreasing iterate.
  auto try_direction = [&](const Eigen::VectorXd& dir) {
    double scale = 1.0;
    for (int bt = 0; bt < 10; ++bt, scale *= 0.5) {
      JointConfig q_try = q;
      q_try.values += scale * dir;
      q_try = clamp(q_try);
      Eigen::Matrix<double, 6, 1> e_try;
      error_at(q_try, e_try);
      const double err_try = e_try.norm();
      if (err_try < err_norm) {
        q = q_try;
        e = e_try;
        err_norm = err_try;
        return true;
      }
    }
    return false;
  };

  int iter = 0;
  for (; iter < params.max_iters; ++iter) {
    if (best.pos_error < params.tol_pos && best.rot_error < params.tol_rot) {
      best.converged = true;
      break;
    }
    Eigen::MatrixXd J = jacobian(q, frame);
    // Pinned joints must not absorb step mass they cannot execute.
    for (int j = 0; j < n; ++j)
      if (joints_[j].fixed()) J.col(j).setZero();

    auto dls_step = [&](const Eigen::MatrixXd& Jm) -> Eigen::VectorXd {
      Eigen::MatrixXd H = Jm.transpose() * Jm;
      H.diagonal().array() += lambda2;
      return H.ldlt().solve(Jm.transpose() * e);
    };

    Eigen::VectorXd step = dls_step(J);

    // If the step runs into joint limits, re-solve with the blocked columns
    // removed so the remaining joints can compensate.
    {
      bool blocked = false;
      Eigen::MatrixXd J_free = J;
      for (int j = 0; j < n; ++j) {
        const bool at_lo = q.values[j] <= joints_[j].lo + 1e-12 && step[j] < 0;
        const bool at_hi = q.values[j] >= joints_[j].hi - 1e-12 && step[j] > 0;
        if (at_lo || at_hi) {
          J_free.col(j).setZero();
          blocked = true;
        }
      }
      if (blocked) {
        Eigen::VectorXd alt = dls_step(J_free);
        for (int j = 0; j < n; ++j)
          if (J_free.col(j).isZero(0)) alt[j] = 0.0;
        step = alt;
      }
    }

    bool accepted = try_direction(step);
    if (!accepted) {
      // Gradient of 0.5*||e||^2 as a fallback direction; only a true
      // stationary point of the clamped problem rejects it too.
      Eigen::VectorXd grad = J.transpose() * e;
      const double gnorm = grad.norm();
      if (gnorm > 1e-14) {
        grad *= std::max(step.norm(), err_norm / std::max(1.0, J.norm())) / gnorm;
        accepted = try_direction(grad);
      }
    }
    if (!accepted) break;  // stationary under clamping

    best.q = q;
    best.pos_error = e.head<3>().norm();
    best.rot_error = e.tail<3>().norm();
    best.error_trace.push_back(err_norm);
  }
  if (!best.converged)
    best.converged = best.pos_error < params.tol_pos && best.rot_error < params.tol_rot;
  best.iters = iter;
  best.q.chain_id = name_;
  return best;
}

KinematicChain KinematicChain::attached(const KinematicChain& child, const std::string& at,
                                        const std::string& prefix) const {
  const int mount = frame_index(at);
  if (mount < 0) throw ConfigError("attach: unknown frame '" + at + "'");
  KinematicChain out = *this;
  for (const Joint& j : child.joints()) {
    const std::string parent_name =
        (j.parent < 0) ? at : prefix + child.joint(j.parent).name;
    out.add_joint(prefix + j.name, parent_name, j.axis, j.offset, j.lo, j.hi);
  }
  out.keypoint_names_.clear();
  out.keypoint_indices_.clear();
  out.ee_name_.clear();
  out.ee_index_ = -1;
  return out;
}

double KinematicChain::path_length(int frame) const {
  double len = 0.0;
  for (int j = frame; j >= 0; j = joints_[j].parent) len += joints_[j].offset.translation.norm();
  return len;
}

}  // namespace demobot
