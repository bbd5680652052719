#include "demobot/reward.hpp"

#include <cmath>

#include "demobot/errors.hpp"

namespace demobot {

void RewardSpec::validate() const {
  if (reach_scale <= 0 || grasp_scale <= 0 || goal_scale <= 0)
    throw ConfigError("reward scales must be > 0");
  if (reach_len <= 0 || grasp_len <= 0 || goal_len <= 0)
    throw ConfigError("reward length scales must be > 0");
  if (delta_reach <= 0 || delta_lift <= 0) throw ConfigError("event thresholds must be > 0");
  if (sync_window < 0) throw ConfigError("sync window must be >= 0");
}

DenseGating dense_gating(SegmentPhase phase) {
  switch (phase) {
    case SegmentPhase::Reach:
      return {true, false, false};
    case SegmentPhase::GraspLift:
      return {true, true, false};
    case SegmentPhase::Goal:
      return {true, true, true};
  }
  return {};
}

void StageEvents::reset(int n_stages) {
  reach_fired.assign(n_stages, 0);
  lift_fired.assign(n_stages, 0);
  goal_fired.assign(n_stages, 0);
  sync_fired = 0;
  switch_fired = 0;
  goal_left_step = -1;
  goal_right_step = -1;
}

RewardBreakdown compute_reward(const RewardInputs& in, int stage, SegmentPhase phase,
                               bool is_switch, const RewardSpec& spec, double delta_goal,
                               StageEvents& events) {
  if (in.d_h2o < 0 || in.d_f2o < 0 || in.d_goal < 0)
    throw ContractViolation("compute_reward: negative distance");
  if (stage < 0 || stage >= events.stage_count())
    throw ContractViolation("compute_reward: stage index out of range");

  RewardBreakdown out;
  const DenseGating gate = dense_gating(phase);
  if (gate.reach) out.r_reach = spec.reach_scale * (1.0 - std::tanh(in.d_h2o / spec.reach_len));
  if (gate.grasp) out.r_grasp = spec.grasp_scale * (1.0 - std::tanh(in.d_f2o / spec.grasp_len));
  if (gate.goal) out.r_goal = spec.goal_scale * (1.0 - std::tanh(in.d_goal / spec.goal_len));

  auto fire_once = [&](std::vector<std::uint8_t>& latch, bool condition, double bonus) {
    if (!condition) return;
    if (spec.latch_bonuses) {
      if (latch[stage]) return;
      latch[stage] = 1;
    }
    out.bonuses += bonus;
  };

  // Sparse bonuses are tied to the stage kind they reward.
  if (phase == SegmentPhase::Reach)
    fire_once(events.reach_fired, in.d_h2o < spec.delta_reach, spec.bonus_reach);
  if (phase == SegmentPhase::GraspLift)
    fire_once(events.lift_fired, in.lift_height > spec.delta_lift, spec.bonus_lift);
  if (phase == SegmentPhase::Goal)
    fire_once(events.goal_fired, in.d_goal < delta_goal, spec.bonus_goal);

  if (spec.enable_sync) {
    if (in.goal_left && events.goal_left_step < 0) events.goal_left_step = in.step;
    if (in.goal_right && events.goal_right_step < 0) events.goal_right_step = in.step;
    if (!events.sync_fired && events.goal_left_step >= 0 && events.goal_right_step >= 0 &&
        std::abs(events.goal_left_step - events.goal_right_step) < spec.sync_window) {
      events.sync_fired = 1;
      out.bonuses += spec.bonus_sync;
    }
  }
  if (spec.enable_switch && is_switch && !events.switch_fired) {
    events.switch_fired = 1;
    out.bonuses += spec.bonus_switch;
  }

  out.total = out.r_reach + out.r_grasp + out.r_goal + out.bonuses;
  return out;
}

double goal_keypoint_distance(const std::vector<Eigen::Vector3d>& object_kps,
                              const std::vector<Eigen::Vector3d>& goal_kps) {
  if (object_kps.size() != goal_kps.size() || object_kps.empty())
    throw ContractViolation("goal distance: keypoint count mismatch");
  double sum = 0.0;
  for (size_t i = 0; i < object_kps.size(); ++i) sum += (object_kps[i] - goal_kps[i]).norm();
  return sum / static_cast<double>(object_kps.size());
}

bool check_stage_success(const std::vector<Eigen::Vector3d>& object_kps,
                         const std::vector<Eigen::Vector3d>& goal_kps, double delta_goal) {
  return goal_keypoint_distance(object_kps, goal_kps) < delta_goal;
}

void CurriculumState::validate() const {
  if (!(delta_final <= delta_goal && delta_goal <= delta_init))
    throw ConfigError("curriculum: need delta_final <= delta_goal <= delta_init");
  if (anneal_factor <= 0 || anneal_factor >= 1)
    throw ConfigError("curriculum: anneal factor must be in (0,1)");
  if (success_threshold <= 0 || success_threshold > 1)
    throw ConfigError("curriculum: success threshold must be in (0,1]");
  if (window < 1) throw ConfigError("curriculum: window must be >= 1");
}

void update_curriculum(CurriculumState& c, bool episode_success) {
  if (static_cast<int>(c.recent.size()) != c.window) {
    c.recent.assign(c.window, 0);
    c.recent_pos = 0;
    c.recent_count = 0;
  }
  c.recent[c.recent_pos] = episode_success ? 1 : 0;
  c.recent_pos = (c.recent_pos + 1) % c.window;
  if (c.recent_count < c.window) ++c.recent_count;
  if (c.recent_count < c.window) return;
  double rate = 0.0;
  for (const auto v : c.recent) rate += v;
  rate /= static_cast<double>(c.window);
  if (rate > c.success_threshold && c.delta_goal > c.delta_final) {
    c.delta_goal = std::max(c.delta_final, c.anneal_factor * c.delta_goal);
    ++c.anneals;
    // Fresh evidence required at the tightened threshold.
    c.recent.assign(c.window, 0);
    c.recent_pos = 0;
    c.recent_count = 0;
  }
}

}  // namespace demobot
