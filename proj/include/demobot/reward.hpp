#pragma once

#include <vector>

#include "demobot/objects.hpp"
#include "demobot/segments.hpp"

namespace demobot {

// Reward terms and scales. Defaults reproduce the reference table: dense
// reach/grasp/goal terms 1 - tanh(d / len) gated by stage phase, one-shot
// bonuses on reach/lift/goal events, and the task-specific sync/switch
// bonuses.
struct RewardSpec {
  double reach_scale = 1.0;
  double grasp_scale = 2.0;
  double goal_scale = 15.0;
  double reach_len = 0.3;   // m
  double grasp_len = 0.05;  // m
  double goal_len = 0.1;    // m
  double bonus_reach = 50.0;
  double bonus_lift = 100.0;
  double bonus_goal = 1000.0;
  double bonus_sync = 2000.0;
  double bonus_switch = 2000.0;
  double delta_reach = 0.08;  // m, d_h2o event threshold
  double delta_lift = 0.05;   // m, lift height event threshold
  int sync_window = 10;       // control steps
  bool enable_sync = false;
  bool enable_switch = false;
  // Latch bonuses once per episode per stage (default). When false the
  // stateless indicator is paid every step it holds.
  bool latch_bonuses = true;

  void validate() const;
};

// Which dense terms are active in a phase (the stage-gating table).
struct DenseGating {
  bool reach = false;
  bool grasp = false;
  bool goal = false;
};
DenseGating dense_gating(SegmentPhase phase);

// Per-step events with distances already aggregated over the stage's
// active hands.
struct RewardInputs {
  double d_h2o = 0.0;       // m
  double d_f2o = 0.0;       // m
  double d_goal = 0.0;      // m
  double lift_height = 0.0; // m
  bool reached = false;     // all active hands within delta_reach
  bool goal_left = false;   // per-hand goal events (task-specific)
  bool goal_right = false;
  int step = 0;             // episode control step
};

// One-shot latches, per episode. Bonus latches are per stage.
struct StageEvents {
  std::vector<std::uint8_t> reach_fired;  // per stage
  std::vector<std::uint8_t> lift_fired;
  std::vector<std::uint8_t> goal_fired;
  std::uint8_t sync_fired = 0;
  std::uint8_t switch_fired = 0;
  int goal_left_step = -1;
  int goal_right_step = -1;

  void reset(int n_stages);
  int stage_count() const { return static_cast<int>(reach_fired.size()); }
};

struct RewardBreakdown {
  double total = 0.0;
  double r_reach = 0.0;
  double r_grasp = 0.0;
  double r_goal = 0.0;
  double bonuses = 0.0;
};

// Table-driven reward: dense terms gated by the stage phase plus one-shot
// bonuses. `delta_goal` is the curriculum's current goal threshold.
// Latches in `events` are updated in place.
RewardBreakdown compute_reward(const RewardInputs& in, int stage, SegmentPhase phase,
                               bool is_switch, const RewardSpec& spec, double delta_goal,
                               StageEvents& events);

// Mean keypoint distance; success iff it is below delta_goal.
double goal_keypoint_distance(const std::vector<Eigen::Vector3d>& object_kps,
                              const std::vector<Eigen::Vector3d>& goal_kps);
bool check_stage_success(const std::vector<Eigen::Vector3d>& object_kps,
                         const std::vector<Eigen::Vector3d>& goal_kps, double delta_goal);

// Threshold annealing on delta_goal plus the per-hand pre-grasp enable.
struct CurriculumState {
  double delta_goal = 0.05;
  double delta_final = 0.005;
  double delta_init = 0.05;
  double anneal_factor = 0.8;      // kappa
  double success_threshold = 0.8;  // rho
  int window = 200;                // episodes
  bool pregrasp_enabled = true;

  // Rolling window bookkeeping.
  std::vector<std::uint8_t> recent;
  int recent_pos = 0;
  int recent_count = 0;
  int anneals = 0;

  void validate() const;
};

// Records one episode outcome; anneals delta_goal when the rolling success
// rate clears the threshold (the window restarts after each anneal).
// delta_goal never increases and never drops below delta_final.
void update_curriculum(CurriculumState& c, bool episode_success);

}  // namespace demobot
