#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace demobot {

struct LmOptions {
  int max_iters = 100;
  double mu_init = 1e-4;
  double mu_increase = 10.0;
  double mu_decrease = 0.5;
  double mu_min = 1e-14;
  double mu_max = 1e14;
  double tol_cost_abs = 1e-18;
  double tol_cost_rel = 1e-12;  // relative decrease per accepted step
  double tol_step = 1e-14;
};

template <class State>
struct LmProblem {
  // Residual vector r; the minimized objective defaults to ||r||^2.
  std::function<Eigen::VectorXd(const State&)> residual;
  // d residual / d delta, evaluated at delta = 0.
  std::function<Eigen::MatrixXd(const State&)> jacobian;
  // Applies a tangent step (and any clamping/trust-region projection).
  std::function<State(const State&, const Eigen::VectorXd&)> retract;
  // Optional objective override; must share minimizers with ||r||^2.
  std::function<double(const State&)> cost;
};

template <class State>
struct LmResult {
  State state;
  double cost = 0.0;
  int iters = 0;
  bool converged = false;
  std::vector<double> cost_trace;  // initial cost + strictly decreasing accepted costs
};

// Levenberg-Marquardt with multiplicative damping on diag(J^T J). Steps are
// accepted only on strict cost decrease, so cost_trace is strictly
// decreasing after its first entry.
template <class State>
LmResult<State> levenberg_marquardt(const State& init, const LmProblem<State>& problem,
                                    const LmOptions& opts = {}) {
  auto eval_cost = [&](const State& s) {
    if (problem.cost) return problem.cost(s);
    const Eigen::VectorXd r = problem.residual(s);
    return r.squaredNorm();
  };

  LmResult<State> out;
  out.state = init;
  out.cost = eval_cost(init);
  out.cost_trace.push_back(out.cost);

  double mu = opts.mu_init;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    out.iters = iter + 1;
    if (out.cost < opts.tol_cost_abs) {
      out.converged = true;
      break;
    }
    const Eigen::VectorXd r = problem.residual(out.state);
    const Eigen::MatrixXd J = problem.jacobian(out.state);
    const Eigen::MatrixXd H = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    const Eigen::VectorXd diag = H.diagonal().cwiseMax(1e-12);

    bool accepted = false;
    while (mu <= opts.mu_max) {
      Eigen::MatrixXd H_aug = H;
      H_aug.diagonal() += mu * diag;
      const Eigen::VectorXd step = H_aug.ldlt().solve(-g);
      if (!step.allFinite()) {
        mu *= opts.mu_increase;
        continue;
      }
      const State candidate = problem.retract(out.state, step);
      const double cost_cand = eval_cost(candidate);
      if (cost_cand < out.cost) {
        const double rel_drop = (out.cost - cost_cand) / std::max(out.cost, 1e-300);
        out.state = candidate;
        out.cost = cost_cand;
        out.cost_trace.push_back(cost_cand);
        mu = std::max(mu * opts.mu_decrease, opts.mu_min);
        accepted = true;
        if (rel_drop < opts.tol_cost_rel || step.norm() < opts.tol_step) out.converged = true;
        break;
      }
      mu *= opts.mu_increase;
    }
    if (!accepted || out.converged) {
      // No decreasing step exists within damping bounds: stationary point
      // (possibly on a clamp boundary).
      if (!accepted) out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace demobot
