#pragma once

#include <Eigen/Dense>
#include <vector>

#include "crowdmpc/mpc_synth.hpp"

namespace crowdmpc {

enum class QpStatus { optimal, infeasible, iteration_limit };

struct QpSolution {
  QpStatus status = QpStatus::iteration_limit;
  Eigen::VectorXd u;          // argmin when optimal
  double objective = 0.0;     // U' H U + 2 F' U
  std::vector<int> active_set;
  Eigen::VectorXd duals;      // multipliers per row, zero off the active set
  int iterations = 0;
  double kkt_residual = 0.0;
  // When infeasible: y >= 0 with G'y ~ 0 and h'y > 0 (Farkas certificate).
  Eigen::VectorXd certificate;
};

/// Max of stationarity norm, primal violation, dual negativity and
/// complementary-slackness violation. Throws on non-optimal solutions.
double kkt_residual(const QpProblem& qp, const QpSolution& sol);

/// Dense active-set solver for minimize U' H U + 2 F' U s.t. G U >= h with
/// H positive definite. Starts at the unconstrained minimum and activates
/// violated constraints one at a time (dual active-set scheme), so no
/// phase-1 is needed and infeasibility falls out as a Farkas certificate.
/// Instances keep the last active set for warm starting and own their
/// workspace; use one instance per worker.
class QpSolver {
 public:
  struct Options {
    double feas_tol = 1e-8;
    double kkt_tol = 1e-8;
    int max_iter = 500;
  };

  QpSolver() = default;
  explicit QpSolver(const Options& opts) : opts_(opts) {}

  QpSolution solve(const QpProblem& qp);
  void reset_warm_start() { warm_.clear(); }
  const Options& options() const { return opts_; }

 private:
  Options opts_;
  std::vector<int> warm_;
};

}  // namespace crowdmpc
