#pragma once

#include <Eigen/Dense>

#include "crowdmpc/predictor.hpp"
#include "crowdmpc/vehicle.hpp"

namespace crowdmpc {

/// Stacked prediction X = S_x x_k + S_u U plus the velocity/position
/// selectors used by the cost and constraint builders.
struct PredictionMatrices {
  Eigen::MatrixXd s_x;  // 2N x 2
  Eigen::MatrixXd s_u;  // 2N x N, block lower triangular
  Eigen::MatrixXd a_r;  // N x 2N, picks velocities
  Eigen::MatrixXd m_x;  // N x 2N, picks positions
  int horizon = 0;
};

/// J(U) = U' H U + 2 F' U + Y.
struct CostTerms {
  Eigen::MatrixXd h;
  Eigen::VectorXd f;
  double y = 0.0;
};

/// Inequalities with the convention G U >= h.
struct ConstraintSet {
  Eigen::MatrixXd g;
  Eigen::VectorXd h;
  int vacuous_safety_rows = 0;  // safety rows disabled by the no-pedestrian sentinel
};

/// Dense QP: minimize U' H U + 2 F' U subject to G U >= h.
struct QpProblem {
  Eigen::MatrixXd h_mat;  // N x N, symmetric positive definite
  Eigen::VectorXd f_vec;  // N
  Eigen::MatrixXd g;      // m x N
  Eigen::VectorXd h;      // m
  int step_index = 0;
  int vacuous_safety_rows = 0;
};

/// Right-hand side used to disable a safety row with no pedestrian ahead.
inline constexpr double kVacuousRhs = -1e12;

PredictionMatrices build_prediction(const DiscreteModel& model, int horizon);

CostTerms build_cost(const PredictionMatrices& mats, const VehicleState& x_k,
                     double v_ref, const Eigen::MatrixXd& q_weight);

/// Stacks, in order: input bounds (2N rows), rate upper/lower (N each),
/// speed upper/lower (N each), safety gap (N rows).
ConstraintSet build_constraints(const PredictionMatrices& mats, const VehicleState& x_k,
                                double u_prev, const FrontGapSequence& x_p,
                                const VehicleParams& params, double d_safe);

QpProblem assemble_qp(const PredictionMatrices& mats, const VehicleState& x_k,
                      double u_prev, const FrontGapSequence& x_p,
                      const VehicleParams& params, double d_safe, double v_ref,
                      const Eigen::MatrixXd& q_weight, int step_index = 0);

/// Matrix-market-style text dump of one assembled problem (debug tracing).
void dump_qp(const QpProblem& qp, std::ostream& out);

}  // namespace crowdmpc
