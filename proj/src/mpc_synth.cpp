#include "crowdmpc/mpc_synth.hpp"

#include <ostream>
#include <stdexcept>

namespace crowdmpc {

PredictionMatrices build_prediction(const DiscreteModel& model, int horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  const int n = horizon;
  PredictionMatrices mats;
  mats.horizon = n;
  mats.s_x.setZero(2 * n, 2);
  mats.s_u.setZero(2 * n, n);
  mats.a_r.setZero(n, 2 * n);
  mats.m_x.setZero(n, 2 * n);

  Eigen::Matrix2d a_pow = model.a;  // A^(i+1) for block row i
  for (int i = 0; i < n; ++i) {
    mats.s_x.block<2, 2>(2 * i, 0) = a_pow;
    a_pow = model.a * a_pow;
    mats.a_r(i, 2 * i + 1) = 1.0;
    mats.m_x(i, 2 * i) = 1.0;
  }
  // Block (i, j) = A^(i-j) B for i >= j.
  for (int j = 0; j < n; ++j) {
    Eigen::Vector2d col = model.b;
    for (int i = j; i < n; ++i) {
      mats.s_u.block<2, 1>(2 * i, j) = col;
      col = model.a * col;
    }
  }
  return mats;
}

CostTerms build_cost(const PredictionMatrices& mats, const VehicleState& x_k,
                     double v_ref, const Eigen::MatrixXd& q_weight) {
  const int n = mats.horizon;
  const Eigen::MatrixXd vel_map = mats.a_r * mats.s_u;  // N x N
  const Eigen::VectorXd v_r = Eigen::VectorXd::Constant(n, v_ref);
  const Eigen::VectorXd free_vel =
      mats.a_r * mats.s_x * Eigen::Vector2d(x_k.s, x_k.v) - v_r;

  CostTerms cost;
  cost.h = vel_map.transpose() * q_weight * vel_map;
  cost.h = 0.5 * (cost.h + cost.h.transpose().eval());  // enforce exact symmetry
  cost.f = vel_map.transpose() * q_weight * free_vel;
  cost.y = free_vel.dot(q_weight * free_vel);
  return cost;
}

ConstraintSet build_constraints(const PredictionMatrices& mats, const VehicleState& x_k,
                                double u_prev, const FrontGapSequence& x_p,
                                const VehicleParams& params, double d_safe) {
  const int n = mats.horizon;
  if (static_cast<int>(x_p.x_p.size()) != n)
    throw std::invalid_argument("front-gap sequence length must match horizon");

  const Eigen::Vector2d xk(x_k.s, x_k.v);
  const Eigen::MatrixXd vel_su = mats.a_r * mats.s_u;
  const Eigen::VectorXd vel_sx = mats.a_r * mats.s_x * xk;
  const Eigen::MatrixXd pos_su = mats.m_x * mats.s_u;
  const Eigen::VectorXd pos_sx = mats.m_x * mats.s_x * xk;

  // Rate map M_u: (M_u U)_0 = u(k), (M_u U)_i = u(k+i) - u(k+i-1).
  Eigen::MatrixXd rate = Eigen::MatrixXd::Identity(n, n);
  for (int i = 1; i < n; ++i) rate(i, i - 1) = -1.0;
  Eigen::VectorXd u0 = Eigen::VectorXd::Zero(n);
  u0(0) = u_prev;

  const int rows = 7 * n;  // input block is 2N, the other five are N each
  ConstraintSet set;
  set.g.setZero(rows, n);
  set.h.setZero(rows);

  // Input bounds: -u_i >= -u_max and u_i >= -u_max.
  for (int i = 0; i < n; ++i) {
    set.g(2 * i, i) = -1.0;
    set.h(2 * i) = -params.u_max;
    set.g(2 * i + 1, i) = 1.0;
    set.h(2 * i + 1) = -params.u_max;
  }
  int row = 2 * n;
  // Rate upper: -M_u U >= -du_max - u0.
  set.g.middleRows(row, n) = -rate;
  set.h.segment(row, n) = Eigen::VectorXd::Constant(n, -params.du_max) - u0;
  row += n;
  // Rate lower: M_u U >= -du_max + u0.
  set.g.middleRows(row, n) = rate;
  set.h.segment(row, n) = Eigen::VectorXd::Constant(n, -params.du_max) + u0;
  row += n;
  // Speed upper: -A_r S_u U >= -v_max + A_r S_x x_k.
  set.g.middleRows(row, n) = -vel_su;
  set.h.segment(row, n) = Eigen::VectorXd::Constant(n, -params.v_max) + vel_sx;
  row += n;
  // Speed lower: A_r S_u U >= v_min - A_r S_x x_k.
  set.g.middleRows(row, n) = vel_su;
  set.h.segment(row, n) = Eigen::VectorXd::Constant(n, params.v_min) - vel_sx;
  row += n;
  // Safety gap: -M_x S_u U >= d_safe - x_p + M_x S_x x_k, i.e. x_p - x1 >= d_safe.
  set.g.middleRows(row, n) = -pos_su;
  for (int i = 0; i < n; ++i) {
    if (x_p.x_p[i] >= kNoPedestrianAhead) {
      set.h(row + i) = kVacuousRhs;
      ++set.vacuous_safety_rows;
    } else {
      set.h(row + i) = d_safe - x_p.x_p[i] + pos_sx(i);
    }
  }
  return set;
}

QpProblem assemble_qp(const PredictionMatrices& mats, const VehicleState& x_k,
                      double u_prev, const FrontGapSequence& x_p,
                      const VehicleParams& params, double d_safe, double v_ref,
                      const Eigen::MatrixXd& q_weight, int step_index) {
  const CostTerms cost = build_cost(mats, x_k, v_ref, q_weight);
  ConstraintSet set = build_constraints(mats, x_k, u_prev, x_p, params, d_safe);
  QpProblem qp;
  qp.h_mat = cost.h;
  qp.f_vec = cost.f;
  qp.g = std::move(set.g);
  qp.h = std::move(set.h);
  qp.step_index = step_index;
  qp.vacuous_safety_rows = set.vacuous_safety_rows;
  return qp;
}

namespace {

void dump_dense(const char* name, const Eigen::MatrixXd& m, std::ostream& out) {
  out << "%%MatrixMarket matrix array real general\n";
  out << "% " << name << "\n" << m.rows() << " " << m.cols() << "\n";
  out.precision(17);
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) out << m(r, c) << "\n";
}

}  // namespace

void dump_qp(const QpProblem& qp, std::ostream& out) {
  out << "% qp step " << qp.step_index << " vacuous_safety_rows "
      << qp.vacuous_safety_rows << "\n";
  dump_dense("H", qp.h_mat, out);
  dump_dense("F", qp.f_vec, out);
  dump_dense("G", qp.g, out);
  dump_dense("h", qp.h, out);
}

}  // namespace crowdmpc
