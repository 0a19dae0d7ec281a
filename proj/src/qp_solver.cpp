#include "crowdmpc/qp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace crowdmpc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Scaled {
  Eigen::MatrixXd g;      // row-equilibrated constraint matrix
  Eigen::VectorXd h;      // matching right-hand side
  Eigen::VectorXd scale;  // per-row inf norm used (1 for zero rows)
};

Scaled equilibrate(const QpProblem& qp) {
  Scaled s;
  s.g = qp.g;
  s.h = qp.h;
  s.scale = Eigen::VectorXd::Ones(qp.g.rows());
  for (Eigen::Index i = 0; i < qp.g.rows(); ++i) {
    const double norm = qp.g.row(i).cwiseAbs().maxCoeff();
    if (norm > 1e-300) {
      s.scale(i) = norm;
      s.g.row(i) /= norm;
      s.h(i) /= norm;
    }
  }
  return s;
}

}  // namespace

double kkt_residual(const QpProblem& qp, const QpSolution& sol) {
  if (sol.status != QpStatus::optimal)
    throw std::invalid_argument("kkt_residual requires an optimal solution");
  const Eigen::VectorXd grad = 2.0 * qp.h_mat * sol.u + 2.0 * qp.f_vec;
  double residual = 0.0;
  if (qp.g.rows() == 0) {
    residual = grad.lpNorm<Eigen::Infinity>();
  } else {
    const Eigen::VectorXd stat = grad - qp.g.transpose() * sol.duals;
    residual = stat.lpNorm<Eigen::Infinity>();
    const Eigen::VectorXd slack = qp.g * sol.u - qp.h;
    for (Eigen::Index i = 0; i < slack.size(); ++i) {
      residual = std::max(residual, -slack(i));                       // primal
      residual = std::max(residual, -sol.duals(i));                   // dual
      residual = std::max(residual, std::abs(sol.duals(i) * slack(i)));  // comp. slack
    }
  }
  return residual;
}

QpSolution QpSolver::solve(const QpProblem& qp) {
  const Eigen::Index n = qp.h_mat.rows();
  const Eigen::Index m = qp.g.rows();
  const Eigen::MatrixXd p = 2.0 * qp.h_mat;
  const Eigen::VectorXd q = 2.0 * qp.f_vec;

  QpSolution sol;
  sol.u.setZero(n);
  sol.duals.setZero(m);

  Eigen::LLT<Eigen::MatrixXd> llt(p);
  if (llt.info() != Eigen::Success) {
    // Tiny ridge keeps semidefinite corner cases factorizable.
    const double ridge = 1e-12 * (p.trace() / n + 1.0);
    llt.compute(p + ridge * Eigen::MatrixXd::Identity(n, n));
    if (llt.info() != Eigen::Success)
      throw std::invalid_argument("cost matrix is not positive semidefinite");
  }

  const Scaled sc = m > 0 ? equilibrate(qp) : Scaled{};

  // A zero row is either vacuous or unconditionally infeasible.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (qp.g.row(i).cwiseAbs().maxCoeff() <= 1e-300 && sc.h(i) > opts_.feas_tol) {
      sol.status = QpStatus::infeasible;
      sol.certificate.setZero(m);
      sol.certificate(i) = 1.0;
      sol.iterations = 1;
      warm_.clear();
      return sol;
    }
  }

  Eigen::VectorXd x = llt.solve(-q);
  std::vector<int> active;
  std::vector<double> lambda;
  int iterations = 0;

  auto finalize = [&](QpStatus status) {
    sol.status = status;
    sol.iterations = iterations;
    if (status == QpStatus::optimal) {
      sol.u = x;
      sol.objective = x.dot(qp.h_mat * x) + 2.0 * qp.f_vec.dot(x);
      sol.active_set = active;
      std::sort(sol.active_set.begin(), sol.active_set.end());
      for (std::size_t j = 0; j < active.size(); ++j)
        sol.duals(active[j]) = lambda[j] / sc.scale(active[j]);
      sol.kkt_residual = kkt_residual(qp, sol);
      warm_ = sol.active_set;
    } else {
      warm_.clear();
    }
    return sol;
  };

  // Warm start: re-solve the equality-constrained problem on the previous
  // active set; accept it when it is KKT-consistent and primal feasible.
  if (!warm_.empty() &&
      *std::max_element(warm_.begin(), warm_.end()) < static_cast<int>(m) &&
      static_cast<Eigen::Index>(warm_.size()) <= n) {
    const Eigen::Index k = static_cast<Eigen::Index>(warm_.size());
    Eigen::MatrixXd normals(n, k);
    Eigen::VectorXd rhs(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      normals.col(j) = sc.g.row(warm_[j]).transpose();
      rhs(j) = sc.h(warm_[j]);
    }
    const Eigen::MatrixXd pinv_n = llt.solve(normals);
    const Eigen::MatrixXd kkt = normals.transpose() * pinv_n;
    Eigen::LDLT<Eigen::MatrixXd> kkt_ldlt(kkt);
    if (kkt_ldlt.info() == Eigen::Success) {
      const Eigen::VectorXd mult = kkt_ldlt.solve(rhs + normals.transpose() * llt.solve(q));
      const Eigen::VectorXd cand = llt.solve(normals * mult - q);
      const bool consistent =
          (normals.transpose() * cand - rhs).lpNorm<Eigen::Infinity>() <= 1e-6 &&
          mult.minCoeff() >= -opts_.feas_tol;
      if (consistent &&
          (m == 0 || (sc.g * cand - sc.h).minCoeff() >= -opts_.feas_tol)) {
        iterations = 1;
        x = cand;
        active = warm_;
        lambda.assign(mult.data(), mult.data() + mult.size());
        return finalize(QpStatus::optimal);
      }
    }
  }

  while (true) {
    if (++iterations > opts_.max_iter) return finalize(QpStatus::iteration_limit);

    // Most violated inactive constraint, lowest index on ties.
    int pick = -1;
    double worst = opts_.feas_tol;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (std::find(active.begin(), active.end(), static_cast<int>(i)) != active.end())
        continue;
      const double violation = sc.h(i) - sc.g.row(i).dot(x);
      if (violation > worst) {
        worst = violation;
        pick = static_cast<int>(i);
      }
    }
    if (pick < 0) return finalize(QpStatus::optimal);

    const Eigen::VectorXd np = sc.g.row(pick).transpose();
    double u_plus = 0.0;

    while (true) {
      const Eigen::Index k = static_cast<Eigen::Index>(active.size());
      const Eigen::VectorXd pinv_np = llt.solve(np);
      Eigen::VectorXd z;
      Eigen::VectorXd r;
      if (k == 0) {
        z = pinv_np;
      } else {
        Eigen::MatrixXd normals(n, k);
        for (Eigen::Index j = 0; j < k; ++j)
          normals.col(j) = sc.g.row(active[j]).transpose();
        const Eigen::MatrixXd pinv_n = llt.solve(normals);
        const Eigen::MatrixXd kkt = normals.transpose() * pinv_n;
        r = kkt.ldlt().solve(normals.transpose() * pinv_np);
        z = pinv_np - pinv_n * r;
      }

      const bool z_zero = z.norm() <= 1e-10 * (pinv_np.norm() + 1e-300);

      // Partial step: first active dual driven to zero.
      double t1 = kInf;
      int drop = -1;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (r(j) > 1e-12) {
          const double cand = lambda[j] / r(j);
          if (cand < t1) {
            t1 = cand;
            drop = static_cast<int>(j);
          }
        }
      }

      const double slack = np.dot(x) - sc.h(pick);  // negative while violated
      double t2 = kInf;
      if (!z_zero) {
        const double znp = z.dot(np);
        if (znp > 0.0) t2 = -slack / znp;
      }

      if (t1 == kInf && t2 == kInf) {
        // np is a nonpositive combination of active normals: Farkas certificate.
        sol.certificate.setZero(m);
        sol.certificate(pick) = 1.0 / sc.scale(pick);
        for (Eigen::Index j = 0; j < k; ++j)
          sol.certificate(active[j]) = std::max(0.0, -r(j)) / sc.scale(active[j]);
        return finalize(QpStatus::infeasible);
      }

      const double t = std::min(t1, t2);
      if (!z_zero) x += t * z;
      for (Eigen::Index j = 0; j < k; ++j) lambda[j] -= t * r(j);
      u_plus += t;

      if (t2 <= t1) {
        active.push_back(pick);
        lambda.push_back(u_plus);
        break;
      }
      active.erase(active.begin() + drop);
      lambda.erase(lambda.begin() + drop);
      if (++iterations > opts_.max_iter) return finalize(QpStatus::iteration_limit);
    }
  }
}

}  // namespace crowdmpc
