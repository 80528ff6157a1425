#include "sas/levmar.hpp"

#include <cmath>
#include <limits>

namespace sas {

namespace {

Eigen::MatrixXd forward_jacobian(const ResidualFn& residual, const Eigen::VectorXd& theta,
                                 const Eigen::VectorXd& r0) {
  const auto n = theta.size();
  Eigen::MatrixXd j(r0.size(), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double h = 1e-7 * std::max(1.0, std::abs(theta[k]));
    Eigen::VectorXd t = theta;
    t[k] += h;
    j.col(k) = (residual(t) - r0) / h;
  }
  return j;
}

}  // namespace

LevmarOutput levmar_fit(const ResidualFn& residual, const Eigen::VectorXd& initial,
                        const LevmarOptions& options) {
  LevmarOutput out;
  Eigen::VectorXd theta = initial;
  Eigen::VectorXd r = residual(theta);
  double cost = r.squaredNorm();
  double lambda = options.lambda0;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    out.iterations = iter + 1;
    const Eigen::MatrixXd j = forward_jacobian(residual, theta, r);
    const Eigen::MatrixXd jtj = j.transpose() * j;
    const Eigen::VectorXd jtr = j.transpose() * r;

    Eigen::MatrixXd damped = jtj;
    damped.diagonal().array() += lambda * jtj.diagonal().array().max(1e-12);
    const Eigen::VectorXd step = damped.ldlt().solve(-jtr);
    if (!step.allFinite()) {
      lambda *= options.lambda_up;
      continue;
    }

    const Eigen::VectorXd trial = theta + step;
    const Eigen::VectorXd r_trial = residual(trial);
    const double cost_trial = r_trial.squaredNorm();

    if (std::isfinite(cost_trial) && cost_trial <= cost) {
      const double rel = step.norm() / std::max(1.0, theta.norm());
      theta = trial;
      r = r_trial;
      cost = cost_trial;
      lambda = std::max(lambda * options.lambda_down, 1e-14);
      if (rel < options.param_tol) {
        out.converged = true;
        break;
      }
    } else {
      lambda *= options.lambda_up;
      if (lambda > 1e14) break;  // no downhill direction left at any damping
    }
  }

  out.params = theta;
  out.residual_norm = std::sqrt(cost);
  const Eigen::MatrixXd j = forward_jacobian(residual, theta, r);
  const Eigen::MatrixXd jtj = j.transpose() * j;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
  if (lu.isInvertible()) {
    out.covariance = lu.inverse();
  } else {
    out.covariance = Eigen::MatrixXd::Constant(theta.size(), theta.size(),
                                               std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

}  // namespace sas
