#ifndef SAS_LEVMAR_HPP
#define SAS_LEVMAR_HPP

#include <Eigen/Dense>
#include <functional>

namespace sas {

// residual(theta) -> vector of weighted residuals (length >= theta size).
using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct LevmarOptions {
  double param_tol = 1e-10;      // relative parameter change convergence test
  int max_iterations = 10000;
  double lambda0 = 1e-3;
  double lambda_up = 10.0;
  double lambda_down = 0.1;
};

struct LevmarOutput {
  Eigen::VectorXd params;
  Eigen::MatrixXd covariance;  // (J^T J)^-1, unscaled
  double residual_norm = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Levenberg-Marquardt least squares with a forward-difference Jacobian.
LevmarOutput levmar_fit(const ResidualFn& residual, const Eigen::VectorXd& initial,
                        const LevmarOptions& options = {});

}  // namespace sas

#endif
