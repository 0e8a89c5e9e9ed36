#pragma once

// Minimum-norm least squares and its Tychonoff approximation
//   x_lambda = (A^T A + lambda^2 I)^{-1} A^T b  ->  x_LS  as lambda -> 0,
// plus recovery of controls b(t) = X^+ gamma'(t) along sampled paths.

#include <Eigen/Dense>

#include <vector>

namespace liebox {

/// Solves (A^T A + lambda^2 I) x = A^T b by a Cholesky factorization carried
/// out in 113-bit binary floating point, then rounds to double.
Eigen::VectorXd tychonoff_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double lambda);

struct MinNormResult {
    Eigen::VectorXd x;
    int rank = 0;
    double residual = 0.0;   // ||A x - b||
    double threshold = 0.0;  // absolute singular value cutoff used
};

/// SVD based; singular values below rel_tol * sigma_max count as zero.
MinNormResult min_norm_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double rel_tol = 1e-10);

struct ControlRecovery {
    std::vector<Eigen::VectorXd> controls;
    std::vector<double> residuals;
    double max_norm = 0.0;
    double max_residual = 0.0;
    bool horizontal = true;  // every residual within tolerance
};

/// fields[i] is the n x p matrix [X_1..X_p] at gamma(t_i); velocities[i] is gamma'(t_i).
ControlRecovery recover_controls(const std::vector<Eigen::MatrixXd>& fields,
                                 const std::vector<Eigen::VectorXd>& velocities, double tol = 1e-8);

}  // namespace liebox
