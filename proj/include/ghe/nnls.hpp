#pragma once

#include <Eigen/Dense>

namespace ghe {

struct NnlsResult {
    Eigen::VectorXd x;
    double residual_norm = 0.0;
    int iterations = 0;
};

/// min ||A x - b||_2 subject to x >= 0, by the Lawson-Hanson active-set method.
/// `tol` is relative to max |A^T b| and decides when the dual is non-positive.
NnlsResult nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol = 1e-12, int max_iter = 0);

}  // namespace ghe
