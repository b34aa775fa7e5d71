#include "ghe/nnls.hpp"

#include <cmath>
#include <vector>

#include "ghe/errors.hpp"

namespace ghe {

namespace {

// Unconstrained least squares on the columns in `passive`.
Eigen::VectorXd solve_subset(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const std::vector<bool>& passive) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        if (passive[j]) cols.push_back(j);
    Eigen::MatrixXd As(A.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) As.col(k) = A.col(cols[k]);
    const Eigen::VectorXd zs = As.colPivHouseholderQr().solve(b);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(A.cols());
    for (std::size_t k = 0; k < cols.size(); ++k) z[cols[k]] = zs[k];
    return z;
}

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol, int max_iter) {
    if (A.rows() != b.size()) throw ValidationError("nnls: A and b have different row counts");
    if (A.cols() == 0) throw ValidationError("nnls: no columns");
    const Eigen::Index n = A.cols();
    if (max_iter <= 0) max_iter = static_cast<int>(3 * n);

    NnlsResult out;
    out.x = Eigen::VectorXd::Zero(n);
    std::vector<bool> passive(n, false);
    Eigen::VectorXd w = A.transpose() * b;
    const double dual_tol = tol * std::max(1.0, w.cwiseAbs().maxCoeff());

    for (;;) {
        // Most positive dual component among the active (zero) set.
        Eigen::Index t = -1;
        double best = dual_tol;
        for (Eigen::Index j = 0; j < n; ++j)
            if (!passive[j] && w[j] > best) {
                best = w[j];
                t = j;
            }
        if (t < 0) break;
        if (++out.iterations > max_iter) throw NumericalError("nnls: iteration limit reached");
        passive[t] = true;

        for (;;) {
            Eigen::VectorXd z = solve_subset(A, b, passive);
            bool feasible = true;
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[j] && z[j] <= 0.0) feasible = false;
            if (feasible) {
                out.x = z;
                break;
            }
            // Step back to the boundary and release the components that hit it.
            double a = 1.0;
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[j] && z[j] <= 0.0) a = std::min(a, out.x[j] / (out.x[j] - z[j]));
            out.x += a * (z - out.x);
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[j] && out.x[j] <= 1e-300) {
                    passive[j] = false;
                    out.x[j] = 0.0;
                }
        }
        w = A.transpose() * (b - A * out.x);
    }
    out.residual_norm = (A * out.x - b).norm();
    return out;
}

}  // namespace ghe
