#ifndef ELASTICA_LINEAR_HPP
#define ELASTICA_LINEAR_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace elastica {

// Direct solver for systems whose trailing `border` rows and columns are
// dense while the leading block is sparse (the difference block of the
// discretization). Block elimination:
//   [A B; C D] [x; y] = [f; g],  S = D - C A^{-1} B,
//   y = S^{-1} (g - C A^{-1} f),  x = A^{-1} f - (A^{-1} B) y.
// The determinant sign of the full matrix is sign(det A) * sign(det S).
class BorderedSolver {
public:
    // `full` is the complete (na+k) x (na+k) matrix, k = border.
    void factorize(const Eigen::SparseMatrix<double>& full, int border);

    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

    int det_sign() const { return det_sign_; }
    bool singular() const { return singular_; }

    // Relative pivot threshold below which the factorization is declared
    // singular.
    static constexpr double kPivotTol = 1e-14;

private:
    int na_ = 0;
    int border_ = 0;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
    Eigen::MatrixXd ainv_b_;   // A^{-1} B
    Eigen::MatrixXd c_;
    Eigen::PartialPivLU<Eigen::MatrixXd> schur_;
    int det_sign_ = 0;
    bool singular_ = false;
};

} // namespace elastica

#endif
