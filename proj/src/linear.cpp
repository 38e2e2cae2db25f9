#include "elastica/linear.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "elastica/errors.hpp"

namespace elastica {

void BorderedSolver::factorize(const Eigen::SparseMatrix<double>& full, int border) {
    border_ = border;
    na_ = int(full.rows()) - border;
    if (na_ <= 0 || full.rows() != full.cols())
        throw std::invalid_argument("bordered solver needs a square matrix wider than its border");

    // Route entries into the difference block A and the dense borders. The
    // constraint rows/columns are dense anyway, so nothing is lost here.
    std::vector<Eigen::Triplet<double>> atrip;
    atrip.reserve(full.nonZeros());
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(na_, border_);
    c_ = Eigen::MatrixXd::Zero(border_, na_);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(border_, border_);
    for (int k = 0; k < full.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(full, k); it; ++it) {
            const int i = int(it.row()), j = int(it.col());
            if (i < na_ && j < na_) atrip.emplace_back(i, j, it.value());
            else if (i < na_) B(i, j - na_) = it.value();
            else if (j < na_) c_(i - na_, j) = it.value();
            else D(i - na_, j - na_) = it.value();
        }
    }
    Eigen::SparseMatrix<double> A(na_, na_);
    A.setFromTriplets(atrip.begin(), atrip.end());
    A.makeCompressed();

    singular_ = false;
    det_sign_ = 0;
    lu_.compute(A);
    if (lu_.info() != Eigen::Success) {
        singular_ = true;
        return;
    }
    ainv_b_ = lu_.solve(B);
    schur_.compute(D - c_ * ainv_b_);

    const Eigen::MatrixXd& slu = schur_.matrixLU();
    double scale = 0.0, smallest = std::numeric_limits<double>::max();
    for (int i = 0; i < border_; ++i) {
        const double d = std::abs(slu(i, i));
        scale = std::max(scale, d);
        smallest = std::min(smallest, d);
    }
    if (!(smallest > kPivotTol * std::max(scale, 1.0))) {
        singular_ = true;
        return;
    }
    const double sdet = schur_.determinant();
    const int ssign = (sdet > 0.0) - (sdet < 0.0);
    det_sign_ = int(lu_.signDeterminant()) * ssign;
}

Eigen::VectorXd BorderedSolver::solve(const Eigen::VectorXd& rhs) const {
    if (singular_) throw SingularSystemError("bordered factorization is rank deficient");
    if (rhs.size() != na_ + border_)
        throw std::invalid_argument("right-hand side size mismatch");
    const Eigen::VectorXd y = lu_.solve(rhs.head(na_));
    const Eigen::VectorXd z = schur_.solve(rhs.tail(border_) - c_ * y);
    Eigen::VectorXd x(na_ + border_);
    x.head(na_) = y - ainv_b_ * z;
    x.tail(border_) = z;
    return x;
}

} // namespace elastica
