#include "linalg/least_squares.hpp"

#include "vaxcast/error.hpp"

namespace vaxcast::linalg {

LeastSquaresFit least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                              std::span<const std::string> names, bool want_inverse) {
    const Eigen::Index n = x.rows(), k = x.cols();
    if (n < k) throw DomainError("least squares: fewer rows than columns");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(kRankTolerance);
    if (qr.rank() < k) {
        std::vector<std::string> dependent;
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index j = qr.rank(); j < k; ++j) {
            const auto col = static_cast<std::size_t>(perm[j]);
            dependent.push_back(col < names.size() ? names[col] : "column " + std::to_string(col));
        }
        std::string msg = "rank-deficient design; dependent columns:";
        for (const auto& d : dependent) msg += " " + d;
        throw RankError(msg, std::move(dependent));
    }

    LeastSquaresFit fit;
    fit.coef = qr.solve(y);
    fit.residuals = y - x * fit.coef;
    fit.rss = fit.residuals.squaredNorm();
    if (want_inverse) {
        // R^-1 R^-T in pivoted order, then undo the permutation.
        const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
        const Eigen::MatrixXd r_inv =
            r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
        const Eigen::MatrixXd pivoted = r_inv * r_inv.transpose();
        const auto& p = qr.colsPermutation();
        fit.xtx_inverse = p * pivoted * p.transpose();
    }
    return fit;
}

}  // namespace vaxcast::linalg
