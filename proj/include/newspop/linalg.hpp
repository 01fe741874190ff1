#pragma once

// Dense numeric kernels shared by scoring, models and eval. Everything here is
// a free function template over Eigen dense types so callers can pass blocks,
// maps and expressions without copies.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "newspop/common.hpp"

namespace newspop::linalg {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;
using RowVectorXd = RowVector<double>;

/// Population variance.
template <typename Derived>
typename Derived::Scalar variance(const Eigen::MatrixBase<Derived>& x) {
    const auto mean = x.mean();
    return (x.array() - mean).square().mean();
}

/// Pearson product-moment correlation. Throws DomainError when either input
/// has zero variance or the lengths differ or are below 3.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar pearson(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y) {
    using Scalar = typename DerivedX::Scalar;
    if (x.size() != y.size()) throw DomainError("pearson: length mismatch");
    if (x.size() < 3) throw DomainError("pearson: need at least 3 points");
    const auto dx = (x.array() - x.mean()).eval();
    const auto dy = (y.array() - y.mean()).eval();
    const Scalar sxx = dx.square().sum();
    const Scalar syy = dy.square().sum();
    if (!(sxx > 0) || !(syy > 0)) throw DomainError("pearson: zero variance");
    const Scalar r = (dx * dy).sum() / std::sqrt(sxx * syy);
    return std::clamp(r, Scalar(-1), Scalar(1));
}

/// 1 - MSE/VAR with population variance of `actual`.
template <typename DerivedP, typename DerivedA>
typename DerivedA::Scalar r_squared(const Eigen::MatrixBase<DerivedP>& predicted, const Eigen::MatrixBase<DerivedA>& actual) {
    if (predicted.size() != actual.size()) throw DomainError("r_squared: length mismatch");
    if (actual.size() < 2) throw DomainError("r_squared: need at least 2 points");
    const auto var = variance(actual);
    if (!(var > 0)) throw DomainError("r_squared: actuals have zero variance");
    const auto mse = (predicted - actual).array().square().mean();
    return 1 - mse / var;
}

template <typename DerivedP, typename DerivedA>
typename DerivedA::Scalar mean_squared_error(const Eigen::MatrixBase<DerivedP>& predicted,
                                            const Eigen::MatrixBase<DerivedA>& actual) {
    return (predicted - actual).array().square().mean();
}

/// Least-squares slope of y on x (with intercept).
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar slope(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y) {
    const auto dx = (x.array() - x.mean()).eval();
    const auto sxx = dx.square().sum();
    if (!(sxx > 0)) throw DomainError("slope: x has zero variance");
    return (dx * (y.array() - y.mean())).sum() / sxx;
}

/// Per-column affine standardization (population sd). Columns whose sd is
/// zero on the fitting data are dropped and listed in `dropped`.
template <typename Scalar>
struct Standardizer {
    std::vector<int> kept;
    std::vector<int> dropped;
    Vector<Scalar> mean;
    Vector<Scalar> sd;

    template <typename Derived>
    static Standardizer fit(const Eigen::MatrixBase<Derived>& X) {
        Standardizer s;
        std::vector<Scalar> means, sds;
        for (Eigen::Index c = 0; c < X.cols(); ++c) {
            const Scalar m = X.col(c).mean();
            const Scalar v = (X.col(c).array() - m).square().mean();
            const Scalar sd = std::sqrt(v);
            if (sd > 0 && std::isfinite(sd)) {
                s.kept.push_back(static_cast<int>(c));
                means.push_back(m);
                sds.push_back(sd);
            } else {
                s.dropped.push_back(static_cast<int>(c));
            }
        }
        s.mean = Eigen::Map<Vector<Scalar>>(means.data(), static_cast<Eigen::Index>(means.size()));
        s.sd = Eigen::Map<Vector<Scalar>>(sds.data(), static_cast<Eigen::Index>(sds.size()));
        return s;
    }

    template <typename Derived>
    Matrix<Scalar> transform(const Eigen::MatrixBase<Derived>& X) const {
        Matrix<Scalar> out(X.rows(), static_cast<Eigen::Index>(kept.size()));
        for (Eigen::Index j = 0; j < out.cols(); ++j) {
            out.col(j) = (X.col(kept[static_cast<std::size_t>(j)]).array() - mean(j)) / sd(j);
        }
        return out;
    }
};

/// Squared Euclidean distance from `query` to every row of `points`.
template <typename DerivedP, typename DerivedQ>
Vector<typename DerivedP::Scalar> squared_distances(const Eigen::MatrixBase<DerivedP>& points,
                                                    const Eigen::MatrixBase<DerivedQ>& query) {
    return (points.rowwise() - query.derived()).rowwise().squaredNorm();
}

template <typename Scalar>
struct LeastSquares {
    Vector<Scalar> coefficients;
    Vector<Scalar> fitted;
};

/// Ordinary least squares of y on the columns of X via column-pivoted QR.
/// Throws DataError("collinear features: ...") naming every column that is a
/// linear combination of the columns before it.
template <typename DerivedX, typename DerivedY>
LeastSquares<typename DerivedX::Scalar> least_squares(const Eigen::MatrixBase<DerivedX>& X,
                                                      const Eigen::MatrixBase<DerivedY>& y,
                                                      const std::vector<std::string>& column_names) {
    using Scalar = typename DerivedX::Scalar;
    const Matrix<Scalar> A = X;
    Eigen::ColPivHouseholderQR<Matrix<Scalar>> qr(A);
    qr.setThreshold(Scalar(1e-10));
    if (qr.rank() < A.cols()) {
        std::string names;
        Eigen::Index rank = 0;
        for (Eigen::Index c = 0; c < A.cols(); ++c) {
            Eigen::ColPivHouseholderQR<Matrix<Scalar>> prefix(A.leftCols(c + 1));
            prefix.setThreshold(Scalar(1e-10));
            if (prefix.rank() == rank) {
                if (!names.empty()) names += ", ";
                names += c < static_cast<Eigen::Index>(column_names.size()) ? column_names[static_cast<std::size_t>(c)]
                                                                            : "col" + std::to_string(c);
            } else {
                rank = prefix.rank();
            }
        }
        throw DataError("collinear features: " + names);
    }
    LeastSquares<Scalar> out;
    out.coefficients = qr.solve(y.derived().template cast<Scalar>());
    out.fitted = A * out.coefficients;
    return out;
}

}  // namespace newspop::linalg
