#pragma once

#include <vector>

#include <json.hpp>

#include "newspop/linalg.hpp"
#include "newspop/models/regression.hpp"

namespace newspop::models {

struct KnnConfig {
    int K = 7;
    bool log_scores = true;
};

/// K-nearest-neighbour regression: mean label of the K training rows closest
/// in Euclidean distance after per-feature standardization. Distance ties go
/// to the lower training index.
class KnnRegressor {
public:
    KnnRegressor() = default;

    /// Throws DataError on an empty training set or K outside [1, n].
    static KnnRegressor fit(const linalg::MatrixXd& X, const linalg::VectorXd& y, int K);
    static KnnRegressor fit(const std::vector<RegressionSample>& train, const KnnConfig& cfg);

    double predict(const linalg::RowVectorXd& x) const;
    double predict(const scoring::FeatureVector& fv) const;

    /// Training indices of the K neighbours of `x`, nearest first.
    std::vector<int> neighbours(const linalg::RowVectorXd& x) const;

    int K() const { return K_; }
    bool log_scores() const { return log_scores_; }
    const linalg::Standardizer<double>& standardizer() const { return scaler_; }

    nlohmann::ordered_json to_json() const;
    static KnnRegressor from_json(const nlohmann::json& j);

private:
    int K_ = 1;
    bool log_scores_ = true;
    linalg::Standardizer<double> scaler_;
    linalg::MatrixXd raw_;
    linalg::MatrixXd points_;
    linalg::VectorXd labels_;
};

/// Library-level convenience: fit on `train` and predict one vector.
double knn_predict(const std::vector<RegressionSample>& train, const scoring::FeatureVector& fv, const KnnConfig& cfg);

}  // namespace newspop::models
