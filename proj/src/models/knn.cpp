#include "newspop/models/knn.hpp"

#include <algorithm>
#include <numeric>

#include "newspop/models/dataset.hpp"

namespace newspop::models {

using linalg::MatrixXd;
using linalg::RowVectorXd;
using linalg::VectorXd;
using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

KnnRegressor KnnRegressor::fit(const MatrixXd& X, const VectorXd& y, int K) {
    if (X.rows() == 0) throw DataError("KNN needs a non-empty training set");
    if (X.rows() != y.size()) throw DataError("KNN rows and labels differ in count");
    if (K < 1 || K > X.rows()) {
        throw DataError("KNN K must be in [1, " + std::to_string(X.rows()) + "], got " + std::to_string(K));
    }
    KnnRegressor m;
    m.K_ = K;
    m.scaler_ = linalg::Standardizer<double>::fit(X);
    m.raw_ = X;
    m.points_ = m.scaler_.transform(X);
    m.labels_ = y;
    return m;
}

KnnRegressor KnnRegressor::fit(const std::vector<RegressionSample>& train, const KnnConfig& cfg) {
    std::vector<FeatureVector> fvs;
    VectorXd y(static_cast<Eigen::Index>(train.size()));
    for (std::size_t i = 0; i < train.size(); ++i) {
        fvs.push_back(train[i].features);
        y(static_cast<Eigen::Index>(i)) = train[i].tweets;
    }
    auto m = fit(feature_matrix(fvs, cfg.log_scores), y, cfg.K);
    m.log_scores_ = cfg.log_scores;
    return m;
}

std::vector<int> KnnRegressor::neighbours(const RowVectorXd& x) const {
    const RowVectorXd q = scaler_.transform(x);
    const VectorXd d = linalg::squared_distances(points_, q);
    std::vector<int> idx(static_cast<std::size_t>(d.size()));
    std::iota(idx.begin(), idx.end(), 0);
    auto closer = [&](int a, int b) { return d(a) < d(b) || (d(a) == d(b) && a < b); };
    std::partial_sort(idx.begin(), idx.begin() + K_, idx.end(), closer);
    idx.resize(static_cast<std::size_t>(K_));
    return idx;
}

double KnnRegressor::predict(const RowVectorXd& x) const {
    double sum = 0;
    for (int i : neighbours(x)) sum += labels_(i);
    return sum / K_;
}

double KnnRegressor::predict(const FeatureVector& fv) const { return predict(feature_row(fv, log_scores_)); }

ordered_json KnnRegressor::to_json() const {
    ordered_json j;
    j["K"] = K_;
    j["log_scores"] = log_scores_;
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < raw_.rows(); ++i) {
        ordered_json r = ordered_json::array();
        for (Eigen::Index c = 0; c < raw_.cols(); ++c) r.push_back(raw_(i, c));
        r.push_back(labels_(i));
        rows.push_back(std::move(r));
    }
    j["training_rows"] = std::move(rows);
    return j;
}

KnnRegressor KnnRegressor::from_json(const json& j) {
    try {
        const auto& rows = j.at("training_rows");
        if (!rows.is_array() || rows.empty()) throw DataError("KNN model has no training rows");
        const auto width = static_cast<Eigen::Index>(rows.at(0).size()) - 1;
        MatrixXd X(static_cast<Eigen::Index>(rows.size()), width);
        VectorXd y(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (static_cast<Eigen::Index>(r.size()) != width + 1) throw DataError("ragged KNN training rows");
            for (Eigen::Index c = 0; c < width; ++c) X(static_cast<Eigen::Index>(i), c) = r[static_cast<std::size_t>(c)].get<double>();
            y(static_cast<Eigen::Index>(i)) = r.back().get<double>();
        }
        auto m = fit(X, y, j.at("K").get<int>());
        m.log_scores_ = j.at("log_scores").get<bool>();
        return m;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed KNN model: ") + e.what());
    }
}

double knn_predict(const std::vector<RegressionSample>& train, const FeatureVector& fv, const KnnConfig& cfg) {
    return KnnRegressor::fit(train, cfg).predict(fv);
}

}  // namespace newspop::models
