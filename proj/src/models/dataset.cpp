#include "newspop/models/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace newspop::models {

using linalg::MatrixXd;
using linalg::RowVectorXd;

RowVectorXd feature_row(const scoring::FeatureVector& fv, bool log_scores) {
    RowVectorXd r(6);
    r << (log_scores ? std::log1p(fv.S) : fv.S), (log_scores ? std::log1p(fv.C) : fv.C), static_cast<double>(fv.Subj),
        static_cast<double>(fv.Ent_ct), fv.Ent_max, fv.Ent_avg;
    return r;
}

MatrixXd feature_matrix(const std::vector<scoring::FeatureVector>& fvs, bool log_scores) {
    MatrixXd X(static_cast<Eigen::Index>(fvs.size()), 6);
    for (std::size_t i = 0; i < fvs.size(); ++i) X.row(static_cast<Eigen::Index>(i)) = feature_row(fvs[i], log_scores);
    return X;
}

ClassDataset make_class_dataset(MatrixXd X, const std::vector<std::string>& labels, std::vector<std::string> columns) {
    if (static_cast<std::size_t>(X.rows()) != labels.size()) throw DataError("feature rows and labels differ in count");
    if (static_cast<std::size_t>(X.cols()) != columns.size()) throw DataError("column names do not match matrix width");
    ClassDataset d;
    d.classes = labels;
    std::sort(d.classes.begin(), d.classes.end());
    d.classes.erase(std::unique(d.classes.begin(), d.classes.end()), d.classes.end());
    std::map<std::string, int> index;
    for (std::size_t c = 0; c < d.classes.size(); ++c) index[d.classes[c]] = static_cast<int>(c);
    d.y.reserve(labels.size());
    for (const auto& l : labels) d.y.push_back(index.at(l));
    d.X = std::move(X);
    d.columns = std::move(columns);
    return d;
}

ClassDataset make_class_dataset(const std::vector<scoring::FeatureVector>& fvs, const std::vector<std::string>& labels,
                                bool log_scores) {
    return make_class_dataset(feature_matrix(fvs, log_scores), labels, kFeatureNames);
}

ClassDataset drop_columns(const ClassDataset& data, const std::vector<std::string>& names) {
    std::vector<Eigen::Index> keep;
    ClassDataset out;
    for (std::size_t c = 0; c < data.columns.size(); ++c) {
        if (std::find(names.begin(), names.end(), data.columns[c]) != names.end()) continue;
        keep.push_back(static_cast<Eigen::Index>(c));
        out.columns.push_back(data.columns[c]);
    }
    out.X = data.X(Eigen::all, keep);
    out.y = data.y;
    out.classes = data.classes;
    return out;
}

ClassDataset subset(const ClassDataset& data, const std::vector<int>& idx) {
    ClassDataset out;
    out.X = data.X(idx, Eigen::all);
    out.y.reserve(idx.size());
    for (int i : idx) out.y.push_back(data.y[static_cast<std::size_t>(i)]);
    out.classes = data.classes;
    out.columns = data.columns;
    return out;
}

}  // namespace newspop::models
