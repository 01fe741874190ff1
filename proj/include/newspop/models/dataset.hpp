#pragma once

#include <string>
#include <vector>

#include "newspop/linalg.hpp"
#include "newspop/scoring.hpp"

namespace newspop::models {

/// Column order of every feature matrix.
inline const std::vector<std::string> kFeatureNames{"S", "C", "Subj", "Ent_ct", "Ent_max", "Ent_avg"};

/// One model input row. With `log_scores`, S and C enter as ln(1 + score).
linalg::RowVectorXd feature_row(const scoring::FeatureVector& fv, bool log_scores);
linalg::MatrixXd feature_matrix(const std::vector<scoring::FeatureVector>& fvs, bool log_scores);

/// Labeled rows for classification. `y` indexes into `classes`, which is
/// sorted lexicographically.
struct ClassDataset {
    linalg::MatrixXd X;
    std::vector<int> y;
    std::vector<std::string> classes;
    std::vector<std::string> columns;

    std::size_t size() const { return y.size(); }
};

ClassDataset make_class_dataset(linalg::MatrixXd X, const std::vector<std::string>& labels,
                                std::vector<std::string> columns);

ClassDataset make_class_dataset(const std::vector<scoring::FeatureVector>& fvs, const std::vector<std::string>& labels,
                                bool log_scores);

/// Copy without the named columns.
ClassDataset drop_columns(const ClassDataset& data, const std::vector<std::string>& names);

/// Rows `idx` of `data`.
ClassDataset subset(const ClassDataset& data, const std::vector<int>& idx);

}  // namespace newspop::models
