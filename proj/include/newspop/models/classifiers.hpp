#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "newspop/linalg.hpp"
#include "newspop/models/dataset.hpp"

namespace newspop::models {

/// Half-open popularity ranges: [1, b0) -> labels[0], [b0, b1) -> labels[1], ...
struct ClassScheme {
    std::vector<double> boundaries{20, 100};
    std::vector<std::string> labels{"A", "B", "C"};

    /// Throws DataError for tweets < 1 ("zero-tweet article has no class").
    const std::string& assign(double tweets) const;
    void validate() const;

    nlohmann::ordered_json to_json() const;
    static ClassScheme from_json(const nlohmann::json& j);
};

std::string assign_class(double tweets, const ClassScheme& scheme = {});

enum class Algorithm { naive_bayes, decision_tree, bagging, linear_margin };

std::string_view to_string(Algorithm a);
Algorithm algorithm_from_string(std::string_view s);

struct ClassifierParams {
    // decision_tree / bagging
    int max_depth = 12;
    int min_leaf = 5;
    int n_trees = 10;
    // linear_margin
    int epochs = 20;
    double lambda = 1e-3;
    double eta0 = 0.1;
    // naive_bayes
    double variance_floor = 1e-9;

    void validate(Algorithm a) const;
    nlohmann::ordered_json to_json() const;
    static ClassifierParams from_json(const nlohmann::json& j);
};

/// CART tree: Gini impurity, binary numeric splits at midpoints. Among equal
/// impurity candidates the lowest feature index, then the lowest threshold,
/// wins. Leaves store class frequencies.
struct DecisionTree {
    struct Node {
        int feature = -1;  // -1 for a leaf
        double threshold = 0;
        int left = -1;
        int right = -1;
        std::vector<double> distribution;
    };
    std::vector<Node> nodes;

    static DecisionTree fit(const linalg::MatrixXd& X, const std::vector<int>& y, int n_classes, int max_depth,
                            int min_leaf);
    const std::vector<double>& leaf_distribution(const linalg::RowVectorXd& x) const;
    int depth() const;
};

/// Row indices of the bootstrap sample drawn for tree `tree_index`.
std::vector<int> bootstrap_indices(std::size_t n, std::uint64_t seed, int tree_index);

class ClassifierModel {
public:
    ClassifierModel() = default;

    /// Fits on standardized copies of `data.X`; zero-variance columns are
    /// dropped and recorded. Throws DataError unless two classes are present.
    static ClassifierModel fit(const ClassDataset& data, Algorithm algorithm, const ClassifierParams& params,
                               std::uint64_t seed);

    /// Normalized class scores (vote shares, posteriors or softmax margins).
    linalg::VectorXd distribution(const linalg::RowVectorXd& x) const;
    /// Argmax of distribution(); ties go to the lexicographically smallest class.
    int predict(const linalg::RowVectorXd& x) const;
    const std::string& predict_label(const linalg::RowVectorXd& x) const { return classes_[static_cast<std::size_t>(predict(x))]; }
    std::vector<int> predict_all(const linalg::MatrixXd& X) const;

    Algorithm algorithm() const { return algorithm_; }
    const std::vector<std::string>& classes() const { return classes_; }
    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::string>& dropped_columns() const { return dropped_; }
    const ClassifierParams& params() const { return params_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<DecisionTree>& trees() const { return trees_; }

    nlohmann::ordered_json to_json() const;
    static ClassifierModel from_json(const nlohmann::json& j);

private:
    linalg::VectorXd raw_scores(const linalg::RowVectorXd& z) const;

    Algorithm algorithm_ = Algorithm::decision_tree;
    ClassifierParams params_;
    std::uint64_t seed_ = 0;
    std::vector<std::string> classes_;
    std::vector<std::string> columns_;
    std::vector<std::string> dropped_;
    linalg::Standardizer<double> scaler_;

    // naive_bayes
    linalg::VectorXd log_prior_;
    linalg::MatrixXd nb_mean_;
    linalg::MatrixXd nb_var_;
    // decision_tree (one) and bagging (many)
    std::vector<DecisionTree> trees_;
    // linear_margin, one row per class plus bias
    linalg::MatrixXd weights_;
    linalg::VectorXd bias_;
};

ClassifierModel fit_classifier(const ClassDataset& train, Algorithm algorithm, const ClassifierParams& params,
                               std::uint64_t seed);

}  // namespace newspop::models
