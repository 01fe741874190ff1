#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "newspop/models/classifiers.hpp"
#include "newspop/models/regression.hpp"

namespace newspop::models {

/// Seeded stratified fold assignment: each class's members are shuffled and
/// dealt round-robin, continuing from where the previous class stopped, so
/// per-fold class counts differ from n_c / k by less than one. Classes with
/// fewer than k members produce a warning.
std::vector<int> stratified_folds(const std::vector<int>& y, int n_classes, int k, std::uint64_t seed,
                                  std::vector<std::string>* warnings = nullptr);

struct CvReport {
    int k = 10;
    std::vector<std::string> classes;
    std::vector<double> fold_accuracy;
    double pooled_accuracy = 0;
    /// confusion[actual][predicted]
    std::vector<std::vector<std::size_t>> confusion;
    std::vector<int> fold_of;
    std::vector<std::string> warnings;

    nlohmann::ordered_json to_json() const;
};

CvReport cross_validate(const ClassDataset& data, Algorithm algorithm, const ClassifierParams& params, int k,
                        std::uint64_t seed);

struct FeatureGroup {
    std::string name;
    std::vector<std::string> columns;
};

/// {source}, {category}, {subjectivity}, {entities}.
std::vector<FeatureGroup> default_feature_groups();

struct AblationRow {
    /// "all" for the baseline, otherwise the omitted group.
    std::string omitted;
    double accuracy = 0;
};

/// Baseline plus one cross-validation run per omitted group, same seed.
std::vector<AblationRow> ablate_features(const ClassDataset& data, Algorithm algorithm, const ClassifierParams& params,
                                         const std::vector<FeatureGroup>& groups, int k, std::uint64_t seed);

inline const std::string kZeroLabel = "zero";
inline const std::string kNonzeroLabel = "nonzero";

/// Binary zero / nonzero labels for tweet counts.
std::vector<std::string> zero_tweet_labels(const std::vector<double>& tweets);

/// Fits the binary zero-tweet classifier. Throws DataError unless both zero
/// and nonzero examples are present.
ClassifierModel fit_zero_tweet(const std::vector<scoring::FeatureVector>& features, const std::vector<double>& tweets,
                               Algorithm algorithm, const ClassifierParams& params, std::uint64_t seed,
                               bool log_scores = true);

}  // namespace newspop::models
