#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>

#include <json.hpp>

#include "newspop/models/classifiers.hpp"
#include "newspop/models/knn.hpp"
#include "newspop/models/regression.hpp"

namespace newspop::models {

enum class ArtifactKind { regression, knn, classifier, zero_tweet };

std::string_view to_string(ArtifactKind k);

/// A trained model plus everything needed to trace it back to its inputs.
struct ModelArtifact {
    ArtifactKind kind = ArtifactKind::regression;
    std::variant<RegressionModel, KnnRegressor, ClassifierModel> model;
    ClassScheme class_scheme;
    std::uint64_t seed = 0;
    bool log_scores = true;
    /// Fingerprint of the training configuration (flags and scoring config).
    std::string config_fingerprint;
    /// Fingerprint of the score tables the features were assembled from.
    std::string tables_fingerprint;
    /// Id-set fingerprint of the training articles.
    std::string train_fingerprint;
    /// Latest publication time in the training data (not wall-clock time, so
    /// reruns stay byte-identical).
    std::string trained_at;

    /// "log_linear", "power_transform", "knn" or a classifier algorithm.
    std::string algorithm_name() const;

    const RegressionModel* regression() const { return std::get_if<RegressionModel>(&model); }
    const KnnRegressor* knn() const { return std::get_if<KnnRegressor>(&model); }
    const ClassifierModel* classifier() const { return std::get_if<ClassifierModel>(&model); }

    nlohmann::ordered_json to_json() const;
    static ModelArtifact from_json(const nlohmann::json& j);

    void save(const std::filesystem::path& path) const;
    static ModelArtifact load(const std::filesystem::path& path);

    /// Fingerprint of the serialized artifact.
    std::string fingerprint() const;
};

}  // namespace newspop::models
