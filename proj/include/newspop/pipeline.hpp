#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "newspop/corpus.hpp"
#include "newspop/models/artifact.hpp"
#include "newspop/scoring.hpp"
#include "newspop/textfeat.hpp"

namespace newspop::pipeline {

inline constexpr const char* kSourceScores = "source_scores.json";
inline constexpr const char* kCategoryScores = "category_scores.json";
inline constexpr const char* kEntityScores = "entity_scores.json";
inline constexpr const char* kSubjectivity = "subjectivity.json";
inline constexpr const char* kGazetteer = "gazetteer.tsv";
inline constexpr const char* kRegression = "regression.json";
inline constexpr const char* kClassifier = "classifier.json";
inline constexpr const char* kZeroTweet = "zero_tweet.json";

/// Everything assemble_features needs.
struct FeatureContext {
    scoring::ScoreTables tables;
    textfeat::SubjectivityModel subjectivity;
    textfeat::Gazetteer gazetteer;

    /// Covers the three tables, the subjectivity model and the gazetteer.
    std::string fingerprint() const;
    scoring::FeatureVector features(const corpus::Article& article) const;
    std::vector<scoring::FeatureVector> features(const std::vector<corpus::Article>& articles) const;

    void save(const std::filesystem::path& dir) const;
    static FeatureContext load(const std::filesystem::path& dir);
};

/// A malformed prediction request; `field` names the offending field.
class RequestError : public DataError {
public:
    RequestError(std::string field, const std::string& message) : DataError(message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct PredictRequest {
    std::string title;
    std::string summary;
    std::string source;
    std::string category;

    /// Throws RequestError when title and summary are both empty or source
    /// or category is empty.
    void validate() const;
    corpus::Article to_article() const;
    static PredictRequest from_json(const nlohmann::json& j);
};

struct PredictResponse {
    scoring::FeatureVector features;
    double regression_estimate = 0;
    std::string predicted_class;
    std::map<std::string, double> class_distribution;
    double zero_tweet_probability = 0;
    std::string model_fingerprint;

    nlohmann::ordered_json to_json() const;
};

/// Feature context plus the three trained models, loaded once.
struct Bundle {
    FeatureContext context;
    models::ModelArtifact regression;
    models::ModelArtifact classifier;
    models::ModelArtifact zero_tweet;

    /// Throws DataError when a file is missing, a model has the wrong kind,
    /// or a model was trained against a different feature context.
    static Bundle load(const std::filesystem::path& dir);
    /// Runs the consistency checks and caches the bundle fingerprint; call
    /// after assembling a bundle by hand.
    void seal();
    const std::string& fingerprint() const { return fingerprint_; }
    nlohmann::ordered_json metadata() const;

private:
    std::string fingerprint_;
};

/// Regression estimate for one feature vector; 0 when the log form is
/// outside its domain (S or C not positive).
double regression_estimate(const models::ModelArtifact& artifact, const scoring::FeatureVector& fv);

PredictResponse predict(const Bundle& bundle, const PredictRequest& request);

}  // namespace newspop::pipeline
