#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "newspop/corpus.hpp"
#include "newspop/models/artifact.hpp"
#include "newspop/models/validation.hpp"
#include "newspop/scoring.hpp"

namespace newspop::eval {

/// Held-out rows for evaluation.
struct LabeledFeatures {
    std::vector<scoring::FeatureVector> features;
    std::vector<double> tweets;
    /// Id-set fingerprint of the articles the rows came from.
    std::string fingerprint;
};

struct RatingComparison {
    std::size_t overlap = 0;
    double links = 0;
    double tweets = 0;
    double t_density = 0;

    nlohmann::ordered_json to_json() const;
};

struct EvalReport {
    std::string model;
    std::size_t n = 0;
    std::optional<double> r_squared_log_space;
    std::optional<double> r_squared_raw;
    std::optional<double> mse_raw;
    std::optional<double> accuracy;
    std::vector<std::string> classes;
    /// confusion[actual][predicted]
    std::vector<std::vector<std::size_t>> confusion;
    std::vector<models::AblationRow> ablation;
    std::vector<scoring::SweepPoint> window_sweep;
    std::optional<RatingComparison> ratings;
    std::vector<std::string> notes;

    nlohmann::ordered_json to_json() const;
    static EvalReport from_json(const nlohmann::json& j);
    bool operator==(const EvalReport& other) const;
};

/// Applies `artifact` to `test`. Regression models are scored on rows with
/// tweets >= 1 (and S, C > 0 for the log form); class models on rows with
/// tweets >= 1; zero-tweet models on every row. Throws DataError on an empty
/// test set or when the test fingerprint equals the training fingerprint.
EvalReport evaluate(const models::ModelArtifact& artifact, const LabeledFeatures& test);

/// Accuracy and confusion for given label indices.
void fill_classification(EvalReport& report, const std::vector<std::string>& classes, const std::vector<int>& actual,
                         const std::vector<int>& predicted);

struct DistributionBin {
    int index = 0;              // bin covers [index*width, (index+1)*width) in log10 tweets
    double log10_lower = 0;
    std::size_t count = 0;
    double log10_count = 0;
    /// Integer tweet values inside the bin.
    std::size_t integers = 0;
    /// log10 of count per integer value: the frequency-plot ordinate.
    double log10_density = 0;
    /// log10 of the geometric centre of the bin's integer range.
    double log10_center = 0;
};

struct Distribution {
    double bin_width = 0.1;
    std::vector<DistributionBin> bins;
    std::size_t zero_count = 0;
    std::size_t total = 0;
};

/// Logarithmic histogram of positive tweet counts; zero-tweet articles are
/// counted separately.
Distribution emit_distribution(const std::vector<double>& tweets, double bin_width = 0.1);
Distribution emit_distribution(const std::vector<corpus::Article>& articles, double bin_width = 0.1);

/// Least-squares slope of log10_density on log10_center over bins holding at
/// least `min_count` articles, from the most populated bin onward.
double distribution_slope(const Distribution& d, std::size_t min_count = 5);

double pearson(const std::vector<double>& x, const std::vector<double>& y);

struct ExternalRating {
    std::string source;
    double rating = 0;
};

/// ratings.tsv: source<TAB>rating per line; sources are normalized.
std::vector<ExternalRating> load_ratings(const std::filesystem::path& path);
std::vector<ExternalRating> parse_ratings(std::string_view text);

struct SourceAggregate {
    std::int64_t links = 0;
    double tweets = 0;
    double t_density = 0;
};

std::map<std::string, SourceAggregate> aggregate_sources(const std::vector<corpus::Article>& articles);

/// Pearson correlation of ratings with per-source links, tweets and
/// t-density over the sources present in both. Throws DataError for fewer
/// than 3 overlapping sources.
RatingComparison compare_ratings(const std::vector<ExternalRating>& ratings,
                                 const std::map<std::string, SourceAggregate>& aggregates);

enum class ReportFormat { json, csv_bundle };

/// json: writes `path` (a file). csv_bundle: writes one CSV per report
/// field into directory `path`.
void emit_report(const EvalReport& report, const std::filesystem::path& path, ReportFormat format);

std::string distribution_csv(const Distribution& d);
std::string sweep_csv(const std::vector<scoring::SweepPoint>& sweep);

}  // namespace newspop::eval
