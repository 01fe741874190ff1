#include "newspop/models/validation.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace newspop::models {

using ordered_json = nlohmann::ordered_json;

std::vector<int> stratified_folds(const std::vector<int>& y, int n_classes, int k, std::uint64_t seed,
                                  std::vector<std::string>* warnings) {
    if (k < 2) throw DataError("cross-validation needs k >= 2");
    if (y.size() < static_cast<std::size_t>(k)) {
        throw DataError("cross-validation needs at least k = " + std::to_string(k) + " samples, got " +
                        std::to_string(y.size()));
    }
    std::vector<std::vector<int>> members(static_cast<std::size_t>(n_classes));
    for (std::size_t i = 0; i < y.size(); ++i) members[static_cast<std::size_t>(y[i])].push_back(static_cast<int>(i));

    std::vector<int> fold(y.size(), -1);
    int next = 0;
    for (int c = 0; c < n_classes; ++c) {
        auto& m = members[static_cast<std::size_t>(c)];
        if (m.empty()) continue;
        if (warnings && m.size() < static_cast<std::size_t>(k)) {
            warnings->push_back("class " + std::to_string(c) + " has " + std::to_string(m.size()) +
                                " members, fewer than k; stratification relaxed");
        }
        auto rng = make_stream(seed, 0xf01d00 + static_cast<std::uint64_t>(c));
        std::shuffle(m.begin(), m.end(), rng);
        for (int i : m) {
            fold[static_cast<std::size_t>(i)] = next;
            next = (next + 1) % k;
        }
    }
    return fold;
}

CvReport cross_validate(const ClassDataset& data, Algorithm algorithm, const ClassifierParams& params, int k,
                        std::uint64_t seed) {
    CvReport report;
    report.k = k;
    report.classes = data.classes;
    const auto K = data.classes.size();
    report.fold_of = stratified_folds(data.y, static_cast<int>(K), k, seed, &report.warnings);
    report.confusion.assign(K, std::vector<std::size_t>(K, 0));

    std::size_t correct_total = 0;
    for (int f = 0; f < k; ++f) {
        std::vector<int> train_idx, test_idx;
        for (std::size_t i = 0; i < data.size(); ++i) {
            (report.fold_of[i] == f ? test_idx : train_idx).push_back(static_cast<int>(i));
        }
        if (test_idx.empty()) {
            report.fold_accuracy.push_back(0);
            continue;
        }
        auto model = ClassifierModel::fit(subset(data, train_idx), algorithm, params, seed);
        std::size_t correct = 0;
        for (int i : test_idx) {
            const int actual = data.y[static_cast<std::size_t>(i)];
            const int predicted = model.predict(data.X.row(i));
            ++report.confusion[static_cast<std::size_t>(actual)][static_cast<std::size_t>(predicted)];
            if (actual == predicted) ++correct;
        }
        correct_total += correct;
        report.fold_accuracy.push_back(static_cast<double>(correct) / static_cast<double>(test_idx.size()));
    }
    report.pooled_accuracy = static_cast<double>(correct_total) / static_cast<double>(data.size());
    return report;
}

ordered_json CvReport::to_json() const {
    ordered_json j;
    j["k"] = k;
    j["classes"] = classes;
    j["pooled_accuracy"] = pooled_accuracy;
    j["fold_accuracy"] = fold_accuracy;
    j["confusion"] = confusion;
    j["warnings"] = warnings;
    return j;
}

std::vector<FeatureGroup> default_feature_groups() {
    return {{"source", {"S"}},
            {"category", {"C"}},
            {"subjectivity", {"Subj"}},
            {"entities", {"Ent_ct", "Ent_max", "Ent_avg"}}};
}

std::vector<AblationRow> ablate_features(const ClassDataset& data, Algorithm algorithm, const ClassifierParams& params,
                                         const std::vector<FeatureGroup>& groups, int k, std::uint64_t seed) {
    std::vector<std::string> seen;
    for (const auto& g : groups) {
        for (const auto& c : g.columns) {
            if (std::find(data.columns.begin(), data.columns.end(), c) == data.columns.end()) {
                throw DataError("feature group '" + g.name + "' names unknown column '" + c + "'");
            }
            if (std::find(seen.begin(), seen.end(), c) != seen.end()) {
                throw DataError("feature groups overlap on column '" + c + "'");
            }
            seen.push_back(c);
        }
    }
    std::vector<AblationRow> rows;
    rows.push_back({"all", cross_validate(data, algorithm, params, k, seed).pooled_accuracy});
    for (const auto& g : groups) {
        rows.push_back({g.name, cross_validate(drop_columns(data, g.columns), algorithm, params, k, seed).pooled_accuracy});
    }
    return rows;
}

std::vector<std::string> zero_tweet_labels(const std::vector<double>& tweets) {
    std::vector<std::string> labels;
    labels.reserve(tweets.size());
    for (double t : tweets) labels.push_back(t > 0 ? kNonzeroLabel : kZeroLabel);
    return labels;
}

ClassifierModel fit_zero_tweet(const std::vector<scoring::FeatureVector>& features, const std::vector<double>& tweets,
                               Algorithm algorithm, const ClassifierParams& params, std::uint64_t seed,
                               bool log_scores) {
    const auto labels = zero_tweet_labels(tweets);
    const bool has_zero = std::find(labels.begin(), labels.end(), kZeroLabel) != labels.end();
    const bool has_nonzero = std::find(labels.begin(), labels.end(), kNonzeroLabel) != labels.end();
    if (!has_zero || !has_nonzero) throw DataError("zero-tweet model needs both zero and nonzero articles");
    return ClassifierModel::fit(make_class_dataset(features, labels, log_scores), algorithm, params, seed);
}

}  // namespace newspop::models
