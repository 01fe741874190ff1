#include "newspop/pipeline.hpp"

#include <algorithm>
#include <fstream>

#include "newspop/models/dataset.hpp"
#include "newspop/models/validation.hpp"

namespace newspop::pipeline {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

json read_json(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

scoring::ScoreTable load_table(const fs::path& path, scoring::TableKind expected) {
    auto table = scoring::ScoreTable::from_json(read_json(path));
    if (table.kind != expected) {
        throw DataError(path.string() + ": expected a " + std::string(scoring::to_string(expected)) + " table");
    }
    return table;
}

std::string string_field(const json& j, const char* name) {
    if (!j.contains(name) || j.at(name).is_null()) return {};
    if (!j.at(name).is_string()) throw RequestError(name, std::string(name) + " must be a string");
    return j.at(name).get<std::string>();
}

}  // namespace

std::string FeatureContext::fingerprint() const {
    return Fingerprint{}
        .add(tables.fingerprint())
        .add(subjectivity.to_json().dump())
        .add(gazetteer.fingerprint())
        .hex();
}

scoring::FeatureVector FeatureContext::features(const corpus::Article& article) const {
    return scoring::assemble_features(article, tables, subjectivity, gazetteer);
}

std::vector<scoring::FeatureVector> FeatureContext::features(const std::vector<corpus::Article>& articles) const {
    std::vector<scoring::FeatureVector> out;
    out.reserve(articles.size());
    for (const auto& a : articles) out.push_back(features(a));
    return out;
}

void FeatureContext::save(const fs::path& dir) const {
    corpus::write_text(dir / kSourceScores, tables.source.to_json().dump(2) + "\n");
    corpus::write_text(dir / kCategoryScores, tables.category.to_json().dump(2) + "\n");
    corpus::write_text(dir / kEntityScores, tables.entity.to_json().dump(2) + "\n");
    corpus::write_text(dir / kSubjectivity, subjectivity.to_json().dump(2) + "\n");
    corpus::write_text(dir / kGazetteer, gazetteer.to_tsv());
}

FeatureContext FeatureContext::load(const fs::path& dir) {
    FeatureContext c;
    c.tables.source = load_table(dir / kSourceScores, scoring::TableKind::source);
    c.tables.category = load_table(dir / kCategoryScores, scoring::TableKind::category);
    c.tables.entity = load_table(dir / kEntityScores, scoring::TableKind::entity);
    c.subjectivity = textfeat::SubjectivityModel::from_json(read_json(dir / kSubjectivity));
    c.gazetteer = textfeat::Gazetteer::load_tsv(dir / kGazetteer);
    return c;
}

void PredictRequest::validate() const {
    if (title.empty() && summary.empty()) throw RequestError("title", "title or summary must be non-empty");
    if (source.empty()) throw RequestError("source", "source must be a non-empty string");
    if (category.empty()) throw RequestError("category", "category must be a non-empty string");
}

corpus::Article PredictRequest::to_article() const {
    corpus::Article a;
    a.id = "request";
    a.source = source;
    a.category = category;
    a.title = title;
    a.summary = summary;
    return a;
}

PredictRequest PredictRequest::from_json(const json& j) {
    if (!j.is_object()) throw RequestError("", "request body must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key != "title" && key != "summary" && key != "source" && key != "category") {
            throw RequestError(key, "unknown field '" + key + "'");
        }
    }
    PredictRequest r;
    r.title = string_field(j, "title");
    r.summary = string_field(j, "summary");
    r.source = string_field(j, "source");
    r.category = string_field(j, "category");
    r.validate();
    return r;
}

ordered_json PredictResponse::to_json() const {
    ordered_json j;
    j["features"] = scoring::to_json(features);
    j["regression_estimate"] = regression_estimate;
    j["predicted_class"] = predicted_class;
    j["class_distribution"] = class_distribution;
    j["zero_tweet_probability"] = zero_tweet_probability;
    j["model_fingerprint"] = model_fingerprint;
    return j;
}

void Bundle::seal() {
    if (regression.kind != models::ArtifactKind::regression && regression.kind != models::ArtifactKind::knn) {
        throw DataError("bundle: regression model has kind " + std::string(models::to_string(regression.kind)));
    }
    if (classifier.kind != models::ArtifactKind::classifier) {
        throw DataError("bundle: classifier model has kind " + std::string(models::to_string(classifier.kind)));
    }
    if (zero_tweet.kind != models::ArtifactKind::zero_tweet) {
        throw DataError("bundle: zero-tweet model has kind " + std::string(models::to_string(zero_tweet.kind)));
    }
    const auto expected = context.fingerprint();
    for (const auto* a : {&regression, &classifier, &zero_tweet}) {
        if (a->tables_fingerprint != expected) {
            throw DataError("bundle: inconsistent fingerprints: " + a->algorithm_name() + " model was trained against " +
                            a->tables_fingerprint + ", loaded feature context is " + expected);
        }
    }
    fingerprint_ = Fingerprint{}
                       .add(expected)
                       .add(regression.fingerprint())
                       .add(classifier.fingerprint())
                       .add(zero_tweet.fingerprint())
                       .hex();
}

Bundle Bundle::load(const fs::path& dir) {
    Bundle b;
    b.context = FeatureContext::load(dir);
    b.regression = models::ModelArtifact::load(dir / kRegression);
    b.classifier = models::ModelArtifact::load(dir / kClassifier);
    b.zero_tweet = models::ModelArtifact::load(dir / kZeroTweet);
    b.seal();
    return b;
}

ordered_json Bundle::metadata() const {
    auto describe = [](const models::ModelArtifact& a) {
        ordered_json j;
        j["kind"] = models::to_string(a.kind);
        j["algorithm"] = a.algorithm_name();
        j["fingerprint"] = a.fingerprint();
        j["config_fingerprint"] = a.config_fingerprint;
        j["train_fingerprint"] = a.train_fingerprint;
        j["trained_at"] = a.trained_at;
        j["seed"] = a.seed;
        return j;
    };
    ordered_json j;
    j["model_fingerprint"] = fingerprint();
    j["feature_fingerprint"] = context.fingerprint();
    j["tables"] = {{"source", context.tables.source.fingerprint()},
                   {"category", context.tables.category.fingerprint()},
                   {"entity", context.tables.entity.fingerprint()}};
    j["regression"] = describe(regression);
    j["classifier"] = describe(classifier);
    j["zero_tweet"] = describe(zero_tweet);
    j["class_scheme"] = classifier.class_scheme.to_json();
    return j;
}

double regression_estimate(const models::ModelArtifact& artifact, const scoring::FeatureVector& fv) {
    if (const auto* r = artifact.regression()) {
        if (r->form == models::RegressionForm::log_linear && (!(fv.S > 0) || !(fv.C > 0))) return 0.0;
        return models::predict_regression(*r, fv);
    }
    if (const auto* k = artifact.knn()) return k->predict(fv);
    throw DataError("artifact is not a regression model");
}

PredictResponse predict(const Bundle& bundle, const PredictRequest& request) {
    request.validate();
    PredictResponse r;
    r.features = bundle.context.features(request.to_article());
    r.regression_estimate = regression_estimate(bundle.regression, r.features);

    const auto& clf = *bundle.classifier.classifier();
    const auto dist = clf.distribution(models::feature_row(r.features, bundle.classifier.log_scores));
    const double total = dist.sum();
    Eigen::Index best = 0;
    for (Eigen::Index c = 0; c < dist.size(); ++c) {
        r.class_distribution[clf.classes()[static_cast<std::size_t>(c)]] = dist(c) / total;
        if (dist(c) > dist(best)) best = c;
    }
    r.predicted_class = clf.classes()[static_cast<std::size_t>(best)];

    const auto& zero = *bundle.zero_tweet.classifier();
    const auto zdist = zero.distribution(models::feature_row(r.features, bundle.zero_tweet.log_scores));
    const auto& zc = zero.classes();
    const auto it = std::find(zc.begin(), zc.end(), models::kZeroLabel);
    r.zero_tweet_probability = it == zc.end() ? 0.0 : zdist(it - zc.begin()) / zdist.sum();
    r.model_fingerprint = bundle.fingerprint();
    return r;
}

}  // namespace newspop::pipeline
