#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "newspop/corpus.hpp"
#include "newspop/eval.hpp"
#include "newspop/scoring.hpp"
#include "newspop/textfeat.hpp"

namespace newspop::synth {

/// How tweet labels are drawn.
enum class LabelMode {
    /// ln T = b_S ln S + b_C ln C + b_Entmax Ent_max + intercept (+ b_subj Subj) + noise,
    /// evaluated on the features the pipeline will assemble.
    log_linear,
    /// ln T = b_S ln S + intercept + noise.
    source_only,
    /// T = planted source rate * exp(noise); tracks the true rate, not the windowed score.
    source_rate,
    /// T drawn from a truncated discrete power law independent of the features.
    power_law,
};

std::string_view to_string(LabelMode m);
LabelMode label_mode_from_string(std::string_view s);

struct SynthConfig {
    std::uint64_t seed = 7;
    int n_articles = 10000;
    int n_sources = 200;
    int n_categories = 8;
    int n_entities = 120;

    /// Planted per-source t-density: exp(N(mu, sigma)).
    double source_rate_mu = 4.1;
    double source_rate_sigma = 0.8;
    /// Per-source article volume weight: exp(N(0, sigma)).
    double source_volume_sigma = 1.0;
    double entity_rate_mu = 1.0;
    double entity_rate_sigma = 0.5;

    std::string start_date = "2011-03-01";
    int history_days = 120;
    int corpus_days = 30;
    /// Mean daily links per source (scaled by volume) and per entity in history.
    double daily_links = 4.0;
    double entity_daily_links = 3.0;
    /// Gamma shape of the per-day tweet-rate multiplier; larger is less noisy.
    double daily_dispersion = 2.0;
    int max_entities_per_article = 3;

    LabelMode label_mode = LabelMode::log_linear;
    double b_S = 1.24;
    double b_C = 0.45;
    double b_Entmax = 0.1;
    double intercept = -3.0;
    double noise_sigma = 0.0;
    bool subjectivity_null = true;
    double b_subj = 0.5;

    double power_law_exponent = -2.0;
    std::int64_t power_law_max = 100000;

    bool zero_rule = false;
    double zero_threshold = 1.0;
    double zero_noise_rate = 0.0;

    double spam_fraction = 0.0;
    bool integer_tweets = false;
    double ratings_noise = 0.1;
    int labeled_docs_per_class = 60;

    /// Throws DataError naming the offending field.
    void validate() const;
    /// Sets one field from its key=value text form. Throws DataError on an
    /// unknown key or unparsable value.
    void set(const std::string& key, const std::string& value);
    nlohmann::ordered_json to_json() const;
    std::string fingerprint() const;
};

struct SynthResult {
    SynthConfig config;
    corpus::Date as_of{};
    std::vector<corpus::Article> articles;
    std::vector<corpus::HistoryRecord> history;
    textfeat::Gazetteer gazetteer;
    std::vector<textfeat::LabeledDoc> labeled_docs;
    std::vector<eval::ExternalRating> ratings;
    /// Pipeline features per article, aligned with `articles`.
    std::vector<scoring::FeatureVector> features;
    std::vector<std::string> spam_ids;
    nlohmann::ordered_json ground_truth;
};

/// Deterministic for a fixed config. Throws DataError on an infeasible config.
SynthResult generate(const SynthConfig& cfg);

/// Writes articles.jsonl, history.jsonl, gazetteer.tsv, labeled_docs.jsonl,
/// ratings.tsv and ground_truth.json into `dir`.
void write(const SynthResult& result, const std::filesystem::path& dir);

}  // namespace newspop::synth
