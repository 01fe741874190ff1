#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "newspop/corpus.hpp"
#include "newspop/textfeat.hpp"

namespace newspop::scoring {

enum class TableKind { source, category, entity };

std::string_view to_string(TableKind k);

/// Key -> t-density (tweets per link), plus the fallback used for unseen keys.
struct ScoreTable {
    TableKind kind = TableKind::source;
    std::map<std::string, double> scores;
    double global_mean = 0;
    std::string built_from;

    /// Score for `key` (normalized first), or global_mean when absent.
    double lookup(std::string_view key) const;
    bool contains(std::string_view key) const;

    nlohmann::ordered_json to_json() const;
    static ScoreTable from_json(const nlohmann::json& j);
    std::string fingerprint() const;

    bool operator==(const ScoreTable&) const = default;
};

struct ScoringConfig {
    int window_days = 54;
    double ema_alpha = 0.3;
    bool consistency_weighting = true;
    /// Feed ln(1 + score) instead of raw S and C to distance/margin learners.
    bool log_transform_scores = true;
    int entity_window_days = 30;

    std::string fingerprint() const;
};

/// Tweets per link. Throws DomainError when links == 0.
double t_density(std::int64_t links, double tweets);

/// Per-category t-density over a labeled scoring set.
ScoreTable build_category_scores(const std::vector<corpus::Article>& scoring_set);

/// Smoothed, consistency-weighted source scores over the `cfg.window_days`
/// days before `as_of`. Only records of kind source are read.
ScoreTable build_source_scores(const std::vector<corpus::HistoryRecord>& history, const ScoringConfig& cfg,
                               corpus::Date as_of);

/// Plain window t-density (sum tweets / sum links) per key of `kind`.
ScoreTable build_window_density(const std::vector<corpus::HistoryRecord>& history, corpus::HistoryKind kind,
                                int window_days, corpus::Date as_of);

/// Entity scores: plain window t-density over `cfg.entity_window_days`.
ScoreTable build_entity_scores(const std::vector<corpus::HistoryRecord>& history, const ScoringConfig& cfg,
                               corpus::Date as_of);

enum class SweepScore {
    /// Plain history t-density per window.
    window_density,
    /// Full source scoring (smoothing and weighting) per window.
    source_score,
};

struct SweepPoint {
    int window = 0;
    double correlation = 0;
    std::size_t sources = 0;
};

/// Pearson correlation between window-built source scores and the
/// `labels` (source -> observed t-density), one point per window.
std::vector<SweepPoint> sweep_history_window(const std::vector<corpus::HistoryRecord>& history,
                                             const std::map<std::string, double>& labels,
                                             const std::vector<int>& windows, corpus::Date as_of,
                                             const ScoringConfig& cfg = {},
                                             SweepScore mode = SweepScore::window_density);

/// Observed per-source t-density of a labeled article set.
std::map<std::string, double> source_t_density(const std::vector<corpus::Article>& articles);

struct FeatureVector {
    double S = 0;
    double C = 0;
    int Subj = 0;
    int Ent_ct = 0;
    double Ent_max = 0;
    double Ent_avg = 0;

    bool operator==(const FeatureVector&) const = default;
};

nlohmann::ordered_json to_json(const FeatureVector& fv);

struct ScoreTables {
    ScoreTable source;
    ScoreTable category;
    ScoreTable entity;

    std::string fingerprint() const;
};

FeatureVector assemble_features(const corpus::Article& article, const ScoreTables& tables,
                                const textfeat::SubjectivityModel& subj, const textfeat::Gazetteer& gazetteer);

/// Entity aggregates only (Ent_ct, Ent_max, Ent_avg) for a list of ids.
void aggregate_entities(const std::vector<std::string>& entity_ids, const ScoreTable& entity_table, FeatureVector& fv);

}  // namespace newspop::scoring
