#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "newspop/common.hpp"

namespace newspop::textfeat {

/// Splits on ASCII non-alphanumerics and lowercases. Bytes >= 0x80 count as
/// word characters so UTF-8 words stay whole. Empty tokens are dropped.
std::vector<std::string> tokenize(std::string_view text);

enum class Label { objective = 0, subjective = 1 };

struct LabeledDoc {
    std::string text;
    Label label = Label::objective;
};

/// Reads labeled_docs.jsonl ({text, label}); label is "subjective" or "objective".
std::vector<LabeledDoc> load_labeled_docs(const std::filesystem::path& path);

/// Two-class multinomial naive Bayes over word unigrams with add-k smoothing.
class SubjectivityModel {
public:
    struct Counts {
        double subjective = 0;
        double objective = 0;
    };

    SubjectivityModel() = default;

    /// Throws DataError on an empty or single-class corpus.
    static SubjectivityModel train(const std::vector<LabeledDoc>& docs, double smoothing = 1.0);

    /// 1 = subjective, 0 = objective. Tokens outside the vocabulary are
    /// ignored; equal scores resolve to 0.
    int classify(std::string_view text) const;

    /// Log prior plus smoothed log likelihood, indexed by Label.
    std::array<double, 2> log_scores(std::string_view text) const;

    const std::map<std::string, Counts>& vocabulary() const { return vocab_; }
    std::array<double, 2> priors() const { return priors_; }
    double smoothing() const { return smoothing_; }
    const std::string& trained_on() const { return trained_on_; }

    nlohmann::ordered_json to_json() const;
    static SubjectivityModel from_json(const nlohmann::json& j);

private:
    std::map<std::string, Counts> vocab_;
    std::array<double, 2> priors_{0.5, 0.5};
    std::array<double, 2> totals_{0, 0};
    double smoothing_ = 1.0;
    std::string trained_on_;
};

enum class EntityKind { person, place, organization };

std::string_view to_string(EntityKind k);

class Gazetteer {
public:
    /// Entity ids are the normalized names (tokenized, single-spaced).
    void add(std::string_view name, EntityKind kind);

    static Gazetteer load_tsv(const std::filesystem::path& path);
    static Gazetteer parse_tsv(std::string_view text);
    std::string to_tsv() const;

    bool contains(const std::string& id) const { return entries_.count(id) > 0; }
    std::size_t size() const { return entries_.size(); }
    std::size_t max_tokens() const { return max_tokens_; }
    const std::map<std::string, EntityKind>& entries() const { return entries_; }
    std::string fingerprint() const;

private:
    std::map<std::string, EntityKind> entries_;
    std::size_t max_tokens_ = 0;
};

struct ExtractOptions {
    /// Also report runs of capitalized tokens that are not in the gazetteer
    /// (the first token of the text is never treated as a name start).
    bool capitalized_heuristic = false;
};

/// Longest-match scan over the token sequence. Each entity is reported once,
/// in order of first occurrence.
std::vector<std::string> extract_entities(std::string_view text, const Gazetteer& gazetteer,
                                          const ExtractOptions& opts = {});

}  // namespace newspop::textfeat
