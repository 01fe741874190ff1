#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "newspop/common.hpp"

namespace newspop::corpus {

using Timestamp = std::chrono::sys_seconds;
using Date = std::chrono::sys_days;

/// Parses "YYYY-MM-DDTHH:MM:SSZ" (fractional seconds and "+00:00" accepted).
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);
/// Parses "YYYY-MM-DD".
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date d);

struct Article {
    std::string id;
    std::string url;
    std::string source;
    std::string category;
    std::string title;
    std::string summary;
    Timestamp published_at{};
    /// Tweet count measured after the propagation window. Real-valued so
    /// planted synthetic labels can be exact; integral for observed data.
    std::optional<double> tweets;

    bool operator==(const Article&) const = default;
};

enum class HistoryKind { source, entity };

struct HistoryRecord {
    HistoryKind kind = HistoryKind::source;
    Date date{};
    std::string key;
    std::int64_t links = 0;
    std::int64_t tweets = 0;

    bool operator==(const HistoryRecord&) const = default;
};

struct LineError {
    std::size_t line = 0;  // 1-based
    std::string reason;
};

template <typename T>
struct ParseResult {
    std::vector<T> records;
    std::vector<LineError> errors;
};

/// Reads an articles.jsonl file. Blank lines are skipped. Throws DataError if
/// the file cannot be read or more than half of the non-blank lines are bad.
ParseResult<Article> parse_articles(const std::filesystem::path& path);
ParseResult<Article> parse_articles_text(std::string_view text);

ParseResult<HistoryRecord> parse_history(const std::filesystem::path& path);
ParseResult<HistoryRecord> parse_history_text(std::string_view text);

std::string to_jsonl(const std::vector<Article>& articles);
std::string to_jsonl(const std::vector<HistoryRecord>& records);
void write_text(const std::filesystem::path& path, std::string_view text);

/// Case-folds and collapses runs of whitespace; trims both ends.
std::string normalize_key(std::string_view raw);

struct CleanConfig {
    std::size_t min_title_tokens = 3;
    std::vector<std::string> blocked_hosts;
};

struct CleanReport {
    std::size_t input = 0;
    std::size_t duplicates = 0;
    std::size_t short_title = 0;
    std::size_t blocked_host = 0;
    std::size_t kept = 0;

    std::size_t removed() const { return duplicates + short_title + blocked_host; }
    bool operator==(const CleanReport&) const = default;
};

std::string url_host(std::string_view url);

/// Normalizes sources, drops spam, then removes duplicate urls keeping the
/// earliest publication (ties by id). Survivors keep their input order.
std::pair<std::vector<Article>, CleanReport> clean(std::vector<Article> articles, const CleanConfig& rules = {});

struct SplitRatio {
    double scoring = 0.5;
    double train = 0.25;
    double test = 0.25;
};

struct CorpusPartition {
    std::vector<Article> scoring_set;
    std::vector<Article> train_set;
    std::vector<Article> test_set;
};

/// The chronologically earliest floor(n*scoring) articles form the scoring
/// set; the rest is shuffled with `seed`, then floor(n*train) go to train and
/// the remainder to test.
CorpusPartition split(std::vector<Article> articles, const SplitRatio& ratio, std::uint64_t seed);

/// Fingerprint of the id set of a corpus (order-insensitive).
std::string id_fingerprint(const std::vector<Article>& articles);

}  // namespace newspop::corpus
