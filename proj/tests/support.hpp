#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "newspop/corpus.hpp"

namespace testsupport {

inline newspop::corpus::Article article(std::string id, std::string source, std::string category, double tweets,
                                        std::string title = "a plain title here", std::string summary = "") {
    newspop::corpus::Article a;
    a.url = "http://example.org/" + id;
    a.id = std::move(id);
    a.source = std::move(source);
    a.category = std::move(category);
    a.title = std::move(title);
    a.summary = std::move(summary);
    a.published_at = *newspop::corpus::parse_timestamp("2011-08-08T00:00:00Z");
    a.tweets = tweets;
    return a;
}

inline newspop::corpus::HistoryRecord record(newspop::corpus::HistoryKind kind, const std::string& date,
                                             std::string key, std::int64_t links, std::int64_t tweets) {
    return {kind, *newspop::corpus::parse_date(date), std::move(key), links, tweets};
}

inline newspop::corpus::Date day(const std::string& date) { return *newspop::corpus::parse_date(date); }

/// Fresh, empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
    static std::random_device rd;
    auto dir = std::filesystem::temp_directory_path() / ("newspop-test-" + name + "-" + std::to_string(rd()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace testsupport
