#include "newspop/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace newspop::corpus {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;
namespace chr = std::chrono;

namespace {

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    auto first = s.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, out);
    return ec == std::errc{} && ptr == first + len;
}

std::optional<Date> ymd(int y, int m, int d) {
    chr::year_month_day v{chr::year{y}, chr::month{static_cast<unsigned>(m)}, chr::day{static_cast<unsigned>(d)}};
    if (!v.ok()) return std::nullopt;
    return Date{v};
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

template <typename T, typename LineParser>
ParseResult<T> parse_lines(std::string_view text, LineParser&& parse_line) {
    ParseResult<T> result;
    std::size_t line_no = 0;
    std::size_t non_blank = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        ++non_blank;
        std::string reason;
        try {
            auto j = json::parse(line);
            if (!j.is_object()) {
                reason = "record is not a JSON object";
            } else if (auto rec = parse_line(j, reason)) {
                result.records.push_back(std::move(*rec));
                continue;
            }
        } catch (const json::parse_error&) {
            reason = "invalid JSON";
        }
        result.errors.push_back({line_no, std::move(reason)});
    }
    if (non_blank > 0 && 2 * result.errors.size() > non_blank) {
        throw DataError("wrong format: " + std::to_string(result.errors.size()) + " of " + std::to_string(non_blank) +
                        " lines rejected");
    }
    return result;
}

bool get_string(const json& j, const char* field, std::string& out, std::string& reason) {
    auto it = j.find(field);
    if (it == j.end() || it->is_null()) {
        reason = std::string("missing field '") + field + "'";
        return false;
    }
    if (!it->is_string()) {
        reason = std::string("field '") + field + "' is not a string";
        return false;
    }
    out = it->get<std::string>();
    return true;
}

bool get_count(const json& j, const char* field, std::int64_t& out, std::string& reason) {
    auto it = j.find(field);
    if (it == j.end() || it->is_null()) {
        reason = std::string("missing field '") + field + "'";
        return false;
    }
    if (!it->is_number_integer()) {
        reason = std::string("field '") + field + "' is not an integer";
        return false;
    }
    out = it->get<std::int64_t>();
    if (out < 0) {
        reason = std::string("negative ") + field;
        return false;
    }
    return true;
}

void put_number(ordered_json& j, const char* field, double v) {
    if (std::floor(v) == v && std::fabs(v) < 9.0e15) {
        j[field] = static_cast<std::int64_t>(v);
    } else {
        j[field] = v;
    }
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view s) {
    // YYYY-MM-DDTHH:MM:SS
    if (s.size() < 20) return std::nullopt;
    if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' || s[16] != ':') {
        return std::nullopt;
    }
    int y, mo, d, h, mi, sec;
    if (!read_int(s, 0, 4, y) || !read_int(s, 5, 2, mo) || !read_int(s, 8, 2, d) || !read_int(s, 11, 2, h) ||
        !read_int(s, 14, 2, mi) || !read_int(s, 17, 2, sec)) {
        return std::nullopt;
    }
    if (h > 23 || mi > 59 || sec > 60) return std::nullopt;
    auto rest = s.substr(19);
    if (!rest.empty() && rest.front() == '.') {
        std::size_t i = 1;
        while (i < rest.size() && rest[i] >= '0' && rest[i] <= '9') ++i;
        if (i == 1) return std::nullopt;
        rest = rest.substr(i);
    }
    if (rest != "Z" && rest != "+00:00") return std::nullopt;
    auto date = ymd(y, mo, d);
    if (!date) return std::nullopt;
    return Timestamp{*date} + chr::hours{h} + chr::minutes{mi} + chr::seconds{sec};
}

std::string format_timestamp(Timestamp ts) {
    auto day = chr::floor<chr::days>(ts);
    chr::year_month_day v{day};
    chr::hh_mm_ss hms{ts - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(v.year()),
                  static_cast<unsigned>(v.month()), static_cast<unsigned>(v.day()), static_cast<int>(hms.hours().count()),
                  static_cast<int>(hms.minutes().count()), static_cast<int>(hms.seconds().count()));
    return buf;
}

std::optional<Date> parse_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    int y, m, d;
    if (!read_int(s, 0, 4, y) || !read_int(s, 5, 2, m) || !read_int(s, 8, 2, d)) return std::nullopt;
    return ymd(y, m, d);
}

std::string format_date(Date d) {
    chr::year_month_day v{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(v.year()), static_cast<unsigned>(v.month()),
                  static_cast<unsigned>(v.day()));
    return buf;
}

ParseResult<Article> parse_articles_text(std::string_view text) {
    std::unordered_set<std::string> seen;
    return parse_lines<Article>(text, [&](const json& j, std::string& reason) -> std::optional<Article> {
        Article a;
        std::string ts;
        if (!get_string(j, "id", a.id, reason) || !get_string(j, "url", a.url, reason) ||
            !get_string(j, "source", a.source, reason) || !get_string(j, "category", a.category, reason) ||
            !get_string(j, "title", a.title, reason) || !get_string(j, "summary", a.summary, reason) ||
            !get_string(j, "published_at", ts, reason)) {
            return std::nullopt;
        }
        if (a.id.empty()) {
            reason = "empty id";
            return std::nullopt;
        }
        if (a.url.empty()) {
            reason = "empty url";
            return std::nullopt;
        }
        auto parsed = parse_timestamp(ts);
        if (!parsed) {
            reason = "bad timestamp '" + ts + "'";
            return std::nullopt;
        }
        a.published_at = *parsed;
        if (auto it = j.find("tweets"); it != j.end() && !it->is_null()) {
            if (!it->is_number()) {
                reason = "field 'tweets' is not a number";
                return std::nullopt;
            }
            double t = it->get<double>();
            if (!(t >= 0.0) || !std::isfinite(t)) {
                reason = "negative tweets";
                return std::nullopt;
            }
            a.tweets = t;
        }
        if (!seen.insert(a.id).second) {
            reason = "duplicate id '" + a.id + "'";
            return std::nullopt;
        }
        return a;
    });
}

ParseResult<Article> parse_articles(const std::filesystem::path& path) { return parse_articles_text(read_file(path)); }

ParseResult<HistoryRecord> parse_history_text(std::string_view text) {
    std::set<std::tuple<int, Date, std::string>> seen;
    return parse_lines<HistoryRecord>(text, [&](const json& j, std::string& reason) -> std::optional<HistoryRecord> {
        HistoryRecord r;
        std::string kind, date;
        if (!get_string(j, "kind", kind, reason) || !get_string(j, "date", date, reason) ||
            !get_string(j, "key", r.key, reason) || !get_count(j, "links", r.links, reason) ||
            !get_count(j, "tweets", r.tweets, reason)) {
            return std::nullopt;
        }
        if (kind == "source") {
            r.kind = HistoryKind::source;
        } else if (kind == "entity") {
            r.kind = HistoryKind::entity;
        } else {
            reason = "unknown kind '" + kind + "'";
            return std::nullopt;
        }
        auto d = parse_date(date);
        if (!d) {
            reason = "bad date '" + date + "'";
            return std::nullopt;
        }
        r.date = *d;
        r.key = normalize_key(r.key);
        if (r.key.empty()) {
            reason = "empty key";
            return std::nullopt;
        }
        if (!seen.emplace(static_cast<int>(r.kind), r.date, r.key).second) {
            reason = "duplicate (date, key)";
            return std::nullopt;
        }
        return r;
    });
}

ParseResult<HistoryRecord> parse_history(const std::filesystem::path& path) {
    return parse_history_text(read_file(path));
}

std::string to_jsonl(const std::vector<Article>& articles) {
    std::string out;
    for (const auto& a : articles) {
        ordered_json j;
        j["id"] = a.id;
        j["url"] = a.url;
        j["source"] = a.source;
        j["category"] = a.category;
        j["title"] = a.title;
        j["summary"] = a.summary;
        j["published_at"] = format_timestamp(a.published_at);
        if (a.tweets) put_number(j, "tweets", *a.tweets);
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string to_jsonl(const std::vector<HistoryRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        ordered_json j;
        j["kind"] = r.kind == HistoryKind::source ? "source" : "entity";
        j["date"] = format_date(r.date);
        j["key"] = r.key;
        j["links"] = r.links;
        j["tweets"] = r.tweets;
        out += j.dump();
        out += '\n';
    }
    return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw DataError("cannot write " + path.string());
}

std::string normalize_key(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (unsigned char c : raw) {
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out += ' ';
        pending_space = false;
        out += static_cast<char>(std::tolower(c));
    }
    return out;
}

std::string url_host(std::string_view url) {
    auto scheme = url.find("://");
    if (scheme != std::string_view::npos) url.remove_prefix(scheme + 3);
    auto end = url.find_first_of("/?#");
    auto host = url.substr(0, end);
    if (auto at = host.rfind('@'); at != std::string_view::npos) host.remove_prefix(at + 1);
    if (auto colon = host.rfind(':'); colon != std::string_view::npos) host = host.substr(0, colon);
    return normalize_key(host);
}

std::pair<std::vector<Article>, CleanReport> clean(std::vector<Article> articles, const CleanConfig& rules) {
    CleanReport report;
    report.input = articles.size();

    std::unordered_set<std::string> blocked;
    for (const auto& h : rules.blocked_hosts) blocked.insert(normalize_key(h));

    std::vector<Article> kept;
    kept.reserve(articles.size());
    for (auto& a : articles) {
        a.source = normalize_key(a.source);
        auto title = normalize_key(a.title);
        std::size_t tokens = title.empty() ? 0 : 1 + static_cast<std::size_t>(std::count(title.begin(), title.end(), ' '));
        if (tokens < rules.min_title_tokens) {
            ++report.short_title;
            continue;
        }
        if (!blocked.empty() && blocked.count(url_host(a.url))) {
            ++report.blocked_host;
            continue;
        }
        kept.push_back(std::move(a));
    }

    // Canonical survivor per url: earliest published_at, then smallest id.
    std::unordered_map<std::string_view, std::size_t> canonical;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        auto [it, inserted] = canonical.try_emplace(kept[i].url, i);
        if (inserted) continue;
        const auto& cur = kept[it->second];
        if (std::tie(kept[i].published_at, kept[i].id) < std::tie(cur.published_at, cur.id)) it->second = i;
    }
    std::vector<Article> out;
    out.reserve(canonical.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (canonical.at(kept[i].url) == i) {
            out.push_back(std::move(kept[i]));
        } else {
            ++report.duplicates;
        }
    }
    report.kept = out.size();
    return {std::move(out), report};
}

CorpusPartition split(std::vector<Article> articles, const SplitRatio& ratio, std::uint64_t seed) {
    if (!(ratio.scoring > 0 && ratio.train > 0 && ratio.test > 0) ||
        std::fabs(ratio.scoring + ratio.train + ratio.test - 1.0) > 1e-9) {
        throw DataError("split ratio components must be positive and sum to 1");
    }
    const std::size_t n = articles.size();
    if (n < 3) throw DataError("split needs at least 3 articles, got " + std::to_string(n));

    std::sort(articles.begin(), articles.end(), [](const Article& a, const Article& b) {
        return std::tie(a.published_at, a.id) < std::tie(b.published_at, b.id);
    });
    auto n_scoring = static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratio.scoring + 1e-9));
    auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratio.train + 1e-9));
    n_scoring = std::min(n_scoring, n);
    n_train = std::min(n_train, n - n_scoring);

    CorpusPartition part;
    auto mid = articles.begin() + static_cast<std::ptrdiff_t>(n_scoring);
    part.scoring_set.assign(std::make_move_iterator(articles.begin()), std::make_move_iterator(mid));
    std::vector<Article> rest(std::make_move_iterator(mid), std::make_move_iterator(articles.end()));

    auto rng = make_stream(seed, 0x5911);
    std::shuffle(rest.begin(), rest.end(), rng);
    auto cut = rest.begin() + static_cast<std::ptrdiff_t>(n_train);
    part.train_set.assign(std::make_move_iterator(rest.begin()), std::make_move_iterator(cut));
    part.test_set.assign(std::make_move_iterator(cut), std::make_move_iterator(rest.end()));
    return part;
}

std::string id_fingerprint(const std::vector<Article>& articles) {
    std::vector<std::string_view> ids;
    ids.reserve(articles.size());
    for (const auto& a : articles) ids.push_back(a.id);
    std::sort(ids.begin(), ids.end());
    Fingerprint fp;
    for (auto id : ids) fp.add(id);
    return fp.hex();
}

}  // namespace newspop::corpus
