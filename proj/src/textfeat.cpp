#include "newspop/textfeat.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "newspop/corpus.hpp"

namespace newspop::textfeat {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

bool word_char(unsigned char c) { return c >= 0x80 || std::isalnum(c); }

std::vector<std::string> raw_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char c : text) {
        if (word_char(c)) {
            cur += static_cast<char>(c);
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    auto toks = raw_tokens(text);
    for (auto& t : toks) t = lower(std::move(t));
    return toks;
}

std::vector<LabeledDoc> load_labeled_docs(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::vector<LabeledDoc> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto where = path.string() + ":" + std::to_string(line_no);
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error&) {
            throw DataError(where + ": invalid JSON");
        }
        if (!j.contains("text") || !j["text"].is_string() || !j.contains("label") || !j["label"].is_string()) {
            throw DataError(where + ": expected {text, label}");
        }
        LabeledDoc d;
        d.text = j["text"].get<std::string>();
        auto label = j["label"].get<std::string>();
        if (label == "subjective") {
            d.label = Label::subjective;
        } else if (label == "objective") {
            d.label = Label::objective;
        } else {
            throw DataError(where + ": unknown label '" + label + "'");
        }
        if (d.text.empty()) throw DataError(where + ": empty text");
        docs.push_back(std::move(d));
    }
    return docs;
}

SubjectivityModel SubjectivityModel::train(const std::vector<LabeledDoc>& docs, double smoothing) {
    if (!(smoothing > 0)) throw DataError("smoothing must be positive");
    if (docs.empty()) throw DataError("degenerate training set: no documents");
    SubjectivityModel m;
    m.smoothing_ = smoothing;
    std::array<std::size_t, 2> doc_counts{0, 0};
    Fingerprint fp;
    for (const auto& d : docs) {
        const auto c = static_cast<std::size_t>(d.label);
        ++doc_counts[c];
        fp.add(c).add(d.text);
        for (auto& tok : tokenize(d.text)) {
            auto& counts = m.vocab_[tok];
            (d.label == Label::subjective ? counts.subjective : counts.objective) += 1;
            m.totals_[c] += 1;
        }
    }
    if (doc_counts[0] == 0 || doc_counts[1] == 0) throw DataError("degenerate training set: only one class present");
    const double n = static_cast<double>(docs.size());
    m.priors_ = {static_cast<double>(doc_counts[0]) / n, static_cast<double>(doc_counts[1]) / n};
    m.trained_on_ = fp.hex();
    return m;
}

std::array<double, 2> SubjectivityModel::log_scores(std::string_view text) const {
    std::array<double, 2> score{std::log(priors_[0]), std::log(priors_[1])};
    const double v = static_cast<double>(vocab_.size());
    const std::array<double, 2> denom{std::log(totals_[0] + smoothing_ * v), std::log(totals_[1] + smoothing_ * v)};
    for (const auto& tok : tokenize(text)) {
        auto it = vocab_.find(tok);
        if (it == vocab_.end()) continue;
        score[0] += std::log(it->second.objective + smoothing_) - denom[0];
        score[1] += std::log(it->second.subjective + smoothing_) - denom[1];
    }
    return score;
}

int SubjectivityModel::classify(std::string_view text) const {
    auto s = log_scores(text);
    return s[1] > s[0] ? 1 : 0;
}

ordered_json SubjectivityModel::to_json() const {
    ordered_json j;
    j["version"] = 1;
    j["kind"] = "subjectivity_naive_bayes";
    j["smoothing"] = smoothing_;
    j["priors"] = {{"objective", priors_[0]}, {"subjective", priors_[1]}};
    j["token_totals"] = {{"objective", totals_[0]}, {"subjective", totals_[1]}};
    j["trained_on"] = trained_on_;
    ordered_json vocab = ordered_json::object();
    for (const auto& [tok, c] : vocab_) vocab[tok] = {c.objective, c.subjective};
    j["vocabulary"] = std::move(vocab);
    return j;
}

SubjectivityModel SubjectivityModel::from_json(const json& j) {
    try {
        SubjectivityModel m;
        m.smoothing_ = j.at("smoothing").get<double>();
        m.priors_ = {j.at("priors").at("objective").get<double>(), j.at("priors").at("subjective").get<double>()};
        m.totals_ = {j.at("token_totals").at("objective").get<double>(),
                     j.at("token_totals").at("subjective").get<double>()};
        m.trained_on_ = j.at("trained_on").get<std::string>();
        for (const auto& [tok, c] : j.at("vocabulary").items()) {
            m.vocab_[tok] = Counts{c.at(1).get<double>(), c.at(0).get<double>()};
        }
        if (!(m.smoothing_ > 0) || std::fabs(m.priors_[0] + m.priors_[1] - 1.0) > 1e-9) {
            throw DataError("subjectivity model violates its invariants");
        }
        return m;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed subjectivity model: ") + e.what());
    }
}

std::string_view to_string(EntityKind k) {
    switch (k) {
        case EntityKind::person: return "person";
        case EntityKind::place: return "place";
        case EntityKind::organization: return "organization";
    }
    return "person";
}

void Gazetteer::add(std::string_view name, EntityKind kind) {
    auto toks = tokenize(name);
    if (toks.empty()) throw DataError("empty gazetteer name");
    std::string id;
    for (const auto& t : toks) {
        if (!id.empty()) id += ' ';
        id += t;
    }
    entries_.insert_or_assign(std::move(id), kind);
    max_tokens_ = std::max(max_tokens_, toks.size());
}

Gazetteer Gazetteer::parse_tsv(std::string_view text) {
    Gazetteer g;
    std::size_t line_no = 0, start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string_view::npos) throw DataError("gazetteer line " + std::to_string(line_no) + ": missing tab");
        auto kind = line.substr(tab + 1);
        EntityKind k;
        if (kind == "person") {
            k = EntityKind::person;
        } else if (kind == "place") {
            k = EntityKind::place;
        } else if (kind == "organization") {
            k = EntityKind::organization;
        } else {
            throw DataError("gazetteer line " + std::to_string(line_no) + ": unknown kind '" + std::string(kind) + "'");
        }
        g.add(line.substr(0, tab), k);
    }
    return g;
}

Gazetteer Gazetteer::load_tsv(const std::filesystem::path& path) { return parse_tsv(read_file(path)); }

std::string Gazetteer::to_tsv() const {
    std::string out;
    for (const auto& [id, kind] : entries_) {
        out += id;
        out += '\t';
        out += to_string(kind);
        out += '\n';
    }
    return out;
}

std::string Gazetteer::fingerprint() const {
    Fingerprint fp;
    for (const auto& [id, kind] : entries_) fp.add(id).add(static_cast<std::uint64_t>(kind));
    return fp.hex();
}

std::vector<std::string> extract_entities(std::string_view text, const Gazetteer& gazetteer, const ExtractOptions& opts) {
    auto raw = raw_tokens(text);
    std::vector<std::string> toks;
    toks.reserve(raw.size());
    for (const auto& t : raw) toks.push_back(lower(t));

    std::vector<std::string> found;
    std::unordered_set<std::string> seen;
    auto report = [&](std::string id) {
        if (seen.insert(id).second) found.push_back(std::move(id));
    };

    std::size_t i = 0;
    while (i < toks.size()) {
        std::size_t matched = 0;
        const std::size_t longest = std::min(gazetteer.max_tokens(), toks.size() - i);
        std::string candidate;
        std::string best;
        for (std::size_t len = 1; len <= longest; ++len) {
            if (len > 1) candidate += ' ';
            candidate += toks[i + len - 1];
            if (gazetteer.contains(candidate)) {
                matched = len;
                best = candidate;
            }
        }
        if (matched > 0) {
            report(std::move(best));
            i += matched;
            continue;
        }
        if (opts.capitalized_heuristic && i > 0 && std::isupper(static_cast<unsigned char>(raw[i][0]))) {
            std::size_t j = i;
            std::string run;
            while (j < toks.size() && std::isupper(static_cast<unsigned char>(raw[j][0]))) {
                if (!run.empty()) run += ' ';
                run += toks[j];
                ++j;
            }
            report(std::move(run));
            i = j;
            continue;
        }
        ++i;
    }
    return found;
}

}  // namespace newspop::textfeat
