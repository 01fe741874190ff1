#include "newspop/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "newspop/linalg.hpp"

namespace newspop::scoring {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;
using corpus::Date;
using corpus::HistoryKind;
using corpus::HistoryRecord;

namespace {

struct DayObs {
    Date date;
    std::int64_t links;
    std::int64_t tweets;
};

/// Records of `kind` inside [as_of - window, as_of), grouped by key, date-sorted.
std::map<std::string, std::vector<DayObs>> window_records(const std::vector<HistoryRecord>& history, HistoryKind kind,
                                                          int window_days, Date as_of) {
    if (window_days <= 0) throw DataError("window_days must be positive");
    const Date first = as_of - std::chrono::days{window_days};
    std::map<std::string, std::vector<DayObs>> grouped;
    for (const auto& r : history) {
        if (r.kind != kind) continue;
        if (r.date >= as_of) {
            throw DataError("history record for '" + r.key + "' on " + corpus::format_date(r.date) +
                            " is not before " + corpus::format_date(as_of));
        }
        if (r.date < first) continue;
        grouped[r.key].push_back({r.date, r.links, r.tweets});
    }
    for (auto& [key, obs] : grouped) {
        std::sort(obs.begin(), obs.end(), [](const DayObs& a, const DayObs& b) { return a.date < b.date; });
    }
    return grouped;
}

std::string describe_window(std::string_view what, int window_days, Date as_of) {
    std::ostringstream os;
    os << what << " history, " << window_days << " days before " << corpus::format_date(as_of);
    return os.str();
}

}  // namespace

std::string_view to_string(TableKind k) {
    switch (k) {
        case TableKind::source: return "source";
        case TableKind::category: return "category";
        case TableKind::entity: return "entity";
    }
    return "source";
}

double ScoreTable::lookup(std::string_view key) const {
    auto it = scores.find(corpus::normalize_key(key));
    return it == scores.end() ? global_mean : it->second;
}

bool ScoreTable::contains(std::string_view key) const { return scores.count(corpus::normalize_key(key)) > 0; }

ordered_json ScoreTable::to_json() const {
    ordered_json j;
    j["version"] = 1;
    j["kind"] = to_string(kind);
    j["built_from"] = built_from;
    j["global_mean"] = global_mean;
    ordered_json s = ordered_json::object();
    for (const auto& [k, v] : scores) s[k] = v;
    j["scores"] = std::move(s);
    return j;
}

ScoreTable ScoreTable::from_json(const json& j) {
    try {
        if (j.at("version").get<int>() != 1) throw DataError("unsupported score table version");
        ScoreTable t;
        auto kind = j.at("kind").get<std::string>();
        if (kind == "source") {
            t.kind = TableKind::source;
        } else if (kind == "category") {
            t.kind = TableKind::category;
        } else if (kind == "entity") {
            t.kind = TableKind::entity;
        } else {
            throw DataError("unknown score table kind '" + kind + "'");
        }
        t.built_from = j.at("built_from").get<std::string>();
        t.global_mean = j.at("global_mean").get<double>();
        for (const auto& [k, v] : j.at("scores").items()) t.scores[k] = v.get<double>();
        if (t.global_mean < 0) throw DataError("negative global_mean");
        for (const auto& [k, v] : t.scores) {
            if (v < 0) throw DataError("negative score for '" + k + "'");
        }
        return t;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed score table: ") + e.what());
    }
}

std::string ScoreTable::fingerprint() const {
    Fingerprint fp;
    fp.add(to_string(kind)).add(built_from).add(global_mean);
    for (const auto& [k, v] : scores) fp.add(k).add(v);
    return fp.hex();
}

std::string ScoringConfig::fingerprint() const {
    Fingerprint fp;
    fp.add(static_cast<std::uint64_t>(window_days))
        .add(ema_alpha)
        .add(static_cast<std::uint64_t>(consistency_weighting))
        .add(static_cast<std::uint64_t>(log_transform_scores))
        .add(static_cast<std::uint64_t>(entity_window_days));
    return fp.hex();
}

double t_density(std::int64_t links, double tweets) {
    if (links < 0) throw DomainError("negative link count");
    if (links == 0) throw DomainError("undefined t-density: zero links");
    return tweets / static_cast<double>(links);
}

ScoreTable build_category_scores(const std::vector<corpus::Article>& scoring_set) {
    if (scoring_set.empty()) throw DataError("category scores need a non-empty scoring set");
    std::map<std::string, std::pair<std::int64_t, double>> acc;
    std::int64_t links = 0;
    double tweets = 0;
    for (const auto& a : scoring_set) {
        if (!a.tweets) throw DataError("article '" + a.id + "' has no tweets label");
        auto& [l, t] = acc[corpus::normalize_key(a.category)];
        ++l;
        t += *a.tweets;
        ++links;
        tweets += *a.tweets;
    }
    ScoreTable table;
    table.kind = TableKind::category;
    for (const auto& [cat, lt] : acc) table.scores[cat] = t_density(lt.first, lt.second);
    table.global_mean = t_density(links, tweets);
    table.built_from = "scoring set of " + std::to_string(scoring_set.size()) + " articles";
    return table;
}

ScoreTable build_source_scores(const std::vector<HistoryRecord>& history, const ScoringConfig& cfg, Date as_of) {
    if (!(cfg.ema_alpha > 0 && cfg.ema_alpha <= 1)) throw DataError("ema_alpha must be in (0, 1]");
    auto grouped = window_records(history, HistoryKind::source, cfg.window_days, as_of);

    struct Series {
        std::vector<double> daily;
        double window_density;
    };
    std::map<std::string, Series> series;
    for (const auto& [key, obs] : grouped) {
        Series s;
        std::int64_t links = 0, tweets = 0;
        for (const auto& o : obs) {
            if (o.links == 0) continue;
            s.daily.push_back(t_density(o.links, static_cast<double>(o.tweets)));
            links += o.links;
            tweets += o.tweets;
        }
        if (s.daily.empty()) continue;
        s.window_density = t_density(links, static_cast<double>(tweets));
        series.emplace(key, std::move(s));
    }
    if (series.empty()) throw DataError("no source has history in the " + std::to_string(cfg.window_days) + "-day window");

    double mean_sum = 0;
    for (const auto& [key, s] : series) mean_sum += s.window_density;
    ScoreTable table;
    table.kind = TableKind::source;
    table.global_mean = mean_sum / static_cast<double>(series.size());

    for (const auto& [key, s] : series) {
        double smoothed = s.daily.front();
        for (std::size_t i = 1; i < s.daily.size(); ++i) {
            smoothed = cfg.ema_alpha * s.daily[i] + (1 - cfg.ema_alpha) * smoothed;
        }
        double weight = 1.0;
        if (cfg.consistency_weighting) {
            auto above = std::count_if(s.daily.begin(), s.daily.end(), [&](double d) { return d > table.global_mean; });
            weight = static_cast<double>(above) / static_cast<double>(s.daily.size());
        }
        table.scores[key] = smoothed * weight;
    }
    std::ostringstream os;
    os << describe_window("source", cfg.window_days, as_of) << "; ema alpha " << cfg.ema_alpha << "; weighting "
       << (cfg.consistency_weighting ? "on" : "off");
    table.built_from = os.str();
    return table;
}

ScoreTable build_window_density(const std::vector<HistoryRecord>& history, HistoryKind kind, int window_days,
                                Date as_of) {
    auto grouped = window_records(history, kind, window_days, as_of);
    ScoreTable table;
    table.kind = kind == HistoryKind::source ? TableKind::source : TableKind::entity;
    double mean_sum = 0;
    for (const auto& [key, obs] : grouped) {
        std::int64_t links = 0, tweets = 0;
        for (const auto& o : obs) {
            links += o.links;
            tweets += o.tweets;
        }
        if (links == 0) continue;
        double d = t_density(links, static_cast<double>(tweets));
        table.scores[key] = d;
        mean_sum += d;
    }
    if (table.scores.empty()) {
        throw DataError("no " + std::string(to_string(table.kind)) + " has history in the " +
                        std::to_string(window_days) + "-day window");
    }
    table.global_mean = mean_sum / static_cast<double>(table.scores.size());
    table.built_from = describe_window(to_string(table.kind), window_days, as_of) + "; plain t-density";
    return table;
}

ScoreTable build_entity_scores(const std::vector<HistoryRecord>& history, const ScoringConfig& cfg, Date as_of) {
    return build_window_density(history, HistoryKind::entity, cfg.entity_window_days, as_of);
}

std::map<std::string, double> source_t_density(const std::vector<corpus::Article>& articles) {
    std::map<std::string, std::pair<std::int64_t, double>> acc;
    for (const auto& a : articles) {
        if (!a.tweets) continue;
        auto& [l, t] = acc[corpus::normalize_key(a.source)];
        ++l;
        t += *a.tweets;
    }
    std::map<std::string, double> out;
    for (const auto& [k, lt] : acc) out[k] = t_density(lt.first, lt.second);
    return out;
}

std::vector<SweepPoint> sweep_history_window(const std::vector<HistoryRecord>& history,
                                             const std::map<std::string, double>& labels,
                                             const std::vector<int>& windows, Date as_of, const ScoringConfig& cfg,
                                             SweepScore mode) {
    if (!std::is_sorted(windows.begin(), windows.end())) throw DataError("sweep windows must be sorted ascending");
    std::vector<SweepPoint> out;
    for (int w : windows) {
        ScoreTable table;
        if (mode == SweepScore::window_density) {
            table = build_window_density(history, HistoryKind::source, w, as_of);
        } else {
            auto c = cfg;
            c.window_days = w;
            table = build_source_scores(history, c, as_of);
        }
        std::vector<double> xs, ys;
        for (const auto& [key, label] : labels) {
            auto it = table.scores.find(key);
            if (it == table.scores.end()) continue;
            xs.push_back(it->second);
            ys.push_back(label);
        }
        if (xs.size() < 3) {
            throw DataError("window sweep needs at least 3 common sources, window " + std::to_string(w) + " has " +
                            std::to_string(xs.size()));
        }
        Eigen::Map<const linalg::VectorXd> x(xs.data(), static_cast<Eigen::Index>(xs.size()));
        Eigen::Map<const linalg::VectorXd> y(ys.data(), static_cast<Eigen::Index>(ys.size()));
        out.push_back({w, linalg::pearson(x, y), xs.size()});
    }
    return out;
}

ordered_json to_json(const FeatureVector& fv) {
    ordered_json j;
    j["S"] = fv.S;
    j["C"] = fv.C;
    j["Subj"] = fv.Subj;
    j["Ent_ct"] = fv.Ent_ct;
    j["Ent_max"] = fv.Ent_max;
    j["Ent_avg"] = fv.Ent_avg;
    return j;
}

std::string ScoreTables::fingerprint() const {
    return Fingerprint{}.add(source.fingerprint()).add(category.fingerprint()).add(entity.fingerprint()).hex();
}

void aggregate_entities(const std::vector<std::string>& entity_ids, const ScoreTable& entity_table, FeatureVector& fv) {
    fv.Ent_ct = static_cast<int>(entity_ids.size());
    fv.Ent_max = 0;
    fv.Ent_avg = 0;
    if (entity_ids.empty()) return;
    double sum = 0;
    for (const auto& id : entity_ids) {
        auto it = entity_table.scores.find(id);
        double s = it == entity_table.scores.end() ? 0.0 : it->second;
        fv.Ent_max = std::max(fv.Ent_max, s);
        sum += s;
    }
    fv.Ent_avg = sum / static_cast<double>(entity_ids.size());
}

FeatureVector assemble_features(const corpus::Article& article, const ScoreTables& tables,
                                const textfeat::SubjectivityModel& subj, const textfeat::Gazetteer& gazetteer) {
    FeatureVector fv;
    fv.S = tables.source.lookup(article.source);
    fv.C = tables.category.lookup(article.category);
    const std::string text = article.title + " " + article.summary;
    fv.Subj = subj.classify(text);
    aggregate_entities(textfeat::extract_entities(text, gazetteer), tables.entity, fv);
    return fv;
}

}  // namespace newspop::scoring
