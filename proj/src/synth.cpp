#include "newspop/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

namespace newspop::synth {

using corpus::Article;
using corpus::Date;
using corpus::HistoryKind;
using corpus::HistoryRecord;
using nlohmann::ordered_json;

namespace {

enum Stream : std::uint64_t {
    kSources = 0x5e0001,
    kEntities,
    kSourceHistory,
    kEntityHistory,
    kDocs,
    kArticles,
    kSpam,
    kNoise,
    kZeroRule,
    kPowerLaw,
    kRatings,
};

const std::vector<std::string> kSubjective{
    "shocking", "amazing",   "terrible", "outrageous", "stunning",  "brilliant",  "awful",
    "disgraceful", "heartbreaking", "hilarious", "furious", "beloved", "horrible", "wonderful",
    "disastrous", "incredible", "scandalous", "gorgeous", "tragic", "thrilling"};
const std::vector<std::string> kObjective{
    "report",   "announces", "quarterly", "official", "data",      "statement", "percent",
    "according", "results",  "meeting",   "survey",   "figures",   "released",  "committee",
    "published", "estimates", "schedule", "agency",   "filed",     "confirmed"};
const std::vector<std::string> kNeutral{
    "city",    "market", "plan",    "new",    "week",   "council", "season", "project", "team",  "update",
    "workers", "schools", "prices", "water",  "roads",  "energy",  "local",  "budget",  "talks", "county"};
const std::vector<std::string> kCategories{"Technology", "Business", "Politics",      "Sports",
                                           "Health",     "Science",  "Entertainment", "World"};
const std::vector<std::string> kSyllables{"ka", "lo",  "mer", "vin", "tor", "sa",  "del", "ri",  "bor", "nan",
                                          "quel", "zu", "fen", "osk", "tam", "yel", "gar", "pim", "dru", "hax"};
const std::vector<std::string> kOrgSuffix{"Group", "Holdings", "Institute", "Partners"};

std::string capitalize(std::string w) {
    if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
    return w;
}

template <typename Rng>
const std::string& pick(const std::vector<std::string>& bank, Rng& rng) {
    return bank[std::uniform_int_distribution<std::size_t>(0, bank.size() - 1)(rng)];
}

template <typename Rng>
std::string made_up_word(Rng& rng) {
    std::uniform_int_distribution<int> len(2, 3);
    std::string w;
    for (int i = 0, n = len(rng); i < n; ++i) w += pick(kSyllables, rng);
    return capitalize(w);
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw DataError("config '" + key + "': expected true or false, got '" + v + "'");
}

double parse_real(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (used == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw DataError("config '" + key + "': expected a number, got '" + v + "'");
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        long long i = std::stoll(v, &used);
        if (used == v.size()) return i;
    } catch (const std::exception&) {
    }
    throw DataError("config '" + key + "': expected an integer, got '" + v + "'");
}

struct Entity {
    std::string name;
    textfeat::EntityKind kind;
    double rate;
};

}  // namespace

std::string_view to_string(LabelMode m) {
    switch (m) {
        case LabelMode::log_linear: return "log-linear";
        case LabelMode::source_only: return "source-only";
        case LabelMode::source_rate: return "source-rate";
        case LabelMode::power_law: return "power-law";
    }
    return "log-linear";
}

LabelMode label_mode_from_string(std::string_view s) {
    if (s == "log-linear") return LabelMode::log_linear;
    if (s == "source-only") return LabelMode::source_only;
    if (s == "source-rate") return LabelMode::source_rate;
    if (s == "power-law") return LabelMode::power_law;
    throw DataError("unknown label mode '" + std::string(s) + "'");
}

void SynthConfig::validate() const {
    auto positive = [](const char* name, double v) {
        if (!(v > 0)) throw DataError(std::string("synth config: ") + name + " must be positive");
    };
    positive("n_articles", n_articles);
    positive("n_sources", n_sources);
    positive("n_categories", n_categories);
    positive("n_entities", n_entities);
    positive("history_days", history_days);
    positive("corpus_days", corpus_days);
    positive("daily_links", daily_links);
    positive("entity_daily_links", entity_daily_links);
    positive("daily_dispersion", daily_dispersion);
    positive("labeled_docs_per_class", labeled_docs_per_class);
    positive("power_law_max", static_cast<double>(power_law_max));
    if (n_sources > n_articles) throw DataError("synth config: n_sources exceeds n_articles");
    if (source_rate_sigma < 0 || source_volume_sigma < 0 || entity_rate_sigma < 0 || noise_sigma < 0 || ratings_noise < 0) {
        throw DataError("synth config: spreads must be non-negative");
    }
    if (max_entities_per_article < 0 || max_entities_per_article > n_entities) {
        throw DataError("synth config: max_entities_per_article must be in [0, n_entities]");
    }
    if (!(zero_noise_rate >= 0 && zero_noise_rate <= 0.5)) throw DataError("synth config: zero_noise_rate must be in [0, 0.5]");
    if (!(power_law_exponent < -1)) throw DataError("synth config: power_law_exponent must be < -1");
    if (!(spam_fraction >= 0 && spam_fraction < 0.5)) throw DataError("synth config: spam_fraction must be in [0, 0.5)");
    if (label_mode == LabelMode::log_linear && !(b_C < 1)) throw DataError("synth config: b_C must be < 1");
    if (!corpus::parse_date(start_date)) throw DataError("synth config: start_date must be YYYY-MM-DD");
}

void SynthConfig::set(const std::string& key, const std::string& v) {
    auto as_int = [&](int& field) { field = static_cast<int>(parse_int(key, v)); };
    if (key == "seed") {
        seed = static_cast<std::uint64_t>(parse_int(key, v));
    } else if (key == "n_articles") {
        as_int(n_articles);
    } else if (key == "n_sources") {
        as_int(n_sources);
    } else if (key == "n_categories") {
        as_int(n_categories);
    } else if (key == "n_entities") {
        as_int(n_entities);
    } else if (key == "source_rate_mu") {
        source_rate_mu = parse_real(key, v);
    } else if (key == "source_rate_sigma") {
        source_rate_sigma = parse_real(key, v);
    } else if (key == "source_volume_sigma") {
        source_volume_sigma = parse_real(key, v);
    } else if (key == "entity_rate_mu") {
        entity_rate_mu = parse_real(key, v);
    } else if (key == "entity_rate_sigma") {
        entity_rate_sigma = parse_real(key, v);
    } else if (key == "start_date") {
        start_date = v;
    } else if (key == "history_days") {
        as_int(history_days);
    } else if (key == "corpus_days") {
        as_int(corpus_days);
    } else if (key == "daily_links") {
        daily_links = parse_real(key, v);
    } else if (key == "entity_daily_links") {
        entity_daily_links = parse_real(key, v);
    } else if (key == "daily_dispersion") {
        daily_dispersion = parse_real(key, v);
    } else if (key == "max_entities_per_article") {
        as_int(max_entities_per_article);
    } else if (key == "label_mode") {
        label_mode = label_mode_from_string(v);
    } else if (key == "b_S") {
        b_S = parse_real(key, v);
    } else if (key == "b_C") {
        b_C = parse_real(key, v);
    } else if (key == "b_Entmax") {
        b_Entmax = parse_real(key, v);
    } else if (key == "intercept") {
        intercept = parse_real(key, v);
    } else if (key == "noise_sigma") {
        noise_sigma = parse_real(key, v);
    } else if (key == "subjectivity_null") {
        subjectivity_null = parse_bool(key, v);
    } else if (key == "b_subj") {
        b_subj = parse_real(key, v);
    } else if (key == "power_law_exponent") {
        power_law_exponent = parse_real(key, v);
    } else if (key == "power_law_max") {
        power_law_max = parse_int(key, v);
    } else if (key == "zero_rule") {
        zero_rule = parse_bool(key, v);
    } else if (key == "zero_threshold") {
        zero_threshold = parse_real(key, v);
    } else if (key == "zero_noise_rate") {
        zero_noise_rate = parse_real(key, v);
    } else if (key == "spam_fraction") {
        spam_fraction = parse_real(key, v);
    } else if (key == "integer_tweets") {
        integer_tweets = parse_bool(key, v);
    } else if (key == "ratings_noise") {
        ratings_noise = parse_real(key, v);
    } else if (key == "labeled_docs_per_class") {
        as_int(labeled_docs_per_class);
    } else {
        throw DataError("unknown synth config key '" + key + "'");
    }
}

ordered_json SynthConfig::to_json() const {
    ordered_json j;
    j["seed"] = seed;
    j["n_articles"] = n_articles;
    j["n_sources"] = n_sources;
    j["n_categories"] = n_categories;
    j["n_entities"] = n_entities;
    j["source_rate_mu"] = source_rate_mu;
    j["source_rate_sigma"] = source_rate_sigma;
    j["source_volume_sigma"] = source_volume_sigma;
    j["entity_rate_mu"] = entity_rate_mu;
    j["entity_rate_sigma"] = entity_rate_sigma;
    j["start_date"] = start_date;
    j["history_days"] = history_days;
    j["corpus_days"] = corpus_days;
    j["daily_links"] = daily_links;
    j["entity_daily_links"] = entity_daily_links;
    j["daily_dispersion"] = daily_dispersion;
    j["max_entities_per_article"] = max_entities_per_article;
    j["label_mode"] = to_string(label_mode);
    j["b_S"] = b_S;
    j["b_C"] = b_C;
    j["b_Entmax"] = b_Entmax;
    j["intercept"] = intercept;
    j["noise_sigma"] = noise_sigma;
    j["subjectivity_null"] = subjectivity_null;
    j["b_subj"] = b_subj;
    j["power_law_exponent"] = power_law_exponent;
    j["power_law_max"] = power_law_max;
    j["zero_rule"] = zero_rule;
    j["zero_threshold"] = zero_threshold;
    j["zero_noise_rate"] = zero_noise_rate;
    j["spam_fraction"] = spam_fraction;
    j["integer_tweets"] = integer_tweets;
    j["ratings_noise"] = ratings_noise;
    j["labeled_docs_per_class"] = labeled_docs_per_class;
    return j;
}

std::string SynthConfig::fingerprint() const { return Fingerprint{}.add(to_json().dump()).hex(); }

SynthResult generate(const SynthConfig& cfg) {
    cfg.validate();
    SynthResult out;
    out.config = cfg;
    const Date start = *corpus::parse_date(cfg.start_date);
    out.as_of = start;

    // Sources: planted rate and article volume.
    struct Source {
        std::string name;
        double rate;
        double volume;
    };
    std::vector<Source> sources;
    {
        auto rng = make_stream(cfg.seed, kSources);
        std::normal_distribution<double> rate(cfg.source_rate_mu, cfg.source_rate_sigma);
        std::normal_distribution<double> vol(0.0, cfg.source_volume_sigma);
        for (int s = 0; s < cfg.n_sources; ++s) {
            char name[32];
            std::snprintf(name, sizeof name, "news%03d.example", s + 1);
            const double r = std::exp(rate(rng));
            sources.push_back({name, r, std::exp(vol(rng))});
        }
    }
    double mean_volume = 0;
    for (const auto& s : sources) mean_volume += s.volume / cfg.n_sources;

    std::vector<std::string> categories;
    for (int c = 0; c < cfg.n_categories; ++c) {
        categories.push_back(c < static_cast<int>(kCategories.size()) ? kCategories[static_cast<std::size_t>(c)]
                                                                       : "Category " + std::to_string(c + 1));
    }

    // Entities with made-up names that cannot collide with the word banks.
    std::vector<Entity> entities;
    {
        auto rng = make_stream(cfg.seed, kEntities);
        std::normal_distribution<double> rate(cfg.entity_rate_mu, cfg.entity_rate_sigma);
        std::set<std::string> ids;
        int attempts = 0;
        while (static_cast<int>(entities.size()) < cfg.n_entities) {
            if (++attempts > cfg.n_entities * 100) throw DataError("synth config: cannot name that many entities");
            const auto kind = static_cast<textfeat::EntityKind>(static_cast<int>(entities.size()) % 3);
            std::string name;
            switch (kind) {
                case textfeat::EntityKind::person: name = made_up_word(rng) + " " + made_up_word(rng); break;
                case textfeat::EntityKind::place: name = made_up_word(rng); break;
                case textfeat::EntityKind::organization: name = made_up_word(rng) + " " + pick(kOrgSuffix, rng); break;
            }
            const auto tokens = textfeat::tokenize(name);
            std::string id;
            for (const auto& t : tokens) id += (id.empty() ? "" : " ") + t;
            if (!ids.insert(id).second) continue;
            const double r = std::exp(rate(rng));
            entities.push_back({name, kind, r});
            out.gazetteer.add(name, kind);
        }
    }

    // History before the corpus start date.
    {
        auto rng = make_stream(cfg.seed, kSourceHistory);
        std::gamma_distribution<double> mult(cfg.daily_dispersion, 1.0 / cfg.daily_dispersion);
        for (const auto& s : sources) {
            std::poisson_distribution<std::int64_t> links(cfg.daily_links * s.volume / mean_volume);
            for (int d = cfg.history_days; d >= 1; --d) {
                const auto l = links(rng);
                const double m = mult(rng);
                if (l == 0) continue;
                std::poisson_distribution<std::int64_t> tweets(static_cast<double>(l) * s.rate * m);
                out.history.push_back({HistoryKind::source, start - std::chrono::days(d), corpus::normalize_key(s.name), l,
                                       tweets(rng)});
            }
        }
    }
    {
        auto rng = make_stream(cfg.seed, kEntityHistory);
        std::gamma_distribution<double> mult(cfg.daily_dispersion, 1.0 / cfg.daily_dispersion);
        std::poisson_distribution<std::int64_t> links(cfg.entity_daily_links);
        for (const auto& e : entities) {
            for (int d = cfg.history_days; d >= 1; --d) {
                const auto l = links(rng);
                const double m = mult(rng);
                if (l == 0) continue;
                std::poisson_distribution<std::int64_t> tweets(static_cast<double>(l) * e.rate * m);
                out.history.push_back({HistoryKind::entity, start - std::chrono::days(d), corpus::normalize_key(e.name), l,
                                       tweets(rng)});
            }
        }
    }

    // Subjectivity training documents.
    {
        auto rng = make_stream(cfg.seed, kDocs);
        std::uniform_int_distribution<int> n_bank(3, 5), n_neutral(2, 5);
        for (int i = 0; i < 2 * cfg.labeled_docs_per_class; ++i) {
            const bool subjective = i % 2 == 0;
            std::vector<std::string> words;
            for (int k = 0, n = n_bank(rng); k < n; ++k) words.push_back(pick(subjective ? kSubjective : kObjective, rng));
            for (int k = 0, n = n_neutral(rng); k < n; ++k) words.push_back(pick(kNeutral, rng));
            std::shuffle(words.begin(), words.end(), rng);
            std::string text = capitalize(words[0]);
            for (std::size_t k = 1; k < words.size(); ++k) text += " " + words[k];
            out.labeled_docs.push_back({text + ".", subjective ? textfeat::Label::subjective : textfeat::Label::objective});
        }
    }
    const auto subj_model = textfeat::SubjectivityModel::train(out.labeled_docs);

    // Articles.
    const int n_spam = static_cast<int>(std::llround(cfg.spam_fraction * cfg.n_articles));
    const int n_clean = cfg.n_articles - n_spam;
    if (n_clean < 3) throw DataError("synth config: fewer than 3 non-spam articles");
    std::vector<std::size_t> source_of;
    {
        auto rng = make_stream(cfg.seed, kArticles);
        std::vector<double> weights;
        for (const auto& s : sources) weights.push_back(s.volume);
        std::discrete_distribution<std::size_t> pick_source(weights.begin(), weights.end());
        std::uniform_int_distribution<std::size_t> pick_category(0, categories.size() - 1);
        std::uniform_int_distribution<std::int64_t> when(0, static_cast<std::int64_t>(cfg.corpus_days) * 86400 - 1);
        std::uniform_int_distribution<std::int64_t> first_day(0, 86399);
        std::uniform_int_distribution<int> n_ent(0, cfg.max_entities_per_article), n_neutral(2, 4), n_summary(5, 8);
        std::bernoulli_distribution coin(0.5);
        std::vector<std::size_t> entity_order(entities.size());
        for (int i = 0; i < n_clean; ++i) {
            Article a;
            char id[16];
            std::snprintf(id, sizeof id, "a%06d", i + 1);
            a.id = id;
            const auto s = pick_source(rng);
            source_of.push_back(s);
            a.source = sources[s].name;
            a.category = categories[pick_category(rng)];
            a.url = "https://" + sources[s].name + "/story/" + a.id;
            a.published_at = corpus::Timestamp(start) + std::chrono::seconds(i == 0 ? first_day(rng) : when(rng));

            const bool subjective = coin(rng);
            std::vector<std::string> chunks;
            for (int k = 0; k < 2; ++k) chunks.push_back(pick(subjective ? kSubjective : kObjective, rng));
            for (int k = 0, n = n_neutral(rng); k < n; ++k) chunks.push_back(pick(kNeutral, rng));
            std::iota(entity_order.begin(), entity_order.end(), std::size_t{0});
            const int ne = n_ent(rng);
            for (int k = 0; k < ne; ++k) {
                std::uniform_int_distribution<std::size_t> rest(static_cast<std::size_t>(k), entity_order.size() - 1);
                std::swap(entity_order[static_cast<std::size_t>(k)], entity_order[rest(rng)]);
                chunks.push_back(entities[entity_order[static_cast<std::size_t>(k)]].name);
            }
            std::shuffle(chunks.begin(), chunks.end(), rng);
            a.title = capitalize(chunks[0]);
            for (std::size_t k = 1; k < chunks.size(); ++k) a.title += " " + chunks[k];
            a.summary = capitalize(pick(kNeutral, rng));
            for (int k = 1, n = n_summary(rng); k < n; ++k) a.summary += " " + pick(kNeutral, rng);
            a.summary += ".";
            out.articles.push_back(std::move(a));
        }
    }
    {
        auto rng = make_stream(cfg.seed, kSpam);
        std::uniform_int_distribution<int> original(0, n_clean - 1);
        std::uniform_int_distribution<int> hours(1, 48);
        for (int i = 0; i < n_spam; ++i) {
            char id[16];
            std::snprintf(id, sizeof id, "a%06d", n_clean + i + 1);
            Article a;
            if (i % 2 == 0) {
                const int o = original(rng);
                a = out.articles[static_cast<std::size_t>(o)];
                a.published_at += std::chrono::hours(hours(rng));
                source_of.push_back(source_of[static_cast<std::size_t>(o)]);
            } else {
                const auto s = static_cast<std::size_t>(original(rng)) % sources.size();
                a.source = sources[s].name;
                a.category = categories[s % categories.size()];
                a.title = capitalize(pick(kSubjective, rng)) + " " + pick(kNeutral, rng);
                a.summary = "";
                a.published_at = corpus::Timestamp(start) + std::chrono::hours(hours(rng));
                source_of.push_back(s);
            }
            a.id = id;
            if (i % 2 == 1) a.url = "https://" + a.source + "/promo/" + a.id;
            out.spam_ids.push_back(a.id);
            out.articles.push_back(std::move(a));
        }
    }

    // Replicate the pipeline's view: cleaning, split, score tables, features.
    const scoring::ScoringConfig scfg;
    scoring::ScoreTables tables;
    tables.source = scoring::build_source_scores(out.history, scfg, out.as_of);
    tables.entity = scoring::build_entity_scores(out.history, scfg, out.as_of);
    tables.category.kind = scoring::TableKind::category;
    for (const auto& a : out.articles) {
        out.features.push_back(scoring::assemble_features(a, tables, subj_model, out.gazetteer));
    }
    auto [kept, report] = corpus::clean(out.articles);
    if (report.removed() != static_cast<std::size_t>(n_spam)) {
        throw DataError("synth: cleaning removed " + std::to_string(report.removed()) + " articles, planted " +
                        std::to_string(n_spam));
    }
    const auto partition = corpus::split(kept, {}, cfg.seed);
    std::set<std::string> scoring_ids;
    for (const auto& a : partition.scoring_set) scoring_ids.insert(a.id);

    // Labels.
    const std::size_t n = out.articles.size();
    std::vector<double> noise(n, 0.0);
    {
        auto rng = make_stream(cfg.seed, kNoise);
        std::normal_distribution<double> eps(0.0, 1.0);
        for (auto& e : noise) e = cfg.noise_sigma * eps(rng);
    }
    std::vector<char> zero(n, 0);
    std::size_t flipped = 0;
    if (cfg.zero_rule) {
        auto rng = make_stream(cfg.seed, kZeroRule);
        std::bernoulli_distribution flip(cfg.zero_noise_rate);
        for (std::size_t i = 0; i < n; ++i) {
            zero[i] = out.features[i].S < cfg.zero_threshold;
            if (flip(rng)) {
                zero[i] = !zero[i];
                ++flipped;
            }
        }
    }
    std::vector<double> tweets(n, 0.0);
    std::map<std::string, double> planted_c;
    switch (cfg.label_mode) {
        case LabelMode::log_linear: {
            // T_i = A_i * C^b_C, with C the scoring-set t-density of the category; solved in closed form.
            std::vector<double> A(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const auto& f = out.features[i];
                if (zero[i] || !(f.S > 0)) continue;
                double z = cfg.b_S * std::log(f.S) + cfg.b_Entmax * f.Ent_max + cfg.intercept + noise[i];
                if (!cfg.subjectivity_null) z += cfg.b_subj * f.Subj;
                A[i] = std::exp(z);
            }
            std::map<std::string, std::pair<double, std::size_t>> acc;
            for (std::size_t i = 0; i < n; ++i) {
                if (!scoring_ids.count(out.articles[i].id)) continue;
                auto& [sum, count] = acc[corpus::normalize_key(out.articles[i].category)];
                sum += A[i];
                ++count;
            }
            for (const auto& c : categories) {
                const auto key = corpus::normalize_key(c);
                auto it = acc.find(key);
                if (it == acc.end() || !(it->second.first > 0)) {
                    throw DataError("synth: category '" + c + "' has no labelled scoring articles; raise n_articles");
                }
                planted_c[key] = std::pow(it->second.first / static_cast<double>(it->second.second), 1.0 / (1.0 - cfg.b_C));
            }
            for (std::size_t i = 0; i < n; ++i) {
                tweets[i] = A[i] * std::pow(planted_c.at(corpus::normalize_key(out.articles[i].category)), cfg.b_C);
            }
            break;
        }
        case LabelMode::source_only:
            for (std::size_t i = 0; i < n; ++i) {
                const auto& f = out.features[i];
                if (zero[i] || !(f.S > 0)) continue;
                tweets[i] = std::exp(cfg.b_S * std::log(f.S) + cfg.intercept + noise[i]);
            }
            break;
        case LabelMode::source_rate:
            for (std::size_t i = 0; i < n; ++i) {
                if (!zero[i]) tweets[i] = sources[source_of[i]].rate * std::exp(noise[i]);
            }
            break;
        case LabelMode::power_law: {
            auto rng = make_stream(cfg.seed, kPowerLaw);
            std::vector<double> w(static_cast<std::size_t>(cfg.power_law_max));
            for (std::size_t k = 0; k < w.size(); ++k) w[k] = std::pow(static_cast<double>(k + 1), cfg.power_law_exponent);
            std::discrete_distribution<std::int64_t> draw(w.begin(), w.end());
            for (std::size_t i = 0; i < n; ++i) {
                const auto k = draw(rng) + 1;
                if (!zero[i]) tweets[i] = static_cast<double>(k);
            }
            break;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        out.articles[i].tweets = cfg.integer_tweets ? std::round(tweets[i]) : tweets[i];
    }
    // Duplicates carry their original's label.
    {
        std::map<std::string, std::size_t> by_url;
        for (std::size_t j = 0; j < static_cast<std::size_t>(n_clean); ++j) by_url.emplace(out.articles[j].url, j);
        for (std::size_t i = static_cast<std::size_t>(n_clean); i < n; i += 2) {
            out.articles[i].tweets = out.articles[by_url.at(out.articles[i].url)].tweets;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (planted_c.empty()) break;
        out.features[i].C = planted_c.at(corpus::normalize_key(out.articles[i].category));
    }
    if (planted_c.empty()) {
        const auto scoring_table = scoring::build_category_scores([&] {
            std::vector<Article> s;
            for (const auto& a : out.articles) {
                if (scoring_ids.count(a.id)) s.push_back(a);
            }
            return s;
        }());
        for (std::size_t i = 0; i < n; ++i) out.features[i].C = scoring_table.lookup(out.articles[i].category);
    }

    // External ratings track article volume, not per-link quality.
    std::map<std::string, std::size_t> volume;
    for (std::size_t i = 0; i < static_cast<std::size_t>(n_clean); ++i) ++volume[corpus::normalize_key(out.articles[i].source)];
    {
        auto rng = make_stream(cfg.seed, kRatings);
        std::normal_distribution<double> eps(0.0, cfg.ratings_noise);
        for (const auto& [key, count] : volume) {
            out.ratings.push_back({key, static_cast<double>(count) * std::exp(eps(rng))});
        }
    }

    std::sort(out.history.begin(), out.history.end(), [](const HistoryRecord& a, const HistoryRecord& b) {
        return std::tie(a.kind, a.key, a.date) < std::tie(b.kind, b.key, b.date);
    });

    ordered_json gt;
    gt["version"] = 1;
    gt["config_fingerprint"] = cfg.fingerprint();
    gt["config"] = cfg.to_json();
    gt["as_of"] = corpus::format_date(out.as_of);
    gt["split"] = {{"seed", cfg.seed}, {"scoring", 0.5}, {"train", 0.25}, {"test", 0.25}};
    gt["label_mode"] = to_string(cfg.label_mode);
    gt["coefficients"] = {{"b_S", cfg.b_S}, {"b_C", cfg.b_C}, {"b_Entmax", cfg.b_Entmax}, {"intercept", cfg.intercept}};
    gt["noise_sigma"] = cfg.noise_sigma;
    gt["subjectivity_null"] = cfg.subjectivity_null;
    gt["zero_rule"] = {{"enabled", cfg.zero_rule}, {"threshold", cfg.zero_threshold},
                       {"noise_rate", cfg.zero_noise_rate}, {"flipped", flipped}};
    gt["power_law_exponent"] = cfg.power_law_exponent;
    ordered_json rates = ordered_json::object();
    for (const auto& s : sources) rates[corpus::normalize_key(s.name)] = s.rate;
    gt["source_rates"] = std::move(rates);
    ordered_json vols = ordered_json::object();
    for (const auto& s : sources) vols[corpus::normalize_key(s.name)] = s.volume;
    gt["source_volumes"] = std::move(vols);
    ordered_json erates = ordered_json::object();
    for (const auto& e : entities) erates[corpus::normalize_key(e.name)] = e.rate;
    gt["entity_rates"] = std::move(erates);
    gt["category_scores"] = planted_c;
    gt["spam_ids"] = out.spam_ids;
    gt["counts"] = {{"articles", n}, {"spam", n_spam}, {"history", out.history.size()}};
    out.ground_truth = std::move(gt);
    return out;
}

void write(const SynthResult& r, const std::filesystem::path& dir) {
    corpus::write_text(dir / "articles.jsonl", corpus::to_jsonl(r.articles));
    corpus::write_text(dir / "history.jsonl", corpus::to_jsonl(r.history));
    corpus::write_text(dir / "gazetteer.tsv", r.gazetteer.to_tsv());
    std::string docs;
    for (const auto& d : r.labeled_docs) {
        ordered_json j{{"text", d.text}, {"label", d.label == textfeat::Label::subjective ? "subjective" : "objective"}};
        docs += j.dump() + "\n";
    }
    corpus::write_text(dir / "labeled_docs.jsonl", docs);
    std::string ratings;
    for (const auto& x : r.ratings) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", x.rating);
        ratings += x.source + "\t" + buf + "\n";
    }
    corpus::write_text(dir / "ratings.tsv", ratings);
    corpus::write_text(dir / "ground_truth.json", r.ground_truth.dump(2) + "\n");
}

}  // namespace newspop::synth
