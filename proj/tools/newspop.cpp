// newspop: command-line entry point for the forecasting pipeline.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "newspop/eval.hpp"
#include "newspop/models/dataset.hpp"
#include "newspop/pipeline.hpp"
#include "newspop/service.hpp"
#include "newspop/synth.hpp"

#ifndef NEWSPOP_DATA_DIR
#define NEWSPOP_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using ordered_json = nlohmann::ordered_json;
using namespace newspop;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json read_json(const fs::path& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

/// Fingerprint of a subcommand's effective settings. Input files contribute
/// their contents, output locations are left out, so reruns into another
/// directory embed the same value.
std::string settings_fingerprint(const CLI::App& sub, const std::set<std::string>& input_files) {
    Fingerprint fp;
    fp.add(sub.get_name());
    for (const auto* opt : sub.get_options()) {
        const auto name = opt->get_name(false, true);
        if (name == "help" || name == "out" || name == "format") continue;
        fp.add(name);
        std::vector<std::string> values = opt->count() > 0 ? opt->results() : std::vector<std::string>{opt->get_default_str()};
        for (const auto& v : values) {
            if (input_files.count(name) && !v.empty() && fs::is_regular_file(v)) {
                fp.add(Fingerprint{}.add(read_file(v)).hex());
            } else {
                fp.add(v);
            }
        }
    }
    return fp.hex();
}

std::vector<corpus::Article> load_articles(const fs::path& path) {
    auto parsed = corpus::parse_articles(path);
    for (const auto& e : parsed.errors) std::cerr << path.string() << ":" << e.line << ": skipped: " << e.reason << "\n";
    return std::move(parsed.records);
}

std::vector<corpus::HistoryRecord> load_history(const fs::path& path) {
    auto parsed = corpus::parse_history(path);
    for (const auto& e : parsed.errors) std::cerr << path.string() << ":" << e.line << ": skipped: " << e.reason << "\n";
    return std::move(parsed.records);
}

std::vector<corpus::Article> only_category(std::vector<corpus::Article> articles, const std::string& category) {
    if (category.empty()) return articles;
    const auto key = corpus::normalize_key(category);
    std::erase_if(articles, [&](const corpus::Article& a) { return corpus::normalize_key(a.category) != key; });
    if (articles.empty()) throw DataError("no articles in category '" + category + "'");
    return articles;
}

std::vector<double> labels_of(const std::vector<corpus::Article>& articles) {
    std::vector<double> out;
    for (const auto& a : articles) {
        if (!a.tweets) throw DataError("article '" + a.id + "' has no tweets label");
        out.push_back(*a.tweets);
    }
    return out;
}

std::string latest_publication(const std::vector<corpus::Article>& articles) {
    corpus::Timestamp latest{};
    for (const auto& a : articles) latest = std::max(latest, a.published_at);
    return corpus::format_timestamp(latest);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
    std::string out;
    std::uint64_t seed = 7;
    std::map<std::string, std::string> fields;
};

void run_synth(const SynthArgs& args, const CLI::App& sub) {
    synth::SynthConfig cfg;
    cfg.seed = args.seed;
    for (const auto& [key, value] : args.fields) {
        const auto* opt = sub.get_option_no_throw("--" + key);
        if (opt && opt->count() > 0) cfg.set(key, value);
    }
    const auto result = synth::generate(cfg);
    synth::write(result, args.out);
    std::cout << "synth: " << result.articles.size() << " articles, " << result.history.size() << " history records, "
              << result.spam_ids.size() << " spam -> " << args.out << " (config " << cfg.fingerprint() << ")\n";
}

// ---------------------------------------------------------------- ingest

struct IngestArgs {
    std::string articles, history, out;
    std::uint64_t seed = 7;
    std::size_t min_title_tokens = 3;
    std::vector<std::string> blocked_hosts;
    double scoring = 0.5, train = 0.25, test = 0.25;
};

void run_ingest(const IngestArgs& args, const std::string& config_fp) {
    auto articles = load_articles(args.articles);
    const auto input = articles.size();
    corpus::CleanConfig rules;
    rules.min_title_tokens = args.min_title_tokens;
    rules.blocked_hosts = args.blocked_hosts;
    auto [kept, report] = corpus::clean(std::move(articles), rules);
    corpus::Timestamp earliest = kept.empty() ? corpus::Timestamp{} : kept.front().published_at;
    for (const auto& a : kept) earliest = std::min(earliest, a.published_at);
    const auto parts = corpus::split(std::move(kept), {args.scoring, args.train, args.test}, args.seed);

    const fs::path out(args.out);
    corpus::write_text(out / "scoring.jsonl", corpus::to_jsonl(parts.scoring_set));
    corpus::write_text(out / "train.jsonl", corpus::to_jsonl(parts.train_set));
    corpus::write_text(out / "test.jsonl", corpus::to_jsonl(parts.test_set));
    if (!args.history.empty()) corpus::write_text(out / "history.jsonl", corpus::to_jsonl(load_history(args.history)));

    ordered_json j;
    j["config_fingerprint"] = config_fp;
    j["seed"] = args.seed;
    j["as_of"] = corpus::format_date(std::chrono::floor<std::chrono::days>(earliest));
    j["parsed"] = input;
    j["clean"] = {{"input", report.input},
                  {"duplicates", report.duplicates},
                  {"short_title", report.short_title},
                  {"blocked_host", report.blocked_host},
                  {"removed", report.removed()},
                  {"kept", report.kept}};
    j["split"] = {{"scoring", {{"count", parts.scoring_set.size()}, {"fingerprint", corpus::id_fingerprint(parts.scoring_set)}}},
                  {"train", {{"count", parts.train_set.size()}, {"fingerprint", corpus::id_fingerprint(parts.train_set)}}},
                  {"test", {{"count", parts.test_set.size()}, {"fingerprint", corpus::id_fingerprint(parts.test_set)}}}};
    corpus::write_text(out / "ingest_report.json", j.dump(2) + "\n");
    std::cout << "ingest: " << input << " parsed, " << report.removed() << " removed, split " << parts.scoring_set.size()
              << "/" << parts.train_set.size() << "/" << parts.test_set.size() << " -> " << args.out << "\n";
}

// ---------------------------------------------------------------- build-scores

struct BuildScoresArgs {
    std::string scoring, history, docs, gazetteer, out, as_of, sweep_labels;
    std::string sweep_mode = "window-density";
    int window = 54, entity_window = 30;
    double ema_alpha = 0.3, smoothing = 1.0;
    bool no_weighting = false, sweep = false;
    std::vector<int> sweep_windows{14, 30, 54, 80};
};

corpus::Date resolve_as_of(const BuildScoresArgs& args, const std::vector<corpus::Article>& scoring) {
    if (!args.as_of.empty()) {
        auto d = corpus::parse_date(args.as_of);
        if (!d) throw DataError("--as-of must be YYYY-MM-DD");
        return *d;
    }
    const auto report = fs::path(args.scoring).parent_path() / "ingest_report.json";
    if (fs::exists(report)) {
        const auto j = read_json(report);
        if (j.contains("as_of")) {
            if (auto d = corpus::parse_date(j["as_of"].get<std::string>())) return *d;
        }
    }
    corpus::Timestamp earliest = scoring.front().published_at;
    for (const auto& a : scoring) earliest = std::min(earliest, a.published_at);
    return std::chrono::floor<std::chrono::days>(earliest);
}

void run_build_scores(const BuildScoresArgs& args, const std::string& config_fp) {
    const auto scoring = load_articles(args.scoring);
    if (scoring.empty()) throw DataError(args.scoring + ": no articles");
    const auto history = load_history(args.history);
    const auto as_of = resolve_as_of(args, scoring);

    scoring::ScoringConfig cfg;
    cfg.window_days = args.window;
    cfg.ema_alpha = args.ema_alpha;
    cfg.consistency_weighting = !args.no_weighting;
    cfg.entity_window_days = args.entity_window;

    pipeline::FeatureContext ctx;
    ctx.tables.source = scoring::build_source_scores(history, cfg, as_of);
    ctx.tables.category = scoring::build_category_scores(scoring);
    ctx.tables.entity = scoring::build_entity_scores(history, cfg, as_of);
    ctx.subjectivity = textfeat::SubjectivityModel::train(textfeat::load_labeled_docs(args.docs), args.smoothing);
    ctx.gazetteer = textfeat::Gazetteer::load_tsv(args.gazetteer);
    const fs::path out(args.out);
    ctx.save(out);

    ordered_json j;
    j["config_fingerprint"] = config_fp;
    j["scoring_config_fingerprint"] = cfg.fingerprint();
    j["as_of"] = corpus::format_date(as_of);
    j["feature_fingerprint"] = ctx.fingerprint();
    j["tables"] = {{"source", {{"keys", ctx.tables.source.scores.size()}, {"global_mean", ctx.tables.source.global_mean}}},
                   {"category", {{"keys", ctx.tables.category.scores.size()}, {"global_mean", ctx.tables.category.global_mean}}},
                   {"entity", {{"keys", ctx.tables.entity.scores.size()}, {"global_mean", ctx.tables.entity.global_mean}}}};

    if (args.sweep) {
        const auto label_articles = args.sweep_labels.empty() ? scoring : load_articles(args.sweep_labels);
        const auto mode = args.sweep_mode == "source-score" ? scoring::SweepScore::source_score : scoring::SweepScore::window_density;
        const auto curve = scoring::sweep_history_window(history, scoring::source_t_density(label_articles), args.sweep_windows,
                                                         as_of, cfg, mode);
        corpus::write_text(out / "window_sweep.csv", "# config " + config_fp + "\n" + eval::sweep_csv(curve));
        ordered_json pts = ordered_json::array();
        for (const auto& p : curve) pts.push_back({{"window", p.window}, {"correlation", p.correlation}, {"sources", p.sources}});
        j["window_sweep"] = {{"mode", args.sweep_mode}, {"points", pts}};
    }
    corpus::write_text(out / "scores_report.json", j.dump(2) + "\n");
    std::cout << "build-scores: " << ctx.tables.source.scores.size() << " sources, " << ctx.tables.category.scores.size()
              << " categories, " << ctx.tables.entity.scores.size() << " entities as of " << corpus::format_date(as_of)
              << " -> " << args.out << "\n";
}

// ---------------------------------------------------------------- train

struct TrainArgs {
    std::string model, train, scores, out, category_only;
    std::uint64_t seed = 7;
    bool zero_tweet = false, no_log_scores = false;
    int neighbours = 7;
    double exponent = 0.45;
    models::ClassifierParams params;
    std::vector<double> boundaries{20, 100};
};

void run_train(const TrainArgs& args, const std::string& config_fp) {
    const auto ctx = pipeline::FeatureContext::load(args.scores);
    const auto articles = only_category(load_articles(args.train), args.category_only);
    const auto features = ctx.features(articles);
    const auto tweets = labels_of(articles);

    models::ModelArtifact a;
    a.seed = args.seed;
    a.log_scores = !args.no_log_scores;
    a.config_fingerprint = config_fp;
    a.tables_fingerprint = ctx.fingerprint();
    a.train_fingerprint = corpus::id_fingerprint(articles);
    a.trained_at = latest_publication(articles);
    a.class_scheme.boundaries = args.boundaries;
    a.class_scheme.validate();
    std::string summary;

    const bool regression = args.model == "log-linear" || args.model == "power";
    if (args.zero_tweet && (regression || args.model == "knn")) {
        throw CLI::ValidationError("--zero-tweet needs a classifier --model");
    }
    if (regression || args.model == "knn") {
        std::vector<models::RegressionSample> samples;
        const bool log_form = args.model == "log-linear";
        for (std::size_t i = 0; i < articles.size(); ++i) {
            if (!(tweets[i] >= 1)) continue;
            if (log_form && (!(features[i].S > 0) || !(features[i].C > 0))) continue;
            samples.push_back({features[i], tweets[i]});
        }
        if (regression) {
            models::RegressionConfig rc;
            rc.power_exponent = args.exponent;
            auto m = models::fit_regression(samples, models::regression_form_from_string(args.model), rc);
            summary = "R^2 transformed " + fmt(m.fit_stats.r_squared_transformed) + ", raw " + fmt(m.fit_stats.r_squared_raw);
            a.kind = models::ArtifactKind::regression;
            a.model = std::move(m);
        } else {
            a.kind = models::ArtifactKind::knn;
            a.model = models::KnnRegressor::fit(samples, {args.neighbours, a.log_scores});
            summary = "K " + std::to_string(args.neighbours);
        }
        summary = std::to_string(samples.size()) + " rows, " + summary;
    } else {
        const auto algorithm = models::algorithm_from_string(args.model);
        models::ClassifierModel m;
        std::size_t rows = 0;
        if (args.zero_tweet) {
            m = models::fit_zero_tweet(features, tweets, algorithm, args.params, args.seed, a.log_scores);
            a.kind = models::ArtifactKind::zero_tweet;
            rows = features.size();
        } else {
            std::vector<scoring::FeatureVector> fv;
            std::vector<std::string> labels;
            for (std::size_t i = 0; i < articles.size(); ++i) {
                if (!(tweets[i] >= 1)) continue;
                fv.push_back(features[i]);
                labels.push_back(a.class_scheme.assign(tweets[i]));
            }
            m = models::fit_classifier(models::make_class_dataset(fv, labels, a.log_scores), algorithm, args.params, args.seed);
            a.kind = models::ArtifactKind::classifier;
            rows = fv.size();
        }
        summary = std::to_string(rows) + " rows, classes";
        for (const auto& c : m.classes()) summary += " " + c;
        a.model = std::move(m);
    }
    a.save(args.out);
    std::cout << "train: " << a.algorithm_name() << " (" << models::to_string(a.kind) << ") on " << summary << " -> "
              << args.out << "\n";
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
    std::string model, test, data, scores, out, category_only, ratings, distribution, sweep, algorithm;
    std::string format = "text";
    std::uint64_t seed = 7;
    bool ablate = false, zero_tweet = false, cv = false, no_log_scores = false;
    int folds = 10;
    models::ClassifierParams params;
};

void print_report(const eval::EvalReport& r) {
    std::cout << "model: " << r.model << "\nrows: " << r.n << "\n";
    if (r.r_squared_log_space) std::cout << "r_squared_log_space: " << fmt(*r.r_squared_log_space) << "\n";
    if (r.r_squared_raw) std::cout << "r_squared_raw: " << fmt(*r.r_squared_raw) << "\n";
    if (r.accuracy) {
        std::cout << "accuracy: " << fmt(*r.accuracy) << "\nconfusion (rows actual, columns predicted):\n";
        std::cout << "  ";
        for (const auto& c : r.classes) std::cout << "\t" << c;
        std::cout << "\n";
        for (std::size_t i = 0; i < r.confusion.size(); ++i) {
            std::cout << "  " << r.classes[i];
            for (auto v : r.confusion[i]) std::cout << "\t" << v;
            std::cout << "\n";
        }
    }
    if (!r.ablation.empty()) {
        std::cout << "ablation:\n";
        for (const auto& row : r.ablation) std::cout << "  " << row.omitted << "\t" << fmt(row.accuracy) << "\n";
    }
    if (!r.window_sweep.empty()) {
        std::cout << "window sweep:\n";
        for (const auto& p : r.window_sweep) std::cout << "  " << p.window << "\t" << fmt(p.correlation) << "\n";
    }
    if (r.ratings) {
        std::cout << "ratings (" << r.ratings->overlap << " sources): links " << fmt(r.ratings->links) << ", tweets "
                  << fmt(r.ratings->tweets) << ", t-density " << fmt(r.ratings->t_density) << "\n";
    }
    for (const auto& n : r.notes) std::cout << "note: " << n << "\n";
}

void run_evaluate(const EvaluateArgs& args, const std::string& config_fp) {
    if (args.model.empty() && !args.ablate && !args.zero_tweet && !args.cv && args.ratings.empty() && args.distribution.empty() &&
        args.sweep.empty()) {
        throw CLI::ValidationError("nothing to evaluate: give --model or one of --ablate, --zero-tweet, --cv, --ratings, "
                                   "--distribution, --sweep");
    }
    if (args.format == "csv-bundle" && args.out.empty()) throw CLI::ValidationError("--format csv-bundle needs --out");
    const std::string data_path = args.data.empty() ? args.test : args.data;

    eval::EvalReport report;
    report.notes.push_back("evaluate-config " + config_fp);

    std::optional<pipeline::FeatureContext> ctx;
    auto context = [&]() -> const pipeline::FeatureContext& {
        if (!ctx) {
            if (args.scores.empty()) throw CLI::ValidationError("--scores is required for feature-based evaluation");
            ctx = pipeline::FeatureContext::load(args.scores);
            report.notes.push_back("features " + ctx->fingerprint());
        }
        return *ctx;
    };
    std::optional<std::vector<corpus::Article>> data;
    auto data_articles = [&]() -> const std::vector<corpus::Article>& {
        if (!data) {
            if (data_path.empty()) throw CLI::ValidationError("--data or --test is required");
            data = only_category(load_articles(data_path), args.category_only);
            if (data->empty()) throw DataError(data_path + ": no articles");
            report.notes.push_back("data " + corpus::id_fingerprint(*data));
        }
        return *data;
    };
    const bool log_scores = !args.no_log_scores;

    if (!args.model.empty()) {
        if (args.test.empty()) throw CLI::ValidationError("--model needs --test");
        const auto artifact = models::ModelArtifact::load(args.model);
        const auto test = only_category(load_articles(args.test), args.category_only);
        if (test.empty()) throw DataError(args.test + ": no articles");
        if (artifact.tables_fingerprint != context().fingerprint()) {
            throw DataError("model was trained against feature context " + artifact.tables_fingerprint + ", --scores holds " +
                            context().fingerprint());
        }
        auto held_out = eval::evaluate(artifact, {context().features(test), labels_of(test), corpus::id_fingerprint(test)});
        held_out.notes.insert(held_out.notes.begin(), report.notes.begin(), report.notes.end());
        report = std::move(held_out);
    }
    auto algorithm_for = [&](const char* fallback) {
        return models::algorithm_from_string(args.algorithm.empty() ? fallback : args.algorithm);
    };
    if (args.cv || args.ablate) {
        const auto& articles = data_articles();
        const auto features = context().features(articles);
        std::vector<scoring::FeatureVector> fv;
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < articles.size(); ++i) {
            if (!(*articles[i].tweets >= 1)) continue;
            fv.push_back(features[i]);
            labels.push_back(models::assign_class(*articles[i].tweets));
        }
        const auto ds = models::make_class_dataset(fv, labels, log_scores);
        const auto algorithm = algorithm_for("tree");
        if (args.cv) {
            const auto cv = models::cross_validate(ds, algorithm, args.params, args.folds, args.seed);
            report.model = std::string(models::to_string(algorithm)) + " (" + std::to_string(args.folds) + "-fold)";
            report.n = ds.size();
            report.accuracy = cv.pooled_accuracy;
            report.classes = cv.classes;
            report.confusion = cv.confusion;
            for (const auto& w : cv.warnings) report.notes.push_back("warning " + w);
        }
        if (args.ablate) {
            report.ablation =
                models::ablate_features(ds, algorithm, args.params, models::default_feature_groups(), args.folds, args.seed);
            report.notes.push_back("ablation " + std::string(models::to_string(algorithm)) + " " + std::to_string(args.folds) +
                                   "-fold");
        }
    }
    if (args.zero_tweet) {
        const auto& articles = data_articles();
        const auto ds = models::make_class_dataset(context().features(articles), models::zero_tweet_labels(labels_of(articles)),
                                                   log_scores);
        if (ds.classes.size() < 2) throw DataError("zero-tweet evaluation needs both zero and nonzero articles");
        const auto algorithm = algorithm_for("linear-margin");
        const auto cv = models::cross_validate(ds, algorithm, args.params, args.folds, args.seed);
        report.model = "zero-tweet " + std::string(models::to_string(algorithm)) + " (" + std::to_string(args.folds) + "-fold)";
        report.n = ds.size();
        report.accuracy = cv.pooled_accuracy;
        report.classes = cv.classes;
        report.confusion = cv.confusion;
    }
    if (!args.ratings.empty()) {
        report.ratings = eval::compare_ratings(eval::load_ratings(args.ratings), eval::aggregate_sources(data_articles()));
    }
    if (!args.distribution.empty()) {
        const auto d = eval::emit_distribution(data_articles());
        corpus::write_text(args.distribution, "# config " + config_fp + "\n" + eval::distribution_csv(d));
        std::string note = "distribution " + std::to_string(d.bins.size()) + " bins, " + std::to_string(d.zero_count) + " zero-tweet";
        try {
            note += ", slope " + fmt(eval::distribution_slope(d));
        } catch (const DomainError&) {
        }
        report.notes.push_back(note);
    }
    if (!args.sweep.empty()) {
        const auto j = read_json(args.sweep);
        if (!j.contains("window_sweep")) throw DataError(args.sweep + ": no window_sweep section");
        for (const auto& p : j["window_sweep"]["points"]) {
            report.window_sweep.push_back({p["window"].get<int>(), p["correlation"].get<double>(), p["sources"].get<std::size_t>()});
        }
    }
    if (!args.category_only.empty()) report.notes.push_back("category " + corpus::normalize_key(args.category_only));

    if (args.format == "csv-bundle") {
        eval::emit_report(report, args.out, eval::ReportFormat::csv_bundle);
    } else if (!args.out.empty()) {
        eval::emit_report(report, args.out, eval::ReportFormat::json);
    }
    if (args.format == "json" && args.out.empty()) {
        std::cout << report.to_json().dump(2) << "\n";
    } else if (args.format == "text") {
        print_report(report);
    }
}

// ---------------------------------------------------------------- predict / serve

struct PredictArgs {
    std::string bundle, title, summary, source, category, input;
    std::string format = "text";
};

void run_predict(const PredictArgs& args) {
    pipeline::PredictRequest request;
    if (!args.input.empty()) {
        request = pipeline::PredictRequest::from_json(read_json(args.input));
    } else {
        request = {args.title, args.summary, args.source, args.category};
        try {
            request.validate();
        } catch (const pipeline::RequestError& e) {
            throw CLI::ValidationError("--" + e.field(), e.what());
        }
    }
    const auto bundle = pipeline::Bundle::load(args.bundle);
    const auto r = pipeline::predict(bundle, request);
    if (args.format == "json") {
        std::cout << r.to_json().dump(2) << "\n";
        return;
    }
    std::cout << "features: " << scoring::to_json(r.features).dump() << "\n"
              << "regression_estimate: " << fmt(r.regression_estimate) << "\n"
              << "predicted_class: " << r.predicted_class << "\n"
              << "class_distribution:";
    for (const auto& [k, v] : r.class_distribution) std::cout << " " << k << "=" << fmt(v);
    std::cout << "\nzero_tweet_probability: " << fmt(r.zero_tweet_probability) << "\n"
              << "model_fingerprint: " << r.model_fingerprint << "\n";
}

struct ServeArgs {
    std::string bundle, host = "127.0.0.1";
    int port = 8080;
};

void run_serve(const ServeArgs& args) {
    service::Service svc(pipeline::Bundle::load(args.bundle));
    std::cout << "serving " << svc.bundle().fingerprint() << " on http://" << args.host << ":" << args.port << std::endl;
    if (!svc.listen(args.host, args.port)) throw DataError("cannot bind " + args.host + ":" + std::to_string(args.port));
}

// ---------------------------------------------------------------- config file

/// Reads key=value lines ('#' comments, optional quotes, [section] headers
/// ignored) and returns them as --key=value arguments.
std::vector<std::string> config_arguments(const fs::path& path) {
    std::istringstream in(read_file(path));
    std::vector<std::string> out;
    std::string line;
    std::size_t line_no = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty() || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
        }
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
            value = value.substr(1, value.size() - 2);
        }
        std::replace(key.begin(), key.end(), '_', '-');
        out.push_back("--" + key + "=" + value);
    }
    return out;
}

void add_classifier_params(CLI::App* sub, models::ClassifierParams& p) {
    sub->add_option("--max-depth", p.max_depth, "tree depth limit");
    sub->add_option("--min-leaf", p.min_leaf, "minimum samples per leaf");
    sub->add_option("--trees", p.n_trees, "bagging ensemble size");
    sub->add_option("--epochs", p.epochs, "linear-margin epochs");
    sub->add_option("--lambda", p.lambda, "linear-margin regularization");
    sub->add_option("--eta0", p.eta0, "linear-margin initial step");
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    // --config is spliced in right after the subcommand so explicit flags, parsed later, win.
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string file;
        if (args[i] == "--config" && i + 1 < args.size()) {
            file = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            file = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            continue;
        }
        const auto extra = config_arguments(file);
        auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) { return !a.empty() && a[0] != '-'; });
        const auto at = sub == args.end() ? args.end() : sub + 1;
        args.insert(at, extra.begin(), extra.end());
        break;
    }

    CLI::App app{"newspop: news popularity forecasting from source, category, subjectivity and entity features"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
    app.set_version_flag("--version", "newspop 1.0.0");
    app.footer("Global: --config FILE reads key=value lines mirroring the flags; flags on the command line win.");

    const std::string data_dir = NEWSPOP_DATA_DIR;

    SynthArgs synth_args;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus with planted ground truth");
    synth_cmd->add_option("--out", synth_args.out, "output directory")->required();
    synth_cmd->add_option("--seed", synth_args.seed, "random seed");
    const auto synth_defaults = synth::SynthConfig{}.to_json();
    for (const auto& [key, value] : synth_defaults.items()) {
        if (key == "seed") continue;
        std::string dashed = key;
        std::replace(dashed.begin(), dashed.end(), '_', '-');
        const std::string names = dashed == key ? "--" + key : "--" + key + ",--" + dashed;
        const auto help = "synth parameter (default " + value.dump() + ")";
        if (value.is_boolean()) {
            synth_cmd->add_flag(names, synth_args.fields[key], help);
        } else {
            synth_cmd->add_option(names, synth_args.fields[key], help);
        }
    }

    IngestArgs ingest_args;
    auto* ingest_cmd = app.add_subcommand("ingest", "Parse, clean and split an article corpus");
    ingest_cmd->add_option("--articles", ingest_args.articles, "articles.jsonl")->required()->check(CLI::ExistingFile);
    ingest_cmd->add_option("--history", ingest_args.history, "history.jsonl to validate and copy")->check(CLI::ExistingFile);
    ingest_cmd->add_option("--out", ingest_args.out, "output directory")->required();
    ingest_cmd->add_option("--seed", ingest_args.seed, "random seed");
    ingest_cmd->add_option("--min-title-tokens", ingest_args.min_title_tokens, "spam rule: shortest acceptable title");
    ingest_cmd->add_option("--blocked-host", ingest_args.blocked_hosts, "spam rule: drop articles from this host");
    ingest_cmd->add_option("--scoring-share", ingest_args.scoring, "share of the score-assignment partition");
    ingest_cmd->add_option("--train-share", ingest_args.train, "share of the training partition");
    ingest_cmd->add_option("--test-share", ingest_args.test, "share of the test partition");

    BuildScoresArgs bs_args;
    bs_args.docs = data_dir + "/subjectivity/labeled_docs.jsonl";
    bs_args.gazetteer = data_dir + "/gazetteer.tsv";
    auto* bs_cmd = app.add_subcommand("build-scores", "Build source, category and entity score tables");
    bs_cmd->add_option("--scoring", bs_args.scoring, "score-assignment articles")->required()->check(CLI::ExistingFile);
    bs_cmd->add_option("--history", bs_args.history, "history.jsonl")->required()->check(CLI::ExistingFile);
    bs_cmd->add_option("--docs", bs_args.docs, "labelled subjectivity documents")->check(CLI::ExistingFile);
    bs_cmd->add_option("--gazetteer", bs_args.gazetteer, "entity gazetteer TSV")->check(CLI::ExistingFile);
    bs_cmd->add_option("--out", bs_args.out, "output directory")->required();
    bs_cmd->add_option("--as-of", bs_args.as_of, "score date YYYY-MM-DD (default: ingest report, else earliest article)");
    bs_cmd->add_option("--window", bs_args.window, "source window in days");
    bs_cmd->add_option("--ema-alpha", bs_args.ema_alpha, "smoothing factor");
    bs_cmd->add_flag("--no-weighting", bs_args.no_weighting, "disable consistency weighting");
    bs_cmd->add_option("--entity-window", bs_args.entity_window, "entity window in days");
    bs_cmd->add_option("--smoothing", bs_args.smoothing, "subjectivity add-k smoothing");
    bs_cmd->add_flag("--sweep", bs_args.sweep, "also emit the correlation-versus-window curve");
    bs_cmd->add_option("--sweep-windows", bs_args.sweep_windows, "windows for --sweep")->delimiter(',');
    bs_cmd->add_option("--sweep-mode", bs_args.sweep_mode, "window-density or source-score")
        ->check(CLI::IsMember({"window-density", "source-score"}));
    bs_cmd->add_option("--sweep-labels", bs_args.sweep_labels, "articles whose source t-density is the sweep target")
        ->check(CLI::ExistingFile);

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "Train a regression or classification model");
    train_cmd->add_option("--model", train_args.model, "model family")
        ->required()
        ->check(CLI::IsMember({"log-linear", "power", "knn", "nb", "tree", "bagging", "linear-margin"}));
    train_cmd->add_option("--train", train_args.train, "training articles")->required()->check(CLI::ExistingFile);
    train_cmd->add_option("--scores", train_args.scores, "build-scores output directory")->required()->check(CLI::ExistingDirectory);
    train_cmd->add_option("--out", train_args.out, "model artifact path")->required();
    train_cmd->add_option("--seed", train_args.seed, "random seed");
    train_cmd->add_flag("--zero-tweet", train_args.zero_tweet, "train the zero versus nonzero predictor");
    train_cmd->add_option("--category-only", train_args.category_only, "train on one category");
    train_cmd->add_option("--k-neighbours,--K", train_args.neighbours, "KNN neighbour count");
    train_cmd->add_option("--exponent", train_args.exponent, "power-form exponent p (target T^(p/2))");
    train_cmd->add_option("--class-boundaries", train_args.boundaries, "class boundaries in tweets")->delimiter(',');
    train_cmd->add_flag("--no-log-scores", train_args.no_log_scores, "use raw S and C as classifier inputs");
    add_classifier_params(train_cmd, train_args.params);

    EvaluateArgs ev_args;
    auto* ev_cmd = app.add_subcommand("evaluate", "Evaluate a model or run a cross-validated experiment");
    ev_cmd->add_option("--model", ev_args.model, "model artifact for held-out evaluation")->check(CLI::ExistingFile);
    ev_cmd->add_option("--test", ev_args.test, "held-out articles")->check(CLI::ExistingFile);
    ev_cmd->add_option("--data", ev_args.data, "articles for --cv, --ablate, --zero-tweet, --ratings, --distribution "
                                                "(default --test)")
        ->check(CLI::ExistingFile);
    ev_cmd->add_option("--scores", ev_args.scores, "build-scores output directory")->check(CLI::ExistingDirectory);
    ev_cmd->add_option("--out", ev_args.out, "report path (file for json, directory for csv-bundle)");
    ev_cmd->add_option("--format", ev_args.format, "text, json or csv-bundle")->check(CLI::IsMember({"text", "json", "csv-bundle"}));
    ev_cmd->add_option("--seed", ev_args.seed, "random seed");
    auto* ablate = ev_cmd->add_flag("--ablate", ev_args.ablate, "feature-group ablation");
    auto* zero = ev_cmd->add_flag("--zero-tweet", ev_args.zero_tweet, "cross-validated zero versus nonzero accuracy");
    auto* cv = ev_cmd->add_flag("--cv", ev_args.cv, "cross-validated class accuracy");
    zero->excludes(cv);
    zero->excludes(ablate);
    ev_cmd->add_option("--algorithm", ev_args.algorithm, "classifier for --cv, --ablate, --zero-tweet")
        ->check(CLI::IsMember({"nb", "tree", "bagging", "linear-margin"}));
    ev_cmd->add_option("--folds", ev_args.folds, "cross-validation folds");
    ev_cmd->add_option("--category-only", ev_args.category_only, "restrict to one category");
    ev_cmd->add_option("--ratings", ev_args.ratings, "ratings.tsv to correlate with source aggregates")->check(CLI::ExistingFile);
    ev_cmd->add_option("--distribution", ev_args.distribution, "write the log-log tweet distribution CSV here");
    ev_cmd->add_option("--sweep", ev_args.sweep, "scores_report.json whose window sweep joins the report")->check(CLI::ExistingFile);
    ev_cmd->add_flag("--no-log-scores", ev_args.no_log_scores, "use raw S and C as classifier inputs");
    add_classifier_params(ev_cmd, ev_args.params);

    PredictArgs pr_args;
    auto* pr_cmd = app.add_subcommand("predict", "Score one article against a model bundle");
    pr_cmd->add_option("--bundle", pr_args.bundle, "bundle directory")->required()->check(CLI::ExistingDirectory);
    pr_cmd->add_option("--title", pr_args.title, "article title");
    pr_cmd->add_option("--summary", pr_args.summary, "article summary");
    pr_cmd->add_option("--source", pr_args.source, "publishing source");
    pr_cmd->add_option("--category", pr_args.category, "article category");
    pr_cmd->add_option("--input", pr_args.input, "JSON request file")->check(CLI::ExistingFile);
    pr_cmd->add_option("--format", pr_args.format, "text or json")->check(CLI::IsMember({"text", "json"}));

    ServeArgs sv_args;
    auto* sv_cmd = app.add_subcommand("serve", "Serve a model bundle over HTTP");
    sv_cmd->add_option("--bundle", sv_args.bundle, "bundle directory")->required()->check(CLI::ExistingDirectory);
    sv_cmd->add_option("--host", sv_args.host, "bind address");
    sv_cmd->add_option("--port", sv_args.port, "bind port");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*synth_cmd) run_synth(synth_args, *synth_cmd);
        if (*ingest_cmd) run_ingest(ingest_args, settings_fingerprint(*ingest_cmd, {"articles", "history"}));
        if (*bs_cmd) {
            run_build_scores(bs_args, settings_fingerprint(*bs_cmd, {"scoring", "history", "docs", "gazetteer", "sweep-labels"}));
        }
        if (*train_cmd) run_train(train_args, settings_fingerprint(*train_cmd, {"train"}));
        if (*ev_cmd) run_evaluate(ev_args, settings_fingerprint(*ev_cmd, {"model", "test", "data", "ratings", "sweep"}));
        if (*pr_cmd) run_predict(pr_args);
        if (*sv_cmd) run_serve(sv_args);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
