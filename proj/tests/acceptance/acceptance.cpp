// Runs every primary acceptance criterion and prints one PASS/FAIL line each.
// Exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "newspop/eval.hpp"
#include "newspop/linalg.hpp"
#include "newspop/models/dataset.hpp"
#include "newspop/models/knn.hpp"
#include "newspop/models/regression.hpp"
#include "newspop/models/validation.hpp"
#include "newspop/scoring.hpp"
#include "newspop/synth.hpp"

#include <httplib.h>

namespace fs = std::filesystem;
using namespace newspop;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v, int precision = 6) {
    std::ostringstream os;
    os.precision(precision);
    os << v;
    return os.str();
}

synth::SynthResult synthesize(std::initializer_list<std::pair<const char*, const char*>> settings) {
    synth::SynthConfig cfg;
    for (const auto& [k, v] : settings) cfg.set(k, v);
    return synth::generate(cfg);
}

/// Rows with at least one tweet, labelled A/B/C.
models::ClassDataset class_rows(const synth::SynthResult& s) {
    std::vector<scoring::FeatureVector> fvs;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < s.articles.size(); ++i) {
        const double t = *s.articles[i].tweets;
        if (t < 1) continue;
        fvs.push_back(s.features[i]);
        labels.push_back(models::assign_class(t));
    }
    return models::make_class_dataset(fvs, labels, true);
}

// ------------------------------------------------------------------ criteria

Outcome coefficient_recovery() {
    const auto t0 = Clock::now();
    const auto s = synthesize({{"n_articles", "10000"}});
    std::vector<models::RegressionSample> train;
    for (std::size_t i = 0; i < s.articles.size(); ++i) {
        const auto& f = s.features[i];
        const double t = *s.articles[i].tweets;
        if (t >= 1 && f.S > 0 && f.C > 0) train.push_back({f, t});
    }
    const auto m = models::fit_regression(train, models::RegressionForm::log_linear);
    const double elapsed = seconds_since(t0);
    const std::map<std::string, double> planted{{"b_S", 1.24}, {"b_C", 0.45}, {"b_Entmax", 0.1}, {"intercept", -3.0}};
    double worst = 0;
    for (const auto& [k, v] : planted) worst = std::max(worst, std::abs(m.coefficients.at(k) - v));
    const double r2 = m.fit_stats.r_squared_transformed;
    return {worst < 1e-6 && std::abs(r2 - 1.0) < 1e-9 && elapsed < 10.0,
            "n=" + std::to_string(train.size()) + " max coefficient error " + num(worst, 3) + ", R2 log " + num(r2, 15) +
                ", " + num(elapsed, 3) + " s"};
}

Outcome closed_form() {
    const double e = std::exp(1.0);
    const double ll = models::predict_regression(models::published_log_linear(), {e, e, 0, 0, 0, 0});
    const double pw = models::predict_regression(models::published_power_transform(), {5, 1, 0, 0, 0, 0});
    const double d1 = std::abs(ll - std::exp(-1.31));
    const double d2 = std::abs(pw - 1.0);
    return {d1 <= 1e-12 && d2 <= 1e-12, "log-linear " + num(ll, 15) + " (err " + num(d1, 2) + "), power " + num(pw, 15) +
                                            " (err " + num(d2, 2) + ")"};
}

/// Brute-force KNN: standardize with population sd, scan every point,
/// order by (distance, index), average the first K labels.
double knn_oracle(const std::vector<std::vector<double>>& pts, const std::vector<long>& labels,
                  const std::vector<double>& q, int K) {
    const std::size_t n = pts.size(), d = q.size();
    std::vector<double> mean(d, 0), sd(d, 0);
    for (const auto& p : pts)
        for (std::size_t j = 0; j < d; ++j) mean[j] += p[j];
    for (auto& m : mean) m /= static_cast<double>(n);
    for (const auto& p : pts)
        for (std::size_t j = 0; j < d; ++j) sd[j] += (p[j] - mean[j]) * (p[j] - mean[j]);
    for (auto& s : sd) s = std::sqrt(s / static_cast<double>(n));
    std::vector<std::pair<double, std::size_t>> dist;
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0;
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = (pts[i][j] - mean[j]) / sd[j] - (q[j] - mean[j]) / sd[j];
            acc += diff * diff;
        }
        dist.emplace_back(acc, i);
    }
    std::sort(dist.begin(), dist.end());
    long sum = 0;
    for (int k = 0; k < K; ++k) sum += labels[dist[static_cast<std::size_t>(k)].second];
    return static_cast<double>(sum) / K;
}

Outcome knn_oracle_equivalence() {
    auto rng = make_stream(2024, 1);
    std::normal_distribution<double> z(0, 1);
    std::uniform_int_distribution<long> label(1, 5000);
    const int n = 500, d = 6, queries = 100;
    std::vector<std::vector<double>> pts(n, std::vector<double>(d));
    std::vector<long> labels(n);
    linalg::MatrixXd X(n, d);
    linalg::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) X(i, j) = pts[i][j] = z(rng) * (j + 1) + 3.0 * j;
        y(i) = static_cast<double>(labels[i] = label(rng));
    }
    int mismatches = 0, checks = 0;
    for (int K : {1, 3, 7}) {
        const auto model = models::KnnRegressor::fit(X, y, K);
        auto qrng = make_stream(2024, 100 + static_cast<std::uint64_t>(K));
        for (int q = 0; q < queries; ++q) {
            std::vector<double> query(d);
            linalg::RowVectorXd row(d);
            for (int j = 0; j < d; ++j) row(j) = query[j] = z(qrng) * (j + 1) + 3.0 * j;
            ++checks;
            if (model.predict(row) != knn_oracle(pts, labels, query, K)) ++mismatches;
        }
    }
    return {mismatches == 0, std::to_string(checks) + " queries, " + std::to_string(mismatches) + " mismatches"};
}

Outcome r_squared_pearson() {
    double worst_hand = 0;
    auto hand = [&](double got, double want) { worst_hand = std::max(worst_hand, std::abs(got - want)); };
    hand(models::r_squared({1, 2, 3}, {1, 2, 3}), 1.0);
    hand(models::r_squared({2, 2, 2}, {1, 2, 3}), 0.0);
    hand(models::r_squared({1, 1, 3}, {1, 2, 3}), 0.5);
    hand(eval::pearson({1, 2, 3, 4}, {3, 5, 7, 9}), 1.0);
    hand(eval::pearson({1, 2, 3, 4}, {-1, -2, -3, -4}), -1.0);
    hand(eval::pearson({1, 2, 3}, {1, 3, 2}), 0.5);

    auto rng = make_stream(99, 7);
    std::normal_distribution<double> z(0, 1);
    std::uniform_real_distribution<double> coef(-100, 100);
    std::uniform_int_distribution<int> len(3, 40);
    double worst_inv = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = len(rng);
        std::vector<double> x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x[i] = z(rng);
            y[i] = 0.5 * x[i] + z(rng);
        }
        double a = coef(rng);
        if (std::abs(a) < 1e-3) a = 1;
        const double b = coef(rng);
        std::vector<double> ax(n);
        for (int i = 0; i < n; ++i) ax[i] = a * x[i] + b;
        const double r = eval::pearson(x, y);
        worst_inv = std::max({worst_inv, std::abs(eval::pearson(ax, y) - (a > 0 ? r : -r)),
                              std::abs(eval::pearson(y, x) - r)});
    }
    return {worst_hand <= 1e-12 && worst_inv <= 1e-9,
            "hand examples max error " + num(worst_hand, 3) + ", 1000 invariance cases max error " + num(worst_inv, 3)};
}

Outcome class_scheme() {
    const std::map<int, std::string> expected{{1, "A"}, {19, "A"}, {20, "B"}, {99, "B"}, {100, "C"}};
    bool mapped = true;
    for (const auto& [t, c] : expected) mapped &= models::assign_class(t) == c;
    bool monotone = true;
    std::string prev;
    for (int t = 1; t <= 3000; ++t) {
        const auto c = models::assign_class(t);
        monotone &= c >= prev;
        prev = c;
    }
    return {mapped && monotone, std::string("examples ") + (mapped ? "exact" : "wrong") + ", monotone over 1..3000 " +
                                    (monotone ? "yes" : "no")};
}

Outcome cv_partition() {
    const std::vector<int> counts{7605, 1800, 602};
    const int n = 10007, k = 10;
    std::vector<int> y;
    for (int c = 0; c < 3; ++c) y.insert(y.end(), static_cast<std::size_t>(counts[c]), c);
    std::shuffle(y.begin(), y.end(), make_stream(5, 5));

    auto rng = make_stream(5, 6);
    std::normal_distribution<double> z(0, 1);
    linalg::MatrixXd X(n, 2);
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) {
        X(i, 0) = y[i] + z(rng);
        X(i, 1) = z(rng);
        labels.push_back(std::string(1, static_cast<char>('A' + y[i])));
    }
    const auto data = models::make_class_dataset(X, labels, {"u", "v"});
    const auto report = models::cross_validate(data, models::Algorithm::naive_bayes, {}, k, 11);

    std::vector<int> seen(n, 0);
    std::vector<std::vector<int>> per(k, std::vector<int>(3, 0));
    for (int i = 0; i < n; ++i) {
        const int f = report.fold_of[static_cast<std::size_t>(i)];
        if (f < 0 || f >= k) return {false, "fold index out of range"};
        ++seen[i];
        ++per[f][data.y[static_cast<std::size_t>(i)]];
    }
    const bool partition = std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
    double worst = 0;
    for (int f = 0; f < k; ++f)
        for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(per[f][c] - counts[c] / double(k)));
    std::size_t tested = 0;
    for (const auto& row : report.confusion) tested += std::accumulate(row.begin(), row.end(), std::size_t{0});
    return {partition && worst <= 1.0 && tested == static_cast<std::size_t>(n),
            "partition " + std::string(partition ? "exact" : "broken") + ", tested " + std::to_string(tested) +
                ", max per-fold class deviation " + num(worst, 3)};
}

Outcome ablation_signal() {
    const auto t0 = Clock::now();
    const auto s = synthesize({{"n_articles", "10000"}, {"label_mode", "source-only"}, {"noise_sigma", "0.3"}});
    const auto rows = models::ablate_features(class_rows(s), models::Algorithm::decision_tree, {},
                                              models::default_feature_groups(), 10, 7);
    const double elapsed = seconds_since(t0);
    std::map<std::string, double> acc;
    for (const auto& r : rows) acc[r.omitted] = r.accuracy;
    const double base = acc.at("all");
    const double source_drop = base - acc.at("source");
    double next_drop = -1;
    for (const auto* g : {"category", "subjectivity", "entities"}) next_drop = std::max(next_drop, base - acc.at(g));
    const double subj_change = std::abs(acc.at("subjectivity") - base);
    std::string detail = "baseline " + num(base, 4);
    for (const auto& r : rows)
        if (r.omitted != "all") detail += ", -" + r.omitted + " " + num(r.accuracy, 4);
    detail += "; source margin " + num(100 * (source_drop - next_drop), 3) + " pts, subjectivity change " +
              num(100 * subj_change, 3) + " pts, " + num(elapsed, 3) + " s";
    return {source_drop - next_drop >= 0.05 && subj_change < 0.02 && elapsed < 60, detail};
}

double zero_tweet_cv(const char* noise) {
    const auto s = synthesize({{"n_articles", "10000"},
                               {"label_mode", "source-rate"},
                               {"source_rate_mu", "0"},
                               {"zero_rule", "true"},
                               {"zero_noise_rate", noise}});
    std::vector<double> tweets;
    for (const auto& a : s.articles) tweets.push_back(*a.tweets);
    const auto data = models::make_class_dataset(s.features, models::zero_tweet_labels(tweets), true);
    return models::cross_validate(data, models::Algorithm::linear_margin, {}, 10, 7).pooled_accuracy;
}

Outcome zero_tweet_recovery() {
    const double noisy = zero_tweet_cv("0.34");
    const double clean = zero_tweet_cv("0");
    return {std::abs(noisy - 0.66) <= 0.05 && clean >= 0.95,
            "noise 0.34 accuracy " + num(noisy, 4) + ", noise 0 accuracy " + num(clean, 4)};
}

Outcome classification_magnitude() {
    const auto s = synthesize({{"n_articles", "10000"}, {"noise_sigma", "0.4"}});
    const auto data = class_rows(s);
    const double tree = models::cross_validate(data, models::Algorithm::decision_tree, {}, 10, 7).pooled_accuracy;
    const double bag = models::cross_validate(data, models::Algorithm::bagging, {}, 10, 7).pooled_accuracy;
    return {tree >= 0.80 && bag >= 0.80 && std::abs(tree - bag) <= 0.03,
            "tree " + num(tree, 4) + ", bagging " + num(bag, 4) + " on " + std::to_string(data.size()) + " rows"};
}

Outcome window_sweep() {
    const auto s = synthesize({{"n_articles", "10000"}, {"label_mode", "source-rate"}, {"noise_sigma", "0.3"}});
    const auto sweep =
        scoring::sweep_history_window(s.history, scoring::source_t_density(s.articles), {14, 30, 54, 80}, s.as_of);
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        detail += (i ? ", " : "") + std::to_string(sweep[i].window) + "d " + num(sweep[i].correlation, 4);
        if (i > 0) ok &= sweep[i].correlation >= sweep[i - 1].correlation - 0.05;
    }
    const double tail = std::abs(sweep[3].correlation - sweep[2].correlation);
    ok &= tail <= 0.05;
    return {ok, detail + "; last step " + num(tail, 3)};
}

Outcome distribution_shape() {
    const auto s = synthesize({{"n_articles", "10000"}, {"label_mode", "power-law"}, {"zero_rule", "true"}, {"source_rate_mu", "1.5"}});
    const auto d = eval::emit_distribution(s.articles);
    const double slope = eval::distribution_slope(d);
    std::size_t zeros = 0, binned = 0;
    for (const auto& a : s.articles) zeros += *a.tweets == 0;
    for (const auto& b : d.bins) binned += b.count;
    const bool exact = d.zero_count == zeros && binned + zeros == s.articles.size() && zeros > 0;
    return {std::abs(slope + 2.0) <= 0.15 && exact, "slope " + num(slope, 4) + ", zero side channel " +
                                                        std::to_string(d.zero_count) + " of " + std::to_string(zeros) +
                                                        " planted"};
}

Outcome ratings_sign_pattern() {
    const auto s = synthesize({{"n_articles", "10000"}, {"label_mode", "source-rate"}, {"noise_sigma", "0.3"}});
    const auto c = eval::compare_ratings(s.ratings, eval::aggregate_sources(s.articles));
    return {c.links > 0.8 && std::abs(c.t_density) < 0.2, std::to_string(c.overlap) + " sources: links " + num(c.links, 4) +
                                                             ", tweets " + num(c.tweets, 4) + ", t-density " +
                                                             num(c.t_density, 4)};
}

// ------------------------------------------------------------ CLI determinism

int shell(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        files[fs::relative(e.path(), dir).string()] = ss.str();
    }
    return files;
}

struct Step {
    std::string name;
    std::string args;
};

std::vector<Step> pipeline_steps(const std::string& r) {
    const std::string scores = " --scores " + r + "/bundle";
    const std::string train = " --train " + r + "/split/train.jsonl" + scores;
    const std::string data = " --data " + r + "/split/train.jsonl" + scores;
    return {
        {"synth", "synth --seed 7 --n-articles 3000 --n-sources 60 --noise-sigma 0.4 --zero-rule --spam-fraction 0.03 --out " +
                      r + "/raw"},
        {"ingest", "ingest --seed 7 --articles " + r + "/raw/articles.jsonl --history " + r + "/raw/history.jsonl --out " + r +
                       "/split"},
        {"build-scores", "build-scores --scoring " + r + "/split/scoring.jsonl --history " + r + "/split/history.jsonl --docs " +
                             r + "/raw/labeled_docs.jsonl --gazetteer " + r + "/raw/gazetteer.tsv --sweep --out " + r +
                             "/bundle"},
        {"train log-linear", "train --model log-linear" + train + " --out " + r + "/bundle/regression.json"},
        {"train power", "train --model power" + train + " --out " + r + "/models/power.json"},
        {"train knn", "train --model knn --K 7" + train + " --out " + r + "/models/knn.json"},
        {"train nb", "train --model nb --seed 3" + train + " --out " + r + "/models/nb.json"},
        {"train tree", "train --model tree --seed 3" + train + " --out " + r + "/models/tree.json"},
        {"train bagging", "train --model bagging --seed 3" + train + " --out " + r + "/bundle/classifier.json"},
        {"train linear-margin", "train --model linear-margin --seed 3" + train + " --out " + r + "/models/lm.json"},
        {"train zero-tweet", "train --zero-tweet --model linear-margin --seed 3" + train + " --out " + r +
                                 "/bundle/zero_tweet.json"},
        {"evaluate regression", "evaluate --model " + r + "/bundle/regression.json --test " + r + "/split/test.jsonl" +
                                    scores + " --format json --out " + r + "/reports/regression.json"},
        {"evaluate classifier", "evaluate --model " + r + "/bundle/classifier.json --test " + r + "/split/test.jsonl" +
                                    scores + " --format csv-bundle --out " + r + "/reports/classifier"},
        {"evaluate cv", "evaluate --cv --algorithm tree --seed 5" + data + " --format json --out " + r + "/reports/cv.json"},
        {"evaluate ablate", "evaluate --ablate --algorithm tree --seed 5" + data + " --format json --out " + r +
                                "/reports/ablate.json"},
        {"evaluate zero-tweet", "evaluate --zero-tweet --algorithm linear-margin --seed 5" + data + " --format json --out " +
                                    r + "/reports/zero.json"},
        {"evaluate ratings", "evaluate --ratings " + r + "/raw/ratings.tsv --distribution " + r + "/reports/dist.csv --sweep " +
                                 r + "/bundle/scores_report.json" + data + " --format json --out " + r +
                                 "/reports/ratings.json"},
        {"predict", "predict --bundle " + r + "/bundle --title 'Markets rally as officials announce plan' --summary "
                    "'A terrible week ends' --source news001.example --category Technology --format json"},
    };
}

/// Runs every step, capturing stdout per step. Returns the failing step or "".
std::string run_pipeline(const std::string& cli, const fs::path& root) {
    fs::remove_all(root);
    fs::create_directories(root / "stdout");
    const auto steps = pipeline_steps(root.string());
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const auto& step = steps[i];
        const auto out = root / "stdout" / (std::to_string(i) + ".txt");
        if (shell(cli + " " + step.args + " >" + out.string() + " 2>" + (root / "stderr.txt").string()) != 0) {
            return step.name;
        }
    }
    fs::remove(root / "stderr.txt");
    return "";
}

/// Starts `serve`, records a fixed set of responses into root/serve, stops it.
bool record_serve(const std::string& cli, const fs::path& root, int port) {
    const auto pidfile = root / "serve.pid";
    shell(cli + " serve --bundle " + (root / "bundle").string() + " --port " + std::to_string(port) + " >" +
          (root / "serve.log").string() + " 2>&1 & echo $! > " + pidfile.string());
    httplib::Client client("127.0.0.1", port);
    bool up = false;
    for (int attempt = 0; attempt < 100 && !up; ++attempt) {
        if (auto r = client.Get("/healthz"); r && r->status == 200) {
            up = true;
        } else {
            std::this_thread::sleep_for(std::chrono::milliseconds(100));
        }
    }
    bool ok = up;
    if (up) {
        fs::create_directories(root / "serve");
        auto keep = [&](const std::string& name, const httplib::Result& r) {
            if (!r) {
                ok = false;
                return;
            }
            std::ofstream(root / "serve" / name, std::ios::binary) << r->status << "\n" << r->body;
        };
        keep("healthz", client.Get("/healthz"));
        keep("model", client.Get("/v1/model"));
        keep("sources", client.Get("/v1/sources"));
        keep("categories", client.Get("/v1/categories"));
        keep("predict", client.Post("/v1/predict",
                                    R"({"title":"Markets rally","summary":"officials announce plan","source":"news002.example","category":"World"})",
                                    "application/json"));
        keep("bad_request", client.Post("/v1/predict", R"({"title":"x"})", "application/json"));
    }
    std::ifstream pid_in(pidfile);
    long pid = 0;
    if (pid_in >> pid && pid > 0) shell("kill " + std::to_string(pid) + " 2>/dev/null");
    std::this_thread::sleep_for(std::chrono::milliseconds(200));
    fs::remove(pidfile);
    fs::remove(root / "serve.log");
    return ok;
}

Outcome cli_determinism() {
    const std::string cli = NEWSPOP_CLI;
    const auto base = fs::temp_directory_path() / ("newspop-acceptance-" + std::to_string(::getpid()));
    const auto root = base / "run";
    const int port = 20000 + static_cast<int>(::getpid() % 20000);

    if (auto failed = run_pipeline(cli, root); !failed.empty()) return {false, "first run failed at " + failed};
    if (!record_serve(cli, root, port)) return {false, "serve did not answer on the first run"};
    const auto first = snapshot(root);
    if (auto failed = run_pipeline(cli, root); !failed.empty()) return {false, "second run failed at " + failed};
    if (!record_serve(cli, root, port + 1)) return {false, "serve did not answer on the second run"};
    const auto second = snapshot(root);
    fs::remove_all(base);

    std::vector<std::string> differing;
    std::set<std::string> names;
    for (const auto& [k, v] : first) names.insert(k);
    for (const auto& [k, v] : second) names.insert(k);
    for (const auto& k : names) {
        auto a = first.find(k), b = second.find(k);
        if (a == first.end() || b == second.end() || a->second != b->second) differing.push_back(k);
    }
    std::string detail = std::to_string(pipeline_steps("").size()) + " commands plus serve, " +
                         std::to_string(first.size()) + " files compared";
    if (!differing.empty()) {
        detail += "; differing:";
        for (const auto& d : differing) detail += " " + d;
    }
    return {differing.empty(), detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"coefficient recovery", coefficient_recovery},
        {"closed-form evaluation", closed_form},
        {"knn oracle equivalence", knn_oracle_equivalence},
        {"r-squared and pearson correctness", r_squared_pearson},
        {"class scheme", class_scheme},
        {"cross-validation partition", cv_partition},
        {"ablation signal", ablation_signal},
        {"zero-tweet recovery", zero_tweet_recovery},
        {"classification magnitude", classification_magnitude},
        {"window sweep", window_sweep},
        {"distribution shape", distribution_shape},
        {"ratings comparison sign pattern", ratings_sign_pattern},
        {"cli determinism", cli_determinism},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        const auto t0 = Clock::now();
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << " [" << num(seconds_since(t0), 3) << " s]"
                  << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
              << std::endl;
    return failed == 0 ? 0 : 1;
}
