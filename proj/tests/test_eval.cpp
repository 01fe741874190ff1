#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <tuple>

#include "newspop/eval.hpp"
#include "newspop/models/dataset.hpp"
#include "newspop/synth.hpp"
#include "support.hpp"

using namespace newspop;
using namespace newspop::eval;
using testsupport::article;

namespace {

scoring::FeatureVector fv(double S, double C, double ent_max = 0) { return {S, C, 0, 0, ent_max, 0}; }

/// Rows whose class is a step function of S: A below 10, B below 50, C above.
LabeledFeatures stepped(std::size_t n, std::uint64_t seed) {
    auto rng = make_stream(seed, 5);
    std::uniform_real_distribution<double> s(1, 90), c(1, 10);
    LabeledFeatures out;
    for (std::size_t i = 0; i < n; ++i) {
        const double S = s(rng);
        out.features.push_back(fv(S, c(rng)));
        out.tweets.push_back(S < 10 ? 5 : S < 50 ? 50 : 500);
    }
    out.fingerprint = "test-" + std::to_string(seed);
    return out;
}

models::ModelArtifact classifier_artifact(const LabeledFeatures& train, int max_depth) {
    std::vector<std::string> labels;
    for (double t : train.tweets) labels.push_back(models::assign_class(t));
    models::ClassifierParams p;
    p.max_depth = max_depth;
    models::ModelArtifact a;
    a.kind = models::ArtifactKind::classifier;
    a.model = models::fit_classifier(models::make_class_dataset(train.features, labels, true),
                                     models::Algorithm::decision_tree, p, 1);
    a.train_fingerprint = train.fingerprint;
    return a;
}

EvalReport sample_report() {
    EvalReport r;
    r.model = "bagging";
    r.n = 12;
    r.accuracy = 0.75;
    r.classes = {"A", "B"};
    r.confusion = {{5, 1}, {2, 4}};
    r.ablation = {{"all", 0.75}, {"source", 0.5}};
    r.window_sweep = {{14, 0.9, 40}, {30, 0.95, 40}};
    r.ratings = RatingComparison{5, 0.9, 0.4, -0.05};
    r.notes = {"model 0123", "test abcd"};
    return r;
}

}  // namespace

TEST_CASE("oracle classifier scores perfectly with a diagonal confusion") {
    const auto train = stepped(300, 1);
    auto test = stepped(200, 2);
    const auto r = evaluate(classifier_artifact(train, 12), test);
    REQUIRE(r.accuracy);
    CHECK(*r.accuracy == doctest::Approx(1.0).epsilon(0.02));

    EvalReport oracle;
    fill_classification(oracle, {"A", "B", "C"}, {0, 1, 2, 2, 1}, {0, 1, 2, 2, 1});
    CHECK(*oracle.accuracy == 1.0);
    CHECK(oracle.confusion == std::vector<std::vector<std::size_t>>{{1, 0, 0}, {0, 2, 0}, {0, 0, 2}});
}

TEST_CASE("majority model accuracy equals the majority share") {
    const auto train = stepped(300, 3);
    const auto test = stepped(250, 4);
    const auto r = evaluate(classifier_artifact(train, 0), test);
    std::map<std::string, int> counts;
    for (double t : test.tweets) ++counts[models::assign_class(t)];
    int best = 0;
    for (const auto& [k, v] : counts) best = std::max(best, v);
    CHECK(*r.accuracy == doctest::Approx(static_cast<double>(best) / 250).epsilon(1e-15));
    std::size_t total = 0;
    for (std::size_t i = 0; i < r.confusion.size(); ++i) {
        std::size_t row = 0;
        for (auto v : r.confusion[i]) row += v;
        CHECK(row == static_cast<std::size_t>(counts[r.classes[i]]));
        total += row;
    }
    CHECK(total == 250);
}

TEST_CASE("trees on their own training set beat the majority baseline") {
    const auto train = stepped(300, 5);
    auto same = train;
    same.fingerprint = "train-rows-relabelled";
    CHECK(*evaluate(classifier_artifact(train, 12), same).accuracy >= *evaluate(classifier_artifact(train, 0), same).accuracy);
}

TEST_CASE("planted regression on noiseless data") {
    models::ModelArtifact a;
    a.model = models::published_log_linear();
    LabeledFeatures test;
    auto rng = make_stream(3, 3);
    std::uniform_real_distribution<double> s(5, 500), c(1, 50), e(0, 20);
    while (test.features.size() < 200) {
        auto f = fv(s(rng), c(rng), e(rng));
        const double t = models::predict_regression(a.regression()[0], f);
        if (t < 1) continue;
        test.features.push_back(f);
        test.tweets.push_back(t);
    }
    test.features.push_back(fv(0, 2));
    test.tweets.push_back(4);
    test.features.push_back(fv(3, 2));
    test.tweets.push_back(0);
    const auto r = evaluate(a, test);
    CHECK(r.n == 200);
    CHECK(std::abs(*r.r_squared_log_space - 1.0) < 1e-9);
    CHECK(std::abs(*r.r_squared_raw - 1.0) < 1e-9);
    CHECK(r.notes.back() == "skipped 2 rows outside the model domain");
}

TEST_CASE("evaluate rejects empty and leaked test sets") {
    const auto train = stepped(100, 6);
    const auto a = classifier_artifact(train, 4);
    CHECK_THROWS_AS(evaluate(a, {}), DataError);
    CHECK_THROWS_WITH_AS(evaluate(a, train), doctest::Contains("leakage"), DataError);
}

TEST_CASE("zero-tweet evaluation uses every row") {
    std::vector<scoring::FeatureVector> fvs;
    std::vector<double> tweets;
    for (int i = 0; i < 100; ++i) {
        fvs.push_back(fv(0.05 * i, 2));
        tweets.push_back(i < 40 ? 0 : 7);
    }
    models::ModelArtifact a;
    a.kind = models::ArtifactKind::zero_tweet;
    a.model = models::fit_zero_tweet(fvs, tweets, models::Algorithm::decision_tree, {}, 1);
    const auto r = evaluate(a, {fvs, tweets, "zt"});
    CHECK(r.classes == std::vector<std::string>{"nonzero", "zero"});
    CHECK(*r.accuracy == 1.0);
    CHECK(r.confusion[1][1] == 40);
}

TEST_CASE("distribution binning") {
    const auto d = emit_distribution(std::vector<double>{1, 1, 10, 100});
    REQUIRE(d.bins.size() == 3);
    CHECK(d.bins[0].index == 0);
    CHECK(d.bins[0].count == 2);
    CHECK(d.bins[1].index == 10);
    CHECK(d.bins[1].log10_lower == doctest::Approx(1.0));
    CHECK(d.bins[1].count == 1);
    CHECK(d.bins[2].log10_lower == doctest::Approx(2.0));
    CHECK(d.bins[2].count == 1);
    CHECK(d.zero_count == 0);

    const auto zeros = emit_distribution(std::vector<double>(7, 0.0));
    CHECK(zeros.bins.empty());
    CHECK(zeros.zero_count == 7);
    CHECK(zeros.total == 7);
}

TEST_CASE("distribution bins sum to n minus zeros") {
    auto rng = make_stream(1, 1);
    std::geometric_distribution<int> g(0.05);
    std::vector<double> t;
    for (int i = 0; i < 5000; ++i) t.push_back(g(rng));
    const auto d = emit_distribution(t);
    std::size_t sum = 0;
    for (const auto& b : d.bins) sum += b.count;
    CHECK(sum + d.zero_count == t.size());
    CHECK(d.zero_count == static_cast<std::size_t>(std::count(t.begin(), t.end(), 0.0)));
}

TEST_CASE("distribution slope of an exact power law density") {
    std::vector<double> t;
    for (int k = 1; k <= 999; ++k) {
        const int copies = static_cast<int>(std::lround(4e6 / (static_cast<double>(k) * k)));
        t.insert(t.end(), static_cast<std::size_t>(copies), static_cast<double>(k));
    }
    CHECK(distribution_slope(emit_distribution(t)) == doctest::Approx(-2.0).epsilon(0.03));
}

TEST_CASE("pearson examples and invariances") {
    CHECK(pearson({1, 2, 3}, {1, 3, 2}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(pearson({1, 2, 3, 4}, {3, 5, 7, 9}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pearson({1, 2, 3}, {-1, -2, -3}) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK_THROWS_AS(pearson({1, 1, 1}, {1, 2, 3}), DomainError);
    CHECK_THROWS_AS(pearson({1, 2}, {1, 2}), DomainError);

    auto rng = make_stream(4, 4);
    std::normal_distribution<double> z(0, 1);
    std::uniform_real_distribution<double> scale(-50, 50);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> x(12), y(12);
        for (int i = 0; i < 12; ++i) {
            x[i] = z(rng);
            y[i] = x[i] + z(rng);
        }
        const double r = pearson(x, y);
        CHECK(pearson(y, x) == doctest::Approx(r).epsilon(1e-12));
        double a = scale(rng);
        if (std::abs(a) < 0.01) a = 1;
        const double b = scale(rng);
        auto ax = x;
        for (auto& v : ax) v = a * v + b;
        CHECK(std::abs(pearson(ax, y) - (a > 0 ? r : -r)) < 1e-9);
    }
}

TEST_CASE("ratings parsing and comparison") {
    const auto ratings = parse_ratings("Mashable \t5\nbbc\t3\n\n# comment\ncnn\t1\n");
    REQUIRE(ratings.size() == 3);
    CHECK(ratings[0].source == "mashable");
    CHECK_THROWS_AS(parse_ratings("nota rating line\n"), DataError);

    std::vector<corpus::Article> arts;
    int id = 0;
    for (auto [src, n, t] : std::vector<std::tuple<std::string, int, double>>{{"mashable", 5, 10}, {"bbc", 3, 1}, {"cnn", 1, 7}}) {
        for (int i = 0; i < n; ++i) arts.push_back(article(std::to_string(id++), src, "c", t));
    }
    const auto agg = aggregate_sources(arts);
    CHECK(agg.at("mashable").links == 5);
    CHECK(agg.at("mashable").tweets == 50);
    CHECK(agg.at("mashable").t_density == 10);
    const auto cmp = compare_ratings(ratings, agg);
    CHECK(cmp.overlap == 3);
    CHECK(cmp.links == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cmp.tweets == doctest::Approx(pearson({5, 3, 1}, {50, 3, 7})).epsilon(1e-12));

    CHECK_THROWS_AS(compare_ratings({{"mashable", 1}, {"bbc", 2}}, agg), DataError);
}

TEST_CASE("json report is byte-stable and round-trips") {
    const auto dir = testsupport::temp_dir("report");
    const auto r = sample_report();
    emit_report(r, dir / "a.json", ReportFormat::json);
    emit_report(r, dir / "b.json", ReportFormat::json);
    CHECK(testsupport::slurp(dir / "a.json") == testsupport::slurp(dir / "b.json"));
    const auto back = EvalReport::from_json(nlohmann::json::parse(testsupport::slurp(dir / "a.json")));
    CHECK(back == r);
    CHECK(back.to_json().dump() == r.to_json().dump());
    std::filesystem::remove_all(dir);
}

TEST_CASE("csv bundle writes one file per report field") {
    const auto dir = testsupport::temp_dir("bundle");
    emit_report(sample_report(), dir / "x", ReportFormat::csv_bundle);
    emit_report(sample_report(), dir / "y", ReportFormat::csv_bundle);
    std::set<std::string> names;
    for (const auto& e : std::filesystem::directory_iterator(dir / "x")) {
        names.insert(e.path().filename().string());
        CHECK(testsupport::slurp(e.path()) == testsupport::slurp(dir / "y" / e.path().filename()));
    }
    CHECK(names == std::set<std::string>{"summary.csv", "r_squared.csv", "accuracy.csv", "confusion.csv", "ablation.csv",
                                         "window_sweep.csv", "ratings.csv", "notes.csv"});
    CHECK(testsupport::slurp(dir / "x" / "confusion.csv") == "actual,A,B\nA,5,1\nB,2,4\n");
    std::filesystem::remove_all(dir);
}
