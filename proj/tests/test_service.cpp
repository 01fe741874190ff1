#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <future>
#include <thread>

#include "newspop/models/dataset.hpp"
#include "newspop/models/validation.hpp"
#include "newspop/pipeline.hpp"
#include "newspop/service.hpp"
#include "newspop/synth.hpp"
#include "support.hpp"

// after Eigen: resolv.h defines a _res macro that clashes with Eigen internals
#include <httplib.h>

using namespace newspop;
using namespace newspop::pipeline;
using nlohmann::json;

namespace {

Bundle make_bundle() {
    synth::SynthConfig cfg;
    cfg.n_articles = 2000;
    cfg.n_sources = 40;
    cfg.label_mode = synth::LabelMode::source_rate;
    cfg.source_rate_mu = 1.0;
    cfg.zero_rule = true;
    cfg.noise_sigma = 0.4;
    const auto s = synth::generate(cfg);
    const auto parts = corpus::split(corpus::clean(s.articles).first, {}, cfg.seed);

    Bundle b;
    b.context.tables.source = scoring::build_source_scores(s.history, {}, s.as_of);
    b.context.tables.category = scoring::build_category_scores(parts.scoring_set);
    b.context.tables.entity = scoring::build_entity_scores(s.history, {}, s.as_of);
    b.context.subjectivity = textfeat::SubjectivityModel::train(s.labeled_docs);
    b.context.gazetteer = s.gazetteer;

    const auto fvs = b.context.features(parts.train_set);
    std::vector<models::RegressionSample> reg;
    std::vector<scoring::FeatureVector> cls_fv;
    std::vector<std::string> cls;
    std::vector<double> tweets;
    for (std::size_t i = 0; i < fvs.size(); ++i) {
        const double t = *parts.train_set[i].tweets;
        tweets.push_back(t);
        if (t < 1) continue;
        if (fvs[i].S > 0 && fvs[i].C > 0) reg.push_back({fvs[i], t});
        cls_fv.push_back(fvs[i]);
        cls.push_back(models::assign_class(t));
    }
    const auto tables_fp = b.context.fingerprint();
    const auto train_fp = corpus::id_fingerprint(parts.train_set);
    for (auto* a : {&b.regression, &b.classifier, &b.zero_tweet}) {
        a->tables_fingerprint = tables_fp;
        a->train_fingerprint = train_fp;
        a->seed = cfg.seed;
    }
    b.regression.kind = models::ArtifactKind::regression;
    b.regression.model = models::fit_regression(reg, models::RegressionForm::log_linear);
    b.classifier.kind = models::ArtifactKind::classifier;
    b.classifier.model = models::fit_classifier(models::make_class_dataset(cls_fv, cls, true),
                                                models::Algorithm::bagging, {}, cfg.seed);
    b.zero_tweet.kind = models::ArtifactKind::zero_tweet;
    b.zero_tweet.model = models::fit_zero_tweet(fvs, tweets, models::Algorithm::linear_margin, {}, cfg.seed);
    b.seal();
    return b;
}

const Bundle& shared_bundle() {
    static const Bundle b = make_bundle();
    return b;
}

const std::string kValid = R"({"title":"Obama visits a factory","summary":"officials reported","source":"news001.example","category":"Technology"})";

void check_response_invariants(const json& r, const Bundle& b) {
    double sum = 0;
    std::string best;
    double best_p = -1;
    for (const auto& [k, v] : r["class_distribution"].items()) {
        sum += v.get<double>();
        if (v.get<double>() > best_p) {
            best_p = v.get<double>();
            best = k;
        }
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r["predicted_class"] == best);
    const double z = r["zero_tweet_probability"];
    CHECK(z >= 0.0);
    CHECK(z <= 1.0);
    CHECK(r["regression_estimate"].get<double>() >= 0.0);
    CHECK(r["model_fingerprint"] == b.fingerprint());
}

}  // namespace

TEST_CASE("predict request validation") {
    CHECK_NOTHROW(PredictRequest::from_json(json::parse(kValid)).validate());
    auto check_field = [](const std::string& body, const std::string& field) {
        try {
            PredictRequest::from_json(json::parse(body)).validate();
            FAIL("expected a request error for " << body);
        } catch (const RequestError& e) {
            CHECK(e.field() == field);
        }
    };
    check_field(R"({"title":"","summary":"","source":"s","category":"c"})", "title");
    check_field(R"({"title":"t","source":"","category":"c"})", "source");
    check_field(R"({"title":"t","source":"s"})", "category");
    check_field(R"({"title":5,"source":"s","category":"c"})", "title");
    check_field(R"({"title":"t","source":"s","category":"c","extra":1})", "extra");
}

TEST_CASE("routes") {
    const service::Service svc(make_bundle());
    const auto& b = svc.bundle();

    auto r = svc.handle("GET", "/healthz", "");
    CHECK(r.status == 200);
    CHECK(json::parse(r.body) == "ok");

    r = svc.handle("GET", "/v1/model", "");
    CHECK(r.status == 200);
    const auto meta = json::parse(r.body);
    CHECK(meta["model_fingerprint"] == b.fingerprint());
    CHECK(meta["regression"]["fingerprint"] == b.regression.fingerprint());
    CHECK(meta["classifier"]["algorithm"] == "bagging");

    r = svc.handle("GET", "/v1/sources", "");
    CHECK(r.status == 200);
    CHECK(json::parse(r.body)["sources"].size() == b.context.tables.source.scores.size());
    CHECK(json::parse(svc.handle("GET", "/v1/categories", "").body)["global_mean"] == b.context.tables.category.global_mean);

    r = svc.handle("GET", "/nope", "");
    CHECK(r.status == 404);
    CHECK(json::parse(r.body)["error"]["code"] == "not_found");
    CHECK(svc.handle("GET", "/v1/predict", "").status == 405);
    CHECK(svc.handle("POST", "/healthz", "").status == 405);
}

TEST_CASE("predict endpoint") {
    const service::Service svc(make_bundle());
    const auto& b = svc.bundle();

    auto r = svc.handle("POST", "/v1/predict", kValid);
    REQUIRE(r.status == 200);
    const auto body = json::parse(r.body);
    check_response_invariants(body, b);
    CHECK(r.body == predict(b, PredictRequest::from_json(json::parse(kValid))).to_json().dump() + "\n");

    r = svc.handle("POST", "/v1/predict", R"({"title":"a quiet day","source":"never-seen.example","category":"Nowhere"})");
    REQUIRE(r.status == 200);
    const auto unseen = json::parse(r.body);
    CHECK(unseen["features"]["S"] == b.context.tables.source.global_mean);
    CHECK(unseen["features"]["C"] == b.context.tables.category.global_mean);

    r = svc.handle("POST", "/v1/predict", "{not json");
    CHECK(r.status == 400);
    CHECK(json::parse(r.body)["error"]["code"] == "invalid_json");

    r = svc.handle("POST", "/v1/predict", R"({"title":"t","source":"","category":"c"})");
    CHECK(r.status == 400);
    CHECK(json::parse(r.body)["error"]["field"] == "source");
}

TEST_CASE("bundle save and load round trip") {
    const auto& b = shared_bundle();
    const auto dir = testsupport::temp_dir("bundle");
    b.context.save(dir);
    b.regression.save(dir / kRegression);
    b.classifier.save(dir / kClassifier);
    b.zero_tweet.save(dir / kZeroTweet);
    const auto loaded = Bundle::load(dir);
    CHECK(loaded.fingerprint() == b.fingerprint());
    CHECK(loaded.metadata().dump() == b.metadata().dump());
    const auto req = PredictRequest::from_json(json::parse(kValid));
    CHECK(predict(loaded, req).to_json().dump() == predict(b, req).to_json().dump());

    std::filesystem::remove(dir / kZeroTweet);
    CHECK_THROWS_AS(Bundle::load(dir), DataError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("inconsistent bundles are refused") {
    auto b = shared_bundle();
    b.classifier.tables_fingerprint = "0000000000000000";
    CHECK_THROWS_WITH_AS(b.seal(), doctest::Contains("inconsistent fingerprints"), DataError);

    b = shared_bundle();
    b.zero_tweet.kind = models::ArtifactKind::classifier;
    CHECK_THROWS_AS(b.seal(), DataError);

    b = shared_bundle();
    b.context.tables.source.scores.begin()->second += 1;
    CHECK_THROWS_AS(b.seal(), DataError);
}

TEST_CASE("http server answers concurrent identical requests identically") {
    service::Service svc(make_bundle());
    const int port = svc.bind_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread server([&] { svc.listen_after_bind(); });

    auto call = [port] {
        httplib::Client cli("127.0.0.1", port);
        auto res = cli.Post("/v1/predict", kValid, "application/json");
        return res ? std::make_pair(res->status, res->body) : std::make_pair(-1, std::string());
    };
    std::vector<std::future<std::pair<int, std::string>>> futures;
    for (int i = 0; i < 8; ++i) futures.push_back(std::async(std::launch::async, call));
    std::vector<std::pair<int, std::string>> results;
    for (auto& f : futures) results.push_back(f.get());
    for (const auto& r : results) {
        CHECK(r.first == 200);
        CHECK(r.second == results.front().second);
    }
    CHECK(results.front().second == svc.handle("POST", "/v1/predict", kValid).body);

    httplib::Client cli("127.0.0.1", port);
    auto health = cli.Get("/healthz");
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(health->get_header_value("Content-Type") == "application/json");
    auto missing = cli.Get("/v2/whatever");
    REQUIRE(missing);
    CHECK(missing->status == 404);

    svc.stop();
    server.join();
}
