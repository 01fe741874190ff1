#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "newspop/scoring.hpp"
#include "newspop/synth.hpp"
#include "support.hpp"

using namespace newspop;
using namespace newspop::scoring;
using corpus::HistoryKind;
using testsupport::article;
using testsupport::day;
using testsupport::record;

namespace {

ScoringConfig unweighted(double alpha = 0.3) {
    ScoringConfig cfg;
    cfg.ema_alpha = alpha;
    cfg.consistency_weighting = false;
    return cfg;
}

std::vector<corpus::HistoryRecord> random_history(std::uint64_t seed, int sources, int days) {
    auto rng = make_stream(seed, 1);
    std::uniform_int_distribution<int> links(0, 6), per_link(0, 40);
    std::vector<corpus::HistoryRecord> h;
    const auto start = day("2011-06-01");
    for (int s = 0; s < sources; ++s) {
        for (int d = 0; d < days; ++d) {
            const int l = links(rng);
            h.push_back({HistoryKind::source, start + std::chrono::days{d}, "src" + std::to_string(s), l,
                         static_cast<std::int64_t>(l) * per_link(rng)});
        }
    }
    return h;
}

}  // namespace

TEST_CASE("t_density") {
    CHECK(t_density(2, 12) == 6.0);
    CHECK(t_density(5, 0) == 0.0);
    CHECK_THROWS_AS(t_density(0, 7), DomainError);
}

TEST_CASE("category scores by hand") {
    const auto t = build_category_scores(
        {article("1", "s", "X", 4), article("2", "s", "x", 6), article("3", "s", "Y", 1)});
    CHECK(t.scores.size() == 2);
    CHECK(t.scores.at("x") == 5.0);
    CHECK(t.scores.at("y") == 1.0);
    CHECK(t.global_mean == doctest::Approx(11.0 / 3.0).epsilon(1e-15));
    CHECK(t.lookup("Z") == t.global_mean);
}

TEST_CASE("category score degenerate cases") {
    const auto one = build_category_scores({article("1", "s", "X", 4), article("2", "s", "X", 2)});
    REQUIRE(one.scores.size() == 1);
    CHECK(one.scores.at("x") == one.global_mean);

    const auto zeros = build_category_scores({article("1", "s", "X", 0), article("2", "s", "Y", 0)});
    for (const auto& [k, v] : zeros.scores) CHECK(v == 0.0);
    CHECK(zeros.global_mean == 0.0);

    CHECK_THROWS_AS(build_category_scores({}), DataError);
}

TEST_CASE("source score of a constant series is its value") {
    const std::vector h{record(HistoryKind::source, "2011-07-01", "a", 2, 20),
                        record(HistoryKind::source, "2011-07-02", "a", 1, 10),
                        record(HistoryKind::source, "2011-07-03", "a", 5, 50)};
    CHECK(build_source_scores(h, unweighted(), day("2011-07-10")).scores.at("a") == 10.0);
}

TEST_CASE("source score EMA by hand") {
    const std::vector h{record(HistoryKind::source, "2011-07-02", "a", 1, 2),
                        record(HistoryKind::source, "2011-07-01", "a", 1, 8)};
    CHECK(build_source_scores(h, unweighted(0.3), day("2011-07-10")).scores.at("a") ==
          doctest::Approx(6.2).epsilon(1e-15));
}

TEST_CASE("days without links are skipped, not zero") {
    const std::vector h{record(HistoryKind::source, "2011-07-01", "a", 1, 8),
                        record(HistoryKind::source, "2011-07-02", "a", 0, 0),
                        record(HistoryKind::source, "2011-07-03", "a", 1, 2)};
    CHECK(build_source_scores(h, unweighted(0.3), day("2011-07-10")).scores.at("a") ==
          doctest::Approx(6.2).epsilon(1e-15));
}

TEST_CASE("consistency weighting endpoints") {
    std::vector<corpus::HistoryRecord> h;
    for (const char* d : {"2011-07-01", "2011-07-02", "2011-07-03"}) {
        h.push_back(record(HistoryKind::source, d, "a", 1, 30));
        h.push_back(record(HistoryKind::source, d, "b", 1, 2));
    }
    ScoringConfig cfg;
    const auto t = build_source_scores(h, cfg, day("2011-07-10"));
    CHECK(t.global_mean == 16.0);
    CHECK(t.scores.at("a") == 30.0);
    CHECK(t.scores.at("b") == 0.0);
}

TEST_CASE("source window bounds") {
    const std::vector h{record(HistoryKind::source, "2011-05-01", "old", 1, 5),
                        record(HistoryKind::source, "2011-07-01", "a", 1, 5),
                        record(HistoryKind::source, "2011-07-01", "b", 0, 0)};
    ScoringConfig cfg = unweighted();
    cfg.window_days = 10;
    const auto t = build_source_scores(h, cfg, day("2011-07-05"));
    CHECK(t.scores.size() == 1);
    CHECK(t.contains("a"));
    CHECK(!t.contains("old"));
    CHECK(!t.contains("b"));

    CHECK_THROWS_AS(build_source_scores(h, cfg, day("2011-07-01")), DataError);
    CHECK_THROWS_AS(build_source_scores(h, cfg, day("2011-09-01")), DataError);
}

TEST_CASE("alpha 1 gives the last defined daily value, which equals the plain density only for constant series") {
    const auto h = random_history(3, 5, 40);
    const auto as_of = day("2011-07-20");
    const auto ema = build_source_scores(h, unweighted(1.0), as_of);
    for (const auto& [key, v] : ema.scores) {
        double last = -1;
        for (const auto& r : h)
            if (r.key == key && r.links > 0 && r.date < as_of) last = t_density(r.links, static_cast<double>(r.tweets));
        CHECK(v == last);
    }

    std::vector<corpus::HistoryRecord> constant;
    for (int d = 0; d < 19; ++d)
        constant.push_back({HistoryKind::source, day("2011-07-01") + std::chrono::days{d}, "k", 1 + d % 3, 7 * (1 + d % 3)});
    CHECK(build_source_scores(constant, unweighted(1.0), as_of).scores.at("k") ==
          build_window_density(constant, HistoryKind::source, 54, as_of).scores.at("k"));
}

TEST_CASE("scores are homogeneous of degree one in tweets") {
    const auto h = random_history(11, 8, 60);
    auto scaled = h;
    for (auto& r : scaled) r.tweets *= 3;
    const auto as_of = day("2011-08-01");
    for (bool weighting : {false, true}) {
        ScoringConfig cfg;
        cfg.consistency_weighting = weighting;
        const auto a = build_source_scores(h, cfg, as_of);
        const auto b = build_source_scores(scaled, cfg, as_of);
        CHECK(b.global_mean == doctest::Approx(3 * a.global_mean).epsilon(1e-12));
        for (const auto& [k, v] : a.scores) CHECK(b.scores.at(k) == doctest::Approx(3 * v).epsilon(1e-12));
    }
}

TEST_CASE("score tables are reproducible and serialize") {
    const auto h = random_history(5, 6, 60);
    const auto a = build_source_scores(h, {}, day("2011-08-01"));
    const auto b = build_source_scores(h, {}, day("2011-08-01"));
    CHECK(a == b);
    CHECK(a.to_json().dump() == b.to_json().dump());
    CHECK(ScoreTable::from_json(a.to_json()) == a);
    CHECK(a.to_json()["version"] == 1);
    CHECK(a.fingerprint() == b.fingerprint());
}

TEST_CASE("entity scores") {
    const std::vector h{record(HistoryKind::entity, "2011-07-01", "obama", 2, 20),
                        record(HistoryKind::entity, "2011-07-02", "obama", 1, 10),
                        record(HistoryKind::entity, "2011-07-02", "oprah winfrey", 4, 6),
                        record(HistoryKind::entity, "2011-07-03", "oprah winfrey", 1, 0),
                        record(HistoryKind::entity, "2011-05-01", "stale", 1, 9),
                        record(HistoryKind::source, "2011-07-01", "src", 1, 100)};
    const auto t = build_entity_scores(h, {}, day("2011-07-10"));
    CHECK(t.kind == TableKind::entity);
    CHECK(t.scores.at("obama") == 10.0);
    CHECK(t.scores.at("oprah winfrey") == 6.0 / 5.0);
    CHECK(!t.contains("stale"));
    CHECK(!t.contains("src"));
    CHECK(t.global_mean == doctest::Approx((10.0 + 1.2) / 2).epsilon(1e-15));
}

TEST_CASE("window sweep with labels equal to one window's scores") {
    const auto h = random_history(21, 12, 80);
    const auto as_of = day("2011-08-20");
    const auto labels = build_window_density(h, HistoryKind::source, 14, as_of).scores;
    const auto sweep = sweep_history_window(h, labels, {7, 14, 30}, as_of);
    REQUIRE(sweep.size() == 3);
    CHECK(sweep[1].window == 14);
    CHECK(sweep[1].correlation == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(sweep_history_window(h, labels, {30, 14}, as_of), DataError);
    CHECK_THROWS_AS(sweep_history_window(h, {{"src0", 1.0}, {"src1", 2.0}}, {14}, as_of), DataError);
}

TEST_CASE("window sweep on labels independent of history") {
    synth::SynthConfig cfg;
    cfg.n_sources = 100;
    cfg.n_articles = 20000;
    cfg.label_mode = synth::LabelMode::power_law;
    const auto s = synth::generate(cfg);
    const auto labels = source_t_density(s.articles);
    for (const auto& p : sweep_history_window(s.history, labels, {14, 30, 54, 80}, s.as_of)) {
        CHECK(p.sources >= 90);
        CHECK(std::abs(p.correlation) < 0.3);
    }
}

TEST_CASE("assemble_features fallback for unseen keys") {
    ScoreTables tables;
    tables.source.scores = {{"known", 3.0}};
    tables.source.global_mean = 6.4;
    tables.category.kind = TableKind::category;
    tables.category.global_mean = 2.5;
    tables.entity.kind = TableKind::entity;
    const auto subj = textfeat::SubjectivityModel::train(
        {{"awful terrible outrageous", textfeat::Label::subjective}, {"reported stated announced", textfeat::Label::objective}});
    const auto fv = assemble_features(article("1", "Unseen", "Nowhere", 0, "quiet title"), tables, subj, {});
    CHECK(fv == FeatureVector{6.4, 2.5, 0, 0, 0, 0});
}

TEST_CASE("assemble_features aggregates entities and subjectivity") {
    ScoreTables tables;
    tables.source.scores = {{"known", 3.0}};
    tables.source.global_mean = 6.4;
    tables.category.scores = {{"tech", 1.5}};
    tables.entity.scores = {{"obama", 4.0}, {"oprah winfrey", 10.0}};
    textfeat::Gazetteer g;
    g.add("Obama", textfeat::EntityKind::person);
    g.add("Oprah Winfrey", textfeat::EntityKind::person);
    g.add("Nobody Known", textfeat::EntityKind::person);
    std::vector<textfeat::LabeledDoc> docs;
    for (int i = 0; i < 10; ++i) docs.push_back({"awful terrible outrageous", textfeat::Label::subjective});
    for (int i = 0; i < 10; ++i) docs.push_back({"reported stated announced", textfeat::Label::objective});
    const auto subj = textfeat::SubjectivityModel::train(docs);

    auto a = article("1", "Known ", "Tech", 0, "Obama awful terrible", "met Oprah Winfrey");
    auto fv = assemble_features(a, tables, subj, g);
    CHECK(fv == FeatureVector{3.0, 1.5, 1, 2, 10.0, 7.0});

    a.summary = "met Oprah Winfrey and Nobody Known";
    fv = assemble_features(a, tables, subj, g);
    CHECK(fv.Ent_ct == 3);
    CHECK(fv.Ent_max == 10.0);
    CHECK(fv.Ent_avg == doctest::Approx(14.0 / 3.0).epsilon(1e-15));
    CHECK(fv.Ent_max >= fv.Ent_avg);

    auto swapped = a;
    swapped.title = "terrible awful Obama";
    CHECK(assemble_features(swapped, tables, subj, g) == assemble_features(a, tables, subj, g));
}
