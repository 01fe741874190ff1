#include "newspop/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "newspop/linalg.hpp"
#include "newspop/models/dataset.hpp"

namespace newspop::eval {

using linalg::VectorXd;
using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T>
ordered_json opt(const std::optional<T>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

template <typename T>
std::optional<T> opt_get(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

}  // namespace

ordered_json EvalReport::to_json() const {
    ordered_json j;
    j["version"] = 1;
    j["model"] = model;
    j["n"] = n;
    j["r_squared_log_space"] = opt(r_squared_log_space);
    j["r_squared_raw"] = opt(r_squared_raw);
    j["mse_raw"] = opt(mse_raw);
    j["accuracy"] = opt(accuracy);
    j["classes"] = classes;
    j["confusion"] = confusion;
    ordered_json ab = ordered_json::array();
    for (const auto& r : ablation) ab.push_back({{"omitted", r.omitted}, {"accuracy", r.accuracy}});
    j["ablation"] = std::move(ab);
    ordered_json sw = ordered_json::array();
    for (const auto& p : window_sweep) sw.push_back({{"window", p.window}, {"correlation", p.correlation}, {"sources", p.sources}});
    j["window_sweep"] = std::move(sw);
    j["ratings"] = ratings ? ratings->to_json() : ordered_json(nullptr);
    j["notes"] = notes;
    return j;
}

EvalReport EvalReport::from_json(const json& j) {
    try {
        EvalReport r;
        r.model = j.at("model").get<std::string>();
        r.n = j.at("n").get<std::size_t>();
        r.r_squared_log_space = opt_get<double>(j, "r_squared_log_space");
        r.r_squared_raw = opt_get<double>(j, "r_squared_raw");
        r.mse_raw = opt_get<double>(j, "mse_raw");
        r.accuracy = opt_get<double>(j, "accuracy");
        r.classes = j.at("classes").get<std::vector<std::string>>();
        r.confusion = j.at("confusion").get<std::vector<std::vector<std::size_t>>>();
        for (const auto& a : j.at("ablation")) r.ablation.push_back({a.at("omitted").get<std::string>(), a.at("accuracy").get<double>()});
        for (const auto& p : j.at("window_sweep")) {
            r.window_sweep.push_back({p.at("window").get<int>(), p.at("correlation").get<double>(), p.at("sources").get<std::size_t>()});
        }
        if (j.contains("ratings") && !j.at("ratings").is_null()) {
            const auto& x = j.at("ratings");
            r.ratings = RatingComparison{x.at("overlap").get<std::size_t>(), x.at("links").get<double>(),
                                         x.at("tweets").get<double>(), x.at("t_density").get<double>()};
        }
        r.notes = j.at("notes").get<std::vector<std::string>>();
        return r;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed eval report: ") + e.what());
    }
}

bool EvalReport::operator==(const EvalReport& o) const { return to_json() == o.to_json(); }

void fill_classification(EvalReport& report, const std::vector<std::string>& classes, const std::vector<int>& actual,
                         const std::vector<int>& predicted) {
    report.classes = classes;
    report.confusion.assign(classes.size(), std::vector<std::size_t>(classes.size(), 0));
    std::size_t correct = 0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        ++report.confusion[static_cast<std::size_t>(actual[i])][static_cast<std::size_t>(predicted[i])];
        if (actual[i] == predicted[i]) ++correct;
    }
    report.n = actual.size();
    report.accuracy = actual.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(actual.size());
}

EvalReport evaluate(const models::ModelArtifact& artifact, const LabeledFeatures& test) {
    if (test.features.empty()) throw DataError("evaluation needs a non-empty test set");
    if (test.features.size() != test.tweets.size()) throw DataError("test features and labels differ in count");
    if (!test.fingerprint.empty() && test.fingerprint == artifact.train_fingerprint) {
        throw DataError("leakage: test set fingerprint equals the training set fingerprint");
    }
    EvalReport report;
    report.model = artifact.algorithm_name();
    report.notes.push_back("model " + artifact.fingerprint());
    report.notes.push_back("model-config " + artifact.config_fingerprint);
    report.notes.push_back("tables " + artifact.tables_fingerprint);
    report.notes.push_back("test " + test.fingerprint);

    if (artifact.kind == models::ArtifactKind::regression || artifact.kind == models::ArtifactKind::knn) {
        std::vector<double> pred, actual, log_pred, log_actual;
        std::size_t skipped = 0;
        for (std::size_t i = 0; i < test.features.size(); ++i) {
            const auto& fv = test.features[i];
            const double t = test.tweets[i];
            if (!(t >= 1)) {
                ++skipped;
                continue;
            }
            double p;
            double z_pred, z_actual;
            if (auto r = artifact.regression()) {
                if (r->form == models::RegressionForm::log_linear && (!(fv.S > 0) || !(fv.C > 0))) {
                    ++skipped;
                    continue;
                }
                p = models::predict_regression(*r, fv);
                z_actual = models::transform_target(*r, t);
                z_pred = r->form == models::RegressionForm::log_linear
                             ? std::log(p)
                             : std::max(0.0, r->coefficients.at("w_S") * fv.S + r->coefficients.at("w_ct") * fv.Ent_ct +
                                                 r->coefficients.at("w_avg") * fv.Ent_avg +
                                                 r->coefficients.at("w_max") * fv.Ent_max);
            } else {
                p = artifact.knn()->predict(fv);
                z_actual = std::log(t);
                z_pred = std::log(std::max(p, 1e-300));
            }
            pred.push_back(p);
            actual.push_back(t);
            log_pred.push_back(z_pred);
            log_actual.push_back(z_actual);
        }
        if (actual.size() < 2) throw DataError("evaluation needs at least 2 rows with tweets >= 1");
        report.n = actual.size();
        report.r_squared_log_space = models::r_squared(log_pred, log_actual);
        report.r_squared_raw = models::r_squared(pred, actual);
        Eigen::Map<const VectorXd> p(pred.data(), static_cast<Eigen::Index>(pred.size()));
        Eigen::Map<const VectorXd> a(actual.data(), static_cast<Eigen::Index>(actual.size()));
        report.mse_raw = linalg::mean_squared_error(p, a);
        if (skipped > 0) report.notes.push_back("skipped " + std::to_string(skipped) + " rows outside the model domain");
        return report;
    }

    const auto& clf = *artifact.classifier();
    std::vector<int> actual, predicted;
    for (std::size_t i = 0; i < test.features.size(); ++i) {
        const double t = test.tweets[i];
        std::string label;
        if (artifact.kind == models::ArtifactKind::zero_tweet) {
            label = t > 0 ? models::kNonzeroLabel : models::kZeroLabel;
        } else {
            if (!(t >= 1)) continue;
            label = artifact.class_scheme.assign(t);
        }
        auto it = std::find(clf.classes().begin(), clf.classes().end(), label);
        if (it == clf.classes().end()) throw DataError("test label '" + label + "' unknown to the model");
        actual.push_back(static_cast<int>(it - clf.classes().begin()));
        predicted.push_back(clf.predict(models::feature_row(test.features[i], artifact.log_scores)));
    }
    if (actual.empty()) throw DataError("evaluation found no rows the classifier can score");
    fill_classification(report, clf.classes(), actual, predicted);
    return report;
}

Distribution emit_distribution(const std::vector<double>& tweets, double bin_width) {
    if (!(bin_width > 0)) throw DataError("bin width must be positive");
    Distribution d;
    d.bin_width = bin_width;
    d.total = tweets.size();
    std::map<int, std::size_t> counts;
    for (double t : tweets) {
        if (!(t > 0)) {
            ++d.zero_count;
            continue;
        }
        ++counts[static_cast<int>(std::floor(std::log10(t) / bin_width + 1e-9))];
    }
    for (const auto& [idx, count] : counts) {
        DistributionBin b;
        b.index = idx;
        b.log10_lower = idx * bin_width;
        b.count = count;
        b.log10_count = std::log10(static_cast<double>(count));
        // integers k with idx <= log10(k)/w + eps < idx+1
        const double lo = std::pow(10.0, (idx - 1e-9) * bin_width);
        const double hi = std::pow(10.0, (idx + 1 - 1e-9) * bin_width);
        const double first = std::ceil(lo);
        const double last = std::ceil(hi) - 1;
        b.integers = last >= first ? static_cast<std::size_t>(last - first + 1) : 0;
        if (b.integers > 0) {
            b.log10_density = std::log10(static_cast<double>(count) / static_cast<double>(b.integers));
            b.log10_center = 0.5 * (std::log10(first) + std::log10(last));
        } else {
            // Non-integer labels inside an integer-free bin: fall back to the bin geometry.
            b.log10_density = std::log10(static_cast<double>(count) / (hi - lo));
            b.log10_center = (idx + 0.5) * bin_width;
        }
        d.bins.push_back(b);
    }
    return d;
}

Distribution emit_distribution(const std::vector<corpus::Article>& articles, double bin_width) {
    std::vector<double> tweets;
    for (const auto& a : articles) {
        if (a.tweets) tweets.push_back(*a.tweets);
    }
    return emit_distribution(tweets, bin_width);
}

double distribution_slope(const Distribution& d, std::size_t min_count) {
    if (d.bins.empty()) throw DomainError("empty distribution");
    auto peak = std::max_element(d.bins.begin(), d.bins.end(),
                                 [](const DistributionBin& a, const DistributionBin& b) { return a.count < b.count; });
    std::vector<double> xs, ys;
    for (auto it = peak; it != d.bins.end(); ++it) {
        if (it->count < min_count) continue;
        xs.push_back(it->log10_center);
        ys.push_back(it->log10_density);
    }
    if (xs.size() < 2) throw DomainError("distribution slope needs at least two populated bins");
    Eigen::Map<const VectorXd> x(xs.data(), static_cast<Eigen::Index>(xs.size()));
    Eigen::Map<const VectorXd> y(ys.data(), static_cast<Eigen::Index>(ys.size()));
    return linalg::slope(x, y);
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    Eigen::Map<const VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::Map<const VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
    return linalg::pearson(xv, yv);
}

std::vector<ExternalRating> parse_ratings(std::string_view text) {
    std::vector<ExternalRating> out;
    std::size_t start = 0, line_no = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string_view::npos) throw DataError("ratings line " + std::to_string(line_no) + ": missing tab");
        ExternalRating r;
        r.source = corpus::normalize_key(line.substr(0, tab));
        try {
            std::size_t used = 0;
            std::string num(line.substr(tab + 1));
            r.rating = std::stod(num, &used);
            if (used != num.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw DataError("ratings line " + std::to_string(line_no) + ": bad rating");
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<ExternalRating> load_ratings(const std::filesystem::path& path) { return parse_ratings(read_file(path)); }

std::map<std::string, SourceAggregate> aggregate_sources(const std::vector<corpus::Article>& articles) {
    std::map<std::string, SourceAggregate> out;
    for (const auto& a : articles) {
        if (!a.tweets) continue;
        auto& agg = out[corpus::normalize_key(a.source)];
        ++agg.links;
        agg.tweets += *a.tweets;
    }
    for (auto& [k, agg] : out) agg.t_density = scoring::t_density(agg.links, agg.tweets);
    return out;
}

RatingComparison compare_ratings(const std::vector<ExternalRating>& ratings,
                                 const std::map<std::string, SourceAggregate>& aggregates) {
    std::vector<double> r, links, tweets, density;
    for (const auto& rating : ratings) {
        auto it = aggregates.find(rating.source);
        if (it == aggregates.end()) continue;
        r.push_back(rating.rating);
        links.push_back(static_cast<double>(it->second.links));
        tweets.push_back(it->second.tweets);
        density.push_back(it->second.t_density);
    }
    if (r.size() < 3) {
        throw DataError("ratings comparison needs at least 3 overlapping sources, found " + std::to_string(r.size()));
    }
    RatingComparison c;
    c.overlap = r.size();
    c.links = pearson(r, links);
    c.tweets = pearson(r, tweets);
    c.t_density = pearson(r, density);
    return c;
}

ordered_json RatingComparison::to_json() const {
    return {{"overlap", overlap}, {"links", links}, {"tweets", tweets}, {"t_density", t_density}};
}

std::string distribution_csv(const Distribution& d) {
    std::string out = "log10_tweets_bin,count,log10_count,integers,log10_density\n";
    for (const auto& b : d.bins) {
        out += fmt(b.log10_lower) + "," + std::to_string(b.count) + "," + fmt(b.log10_count) + "," +
               std::to_string(b.integers) + "," + fmt(b.log10_density) + "\n";
    }
    out += "# zero_tweet_articles," + std::to_string(d.zero_count) + "\n";
    return out;
}

std::string sweep_csv(const std::vector<scoring::SweepPoint>& sweep) {
    std::string out = "window,correlation,sources\n";
    for (const auto& p : sweep) out += std::to_string(p.window) + "," + fmt(p.correlation) + "," + std::to_string(p.sources) + "\n";
    return out;
}

void emit_report(const EvalReport& report, const std::filesystem::path& path, ReportFormat format) {
    if (format == ReportFormat::json) {
        corpus::write_text(path, report.to_json().dump(2) + "\n");
        return;
    }
    auto cell = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
    corpus::write_text(path / "summary.csv", "model,n\n" + report.model + "," + std::to_string(report.n) + "\n");
    corpus::write_text(path / "r_squared.csv", "r_squared_log_space,r_squared_raw,mse_raw\n" + cell(report.r_squared_log_space) +
                                                    "," + cell(report.r_squared_raw) + "," + cell(report.mse_raw) + "\n");
    corpus::write_text(path / "accuracy.csv", "accuracy\n" + cell(report.accuracy) + "\n");
    std::string conf = "actual";
    for (const auto& c : report.classes) conf += "," + c;
    conf += "\n";
    for (std::size_t i = 0; i < report.confusion.size(); ++i) {
        conf += report.classes[i];
        for (auto v : report.confusion[i]) conf += "," + std::to_string(v);
        conf += "\n";
    }
    corpus::write_text(path / "confusion.csv", conf);
    std::string ab = "omitted,accuracy\n";
    for (const auto& r : report.ablation) ab += r.omitted + "," + fmt(r.accuracy) + "\n";
    corpus::write_text(path / "ablation.csv", ab);
    corpus::write_text(path / "window_sweep.csv", sweep_csv(report.window_sweep));
    std::string ratings = "overlap,links,tweets,t_density\n";
    if (report.ratings) {
        ratings += std::to_string(report.ratings->overlap) + "," + fmt(report.ratings->links) + "," +
                   fmt(report.ratings->tweets) + "," + fmt(report.ratings->t_density) + "\n";
    }
    corpus::write_text(path / "ratings.csv", ratings);
    std::string notes = "note\n";
    for (const auto& n : report.notes) notes += n + "\n";
    corpus::write_text(path / "notes.csv", notes);
}

}  // namespace newspop::eval
