#include "newspop/models/artifact.hpp"

#include <fstream>
#include <sstream>

#include "newspop/corpus.hpp"

namespace newspop::models {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(ArtifactKind k) {
    switch (k) {
        case ArtifactKind::regression: return "regression";
        case ArtifactKind::knn: return "knn";
        case ArtifactKind::classifier: return "classifier";
        case ArtifactKind::zero_tweet: return "zero_tweet";
    }
    return "regression";
}

std::string ModelArtifact::algorithm_name() const {
    if (auto r = regression()) return std::string(to_string(r->form));
    if (knn()) return "knn";
    return std::string(to_string(classifier()->algorithm()));
}

ordered_json ModelArtifact::to_json() const {
    ordered_json j;
    j["version"] = 1;
    j["kind"] = to_string(kind);
    j["algorithm"] = algorithm_name();
    ordered_json body;
    if (auto r = regression()) {
        body = r->to_json();
        j["parameters"] = {{"exponent", r->exponent}};
        j["standardization"] = nullptr;
    } else if (auto k = knn()) {
        body = k->to_json();
        j["parameters"] = {{"K", k->K()}};
        ordered_json st = ordered_json::array();
        const auto& sc = k->standardizer();
        for (std::size_t c = 0; c < sc.kept.size(); ++c) {
            st.push_back({{"column", kFeatureNames[static_cast<std::size_t>(sc.kept[c])]},
                          {"mean", sc.mean(static_cast<Eigen::Index>(c))},
                          {"sd", sc.sd(static_cast<Eigen::Index>(c))}});
        }
        j["standardization"] = std::move(st);
    } else {
        body = classifier()->to_json();
        j["parameters"] = body["parameters"];
        j["standardization"] = body["standardization"];
    }
    j["class_scheme"] = class_scheme.to_json();
    j["seed"] = seed;
    j["log_scores"] = log_scores;
    j["config_fingerprint"] = config_fingerprint;
    j["tables_fingerprint"] = tables_fingerprint;
    j["train_fingerprint"] = train_fingerprint;
    j["trained_at"] = trained_at;
    j["model"] = std::move(body);
    return j;
}

ModelArtifact ModelArtifact::from_json(const json& j) {
    try {
        if (j.at("version").get<int>() != 1) throw DataError("unsupported model artifact version");
        ModelArtifact a;
        auto kind = j.at("kind").get<std::string>();
        if (kind == "regression") {
            a.kind = ArtifactKind::regression;
            a.model = RegressionModel::from_json(j.at("model"));
        } else if (kind == "knn") {
            a.kind = ArtifactKind::knn;
            a.model = KnnRegressor::from_json(j.at("model"));
        } else if (kind == "classifier" || kind == "zero_tweet") {
            a.kind = kind == "classifier" ? ArtifactKind::classifier : ArtifactKind::zero_tweet;
            a.model = ClassifierModel::from_json(j.at("model"));
        } else {
            throw DataError("unknown model kind '" + kind + "'");
        }
        a.class_scheme = ClassScheme::from_json(j.at("class_scheme"));
        a.seed = j.at("seed").get<std::uint64_t>();
        a.log_scores = j.at("log_scores").get<bool>();
        a.config_fingerprint = j.at("config_fingerprint").get<std::string>();
        a.tables_fingerprint = j.at("tables_fingerprint").get<std::string>();
        a.train_fingerprint = j.at("train_fingerprint").get<std::string>();
        a.trained_at = j.at("trained_at").get<std::string>();
        return a;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed model artifact: ") + e.what());
    }
}

void ModelArtifact::save(const std::filesystem::path& path) const { corpus::write_text(path, to_json().dump(2) + "\n"); }

ModelArtifact ModelArtifact::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    try {
        return from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::string ModelArtifact::fingerprint() const { return Fingerprint{}.add(to_json().dump()).hex(); }

}  // namespace newspop::models
