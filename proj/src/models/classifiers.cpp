#include "newspop/models/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

namespace newspop::models {

using linalg::MatrixXd;
using linalg::RowVectorXd;
using linalg::VectorXd;
using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

int argmax_first(const VectorXd& v) {
    int best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i) {
        if (v(i) > v(best)) best = static_cast<int>(i);
    }
    return best;
}

VectorXd softmax(const VectorXd& s) {
    const double m = s.maxCoeff();
    VectorXd e = (s.array() - m).exp();
    return e / e.sum();
}

double gini(const std::vector<double>& counts, double total) {
    if (total <= 0) return 0;
    double sq = 0;
    for (double c : counts) sq += (c / total) * (c / total);
    return 1.0 - sq;
}

}  // namespace

// ---------------------------------------------------------------------------
// ClassScheme

void ClassScheme::validate() const {
    if (labels.size() != boundaries.size() + 1) throw DataError("class scheme needs one more label than boundaries");
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
        if (!(boundaries[i] > 1)) throw DataError("class boundaries must exceed 1");
        if (i > 0 && !(boundaries[i] > boundaries[i - 1])) throw DataError("class boundaries must be strictly ascending");
    }
}

const std::string& ClassScheme::assign(double tweets) const {
    if (!(tweets >= 1)) throw DataError("zero-tweet article has no class");
    auto it = std::upper_bound(boundaries.begin(), boundaries.end(), tweets);
    return labels[static_cast<std::size_t>(it - boundaries.begin())];
}

ordered_json ClassScheme::to_json() const { return {{"boundaries", boundaries}, {"labels", labels}}; }

ClassScheme ClassScheme::from_json(const json& j) {
    try {
        ClassScheme s;
        s.boundaries = j.at("boundaries").get<std::vector<double>>();
        s.labels = j.at("labels").get<std::vector<std::string>>();
        s.validate();
        return s;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed class scheme: ") + e.what());
    }
}

std::string assign_class(double tweets, const ClassScheme& scheme) { return scheme.assign(tweets); }

// ---------------------------------------------------------------------------
// Algorithm names and parameters

std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::naive_bayes: return "naive_bayes";
        case Algorithm::decision_tree: return "decision_tree";
        case Algorithm::bagging: return "bagging";
        case Algorithm::linear_margin: return "linear_margin";
    }
    return "decision_tree";
}

Algorithm algorithm_from_string(std::string_view s) {
    if (s == "naive_bayes" || s == "nb") return Algorithm::naive_bayes;
    if (s == "decision_tree" || s == "tree") return Algorithm::decision_tree;
    if (s == "bagging") return Algorithm::bagging;
    if (s == "linear_margin" || s == "linear-margin") return Algorithm::linear_margin;
    throw DataError("unknown classifier '" + std::string(s) + "'");
}

void ClassifierParams::validate(Algorithm a) const {
    if ((a == Algorithm::decision_tree || a == Algorithm::bagging) && (max_depth < 0 || min_leaf < 1)) {
        throw DataError("tree parameters need max_depth >= 0 and min_leaf >= 1");
    }
    if (a == Algorithm::bagging && n_trees < 1) throw DataError("bagging needs at least one tree");
    if (a == Algorithm::linear_margin && (epochs < 1 || !(lambda > 0) || !(eta0 > 0))) {
        throw DataError("linear_margin needs epochs >= 1, lambda > 0, eta0 > 0");
    }
    if (a == Algorithm::naive_bayes && !(variance_floor > 0)) throw DataError("variance floor must be positive");
}

ordered_json ClassifierParams::to_json() const {
    return {{"max_depth", max_depth}, {"min_leaf", min_leaf}, {"n_trees", n_trees},
            {"epochs", epochs},       {"lambda", lambda},     {"eta0", eta0},
            {"variance_floor", variance_floor}};
}

ClassifierParams ClassifierParams::from_json(const json& j) {
    ClassifierParams p;
    p.max_depth = j.at("max_depth").get<int>();
    p.min_leaf = j.at("min_leaf").get<int>();
    p.n_trees = j.at("n_trees").get<int>();
    p.epochs = j.at("epochs").get<int>();
    p.lambda = j.at("lambda").get<double>();
    p.eta0 = j.at("eta0").get<double>();
    p.variance_floor = j.at("variance_floor").get<double>();
    return p;
}

// ---------------------------------------------------------------------------
// DecisionTree

DecisionTree DecisionTree::fit(const MatrixXd& X, const std::vector<int>& y, int n_classes, int max_depth,
                               int min_leaf) {
    DecisionTree tree;
    struct Task {
        int node;
        int depth;
        std::vector<int> rows;
    };
    const auto n_features = static_cast<int>(X.cols());
    const auto K = static_cast<std::size_t>(n_classes);

    std::vector<int> all(static_cast<std::size_t>(X.rows()));
    std::iota(all.begin(), all.end(), 0);
    tree.nodes.emplace_back();
    std::vector<Task> stack;
    stack.push_back({0, 0, std::move(all)});

    std::vector<int> order;
    while (!stack.empty()) {
        Task task = std::move(stack.back());
        stack.pop_back();
        const auto& rows = task.rows;
        const double total = static_cast<double>(rows.size());

        std::vector<double> counts(K, 0.0);
        for (int r : rows) counts[static_cast<std::size_t>(y[static_cast<std::size_t>(r)])] += 1;
        {
            auto& node = tree.nodes[static_cast<std::size_t>(task.node)];
            node.distribution.resize(K);
            for (std::size_t c = 0; c < K; ++c) node.distribution[c] = total > 0 ? counts[c] / total : 0;
        }
        const double parent = gini(counts, total);
        const auto n = static_cast<int>(rows.size());
        if (parent <= 0 || task.depth >= max_depth || n < 2 * min_leaf) continue;

        double best_impurity = parent - 1e-12;
        int best_feature = -1;
        double best_threshold = 0;
        order = rows;
        for (int f = 0; f < n_features; ++f) {
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                const double xa = X(a, f), xb = X(b, f);
                return xa < xb || (xa == xb && a < b);
            });
            std::vector<double> left(K, 0.0);
            for (int i = 0; i + 1 < n; ++i) {
                left[static_cast<std::size_t>(y[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])])] += 1;
                const int n_left = i + 1;
                const int n_right = n - n_left;
                if (n_left < min_leaf) continue;
                if (n_right < min_leaf) break;
                const double v = X(order[static_cast<std::size_t>(i)], f);
                const double v_next = X(order[static_cast<std::size_t>(i + 1)], f);
                if (!(v < v_next)) continue;
                std::vector<double> right(K);
                for (std::size_t c = 0; c < K; ++c) right[c] = counts[c] - left[c];
                const double impurity =
                    (n_left * gini(left, n_left) + n_right * gini(right, n_right)) / total;
                if (impurity < best_impurity) {
                    best_impurity = impurity;
                    best_feature = f;
                    best_threshold = v + (v_next - v) / 2;
                }
            }
        }
        if (best_feature < 0) continue;

        std::vector<int> lrows, rrows;
        for (int r : rows) (X(r, best_feature) <= best_threshold ? lrows : rrows).push_back(r);
        const int left_id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        auto& node = tree.nodes[static_cast<std::size_t>(task.node)];
        node.feature = best_feature;
        node.threshold = best_threshold;
        node.left = left_id;
        node.right = left_id + 1;
        stack.push_back({left_id + 1, task.depth + 1, std::move(rrows)});
        stack.push_back({left_id, task.depth + 1, std::move(lrows)});
    }
    return tree;
}

const std::vector<double>& DecisionTree::leaf_distribution(const RowVectorXd& x) const {
    const Node* node = &nodes.front();
    while (node->feature >= 0) {
        node = &nodes[static_cast<std::size_t>(x(node->feature) <= node->threshold ? node->left : node->right)];
    }
    return node->distribution;
}

int DecisionTree::depth() const {
    std::vector<std::pair<int, int>> stack{{0, 0}};
    int deepest = 0;
    while (!stack.empty()) {
        auto [id, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        const auto& node = nodes[static_cast<std::size_t>(id)];
        if (node.feature >= 0) {
            stack.push_back({node.left, d + 1});
            stack.push_back({node.right, d + 1});
        }
    }
    return deepest;
}

std::vector<int> bootstrap_indices(std::size_t n, std::uint64_t seed, int tree_index) {
    auto rng = make_stream(seed, 0xba9000 + static_cast<std::uint64_t>(tree_index));
    std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1);
    std::vector<int> idx(n);
    for (auto& i : idx) i = pick(rng);
    return idx;
}

// ---------------------------------------------------------------------------
// ClassifierModel

ClassifierModel ClassifierModel::fit(const ClassDataset& data, Algorithm algorithm, const ClassifierParams& params,
                                     std::uint64_t seed) {
    params.validate(algorithm);
    const auto n = static_cast<Eigen::Index>(data.size());
    const auto K = static_cast<Eigen::Index>(data.classes.size());
    std::vector<double> class_count(static_cast<std::size_t>(K), 0.0);
    for (int c : data.y) class_count[static_cast<std::size_t>(c)] += 1;
    if (std::count_if(class_count.begin(), class_count.end(), [](double c) { return c > 0; }) < 2) {
        throw DataError("classifier needs at least two classes in the training data");
    }

    ClassifierModel m;
    m.algorithm_ = algorithm;
    m.params_ = params;
    m.seed_ = seed;
    m.classes_ = data.classes;
    m.columns_ = data.columns;
    m.scaler_ = linalg::Standardizer<double>::fit(data.X);
    for (int c : m.scaler_.dropped) m.dropped_.push_back(data.columns[static_cast<std::size_t>(c)]);
    const MatrixXd Z = m.scaler_.transform(data.X);
    const auto F = Z.cols();

    switch (algorithm) {
        case Algorithm::naive_bayes: {
            m.log_prior_ = VectorXd::Constant(K, -std::numeric_limits<double>::infinity());
            m.nb_mean_ = MatrixXd::Zero(K, F);
            m.nb_var_ = MatrixXd::Constant(K, F, params.variance_floor);
            for (Eigen::Index c = 0; c < K; ++c) {
                const double cnt = class_count[static_cast<std::size_t>(c)];
                if (cnt == 0) continue;
                m.log_prior_(c) = std::log(cnt / static_cast<double>(n));
                RowVectorXd sum = RowVectorXd::Zero(F);
                for (Eigen::Index i = 0; i < n; ++i) {
                    if (data.y[static_cast<std::size_t>(i)] == c) sum += Z.row(i);
                }
                RowVectorXd mean = sum / cnt;
                RowVectorXd sq = RowVectorXd::Zero(F);
                for (Eigen::Index i = 0; i < n; ++i) {
                    if (data.y[static_cast<std::size_t>(i)] == c) sq += (Z.row(i) - mean).array().square().matrix();
                }
                m.nb_mean_.row(c) = mean;
                m.nb_var_.row(c) = (sq / cnt).array() + params.variance_floor;
            }
            break;
        }
        case Algorithm::decision_tree:
            m.trees_.push_back(DecisionTree::fit(Z, data.y, static_cast<int>(K), params.max_depth, params.min_leaf));
            break;
        case Algorithm::bagging:
            for (int t = 0; t < params.n_trees; ++t) {
                auto idx = bootstrap_indices(static_cast<std::size_t>(n), seed, t);
                std::vector<int> yb;
                yb.reserve(idx.size());
                for (int i : idx) yb.push_back(data.y[static_cast<std::size_t>(i)]);
                MatrixXd Zb = Z(idx, Eigen::all);
                m.trees_.push_back(DecisionTree::fit(Zb, yb, static_cast<int>(K), params.max_depth, params.min_leaf));
            }
            break;
        case Algorithm::linear_margin: {
            // One-vs-rest hinge loss, SGD with step eta0 / (1 + eta0 * lambda * t).
            m.weights_ = MatrixXd::Zero(K, F);
            m.bias_ = VectorXd::Zero(K);
            std::vector<int> order(static_cast<std::size_t>(n));
            for (Eigen::Index c = 0; c < K; ++c) {
                auto rng = make_stream(seed, 0x11a000 + static_cast<std::uint64_t>(c));
                RowVectorXd w = RowVectorXd::Zero(F);
                double b = 0;
                std::uint64_t t = 0;
                std::iota(order.begin(), order.end(), 0);
                for (int epoch = 0; epoch < params.epochs; ++epoch) {
                    std::shuffle(order.begin(), order.end(), rng);
                    for (int i : order) {
                        const double eta = params.eta0 / (1.0 + params.eta0 * params.lambda * static_cast<double>(t++));
                        const double target = data.y[static_cast<std::size_t>(i)] == c ? 1.0 : -1.0;
                        const double margin = target * (w.dot(Z.row(i)) + b);
                        w *= 1.0 - eta * params.lambda;
                        if (margin < 1.0) {
                            w += eta * target * Z.row(i);
                            b += eta * target;
                        }
                    }
                }
                m.weights_.row(c) = w;
                m.bias_(c) = b;
            }
            break;
        }
    }
    return m;
}

VectorXd ClassifierModel::raw_scores(const RowVectorXd& z) const {
    const auto K = static_cast<Eigen::Index>(classes_.size());
    switch (algorithm_) {
        case Algorithm::naive_bayes: {
            VectorXd s = log_prior_;
            for (Eigen::Index c = 0; c < K; ++c) {
                if (!std::isfinite(s(c))) continue;
                const auto var = nb_var_.row(c).array();
                s(c) += (-0.5 * (2 * std::numbers::pi * var).log() - (z.array() - nb_mean_.row(c).array()).square() / (2 * var)).sum();
            }
            return s;
        }
        case Algorithm::decision_tree:
        case Algorithm::bagging: {
            VectorXd votes = VectorXd::Zero(K);
            if (algorithm_ == Algorithm::decision_tree) {
                const auto& d = trees_.front().leaf_distribution(z);
                for (Eigen::Index c = 0; c < K; ++c) votes(c) = d[static_cast<std::size_t>(c)];
                return votes;
            }
            for (const auto& t : trees_) {
                const auto& d = t.leaf_distribution(z);
                Eigen::Map<const VectorXd> dv(d.data(), K);
                votes(argmax_first(dv)) += 1;
            }
            return votes / static_cast<double>(trees_.size());
        }
        case Algorithm::linear_margin:
            return weights_ * z.transpose() + bias_;
    }
    return VectorXd::Zero(K);
}

VectorXd ClassifierModel::distribution(const RowVectorXd& x) const {
    const RowVectorXd z = scaler_.transform(x);
    VectorXd s = raw_scores(z);
    if (algorithm_ == Algorithm::naive_bayes || algorithm_ == Algorithm::linear_margin) return softmax(s);
    return s;
}

int ClassifierModel::predict(const RowVectorXd& x) const {
    const RowVectorXd z = scaler_.transform(x);
    return argmax_first(raw_scores(z));
}

std::vector<int> ClassifierModel::predict_all(const MatrixXd& X) const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index i = 0; i < X.rows(); ++i) out.push_back(predict(X.row(i)));
    return out;
}

ordered_json ClassifierModel::to_json() const {
    ordered_json j;
    j["algorithm"] = to_string(algorithm_);
    j["parameters"] = params_.to_json();
    j["seed"] = seed_;
    j["classes"] = classes_;
    j["columns"] = columns_;
    j["dropped_columns"] = dropped_;
    ordered_json std_j = ordered_json::array();
    for (std::size_t k = 0; k < scaler_.kept.size(); ++k) {
        std_j.push_back({{"column", columns_[static_cast<std::size_t>(scaler_.kept[k])]},
                         {"mean", scaler_.mean(static_cast<Eigen::Index>(k))},
                         {"sd", scaler_.sd(static_cast<Eigen::Index>(k))}});
    }
    j["standardization"] = std::move(std_j);

    auto matrix_json = [](const MatrixXd& M) {
        ordered_json rows = ordered_json::array();
        for (Eigen::Index r = 0; r < M.rows(); ++r) {
            ordered_json row = ordered_json::array();
            for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    ordered_json body;
    switch (algorithm_) {
        case Algorithm::naive_bayes: {
            ordered_json prior = ordered_json::array();
            for (Eigen::Index c = 0; c < log_prior_.size(); ++c) {
                if (std::isfinite(log_prior_(c))) {
                    prior.push_back(log_prior_(c));
                } else {
                    prior.push_back(nullptr);
                }
            }
            body["log_prior"] = std::move(prior);
            body["mean"] = matrix_json(nb_mean_);
            body["variance"] = matrix_json(nb_var_);
            break;
        }
        case Algorithm::decision_tree:
        case Algorithm::bagging: {
            ordered_json trees = ordered_json::array();
            for (const auto& t : trees_) {
                ordered_json nodes = ordered_json::array();
                for (const auto& nd : t.nodes) {
                    nodes.push_back({nd.feature, nd.threshold, nd.left, nd.right, nd.distribution});
                }
                trees.push_back(std::move(nodes));
            }
            body["trees"] = std::move(trees);
            break;
        }
        case Algorithm::linear_margin:
            body["weights"] = matrix_json(weights_);
            body["bias"] = std::vector<double>(bias_.data(), bias_.data() + bias_.size());
            break;
    }
    j["model"] = std::move(body);
    return j;
}

ClassifierModel ClassifierModel::from_json(const json& j) {
    try {
        ClassifierModel m;
        m.algorithm_ = algorithm_from_string(j.at("algorithm").get<std::string>());
        m.params_ = ClassifierParams::from_json(j.at("parameters"));
        m.seed_ = j.at("seed").get<std::uint64_t>();
        m.classes_ = j.at("classes").get<std::vector<std::string>>();
        m.columns_ = j.at("columns").get<std::vector<std::string>>();
        m.dropped_ = j.at("dropped_columns").get<std::vector<std::string>>();
        const auto& st = j.at("standardization");
        std::vector<double> means, sds;
        for (const auto& e : st) {
            auto col = e.at("column").get<std::string>();
            auto it = std::find(m.columns_.begin(), m.columns_.end(), col);
            if (it == m.columns_.end()) throw DataError("standardization names unknown column '" + col + "'");
            m.scaler_.kept.push_back(static_cast<int>(it - m.columns_.begin()));
            means.push_back(e.at("mean").get<double>());
            sds.push_back(e.at("sd").get<double>());
            if (!(sds.back() > 0)) throw DataError("standardization sd must be positive");
        }
        m.scaler_.mean = Eigen::Map<VectorXd>(means.data(), static_cast<Eigen::Index>(means.size()));
        m.scaler_.sd = Eigen::Map<VectorXd>(sds.data(), static_cast<Eigen::Index>(sds.size()));
        for (const auto& d : m.dropped_) {
            auto it = std::find(m.columns_.begin(), m.columns_.end(), d);
            m.scaler_.dropped.push_back(static_cast<int>(it - m.columns_.begin()));
        }
        const auto K = static_cast<Eigen::Index>(m.classes_.size());
        const auto F = static_cast<Eigen::Index>(m.scaler_.kept.size());
        auto read_matrix = [&](const json& rows, Eigen::Index r, Eigen::Index c) {
            MatrixXd M(r, c);
            if (static_cast<Eigen::Index>(rows.size()) != r) throw DataError("matrix row count mismatch");
            for (Eigen::Index i = 0; i < r; ++i) {
                const auto& row = rows.at(static_cast<std::size_t>(i));
                if (static_cast<Eigen::Index>(row.size()) != c) throw DataError("matrix column count mismatch");
                for (Eigen::Index k = 0; k < c; ++k) M(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
            }
            return M;
        };
        const auto& body = j.at("model");
        switch (m.algorithm_) {
            case Algorithm::naive_bayes: {
                const auto& prior = body.at("log_prior");
                m.log_prior_.resize(K);
                for (Eigen::Index c = 0; c < K; ++c) {
                    const auto& p = prior.at(static_cast<std::size_t>(c));
                    m.log_prior_(c) = p.is_null() ? -std::numeric_limits<double>::infinity() : p.get<double>();
                }
                m.nb_mean_ = read_matrix(body.at("mean"), K, F);
                m.nb_var_ = read_matrix(body.at("variance"), K, F);
                break;
            }
            case Algorithm::decision_tree:
            case Algorithm::bagging:
                for (const auto& tj : body.at("trees")) {
                    DecisionTree t;
                    for (const auto& nj : tj) {
                        DecisionTree::Node nd;
                        nd.feature = nj.at(0).get<int>();
                        nd.threshold = nj.at(1).get<double>();
                        nd.left = nj.at(2).get<int>();
                        nd.right = nj.at(3).get<int>();
                        nd.distribution = nj.at(4).get<std::vector<double>>();
                        t.nodes.push_back(std::move(nd));
                    }
                    if (t.nodes.empty()) throw DataError("empty decision tree");
                    m.trees_.push_back(std::move(t));
                }
                if (m.trees_.empty()) throw DataError("tree model without trees");
                break;
            case Algorithm::linear_margin: {
                m.weights_ = read_matrix(body.at("weights"), K, F);
                auto b = body.at("bias").get<std::vector<double>>();
                if (static_cast<Eigen::Index>(b.size()) != K) throw DataError("bias size mismatch");
                m.bias_ = Eigen::Map<VectorXd>(b.data(), K);
                break;
            }
        }
        return m;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed classifier model: ") + e.what());
    }
}

ClassifierModel fit_classifier(const ClassDataset& train, Algorithm algorithm, const ClassifierParams& params,
                               std::uint64_t seed) {
    return ClassifierModel::fit(train, algorithm, params, seed);
}

}  // namespace newspop::models
