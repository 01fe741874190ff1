#include "newspop/models/regression.hpp"

#include <cmath>

#include "newspop/linalg.hpp"

namespace newspop::models {

using linalg::MatrixXd;
using linalg::VectorXd;
using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kLogLinearTerms{"b_S", "b_C", "b_Entmax", "intercept"};
const std::vector<std::string> kPowerTerms{"w_S", "w_ct", "w_avg", "w_max"};

double linear_form(const RegressionModel& m, const FeatureVector& fv) {
    const auto& c = m.coefficients;
    return c.at("w_S") * fv.S + c.at("w_ct") * fv.Ent_ct + c.at("w_avg") * fv.Ent_avg + c.at("w_max") * fv.Ent_max;
}

}  // namespace

std::string_view to_string(RegressionForm f) {
    return f == RegressionForm::log_linear ? "log_linear" : "power_transform";
}

RegressionForm regression_form_from_string(std::string_view s) {
    if (s == "log_linear" || s == "log-linear") return RegressionForm::log_linear;
    if (s == "power_transform" || s == "power") return RegressionForm::power_transform;
    throw DataError("unknown regression form '" + std::string(s) + "'");
}

double transform_target(const RegressionModel& model, double tweets) {
    return model.form == RegressionForm::log_linear ? std::log(tweets) : std::pow(tweets, model.exponent / 2.0);
}

RegressionModel fit_regression(const std::vector<RegressionSample>& train, RegressionForm form,
                               const RegressionConfig& cfg) {
    const auto n = static_cast<Eigen::Index>(train.size());
    if (n < 10) throw DataError("regression needs at least 10 samples, got " + std::to_string(n));
    if (!(cfg.power_exponent > 0 && cfg.power_exponent <= 1)) throw DataError("power exponent must be in (0, 1]");

    RegressionModel model;
    model.form = form;
    model.exponent = form == RegressionForm::log_linear ? 1.0 : cfg.power_exponent;

    MatrixXd X(n, 4);
    VectorXd z(n);
    VectorXd raw(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& s = train[static_cast<std::size_t>(i)];
        if (!(s.tweets >= 1)) throw DataError("regression samples need tweets >= 1 (zero-tweet articles excluded)");
        raw(i) = s.tweets;
        const auto& f = s.features;
        if (form == RegressionForm::log_linear) {
            if (!(f.S > 0) || !(f.C > 0)) throw DataError("S and C must be positive for the log-linear form");
            X.row(i) << std::log(f.S), std::log(f.C), f.Ent_max, 1.0;
        } else {
            X.row(i) << f.S, static_cast<double>(f.Ent_ct), f.Ent_avg, f.Ent_max;
        }
        z(i) = transform_target(model, s.tweets);
    }

    const auto& names = form == RegressionForm::log_linear ? kLogLinearTerms : kPowerTerms;
    auto ls = linalg::least_squares(X, z, names);
    for (std::size_t k = 0; k < names.size(); ++k) model.coefficients[names[k]] = ls.coefficients(static_cast<Eigen::Index>(k));

    if (form == RegressionForm::power_transform && (ls.fitted.array() <= 0).all()) {
        throw DataError("power-transform fit is non-positive on every training sample");
    }

    VectorXd predicted(n);
    for (Eigen::Index i = 0; i < n; ++i) predicted(i) = predict_regression(model, train[static_cast<std::size_t>(i)].features);
    auto& st = model.fit_stats;
    st.n = static_cast<std::size_t>(n);
    st.mse_transformed = linalg::mean_squared_error(ls.fitted, z);
    st.r_squared_transformed = linalg::variance(z) > 0 ? linalg::r_squared(ls.fitted, z) : 1.0;
    st.mse_raw = linalg::mean_squared_error(predicted, raw);
    st.r_squared_raw = linalg::variance(raw) > 0 ? linalg::r_squared(predicted, raw) : 1.0;
    return model;
}

double predict_regression(const RegressionModel& model, const FeatureVector& fv) {
    const auto& c = model.coefficients;
    if (model.form == RegressionForm::log_linear) {
        if (!(fv.S > 0) || !(fv.C > 0)) throw DomainError("out of log domain: S and C must be positive");
        return std::exp(c.at("b_S") * std::log(fv.S) + c.at("b_C") * std::log(fv.C) + c.at("b_Entmax") * fv.Ent_max +
                        c.at("intercept"));
    }
    const double lin = std::max(linear_form(model, fv), 0.0);
    return std::pow(lin, 2.0 / model.exponent);
}

RegressionModel published_log_linear() {
    RegressionModel m;
    m.form = RegressionForm::log_linear;
    m.coefficients = {{"b_S", 1.24}, {"b_C", 0.45}, {"b_Entmax", 0.1}, {"intercept", -3.0}};
    return m;
}

RegressionModel published_power_transform() {
    RegressionModel m;
    m.form = RegressionForm::power_transform;
    m.exponent = 0.45;
    m.coefficients = {{"w_S", 0.2}, {"w_ct", -0.1}, {"w_avg", -0.1}, {"w_max", 0.2}};
    return m;
}

double r_squared(const std::vector<double>& predictions, const std::vector<double>& actuals) {
    Eigen::Map<const VectorXd> p(predictions.data(), static_cast<Eigen::Index>(predictions.size()));
    Eigen::Map<const VectorXd> a(actuals.data(), static_cast<Eigen::Index>(actuals.size()));
    return linalg::r_squared(p, a);
}

ordered_json RegressionModel::to_json() const {
    ordered_json j;
    j["form"] = to_string(form);
    j["exponent"] = exponent;
    ordered_json c = ordered_json::object();
    for (const auto& [k, v] : coefficients) c[k] = v;
    j["coefficients"] = std::move(c);
    j["fit_stats"] = {{"n", fit_stats.n},
                      {"r_squared_transformed", fit_stats.r_squared_transformed},
                      {"mse_transformed", fit_stats.mse_transformed},
                      {"r_squared_raw", fit_stats.r_squared_raw},
                      {"mse_raw", fit_stats.mse_raw}};
    return j;
}

RegressionModel RegressionModel::from_json(const json& j) {
    try {
        RegressionModel m;
        m.form = regression_form_from_string(j.at("form").get<std::string>());
        m.exponent = j.at("exponent").get<double>();
        for (const auto& [k, v] : j.at("coefficients").items()) m.coefficients[k] = v.get<double>();
        const auto& names = m.form == RegressionForm::log_linear ? kLogLinearTerms : kPowerTerms;
        for (const auto& name : names) {
            if (!m.coefficients.count(name)) throw DataError("regression model lacks coefficient '" + name + "'");
        }
        if (!(m.exponent > 0 && m.exponent <= 1)) throw DataError("regression exponent must be in (0, 1]");
        const auto& st = j.at("fit_stats");
        m.fit_stats.n = st.at("n").get<std::size_t>();
        m.fit_stats.r_squared_transformed = st.at("r_squared_transformed").get<double>();
        m.fit_stats.mse_transformed = st.at("mse_transformed").get<double>();
        m.fit_stats.r_squared_raw = st.at("r_squared_raw").get<double>();
        m.fit_stats.mse_raw = st.at("mse_raw").get<double>();
        return m;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed regression model: ") + e.what());
    }
}

}  // namespace newspop::models
