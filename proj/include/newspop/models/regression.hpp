#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "newspop/scoring.hpp"

namespace newspop::models {

using scoring::FeatureVector;

enum class RegressionForm { log_linear, power_transform };

std::string_view to_string(RegressionForm f);
RegressionForm regression_form_from_string(std::string_view s);

struct RegressionSample {
    FeatureVector features;
    double tweets = 0;
};

struct FitStats {
    /// Measured on ln T (log_linear) or T^(p/2) (power_transform).
    double r_squared_transformed = 0;
    double mse_transformed = 0;
    /// Measured on T itself.
    double r_squared_raw = 0;
    double mse_raw = 0;
    std::size_t n = 0;
};

struct RegressionConfig {
    /// Exponent p of the power form T^p = (w . x)^2.
    double power_exponent = 0.45;
};

/// log_linear:      ln T = b_S ln S + b_C ln C + b_Entmax Ent_max + intercept
/// power_transform: T^p  = (w_S S + w_ct Ent_ct + w_avg Ent_avg + w_max Ent_max)^2
struct RegressionModel {
    RegressionForm form = RegressionForm::log_linear;
    std::map<std::string, double> coefficients;
    double exponent = 1.0;
    FitStats fit_stats;

    nlohmann::ordered_json to_json() const;
    static RegressionModel from_json(const nlohmann::json& j);
};

/// Least-squares fit. Requires at least 10 samples, every tweets >= 1, and
/// S, C > 0 for the log form. Throws DataError on violations or collinear
/// columns.
RegressionModel fit_regression(const std::vector<RegressionSample>& train, RegressionForm form,
                               const RegressionConfig& cfg = {});

/// Throws DomainError("out of log domain") when S <= 0 or C <= 0 under the
/// log form.
double predict_regression(const RegressionModel& model, const FeatureVector& fv);

/// Value of the model's transformed target for a tweet count.
double transform_target(const RegressionModel& model, double tweets);

/// Coefficients reported for the log-linear model on the original corpus.
RegressionModel published_log_linear();
/// Coefficients reported for the power-transform model (p = 0.45).
RegressionModel published_power_transform();

/// Thin wrappers over linalg for plain lists.
double r_squared(const std::vector<double>& predictions, const std::vector<double>& actuals);

}  // namespace newspop::models
