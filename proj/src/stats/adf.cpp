// Copyright 2026 The sempol Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <limits>

#include "sempol/error.hpp"
#include "sempol/timeseries.hpp"

namespace sempol {

namespace {

// MacKinnon (2010), constant only, one variable: b0 + b1/T + b2/T^2 + b3/T^3
constexpr double kTauConstant[3][4] = {
    {-3.43035, -6.5393, -16.786, -79.433},
    {-2.86154, -2.8903, -4.234, -40.040},
    {-2.56677, -1.5384, -2.809, 0.0},
};

/// Rows t = start..n-1 of [y_{t-1}, dy_{t-1..t-p}, 1] against dy_t, where dy_t = y_t - y_{t-1}.
void adf_design(std::span<const double> y, int p, std::size_t start, Eigen::MatrixXd& design, Eigen::VectorXd& response) {
    const std::size_t rows = y.size() - start;
    design.resize(static_cast<Eigen::Index>(rows), p + 2);
    response.resize(static_cast<Eigen::Index>(rows));
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = start + r;
        const auto row = static_cast<Eigen::Index>(r);
        response[row] = y[t] - y[t - 1];
        design(row, 0) = y[t - 1];
        for (int k = 1; k <= p; ++k) design(row, k) = y[t - k] - y[t - k - 1];
        design(row, p + 1) = 1.0;
    }
}

}  // namespace

std::vector<double> difference(std::span<const double> series) {
    if (series.size() < 2) fail(ErrorCode::InvalidArgument, "differencing needs at least 2 points");
    std::vector<double> out(series.size() - 1);
    for (std::size_t t = 0; t + 1 < series.size(); ++t) out[t] = series[t + 1] - series[t];
    return out;
}

SPSeries difference(const SPSeries& series) {
    if (series.points.size() < 2) fail(ErrorCode::InvalidArgument, "differencing needs at least 2 points");
    SPSeries out = series;
    out.points.clear();
    for (std::size_t t = 0; t + 1 < series.points.size(); ++t) {
        const auto& a = series.points[t];
        const auto& b = series.points[t + 1];
        SPPoint p = b;
        p.value = b.value - a.value;
        p.filled = a.filled || b.filled;
        out.points.push_back(p);
    }
    return out;
}

std::array<double, 3> adf_critical_values(std::size_t nobs) {
    const double t = double(nobs);
    std::array<double, 3> cv{};
    for (int i = 0; i < 3; ++i) {
        const auto& b = kTauConstant[i];
        cv[i] = b[0] + b[1] / t + b[2] / (t * t) + b[3] / (t * t * t);
    }
    return cv;
}

int schwert_max_lag(std::size_t n) { return static_cast<int>(std::floor(12.0 * std::pow(double(n) / 100.0, 0.25))); }

AdfResult adf_test(std::span<const double> y, std::optional<int> max_lag) {
    const auto n = y.size();
    if (n < 20) fail(ErrorCode::InvalidArgument, "ADF needs at least 20 observations, got " + std::to_string(n));
    double mean = 0.0;
    for (double v : y) {
        if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "ADF input contains non-finite values");
        mean += v;
    }
    mean /= double(n);
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    if (var <= 1e-24 * std::max(1.0, mean * mean) * double(n)) {
        fail(ErrorCode::Degenerate, "ADF input has zero variance");
    }

    int upper = max_lag ? *max_lag : schwert_max_lag(n);
    if (upper < 0) fail(ErrorCode::InvalidArgument, "ADF max lag must be nonnegative");
    upper = std::min(upper, static_cast<int>(n / 2) - 2);
    if (upper < 0) upper = 0;

    // Lag choice on the common sample that the largest model can use.
    int best_lag = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd design;
    Eigen::VectorXd response;
    const std::size_t common_start = static_cast<std::size_t>(upper) + 1;
    for (int p = 0; p <= upper; ++p) {
        adf_design(y, p, common_start, design, response);
        const auto fit = ols(design, response, "ADF lag search");
        const double rows = double(fit.n);
        const double aic = rows * std::log(fit.rss / rows) + 2.0 * double(fit.k);
        if (aic < best_aic) {
            best_aic = aic;
            best_lag = p;
        }
    }

    adf_design(y, best_lag, static_cast<std::size_t>(best_lag) + 1, design, response);
    const auto fit = ols(design, response, "ADF regression");
    AdfResult result;
    result.lags_used = best_lag;
    result.n = fit.n;
    result.statistic = fit.coefficients[0] / fit.std_errors[0];
    const auto cv = adf_critical_values(fit.n);
    result.crit_1pct = cv[0];
    result.crit_5pct = cv[1];
    result.crit_10pct = cv[2];
    result.stationary = result.statistic < result.crit_5pct;
    return result;
}

}  // namespace sempol
