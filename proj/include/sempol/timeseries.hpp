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


#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sempol/polarity.hpp"

namespace sempol {

// ---------------------------------------------------------------------------
// Ordinary least squares

struct OlsFit {
    Eigen::VectorXd coefficients;
    Eigen::VectorXd std_errors;
    double rss = 0.0;
    std::size_t n = 0;  ///< rows
    std::size_t k = 0;  ///< regressors
};

/// Least squares via column-pivoted QR. A rank-deficient design is a Degenerate
/// error naming the rank shortfall; `what` prefixes the message.
OlsFit ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& response, const std::string& what = "OLS");

// ---------------------------------------------------------------------------
// F distribution

/// Upper tail P(F(d1, d2) > f); 0 for f = +inf.
double f_sf(double f, double d1, double d2);

/// Regularized incomplete beta I_x(a, b).
double regularized_beta(double x, double a, double b);

// ---------------------------------------------------------------------------
// Differencing

std::vector<double> difference(std::span<const double> series);

/// Point t is in[t+1] - in[t], labelled with bucket t+1 and flagged if either input was filled.
SPSeries difference(const SPSeries& series);

// ---------------------------------------------------------------------------
// Augmented Dickey-Fuller (constant, no trend)

struct AdfResult {
    double statistic = 0.0;
    double crit_1pct = 0.0;
    double crit_5pct = 0.0;
    double crit_10pct = 0.0;
    int lags_used = 0;
    std::size_t n = 0;  ///< observations in the final regression
    bool stationary = false;

    [[nodiscard]] const char* conclusion() const { return stationary ? "stationary" : "non-stationary"; }
};

/// Critical values of the constant-only unit-root t statistic for a sample of
/// size `nobs` (MacKinnon 2010 response surface). Index 0/1/2 = 1%/5%/10%.
std::array<double, 3> adf_critical_values(std::size_t nobs);

/// Schwert upper bound floor(12 * (n/100)^(1/4)).
int schwert_max_lag(std::size_t n);

/// Regresses dy_t on [y_{t-1}, dy_{t-1..t-p}, 1]; p minimizes AIC over 0..max_lag
/// on a common sample, then the chosen model is refit on all usable rows.
/// Requires n >= 20, finite values and nonzero variance.
AdfResult adf_test(std::span<const double> series, std::optional<int> max_lag = std::nullopt);

// ---------------------------------------------------------------------------
// Granger causality

struct GrangerResult {
    std::string direction;  ///< "x->y" label supplied by the caller
    int lag = 0;
    double f_value = 0.0;
    double p_value = 1.0;
    std::size_t n_effective = 0;
    int df_num = 0;
    int df_den = 0;
    double rss_restricted = 0.0;
    double rss_unrestricted = 0.0;

    [[nodiscard]] bool significant(double alpha = 0.05) const { return p_value < alpha; }
};

/// Does x help predict y? Restricted: y_t on [1, y_{t-1..t-lag}]; unrestricted adds
/// x_{t-1..t-lag}. Requires equal lengths n >= 3*lag + 4.
GrangerResult granger_test(std::span<const double> x, std::span<const double> y, int lag,
                           const std::string& direction = "x->y");

struct HypothesisOptions {
    int min_lag = 1;
    int max_lag = 12;
    double alpha = 0.05;
    std::string tv_label = "tv";
    std::string social_label = "twitter";
};

struct SeriesCheck {
    AdfResult adf;                    ///< on the levels
    std::optional<AdfResult> adf_diff;  ///< after one difference, when the levels failed
    [[nodiscard]] bool differenced() const { return adf_diff.has_value(); }
};

struct HypothesisReport {
    SeriesCheck tv;
    SeriesCheck social;
    std::vector<GrangerResult> h1;  ///< tv -> social, one per lag
    std::vector<GrangerResult> h2;  ///< social -> tv
    std::optional<int> h1_min_lag;  ///< smallest significant lag
    std::optional<int> h2_min_lag;
    std::size_t aligned_length = 0;
};

/// ADF on both series, one difference for any that fails at 5% (an error if it
/// still fails), alignment on the common tail, then both Granger directions at
/// every lag in [min_lag, max_lag]. p-values are not corrected for multiple lags.
HypothesisReport run_hypotheses(std::span<const double> tv, std::span<const double> social,
                                const HypothesisOptions& options = {});

}  // namespace sempol
