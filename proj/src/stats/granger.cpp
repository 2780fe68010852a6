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


#include <limits>

#include "sempol/error.hpp"
#include "sempol/timeseries.hpp"

namespace sempol {

GrangerResult granger_test(std::span<const double> x, std::span<const double> y, int lag,
                           const std::string& direction) {
    if (lag < 1) fail(ErrorCode::InvalidArgument, "Granger lag must be at least 1");
    if (x.size() != y.size()) {
        fail(ErrorCode::InvalidArgument, direction + ": series lengths differ (" + std::to_string(x.size()) + " vs " +
                                             std::to_string(y.size()) + ")");
    }
    const auto n = y.size();
    const auto need = static_cast<std::size_t>(3 * lag + 4);
    if (n < need) {
        fail(ErrorCode::Data, direction + ": lag " + std::to_string(lag) + " needs at least " + std::to_string(need) +
                                  " points, series has " + std::to_string(n));
    }
    const auto rows = static_cast<Eigen::Index>(n - static_cast<std::size_t>(lag));
    Eigen::MatrixXd restricted(rows, lag + 1);
    Eigen::MatrixXd unrestricted(rows, 2 * lag + 1);
    Eigen::VectorXd response(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto t = static_cast<std::size_t>(r) + static_cast<std::size_t>(lag);
        response[r] = y[t];
        restricted(r, 0) = 1.0;
        unrestricted(r, 0) = 1.0;
        for (int k = 1; k <= lag; ++k) {
            restricted(r, k) = y[t - k];
            unrestricted(r, k) = y[t - k];
            unrestricted(r, lag + k) = x[t - k];
        }
    }
    const auto fit_r = ols(restricted, response, direction + " restricted model (lag " + std::to_string(lag) + ")");
    const auto fit_u =
        ols(unrestricted, response, direction + " unrestricted model (lag " + std::to_string(lag) + ")");

    GrangerResult result;
    result.direction = direction;
    result.lag = lag;
    result.n_effective = static_cast<std::size_t>(rows);
    result.df_num = lag;
    result.df_den = static_cast<int>(rows) - 2 * lag - 1;
    result.rss_restricted = fit_r.rss;
    // Nested models: the unrestricted RSS cannot exceed the restricted one beyond rounding.
    result.rss_unrestricted = std::min(fit_u.rss, fit_r.rss);

    const double gain = result.rss_restricted - result.rss_unrestricted;
    if (result.rss_unrestricted <= std::numeric_limits<double>::min()) {
        result.f_value = gain > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    } else {
        result.f_value = (gain / lag) / (result.rss_unrestricted / result.df_den);
    }
    result.p_value = f_sf(result.f_value, result.df_num, result.df_den);
    return result;
}

HypothesisReport run_hypotheses(std::span<const double> tv, std::span<const double> social,
                                const HypothesisOptions& options) {
    if (options.min_lag < 1 || options.max_lag < options.min_lag) {
        fail(ErrorCode::InvalidArgument, "invalid Granger lag range");
    }
    if (tv.size() != social.size()) {
        fail(ErrorCode::InvalidArgument, "series lengths differ (" + std::to_string(tv.size()) + " vs " +
                                             std::to_string(social.size()) + ")");
    }
    HypothesisReport report;

    auto prepare = [](std::span<const double> levels, SeriesCheck& check, const std::string& label) {
        std::vector<double> series(levels.begin(), levels.end());
        try {
            check.adf = adf_test(series);
        } catch (const Error& e) {
            throw Error(e.code(), "series '" + label + "': " + e.what());
        }
        if (check.adf.stationary) return series;
        series = difference(series);
        check.adf_diff = adf_test(series);
        if (!check.adf_diff->stationary) {
            fail(ErrorCode::Data, "series '" + label + "' is non-stationary even after one difference (ADF " +
                                      std::to_string(check.adf_diff->statistic) + ")");
        }
        return series;
    };
    auto tv_ready = prepare(tv, report.tv, options.tv_label);
    auto social_ready = prepare(social, report.social, options.social_label);

    // A differenced series is one point shorter; align both on the common tail.
    const auto len = std::min(tv_ready.size(), social_ready.size());
    tv_ready.erase(tv_ready.begin(), tv_ready.end() - static_cast<std::ptrdiff_t>(len));
    social_ready.erase(social_ready.begin(), social_ready.end() - static_cast<std::ptrdiff_t>(len));
    report.aligned_length = len;

    const auto h1_label = options.tv_label + "->" + options.social_label;
    const auto h2_label = options.social_label + "->" + options.tv_label;
    for (int lag = options.min_lag; lag <= options.max_lag; ++lag) {
        report.h1.push_back(granger_test(tv_ready, social_ready, lag, h1_label));
        report.h2.push_back(granger_test(social_ready, tv_ready, lag, h2_label));
        if (!report.h1_min_lag && report.h1.back().significant(options.alpha)) report.h1_min_lag = lag;
        if (!report.h2_min_lag && report.h2.back().significant(options.alpha)) report.h2_min_lag = lag;
    }
    return report;
}

}  // namespace sempol
