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


#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include "sempol/error.hpp"
#include "sempol/timeseries.hpp"
#include "test_support.hpp"

using namespace sempol;
using sempol::testing::random_walk;
using sempol::testing::white_noise;

namespace {

// Same generator as tests/oracles/stats_reference.py.
std::vector<double> lcg_uniform(std::uint64_t seed, std::size_t n) {
    std::vector<double> out;
    std::uint64_t x = seed;
    for (std::size_t i = 0; i < n; ++i) {
        x = 6364136223846793005ULL * x + 1442695040888963407ULL;
        out.push_back(double(x >> 11) * 0x1p-53 - 0.5);
    }
    return out;
}

struct ReferenceSeries {
    std::vector<double> ar, walk, x, y, ar2;
};

ReferenceSeries reference_series(std::size_t n = 132) {
    ReferenceSeries s;
    const auto u = lcg_uniform(1, n), v = lcg_uniform(2, n), e = lcg_uniform(4, n), w = lcg_uniform(5, n);
    s.x = lcg_uniform(3, n);
    s.ar.resize(n);
    s.walk.resize(n);
    s.y.resize(n);
    s.ar2.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        s.ar[t] = (t ? 0.5 * s.ar[t - 1] : 0.0) + u[t];
        s.walk[t] = (t ? s.walk[t - 1] : 0.0) + v[t];
        s.y[t] = (t >= 2 ? 0.6 * s.x[t - 2] : 0.0) + 0.5 * e[t];
        s.ar2[t] = (t >= 1 ? 1.2 * s.ar2[t - 1] : 0.0) - (t >= 2 ? 0.6 * s.ar2[t - 2] : 0.0) + w[t];
    }
    return s;
}

// y_t = coef * x_{t-lag} + noise
std::vector<double> driven(std::mt19937_64& rng, const std::vector<double>& x, int lag, double coef) {
    auto y = white_noise(rng, x.size());
    for (std::size_t t = lag; t < x.size(); ++t) y[t] += coef * x[t - lag];
    return y;
}

}  // namespace

TEST_SUITE("differencing") {
    TEST_CASE("examples") {
        CHECK(difference(std::vector<double>{1, 1, 1}) == std::vector<double>{0, 0});
        CHECK(difference(std::vector<double>{1, 2, 4}) == std::vector<double>{1, 2});
        CHECK_THROWS_AS(difference(std::vector<double>{1}), Error);
    }

    TEST_CASE("series differencing propagates fill flags and buckets") {
        SPSeries s{1, {"a", "b"}, Granularity::Monthly, {}};
        s.points = {{{2010, 1}, 1.0, 1, 1, false}, {{2010, 2}, 2.0, 1, 1, true}, {{2010, 3}, 4.0, 1, 1, false},
                    {{2010, 4}, 4.5, 1, 1, false}};
        const auto d = difference(s);
        REQUIRE(d.points.size() == 3);
        CHECK(d.values() == std::vector<double>{1.0, 2.0, 0.5});
        CHECK(d.points[0].filled);
        CHECK(d.points[1].filled);
        CHECK_FALSE(d.points[2].filled);
        CHECK(d.points[0].bucket.month == 2);
    }

    TEST_CASE("differenced random walks pass ADF in >= 95% of 200 trials") {
        std::mt19937_64 rng(21);
        int pass = 0;
        for (int i = 0; i < 200; ++i) pass += adf_test(difference(random_walk(rng, 132))).stationary ? 1 : 0;
        MESSAGE("differenced random walk stationary: " << pass << "/200");
        CHECK(pass >= 190);
    }
}

TEST_SUITE("ols") {
    TEST_CASE("two regressors, ten rows: closed form") {
        const std::vector<double> xs = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
        const std::vector<double> ys = {2.1, 3.9, 6.2, 7.8, 10.1, 12.2, 13.8, 16.1, 18.0, 19.9};
        Eigen::MatrixXd X(10, 2);
        Eigen::VectorXd y(10);
        double sx = 0, sy = 0;
        for (int i = 0; i < 10; ++i) {
            X(i, 0) = 1.0;
            X(i, 1) = xs[i];
            y(i) = ys[i];
            sx += xs[i];
            sy += ys[i];
        }
        const double mx = sx / 10, my = sy / 10;
        double sxx = 0, sxy = 0;
        for (int i = 0; i < 10; ++i) {
            sxx += (xs[i] - mx) * (xs[i] - mx);
            sxy += (xs[i] - mx) * (ys[i] - my);
        }
        const double slope = sxy / sxx, intercept = my - slope * mx;
        double rss = 0;
        for (int i = 0; i < 10; ++i) rss += std::pow(ys[i] - intercept - slope * xs[i], 2);
        const double se_slope = std::sqrt(rss / 8 / sxx);

        const auto fit = ols(X, y);
        CHECK(std::abs(fit.coefficients(0) - intercept) < 1e-10);
        CHECK(std::abs(fit.coefficients(1) - slope) < 1e-10);
        CHECK(std::abs(fit.rss - rss) < 1e-10);
        CHECK(std::abs(fit.std_errors(1) - se_slope) < 1e-10);
        CHECK(fit.n == 10);
        CHECK(fit.k == 2);
    }

    TEST_CASE("rank-deficient design names the defect") {
        Eigen::MatrixXd X(6, 3);
        Eigen::VectorXd y(6);
        for (int i = 0; i < 6; ++i) {
            X(i, 0) = 1;
            X(i, 1) = i;
            X(i, 2) = 2.0 * i;
            y(i) = i * i;
        }
        try {
            (void)ols(X, y, "fixture");
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::Degenerate);
            CHECK(std::string(e.what()).find("fixture") != std::string::npos);
            CHECK(std::string(e.what()).find("rank") != std::string::npos);
        }
    }
}

TEST_SUITE("f distribution") {
    TEST_CASE("incomplete beta matches a 20-digit reference table at 25 points") {
        // Generated by tests/oracles/ibeta_table.py (mpmath, 40 digits).
        struct Row {
            double x, a, b, expected;
        };
        const Row table[] = {
            {0.05, 0.5, 0.5, 0.1435662931287062748},    {0.3, 0.5, 0.5, 0.36901011956554537504},
            {0.9, 0.5, 0.5, 0.79516723530086657191},    {0.1, 1.0, 1.0, 0.10000000000000000555},
            {0.75, 1.0, 3.0, 0.984375},                 {0.2, 2.0, 5.0, 0.34464000000000002728},
            {0.5, 2.5, 2.5, 0.5},                       {0.8, 3.0, 1.5, 0.6958947550600286847},
            {0.01, 1.0, 60.0, 0.45284335760923853071},  {0.6, 6.0, 55.0, 0.99999999999999994143},
            {0.95, 55.0, 6.0, 0.92128073542331511405},  {0.35, 0.5, 58.5, 0.99999999999860754698},
            {0.999, 60.0, 0.5, 0.72951124144767347689}, {0.42, 10.0, 10.0, 0.23846066424405112812},
            {0.15, 7.5, 30.0, 0.23132264342839624756},  {0.7, 30.0, 7.5, 0.07219468926887015079},
            {0.5, 100.0, 100.0, 0.5},                   {0.45, 100.0, 120.0, 0.44780123014770762084},
            {0.93, 59.0, 1.0, 0.013819552009674047623}, {0.02, 0.5, 1.5, 0.17946123873319448659},
            {0.25, 1.5, 0.5, 0.057668885622437308578},  {0.66, 4.0, 4.0, 0.81630832250880004918},
            {0.88, 57.5, 5.5, 0.17069480131665657753},  {0.12, 5.5, 57.5, 0.82930519868334342247},
            {0.5, 0.5, 60.0, 0.99999999999999999991},
        };
        for (const auto& r : table) {
            INFO("x=" << r.x << " a=" << r.a << " b=" << r.b);
            CHECK(std::abs(regularized_beta(r.x, r.a, r.b) - r.expected) < 1e-10);
        }
    }

    TEST_CASE("upper tail is monotone decreasing in F") {
        for (double d1 : {1.0, 3.0, 12.0}) {
            for (double d2 : {20.0, 95.0}) {
                double prev = 1.0;
                for (double f = 0.0; f < 30.0; f += 0.05) {
                    const double p = f_sf(f, d1, d2);
                    CHECK(p <= prev);
                    CHECK(p >= 0.0);
                    prev = p;
                }
                CHECK(f_sf(0.0, d1, d2) == 1.0);
                CHECK(f_sf(std::numeric_limits<double>::infinity(), d1, d2) == 0.0);
            }
        }
    }
}

TEST_SUITE("adf") {
    TEST_CASE("matches statsmodels on fixed series") {
        // tests/oracles/stats_reference.py: adfuller(regression="c", autolag="AIC").
        const auto s = reference_series();
        const auto ar = adf_test(s.ar);
        CHECK(ar.statistic == doctest::Approx(-7.10910434390171).epsilon(1e-9));
        CHECK(ar.lags_used == 0);
        CHECK(ar.n == 131);
        CHECK(ar.crit_1pct == doctest::Approx(-3.48128180227135).epsilon(1e-9));
        CHECK(ar.crit_5pct == doctest::Approx(-2.88386789166453).epsilon(1e-9));
        CHECK(ar.crit_10pct == doctest::Approx(-2.57867719655032).epsilon(1e-9));
        CHECK(ar.stationary);

        const auto walk = adf_test(s.walk);
        CHECK(walk.statistic == doctest::Approx(-1.55054754379635).epsilon(1e-9));
        CHECK(walk.lags_used == 0);
        CHECK_FALSE(walk.stationary);

        const auto ar2 = adf_test(s.ar2);
        CHECK(ar2.statistic == doctest::Approx(-7.44957748381294).epsilon(1e-9));
        CHECK(ar2.lags_used == 2);
        CHECK(ar2.n == 129);
        CHECK(ar2.crit_5pct == doctest::Approx(-2.88421851016146).epsilon(1e-9));
    }

    TEST_CASE("white noise is stationary in >= 95% of 200 trials") {
        std::mt19937_64 rng(31);
        int pass = 0;
        for (int i = 0; i < 200; ++i) pass += adf_test(white_noise(rng, 132)).stationary ? 1 : 0;
        MESSAGE("white noise stationary: " << pass << "/200");
        CHECK(pass >= 190);
    }

    TEST_CASE("random walks are non-stationary in >= 90% of 200 trials") {
        std::mt19937_64 rng(41);
        int fail_count = 0;
        for (int i = 0; i < 200; ++i) fail_count += adf_test(random_walk(rng, 132)).stationary ? 0 : 1;
        MESSAGE("random walk non-stationary: " << fail_count << "/200");
        CHECK(fail_count >= 180);
    }

    TEST_CASE("conclusion follows the 5% rule") {
        std::mt19937_64 rng(51);
        for (int i = 0; i < 100; ++i) {
            const auto r = adf_test(i % 2 ? white_noise(rng, 60) : random_walk(rng, 60));
            CHECK(r.stationary == (r.statistic < r.crit_5pct));
            CHECK(r.crit_1pct < r.crit_5pct);
            CHECK(r.crit_5pct < r.crit_10pct);
        }
    }

    TEST_CASE("adding a constant leaves the statistic unchanged") {
        std::mt19937_64 rng(61);
        for (int i = 0; i < 50; ++i) {
            auto y = i % 2 ? white_noise(rng, 132) : random_walk(rng, 132);
            const auto base = adf_test(y);
            for (auto& v : y) v += 37.5;
            const auto shifted = adf_test(y);
            CHECK(shifted.lags_used == base.lags_used);
            CHECK(std::abs(shifted.statistic - base.statistic) < 1e-8);
        }
    }

    TEST_CASE("degenerate inputs") {
        CHECK_THROWS_AS(adf_test(std::vector<double>(50, 3.0)), Error);
        CHECK_THROWS_AS(adf_test(std::vector<double>(19, 0.0)), Error);
        std::vector<double> nan(40, 1.0);
        nan[3] = NAN;
        CHECK_THROWS_AS(adf_test(nan), Error);
        CHECK(schwert_max_lag(132) == 12);
        CHECK(schwert_max_lag(100) == 12);
        CHECK(schwert_max_lag(20) == 8);
    }
}

TEST_SUITE("granger") {
    TEST_CASE("matches statsmodels ssr F test") {
        const auto s = reference_series();
        const double F[] = {1.37889785092748, 73.4684151281311, 48.0844416412513, 39.9480219469676};
        const double P[] = {0.242469065066583, 7.99141848121314e-22, 1.38859504007246e-20, 3.51723380387244e-21};
        const int DEN[] = {128, 125, 122, 119};
        for (int lag = 1; lag <= 4; ++lag) {
            const auto r = granger_test(s.x, s.y, lag);
            CHECK(r.f_value == doctest::Approx(F[lag - 1]).epsilon(1e-9));
            CHECK(r.p_value == doctest::Approx(P[lag - 1]).epsilon(1e-8));
            CHECK(r.df_num == lag);
            CHECK(r.df_den == DEN[lag - 1]);
            CHECK(r.n_effective == std::size_t(132 - lag));
        }
    }

    TEST_CASE("p agrees with the F distribution and RSS_u <= RSS_r") {
        std::mt19937_64 rng(71);
        for (int i = 0; i < 200; ++i) {
            const auto x = white_noise(rng, 80), y = white_noise(rng, 80);
            const int lag = 1 + i % 12;
            const auto r = granger_test(x, y, lag);
            CHECK(r.f_value >= 0.0);
            CHECK(r.rss_unrestricted <= r.rss_restricted + 1e-9);
            CHECK(std::abs(r.p_value - f_sf(r.f_value, r.df_num, r.df_den)) < 1e-6);
            CHECK(r.df_den == int(80 - lag) - 2 * lag - 1);
        }
    }

    TEST_CASE("planted lag-2 cause is detected in >= 90% of 200 trials") {
        std::mt19937_64 rng(81);
        int hits = 0;
        for (int i = 0; i < 200; ++i) {
            const auto x = white_noise(rng, 132);
            hits += granger_test(x, driven(rng, x, 2, 0.9), 2).significant() ? 1 : 0;
        }
        CHECK(hits >= 180);
    }

    TEST_CASE("independent noise rejects at 5% +- 3% over 1,000 trials") {
        std::mt19937_64 rng(91);
        int rejections = 0;
        for (int i = 0; i < 1000; ++i) {
            const auto x = white_noise(rng, 132), y = white_noise(rng, 132);
            rejections += granger_test(x, y, 1 + i % 12).significant() ? 1 : 0;
        }
        MESSAGE("null rejection rate: " << rejections / 1000.0);
        CHECK(rejections >= 20);
        CHECK(rejections <= 80);
    }

    TEST_CASE("perfect predictor gives p = 0") {
        std::mt19937_64 rng(101);
        const auto x = white_noise(rng, 60);
        std::vector<double> y(60, 0.0);
        for (std::size_t t = 3; t < 60; ++t) y[t] = x[t - 3];
        y[0] = 0.3;
        y[1] = -0.2;
        y[2] = 0.1;
        const auto r = granger_test(x, y, 3);
        CHECK(r.rss_unrestricted < 1e-20);
        CHECK(r.f_value > 1e10);
        CHECK(r.p_value < 1e-12);
    }

    TEST_CASE("errors: length shortfall, mismatch, collinearity") {
        const std::vector<double> x(15, 0.0);
        CHECK_THROWS_AS(granger_test(std::vector<double>(15, 1.0), std::vector<double>(15, 2.0), 4), Error);
        CHECK_THROWS_AS(granger_test(x, std::vector<double>(16, 0.0), 1), Error);
        std::mt19937_64 rng(111);
        const auto y = white_noise(rng, 60);
        try {
            (void)granger_test(std::vector<double>(60, 2.0), y, 2);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::Degenerate);
        }
    }
}

TEST_SUITE("hypotheses") {
    TEST_CASE("tv leads social at lag 3") {
        std::mt19937_64 rng(121);
        int h1_at_3 = 0;
        std::vector<int> h2_hits(12, 0);
        const int trials = 100;
        for (int i = 0; i < trials; ++i) {
            const auto tv = white_noise(rng, 132);
            const auto social = driven(rng, tv, 3, 0.8);
            const auto report = run_hypotheses(tv, social);
            REQUIRE(report.h1.size() == 12);
            REQUIRE(report.h2.size() == 12);
            h1_at_3 += report.h1[2].significant() ? 1 : 0;
            for (int l = 0; l < 12; ++l) h2_hits[l] += report.h2[l].significant() ? 1 : 0;
            CHECK(report.h1[0].direction == "tv->twitter");
            CHECK(report.h2[0].direction == "twitter->tv");
            if (report.h1_min_lag) CHECK(*report.h1_min_lag <= 3);
        }
        CHECK(h1_at_3 >= 95);
        for (int l = 0; l < 12; ++l) {
            INFO("lag " << l + 1);
            CHECK(h2_hits[l] <= 12);  // nominal 5 of 100
        }
    }

    TEST_CASE("bidirectional generator flags both directions") {
        std::mt19937_64 rng(131);
        const std::size_t n = 132;
        auto a = white_noise(rng, n), b = white_noise(rng, n);
        for (std::size_t t = 3; t < n; ++t) {
            a[t] += 0.5 * b[t - 3];
            b[t] += 0.5 * a[t - 3];
        }
        const auto report = run_hypotheses(a, b);
        CHECK(report.h1[2].significant());
        CHECK(report.h2[2].significant());
        REQUIRE(report.h1_min_lag);
        REQUIRE(report.h2_min_lag);
    }

    TEST_CASE("a non-stationary series is differenced once and the tail is aligned") {
        std::mt19937_64 rng(141);
        const auto walk = random_walk(rng, 132);
        const auto noise = white_noise(rng, 132);
        const auto report = run_hypotheses(walk, noise);
        CHECK(report.tv.differenced());
        CHECK(report.tv.adf_diff->stationary);
        CHECK_FALSE(report.social.differenced());
        CHECK(report.aligned_length == 131);
    }

    TEST_CASE("a series that needs two differences is an error") {
        std::mt19937_64 rng(151);
        auto twice = random_walk(rng, 132);
        for (std::size_t t = 1; t < twice.size(); ++t) twice[t] += twice[t - 1];
        CHECK_THROWS_AS(run_hypotheses(twice, white_noise(rng, 132)), Error);
    }
}
