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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "sempol/attribution.hpp"
#include "sempol/error.hpp"
#include "test_support.hpp"

using namespace sempol;

namespace {

// F(X) = sum over tokens of w . x_t
class LinearModel final : public DifferentiableModel {
public:
    explicit LinearModel(Eigen::RowVectorXd w) : w_(std::move(w)) {}
    [[nodiscard]] double value(const Eigen::MatrixXd& x) const override { return (x * w_.transpose()).sum(); }
    [[nodiscard]] Eigen::MatrixXd gradient(const Eigen::MatrixXd& x) const override {
        return w_.replicate(x.rows(), 1);
    }

private:
    Eigen::RowVectorXd w_;
};

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
    return m;
}

const std::vector<std::string> kShared = {
    "the",   "a",      "report", "today", "people", "said",  "state", "new",   "year",  "city",
    "court", "office", "public", "house", "plan",    "group", "week",  "local", "money", "issue",
};

// Each turn: the topical keyword, four shared words and class-specific words.
std::vector<SpeakerTurn> make_corpus(std::mt19937_64& rng, const std::string& source, std::size_t n,
                                     const std::vector<std::string>& exclusive, const std::string& always,
                                     const std::string& keyword = "immigration") {
    std::vector<SpeakerTurn> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::string text = keyword;
        for (int w = 0; w < 4; ++w) text += " " + kShared[rng() % kShared.size()];
        if (!exclusive.empty()) text += " " + exclusive[rng() % exclusive.size()];
        if (!always.empty()) text += " " + always;
        const Date date{2020, 1 + int(i % 12), 1 + int(i % 28)};
        out.push_back(make_turn(source + "/" + std::to_string(i), source, date, text, default_keywords()));
    }
    return out;
}

std::vector<KeywordSpec> topic_keywords(const std::string& topic) {
    std::vector<KeywordSpec> out;
    for (const auto& k : default_keywords()) {
        if (k.topic == topic) out.push_back(k);
    }
    return out;
}

bool same_report(const AttributionReport& l, const AttributionReport& r) {
    auto same = [](const std::vector<TokenScore>& a, const std::vector<TokenScore>& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i].token != b[i].token || a[i].score != b[i].score || a[i].count != b[i].count) return false;
        }
        return true;
    };
    return same(l.tokens_a, r.tokens_a) && same(l.tokens_b, r.tokens_b);
}

}  // namespace

TEST_SUITE("integrated gradients") {
    TEST_CASE("linear model: IG equals the weights exactly for any step count") {
        const LinearModel model((Eigen::RowVectorXd(2) << 2.0, 3.0).finished());
        const Eigen::MatrixXd x = (Eigen::MatrixXd(1, 2) << 1.0, 1.0).finished();
        for (int steps : {1, 2, 7, 50, 500}) {
            const auto ig = integrated_gradients(model, x, steps);
            CHECK(ig(0, 0) == 2.0);
            CHECK(ig(0, 1) == 3.0);
        }
    }

    TEST_CASE("input equal to the baseline gives zero attribution") {
        std::mt19937_64 rng(1);
        const auto model = ReferenceClassifier::random(8, 6, 3);
        const auto x = random_matrix(rng, 4, 8);
        CHECK(integrated_gradients(model, x, x, 50).cwiseAbs().maxCoeff() == 0.0);
    }

    TEST_CASE("shape mismatch and bad steps are errors") {
        const auto model = ReferenceClassifier::random(4, 3, 1);
        CHECK_THROWS_AS(integrated_gradients(model, Eigen::MatrixXd::Ones(2, 4), Eigen::MatrixXd::Zero(3, 4), 10),
                        Error);
        CHECK_THROWS_AS(integrated_gradients(model, Eigen::MatrixXd::Ones(2, 4), 0), Error);
    }

    TEST_CASE("analytic gradient matches central differences") {
        std::mt19937_64 rng(2);
        for (int trial = 0; trial < 20; ++trial) {
            const auto model = ReferenceClassifier::random(6, 5, 100 + trial);
            const auto x = random_matrix(rng, 3, 6);
            const auto g = model.gradient(x);
            const double h = 1e-6;
            for (Eigen::Index i = 0; i < x.size(); ++i) {
                Eigen::MatrixXd up = x, down = x;
                up.data()[i] += h;
                down.data()[i] -= h;
                const double numeric = (model.value(up) - model.value(down)) / (2 * h);
                CHECK(std::abs(numeric - g.data()[i]) < 1e-7);
            }
        }
    }

    TEST_CASE("completeness within 1e-3 at 500 steps") {
        std::mt19937_64 rng(3);
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            const auto model = ReferenceClassifier::random(16, 16, 200 + trial);
            const Eigen::MatrixXd x = random_matrix(rng, 1 + trial % 7, 16) * 2.0;
            const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(x.rows(), x.cols());
            const double delta = model.value(x) - model.value(zero);
            worst = std::max(worst, std::abs(integrated_gradients(model, x, 500).sum() - delta));
        }
        MESSAGE("completeness gap " << worst);
        CHECK(worst < 1e-3);
    }

    TEST_CASE("flipping the classes negates every attribution exactly") {
        std::mt19937_64 rng(4);
        const auto model = ReferenceClassifier::random(8, 4, 9);
        const auto flipped = model.flipped();
        for (int trial = 0; trial < 20; ++trial) {
            const auto x = random_matrix(rng, 5, 8);
            CHECK(integrated_gradients(flipped, x, 50) == -integrated_gradients(model, x, 50));
        }
        CHECK(flipped.flipped() == model);
    }
}

TEST_SUITE("classifier") {
    const ToyTokenEncoder encoder(32, 0);

    TEST_CASE("disjoint vocabularies are separable") {
        std::mt19937_64 rng(5);
        const auto a = make_corpus(rng, "cnn", 150, {"alpha", "beta", "gamma"}, "");
        const auto b = make_corpus(rng, "foxnews", 150, {"delta", "epsilon", "zeta"}, "");
        const auto result = train_classifier(a, b, encoder);
        MESSAGE("separable test accuracy " << result.test.accuracy << " after " << result.epochs << " epochs");
        CHECK(result.test.accuracy >= 0.95);
        CHECK(result.test.support == 30);
        CHECK(result.model.finite());
    }

    TEST_CASE("one distribution for both classes is at chance") {
        std::mt19937_64 rng(6);
        const auto a = make_corpus(rng, "cnn", 1000, {}, "");
        const auto b = make_corpus(rng, "foxnews", 1000, {}, "");
        const auto result = train_classifier(a, b, encoder);
        MESSAGE("null test accuracy " << result.test.accuracy);
        CHECK(std::abs(result.test.accuracy - 0.5) <= 0.1);
    }

    TEST_CASE("same seed, same parameters") {
        std::mt19937_64 rng(7);
        const auto a = make_corpus(rng, "cnn", 60, {"alpha", "beta"}, "");
        const auto b = make_corpus(rng, "foxnews", 60, {"delta", "epsilon"}, "");
        const auto first = train_classifier(a, b, encoder);
        const auto second = train_classifier(a, b, encoder);
        CHECK(first.model == second.model);
        CHECK(first.epochs == second.epochs);
        TrainOptions other;
        other.seed = 8;
        CHECK_FALSE(train_classifier(a, b, encoder, other).model == first.model);
    }

    TEST_CASE("too few turns or heavy imbalance are errors") {
        std::mt19937_64 rng(8);
        const auto small = make_corpus(rng, "cnn", 49, {"alpha"}, "");
        const auto big = make_corpus(rng, "foxnews", 460, {"delta"}, "");
        const auto ok = make_corpus(rng, "cnn", 50, {"alpha"}, "");
        CHECK_THROWS_AS(train_classifier(small, big, encoder), Error);
        CHECK_THROWS_AS(train_classifier(ok, big, encoder), Error);  // 9.2 : 1
        TrainOptions bad;
        bad.learning_rate = 1e308;
        CHECK_THROWS_AS(train_classifier(ok, make_corpus(rng, "foxnews", 60, {"delta"}, ""), encoder, bad), Error);
    }
}

TEST_SUITE("token attributions") {
    const ToyTokenEncoder encoder(32, 0);

    struct Fixture {
        std::vector<SpeakerTurn> a, b;
        TrainResult trained;
    };

    const Fixture& fixture() {
        static const Fixture f = [] {
            std::mt19937_64 rng(9);
            Fixture out;
            out.a = make_corpus(rng, "cnn", 150, {"alpha", "beta"}, "");
            out.b = make_corpus(rng, "foxnews", 150, {"delta", "epsilon"}, "illegal");
            out.trained = train_classifier(out.a, out.b, ToyTokenEncoder(32, 0));
            return out;
        }();
        return f;
    }

    TEST_CASE("a class-b-only token ranks in tokens_b with a negative score") {
        const auto& f = fixture();
        const auto report = token_attributions(f.trained.model, encoder, f.a, f.b, topic_keywords("immigration"));
        REQUIRE_FALSE(report.tokens_b.empty());
        const auto it = std::find_if(report.tokens_b.begin(), report.tokens_b.end(),
                                     [](const TokenScore& t) { return t.token == "illegal"; });
        REQUIRE(it != report.tokens_b.end());
        CHECK(it->score < 0);
        CHECK(it->count == 150);
        for (std::size_t i = 1; i < report.tokens_a.size(); ++i) {
            CHECK(report.tokens_a[i - 1].score >= report.tokens_a[i].score);
        }
        for (std::size_t i = 1; i < report.tokens_b.size(); ++i) {
            CHECK(report.tokens_b[i - 1].score <= report.tokens_b[i].score);
        }
        std::set<std::string> seen;
        for (const auto& t : report.tokens_a) {
            CHECK(t.score > 0);
            seen.insert(t.token);
        }
        for (const auto& t : report.tokens_b) {
            CHECK(t.score < 0);
            CHECK_FALSE(seen.contains(t.token));
        }
    }

    TEST_CASE("the topical keyword present in every turn never appears") {
        const auto& f = fixture();
        AttributionOptions opts;
        opts.percentile = 0;
        opts.k = 100;
        const auto report = token_attributions(f.trained.model, encoder, f.a, f.b, topic_keywords("immigration"), opts);
        for (const auto* list : {&report.tokens_a, &report.tokens_b}) {
            for (const auto& t : *list) CHECK(t.token != "immigration");
        }
        // Without exclusion the keyword would qualify: it is the most frequent token.
        const auto unfiltered = token_attributions(f.trained.model, encoder, f.a, f.b, {}, opts);
        bool found = false;
        for (const auto* list : {&unfiltered.tokens_a, &unfiltered.tokens_b}) {
            for (const auto& t : *list) found = found || t.token == "immigration";
        }
        CHECK(found);
    }

    TEST_CASE("percentile 100 leaves empty lists with a diagnostic") {
        const auto& f = fixture();
        AttributionOptions opts;
        opts.percentile = 100;
        const auto report = token_attributions(f.trained.model, encoder, f.a, f.b, topic_keywords("immigration"), opts);
        CHECK(report.tokens_a.empty());
        CHECK(report.tokens_b.empty());
        CHECK_FALSE(report.diagnostics.empty());
    }

    TEST_CASE("flipped classes swap and negate the lists exactly") {
        const auto& f = fixture();
        AttributionOptions opts;
        opts.percentile = 50;
        const auto kw = topic_keywords("immigration");
        const auto report = token_attributions(f.trained.model, encoder, f.a, f.b, kw, opts);
        const auto flipped = token_attributions(f.trained.model.flipped(), encoder, f.b, f.a, kw, opts);
        REQUIRE(report.tokens_a.size() == flipped.tokens_b.size());
        REQUIRE(report.tokens_b.size() == flipped.tokens_a.size());
        for (std::size_t i = 0; i < report.tokens_a.size(); ++i) {
            CHECK(report.tokens_a[i].token == flipped.tokens_b[i].token);
            CHECK(report.tokens_a[i].score == -flipped.tokens_b[i].score);
        }
        for (std::size_t i = 0; i < report.tokens_b.size(); ++i) {
            CHECK(report.tokens_b[i].token == flipped.tokens_a[i].token);
            CHECK(report.tokens_b[i].score == -flipped.tokens_a[i].score);
        }
    }

    TEST_CASE("shuffling the corpora changes nothing") {
        const auto& f = fixture();
        const auto kw = topic_keywords("immigration");
        AttributionOptions opts;
        opts.percentile = 50;
        const auto report = token_attributions(f.trained.model, encoder, f.a, f.b, kw, opts);
        std::mt19937_64 rng(10);
        for (int trial = 0; trial < 3; ++trial) {
            auto a = f.a, b = f.b;
            std::shuffle(a.begin(), a.end(), rng);
            std::shuffle(b.begin(), b.end(), rng);
            CHECK(same_report(report, token_attributions(f.trained.model, encoder, a, b, kw, opts)));
        }
    }

    TEST_CASE("percentile helper") {
        CHECK(percentile_of({1, 2, 3, 4, 5}, 50) == 3.0);
        CHECK(percentile_of({1, 2, 3, 4, 5}, 100) == 5.0);
        CHECK(percentile_of({1, 2, 3, 4, 5}, 0) == 1.0);
        CHECK(percentile_of({10, 20}, 95) == doctest::Approx(19.5));
        CHECK_THROWS_AS(percentile_of({}, 50), Error);
    }

    TEST_CASE("CSV and markdown export") {
        AttributionReport r;
        r.topic = "immigration";
        r.class_a = "cnn";
        r.class_b = "foxnews";
        r.tokens_a = {{"border", 0.5, 10}};
        r.tokens_b = {{"illegal", -0.787, 12}};
        std::ostringstream csv;
        write_attribution_csv(csv, {r});
        CHECK(csv.str() ==
              "token,attribution,class,topic,lag\nborder,0.5,cnn,immigration,\nillegal,-0.787,foxnews,immigration,\n");
        r.lag = 3;
        std::ostringstream md;
        write_attribution_markdown(md, r);
        CHECK(md.str().find("| 1 | border | 0.5 | illegal | -0.787 |") != std::string::npos);
    }
}

TEST_SUITE("lag split") {
    std::vector<SpeakerTurn> uniform(int per_month) {
        std::vector<SpeakerTurn> out;
        for (int y = 2010; y <= 2020; ++y) {
            for (int m = 1; m <= 12; ++m) {
                for (int i = 0; i < per_month; ++i) {
                    SpeakerTurn t;
                    t.turn_id = std::to_string(y) + "-" + std::to_string(m) + "#" + std::to_string(i);
                    t.date = {y, m, 1};
                    out.push_back(t);
                }
            }
        }
        return out;
    }

    TEST_CASE("month windows") {
        const auto a = lag_window(2, LagSide::A, LeadDirection::TvLeads);
        CHECK(a.first == 1);
        CHECK(a.last == 10);
        const auto b = lag_window(2, LagSide::B, LeadDirection::TvLeads);
        CHECK(b.first == 3);
        CHECK(b.last == 12);
        const auto swapped = lag_window(2, LagSide::A, LeadDirection::TwitterLeads);
        CHECK(swapped.first == 3);
        CHECK(swapped.last == 12);
        CHECK_THROWS_AS(lag_window(0, LagSide::A, LeadDirection::TvLeads), Error);
        CHECK_THROWS_AS(lag_window(9, LagSide::A, LeadDirection::TvLeads), Error);
        CHECK(lag_window(11, LagSide::B, LeadDirection::TvLeads, 11).first == 12);
    }

    TEST_CASE("counting identity on a uniform fixture, and an exact partition") {
        const int per_month = 3;
        const auto turns = uniform(per_month);
        for (int lag = 1; lag <= 8; ++lag) {
            for (auto side : {LagSide::A, LagSide::B}) {
                for (auto dir : {LeadDirection::TvLeads, LeadDirection::TwitterLeads}) {
                    const auto split = lag_split(turns, lag, side, dir);
                    CHECK(split.kept.size() + split.dropped.size() == turns.size());
                    CHECK(split.dropped.size() == std::size_t(lag * 11 * per_month));
                    std::set<std::string> ids;
                    for (const auto& t : split.kept) ids.insert(t.turn_id);
                    for (const auto& t : split.dropped) ids.insert(t.turn_id);
                    CHECK(ids.size() == turns.size());
                    for (const auto& t : split.kept) CHECK(split.months.contains(t.date.month));
                    for (const auto& t : split.dropped) CHECK_FALSE(split.months.contains(t.date.month));
                }
            }
        }
    }
}
