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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "sempol/ingest.hpp"

namespace sempol {

/// Token vectors of one turn; row t belongs to tokens[t].
struct TokenMatrix {
    std::vector<std::string> tokens;
    Eigen::MatrixXd vectors;  ///< tokens.size() x dim
};

/// Maps a turn to per-token vectors.
class TokenEncoder {
public:
    virtual ~TokenEncoder() = default;
    [[nodiscard]] virtual std::size_t dim() const = 0;
    [[nodiscard]] virtual TokenMatrix encode(const SpeakerTurn& turn) const = 0;
};

/// Toy encoder: token t gets toy_embed(text, t, dim, window). Tokens that are
/// pure punctuation are skipped. With window 0 vectors are cached per token.
class ToyTokenEncoder final : public TokenEncoder {
public:
    ToyTokenEncoder(std::size_t dim, std::size_t window);

    [[nodiscard]] std::size_t dim() const override { return dim_; }
    [[nodiscard]] TokenMatrix encode(const SpeakerTurn& turn) const override;

private:
    std::size_t dim_;
    std::size_t window_;
    mutable std::unordered_map<std::string, Eigen::VectorXd> cache_;
};

/// A scalar function of a token matrix with an exact gradient.
class DifferentiableModel {
public:
    virtual ~DifferentiableModel() = default;
    [[nodiscard]] virtual double value(const Eigen::MatrixXd& tokens) const = 0;
    /// Same shape as `tokens`.
    [[nodiscard]] virtual Eigen::MatrixXd gradient(const Eigen::MatrixXd& tokens) const = 0;
};

/// One-hidden-layer network over the mean token vector:
///   z = v . tanh(W ((mean - mu) / sigma) + b) + c,   P(class a) = logistic(z).
/// value() returns P(class a).
class ReferenceClassifier final : public DifferentiableModel {
public:
    ReferenceClassifier() = default;
    ReferenceClassifier(Eigen::VectorXd mu, Eigen::VectorXd sigma, Eigen::MatrixXd w, Eigen::VectorXd b,
                        Eigen::VectorXd v, double c);

    /// Random weights from `seed`; standardization left at identity.
    static ReferenceClassifier random(std::size_t dim, std::size_t hidden, std::uint64_t seed);

    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(w_.cols()); }
    [[nodiscard]] std::size_t hidden() const { return static_cast<std::size_t>(w_.rows()); }

    [[nodiscard]] double logit_of_mean(const Eigen::VectorXd& mean) const;
    [[nodiscard]] double value(const Eigen::MatrixXd& tokens) const override;
    [[nodiscard]] Eigen::MatrixXd gradient(const Eigen::MatrixXd& tokens) const override;

    /// The model with class labels swapped: every logit, gradient and attribution negates.
    [[nodiscard]] ReferenceClassifier flipped() const;

    [[nodiscard]] bool operator==(const ReferenceClassifier& other) const;
    [[nodiscard]] bool finite() const;

    // Parameter access for training.
    Eigen::VectorXd& mu() { return mu_; }
    Eigen::VectorXd& sigma() { return sigma_; }
    Eigen::MatrixXd& w() { return w_; }
    Eigen::VectorXd& b() { return b_; }
    Eigen::VectorXd& v() { return v_; }
    double& c() { return c_; }
    [[nodiscard]] const Eigen::MatrixXd& w() const { return w_; }

private:
    Eigen::VectorXd mu_;
    Eigen::VectorXd sigma_;
    Eigen::MatrixXd w_;
    Eigen::VectorXd b_;
    Eigen::VectorXd v_;
    double c_ = 0.0;
};

/// logistic(z) evaluated so that logistic(-z) mirrors logistic(z).
double logistic(double z);

struct ClassifierMetrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

struct TrainOptions {
    double train_fraction = 0.8;
    double validation_fraction = 0.1;  ///< the remainder is the test split
    std::size_t hidden = 16;
    double learning_rate = 0.5;
    int max_epochs = 300;
    int patience = 20;  ///< epochs without validation improvement before stopping
    std::uint64_t seed = 7;
    std::size_t min_per_class = 50;
    double max_imbalance = 9.0;
};

struct TrainResult {
    ReferenceClassifier model;
    ClassifierMetrics test;
    int epochs = 0;
    double best_validation_loss = 0.0;
};

/// Full-batch gradient descent on cross-entropy with early stopping on the
/// validation loss. Class a is the positive class. Deterministic per seed.
TrainResult train_classifier(const std::vector<SpeakerTurn>& turns_a, const std::vector<SpeakerTurn>& turns_b,
                             const TokenEncoder& encoder, const TrainOptions& options = {});

/// Same, from precomputed token matrices.
TrainResult train_classifier(const std::vector<TokenMatrix>& class_a, const std::vector<TokenMatrix>& class_b,
                             const TrainOptions& options = {});

/// (x - x') * integral_0^1 grad F(x' + alpha (x - x')) d alpha, with the integral
/// taken by the midpoint rule over `steps` points. Empty baseline means zeros.
Eigen::MatrixXd integrated_gradients(const DifferentiableModel& model, const Eigen::MatrixXd& input,
                                     const Eigen::MatrixXd& baseline, int steps = 50);
Eigen::MatrixXd integrated_gradients(const DifferentiableModel& model, const Eigen::MatrixXd& input, int steps = 50);

struct TokenScore {
    std::string token;
    double score = 0.0;
    std::size_t count = 0;
};

struct AttributionOptions {
    std::size_t k = 10;
    double percentile = 95.0;  ///< keep tokens whose corpus frequency is above this percentile
    int steps = 50;
};

struct AttributionReport {
    std::string topic;
    std::string class_a;
    std::string class_b;
    std::vector<TokenScore> tokens_a;  ///< score > 0, descending
    std::vector<TokenScore> tokens_b;  ///< score < 0, ascending
    double frequency_percentile = 95.0;
    double frequency_threshold = 0.0;
    bool keyword_excluded = true;
    std::optional<int> lag;
    std::vector<std::string> diagnostics;
};

/// Per-token score = sum over dimensions of the token's IG row, averaged over
/// all occurrences in both corpora. Tokens at or below the frequency
/// percentile and the topic's keyword words are dropped; top k per sign.
AttributionReport token_attributions(const ReferenceClassifier& model, const TokenEncoder& encoder,
                                     const std::vector<SpeakerTurn>& corpus_a,
                                     const std::vector<SpeakerTurn>& corpus_b,
                                     const std::vector<KeywordSpec>& topic_keywords,
                                     const AttributionOptions& options = {});

/// Linear-interpolation percentile (p in [0, 100]) of the values.
double percentile_of(std::vector<double> values, double p);

// ---------------------------------------------------------------------------
// Lag-shifted month windows

enum class LagSide { A, B };
enum class LeadDirection { TvLeads, TwitterLeads };

struct MonthRange {
    int first = 1;
    int last = 12;

    [[nodiscard]] bool contains(int month) const { return month >= first && month <= last; }
};

/// Side a keeps months [1, 12 - lag], side b keeps [1 + lag, 12]; TwitterLeads swaps them.
MonthRange lag_window(int lag, LagSide side, LeadDirection direction, int max_lag = 8);

struct LagSplit {
    MonthRange months;
    std::vector<SpeakerTurn> kept;
    std::vector<SpeakerTurn> dropped;
};

/// Partitions turns by month; every input turn lands in exactly one of kept / dropped.
LagSplit lag_split(const std::vector<SpeakerTurn>& turns, int lag, LagSide side, LeadDirection direction,
                   int max_lag = 8);

// ---------------------------------------------------------------------------
// Export

/// CSV columns token,attribution,class,topic,lag
void write_attribution_csv(std::ostream& out, const std::vector<AttributionReport>& reports);
void write_attribution_markdown(std::ostream& out, const AttributionReport& report);

}  // namespace sempol
