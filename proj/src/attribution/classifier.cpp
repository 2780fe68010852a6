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
#include <numbers>
#include <random>

#include "sempol/attribution.hpp"
#include "sempol/error.hpp"
#include "sempol/store.hpp"

namespace sempol {

namespace {

/// Standard normal from raw engine output, independent of the standard library's distributions.
class Gaussian {
public:
    explicit Gaussian(std::uint64_t seed) : engine_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = (double(engine_() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = double(engine_() >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

template <typename T>
void fisher_yates(std::vector<T>& items, std::mt19937_64& engine) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(engine() % i);
        std::swap(items[i - 1], items[j]);
    }
}

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

struct Split {
    Eigen::MatrixXd features;  ///< rows = examples, cols = dim
    Eigen::VectorXd labels;    ///< 1 = class a
};

Split stack(const std::vector<const Eigen::VectorXd*>& a, const std::vector<const Eigen::VectorXd*>& b,
            std::size_t dim) {
    Split s;
    const auto n = static_cast<Eigen::Index>(a.size() + b.size());
    s.features.resize(n, static_cast<Eigen::Index>(dim));
    s.labels.resize(n);
    Eigen::Index r = 0;
    for (const auto* x : a) {
        s.features.row(r) = x->transpose();
        s.labels[r++] = 1.0;
    }
    for (const auto* x : b) {
        s.features.row(r) = x->transpose();
        s.labels[r++] = 0.0;
    }
    return s;
}

struct Forward {
    Eigen::MatrixXd standardized;
    Eigen::MatrixXd hidden;
    Eigen::VectorXd logits;
};

Forward forward(ReferenceClassifier& m, const Eigen::MatrixXd& x) {
    Forward f;
    f.standardized = (x.rowwise() - m.mu().transpose()).array().rowwise() / m.sigma().transpose().array();
    f.hidden = ((f.standardized * m.w().transpose()).rowwise() + m.b().transpose()).array().tanh();
    f.logits = (f.hidden * m.v()).array() + m.c();
    return f;
}

double mean_loss(const Eigen::VectorXd& logits, const Eigen::VectorXd& labels) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < logits.size(); ++i) {
        total += labels[i] > 0.5 ? softplus(-logits[i]) : softplus(logits[i]);
    }
    return total / double(logits.size());
}

ClassifierMetrics evaluate(ReferenceClassifier& m, const Split& s) {
    const auto f = forward(m, s.features);
    std::size_t tp = 0, fp = 0, fn = 0, correct = 0;
    for (Eigen::Index i = 0; i < f.logits.size(); ++i) {
        const bool predicted_a = f.logits[i] >= 0.0;
        const bool is_a = s.labels[i] > 0.5;
        if (predicted_a == is_a) ++correct;
        if (predicted_a && is_a) ++tp;
        if (predicted_a && !is_a) ++fp;
        if (!predicted_a && is_a) ++fn;
    }
    ClassifierMetrics metrics;
    metrics.support = static_cast<std::size_t>(f.logits.size());
    metrics.accuracy = metrics.support ? double(correct) / double(metrics.support) : 0.0;
    metrics.precision = tp + fp ? double(tp) / double(tp + fp) : 0.0;
    metrics.recall = tp + fn ? double(tp) / double(tp + fn) : 0.0;
    metrics.f1 = metrics.precision + metrics.recall > 0
                     ? 2.0 * metrics.precision * metrics.recall / (metrics.precision + metrics.recall)
                     : 0.0;
    return metrics;
}

}  // namespace

double logistic(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// ---------------------------------------------------------------------------

ToyTokenEncoder::ToyTokenEncoder(std::size_t dim, std::size_t window) : dim_(dim), window_(window) {
    if (dim_ < 2) fail(ErrorCode::InvalidArgument, "token vector dimension must be at least 2");
}

TokenMatrix ToyTokenEncoder::encode(const SpeakerTurn& turn) const {
    const auto normalized = normalize_text(turn.text);
    const auto words = split_tokens(normalized);
    TokenMatrix out;
    std::vector<std::size_t> positions;
    for (std::size_t i = 0; i < words.size(); ++i) {
        const auto bare = bare_token(words[i]);
        if (bare.empty()) continue;
        out.tokens.emplace_back(bare);
        positions.push_back(i);
    }
    out.vectors.resize(static_cast<Eigen::Index>(positions.size()), static_cast<Eigen::Index>(dim_));
    for (std::size_t r = 0; r < positions.size(); ++r) {
        const auto row = static_cast<Eigen::Index>(r);
        if (window_ == 0) {
            auto it = cache_.find(out.tokens[r]);
            if (it == cache_.end()) {
                const auto v = hash_unit_vector(out.tokens[r], dim_);
                it = cache_.emplace(out.tokens[r], Eigen::Map<const Eigen::VectorXd>(v.data(), v.size())).first;
            }
            out.vectors.row(row) = it->second.transpose();
        } else {
            const auto v = toy_embed(normalized, positions[r], dim_, window_);
            out.vectors.row(row) = Eigen::Map<const Eigen::RowVectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

ReferenceClassifier::ReferenceClassifier(Eigen::VectorXd mu, Eigen::VectorXd sigma, Eigen::MatrixXd w,
                                         Eigen::VectorXd b, Eigen::VectorXd v, double c)
    : mu_(std::move(mu)), sigma_(std::move(sigma)), w_(std::move(w)), b_(std::move(b)), v_(std::move(v)), c_(c) {
    const auto d = w_.cols();
    const auto h = w_.rows();
    if (mu_.size() != d || sigma_.size() != d || b_.size() != h || v_.size() != h) {
        fail(ErrorCode::InvalidArgument, "classifier parameter shapes are inconsistent");
    }
    if ((sigma_.array() <= 0.0).any()) fail(ErrorCode::InvalidArgument, "standardization scales must be positive");
}

ReferenceClassifier ReferenceClassifier::random(std::size_t dim, std::size_t hidden, std::uint64_t seed) {
    if (dim == 0 || hidden == 0) fail(ErrorCode::InvalidArgument, "classifier dimensions must be positive");
    Gaussian g(seed);
    const auto d = static_cast<Eigen::Index>(dim);
    const auto h = static_cast<Eigen::Index>(hidden);
    Eigen::MatrixXd w(h, d);
    for (Eigen::Index i = 0; i < h; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) w(i, j) = g() / std::sqrt(double(dim));
    }
    Eigen::VectorXd v(h);
    for (Eigen::Index i = 0; i < h; ++i) v[i] = g() / std::sqrt(double(hidden));
    return {Eigen::VectorXd::Zero(d), Eigen::VectorXd::Ones(d), std::move(w), Eigen::VectorXd::Zero(h),
            std::move(v), 0.0};
}

double ReferenceClassifier::logit_of_mean(const Eigen::VectorXd& mean) const {
    const Eigen::VectorXd s = (mean - mu_).cwiseQuotient(sigma_);
    const Eigen::VectorXd hdn = (w_ * s + b_).array().tanh();
    return v_.dot(hdn) + c_;
}

double ReferenceClassifier::value(const Eigen::MatrixXd& tokens) const {
    if (tokens.rows() == 0 || tokens.cols() != w_.cols()) {
        fail(ErrorCode::InvalidArgument, "token matrix shape does not match the classifier");
    }
    return logistic(logit_of_mean(tokens.colwise().mean().transpose()));
}

Eigen::MatrixXd ReferenceClassifier::gradient(const Eigen::MatrixXd& tokens) const {
    if (tokens.rows() == 0 || tokens.cols() != w_.cols()) {
        fail(ErrorCode::InvalidArgument, "token matrix shape does not match the classifier");
    }
    const Eigen::VectorXd mean = tokens.colwise().mean().transpose();
    const Eigen::VectorXd s = (mean - mu_).cwiseQuotient(sigma_);
    const Eigen::VectorXd hdn = (w_ * s + b_).array().tanh();
    const double z = v_.dot(hdn) + c_;
    const Eigen::VectorXd dz_dh = v_.array() * (1.0 - hdn.array().square());
    const Eigen::VectorXd dz_dmean = (w_.transpose() * dz_dh).cwiseQuotient(sigma_);
    // dP/dz = p (1 - p), written symmetrically in z.
    const double dp_dz = logistic(z) * logistic(-z);
    const Eigen::RowVectorXd per_token = (dp_dz / double(tokens.rows())) * dz_dmean.transpose();
    return per_token.replicate(tokens.rows(), 1);
}

ReferenceClassifier ReferenceClassifier::flipped() const {
    ReferenceClassifier m = *this;
    m.v_ = -v_;
    m.c_ = -c_;
    return m;
}

bool ReferenceClassifier::operator==(const ReferenceClassifier& o) const {
    return mu_ == o.mu_ && sigma_ == o.sigma_ && w_ == o.w_ && b_ == o.b_ && v_ == o.v_ && c_ == o.c_;
}

bool ReferenceClassifier::finite() const {
    return mu_.allFinite() && sigma_.allFinite() && w_.allFinite() && b_.allFinite() && v_.allFinite() &&
           std::isfinite(c_);
}

// ---------------------------------------------------------------------------

TrainResult train_classifier(const std::vector<SpeakerTurn>& turns_a, const std::vector<SpeakerTurn>& turns_b,
                             const TokenEncoder& encoder, const TrainOptions& options) {
    auto encode_all = [&](const std::vector<SpeakerTurn>& turns) {
        std::vector<TokenMatrix> out;
        out.reserve(turns.size());
        for (const auto& t : turns) {
            out.push_back(encoder.encode(t));
            if (out.back().tokens.empty()) fail(ErrorCode::Data, "turn " + t.turn_id + " has no tokens");
        }
        return out;
    };
    return train_classifier(encode_all(turns_a), encode_all(turns_b), options);
}

TrainResult train_classifier(const std::vector<TokenMatrix>& class_a, const std::vector<TokenMatrix>& class_b,
                             const TrainOptions& options) {
    const auto na = class_a.size();
    const auto nb = class_b.size();
    if (na < options.min_per_class || nb < options.min_per_class) {
        fail(ErrorCode::Data, "classifier needs at least " + std::to_string(options.min_per_class) +
                                  " turns per class (got " + std::to_string(na) + " and " + std::to_string(nb) + ")");
    }
    if (double(std::max(na, nb)) > options.max_imbalance * double(std::min(na, nb))) {
        fail(ErrorCode::Data, "class imbalance " + std::to_string(na) + ":" + std::to_string(nb) +
                                  " exceeds 9:1; resample the larger class");
    }
    if (options.train_fraction <= 0 || options.validation_fraction <= 0 ||
        options.train_fraction + options.validation_fraction >= 1.0) {
        fail(ErrorCode::InvalidArgument, "split fractions must leave nonempty train, validation and test sets");
    }
    if (!(options.learning_rate > 0) || options.max_epochs < 1 || options.hidden == 0) {
        fail(ErrorCode::InvalidArgument, "invalid training hyperparameters");
    }

    const auto dim = static_cast<std::size_t>(class_a.front().vectors.cols());
    std::vector<Eigen::VectorXd> means_a, means_b;
    for (const auto& m : class_a) means_a.push_back(m.vectors.colwise().mean().transpose());
    for (const auto& m : class_b) means_b.push_back(m.vectors.colwise().mean().transpose());
    for (const auto* group : {&means_a, &means_b}) {
        for (const auto& m : *group) {
            if (static_cast<std::size_t>(m.size()) != dim) fail(ErrorCode::InvalidArgument, "mixed token dimensions");
        }
    }

    // Stratified split.
    Gaussian rng(options.seed);
    std::vector<const Eigen::VectorXd*> parts[3][2];
    for (int cls = 0; cls < 2; ++cls) {
        const auto& means = cls == 0 ? means_a : means_b;
        std::vector<std::size_t> order(means.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        fisher_yates(order, rng.engine());
        const auto n_train = static_cast<std::size_t>(std::floor(options.train_fraction * double(order.size())));
        const auto n_val = static_cast<std::size_t>(std::floor(options.validation_fraction * double(order.size())));
        for (std::size_t i = 0; i < order.size(); ++i) {
            const int part = i < n_train ? 0 : (i < n_train + n_val ? 1 : 2);
            parts[part][cls].push_back(&means[order[i]]);
        }
    }
    for (const auto& part : parts) {
        if (part[0].empty() || part[1].empty()) fail(ErrorCode::Data, "a data split is empty for one class");
    }
    const auto train = stack(parts[0][0], parts[0][1], dim);
    const auto validation = stack(parts[1][0], parts[1][1], dim);
    const auto test = stack(parts[2][0], parts[2][1], dim);

    auto model = ReferenceClassifier::random(dim, options.hidden, rng.engine()());
    model.mu() = train.features.colwise().mean().transpose();
    Eigen::VectorXd sd =
        ((train.features.rowwise() - model.mu().transpose()).array().square().colwise().mean()).sqrt().transpose();
    for (Eigen::Index j = 0; j < sd.size(); ++j) {
        if (!(sd[j] > 1e-12)) sd[j] = 1.0;
    }
    model.sigma() = sd;

    TrainResult result;
    result.model = model;
    result.best_validation_loss = mean_loss(forward(model, validation.features).logits, validation.labels);
    int since_best = 0;
    const double n = double(train.labels.size());
    for (int epoch = 1; epoch <= options.max_epochs; ++epoch) {
        const auto f = forward(model, train.features);
        const double loss = mean_loss(f.logits, train.labels);
        if (!std::isfinite(loss)) fail(ErrorCode::Data, "training loss became non-finite at epoch " + std::to_string(epoch));

        Eigen::VectorXd dz(f.logits.size());
        for (Eigen::Index i = 0; i < dz.size(); ++i) dz[i] = (logistic(f.logits[i]) - train.labels[i]) / n;
        const Eigen::VectorXd grad_v = f.hidden.transpose() * dz;
        const double grad_c = dz.sum();
        const Eigen::MatrixXd d_pre = (dz * model.v().transpose()).array() * (1.0 - f.hidden.array().square());
        const Eigen::MatrixXd grad_w = d_pre.transpose() * f.standardized;
        const Eigen::VectorXd grad_b = d_pre.colwise().sum().transpose();

        model.w() -= options.learning_rate * grad_w;
        model.b() -= options.learning_rate * grad_b;
        model.v() -= options.learning_rate * grad_v;
        model.c() -= options.learning_rate * grad_c;
        if (!model.finite()) fail(ErrorCode::Data, "training diverged at epoch " + std::to_string(epoch));

        result.epochs = epoch;
        const double val = mean_loss(forward(model, validation.features).logits, validation.labels);
        if (val < result.best_validation_loss) {
            result.best_validation_loss = val;
            result.model = model;
            since_best = 0;
        } else if (++since_best >= options.patience) {
            break;
        }
    }
    result.test = evaluate(result.model, test);
    return result;
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd integrated_gradients(const DifferentiableModel& model, const Eigen::MatrixXd& input,
                                     const Eigen::MatrixXd& baseline, int steps) {
    if (steps < 1) fail(ErrorCode::InvalidArgument, "integrated gradients needs at least one step");
    if (input.rows() != baseline.rows() || input.cols() != baseline.cols()) {
        fail(ErrorCode::InvalidArgument, "input and baseline shapes differ");
    }
    const Eigen::MatrixXd delta = input - baseline;
    Eigen::MatrixXd grad_sum = Eigen::MatrixXd::Zero(input.rows(), input.cols());
    for (int s = 0; s < steps; ++s) {
        const double alpha = (double(s) + 0.5) / double(steps);
        grad_sum += model.gradient(baseline + alpha * delta);
    }
    return delta.cwiseProduct(grad_sum) / double(steps);
}

Eigen::MatrixXd integrated_gradients(const DifferentiableModel& model, const Eigen::MatrixXd& input, int steps) {
    return integrated_gradients(model, input, Eigen::MatrixXd::Zero(input.rows(), input.cols()), steps);
}

}  // namespace sempol
