#include "hgr/dwgrpo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "hgr/error.hpp"
#include "hgr/mock_providers.hpp"
#include "hgr/text.hpp"
#include "hgr/vec.hpp"

namespace hgr {

double reward_relevance(const std::string& query, const std::string& answer, Reranker& cross_scorer) {
    if (query.empty() || answer.empty())
        throw ValidationError("reward_relevance: empty text");
    double s = cross_scorer.rerank(query, answer);
    if (!std::isfinite(s))
        throw ProviderError("reward_relevance: non-finite score");
    return std::clamp(s, 0.0, 1.0);
}

double exact_token_sim(const std::string& a, const std::string& b) {
    return a == b ? 1.0 : 0.0;
}

TokenSim embedding_token_sim(std::size_t dimension) {
    auto embedder = std::make_shared<MockEmbedder>(dimension);
    return [embedder](const std::string& a, const std::string& b) {
        if (a == b)
            return 1.0;
        auto vs = embedder->embed({a, b});
        return vec::cosine(vs[0], vs[1]);
    };
}

double reward_faithfulness(const std::string& answer, const std::string& source,
                           const TokenSim& sim) {
    if (answer.empty() || source.empty())
        throw ValidationError("reward_faithfulness: empty text");
    auto a_tokens = text::tokenize(answer);
    auto k_tokens = text::tokenize(source);
    if (a_tokens.empty() || k_tokens.empty())
        throw ValidationError("reward_faithfulness: no tokens");

    auto greedy_mean = [&sim](const std::vector<std::string>& from, const std::vector<std::string>& to) {
        double total = 0.0;
        for (const auto& f : from) {
            double best = 0.0;
            for (const auto& t : to)
                best = std::max(best, sim(f, t));
            total += best;
        }
        return total / static_cast<double>(from.size());
    };

    double precision = greedy_mean(a_tokens, k_tokens);
    double recall = greedy_mean(k_tokens, a_tokens);
    if (precision + recall == 0.0)
        return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

double reward_conciseness(const std::string& answer, const std::string& source) {
    std::size_t len_k = text::token_count(source);
    if (len_k == 0)
        throw ValidationError("reward_conciseness: empty source");
    std::size_t len_c = text::token_count(answer);
    double ratio = static_cast<double>(len_c) / static_cast<double>(len_k);
    return std::max(0.0, 1.0 - ratio);
}

double fit_slope(std::span<const double> series) {
    std::size_t n = series.size();
    if (n < 2)
        throw ValidationError("fit_slope: need at least 2 points");
    double x_mean = static_cast<double>(n - 1) / 2.0;
    double y_mean = 0.0;
    for (double y : series)
        y_mean += y;
    y_mean /= static_cast<double>(n);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = static_cast<double>(i) - x_mean;
        num += dx * (series[i] - y_mean);
        den += dx * dx;
    }
    return num / den;
}

double rate_of_change(std::span<const double> series) {
    if (series.size() < 2)
        throw ValidationError("rate_of_change: need at least 2 points");
    auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    double range = *hi - *lo;
    if (range == 0.0)
        return 0.0;
    return fit_slope(series) / range;
}

RewardWindow::RewardWindow(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ < 2)
        throw ValidationError("RewardWindow: capacity must be >= 2");
}

void RewardWindow::push(const ObjVec& step_means) {
    for (int j = 0; j < kObjectives; ++j) {
        buffers_[j].push_back(step_means[j]);
        if (buffers_[j].size() > capacity_)
            buffers_[j].pop_front();
    }
    size_ = buffers_[0].size();
}

std::vector<double> RewardWindow::series(int objective) const {
    const auto& buf = buffers_.at(static_cast<std::size_t>(objective));
    return {buf.begin(), buf.end()};
}

WeightState update_weights(const WeightState& state, const ObjVec& alphas) {
    if (!(state.temperature > 0.0))
        throw ValidationError("update_weights: temperature must be > 0");
    for (double a : alphas)
        if (!std::isfinite(a))
            throw ValidationError("update_weights: non-finite alpha");

    // Stabilized softmax over -alpha / T.
    ObjVec logits;
    double max_logit = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < kObjectives; ++j) {
        logits[j] = -alphas[j] / state.temperature;
        max_logit = std::max(max_logit, logits[j]);
    }
    double denom = 0.0;
    ObjVec exps;
    for (int j = 0; j < kObjectives; ++j) {
        exps[j] = std::exp(logits[j] - max_logit);
        denom += exps[j];
    }
    WeightState out = state;
    for (int j = 0; j < kObjectives; ++j)
        out.weights[j] = state.total * exps[j] / denom;
    return out;
}

std::vector<double> weighted_advantage(RolloutGroup& group, const ObjVec& weights,
                                       AdvantageMode mode) {
    std::size_t n = group.rewards.size();
    if (n < 2)
        throw ValidationError("weighted_advantage: group size must be >= 2");
    if (!group.outputs.empty() && group.outputs.size() != n)
        throw ValidationError("weighted_advantage: outputs/rewards length mismatch");

    std::vector<double> combined(n);
    for (std::size_t i = 0; i < n; ++i) {
        ObjVec r = group.rewards[i].as_array();
        double s = 0.0;
        for (int j = 0; j < kObjectives; ++j)
            s += weights[j] * r[j];
        combined[i] = s;
    }

    double mean = 0.0;
    for (double v : combined)
        mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : combined)
        var += (v - mean) * (v - mean);
    double std_dev = std::sqrt(var / static_cast<double>(n));

    group.advantages.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double z = (combined[i] - mean) / (std_dev + kAdvantageEpsilon);
        group.advantages[i] = mode == AdvantageMode::standardized ? z : combined[i] - z;
    }
    return group.advantages;
}

std::pair<RewardWindow, WeightState> step_scheduler(RewardWindow window, WeightState state,
                                                    const ObjVec& step_mean_rewards) {
    window.push(step_mean_rewards);
    if (!window.ready())
        return {std::move(window), state};

    ObjVec alphas;
    for (int j = 0; j < kObjectives; ++j) {
        auto series = window.series(j);
        alphas[j] = rate_of_change(series);
    }
    return {std::move(window), update_weights(state, alphas)};
}

} // namespace hgr
