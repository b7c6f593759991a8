#pragma once

#include <array>
#include <cstddef>
#include <deque>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hgr/providers.hpp"

namespace hgr {

// Three optimization objectives for distilled knowledge: how well it
// answers the query, how faithful it stays to the source, how concise it
// is.
inline constexpr int kObjectives = 3;
using ObjVec = std::array<double, kObjectives>;

struct RewardVector {
    double rel = 0.0;
    double faith = 0.0;
    double conc = 0.0;

    ObjVec as_array() const { return {rel, faith, conc}; }
};

// Cross-encoder relevance of answer C to query Q, clamped to [0, 1].
double reward_relevance(const std::string& query, const std::string& answer, Reranker& cross_scorer);

// Pairwise token similarity used by the faithfulness score.
using TokenSim = std::function<double(const std::string&, const std::string&)>;

// 1 for equal tokens, else 0.
double exact_token_sim(const std::string& a, const std::string& b);

// Cosine of per-token mock embeddings; the desk-scale default.
TokenSim embedding_token_sim(std::size_t dimension = 256);

// Greedy-matching token F1 of answer C against source K:
//   precision = mean over C-tokens of max similarity to any K-token,
//   recall    = symmetric, F1 = harmonic mean (0 when both are 0).
double reward_faithfulness(const std::string& answer, const std::string& source,
                           const TokenSim& sim = exact_token_sim);

// max(0, 1 - len(C)/len(K)), lengths in whitespace tokens.
double reward_conciseness(const std::string& answer, const std::string& source);

// Ordinary least-squares slope of y against x = 0, 1, ..., n-1.
double fit_slope(std::span<const double> series);

// Normalized rate of change: slope / (max - min), 0 when the range is 0.
double rate_of_change(std::span<const double> series);

// Sliding window of the most recent per-objective step-mean rewards.
class RewardWindow {
public:
    explicit RewardWindow(std::size_t capacity = 16);

    void push(const ObjVec& step_means);
    bool ready() const { return size_ >= 2; } // enough history for a slope
    std::size_t size() const { return size_; }
    std::size_t capacity() const { return capacity_; }
    std::vector<double> series(int objective) const; // chronological

private:
    std::size_t capacity_;
    std::size_t size_ = 0;
    std::array<std::deque<double>, kObjectives> buffers_;
};

// Per-objective weights summing to a conserved total.
struct WeightState {
    ObjVec weights{1.0 / 3, 1.0 / 3, 1.0 / 3};
    double total = 1.0;
    double temperature = 1.0;
};

// Softmax reweighting over negated growth rates: slower-growing
// objectives get strictly larger weights.
//   w_j = total * exp(-alpha_j / T) / sum_l exp(-alpha_l / T)
WeightState update_weights(const WeightState& state, const ObjVec& alphas);

enum class AdvantageMode {
    standardized,       // (r - mean) / (std + eps); the default
    offset_standardized // r - (r - mean) / (std + eps); keeps the raw reward term
};

struct RolloutGroup {
    std::vector<std::string> outputs;
    std::vector<RewardVector> rewards;
    std::vector<double> advantages; // filled by weighted_advantage
};

inline constexpr double kAdvantageEpsilon = 1e-8;

// Combines per-objective rewards with the given weights into scalar
// rewards, then converts them to per-candidate advantages against the
// group statistics (population std). Group size must be >= 2. Fills and
// returns group.advantages.
std::vector<double> weighted_advantage(RolloutGroup& group, const ObjVec& weights,
                                       AdvantageMode mode = AdvantageMode::standardized);

// Pushes the step means into the window; once every buffer holds at
// least two points, computes each objective's normalized rate of change
// and reweights. Returns the advanced (window, state) pair.
std::pair<RewardWindow, WeightState> step_scheduler(RewardWindow window, WeightState state,
                                                    const ObjVec& step_mean_rewards);

} // namespace hgr
