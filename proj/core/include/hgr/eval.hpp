#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hgr/providers.hpp"
#include "hgr/types.hpp"

namespace hgr {

struct QAItem {
    std::string id;
    std::string question;
    std::vector<std::string> gold_answers;
    std::vector<std::string> answer_path; // ground-truth support entities; may be empty
};

enum class QuestionCategory { LQ, GQ, CQ, UNKNOWN };

const char* to_string(QuestionCategory c);

// Categorizes by the shape of the ground-truth answer path:
//   UNKNOWN  empty path
//   LQ       one entity, or two that share a relation
//   GQ       more than two entities spanning >= 2 level-1 communities
//   CQ       everything between: more than two entities inside one
//            community, or a non-adjacent pair
// Throws ValidationError when a path entity is missing from the graph or
// hierarchy.
QuestionCategory categorize(const QAItem& item, const Index& index);

// Answer normalization, applied to both sides of exact_match:
//   1. ASCII lowercase
//   2. ASCII punctuation removed
//   3. whitespace collapsed to single spaces, ends trimmed
//   4. leading article tokens ("a", "an", "the") dropped
std::string normalize_answer(const std::string& s);

// 1 iff the normalized prediction equals any normalized gold answer.
int exact_match(const std::string& prediction, const std::vector<std::string>& gold_answers);

struct CategoryStats {
    std::size_t items = 0;
    std::size_t matches = 0;

    double em_percent() const {
        return items == 0 ? 0.0 : 100.0 * static_cast<double>(matches) / static_cast<double>(items);
    }
};

struct StrategyReport {
    std::string strategy;
    std::map<std::string, CategoryStats> by_category; // "LQ"/"GQ"/"CQ"/"UNKNOWN"
    CategoryStats total;                              // LQ+GQ+CQ (UNKNOWN excluded)
    std::size_t failed_items = 0;
    // scored-candidate instrumentation
    double mean_scored_candidates = 0.0;
    std::size_t min_scored_candidates = 0;
    std::size_t max_scored_candidates = 0;
    // wall-clock per item, milliseconds (zeroed when timing is disabled)
    double mean_wall_ms = 0.0;
    double max_wall_ms = 0.0;
};

struct ItemResult {
    std::string item_id;
    std::string strategy;
    QuestionCategory category = QuestionCategory::UNKNOWN;
    int em = 0;
    std::size_t scored_candidates = 0;
    std::string prediction;
    std::string error; // non-empty when the item failed under this strategy
};

struct EvalReport {
    std::vector<StrategyReport> strategies;
    std::vector<ItemResult> items; // sorted by (item id, strategy)
    std::size_t item_count = 0;
};

struct EvalOptions {
    std::vector<std::string> strategies = {"deep", "local", "global"};
    int k = 3;
    int m = 10;
    std::size_t context_budget_tokens = 4000;
    int parallelism = 1;
    bool include_timing = true;
};

// Runs every strategy over every item: categorize, retrieve, score the
// strategy's final text. Deep and global answers come from the
// generator; local passes its top-entity context document through the
// generator as well. Provider failures are recorded per item and the run
// continues. Report assembly is deterministic (sorted by item id)
// regardless of parallelism.
EvalReport run_eval(const std::vector<QAItem>& items, const Index& index,
                    const Providers& providers, const EvalOptions& options = {});

// Dataset file: one JSON record per line,
//   {"id":..., "question":..., "answers":[...], "answer_path":[...]}
std::vector<QAItem> load_qa_jsonl(const std::filesystem::path& path);

std::string report_to_json(const EvalReport& report);

// Plain-text table: one row per strategy, EM per category and total.
std::string render_report_table(const EvalReport& report);

} // namespace hgr
