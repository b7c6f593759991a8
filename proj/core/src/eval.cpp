#include "hgr/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hgr/error.hpp"
#include "hgr/retrieval.hpp"

namespace hgr {

using nlohmann::json;

const char* to_string(QuestionCategory c) {
    switch (c) {
    case QuestionCategory::LQ: return "LQ";
    case QuestionCategory::GQ: return "GQ";
    case QuestionCategory::CQ: return "CQ";
    default: return "UNKNOWN";
    }
}

QuestionCategory categorize(const QAItem& item, const Index& index) {
    if (item.answer_path.empty())
        return QuestionCategory::UNKNOWN;

    std::set<std::string> path(item.answer_path.begin(), item.answer_path.end());
    std::set<std::string> communities;
    for (const auto& id : path) {
        if (!index.graph.entities.count(id))
            throw ValidationError("categorize: path entity " + id + " missing from graph");
        const Community* parent = index.hierarchy.parent_of(id);
        if (!parent)
            throw ValidationError("categorize: path entity " + id + " missing from hierarchy");
        communities.insert(parent->id);
    }

    if (path.size() == 1)
        return QuestionCategory::LQ;
    if (path.size() == 2) {
        auto first = path.begin();
        const std::string& a = *first;
        const std::string& b = *std::next(first);
        for (const auto& r : index.graph.relations)
            if ((r.src == a && r.dst == b) || (r.src == b && r.dst == a))
                return QuestionCategory::LQ;
        // Non-adjacent pair: local facts plus surrounding context.
        return QuestionCategory::CQ;
    }
    return communities.size() >= 2 ? QuestionCategory::GQ : QuestionCategory::CQ;
}

std::string normalize_answer(const std::string& s) {
    std::string cleaned;
    cleaned.reserve(s.size());
    for (char ch : s) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::ispunct(c))
            continue;
        cleaned += static_cast<char>(std::tolower(c));
    }
    std::istringstream in(cleaned);
    std::vector<std::string> tokens;
    std::string tok;
    while (in >> tok)
        tokens.push_back(tok);
    std::size_t start = 0;
    while (start < tokens.size() &&
           (tokens[start] == "a" || tokens[start] == "an" || tokens[start] == "the"))
        ++start;
    std::string out;
    for (std::size_t i = start; i < tokens.size(); ++i) {
        if (!out.empty())
            out += ' ';
        out += tokens[i];
    }
    return out;
}

int exact_match(const std::string& prediction, const std::vector<std::string>& gold_answers) {
    if (gold_answers.empty())
        throw ValidationError("exact_match: no gold answers");
    std::string p = normalize_answer(prediction);
    for (const auto& g : gold_answers)
        if (p == normalize_answer(g))
            return 1;
    return 0;
}

namespace {

ItemResult eval_one(const QAItem& item, const std::string& strategy, const Index& index,
                    const Providers& providers, const EvalOptions& options, double& wall_ms) {
    ItemResult r;
    r.item_id = item.id;
    r.strategy = strategy;

    auto t0 = std::chrono::steady_clock::now();
    try {
        r.category = categorize(item, index);
        if (strategy == "deep") {
            RetrievalParams params;
            params.k = options.k;
            params.m = options.m;
            params.context_budget_tokens = options.context_budget_tokens;
            RetrievalResult res = retrieve(item.question, index, providers, params);
            r.prediction = res.integrated ? res.answer : res.context_document;
            r.scored_candidates = res.scored_candidate_count;
        } else if (strategy == "local") {
            RetrievalResult res = local_search(item.question, index, *providers.embedder, options.m,
                                               options.context_budget_tokens);
            r.prediction = providers.generator->generate(res.context_document);
            r.scored_candidates = res.scored_candidate_count;
        } else if (strategy == "global") {
            r.prediction = global_search(item.question, index, *providers.generator);
            r.scored_candidates = index.hierarchy.empty() ? 0 : index.hierarchy.top_level().size();
        } else {
            throw ConfigError("unknown strategy " + strategy);
        }
        r.em = exact_match(r.prediction, item.gold_answers);
    } catch (const Error& e) {
        r.error = e.what();
    }
    auto t1 = std::chrono::steady_clock::now();
    wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return r;
}

} // namespace

EvalReport run_eval(const std::vector<QAItem>& items, const Index& index,
                    const Providers& providers, const EvalOptions& options) {
    if (items.empty())
        throw ValidationError("run_eval: no items");
    if (options.strategies.empty())
        throw ValidationError("run_eval: no strategies");
    for (const auto& s : options.strategies)
        if (s != "deep" && s != "local" && s != "global")
            throw ConfigError("run_eval: unknown strategy " + s);

    EvalReport report;
    report.item_count = items.size();

    for (const auto& strategy : options.strategies) {
        std::vector<ItemResult> results(items.size());
        std::vector<double> wall(items.size(), 0.0);

        int workers = std::max(1, options.parallelism);
        if (workers == 1) {
            for (std::size_t i = 0; i < items.size(); ++i)
                results[i] = eval_one(items[i], strategy, index, providers, options, wall[i]);
        } else {
            std::vector<std::future<void>> futures;
            std::atomic<std::size_t> next{0};
            for (int w = 0; w < workers; ++w) {
                futures.push_back(std::async(std::launch::async, [&]() {
                    while (true) {
                        std::size_t i = next.fetch_add(1);
                        if (i >= items.size())
                            return;
                        results[i] = eval_one(items[i], strategy, index, providers, options, wall[i]);
                    }
                }));
            }
            for (auto& f : futures)
                f.get();
        }

        StrategyReport sr;
        sr.strategy = strategy;
        bool first = true;
        double wall_sum = 0.0;
        std::size_t scored_sum = 0;
        std::size_t ok_items = 0;
        for (std::size_t i = 0; i < items.size(); ++i) {
            const ItemResult& r = results[i];
            if (!r.error.empty()) {
                ++sr.failed_items;
                continue;
            }
            ++ok_items;
            auto& cat = sr.by_category[to_string(r.category)];
            ++cat.items;
            cat.matches += static_cast<std::size_t>(r.em);
            if (r.category != QuestionCategory::UNKNOWN) {
                ++sr.total.items;
                sr.total.matches += static_cast<std::size_t>(r.em);
            }
            scored_sum += r.scored_candidates;
            if (first || r.scored_candidates < sr.min_scored_candidates)
                sr.min_scored_candidates = r.scored_candidates;
            if (first || r.scored_candidates > sr.max_scored_candidates)
                sr.max_scored_candidates = r.scored_candidates;
            first = false;
            wall_sum += wall[i];
            sr.max_wall_ms = std::max(sr.max_wall_ms, wall[i]);
        }
        if (ok_items > 0) {
            sr.mean_scored_candidates = static_cast<double>(scored_sum) / static_cast<double>(ok_items);
            sr.mean_wall_ms = wall_sum / static_cast<double>(ok_items);
        }
        if (!options.include_timing) {
            sr.mean_wall_ms = 0.0;
            sr.max_wall_ms = 0.0;
        }
        report.strategies.push_back(std::move(sr));

        for (auto& r : results)
            report.items.push_back(std::move(r));
    }

    std::sort(report.items.begin(), report.items.end(), [](const ItemResult& a, const ItemResult& b) {
        if (a.item_id != b.item_id)
            return a.item_id < b.item_id;
        return a.strategy < b.strategy;
    });
    return report;
}

std::vector<QAItem> load_qa_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open dataset " + path.string());
    std::vector<QAItem> items;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object())
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": malformed record");
        QAItem item;
        try {
            item.id = rec.at("id").get<std::string>();
            item.question = rec.at("question").get<std::string>();
            item.gold_answers = rec.at("answers").get<std::vector<std::string>>();
            item.answer_path = rec.value("answer_path", std::vector<std::string>{});
        } catch (const json::exception& e) {
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (item.question.empty())
            throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": empty question");
        if (item.gold_answers.empty())
            throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": no answers");
        items.push_back(std::move(item));
    }
    return items;
}

std::string report_to_json(const EvalReport& report) {
    json out;
    out["item_count"] = report.item_count;
    out["strategies"] = json::array();
    for (const auto& s : report.strategies) {
        json cats;
        for (const auto& [name, stats] : s.by_category)
            cats[name] = {{"items", stats.items}, {"matches", stats.matches},
                          {"em_percent", stats.em_percent()}};
        json entry = {
            {"strategy", s.strategy},
            {"categories", cats},
            {"total", {{"items", s.total.items}, {"matches", s.total.matches},
                       {"em_percent", s.total.em_percent()}}},
            {"failed_items", s.failed_items},
            {"scored_candidates",
             {{"mean", s.mean_scored_candidates}, {"min", s.min_scored_candidates},
              {"max", s.max_scored_candidates}}},
        };
        entry["wall_ms"] = {{"mean", s.mean_wall_ms}, {"max", s.max_wall_ms}};
        out["strategies"].push_back(std::move(entry));
    }
    out["items"] = json::array();
    for (const auto& r : report.items) {
        out["items"].push_back({{"id", r.item_id},
                                {"strategy", r.strategy},
                                {"category", to_string(r.category)},
                                {"em", r.em},
                                {"scored_candidates", r.scored_candidates},
                                {"error", r.error}});
    }
    return out.dump(2) + "\n";
}

std::string render_report_table(const EvalReport& report) {
    auto em = [](const StrategyReport& s, const char* cat) {
        auto it = s.by_category.find(cat);
        return it == s.by_category.end() ? 0.0 : it->second.em_percent();
    };
    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-10s %9s %9s %9s %10s %12s\n", "Method", "EM-LQ(%)",
                  "EM-GQ(%)", "EM-CQ(%)", "EM-Total(%)", "#Scored(avg)");
    out += buf;
    out += std::string(62, '-') + "\n";
    for (const auto& s : report.strategies) {
        std::snprintf(buf, sizeof(buf), "%-10s %9.2f %9.2f %9.2f %10.2f %12.1f\n", s.strategy.c_str(),
                      em(s, "LQ"), em(s, "GQ"), em(s, "CQ"), s.total.em_percent(),
                      s.mean_scored_candidates);
        out += buf;
    }
    return out;
}

} // namespace hgr
