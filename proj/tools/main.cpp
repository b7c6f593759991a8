#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hgr/config.hpp"
#include "hgr/error.hpp"
#include "hgr/eval.hpp"
#include "hgr/hierarchy.hpp"
#include "hgr/index_io.hpp"
#include "hgr/ingest.hpp"
#include "hgr/retrieval.hpp"
#include "hgr/seesaw_sim.hpp"
#include "hgr/svg_plot.hpp"

namespace fs = std::filesystem;
using hgr::cli::AppConfig;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUserError = 1;
constexpr int kExitRuntimeError = 2;

struct BuildArgs {
    std::string corpus;
    std::string out;
    std::size_t chunk_size = 600;
    std::size_t overlap = 100;
    double tau = 0.95;
};

void cmd_build(const AppConfig& config, const BuildArgs& args) {
    if (!fs::is_directory(args.corpus))
        throw hgr::IoError("corpus directory not found: " + args.corpus);

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(args.corpus))
        if (entry.is_regular_file())
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw hgr::IoError("corpus directory is empty: " + args.corpus);

    std::vector<hgr::Chunk> chunks;
    for (const auto& path : files) {
        std::ifstream in(path);
        if (!in)
            throw hgr::IoError("cannot read " + path.string());
        std::stringstream ss;
        ss << in.rdbuf();
        auto doc_chunks = hgr::chunk_text(ss.str(), path.stem().string(), args.chunk_size, args.overlap);
        chunks.insert(chunks.end(), doc_chunks.begin(), doc_chunks.end());
    }
    hgr::cli::log_info(config, "chunked " + std::to_string(files.size()) + " documents into " +
                                   std::to_string(chunks.size()) + " chunks");

    auto providers = hgr::cli::make_providers(config);
    auto graph = hgr::build_base_graph(chunks, *providers.extractor, *providers.embedder);
    hgr::cli::log_info(config, "extracted " + std::to_string(graph.entities.size()) + " entities, " +
                                   std::to_string(graph.relations.size()) + " relations");

    hgr::ResolutionParams params;
    params.tau = args.tau;
    graph = hgr::resolve_entities(graph, params, *providers.discriminator, *providers.embedder);
    hgr::cli::log_info(config, "resolved to " + std::to_string(graph.entities.size()) + " entities");

    hgr::save_index(graph, hgr::Hierarchy{}, args.out);
    hgr::cli::log_info(config, "index written to " + args.out);
}

struct HierarchyArgs {
    std::string index;
    double gamma = 1.0;
    int levels = 3;
    std::uint64_t seed = 0;
};

void cmd_hierarchy(const AppConfig& config, const HierarchyArgs& args) {
    auto [graph, old_hierarchy] = hgr::load_index(args.index);
    auto providers = hgr::cli::make_providers(config);

    hgr::LouvainParams params;
    params.gamma = args.gamma;
    params.seed = args.seed;
    auto hierarchy = hgr::build_enriched_hierarchy(graph, params, args.levels, *providers.generator,
                                                   *providers.embedder);
    hgr::save_index(graph, hierarchy, args.index);

    std::string shape;
    for (const auto& level : hierarchy.levels)
        shape += (shape.empty() ? "" : " -> ") + std::to_string(level.size());
    hgr::cli::log_info(config, "hierarchy depth " + std::to_string(hierarchy.depth()) +
                                   " (communities per level: " + shape + ")");
}

struct QueryArgs {
    std::string index;
    std::string question;
    std::string strategy = "deep";
    std::string trace_path;
};

json trace_to_json(const hgr::RetrievalResult& result) {
    json trace = json::array();
    for (const auto& phase : result.trace) {
        json scored = json::array();
        for (const auto& c : phase.scored)
            scored.push_back({{"id", c.id}, {"score", c.score}});
        trace.push_back({{"phase", phase.phase}, {"level", phase.level}, {"scored", scored}});
    }
    return {{"phases", trace}, {"scored_candidate_count", result.scored_candidate_count}};
}

void cmd_query(const AppConfig& config, const QueryArgs& args) {
    auto [graph, hierarchy] = hgr::load_index(args.index);
    hgr::Index index{std::move(graph), std::move(hierarchy)};
    auto providers = hgr::cli::make_providers(config);

    json trace;
    if (args.strategy == "deep") {
        hgr::RetrievalParams params;
        params.k = config.beam;
        params.m = config.top_m;
        params.context_budget_tokens = config.budget;
        auto result = hgr::retrieve(args.question, index, providers, params);
        trace = trace_to_json(result);
        std::cout << (result.integrated ? result.answer : result.context_document) << "\n";
        if (hgr::cli::log_enabled(config, "info")) {
            std::cerr << "# scored candidates: " << result.scored_candidate_count << "\n";
            for (const auto& e : result.entities)
                std::cerr << "# " << e.id << " " << index.graph.entities.at(e.id).name << " ("
                          << e.score << ")\n";
        }
    } else if (args.strategy == "local") {
        auto result =
            hgr::local_search(args.question, index, *providers.embedder, config.top_m, config.budget);
        trace = trace_to_json(result);
        std::cout << providers.generator->generate(result.context_document) << "\n";
        if (hgr::cli::log_enabled(config, "info"))
            std::cerr << "# scored candidates: " << result.scored_candidate_count << "\n";
    } else if (args.strategy == "global") {
        std::cout << hgr::global_search(args.question, index, *providers.generator) << "\n";
        trace = {{"phases", json::array()},
                 {"scored_candidate_count", index.hierarchy.top_level().size()}};
    } else {
        throw hgr::ConfigError("unknown strategy: " + args.strategy);
    }

    if (!args.trace_path.empty()) {
        std::ofstream out(args.trace_path, std::ios::trunc);
        if (!out)
            throw hgr::IoError("cannot write trace to " + args.trace_path);
        out << trace.dump(2) << "\n";
    }
}

struct EvalArgs {
    std::string index;
    std::string dataset;
    std::string strategies = "deep,local,global";
    std::string out;
    int parallel = 1;
    bool no_timing = false;
};

void cmd_eval(const AppConfig& config, const EvalArgs& args) {
    auto [graph, hierarchy] = hgr::load_index(args.index);
    hgr::Index index{std::move(graph), std::move(hierarchy)};
    auto providers = hgr::cli::make_providers(config);
    auto items = hgr::load_qa_jsonl(args.dataset);

    hgr::EvalOptions options;
    options.strategies.clear();
    std::stringstream ss(args.strategies);
    std::string part;
    while (std::getline(ss, part, ','))
        if (!part.empty())
            options.strategies.push_back(part);
    options.k = config.beam;
    options.m = config.top_m;
    options.context_budget_tokens = config.budget;
    options.parallelism = args.parallel;
    options.include_timing = !args.no_timing;

    auto report = hgr::run_eval(items, index, providers, options);
    std::cout << hgr::render_report_table(report);
    if (!args.out.empty()) {
        std::ofstream out(args.out, std::ios::trunc);
        if (!out)
            throw hgr::IoError("cannot write report to " + args.out);
        out << hgr::report_to_json(report);
        hgr::cli::log_info(config, "report written to " + args.out);
    }
}

struct SimulateArgs {
    std::string mode = "static";
    int steps = 60;
    std::uint64_t seed = 1;
    std::string out;
};

void cmd_simulate(const AppConfig& config, const SimulateArgs& args) {
    hgr::SimConfig sim;
    sim.seed = args.seed;
    sim.steps = args.steps;
    if (args.mode == "static")
        sim.mode = hgr::SimMode::fixed_weights;
    else if (args.mode == "dynamic")
        sim.mode = hgr::SimMode::dynamic_weights;
    else
        throw hgr::ConfigError("mode must be static or dynamic, got " + args.mode);

    auto trajectory = hgr::run_sim(sim);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!args.out.empty()) {
        file.open(args.out, std::ios::trunc);
        if (!file)
            throw hgr::IoError("cannot write trajectory to " + args.out);
        out = &file;
    }
    *out << "step,r1,r2,r3,w1,w2,w3\n";
    char line[160];
    for (std::size_t i = 0; i < trajectory.steps.size(); ++i) {
        const auto& s = trajectory.steps[i];
        std::snprintf(line, sizeof(line), "%zu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", i,
                      s.mean_rewards[0], s.mean_rewards[1], s.mean_rewards[2], s.weights[0],
                      s.weights[1], s.weights[2]);
        *out << line;
    }
    hgr::cli::log_info(config, "final rewards: " + std::to_string(trajectory.final_rewards[0]) + " " +
                                   std::to_string(trajectory.final_rewards[1]) + " " +
                                   std::to_string(trajectory.final_rewards[2]));
}

struct PlotArgs {
    std::string in;
    std::string out;
};

void cmd_plot(const AppConfig&, const PlotArgs& args) {
    std::ifstream in(args.in);
    if (!in)
        throw hgr::IoError("cannot open trajectory " + args.in);

    std::vector<hgr::cli::Series> rewards = {{"r1", "#d62728", {}}, {"r2", "#1f77b4", {}},
                                             {"r3", "#2ca02c", {}}};
    std::vector<hgr::cli::Series> weights = {{"w1", "#d62728", {}}, {"w2", "#1f77b4", {}},
                                             {"w3", "#2ca02c", {}}};
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ','))
            row.push_back(std::stod(cell));
        if (row.size() != 7)
            throw hgr::IoError(args.in + ": expected 7 columns, got " + std::to_string(row.size()));
        for (int j = 0; j < 3; ++j) {
            rewards[static_cast<std::size_t>(j)].values.push_back(row[static_cast<std::size_t>(j) + 1]);
            weights[static_cast<std::size_t>(j)].values.push_back(row[static_cast<std::size_t>(j) + 4]);
        }
    }
    if (rewards[0].values.empty())
        throw hgr::IoError(args.in + ": no data rows");

    std::string svg = hgr::cli::render_line_chart_svg("mean rewards (top) and weights (bottom)",
                                                      {rewards, weights});
    std::ofstream out(args.out, std::ios::trunc);
    if (!out)
        throw hgr::IoError("cannot write " + args.out);
    out << svg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical graph retrieval engine"};
    app.require_subcommand(1);
    // Shared options may appear after the subcommand name.
    app.fallthrough();
    AppConfig config;
    auto env_bindings = hgr::cli::register_common_options(app, config);

    BuildArgs build_args;
    auto* build = app.add_subcommand("build", "Chunk a corpus, extract and resolve the entity graph");
    build->add_option("--corpus", build_args.corpus, "Directory of plain-text documents")->required();
    build->add_option("--out", build_args.out, "Output index directory")->required();
    build->add_option("--chunk-size", build_args.chunk_size, "Chunk size in tokens");
    build->add_option("--overlap", build_args.overlap, "Chunk overlap in tokens");
    build->add_option("--tau", build_args.tau, "Resolution similarity threshold");

    HierarchyArgs hierarchy_args;
    auto* hier = app.add_subcommand("hierarchy", "Build the community hierarchy over an index");
    hier->add_option("--index", hierarchy_args.index, "Index directory")->required();
    hier->add_option("--gamma", hierarchy_args.gamma, "Modularity resolution");
    hier->add_option("--levels", hierarchy_args.levels, "Maximum hierarchy depth");
    hier->add_option("--seed", hierarchy_args.seed, "Partitioning seed");

    QueryArgs query_args;
    auto* query = app.add_subcommand("query", "Answer a question against an index");
    query->add_option("--index", query_args.index, "Index directory")->required();
    query->add_option("--question", query_args.question, "Question text")->required();
    query->add_option("--strategy", query_args.strategy, "deep, local or global");
    query->add_option("--beam", config.beam, "Beam width k");
    query->add_option("--top-m", config.top_m, "Entities returned");
    query->add_option("--budget", config.budget, "Context budget in tokens");
    query->add_option("--trace", query_args.trace_path, "Write per-phase candidate JSON here");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Score strategies on a QA dataset");
    eval->add_option("--index", eval_args.index, "Index directory")->required();
    eval->add_option("--dataset", eval_args.dataset, "JSONL QA dataset")->required();
    eval->add_option("--strategies", eval_args.strategies, "Comma-separated strategy list");
    eval->add_option("--out", eval_args.out, "Write the JSON report here");
    eval->add_option("--beam", config.beam, "Beam width k");
    eval->add_option("--top-m", config.top_m, "Entities returned");
    eval->add_option("--parallel", eval_args.parallel, "Concurrent items");
    eval->add_flag("--no-timing", eval_args.no_timing, "Zero wall-time stats for reproducible output");

    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "Run the multi-objective weighting simulator");
    sim->add_option("--mode", sim_args.mode, "static or dynamic")->required();
    sim->add_option("--steps", sim_args.steps, "Optimization steps");
    sim->add_option("--seed", sim_args.seed, "Random seed");
    sim->add_option("--out", sim_args.out, "CSV output path (default stdout)");

    PlotArgs plot_args;
    auto* plot = app.add_subcommand("plot", "Render a trajectory CSV as an SVG chart");
    plot->add_option("--in", plot_args.in, "Trajectory CSV from simulate")->required();
    plot->add_option("--out", plot_args.out, "SVG output path")->required();

    try {
        auto args = hgr::cli::inject_env_args(env_bindings,
                                              std::vector<std::string>(argv + 1, argv + argc));
        std::vector<const char*> argv2 = {argv[0]};
        for (const auto& a : args)
            argv2.push_back(a.c_str());
        app.parse(static_cast<int>(argv2.size()), argv2.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUserError;
    }

    try {
        if (build->parsed())
            cmd_build(config, build_args);
        else if (hier->parsed())
            cmd_hierarchy(config, hierarchy_args);
        else if (query->parsed())
            cmd_query(config, query_args);
        else if (eval->parsed())
            cmd_eval(config, eval_args);
        else if (sim->parsed())
            cmd_simulate(config, sim_args);
        else if (plot->parsed())
            cmd_plot(config, plot_args);
    } catch (const hgr::ProviderError& e) {
        std::cerr << "provider error: " << e.what() << "\n";
        return kExitRuntimeError;
    } catch (const hgr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUserError;
    } catch (const hgr::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUserError;
    } catch (const hgr::ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitUserError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return kExitOk;
}
