#include "hgr/index_io.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hgr/error.hpp"
#include "hgr/text.hpp"

namespace hgr {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& data) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + p.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out)
        throw IoError("short write to " + p.string());
}

std::string checksum_hex(const std::string& bytes) {
    std::uint64_t h = text::fnv1a64(bytes.data(), bytes.size());
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void append_f32_le(std::string& out, float v) {
    auto bits = std::bit_cast<std::uint32_t>(v);
    out.push_back(static_cast<char>(bits & 0xff));
    out.push_back(static_cast<char>((bits >> 8) & 0xff));
    out.push_back(static_cast<char>((bits >> 16) & 0xff));
    out.push_back(static_cast<char>((bits >> 24) & 0xff));
}

float read_f32_le(const std::string& blob, std::size_t offset) {
    std::uint32_t bits = static_cast<std::uint8_t>(blob[offset]) |
                         (static_cast<std::uint32_t>(static_cast<std::uint8_t>(blob[offset + 1])) << 8) |
                         (static_cast<std::uint32_t>(static_cast<std::uint8_t>(blob[offset + 2])) << 16) |
                         (static_cast<std::uint32_t>(static_cast<std::uint8_t>(blob[offset + 3])) << 24);
    return std::bit_cast<float>(bits);
}

json chunk_record(const Chunk& c) {
    return {{"id", c.id},
            {"doc_id", c.doc_id},
            {"text", c.text},
            {"span", {c.span.begin, c.span.end}}};
}

json entity_record(const Entity& e) {
    return {{"id", e.id},
            {"name", e.name},
            {"description", e.description},
            {"source_chunks", e.source_chunks}};
}

json relation_record(const Relation& r) {
    return {{"id", r.id}, {"src", r.src}, {"dst", r.dst}, {"description", r.description},
            {"weight", r.weight}};
}

json community_record(const Community& c, const Hierarchy& h) {
    json rec = {{"id", c.id}, {"level", c.level}, {"members", c.members}, {"summary", c.summary}};
    auto it = h.parent.find(c.id);
    rec["parent"] = it == h.parent.end() ? json(nullptr) : json(it->second);
    return rec;
}

json parse_line(const std::string& line, const std::string& file, std::size_t lineno) {
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object())
        throw IoError(file + ":" + std::to_string(lineno) + ": malformed record");
    return rec;
}

} // namespace

void save_index(const EntityGraph& graph, const Hierarchy& hierarchy, const fs::path& dir) {
    validate(graph, hierarchy);

    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create " + dir.string() + ": " + ec.message());

    std::string entities, relations, chunks, communities, blob;
    json offsets = json::array();

    for (const auto& [id, e] : graph.entities) {
        entities += entity_record(e).dump();
        entities += '\n';
        if (e.embedded()) {
            offsets.push_back({{"id", id}, {"offset", blob.size()}});
            for (float v : e.embedding)
                append_f32_le(blob, v);
        }
    }
    for (const auto& r : graph.relations) {
        relations += relation_record(r).dump();
        relations += '\n';
    }
    for (const auto& [id, c] : graph.chunks) {
        chunks += chunk_record(c).dump();
        chunks += '\n';
    }
    for (const auto& level : hierarchy.levels) {
        for (const auto& [id, c] : level) {
            communities += community_record(c, hierarchy).dump();
            communities += '\n';
            if (!c.representation.empty()) {
                offsets.push_back({{"id", id}, {"offset", blob.size()}});
                for (float v : c.representation)
                    append_f32_le(blob, v);
            }
        }
    }

    std::size_t community_count = 0;
    for (const auto& level : hierarchy.levels)
        community_count += level.size();

    json manifest = {
        {"format_version", kIndexFormatVersion},
        {"dimension", graph.dimension},
        {"levels", hierarchy.depth()},
        {"counts",
         {{"entities", graph.entities.size()},
          {"relations", graph.relations.size()},
          {"chunks", graph.chunks.size()},
          {"communities", community_count}}},
        {"checksums",
         {{"entities.jsonl", checksum_hex(entities)},
          {"relations.jsonl", checksum_hex(relations)},
          {"chunks.jsonl", checksum_hex(chunks)},
          {"communities.jsonl", checksum_hex(communities)},
          {"embeddings.bin", checksum_hex(blob)}}},
        {"embeddings", offsets},
    };

    write_file(dir / "entities.jsonl", entities);
    write_file(dir / "relations.jsonl", relations);
    write_file(dir / "chunks.jsonl", chunks);
    write_file(dir / "communities.jsonl", communities);
    write_file(dir / "embeddings.bin", blob);
    write_file(dir / "manifest", manifest.dump(2) + "\n");
}

std::pair<EntityGraph, Hierarchy> load_index(const fs::path& dir) {
    if (!fs::exists(dir / "manifest"))
        throw IoError("no index at " + dir.string() + " (missing manifest)");

    json manifest = json::parse(read_file(dir / "manifest"), nullptr, false);
    if (manifest.is_discarded() || !manifest.is_object())
        throw IoError(dir.string() + ": malformed manifest");
    if (manifest.value("format_version", -1) != kIndexFormatVersion)
        throw IoError(dir.string() + ": format version " + manifest["format_version"].dump() +
                      " != supported " + std::to_string(kIndexFormatVersion));

    auto load_checked = [&](const char* name) {
        std::string data = read_file(dir / name);
        std::string expect = manifest.at("checksums").value(name, "");
        std::string got = checksum_hex(data);
        if (got != expect)
            throw IoError(dir.string() + "/" + name + ": checksum " + got + " != manifest " + expect);
        return data;
    };

    std::string entities_text = load_checked("entities.jsonl");
    std::string relations_text = load_checked("relations.jsonl");
    std::string chunks_text = load_checked("chunks.jsonl");
    std::string communities_text = load_checked("communities.jsonl");
    std::string blob = load_checked("embeddings.bin");

    EntityGraph graph;
    graph.dimension = manifest.value("dimension", 0);

    auto each_line = [](const std::string& data, const std::string& file, auto&& fn) {
        std::istringstream in(data);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty())
                continue;
            fn(parse_line(line, file, lineno));
        }
    };

    try {
        each_line(chunks_text, "chunks.jsonl", [&](const json& rec) {
            Chunk c;
            c.id = rec.at("id").get<std::string>();
            c.doc_id = rec.at("doc_id").get<std::string>();
            c.text = rec.at("text").get<std::string>();
            c.span.begin = rec.at("span").at(0).get<std::size_t>();
            c.span.end = rec.at("span").at(1).get<std::size_t>();
            graph.chunks.emplace(c.id, std::move(c));
        });
        each_line(entities_text, "entities.jsonl", [&](const json& rec) {
            Entity e;
            e.id = rec.at("id").get<std::string>();
            e.name = rec.at("name").get<std::string>();
            e.description = rec.at("description").get<std::string>();
            for (const auto& s : rec.at("source_chunks"))
                e.source_chunks.insert(s.get<std::string>());
            graph.entities.emplace(e.id, std::move(e));
        });
        each_line(relations_text, "relations.jsonl", [&](const json& rec) {
            Relation r;
            r.id = rec.at("id").get<std::string>();
            r.src = rec.at("src").get<std::string>();
            r.dst = rec.at("dst").get<std::string>();
            r.description = rec.at("description").get<std::string>();
            r.weight = rec.at("weight").get<double>();
            graph.relations.push_back(std::move(r));
        });
    } catch (const json::exception& e) {
        throw IoError(dir.string() + ": bad record: " + e.what());
    }

    Hierarchy hierarchy;
    try {
        each_line(communities_text, "communities.jsonl", [&](const json& rec) {
            Community c;
            c.id = rec.at("id").get<std::string>();
            c.level = rec.at("level").get<int>();
            c.members = rec.at("members").get<std::vector<std::string>>();
            c.summary = rec.at("summary").get<std::string>();
            if (c.level < 1)
                throw ValidationError("community " + c.id + ": level < 1");
            if (static_cast<int>(hierarchy.levels.size()) < c.level)
                hierarchy.levels.resize(c.level);
            if (!rec.at("parent").is_null())
                hierarchy.parent[c.id] = rec.at("parent").get<std::string>();
            hierarchy.levels[c.level - 1].emplace(c.id, std::move(c));
        });
    } catch (const json::exception& e) {
        throw IoError(dir.string() + ": bad community record: " + e.what());
    }
    // Entity parent pointers are implied by level-1 membership.
    if (!hierarchy.levels.empty())
        for (const auto& [cid, c] : hierarchy.levels.front())
            for (const auto& m : c.members)
                hierarchy.parent[m] = cid;

    // Attach vectors from the blob.
    std::size_t d = graph.dimension;
    for (const auto& rec : manifest.value("embeddings", json::array())) {
        std::string id = rec.at("id").get<std::string>();
        std::size_t offset = rec.at("offset").get<std::size_t>();
        if (d == 0 || offset + 4 * d > blob.size())
            throw IoError(dir.string() + ": embedding of " + id + " out of blob bounds");
        std::vector<float> v(d);
        for (std::size_t i = 0; i < d; ++i)
            v[i] = read_f32_le(blob, offset + 4 * i);
        if (auto it = graph.entities.find(id); it != graph.entities.end()) {
            it->second.embedding = std::move(v);
            continue;
        }
        bool placed = false;
        for (auto& level : hierarchy.levels) {
            auto cit = level.find(id);
            if (cit != level.end()) {
                cit->second.representation = std::move(v);
                placed = true;
                break;
            }
        }
        if (!placed)
            throw IoError(dir.string() + ": embedding owner " + id + " not found");
    }

    auto expect_count = [&](const char* key, std::size_t got) {
        std::size_t want = manifest.at("counts").value(key, static_cast<std::size_t>(0));
        if (want != got)
            throw IoError(dir.string() + ": manifest counts " + key + "=" + std::to_string(want) +
                          " but loaded " + std::to_string(got));
    };
    expect_count("entities", graph.entities.size());
    expect_count("relations", graph.relations.size());
    expect_count("chunks", graph.chunks.size());
    std::size_t community_count = 0;
    for (const auto& level : hierarchy.levels)
        community_count += level.size();
    expect_count("communities", community_count);

    validate(graph, hierarchy);
    return {std::move(graph), std::move(hierarchy)};
}

} // namespace hgr
