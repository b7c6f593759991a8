#pragma once

#include <filesystem>
#include <utility>

#include "hgr/types.hpp"

namespace hgr {

// On-disk index layout (all text files UTF-8, one JSON record per line):
//
//   <dir>/manifest          format version, dimension, counts, per-file
//                           checksums, embedding offset table
//   <dir>/entities.jsonl
//   <dir>/relations.jsonl
//   <dir>/chunks.jsonl
//   <dir>/communities.jsonl
//   <dir>/embeddings.bin    concatenated f32 little-endian vectors, in
//                           manifest order
//
// Vectors live in the separate blob so large indexes can be scanned
// without parsing them; the manifest maps owner id -> byte offset.

inline constexpr int kIndexFormatVersion = 1;

// Validates, then writes the directory layout above. load_index(save_index(x))
// reproduces x exactly, including embedding bytes.
void save_index(const EntityGraph& graph, const Hierarchy& hierarchy,
                const std::filesystem::path& dir);

// Verifies checksums and all type invariants before returning.
// Throws IoError (missing file, version mismatch, checksum failure) or
// ValidationError (invariant failure, with the offending id).
std::pair<EntityGraph, Hierarchy> load_index(const std::filesystem::path& dir);

inline void save_index(const Index& index, const std::filesystem::path& dir) {
    save_index(index.graph, index.hierarchy, dir);
}

} // namespace hgr
