#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hgr::text {

// Whitespace tokenizer used everywhere token counts matter (chunking,
// conciseness, context budgets). A token is a maximal run of
// non-whitespace bytes.
std::vector<std::string> tokenize(std::string_view s);

std::size_t token_count(std::string_view s);

// Joins tokens [begin, end) with single spaces.
std::string join_tokens(const std::vector<std::string>& tokens, std::size_t begin, std::size_t end);

// Keeps at most `budget` whitespace tokens of `s`, single-space joined.
std::string truncate_tokens(std::string_view s, std::size_t budget);

// FNV-1a, 64 bit. Stable across platforms; the mock embedder and the
// index checksums both depend on this exact function.
std::uint64_t fnv1a64(std::string_view s);
std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t seed = 14695981039346656037ULL);

// ASCII lowercase; bytes outside [A-Z] pass through.
std::string to_lower(std::string_view s);

// Canonical form used for name comparisons: ASCII lowercase, outer
// punctuation stripped per token, inner whitespace collapsed to single
// spaces.
std::string normalize_name(std::string_view s);

// Splits on '.', '!' and '?', keeping the terminator with the sentence.
// Whitespace-only pieces are dropped.
std::vector<std::string> split_sentences(std::string_view s);

bool is_capitalized(std::string_view token);

// Strips leading/trailing ASCII punctuation from a token ("France." ->
// "France"). Returns empty if nothing remains.
std::string strip_outer_punct(std::string_view token);

} // namespace hgr::text
