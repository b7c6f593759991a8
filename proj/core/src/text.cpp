#include "hgr/text.hpp"

#include <cctype>

namespace hgr::text {

namespace {
inline bool is_space(unsigned char c) {
    return std::isspace(c) != 0;
}
inline bool is_punct(unsigned char c) {
    return std::ispunct(c) != 0;
}
} // namespace

std::vector<std::string> tokenize(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(static_cast<unsigned char>(s[i])))
            ++i;
        std::size_t start = i;
        while (i < s.size() && !is_space(static_cast<unsigned char>(s[i])))
            ++i;
        if (i > start)
            out.emplace_back(s.substr(start, i - start));
    }
    return out;
}

std::size_t token_count(std::string_view s) {
    std::size_t n = 0;
    bool in_token = false;
    for (char ch : s) {
        bool ws = is_space(static_cast<unsigned char>(ch));
        if (!ws && !in_token)
            ++n;
        in_token = !ws;
    }
    return n;
}

std::string join_tokens(const std::vector<std::string>& tokens, std::size_t begin, std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end && i < tokens.size(); ++i) {
        if (!out.empty())
            out += ' ';
        out += tokens[i];
    }
    return out;
}

std::string truncate_tokens(std::string_view s, std::size_t budget) {
    auto tokens = tokenize(s);
    if (tokens.size() <= budget)
        return join_tokens(tokens, 0, tokens.size());
    return join_tokens(tokens, 0, budget);
}

std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t seed) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= static_cast<std::uint64_t>(p[i]);
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t fnv1a64(std::string_view s) {
    return fnv1a64(s.data(), s.size());
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string strip_outer_punct(std::string_view token) {
    std::size_t b = 0;
    std::size_t e = token.size();
    while (b < e && is_punct(static_cast<unsigned char>(token[b])))
        ++b;
    while (e > b && is_punct(static_cast<unsigned char>(token[e - 1])))
        --e;
    return std::string(token.substr(b, e - b));
}

std::string normalize_name(std::string_view s) {
    auto tokens = tokenize(s);
    std::string out;
    for (const auto& t : tokens) {
        std::string core = strip_outer_punct(t);
        if (core.empty())
            continue;
        if (!out.empty())
            out += ' ';
        out += to_lower(core);
    }
    return out;
}

std::vector<std::string> split_sentences(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '.' || c == '!' || c == '?') {
            std::string_view piece = s.substr(start, i - start + 1);
            std::size_t b = 0;
            while (b < piece.size() && is_space(static_cast<unsigned char>(piece[b])))
                ++b;
            if (b < piece.size())
                out.emplace_back(piece.substr(b));
            start = i + 1;
        }
    }
    if (start < s.size()) {
        std::string_view piece = s.substr(start);
        std::size_t b = 0;
        while (b < piece.size() && is_space(static_cast<unsigned char>(piece[b])))
            ++b;
        if (b < piece.size())
            out.emplace_back(piece.substr(b));
    }
    return out;
}

bool is_capitalized(std::string_view token) {
    std::string core = strip_outer_punct(token);
    if (core.empty())
        return false;
    return core[0] >= 'A' && core[0] <= 'Z';
}

} // namespace hgr::text
