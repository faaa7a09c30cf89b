#pragma once

#include <cstdint>
#include <string_view>

#include "acw/span.hpp"

namespace acw {

enum class TokenKind : std::uint8_t {
    Name,
    Number,
    String,
    Op,
    Comment,
    Newline,   // terminates a logical line
    Nl,        // non-logical newline: blank/comment lines, inside brackets
    Indent,
    Dedent,
    EndMarker,
};

struct Token {
    TokenKind kind = TokenKind::EndMarker;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::uint32_t line = 1;  // 1-based physical line
    std::uint32_t col = 0;   // byte offset from line start

    Span span() const { return {begin, end}; }
};

inline std::string_view token_text(std::string_view src, const Token& t) {
    return src.substr(t.begin, t.end - t.begin);
}

inline bool is_keyword(std::string_view s) {
    static constexpr std::string_view kw[] = {
        "False", "None", "True", "and", "as", "assert", "async", "await",
        "break", "class", "continue", "def", "del", "elif", "else", "except",
        "finally", "for", "from", "global", "if", "import", "in", "is",
        "lambda", "nonlocal", "not", "or", "pass", "raise", "return", "try",
        "while", "with", "yield",
    };
    for (auto k : kw)
        if (k == s) return true;
    return false;
}

} // namespace acw
