#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "acw/span.hpp"

namespace acw {

inline bool is_ws_byte(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

inline bool is_blank_byte(char c) { return c == ' ' || c == '\t'; }

/// Operand/block text with every whitespace byte removed; the canonical
/// form fed to the keyed digest so formatting cannot change ordering
/// decisions.
inline std::string canonical_text(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s)
        if (!is_ws_byte(c)) out.push_back(c);
    return out;
}

/// First line terminator decides the style; defaults to "\n".
inline std::string detect_newline(std::string_view text) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n')
            return (i > 0 && text[i - 1] == '\r') ? "\r\n" : "\n";
    }
    return "\n";
}

inline std::string_view rstrip_newlines(std::string_view s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

/// Byte equality modulo line terminators at end of file, the only
/// normalization the identification check performs.
inline bool equal_mod_trailing_newline(std::string_view a, std::string_view b) {
    return a == b || rstrip_newlines(a) == rstrip_newlines(b);
}

/// One physical line: [begin, text_end) is the content, [text_end, end)
/// the terminator ("\n", "\r\n", or empty at EOF).
struct Line {
    std::size_t begin = 0;
    std::size_t text_end = 0;
    std::size_t end = 0;

    Span content_span() const { return {begin, text_end}; }
    Span full_span() const { return {begin, end}; }
};

class LineIndex {
public:
    explicit LineIndex(std::string_view text) {
        std::size_t pos = 0;
        while (pos < text.size()) {
            Line line;
            line.begin = pos;
            std::size_t nl = text.find('\n', pos);
            if (nl == std::string_view::npos) {
                line.text_end = text.size();
                line.end = text.size();
                lines_.push_back(line);
                return;
            }
            line.text_end = (nl > pos && text[nl - 1] == '\r') ? nl - 1 : nl;
            line.end = nl + 1;
            lines_.push_back(line);
            pos = line.end;
        }
    }

    std::size_t count() const { return lines_.size(); }
    const Line& operator[](std::size_t i) const { return lines_[i]; }

    /// Index of the line containing byte `pos` (or the last line for EOF).
    std::size_t line_of(std::size_t pos) const {
        std::size_t lo = 0, hi = lines_.empty() ? 0 : lines_.size() - 1;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (pos < lines_[mid].end)
                hi = mid;
            else
                lo = mid + 1;
        }
        return lo;
    }

    const std::vector<Line>& lines() const { return lines_; }

private:
    std::vector<Line> lines_;
};

/// Number of leading blank bytes (spaces/tabs) of `line` within `text`.
inline std::size_t leading_blank_count(std::string_view text, const Line& line) {
    std::size_t n = 0;
    for (std::size_t i = line.begin; i < line.text_end && is_blank_byte(text[i]); ++i)
        ++n;
    return n;
}

inline bool line_is_blank(std::string_view text, const Line& line) {
    for (std::size_t i = line.begin; i < line.text_end; ++i)
        if (!is_blank_byte(text[i])) return false;
    return true;
}

} // namespace acw
