#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "acw/errors.hpp"

namespace acw {

/// Half-open byte range [begin, end) into a source string.
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
    bool empty() const { return begin == end; }
    bool contains(std::size_t pos) const { return pos >= begin && pos < end; }

    friend bool operator==(const Span&, const Span&) = default;
};

/// Replacement of one span of the original text.
struct SpanEdit {
    Span span;
    std::string replacement;
};

/// Applies a batch of edits to `text`. Edits are expressed in original
/// coordinates and must be pairwise non-overlapping; zero-width edits that
/// share a position are rejected as well, bytes outside every span are
/// copied through untouched.
inline std::string apply_edits(std::string_view text, std::vector<SpanEdit> edits) {
    std::sort(edits.begin(), edits.end(), [](const SpanEdit& a, const SpanEdit& b) {
        if (a.span.begin != b.span.begin) return a.span.begin < b.span.begin;
        return a.span.end < b.span.end;
    });
    std::size_t cursor = 0;
    std::size_t prev_begin = std::string_view::npos;
    std::string out;
    out.reserve(text.size());
    for (const SpanEdit& e : edits) {
        if (e.span.begin > e.span.end || e.span.end > text.size())
            throw Error(ErrorCode::Internal, "edit span out of bounds");
        if (e.span.begin < cursor || e.span.begin == prev_begin)
            throw Error(ErrorCode::OverlappingEdits, "edit spans overlap");
        prev_begin = e.span.begin;
        out.append(text.substr(cursor, e.span.begin - cursor));
        out.append(e.replacement);
        cursor = e.span.end;
    }
    out.append(text.substr(cursor));
    return out;
}

} // namespace acw
