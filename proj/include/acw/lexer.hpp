#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "acw/token.hpp"

namespace acw {

struct LexResult {
    std::vector<Token> tokens;
    bool ok = true;
    std::string error;
    std::size_t error_pos = 0;
    std::uint32_t error_line = 0;
};

namespace detail {

inline bool is_ident_start(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}
inline bool is_ident_cont(unsigned char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
}
inline bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

inline bool is_string_prefix(std::string_view s) {
    if (s.size() > 2) return false;
    int r = 0, b = 0, f = 0, u = 0;
    for (char c : s) {
        switch (c) {
        case 'r': case 'R': ++r; break;
        case 'b': case 'B': ++b; break;
        case 'f': case 'F': ++f; break;
        case 'u': case 'U': ++u; break;
        default: return false;
        }
    }
    if (r > 1 || b > 1 || f > 1 || u > 1) return false;
    if (u && s.size() > 1) return false;
    if (b && f) return false;
    return true;
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    LexResult run() {
        indents_.push_back(0);
        at_line_start_ = true;
        while (pos_ < src_.size() && res_.ok) {
            if (at_line_start_ && depth_ == 0) {
                if (!handle_line_start()) continue;  // line was blank/comment-only
            }
            skip_inline_ws();
            if (pos_ >= src_.size()) break;
            char c = src_[pos_];
            if (c == '#') {
                lex_comment();
            } else if (c == '\n' || c == '\r') {
                lex_newline();
            } else if (c == '\\' && is_newline_at(pos_ + 1)) {
                consume_escaped_newline();
            } else if (is_ident_start(static_cast<unsigned char>(c))) {
                lex_name_or_prefixed_string();
            } else if (is_digit(static_cast<unsigned char>(c)) ||
                       (c == '.' && pos_ + 1 < src_.size() &&
                        is_digit(static_cast<unsigned char>(src_[pos_ + 1])))) {
                lex_number();
            } else if (c == '\'' || c == '"') {
                lex_string(pos_);
            } else {
                lex_operator();
            }
        }
        finish();
        return std::move(res_);
    }

private:
    void fail(const std::string& msg, std::size_t at) {
        if (!res_.ok) return;
        res_.ok = false;
        res_.error = msg;
        res_.error_pos = at;
        res_.error_line = line_;
    }

    void emit(TokenKind kind, std::size_t begin, std::size_t end) {
        Token t;
        t.kind = kind;
        t.begin = static_cast<std::uint32_t>(begin);
        t.end = static_cast<std::uint32_t>(end);
        t.line = line_;
        t.col = static_cast<std::uint32_t>(begin - line_begin_);
        res_.tokens.push_back(t);
        if (kind == TokenKind::Name || kind == TokenKind::Number ||
            kind == TokenKind::String || kind == TokenKind::Op)
            line_has_content_ = true;
    }

    bool is_newline_at(std::size_t p) const {
        return p < src_.size() && (src_[p] == '\n' || src_[p] == '\r');
    }

    void advance_line(std::size_t new_begin) {
        ++line_;
        line_begin_ = new_begin;
    }

    // Consumes the terminator at pos_ ("\n", "\r\n", or lone "\r").
    std::size_t consume_terminator() {
        std::size_t start = pos_;
        if (src_[pos_] == '\r') {
            ++pos_;
            if (pos_ < src_.size() && src_[pos_] == '\n') ++pos_;
        } else {
            ++pos_;
        }
        advance_line(pos_);
        return start;
    }

    void lex_newline() {
        std::size_t start = consume_terminator();
        if (depth_ > 0) {
            emit_raw(TokenKind::Nl, start, pos_);
        } else if (line_has_content_) {
            emit_raw(TokenKind::Newline, start, pos_);
            line_has_content_ = false;
            at_line_start_ = true;
        } else {
            emit_raw(TokenKind::Nl, start, pos_);
            at_line_start_ = true;
        }
    }

    // emit() marks line content; newline/trivia tokens must not.
    void emit_raw(TokenKind kind, std::size_t begin, std::size_t end) {
        Token t;
        t.kind = kind;
        t.begin = static_cast<std::uint32_t>(begin);
        t.end = static_cast<std::uint32_t>(end);
        t.line = line_ > 1 && begin < line_begin_ ? line_ - 1 : line_;
        t.col = 0;
        res_.tokens.push_back(t);
    }

    void consume_escaped_newline() {
        ++pos_;  // backslash
        if (src_[pos_] == '\r') {
            ++pos_;
            if (pos_ < src_.size() && src_[pos_] == '\n') ++pos_;
        } else {
            ++pos_;
        }
        advance_line(pos_);
    }

    void skip_inline_ws() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\f') {
                ++pos_;
            } else if (c == '\\' && is_newline_at(pos_ + 1)) {
                consume_escaped_newline();
            } else {
                break;
            }
        }
    }

    // Returns false when the line is blank or comment-only (no indent
    // bookkeeping happens for those); the caller restarts the main loop.
    bool handle_line_start() {
        std::size_t ws_begin = pos_;
        std::size_t width = 0;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ') {
                ++width;
                ++pos_;
            } else if (c == '\t') {
                width = (width / 8 + 1) * 8;
                ++pos_;
            } else if (c == '\f') {
                width = 0;
                ++pos_;
            } else {
                break;
            }
        }
        if (pos_ >= src_.size()) {
            at_line_start_ = false;
            return true;
        }
        char c = src_[pos_];
        if (c == '\n' || c == '\r') {
            lex_newline();
            return false;
        }
        if (c == '#') {
            lex_comment();
            if (pos_ < src_.size()) lex_newline();
            return false;
        }
        at_line_start_ = false;
        if (width > indents_.back()) {
            indents_.push_back(width);
            emit_raw(TokenKind::Indent, ws_begin, pos_);
        } else if (width < indents_.back()) {
            while (indents_.size() > 1 && width < indents_.back()) {
                indents_.pop_back();
                emit_raw(TokenKind::Dedent, pos_, pos_);
            }
            if (width != indents_.back())
                fail("unindent does not match any outer indentation level", pos_);
        }
        return true;
    }

    void lex_comment() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r')
            ++pos_;
        emit_raw(TokenKind::Comment, start, pos_);
    }

    void lex_name_or_prefixed_string() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && is_ident_cont(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        std::string_view word = src_.substr(start, pos_ - start);
        if (pos_ < src_.size() && (src_[pos_] == '\'' || src_[pos_] == '"') &&
            is_string_prefix(word)) {
            lex_string(start);
            return;
        }
        emit(TokenKind::Name, start, pos_);
    }

    void lex_string(std::size_t start) {
        char quote = src_[pos_];
        bool triple = pos_ + 2 < src_.size() && src_[pos_ + 1] == quote && src_[pos_ + 2] == quote;
        pos_ += triple ? 3 : 1;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\\') {
                pos_ += 1;
                if (pos_ < src_.size()) {
                    if (is_newline_at(pos_)) {
                        if (src_[pos_] == '\r') {
                            ++pos_;
                            if (pos_ < src_.size() && src_[pos_] == '\n') ++pos_;
                        } else {
                            ++pos_;
                        }
                        advance_line(pos_);
                    } else {
                        ++pos_;
                    }
                }
                continue;
            }
            if (c == quote) {
                if (!triple) {
                    ++pos_;
                    emit(TokenKind::String, start, pos_);
                    return;
                }
                if (pos_ + 2 < src_.size() && src_[pos_ + 1] == quote && src_[pos_ + 2] == quote) {
                    pos_ += 3;
                    emit(TokenKind::String, start, pos_);
                    return;
                }
                ++pos_;
                continue;
            }
            if (c == '\n' || c == '\r') {
                if (!triple) {
                    fail("unterminated string literal", start);
                    return;
                }
                if (c == '\r') {
                    ++pos_;
                    if (pos_ < src_.size() && src_[pos_] == '\n') ++pos_;
                } else {
                    ++pos_;
                }
                advance_line(pos_);
                continue;
            }
            ++pos_;
        }
        fail("unterminated string literal", start);
    }

    void lex_number() {
        std::size_t start = pos_;
        if (src_[pos_] == '0' && pos_ + 1 < src_.size() &&
            (src_[pos_ + 1] == 'x' || src_[pos_ + 1] == 'X' || src_[pos_ + 1] == 'o' ||
             src_[pos_ + 1] == 'O' || src_[pos_ + 1] == 'b' || src_[pos_ + 1] == 'B')) {
            pos_ += 2;
            while (pos_ < src_.size() &&
                   (is_ident_cont(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            emit(TokenKind::Number, start, pos_);
            return;
        }
        auto digits = [&] {
            while (pos_ < src_.size() &&
                   (is_digit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
        };
        digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && is_digit(static_cast<unsigned char>(src_[pos_])))
                digits();
            else
                pos_ = mark;  // not an exponent (e.g. `1 .e`)
        }
        if (pos_ < src_.size() && (src_[pos_] == 'j' || src_[pos_] == 'J')) ++pos_;
        emit(TokenKind::Number, start, pos_);
    }

    void lex_operator() {
        static constexpr std::string_view three[] = {"**=", "//=", ">>=", "<<=", "..."};
        static constexpr std::string_view two[] = {
            "**", "//", ">>", "<<", "<=", ">=", "==", "!=", "->", ":=",
            "+=", "-=", "*=", "/=", "%=", "@=", "&=", "|=", "^=",
        };
        static constexpr std::string_view one = "+-*/%@&|^~<>()[]{},:.;=";
        std::size_t start = pos_;
        std::string_view rest = src_.substr(pos_);
        for (auto op : three) {
            if (rest.substr(0, 3) == op) {
                pos_ += 3;
                emit(TokenKind::Op, start, pos_);
                return;
            }
        }
        for (auto op : two) {
            if (rest.substr(0, 2) == op) {
                pos_ += 2;
                emit(TokenKind::Op, start, pos_);
                return;
            }
        }
        char c = src_[pos_];
        if (one.find(c) != std::string_view::npos) {
            if (c == '(' || c == '[' || c == '{') ++depth_;
            if (c == ')' || c == ']' || c == '}') depth_ = depth_ > 0 ? depth_ - 1 : 0;
            ++pos_;
            emit(TokenKind::Op, start, pos_);
            return;
        }
        fail(std::string("unexpected character '") + c + "'", pos_);
        ++pos_;
    }

    void finish() {
        if (!res_.ok) return;
        if (depth_ > 0) {
            fail("unexpected end of file inside brackets", src_.size());
            return;
        }
        if (line_has_content_) {
            emit_raw(TokenKind::Newline, src_.size(), src_.size());
            line_has_content_ = false;
        }
        while (indents_.size() > 1) {
            indents_.pop_back();
            emit_raw(TokenKind::Dedent, src_.size(), src_.size());
        }
        emit_raw(TokenKind::EndMarker, src_.size(), src_.size());
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::uint32_t line_ = 1;
    std::size_t line_begin_ = 0;
    int depth_ = 0;
    bool at_line_start_ = true;
    bool line_has_content_ = false;
    std::vector<std::size_t> indents_;
    LexResult res_;
};

} // namespace detail

inline LexResult lex(std::string_view src) {
    return detail::Lexer(src).run();
}

} // namespace acw
