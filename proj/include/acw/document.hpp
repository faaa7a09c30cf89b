#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "acw/ast.hpp"
#include "acw/lexer.hpp"
#include "acw/parser.hpp"
#include "acw/span.hpp"
#include "acw/text.hpp"
#include "acw/token.hpp"

namespace acw {

/// A parsed snippet: the byte-exact source, its token stream (comments and
/// blank-line trivia included), and a span-preserving tree over it. The text
/// is never normalized; all rewriting happens through SpanEdits against it.
struct SourceDocument {
    std::string text;
    std::vector<Token> tokens;
    Tree tree;
    std::string newline_style = "\n";
    bool parse_ok = false;
    std::string diagnostic;

    const Token& tok(std::uint32_t i) const { return tokens[i]; }
    std::string_view tok_text(std::uint32_t i) const { return token_text(text, tokens[i]); }

    Span node_span(std::uint32_t id) const {
        const Node& n = tree[id];
        return {tokens[n.first_tok].begin, tokens[n.last_tok].end};
    }
    std::string_view node_text(std::uint32_t id) const {
        Span s = node_span(id);
        return std::string_view(text).substr(s.begin, s.size());
    }
};

inline SourceDocument parse(std::string_view text) {
    SourceDocument doc;
    doc.text.assign(text);
    doc.newline_style = detect_newline(text);
    LexResult lr = lex(doc.text);
    doc.tokens = std::move(lr.tokens);
    if (!lr.ok) {
        doc.parse_ok = false;
        doc.diagnostic = "line " + std::to_string(lr.error_line) + ": " + lr.error;
        return doc;
    }
    ParseOutcome po = parse_tokens(doc.text, doc.tokens);
    if (!po.ok) {
        doc.parse_ok = false;
        doc.diagnostic = "line " + std::to_string(po.error_line) + ": " + po.error;
        return doc;
    }
    doc.tree = std::move(po.tree);
    doc.parse_ok = true;
    return doc;
}

/// Reconstructs the source from the token stream plus the gaps between
/// tokens. Equal to doc.text byte-for-byte whenever the token spans are
/// sound; the round-trip tests assert exactly that.
inline std::string render(const SourceDocument& doc) {
    std::string out;
    out.reserve(doc.text.size());
    std::size_t cursor = 0;
    for (const Token& t : doc.tokens) {
        if (t.begin < cursor) return std::string("<token overlap>");
        out.append(doc.text, cursor, t.begin - cursor);
        out.append(doc.text, t.begin, t.end - t.begin);
        cursor = t.end;
    }
    out.append(doc.text, cursor, doc.text.size() - cursor);
    return out;
}

// ---- tree traversal helpers ------------------------------------------------

inline void for_each_node(const Tree& tree, const std::function<void(std::uint32_t)>& fn) {
    for (std::uint32_t i = 0; i < tree.nodes.size(); ++i) fn(i);
}

inline std::vector<std::uint32_t> nodes_of_kind(const Tree& tree, NodeKind k) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < tree.nodes.size(); ++i)
        if (tree.nodes[i].kind == k) out.push_back(i);
    return out;
}

/// Nearest enclosing node (inclusive walk up) satisfying `pred`.
inline std::uint32_t ancestor_matching(const Tree& tree, std::uint32_t id,
                                       const std::function<bool(const Node&)>& pred) {
    while (id != kNone) {
        if (pred(tree[id])) return id;
        id = tree.parent[id];
    }
    return kNone;
}

inline bool is_statement_kind(NodeKind k) {
    switch (k) {
    case NodeKind::FunctionDef: case NodeKind::ClassDef: case NodeKind::Decorated:
    case NodeKind::If: case NodeKind::While: case NodeKind::For: case NodeKind::Try:
    case NodeKind::With: case NodeKind::Return: case NodeKind::Raise: case NodeKind::Assert:
    case NodeKind::Del: case NodeKind::Pass: case NodeKind::Break: case NodeKind::Continue:
    case NodeKind::Global: case NodeKind::Nonlocal: case NodeKind::Import:
    case NodeKind::ImportFrom: case NodeKind::ExprStmt: case NodeKind::Assign:
    case NodeKind::AugAssign: case NodeKind::AnnAssign:
        return true;
    default:
        return false;
    }
}

/// The function/class definition inside a Decorated wrapper, else the node
/// itself.
inline std::uint32_t undecorated(const Tree& tree, std::uint32_t id) {
    if (tree[id].kind == NodeKind::Decorated) return tree[id].kids.back();
    return id;
}

/// Collects the source texts of every Name token within `span`.
inline std::vector<std::string_view> name_tokens_in(const SourceDocument& doc, Span span) {
    std::vector<std::string_view> out;
    for (const Token& t : doc.tokens) {
        if (t.kind != TokenKind::Name) continue;
        if (t.begin >= span.begin && t.end <= span.end) {
            std::string_view s = token_text(doc.text, t);
            if (!is_keyword(s)) out.push_back(s);
        }
    }
    return out;
}

/// Per-byte mask of string-literal and comment interiors; rules consult it
/// so they never rewrite inside either.
struct TriviaMask {
    std::vector<std::uint8_t> bits;  // 1 = string, 2 = comment

    explicit TriviaMask(const SourceDocument& doc) : bits(doc.text.size(), 0) {
        for (const Token& t : doc.tokens) {
            if (t.kind == TokenKind::String)
                for (std::uint32_t i = t.begin; i < t.end; ++i) bits[i] |= 1;
            else if (t.kind == TokenKind::Comment)
                for (std::uint32_t i = t.begin; i < t.end; ++i) bits[i] |= 2;
        }
    }
    bool in_string(std::size_t pos) const { return pos < bits.size() && (bits[pos] & 1); }
    bool in_comment(std::size_t pos) const { return pos < bits.size() && (bits[pos] & 2); }
    bool in_any(std::size_t pos) const { return pos < bits.size() && bits[pos]; }
    bool span_clear(Span s) const {
        for (std::size_t i = s.begin; i < s.end; ++i)
            if (i < bits.size() && bits[i]) return false;
        return true;
    }
};

} // namespace acw
