#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "acw/ast.hpp"
#include "acw/lexer.hpp"
#include "acw/token.hpp"

namespace acw {

struct ParseOutcome {
    Tree tree;
    bool ok = true;
    std::string error;
    std::size_t error_pos = 0;
    std::uint32_t error_line = 0;
};

namespace detail {

// Recursive-descent parser over the significant-token stream (comments and
// non-logical newlines are skipped; Indent/Dedent/Newline drive statement
// structure). Grammar: Python 3.8 statements and expressions; constructs
// beyond it fail the parse.
class Parser {
public:
    Parser(std::string_view src, const std::vector<Token>& toks) : src_(src), toks_(toks) {
        sig_.reserve(toks.size());
        for (std::uint32_t i = 0; i < toks.size(); ++i) {
            TokenKind k = toks[i].kind;
            if (k != TokenKind::Comment && k != TokenKind::Nl) sig_.push_back(i);
        }
    }

    ParseOutcome run() {
        ParseOutcome out;
        try {
            std::uint32_t mod = make(NodeKind::Module);
            std::uint32_t first = raw();
            std::vector<std::uint32_t> stmts;
            while (!at(TokenKind::EndMarker)) {
                if (at(TokenKind::Newline)) {  // tolerated stray logical newline
                    advance();
                    continue;
                }
                parse_statement(stmts);
            }
            node(mod).kids = std::move(stmts);
            node(mod).first_tok = first;
            node(mod).last_tok = raw();
            tree_.root = mod;
            tree_.build_parents();
            out.tree = std::move(tree_);
        } catch (const Abort& a) {
            out.ok = false;
            out.error = a.message;
            const Token& t = toks_[a.tok < toks_.size() ? a.tok : toks_.size() - 1];
            out.error_pos = t.begin;
            out.error_line = t.line;
        }
        return out;
    }

private:
    struct Abort {
        std::string message;
        std::size_t tok;
    };

    [[noreturn]] void abort_here(const std::string& msg) {
        throw Abort{msg + " (got '" + std::string(cur_text()) + "')", raw()};
    }

    // ---- token cursor ----------------------------------------------------

    const Token& cur() const { return toks_[sig_[p_]]; }
    std::uint32_t raw() const { return sig_[p_ < sig_.size() ? p_ : sig_.size() - 1]; }
    std::uint32_t prev_raw() const { return sig_[p_ > 0 ? p_ - 1 : 0]; }
    std::string_view cur_text() const { return token_text(src_, cur()); }
    void advance() {
        if (p_ + 1 < sig_.size()) ++p_;
    }

    bool at(TokenKind k) const { return cur().kind == k; }
    bool at_op(std::string_view s) const { return cur().kind == TokenKind::Op && cur_text() == s; }
    bool at_kw(std::string_view s) const { return cur().kind == TokenKind::Name && cur_text() == s; }
    bool at_name() const { return cur().kind == TokenKind::Name && !is_keyword(cur_text()); }

    std::string_view peek_text(std::size_t n = 1) const {
        std::size_t q = p_ + n;
        if (q >= sig_.size()) q = sig_.size() - 1;
        return token_text(src_, toks_[sig_[q]]);
    }
    TokenKind peek_kind(std::size_t n = 1) const {
        std::size_t q = p_ + n;
        if (q >= sig_.size()) q = sig_.size() - 1;
        return toks_[sig_[q]].kind;
    }

    bool accept_op(std::string_view s) {
        if (at_op(s)) {
            advance();
            return true;
        }
        return false;
    }
    bool accept_kw(std::string_view s) {
        if (at_kw(s)) {
            advance();
            return true;
        }
        return false;
    }
    void expect_op(std::string_view s) {
        if (!accept_op(s)) abort_here("expected '" + std::string(s) + "'");
    }
    void expect_kw(std::string_view s) {
        if (!accept_kw(s)) abort_here("expected '" + std::string(s) + "'");
    }
    void expect_newline() {
        if (at(TokenKind::EndMarker)) return;
        if (!at(TokenKind::Newline)) abort_here("expected end of line");
        advance();
    }
    std::uint32_t expect_name_tok() {
        if (!at_name()) abort_here("expected identifier");
        std::uint32_t t = raw();
        advance();
        return t;
    }

    // ---- node helpers ----------------------------------------------------

    Node& node(std::uint32_t id) { return tree_.nodes[id]; }

    std::uint32_t make(NodeKind k) {
        tree_.nodes.emplace_back();
        tree_.nodes.back().kind = k;
        tree_.nodes.back().first_tok = raw();
        tree_.nodes.back().last_tok = raw();
        return static_cast<std::uint32_t>(tree_.nodes.size() - 1);
    }

    void close(std::uint32_t id) { node(id).last_tok = prev_raw(); }

    std::uint32_t leaf(NodeKind k) {
        std::uint32_t id = make(k);
        node(id).main_tok = raw();
        advance();
        close(id);
        return id;
    }

    // ---- statements --------------------------------------------------------

    void parse_statement(std::vector<std::uint32_t>& out) {
        if (at(TokenKind::Indent)) abort_here("unexpected indent");
        if (at(TokenKind::Dedent)) abort_here("unexpected dedent");
        if (at_op("@")) {
            out.push_back(parse_decorated());
            return;
        }
        if (at_kw("if")) { out.push_back(parse_if()); return; }
        if (at_kw("while")) { out.push_back(parse_while()); return; }
        if (at_kw("for")) { out.push_back(parse_for(false)); return; }
        if (at_kw("try")) { out.push_back(parse_try()); return; }
        if (at_kw("with")) { out.push_back(parse_with(false)); return; }
        if (at_kw("def")) { out.push_back(parse_funcdef(false)); return; }
        if (at_kw("class")) { out.push_back(parse_classdef()); return; }
        if (at_kw("async")) {
            std::uint32_t kw = raw();
            advance();
            std::uint32_t id;
            if (at_kw("def")) id = parse_funcdef(true);
            else if (at_kw("for")) id = parse_for(true);
            else if (at_kw("with")) id = parse_with(true);
            else abort_here("expected 'def', 'for' or 'with' after 'async'");
            node(id).first_tok = kw;
            out.push_back(id);
            return;
        }
        parse_simple_line(out);
    }

    void parse_simple_line(std::vector<std::uint32_t>& out) {
        out.push_back(parse_small_stmt());
        while (accept_op(";")) {
            if (at(TokenKind::Newline) || at(TokenKind::EndMarker)) break;
            out.push_back(parse_small_stmt());
        }
        expect_newline();
    }

    std::uint32_t parse_small_stmt() {
        if (at_kw("pass")) return leaf_stmt(NodeKind::Pass);
        if (at_kw("break")) return leaf_stmt(NodeKind::Break);
        if (at_kw("continue")) return leaf_stmt(NodeKind::Continue);
        if (at_kw("return")) return parse_return();
        if (at_kw("raise")) return parse_raise();
        if (at_kw("global")) return parse_scope_decl(NodeKind::Global);
        if (at_kw("nonlocal")) return parse_scope_decl(NodeKind::Nonlocal);
        if (at_kw("import")) return parse_import();
        if (at_kw("from")) return parse_import_from();
        if (at_kw("assert")) return parse_assert();
        if (at_kw("del")) return parse_del();
        if (at_kw("yield")) {
            std::uint32_t id = make(NodeKind::ExprStmt);
            node(id).kids.push_back(parse_yield_expr());
            close(id);
            return id;
        }
        return parse_expr_statement();
    }

    std::uint32_t leaf_stmt(NodeKind k) {
        std::uint32_t id = make(k);
        node(id).main_tok = raw();
        advance();
        close(id);
        return id;
    }

    bool at_stmt_end() const {
        return at(TokenKind::Newline) || at(TokenKind::EndMarker) || at_op(";");
    }

    std::uint32_t parse_return() {
        std::uint32_t id = make(NodeKind::Return);
        node(id).main_tok = raw();
        advance();
        if (!at_stmt_end()) node(id).kids.push_back(parse_testlist_star());
        close(id);
        return id;
    }

    std::uint32_t parse_raise() {
        std::uint32_t id = make(NodeKind::Raise);
        node(id).main_tok = raw();
        advance();
        if (!at_stmt_end()) {
            node(id).kids.push_back(parse_test());
            if (accept_kw("from")) node(id).kids.push_back(parse_test());
        }
        close(id);
        return id;
    }

    std::uint32_t parse_scope_decl(NodeKind k) {
        std::uint32_t id = make(k);
        node(id).main_tok = raw();
        advance();
        do {
            std::uint32_t n = make(NodeKind::Name);
            node(n).main_tok = expect_name_tok();
            close(n);
            node(id).kids.push_back(n);
        } while (accept_op(","));
        close(id);
        return id;
    }

    void parse_dotted_name() {
        expect_name_tok();
        while (at_op(".")) {
            advance();
            expect_name_tok();
        }
    }

    std::uint32_t parse_import_alias(bool dotted) {
        std::uint32_t id = make(NodeKind::ImportAlias);
        if (dotted)
            parse_dotted_name();
        else
            expect_name_tok();
        if (accept_kw("as")) expect_name_tok();
        close(id);
        return id;
    }

    std::uint32_t parse_import() {
        std::uint32_t id = make(NodeKind::Import);
        node(id).main_tok = raw();
        advance();
        do {
            node(id).kids.push_back(parse_import_alias(true));
        } while (accept_op(","));
        close(id);
        return id;
    }

    std::uint32_t parse_import_from() {
        std::uint32_t id = make(NodeKind::ImportFrom);
        node(id).main_tok = raw();
        advance();
        bool saw_dots = false;
        while (at_op(".") || at_op("...")) {
            saw_dots = true;
            advance();
        }
        if (at_name())
            parse_dotted_name();
        else if (!saw_dots)
            abort_here("expected module name");
        expect_kw("import");
        if (accept_op("*")) {
            close(id);
            return id;
        }
        bool parens = accept_op("(");
        do {
            if (parens && at_op(")")) break;
            node(id).kids.push_back(parse_import_alias(false));
        } while (accept_op(","));
        if (parens) expect_op(")");
        close(id);
        return id;
    }

    std::uint32_t parse_assert() {
        std::uint32_t id = make(NodeKind::Assert);
        node(id).main_tok = raw();
        advance();
        node(id).kids.push_back(parse_test());
        if (accept_op(",")) node(id).kids.push_back(parse_test());
        close(id);
        return id;
    }

    std::uint32_t parse_del() {
        std::uint32_t id = make(NodeKind::Del);
        node(id).main_tok = raw();
        advance();
        node(id).kids.push_back(parse_exprlist());
        close(id);
        return id;
    }

    bool at_augop() const {
        if (cur().kind != TokenKind::Op) return false;
        std::string_view t = cur_text();
        static constexpr std::string_view ops[] = {
            "+=", "-=", "*=", "/=", "//=", "**=", "%=", "@=", "&=", "|=", "^=", "<<=", ">>=",
        };
        for (auto o : ops)
            if (o == t) return true;
        return false;
    }

    std::uint32_t parse_expr_statement() {
        std::uint32_t start = raw();
        std::uint32_t first = parse_testlist_star();
        if (at_op(":")) {
            std::uint32_t id = make(NodeKind::AnnAssign);
            node(id).main_tok = raw();
            advance();
            validate_single_target(first);
            node(id).kids.push_back(first);
            node(id).kids.push_back(parse_test());
            if (accept_op("="))
                node(id).kids.push_back(at_kw("yield") ? parse_yield_expr() : parse_testlist_star());
            node(id).first_tok = start;
            close(id);
            return id;
        }
        if (at_augop()) {
            std::uint32_t id = make(NodeKind::AugAssign);
            node(id).main_tok = raw();
            advance();
            validate_single_target(first);
            node(id).kids.push_back(first);
            node(id).kids.push_back(at_kw("yield") ? parse_yield_expr() : parse_testlist_star());
            node(id).first_tok = start;
            close(id);
            return id;
        }
        if (at_op("=")) {
            std::uint32_t id = make(NodeKind::Assign);
            node(id).main_tok = raw();
            std::vector<std::uint32_t> parts{first};
            while (accept_op("="))
                parts.push_back(at_kw("yield") ? parse_yield_expr() : parse_testlist_star());
            for (std::size_t i = 0; i + 1 < parts.size(); ++i) validate_target(parts[i]);
            node(id).kids = std::move(parts);
            node(id).first_tok = start;
            close(id);
            return id;
        }
        std::uint32_t id = make(NodeKind::ExprStmt);
        node(id).kids.push_back(first);
        node(id).first_tok = start;
        close(id);
        return id;
    }

    void validate_target(std::uint32_t id) {
        const Node& n = node(id);
        switch (n.kind) {
        case NodeKind::Name:
        case NodeKind::Attribute:
        case NodeKind::Subscript:
            return;
        case NodeKind::Starred:
        case NodeKind::Paren:
            if (!n.kids.empty()) validate_target(n.kids[0]);
            return;
        case NodeKind::Tuple:
        case NodeKind::ListLit:
            for (std::uint32_t k : n.kids) validate_target(k);
            return;
        default:
            throw Abort{"cannot assign to this expression", n.first_tok};
        }
    }

    void validate_single_target(std::uint32_t id) {
        const Node& n = node(id);
        if (n.kind == NodeKind::Name || n.kind == NodeKind::Attribute ||
            n.kind == NodeKind::Subscript)
            return;
        if (n.kind == NodeKind::Paren && !n.kids.empty()) {
            validate_single_target(n.kids[0]);
            return;
        }
        throw Abort{"invalid assignment target", n.first_tok};
    }

    // ---- compound statements ----------------------------------------------

    std::uint32_t parse_block() {
        expect_op(":");
        std::uint32_t id = make(NodeKind::Block);
        std::vector<std::uint32_t> stmts;
        if (at(TokenKind::Newline)) {
            advance();
            if (!at(TokenKind::Indent)) abort_here("expected an indented block");
            advance();
            std::uint32_t first = raw();
            while (!at(TokenKind::Dedent) && !at(TokenKind::EndMarker))
                parse_statement(stmts);
            if (at(TokenKind::Dedent)) advance();
            node(id).first_tok = first;
        } else {
            node(id).flags |= kFlagInlineBlock;
            node(id).first_tok = raw();
            parse_simple_line(stmts);
        }
        if (stmts.empty()) abort_here("expected statement in block");
        node(id).kids = std::move(stmts);
        node(id).last_tok = node(node(id).kids.back()).last_tok;
        return id;
    }

    std::uint32_t parse_else_clause() {
        std::uint32_t id = make(NodeKind::ElseClause);
        node(id).main_tok = raw();
        expect_kw("else");
        node(id).kids.push_back(parse_block());
        node(id).last_tok = node(node(id).kids.back()).last_tok;
        return id;
    }

    std::uint32_t parse_if() {
        std::uint32_t id = make(NodeKind::If);
        node(id).main_tok = raw();
        advance();
        node(id).kids.push_back(parse_namedexpr_test());
        node(id).kids.push_back(parse_block());
        while (at_kw("elif")) {
            std::uint32_t e = make(NodeKind::ElifClause);
            node(e).main_tok = raw();
            advance();
            node(e).kids.push_back(parse_namedexpr_test());
            node(e).kids.push_back(parse_block());
            node(e).last_tok = node(node(e).kids.back()).last_tok;
            node(id).kids.push_back(e);
        }
        if (at_kw("else")) node(id).kids.push_back(parse_else_clause());
        node(id).last_tok = node(node(id).kids.back()).last_tok;
        return id;
    }

    std::uint32_t parse_while() {
        std::uint32_t id = make(NodeKind::While);
        node(id).main_tok = raw();
        advance();
        node(id).kids.push_back(parse_namedexpr_test());
        node(id).kids.push_back(parse_block());
        if (at_kw("else")) node(id).kids.push_back(parse_else_clause());
        node(id).last_tok = node(node(id).kids.back()).last_tok;
        return id;
    }

    std::uint32_t parse_for(bool is_async) {
        std::uint32_t id = make(NodeKind::For);
        node(id).main_tok = raw();
        if (is_async) node(id).flags |= kFlagAsync;
        advance();
        std::uint32_t target = parse_exprlist();
        validate_target(target);
        node(id).kids.push_back(target);
        expect_kw("in");
        node(id).kids.push_back(parse_testlist_star());
        node(id).kids.push_back(parse_block());
        if (at_kw("else")) node(id).kids.push_back(parse_else_clause());
        node(id).last_tok = node(node(id).kids.back()).last_tok;
        return id;
    }

    std::uint32_t parse_try() {
        std::uint32_t id = make(NodeKind::Try);
        node(id).main_tok = raw();
        advance();
        node(id).kids.push_back(parse_block());
        bool saw_handler = false;
        while (at_kw("except")) {
            saw_handler = true;
            std::uint32_t h = make(NodeKind::ExceptClause);
            node(h).main_tok = raw();
            advance();
            if (!at_op(":")) {
                node(h).kids.push_back(parse_test());
                if (accept_kw("as")) expect_name_tok();
            }
            node(h).kids.push_back(parse_block());
            node(h).last_tok = node(node(h).kids.back()).last_tok;
            node(id).kids.push_back(h);
        }
        if (saw_handler && at_kw("else")) node(id).kids.push_back(parse_else_clause());
        if (at_kw("finally")) {
            std::uint32_t f = make(NodeKind::FinallyClause);
            node(f).main_tok = raw();
            advance();
            node(f).kids.push_back(parse_block());
            node(f).last_tok = node(node(f).kids.back()).last_tok;
            node(id).kids.push_back(f);
        } else if (!saw_handler) {
            abort_here("expected 'except' or 'finally'");
        }
        node(id).last_tok = node(node(id).kids.back()).last_tok;
        return id;
    }

    std::uint32_t parse_with(bool is_async) {
        std::uint32_t id = make(NodeKind::With);
        node(id).main_tok = raw();
        if (is_async) node(id).flags |= kFlagAsync;
        advance();
        do {
            std::uint32_t item = make(NodeKind::WithItem);
            node(item).kids.push_back(parse_test());
            if (accept_kw("as")) {
                std::uint32_t t = parse_expr();
                validate_target(t);
                node(item).kids.push_back(t);
            }
            close(item);
            node(id).kids.push_back(item);
        } while (accept_op(","));
        node(id).kids.push_back(parse_block());
        node(id).last_tok = node(node(id).kids.back()).last_tok;
        return id;
    }

    std::uint32_t parse_decorated() {
        std::uint32_t id = make(NodeKind::Decorated);
        while (at_op("@")) {
            std::uint32_t d = make(NodeKind::Decorator);
            node(d).main_tok = raw();
            advance();
            node(d).kids.push_back(parse_test());
            close(d);
            expect_newline();
            node(id).kids.push_back(d);
        }
        std::uint32_t target;
        if (at_kw("def")) {
            target = parse_funcdef(false);
        } else if (at_kw("class")) {
            target = parse_classdef();
        } else if (at_kw("async")) {
            std::uint32_t kw = raw();
            advance();
            if (!at_kw("def")) abort_here("expected 'def' after 'async'");
            target = parse_funcdef(true);
            node(target).first_tok = kw;
        } else {
            abort_here("expected 'def' or 'class' after decorators");
        }
        node(id).kids.push_back(target);
        node(id).last_tok = node(target).last_tok;
        return id;
    }

    std::uint32_t parse_param(bool allow_annotation) {
        std::uint32_t id = make(NodeKind::Param);
        if (accept_op("/")) {
            node(id).flags |= kFlagSlashMarker;
            close(id);
            return id;
        }
        if (at_op("*") || at_op("**")) {
            bool dstar = at_op("**");
            advance();
            node(id).flags |= dstar ? kFlagDoubleStar : kFlagStar;
            if (!at_name()) {
                if (dstar) abort_here("expected parameter name after '**'");
                node(id).flags &= ~kFlagStar;
                node(id).flags |= kFlagStarMarker;
                close(id);
                return id;
            }
        }
        node(id).main_tok = expect_name_tok();
        if (allow_annotation && accept_op(":")) {
            node(id).flags |= 1u << 16;  // has annotation
            node(id).kids.push_back(parse_test());
        }
        if (accept_op("=")) {
            node(id).flags |= 1u << 17;  // has default
            node(id).kids.push_back(parse_test());
        }
        close(id);
        return id;
    }

    std::uint32_t parse_params_parenthesized() {
        std::uint32_t id = make(NodeKind::Params);
        expect_op("(");
        while (!at_op(")")) {
            node(id).kids.push_back(parse_param(true));
            if (!accept_op(",")) break;
        }
        expect_op(")");
        close(id);
        return id;
    }

    std::uint32_t parse_funcdef(bool is_async) {
        std::uint32_t id = make(NodeKind::FunctionDef);
        if (is_async) node(id).flags |= kFlagAsync;
        advance();  // def
        node(id).main_tok = expect_name_tok();
        node(id).kids.push_back(parse_params_parenthesized());
        if (accept_op("->")) {
            node(id).flags |= 1u << 16;  // has return annotation
            node(id).kids.push_back(parse_test());
        }
        node(id).kids.push_back(parse_block());
        node(id).last_tok = node(node(id).kids.back()).last_tok;
        return id;
    }

    std::uint32_t parse_classdef() {
        std::uint32_t id = make(NodeKind::ClassDef);
        node(id).main_tok = raw();
        advance();  // class
        node(id).main_tok = expect_name_tok();
        if (accept_op("(")) {
            while (!at_op(")")) {
                node(id).kids.push_back(parse_call_arg(node(id).kids.empty()));
                if (!accept_op(",")) break;
            }
            expect_op(")");
        }
        node(id).kids.push_back(parse_block());
        node(id).last_tok = node(node(id).kids.back()).last_tok;
        return id;
    }

    // ---- expressions -------------------------------------------------------

    std::uint32_t parse_yield_expr() {
        std::uint32_t id = make(NodeKind::Yield);
        node(id).main_tok = raw();
        expect_kw("yield");
        if (accept_kw("from")) {
            node(id).flags |= kFlagYieldFrom;
            node(id).kids.push_back(parse_test());
        } else if (!at_stmt_end() && !at_op(")") && !at_op("]") && !at_op("}") && !at_op(",") &&
                   !at_op(":")) {
            node(id).kids.push_back(parse_testlist_star());
        }
        close(id);
        return id;
    }

    std::uint32_t parse_star_item() {
        if (at_op("*")) {
            std::uint32_t id = make(NodeKind::Starred);
            node(id).main_tok = raw();
            advance();
            node(id).kids.push_back(parse_expr());
            close(id);
            return id;
        }
        return parse_test();
    }

    std::uint32_t parse_testlist_star() {
        std::uint32_t start = raw();
        std::uint32_t first = parse_star_item();
        if (!at_op(",")) return first;
        std::uint32_t id = make(NodeKind::Tuple);
        node(id).kids.push_back(first);
        while (accept_op(",")) {
            if (at_stmt_end() || at_op("=") || at_op(")") || at_op("]") || at_op("}") ||
                at_op(":") || at_augop())
                break;
            node(id).kids.push_back(parse_star_item());
        }
        node(id).first_tok = start;
        close(id);
        return id;
    }

    // exprlist: bitwise-or level items, used for `for` targets and `del`
    std::uint32_t parse_exprlist() {
        std::uint32_t start = raw();
        std::uint32_t first =
            at_op("*") ? parse_star_item_expr() : parse_expr();
        if (!at_op(",")) return first;
        std::uint32_t id = make(NodeKind::Tuple);
        node(id).kids.push_back(first);
        while (accept_op(",")) {
            if (at_kw("in") || at_stmt_end() || at_op(":")) break;
            node(id).kids.push_back(at_op("*") ? parse_star_item_expr() : parse_expr());
        }
        node(id).first_tok = start;
        close(id);
        return id;
    }

    std::uint32_t parse_star_item_expr() {
        std::uint32_t id = make(NodeKind::Starred);
        node(id).main_tok = raw();
        advance();
        node(id).kids.push_back(parse_expr());
        close(id);
        return id;
    }

    std::uint32_t parse_namedexpr_test() {
        std::uint32_t start = raw();
        std::uint32_t t = parse_test();
        if (at_op(":=")) {
            std::uint32_t id = make(NodeKind::NamedExpr);
            node(id).main_tok = raw();
            advance();
            if (node(t).kind != NodeKind::Name)
                throw Abort{"cannot use assignment expression with this target", node(t).first_tok};
            node(id).kids.push_back(t);
            node(id).kids.push_back(parse_test());
            node(id).first_tok = start;
            close(id);
            return id;
        }
        return t;
    }

    std::uint32_t parse_test() {
        if (at_kw("lambda")) return parse_lambda();
        std::uint32_t start = raw();
        std::uint32_t body = parse_or_test();
        if (at_kw("if")) {
            std::uint32_t id = make(NodeKind::IfExp);
            node(id).main_tok = raw();
            advance();
            node(id).kids.push_back(body);
            node(id).kids.push_back(parse_or_test());
            expect_kw("else");
            node(id).kids.push_back(parse_test());
            node(id).first_tok = start;
            close(id);
            return id;
        }
        return body;
    }

    std::uint32_t parse_lambda() {
        std::uint32_t id = make(NodeKind::Lambda);
        node(id).main_tok = raw();
        advance();
        std::uint32_t params = make(NodeKind::Params);
        while (!at_op(":")) {
            node(params).kids.push_back(parse_param(false));
            if (!accept_op(",")) break;
        }
        close(params);
        node(id).kids.push_back(params);
        expect_op(":");
        node(id).kids.push_back(parse_test());
        close(id);
        return id;
    }

    std::uint32_t parse_bool_chain(BoolKind op, std::string_view kw,
                                   std::uint32_t (Parser::*sub)()) {
        std::uint32_t start = raw();
        std::uint32_t first = (this->*sub)();
        if (!at_kw(kw)) return first;
        std::uint32_t id = make(NodeKind::BoolOp);
        node(id).flags |= static_cast<std::uint32_t>(op);
        node(id).main_tok = raw();
        node(id).kids.push_back(first);
        while (accept_kw(kw)) node(id).kids.push_back((this->*sub)());
        node(id).first_tok = start;
        close(id);
        return id;
    }

    std::uint32_t parse_or_test() {
        return parse_bool_chain(BoolKind::Or, "or", &Parser::parse_and_test);
    }
    std::uint32_t parse_and_test() {
        return parse_bool_chain(BoolKind::And, "and", &Parser::parse_not_test);
    }

    std::uint32_t parse_not_test() {
        if (at_kw("not")) {
            std::uint32_t id = make(NodeKind::UnaryOp);
            node(id).flags |= static_cast<std::uint32_t>(UnaryKind::Not);
            node(id).main_tok = raw();
            advance();
            node(id).kids.push_back(parse_not_test());
            close(id);
            return id;
        }
        return parse_comparison();
    }

    bool at_comp_op() const {
        if (cur().kind == TokenKind::Op) {
            std::string_view t = cur_text();
            return t == "<" || t == ">" || t == "<=" || t == ">=" || t == "==" || t == "!=";
        }
        if (at_kw("in") || at_kw("is")) return true;
        if (at_kw("not") && peek_text() == "in") return true;
        return false;
    }

    std::uint32_t parse_comparison() {
        std::uint32_t start = raw();
        std::uint32_t left = parse_expr();
        if (!at_comp_op()) return left;
        std::uint32_t id = make(NodeKind::Compare);
        node(id).kids.push_back(left);
        while (at_comp_op()) {
            std::uint32_t op = make(NodeKind::CompareOp);
            node(op).main_tok = raw();
            CmpOp k;
            if (at_op("<")) { k = CmpOp::Lt; advance(); }
            else if (at_op(">")) { k = CmpOp::Gt; advance(); }
            else if (at_op("<=")) { k = CmpOp::Le; advance(); }
            else if (at_op(">=")) { k = CmpOp::Ge; advance(); }
            else if (at_op("==")) { k = CmpOp::Eq; advance(); }
            else if (at_op("!=")) { k = CmpOp::Ne; advance(); }
            else if (at_kw("in")) { k = CmpOp::In; advance(); }
            else if (at_kw("not")) { k = CmpOp::NotIn; advance(); expect_kw("in"); }
            else {  // is / is not
                advance();
                if (accept_kw("not")) k = CmpOp::IsNot;
                else k = CmpOp::Is;
            }
            node(op).flags |= static_cast<std::uint32_t>(k);
            node(op).kids.push_back(parse_expr());
            close(op);
            node(id).kids.push_back(op);
        }
        node(id).first_tok = start;
        close(id);
        return id;
    }

    std::uint32_t parse_binop_chain(const std::vector<std::pair<std::string_view, BinaryOp>>& ops,
                                    std::uint32_t (Parser::*sub)()) {
        std::uint32_t start = raw();
        std::uint32_t left = (this->*sub)();
        for (;;) {
            const std::pair<std::string_view, BinaryOp>* hit = nullptr;
            if (cur().kind == TokenKind::Op) {
                for (const auto& o : ops)
                    if (cur_text() == o.first) { hit = &o; break; }
            }
            if (!hit) return left;
            std::uint32_t id = make(NodeKind::BinOp);
            node(id).flags |= static_cast<std::uint32_t>(hit->second);
            node(id).main_tok = raw();
            advance();
            node(id).kids.push_back(left);
            node(id).kids.push_back((this->*sub)());
            node(id).first_tok = start;
            close(id);
            left = id;
        }
    }

    std::uint32_t parse_expr() {  // bitwise-or level
        return parse_binop_chain({{"|", BinaryOp::BitOr}}, &Parser::parse_xor_expr);
    }
    std::uint32_t parse_xor_expr() {
        return parse_binop_chain({{"^", BinaryOp::BitXor}}, &Parser::parse_and_expr);
    }
    std::uint32_t parse_and_expr() {
        return parse_binop_chain({{"&", BinaryOp::BitAnd}}, &Parser::parse_shift_expr);
    }
    std::uint32_t parse_shift_expr() {
        return parse_binop_chain({{"<<", BinaryOp::LShift}, {">>", BinaryOp::RShift}},
                                 &Parser::parse_arith_expr);
    }
    std::uint32_t parse_arith_expr() {
        return parse_binop_chain({{"+", BinaryOp::Add}, {"-", BinaryOp::Sub}},
                                 &Parser::parse_term);
    }
    std::uint32_t parse_term() {
        return parse_binop_chain({{"*", BinaryOp::Mul},
                                  {"@", BinaryOp::MatMul},
                                  {"/", BinaryOp::Div},
                                  {"%", BinaryOp::Mod},
                                  {"//", BinaryOp::FloorDiv}},
                                 &Parser::parse_factor);
    }

    std::uint32_t parse_factor() {
        if (at_op("+") || at_op("-") || at_op("~")) {
            std::uint32_t id = make(NodeKind::UnaryOp);
            UnaryKind k = at_op("-") ? UnaryKind::Neg : at_op("+") ? UnaryKind::Pos : UnaryKind::Invert;
            node(id).flags |= static_cast<std::uint32_t>(k);
            node(id).main_tok = raw();
            advance();
            node(id).kids.push_back(parse_factor());
            close(id);
            return id;
        }
        return parse_power();
    }

    std::uint32_t parse_power() {
        std::uint32_t start = raw();
        std::uint32_t base = parse_atom_expr();
        if (at_op("**")) {
            std::uint32_t id = make(NodeKind::BinOp);
            node(id).flags |= static_cast<std::uint32_t>(BinaryOp::Pow);
            node(id).main_tok = raw();
            advance();
            node(id).kids.push_back(base);
            node(id).kids.push_back(parse_factor());
            node(id).first_tok = start;
            close(id);
            return id;
        }
        return base;
    }

    std::uint32_t parse_atom_expr() {
        if (at_kw("await")) {
            std::uint32_t id = make(NodeKind::Await);
            node(id).main_tok = raw();
            advance();
            node(id).kids.push_back(parse_atom_expr());
            close(id);
            return id;
        }
        std::uint32_t start = raw();
        std::uint32_t e = parse_atom();
        for (;;) {
            if (at_op("(")) {
                std::uint32_t id = make(NodeKind::Call);
                advance();
                node(id).kids.push_back(e);
                while (!at_op(")")) {
                    node(id).kids.push_back(parse_call_arg(node(id).kids.size() == 1));
                    if (!accept_op(",")) break;
                }
                expect_op(")");
                node(id).first_tok = start;
                close(id);
                e = id;
            } else if (at_op("[")) {
                std::uint32_t id = make(NodeKind::Subscript);
                advance();
                node(id).kids.push_back(e);
                node(id).kids.push_back(parse_subscriptlist());
                expect_op("]");
                node(id).first_tok = start;
                close(id);
                e = id;
            } else if (at_op(".")) {
                std::uint32_t id = make(NodeKind::Attribute);
                advance();
                node(id).kids.push_back(e);
                node(id).main_tok = expect_name_tok();
                node(id).first_tok = start;
                close(id);
                e = id;
            } else {
                return e;
            }
        }
    }

    std::uint32_t parse_call_arg(bool first_arg) {
        std::uint32_t id = make(NodeKind::Arg);
        if (at_op("*")) {
            node(id).flags |= kFlagStar;
            advance();
            node(id).kids.push_back(parse_test());
            close(id);
            return id;
        }
        if (at_op("**")) {
            node(id).flags |= kFlagDoubleStar;
            advance();
            node(id).kids.push_back(parse_test());
            close(id);
            return id;
        }
        std::uint32_t v = parse_test();
        if (at_op("=") && node(v).kind == NodeKind::Name) {
            node(id).flags |= kFlagKeywordArg;
            node(id).main_tok = node(v).main_tok;
            advance();
            node(id).kids.push_back(parse_test());
            close(id);
            return id;
        }
        if (at_op(":=")) {
            std::uint32_t ne = make(NodeKind::NamedExpr);
            node(ne).main_tok = raw();
            advance();
            if (node(v).kind != NodeKind::Name)
                throw Abort{"cannot use assignment expression with this target", node(v).first_tok};
            node(ne).kids.push_back(v);
            node(ne).kids.push_back(parse_test());
            node(ne).first_tok = node(v).first_tok;
            close(ne);
            v = ne;
        } else if (first_arg && (at_kw("for") || (at_kw("async") && peek_text() == "for"))) {
            std::uint32_t g = make(NodeKind::GenExp);
            node(g).kids.push_back(v);
            parse_comp_clauses(g);
            node(g).first_tok = node(v).first_tok;
            close(g);
            v = g;
        }
        node(id).kids.push_back(v);
        close(id);
        return id;
    }

    std::uint32_t parse_subscriptlist() {
        std::uint32_t start = raw();
        std::uint32_t first = parse_subscript_item();
        if (!at_op(",")) return first;
        std::uint32_t id = make(NodeKind::Tuple);
        node(id).kids.push_back(first);
        while (accept_op(",")) {
            if (at_op("]")) break;
            node(id).kids.push_back(parse_subscript_item());
        }
        node(id).first_tok = start;
        close(id);
        return id;
    }

    std::uint32_t parse_subscript_item() {
        std::uint32_t start = raw();
        std::uint32_t lower = kNone;
        if (!at_op(":")) {
            lower = parse_test();
            if (!at_op(":")) return lower;
        }
        std::uint32_t id = make(NodeKind::SliceExpr);
        node(id).main_tok = raw();
        expect_op(":");
        if (lower != kNone) {
            node(id).flags |= 1u << 16;
            node(id).kids.push_back(lower);
        }
        if (!at_op("]") && !at_op(",") && !at_op(":")) {
            node(id).flags |= 1u << 17;
            node(id).kids.push_back(parse_test());
        }
        if (accept_op(":")) {
            if (!at_op("]") && !at_op(",")) {
                node(id).flags |= 1u << 18;
                node(id).kids.push_back(parse_test());
            }
        }
        node(id).first_tok = start;
        close(id);
        return id;
    }

    void parse_comp_clauses(std::uint32_t owner) {
        for (;;) {
            if (at_kw("for") || (at_kw("async") && peek_text() == "for")) {
                std::uint32_t c = make(NodeKind::CompFor);
                if (accept_kw("async")) node(c).flags |= kFlagAsync;
                node(c).main_tok = raw();
                expect_kw("for");
                std::uint32_t target = parse_exprlist();
                validate_target(target);
                node(c).kids.push_back(target);
                expect_kw("in");
                node(c).kids.push_back(parse_or_test());
                close(c);
                node(owner).kids.push_back(c);
            } else if (at_kw("if")) {
                std::uint32_t c = make(NodeKind::CompIf);
                node(c).main_tok = raw();
                advance();
                node(c).kids.push_back(parse_or_test_namedexpr());
                close(c);
                node(owner).kids.push_back(c);
            } else {
                return;
            }
        }
    }

    std::uint32_t parse_or_test_namedexpr() {
        std::uint32_t start = raw();
        std::uint32_t t = parse_or_test();
        if (at_op(":=")) {
            std::uint32_t id = make(NodeKind::NamedExpr);
            node(id).main_tok = raw();
            advance();
            if (node(t).kind != NodeKind::Name)
                throw Abort{"cannot use assignment expression with this target", node(t).first_tok};
            node(id).kids.push_back(t);
            node(id).kids.push_back(parse_test());
            node(id).first_tok = start;
            close(id);
            return id;
        }
        return t;
    }

    std::uint32_t parse_atom() {
        if (at_op("(")) return parse_paren_atom();
        if (at_op("[")) return parse_list_atom();
        if (at_op("{")) return parse_brace_atom();
        if (at_op("...")) return leaf(NodeKind::ConstLit);
        if (at(TokenKind::Number)) return leaf(NodeKind::Number);
        if (at(TokenKind::String)) {
            std::uint32_t id = make(NodeKind::String);
            node(id).main_tok = raw();
            advance();
            while (at(TokenKind::String)) advance();  // implicit concatenation
            close(id);
            return id;
        }
        if (cur().kind == TokenKind::Name) {
            std::string_view t = cur_text();
            if (t == "None" || t == "True" || t == "False") return leaf(NodeKind::ConstLit);
            if (is_keyword(t)) abort_here("unexpected keyword");
            return leaf(NodeKind::Name);
        }
        abort_here("expected expression");
    }

    std::uint32_t parse_paren_atom() {
        std::uint32_t start = raw();
        advance();  // (
        if (at_op(")")) {
            std::uint32_t id = make(NodeKind::Tuple);
            advance();
            node(id).first_tok = start;
            close(id);
            return id;
        }
        if (at_kw("yield")) {
            std::uint32_t y = parse_yield_expr();
            expect_op(")");
            std::uint32_t id = make(NodeKind::Paren);
            node(id).kids.push_back(y);
            node(id).first_tok = start;
            close(id);
            return id;
        }
        std::uint32_t first = at_op("*") ? parse_star_item() : parse_namedexpr_test();
        if (at_kw("for") || (at_kw("async") && peek_text() == "for")) {
            std::uint32_t g = make(NodeKind::GenExp);
            node(g).kids.push_back(first);
            parse_comp_clauses(g);
            expect_op(")");
            node(g).first_tok = start;
            close(g);
            return g;
        }
        if (at_op(",")) {
            std::uint32_t id = make(NodeKind::Tuple);
            node(id).kids.push_back(first);
            while (accept_op(",")) {
                if (at_op(")")) break;
                node(id).kids.push_back(at_op("*") ? parse_star_item() : parse_namedexpr_test());
            }
            expect_op(")");
            node(id).first_tok = start;
            close(id);
            return id;
        }
        expect_op(")");
        std::uint32_t id = make(NodeKind::Paren);
        node(id).kids.push_back(first);
        node(id).first_tok = start;
        close(id);
        return id;
    }

    std::uint32_t parse_list_atom() {
        std::uint32_t start = raw();
        advance();  // [
        if (at_op("]")) {
            std::uint32_t id = make(NodeKind::ListLit);
            advance();
            node(id).first_tok = start;
            close(id);
            return id;
        }
        std::uint32_t first = at_op("*") ? parse_star_item() : parse_namedexpr_test();
        if (at_kw("for") || (at_kw("async") && peek_text() == "for")) {
            std::uint32_t c = make(NodeKind::ListComp);
            node(c).kids.push_back(first);
            parse_comp_clauses(c);
            expect_op("]");
            node(c).first_tok = start;
            close(c);
            return c;
        }
        std::uint32_t id = make(NodeKind::ListLit);
        node(id).kids.push_back(first);
        while (accept_op(",")) {
            if (at_op("]")) break;
            node(id).kids.push_back(at_op("*") ? parse_star_item() : parse_namedexpr_test());
        }
        expect_op("]");
        node(id).first_tok = start;
        close(id);
        return id;
    }

    std::uint32_t parse_brace_atom() {
        std::uint32_t start = raw();
        advance();  // {
        if (at_op("}")) {
            std::uint32_t id = make(NodeKind::DictLit);
            advance();
            node(id).first_tok = start;
            close(id);
            return id;
        }
        if (at_op("**")) {
            std::uint32_t id = make(NodeKind::DictLit);
            parse_dict_items(id, parse_double_starred());
            expect_op("}");
            node(id).first_tok = start;
            close(id);
            return id;
        }
        std::uint32_t first = at_op("*") ? parse_star_item() : parse_namedexpr_test();
        if (at_op(":")) {
            std::uint32_t colon_tok = raw();
            advance();
            std::uint32_t value = parse_test();
            if (at_kw("for") || (at_kw("async") && peek_text() == "for")) {
                std::uint32_t c = make(NodeKind::DictComp);
                node(c).kids.push_back(first);
                node(c).kids.push_back(value);
                parse_comp_clauses(c);
                expect_op("}");
                node(c).first_tok = start;
                close(c);
                return c;
            }
            std::uint32_t item = make(NodeKind::DictItem);
            node(item).main_tok = colon_tok;
            node(item).kids.push_back(first);
            node(item).kids.push_back(value);
            node(item).first_tok = node(first).first_tok;
            node(item).last_tok = node(value).last_tok;
            std::uint32_t id = make(NodeKind::DictLit);
            parse_dict_items(id, item);
            expect_op("}");
            node(id).first_tok = start;
            close(id);
            return id;
        }
        if (at_kw("for") || (at_kw("async") && peek_text() == "for")) {
            std::uint32_t c = make(NodeKind::SetComp);
            node(c).kids.push_back(first);
            parse_comp_clauses(c);
            expect_op("}");
            node(c).first_tok = start;
            close(c);
            return c;
        }
        std::uint32_t id = make(NodeKind::SetLit);
        node(id).kids.push_back(first);
        while (accept_op(",")) {
            if (at_op("}")) break;
            node(id).kids.push_back(at_op("*") ? parse_star_item() : parse_namedexpr_test());
        }
        expect_op("}");
        node(id).first_tok = start;
        close(id);
        return id;
    }

    std::uint32_t parse_double_starred() {
        std::uint32_t id = make(NodeKind::DoubleStarred);
        node(id).main_tok = raw();
        expect_op("**");
        node(id).kids.push_back(parse_expr());
        close(id);
        return id;
    }

    void parse_dict_items(std::uint32_t dict, std::uint32_t first_item) {
        node(dict).kids.push_back(first_item);
        while (accept_op(",")) {
            if (at_op("}")) break;
            if (at_op("**")) {
                node(dict).kids.push_back(parse_double_starred());
                continue;
            }
            std::uint32_t item = make(NodeKind::DictItem);
            std::uint32_t k = parse_test();
            node(item).first_tok = node(k).first_tok;
            node(item).main_tok = raw();
            expect_op(":");
            node(item).kids.push_back(k);
            node(item).kids.push_back(parse_test());
            close(item);
            node(dict).kids.push_back(item);
        }
    }

    std::string_view src_;
    const std::vector<Token>& toks_;
    std::vector<std::uint32_t> sig_;
    std::size_t p_ = 0;
    Tree tree_;
};

} // namespace detail

inline ParseOutcome parse_tokens(std::string_view src, const std::vector<Token>& tokens) {
    return detail::Parser(src, tokens).run();
}

} // namespace acw
