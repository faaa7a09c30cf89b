#pragma once

#include <functional>
#include <string>
#include <vector>

#include "acw/digest.hpp"
#include "acw/document.hpp"
#include "acw/errors.hpp"
#include "acw/span.hpp"

namespace acw {

enum class RuleCategory { Refactoring, Reordering, Formatting };

inline const char* category_name(RuleCategory c) {
    switch (c) {
    case RuleCategory::Refactoring: return "Refactoring";
    case RuleCategory::Reordering: return "Reordering";
    case RuleCategory::Formatting: return "Formatting";
    }
    return "?";
}

/// One catalog entry. `match` returns the sites of the rule's construct —
/// the trigger pattern or its residual post-form, so applicability survives
/// the rule's own application. `plan` returns the edits that move the
/// document toward the rule's fixed point; an empty plan means the document
/// already satisfies the rule.
struct TransformRule {
    std::string rule_id;
    RuleCategory category = RuleCategory::Formatting;
    bool uses_keyed_hash = false;
    std::string description;
    std::string notes;

    std::function<std::vector<Span>(const SourceDocument&)> match;
    std::function<std::vector<SpanEdit>(const SourceDocument&, const SecretKey&)> plan;
};

struct ApplicabilityReport {
    std::string rule_id;
    bool applicable = false;
    std::size_t match_count = 0;
    std::vector<Span> matched_spans;
};

inline ApplicabilityReport applicable(const TransformRule& rule, const SourceDocument& doc) {
    ApplicabilityReport rep;
    rep.rule_id = rule.rule_id;
    if (!doc.parse_ok) return rep;
    rep.matched_spans = rule.match(doc);
    rep.match_count = rep.matched_spans.size();
    rep.applicable = rep.match_count > 0;
    return rep;
}

inline constexpr int kTransformPassBound = 10;

/// Applies `rule` to `code` until it reaches its fixed point (idempotency by
/// construction: a second invocation finds nothing left to edit). A pass
/// whose result no longer parses is discarded — the rule reports
/// TRANSFORM_FAILED semantics by leaving the prior text intact.
inline std::string apply_rule(const TransformRule& rule, const std::string& code,
                              const SecretKey& key) {
    std::string cur = code;
    for (int pass = 0; pass < kTransformPassBound; ++pass) {
        SourceDocument doc = parse(cur);
        if (!doc.parse_ok) {
            if (pass == 0) throw Error(ErrorCode::ParseError, doc.diagnostic);
            return cur;
        }
        std::vector<SpanEdit> edits = rule.plan(doc, key);
        if (edits.empty()) return cur;
        std::string next = apply_edits(cur, std::move(edits));
        if (next == cur) return cur;
        if (!parse(next).parse_ok) return cur;  // skip the whole pass, keep prior text
        cur = std::move(next);
    }
    return cur;
}

} // namespace acw
