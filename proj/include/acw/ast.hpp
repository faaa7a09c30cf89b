#pragma once

#include <cstdint>
#include <vector>

namespace acw {

inline constexpr std::uint32_t kNone = 0xffffffffu;

enum class NodeKind : std::uint8_t {
    Module,
    // statements
    FunctionDef,
    ClassDef,
    Decorated,
    Decorator,
    Params,
    Param,
    Block,
    If,
    ElifClause,
    ElseClause,
    While,
    For,
    Try,
    ExceptClause,
    FinallyClause,
    With,
    WithItem,
    Return,
    Raise,
    Assert,
    Del,
    Pass,
    Break,
    Continue,
    Global,
    Nonlocal,
    Import,
    ImportFrom,
    ImportAlias,
    ExprStmt,
    Assign,
    AugAssign,
    AnnAssign,
    // expressions
    BoolOp,
    UnaryOp,
    BinOp,
    Compare,
    CompareOp,
    Lambda,
    IfExp,
    Await,
    Yield,
    NamedExpr,
    Call,
    Arg,
    Attribute,
    Subscript,
    SliceExpr,
    Name,
    Number,
    String,
    ConstLit,  // None / True / False / ...
    Tuple,
    ListLit,
    SetLit,
    DictLit,
    DictItem,
    Starred,
    DoubleStarred,
    ListComp,
    SetComp,
    DictComp,
    GenExp,
    CompFor,
    CompIf,
    Paren,
};

enum class BinaryOp : std::uint32_t {
    Add, Sub, Mul, MatMul, Div, FloorDiv, Mod, Pow, LShift, RShift,
    BitOr, BitXor, BitAnd,
};

enum class CmpOp : std::uint32_t {
    Lt, Gt, Le, Ge, Eq, Ne, In, NotIn, Is, IsNot,
};

enum class UnaryKind : std::uint32_t { Not, Neg, Pos, Invert };
enum class BoolKind : std::uint32_t { And, Or };

// flag bits shared across kinds; the low byte holds the op enum when present
inline constexpr std::uint32_t kOpMask = 0xffu;
inline constexpr std::uint32_t kFlagAsync = 1u << 8;
inline constexpr std::uint32_t kFlagInlineBlock = 1u << 9;
inline constexpr std::uint32_t kFlagYieldFrom = 1u << 10;
inline constexpr std::uint32_t kFlagStar = 1u << 11;        // Param: *args
inline constexpr std::uint32_t kFlagDoubleStar = 1u << 12;  // Param: **kwargs
inline constexpr std::uint32_t kFlagStarMarker = 1u << 13;  // Param: bare *
inline constexpr std::uint32_t kFlagSlashMarker = 1u << 14; // Param: /
inline constexpr std::uint32_t kFlagKeywordArg = 1u << 15;  // Arg: name=value

/// One syntax node; kids are indices into the owning Tree. `first_tok` /
/// `last_tok` delimit the covered token range (inclusive, raw token indices),
/// `main_tok` points at the distinguishing token: the operator of a BinOp,
/// the name of a def, the keyword of a compound statement.
struct Node {
    NodeKind kind = NodeKind::Module;
    std::uint32_t first_tok = 0;
    std::uint32_t last_tok = 0;
    std::uint32_t main_tok = kNone;
    std::uint32_t flags = 0;
    std::vector<std::uint32_t> kids;

    template <typename E>
    E op_as() const { return static_cast<E>(flags & kOpMask); }
};

struct Tree {
    std::vector<Node> nodes;
    std::uint32_t root = kNone;
    std::vector<std::uint32_t> parent;  // kNone for the root

    const Node& operator[](std::uint32_t id) const { return nodes[id]; }
    Node& operator[](std::uint32_t id) { return nodes[id]; }

    void build_parents() {
        parent.assign(nodes.size(), kNone);
        for (std::uint32_t i = 0; i < nodes.size(); ++i)
            for (std::uint32_t k : nodes[i].kids)
                parent[k] = i;
    }
};

} // namespace acw
