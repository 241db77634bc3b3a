#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mpiassist/errors.hpp"
#include "mpiassist/lexer.hpp"

namespace mpiassist {

enum class NodeKind : std::uint8_t {
    translation_unit,
    function_definition,
    declaration,
    compound_statement,
    if_statement,
    for_statement,
    while_statement,
    do_statement,
    switch_statement,
    return_statement,
    break_statement,
    continue_statement,
    expression_statement,
    labeled_statement,
    call_expression,
    binary_expression,
    unary_expression,
    assignment_expression,
    conditional_expression,
    cast_expression,
    subscript_expression,
    field_expression,
    identifier,
    literal,
    argument_list,
    parameter_list,
    preprocessor_directive,
    other,
};

inline constexpr std::array<std::string_view, 28> kNodeKindNames = {
    "translation_unit", "function_definition", "declaration", "compound_statement",
    "if_statement", "for_statement", "while_statement", "do_statement",
    "switch_statement", "return_statement", "break_statement", "continue_statement",
    "expression_statement", "labeled_statement", "call_expression", "binary_expression",
    "unary_expression", "assignment_expression", "conditional_expression", "cast_expression",
    "subscript_expression", "field_expression", "identifier", "literal",
    "argument_list", "parameter_list", "preprocessor_directive", "other"};

inline std::string_view to_string(NodeKind kind) { return kNodeKindNames[static_cast<std::size_t>(kind)]; }

inline std::optional<NodeKind> node_kind_from_string(std::string_view name) {
    for (std::size_t i = 0; i < kNodeKindNames.size(); ++i) {
        if (kNodeKindNames[i] == name) return static_cast<NodeKind>(i);
    }
    return std::nullopt;
}

struct Span {
    std::size_t start_byte = 0;
    std::size_t end_byte = 0;
    int start_line = 1;
    int end_line = 1;
};

struct AstNode {
    NodeKind kind = NodeKind::other;
    std::vector<AstNode> children;
    Span span;
    std::string leaf_text;         // leaves only
    std::size_t first_token = 0;   // token range [first_token, last_token)
    std::size_t last_token = 0;

    bool is_leaf() const { return children.empty(); }
};

// Layout hints recorded by the parser for the renderer. Keywords and
// punctuation are not tree nodes, so their syntactic role lives here.
enum class TokenRole : std::uint8_t {
    none,
    binary,      // spaced on both sides
    prefix,      // unary prefix operator or pointer declarator: no space after
    postfix,     // no space before
    cast_close,  // ')' closing a cast: no space after
    call_open,   // '(' opening an argument or parameter list: no space before
    block_open,  // '{' of a struct/union body laid out one member per line
    block_close,
    label_colon,
};

struct SyntaxTree {
    TokenStream tokens;
    std::vector<TokenRole> roles;
    AstNode root;
};

inline bool is_statement_kind(NodeKind k) {
    switch (k) {
    case NodeKind::compound_statement:
    case NodeKind::if_statement:
    case NodeKind::for_statement:
    case NodeKind::while_statement:
    case NodeKind::do_statement:
    case NodeKind::switch_statement:
    case NodeKind::return_statement:
    case NodeKind::break_statement:
    case NodeKind::continue_statement:
    case NodeKind::expression_statement:
    case NodeKind::labeled_statement:
        return true;
    default:
        return false;
    }
}

namespace detail {

inline bool is_one_of(const Token& t, std::initializer_list<std::string_view> words) {
    if (t.kind != TokenKind::keyword && t.kind != TokenKind::punctuation) return false;
    return std::find(words.begin(), words.end(), std::string_view(t.text)) != words.end();
}

inline bool is_type_keyword(const Token& t) {
    return t.kind == TokenKind::keyword &&
           is_one_of(t, {"void", "char", "short", "int", "long", "float", "double", "signed", "unsigned",
                         "_Bool", "_Complex", "_Imaginary"});
}

inline bool is_qualifier_keyword(const Token& t) {
    return t.kind == TokenKind::keyword &&
           is_one_of(t, {"const", "volatile", "restrict", "__restrict", "__restrict__", "__volatile__"});
}

inline bool is_storage_keyword(const Token& t) {
    return t.kind == TokenKind::keyword &&
           is_one_of(t, {"typedef", "extern", "static", "auto", "register", "inline", "__inline", "__inline__",
                         "_Noreturn", "_Thread_local", "__extension__"});
}

inline bool is_tag_keyword(const Token& t) {
    return t.kind == TokenKind::keyword && is_one_of(t, {"struct", "union", "enum"});
}

// Keywords followed by a parenthesized group that is carried opaquely.
inline bool is_group_keyword(const Token& t) {
    return t.kind == TokenKind::keyword &&
           is_one_of(t, {"__attribute__", "_Alignas", "__asm__", "asm", "_Static_assert"});
}

inline bool is_typeof_keyword(const Token& t) {
    return t.kind == TokenKind::keyword && is_one_of(t, {"typeof", "__typeof__"});
}

// Identifiers that are type names in practice (no typedef table is kept).
inline bool is_type_like_identifier(std::string_view name) {
    static constexpr std::array<std::string_view, 25> kKnown = {
        "size_t", "ssize_t", "FILE", "ptrdiff_t", "intptr_t", "uintptr_t", "wchar_t", "bool",
        "MPI_Comm", "MPI_Datatype", "MPI_Status", "MPI_Request", "MPI_Op", "MPI_Aint",
        "MPI_Offset", "MPI_Count", "MPI_Win", "MPI_File", "MPI_Group", "MPI_Info",
        "MPI_Errhandler", "MPI_Message", "MPI_Fint", "va_list", "time_t"};
    if (std::find(kKnown.begin(), kKnown.end(), name) != kKnown.end()) return true;
    return name.size() > 2 && name.substr(name.size() - 2) == "_t";
}

inline int binary_precedence(const Token& t) {
    if (t.kind != TokenKind::punctuation) return 0;
    const std::string& s = t.text;
    if (s == ",") return 1;
    if (s == "=" || s == "+=" || s == "-=" || s == "*=" || s == "/=" || s == "%=" || s == "&=" || s == "|=" ||
        s == "^=" || s == "<<=" || s == ">>=")
        return 2;
    if (s == "?") return 3;
    if (s == "||") return 4;
    if (s == "&&") return 5;
    if (s == "|") return 6;
    if (s == "^") return 7;
    if (s == "&") return 8;
    if (s == "==" || s == "!=") return 9;
    if (s == "<" || s == ">" || s == "<=" || s == ">=") return 10;
    if (s == "<<" || s == ">>") return 11;
    if (s == "+" || s == "-") return 12;
    if (s == "*" || s == "/" || s == "%") return 13;
    return 0;
}

// Maps each bracket token to its partner; throws on imbalance.
inline std::vector<std::size_t> match_brackets(const TokenStream& ts) {
    constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<std::size_t> match(ts.size(), npos);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const Token& t = ts[i];
        if (t.kind != TokenKind::punctuation || t.text.size() != 1) continue;
        const char c = t.text[0];
        if (c == '(' || c == '[' || c == '{') {
            stack.push_back(i);
        } else if (c == ')' || c == ']' || c == '}') {
            const char want = c == ')' ? '(' : c == ']' ? '[' : '{';
            if (stack.empty() || ts[stack.back()].text[0] != want) {
                throw ParseError(t.line, t.col, std::string("unbalanced '") + c + "'");
            }
            match[stack.back()] = i;
            match[i] = stack.back();
            stack.pop_back();
        }
    }
    if (!stack.empty()) {
        const Token& t = ts[stack.back()];
        throw ParseError(t.line, t.col, "unclosed '" + t.text + "'");
    }
    return match;
}

enum class DeclContext { top_level, block, member, for_init, parameter };
enum class SpecMode { declaration, inline_layout, parameter, type_name };

class Parser {
public:
    explicit Parser(TokenStream ts, std::size_t text_size)
        : ts_(std::move(ts)), roles_(ts_.size(), TokenRole::none), text_size_(text_size) {
        match_ = match_brackets(ts_);
    }

    SyntaxTree run() {
        std::vector<AstNode> items;
        while (!eof()) items.push_back(parse_external());
        AstNode root;
        root.kind = NodeKind::translation_unit;
        root.children = std::move(items);
        root.first_token = 0;
        root.last_token = ts_.size();
        root.span.start_byte = 0;
        root.span.end_byte = text_size_;
        root.span.start_line = 1;
        int last_line = 1;
        for (const auto& t : ts_) last_line = t.line + static_cast<int>(std::count(t.text.begin(), t.text.end(), '\n'));
        if (!ts_.empty()) {
            last_line += static_cast<int>(std::count(ts_.trailing.begin(), ts_.trailing.end(), '\n'));
        }
        root.span.end_line = last_line;
        return SyntaxTree{std::move(ts_), std::move(roles_), std::move(root)};
    }

private:
    // ---- token access -------------------------------------------------
    bool eof() const { return pos_ >= ts_.size(); }
    const Token* at_index(std::size_t i) const { return i < ts_.size() ? &ts_[i] : nullptr; }
    const Token* cur() const { return at_index(pos_); }
    const Token* peek(std::size_t k) const { return at_index(pos_ + k); }
    bool at(std::string_view s) const { return !eof() && ts_[pos_].is(s); }
    bool at_index_is(std::size_t i, std::string_view s) const { return i < ts_.size() && ts_[i].is(s); }
    bool at_kind(TokenKind k) const { return !eof() && ts_[pos_].kind == k; }

    void set_role(std::size_t i, TokenRole r) {
        roles_[i] = r;
        role_high_ = std::max(role_high_, i + 1);
    }
    // Undo roles assigned by a failed attempt that started at `start`.
    void rollback(std::size_t start) {
        for (std::size_t i = start; i < role_high_ && i < roles_.size(); ++i) roles_[i] = TokenRole::none;
        pos_ = start;
    }

    // ---- node construction --------------------------------------------
    AstNode make(NodeKind kind, std::size_t first, std::size_t last, std::vector<AstNode> children = {}) const {
        AstNode n;
        n.kind = kind;
        n.first_token = first;
        n.last_token = last;
        n.children = std::move(children);
        if (first < last) {
            const Token& a = ts_[first];
            const Token& b = ts_[last - 1];
            n.span.start_byte = a.offset;
            n.span.end_byte = b.offset + b.text.size();
            n.span.start_line = a.line;
            n.span.end_line = b.line + static_cast<int>(std::count(b.text.begin(), b.text.end(), '\n'));
        } else if (first < ts_.size()) {
            n.span.start_byte = n.span.end_byte = ts_[first].offset;
            n.span.start_line = n.span.end_line = ts_[first].line;
        }
        return n;
    }

    AstNode leaf(NodeKind kind, std::size_t i) const {
        AstNode n = make(kind, i, i + 1);
        n.leaf_text = ts_[i].text;
        return n;
    }

    // An opaque region: `other` node whose children are the identifier and
    // literal leaves found in [first, last).
    AstNode opaque(std::size_t first, std::size_t last) const {
        std::vector<AstNode> kids;
        for (std::size_t i = first; i < last; ++i) {
            if (ts_[i].kind == TokenKind::identifier) kids.push_back(leaf(NodeKind::identifier, i));
            else if (ts_[i].kind == TokenKind::literal) kids.push_back(leaf(NodeKind::literal, i));
            else if (ts_[i].kind == TokenKind::preprocessor) kids.push_back(directive(i));
        }
        AstNode n = make(NodeKind::other, first, last, std::move(kids));
        if (n.children.empty() && first < last) {
            for (std::size_t i = first; i < last; ++i) {
                if (i > first) n.leaf_text += ' ';
                n.leaf_text += ts_[i].text;
            }
        }
        return n;
    }

    AstNode directive(std::size_t i) const {
        AstNode n = make(NodeKind::preprocessor_directive, i, i + 1);
        n.leaf_text = ts_[i].text;
        return n;
    }

    std::size_t group_end(std::size_t open) const { return match_[open] + 1; }

    // Index of the first token in [from, limit) equal to `stop` at bracket
    // depth zero, or `limit`.
    std::size_t find_at_depth0(std::size_t from, std::size_t limit, std::string_view stop) const {
        std::size_t i = from;
        while (i < limit) {
            const Token& t = ts_[i];
            if (t.is(stop)) return i;
            if (t.is("(") || t.is("[") || t.is("{")) {
                i = group_end(i);
                continue;
            }
            ++i;
        }
        return limit;
    }

    // ---- top level ----------------------------------------------------
    AstNode parse_external() {
        if (at_kind(TokenKind::preprocessor)) return directive(pos_++);
        if (at(";")) {
            ++pos_;
            return make(NodeKind::other, pos_ - 1, pos_);
        }
        if (auto decl = parse_declaration(DeclContext::top_level)) return std::move(*decl);
        return top_level_chunk();
    }

    AstNode top_level_chunk() {
        const std::size_t start = pos_;
        while (!eof()) {
            const Token& t = ts_[pos_];
            if (t.kind == TokenKind::preprocessor && pos_ > start) break;
            if (t.is(";")) {
                ++pos_;
                break;
            }
            if (t.is("{")) {
                pos_ = group_end(pos_);
                if (at(";")) ++pos_;
                break;
            }
            if (t.is("(") || t.is("[")) {
                const std::size_t close = match_[pos_];
                pos_ = close + 1;
                // A macro invocation standing alone on its line ends the chunk.
                if (t.is("(") && !eof() && ts_[pos_].line > ts_[close].line) break;
                continue;
            }
            ++pos_;
        }
        if (pos_ == start) ++pos_;
        return opaque(start, pos_);
    }

    // ---- declarations -------------------------------------------------
    void skip_group_keyword(std::vector<AstNode>& kids) {
        const std::size_t start = pos_++;
        if (at("(")) pos_ = group_end(pos_);
        kids.push_back(opaque(start, pos_));
    }

    bool parse_specifiers(std::vector<AstNode>& kids, bool& saw_type, SpecMode mode) {
        const std::size_t start = pos_;
        while (!eof()) {
            const Token& t = ts_[pos_];
            if (t.kind == TokenKind::keyword) {
                if (is_qualifier_keyword(t) || is_storage_keyword(t)) {
                    ++pos_;
                    continue;
                }
                if (t.is("_Atomic")) {
                    if (at_index_is(pos_ + 1, "(")) {
                        skip_group_keyword(kids);
                        saw_type = true;
                    } else {
                        ++pos_;
                    }
                    continue;
                }
                if (is_type_keyword(t)) {
                    ++pos_;
                    saw_type = true;
                    continue;
                }
                if (is_tag_keyword(t)) {
                    parse_tag_specifier(kids, mode);
                    saw_type = true;
                    continue;
                }
                if (is_group_keyword(t)) {
                    skip_group_keyword(kids);
                    continue;
                }
                if (is_typeof_keyword(t)) {
                    skip_group_keyword(kids);
                    saw_type = true;
                    continue;
                }
                break;
            }
            if (t.kind == TokenKind::identifier && !saw_type) {
                const Token* next = peek(1);
                bool is_type = false;
                if (next) {
                    if (next->kind == TokenKind::identifier || is_qualifier_keyword(*next) || next->is("*")) {
                        is_type = true;
                    } else if (mode == SpecMode::type_name) {
                        is_type = next->is(")") || next->is("[") || next->is("(");
                    } else if (mode == SpecMode::parameter) {
                        is_type = (next->is(",") || next->is(")") || next->is("[")) &&
                                  is_type_like_identifier(t.text);
                    }
                }
                if (!is_type) break;
                kids.push_back(leaf(NodeKind::identifier, pos_++));
                saw_type = true;
                continue;
            }
            break;
        }
        return pos_ > start;
    }

    void parse_tag_specifier(std::vector<AstNode>& kids, SpecMode mode) {
        const bool is_enum = ts_[pos_].is("enum");
        ++pos_;
        while (!eof() && is_group_keyword(ts_[pos_])) skip_group_keyword(kids);
        if (at_kind(TokenKind::identifier)) kids.push_back(leaf(NodeKind::identifier, pos_++));
        if (!at("{")) return;
        const std::size_t open = pos_;
        const std::size_t close = match_[open];
        ++pos_;
        if (is_enum) {
            while (pos_ < close) {
                if (at(",")) {
                    ++pos_;
                    continue;
                }
                if (at_kind(TokenKind::preprocessor)) {
                    kids.push_back(directive(pos_++));
                    continue;
                }
                const std::size_t item = pos_;
                if (at_kind(TokenKind::identifier)) {
                    kids.push_back(leaf(NodeKind::identifier, pos_++));
                    if (at("=")) {
                        set_role(pos_, TokenRole::binary);
                        ++pos_;
                        const std::size_t stop = find_at_depth0(pos_, close, ",");
                        if (auto e = parse_region(stop)) kids.push_back(std::move(*e));
                    }
                    if (pos_ == close || at(",")) continue;
                }
                rollback(item);
                const std::size_t stop = find_at_depth0(item, close, ",");
                kids.push_back(opaque(item, std::max(stop, item + 1)));
                pos_ = std::max(stop, item + 1);
            }
        } else {
            const bool block = mode == SpecMode::declaration;
            if (block) {
                set_role(open, TokenRole::block_open);
                set_role(close, TokenRole::block_close);
            }
            while (pos_ < close) {
                if (at_kind(TokenKind::preprocessor)) {
                    kids.push_back(directive(pos_++));
                    continue;
                }
                if (auto member = parse_declaration(DeclContext::member, close)) {
                    kids.push_back(std::move(*member));
                    continue;
                }
                kids.push_back(statement_chunk(close));
            }
        }
        pos_ = close + 1;
    }

    struct DeclaratorInfo {
        bool has_name = false;
        bool is_function = false;
    };

    bool parse_declarator(std::vector<AstNode>& kids, DeclaratorInfo& info, bool abstract_ok) {
        while (at("*")) {
            set_role(pos_, TokenRole::prefix);
            ++pos_;
            while (!eof() && (is_qualifier_keyword(ts_[pos_]) || is_group_keyword(ts_[pos_]))) {
                if (is_group_keyword(ts_[pos_])) skip_group_keyword(kids);
                else ++pos_;
            }
        }
        bool direct_identifier = false;
        if (at_kind(TokenKind::identifier)) {
            kids.push_back(leaf(NodeKind::identifier, pos_++));
            info.has_name = true;
            direct_identifier = true;
        } else if (at("(") && peek(1) && (peek(1)->is("*") || peek(1)->is("("))) {
            const std::size_t close = match_[pos_];
            ++pos_;
            DeclaratorInfo inner;
            if (!parse_declarator(kids, inner, abstract_ok) || pos_ != close) return false;
            ++pos_;
            info.has_name = inner.has_name;
        } else if (!abstract_ok) {
            return false;
        }
        bool first_suffix = true;
        for (;;) {
            if (at("[")) {
                const std::size_t close = match_[pos_];
                ++pos_;
                while (!eof() && pos_ < close && (is_qualifier_keyword(ts_[pos_]) || ts_[pos_].is("static"))) ++pos_;
                if (pos_ < close) {
                    if (at("*") && pos_ + 1 == close) {
                        ++pos_;
                    } else if (auto e = parse_region(close)) {
                        kids.push_back(std::move(*e));
                    }
                }
                pos_ = close + 1;
            } else if (at("(")) {
                if (first_suffix && direct_identifier) info.is_function = true;
                set_role(pos_, TokenRole::call_open);
                kids.push_back(parse_parameter_list());
            } else {
                break;
            }
            first_suffix = false;
        }
        while (!eof() && is_group_keyword(ts_[pos_])) skip_group_keyword(kids);
        return true;
    }

    AstNode parse_parameter_list() {
        const std::size_t open = pos_;
        const std::size_t close = match_[open];
        ++pos_;
        std::vector<AstNode> params;
        while (pos_ < close) {
            if (at(",") || at("...")) {
                ++pos_;
                continue;
            }
            const std::size_t start = pos_;
            std::vector<AstNode> kids;
            bool saw_type = false;
            const bool spec = parse_specifiers(kids, saw_type, SpecMode::parameter);
            DeclaratorInfo info;
            const bool ok = parse_declarator(kids, info, true) && (spec || info.has_name) &&
                            (pos_ == close || at(","));
            if (ok) {
                params.push_back(make(NodeKind::declaration, start, pos_, std::move(kids)));
                continue;
            }
            rollback(start);
            const std::size_t stop = std::max(find_at_depth0(start, close, ","), start + 1);
            params.push_back(opaque(start, stop));
            pos_ = stop;
        }
        pos_ = close + 1;
        return make(NodeKind::parameter_list, open, close + 1, std::move(params));
    }

    std::optional<AstNode> parse_initializer(std::size_t limit) {
        if (at("{")) return parse_init_list();
        const std::size_t start = pos_;
        auto e = parse_assignment();
        if (!e) rollback(start);
        (void)limit;
        return e;
    }

    AstNode parse_init_list() {
        const std::size_t open = pos_;
        const std::size_t close = match_[open];
        ++pos_;
        std::vector<AstNode> kids;
        while (pos_ < close) {
            if (at(",")) {
                ++pos_;
                continue;
            }
            const std::size_t item = pos_;
            bool ok = true;
            bool designated = false;
            while (ok && (at(".") || at("["))) {
                designated = true;
                if (at(".")) {
                    ++pos_;
                    if (at_kind(TokenKind::identifier)) kids.push_back(leaf(NodeKind::identifier, pos_++));
                    else ok = false;
                } else {
                    const std::size_t c = match_[pos_];
                    ++pos_;
                    if (auto e = parse_region(c)) kids.push_back(std::move(*e));
                    pos_ = c + 1;
                }
            }
            if (ok && designated) {
                if (at("=")) {
                    set_role(pos_, TokenRole::binary);
                    ++pos_;
                } else {
                    ok = false;
                }
            }
            if (ok) {
                if (auto e = parse_initializer(close)) {
                    if (pos_ == close || at(",")) {
                        kids.push_back(std::move(*e));
                        continue;
                    }
                }
            }
            rollback(item);
            const std::size_t stop = std::max(find_at_depth0(item, close, ","), item + 1);
            kids.push_back(opaque(item, stop));
            pos_ = stop;
        }
        pos_ = close + 1;
        return make(NodeKind::other, open, close + 1, std::move(kids));
    }

    std::optional<AstNode> parse_declaration(DeclContext ctx, std::size_t limit = static_cast<std::size_t>(-1)) {
        const std::size_t start = pos_;
        std::vector<AstNode> kids;
        bool saw_type = false;
        if (at("_Static_assert")) {
            skip_group_keyword(kids);
            if (!at(";")) {
                rollback(start);
                return std::nullopt;
            }
            ++pos_;
            return make(NodeKind::declaration, start, pos_, std::move(kids));
        }
        const bool spec = parse_specifiers(kids, saw_type, SpecMode::declaration);
        if (!spec) {
            const bool implicit_int_function =
                ctx == DeclContext::top_level && at_kind(TokenKind::identifier) && peek(1) && peek(1)->is("(");
            const bool anonymous_bitfield = ctx == DeclContext::member && at(":");
            if (!implicit_int_function && !anonymous_bitfield) {
                rollback(start);
                return std::nullopt;
            }
        }
        if (at(";")) {
            ++pos_;
            return make(NodeKind::declaration, start, pos_, std::move(kids));
        }
        bool first = true;
        for (;;) {
            if (pos_ >= limit) {
                rollback(start);
                return std::nullopt;
            }
            DeclaratorInfo info;
            if (!(ctx == DeclContext::member && at(":"))) {
                if (!parse_declarator(kids, info, false)) {
                    rollback(start);
                    return std::nullopt;
                }
            }
            if (first && ctx == DeclContext::top_level && info.is_function) {
                if (at("{")) {
                    kids.push_back(parse_compound());
                    return make(NodeKind::function_definition, start, pos_, std::move(kids));
                }
                if (!eof() && !at(";") && !at(",") && !at("=")) {
                    // K&R parameter declarations
                    const std::size_t kr = pos_;
                    bool ok = true;
                    while (ok && !eof() && !at("{")) {
                        if (auto d = parse_declaration(DeclContext::block)) kids.push_back(std::move(*d));
                        else ok = false;
                    }
                    if (ok && at("{") && pos_ > kr) {
                        kids.push_back(parse_compound());
                        return make(NodeKind::function_definition, start, pos_, std::move(kids));
                    }
                    rollback(start);
                    return std::nullopt;
                }
            }
            first = false;
            if (ctx == DeclContext::member && at(":")) {
                set_role(pos_, TokenRole::binary);
                ++pos_;
                auto width = parse_conditional();
                if (!width) {
                    rollback(start);
                    return std::nullopt;
                }
                kids.push_back(std::move(*width));
            }
            if (at("=")) {
                set_role(pos_, TokenRole::binary);
                ++pos_;
                auto init = parse_initializer(limit);
                if (!init) {
                    rollback(start);
                    return std::nullopt;
                }
                kids.push_back(std::move(*init));
            }
            while (!eof() && is_group_keyword(ts_[pos_])) skip_group_keyword(kids);
            if (at(",")) {
                ++pos_;
                continue;
            }
            if (at(";")) {
                ++pos_;
                break;
            }
            rollback(start);
            return std::nullopt;
        }
        return make(NodeKind::declaration, start, pos_, std::move(kids));
    }

    bool looks_like_declaration() const {
        const Token* t = cur();
        if (!t) return false;
        if (t->kind == TokenKind::keyword) {
            return is_type_keyword(*t) || is_qualifier_keyword(*t) || is_storage_keyword(*t) || is_tag_keyword(*t) ||
                   is_typeof_keyword(*t) || t->is("_Static_assert") || t->is("__attribute__") ||
                   t->is("_Alignas") || t->is("_Atomic");
        }
        if (t->kind != TokenKind::identifier) return false;
        const Token* n = peek(1);
        if (!n) return false;
        if (n->kind == TokenKind::identifier || is_qualifier_keyword(*n)) return true;
        if (n->is("*")) {
            std::size_t j = pos_ + 1;
            while (j < ts_.size() && (ts_[j].is("*") || is_qualifier_keyword(ts_[j]))) ++j;
            if (j + 1 < ts_.size() && ts_[j].kind == TokenKind::identifier) {
                const Token& after = ts_[j + 1];
                return after.is(";") || after.is(",") || after.is("=") || after.is("[") || after.is(")");
            }
        }
        return false;
    }

    // ---- statements ---------------------------------------------------
    AstNode parse_compound() {
        const std::size_t open = pos_;
        const std::size_t close = match_[open];
        ++pos_;
        std::vector<AstNode> items;
        while (pos_ < close) items.push_back(parse_block_item(close));
        pos_ = close + 1;
        return make(NodeKind::compound_statement, open, close + 1, std::move(items));
    }

    AstNode parse_block_item(std::size_t limit) {
        if (looks_like_declaration()) {
            if (auto d = parse_declaration(DeclContext::block, limit)) return std::move(*d);
        }
        return parse_statement(limit);
    }

    // Statement-level fallback: tokens up to and including the next ';' at
    // depth zero, stopping before a '{' so that macro-style loop headers
    // keep their body as a separate compound statement.
    AstNode statement_chunk(std::size_t limit) {
        const std::size_t start = pos_;
        while (pos_ < limit) {
            const Token& t = ts_[pos_];
            if (t.kind == TokenKind::preprocessor && pos_ > start) break;
            if (t.is(";")) {
                ++pos_;
                break;
            }
            if (t.is("{")) {
                if (pos_ > start) break;
                pos_ = group_end(pos_);
                break;
            }
            if (t.is("(") || t.is("[")) {
                pos_ = group_end(pos_);
                continue;
            }
            ++pos_;
        }
        if (pos_ == start) ++pos_;
        return opaque(start, pos_);
    }

    // Parses an expression that must end exactly at `end`; otherwise the
    // region becomes an opaque node. Empty regions yield nullopt.
    std::optional<AstNode> parse_region(std::size_t end) {
        const std::size_t start = pos_;
        if (start >= end) return std::nullopt;
        if (auto e = parse_expression(); e && pos_ == end) return e;
        rollback(start);
        pos_ = end;
        return opaque(start, end);
    }

    std::optional<AstNode> paren_condition(std::vector<AstNode>& kids) {
        if (!at("(")) return std::nullopt;
        const std::size_t close = match_[pos_];
        ++pos_;
        auto e = parse_region(close);
        pos_ = close + 1;
        if (e) kids.push_back(std::move(*e));
        return e;
    }

    void body_statement(std::vector<AstNode>& kids, std::size_t limit) {
        if (pos_ < limit) kids.push_back(parse_statement(limit));
    }

    void expect_semicolon() {
        if (at(";")) ++pos_;
    }

    AstNode parse_statement(std::size_t limit) {
        const std::size_t start = pos_;
        const Token& t = ts_[pos_];
        if (t.kind == TokenKind::preprocessor) return directive(pos_++);
        if (t.is("{")) return parse_compound();
        if (t.is(";")) {
            ++pos_;
            return make(NodeKind::expression_statement, start, pos_);
        }
        std::vector<AstNode> kids;
        if (t.kind == TokenKind::keyword) {
            if (t.is("if")) {
                ++pos_;
                paren_condition(kids);
                body_statement(kids, limit);
                if (at("else")) {
                    ++pos_;
                    body_statement(kids, limit);
                }
                return make(NodeKind::if_statement, start, pos_, std::move(kids));
            }
            if (t.is("while")) {
                ++pos_;
                paren_condition(kids);
                body_statement(kids, limit);
                return make(NodeKind::while_statement, start, pos_, std::move(kids));
            }
            if (t.is("switch")) {
                ++pos_;
                paren_condition(kids);
                body_statement(kids, limit);
                return make(NodeKind::switch_statement, start, pos_, std::move(kids));
            }
            if (t.is("do")) {
                ++pos_;
                body_statement(kids, limit);
                if (at("while")) {
                    ++pos_;
                    paren_condition(kids);
                }
                expect_semicolon();
                return make(NodeKind::do_statement, start, pos_, std::move(kids));
            }
            if (t.is("for")) {
                ++pos_;
                if (at("(")) {
                    const std::size_t close = match_[pos_];
                    ++pos_;
                    // init clause
                    if (at(";")) {
                        ++pos_;
                    } else {
                        std::optional<AstNode> decl;
                        if (looks_like_declaration()) decl = parse_declaration(DeclContext::for_init, close);
                        if (decl) {
                            kids.push_back(std::move(*decl));
                        } else {
                            const std::size_t semi = find_at_depth0(pos_, close, ";");
                            if (auto e = parse_region(semi)) kids.push_back(std::move(*e));
                            pos_ = std::min(semi + 1, close);
                        }
                    }
                    const std::size_t semi = find_at_depth0(pos_, close, ";");
                    if (auto e = parse_region(semi)) kids.push_back(std::move(*e));
                    pos_ = std::min(semi + 1, close);
                    if (auto e = parse_region(close)) kids.push_back(std::move(*e));
                    pos_ = close + 1;
                }
                body_statement(kids, limit);
                return make(NodeKind::for_statement, start, pos_, std::move(kids));
            }
            if (t.is("return")) {
                ++pos_;
                if (!at(";")) {
                    const std::size_t semi = find_at_depth0(pos_, limit, ";");
                    if (auto e = parse_region(semi)) kids.push_back(std::move(*e));
                    pos_ = semi;
                }
                expect_semicolon();
                return make(NodeKind::return_statement, start, pos_, std::move(kids));
            }
            if (t.is("break") || t.is("continue")) {
                ++pos_;
                expect_semicolon();
                return make(t.is("break") ? NodeKind::break_statement : NodeKind::continue_statement, start, pos_);
            }
            if (t.is("goto")) {
                ++pos_;
                if (at_kind(TokenKind::identifier)) kids.push_back(leaf(NodeKind::identifier, pos_++));
                expect_semicolon();
                return make(NodeKind::other, start, pos_, std::move(kids));
            }
            if (t.is("case") || t.is("default")) {
                ++pos_;
                const std::size_t colon = find_at_depth0(pos_, limit, ":");
                if (t.is("case")) {
                    // A ternary inside the label would end early; parse_region falls back to opaque.
                    if (auto e = parse_region(colon)) kids.push_back(std::move(*e));
                }
                pos_ = colon;
                if (pos_ < limit) {
                    set_role(pos_, TokenRole::label_colon);
                    ++pos_;
                }
                while (pos_ < limit && !at("case") && !at("default")) kids.push_back(parse_block_item(limit));
                return make(NodeKind::labeled_statement, start, pos_, std::move(kids));
            }
        }
        if (t.kind == TokenKind::identifier && peek(1) && peek(1)->is(":")) {
            kids.push_back(leaf(NodeKind::identifier, pos_++));
            set_role(pos_, TokenRole::label_colon);
            ++pos_;
            if (pos_ < limit) kids.push_back(parse_statement(limit));
            return make(NodeKind::labeled_statement, start, pos_, std::move(kids));
        }
        if (auto e = parse_expression(); e && at(";")) {
            ++pos_;
            kids.push_back(std::move(*e));
            return make(NodeKind::expression_statement, start, pos_, std::move(kids));
        }
        rollback(start);
        return statement_chunk(limit);
    }

    // ---- expressions --------------------------------------------------
    std::optional<AstNode> parse_expression() { return parse_binary(1); }
    std::optional<AstNode> parse_assignment() { return parse_binary(2); }
    std::optional<AstNode> parse_conditional() { return parse_binary(3); }

    std::optional<AstNode> parse_binary(int min_prec) {
        const std::size_t start = pos_;
        auto lhs = parse_unary();
        if (!lhs) return std::nullopt;
        while (!eof()) {
            const int prec = binary_precedence(ts_[pos_]);
            if (prec == 0 || prec < min_prec) break;
            const std::size_t op = pos_;
            if (prec == 3) {
                set_role(op, TokenRole::binary);
                ++pos_;
                std::vector<AstNode> kids{std::move(*lhs)};
                if (!at(":")) {
                    auto mid = parse_expression();
                    if (!mid) {
                        rollback(op);
                        lhs = std::move(kids[0]);
                        break;
                    }
                    kids.push_back(std::move(*mid));
                }
                if (!at(":")) {
                    rollback(op);
                    lhs = std::move(kids[0]);
                    break;
                }
                set_role(pos_, TokenRole::binary);
                ++pos_;
                auto rhs = parse_binary(3);
                if (!rhs) {
                    rollback(op);
                    lhs = std::move(kids[0]);
                    break;
                }
                kids.push_back(std::move(*rhs));
                lhs = make(NodeKind::conditional_expression, start, pos_, std::move(kids));
                continue;
            }
            if (prec != 1) set_role(op, TokenRole::binary);
            ++pos_;
            auto rhs = parse_binary(prec == 2 ? 2 : prec + 1);
            if (!rhs) {
                rollback(op);
                break;
            }
            const NodeKind kind = prec == 2 ? NodeKind::assignment_expression : NodeKind::binary_expression;
            lhs = make(kind, start, pos_, {std::move(*lhs), std::move(*rhs)});
        }
        return lhs;
    }

    bool type_name_follows(std::size_t open) const {
        const Token* n = at_index(open + 1);
        if (!n) return false;
        if (n->kind == TokenKind::keyword) {
            return is_type_keyword(*n) || is_qualifier_keyword(*n) || is_tag_keyword(*n) || is_typeof_keyword(*n) ||
                   n->is("_Atomic");
        }
        if (n->kind != TokenKind::identifier) return false;
        std::size_t j = open + 2;
        bool stars = false;
        while (j < ts_.size() && (ts_[j].is("*") || is_qualifier_keyword(ts_[j]))) {
            stars = stars || ts_[j].is("*");
            ++j;
        }
        if (j >= ts_.size() || !ts_[j].is(")")) return false;
        return stars || is_type_like_identifier(n->text);
    }

    AstNode parse_type_name(std::size_t end) {
        const std::size_t start = pos_;
        std::vector<AstNode> kids;
        bool saw_type = false;
        parse_specifiers(kids, saw_type, SpecMode::type_name);
        DeclaratorInfo info;
        if (!parse_declarator(kids, info, true) || pos_ != end) {
            rollback(start);
            pos_ = end;
            return opaque(start, end);
        }
        return make(NodeKind::other, start, end, std::move(kids));
    }

    std::optional<AstNode> parse_unary() {
        const std::size_t start = pos_;
        const Token* t = cur();
        if (!t) return std::nullopt;
        if (t->kind == TokenKind::punctuation &&
            is_one_of(*t, {"++", "--", "+", "-", "!", "~", "*", "&"})) {
            set_role(pos_, TokenRole::prefix);
            ++pos_;
            auto operand = parse_unary();
            if (!operand) {
                rollback(start);
                return std::nullopt;
            }
            return make(NodeKind::unary_expression, start, pos_, {std::move(*operand)});
        }
        if (t->kind == TokenKind::keyword && is_one_of(*t, {"sizeof", "_Alignof", "__alignof__"})) {
            ++pos_;
            if (at("(") && type_name_follows(pos_)) {
                const std::size_t close = match_[pos_];
                ++pos_;
                AstNode type = parse_type_name(close);
                pos_ = close + 1;
                return make(NodeKind::unary_expression, start, pos_, {std::move(type)});
            }
            auto operand = parse_unary();
            if (!operand) {
                rollback(start);
                return std::nullopt;
            }
            return make(NodeKind::unary_expression, start, pos_, {std::move(*operand)});
        }
        if (t->is("__extension__")) {
            ++pos_;
            auto operand = parse_unary();
            if (!operand) rollback(start);
            return operand;
        }
        if (t->is("(")) {
            const std::size_t close = match_[pos_];
            if (type_name_follows(pos_)) {
                ++pos_;
                AstNode type = parse_type_name(close);
                set_role(close, TokenRole::cast_close);
                pos_ = close + 1;
                if (at("{")) {
                    AstNode init = parse_init_list();
                    AstNode lit = make(NodeKind::cast_expression, start, pos_, {std::move(type), std::move(init)});
                    return parse_postfix(start, std::move(lit));
                }
                auto operand = parse_unary();
                if (!operand) {
                    rollback(start);
                    return std::nullopt;
                }
                return make(NodeKind::cast_expression, start, pos_, {std::move(type), std::move(*operand)});
            }
            if (at_index_is(pos_ + 1, "{")) {
                // GNU statement expression
                pos_ = close + 1;
                return parse_postfix(start, opaque(start, close + 1));
            }
            ++pos_;
            auto inner = parse_region(close);
            pos_ = close + 1;
            if (!inner) {
                rollback(start);
                return std::nullopt;
            }
            return parse_postfix(start, std::move(*inner));
        }
        auto primary = parse_primary();
        if (!primary) return std::nullopt;
        return parse_postfix(start, std::move(*primary));
    }

    std::optional<AstNode> parse_primary() {
        const std::size_t start = pos_;
        const Token& t = ts_[pos_];
        if (t.kind == TokenKind::identifier) return leaf(NodeKind::identifier, pos_++);
        if (t.kind == TokenKind::literal) {
            AstNode lit = leaf(NodeKind::literal, pos_++);
            // Adjacent string literals concatenate into one literal.
            while (at_kind(TokenKind::literal) && lit.leaf_text.find('"') != std::string::npos &&
                   ts_[pos_].text.find('"') != std::string::npos) {
                lit.leaf_text += ' ';
                lit.leaf_text += ts_[pos_].text;
                ++pos_;
            }
            if (pos_ > start + 1) {
                std::string text = std::move(lit.leaf_text);
                lit = make(NodeKind::literal, start, pos_);
                lit.leaf_text = std::move(text);
            }
            return lit;
        }
        if (t.is("{")) return parse_init_list();
        if (t.kind == TokenKind::keyword &&
            (is_type_keyword(t) || is_tag_keyword(t) || is_qualifier_keyword(t) || is_typeof_keyword(t))) {
            // Type names appear as macro arguments, e.g. va_arg(ap, int).
            std::size_t end = pos_;
            while (end < ts_.size() && !ts_[end].is(",") && !ts_[end].is(")") && !ts_[end].is(";") &&
                   !ts_[end].is("]") && !ts_[end].is("}")) {
                end = (ts_[end].is("(") || ts_[end].is("[") || ts_[end].is("{")) ? group_end(end) : end + 1;
            }
            return parse_type_name(end);
        }
        if (t.is("_Generic") || t.is("__builtin_va_arg")) {
            ++pos_;
            if (at("(")) pos_ = group_end(pos_);
            return opaque(start, pos_);
        }
        return std::nullopt;
    }

    AstNode parse_postfix(std::size_t start, AstNode node) {
        while (!eof()) {
            if (at("(")) {
                set_role(pos_, TokenRole::call_open);
                AstNode args = parse_argument_list();
                node = make(NodeKind::call_expression, start, pos_, {std::move(node), std::move(args)});
            } else if (at("[")) {
                const std::size_t close = match_[pos_];
                ++pos_;
                std::vector<AstNode> kids{std::move(node)};
                if (auto idx = parse_region(close)) kids.push_back(std::move(*idx));
                pos_ = close + 1;
                node = make(NodeKind::subscript_expression, start, pos_, std::move(kids));
            } else if ((at(".") || at("->")) && peek(1) && peek(1)->kind == TokenKind::identifier) {
                ++pos_;
                AstNode field = leaf(NodeKind::identifier, pos_++);
                node = make(NodeKind::field_expression, start, pos_, {std::move(node), std::move(field)});
            } else if (at("++") || at("--")) {
                set_role(pos_, TokenRole::postfix);
                ++pos_;
                node = make(NodeKind::unary_expression, start, pos_, {std::move(node)});
            } else {
                break;
            }
        }
        return node;
    }

    AstNode parse_argument_list() {
        const std::size_t open = pos_;
        const std::size_t close = match_[open];
        ++pos_;
        std::vector<AstNode> args;
        while (pos_ < close) {
            if (at(",")) {
                ++pos_;
                continue;
            }
            const std::size_t start = pos_;
            if (auto e = parse_assignment(); e && (pos_ == close || at(","))) {
                args.push_back(std::move(*e));
                continue;
            }
            rollback(start);
            const std::size_t stop = std::max(find_at_depth0(start, close, ","), start + 1);
            args.push_back(opaque(start, stop));
            pos_ = stop;
        }
        pos_ = close + 1;
        return make(NodeKind::argument_list, open, close + 1, std::move(args));
    }

    TokenStream ts_;
    std::vector<TokenRole> roles_;
    std::vector<std::size_t> match_;
    std::size_t pos_ = 0;
    std::size_t role_high_ = 0;
    std::size_t text_size_ = 0;
};

} // namespace detail

/// Parse C source into a syntax tree. Unknown constructs become `other`
/// nodes; unbalanced brackets throw ParseError. Throws EncodingError on
/// invalid UTF-8.
inline SyntaxTree parse(std::string_view text) {
    return detail::Parser(tokenize(text), text.size()).run();
}

/// Depth-first pre-order visit; `fn(node, parent)` with parent == nullptr at the root.
template <typename Fn>
void visit(const AstNode& node, Fn&& fn, const AstNode* parent = nullptr) {
    fn(node, parent);
    for (const auto& child : node.children) visit(child, fn, &node);
}

inline std::size_t node_count(const AstNode& node) {
    std::size_t n = 1;
    for (const auto& c : node.children) n += node_count(c);
    return n;
}

/// Name of a function definition: the identifier right before its parameter list.
inline std::string function_name(const AstNode& fn) {
    for (std::size_t i = 1; i < fn.children.size(); ++i) {
        if (fn.children[i].kind == NodeKind::parameter_list && fn.children[i - 1].kind == NodeKind::identifier) {
            return fn.children[i - 1].leaf_text;
        }
    }
    return {};
}

inline const AstNode* find_function(const AstNode& root, std::string_view name) {
    for (const auto& item : root.children) {
        if (item.kind == NodeKind::function_definition && function_name(item) == name) return &item;
    }
    return nullptr;
}

} // namespace mpiassist
