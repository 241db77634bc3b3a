#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mpiassist/lexer.hpp"
#include "mpiassist/syntax.hpp"

namespace mpiassist {

namespace detail {

inline bool is_word(const Token& t) {
    return t.kind == TokenKind::identifier || t.kind == TokenKind::keyword || t.kind == TokenKind::literal;
}

// True when printing `a` directly followed by `b` would lex differently.
inline bool pastes(const Token& a, const Token& b) {
    const std::string joined = a.text + b.text;
    const TokenStream ts = tokenize_lenient(joined);
    return ts.size() != 2 || ts[0].text != a.text || ts[1].text != b.text;
}

class Renderer {
public:
    explicit Renderer(const SyntaxTree& tree) : tree_(tree), ts_(tree.tokens), roles_(tree.roles) {
        match_.assign(ts_.size(), 0);
        std::vector<std::size_t> stack;
        for (std::size_t i = 0; i < ts_.size(); ++i) {
            const Token& t = ts_[i];
            if (t.is("(") || t.is("[") || t.is("{")) {
                stack.push_back(i);
            } else if ((t.is(")") || t.is("]") || t.is("}")) && !stack.empty()) {
                match_[stack.back()] = i;
                match_[i] = stack.back();
                stack.pop_back();
            }
        }
    }

    std::string run() {
        for (const auto& item : tree_.root.children) render_item(item, 0);
        return std::move(out_);
    }

private:
    void emit_line(int depth, std::string_view text) {
        out_.append(static_cast<std::size_t>(depth) * 4, ' ');
        out_ += text;
        out_ += '\n';
    }

    void emit_directive(const Token& t) {
        std::string_view text = t.text;
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t nl = text.find('\n', start);
            if (nl == std::string_view::npos) nl = text.size();
            std::string_view line = text.substr(start, nl - start);
            while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
                line.remove_suffix(1);
            }
            out_ += line;
            out_ += '\n';
            start = nl + 1;
        }
    }

    bool needs_space(std::size_t p, std::size_t n) const {
        const bool space = spacing_rule(p, n);
        return space || pastes(ts_[p], ts_[n]);
    }

    bool spacing_rule(std::size_t p, std::size_t n) const {
        const Token& a = ts_[p];
        const Token& b = ts_[n];
        const TokenRole ra = roles_[p];
        const TokenRole rb = roles_[n];
        if (ra == TokenRole::binary || rb == TokenRole::binary) return true;
        if (b.is(",") || b.is(";") || b.is(")") || b.is("]")) return false;
        if (a.is("(") || a.is("[")) return false;
        if (a.is(".") || a.is("->") || b.is(".") || b.is("->")) return false;
        if (rb == TokenRole::postfix || ra == TokenRole::prefix || ra == TokenRole::cast_close) return false;
        if (b.is("(")) {
            if (rb == TokenRole::call_open) return false;
            if (a.kind == TokenKind::keyword) {
                return !is_one_of(a, {"sizeof", "_Alignof", "__alignof__", "__attribute__", "_Alignas", "typeof",
                                      "__typeof__", "_Atomic", "_Static_assert", "__asm__", "asm", "_Generic"});
            }
            return a.is(",") || a.is(";") || a.is(":");
        }
        if (b.is("[")) return false;
        if (a.is(",") || a.is(";")) return true;
        if (b.is("{")) return is_word(a) || a.is(")") || a.is("]");
        if (a.is("{") || b.is("}")) return false;
        if (b.is(":")) return false;
        if (a.is(":")) return true;
        if (is_word(a) && (is_word(b) || rb == TokenRole::prefix)) return true;
        if ((a.is(")") || a.is("}") || a.is("]")) && is_word(b)) return true;
        return false;
    }

    // Appends tokens [first, last) to the current line. Directives break
    // lines; struct bodies marked block_open are laid out member per line.
    void emit_inline(const AstNode* owner, std::size_t first, std::size_t last, int depth, std::string& line,
                     std::size_t& prev) {
        for (std::size_t i = first; i < last; ++i) {
            const Token& t = ts_[i];
            if (t.kind == TokenKind::preprocessor) {
                flush(line, depth, prev);
                emit_directive(t);
                continue;
            }
            if (roles_[i] == TokenRole::block_open && owner) {
                flush(line, depth, prev);
                emit_line(depth, "{");
                const std::size_t close = match_[i];
                for (const auto& child : owner->children) {
                    if (child.first_token > i && child.last_token <= close) render_item(child, depth + 1);
                }
                line = "}";
                prev = close;
                i = close;
                continue;
            }
            if (!line.empty() && prev != npos && needs_space(prev, i)) line += ' ';
            line += t.text;
            prev = i;
        }
    }

    void flush(std::string& line, int depth, std::size_t& prev) {
        if (!line.empty()) emit_line(depth, line);
        line.clear();
        prev = npos;
    }

    void render_flat(const AstNode& node, std::size_t first, std::size_t last, int depth) {
        std::string line;
        std::size_t prev = npos;
        emit_inline(&node, first, last, depth, line, prev);
        flush(line, depth, prev);
    }

    const AstNode* child_starting_at(const AstNode& node, std::size_t tok) const {
        for (const auto& c : node.children) {
            if (c.first_token == tok) return &c;
        }
        return nullptr;
    }

    void render_body(const AstNode* stmt, int depth) {
        if (!stmt) return;
        if (stmt->kind == NodeKind::compound_statement) render_item(*stmt, depth);
        else render_item(*stmt, depth + 1);
    }

    // `keyword (...)` header followed by a body statement.
    void render_headed(const AstNode& node, int depth, std::string_view prefix = {}) {
        const std::size_t open = node.first_token + 1;
        if (open >= node.last_token || !ts_[open].is("(")) {
            render_flat(node, node.first_token, node.last_token, depth);
            return;
        }
        const std::size_t close = match_[open];
        std::string line(prefix);
        std::size_t prev = npos;
        emit_inline(&node, node.first_token, close + 1, depth, line, prev);
        flush(line, depth, prev);
        const AstNode* body = child_starting_at(node, close + 1);
        render_body(body, depth);
        if (node.kind != NodeKind::if_statement || !body) return;
        const std::size_t else_tok = body->last_token;
        if (else_tok >= node.last_token || !ts_[else_tok].is("else")) return;
        const AstNode* alt = child_starting_at(node, else_tok + 1);
        if (alt && alt->kind == NodeKind::if_statement) {
            render_headed(*alt, depth, "else ");
            return;
        }
        emit_line(depth, "else");
        render_body(alt, depth);
    }

    void render_item(const AstNode& node, int depth) {
        switch (node.kind) {
        case NodeKind::preprocessor_directive:
            emit_directive(ts_[node.first_token]);
            return;
        case NodeKind::compound_statement:
            emit_line(depth, "{");
            for (const auto& child : node.children) render_item(child, depth + 1);
            emit_line(depth, "}");
            return;
        case NodeKind::function_definition: {
            if (node.children.empty() || node.children.back().kind != NodeKind::compound_statement) break;
            const AstNode& body = node.children.back();
            std::string line;
            std::size_t prev = npos;
            emit_inline(&node, node.first_token, body.first_token, depth, line, prev);
            flush(line, depth, prev);
            render_item(body, depth);
            return;
        }
        case NodeKind::if_statement:
        case NodeKind::for_statement:
        case NodeKind::while_statement:
        case NodeKind::switch_statement:
            render_headed(node, depth);
            return;
        case NodeKind::do_statement: {
            const AstNode* body = child_starting_at(node, node.first_token + 1);
            if (!body) break;
            emit_line(depth, "do");
            render_body(body, depth);
            if (body->last_token < node.last_token) render_flat(node, body->last_token, node.last_token, depth);
            return;
        }
        case NodeKind::labeled_statement: {
            std::size_t colon = npos;
            for (std::size_t i = node.first_token; i < node.last_token; ++i) {
                if (roles_[i] == TokenRole::label_colon) {
                    colon = i;
                    break;
                }
                if (ts_[i].is("(") || ts_[i].is("[") || ts_[i].is("{")) i = match_[i];
            }
            if (colon == npos) break;
            render_flat(node, node.first_token, colon + 1, depth);
            const bool is_case = ts_[node.first_token].is("case") || ts_[node.first_token].is("default");
            for (const auto& child : node.children) {
                if (child.first_token > colon) render_item(child, is_case ? depth + 1 : depth);
            }
            return;
        }
        default:
            break;
        }
        render_flat(node, node.first_token, node.last_token, depth);
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    const SyntaxTree& tree_;
    const TokenStream& ts_;
    const std::vector<TokenRole>& roles_;
    std::vector<std::size_t> match_;
    std::string out_;
};

} // namespace detail

/// Standardized text: Allman braces, 4-space indent, one statement per
/// line, comments and blank lines removed. Idempotent under parse.
inline std::string render(const SyntaxTree& tree) { return detail::Renderer(tree).run(); }

inline std::string standardize(std::string_view text) { return render(parse(text)); }

} // namespace mpiassist
