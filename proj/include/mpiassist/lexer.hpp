#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mpiassist/errors.hpp"

namespace mpiassist {

enum class TokenKind { identifier, keyword, literal, punctuation, preprocessor };

inline const char* to_string(TokenKind kind) {
    switch (kind) {
    case TokenKind::identifier: return "identifier";
    case TokenKind::keyword: return "keyword";
    case TokenKind::literal: return "literal";
    case TokenKind::punctuation: return "punctuation";
    case TokenKind::preprocessor: return "preprocessor";
    }
    return "?";
}

struct Token {
    TokenKind kind;
    std::string text;
    int line = 1;            // 1-based
    int col = 1;             // 1-based, in bytes
    std::size_t offset = 0;  // byte offset of `text`
    std::string leading;     // whitespace and comments between the previous token and this one

    bool is(std::string_view s) const {
        return (kind == TokenKind::punctuation || kind == TokenKind::keyword) && text == s;
    }
};

// Ordered tokens plus whatever trivia follows the last one. Concatenating
// `leading + text` of every token and then `trailing` yields the source.
struct TokenStream {
    std::vector<Token> tokens;
    std::string trailing;

    std::size_t size() const { return tokens.size(); }
    bool empty() const { return tokens.empty(); }
    const Token& operator[](std::size_t i) const { return tokens[i]; }
    auto begin() const { return tokens.begin(); }
    auto end() const { return tokens.end(); }

    std::string reconstruct() const {
        std::string out;
        for (const auto& t : tokens) {
            out += t.leading;
            out += t.text;
        }
        out += trailing;
        return out;
    }
};

namespace detail {

inline bool is_keyword(std::string_view word) {
    static constexpr std::array<std::string_view, 56> kKeywords = {
        "auto", "break", "case", "char", "const", "continue", "default", "do",
        "double", "else", "enum", "extern", "float", "for", "goto", "if",
        "inline", "int", "long", "register", "restrict", "return", "short", "signed",
        "sizeof", "static", "struct", "switch", "typedef", "union", "unsigned", "void",
        "volatile", "while", "_Alignas", "_Alignof", "_Atomic", "_Bool", "_Complex", "_Generic",
        "_Imaginary", "_Noreturn", "_Static_assert", "_Thread_local", "__attribute__", "__inline",
        "__inline__", "__restrict", "__restrict__", "__extension__", "__asm__", "asm",
        "__typeof__", "typeof", "__alignof__", "__volatile__"};
    for (auto k : kKeywords) {
        if (k == word) return true;
    }
    return false;
}

inline bool is_ident_start(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}

inline bool is_ident_char(unsigned char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
}

inline bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

// Returns the offset of the first invalid byte, or npos.
inline std::size_t find_invalid_utf8(std::string_view s) {
    std::size_t i = 0;
    const std::size_t n = s.size();
    while (i < n) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t len = 0;
        std::uint32_t cp = 0;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return i;
        }
        if (i + len > n) return i;
        for (std::size_t k = 1; k < len; ++k) {
            const auto cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) return i;
            cp = (cp << 6) | (cc & 0x3F);
        }
        const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000);
        if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
        i += len;
    }
    return std::string_view::npos;
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : src_(text) {}

    TokenStream run() {
        TokenStream out;
        std::string trivia;
        bool line_start = true;  // only whitespace/comments since the last newline
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '\n') {
                trivia += c;
                advance(1);
                line_start = true;
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
                trivia += c;
                advance(1);
                continue;
            }
            if (c == '\\' && peek(1) == '\n') {
                trivia += "\\\n";
                advance(2);
                continue;
            }
            if (c == '/' && peek(1) == '/') {
                const auto start = pos_;
                while (pos_ < src_.size() && src_[pos_] != '\n') {
                    if (src_[pos_] == '\\' && peek(1) == '\n') advance(1);
                    advance(1);
                }
                trivia += src_.substr(start, pos_ - start);
                continue;
            }
            if (c == '/' && peek(1) == '*') {
                const auto start = pos_;
                const auto close = src_.find("*/", pos_ + 2);
                advance(close == std::string_view::npos ? src_.size() - pos_ : close + 2 - pos_);
                trivia += src_.substr(start, pos_ - start);
                continue;
            }

            Token tok;
            tok.line = line_;
            tok.col = col_;
            tok.offset = pos_;
            tok.leading = std::move(trivia);
            trivia.clear();
            if (c == '#' && line_start) {
                tok.kind = TokenKind::preprocessor;
                tok.text = lex_directive();
            } else {
                lex_token(tok);
            }
            line_start = false;
            out.tokens.push_back(std::move(tok));
        }
        out.trailing = std::move(trivia);
        return out;
    }

private:
    char peek(std::size_t k) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
    }

    // A directive runs to the end of its logical line. A trailing `//` comment
    // and trailing blanks are left as trivia for the next token.
    std::string lex_directive() {
        const auto start = pos_;
        Mark end = mark();
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '\n') break;
            if (c == '\\' && peek(1) == '\n') {
                advance(2);
                continue;
            }
            if (c == '/' && peek(1) == '/') break;
            if (c == '/' && peek(1) == '*') {
                const auto close = src_.find("*/", pos_ + 2);
                advance(close == std::string_view::npos ? src_.size() - pos_ : close + 2 - pos_);
                end = mark();
                continue;
            }
            if (c == '"' || c == '\'') {
                skip_quoted(c);
                end = mark();
                continue;
            }
            advance(1);
            if (c != ' ' && c != '\t' && c != '\r') end = mark();
        }
        // Trailing blanks (and a dangling continuation) become trivia.
        std::string text(src_.substr(start, end.pos - start));
        pos_ = end.pos;
        line_ = end.line;
        col_ = end.col;
        return text;
    }

    struct Mark {
        std::size_t pos;
        int line;
        int col;
    };
    Mark mark() const { return {pos_, line_, col_}; }

    void skip_quoted(char quote) {
        advance(1);
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '\\' && pos_ + 1 < src_.size()) {
                advance(2);
                continue;
            }
            if (c == '\n') return;  // unterminated: stop at end of line
            advance(1);
            if (c == quote) return;
        }
    }

    void lex_token(Token& tok) {
        const auto start = pos_;
        const auto c = static_cast<unsigned char>(src_[pos_]);
        if (is_ident_start(c)) {
            while (pos_ < src_.size() && is_ident_char(static_cast<unsigned char>(src_[pos_]))) advance(1);
            std::string_view word = src_.substr(start, pos_ - start);
            const char q = pos_ < src_.size() ? src_[pos_] : '\0';
            if ((q == '"' || q == '\'') && (word == "L" || word == "u" || word == "U" || word == "u8")) {
                skip_quoted(q);
                tok.kind = TokenKind::literal;
            } else {
                tok.kind = is_keyword(word) ? TokenKind::keyword : TokenKind::identifier;
            }
        } else if (is_digit(c) || (c == '.' && is_digit(static_cast<unsigned char>(peek(1))))) {
            advance(1);
            while (pos_ < src_.size()) {
                const auto d = static_cast<unsigned char>(src_[pos_]);
                if ((d == '+' || d == '-') && pos_ > start) {
                    const char prev = src_[pos_ - 1];
                    if (prev == 'e' || prev == 'E' || prev == 'p' || prev == 'P') {
                        advance(1);
                        continue;
                    }
                    break;
                }
                if (is_ident_char(d) || d == '.' || d == '\'') {
                    advance(1);
                    continue;
                }
                break;
            }
            tok.kind = TokenKind::literal;
        } else if (c == '"' || c == '\'') {
            skip_quoted(static_cast<char>(c));
            tok.kind = TokenKind::literal;
        } else {
            static constexpr std::array<std::string_view, 24> kPunct = {
                ">>=", "<<=", "...", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=",
                "&&", "||", "*=", "/=", "%=", "+=", "-=", "&=", "^=", "|=", "##", "::"};
            std::size_t len = 1;
            for (auto p : kPunct) {
                if (src_.substr(pos_, p.size()) == p) {
                    len = p.size();
                    break;
                }
            }
            advance(len);
            tok.kind = TokenKind::punctuation;
        }
        tok.text = std::string(src_.substr(start, pos_ - start));
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

} // namespace detail

/// Lex without validating the encoding. Never throws; used on untrusted
/// model output.
inline TokenStream tokenize_lenient(std::string_view text) { return detail::Lexer(text).run(); }

/// Lex C source. Comments and whitespace become `leading` trivia; each
/// preprocessor line is a single token.
inline TokenStream tokenize(std::string_view text) {
    if (const auto bad = detail::find_invalid_utf8(text); bad != std::string_view::npos) {
        throw EncodingError(bad, "invalid UTF-8 at byte " + std::to_string(bad));
    }
    return tokenize_lenient(text);
}

inline std::size_t token_count(std::string_view text) { return tokenize(text).size(); }

inline std::vector<std::string> token_texts(const TokenStream& ts) {
    std::vector<std::string> out;
    out.reserve(ts.size());
    for (const auto& t : ts) out.push_back(t.text);
    return out;
}

} // namespace mpiassist
