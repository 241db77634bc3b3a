#pragma once

#include <optional>
#include <string>

#include "mpiassist/errors.hpp"
#include "mpiassist/lexer.hpp"
#include "mpiassist/render.hpp"
#include "mpiassist/syntax.hpp"

namespace mpiassist {

struct SourceUnit {
    std::string path;
    std::string text;
    bool parse_ok = false;
    std::optional<SyntaxTree> tree;
    std::string error;  // parse or encoding failure message

    const AstNode* ast() const { return tree ? &tree->root : nullptr; }
};

/// Parses `text`; failures are recorded rather than thrown.
inline SourceUnit load_unit(std::string path, std::string text) {
    SourceUnit unit{std::move(path), std::move(text), false, std::nullopt, {}};
    try {
        unit.tree = parse(unit.text);
        unit.parse_ok = true;
    } catch (const Error& e) {
        unit.error = e.what();
    }
    return unit;
}

} // namespace mpiassist
