#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mpiassist/syntax.hpp"

namespace mpiassist {

inline std::string node_label(const AstNode& node) {
    std::string label(to_string(node.kind));
    if (node.kind == NodeKind::identifier || node.kind == NodeKind::literal) {
        label += '_';
        label += node.leaf_text;
    }
    return label;
}

namespace detail {

inline void sbt_into(const AstNode& node, std::vector<std::string>& out) {
    std::string label = node_label(node);
    out.emplace_back("(");
    out.push_back(label);
    for (const auto& child : node.children) sbt_into(child, out);
    out.emplace_back(")");
    out.push_back(std::move(label));
}

inline bool xsbt_included(NodeKind k) {
    switch (k) {
    case NodeKind::identifier:
    case NodeKind::literal:
    case NodeKind::argument_list:
    case NodeKind::parameter_list:
    case NodeKind::preprocessor_directive:
    case NodeKind::other:
        return false;
    default:
        return true;
    }
}

inline void xsbt_into(const AstNode& node, std::vector<std::string>& out) {
    const std::string_view kind = to_string(node.kind);
    const std::size_t mark = out.size();
    out.push_back("<" + std::string(kind) + ">");
    for (const auto& child : node.children) {
        if (xsbt_included(child.kind)) xsbt_into(child, out);
    }
    if (out.size() == mark + 1) {
        out.back() = "<" + std::string(kind) + "/>";
    } else {
        out.push_back("</" + std::string(kind) + ">");
    }
}

} // namespace detail

/// Structure-based traversal: `( label children... ) label` per node.
inline std::vector<std::string> sbt(const AstNode& root) {
    std::vector<std::string> out;
    detail::sbt_into(root, out);
    return out;
}

/// XML-like traversal over statement and expression nodes only; lexical
/// leaves, argument/parameter lists, directives and `other` are dropped
/// together with their subtrees.
inline std::vector<std::string> xsbt(const AstNode& root) {
    std::vector<std::string> out;
    if (detail::xsbt_included(root.kind)) detail::xsbt_into(root, out);
    return out;
}

inline std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

} // namespace mpiassist
