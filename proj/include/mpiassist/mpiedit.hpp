#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "mpiassist/cst.hpp"
#include "mpiassist/util.hpp"

namespace mpiassist {

enum class CallContext { statement, embedded };

inline const char* to_string(CallContext c) { return c == CallContext::statement ? "statement" : "embedded"; }

struct MpiCall {
    std::string name;
    int line = 0;
    int col = 0;
    CallContext context = CallContext::statement;

    friend bool operator==(const MpiCall&, const MpiCall&) = default;
};

inline bool is_mpi_name(std::string_view name) { return name.size() > 4 && name.substr(0, 4) == "MPI_"; }

namespace detail {

inline void sort_calls(std::vector<MpiCall>& calls) {
    std::stable_sort(calls.begin(), calls.end(), [](const MpiCall& a, const MpiCall& b) {
        return a.line != b.line ? a.line < b.line : a.col < b.col;
    });
}

struct CallSite {
    MpiCall call;
    const AstNode* statement = nullptr;         // nearest statement ancestor
    const AstNode* statement_parent = nullptr;  // its parent
};

inline void collect_calls(const SyntaxTree& tree, const AstNode& node, std::vector<const AstNode*>& path,
                          std::vector<CallSite>& out) {
    if (node.kind == NodeKind::call_expression && !node.children.empty() &&
        node.children[0].kind == NodeKind::identifier && is_mpi_name(node.children[0].leaf_text)) {
        const Token& callee = tree.tokens[node.children[0].first_token];
        CallSite site;
        site.call = MpiCall{node.children[0].leaf_text, callee.line, callee.col, CallContext::embedded};
        for (std::size_t k = path.size(); k-- > 0;) {
            if (is_statement_kind(path[k]->kind)) {
                site.statement = path[k];
                site.statement_parent = k > 0 ? path[k - 1] : nullptr;
                break;
            }
        }
        if (site.statement && site.statement->kind == NodeKind::expression_statement &&
            site.statement->children.size() == 1 && &site.statement->children[0] == &node) {
            site.call.context = CallContext::statement;
        }
        out.push_back(std::move(site));
    }
    path.push_back(&node);
    for (const auto& child : node.children) collect_calls(tree, child, path, out);
    path.pop_back();
}

inline std::vector<CallSite> call_sites(const SyntaxTree& tree) {
    std::vector<CallSite> out;
    std::vector<const AstNode*> path;
    collect_calls(tree, tree.root, path, out);
    std::stable_sort(out.begin(), out.end(), [](const CallSite& a, const CallSite& b) {
        return a.call.line != b.call.line ? a.call.line < b.call.line : a.call.col < b.call.col;
    });
    return out;
}

// A statement that is the sole body of a control-flow construct or goto
// label cannot be deleted without capturing the following statement.
inline bool is_unbraced_body(const CallSite& site) {
    if (!site.statement_parent) return false;
    switch (site.statement_parent->kind) {
    case NodeKind::if_statement:
    case NodeKind::for_statement:
    case NodeKind::while_statement:
    case NodeKind::do_statement:
        return true;
    case NodeKind::labeled_statement: {
        const auto& first = site.statement_parent->children;
        return !first.empty() && first[0].kind == NodeKind::identifier &&
               site.statement_parent->first_token == first[0].first_token;
    }
    default:
        return false;
    }
}

} // namespace detail

/// Every call_expression whose callee starts with `MPI_`, ordered by position.
inline std::vector<MpiCall> find_mpi_calls(const SyntaxTree& tree) {
    std::vector<MpiCall> out;
    for (auto& site : detail::call_sites(tree)) out.push_back(std::move(site.call));
    return out;
}

/// Token-level scan for `MPI_x (` outside comments and strings. Works on
/// text that does not parse.
inline std::vector<MpiCall> extract_calls_lexical(std::string_view text) {
    const TokenStream ts = tokenize_lenient(text);
    std::vector<MpiCall> out;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        const Token& t = ts[i];
        if (t.kind != TokenKind::identifier || !is_mpi_name(t.text) || !ts[i + 1].is("(")) continue;
        const bool first_on_line = i == 0 || ts[i - 1].line < t.line;
        out.push_back({t.text, t.line, t.col, first_on_line ? CallContext::statement : CallContext::embedded});
    }
    return out;
}

struct RemovedLine {
    int line = 0;  // 1-based line in the label code
    std::string text;

    friend bool operator==(const RemovedLine&, const RemovedLine&) = default;
};

struct PruneResult {
    std::string label_text;   // standardized input
    std::string pruned_text;
    std::vector<MpiCall> removed;
    std::vector<RemovedLine> removed_lines;
};

/// Deletes every statement-level MPI call (whole line) from the standardized
/// form of `text`. Throws EmbeddedCallError when a call cannot be removed
/// cleanly, ParseError/EncodingError when the text does not parse.
inline PruneResult prune(std::string_view text) {
    PruneResult result;
    result.label_text = standardize(text);
    const SyntaxTree tree = parse(result.label_text);
    const auto sites = detail::call_sites(tree);
    std::vector<bool> drop;
    const auto lines = split_lines(result.label_text);
    drop.assign(lines.size() + 1, false);
    for (const auto& site : sites) {
        if (site.call.context == CallContext::embedded || detail::is_unbraced_body(site)) {
            throw EmbeddedCallError(site.call.name, site.call.line);
        }
        for (int l = site.statement->span.start_line; l <= site.statement->span.end_line; ++l) drop[l] = true;
        result.removed.push_back(site.call);
    }
    // Calls hidden inside unparsed regions would survive pruning.
    const auto lexical = extract_calls_lexical(result.label_text);
    if (lexical.size() != sites.size()) {
        for (const auto& c : lexical) {
            const bool known = std::any_of(sites.begin(), sites.end(), [&](const detail::CallSite& s) {
                return s.call.line == c.line && s.call.col == c.col;
            });
            if (!known) throw EmbeddedCallError(c.name, c.line);
        }
    }
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const int line_no = static_cast<int>(i) + 1;
        if (drop[line_no]) result.removed_lines.push_back({line_no, lines[i]});
        else kept.push_back(lines[i]);
    }
    result.pruned_text = result.removed.empty() ? result.label_text : standardize(join_lines(kept));
    return result;
}

/// Re-inserts removed lines at their recorded positions and re-standardizes.
inline std::string restore(std::string_view pruned_text, const std::vector<RemovedLine>& removed_lines) {
    auto lines = split_lines(pruned_text);
    auto sorted = removed_lines;
    std::sort(sorted.begin(), sorted.end(), [](const RemovedLine& a, const RemovedLine& b) { return a.line < b.line; });
    for (const auto& r : sorted) {
        const auto at = std::min<std::size_t>(static_cast<std::size_t>(r.line - 1), lines.size());
        lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(at), r.text);
    }
    return standardize(join_lines(lines));
}

} // namespace mpiassist
