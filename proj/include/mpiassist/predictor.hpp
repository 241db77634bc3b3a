#pragma once

#include <algorithm>
#include <filesystem>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mpiassist/cst.hpp"
#include "mpiassist/util.hpp"

namespace mpiassist {

struct PredictionRecord {
    std::string id;
    std::string predicted_code;

    friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

namespace detail {

struct TextEdit {
    std::size_t offset;
    std::string text;
};

inline std::string apply_edits(std::string_view text, std::vector<TextEdit> edits) {
    std::stable_sort(edits.begin(), edits.end(), [](const TextEdit& a, const TextEdit& b) { return a.offset < b.offset; });
    std::string out;
    std::size_t at = 0;
    for (const auto& e : edits) {
        out.append(text.substr(at, e.offset - at));
        out += e.text;
        at = e.offset;
    }
    out.append(text.substr(at));
    return out;
}

inline std::vector<std::string> parameter_names(const AstNode& fn) {
    std::vector<std::string> names;
    for (const auto& child : fn.children) {
        if (child.kind != NodeKind::parameter_list) continue;
        for (const auto& param : child.children) {
            std::string name;
            for (const auto& part : param.children) {
                if (part.kind == NodeKind::identifier) name = part.leaf_text;
            }
            if (!name.empty()) names.push_back(name);
        }
        break;
    }
    return names;
}

inline void collect_returns(const AstNode& node, const AstNode* parent, std::vector<std::pair<const AstNode*, const AstNode*>>& out) {
    if (node.kind == NodeKind::return_statement) out.emplace_back(&node, parent);
    for (const auto& child : node.children) collect_returns(child, &node, out);
}

} // namespace detail

/// Heuristic predictor: MPI setup at the top of main, MPI_Finalize before
/// every return in main and at its end when control can fall off it.
inline std::string baseline_predict(std::string_view input_code) {
    const std::string text = standardize(input_code);
    const SyntaxTree tree = parse(text);
    const AstNode* main_fn = find_function(tree.root, "main");
    if (!main_fn) throw NoMainError();
    const AstNode& body = main_fn->children.back();
    const auto& tokens = tree.tokens;

    const auto params = detail::parameter_names(*main_fn);
    const std::string init_args = params.size() >= 2 ? "&" + params[0] + ", &" + params[1] : "NULL, NULL";
    std::vector<detail::TextEdit> edits;
    edits.push_back({tokens[body.first_token].offset + 1,
                     "\nint mpi_rank;\nint mpi_size;\nMPI_Init(" + init_args +
                         ");\nMPI_Comm_rank(MPI_COMM_WORLD, &mpi_rank);\nMPI_Comm_size(MPI_COMM_WORLD, &mpi_size);\n"});

    std::vector<std::pair<const AstNode*, const AstNode*>> returns;
    for (const auto& child : body.children) detail::collect_returns(child, &body, returns);
    for (const auto& [ret, parent] : returns) {
        const bool in_block = parent->kind == NodeKind::compound_statement || parent->kind == NodeKind::labeled_statement;
        if (in_block) {
            edits.push_back({ret->span.start_byte, "MPI_Finalize();\n"});
        } else {
            edits.push_back({ret->span.start_byte, "{\nMPI_Finalize();\n"});
            edits.push_back({ret->span.end_byte, "\n}"});
        }
    }
    if (body.children.empty() || body.children.back().kind != NodeKind::return_statement) {
        edits.push_back({tokens[body.last_token - 1].offset, "MPI_Finalize();\n"});
    }
    return standardize(detail::apply_edits(text, std::move(edits)));
}

// ------------------------------------------------------------- exchange file

inline std::string predictions_to_jsonl(const std::vector<PredictionRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += nlohmann::ordered_json{{"id", r.id}, {"predicted_code", r.predicted_code}}.dump();
        out += '\n';
    }
    return out;
}

/// Parses a predictions file. Unknown fields are ignored; a missing or
/// empty id or predicted_code is a FormatError naming the line.
inline std::vector<PredictionRecord> predictions_from_jsonl(std::string_view text) {
    std::vector<PredictionRecord> out;
    std::unordered_set<std::string> ids;
    std::size_t line_no = 0;
    for (const auto& line : split_lines(text)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(line_no, e.what());
        }
        if (!j.is_object()) throw FormatError(line_no, "expected a JSON object");
        for (const char* key : {"id", "predicted_code"}) {
            if (!j.contains(key) || !j[key].is_string() || j[key].get_ref<const std::string&>().empty()) {
                throw FormatError(line_no, std::string("missing or empty field ") + key);
            }
        }
        PredictionRecord r{j["id"].get<std::string>(), j["predicted_code"].get<std::string>()};
        if (!ids.insert(r.id).second) throw DuplicateIdError(r.id, line_no);
        out.push_back(std::move(r));
    }
    return out;
}

inline std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path) {
    return predictions_from_jsonl(read_file(path));
}

inline void write_predictions(const std::filesystem::path& path, const std::vector<PredictionRecord>& records) {
    write_file(path, predictions_to_jsonl(records));
}

} // namespace mpiassist
