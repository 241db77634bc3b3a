#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "mpiassist/cst.hpp"
#include "mpiassist/linearizer.hpp"
#include "mpiassist/mpiedit.hpp"
#include "mpiassist/util.hpp"

namespace mpiassist {

using json = nlohmann::ordered_json;

enum class ExclusionReason {
    none,
    parse_failure,
    no_main,
    over_token_limit,
    no_mpi_calls,
    embedded_mpi_call,
    duplicate,
};

inline constexpr std::array<ExclusionReason, 6> kExclusionReasons = {
    ExclusionReason::parse_failure,    ExclusionReason::no_main,           ExclusionReason::over_token_limit,
    ExclusionReason::no_mpi_calls,     ExclusionReason::embedded_mpi_call, ExclusionReason::duplicate};

inline const char* to_string(ExclusionReason r) {
    switch (r) {
    case ExclusionReason::none: return "";
    case ExclusionReason::parse_failure: return "parse_failure";
    case ExclusionReason::no_main: return "no_main";
    case ExclusionReason::over_token_limit: return "over_token_limit";
    case ExclusionReason::no_mpi_calls: return "no_mpi_calls";
    case ExclusionReason::embedded_mpi_call: return "embedded_mpi_call";
    case ExclusionReason::duplicate: return "duplicate";
    }
    return "";
}

struct InclusionReport {
    std::string path;
    bool included = false;
    ExclusionReason reason = ExclusionReason::none;
    std::string detail;

    const char* verdict() const { return included ? "included" : "excluded"; }
};

struct CorpusConfig {
    std::size_t token_limit = 320;
    std::uint64_t seed = 0;
    std::array<double, 3> ratios{0.8, 0.1, 0.1};  // train, valid, test
    unsigned threads = 0;                         // 0: hardware concurrency
};

struct GoldCall {
    std::string name;
    int line = 0;

    friend bool operator==(const GoldCall&, const GoldCall&) = default;
};

struct DatasetExample {
    std::string id;
    std::string input_code;
    std::string input_xsbt;
    std::string label_code;
    std::vector<GoldCall> gold_calls;
    std::string split;
};

// ---------------------------------------------------------------- scanning

inline bool has_c_extension(const std::filesystem::path& p) {
    const std::string ext = p.extension().string();
    return ext.size() == 2 && ext[0] == '.' && (ext[1] == 'c' || ext[1] == 'C');
}

/// Root-relative paths of all `.c` files under `root`, in lexicographic
/// order. Unreadable directory entries are reported to `log` and skipped.
inline std::vector<std::string> scan_paths(const std::filesystem::path& root, std::ostream* log = &std::cerr) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(root, ec)) throw IoError("not a directory: " + root.string());
    std::vector<std::string> out;
    fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
    if (ec) throw IoError("cannot read " + root.string() + ": " + ec.message());
    for (const fs::recursive_directory_iterator end; it != end; it.increment(ec)) {
        if (ec) {
            if (log) *log << "warning: " << ec.message() << "\n";
            ec.clear();
            continue;
        }
        std::error_code fec;
        if (!it->is_regular_file(fec) || !has_c_extension(it->path())) continue;
        out.push_back(fs::relative(it->path(), root, fec).generic_string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Reads and parses every `.c` file under `root`. Files that cannot be read
/// are logged and skipped.
inline std::vector<SourceUnit> scan(const std::filesystem::path& root, unsigned threads = 0,
                                    std::ostream* log = &std::cerr) {
    const auto paths = scan_paths(root, log);
    auto loaded = parallel_map(
        paths,
        [&](const std::string& rel) -> std::optional<SourceUnit> {
            try {
                return load_unit(rel, read_file(root / rel));
            } catch (const IoError&) {
                return std::nullopt;
            }
        },
        threads);
    std::vector<SourceUnit> units;
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        if (loaded[i]) units.push_back(std::move(*loaded[i]));
        else if (log) *log << "warning: cannot read " << paths[i] << ", skipped\n";
    }
    return units;
}

// --------------------------------------------------------------- screening

struct Screened {
    InclusionReport report;
    std::string hash;  // SHA-256 of the standardized text
    PruneResult pruned;
};

/// Every admission check except deduplication.
inline Screened screen(const SourceUnit& unit, const CorpusConfig& config) {
    Screened s;
    s.report.path = unit.path;
    auto exclude = [&](ExclusionReason r, std::string detail = {}) {
        s.report.reason = r;
        s.report.detail = std::move(detail);
        return s;
    };
    if (!unit.parse_ok) return exclude(ExclusionReason::parse_failure, unit.error);
    try {
        if (!find_function(unit.tree->root, "main")) return exclude(ExclusionReason::no_main);
        const std::size_t tokens = unit.tree->tokens.size();
        if (tokens > config.token_limit) {
            return exclude(ExclusionReason::over_token_limit, std::to_string(tokens) + " tokens");
        }
        const std::string label = render(*unit.tree);
        if (extract_calls_lexical(label).empty()) return exclude(ExclusionReason::no_mpi_calls);
        try {
            s.pruned = prune(label);
        } catch (const EmbeddedCallError& e) {
            return exclude(ExclusionReason::embedded_mpi_call, e.what());
        }
        s.hash = sha256_hex(s.pruned.label_text);
        s.report.included = true;
    } catch (const Error& e) {
        return exclude(ExclusionReason::parse_failure, e.what());
    }
    return s;
}

/// Full admission including deduplication against `seen`.
inline Screened admit(const SourceUnit& unit, const CorpusConfig& config, std::unordered_set<std::string>& seen) {
    Screened s = screen(unit, config);
    if (s.report.included && !seen.insert(s.hash).second) {
        s.report.included = false;
        s.report.reason = ExclusionReason::duplicate;
    }
    return s;
}

// ---------------------------------------------------------------- splitting

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Split from the id alone, so adding files never moves existing examples.
inline std::string assign_split(std::string_view id, std::uint64_t seed, const std::array<double, 3>& ratios) {
    std::uint64_t h = 0;
    for (std::size_t i = 0; i < 16 && i < id.size(); ++i) {
        const char c = id[i];
        const unsigned v = (c >= '0' && c <= '9') ? static_cast<unsigned>(c - '0')
                                                  : static_cast<unsigned>((c | 0x20) - 'a' + 10) & 0xF;
        h = (h << 4) | v;
    }
    const double u = static_cast<double>(splitmix64(h ^ seed) >> 11) * 0x1.0p-53;
    const double total = ratios[0] + ratios[1] + ratios[2];
    if (u < ratios[0] / total) return "train";
    if (u < (ratios[0] + ratios[1]) / total) return "valid";
    return "test";
}

// ------------------------------------------------------------------ building

struct CorpusManifest {
    CorpusConfig config;
    std::size_t scanned = 0;
    std::size_t included = 0;
    std::map<std::string, std::size_t> excluded;  // reason -> count
    std::map<std::string, std::size_t> splits;    // split -> count
    std::vector<InclusionReport> reports;
};

struct Dataset {
    std::vector<DatasetExample> examples;
    CorpusManifest manifest;
};

inline DatasetExample make_example(const Screened& s, const CorpusConfig& config) {
    DatasetExample ex;
    ex.id = s.hash.substr(0, 16);
    ex.input_code = s.pruned.pruned_text;
    ex.input_xsbt = join_tokens(xsbt(parse(ex.input_code).root));
    ex.label_code = s.pruned.label_text;
    for (const auto& c : s.pruned.removed) ex.gold_calls.push_back({c.name, c.line});
    ex.split = assign_split(ex.id, config.seed, config.ratios);
    return ex;
}

/// Screens units in parallel, then deduplicates and splits in input order.
inline Dataset build_dataset(const std::vector<SourceUnit>& units, const CorpusConfig& config) {
    auto screened = parallel_map(units, [&](const SourceUnit& u) { return screen(u, config); }, config.threads);
    Dataset ds;
    ds.manifest.config = config;
    ds.manifest.scanned = units.size();
    for (auto r : kExclusionReasons) ds.manifest.excluded[to_string(r)] = 0;
    for (const char* split : {"train", "valid", "test"}) ds.manifest.splits[split] = 0;
    std::unordered_set<std::string> seen;
    for (auto& s : screened) {
        if (s.report.included && !seen.insert(s.hash).second) {
            s.report.included = false;
            s.report.reason = ExclusionReason::duplicate;
        }
        if (s.report.included) {
            ds.examples.push_back(make_example(s, config));
            ++ds.manifest.included;
            ++ds.manifest.splits[ds.examples.back().split];
        } else {
            ++ds.manifest.excluded[to_string(s.report.reason)];
        }
        ds.manifest.reports.push_back(std::move(s.report));
    }
    return ds;
}

// ----------------------------------------------------------------- file I/O

inline json to_json(const DatasetExample& ex) {
    json calls = json::array();
    for (const auto& c : ex.gold_calls) calls.push_back({{"name", c.name}, {"line", c.line}});
    return json{{"id", ex.id},
                {"input_code", ex.input_code},
                {"input_xsbt", ex.input_xsbt},
                {"label_code", ex.label_code},
                {"gold_calls", std::move(calls)},
                {"split", ex.split}};
}

inline std::string dataset_to_jsonl(const std::vector<DatasetExample>& examples) {
    std::string out;
    for (const auto& ex : examples) {
        out += to_json(ex).dump();
        out += '\n';
    }
    return out;
}

inline DatasetExample example_from_json(const json& j, std::size_t line_no) {
    auto str = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_string()) throw FormatError(line_no, std::string("missing field ") + key);
        return j[key].get<std::string>();
    };
    DatasetExample ex;
    ex.id = str("id");
    if (ex.id.empty()) throw FormatError(line_no, "empty id");
    ex.input_code = str("input_code");
    ex.input_xsbt = str("input_xsbt");
    ex.label_code = str("label_code");
    ex.split = str("split");
    if (!j.contains("gold_calls") || !j["gold_calls"].is_array()) throw FormatError(line_no, "missing field gold_calls");
    for (const auto& c : j["gold_calls"]) {
        if (!c.is_object() || !c.contains("name") || !c["name"].is_string() || !c.contains("line") ||
            !c["line"].is_number_integer()) {
            throw FormatError(line_no, "malformed gold call");
        }
        ex.gold_calls.push_back({c["name"].get<std::string>(), c["line"].get<int>()});
    }
    return ex;
}

inline std::vector<DatasetExample> dataset_from_jsonl(std::string_view text) {
    std::vector<DatasetExample> out;
    std::unordered_set<std::string> ids;
    std::size_t line_no = 0;
    for (const auto& line : split_lines(text)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw FormatError(line_no, e.what());
        }
        if (!j.is_object()) throw FormatError(line_no, "expected a JSON object");
        out.push_back(example_from_json(j, line_no));
        if (!ids.insert(out.back().id).second) throw DuplicateIdError(out.back().id, line_no);
    }
    return out;
}

inline std::vector<DatasetExample> read_dataset(const std::filesystem::path& path) {
    return dataset_from_jsonl(read_file(path));
}

inline void write_dataset(const std::filesystem::path& path, const std::vector<DatasetExample>& examples) {
    write_file(path, dataset_to_jsonl(examples));
}

inline json to_json(const CorpusManifest& m) {
    json excluded = json::object();
    for (auto r : kExclusionReasons) excluded[to_string(r)] = m.excluded.count(to_string(r)) ? m.excluded.at(to_string(r)) : 0;
    json reports = json::array();
    for (const auto& r : m.reports) {
        json entry{{"path", r.path}, {"verdict", r.verdict()}};
        if (!r.included) entry["reason"] = to_string(r.reason);
        reports.push_back(std::move(entry));
    }
    return json{{"config",
                 {{"token_limit", m.config.token_limit},
                  {"seed", m.config.seed},
                  {"ratios", {m.config.ratios[0], m.config.ratios[1], m.config.ratios[2]}}}},
                {"counts", {{"scanned", m.scanned}, {"included", m.included}, {"excluded", std::move(excluded)}}},
                {"splits",
                 {{"train", m.splits.count("train") ? m.splits.at("train") : 0},
                  {"valid", m.splits.count("valid") ? m.splits.at("valid") : 0},
                  {"test", m.splits.count("test") ? m.splits.at("test") : 0}}},
                {"reports", std::move(reports)}};
}

// --------------------------------------------------------------- validation

/// Checks every example invariant; returns one message per violation.
inline std::vector<std::string> check_dataset(const std::vector<DatasetExample>& examples,
                                              std::size_t token_limit = 320) {
    std::vector<std::string> problems;
    std::unordered_set<std::string> ids;
    for (const auto& ex : examples) {
        auto fail = [&](const std::string& what) { problems.push_back(ex.id + ": " + what); };
        if (!ids.insert(ex.id).second) fail("duplicate id");
        if (ex.split != "train" && ex.split != "valid" && ex.split != "test") fail("unknown split " + ex.split);
        std::vector<GoldCall> found;
        for (const auto& c : extract_calls_lexical(ex.label_code)) found.push_back({c.name, c.line});
        if (found != ex.gold_calls) fail("gold_calls do not match the calls in label_code");
        if (!extract_calls_lexical(ex.input_code).empty()) fail("input_code still contains MPI calls");
        try {
            if (token_count(ex.label_code) > token_limit) fail("label_code exceeds the token limit");
            if (join_tokens(xsbt(parse(ex.input_code).root)) != ex.input_xsbt) fail("input_xsbt is stale");
        } catch (const Error& e) {
            fail(e.what());
        }
    }
    return problems;
}

} // namespace mpiassist
