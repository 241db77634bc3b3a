#pragma once

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mpiassist/bench.hpp"
#include "mpiassist/corpus.hpp"
#include "mpiassist/eval.hpp"
#include "mpiassist/github.hpp"
#include "mpiassist/linearizer.hpp"
#include "mpiassist/mpiedit.hpp"
#include "mpiassist/predictor.hpp"
#include "mpiassist/stats.hpp"
#include "mpiassist/util.hpp"

namespace mpiassist {

namespace detail {

class UsageError : public Error {
public:
    using Error::Error;
};

inline std::array<double, 3> parse_ratios(const std::string& text) {
    std::array<double, 3> r{};
    std::stringstream ss(text);
    std::string part;
    std::size_t i = 0;
    while (std::getline(ss, part, ',')) {
        if (i >= 3) throw UsageError("--ratios takes three comma-separated numbers");
        try {
            r[i++] = std::stod(part);
        } catch (const std::exception&) {
            throw UsageError("--ratios: not a number: " + part);
        }
    }
    if (i != 3 || r[0] < 0 || r[1] < 0 || r[2] < 0 || r[0] + r[1] + r[2] <= 0) {
        throw UsageError("--ratios takes three non-negative numbers with a positive sum");
    }
    return r;
}

/// Writes `data` to `path` under its lock file, or to `out` when path is empty.
inline void emit(const std::string& path, const std::string& data, std::ostream& out) {
    if (path.empty()) {
        out << data;
        return;
    }
    LockFile lock(path);
    write_file(path, data);
}

inline std::vector<std::string> label_texts(const Dataset& ds) {
    std::vector<std::string> texts;
    for (const auto& ex : ds.examples) texts.push_back(ex.label_code);
    return texts;
}

} // namespace detail

/// Runs the command line; returns 0 on success, 1 on operational errors
/// and 2 on usage errors.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Corpus construction and evaluation for MPI code generation", "mpiassist"};
    app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();
    bool pretty = false;
    app.add_flag("--pretty", pretty, "Print human-readable tables to stdout");
    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker threads (0: all cores)");

    std::function<void()> action;

    // repos
    auto* repos = app.add_subcommand("repos", "List repositories mentioning a phrase");
    std::string query = "MPI";
    std::string base_url = RepoSearchOptions{}.base_url;
    int max_results = 1000;
    std::string repos_out;
    repos->add_option("--query", query, "Search phrase")->capture_default_str();
    repos->add_option("--base-url", base_url, "API base URL")->capture_default_str();
    repos->add_option("--max-results", max_results, "Result cap")->capture_default_str();
    repos->add_option("--out", repos_out, "Output JSON file (default stdout)");
    repos->callback([&] {
        action = [&] {
            const char* token = std::getenv("MPIASSIST_GH_TOKEN");
            RepoSearchOptions opt;
            opt.base_url = base_url;
            opt.max_results = max_results;
            const auto urls = fetch_repo_list(query, token ? token : "", opt);
            nlohmann::ordered_json j = nlohmann::ordered_json::array();
            for (const auto& u : urls) j.push_back({{"url", u}, {"clone_command", "git clone --depth 1 " + u}});
            detail::emit(repos_out, j.dump(2) + "\n", out);
        };
    });

    // scan
    auto* scan_cmd = app.add_subcommand("scan", "Parse every C file under a directory");
    std::string root;
    std::string scan_out;
    scan_cmd->add_option("--root", root, "Directory to scan")->required()->check(CLI::ExistingDirectory);
    scan_cmd->add_option("--out", scan_out, "Output JSON Lines file (default stdout)");
    scan_cmd->callback([&] {
        action = [&] {
            std::string lines;
            for (const auto& u : scan(root, threads, &err)) {
                nlohmann::ordered_json j{{"path", u.path}, {"parse_ok", u.parse_ok}};
                if (u.parse_ok) j["tokens"] = u.tree->tokens.size();
                else j["error"] = u.error;
                lines += j.dump() + "\n";
            }
            detail::emit(scan_out, lines, out);
        };
    });

    // build
    auto* build = app.add_subcommand("build", "Build the dataset and its manifest");
    std::string build_out;
    CorpusConfig config;
    std::string ratios = "0.8,0.1,0.1";
    build->add_option("--root", root, "Directory of mined sources")->required()->check(CLI::ExistingDirectory);
    build->add_option("--out", build_out, "Output directory")->required();
    build->add_option("--token-limit", config.token_limit, "Maximum tokens per file")->capture_default_str();
    build->add_option("--seed", config.seed, "Split seed")->capture_default_str();
    build->add_option("--ratios", ratios, "train,valid,test ratios")->capture_default_str();
    build->callback([&] {
        action = [&] {
            config.ratios = detail::parse_ratios(ratios);
            config.threads = threads;
            const auto ds = build_dataset(scan(root, threads, &err), config);
            const std::filesystem::path dir(build_out);
            LockFile lock(dir / "dataset.jsonl");
            write_dataset(dir / "dataset.jsonl", ds.examples);
            write_file(dir / "manifest.json", to_json(ds.manifest).dump(2) + "\n");
            if (pretty) {
                out << "scanned " << ds.manifest.scanned << ", included " << ds.manifest.included << "\n";
                for (const auto& [reason, n] : ds.manifest.excluded) out << "  " << reason << ": " << n << "\n";
                for (const auto& [split, n] : ds.manifest.splits) out << split << ": " << n << "\n";
            }
        };
    });

    // stats
    auto* stats = app.add_subcommand("stats", "Corpus statistics of the admitted files");
    std::string stats_out;
    stats->add_option("--root", root, "Directory of mined sources")->required()->check(CLI::ExistingDirectory);
    stats->add_option("--out", stats_out, "Output directory")->required();
    stats->add_option("--token-limit", config.token_limit, "Maximum tokens per file")->capture_default_str();
    stats->callback([&] {
        action = [&] {
            config.threads = threads;
            const auto ds = build_dataset(scan(root, threads, &err), config);
            const auto s = compute_stats(detail::label_texts(ds));
            const std::filesystem::path dir(stats_out);
            LockFile lock(dir / "function_counts.csv");
            write_file(dir / "function_counts.csv", function_counts_csv(s));
            write_file(dir / "lengths.csv", lengths_csv(s));
            write_file(dir / "init_finalize_ratio.dat", ratio_dat(s));
            if (pretty) out << function_counts_csv(s) << lengths_csv(s) << ratio_dat(s);
        };
    });

    // prune
    auto* prune_cmd = app.add_subcommand("prune", "Remove the MPI calls from one file");
    std::string file;
    std::string prune_out;
    prune_cmd->add_option("file", file, "C source file")->required()->check(CLI::ExistingFile);
    prune_cmd->add_option("--out", prune_out, "Output JSON file (default stdout)");
    prune_cmd->callback([&] {
        action = [&] {
            const auto r = prune(read_file(file));
            if (pretty) {
                out << r.pruned_text;
                for (const auto& c : r.removed) err << c.name << " line " << c.line << "\n";
                return;
            }
            nlohmann::ordered_json calls = nlohmann::ordered_json::array();
            for (const auto& c : r.removed) calls.push_back({{"name", c.name}, {"line", c.line}});
            nlohmann::ordered_json j{{"label_code", r.label_text}, {"pruned_code", r.pruned_text}, {"calls", calls}};
            detail::emit(prune_out, j.dump(2) + "\n", out);
        };
    });

    // xsbt
    auto* xsbt_cmd = app.add_subcommand("xsbt", "Print the linearized syntax tree of one file");
    bool use_sbt = false;
    xsbt_cmd->add_option("file", file, "C source file")->required()->check(CLI::ExistingFile);
    xsbt_cmd->add_flag("--sbt", use_sbt, "Full structure-based traversal instead");
    xsbt_cmd->callback([&] {
        action = [&] {
            const auto tree = parse(read_file(file));
            out << join_tokens(use_sbt ? sbt(tree.root) : xsbt(tree.root)) << "\n";
        };
    });

    // baseline
    auto* baseline = app.add_subcommand("baseline", "Heuristic predictions for a dataset");
    std::string dataset_path;
    std::string split = "test";
    std::string baseline_out;
    baseline->add_option("--dataset", dataset_path, "Dataset JSON Lines file")->required()->check(CLI::ExistingFile);
    baseline->add_option("--split", split, "Split to predict, or all")
        ->check(CLI::IsMember({"train", "valid", "test", "all"}))
        ->capture_default_str();
    baseline->add_option("--out", baseline_out, "Predictions file (default stdout)");
    baseline->callback([&] {
        action = [&] {
            std::vector<DatasetExample> selected;
            for (auto& ex : read_dataset(dataset_path)) {
                if (split == "all" || ex.split == split) selected.push_back(std::move(ex));
            }
            auto records = parallel_map(
                selected,
                [](const DatasetExample& ex) {
                    try {
                        return PredictionRecord{ex.id, baseline_predict(ex.input_code)};
                    } catch (const Error&) {
                        return PredictionRecord{ex.id, ex.input_code};
                    }
                },
                threads);
            detail::emit(baseline_out, predictions_to_jsonl(records), out);
        };
    });

    // evaluate
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Score predictions against a dataset");
    std::string predictions_path;
    int tolerance = 1;
    std::string eval_out;
    std::string details_out;
    evaluate_cmd->add_option("--dataset", dataset_path, "Dataset JSON Lines file")->required()->check(CLI::ExistingFile);
    evaluate_cmd->add_option("--predictions", predictions_path, "Predictions JSON Lines file")
        ->required()
        ->check(CLI::ExistingFile);
    evaluate_cmd->add_option("--tolerance", tolerance, "Line tolerance")->check(CLI::NonNegativeNumber)->capture_default_str();
    evaluate_cmd->add_option("--split", split, "Split to score, or all")
        ->check(CLI::IsMember({"train", "valid", "test", "all"}))
        ->capture_default_str();
    evaluate_cmd->add_option("--out", eval_out, "Report JSON file (default stdout)");
    evaluate_cmd->add_option("--details", details_out, "Per-example JSON Lines file");
    evaluate_cmd->callback([&] {
        action = [&] {
            const auto ev = evaluate(read_dataset(dataset_path), read_predictions(predictions_path), tolerance, split, threads);
            if (!details_out.empty()) {
                LockFile lock(details_out);
                write_file(details_out, details_to_jsonl(ev.details));
            }
            if (pretty) out << metrics_table(ev.report);
            if (!eval_out.empty() || !pretty) detail::emit(eval_out, to_json(ev.report).dump(2) + "\n", out);
        };
    });

    // bench
    auto* bench = app.add_subcommand("bench", "Score a predictor on the numerical benchmark");
    std::string predictor = "baseline";
    std::string mpicc_path = "mpicc";
    std::string mpirun_path = "mpirun";
    int nranks = 4;
    bool skip_execution = false;
    std::string bench_out;
    bench->add_option("--predictor", predictor,
                      "oracle, empty, baseline, or a command run as CMD in.jsonl out.jsonl")
        ->capture_default_str();
    bench->add_option("--tolerance", tolerance, "Line tolerance")->check(CLI::NonNegativeNumber)->capture_default_str();
    bench->add_option("--mpicc-path", mpicc_path, "MPI compiler wrapper")->capture_default_str();
    bench->add_option("--mpirun-path", mpirun_path, "MPI launcher")->capture_default_str();
    bench->add_option("--nranks", nranks, "Processes per run")->check(CLI::PositiveNumber)->capture_default_str();
    unsigned jobs = 0;
    bench->add_option("--jobs", jobs, "Programs compiled and run at once (0: all)")->capture_default_str();
    bench->add_flag("--skip-execution", skip_execution, "Score only; do not compile and run predictions");
    bench->add_option("--out", bench_out, "Report CSV file (default stdout)");
    bench->callback([&] {
        action = [&] {
            BenchPredictor fn;
            if (predictor == "oracle") fn = oracle_predict;
            else if (predictor == "empty") fn = empty_predict;
            else if (predictor == "baseline") fn = [](const DatasetExample& ex) { return baseline_predict(ex.input_code); };
            else fn = external_predictor(predictor);
            BenchOptions opt;
            opt.tolerance = tolerance;
            opt.execute = !skip_execution;
            opt.nranks = nranks;
            opt.jobs = jobs;
            opt.toolchain = Toolchain::detect(mpicc_path, mpirun_path);
            if (opt.execute && !opt.toolchain.available()) {
                err << "notice: no MPI toolchain found (" << mpicc_path << ", " << mpirun_path
                    << "); skipping execution\n";
            }
            const auto report = run_benchmark(fn, opt);
            if (pretty) out << bench_table(report);
            if (!bench_out.empty() || !pretty) detail::emit(bench_out, bench_csv(report), out);
        };
    });

    // check
    auto* check = app.add_subcommand("check", "Validate a dataset or predictions file");
    std::string check_dataset_path;
    std::string check_predictions_path;
    check->add_option("--dataset", check_dataset_path, "Dataset JSON Lines file")->check(CLI::ExistingFile);
    check->add_option("--predictions", check_predictions_path, "Predictions JSON Lines file")->check(CLI::ExistingFile);
    check->add_option("--token-limit", config.token_limit, "Maximum tokens per file")->capture_default_str();
    check->callback([&] {
        action = [&] {
            if (check_dataset_path.empty() && check_predictions_path.empty()) {
                throw detail::UsageError("check needs --dataset or --predictions");
            }
            std::size_t problems = 0;
            if (!check_dataset_path.empty()) {
                const auto examples = read_dataset(check_dataset_path);
                const auto issues = check_dataset(examples, config.token_limit);
                for (const auto& issue : issues) err << issue << "\n";
                problems += issues.size();
                out << check_dataset_path << ": " << examples.size() << " examples, " << issues.size() << " problems\n";
            }
            if (!check_predictions_path.empty()) {
                const auto records = read_predictions(check_predictions_path);
                out << check_predictions_path << ": " << records.size() << " predictions\n";
            }
            if (problems > 0) throw Error(std::to_string(problems) + " problems found");
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "mpiassist: " << e.what() << "\n\n" << app.help();
        return 2;
    }
    try {
        action();
    } catch (const detail::UsageError& e) {
        err << "mpiassist: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "mpiassist: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace mpiassist
