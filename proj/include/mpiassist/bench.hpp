#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <optional>
#include <regex>
#include <string>
#include <tuple>
#include <vector>

#include "mpiassist/corpus.hpp"
#include "mpiassist/embedded_data.hpp"
#include "mpiassist/eval.hpp"
#include "mpiassist/predictor.hpp"
#include "mpiassist/util.hpp"

namespace mpiassist {

struct OutputSpec {
    std::vector<double> values;  // numbers expected in stdout, in order
    double tolerance = 1e-6;     // absolute
    bool sorted = false;         // additionally require a non-decreasing sequence
};

struct BenchProgram {
    std::string name;
    std::string label_code;   // standardized
    std::string serial_code;
    std::vector<GoldCall> gold_calls;
    DatasetExample example;   // id is the program name
    OutputSpec expected;
};

namespace detail {

inline OutputSpec expected_output(std::string_view name) {
    if (name == "array_average") return {{512.5}};
    if (name == "vector_dot_product") return {{715303424}};
    if (name == "min_max") return {{-50, 50}};
    if (name == "matrix_vector_multiplication") return {{448}};
    if (name == "sum_reduce_gather") return {{524800, 524800}};
    if (name == "merge_sort") {
        OutputSpec s;
        for (int i = 0; i < 16; ++i) s.values.push_back(i);
        s.sorted = true;
        return s;
    }
    if (name == "pi_monte_carlo") return {{std::numbers::pi}, 1e-2};
    if (name == "pi_riemann_sum") return {{std::numbers::pi}};
    if (name == "factorial") return {{20, 2432902008176640000.0}};
    if (name == "fibonacci") return {{2178308}};
    if (name == "trapezoidal_rule") return {{9.0}};
    throw Error("unknown benchmark program " + std::string(name));
}

inline std::vector<BenchProgram> load_bench_programs() {
    std::vector<BenchProgram> out;
    CorpusConfig config;
    for (const auto& src : embedded::bench_sources) {
        BenchProgram p;
        p.name = std::string(src.name);
        p.serial_code = std::string(src.serial);
        const Screened s = screen(load_unit(p.name + ".c", std::string(src.parallel)), config);
        if (!s.report.included) {
            throw Error("benchmark program " + p.name + " fails admission: " + std::string(to_string(s.report.reason)) + " " + s.report.detail);
        }
        p.example = make_example(s, config);
        p.example.id = p.name;
        p.example.split = "test";
        p.label_code = p.example.label_code;
        p.gold_calls = p.example.gold_calls;
        p.expected = expected_output(p.name);
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace detail

/// The eleven programs, in report order.
inline const std::vector<BenchProgram>& bench_programs() {
    static const std::vector<BenchProgram> programs = detail::load_bench_programs();
    return programs;
}

inline const BenchProgram* find_bench_program(std::string_view name) {
    for (const auto& p : bench_programs()) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

inline std::vector<double> extract_numbers(std::string_view text) {
    static const std::regex number(R"([-+]?\d+(\.\d+)?([eE][-+]?\d+)?)");
    std::vector<double> out;
    const std::string s(text);
    for (auto it = std::sregex_iterator(s.begin(), s.end(), number); it != std::sregex_iterator(); ++it) {
        out.push_back(std::stod(it->str()));
    }
    return out;
}

/// Empty string when `output` satisfies `spec`, otherwise the reason.
inline std::string check_output(const OutputSpec& spec, std::string_view output) {
    const auto got = extract_numbers(output);
    if (got.size() != spec.values.size()) {
        return "expected " + std::to_string(spec.values.size()) + " numbers, got " + std::to_string(got.size());
    }
    for (std::size_t i = 0; i < got.size(); ++i) {
        if (std::abs(got[i] - spec.values[i]) > spec.tolerance) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "value %zu: got %.10g, expected %.10g", i, got[i], spec.values[i]);
            return buf;
        }
    }
    if (spec.sorted && !std::is_sorted(got.begin(), got.end())) return "output not sorted";
    return {};
}

// ---------------------------------------------------------------- execution

struct Toolchain {
    std::string mpicc;
    std::string mpirun;
    int timeout_s = 60;

    bool available() const { return !mpicc.empty() && !mpirun.empty(); }

    /// Resolves explicit paths or searches PATH; unresolved entries stay empty.
    static Toolchain detect(const std::string& mpicc_path = "mpicc", const std::string& mpirun_path = "mpirun") {
        return {find_program(mpicc_path), find_program(mpirun_path)};
    }
};

inline std::vector<std::pair<std::string, std::string>> mpirun_environment() {
    return {{"OMPI_ALLOW_RUN_AS_ROOT", "1"}, {"OMPI_ALLOW_RUN_AS_ROOT_CONFIRM", "1"}, {"OMPI_MCA_btl_vader_single_copy_mechanism", "none"}};
}

class TempDir {
public:
    TempDir() {
        std::string templ = (std::filesystem::temp_directory_path() / "mpiassist-XXXXXX").string();
        if (!::mkdtemp(templ.data())) throw IoError("cannot create temporary directory");
        path_ = templ;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Compiles `program_text` with the MPI compiler wrapper and returns the
/// binary path inside `dir`.
inline std::filesystem::path compile_program(const Toolchain& tc, std::string_view program_text,
                                             const std::filesystem::path& dir) {
    const auto src = dir / "program.c";
    const auto bin = dir / "program";
    write_file(src, program_text);
    const auto r = run_process({tc.mpicc, "-O2", "-std=c11", "-o", bin.string(), src.string(), "-lm"}, tc.timeout_s);
    if (r.timed_out) throw TimeoutError(tc.timeout_s);
    if (r.exit_code != 0) throw CompileError(r.err + r.out);
    return bin;
}

inline std::string run_program(const Toolchain& tc, const std::filesystem::path& bin, int nranks) {
    const auto r = run_process(
        {tc.mpirun, "--oversubscribe", "-np", std::to_string(nranks), bin.string()}, tc.timeout_s, mpirun_environment());
    if (r.timed_out) throw TimeoutError(tc.timeout_s);
    if (r.exit_code != 0) throw RunError(r.exit_code, r.out + r.err);
    return r.out;
}

/// Builds and runs under the launcher with `nranks` processes; returns stdout.
inline std::string compile_and_run(const Toolchain& tc, std::string_view program_text, int nranks) {
    TempDir dir;
    return run_program(tc, compile_program(tc, program_text, dir.path()), nranks);
}

/// Serial twin: compiled with the same wrapper, run directly.
inline std::string compile_and_run_serial(const Toolchain& tc, std::string_view program_text) {
    TempDir dir;
    const auto bin = compile_program(tc, program_text, dir.path());
    const auto r = run_process({bin.string()}, tc.timeout_s);
    if (r.timed_out) throw TimeoutError(tc.timeout_s);
    if (r.exit_code != 0) throw RunError(r.exit_code, r.out + r.err);
    return r.out;
}

struct ValidityResult {
    std::string name;
    bool ok = false;
    std::string detail;
};

/// Each label compiles and prints its expected values for every rank
/// count; the serial twin prints the same.
inline std::vector<ValidityResult> validate_programs(const Toolchain& tc, const std::vector<int>& nranks = {1, 2, 4}) {
    std::vector<ValidityResult> out;
    for (const auto& p : bench_programs()) {
        ValidityResult v{p.name, true, {}};
        try {
            TempDir dir;
            const auto bin = compile_program(tc, p.label_code, dir.path());
            for (int n : nranks) {
                const std::string why = check_output(p.expected, run_program(tc, bin, n));
                if (!why.empty()) {
                    v.ok = false;
                    v.detail = "np " + std::to_string(n) + ": " + why;
                    break;
                }
            }
            if (v.ok) {
                const std::string why = check_output(p.expected, compile_and_run_serial(tc, p.serial_code));
                if (!why.empty()) {
                    v.ok = false;
                    v.detail = "serial: " + why;
                }
            }
        } catch (const Error& e) {
            v.ok = false;
            v.detail = e.what();
        }
        out.push_back(std::move(v));
    }
    return out;
}

// ---------------------------------------------------------------- harness

/// Maps a benchmark example (pruned input plus metadata) to predicted code.
using BenchPredictor = std::function<std::string(const DatasetExample&)>;

inline std::string oracle_predict(const DatasetExample& ex) { return ex.label_code; }
inline std::string empty_predict(const DatasetExample& ex) { return ex.input_code; }

/// Runs `command in.jsonl out.jsonl` through the shell, with in.jsonl
/// holding the single example in the dataset format and out.jsonl expected
/// to hold its prediction.
inline BenchPredictor external_predictor(std::string command, int timeout_s = 600) {
    return [command = std::move(command), timeout_s](const DatasetExample& ex) {
        TempDir dir;
        const auto in = dir.path() / "in.jsonl";
        const auto out = dir.path() / "out.jsonl";
        write_dataset(in, {ex});
        const auto r = run_process({"/bin/sh", "-c", command + " \"$0\" \"$1\"", in.string(), out.string()}, timeout_s);
        if (r.timed_out) throw TimeoutError(timeout_s);
        if (r.exit_code != 0) throw RunError(r.exit_code, r.out + r.err);
        for (const auto& rec : read_predictions(out)) {
            if (rec.id == ex.id) return rec.predicted_code;
        }
        throw MissingPredictionError(ex.id);
    };
}

struct BenchOptions {
    int tolerance = 1;
    bool execute = false;
    int nranks = 4;
    unsigned jobs = 0;
    Toolchain toolchain;
};

struct BenchRow {
    std::string name;
    Counts all;
    Counts core;
    Prf m;
    Prf mcc;
    std::string status = "ok";         // or predictor_error
    std::string execution = "not_run";  // pass, wrong_output, compile_error, run_error, timeout, skipped
    std::string detail;
    std::string predicted_code;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    Counts all;
    Counts core;
    Prf m;
    Prf mcc;
    double seconds = 0;
};

/// Prune, predict and score each program; predictor failures are recorded
/// per row (scored as an empty prediction) and never stop the suite.
/// Executions run concurrently, `jobs` at a time (0: all at once).
inline BenchReport run_benchmark(const BenchPredictor& predict, const BenchOptions& opt = {}) {
    const auto start = std::chrono::steady_clock::now();
    BenchReport report;
    const auto& programs = bench_programs();
    for (const auto& p : programs) {
        BenchRow row;
        row.name = p.name;
        try {
            row.predicted_code = predict(p.example);
        } catch (const std::exception& e) {
            row.status = "predictor_error";
            row.detail = e.what();
        }
        const auto ev = evaluate_items({{p.name, p.label_code, to_calls(p.gold_calls), row.predicted_code}}, opt.tolerance, 1);
        row.all = ev.details[0].all;
        row.core = ev.details[0].core;
        row.m = prf(row.all);
        row.mcc = prf(row.core);
        report.all += row.all;
        report.core += row.core;
        report.rows.push_back(std::move(row));
    }
    if (opt.execute) {
        std::vector<std::size_t> runnable;
        for (std::size_t i = 0; i < report.rows.size(); ++i) {
            if (report.rows[i].status != "ok") continue;
            if (opt.toolchain.available()) runnable.push_back(i);
            else report.rows[i].execution = "skipped";
        }
        const unsigned jobs = opt.jobs > 0 ? opt.jobs : static_cast<unsigned>(std::max<std::size_t>(runnable.size(), 1));
        const auto outcomes = parallel_map(
            runnable,
            [&](std::size_t i) -> std::pair<std::string, std::string> {
                try {
                    const std::string why = check_output(
                        programs[i].expected, compile_and_run(opt.toolchain, report.rows[i].predicted_code, opt.nranks));
                    return {why.empty() ? "pass" : "wrong_output", why};
                } catch (const CompileError& e) {
                    return {"compile_error", e.diagnostics()};
                } catch (const RunError& e) {
                    return {"run_error", e.what()};
                } catch (const TimeoutError& e) {
                    return {"timeout", e.what()};
                } catch (const std::exception& e) {
                    return {"run_error", e.what()};
                }
            },
            jobs);
        for (std::size_t k = 0; k < runnable.size(); ++k) {
            auto& row = report.rows[runnable[k]];
            std::tie(row.execution, row.detail) = outcomes[k];
        }
    }
    report.m = prf(report.all);
    report.mcc = prf(report.core);
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

/// CSV with one row per program and a micro-averaged Total row.
inline std::string bench_csv(const BenchReport& r) {
    std::string out = "code,m_f1,m_precision,m_recall,mcc_f1,mcc_precision,mcc_recall,status,execution\n";
    char buf[160];
    auto line = [&](const std::string& name, const Prf& m, const Prf& mcc, const std::string& status,
                    const std::string& exec) {
        std::snprintf(buf, sizeof buf, "%s,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,%s,%s\n", name.c_str(), m.f1, m.precision,
                      m.recall, mcc.f1, mcc.precision, mcc.recall, status.c_str(), exec.c_str());
        out += buf;
    };
    for (const auto& row : r.rows) line(row.name, row.m, row.mcc, row.status, row.execution);
    line("Total", r.m, r.mcc, "", "");
    return out;
}

inline std::string bench_table(const BenchReport& r) {
    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-30s %6s %6s %6s %7s %7s %7s  %s\n", "Code", "M-F1", "M-P", "M-R", "MCC-F1",
                  "MCC-P", "MCC-R", "Execution");
    out += buf;
    auto line = [&](const std::string& name, const Prf& m, const Prf& mcc, const std::string& exec) {
        std::snprintf(buf, sizeof buf, "%-30s %6.2f %6.2f %6.2f %7.2f %7.2f %7.2f  %s\n", name.c_str(), m.f1,
                      m.precision, m.recall, mcc.f1, mcc.precision, mcc.recall, exec.c_str());
        out += buf;
    };
    for (const auto& row : r.rows) line(row.name, row.m, row.mcc, row.status == "ok" ? row.execution : row.status);
    line("Total", r.m, r.mcc, "");
    return out;
}

} // namespace mpiassist
