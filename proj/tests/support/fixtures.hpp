#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "mpiassist/util.hpp"

namespace fixtures {

// Random but well-formed MPI programs with irregular layout: every MPI call
// is a braced statement, so each program is admissible.
class ProgramGenerator {
public:
    explicit ProgramGenerator(std::uint64_t seed) : rng_(seed) {}

    std::string program() {
        out_.clear();
        line("#include <mpi.h>");
        line("#include <stdio.h>");
        if (coin()) line("#define N " + std::to_string(pick(4, 64)));
        else line("#define N 16");
        blank();
        const int helpers = pick(0, 2);
        for (int h = 0; h < helpers; ++h) helper(h);
        open("int main(int argc, char **argv)");
        line("int rank, size;");
        line("double acc = " + std::to_string(pick(0, 9)) + ".0, total = 0.0;");
        line("int buf[N];");
        line("MPI_Init(&argc, &argv);");
        line("MPI_Comm_rank(MPI_COMM_WORLD, &rank);");
        line("MPI_Comm_size(MPI_COMM_WORLD, &size);");
        const int body = pick(1, 5);
        for (int i = 0; i < body; ++i) statement(1);
        if (coin()) line("printf(\"%f\\n\", total);");
        line("MPI_Finalize();");
        line("return 0;");
        close();
        return out_;
    }

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return pick(0, 1) == 1; }

private:
    void helper(int h) {
        open("int helper" + std::to_string(h) + "(int a, int b)");
        if (coin()) line("int c = a * " + std::to_string(pick(1, 9)) + " + b;");
        else line("int c = (a ^ b) % " + std::to_string(pick(2, 9)) + ";");
        line("return c;");
        close();
        blank();
    }

    void statement(int depth) {
        switch (pick(0, depth > 2 ? 5 : 8)) {
        case 0:
            line("MPI_Barrier(MPI_COMM_WORLD);");
            break;
        case 1:
            line("MPI_Bcast(&acc, 1, MPI_DOUBLE, 0, MPI_COMM_WORLD);");
            break;
        case 2:
            line("MPI_Reduce(&acc, &total, 1, MPI_DOUBLE, MPI_SUM, 0, MPI_COMM_WORLD);");
            break;
        case 3:
            line("acc += rank * " + std::to_string(pick(1, 7)) + ";");
            break;
        case 4:
            line("buf[" + std::to_string(pick(0, 3)) + "] = (int) acc;");
            break;
        case 5:
            line("MPI_Allreduce(&acc, &total, 1, MPI_DOUBLE, MPI_MAX, MPI_COMM_WORLD);");
            break;
        case 6:
            open("for (int i = 0; i < N; i++)");
            line("acc += buf[i % N] * 0.5;");
            if (coin()) statement(depth + 1);
            close();
            break;
        case 7:
            open("if (rank == 0)");
            line("MPI_Send(buf, N, MPI_INT, 1, 0, MPI_COMM_WORLD);");
            close();
            open_else();
            open("if (rank == 1)");
            line("MPI_Recv(buf, N, MPI_INT, 0, 0, MPI_COMM_WORLD, MPI_STATUS_IGNORE);");
            close();
            close();
            break;
        default:
            open("while (acc > " + std::to_string(pick(100, 900)) + ")");
            line("acc = acc / 2;");
            statement(depth + 1);
            close();
            break;
        }
    }

    std::string pad() {
        static const char* kPads[] = {"", " ", "  ", "\t", "    ", "   "};
        return kPads[pick(0, 5)];
    }

    void line(const std::string& text) {
        std::string noisy;
        for (char c : text) {
            noisy += c;
            if ((c == ',' || c == '(' || c == '=') && pick(0, 4) == 0) noisy += ' ';
        }
        out_ += pad() + noisy + (pick(0, 5) == 0 ? " " : "") + "\n";
        if (pick(0, 6) == 0) blank();
        if (pick(0, 12) == 0) out_ += pad() + "/* note " + std::to_string(pick(0, 99)) + " */\n";
    }

    void blank() { out_ += pick(0, 3) == 0 ? "\n\n" : "\n"; }

    void open(const std::string& head) {
        if (coin()) out_ += pad() + head + " {\n";
        else out_ += pad() + head + "\n" + pad() + "{\n";
    }

    void open_else() {
        out_ += pad() + "else\n" + pad() + "{\n";
    }

    void close() { out_ += pad() + "}\n"; }

    std::mt19937_64 rng_;
    std::string out_;
};

inline std::vector<std::string> programs(std::size_t n, std::uint64_t seed) {
    ProgramGenerator gen(seed);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(gen.program());
    return out;
}

/// Writes `n` generated programs as <dir>/repoK/fileI.c.
inline void write_tree(const std::filesystem::path& dir, std::size_t n, std::uint64_t seed) {
    const auto progs = programs(n, seed);
    for (std::size_t i = 0; i < n; ++i) {
        mpiassist::write_file(dir / ("repo" + std::to_string(i % 7)) / ("file" + std::to_string(i) + ".c"), progs[i]);
    }
}

class ScratchDir {
public:
    ScratchDir() {
        std::string templ = (std::filesystem::temp_directory_path() / "mpiassist-test-XXXXXX").string();
        if (!::mkdtemp(templ.data())) throw std::runtime_error("mkdtemp failed");
        path_ = templ;
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

} // namespace fixtures
