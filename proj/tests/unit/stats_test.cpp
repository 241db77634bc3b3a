#include <gtest/gtest.h>

#include "mpiassist/stats.hpp"

using namespace mpiassist;

namespace {

std::string lines_of(std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) out += "int v" + std::to_string(i) + ";\n";
    return out;
}

} // namespace

TEST(FunctionCounts, OncePerFile) {
    const auto counts = function_file_counts({"MPI_Send(a);\nMPI_Send(b);\n"});
    ASSERT_EQ(counts.size(), 1u);
    EXPECT_EQ(counts[0], (std::pair<std::string, std::size_t>{"MPI_Send", 1}));
}

TEST(FunctionCounts, ThreeFiles) {
    const auto counts = function_file_counts({"MPI_Init(a);\nMPI_Finalize();\n", "MPI_Init(a);\nMPI_Finalize();\n",
                                              "MPI_Init(a);\n"});
    EXPECT_EQ(counts, (std::vector<std::pair<std::string, std::size_t>>{{"MPI_Init", 3}, {"MPI_Finalize", 2}}));
}

TEST(LengthHistogram, SmallFile) {
    EXPECT_EQ(length_histogram({lines_of(5)}), (std::array<std::size_t, 4>{1, 0, 0, 0}));
}

TEST(LengthHistogram, BinBoundaries) {
    EXPECT_EQ(length_histogram({lines_of(10), lines_of(11), lines_of(99), lines_of(100)}),
              (std::array<std::size_t, 4>{1, 1, 1, 1}));
}

TEST(Ratio, InitFirstFinalizeLast) {
    std::string text = "MPI_Init(a);\n";
    for (int i = 0; i < 8; ++i) text += "x();\n";
    text += "MPI_Finalize();\n";
    ASSERT_EQ(line_count(text), 10u);
    EXPECT_EQ(init_finalize_bin(text), std::optional<std::size_t>(9));
}

TEST(Ratio, MissingFinalizeNotCounted) {
    const auto h = init_finalize_ratio({"MPI_Init(a);\nx();\n"});
    EXPECT_EQ(h.contributing, 0u);
}

TEST(StatsProperty, TotalsMatchContributingFiles) {
    std::vector<std::string> texts;
    for (int n = 2; n < 40; ++n) {
        std::string t = "MPI_Init(a);\n";
        for (int i = 0; i < n; ++i) t += i == n / 3 ? "MPI_Finalize();\n" : "x();\n";
        texts.push_back(t);
        texts.push_back(lines_of(static_cast<std::size_t>(n)));
    }
    const auto s = compute_stats(texts);
    std::size_t total = 0;
    for (auto b : s.ratios.bins) total += b;
    EXPECT_EQ(total, s.ratios.contributing);
    for (const auto& [name, n] : s.function_counts) EXPECT_LE(n, texts.size());
    std::size_t lengths = 0;
    for (auto b : s.lengths) lengths += b;
    EXPECT_EQ(lengths, texts.size());
}

TEST(StatsOutput, Formats) {
    const auto s = compute_stats({"MPI_Init(a);\nMPI_Finalize();\n"});
    EXPECT_EQ(function_counts_csv(s), "function,files\nMPI_Finalize,1\nMPI_Init,1\n");
    EXPECT_EQ(lengths_csv(s), "lines,files\n<=10,1\n11-50,0\n51-99,0\n>=100,0\n");
    EXPECT_NE(ratio_dat(s).find("0.5 0.6 1\n"), std::string::npos);
}
