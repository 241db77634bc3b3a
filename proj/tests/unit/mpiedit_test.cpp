#include <gtest/gtest.h>

#include "mpiassist/bench.hpp"
#include "mpiassist/mpiedit.hpp"
#include "mpiassist/mpi_inventory.hpp"
#include "support/fixtures.hpp"

using namespace mpiassist;

namespace {

const char* kTenLines =
    "#include <mpi.h>\n"
    "int main(int argc, char **argv)\n"
    "{\n"
    "    MPI_Init(&argc, &argv);\n"
    "    int x = 1;\n"
    "    x = x + 1;\n"
    "    x = x * 2;\n"
    "    x = x - 1;\n"
    "    MPI_Finalize();\n"
    "}\n";

std::vector<std::pair<std::string, int>> names_lines(const std::vector<MpiCall>& calls) {
    std::vector<std::pair<std::string, int>> out;
    for (const auto& c : calls) out.emplace_back(c.name, c.line);
    return out;
}

} // namespace

TEST(FindCalls, StatementCall) {
    const auto calls = find_mpi_calls(parse("#include <mpi.h>\nint main(int argc, char **argv)\n{\nMPI_Init(&argc,&argv);\n}\n"));
    ASSERT_EQ(calls.size(), 1u);
    EXPECT_EQ(calls[0].name, "MPI_Init");
    EXPECT_EQ(calls[0].line, 4);
    EXPECT_EQ(calls[0].context, CallContext::statement);
}

TEST(FindCalls, EmbeddedInCondition) {
    const auto calls = find_mpi_calls(parse("int main()\n{\n    if (MPI_Send(b, 1, MPI_INT, 1, 0, MPI_COMM_WORLD) != 0)\n    {\n    }\n}\n"));
    ASSERT_EQ(calls.size(), 1u);
    EXPECT_EQ(calls[0].name, "MPI_Send");
    EXPECT_EQ(calls[0].line, 3);
    EXPECT_EQ(calls[0].context, CallContext::embedded);
}

TEST(FindCalls, SerialCodeHasNone) { EXPECT_TRUE(find_mpi_calls(parse("int main(){int a = 1; return a;}")).empty()); }

TEST(FindCalls, ConstantsAreNotCalls) {
    EXPECT_TRUE(find_mpi_calls(parse("int main(){ int c = MPI_COMM_WORLD; return c; }")).empty());
}

TEST(Prune, TenLineProgram) {
    const auto r = prune(kTenLines);
    EXPECT_EQ(line_count(r.pruned_text), 8u);
    EXPECT_EQ(names_lines(r.removed), (std::vector<std::pair<std::string, int>>{{"MPI_Init", 4}, {"MPI_Finalize", 9}}));
    EXPECT_EQ(r.pruned_text.find("MPI_"), std::string::npos);
    EXPECT_NE(r.pruned_text.find("#include <mpi.h>"), std::string::npos);
}

TEST(Prune, NoCallsIsIdentity) {
    const std::string text = "int main()\n{\n    return 0;\n}\n";
    const auto r = prune(text);
    EXPECT_EQ(r.pruned_text, text);
    EXPECT_TRUE(r.removed.empty());
}

TEST(Prune, AssignedCallIsEmbedded) {
    EXPECT_THROW(prune("int main(){ int err; err = MPI_Send(b, 1, MPI_INT, 1, 0, MPI_COMM_WORLD); return err; }"),
                 EmbeddedCallError);
}

TEST(Prune, UnbracedBodyIsEmbedded) {
    EXPECT_THROW(prune("int main(){ int r = 0; if (r == 0) MPI_Barrier(MPI_COMM_WORLD); return 0; }"), EmbeddedCallError);
}

TEST(Prune, RestoreRebuildsLabel) {
    const auto r = prune(kTenLines);
    EXPECT_EQ(restore(r.pruned_text, r.removed_lines), r.label_text);
}

TEST(Lexical, SingleCall) {
    EXPECT_EQ(names_lines(extract_calls_lexical("MPI_Init(&argc,&argv);")),
              (std::vector<std::pair<std::string, int>>{{"MPI_Init", 1}}));
}

TEST(Lexical, IgnoresStringsAndComments) {
    EXPECT_TRUE(extract_calls_lexical("printf(\"MPI_Init(x)\"); /* MPI_Send( */").empty());
}

TEST(Lexical, ToleratesBrokenCode) {
    EXPECT_EQ(extract_calls_lexical("int main( { MPI_Init(&a,\n MPI_Finalize(); \xff").size(), 2u);
}

TEST(Inventory, CoreNamesAreInventoried) {
    const auto& inv = MpiInventory::builtin();
    EXPECT_GT(inv.all_names.size(), 400u);
    for (const auto& n : inv.core_names) EXPECT_TRUE(inv.contains(n)) << n;
    EXPECT_EQ(inv.core_names.size(), 8u);
    EXPECT_FALSE(inv.is_core("MPI_Barrier"));
}

TEST(MpiEditProperty, LexicalAgreesWithTreeOnBenchmark) {
    for (const auto& src : embedded::bench_sources) {
        const std::string text(src.parallel);
        EXPECT_EQ(names_lines(extract_calls_lexical(text)), names_lines(find_mpi_calls(parse(text)))) << src.name;
    }
}

TEST(MpiEditProperty, RoundTripOnTwoHundredFiles) {
    for (const auto& text : fixtures::programs(200, 2024)) {
        const auto r = prune(text);
        EXPECT_EQ(restore(r.pruned_text, r.removed_lines), r.label_text);
        EXPECT_TRUE(extract_calls_lexical(r.pruned_text).empty());
        EXPECT_EQ(names_lines(find_mpi_calls(parse(r.label_text))), names_lines(r.removed));
    }
}
