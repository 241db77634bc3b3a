#include <gtest/gtest.h>

#include "mpiassist/corpus.hpp"
#include "mpiassist/mpi_inventory.hpp"
#include "mpiassist/predictor.hpp"
#include "support/fixtures.hpp"

using namespace mpiassist;

namespace {

std::vector<std::string> names(const std::string& code) {
    std::vector<std::string> out;
    for (const auto& c : extract_calls_lexical(code)) out.push_back(c.name);
    return out;
}

} // namespace

TEST(Baseline, SingleReturn) {
    const std::string out = baseline_predict("int main(int argc, char **argv)\n{\n    int x = 1;\n    return x;\n}\n");
    EXPECT_EQ(names(out),
              (std::vector<std::string>{"MPI_Init", "MPI_Comm_rank", "MPI_Comm_size", "MPI_Finalize"}));
    EXPECT_NE(out.find("MPI_Init(&argc, &argv);"), std::string::npos);
    EXPECT_EQ(out, standardize(out));
}

TEST(Baseline, FinalizeBeforeEveryReturn) {
    const std::string out = baseline_predict(
        "int main(void)\n{\n    int x = 1;\n    if (x) return 1;\n    return 0;\n}\n");
    EXPECT_EQ(names(out), (std::vector<std::string>{"MPI_Init", "MPI_Comm_rank", "MPI_Comm_size", "MPI_Finalize",
                                                    "MPI_Finalize"}));
    EXPECT_NE(out.find("MPI_Init(NULL, NULL);"), std::string::npos);
    EXPECT_NO_THROW(prune(out));
}

TEST(Baseline, FallsOffEnd) {
    const std::string out = baseline_predict("int main()\n{\n    int x = 1;\n}\n");
    const auto n = names(out);
    ASSERT_FALSE(n.empty());
    EXPECT_EQ(n.back(), "MPI_Finalize");
}

TEST(Baseline, NoMain) { EXPECT_THROW(baseline_predict("int f(void) { return 0; }"), NoMainError); }

TEST(BaselineProperty, CoreNamesOnlyAndParseable) {
    const auto& inv = MpiInventory::builtin();
    const auto ds = [] {
        std::vector<SourceUnit> units;
        const auto progs = fixtures::programs(80, 5);
        for (std::size_t i = 0; i < progs.size(); ++i) units.push_back(load_unit(std::to_string(i) + ".c", progs[i]));
        return build_dataset(units, {});
    }();
    ASSERT_FALSE(ds.examples.empty());
    for (const auto& ex : ds.examples) {
        const std::string out = baseline_predict(ex.input_code);
        EXPECT_NO_THROW(parse(out));
        for (const auto& n : names(out)) EXPECT_TRUE(inv.is_core(n)) << n;
        EXPECT_NO_THROW(prune(out)) << ex.id;
    }
}

TEST(Predictions, RoundTrip) {
    const std::vector<PredictionRecord> records{
        {"a", "int main() {}"}, {"b", "x\n\"quoted\"\ttab"}, {"c", "MPI_Init(0, 0);"}};
    EXPECT_EQ(predictions_from_jsonl(predictions_to_jsonl(records)), records);
    fixtures::ScratchDir dir;
    write_predictions(dir.path() / "p.jsonl", records);
    EXPECT_EQ(read_predictions(dir.path() / "p.jsonl"), records);
}

TEST(Predictions, IgnoresUnknownFieldsAndBlankLines) {
    const auto r = predictions_from_jsonl("\n{\"id\":\"a\",\"predicted_code\":\"x\",\"score\":3}\n\n");
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].predicted_code, "x");
}

TEST(Predictions, MissingIdNamesLine) {
    try {
        predictions_from_jsonl("{\"id\":\"a\",\"predicted_code\":\"x\"}\n{\"predicted_code\":\"y\"}\n");
        FAIL() << "expected FormatError";
    } catch (const FormatError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(predictions_from_jsonl("{\"id\":\"a\",\"predicted_code\":\"\"}\n"), FormatError);
    EXPECT_THROW(predictions_from_jsonl("[1]\n"), FormatError);
}

TEST(Predictions, DuplicateId) {
    EXPECT_THROW(predictions_from_jsonl("{\"id\":\"a\",\"predicted_code\":\"x\"}\n{\"id\":\"a\",\"predicted_code\":\"y\"}\n"),
                 DuplicateIdError);
}
