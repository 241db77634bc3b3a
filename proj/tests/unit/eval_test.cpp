#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "mpiassist/eval.hpp"
#include "support/fixtures.hpp"

using namespace mpiassist;

namespace {

std::vector<MpiCall> calls(std::initializer_list<std::pair<const char*, int>> items) {
    std::vector<MpiCall> out;
    for (const auto& [n, l] : items) out.push_back({n, l, 0, CallContext::statement});
    return out;
}

// Kuhn's augmenting-path matching over the full compatibility graph.
std::size_t max_matching(const std::vector<MpiCall>& pred, const std::vector<MpiCall>& gold, int tol) {
    std::vector<int> owner(gold.size(), -1);
    std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t i, std::vector<bool>& seen) {
        for (std::size_t j = 0; j < gold.size(); ++j) {
            if (seen[j] || gold[j].name != pred[i].name || std::abs(gold[j].line - pred[i].line) > tol) continue;
            seen[j] = true;
            if (owner[j] < 0 || augment(static_cast<std::size_t>(owner[j]), seen)) {
                owner[j] = static_cast<int>(i);
                return true;
            }
        }
        return false;
    };
    std::size_t n = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        std::vector<bool> seen(gold.size(), false);
        if (augment(i, seen)) ++n;
    }
    return n;
}

std::vector<MpiCall> random_calls(std::mt19937& rng) {
    static const char* kNames[] = {"MPI_Send", "MPI_Recv", "MPI_Barrier"};
    std::vector<MpiCall> out;
    for (const char* name : kNames) {
        const int k = std::uniform_int_distribution<int>(0, 6)(rng);
        for (int i = 0; i < k; ++i) out.push_back({name, std::uniform_int_distribution<int>(1, 15)(rng), 0, {}});
    }
    std::shuffle(out.begin(), out.end(), rng);
    return out;
}

Tokens words(const std::string& s) {
    Tokens out;
    std::istringstream in(s);
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

Tokens numbered(int n) {
    Tokens out;
    for (int i = 0; i < n; ++i) out.push_back("t" + std::to_string(i));
    return out;
}

std::vector<DatasetExample> fixture_dataset(std::size_t n) {
    std::vector<SourceUnit> units;
    const auto progs = fixtures::programs(n, 21);
    for (std::size_t i = 0; i < progs.size(); ++i) units.push_back(load_unit(std::to_string(i) + ".c", progs[i]));
    return build_dataset(units, {}).examples;
}

} // namespace

TEST(Align, ExactAndShifted) {
    const auto gold = calls({{"MPI_Init", 4}, {"MPI_Finalize", 9}});
    auto m = align(calls({{"MPI_Init", 4}, {"MPI_Finalize", 10}}), gold);
    EXPECT_EQ(m.tp.size(), 2u);
    m = align(calls({{"MPI_Init", 4}, {"MPI_Finalize", 11}}), gold);
    EXPECT_EQ(m.tp.size(), 1u);
    EXPECT_EQ(m.fp.size(), 1u);
    EXPECT_EQ(m.fn.size(), 1u);
}

TEST(Align, NameMustMatch) {
    const auto m = align(calls({{"MPI_Send", 5}}), calls({{"MPI_Recv", 5}}));
    EXPECT_TRUE(m.tp.empty());
    EXPECT_EQ(m.fp.size(), 1u);
    EXPECT_EQ(m.fn.size(), 1u);
}

TEST(Align, EachCallMatchedOnce) {
    const auto m = align(calls({{"MPI_Barrier", 5}, {"MPI_Barrier", 5}}), calls({{"MPI_Barrier", 5}}));
    EXPECT_EQ(m.tp.size(), 1u);
    EXPECT_EQ(m.fp.size(), 1u);
}

TEST(Align, WindowOverlap) {
    // A greedy nearest-first choice would pair 5 with 5 and strand 4 and 6.
    const auto m = align(calls({{"MPI_Send", 4}, {"MPI_Send", 5}}), calls({{"MPI_Send", 5}, {"MPI_Send", 6}}), 1);
    EXPECT_EQ(m.tp.size(), 2u);
}

TEST(AlignProperty, MatchesBruteForceMaximum) {
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto pred = random_calls(rng);
        const auto gold = random_calls(rng);
        const int tol = trial % 3;
        const auto m = align(pred, gold, tol);
        ASSERT_EQ(m.tp.size(), max_matching(pred, gold, tol)) << "trial " << trial;
        EXPECT_EQ(m.tp.size() + m.fp.size(), pred.size());
        EXPECT_EQ(m.tp.size() + m.fn.size(), gold.size());
        for (const auto& [p, g] : m.tp) {
            EXPECT_EQ(p.name, g.name);
            EXPECT_LE(std::abs(p.line - g.line), tol);
        }
    }
}

TEST(AlignProperty, SymmetricAndMonotone) {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const auto a = random_calls(rng);
        const auto b = random_calls(rng);
        EXPECT_EQ(align(a, b).tp.size(), align(b, a).tp.size());
        EXPECT_EQ(align(a, a, 0).tp.size(), a.size());
        std::size_t prev = 0;
        for (int tol = 0; tol <= 4; ++tol) {
            const std::size_t tp = align(a, b, tol).tp.size();
            EXPECT_GE(tp, prev);
            prev = tp;
        }
    }
}

TEST(Prf, Examples) {
    auto r = prf(Counts{3, 1, 2});
    EXPECT_DOUBLE_EQ(r.precision, 0.75);
    EXPECT_DOUBLE_EQ(r.recall, 0.6);
    EXPECT_DOUBLE_EQ(r.f1, 2 * 0.75 * 0.6 / 1.35);
    r = prf(Counts{});
    EXPECT_TRUE(r.vacuous);
    EXPECT_DOUBLE_EQ(r.f1, 1.0);
    r = prf(Counts{0, 0, 4});
    EXPECT_TRUE(r.precision_undefined);
    EXPECT_DOUBLE_EQ(r.precision, 0.0);
    EXPECT_DOUBLE_EQ(r.recall, 0.0);
    r = prf(Counts{0, 2, 0});
    EXPECT_TRUE(r.recall_undefined);
    EXPECT_DOUBLE_EQ(r.f1, 0.0);
}

TEST(Prf, CoreFilterUsesGoldNameForMatches) {
    const auto m = align(calls({{"MPI_Init", 1}, {"MPI_Wtime", 2}, {"MPI_Send", 3}}),
                         calls({{"MPI_Init", 1}, {"MPI_Comm_rank", 2}, {"MPI_Get_count", 3}}));
    const Counts all = count(m, NameFilter::all);
    const Counts core = count(m, NameFilter::core);
    EXPECT_EQ(all.tp, 1u);
    EXPECT_EQ(all.fp, 2u);
    EXPECT_EQ(all.fn, 2u);
    EXPECT_EQ(core.tp, 1u);
    EXPECT_EQ(core.fp, 1u);  // MPI_Send
    EXPECT_EQ(core.fn, 1u);  // MPI_Comm_rank
}

TEST(PrfProperty, Bounds) {
    std::mt19937 rng(5);
    for (int i = 0; i < 2000; ++i) {
        std::uniform_int_distribution<std::size_t> d(0, 20);
        const auto r = prf(Counts{d(rng), d(rng), d(rng)});
        for (double v : {r.precision, r.recall, r.f1}) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
        EXPECT_LE(r.f1, std::max(r.precision, r.recall) + 1e-12);
        EXPECT_GE(r.f1 + 1e-12, std::min(r.precision, r.recall));
    }
}

TEST(Bleu, NltkReferenceValues) {
    const Tokens ref = numbered(20);
    Tokens swapped = ref;
    swapped[10] = "X";
    const Tokens prefix(ref.begin(), ref.begin() + 15);
    EXPECT_NEAR(bleu(swapped, ref), 0.8578928092681435, 1e-12);
    EXPECT_NEAR(bleu(prefix, ref), 0.7165313105737893, 1e-12);
    EXPECT_NEAR(corpus_bleu({swapped, prefix}, {ref, ref}), 0.795897562951954, 1e-12);
}

TEST(Bleu, Edges) {
    EXPECT_DOUBLE_EQ(bleu(numbered(8), numbered(8)), 1.0);
    EXPECT_DOUBLE_EQ(bleu({}, numbered(3)), 0.0);
    // No 4-gram overlap: 1 / (total + 1) in place of zero.
    const Tokens pred{"t0", "t1", "q", "t3", "t4", "t5"};
    const double expected = std::pow((5.0 / 6) * (3.0 / 5) * (1.0 / 4) * (1.0 / 4), 0.25);
    EXPECT_NEAR(bleu(pred, numbered(6)), expected, 1e-12);
}

TEST(Rouge, Formula) {
    const Tokens pred = words("a b c d e x y z");
    const Tokens ref = words("a b c d e 1 2 3 4 5");
    EXPECT_EQ(lcs_length(pred, ref), 5u);
    const double p = 5.0 / 8, r = 5.0 / 10, b2 = 1.44;
    EXPECT_NEAR(rouge_l(pred, ref), (1 + b2) * p * r / (r + b2 * p), 1e-12);
    EXPECT_NEAR(rouge_l(pred, ref), 0.5446428571428571, 1e-12);
    EXPECT_DOUBLE_EQ(rouge_l({}, {}), 1.0);
    EXPECT_DOUBLE_EQ(rouge_l(words("a"), words("b")), 0.0);
}

TEST(Meteor, Formula) {
    for (int n : {1, 4, 10}) EXPECT_NEAR(meteor_simple(numbered(n), numbered(n)), 1 - 0.5 / std::pow(n, 3), 1e-12);
    EXPECT_NEAR(meteor_simple(words("a b c d"), words("c d a b")), 1 - 0.5 * std::pow(0.5, 3), 1e-12);
    // 2 matches out of 3 predicted and 4 reference tokens, one chunk.
    const double p = 2.0 / 3, r = 2.0 / 4;
    EXPECT_NEAR(meteor_simple(words("a b z"), words("a b c d")), 10 * p * r / (r + 9 * p) * (1 - 0.5 / 8), 1e-12);
    EXPECT_DOUBLE_EQ(meteor_simple(words("x"), words("y")), 0.0);
}

TEST(ExactMatch, TokenLevel) {
    EXPECT_TRUE(exact_match("int  x=1;", "int x = 1 ;"));
    EXPECT_TRUE(exact_match("int x; /* c */", "int x;"));
    EXPECT_FALSE(exact_match("int x;", "int y;"));
}

TEST(Evaluate, OracleScoresOne) {
    const auto ds = fixture_dataset(40);
    std::vector<PredictionRecord> preds;
    for (const auto& ex : ds) preds.push_back({ex.id, ex.label_code});
    const auto r = evaluate(ds, preds, 1, "all").report;
    EXPECT_EQ(r.n_examples, ds.size());
    for (double v : {r.m_precision, r.m_recall, r.m_f1, r.mcc_precision, r.mcc_recall, r.mcc_f1, r.bleu,
                     r.exact_match_acc, r.rouge_l}) {
        EXPECT_DOUBLE_EQ(v, 1.0);
    }
    EXPECT_GT(r.meteor_simple, 0.99);
}

TEST(Evaluate, InputAsPredictionHasZeroRecall) {
    const auto ds = fixture_dataset(40);
    std::vector<PredictionRecord> preds;
    for (const auto& ex : ds) preds.push_back({ex.id, ex.input_code});
    const auto r = evaluate(ds, preds, 1, "all").report;
    EXPECT_DOUBLE_EQ(r.m_recall, 0.0);
    EXPECT_DOUBLE_EQ(r.m_f1, 0.0);
    EXPECT_TRUE(r.m.precision_undefined);
    EXPECT_DOUBLE_EQ(r.exact_match_acc, 0.0);
}

TEST(Evaluate, MissingPrediction) {
    const auto ds = fixture_dataset(5);
    EXPECT_THROW(evaluate(ds, {}, 1, "all"), MissingPredictionError);
}

TEST(Evaluate, SplitSelection) {
    auto ds = fixture_dataset(10);
    for (std::size_t i = 0; i < ds.size(); ++i) ds[i].split = i < 3 ? "test" : "train";
    std::vector<PredictionRecord> preds;
    for (std::size_t i = 0; i < 3; ++i) preds.push_back({ds[i].id, ds[i].label_code});
    EXPECT_EQ(evaluate(ds, preds).report.n_examples, 3u);
}

TEST(Evaluate, UnparseablePredictionScoredAsWritten) {
    const auto ds = fixture_dataset(3);
    std::vector<PredictionRecord> preds;
    for (const auto& ex : ds) preds.push_back({ex.id, "MPI_Init(&argc, &argv); {{{"});
    const auto e = evaluate(ds, preds, 1, "all");
    ASSERT_EQ(e.details.size(), 3u);
    for (const auto& d : e.details) EXPECT_EQ(d.all.fp, 1u);
}

TEST(EvaluateProperty, DeterministicAcrossThreads) {
    const auto ds = fixture_dataset(60);
    std::vector<PredictionRecord> preds;
    std::mt19937 rng(8);
    for (const auto& ex : ds) preds.push_back({ex.id, rng() % 2 ? ex.label_code : ex.input_code});
    const auto a = evaluate(ds, preds, 1, "all", 1);
    const auto b = evaluate(ds, preds, 1, "all", 8);
    EXPECT_EQ(to_json(a.report).dump(), to_json(b.report).dump());
    EXPECT_EQ(details_to_jsonl(a.details), details_to_jsonl(b.details));
}

TEST(Report, JsonAndTable) {
    MetricsReport r;
    r.m_f1 = 0.5;
    const auto j = to_json(r);
    EXPECT_DOUBLE_EQ(j["m_f1"].get<double>(), 0.5);
    bool flagged = false;
    for (const auto& f : j["flags"]) flagged |= f == "meteor_simple_not_comparable";
    EXPECT_TRUE(flagged);
    const std::string table = metrics_table(r);
    for (const char* row : {"M-F1", "MCC-Recall", "BLEU", "Rouge-l", "ACC"}) EXPECT_NE(table.find(row), std::string::npos);
}
