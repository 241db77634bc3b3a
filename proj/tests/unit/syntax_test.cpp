#include <gtest/gtest.h>

#include <functional>

#include "mpiassist/bench.hpp"
#include "mpiassist/render.hpp"
#include "mpiassist/syntax.hpp"
#include "support/fixtures.hpp"

using namespace mpiassist;

namespace {

std::vector<NodeKind> child_kinds(const AstNode& n) {
    std::vector<NodeKind> out;
    for (const auto& c : n.children) out.push_back(c.kind);
    return out;
}

void check_spans(const AstNode& node, std::size_t text_size) {
    EXPECT_LE(node.span.start_byte, node.span.end_byte);
    EXPECT_LE(node.span.end_byte, text_size);
    EXPECT_LE(node.span.start_line, node.span.end_line);
    std::size_t prev_end = node.span.start_byte;
    for (const auto& c : node.children) {
        EXPECT_GE(c.span.start_byte, node.span.start_byte);
        EXPECT_LE(c.span.end_byte, node.span.end_byte);
        EXPECT_GE(c.span.start_byte, prev_end) << "siblings overlap or are out of order";
        prev_end = c.span.end_byte;
        check_spans(c, text_size);
    }
}

std::vector<std::string> corpus_sample() {
    std::vector<std::string> out = fixtures::programs(100, 3);
    for (const auto& src : embedded::bench_sources) {
        out.emplace_back(src.parallel);
        out.emplace_back(src.serial);
    }
    return out;
}

} // namespace

TEST(Parse, MinimalProgram) {
    const auto tree = parse("int main(){return 0;}");
    EXPECT_EQ(tree.root.kind, NodeKind::translation_unit);
    ASSERT_EQ(tree.root.children.size(), 1u);
    EXPECT_EQ(tree.root.children[0].kind, NodeKind::function_definition);
}

TEST(Parse, UnbalancedBraceFailsOnLineOne) {
    try {
        parse("int main(){");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 1);
    }
}

TEST(Parse, BodyStatements) {
    const auto tree = parse("int main(int argc,char**argv){int x=1;return x;}");
    const AstNode& fn = tree.root.children.at(0);
    ASSERT_EQ(fn.kind, NodeKind::function_definition);
    const AstNode& body = fn.children.back();
    ASSERT_EQ(body.kind, NodeKind::compound_statement);
    EXPECT_EQ(child_kinds(body), (std::vector<NodeKind>{NodeKind::declaration, NodeKind::return_statement}));
    EXPECT_EQ(function_name(fn), "main");
}

TEST(Parse, FindsFunctionsByName) {
    const auto tree = parse("static int f(int a) { return a; }\nint main(void) { return f(1); }\n");
    ASSERT_NE(find_function(tree.root, "f"), nullptr);
    ASSERT_NE(find_function(tree.root, "main"), nullptr);
    EXPECT_EQ(find_function(tree.root, "g"), nullptr);
}

TEST(Parse, CallExpressionWithArguments) {
    const auto tree = parse("int main(){ MPI_Init(&argc, &argv); }");
    const AstNode& stmt = tree.root.children[0].children.back().children.at(0);
    ASSERT_EQ(stmt.kind, NodeKind::expression_statement);
    const AstNode& call = stmt.children.at(0);
    ASSERT_EQ(call.kind, NodeKind::call_expression);
    EXPECT_EQ(child_kinds(call), (std::vector<NodeKind>{NodeKind::identifier, NodeKind::argument_list}));
    EXPECT_EQ(call.children[0].leaf_text, "MPI_Init");
}

TEST(Parse, MismatchedBracketReportsLine) {
    try {
        parse("int main()\n{\n    int a[3;\n}\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4);
    }
}

TEST(Render, CanonicalLayout) {
    EXPECT_EQ(render(parse("int  main( ){return 0; }")), "int main()\n{\n    return 0;\n}\n");
}

TEST(Render, DropsBlankLines) { EXPECT_EQ(render(parse("int x ;\n\n\n int y ;")), "int x;\nint y;\n"); }

TEST(Render, EmptyTranslationUnit) { EXPECT_EQ(standardize(""), ""); }

TEST(Render, ControlFlowLayout) {
    const std::string in =
        "int main(){int i;for(i=0;i<3;i++) if(i) x(); else if(i>1){y();} else z();"
        "switch(i){case 1: a(); break; default: b();} do { i--; } while(i>0); return 0;}";
    const std::string want =
        "int main()\n"
        "{\n"
        "    int i;\n"
        "    for (i = 0; i < 3; i++)\n"
        "        if (i)\n"
        "            x();\n"
        "        else if (i > 1)\n"
        "        {\n"
        "            y();\n"
        "        }\n"
        "        else\n"
        "            z();\n"
        "    switch (i)\n"
        "    {\n"
        "        case 1:\n"
        "            a();\n"
        "            break;\n"
        "        default:\n"
        "            b();\n"
        "    }\n"
        "    do\n"
        "    {\n"
        "        i--;\n"
        "    }\n"
        "    while (i > 0);\n"
        "    return 0;\n"
        "}\n";
    EXPECT_EQ(standardize(in), want);
}

TEST(Render, KeepsDirectivesOnTheirOwnLines) {
    EXPECT_EQ(standardize("#include <mpi.h>\n#define N 4\nint a[N];"), "#include <mpi.h>\n#define N 4\nint a[N];\n");
}

TEST(ParseProperty, SpansNestAndOrder) {
    for (const auto& text : corpus_sample()) {
        const auto tree = parse(text);
        EXPECT_EQ(tree.root.span.start_byte, 0u);
        EXPECT_EQ(tree.root.span.end_byte, text.size());
        check_spans(tree.root, text.size());
    }
}

TEST(RenderProperty, Idempotent) {
    for (const auto& text : corpus_sample()) {
        const std::string once = standardize(text);
        EXPECT_EQ(standardize(once), once);
    }
}

TEST(RenderProperty, PreservesTokens) {
    for (const auto& text : corpus_sample()) {
        EXPECT_EQ(token_texts(tokenize(standardize(text))), token_texts(tokenize(text)));
    }
}

// Benchmark sources are hand-formatted in the canonical style, so
// standardizing only drops blank lines and comment lines.
TEST(RenderProperty, BenchmarkSourcesOnlyLoseBlankAndCommentLines) {
    for (const auto& src : embedded::bench_sources) {
        std::vector<std::string> kept;
        for (const auto& l : split_lines(src.parallel)) {
            if (!l.empty() && l.rfind("/*", 0) != 0) kept.push_back(l);
        }
        EXPECT_EQ(split_lines(standardize(src.parallel)), kept) << src.name;
    }
}
