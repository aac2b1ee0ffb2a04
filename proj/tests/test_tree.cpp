#include "globop/tree.hpp"
#include "grid_oracle.hpp"

#include <gtest/gtest.h>

using namespace globop;

namespace {

Tree g(std::vector<std::uint32_t> r) { return fromGrid(r); }

// column lists with sum(r_i + 1) <= budget
std::size_t gridCount(std::size_t budget)
{
    std::size_t n = 1;
    for (std::size_t part = 1; part <= budget; ++part) n += gridCount(budget - part);
    return n;
}

// diagrams of diagrams found by trying every inner tree on every cell and
// keeping the assignments that validate
std::size_t bruteDiagramCount(std::size_t D, std::size_t S)
{
    const auto trees = enumeratePasting(D, S);
    std::size_t n = 0;
    for (const auto& outer : trees) {
        const auto cells = analyze(outer).cells.size();
        DiagramOfDiagrams dd{outer, std::vector<Tree>(cells)};
        std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t c, std::size_t used) {
            if (c == cells) {
                try {
                    validate(dd);
                    ++n;
                } catch (const IncompatibleBoundary&) {
                }
                return;
            }
            for (const auto& t : trees)
                if (used + t.nodes() - 1 <= S) {
                    dd.inner[c] = t;
                    rec(c + 1, used + t.nodes() - 1);
                }
        };
        rec(0, outer.nodes());
    }
    return n;
}

} // namespace

TEST(Literal, GridAndNestedForms)
{
    EXPECT_EQ(parseTree("[]"), Tree::point());
    EXPECT_EQ(parseTree("[0]"), Tree::globe(1));
    EXPECT_EQ(parseTree("[1]"), Tree::globe(2));
    EXPECT_EQ(parseTree(" [0, 0 ,0] "), Tree::path(3));
    EXPECT_EQ(parseTree("t(t(t()),t())"), g({1, 0}));
    EXPECT_EQ(treeLiteral(g({1, 0})), "t(t(t()),t())");
    EXPECT_EQ(show(Tree::globe(3)), "t(t(t(t())))");
    EXPECT_EQ(show(g({2, 0, 1})), "[2,0,1]");
}

TEST(Literal, MalformedReportsOffset)
{
    try {
        parseTree("[2,]");
        FAIL() << "accepted [2,]";
    } catch (const LiteralError& e) {
        EXPECT_EQ(e.offset, 3u);
    }
    EXPECT_THROW(parseTree("[2"), LiteralError);
    EXPECT_THROW(parseTree("t(t()"), LiteralError);
    EXPECT_THROW(parseTree("[1] x"), LiteralError);
    EXPECT_THROW(parseTree("[-1]"), LiteralError);
}

TEST(Literal, RoundtripOnEveryTreeUpToSixNodes)
{
    for (const auto& t : enumeratePasting(5, 6)) {
        EXPECT_EQ(parseTree(treeLiteral(t)), t);
        EXPECT_EQ(parseTree(show(t)), t);
        if (auto r = toGrid(t)) {
            EXPECT_EQ(fromGrid(*r), t);
        }
    }
}

TEST(Enumerate, Counts)
{
    EXPECT_EQ(enumeratePasting(0, 5).size(), 1u);
    EXPECT_EQ(enumeratePasting(1, 4).size(), 4u);
    EXPECT_EQ(enumeratePasting(2, 4).size(), 8u);
    // height <= 2 trees are column lists; nodes = 1 + sum(r_i + 1)
    for (std::size_t s = 1; s <= 8; ++s) EXPECT_EQ(enumeratePasting(2, s).size(), gridCount(s - 1)) << s;
    auto all = enumeratePasting(3, 6);
    EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
    EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end());
}

TEST(Cells, GlobularStructure)
{
    const TreeInfo info = analyze(g({2, 0}));
    // 1 zero-cell gap pair (3 objects), 3 + 1 one-cells, 2 two-cells
    std::size_t byDim[3] = {0, 0, 0};
    for (const auto& c : info.cells) ++byDim[c.dim];
    EXPECT_EQ(byDim[0], 3u);
    EXPECT_EQ(byDim[1], 4u);
    EXPECT_EQ(byDim[2], 2u);
    for (std::size_t c = 0; c < info.cells.size(); ++c) {
        if (info.cells[c].dim < 2) continue;
        // globularity: s(s x) = s(t x) and t(s x) = t(t x)
        EXPECT_EQ(info.source(info.source(c)), info.source(info.target(c)));
        EXPECT_EQ(info.target(info.source(c)), info.target(info.target(c)));
    }
}

TEST(Boundary, TruncatesAndCapsDimension)
{
    PastingDiagram p{g({2, 0, 1}), 2};
    validate(p);
    EXPECT_EQ(boundary(p, 1), (PastingDiagram{Tree::path(3), 1}));
    EXPECT_EQ(boundary(p, 0), (PastingDiagram{Tree::point(), 0}));
    EXPECT_EQ(boundary(idTower(3), 1), idTower(1));
    EXPECT_THROW(validate(PastingDiagram{g({1}), 1}), BoundsError);
}

TEST(Substitute, Examples)
{
    DiagramOfDiagrams path{Tree::path(3), {Tree::point(), Tree::point(), Tree::point(), Tree::point(),
                                           Tree::path(2), Tree::path(0), Tree::path(1)}};
    EXPECT_EQ(substitute(path), Tree::path(3));

    // [1,1] with [2] in the first column and [3] in the second
    const Tree outer = g({1, 1});
    const TreeInfo info = analyze(outer);
    std::vector<Tree> inner(info.cells.size());
    for (std::size_t c = 0; c < info.cells.size(); ++c) {
        const auto& cell = info.cells[c];
        if (cell.dim == 0) inner[c] = Tree::point();
        else if (cell.dim == 1) inner[c] = Tree::path(1);
        else inner[c] = cell.node == info.children[info.children[0][0]][0] ? g({2}) : g({3});
    }
    EXPECT_EQ(substitute({outer, inner}), g({2, 3}));
}

TEST(Substitute, IncompatibleBoundaryThrows)
{
    const Tree outer = Tree::globe(2);
    // 2-cell labelled by a width-2 diagram but its 1-cells are globes of length 1
    DiagramOfDiagrams dd{outer, {Tree::point(), Tree::point(), Tree::path(1), Tree::path(1), g({1, 1})}};
    EXPECT_THROW(substitute(dd), IncompatibleBoundary);
    dd.inner.pop_back();
    EXPECT_THROW(substitute(dd), IncompatibleBoundary);
}

TEST(Substitute, AgreesWithGridOracle)
{
    std::size_t n = 0;
    forEachDiagramOfDiagrams(2, 5, [&](const DiagramOfDiagrams& dd) {
        ++n;
        ASSERT_EQ(*toGrid(substitute(dd)), oracle::gridSubstitute(dd)) << show(dd.outer);
    });
    EXPECT_EQ(n, bruteDiagramCount(2, 5));
    forEachDiagramOfDiagrams(2, 8, [&](const DiagramOfDiagrams& dd) {
        ASSERT_EQ(*toGrid(substitute(dd)), oracle::gridSubstitute(dd)) << show(dd.outer);
    });
}

TEST(Substitute, DimensionOneAddsLengths)
{
    forEachDiagramOfDiagrams(1, 6, [&](const DiagramOfDiagrams& dd) {
        const TreeInfo info = analyze(dd.outer);
        std::vector<std::size_t> lengths;
        for (auto u : info.children[0]) lengths.push_back(dd.inner[info.cellOf(u, 0)].deg[0]);
        ASSERT_EQ(substitute(dd), Tree::path(oracle::pathSubstitute(lengths)));
    });
}

TEST(Substitute, EmbeddingIsGlobularAndSurjective)
{
    forEachDiagramOfDiagrams(3, 5, [&](const DiagramOfDiagrams& dd) {
        const Substituted s = substituteWithEmbedding(dd);
        const TreeInfo ri = analyze(s.result);
        std::vector<bool> hit(ri.cells.size(), false);
        for (std::size_t c = 0; c < s.embed.size(); ++c) {
            const TreeInfo ii = analyze(dd.inner[c]);
            for (std::size_t d = 0; d < s.embed[c].size(); ++d) {
                const auto e = s.embed[c][d];
                hit[e] = true;
                ASSERT_EQ(ri.cells[e].dim, ii.cells[d].dim);
                if (ii.cells[d].dim == 0) continue;
                ASSERT_EQ(ri.source(e), s.embed[c][ii.source(d)]);
                ASSERT_EQ(ri.target(e), s.embed[c][ii.target(d)]);
            }
        }
        for (bool h : hit) ASSERT_TRUE(h);
    });
}

TEST(Substitute, MonadLaws)
{
    auto rep = checkSubstitutionLaws(2, 5);
    EXPECT_TRUE(rep.passed()) << rep.witness;
    rep = checkSubstitutionLaws(3, 6);
    EXPECT_TRUE(rep.passed()) << rep.witness;
}
