#include "globop/collection.hpp"
#include "small_instances.hpp"

#include <gtest/gtest.h>

using namespace globop;

namespace {

// x, y, z with f: x -> y, g: y -> z, h: x -> x, all over the 1-globe
Collection fghColl()
{
    Collection c = Collection::empty(1);
    for (auto n : {"x", "y", "z"}) c.add(0, n, Tree::point());
    c.add(1, "f", Tree::globe(1), 0, 1);
    c.add(1, "g", Tree::globe(1), 1, 2);
    c.add(1, "h", Tree::globe(1), 0, 0);
    return c;
}

// a single binary 1-cell a: p -> q
Collection binary()
{
    Collection c = Collection::empty(1);
    c.add(0, "p", Tree::point());
    c.add(0, "q", Tree::point());
    c.add(1, "a", Tree::path(2), 0, 1);
    return c;
}

} // namespace

TEST(Collection, ValidateRejectsBadArities)
{
    Collection c = binary();
    validate(c);
    c.arity[1][0] = fromGrid({1});
    EXPECT_THROW(validate(c), BoundsError);
    Collection d = Collection::empty(2);
    d.add(0, "x", Tree::point());
    d.add(1, "u", Tree::path(1), 0, 0);
    d.add(1, "v", Tree::path(2), 0, 0);
    d.add(2, "m", fromGrid({1}), 0, 1);
    EXPECT_THROW(validate(d), IncompatibleBoundary);
}

TEST(Tensor, UnitOnTheRightKeepsCellsAndArities)
{
    Collection x = binary();
    CollTensor t = tensorColl(x, unitCollection(1));
    for (std::size_t k = 0; k <= 1; ++k) {
        ASSERT_EQ(t.coll.set.count(k), x.set.count(k));
        for (std::size_t i = 0; i < t.coll.set.count(k); ++i) EXPECT_EQ(t.coll.arity[k][i], x.arity[k][t.head[k][i]]);
    }
}

TEST(Tensor, BinaryHeadOverComposablePairs)
{
    CollTensor t = tensorColl(binary(), fghColl());
    // (a, hh), (a, hf) and (a, fg)
    ASSERT_EQ(t.coll.set.count(1), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(t.coll.arity[1][i], Tree::path(2));
    EXPECT_EQ(t.coll.set.names[1][2], "a{x,y,z|f,g}");
    validate(t.coll);
}

TEST(Tensor, DegenerateHeadTakesItsLabelsArity)
{
    Collection x = Collection::empty(1);
    x.add(0, "p", Tree::point());
    x.add(1, "e", Tree::point(), 0, 0);
    Collection y = fghColl();
    CollTensor t = tensorColl(x, y);
    ASSERT_EQ(t.coll.set.count(1), 3u);
    for (const auto& a : t.coll.arity[1]) EXPECT_EQ(a, Tree::point());
}

TEST(Tensor, ShapeBoundIsEnforced)
{
    EXPECT_THROW(tensorColl(binary(), fghColl(), 2), BoundsError);
}

TEST(Tensor, IdCollectionsStayDegenerate)
{
    fixtures::forEachGlobSet(2, 2, [](const TruncGlobSet& g) {
        const Collection x = idCollection(g);
        ASSERT_TRUE(isDegenerate(tensorColl(x, x).coll));
    });
    Collection unit0 = unitCollection(0);
    TruncGlobSet p = TruncGlobSet::empty(0);
    p.add(0, "i0");
    EXPECT_EQ(idCollection(p), unit0);
}

TEST(Tensor, ArityIsMuOfTy)
{
    const std::size_t S = 6;
    const FreeGlob t1 = freeCells(terminalGlobSet(2), S);
    fixtures::forEachCollection(2, 2, 3, [&](const Collection& x) {
        const CollTensor t = tensorColl(x, x);
        for (std::size_t k = 0; k <= 2; ++k)
            for (std::size_t i = 0; i < t.head[k].size(); ++i) {
                const Tree& shape = x.arity[k][t.head[k][i]];
                const TreeInfo info = analyze(shape);
                // T(x) sends the labeling to a labeling by cells of T(1)
                LabeledDiagram w{shape, k, {}};
                for (std::size_t c = 0; c < info.cells.size(); ++c) {
                    const auto d = info.cells[c].dim;
                    w.labels.push_back(t1.find(LabeledDiagram{x.arity[d][t.body[k][i][c]], d,
                                                              std::vector<std::size_t>(analyze(x.arity[d][t.body[k][i][c]]).cells.size(), 0)}));
                }
                ASSERT_EQ(mu(t1, w).shape, t.coll.arity[k][i]);
            }
    });
}

TEST(Tensor, CoherenceOnSmallCollections)
{
    std::vector<Collection> xs;
    fixtures::forEachCollection(2, 1, 3, [&](const Collection& c) { xs.push_back(c); });
    std::size_t n = 0;
    for (const auto& x : xs)
        for (const auto& y : xs)
            for (std::size_t z = 0; z < xs.size(); z += 7) {
                auto rep = checkTensorCoherence(x, y, xs[z]);
                ASSERT_TRUE(rep.passed()) << rep.witness;
                ++n;
            }
    EXPECT_GT(n, 100u);
}

TEST(CollectionMap, IdentityAndArityBreaking)
{
    Collection x = binary();
    EXPECT_TRUE(checkCollectionMap(identityCollectionMap(x)).passed());
    Collection y = Collection::empty(1);
    y.add(0, "p", Tree::point());
    y.add(1, "u", Tree::globe(1), 0, 0);
    CollectionMap bad{x, y, GlobMap{{{0, 0}, {0}}}};
    auto rep = checkCollectionMap(bad);
    EXPECT_EQ(rep.status, Status::fail);
    EXPECT_NE(rep.witness.find("a of arity [0,0]"), std::string::npos) << rep.witness;
}

TEST(CollectionMap, ArityMapIntoTerminalCollection)
{
    fixtures::forEachCollection(2, 2, 3, [](const Collection& x) {
        ASSERT_TRUE(checkCollectionMap(arityMap(x, 3)).passed());
    });
    EXPECT_THROW(arityMap(binary(), 2), BoundsError);
}

TEST(CollectionMap, EnumerationMatchesCheck)
{
    fixtures::forEachCollection(1, 2, 3, [](const Collection& x) {
        std::size_t n = 0;
        forEachCollectionMap(x, x, [&](const GlobMap& f) {
            ++n;
            ASSERT_TRUE(checkCollectionMap({x, x, f}).passed());
        });
        ASSERT_GE(n, 1u);
    });
}
