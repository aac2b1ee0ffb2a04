#include "globop/graded.hpp"
#include "small_instances.hpp"

#include <gtest/gtest.h>

using namespace globop;

TEST(Tensor, CardinalityAndArity)
{
    GradedSet x{{"a", 2}, {"b", 0}};
    GradedSet y{{"u", 1}, {"v", 0}};
    Tensor t = tensor(x, y);
    EXPECT_EQ(t.size(), 5u);
    std::size_t i = t.find(0, Word{0, 1});
    EXPECT_EQ(t.set.names[i], "a(u,v)");
    EXPECT_EQ(t.set.arity[i], 1u);
    EXPECT_EQ(t.set.names[t.find(1, Word{})], "b()");
}

TEST(Tensor, UnitOnEitherSideHasSizeOfX)
{
    GradedSet x{{"a", 2}, {"b", 0}, {"c", 1}};
    EXPECT_EQ(tensor(x, unitSet()).size(), x.size());
    EXPECT_EQ(tensor(unitSet(), x).size(), x.size());
}

TEST(Tensor, CardinalityFormulaOnSmallInstances)
{
    fixtures::forEachGradedSet(2, 2, [](const GradedSet& x) {
        fixtures::forEachGradedSet(3, 2, [&](const GradedSet& y) {
            std::size_t expect = 0;
            for (auto a : x.arity) {
                std::size_t p = 1;
                for (std::size_t k = 0; k < a; ++k) p *= y.size();
                expect += p;
            }
            ASSERT_EQ(tensor(x, y).size(), expect);
        });
    });
}

TEST(Unitors, InversePairs)
{
    GradedSet x{{"a", 2}, {"b", 0}, {"c", 1}};
    Tensor xu = tensor(x, unitSet());
    Tensor ux = tensor(unitSet(), x);
    EXPECT_EQ(compose(rightUnitor(xu), rightUnitorInverse(x, xu)), GradedMap::identity(3));
    EXPECT_EQ(compose(rightUnitorInverse(x, xu), rightUnitor(xu)), GradedMap::identity(3));
    EXPECT_EQ(compose(leftUnitor(ux), leftUnitorInverse(x, ux)), GradedMap::identity(3));
    GradedMap lambda = leftUnitor(ux);
    for (std::size_t u = 0; u < x.size(); ++u) EXPECT_EQ(lambda(ux.find(0, Word{u})), u);
    validate(xu.set, x, rightUnitor(xu));
    validate(ux.set, x, lambda);
}

TEST(Associator, ExampleInstance)
{
    GradedSet x{{"a", 1}}, y{{"u", 2}}, z{{"p", 0}, {"q", 0}};
    Associator a = associator(x, y, z);
    EXPECT_EQ(a.x_yz.size(), 4u);
    EXPECT_EQ(a.xy_z.size(), 4u);
    EXPECT_TRUE(checkAssociator(x, y, z).passed());
    // (a, [(u, pq)]) goes to ((a, u), pq)
    std::size_t src = a.x_yz.find(0, Word{a.yz.find(0, Word{0, 1})});
    EXPECT_EQ(a.xy_z.set.names[a.forward(src)], "a(u)(p,q)");
}

TEST(Coherence, PentagonAndTrianglesOnAllSmallInstances)
{
    std::size_t n = 0;
    fixtures::forEachGradedSet(2, 2, [&](const GradedSet& x) {
        fixtures::forEachGradedSet(2, 2, [&](const GradedSet& y) {
            ASSERT_TRUE(checkTriangles(x, y).passed());
            fixtures::forEachGradedSet(1, 2, [&](const GradedSet& z) {
                ASSERT_TRUE(checkAssociator(x, y, z).passed());
                ++n;
            });
        });
    });
    EXPECT_GT(n, 100u);
    GradedSet w{{"a", 2}, {"b", 1}}, x{{"c", 2}, {"d", 0}}, y{{"e", 1}, {"f", 2}}, z{{"g", 0}, {"h", 1}};
    auto rep = checkPentagon(w, x, y, z);
    EXPECT_TRUE(rep.passed()) << rep.witness;
}

TEST(Monad, MultConcatenates)
{
    EXPECT_EQ(monad::mult({{0, 1}, {}, {2}}), (Word{0, 1, 2}));
    EXPECT_TRUE(monad::checkMonadLaws(3, 3).passed());
}

TEST(Monad, CartesianExamples)
{
    EXPECT_TRUE(monad::checkCartesian({0, 1}, 2, 2, 3).passed());
    EXPECT_TRUE(monad::checkCartesian({0, 0}, 2, 1, 3).passed());
    monad::Mult bad = [](const monad::Nested& ww) {
        if (ww == monad::Nested{{0}, {1}}) return Word{1, 0};
        return monad::mult(ww);
    };
    auto rep = monad::checkCartesian({0, 0}, 2, 1, 3, bad);
    EXPECT_EQ(rep.status, Status::fail);
    EXPECT_NE(rep.witness.find("[[0],[1]]"), std::string::npos) << rep.witness;
    EXPECT_FALSE(monad::checkMonadLaws(2, 3, bad).passed());
}

TEST(Monad, PreservesPullbacks)
{
    EXPECT_TRUE(monad::checkPreservesPullback({0, 0, 1}, {0, 1}, 3).passed());
    EXPECT_TRUE(monad::checkPreservesPullback({0, 1}, {1, 1, 0}, 3).passed());
}

TEST(Exponential, Sizes)
{
    GradedSet a{{"p", 1}, {"q", 1}}, b{{"u", 1}, {"v", 1}};
    EXPECT_EQ(exponentialFiber(a, b, 1).size(), 4u);
    EXPECT_EQ(exponentialFiber(a, b, 0).size(), 1u);
    auto fib = exponentialFiber(a, a, 1);
    EXPECT_NE(std::find(fib.begin(), fib.end(), std::vector<std::size_t>{0, 1}), fib.end());
}

TEST(HomFiber, Examples)
{
    EXPECT_EQ(homFiber(GradedSet{{"u", 1}}, GradedSet{{"p", 2}}, 2).size(), 1u);
    GradedSet x{{"x", 0}, {"y", 0}};
    EXPECT_EQ(homFiber(x, x, 1).size(), 4u);
    GradedSet a{{"p", 0}, {"q", 1}, {"r", 0}};
    EXPECT_EQ(homFiber(x, a, 0).size(), 2u);
}

TEST(HomFiber, ProductFormulaOnSmallInstances)
{
    fixtures::forEachGradedSet(2, 2, [](const GradedSet& b) {
        fixtures::forEachGradedSet(3, 4, [&](const GradedSet& a) {
            for (std::size_t n = 0; n <= 2; ++n) {
                std::size_t expect = 1;
                forEachWord(b.size(), n, [&](const Word& w) { expect *= a.ofArity(wordArity(b, w)).size(); });
                auto fib = homFiber(b, a, n);
                ASSERT_EQ(fib.size(), expect);
                for (const auto& h : fib) validate(b, a, h);
            }
        });
    });
}

TEST(Curry, LeftUnitorCurriesToIdentityTable)
{
    GradedSet x{{"a", 2}, {"b", 0}, {"c", 1}};
    GradedSet u = unitSet();
    Tensor ux = tensor(u, x);
    auto e = curry(u, x, x, ux, leftUnitor(ux));
    ASSERT_EQ(e.size(), 1u);
    EXPECT_EQ(e[0], (HomElem{1, {0, 1, 2}}));
}

TEST(Curry, RoundtripOnAllSmallInstances)
{
    std::size_t n = 0;
    fixtures::forEachGradedSet(2, 2, [&](const GradedSet& a) {
        fixtures::forEachGradedSet(2, 2, [&](const GradedSet& b) {
            fixtures::forEachGradedSet(2, 2, [&](const GradedSet& c) {
                auto rep = checkCurryAdjunction(a, b, c);
                ASSERT_TRUE(rep.passed()) << rep.witness;
                ++n;
            });
        });
    });
    EXPECT_EQ(n, 13u * 13u * 13u);
}

TEST(Curry, UncurryOfIdentityIsEvaluation)
{
    GradedSet b{{"u", 1}, {"v", 0}}, c{{"p", 1}, {"q", 0}, {"r", 2}};
    HomSet h = homSet(b, c, 2);
    Tensor hb = tensor(h.set, b);
    std::vector<HomElem> id = h.elems;
    EXPECT_EQ(uncurry(h.set, b, c, hb, id), evaluation(h, b, hb));
}

TEST(Curry, RejectsNonArityPreservingMap)
{
    GradedSet a{{"a", 1}}, b{{"u", 0}}, c{{"p", 0}, {"q", 1}};
    Tensor ab = tensor(a, b);
    GradedMap bad{{1}};
    EXPECT_THROW(curry(a, b, c, ab, bad), ArityError);
}
