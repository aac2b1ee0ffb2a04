#pragma once

// Truncated globular sets, their labeled pasting diagrams (cells of T(G)),
// the bounded free monad T with unit and multiplication, and cartesianness.

#include "globop/error.hpp"
#include "globop/report.hpp"
#include "globop/tree.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace globop {

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

/// Cells G_0 .. G_dim with source/target maps; src[k] and tgt[k] are empty for k = 0.
struct TruncGlobSet {
    std::size_t dim = 0;
    std::vector<std::vector<std::string>> names{{}};
    std::vector<std::vector<std::size_t>> src{{}}, tgt{{}};

    static TruncGlobSet empty(std::size_t D)
    {
        TruncGlobSet g;
        g.dim = D;
        g.names.assign(D + 1, {});
        g.src.assign(D + 1, {});
        g.tgt.assign(D + 1, {});
        return g;
    }

    std::size_t count(std::size_t k) const { return k <= dim ? names[k].size() : 0; }

    std::size_t add(std::size_t k, std::string name, std::size_t s = 0, std::size_t t = 0)
    {
        if (k > dim) throw BoundsError("cell " + name + " of dimension " + std::to_string(k) + " exceeds " + std::to_string(dim));
        if (k > 0 && (s >= names[k - 1].size() || t >= names[k - 1].size()))
            throw Error("cell " + name + " has a boundary outside dimension " + std::to_string(k - 1));
        names[k].push_back(std::move(name));
        if (k > 0) {
            src[k].push_back(s);
            tgt[k].push_back(t);
        }
        return names[k].size() - 1;
    }

    std::size_t find(std::size_t k, const std::string& name) const
    {
        if (k > dim) return npos;
        for (std::size_t i = 0; i < names[k].size(); ++i)
            if (names[k][i] == name) return i;
        return npos;
    }

    bool operator==(const TruncGlobSet&) const = default;
};

inline TruncGlobSet terminalGlobSet(std::size_t D)
{
    TruncGlobSet g = TruncGlobSet::empty(D);
    for (std::size_t k = 0; k <= D; ++k) g.add(k, "*", 0, 0);
    return g;
}

inline CheckReport checkGlobular(const TruncGlobSet& g)
{
    CheckReport rep("globular");
    for (std::size_t k = 2; k <= g.dim; ++k)
        for (std::size_t x = 0; x < g.count(k); ++x) {
            ++rep.cases;
            const auto s = g.src[k][x], t = g.tgt[k][x];
            if (g.src[k - 1][s] != g.src[k - 1][t])
                rep.fail(g.names[k][x] + ": s(s x) = " + g.names[k - 2][g.src[k - 1][s]] + " but s(t x) = " +
                         g.names[k - 2][g.src[k - 1][t]]);
            else if (g.tgt[k - 1][s] != g.tgt[k - 1][t])
                rep.fail(g.names[k][x] + ": t(s x) = " + g.names[k - 2][g.tgt[k - 1][s]] + " but t(t x) = " +
                         g.names[k - 2][g.tgt[k - 1][t]]);
        }
    return rep;
}

/// cell[k][x] is the image of the k-cell x.
struct GlobMap {
    std::vector<std::vector<std::size_t>> cell;

    std::size_t operator()(std::size_t k, std::size_t x) const { return cell[k][x]; }
    bool operator==(const GlobMap&) const = default;
};

inline GlobMap identityMap(const TruncGlobSet& g)
{
    GlobMap f;
    for (std::size_t k = 0; k <= g.dim; ++k) {
        f.cell.emplace_back();
        for (std::size_t x = 0; x < g.count(k); ++x) f.cell[k].push_back(x);
    }
    return f;
}

inline GlobMap terminalMap(const TruncGlobSet& g)
{
    GlobMap f;
    for (std::size_t k = 0; k <= g.dim; ++k) f.cell.emplace_back(g.count(k), 0);
    return f;
}

inline CheckReport checkGlobMap(const TruncGlobSet& g, const TruncGlobSet& h, const GlobMap& f)
{
    CheckReport rep("globular map");
    if (g.dim != h.dim || f.cell.size() != g.dim + 1) {
        rep.error("dimension mismatch");
        return rep;
    }
    for (std::size_t k = 0; k <= g.dim; ++k) {
        if (f.cell[k].size() != g.count(k)) {
            rep.error("map is not defined on every " + std::to_string(k) + "-cell");
            return rep;
        }
        for (std::size_t x = 0; x < g.count(k); ++x) {
            ++rep.cases;
            if (f.cell[k][x] >= h.count(k)) {
                rep.error("image of " + g.names[k][x] + " is out of range");
                return rep;
            }
            if (k == 0) continue;
            if (h.src[k][f.cell[k][x]] != f.cell[k - 1][g.src[k][x]] || h.tgt[k][f.cell[k][x]] != f.cell[k - 1][g.tgt[k][x]])
                rep.fail(g.names[k][x] + " -> " + h.names[k][f.cell[k][x]] + " does not commute with source/target");
        }
    }
    return rep;
}

// ---------------------------------------------------------------- labelings

/// Optional cumulative cost on labels; a labeling is kept while the summed
/// cost stays within the budget.
struct LabelBudget {
    std::function<std::size_t(std::size_t dim, std::size_t label)> cost;
    std::size_t budget = 0;
};

/// Every globular map from the cells of tree t into g, in lexicographic order
/// of the label vector (flat cell order).
inline void forEachLabeling(const Tree& t, const TruncGlobSet& g, const std::function<void(const std::vector<std::size_t>&)>& fn,
                            const LabelBudget* budget = nullptr)
{
    const TreeInfo info = analyze(t);
    if (info.height > g.dim) return;
    // candidates by (dimension, source, target)
    std::vector<std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>>> byBoundary(g.dim + 1);
    for (std::size_t k = 1; k <= g.dim; ++k)
        for (std::size_t x = 0; x < g.count(k); ++x) byBoundary[k][{g.src[k][x], g.tgt[k][x]}].push_back(x);
    std::vector<std::size_t> all0(g.count(0));
    for (std::size_t x = 0; x < all0.size(); ++x) all0[x] = x;
    static const std::vector<std::size_t> none;

    std::vector<std::size_t> labels(info.cells.size());
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t c, std::size_t spent) {
        if (c == info.cells.size()) return fn(labels);
        const std::size_t k = info.cells[c].dim;
        const std::vector<std::size_t>* cand = &all0;
        if (k > 0) {
            auto it = byBoundary[k].find({labels[info.source(c)], labels[info.target(c)]});
            cand = it == byBoundary[k].end() ? &none : &it->second;
        }
        for (auto x : *cand) {
            std::size_t next = spent;
            if (budget) {
                next += budget->cost(k, x);
                if (next > budget->budget) continue;
            }
            labels[c] = x;
            rec(c + 1, next);
        }
    };
    rec(0, 0);
}

inline std::vector<std::vector<std::size_t>> labelings(const Tree& t, const TruncGlobSet& g)
{
    std::vector<std::vector<std::size_t>> out;
    forEachLabeling(t, g, [&](const std::vector<std::size_t>& l) { out.push_back(l); });
    return out;
}

/// The labelings of one tree with O(log n) lookup of a label vector.
struct LabelingIndex {
    Tree shape;
    std::vector<std::vector<std::size_t>> all;
    std::map<std::vector<std::size_t>, std::size_t> pos;

    LabelingIndex() = default;
    LabelingIndex(const Tree& t, const TruncGlobSet& g) : shape(t), all(labelings(t, g))
    {
        for (std::size_t i = 0; i < all.size(); ++i) pos.emplace(all[i], i);
    }

    std::size_t size() const { return all.size(); }
    std::size_t find(const std::vector<std::size_t>& l) const
    {
        auto it = pos.find(l);
        return it == pos.end() ? npos : it->second;
    }
};

/// A dim-cell of T(G): a pasting diagram of height <= dim with its cells labeled.
struct LabeledDiagram {
    Tree shape;
    std::size_t dim = 0;
    std::vector<std::size_t> labels;

    bool operator==(const LabeledDiagram&) const = default;
    auto operator<=>(const LabeledDiagram&) const = default;
};

/// Boundary of a dim-cell by restriction of the labels, source-side or target-side.
inline LabeledDiagram boundary(const LabeledDiagram& w, bool target)
{
    if (w.dim == 0) throw Error("a 0-cell has no boundary");
    const std::size_t k = w.dim - 1;
    return {truncate(w.shape, k), k, restrictToBoundary(w.shape, w.labels, k, target)};
}

/// Labels of a tree in flat order, dimensions separated by '|'.
inline std::string showLabels(const Tree& t, const std::vector<std::size_t>& labels, const TruncGlobSet& g)
{
    const TreeInfo info = analyze(t);
    std::string s = "{";
    for (std::size_t c = 0; c < info.cells.size(); ++c) {
        if (c > 0) s += info.cells[c].dim != info.cells[c - 1].dim ? "|" : ",";
        s += g.names[info.cells[c].dim][labels[c]];
    }
    return s + "}";
}

inline std::string showLabeled(const LabeledDiagram& w, const TruncGlobSet& g)
{
    std::string s = show(w.shape) + showLabels(w.shape, w.labels, g);
    if (w.dim != height(w.shape)) s += "@" + std::to_string(w.dim);
    return s;
}

/// The single-globe diagram on a k-cell x, its lower cells labeled by the
/// iterated sources and targets of x.
inline LabeledDiagram eta(const TruncGlobSet& g, std::size_t k, std::size_t x)
{
    LabeledDiagram w{Tree::globe(k), k, std::vector<std::size_t>(2 * k + 1)};
    // flat order: node j has cells 2j (gap 0) and 2j+1 (gap 1) for j < k, node k has cell 2k
    w.labels[2 * k] = x;
    std::size_t cur = x;
    for (std::size_t j = k; j > 0; --j) {
        w.labels[2 * (j - 1)] = g.src[j][cur];
        w.labels[2 * (j - 1) + 1] = g.tgt[j][cur];
        cur = g.src[j][cur];
    }
    return w;
}

inline LabeledDiagram applyMap(const GlobMap& f, const LabeledDiagram& w)
{
    LabeledDiagram out{w.shape, w.dim, w.labels};
    const TreeInfo info = analyze(w.shape);
    for (std::size_t c = 0; c < info.cells.size(); ++c) out.labels[c] = f(info.cells[c].dim, w.labels[c]);
    return out;
}

// ---------------------------------------------------------------- bounded T(G)

/// T(G) truncated at dim(G) and restricted to shapes with <= S nodes. The
/// bound is closed under boundaries, so this is again a globular set.
struct FreeGlob {
    TruncGlobSet set;
    std::vector<std::vector<LabeledDiagram>> cells;
    std::map<LabeledDiagram, std::size_t> pos;
    std::size_t S = 0;

    std::size_t find(const LabeledDiagram& w) const
    {
        auto it = pos.find(w);
        return it == pos.end() ? npos : it->second;
    }
    const LabeledDiagram& at(std::size_t k, std::size_t i) const { return cells[k][i]; }
};

inline FreeGlob freeCells(const TruncGlobSet& g, std::size_t S)
{
    FreeGlob fg;
    fg.S = S;
    fg.set = TruncGlobSet::empty(g.dim);
    fg.cells.resize(g.dim + 1);
    const auto shapes = enumeratePasting(g.dim, S);
    for (std::size_t n = 0; n <= g.dim; ++n)
        for (const auto& t : shapes) {
            if (height(t) > n) continue;
            forEachLabeling(t, g, [&](const std::vector<std::size_t>& l) {
                LabeledDiagram w{t, n, l};
                std::size_t s = 0, tg = 0;
                if (n > 0) {
                    s = fg.find(boundary(w, false));
                    tg = fg.find(boundary(w, true));
                }
                fg.pos.emplace(w, fg.cells[n].size());
                fg.set.add(n, showLabeled(w, g), s, tg);
                fg.cells[n].push_back(std::move(w));
            });
        }
    return fg;
}

/// T(f) on bounded cells.
inline GlobMap freeMap(const FreeGlob& from, const FreeGlob& to, const GlobMap& f)
{
    GlobMap out;
    for (std::size_t k = 0; k < from.cells.size(); ++k) {
        out.cell.emplace_back();
        for (const auto& w : from.cells[k]) out.cell[k].push_back(to.find(applyMap(f, w)));
    }
    return out;
}

/// mu_G on one cell of T(T(G)): substitute the shapes of the labels into the
/// outer shape and carry their labels along the embedding.
inline LabeledDiagram mu(const FreeGlob& fg, const LabeledDiagram& outer)
{
    const TreeInfo info = analyze(outer.shape);
    DiagramOfDiagrams dd{outer.shape, {}};
    for (std::size_t c = 0; c < info.cells.size(); ++c) dd.inner.push_back(fg.at(info.cells[c].dim, outer.labels[c]).shape);
    const Substituted s = substituteWithEmbedding(dd);
    LabeledDiagram out{s.result, outer.dim, std::vector<std::size_t>(analyze(s.result).cells.size(), npos)};
    for (std::size_t c = 0; c < info.cells.size(); ++c) {
        const auto& w = fg.at(info.cells[c].dim, outer.labels[c]);
        for (std::size_t d = 0; d < s.embed[c].size(); ++d) {
            auto& slot = out.labels[s.embed[c][d]];
            if (slot != npos && slot != w.labels[d]) throw IncompatibleBoundary("labels disagree on a shared cell");
            slot = w.labels[d];
        }
    }
    return out;
}

/// Every cell of T(T(G)) whose outer shape and inner shapes have <= S nodes in
/// total (the diagram-of-diagrams size).
inline void forEachDoubleCell(const FreeGlob& fg, std::size_t S, const std::function<void(const LabeledDiagram&)>& fn)
{
    const auto shapes = enumeratePasting(fg.set.dim, S);
    for (std::size_t n = 0; n <= fg.set.dim; ++n)
        for (const auto& t : shapes) {
            if (height(t) > n) continue;
            LabelBudget b{[&](std::size_t k, std::size_t x) { return fg.at(k, x).shape.nodes() - 1; }, S - t.nodes()};
            forEachLabeling(t, fg.set, [&](const std::vector<std::size_t>& l) { fn(LabeledDiagram{t, n, l}); }, &b);
        }
}

/// The naturality squares of eta and mu at f: G -> H are pullbacks: the
/// canonical comparison into the pullback is a bijection on the bounded cells.
inline CheckReport checkGlobCartesian(const TruncGlobSet& g, const TruncGlobSet& h, const GlobMap& f, std::size_t S)
{
    CheckReport rep("cartesian");
    if (auto r = checkGlobMap(g, h, f); !r.passed()) {
        rep.absorb(r);
        return rep;
    }
    const FreeGlob tg = freeCells(g, S), th = freeCells(h, S);
    const GlobMap tf = freeMap(tg, th, f);

    // eta: pullback of H_n -> TH_n <- TG_n
    for (std::size_t n = 0; n <= g.dim && n + 1 <= S; ++n) {
        std::size_t pullback = 0;
        for (std::size_t i = 0; i < tg.cells[n].size(); ++i) {
            const auto img = th.at(n, tf(n, i));
            if (img.shape != Tree::globe(n)) continue;
            if (img != eta(h, n, img.labels.back())) continue;
            ++pullback;
        }
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
        for (std::size_t x = 0; x < g.count(n); ++x) {
            ++rep.cases;
            const auto w = tg.find(eta(g, n, x));
            if (th.find(eta(h, n, f(n, x))) != tf(n, w)) {
                rep.fail("eta square does not commute at " + g.names[n][x]);
                return rep;
            }
            if (!seen.emplace(std::make_pair(f(n, x), w), x).second) {
                rep.fail("eta comparison is not injective at " + g.names[n][x]);
                return rep;
            }
        }
        if (seen.size() != pullback) {
            rep.fail("eta square in dimension " + std::to_string(n) + ": pullback has " + std::to_string(pullback) +
                     " cells, comparison hits " + std::to_string(seen.size()));
            return rep;
        }
    }

    // mu: pullback of T2H -> TH <- TG
    std::map<LabeledDiagram, std::vector<std::size_t>> overImage; // (Tf)^{-1} by image diagram
    for (std::size_t n = 0; n <= g.dim; ++n)
        for (std::size_t i = 0; i < tg.cells[n].size(); ++i) overImage[th.at(n, tf(n, i))].push_back(i);
    std::size_t pullback = 0;
    forEachDoubleCell(th, S, [&](const LabeledDiagram& W) {
        auto it = overImage.find(mu(th, W));
        if (it != overImage.end()) pullback += it->second.size();
    });
    std::map<std::pair<LabeledDiagram, std::size_t>, LabeledDiagram> seen;
    forEachDoubleCell(tg, S, [&](const LabeledDiagram& X) {
        if (!rep.passed()) return;
        ++rep.cases;
        LabeledDiagram fx{X.shape, X.dim, X.labels};
        const TreeInfo info = analyze(X.shape);
        for (std::size_t c = 0; c < info.cells.size(); ++c) fx.labels[c] = tf(info.cells[c].dim, X.labels[c]);
        const LabeledDiagram m = mu(tg, X);
        const std::size_t mi = tg.find(m);
        if (mi == npos || mu(th, fx) != th.at(m.dim, tf(m.dim, mi))) {
            rep.fail("mu square does not commute at " + showLabeled(X, tg.set));
            return;
        }
        if (!seen.emplace(std::make_pair(fx, mi), X).second) rep.fail("mu comparison is not injective at " + showLabeled(X, tg.set));
    });
    if (rep.passed() && seen.size() != pullback)
        rep.fail("mu square: pullback has " + std::to_string(pullback) + " cells, comparison hits " + std::to_string(seen.size()));
    return rep;
}

/// The pullback A x_C B of globular sets, cells named "(a,b)".
struct GlobPullback {
    TruncGlobSet set;
    GlobMap first, second;
};

inline GlobPullback globPullback(const TruncGlobSet& a, const TruncGlobSet& b, const GlobMap& f, const GlobMap& g)
{
    GlobPullback p{TruncGlobSet::empty(a.dim), {}, {}};
    p.first.cell.resize(a.dim + 1);
    p.second.cell.resize(a.dim + 1);
    std::vector<std::map<std::pair<std::size_t, std::size_t>, std::size_t>> pos(a.dim + 1);
    for (std::size_t k = 0; k <= a.dim; ++k)
        for (std::size_t x = 0; x < a.count(k); ++x)
            for (std::size_t y = 0; y < b.count(k); ++y) {
                if (f(k, x) != g(k, y)) continue;
                std::size_t s = 0, t = 0;
                if (k > 0) {
                    s = pos[k - 1].at({a.src[k][x], b.src[k][y]});
                    t = pos[k - 1].at({a.tgt[k][x], b.tgt[k][y]});
                }
                pos[k][{x, y}] = p.set.add(k, "(" + a.names[k][x] + "," + b.names[k][y] + ")", s, t);
                p.first.cell[k].push_back(x);
                p.second.cell[k].push_back(y);
            }
    return p;
}

/// T(A x_C B) -> T(A) x_T(C) T(B) is a bijection on bounded cells.
inline CheckReport checkGlobPreservesPullback(const TruncGlobSet& a, const TruncGlobSet& b, const TruncGlobSet& c,
                                              const GlobMap& f, const GlobMap& g, std::size_t S)
{
    CheckReport rep("preserves pullback");
    const GlobPullback p = globPullback(a, b, f, g);
    const FreeGlob tp = freeCells(p.set, S), ta = freeCells(a, S), tb = freeCells(b, S), tc = freeCells(c, S);
    const GlobMap tf = freeMap(ta, tc, f), tgm = freeMap(tb, tc, g);
    const GlobMap t1 = freeMap(tp, ta, p.first), t2 = freeMap(tp, tb, p.second);
    for (std::size_t k = 0; k <= a.dim; ++k) {
        std::map<std::size_t, std::vector<std::size_t>> bByImage;
        for (std::size_t j = 0; j < tb.cells[k].size(); ++j) bByImage[tgm(k, j)].push_back(j);
        std::size_t target = 0;
        for (std::size_t i = 0; i < ta.cells[k].size(); ++i)
            if (auto it = bByImage.find(tf(k, i)); it != bByImage.end()) target += it->second.size();
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
        for (std::size_t i = 0; i < tp.cells[k].size(); ++i) {
            ++rep.cases;
            if (!seen.emplace(std::make_pair(t1(k, i), t2(k, i)), i).second) {
                rep.fail("comparison is not injective at " + tp.set.names[k][i]);
                return rep;
            }
        }
        if (seen.size() != target) {
            rep.fail("dimension " + std::to_string(k) + ": pullback of free cells has " + std::to_string(target) +
                     ", free cells of the pullback " + std::to_string(seen.size()));
            return rep;
        }
    }
    return rep;
}

} // namespace globop
