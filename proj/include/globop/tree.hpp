#pragma once

// Batanin trees as cells of T(1): globular pasting diagrams, their cells,
// boundaries, the grid shorthand for dimension <= 2, and substitution mu_1.

#include "globop/error.hpp"
#include "globop/report.hpp"

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace globop {

/// A finite planar rooted tree, stored as the preorder sequence of child counts.
/// Canonical order: fewer nodes first, then lexicographic on the sequence.
struct Tree {
    std::vector<std::uint32_t> deg{0};

    static Tree point() { return Tree{}; }

    /// The single k-globe: a chain of k edges.
    static Tree globe(std::size_t k)
    {
        Tree t;
        t.deg.assign(k + 1, 1);
        t.deg.back() = 0;
        return t;
    }

    /// n composable 1-cells: a root with n leaves.
    static Tree path(std::size_t n)
    {
        Tree t;
        t.deg.assign(n + 1, 0);
        t.deg[0] = static_cast<std::uint32_t>(n);
        return t;
    }

    std::size_t nodes() const { return deg.size(); }

    bool operator==(const Tree&) const = default;
    std::strong_ordering operator<=>(const Tree& o) const
    {
        if (auto c = deg.size() <=> o.deg.size(); c != 0) return c;
        return deg <=> o.deg;
    }
};

/// One cell of the globular set of a tree: the gap-th position below node,
/// of dimension depth(node).
struct TreeCell {
    std::uint32_t node;
    std::uint32_t gap;
    std::uint32_t dim;
};

/// Derived navigation data for a tree. Cells are flattened in the order
/// (dimension, node preorder, gap).
struct TreeInfo {
    std::vector<std::uint32_t> parent, depth, childIndex, end;
    std::vector<std::vector<std::uint32_t>> children;
    std::size_t height = 0;
    std::vector<TreeCell> cells;
    std::vector<std::uint32_t> firstCell;

    std::size_t cellOf(std::size_t node, std::size_t gap) const { return firstCell[node] + gap; }

    /// Source and target cell of a cell of positive dimension.
    std::size_t source(std::size_t c) const
    {
        const auto v = cells[c].node;
        return cellOf(parent[v], childIndex[v]);
    }
    std::size_t target(std::size_t c) const
    {
        const auto v = cells[c].node;
        return cellOf(parent[v], childIndex[v] + 1);
    }
};

inline TreeInfo analyze(const Tree& t)
{
    const std::size_t n = t.deg.size();
    if (n == 0) throw Error("empty tree");
    TreeInfo info;
    info.parent.assign(n, 0);
    info.depth.assign(n, 0);
    info.childIndex.assign(n, 0);
    info.end.assign(n, 0);
    info.children.resize(n);
    // iterative preorder walk: stack of (node, children still to read)
    std::vector<std::pair<std::uint32_t, std::uint32_t>> stack{{0, t.deg[0]}};
    std::uint32_t next = 1;
    while (!stack.empty()) {
        auto& [v, left] = stack.back();
        if (left == 0) {
            info.end[v] = next;
            stack.pop_back();
            continue;
        }
        --left;
        if (next >= n) throw Error("malformed tree degree sequence");
        std::uint32_t c = next++;
        info.parent[c] = v;
        info.depth[c] = info.depth[v] + 1;
        info.childIndex[c] = static_cast<std::uint32_t>(info.children[v].size());
        info.children[v].push_back(c);
        info.height = std::max<std::size_t>(info.height, info.depth[c]);
        stack.emplace_back(c, t.deg[c]);
    }
    if (next != n) throw Error("malformed tree degree sequence");
    info.firstCell.assign(n, 0);
    for (std::uint32_t d = 0; d <= info.height; ++d)
        for (std::uint32_t v = 0; v < n; ++v)
            if (info.depth[v] == d) {
                info.firstCell[v] = static_cast<std::uint32_t>(info.cells.size());
                for (std::uint32_t g = 0; g <= t.deg[v]; ++g) info.cells.push_back({v, g, d});
            }
    return info;
}

inline std::size_t height(const Tree& t) { return analyze(t).height; }

/// Keeps the nodes of depth <= k. `kept[i]` is the original id of new node i.
inline Tree truncate(const Tree& t, std::size_t k, std::vector<std::uint32_t>* kept = nullptr)
{
    const TreeInfo info = analyze(t);
    Tree out;
    out.deg.clear();
    if (kept) kept->clear();
    for (std::uint32_t v = 0; v < t.deg.size(); ++v)
        if (info.depth[v] <= k) {
            out.deg.push_back(info.depth[v] == k ? 0 : t.deg[v]);
            if (kept) kept->push_back(v);
        }
    return out;
}

// ---------------------------------------------------------------- literals

inline std::string treeLiteral(const Tree& t)
{
    std::string s;
    std::size_t pos = 0;
    std::function<void()> rec = [&]() {
        const auto d = t.deg[pos++];
        s += "t(";
        for (std::uint32_t i = 0; i < d; ++i) {
            if (i) s += ",";
            rec();
        }
        s += ")";
    };
    rec();
    return s;
}

/// Column heights of a tree of height <= 2: child i of the root has r_i children.
inline std::optional<std::vector<std::uint32_t>> toGrid(const Tree& t)
{
    const TreeInfo info = analyze(t);
    if (info.height > 2) return std::nullopt;
    std::vector<std::uint32_t> g;
    for (auto c : info.children[0]) g.push_back(t.deg[c]);
    return g;
}

inline Tree fromGrid(const std::vector<std::uint32_t>& g)
{
    Tree t;
    t.deg = {static_cast<std::uint32_t>(g.size())};
    for (auto r : g) {
        t.deg.push_back(r);
        t.deg.insert(t.deg.end(), r, 0);
    }
    return t;
}

inline std::string gridLiteral(const std::vector<std::uint32_t>& g)
{
    std::string s = "[";
    for (std::size_t i = 0; i < g.size(); ++i) s += (i ? "," : "") + std::to_string(g[i]);
    return s + "]";
}

/// Grid form when the height allows it, nested form otherwise.
inline std::string show(const Tree& t)
{
    if (auto g = toGrid(t)) return gridLiteral(*g);
    return treeLiteral(t);
}

/// Raised by the literal parsers; carries the offset of the offending character.
class LiteralError : public Error {
public:
    LiteralError(const std::string& msg, std::size_t offset)
        : Error(msg + " at offset " + std::to_string(offset)), offset(offset)
    {
    }
    std::size_t offset;
};

/// Parses `t(t(),t())` or the grid form `[2,3]` starting at `pos`; advances pos.
inline Tree parseTreeAt(const std::string& s, std::size_t& pos)
{
    auto skip = [&] {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    };
    auto expect = [&](char c) {
        skip();
        if (pos >= s.size() || s[pos] != c) throw LiteralError(std::string("expected '") + c + "'", pos);
        ++pos;
    };
    skip();
    if (pos < s.size() && s[pos] == '[') {
        ++pos;
        std::vector<std::uint32_t> g;
        skip();
        if (pos < s.size() && s[pos] == ']') {
            ++pos;
            return fromGrid(g);
        }
        while (true) {
            skip();
            if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
                throw LiteralError("expected a natural number", pos);
            std::uint64_t v = 0;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                v = v * 10 + static_cast<std::uint64_t>(s[pos++] - '0');
                if (v > 1000000) throw LiteralError("grid entry too large", pos);
            }
            g.push_back(static_cast<std::uint32_t>(v));
            skip();
            if (pos < s.size() && s[pos] == ',') {
                ++pos;
                continue;
            }
            expect(']');
            return fromGrid(g);
        }
    }
    Tree t;
    t.deg.clear();
    std::function<void(std::size_t)> rec = [&](std::size_t depth) {
        if (depth > 64) throw LiteralError("tree literal nested too deeply", pos);
        expect('t');
        expect('(');
        const std::size_t me = t.deg.size();
        t.deg.push_back(0);
        skip();
        if (pos < s.size() && s[pos] == ')') {
            ++pos;
            return;
        }
        while (true) {
            rec(depth + 1);
            ++t.deg[me];
            skip();
            if (pos < s.size() && s[pos] == ',') {
                ++pos;
                continue;
            }
            expect(')');
            return;
        }
    };
    rec(0);
    return t;
}

inline Tree parseTree(const std::string& s)
{
    std::size_t pos = 0;
    Tree t = parseTreeAt(s, pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw LiteralError("trailing characters after pasting literal", pos);
    return t;
}

// ---------------------------------------------------------------- pasting diagrams

/// A cell of T(1): a tree considered as a cell of dimension `dim` >= its height.
struct PastingDiagram {
    Tree tree;
    std::size_t dim = 0;

    bool operator==(const PastingDiagram&) const = default;
    auto operator<=>(const PastingDiagram&) const = default;
};

inline void validate(const PastingDiagram& p)
{
    if (height(p.tree) > p.dim)
        throw BoundsError("pasting diagram " + show(p.tree) + " has height above its dimension " + std::to_string(p.dim));
}

/// The k-dimensional source (= target) shape.
inline PastingDiagram boundary(const PastingDiagram& p, std::size_t k)
{
    return {truncate(p.tree, k), std::min(k, p.dim)};
}

/// The point seen as an n-cell: the n-fold identity on the single object.
inline PastingDiagram idTower(std::size_t n) { return {Tree::point(), n}; }

namespace detail {

/// All trees with exactly n nodes and height <= h (unsorted).
inline void treesExact(std::size_t n, std::size_t h, std::vector<Tree>& out,
                       std::map<std::pair<std::size_t, std::size_t>, std::vector<std::vector<Tree>>>& forestMemo);

/// All ordered forests with exactly n nodes in total, each tree of height <= h.
inline const std::vector<std::vector<Tree>>& forests(
    std::size_t n, std::size_t h, std::map<std::pair<std::size_t, std::size_t>, std::vector<std::vector<Tree>>>& memo)
{
    auto key = std::make_pair(n, h);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<std::vector<Tree>> out;
    if (n == 0) out.emplace_back();
    else
        for (std::size_t first = 1; first <= n; ++first) {
            std::vector<Tree> heads;
            treesExact(first, h, heads, memo);
            const auto& rests = forests(n - first, h, memo);
            for (const auto& t : heads)
                for (const auto& r : rests) {
                    std::vector<Tree> f{t};
                    f.insert(f.end(), r.begin(), r.end());
                    out.push_back(std::move(f));
                }
        }
    return memo[key] = std::move(out);
}

inline void treesExact(std::size_t n, std::size_t h, std::vector<Tree>& out,
                       std::map<std::pair<std::size_t, std::size_t>, std::vector<std::vector<Tree>>>& memo)
{
    if (n == 0) return;
    if (n == 1) {
        out.push_back(Tree::point());
        return;
    }
    if (h == 0) return;
    for (const auto& f : forests(n - 1, h - 1, memo)) {
        Tree t;
        t.deg = {static_cast<std::uint32_t>(f.size())};
        for (const auto& c : f) t.deg.insert(t.deg.end(), c.deg.begin(), c.deg.end());
        out.push_back(std::move(t));
    }
}

} // namespace detail

/// Every tree of height <= D with at most S nodes, in canonical order.
inline std::vector<Tree> enumeratePasting(std::size_t D, std::size_t S)
{
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::vector<Tree>>> memo;
    std::vector<Tree> out;
    for (std::size_t n = 1; n <= S; ++n) detail::treesExact(n, D, out, memo);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------- substitution

/// An outer tree with an inner tree for each of its cells (flat cell order).
/// Compatibility: inner trees of k-cells have height <= k and truncate to the
/// inner trees of their source and target.
struct DiagramOfDiagrams {
    Tree outer;
    std::vector<Tree> inner;
};

/// nodes(outer) + sum over cells of (nodes(inner) - 1).
inline std::size_t totalNodes(const DiagramOfDiagrams& dd)
{
    std::size_t n = dd.outer.nodes();
    for (const auto& t : dd.inner) n += t.nodes() - 1;
    return n;
}

inline void validate(const DiagramOfDiagrams& dd)
{
    const TreeInfo info = analyze(dd.outer);
    if (dd.inner.size() != info.cells.size())
        throw IncompatibleBoundary("expected " + std::to_string(info.cells.size()) + " inner diagrams, got " +
                                   std::to_string(dd.inner.size()));
    for (std::size_t c = 0; c < info.cells.size(); ++c) {
        const auto k = info.cells[c].dim;
        if (height(dd.inner[c]) > k)
            throw IncompatibleBoundary("inner diagram " + show(dd.inner[c]) + " of a " + std::to_string(k) +
                                       "-cell has too large a height");
        if (k == 0) continue;
        Tree b = truncate(dd.inner[c], k - 1);
        if (b != dd.inner[info.source(c)] || b != dd.inner[info.target(c)])
            throw IncompatibleBoundary("inner diagram " + show(dd.inner[c]) + " does not match the diagrams on its boundary");
    }
}

/// The substituted tree, and for each outer cell c and each cell d of its
/// inner tree, the flat index embed[c][d] of the cell it becomes.
struct Substituted {
    Tree result;
    std::vector<std::vector<std::size_t>> embed;
};

namespace detail {

struct SubstState {
    const TreeInfo& oi;
    const std::vector<Tree>& inner;
    const std::vector<TreeInfo>& ii;
    std::vector<std::uint32_t> out;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> at; // (node, gap) per inner cell

    void place(std::size_t c, std::size_t y, std::size_t h, std::uint32_t node, std::uint32_t gap)
    {
        at[c][ii[c].cellOf(y, h)] = {node, gap};
    }

    // sel[c]: slice root inside inner[c], for every outer cell c in the subtree of v
    void run(std::uint32_t v, const std::vector<std::uint32_t>& sel)
    {
        const std::uint32_t N = static_cast<std::uint32_t>(out.size());
        out.push_back(0);
        const auto& us = oi.children[v];
        std::vector<std::uint32_t> len, offset;
        std::uint32_t total = 0;
        for (auto u : us) {
            const auto c = oi.cellOf(u, 0);
            offset.push_back(total);
            len.push_back(inner[c].deg[sel[c]]);
            total += len.back();
        }
        out[N] = total;
        for (std::uint32_t g = 0; g <= us.size(); ++g) {
            const auto c = oi.cellOf(v, g);
            if (inner[c].deg[sel[c]] != 0) throw IncompatibleBoundary("inner diagram of a cell is too high");
            place(c, sel[c], 0, N, g < us.size() ? offset[g] : total);
        }
        for (std::size_t i = 0; i < us.size(); ++i) {
            const auto u = us[i];
            for (std::uint32_t w = u; w < oi.end[u]; ++w)
                for (std::uint32_t g = 0; g <= oi.children[w].size(); ++g) {
                    const auto c = oi.cellOf(w, g);
                    if (inner[c].deg[sel[c]] != len[i])
                        throw IncompatibleBoundary("inner diagrams in one column disagree on their 1-boundary");
                    for (std::uint32_t h = 0; h <= len[i]; ++h) place(c, sel[c], h, N, offset[i] + h);
                }
            for (std::uint32_t j = 0; j < len[i]; ++j) {
                std::vector<std::uint32_t> next(sel);
                for (std::uint32_t w = u; w < oi.end[u]; ++w)
                    for (std::uint32_t g = 0; g <= oi.children[w].size(); ++g) {
                        const auto c = oi.cellOf(w, g);
                        next[c] = ii[c].children[sel[c]][j];
                    }
                run(u, next);
            }
        }
    }
};

} // namespace detail

inline Substituted substituteWithEmbedding(const DiagramOfDiagrams& dd)
{
    validate(dd);
    const TreeInfo oi = analyze(dd.outer);
    std::vector<TreeInfo> ii;
    for (const auto& t : dd.inner) ii.push_back(analyze(t));
    detail::SubstState st{oi, dd.inner, ii, {}, {}};
    for (const auto& info : ii) st.at.emplace_back(info.cells.size(), std::make_pair(~0u, ~0u));
    st.run(0, std::vector<std::uint32_t>(oi.cells.size(), 0));
    Substituted s;
    s.result.deg = std::move(st.out);
    const TreeInfo ri = analyze(s.result);
    for (const auto& row : st.at) {
        std::vector<std::size_t> e;
        for (auto [node, gap] : row) {
            if (node == ~0u) throw Error("substitution left an inner cell unplaced");
            e.push_back(ri.cellOf(node, gap));
        }
        s.embed.push_back(std::move(e));
    }
    return s;
}

inline Tree substitute(const DiagramOfDiagrams& dd) { return substituteWithEmbedding(dd).result; }

/// Every compatible DiagramOfDiagrams with outer height <= D and totalNodes <= S.
inline void forEachDiagramOfDiagrams(std::size_t D, std::size_t S, const std::function<void(const DiagramOfDiagrams&)>& fn)
{
    const auto trees = enumeratePasting(D, S);
    for (const auto& outer : trees) {
        const TreeInfo info = analyze(outer);
        DiagramOfDiagrams dd{outer, std::vector<Tree>(info.cells.size())};
        std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t c, std::size_t used) {
            if (c == info.cells.size()) return fn(dd);
            const auto k = info.cells[c].dim;
            for (const auto& t : trees) {
                if (used + t.nodes() - 1 > S) break;
                if (k == 0) {
                    if (t.nodes() != 1) break;
                } else {
                    if (height(t) > k) continue;
                    Tree b = truncate(t, k - 1);
                    if (b != dd.inner[info.source(c)] || b != dd.inner[info.target(c)]) continue;
                }
                dd.inner[c] = t;
                rec(c + 1, used + t.nodes() - 1);
            }
        };
        rec(0, outer.nodes());
    }
}

/// Inner diagrams that make `outer` substitute to itself: the k-globe on each k-cell.
inline std::vector<Tree> globeInners(const Tree& outer)
{
    std::vector<Tree> out;
    for (const auto& c : analyze(outer).cells) out.push_back(Tree::globe(c.dim));
    return out;
}


/// Restricts per-cell data along truncation to height k: cells that survive
/// keep their data, and each node of depth k takes the data of its first gap
/// (source side) or last gap (target side).
template <class L>
std::vector<L> restrictToBoundary(const Tree& t, const std::vector<L>& labels, std::size_t k, bool targetSide)
{
    const TreeInfo info = analyze(t);
    std::vector<std::uint32_t> kept;
    Tree b = truncate(t, k, &kept);
    const TreeInfo bi = analyze(b);
    std::vector<L> out;
    out.reserve(bi.cells.size());
    for (const auto& c : bi.cells) {
        const auto v = kept[c.node];
        std::size_t gap = c.gap;
        if (c.dim == k) gap = targetSide ? t.deg[v] : 0;
        out.push_back(labels[info.cellOf(v, gap)]);
    }
    return out;
}

/// A pasting diagram of diagrams of diagrams: an outer tree whose k-cells carry
/// k-dimensional diagrams of diagrams, glued along their boundaries.
struct TripleDiagram {
    Tree outer;
    std::vector<DiagramOfDiagrams> cells;
};

/// Substitutes the inner layer into the middle layer first.
inline Tree flattenInnerFirst(const TripleDiagram& td)
{
    DiagramOfDiagrams dd{td.outer, {}};
    for (const auto& c : td.cells) dd.inner.push_back(substitute(c));
    return substitute(dd);
}

/// Substitutes the middle layer into the outer tree first, then transports the
/// inner layer along the embedding. Every representative of a result cell must
/// carry the same inner diagram.
inline Tree flattenOuterFirst(const TripleDiagram& td)
{
    DiagramOfDiagrams mid{td.outer, {}};
    for (const auto& c : td.cells) mid.inner.push_back(c.outer);
    const Substituted s = substituteWithEmbedding(mid);
    std::vector<std::optional<Tree>> inner(analyze(s.result).cells.size());
    for (std::size_t c = 0; c < td.cells.size(); ++c)
        for (std::size_t d = 0; d < s.embed[c].size(); ++d) {
            auto& slot = inner[s.embed[c][d]];
            const Tree& t = td.cells[c].inner[d];
            if (slot && *slot != t) throw IncompatibleBoundary("inner diagrams disagree on a shared cell");
            slot = t;
        }
    DiagramOfDiagrams dd{s.result, {}};
    for (auto& t : inner) dd.inner.push_back(*t);
    return substitute(dd);
}

/// Every TripleDiagram with outer height <= D and at most S nodes in total
/// (outer nodes plus, for each cell, the extra nodes of its diagram of diagrams).
inline void forEachTripleDiagram(std::size_t D, std::size_t S, const std::function<void(const TripleDiagram&)>& fn)
{
    std::vector<DiagramOfDiagrams> all;
    forEachDiagramOfDiagrams(D, S, [&](const DiagramOfDiagrams& dd) { all.push_back(dd); });
    std::vector<std::size_t> heights;
    for (const auto& dd : all) heights.push_back(height(dd.outer));
    auto same = [](const DiagramOfDiagrams& a, const Tree& t, const std::vector<Tree>& in) {
        return a.outer == t && a.inner == in;
    };
    for (const auto& outer : enumeratePasting(D, S)) {
        const TreeInfo info = analyze(outer);
        TripleDiagram td{outer, std::vector<DiagramOfDiagrams>(info.cells.size())};
        std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t c, std::size_t used) {
            if (c == info.cells.size()) return fn(td);
            const std::size_t k = info.cells[c].dim;
            for (std::size_t i = 0; i < all.size(); ++i) {
                const auto& cand = all[i];
                const std::size_t extra = totalNodes(cand) - 1;
                if (used + extra > S || heights[i] > k) continue;
                if (k > 0) {
                    const Tree b = truncate(cand.outer, k - 1);
                    const auto& src = td.cells[info.source(c)];
                    const auto& tgt = td.cells[info.target(c)];
                    if (!same(src, b, restrictToBoundary(cand.outer, cand.inner, k - 1, false))) continue;
                    if (!same(tgt, b, restrictToBoundary(cand.outer, cand.inner, k - 1, true))) continue;
                }
                td.cells[c] = cand;
                rec(c + 1, used + extra);
            }
        };
        rec(0, outer.nodes());
    }
}

/// Unit laws on every tree with <= S nodes and height <= D, associativity on
/// every TripleDiagram within the same bounds.
inline CheckReport checkSubstitutionLaws(std::size_t D, std::size_t S)
{
    CheckReport rep("substitution laws");
    for (const auto& t : enumeratePasting(D, S)) {
        ++rep.cases;
        if (substitute({t, globeInners(t)}) != t) rep.fail("globes on every cell do not give back " + show(t));
        for (std::size_t k = height(t); k <= D; ++k) {
            const Tree g = Tree::globe(k);
            const TreeInfo gi = analyze(g);
            DiagramOfDiagrams dd{g, {}};
            for (const auto& c : gi.cells) dd.inner.push_back(truncate(t, c.dim));
            ++rep.cases;
            if (substitute(dd) != t) rep.fail(show(t) + " on a " + std::to_string(k) + "-globe does not give back itself");
        }
    }
    forEachTripleDiagram(D, S, [&](const TripleDiagram& td) {
        ++rep.cases;
        if (!rep.passed()) return;
        Tree a = flattenInnerFirst(td), b = flattenOuterFirst(td);
        if (a != b) rep.fail("associativity fails over outer " + show(td.outer) + ": " + show(a) + " vs " + show(b));
    });
    return rep;
}

} // namespace globop
