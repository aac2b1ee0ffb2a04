#pragma once

// Collections: globular sets with an arity map into pasting diagrams, their
// maps, and the composition tensor product with its unit and associativity.

#include "globop/error.hpp"
#include "globop/globset.hpp"
#include "globop/report.hpp"
#include "globop/tree.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace globop {

/// arity[k][x] is the pasting diagram of the k-cell x (height <= k).
struct Collection {
    TruncGlobSet set;
    std::vector<std::vector<Tree>> arity{{}};

    std::size_t dim() const { return set.dim; }

    static Collection empty(std::size_t D)
    {
        Collection c;
        c.set = TruncGlobSet::empty(D);
        c.arity.assign(D + 1, {});
        return c;
    }

    std::size_t add(std::size_t k, std::string name, Tree a, std::size_t s = 0, std::size_t t = 0)
    {
        const std::size_t i = set.add(k, std::move(name), s, t);
        if (arity.size() <= k) arity.resize(set.dim + 1);
        arity[k].push_back(std::move(a));
        return i;
    }

    bool operator==(const Collection&) const = default;
};

/// Throws when the arity map is not a globular map into T(1).
inline void validate(const Collection& c)
{
    if (auto r = checkGlobular(c.set); !r.passed()) throw IncompatibleBoundary("underlying set is not globular: " + r.witness);
    if (c.arity.size() != c.set.dim + 1) throw Error("arity map does not cover every dimension");
    for (std::size_t k = 0; k <= c.set.dim; ++k) {
        if (c.arity[k].size() != c.set.count(k)) throw Error("arity map does not cover every " + std::to_string(k) + "-cell");
        for (std::size_t x = 0; x < c.set.count(k); ++x) {
            const Tree& a = c.arity[k][x];
            if (height(a) > k)
                throw BoundsError("arity " + show(a) + " of " + c.set.names[k][x] + " is higher than its dimension " +
                                  std::to_string(k));
            if (k == 0) continue;
            const Tree b = truncate(a, k - 1);
            if (c.arity[k - 1][c.set.src[k][x]] != b || c.arity[k - 1][c.set.tgt[k][x]] != b)
                throw IncompatibleBoundary("arity " + show(a) + " of " + c.set.names[k][x] +
                                           " does not restrict to the arities of its source and target");
        }
    }
}

/// One cell per dimension over the k-globe.
inline Collection unitCollection(std::size_t D)
{
    Collection c = Collection::empty(D);
    for (std::size_t k = 0; k <= D; ++k) c.add(k, "i" + std::to_string(k), Tree::globe(k), 0, 0);
    return c;
}

/// Every k-cell of X over the point seen as a k-cell.
inline Collection idCollection(const TruncGlobSet& x)
{
    Collection c;
    c.set = x;
    c.arity.assign(x.dim + 1, {});
    for (std::size_t k = 0; k <= x.dim; ++k) c.arity[k].assign(x.count(k), Tree::point());
    return c;
}

inline bool isDegenerate(const Collection& c)
{
    for (const auto& row : c.arity)
        for (const auto& t : row)
            if (t != Tree::point()) return false;
    return true;
}

/// T(1) truncated at dimension D and shapes with <= S nodes; each cell is its own arity.
inline Collection terminalCollection(std::size_t D, std::size_t S)
{
    const FreeGlob f = freeCells(terminalGlobSet(D), S);
    Collection c;
    c.set = TruncGlobSet::empty(D);
    c.arity.assign(D + 1, {});
    for (std::size_t k = 0; k <= D; ++k)
        for (std::size_t i = 0; i < f.cells[k].size(); ++i) {
            const auto& w = f.cells[k][i];
            c.add(k, show(w.shape) + (height(w.shape) != k ? "@" + std::to_string(k) : ""), w.shape,
                  k ? f.set.src[k][i] : 0, k ? f.set.tgt[k][i] : 0);
        }
    return c;
}

/// The pasting diagram obtained by replacing each cell of `shape` with the arity of its label.
inline Substituted composeArity(const Tree& shape, const std::vector<std::size_t>& labels, const Collection& y)
{
    const TreeInfo info = analyze(shape);
    DiagramOfDiagrams dd{shape, {}};
    for (std::size_t c = 0; c < info.cells.size(); ++c) dd.inner.push_back(y.arity[info.cells[c].dim][labels[c]]);
    return substituteWithEmbedding(dd);
}

// ---------------------------------------------------------------- maps

struct CollectionMap {
    Collection source;
    Collection target;
    GlobMap cell;
};

inline CheckReport checkCollectionMap(const CollectionMap& f)
{
    CheckReport rep("collection map");
    rep.absorb(checkGlobMap(f.source.set, f.target.set, f.cell));
    if (!rep.passed()) return rep;
    for (std::size_t k = 0; k <= f.source.dim(); ++k)
        for (std::size_t x = 0; x < f.source.set.count(k); ++x) {
            ++rep.cases;
            const auto y = f.cell(k, x);
            if (f.source.arity[k][x] != f.target.arity[k][y]) {
                rep.fail(f.source.set.names[k][x] + " of arity " + show(f.source.arity[k][x]) + " goes to " +
                         f.target.set.names[k][y] + " of arity " + show(f.target.arity[k][y]));
                return rep;
            }
        }
    return rep;
}

inline CollectionMap identityCollectionMap(const Collection& c) { return {c, c, identityMap(c.set)}; }

inline CollectionMap compose(const CollectionMap& g, const CollectionMap& f)
{
    CollectionMap h{f.source, g.target, {}};
    for (std::size_t k = 0; k < f.cell.cell.size(); ++k) {
        h.cell.cell.emplace_back();
        for (auto y : f.cell.cell[k]) h.cell.cell[k].push_back(g.cell(k, y));
    }
    return h;
}

inline bool isBijective(const CollectionMap& f)
{
    for (std::size_t k = 0; k <= f.source.dim(); ++k) {
        if (f.source.set.count(k) != f.target.set.count(k)) return false;
        std::vector<bool> hit(f.target.set.count(k), false);
        for (auto y : f.cell.cell[k]) {
            if (hit[y]) return false;
            hit[y] = true;
        }
    }
    return true;
}

/// The arity map of c as a collection map into the bounded terminal collection.
inline CollectionMap arityMap(const Collection& c, std::size_t S)
{
    CollectionMap m{c, terminalCollection(c.dim(), S), {}};
    for (std::size_t k = 0; k <= c.dim(); ++k) {
        m.cell.cell.emplace_back();
        for (const auto& a : c.arity[k]) {
            std::size_t i = 0;
            while (i < m.target.arity[k].size() && m.target.arity[k][i] != a) ++i;
            if (i == m.target.arity[k].size()) throw BoundsError("arity " + show(a) + " exceeds the shape bound");
            m.cell.cell[k].push_back(i);
        }
    }
    return m;
}

/// Every collection map a -> b, by backtracking in dimension order.
inline void forEachCollectionMap(const Collection& a, const Collection& b, const std::function<void(const GlobMap&)>& fn)
{
    GlobMap f;
    for (std::size_t k = 0; k <= a.dim(); ++k) f.cell.emplace_back(a.set.count(k), 0);
    std::vector<std::pair<std::size_t, std::size_t>> order;
    for (std::size_t k = 0; k <= a.dim(); ++k)
        for (std::size_t x = 0; x < a.set.count(k); ++x) order.emplace_back(k, x);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == order.size()) return fn(f);
        const auto [k, x] = order[i];
        for (std::size_t y = 0; y < b.set.count(k); ++y) {
            if (b.arity[k][y] != a.arity[k][x]) continue;
            if (k > 0 && (b.set.src[k][y] != f(k - 1, a.set.src[k][x]) || b.set.tgt[k][y] != f(k - 1, a.set.tgt[k][x])))
                continue;
            f.cell[k][x] = y;
            rec(i + 1);
        }
    };
    rec(0);
}

// ---------------------------------------------------------------- tensor

/// X [] Y: cells are a head a of X with a labeling of arity(a) by Y.
struct CollTensor {
    Collection coll;
    std::vector<std::vector<std::size_t>> head;                 // head[k][i]
    std::vector<std::vector<std::vector<std::size_t>>> body;    // body[k][i]
    std::vector<std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t>> pos;

    std::size_t find(std::size_t k, std::size_t h, const std::vector<std::size_t>& b) const
    {
        auto it = pos[k].find({h, b});
        return it == pos[k].end() ? npos : it->second;
    }
};

/// maxShape bounds the head arities (node count); a larger one is a BoundsError.
inline CollTensor tensorColl(const Collection& x, const Collection& y, std::size_t maxShape = npos)
{
    if (x.dim() != y.dim()) throw Error("tensor of collections of different dimensions");
    const std::size_t D = x.dim();
    CollTensor t;
    t.coll = Collection::empty(D);
    t.head.resize(D + 1);
    t.body.resize(D + 1);
    t.pos.resize(D + 1);
    for (std::size_t k = 0; k <= D; ++k)
        for (std::size_t a = 0; a < x.set.count(k); ++a) {
            const Tree& shape = x.arity[k][a];
            if (shape.nodes() > maxShape)
                throw BoundsError("arity " + show(shape) + " of " + x.set.names[k][a] + " exceeds the shape bound " +
                                  std::to_string(maxShape));
            forEachLabeling(shape, y.set, [&](const std::vector<std::size_t>& l) {
                std::size_t s = 0, tg = 0;
                if (k > 0) {
                    const LabeledDiagram w{shape, k, l};
                    s = t.find(k - 1, x.set.src[k][a], boundary(w, false).labels);
                    tg = t.find(k - 1, x.set.tgt[k][a], boundary(w, true).labels);
                }
                const std::size_t i = t.coll.add(k, x.set.names[k][a] + showLabels(shape, l, y.set),
                                                 composeArity(shape, l, y).result, s, tg);
                t.head[k].push_back(a);
                t.body[k].push_back(l);
                t.pos[k].emplace(std::make_pair(a, l), i);
            });
        }
    return t;
}

/// f [] g on cells: apply f to the head and g to every label.
inline GlobMap tensorMap(const CollTensor& from, const CollTensor& to, const GlobMap& f, const GlobMap& g,
                         const Collection& xSrc)
{
    GlobMap out;
    for (std::size_t k = 0; k < from.head.size(); ++k) {
        out.cell.emplace_back();
        for (std::size_t i = 0; i < from.head[k].size(); ++i) {
            const auto a = from.head[k][i];
            const TreeInfo info = analyze(xSrc.arity[k][a]);
            std::vector<std::size_t> b = from.body[k][i];
            for (std::size_t c = 0; c < b.size(); ++c) b[c] = g(info.cells[c].dim, b[c]);
            out.cell[k].push_back(to.find(k, f(k, a), b));
        }
    }
    return out;
}

/// X [] I -> X, the head projection.
inline CollectionMap rightUnitorColl(const Collection& x, const CollTensor& xi)
{
    CollectionMap m{xi.coll, x, {}};
    for (const auto& row : xi.head) m.cell.cell.push_back(row);
    return m;
}

/// I [] X -> X, the label on the top cell of the globe.
inline CollectionMap leftUnitorColl(const Collection& x, const CollTensor& ix)
{
    CollectionMap m{ix.coll, x, {}};
    for (const auto& row : ix.body) {
        m.cell.cell.emplace_back();
        for (const auto& b : row) m.cell.cell.back().push_back(b.back());
    }
    return m;
}

/// Splits a labeling of a substituted shape into the labelings of the pieces.
inline std::vector<std::size_t> pullLabels(const std::vector<std::size_t>& whole, const std::vector<std::size_t>& embed)
{
    std::vector<std::size_t> out;
    out.reserve(embed.size());
    for (auto e : embed) out.push_back(whole[e]);
    return out;
}

/// The associator (X [] Y) [] Z -> X [] (Y [] Z): ((a, phi), chi) goes to
/// (a, psi) with psi_c = (phi_c, chi restricted to the block of c).
struct CollAssociator {
    CollTensor xy, xy_z, yz, x_yz;
    CollectionMap forward;
};

inline CollAssociator associatorColl(const Collection& x, const Collection& y, const Collection& z)
{
    CollAssociator a;
    a.xy = tensorColl(x, y);
    a.xy_z = tensorColl(a.xy.coll, z);
    a.yz = tensorColl(y, z);
    a.x_yz = tensorColl(x, a.yz.coll);
    a.forward = {a.xy_z.coll, a.x_yz.coll, {}};
    for (std::size_t k = 0; k <= x.dim(); ++k) {
        a.forward.cell.cell.emplace_back();
        for (std::size_t i = 0; i < a.xy_z.head[k].size(); ++i) {
            const auto inner = a.xy_z.head[k][i];
            const auto& chi = a.xy_z.body[k][i];
            const auto head = a.xy.head[k][inner];
            const auto& phi = a.xy.body[k][inner];
            const Tree& shape = x.arity[k][head];
            const TreeInfo info = analyze(shape);
            const Substituted s = composeArity(shape, phi, y);
            std::vector<std::size_t> psi;
            for (std::size_t c = 0; c < info.cells.size(); ++c) {
                const auto d = info.cells[c].dim;
                psi.push_back(a.yz.find(d, phi[c], pullLabels(chi, s.embed[c])));
            }
            a.forward.cell.cell[k].push_back(a.x_yz.find(k, head, psi));
        }
    }
    return a;
}

/// Unit and associativity bijections of [] on the given collections.
inline CheckReport checkTensorCoherence(const Collection& x, const Collection& y, const Collection& z)
{
    CheckReport rep("tensor coherence");
    const Collection i = unitCollection(x.dim());
    const CollTensor xi = tensorColl(x, i), ix = tensorColl(i, x);
    for (const auto& [name, m] : {std::pair{"right unitor", rightUnitorColl(x, xi)}, std::pair{"left unitor", leftUnitorColl(x, ix)}}) {
        auto r = checkCollectionMap(m);
        r.name = name;
        rep.absorb(r);
        ++rep.cases;
        if (!isBijective(m)) rep.fail(std::string(name) + " is not bijective");
    }
    const CollAssociator a = associatorColl(x, y, z);
    for (const auto& row : a.forward.cell.cell)
        for (auto v : row)
            if (v == npos) {
                rep.fail("associator leaves a cell without image");
                return rep;
            }
    auto r = checkCollectionMap(a.forward);
    r.name = "associator";
    rep.absorb(r);
    ++rep.cases;
    if (!isBijective(a.forward)) rep.fail("associator is not bijective");
    return rep;
}

} // namespace globop
