#pragma once

// Globular operads as monoids in Coll, the internal hom [B,A], the
// tautological globular operad Taut(X), collection algebras, and Leinster's
// presentation of algebras as families of functions h_pi.

#include "globop/collection.hpp"
#include "globop/error.hpp"
#include "globop/globset.hpp"
#include "globop/operad.hpp"
#include "globop/report.hpp"
#include "globop/tree.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace globop {

// ---------------------------------------------------------------- labeling cache

/// Labelings of every shape of height <= dim and at most S nodes by the cells of
/// one collection, with the composite arity of each labeling and the indices of
/// its source-side and target-side restrictions. Read-only after construction.
class LabelCache {
public:
    struct Entry {
        Tree shape;
        std::size_t height = 0;
        LabelingIndex index;
        std::vector<Tree> composite;
        std::vector<std::size_t> src, tgt;
    };

    LabelCache(Collection c, std::size_t S) : coll_(std::move(c)), bound_(S)
    {
        validate(coll_);
        shapes_ = enumeratePasting(coll_.dim(), S);
        for (const auto& t : shapes_) {
            Entry e;
            e.shape = t;
            e.height = height(t);
            e.index = LabelingIndex(t, coll_.set);
            for (const auto& l : e.index.all) e.composite.push_back(composeArity(t, l, coll_).result);
            if (e.height > 0) {
                const Entry& below = entries_.at(truncate(t, e.height - 1));
                for (const auto& l : e.index.all) {
                    e.src.push_back(below.index.find(restrictToBoundary(t, l, e.height - 1, false)));
                    e.tgt.push_back(below.index.find(restrictToBoundary(t, l, e.height - 1, true)));
                }
            }
            entries_.emplace(t, std::move(e));
        }
    }

    const Collection& coll() const { return coll_; }
    std::size_t bound() const { return bound_; }
    const std::vector<Tree>& shapes() const { return shapes_; }

    const Entry* find(const Tree& t) const
    {
        auto it = entries_.find(t);
        return it == entries_.end() ? nullptr : &it->second;
    }

    const Entry& at(const Tree& t) const
    {
        if (const Entry* e = find(t)) return *e;
        throw BoundsError("shape " + show(t) + " is outside the bounds (dimension " + std::to_string(coll_.dim()) +
                          ", " + std::to_string(bound_) + " nodes)");
    }

    /// Labeling i of t seen as a j-cell, restricted to its (j-1)-boundary.
    std::size_t restrict(const Tree& t, std::size_t j, std::size_t i, bool target) const
    {
        const Entry& e = at(t);
        if (e.height < j) return i;
        return target ? e.tgt[i] : e.src[i];
    }

private:
    Collection coll_;
    std::size_t bound_;
    std::vector<Tree> shapes_;
    std::map<Tree, Entry> entries_;
};

// ---------------------------------------------------------------- hom cells

/// A dim-cell of [B,A] over `shape`: for every level j <= dim a table from the
/// labelings of truncate(shape, j) by B to j-cells of A. Level dim holds one
/// table; each lower level a source-side and a target-side table. Entries may
/// be npos in partial cells.
struct HomCell {
    Tree shape;
    std::size_t dim = 0;
    std::vector<std::size_t> top;
    std::vector<std::array<std::vector<std::size_t>, 2>> lower;

    bool operator==(const HomCell&) const = default;
    auto operator<=>(const HomCell&) const = default;
};

inline HomCell homBoundary(const HomCell& h, bool target)
{
    if (h.dim == 0) throw Error("a 0-cell has no boundary");
    return {truncate(h.shape, h.dim - 1), h.dim - 1, h.lower[h.dim - 1][target ? 1 : 0],
            std::vector<std::array<std::vector<std::size_t>, 2>>(h.lower.begin(), h.lower.end() - 1)};
}

/// `[0,0]@1(x,y|x,y|f,g)`: the lower tables from level 0 up, then the top table.
inline std::string serialize(const HomCell& h, const TruncGlobSet& a)
{
    auto table = [&](std::size_t j, const std::vector<std::size_t>& t) {
        std::string s;
        for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + (t[i] == npos ? std::string("-") : a.names[j][t[i]]);
        return s;
    };
    std::string s = show(h.shape) + "@" + std::to_string(h.dim) + "(";
    for (std::size_t j = 0; j < h.lower.size(); ++j) s += table(j, h.lower[j][0]) + "|" + table(j, h.lower[j][1]) + "|";
    return s + table(h.dim, h.top) + ")";
}

/// Why h is not a cell of [B,A], or nullopt when it is.
inline std::optional<std::string> homCellDefect(const HomCell& h, const LabelCache& b, const Collection& a)
{
    if (h.dim > a.dim()) return "dimension " + std::to_string(h.dim) + " exceeds " + std::to_string(a.dim());
    if (height(h.shape) > h.dim) return "shape " + show(h.shape) + " is higher than the cell";
    if (h.lower.size() != h.dim) return std::string("wrong number of lower levels");
    for (std::size_t j = 0; j <= h.dim; ++j) {
        const Tree sj = truncate(h.shape, j);
        const auto& e = b.at(sj);
        const int sides = j == h.dim ? 1 : 2;
        for (int side = 0; side < sides; ++side) {
            const auto& t = j == h.dim ? h.top : h.lower[j][side];
            if (t.size() != e.index.size()) return "table at level " + std::to_string(j) + " has the wrong size";
            for (std::size_t i = 0; i < t.size(); ++i) {
                const auto v = t[i];
                const std::string at = "level " + std::to_string(j) + " input " + showLabels(sj, e.index.all[i], b.coll().set);
                if (v == npos) return "no value at " + at;
                if (v >= a.set.count(j)) return "value out of range at " + at;
                if (a.arity[j][v] != e.composite[i])
                    return a.set.names[j][v] + " at " + at + " has arity " + show(a.arity[j][v]) + ", expected " + show(e.composite[i]);
                if (j == 0) continue;
                if (a.set.src[j][v] != h.lower[j - 1][0][b.restrict(sj, j, i, false)] ||
                    a.set.tgt[j][v] != h.lower[j - 1][1][b.restrict(sj, j, i, true)])
                    return a.set.names[j][v] + " at " + at + " does not match the lower tables";
            }
        }
    }
    return std::nullopt;
}

/// Every cell of [B,A] of dimension k over the given shape.
inline void forEachHomCell(const LabelCache& b, const Collection& a, const Tree& shape, std::size_t k,
                           const std::function<void(const HomCell&)>& fn)
{
    if (height(shape) > k || k > a.dim()) return;
    HomCell h{shape, k, {}, {}};
    // levels keep pointers into lower while deeper ones push
    h.lower.reserve(k);
    // every table at level j compatible with lower tables s, t
    auto tables = [&](std::size_t j, const std::vector<std::size_t>* s, const std::vector<std::size_t>* t,
                      const std::function<void(const std::vector<std::size_t>&)>& each) {
        const Tree sj = truncate(shape, j);
        const auto& e = b.at(sj);
        std::vector<std::vector<std::size_t>> cand(e.index.size());
        for (std::size_t i = 0; i < e.index.size(); ++i) {
            for (std::size_t v = 0; v < a.set.count(j); ++v) {
                if (a.arity[j][v] != e.composite[i]) continue;
                if (j > 0 && (a.set.src[j][v] != (*s)[b.restrict(sj, j, i, false)] ||
                              a.set.tgt[j][v] != (*t)[b.restrict(sj, j, i, true)]))
                    continue;
                cand[i].push_back(v);
            }
            if (cand[i].empty()) return;
        }
        std::vector<std::size_t> digit(cand.size(), 0), val(cand.size());
        while (true) {
            for (std::size_t i = 0; i < cand.size(); ++i) val[i] = cand[i][digit[i]];
            each(val);
            std::size_t i = cand.size();
            while (i > 0) {
                if (++digit[i - 1] < cand[i - 1].size()) break;
                digit[i - 1] = 0;
                --i;
            }
            if (i == 0) return;
        }
    };
    std::function<void(std::size_t)> level = [&](std::size_t j) {
        const std::vector<std::size_t>* s = j ? &h.lower[j - 1][0] : nullptr;
        const std::vector<std::size_t>* t = j ? &h.lower[j - 1][1] : nullptr;
        if (j == k) {
            tables(j, s, t, [&](const std::vector<std::size_t>& top) {
                h.top = top;
                fn(h);
            });
            return;
        }
        tables(j, s, t, [&](const std::vector<std::size_t>& sj) {
            const std::vector<std::size_t> first = sj;
            tables(j, s, t, [&](const std::vector<std::size_t>& tj) {
                h.lower.push_back({first, tj});
                level(j + 1);
                h.lower.pop_back();
            });
        });
    };
    level(0);
}

/// [B,A] restricted to the shapes of the cache, as a collection.
struct HomCollection {
    Collection coll;
    std::vector<std::vector<HomCell>> cells;
    std::vector<std::map<HomCell, std::size_t>> pos;

    std::size_t find(const HomCell& h) const
    {
        if (h.dim >= pos.size()) return npos;
        auto it = pos[h.dim].find(h);
        return it == pos[h.dim].end() ? npos : it->second;
    }
};

inline HomCollection homCollection(const LabelCache& b, const Collection& a)
{
    const std::size_t D = a.dim();
    HomCollection hc;
    hc.coll = Collection::empty(D);
    hc.cells.resize(D + 1);
    hc.pos.resize(D + 1);
    for (std::size_t k = 0; k <= D; ++k)
        for (const auto& t : b.shapes())
            forEachHomCell(b, a, t, k, [&](const HomCell& h) {
                std::size_t s = 0, tg = 0;
                if (k > 0) {
                    s = hc.find(homBoundary(h, false));
                    tg = hc.find(homBoundary(h, true));
                }
                const std::size_t i = hc.coll.add(k, serialize(h, a.set), h.shape, s, tg);
                hc.cells[k].push_back(h);
                hc.pos[k].emplace(h, i);
            });
    return hc;
}

// ---------------------------------------------------------------- Taut(X)

/// The identity operation on k-cells: over the k-globe, every level sends a
/// labeling to the label of its top cell.
inline HomCell globTautUnit(const LabelCache& x, std::size_t k)
{
    auto ident = [&](std::size_t j) {
        const auto& e = x.at(Tree::globe(j));
        std::vector<std::size_t> t;
        for (const auto& l : e.index.all) t.push_back(l.back());
        return t;
    };
    HomCell h{Tree::globe(k), k, ident(k), {}};
    for (std::size_t j = 0; j < k; ++j) h.lower.push_back({ident(j), ident(j)});
    return h;
}

/// Evaluates each body cell on its block of the input labeling, then g; lower
/// levels are the composites of the boundaries.
inline HomCell globTautCompose(const LabelCache& x, const HomCell& g, const std::vector<HomCell>& body)
{
    const TreeInfo info = analyze(g.shape);
    if (body.size() != info.cells.size())
        throw ArityError("compose: shape " + show(g.shape) + " has " + std::to_string(info.cells.size()) + " cells, body has " +
                         std::to_string(body.size()));
    DiagramOfDiagrams dd{g.shape, {}};
    for (std::size_t c = 0; c < info.cells.size(); ++c) {
        if (body[c].dim != info.cells[c].dim) throw ArityError("compose: body cell of the wrong dimension");
        if (info.cells[c].dim > 0 &&
            (homBoundary(body[c], false) != body[info.source(c)] || homBoundary(body[c], true) != body[info.target(c)]))
            throw IncompatibleBoundary("compose: body cells do not agree on shared boundaries");
        dd.inner.push_back(body[c].shape);
    }
    const Substituted s = substituteWithEmbedding(dd);
    const auto& re = x.at(s.result);
    const auto& ge = x.at(g.shape);
    std::vector<const LabelCache::Entry*> pe;
    for (const auto& h : body) pe.push_back(&x.at(h.shape));
    HomCell out{s.result, g.dim, std::vector<std::size_t>(re.index.size(), npos), {}};
    std::vector<std::size_t> beta(info.cells.size());
    for (std::size_t i = 0; i < re.index.size(); ++i) {
        bool ok = true;
        for (std::size_t c = 0; c < info.cells.size() && ok; ++c) {
            const auto idx = pe[c]->index.find(pullLabels(re.index.all[i], s.embed[c]));
            beta[c] = idx == npos ? npos : body[c].top[idx];
            ok = beta[c] != npos;
        }
        if (!ok) continue;
        const auto bi = ge.index.find(beta);
        if (bi != npos) out.top[i] = g.top[bi];
    }
    if (g.dim > 0) {
        const HomCell src = globTautCompose(x, homBoundary(g, false), restrictToBoundary(g.shape, body, g.dim - 1, false));
        const HomCell tgt = globTautCompose(x, homBoundary(g, true), restrictToBoundary(g.shape, body, g.dim - 1, true));
        out.lower = src.lower;
        out.lower.push_back({src.top, tgt.top});
    }
    return out;
}

/// The partial cell with a single top entry (labeling i |-> r) and the lower
/// entries that entry forces: iterated sources of r on source-side
/// restrictions, iterated targets on target-side ones.
inline HomCell pointCell(const LabelCache& x, const Tree& shape, std::size_t k, std::size_t i, std::size_t r)
{
    const Collection& c = x.coll();
    HomCell h{shape, k, std::vector<std::size_t>(x.at(shape).index.size(), npos), {}};
    h.top[i] = r;
    for (std::size_t j = 0; j < k; ++j)
        h.lower.push_back({std::vector<std::size_t>(x.at(truncate(shape, j)).index.size(), npos),
                           std::vector<std::size_t>(x.at(truncate(shape, j)).index.size(), npos)});
    std::size_t is = i, it = i, vs = r, vt = r;
    for (std::size_t j = k; j > 0; --j) {
        const Tree sj = truncate(shape, j);
        is = x.restrict(sj, j, is, false);
        it = x.restrict(sj, j, it, true);
        vs = c.set.src[j][vs];
        vt = c.set.tgt[j][vt];
        h.lower[j - 1][0][is] = vs;
        h.lower[j - 1][1][it] = vt;
    }
    return h;
}

/// The body labeling of the k-globe whose top cell is h: its iterated boundaries.
inline std::vector<HomCell> globeBody(const HomCell& h)
{
    const std::size_t k = h.dim;
    std::vector<HomCell> body(2 * k + 1);
    body[2 * k] = h;
    HomCell s = h;
    for (std::size_t j = k; j > 0; --j) {
        body[2 * (j - 1)] = homBoundary(s, false);
        body[2 * (j - 1) + 1] = homBoundary(s, true);
        s = body[2 * (j - 1)];
    }
    return body;
}

/// Monoid laws of Taut(X) for every configuration whose shapes (the operation,
/// the body shapes, their composite, and one more layer) have at most S nodes.
///
/// Pointwise: an entry of a composite reads one entry of each factor plus the
/// boundary entries that one forces. For every configuration, every input
/// labeling and every admissible value along that path, the factors are built
/// as partial cells carrying just those entries; both bracketings must then
/// agree as partial cells and reproduce the chosen value. Lower levels of a
/// composite are composites of the boundary configuration, which is itself
/// enumerated in the dimension below.
using GlobTautComposeFn = std::function<HomCell(const LabelCache&, const HomCell&, const std::vector<HomCell>&)>;

inline CheckReport checkGlobTautMonoid(const Collection& xcoll, std::size_t S,
                                       const GlobTautComposeFn& compose = globTautCompose)
{
    CheckReport rep("globular taut monoid");
    const std::size_t D = xcoll.dim();
    if (S < D + 1) {
        rep.error("the " + std::to_string(D) + "-globe needs a shape bound of at least " + std::to_string(D + 1));
        return rep;
    }
    const LabelCache x(xcoll, S);
    const Collection t1 = terminalCollection(D, S);
    const auto& X = x.coll();

    auto values = [&](std::size_t k, const Tree& arity) {
        std::vector<std::size_t> out;
        for (std::size_t v = 0; v < X.set.count(k); ++v)
            if (X.arity[k][v] == arity) out.push_back(v);
        return out;
    };
    auto pick = [](const std::vector<HomCell>& cells, const std::vector<std::size_t>& embed) {
        std::vector<HomCell> out;
        for (auto e : embed) out.push_back(cells[e]);
        return out;
    };
    auto witness = [&](const HomCell& g) { return serialize(g, X.set); };

    for (std::size_t k = 0; k <= D && rep.passed(); ++k)
        for (std::size_t si = 0; si < t1.set.count(k) && rep.passed(); ++si) {
            const Tree sigma = t1.arity[k][si];
            const auto& se = x.at(sigma);
            const HomCell unitK = globTautUnit(x, k);
            const TreeInfo sinfo = analyze(sigma);

            // unit laws
            for (std::size_t bi = 0; bi < se.index.size() && rep.passed(); ++bi)
                for (auto r : values(k, se.composite[bi])) {
                    ++rep.cases;
                    const HomCell g = pointCell(x, sigma, k, bi, r);
                    if (compose(x, unitK, globeBody(g)) != g) {
                        rep.fail("left unit law fails at " + witness(g));
                        break;
                    }
                    std::vector<HomCell> units;
                    for (const auto& c : sinfo.cells) units.push_back(globTautUnit(x, c.dim));
                    if (compose(x, g, units) != g) {
                        rep.fail("right unit law fails at " + witness(g));
                        break;
                    }
                }

            // associativity
            forEachLabeling(sigma, t1.set, [&](const std::vector<std::size_t>& phiShapes) {
                if (!rep.passed()) return;
                const Substituted s1 = composeArity(sigma, phiShapes, t1);
                const Tree& tau = s1.result;
                if (tau.nodes() > S) return;
                const TreeInfo tinfo = analyze(tau);
                const auto& te = x.at(tau);
                forEachLabeling(tau, t1.set, [&](const std::vector<std::size_t>& chiShapes) {
                    if (!rep.passed()) return;
                    const Substituted s2 = composeArity(tau, chiShapes, t1);
                    const Tree& pi = s2.result;
                    if (pi.nodes() > S) return;
                    const auto& pe = x.at(pi);
                    for (std::size_t gi = 0; gi < pe.index.size() && rep.passed(); ++gi) {
                        const auto& gamma = pe.index.all[gi];
                        // per cell e of tau: the block of gamma and the arity its value must have
                        std::vector<std::size_t> gammaIdx(tinfo.cells.size());
                        std::vector<Tree> needA(tinfo.cells.size());
                        for (std::size_t e = 0; e < tinfo.cells.size(); ++e) {
                            const Tree& rho = t1.arity[tinfo.cells[e].dim][chiShapes[e]];
                            const auto& re = x.at(rho);
                            gammaIdx[e] = re.index.find(pullLabels(gamma, s2.embed[e]));
                            needA[e] = re.composite[gammaIdx[e]];
                        }
                        for (std::size_t ai = 0; ai < te.index.size() && rep.passed(); ++ai) {
                            const auto& alpha = te.index.all[ai];
                            bool ok = true;
                            for (std::size_t e = 0; e < alpha.size() && ok; ++e)
                                ok = X.arity[tinfo.cells[e].dim][alpha[e]] == needA[e];
                            if (!ok) continue;
                            std::vector<std::size_t> alphaIdx(sinfo.cells.size());
                            std::vector<Tree> needB(sinfo.cells.size());
                            for (std::size_t c = 0; c < sinfo.cells.size(); ++c) {
                                const Tree& tc = t1.arity[sinfo.cells[c].dim][phiShapes[c]];
                                const auto& ce = x.at(tc);
                                alphaIdx[c] = ce.index.find(pullLabels(alpha, s1.embed[c]));
                                needB[c] = ce.composite[alphaIdx[c]];
                            }
                            for (std::size_t bi = 0; bi < se.index.size() && rep.passed(); ++bi) {
                                const auto& beta = se.index.all[bi];
                                bool okB = true;
                                for (std::size_t c = 0; c < beta.size() && okB; ++c)
                                    okB = X.arity[sinfo.cells[c].dim][beta[c]] == needB[c];
                                if (!okB) continue;
                                for (auto r : values(k, se.composite[bi])) {
                                    ++rep.cases;
                                    const HomCell g = pointCell(x, sigma, k, bi, r);
                                    std::vector<HomCell> phi, chi;
                                    for (std::size_t c = 0; c < sinfo.cells.size(); ++c)
                                        phi.push_back(pointCell(x, t1.arity[sinfo.cells[c].dim][phiShapes[c]],
                                                                sinfo.cells[c].dim, alphaIdx[c], beta[c]));
                                    for (std::size_t e = 0; e < tinfo.cells.size(); ++e)
                                        chi.push_back(pointCell(x, t1.arity[tinfo.cells[e].dim][chiShapes[e]],
                                                                tinfo.cells[e].dim, gammaIdx[e], alpha[e]));
                                    const HomCell lhs = compose(x, compose(x, g, phi), chi);
                                    std::vector<HomCell> psi;
                                    for (std::size_t c = 0; c < sinfo.cells.size(); ++c)
                                        psi.push_back(compose(x, phi[c], pick(chi, s1.embed[c])));
                                    const HomCell rhs = compose(x, g, psi);
                                    if (lhs != rhs || lhs.top[gi] != r) {
                                        std::string w = "g=" + witness(g) + " phi=(";
                                        for (std::size_t c = 0; c < phi.size(); ++c) w += (c ? "; " : "") + witness(phi[c]);
                                        w += ") chi=(";
                                        for (std::size_t e = 0; e < chi.size(); ++e) w += (e ? "; " : "") + witness(chi[e]);
                                        rep.fail("associativity fails at " + w + ")");
                                        return;
                                    }
                                }
                            }
                        }
                    }
                });
            });
        }
    return rep;
}

// ---------------------------------------------------------------- presentations

/// A globular operad given by its collection, unit cells and a composition
/// table on O [] O; table keys are (dimension, head, body labels).
struct GlobOperadPresentation {
    Collection coll;
    std::vector<std::size_t> unit;
    std::map<std::tuple<std::size_t, std::size_t, std::vector<std::size_t>>, std::size_t> table;

    std::optional<std::size_t> compose(std::size_t k, std::size_t g, const std::vector<std::size_t>& body) const
    {
        auto it = table.find({k, g, body});
        if (it == table.end()) return std::nullopt;
        return it->second;
    }

    void set(std::size_t k, std::size_t g, const std::vector<std::size_t>& body, std::size_t r) { table[{k, g, body}] = r; }

    std::string showEntry(std::size_t k, std::size_t g, const std::vector<std::size_t>& body) const
    {
        return coll.set.names[k][g] + showLabels(coll.arity[k][g], body, coll.set);
    }
};

using GlobComposeFn = std::function<std::optional<std::size_t>(std::size_t, std::size_t, const std::vector<std::size_t>&)>;

/// Unit and multiplication are collection maps, and the associativity and unit
/// laws hold, on every configuration whose composite shapes have <= S nodes.
/// A composite missing inside the bounds is an ERROR.
inline CheckReport checkGlobMonoid(const Collection& o, const std::vector<std::size_t>& unit, const GlobComposeFn& m,
                                   std::size_t S)
{
    CheckReport rep("globular monoid");
    const std::size_t D = o.dim();
    auto name = [&](std::size_t k, std::size_t g, const std::vector<std::size_t>& body) {
        return o.set.names[k][g] + showLabels(o.arity[k][g], body, o.set);
    };
    auto need = [&](std::size_t k, std::size_t g, const std::vector<std::size_t>& body) -> std::optional<std::size_t> {
        auto r = m(k, g, body);
        if (!r) rep.error("no composite for " + name(k, g, body));
        return r;
    };

    // unit
    if (unit.size() != D + 1) {
        rep.error("unit is not given in every dimension");
        return rep;
    }
    for (std::size_t k = 0; k <= D; ++k) {
        ++rep.cases;
        if (unit[k] >= o.set.count(k) || o.arity[k][unit[k]] != Tree::globe(k)) {
            rep.fail("unit in dimension " + std::to_string(k) + " is not a cell over the " + std::to_string(k) + "-globe");
            return rep;
        }
        if (k > 0 && (o.set.src[k][unit[k]] != unit[k - 1] || o.set.tgt[k][unit[k]] != unit[k - 1])) {
            rep.fail("unit is not globular in dimension " + std::to_string(k));
            return rep;
        }
    }

    // multiplication is a collection map on the bounded part of O [] O
    const CollTensor oo = tensorColl(o, o);
    auto inBounds = [&](const Tree& t) { return t.nodes() <= S; };
    for (std::size_t k = 0; k <= D && rep.status != Status::error; ++k)
        for (std::size_t i = 0; i < oo.head[k].size(); ++i) {
            const Tree& rho = oo.coll.arity[k][i];
            if (!inBounds(rho)) continue;
            ++rep.cases;
            const auto g = oo.head[k][i];
            const auto& body = oo.body[k][i];
            auto r = need(k, g, body);
            if (!r) return rep;
            if (*r >= o.set.count(k)) {
                rep.error("composite of " + name(k, g, body) + " is out of range");
                return rep;
            }
            if (o.arity[k][*r] != rho) {
                rep.fail(name(k, g, body) + " = " + o.set.names[k][*r] + " has arity " + show(o.arity[k][*r]) + ", expected " +
                         show(rho));
                return rep;
            }
            if (k == 0) continue;
            for (bool target : {false, true}) {
                const auto b = target ? oo.coll.set.tgt[k][i] : oo.coll.set.src[k][i];
                auto rb = need(k - 1, oo.head[k - 1][b], oo.body[k - 1][b]);
                if (!rb) return rep;
                const auto expect = target ? o.set.tgt[k][*r] : o.set.src[k][*r];
                if (*rb != expect) {
                    rep.fail(std::string(target ? "target" : "source") + " of " + name(k, g, body) + " = " + o.set.names[k][*r] +
                             " is " + o.set.names[k - 1][expect] + " but the composite of the " +
                             (target ? "targets" : "sources") + " is " + o.set.names[k - 1][*rb]);
                    return rep;
                }
            }
        }
    if (!rep.passed()) return rep;

    // unit laws
    for (std::size_t k = 0; k <= D; ++k)
        for (std::size_t g = 0; g < o.set.count(k); ++g) {
            const Tree& a = o.arity[k][g];
            if (!inBounds(a)) continue;
            ++rep.cases;
            const auto left = eta(o.set, k, g).labels;
            auto l = need(k, unit[k], left);
            if (!l) return rep;
            if (*l != g) {
                rep.fail("left unit law fails at " + o.set.names[k][g] + ": " + name(k, unit[k], left) + " = " + o.set.names[k][*l]);
                return rep;
            }
            std::vector<std::size_t> units;
            for (const auto& c : analyze(a).cells) units.push_back(unit[c.dim]);
            auto r = need(k, g, units);
            if (!r) return rep;
            if (*r != g) {
                rep.fail("right unit law fails at " + o.set.names[k][g] + ": " + name(k, g, units) + " = " + o.set.names[k][*r]);
                return rep;
            }
        }

    // associativity
    for (std::size_t k = 0; k <= D; ++k)
        for (std::size_t i = 0; i < oo.head[k].size(); ++i) {
            const Tree& tau = oo.coll.arity[k][i];
            if (!inBounds(tau)) continue;
            const auto g = oo.head[k][i];
            const auto& phi = oo.body[k][i];
            const auto gphi = *m(k, g, phi);
            const TreeInfo sinfo = analyze(o.arity[k][g]);
            const Substituted s1 = composeArity(o.arity[k][g], phi, o);
            bool stop = false;
            forEachLabeling(tau, o.set, [&](const std::vector<std::size_t>& chi) {
                if (stop) return;
                if (!inBounds(composeArity(tau, chi, o).result)) return;
                ++rep.cases;
                auto lhs = need(k, gphi, chi);
                if (!lhs) {
                    stop = true;
                    return;
                }
                std::vector<std::size_t> psi;
                for (std::size_t c = 0; c < sinfo.cells.size(); ++c) {
                    const auto d = sinfo.cells[c].dim;
                    const auto block = pullLabels(chi, s1.embed[c]);
                    auto pc = need(d, phi[c], block);
                    if (!pc) {
                        stop = true;
                        return;
                    }
                    psi.push_back(*pc);
                }
                auto rhs = need(k, g, psi);
                if (!rhs) {
                    stop = true;
                    return;
                }
                if (*lhs != *rhs) {
                    rep.fail("associativity fails at " + name(k, g, phi) + " then " + showLabels(tau, chi, o.set) + ": " +
                             o.set.names[k][*lhs] + " vs " + o.set.names[k][*rhs]);
                    stop = true;
                }
            });
            if (stop) return rep;
        }
    return rep;
}

inline CheckReport checkGlobMonoid(const GlobOperadPresentation& p, std::size_t S)
{
    return checkGlobMonoid(
        p.coll, p.unit, [&](std::size_t k, std::size_t g, const std::vector<std::size_t>& b) { return p.compose(k, g, b); }, S);
}

/// T(1) with one cell per shape: every composite is the substituted shape.
inline GlobOperadPresentation terminalGlobOperad(std::size_t D, std::size_t S)
{
    GlobOperadPresentation p;
    p.coll = terminalCollection(D, S);
    for (std::size_t k = 0; k <= D; ++k)
        for (std::size_t i = 0; i < p.coll.set.count(k); ++i)
            if (p.coll.arity[k][i] == Tree::globe(k)) p.unit.push_back(i);
    const CollTensor oo = tensorColl(p.coll, p.coll);
    for (std::size_t k = 0; k <= D; ++k)
        for (std::size_t i = 0; i < oo.head[k].size(); ++i) {
            const Tree& rho = oo.coll.arity[k][i];
            for (std::size_t r = 0; r < p.coll.set.count(k); ++r)
                if (p.coll.arity[k][r] == rho) p.set(k, oo.head[k][i], oo.body[k][i], r);
        }
    return p;
}

/// Taut(X) on shapes with <= S nodes, with its composition tabulated on every
/// pair whose composite stays within the bounds.
struct GlobTaut {
    LabelCache x;
    HomCollection hom;
    GlobOperadPresentation pres;
};

inline GlobTaut globTautPresentation(const Collection& xcoll, std::size_t S)
{
    GlobTaut t{LabelCache(xcoll, S), {}, {}};
    t.hom = homCollection(t.x, t.x.coll());
    t.pres.coll = t.hom.coll;
    const std::size_t D = xcoll.dim();
    if (S < D + 1) throw BoundsError("the " + std::to_string(D) + "-globe needs a shape bound of at least " + std::to_string(D + 1));
    for (std::size_t k = 0; k <= D; ++k) t.pres.unit.push_back(t.hom.find(globTautUnit(t.x, k)));
    const CollTensor oo = tensorColl(t.pres.coll, t.pres.coll);
    for (std::size_t k = 0; k <= D; ++k)
        for (std::size_t i = 0; i < oo.head[k].size(); ++i) {
            if (oo.coll.arity[k][i].nodes() > S) continue;
            std::vector<HomCell> body;
            const TreeInfo info = analyze(t.pres.coll.arity[k][oo.head[k][i]]);
            for (std::size_t c = 0; c < info.cells.size(); ++c) body.push_back(t.hom.cells[info.cells[c].dim][oo.body[k][i][c]]);
            const HomCell r = globTautCompose(t.x, t.hom.cells[k][oo.head[k][i]], body);
            const auto ri = t.hom.find(r);
            if (ri == npos) throw Error("composite " + serialize(r, xcoll.set) + " is not a cell of Taut");
            t.pres.set(k, oo.head[k][i], oo.body[k][i], ri);
        }
    return t;
}

// ---------------------------------------------------------------- hom-tensor adjunction

/// Curries F: A [] B -> C into A -> [B,C]; cells whose table is not in the
/// bounded hom map to npos.
inline GlobMap curryColl(const Collection& a, const CollTensor& ab, const GlobMap& f, const LabelCache& b, const HomCollection& bc)
{
    std::vector<std::vector<HomCell>> cells(a.dim() + 1);
    GlobMap g;
    for (std::size_t k = 0; k <= a.dim(); ++k) {
        g.cell.emplace_back();
        for (std::size_t x = 0; x < a.set.count(k); ++x) {
            const Tree& shape = a.arity[k][x];
            HomCell h{shape, k, {}, {}};
            for (const auto& l : b.at(shape).index.all) {
                const auto i = ab.find(k, x, l);
                h.top.push_back(f(k, i));
            }
            if (k > 0) {
                const HomCell& s = cells[k - 1][a.set.src[k][x]];
                const HomCell& t = cells[k - 1][a.set.tgt[k][x]];
                h.lower = s.lower;
                h.lower.push_back({s.top, t.top});
            }
            g.cell[k].push_back(bc.find(h));
            cells[k].push_back(std::move(h));
        }
    }
    return g;
}

/// F(a, beta) = G(a) evaluated at beta.
inline GlobMap uncurryColl(const CollTensor& ab, const GlobMap& g, const LabelCache& b, const HomCollection& bc)
{
    GlobMap f;
    for (std::size_t k = 0; k < ab.head.size(); ++k) {
        f.cell.emplace_back();
        for (std::size_t i = 0; i < ab.head[k].size(); ++i) {
            const HomCell& h = bc.cells[k][g(k, ab.head[k][i])];
            f.cell[k].push_back(h.top[b.at(h.shape).index.find(ab.body[k][i])]);
        }
    }
    return f;
}

struct CollAdjunctionReport {
    CheckReport report{"coll adjunction"};
    std::size_t tensorMaps = 0; // |Hom(A [] B, C)|
    std::size_t homMaps = 0;    // |Hom(A, [B,C])|
};

/// Curry and uncurry are inverse bijections Hom(A [] B, C) = Hom(A, [B,C]).
inline CollAdjunctionReport checkCollAdjunction(const Collection& a, const Collection& b, const Collection& c, std::size_t S)
{
    CollAdjunctionReport out;
    auto& rep = out.report;
    const CollTensor ab = tensorColl(a, b, S);
    const LabelCache bcache(b, S);
    const HomCollection hom = homCollection(bcache, c);
    forEachCollectionMap(ab.coll, c, [&](const GlobMap& f) {
        ++out.tensorMaps;
        if (!rep.passed()) return;
        ++rep.cases;
        const GlobMap g = curryColl(a, ab, f, bcache, hom);
        for (const auto& row : g.cell)
            for (auto v : row)
                if (v == npos) {
                    rep.fail("curried map leaves the hom collection");
                    return;
                }
        if (auto r = checkCollectionMap({a, hom.coll, g}); !r.passed()) {
            rep.fail("curried map is not a collection map: " + r.witness);
            return;
        }
        if (uncurryColl(ab, g, bcache, hom) != f) rep.fail("uncurry(curry F) != F");
    });
    forEachCollectionMap(a, hom.coll, [&](const GlobMap& g) {
        ++out.homMaps;
        if (!rep.passed()) return;
        ++rep.cases;
        const GlobMap f = uncurryColl(ab, g, bcache, hom);
        if (auto r = checkCollectionMap({ab.coll, c, f}); !r.passed()) {
            rep.fail("uncurried map is not a collection map: " + r.witness);
            return;
        }
        if (curryColl(a, ab, f, bcache, hom) != g) rep.fail("curry(uncurry G) != G");
    });
    if (rep.passed() && out.tensorMaps != out.homMaps)
        rep.fail("hom-set sizes differ: " + std::to_string(out.tensorMaps) + " vs " + std::to_string(out.homMaps));
    return out;
}

// ---------------------------------------------------------------- algebras

/// An action of a globular operad on X: the k-cell o goes to a k-cell of
/// [X,X] over arity(o).
struct CollAlgebraWitness {
    GlobOperadPresentation op;
    Collection x;
    std::vector<std::vector<HomCell>> action;
};

/// The action is a collection map into Taut(X) preserving unit and every
/// tabulated composite whose shape has <= S nodes.
inline CheckReport checkCollAlgebra(const CollAlgebraWitness& w, std::size_t S)
{
    CheckReport rep("collection algebra");
    const Collection& o = w.op.coll;
    if (o.dim() != w.x.dim()) {
        rep.error("operad and carrier have different dimensions");
        return rep;
    }
    const LabelCache x(w.x, S);
    auto name = [&](std::size_t k, std::size_t c) { return o.set.names[k][c]; };
    for (std::size_t k = 0; k <= o.dim(); ++k) {
        if (w.action.size() <= k || w.action[k].size() != o.set.count(k)) {
            rep.error("action is not defined on every " + std::to_string(k) + "-cell");
            return rep;
        }
        for (std::size_t c = 0; c < o.set.count(k); ++c) {
            ++rep.cases;
            const HomCell& h = w.action[k][c];
            if (h.shape != o.arity[k][c] || h.dim != k) {
                rep.fail(name(k, c) + " acts by a cell over " + show(h.shape) + ", expected " + show(o.arity[k][c]));
                return rep;
            }
            if (auto why = homCellDefect(h, x, w.x)) {
                rep.fail(name(k, c) + " does not act by a cell of Taut: " + *why);
                return rep;
            }
            if (k > 0 && (homBoundary(h, false) != w.action[k - 1][o.set.src[k][c]] ||
                          homBoundary(h, true) != w.action[k - 1][o.set.tgt[k][c]])) {
                rep.fail("action does not commute with the boundary of " + name(k, c));
                return rep;
            }
        }
    }
    for (std::size_t k = 0; k <= o.dim(); ++k) {
        ++rep.cases;
        if (w.action[k][w.op.unit[k]] != globTautUnit(x, k)) {
            rep.fail("unit " + name(k, w.op.unit[k]) + " does not act as the identity");
            return rep;
        }
    }
    for (const auto& [key, r] : w.op.table) {
        const auto& [k, g, body] = key;
        if (o.arity[k][r].nodes() > S || o.arity[k][g].nodes() > S) continue;
        ++rep.cases;
        const TreeInfo info = analyze(o.arity[k][g]);
        std::vector<HomCell> cells;
        for (std::size_t c = 0; c < info.cells.size(); ++c) cells.push_back(w.action[info.cells[c].dim][body[c]]);
        if (globTautCompose(x, w.action[k][g], cells) != w.action[k][r]) {
            rep.fail("composite " + w.op.showEntry(k, g, body) + " = " + name(k, r) + " is not preserved");
            return rep;
        }
    }
    return rep;
}

/// Algebras in Glob: the carrier's arity map factors through the identity tower.
inline bool isGlobAlgebra(const CollAlgebraWitness& w) { return isDegenerate(w.x); }

struct GlobOperadHom {
    GlobOperadPresentation source;
    GlobOperadPresentation target;
    GlobMap map;
};

/// A collection map preserving unit and every tabulated source composite.
inline CheckReport checkGlobOperadHom(const GlobOperadHom& h)
{
    CheckReport rep("globular operad hom");
    rep.absorb(checkCollectionMap({h.source.coll, h.target.coll, h.map}));
    if (!rep.passed()) return rep;
    for (std::size_t k = 0; k < h.source.unit.size(); ++k) {
        ++rep.cases;
        if (h.map(k, h.source.unit[k]) != h.target.unit[k]) {
            rep.fail("unit in dimension " + std::to_string(k) + " is not preserved");
            return rep;
        }
    }
    for (const auto& [key, r] : h.source.table) {
        const auto& [k, g, body] = key;
        ++rep.cases;
        const TreeInfo info = analyze(h.source.coll.arity[k][g]);
        std::vector<std::size_t> img;
        for (std::size_t c = 0; c < info.cells.size(); ++c) img.push_back(h.map(info.cells[c].dim, body[c]));
        auto t = h.target.compose(k, h.map(k, g), img);
        if (!t) {
            rep.error("target has no entry for " + h.target.showEntry(k, h.map(k, g), img));
            return rep;
        }
        if (*t != h.map(k, r)) {
            rep.fail("composite " + h.source.showEntry(k, g, body) + " is not preserved");
            return rep;
        }
    }
    return rep;
}

inline void forEachGlobOperadHom(const GlobOperadPresentation& p, const GlobOperadPresentation& o,
                                 const std::function<void(const GlobOperadHom&)>& fn)
{
    forEachCollectionMap(p.coll, o.coll, [&](const GlobMap& f) {
        GlobOperadHom h{p, o, f};
        if (checkGlobOperadHom(h).passed()) fn(h);
    });
}

/// The witness phi . psi for psi: P -> O.
inline CollAlgebraWitness restrictCollAlgebra(const GlobOperadHom& psi, const CollAlgebraWitness& phi)
{
    CollAlgebraWitness w{psi.source, phi.x, {}};
    for (std::size_t k = 0; k < psi.map.cell.size(); ++k) {
        w.action.emplace_back();
        for (auto c : psi.map.cell[k]) w.action[k].push_back(phi.action[k][c]);
    }
    return w;
}

// ---------------------------------------------------------------- Leinster families

/// For each shape pi and dimension n, h[(pi, n)][row][col] is the n-cell of X
/// that the row-th n-cell of O over pi (in cell order) assigns to the col-th
/// labeling of pi by X.
struct LeinsterFamily {
    std::map<std::pair<Tree, std::size_t>, std::vector<std::vector<std::size_t>>> h;

    bool operator==(const LeinsterFamily&) const = default;
};

namespace detail {

/// Row of each cell of O within its (shape, dimension) block.
inline std::vector<std::vector<std::size_t>> familyRows(const Collection& o)
{
    std::vector<std::vector<std::size_t>> row(o.dim() + 1);
    std::map<std::pair<Tree, std::size_t>, std::size_t> next;
    for (std::size_t k = 0; k <= o.dim(); ++k)
        for (std::size_t c = 0; c < o.set.count(k); ++c) row[k].push_back(next[{o.arity[k][c], k}]++);
    return row;
}

} // namespace detail

/// Curry the action into O [] X -> X and split it by shape.
inline LeinsterFamily toLeinsterFamily(const CollAlgebraWitness& w)
{
    if (!isGlobAlgebra(w)) throw ArityError("Leinster families need a carrier whose cells all sit over identities");
    LeinsterFamily fam;
    const Collection& o = w.op.coll;
    for (std::size_t k = 0; k <= o.dim(); ++k)
        for (std::size_t c = 0; c < o.set.count(k); ++c) fam.h[{o.arity[k][c], k}].push_back(w.action[k][c].top);
    return fam;
}

/// Reassemble the action; lower tables come from the boundary cells of O.
inline CollAlgebraWitness fromLeinsterFamily(const LeinsterFamily& fam, const GlobOperadPresentation& op, const Collection& x,
                                             std::size_t S)
{
    const LabelCache cache(x, S);
    const Collection& o = op.coll;
    const auto rows = detail::familyRows(o);
    CollAlgebraWitness w{op, x, std::vector<std::vector<HomCell>>(o.dim() + 1)};
    for (std::size_t k = 0; k <= o.dim(); ++k)
        for (std::size_t c = 0; c < o.set.count(k); ++c) {
            const Tree& pi = o.arity[k][c];
            auto it = fam.h.find({pi, k});
            const std::size_t cols = cache.at(pi).index.size();
            if (it == fam.h.end() || it->second.size() <= rows[k][c] || it->second[rows[k][c]].size() != cols)
                throw MissingEntry("family has no complete table for " + o.set.names[k][c] + " over " + show(pi));
            HomCell h{pi, k, it->second[rows[k][c]], {}};
            for (auto v : h.top)
                if (v == npos || v >= x.set.count(k))
                    throw MissingEntry("family table for " + o.set.names[k][c] + " has an undefined entry");
            if (k > 0) {
                const HomCell& s = w.action[k - 1][o.set.src[k][c]];
                const HomCell& t = w.action[k - 1][o.set.tgt[k][c]];
                h.lower = s.lower;
                h.lower.push_back({s.top, t.top});
            }
            w.action[k].push_back(std::move(h));
        }
    return w;
}

/// The algebra conditions read directly on a family: values are globular in the
/// input, units act as identities, and h of a composite is h of the head
/// applied to the values of the body on the blocks of the input.
inline CheckReport checkLeinsterFamily(const LeinsterFamily& fam, const GlobOperadPresentation& op, const Collection& x,
                                       std::size_t S)
{
    CheckReport rep("leinster family");
    const LabelCache cache(x, S);
    const Collection& o = op.coll;
    const auto rows = detail::familyRows(o);
    auto value = [&](std::size_t k, std::size_t c, std::size_t col) -> std::size_t {
        auto it = fam.h.find({o.arity[k][c], k});
        if (it == fam.h.end() || it->second.size() <= rows[k][c] || it->second[rows[k][c]].size() <= col) return npos;
        return it->second[rows[k][c]][col];
    };
    for (std::size_t k = 0; k <= o.dim(); ++k)
        for (std::size_t c = 0; c < o.set.count(k); ++c) {
            const Tree& pi = o.arity[k][c];
            const auto& e = cache.at(pi);
            for (std::size_t i = 0; i < e.index.size(); ++i) {
                ++rep.cases;
                const auto v = value(k, c, i);
                if (v == npos || v >= x.set.count(k)) {
                    rep.error("no value for " + o.set.names[k][c] + " at " + showLabels(pi, e.index.all[i], x.set));
                    return rep;
                }
                if (k == 0) continue;
                const auto vs = value(k - 1, o.set.src[k][c], cache.restrict(pi, k, i, false));
                const auto vt = value(k - 1, o.set.tgt[k][c], cache.restrict(pi, k, i, true));
                if (x.set.src[k][v] != vs || x.set.tgt[k][v] != vt) {
                    rep.fail(o.set.names[k][c] + " at " + showLabels(pi, e.index.all[i], x.set) + " is not globular");
                    return rep;
                }
            }
        }
    for (std::size_t k = 0; k <= o.dim(); ++k) {
        const auto& e = cache.at(Tree::globe(k));
        for (std::size_t i = 0; i < e.index.size(); ++i) {
            ++rep.cases;
            if (value(k, op.unit[k], i) != e.index.all[i].back()) {
                rep.fail("unit does not act as the identity at " + x.set.names[k][e.index.all[i].back()]);
                return rep;
            }
        }
    }
    for (const auto& [key, r] : op.table) {
        const auto& [k, g, body] = key;
        const Tree& sigma = o.arity[k][g];
        const Tree& rho = o.arity[k][r];
        if (rho.nodes() > S || sigma.nodes() > S) continue;
        const TreeInfo info = analyze(sigma);
        const Substituted s = composeArity(sigma, body, o);
        const auto& re = cache.at(rho);
        for (std::size_t i = 0; i < re.index.size(); ++i) {
            ++rep.cases;
            std::vector<std::size_t> beta;
            for (std::size_t c = 0; c < info.cells.size(); ++c) {
                const auto d = info.cells[c].dim;
                const auto& pe = cache.at(o.arity[d][body[c]]);
                beta.push_back(value(d, body[c], pe.index.find(pullLabels(re.index.all[i], s.embed[c]))));
            }
            const auto bi = cache.at(sigma).index.find(beta);
            const auto lhs = value(k, r, i);
            if (bi == npos || value(k, g, bi) != lhs) {
                rep.fail("composite " + op.showEntry(k, g, body) + " at " + showLabels(rho, re.index.all[i], x.set) +
                         " is not the head applied to the body");
                return rep;
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------- classical operads in dimension 1

/// A graded set as a 1-dimensional collection: one object o and, for each
/// element of arity n, a loop on o over the path of n 1-cells.
inline Collection embedGraded(const GradedSet& x)
{
    Collection c = Collection::empty(1);
    c.add(0, "o", Tree::point());
    for (std::size_t i = 0; i < x.size(); ++i) c.add(1, x.names[i], Tree::path(x.arity[i]), 0, 0);
    return c;
}

/// Labelings of path(n) by embedGraded(x) are words of length n in the same
/// (lexicographic) order, so the table carries over unchanged.
inline HomCell embedHom(const HomElem& h)
{
    return {Tree::path(h.arity), 1, h.table, {{std::vector<std::size_t>{0}, std::vector<std::size_t>{0}}}};
}

inline GlobOperadPresentation embedOperad(const OperadPresentation& p)
{
    GlobOperadPresentation g;
    g.coll = embedGraded(p.carrier);
    g.unit = {0, p.unit};
    g.set(0, 0, {0}, 0);
    for (const auto& [key, r] : p.table) {
        const auto& [a, body] = key;
        std::vector<std::size_t> labels(body.size() + 1, 0);
        labels.insert(labels.end(), body.begin(), body.end());
        g.set(1, a, labels, r);
    }
    return g;
}

inline CollAlgebraWitness embedAlgebra(const AlgebraWitness& w)
{
    CollAlgebraWitness g{embedOperad(w.operad), embedGraded(w.carrier), {{HomCell{Tree::point(), 0, {0}, {}}}, {}}};
    for (const auto& h : w.action) g.action[1].push_back(embedHom(h));
    return g;
}

} // namespace globop
