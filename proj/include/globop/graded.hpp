#pragma once

// Graded sets X -> N, the composition tensor product, the free monoid monad
// on bounded word lengths, and the internal hom [B,A] one arity at a time.

#include "globop/error.hpp"
#include "globop/report.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace globop {

using Word = std::vector<std::size_t>;

/// Finite carrier with an arity function. Element order is the insertion order.
struct GradedSet {
    std::vector<std::string> names;
    std::vector<std::size_t> arity;

    GradedSet() = default;
    GradedSet(std::initializer_list<std::pair<std::string, std::size_t>> elems)
    {
        for (const auto& [n, a] : elems) add(n, a);
    }

    std::size_t size() const { return arity.size(); }

    std::size_t add(const std::string& name, std::size_t a)
    {
        if (index_.count(name)) throw Error("duplicate element '" + name + "'");
        index_.emplace(name, names.size());
        names.push_back(name);
        arity.push_back(a);
        return names.size() - 1;
    }

    bool contains(const std::string& name) const { return index_.count(name) != 0; }

    std::size_t indexOf(const std::string& name) const
    {
        auto it = index_.find(name);
        if (it == index_.end()) throw Error("no element named '" + name + "'");
        return it->second;
    }

    /// Elements of arity exactly n, in carrier order.
    std::vector<std::size_t> ofArity(std::size_t n) const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < arity.size(); ++i)
            if (arity[i] == n) out.push_back(i);
        return out;
    }

    std::size_t maxArity() const
    {
        std::size_t m = 0;
        for (auto a : arity) m = std::max(m, a);
        return m;
    }

    bool operator==(const GradedSet& o) const { return names == o.names && arity == o.arity; }

private:
    std::map<std::string, std::size_t> index_;
};

/// The monoidal unit: one element of arity 1.
inline GradedSet unitSet() { return GradedSet{{"*", 1}}; }

inline std::string serialize(const GradedSet& x)
{
    std::string s = "{";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ", ";
        s += x.names[i] + ":" + std::to_string(x.arity[i]);
    }
    return s + "}";
}

// ---------------------------------------------------------------- words

inline std::uint64_t checkedPow(std::uint64_t base, std::size_t n)
{
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base)
            throw BoundsError("word count overflows 64 bits");
        r *= base;
    }
    return r;
}

inline std::uint64_t checkedMul(std::uint64_t a, std::uint64_t b)
{
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) throw BoundsError("count overflows 64 bits");
    return a * b;
}

/// Lexicographic rank; the first letter is the most significant digit.
inline std::size_t rankWord(const Word& w, std::size_t base)
{
    std::size_t r = 0;
    for (auto c : w) r = r * base + c;
    return r;
}

inline Word unrankWord(std::size_t rank, std::size_t base, std::size_t n)
{
    Word w(n, 0);
    for (std::size_t i = n; i > 0; --i) {
        w[i - 1] = rank % base;
        rank /= base;
    }
    return w;
}

/// Visits the words of length n over {0..base-1} in lexicographic order.
inline void forEachWord(std::size_t base, std::size_t n, const std::function<void(const Word&)>& fn)
{
    if (n > 0 && base == 0) return;
    Word w(n, 0);
    while (true) {
        fn(w);
        std::size_t i = n;
        while (i > 0) {
            if (++w[i - 1] < base) break;
            w[i - 1] = 0;
            --i;
        }
        if (i == 0) return;
    }
}

inline std::size_t wordArity(const GradedSet& x, const Word& w)
{
    std::size_t s = 0;
    for (auto c : w) s += x.arity[c];
    return s;
}

/// The element's name, or #index for the unnamed sets law checks build.
inline std::string nameOf(const GradedSet& x, std::size_t i)
{
    return i < x.names.size() ? x.names[i] : "#" + std::to_string(i);
}

inline std::string showWord(const GradedSet& x, const Word& w)
{
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ",";
        s += nameOf(x, w[i]);
    }
    return s;
}

// ---------------------------------------------------------------- maps

/// Element assignment between graded sets; arity preservation is checked by
/// validate() rather than enforced on construction.
struct GradedMap {
    std::vector<std::size_t> image;

    static GradedMap identity(std::size_t n)
    {
        GradedMap f;
        for (std::size_t i = 0; i < n; ++i) f.image.push_back(i);
        return f;
    }

    std::size_t operator()(std::size_t i) const { return image.at(i); }
    bool operator==(const GradedMap&) const = default;
    auto operator<=>(const GradedMap&) const = default;
};

/// Throws ArityError unless f is a total, arity-preserving map src -> dst.
inline void validate(const GradedSet& src, const GradedSet& dst, const GradedMap& f)
{
    if (f.image.size() != src.size()) throw ArityError("graded map is not total");
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (f.image[i] >= dst.size()) throw ArityError("graded map sends " + src.names[i] + " outside its target");
        if (dst.arity[f.image[i]] != src.arity[i])
            throw ArityError("graded map sends " + src.names[i] + " (arity " + std::to_string(src.arity[i]) + ") to " +
                             dst.names[f.image[i]] + " (arity " + std::to_string(dst.arity[f.image[i]]) + ")");
    }
}

/// g after f.
inline GradedMap compose(const GradedMap& g, const GradedMap& f)
{
    GradedMap h;
    h.image.reserve(f.image.size());
    for (auto i : f.image) h.image.push_back(g.image.at(i));
    return h;
}

inline std::string serialize(const GradedSet& src, const GradedSet& dst, const GradedMap& f)
{
    std::string s = "{";
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (i) s += ", ";
        s += src.names[i] + " -> " + dst.names[f.image[i]];
    }
    return s + "}";
}

/// Visits every arity-preserving map src -> dst.
inline void forEachGradedMap(const GradedSet& src, const GradedSet& dst, const std::function<void(const GradedMap&)>& fn)
{
    std::vector<std::vector<std::size_t>> choices;
    for (std::size_t i = 0; i < src.size(); ++i) {
        choices.push_back(dst.ofArity(src.arity[i]));
        if (choices.back().empty()) return;
    }
    std::vector<std::size_t> digit(src.size(), 0);
    GradedMap f;
    f.image.resize(src.size());
    while (true) {
        for (std::size_t i = 0; i < src.size(); ++i) f.image[i] = choices[i][digit[i]];
        fn(f);
        std::size_t i = src.size();
        while (i > 0) {
            if (++digit[i - 1] < choices[i - 1].size()) break;
            digit[i - 1] = 0;
            --i;
        }
        if (i == 0) return;
    }
}

// ---------------------------------------------------------------- tensor

/// X [] Y: pairs (a, psi) with |psi| = arity(a), ordered by head then body.
/// Unnamed tensors leave set.names empty; law checks use them for speed.
struct Tensor {
    GradedSet set;
    std::vector<std::size_t> head;
    std::vector<Word> body;
    std::vector<std::size_t> offset;    // first element with each head
    std::vector<std::size_t> headArity; // arity of each head
    std::size_t base = 0;               // |Y|

    std::size_t find(std::size_t h, const Word& b) const
    {
        if (h >= offset.size() || b.size() != headArity[h]) throw Error("tensor element not found");
        for (auto c : b)
            if (c >= base) throw Error("tensor element not found");
        return offset[h] + rankWord(b, base);
    }

    std::size_t size() const { return head.size(); }
    bool named() const { return set.names.size() == head.size(); }
};

inline std::uint64_t tensorSize(const GradedSet& x, const GradedSet& y)
{
    std::uint64_t n = 0;
    for (auto a : x.arity) n += checkedPow(y.size(), a);
    return n;
}

inline Tensor tensor(const GradedSet& x, const GradedSet& y, bool named = true, std::uint64_t limit = 1u << 22)
{
    if (tensorSize(x, y) > limit) throw BoundsError("tensor product has more than " + std::to_string(limit) + " elements");
    Tensor t;
    t.base = y.size();
    for (std::size_t a = 0; a < x.size(); ++a) {
        t.offset.push_back(t.head.size());
        t.headArity.push_back(x.arity[a]);
        forEachWord(y.size(), x.arity[a], [&](const Word& w) {
            if (named) t.set.add(nameOf(x, a) + "(" + showWord(y, w) + ")", wordArity(y, w));
            else t.set.arity.push_back(wordArity(y, w));
            t.head.push_back(a);
            t.body.push_back(w);
        });
    }
    return t;
}

/// f [] g : X [] Y -> X' [] Y'.
inline GradedMap tensorMap(const GradedMap& f, const GradedMap& g, const Tensor& src, const Tensor& dst)
{
    GradedMap h;
    for (std::size_t i = 0; i < src.size(); ++i) {
        Word b;
        for (auto c : src.body[i]) b.push_back(g.image.at(c));
        h.image.push_back(dst.find(f.image.at(src.head[i]), b));
    }
    return h;
}

/// rho: X [] U -> X, first projection.
inline GradedMap rightUnitor(const Tensor& xu)
{
    GradedMap f;
    f.image = xu.head;
    return f;
}

/// rho inverse: a |-> (a, *...*).
inline GradedMap rightUnitorInverse(const GradedSet& x, const Tensor& xu)
{
    GradedMap f;
    for (std::size_t a = 0; a < x.size(); ++a) f.image.push_back(xu.find(a, Word(x.arity[a], 0)));
    return f;
}

/// lambda: U [] X -> X, second projection onto the single letter.
inline GradedMap leftUnitor(const Tensor& ux)
{
    GradedMap f;
    for (const auto& b : ux.body) f.image.push_back(b.at(0));
    return f;
}

inline GradedMap leftUnitorInverse(const GradedSet& x, const Tensor& ux)
{
    GradedMap f;
    for (std::size_t a = 0; a < x.size(); ++a) f.image.push_back(ux.find(0, Word{a}));
    return f;
}

/// alpha_{X,Y,Z}: X [] (Y [] Z) -> (X [] Y) [] Z together with the tensors it
/// runs between and its inverse.
struct Associator {
    Tensor yz, x_yz, xy, xy_z;
    GradedMap forward, inverse;
};

inline Associator associator(const GradedSet& x, const GradedSet& y, const GradedSet& z, bool named = true)
{
    Associator a;
    a.yz = tensor(y, z, named);
    a.x_yz = tensor(x, a.yz.set, named);
    a.xy = tensor(x, y, named);
    a.xy_z = tensor(a.xy.set, z, named);
    a.inverse.image.assign(a.xy_z.size(), 0);
    for (std::size_t i = 0; i < a.x_yz.size(); ++i) {
        Word ys, phi;
        for (auto e : a.x_yz.body[i]) {
            ys.push_back(a.yz.head[e]);
            phi.insert(phi.end(), a.yz.body[e].begin(), a.yz.body[e].end());
        }
        std::size_t j = a.xy_z.find(a.xy.find(a.x_yz.head[i], ys), phi);
        a.forward.image.push_back(j);
        a.inverse.image[j] = i;
    }
    return a;
}

namespace detail {

inline CheckReport compareMaps(std::string name, const GradedSet& dom, const GradedSet& cod, const GradedMap& p,
                               const GradedMap& q)
{
    CheckReport rep(std::move(name));
    rep.cases = dom.size();
    for (std::size_t i = 0; i < dom.size(); ++i)
        if (p.image[i] != q.image[i]) {
            rep.fail("at " + nameOf(dom, i) + ": " + nameOf(cod, p.image[i]) + " != " + nameOf(cod, q.image[i]));
            break;
        }
    return rep;
}

} // namespace detail

/// Bijectivity, inverse pairing and arity preservation of alpha_{X,Y,Z}.
inline CheckReport checkAssociator(const GradedSet& x, const GradedSet& y, const GradedSet& z)
{
    CheckReport rep("associator");
    Associator a = associator(x, y, z);
    rep.cases = a.x_yz.size();
    if (a.x_yz.size() != a.xy_z.size()) {
        rep.fail("sides differ in size: " + std::to_string(a.x_yz.size()) + " vs " + std::to_string(a.xy_z.size()));
        return rep;
    }
    for (std::size_t i = 0; i < a.x_yz.size(); ++i) {
        std::size_t j = a.forward.image[i];
        if (a.x_yz.set.arity[i] != a.xy_z.set.arity[j]) {
            rep.fail(nameOf(a.x_yz.set, i) + " changes arity under the associator");
            return rep;
        }
        if (a.inverse.image[j] != i) {
            rep.fail(nameOf(a.x_yz.set, i) + " is not recovered by the inverse");
            return rep;
        }
    }
    return rep;
}

/// Both pentagon paths W [] (X [] (Y [] Z)) -> ((W [] X) [] Y) [] Z, compared pointwise.
inline CheckReport checkPentagon(const GradedSet& w, const GradedSet& x, const GradedSet& y, const GradedSet& z)
{
    const Tensor xy = tensor(x, y, false), yz = tensor(y, z, false), wx = tensor(w, x, false);
    const Associator a1 = associator(w, x, yz.set, false);       // W(X(YZ)) -> (WX)(YZ)
    const Associator a2 = associator(wx.set, y, z, false);       // (WX)(YZ) -> ((WX)Y)Z
    const Associator b1 = associator(x, y, z, false);            // X(YZ) -> (XY)Z
    const Associator b2 = associator(w, xy.set, z, false);       // W((XY)Z) -> (W(XY))Z
    const Associator b3 = associator(w, x, y, false);            // W(XY) -> (WX)Y
    const Tensor w_xy_z = tensor(w, b1.xy_z.set, false);
    const Tensor wxy_z = tensor(b3.xy_z.set, z, false);

    GradedMap path1 = compose(a2.forward, a1.forward);
    GradedMap step1 = tensorMap(GradedMap::identity(w.size()), b1.forward, a1.x_yz, w_xy_z);
    GradedMap step3 = tensorMap(b3.forward, GradedMap::identity(z.size()), b2.xy_z, wxy_z);
    GradedMap path2 = compose(step3, compose(b2.forward, step1));
    return detail::compareMaps("pentagon", a1.x_yz.set, wxy_z.set, path1, path2);
}

/// (rho [] 1) . alpha_{X,U,Y} = 1 [] lambda, plus the two derived triangles
/// lambda_{X[]Y} . alpha_{U,X,Y} = lambda [] 1 and rho_{X[]Y} . alpha_{X,Y,U} = 1 [] rho.
inline CheckReport checkTriangles(const GradedSet& x, const GradedSet& y)
{
    CheckReport rep("triangle");
    const GradedSet u = unitSet();
    {
        const Associator a = associator(x, u, y, false);
        const Tensor xy = tensor(x, y, false);
        const Tensor xu = a.xy;
        GradedMap lhs = compose(tensorMap(rightUnitor(xu), GradedMap::identity(y.size()), a.xy_z, xy), a.forward);
        GradedMap rhs = tensorMap(GradedMap::identity(x.size()), leftUnitor(a.yz), a.x_yz, xy);
        rep.absorb(detail::compareMaps("middle", a.x_yz.set, xy.set, lhs, rhs));
    }
    {
        const Associator a = associator(u, x, y, false);
        const Tensor xy = tensor(x, y, false);
        GradedMap lhs = leftUnitor(a.x_yz);
        // U(XY) -> (UX)Y -> XY via lambda [] 1 must agree with lambda_{XY}
        GradedMap viaAssoc = compose(tensorMap(leftUnitor(a.xy), GradedMap::identity(y.size()), a.xy_z, xy), a.forward);
        rep.absorb(detail::compareMaps("left", a.x_yz.set, xy.set, viaAssoc, lhs));
    }
    {
        const Associator a = associator(x, y, u, false);
        const Tensor xy = tensor(x, y, false);
        GradedMap lhs = compose(rightUnitor(a.xy_z), a.forward);
        GradedMap rhs = tensorMap(GradedMap::identity(x.size()), rightUnitor(a.yz), a.x_yz, xy);
        rep.absorb(detail::compareMaps("right", a.x_yz.set, xy.set, lhs, rhs));
    }
    return rep;
}

// ---------------------------------------------------------------- monad T

namespace monad {

using Nested = std::vector<Word>;
using Mult = std::function<Word(const Nested&)>;

inline Word unit(std::size_t s) { return Word{s}; }

inline Word mult(const Nested& ww)
{
    Word out;
    for (const auto& w : ww) out.insert(out.end(), w.begin(), w.end());
    return out;
}

inline Word mapWord(const std::vector<std::size_t>& f, const Word& w)
{
    Word out;
    for (auto c : w) out.push_back(f.at(c));
    return out;
}

inline Nested mapNested(const std::vector<std::size_t>& f, const Nested& ww)
{
    Nested out;
    for (const auto& w : ww) out.push_back(mapWord(f, w));
    return out;
}

/// Words of words with outer length <= L and total letter count <= L.
inline void forEachNested(std::size_t base, std::size_t L, const std::function<void(const Nested&)>& fn)
{
    // enumerate compositions of the total into outer slots (empty slots allowed)
    std::function<void(Nested&, std::size_t)> rec = [&](Nested& cur, std::size_t budget) {
        fn(cur);
        if (cur.size() == L) return;
        for (std::size_t len = 0; len <= budget; ++len)
            forEachWord(base, len, [&](const Word& w) {
                cur.push_back(w);
                rec(cur, budget - len);
                cur.pop_back();
            });
    };
    Nested cur;
    rec(cur, L);
}

inline std::string show(const Word& w)
{
    std::string s = "[";
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
    return s + "]";
}

inline std::string show(const Nested& ww)
{
    std::string s = "[";
    for (std::size_t i = 0; i < ww.size(); ++i) s += (i ? "," : "") + show(ww[i]);
    return s + "]";
}

/// Unit laws on words of length <= L and associativity on triple nestings
/// with total length <= L.
inline CheckReport checkMonadLaws(std::size_t base, std::size_t L, const Mult& mu = mult)
{
    CheckReport rep("monad laws");
    for (std::size_t n = 0; n <= L && rep.passed(); ++n)
        forEachWord(base, n, [&](const Word& w) {
            ++rep.cases;
            Nested letters;
            for (auto c : w) letters.push_back(unit(c));
            if (mu(letters) != w) rep.fail("mu . T(eta) != id at " + show(w));
            if (mu(Nested{w}) != w) rep.fail("mu . eta != id at " + show(w));
        });
    // T^3 elements: every grouping of the outer list of a nested word into
    // consecutive blocks, optionally with one leading empty block
    forEachNested(base, L, [&](const Nested& outer) {
        const std::size_t k = outer.size();
        const std::size_t cuts = k == 0 ? 1 : std::size_t{1} << (k - 1);
        for (std::size_t mask = 0; mask < cuts && rep.passed(); ++mask)
            for (int lead = 0; lead < 2 && rep.passed(); ++lead) {
                std::vector<Nested> triple;
                if (lead) triple.emplace_back();
                if (k) triple.emplace_back();
                for (std::size_t i = 0; i < k; ++i) {
                    if (i > 0 && (mask >> (i - 1)) & 1) triple.emplace_back();
                    triple.back().push_back(outer[i]);
                }
                ++rep.cases;
                Nested viaInner, viaOuter;
                for (const auto& t : triple) viaInner.push_back(mu(t));
                for (const auto& t : triple) viaOuter.insert(viaOuter.end(), t.begin(), t.end());
                if (mu(viaInner) != mu(viaOuter))
                    rep.fail("associativity fails at " + show(outer) + " grouped by mask " + std::to_string(mask));
            }
    });
    return rep;
}

/// eta- and mu-naturality squares at f: S -> S' are pullbacks on words of
/// length <= L (for T^2: outer length and total length <= L).
inline CheckReport checkCartesian(const std::vector<std::size_t>& f, std::size_t srcSize, std::size_t dstSize,
                                  std::size_t L, const Mult& mu = mult)
{
    CheckReport rep("cartesian");
    for (auto v : f)
        if (v >= dstSize) throw Error("cartesian check: map points outside its target");
    if (f.size() != srcSize) throw Error("cartesian check: map is not total");

    // eta square: comparison S -> S' x_{TS'} TS
    {
        std::map<std::pair<std::size_t, Word>, std::size_t> image;
        for (std::size_t s = 0; s < srcSize; ++s) {
            ++rep.cases;
            if (mapWord(f, unit(s)) != unit(f[s])) {
                rep.fail("eta square does not commute at " + std::to_string(s));
                return rep;
            }
            auto key = std::make_pair(f[s], unit(s));
            if (image.count(key)) {
                rep.fail("eta comparison identifies " + std::to_string(image[key]) + " and " + std::to_string(s));
                return rep;
            }
            image.emplace(key, s);
        }
        for (std::size_t sp = 0; sp < dstSize; ++sp)
            for (std::size_t n = 0; n <= L; ++n)
                forEachWord(srcSize, n, [&](const Word& w) {
                    if (!rep.passed()) return;
                    if (mapWord(f, w) == unit(sp) && !image.count({sp, w}))
                        rep.fail("eta pullback element (" + std::to_string(sp) + ", " + show(w) + ") has no preimage");
                });
        if (!rep.passed()) return rep;
    }

    // mu square: comparison T^2 S -> T^2 S' x_{TS'} TS
    {
        std::map<std::pair<Nested, Word>, Nested> image;
        forEachNested(srcSize, L, [&](const Nested& ww) {
            if (!rep.passed()) return;
            ++rep.cases;
            Nested down = mapNested(f, ww);
            Word across = mu(ww);
            if (mu(down) != mapWord(f, across)) {
                rep.fail("mu square does not commute at " + show(ww));
                return;
            }
            auto key = std::make_pair(down, across);
            auto it = image.find(key);
            if (it != image.end()) {
                rep.fail("mu comparison identifies " + show(it->second) + " and " + show(ww));
                return;
            }
            image.emplace(key, ww);
        });
        if (!rep.passed()) return rep;
        forEachNested(dstSize, L, [&](const Nested& wwp) {
            if (!rep.passed()) return;
            Word flat = mu(wwp);
            forEachWord(srcSize, flat.size(), [&](const Word& w) {
                if (!rep.passed()) return;
                if (mapWord(f, w) == flat && !image.count({wwp, w}))
                    rep.fail("mu pullback element (" + show(wwp) + ", " + show(w) + ") has no preimage");
            });
        });
    }
    return rep;
}

/// T applied to the pullback of f: A -> C <- B: g is again a pullback, words
/// of length <= L.
inline CheckReport checkPreservesPullback(const std::vector<std::size_t>& f, const std::vector<std::size_t>& g,
                                          std::size_t L)
{
    CheckReport rep("T preserves pullbacks");
    std::vector<std::pair<std::size_t, std::size_t>> p;
    for (std::size_t a = 0; a < f.size(); ++a)
        for (std::size_t b = 0; b < g.size(); ++b)
            if (f[a] == g[b]) p.emplace_back(a, b);
    std::vector<std::size_t> pa, pb;
    for (auto [a, b] : p) pa.push_back(a), pb.push_back(b);

    std::set<std::pair<Word, Word>> image;
    for (std::size_t n = 0; n <= L && rep.passed(); ++n)
        forEachWord(p.size(), n, [&](const Word& w) {
            ++rep.cases;
            if (!image.emplace(mapWord(pa, w), mapWord(pb, w)).second)
                rep.fail("comparison T(P) -> TA x TB not injective at " + show(w));
        });
    for (std::size_t n = 0; n <= L && rep.passed(); ++n)
        forEachWord(f.size(), n, [&](const Word& wa) {
            forEachWord(g.size(), n, [&](const Word& wb) {
                if (rep.passed() && mapWord(f, wa) == mapWord(g, wb) && !image.count({wa, wb}))
                    rep.fail("(" + show(wa) + ", " + show(wb) + ") is not in the image of T(P)");
            });
        });
    return rep;
}

} // namespace monad

// ---------------------------------------------------------------- exponentials and internal hom

/// Functions B_n -> A_n, as tables indexed by position in B.ofArity(n).
inline std::vector<std::vector<std::size_t>> exponentialFiber(const GradedSet& a, const GradedSet& b, std::size_t n)
{
    const auto dom = b.ofArity(n);
    const auto cod = a.ofArity(n);
    std::vector<std::vector<std::size_t>> out;
    forEachWord(cod.size(), dom.size(), [&](const Word& w) {
        std::vector<std::size_t> t;
        for (auto c : w) t.push_back(cod[c]);
        out.push_back(std::move(t));
    });
    return out;
}

/// An element of [B,A]_n: a value in A for every word of length n over B,
/// indexed by lexicographic rank.
struct HomElem {
    std::size_t arity = 0;
    std::vector<std::size_t> table;

    bool operator==(const HomElem&) const = default;
    auto operator<=>(const HomElem&) const = default;
};

inline std::string serialize(const GradedSet& a, const HomElem& h)
{
    std::string s = std::to_string(h.arity) + "|";
    for (std::size_t i = 0; i < h.table.size(); ++i) s += (i ? "," : "") + a.names[h.table[i]];
    return s;
}

/// Throws ArityError unless h is a well-formed element of [B,A]_{h.arity}.
inline void validate(const GradedSet& b, const GradedSet& a, const HomElem& h)
{
    if (h.table.size() != checkedPow(b.size(), h.arity)) throw ArityError("hom table has the wrong number of entries");
    for (std::size_t r = 0; r < h.table.size(); ++r) {
        Word w = unrankWord(r, b.size(), h.arity);
        if (h.table[r] >= a.size() || a.arity[h.table[r]] != wordArity(b, w))
            throw ArityError("hom table entry for word (" + showWord(b, w) + ") has the wrong arity");
    }
}

inline std::uint64_t homFiberSize(const GradedSet& b, const GradedSet& a, std::size_t n)
{
    std::uint64_t total = 1;
    std::vector<std::uint64_t> byArity(b.maxArity() * n + 1, 0);
    for (auto x : a.arity)
        if (x < byArity.size()) ++byArity[x];
    forEachWord(b.size(), n, [&](const Word& w) { total = checkedMul(total, byArity[wordArity(b, w)]); });
    return total;
}

/// Visits every element of [B,A]_n in odometer order of the table.
inline void forEachHomElem(const GradedSet& b, const GradedSet& a, std::size_t n, const std::function<void(const HomElem&)>& fn)
{
    std::vector<std::vector<std::size_t>> choices;
    forEachWord(b.size(), n, [&](const Word& w) { choices.push_back(a.ofArity(wordArity(b, w))); });
    for (const auto& c : choices)
        if (c.empty()) return;
    std::vector<std::size_t> digit(choices.size(), 0);
    HomElem h{n, std::vector<std::size_t>(choices.size())};
    while (true) {
        for (std::size_t i = 0; i < choices.size(); ++i) h.table[i] = choices[i][digit[i]];
        fn(h);
        std::size_t i = choices.size();
        while (i > 0) {
            if (++digit[i - 1] < choices[i - 1].size()) break;
            digit[i - 1] = 0;
            --i;
        }
        if (i == 0) return;
    }
}

inline std::vector<HomElem> homFiber(const GradedSet& b, const GradedSet& a, std::size_t n, std::uint64_t limit = 1u << 22)
{
    if (homFiberSize(b, a, n) > limit)
        throw BoundsError("hom fiber of arity " + std::to_string(n) + " exceeds " + std::to_string(limit) + " elements");
    std::vector<HomElem> out;
    forEachHomElem(b, a, n, [&](const HomElem& h) { out.push_back(h); });
    return out;
}

/// [B,A] truncated to arities <= N, as a graded set whose elements are tables.
struct HomSet {
    GradedSet set;
    std::vector<HomElem> elems;

    std::size_t find(const HomElem& h) const
    {
        auto it = index_.find(h);
        if (it == index_.end()) throw Error("table is not an element of the truncated hom");
        return it->second;
    }

    void push(const GradedSet& a, HomElem h)
    {
        index_.emplace(h, elems.size());
        set.add(serialize(a, h), h.arity);
        elems.push_back(std::move(h));
    }

private:
    std::map<HomElem, std::size_t> index_;
};

inline HomSet homSet(const GradedSet& b, const GradedSet& a, std::size_t maxArity, std::uint64_t limit = 1u << 22)
{
    HomSet h;
    for (std::size_t n = 0; n <= maxArity; ++n)
        for (auto& e : homFiber(b, a, n, limit)) h.push(a, std::move(e));
    return h;
}

/// Evaluation [B,A] [] B -> A on a truncated hom.
inline GradedMap evaluation(const HomSet& h, const GradedSet& b, const Tensor& hb)
{
    GradedMap ev;
    for (std::size_t i = 0; i < hb.size(); ++i) ev.image.push_back(h.elems[hb.head[i]].table[rankWord(hb.body[i], b.size())]);
    return ev;
}

/// curry(F)(a) = (beta |-> F(a, beta)).
inline std::vector<HomElem> curry(const GradedSet& a, const GradedSet& b, const GradedSet& c, const Tensor& ab,
                                  const GradedMap& F)
{
    validate(ab.set, c, F);
    std::vector<HomElem> out;
    for (std::size_t x = 0; x < a.size(); ++x) {
        HomElem h{a.arity[x], {}};
        forEachWord(b.size(), a.arity[x], [&](const Word& w) { h.table.push_back(F.image[ab.find(x, w)]); });
        out.push_back(std::move(h));
    }
    return out;
}

inline GradedMap uncurry(const GradedSet& a, const GradedSet& b, const GradedSet& c, const Tensor& ab,
                         const std::vector<HomElem>& g)
{
    if (g.size() != a.size()) throw ArityError("uncurry: assignment is not total");
    for (std::size_t x = 0; x < a.size(); ++x) {
        if (g[x].arity != a.arity[x]) throw ArityError("uncurry: " + a.names[x] + " sent to a table of the wrong arity");
        validate(b, c, g[x]);
    }
    GradedMap F;
    for (std::size_t i = 0; i < ab.size(); ++i) F.image.push_back(g[ab.head[i]].table[rankWord(ab.body[i], b.size())]);
    return F;
}

/// Exhaustive curry/uncurry roundtrips between Hom(A [] B, C) and Hom(A, [B,C]).
inline CheckReport checkCurryAdjunction(const GradedSet& a, const GradedSet& b, const GradedSet& c)
{
    CheckReport rep("curry/uncurry");
    const Tensor ab = tensor(a, b);
    std::uint64_t left = 0;
    std::set<std::vector<HomElem>> curried;
    forEachGradedMap(ab.set, c, [&](const GradedMap& F) {
        ++left;
        ++rep.cases;
        if (!rep.passed()) return;
        auto g = curry(a, b, c, ab, F);
        if (uncurry(a, b, c, ab, g) != F) rep.fail("uncurry(curry F) != F for F = " + serialize(ab.set, c, F));
        curried.insert(std::move(g));
    });
    std::uint64_t right = 1;
    for (auto x : a.arity) right = checkedMul(right, homFiberSize(b, c, x));
    if (rep.passed() && left != right)
        rep.fail("hom-set sizes differ: " + std::to_string(left) + " vs " + std::to_string(right));
    if (rep.passed() && curried.size() != left) rep.fail("curry is not injective");

    // curry . uncurry on every g: A -> [B,C]
    std::vector<std::vector<HomElem>> fibers;
    for (auto x : a.arity) fibers.push_back(homFiber(b, c, x));
    std::vector<std::size_t> digit(a.size(), 0);
    for (const auto& f : fibers)
        if (f.empty()) return rep;
    while (rep.passed()) {
        std::vector<HomElem> g;
        for (std::size_t x = 0; x < a.size(); ++x) g.push_back(fibers[x][digit[x]]);
        ++rep.cases;
        if (curry(a, b, c, ab, uncurry(a, b, c, ab, g)) != g) rep.fail("curry(uncurry g) != g");
        std::size_t i = a.size();
        while (i > 0) {
            if (++digit[i - 1] < fibers[i - 1].size()) break;
            digit[i - 1] = 0;
            --i;
        }
        if (i == 0) break;
    }
    return rep;
}

} // namespace globop
