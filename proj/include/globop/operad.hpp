#pragma once

// Nonsymmetric operads as monoids for the composition tensor product, the
// tautological operad taut(X) = [X,X], and algebras over a presentation.

#include "globop/error.hpp"
#include "globop/graded.hpp"
#include "globop/report.hpp"

#include <concepts>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace globop {

/// Underlying graded set, a unit of arity 1 and a finite composition table.
struct OperadPresentation {
    GradedSet carrier;
    std::size_t unit = 0;
    std::map<std::pair<std::size_t, Word>, std::size_t> table;

    std::optional<std::size_t> compose(std::size_t a, const Word& body) const
    {
        auto it = table.find({a, body});
        if (it == table.end()) return std::nullopt;
        return it->second;
    }

    void set(std::size_t a, Word body, std::size_t result) { table[{a, std::move(body)}] = result; }

    std::string showEntry(std::size_t a, const Word& body) const
    {
        return carrier.names[a] + "(" + showWord(carrier, body) + ")";
    }
};

/// Throws ArityError if the unit or any table entry breaks arities.
inline void validate(const OperadPresentation& o)
{
    if (o.unit >= o.carrier.size() || o.carrier.arity[o.unit] != 1) throw ArityError("operad unit must have arity 1");
    for (const auto& [key, c] : o.table) {
        const auto& [a, body] = key;
        if (a >= o.carrier.size() || c >= o.carrier.size()) throw ArityError("composition table refers to unknown elements");
        for (auto b : body)
            if (b >= o.carrier.size()) throw ArityError("composition table refers to unknown elements");
        if (body.size() != o.carrier.arity[a])
            throw ArityError("entry " + o.showEntry(a, body) + " has " + std::to_string(body.size()) + " inputs");
        if (o.carrier.arity[c] != wordArity(o.carrier, body))
            throw ArityError("entry " + o.showEntry(a, body) + " = " + o.carrier.names[c] + " breaks arity");
    }
}

/// What checkMonoid needs from an operad: arities, unit, a partial
/// composition and enumeration of each arity fiber.
template <class M>
concept OperadModel = requires(const M& m, const typename M::Elem& e, const std::vector<typename M::Elem>& body,
                               std::size_t n, const std::function<void(const typename M::Elem&)>& fn) {
    { m.arity(e) } -> std::convertible_to<std::size_t>;
    { m.unit() } -> std::convertible_to<typename M::Elem>;
    { m.compose(e, body) } -> std::same_as<std::optional<typename M::Elem>>;
    m.forEachOfArity(n, fn);
    { m.describe(e) } -> std::convertible_to<std::string>;
};

/// An OperadPresentation seen as an OperadModel.
struct PresentationModel {
    using Elem = std::size_t;
    const OperadPresentation& o;

    std::size_t arity(Elem e) const { return o.carrier.arity[e]; }
    Elem unit() const { return o.unit; }
    std::optional<Elem> compose(Elem a, const std::vector<Elem>& body) const { return o.compose(a, body); }
    void forEachOfArity(std::size_t n, const std::function<void(const Elem&)>& fn) const
    {
        for (auto e : o.carrier.ofArity(n)) fn(e);
    }
    std::string describe(Elem e) const { return o.carrier.names[e]; }
};

namespace detail {

/// Visits every sequence of `len` elements, each of arity <= maxArity, whose
/// arities sum to at most `budget`.
template <class Elem>
void forEachSequence(const std::vector<std::vector<Elem>>& byArity, std::size_t len, std::size_t budget,
                     const std::function<void(const std::vector<Elem>&, std::size_t)>& fn)
{
    std::vector<Elem> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t used) {
        if (cur.size() == len) {
            fn(cur, used);
            return;
        }
        for (std::size_t k = 0; k < byArity.size() && used + k <= budget; ++k)
            for (const auto& e : byArity[k]) {
                cur.push_back(e);
                rec(used + k);
                cur.pop_back();
            }
    };
    rec(0);
}

template <class M>
std::string showComposite(const M& m, const typename M::Elem& a, const std::vector<typename M::Elem>& body)
{
    std::string s = m.describe(a) + "(";
    for (std::size_t i = 0; i < body.size(); ++i) s += (i ? ", " : "") + m.describe(body[i]);
    return s + ")";
}

} // namespace detail

/// Unit and associativity laws on every configuration whose operations and
/// composites all have arity <= bound. A missing composite is an ERROR.
template <OperadModel M>
CheckReport checkMonoid(const M& m, std::size_t bound)
{
    using Elem = typename M::Elem;
    CheckReport rep("monoid");
    std::vector<std::vector<Elem>> byArity(bound + 1);
    for (std::size_t n = 0; n <= bound; ++n) m.forEachOfArity(n, [&](const Elem& e) { byArity[n].push_back(e); });
    const Elem e = m.unit();

    auto need = [&](const Elem& a, const std::vector<Elem>& body) -> std::optional<Elem> {
        auto r = m.compose(a, body);
        if (!r) rep.error("missing composite " + detail::showComposite(m, a, body));
        return r;
    };

    for (std::size_t n = 0; n <= bound && rep.status != Status::error; ++n)
        for (const auto& a : byArity[n]) {
            ++rep.cases;
            auto left = need(e, {a});
            auto right = need(a, std::vector<Elem>(n, e));
            if (!left || !right) return rep;
            if (!(*left == a)) rep.fail("left unit law fails at " + m.describe(a));
            if (!(*right == a)) rep.fail("right unit law fails at " + m.describe(a));
        }

    for (std::size_t n = 0; n <= bound; ++n)
        for (const auto& a : byArity[n]) {
            bool stop = false;
            detail::forEachSequence<Elem>(byArity, n, bound, [&](const std::vector<Elem>& bs, std::size_t k) {
                if (stop) return;
                auto ab = need(a, bs);
                if (!ab) return void(stop = true);
                detail::forEachSequence<Elem>(byArity, k, bound, [&](const std::vector<Elem>& cs, std::size_t) {
                    if (stop) return;
                    ++rep.cases;
                    auto lhs = need(*ab, cs);
                    if (!lhs) return void(stop = true);
                    std::vector<Elem> inner;
                    std::size_t pos = 0;
                    for (const auto& b : bs) {
                        std::size_t kb = m.arity(b);
                        auto bc = need(b, std::vector<Elem>(cs.begin() + pos, cs.begin() + pos + kb));
                        if (!bc) return void(stop = true);
                        inner.push_back(*bc);
                        pos += kb;
                    }
                    auto rhs = need(a, inner);
                    if (!rhs) return void(stop = true);
                    if (!(*lhs == *rhs)) {
                        std::string w = detail::showComposite(m, a, bs) + " then (";
                        for (std::size_t i = 0; i < cs.size(); ++i) w += (i ? ", " : "") + m.describe(cs[i]);
                        rep.fail("associativity fails at " + w + "): " + m.describe(*lhs) + " vs " + m.describe(*rhs));
                        stop = true;
                    }
                });
            });
            if (stop) return rep;
        }
    return rep;
}

// ---------------------------------------------------------------- taut(X)

inline std::vector<HomElem> tautFiber(const GradedSet& x, std::size_t n) { return homFiber(x, x, n); }

/// The identity table on length-1 words.
inline HomElem tautUnit(const GradedSet& x)
{
    HomElem e{1, {}};
    for (std::size_t i = 0; i < x.size(); ++i) e.table.push_back(i);
    return e;
}

/// Block substitution: evaluate each w_i on its block of the input, then g.
inline HomElem tautCompose(const GradedSet& x, const HomElem& g, const std::vector<HomElem>& ws)
{
    if (ws.size() != g.arity)
        throw ArityError("tautCompose: operation of arity " + std::to_string(g.arity) + " given " +
                         std::to_string(ws.size()) + " inputs");
    const std::size_t base = x.size();
    std::size_t k = 0;
    for (const auto& w : ws) k += w.arity;
    HomElem out{k, {}};
    out.table.resize(checkedPow(base, k));
    // blockSize[i] = |X|^{arity w_i}; the rank of the full word splits into block ranks
    std::vector<std::size_t> blockSize;
    for (const auto& w : ws) blockSize.push_back(checkedPow(base, w.arity));
    for (std::size_t r = 0; r < out.table.size(); ++r) {
        std::size_t rest = r, outer = 0, scale = 1;
        for (std::size_t i = ws.size(); i > 0; --i) {
            std::size_t block = rest % blockSize[i - 1];
            rest /= blockSize[i - 1];
            outer += ws[i - 1].table[block] * scale;
            scale *= base;
        }
        out.table[r] = g.table[outer];
    }
    return out;
}

/// taut(X) as an OperadModel.
struct TautModel {
    using Elem = HomElem;
    const GradedSet& x;

    std::size_t arity(const Elem& e) const { return e.arity; }
    Elem unit() const { return tautUnit(x); }
    std::optional<Elem> compose(const Elem& a, const std::vector<Elem>& body) const { return tautCompose(x, a, body); }
    void forEachOfArity(std::size_t n, const std::function<void(const Elem&)>& fn) const { forEachHomElem(x, x, n, fn); }
    std::string describe(const Elem& e) const { return serialize(x, e); }
};

/// m = curry(kappa . alpha^{-1}) with kappa = ev . (1 [] ev), computed on [X,X]
/// truncated to arities <= N. Entry i of `mult` is the composite of element i of hh.
struct KappaMultiplication {
    HomSet hom;
    Associator assoc; // alpha_{H,H,X}; assoc.xy is H [] H
    std::vector<HomElem> mult;
};

inline KappaMultiplication tautMultiplicationViaKappa(const GradedSet& x, std::size_t maxArity)
{
    KappaMultiplication k{homSet(x, x, maxArity), {}, {}};
    k.assoc = associator(k.hom.set, k.hom.set, x, false);
    const Tensor& hx = k.assoc.yz;
    GradedMap ev = evaluation(k.hom, x, hx);
    GradedMap oneEv = tensorMap(GradedMap::identity(k.hom.set.size()), ev, k.assoc.x_yz, hx);
    GradedMap kappa = compose(ev, oneEv);
    GradedMap f = compose(kappa, k.assoc.inverse);
    k.mult = curry(k.assoc.xy.set, x, x, k.assoc.xy_z, f);
    return k;
}

/// Bounds for the pointwise taut check: every operation involved has arity
/// <= maxArity and every composite has arity <= maxComposite.
struct TautBounds {
    std::size_t maxArity = 2;
    std::size_t maxComposite = 4;
};

namespace detail {

/// For each word length, the default table sending every word to its first
/// admissible value, or nullopt when the fiber is empty.
struct TautDefaults {
    const GradedSet& x;
    std::vector<std::optional<HomElem>> byArity;
    std::vector<std::vector<std::size_t>> valuesOfArity;

    TautDefaults(const GradedSet& xs, std::size_t maxLen) : x(xs)
    {
        std::size_t top = x.maxArity() * maxLen;
        valuesOfArity.resize(top + 1);
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x.arity[i] <= top) valuesOfArity[x.arity[i]].push_back(i);
        for (std::size_t n = 0; n <= maxLen; ++n) {
            HomElem h{n, {}};
            bool ok = true;
            forEachWord(x.size(), n, [&](const Word& w) {
                const auto& vs = valuesOfArity[wordArity(x, w)];
                if (vs.empty()) ok = false;
                else h.table.push_back(vs[0]);
            });
            byArity.push_back(ok ? std::optional<HomElem>(h) : std::nullopt);
        }
    }

    const std::vector<std::size_t>& values(std::size_t arity) const
    {
        static const std::vector<std::size_t> none;
        return arity < valuesOfArity.size() ? valuesOfArity[arity] : none;
    }
};

inline void forEachComposition(std::size_t parts, std::size_t maxPart, std::size_t maxTotal,
                               const std::function<void(const std::vector<std::size_t>&)>& fn)
{
    std::vector<std::size_t> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t used) {
        if (cur.size() == parts) return fn(cur);
        for (std::size_t k = 0; k <= maxPart && used + k <= maxTotal; ++k) {
            cur.push_back(k);
            rec(used + k);
            cur.pop_back();
        }
    };
    rec(0);
}

/// Visits every choice of one value per slot, slot i ranging over choices[i].
inline void forEachChoice(const std::vector<const std::vector<std::size_t>*>& choices,
                          const std::function<void(const std::vector<std::size_t>&)>& fn)
{
    for (auto c : choices)
        if (c->empty()) return;
    std::vector<std::size_t> digit(choices.size(), 0), val(choices.size());
    while (true) {
        for (std::size_t i = 0; i < choices.size(); ++i) val[i] = (*choices[i])[digit[i]];
        fn(val);
        std::size_t i = choices.size();
        while (i > 0) {
            if (++digit[i - 1] < choices[i - 1]->size()) break;
            digit[i - 1] = 0;
            --i;
        }
        if (i == 0) return;
    }
}

} // namespace detail

/// Monoid laws for taut(X), pointwise-exhaustively. An entry of a composite
/// at an input word depends only on the entries of the factors along one
/// evaluation path, so for every shape, every input word and every
/// admissible choice of values along that path the factors are built
/// (remaining entries at a fixed default) and the composite tables compared
/// in full.
inline CheckReport checkTautMonoid(const GradedSet& x, TautBounds b)
{
    CheckReport rep("taut monoid");
    const std::size_t A = b.maxArity, C = b.maxComposite;
    detail::TautDefaults def(x, std::max(A, C));
    const std::size_t base = x.size();
    const HomElem e = tautUnit(x);

    auto withEntry = [&](std::size_t n, const Word& w, std::size_t v) {
        HomElem h = *def.byArity[n];
        h.table[rankWord(w, base)] = v;
        return h;
    };

    // unit laws
    for (std::size_t n = 0; n <= A && rep.passed(); ++n) {
        if (!def.byArity[n]) continue;
        forEachWord(base, n, [&](const Word& w) {
            for (auto v : def.values(wordArity(x, w))) {
                if (!rep.passed()) return;
                ++rep.cases;
                HomElem g = withEntry(n, w, v);
                if (tautCompose(x, e, {g}) != g) rep.fail("left unit law fails at " + serialize(x, g));
                else if (tautCompose(x, g, std::vector<HomElem>(n, e)) != g)
                    rep.fail("right unit law fails at " + serialize(x, g));
            }
        });
    }

    // associativity: g (arity n), f_1..f_n (arities k_i), h_1..h_K (arities m_j)
    for (std::size_t n = 0; n <= A && rep.passed(); ++n) {
        if (!def.byArity[n]) continue;
        detail::forEachComposition(n, A, C, [&](const std::vector<std::size_t>& ks) {
            if (!rep.passed()) return;
            std::size_t K = 0;
            for (auto k : ks) {
                if (!def.byArity[k]) return;
                K += k;
            }
            detail::forEachComposition(K, A, C, [&](const std::vector<std::size_t>& ms) {
                if (!rep.passed()) return;
                std::size_t M = 0;
                for (auto m : ms) {
                    if (!def.byArity[m]) return;
                    M += m;
                }
                forEachWord(base, M, [&](const Word& beta) {
                    if (!rep.passed()) return;
                    // h_j values v_j on the blocks of beta
                    std::vector<Word> hBlocks;
                    std::vector<const std::vector<std::size_t>*> vChoices;
                    for (std::size_t j = 0, pos = 0; j < K; pos += ms[j], ++j) {
                        hBlocks.emplace_back(beta.begin() + pos, beta.begin() + pos + ms[j]);
                        vChoices.push_back(&def.values(wordArity(x, hBlocks.back())));
                    }
                    detail::forEachChoice(vChoices, [&](const std::vector<std::size_t>& v) {
                        if (!rep.passed()) return;
                        std::vector<Word> fBlocks;
                        std::vector<const std::vector<std::size_t>*> wChoices;
                        for (std::size_t i = 0, pos = 0; i < n; pos += ks[i], ++i) {
                            fBlocks.emplace_back(v.begin() + pos, v.begin() + pos + ks[i]);
                            wChoices.push_back(&def.values(wordArity(x, fBlocks.back())));
                        }
                        detail::forEachChoice(wChoices, [&](const std::vector<std::size_t>& w) {
                            if (!rep.passed()) return;
                            for (auto r : def.values(wordArity(x, w))) {
                                ++rep.cases;
                                HomElem g = withEntry(n, w, r);
                                std::vector<HomElem> fs, hs;
                                for (std::size_t i = 0; i < n; ++i) fs.push_back(withEntry(ks[i], fBlocks[i], w[i]));
                                for (std::size_t j = 0; j < K; ++j) hs.push_back(withEntry(ms[j], hBlocks[j], v[j]));
                                HomElem lhs = tautCompose(x, tautCompose(x, g, fs), hs);
                                std::vector<HomElem> inner;
                                for (std::size_t i = 0, pos = 0; i < n; pos += ks[i], ++i)
                                    inner.push_back(tautCompose(
                                        x, fs[i], std::vector<HomElem>(hs.begin() + pos, hs.begin() + pos + ks[i])));
                                HomElem rhs = tautCompose(x, g, inner);
                                if (lhs != rhs || lhs.table[rankWord(beta, base)] != r) {
                                    std::string wit = "g=" + serialize(x, g) + " f=(";
                                    for (std::size_t i = 0; i < n; ++i) wit += (i ? "; " : "") + serialize(x, fs[i]);
                                    wit += ") h=(";
                                    for (std::size_t j = 0; j < K; ++j) wit += (j ? "; " : "") + serialize(x, hs[j]);
                                    rep.fail("associativity fails at " + wit + ")");
                                    return;
                                }
                            }
                        });
                    });
                });
            });
        });
    }
    return rep;
}

// ---------------------------------------------------------------- homomorphisms and algebras

struct OperadHom {
    OperadPresentation source;
    OperadPresentation target;
    GradedMap map;
};

/// Unit preservation and compatibility with every source table entry whose
/// head and composite have arity <= bound.
inline CheckReport checkOperadHom(const OperadHom& h, std::size_t bound)
{
    CheckReport rep("operad hom");
    validate(h.source.carrier, h.target.carrier, h.map);
    ++rep.cases;
    if (h.map(h.source.unit) != h.target.unit) rep.fail("unit " + h.source.carrier.names[h.source.unit] + " not preserved");
    for (const auto& [key, c] : h.source.table) {
        const auto& [a, body] = key;
        if (h.source.carrier.arity[a] > bound || h.source.carrier.arity[c] > bound) continue;
        ++rep.cases;
        Word img;
        for (auto b : body) img.push_back(h.map(b));
        auto r = h.target.compose(h.map(a), img);
        if (!r) {
            rep.error("target has no entry for " + h.target.showEntry(h.map(a), img));
            return rep;
        }
        if (*r != h.map(c))
            rep.fail("composite " + h.source.showEntry(a, body) + " = " + h.source.carrier.names[c] + " maps to " +
                     h.target.carrier.names[h.map(c)] + " but " + h.target.showEntry(h.map(a), img) + " = " +
                     h.target.carrier.names[*r]);
    }
    return rep;
}

/// Visits every graded map P -> O that passes checkOperadHom at the bound.
inline void forEachOperadHom(const OperadPresentation& p, const OperadPresentation& o, std::size_t bound,
                             const std::function<void(const OperadHom&)>& fn)
{
    forEachGradedMap(p.carrier, o.carrier, [&](const GradedMap& f) {
        OperadHom h{p, o, f};
        if (checkOperadHom(h, bound).passed()) fn(h);
    });
}

/// An operad O acting on X through a map O -> taut(X).
struct AlgebraWitness {
    OperadPresentation operad;
    GradedSet carrier;
    std::vector<HomElem> action;
};

inline void validate(const AlgebraWitness& w)
{
    if (w.action.size() != w.operad.carrier.size()) throw ArityError("algebra assignment is not total");
    for (std::size_t o = 0; o < w.action.size(); ++o) {
        if (w.action[o].arity != w.operad.carrier.arity[o])
            throw ArityError(w.operad.carrier.names[o] + " assigned a table of arity " + std::to_string(w.action[o].arity));
        validate(w.carrier, w.carrier, w.action[o]);
    }
}

/// f(unit) = tautUnit and f(m(a; psi)) = tautCompose(f(a); f(psi)) on every
/// table entry whose head and composite have arity <= bound.
inline CheckReport checkAlgebra(const AlgebraWitness& w, std::size_t bound)
{
    CheckReport rep("algebra");
    validate(w);
    const auto& names = w.operad.carrier.names;
    ++rep.cases;
    if (w.action[w.operad.unit] != tautUnit(w.carrier))
        rep.fail("unit " + names[w.operad.unit] + " acts as " + serialize(w.carrier, w.action[w.operad.unit]));
    for (const auto& [key, c] : w.operad.table) {
        const auto& [a, body] = key;
        if (w.operad.carrier.arity[a] > bound || w.operad.carrier.arity[c] > bound) continue;
        ++rep.cases;
        std::vector<HomElem> ins;
        for (auto b : body) ins.push_back(w.action[b]);
        HomElem got = tautCompose(w.carrier, w.action[a], ins);
        if (got != w.action[c])
            rep.fail("composite " + w.operad.showEntry(a, body) + " = " + names[c] + " acts as " +
                     serialize(w.carrier, w.action[c]) + " but the composite action is " + serialize(w.carrier, got));
    }
    return rep;
}

/// True iff the carrier is concentrated in degree 0.
inline bool isSetAlgebra(const AlgebraWitness& w)
{
    for (auto a : w.carrier.arity)
        if (a != 0) return false;
    return true;
}

/// The composite P -> O -> taut(X).
inline AlgebraWitness restrictAlgebra(const OperadHom& g, const AlgebraWitness& f)
{
    if (!(g.target.carrier == f.operad.carrier)) throw BaseMismatch("restrictAlgebra: hom target is not the algebra's operad");
    AlgebraWitness out{g.source, f.carrier, {}};
    for (std::size_t p = 0; p < g.source.carrier.size(); ++p) out.action.push_back(f.action.at(g.map(p)));
    return out;
}

// ---------------------------------------------------------------- small presentations

/// One operation of each arity <= bound, every composite the unique one.
inline OperadPresentation terminalOperad(std::size_t bound)
{
    OperadPresentation o;
    for (std::size_t n = 0; n <= bound; ++n) o.carrier.add("c" + std::to_string(n), n);
    o.unit = 1;
    for (std::size_t n = 0; n <= bound; ++n)
        detail::forEachComposition(n, bound, bound, [&](const std::vector<std::size_t>& ks) {
            std::size_t k = 0;
            for (auto x : ks) k += x;
            o.set(n, Word(ks.begin(), ks.end()), k);
        });
    return o;
}

/// A finite monoid as an operad concentrated in arity 1.
inline OperadPresentation monoidOperad(const std::vector<std::string>& names,
                                       const std::vector<std::vector<std::size_t>>& mul, std::size_t unit)
{
    OperadPresentation o;
    for (const auto& n : names) o.carrier.add(n, 1);
    o.unit = unit;
    for (std::size_t a = 0; a < names.size(); ++a)
        for (std::size_t b = 0; b < names.size(); ++b) o.set(a, {b}, mul[a][b]);
    return o;
}

/// taut(X) truncated to arities <= bound as an explicit presentation.
inline OperadPresentation tautPresentation(const GradedSet& x, std::size_t bound)
{
    OperadPresentation o;
    HomSet h = homSet(x, x, bound);
    o.carrier = h.set;
    o.unit = h.find(tautUnit(x));
    for (std::size_t n = 0; n <= bound; ++n)
        for (auto a : o.carrier.ofArity(n)) {
            std::vector<std::vector<std::size_t>> byArity(bound + 1);
            for (std::size_t k = 0; k <= bound; ++k) byArity[k] = o.carrier.ofArity(k);
            detail::forEachSequence<std::size_t>(byArity, n, bound, [&](const std::vector<std::size_t>& body, std::size_t) {
                std::vector<HomElem> ins;
                for (auto b : body) ins.push_back(h.elems[b]);
                o.set(a, body, h.find(tautCompose(x, h.elems[a], ins)));
            });
        }
    return o;
}

} // namespace globop
