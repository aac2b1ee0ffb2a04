#pragma once

// Finite fibered sets over a finite base: change of base f* and its two
// adjoints, computed one fiber at a time.

#include "globop/error.hpp"
#include "globop/report.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace globop::fib {

/// An object of Set/B: a label list sitting over each base point.
struct FibSet {
    std::vector<std::string> base;
    std::vector<std::vector<std::string>> fibers;

    static FibSet over(std::vector<std::string> base)
    {
        FibSet s;
        s.fibers.resize(base.size());
        s.base = std::move(base);
        return s;
    }

    std::size_t size() const
    {
        std::size_t n = 0;
        for (const auto& f : fibers) n += f.size();
        return n;
    }

    std::size_t find(std::size_t b, const std::string& label) const
    {
        const auto& f = fibers.at(b);
        for (std::size_t i = 0; i < f.size(); ++i)
            if (f[i] == label) return i;
        return npos;
    }

    bool operator==(const FibSet&) const = default;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// A total map between finite bases.
struct BaseMap {
    std::vector<std::string> source;
    std::vector<std::string> target;
    std::vector<std::size_t> image;

    static BaseMap identity(const std::vector<std::string>& b)
    {
        BaseMap f{b, b, {}};
        for (std::size_t i = 0; i < b.size(); ++i) f.image.push_back(i);
        return f;
    }

    void validate() const
    {
        if (image.size() != source.size())
            throw Error("base map is not total");
        for (auto t : image)
            if (t >= target.size()) throw Error("base map points outside its target");
    }

    std::vector<std::size_t> preimage(std::size_t b) const
    {
        std::vector<std::size_t> out;
        for (std::size_t a = 0; a < image.size(); ++a)
            if (image[a] == b) out.push_back(a);
        return out;
    }
};

/// g after f.
inline BaseMap compose(const BaseMap& g, const BaseMap& f)
{
    if (f.target != g.source) throw BaseMismatch("cannot compose base maps: middle bases differ");
    BaseMap h{f.source, g.target, {}};
    for (auto i : f.image) h.image.push_back(g.image[i]);
    return h;
}

/// Fiber-preserving map between two FibSets over the same base:
/// image[b][i] is the index, inside the target fiber over b, of element i.
struct FibMap {
    std::vector<std::vector<std::size_t>> image;
    bool operator==(const FibMap&) const = default;
    auto operator<=>(const FibMap&) const = default;
};

inline bool isFiberPreserving(const FibSet& src, const FibSet& dst, const FibMap& m)
{
    if (src.base != dst.base || m.image.size() != src.fibers.size()) return false;
    for (std::size_t b = 0; b < src.fibers.size(); ++b) {
        if (m.image[b].size() != src.fibers[b].size()) return false;
        for (auto j : m.image[b])
            if (j >= dst.fibers[b].size()) return false;
    }
    return true;
}

inline bool isBijective(const FibSet& src, const FibSet& dst, const FibMap& m)
{
    if (!isFiberPreserving(src, dst, m)) return false;
    for (std::size_t b = 0; b < src.fibers.size(); ++b) {
        if (src.fibers[b].size() != dst.fibers[b].size()) return false;
        std::set<std::size_t> hit(m.image[b].begin(), m.image[b].end());
        if (hit.size() != dst.fibers[b].size()) return false;
    }
    return true;
}

/// f*(chi): the fiber over a is the fiber of chi over f(a), re-tagged by a.
inline FibSet pullback(const BaseMap& f, const FibSet& chi)
{
    f.validate();
    if (f.target != chi.base) throw BaseMismatch("pullback: map target is not the base of the fibered set");
    FibSet out = FibSet::over(f.source);
    for (std::size_t a = 0; a < f.source.size(); ++a)
        for (const auto& e : chi.fibers[f.image[a]])
            out.fibers[a].push_back("(" + f.source[a] + "," + e + ")");
    return out;
}

/// Sigma_f(psi): post-composition with f, so fibers over b are disjoint unions.
inline FibSet sigma(const BaseMap& f, const FibSet& psi)
{
    f.validate();
    if (f.source != psi.base) throw BaseMismatch("sigma: map source is not the base of the fibered set");
    FibSet out = FibSet::over(f.target);
    for (std::size_t a = 0; a < f.source.size(); ++a)
        for (const auto& e : psi.fibers[a])
            out.fibers[f.image[a]].push_back(f.source[a] + "." + e);
    return out;
}

inline std::string tupleLabel(const std::vector<std::string>& parts)
{
    std::string s = "<";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += ",";
        s += parts[i];
    }
    return s + ">";
}

/// Pi_f(psi): the fiber over b is the product of the psi-fibers over f^{-1}(b),
/// tuples ordered by source position. An empty preimage gives the one-point
/// set holding the empty tuple.
inline FibSet pi(const BaseMap& f, const FibSet& psi)
{
    f.validate();
    if (f.source != psi.base) throw BaseMismatch("pi: map source is not the base of the fibered set");
    FibSet out = FibSet::over(f.target);
    for (std::size_t b = 0; b < f.target.size(); ++b) {
        auto pre = f.preimage(b);
        std::vector<std::size_t> digit(pre.size(), 0);
        bool empty = false;
        for (auto a : pre)
            if (psi.fibers[a].empty()) empty = true;
        if (empty) continue;
        while (true) {
            std::vector<std::string> parts;
            for (std::size_t i = 0; i < pre.size(); ++i) parts.push_back(psi.fibers[pre[i]][digit[i]]);
            out.fibers[b].push_back(tupleLabel(parts));
            std::size_t i = pre.size();
            while (i > 0) {
                --i;
                if (++digit[i] < psi.fibers[pre[i]].size()) break;
                digit[i] = 0;
                if (i == 0) { i = static_cast<std::size_t>(-1); break; }
            }
            if (pre.empty() || i == static_cast<std::size_t>(-1)) break;
        }
    }
    return out;
}

/// Visits every fiber-preserving map src -> dst (odometer order).
inline void forEachFibMap(const FibSet& src, const FibSet& dst, const std::function<void(const FibMap&)>& fn)
{
    if (src.base != dst.base) throw BaseMismatch("hom-set between fibered sets over different bases");
    // flatten the domain so a single odometer covers every fiber
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t b = 0; b < src.fibers.size(); ++b) {
        if (!src.fibers[b].empty() && dst.fibers[b].empty()) return;
        for (std::size_t i = 0; i < src.fibers[b].size(); ++i) slots.emplace_back(b, i);
    }
    FibMap m;
    m.image.resize(src.fibers.size());
    for (std::size_t b = 0; b < src.fibers.size(); ++b) m.image[b].assign(src.fibers[b].size(), 0);
    while (true) {
        fn(m);
        std::size_t k = slots.size();
        bool carried = true;
        while (k > 0 && carried) {
            --k;
            auto [b, i] = slots[k];
            if (++m.image[b][i] < dst.fibers[b].size()) carried = false;
            else m.image[b][i] = 0;
        }
        if (carried) return;
    }
}

inline std::size_t countFibMaps(const FibSet& src, const FibSet& dst)
{
    std::size_t n = 0;
    forEachFibMap(src, dst, [&](const FibMap&) { ++n; });
    return n;
}

using PiBuilder = std::function<FibSet(const BaseMap&, const FibSet&)>;

/// Result of checking Sigma_f -| f* -| Pi_f on concrete objects.
struct AdjunctionReport {
    std::size_t homPullbackPsi = 0; // |Hom(f* chi, psi)|
    std::size_t homChiPi = 0;       // |Hom(chi, Pi_f psi)|
    std::size_t homSigmaChi = 0;    // |Hom(Sigma_f psi, chi)|
    std::size_t homPsiPullback = 0; // |Hom(psi, f* chi)|
    // explicit transposition tables; first = map on the left of the bijection
    std::vector<std::pair<FibMap, FibMap>> piBijection;
    std::vector<std::pair<FibMap, FibMap>> sigmaBijection;
    CheckReport right{"f* -| Pi_f"};
    CheckReport left{"Sigma_f -| f*"};

    bool passed() const { return right.passed() && left.passed(); }
};

inline std::string describe(const FibSet& x, const FibMap& m)
{
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (std::size_t b = 0; b < x.fibers.size(); ++b)
        for (std::size_t i = 0; i < x.fibers[b].size(); ++i) {
            if (!first) os << ", ";
            first = false;
            os << x.fibers[b][i] << "->" << m.image[b][i];
        }
    os << "}";
    return os.str();
}

namespace detail {

inline void checkBijection(CheckReport& rep, const std::vector<std::pair<FibMap, FibMap>>& table,
                           std::size_t leftCount, std::size_t rightCount)
{
    rep.cases = leftCount + rightCount;
    if (!rep.passed()) return;
    std::set<FibMap> images;
    for (const auto& [l, r] : table)
        if (!images.insert(r).second) {
            rep.fail("two maps transpose to the same map " + std::to_string(images.size()));
            return;
        }
    if (leftCount != rightCount)
        rep.fail("hom-set sizes differ: " + std::to_string(leftCount) + " vs " + std::to_string(rightCount));
}

} // namespace detail

/// Exhaustively transposes every map on one side of each adjunction and checks
/// that transposition lands in the other hom-set and is a bijection onto it.
/// `piImpl` and `sigmaImpl` default to the real constructions; tests pass
/// corrupted ones to see the check fail.
inline AdjunctionReport checkAdjunction(const BaseMap& f, const FibSet& chi, const FibSet& psi,
                                        const PiBuilder& piImpl = pi, const PiBuilder& sigmaImpl = sigma)
{
    AdjunctionReport rep;
    const FibSet pulled = pullback(f, chi);
    const FibSet prod = piImpl(f, psi);
    const FibSet sum = sigmaImpl(f, psi);
    if (prod.base != chi.base || sum.base != chi.base)
        throw BaseMismatch("adjunction check: constructions landed over the wrong base");

    // f* -| Pi_f : Hom(f* chi, psi) ~ Hom(chi, Pi_f psi)
    forEachFibMap(pulled, psi, [&](const FibMap& g) {
        ++rep.homPullbackPsi;
        if (!rep.right.passed()) return;
        FibMap h;
        h.image.resize(chi.fibers.size());
        for (std::size_t b = 0; b < chi.fibers.size(); ++b) {
            auto pre = f.preimage(b);
            for (std::size_t e = 0; e < chi.fibers[b].size(); ++e) {
                std::vector<std::string> parts;
                for (auto a : pre) {
                    std::size_t local = pulled.find(a, "(" + f.source[a] + "," + chi.fibers[b][e] + ")");
                    parts.push_back(psi.fibers[a][g.image[a][local]]);
                }
                std::size_t idx = prod.find(b, tupleLabel(parts));
                if (idx == FibSet::npos) {
                    rep.right.fail("map " + describe(pulled, g) + " has no transpose: " + tupleLabel(parts) +
                                   " is not an element of Pi over " + chi.base[b]);
                    return;
                }
                h.image[b].push_back(idx);
            }
        }
        rep.piBijection.emplace_back(g, std::move(h));
    });
    rep.homChiPi = countFibMaps(chi, prod);
    detail::checkBijection(rep.right, rep.piBijection, rep.homPullbackPsi, rep.homChiPi);

    // Sigma_f -| f* : Hom(Sigma_f psi, chi) ~ Hom(psi, f* chi)
    forEachFibMap(sum, chi, [&](const FibMap& k) {
        ++rep.homSigmaChi;
        if (!rep.left.passed()) return;
        FibMap h;
        h.image.resize(psi.fibers.size());
        for (std::size_t a = 0; a < psi.fibers.size(); ++a) {
            std::size_t b = f.image[a];
            for (std::size_t e = 0; e < psi.fibers[a].size(); ++e) {
                std::size_t local = sum.find(b, f.source[a] + "." + psi.fibers[a][e]);
                if (local == FibSet::npos) {
                    rep.left.fail("element " + f.source[a] + "." + psi.fibers[a][e] + " missing from Sigma over " +
                                  chi.base[b]);
                    return;
                }
                std::string target = "(" + f.source[a] + "," + chi.fibers[b][k.image[b][local]] + ")";
                h.image[a].push_back(pulled.find(a, target));
            }
        }
        rep.sigmaBijection.emplace_back(k, std::move(h));
    });
    rep.homPsiPullback = countFibMaps(psi, pulled);
    detail::checkBijection(rep.left, rep.sigmaBijection, rep.homSigmaChi, rep.homPsiPullback);
    return rep;
}

/// The canonical bijection pullback(g.f, chi) -> pullback(f, pullback(g, chi)).
inline FibMap pullbackCompositeIso(const BaseMap& f, const BaseMap& g, const FibSet& chi)
{
    const FibSet lhs = pullback(compose(g, f), chi);
    const FibSet rhs = pullback(f, pullback(g, chi));
    FibMap m;
    m.image.resize(lhs.fibers.size());
    for (std::size_t a = 0; a < f.source.size(); ++a) {
        const std::size_t b = f.image[a];
        const std::size_t c = g.image[b];
        for (const auto& e : chi.fibers[c]) {
            std::string label = "(" + f.source[a] + ",(" + g.source[b] + "," + e + "))";
            std::size_t j = rhs.find(a, label);
            if (j == FibSet::npos) throw Error("pullback composite: element " + label + " missing");
            m.image[a].push_back(j);
        }
    }
    return m;
}

inline std::string serialize(const FibSet& x)
{
    std::ostringstream os;
    os << "fibset {\n";
    for (std::size_t b = 0; b < x.base.size(); ++b) {
        os << "  " << x.base[b] << ": [";
        for (std::size_t i = 0; i < x.fibers[b].size(); ++i) os << (i ? ", " : "") << x.fibers[b][i];
        os << "]\n";
    }
    os << "}\n";
    return os.str();
}

inline std::string serialize(const FibSet& src, const FibSet& dst, const FibMap& m)
{
    std::ostringstream os;
    os << "fibmap {\n";
    for (std::size_t b = 0; b < src.base.size(); ++b) {
        os << "  " << src.base[b] << ": ";
        for (std::size_t i = 0; i < src.fibers[b].size(); ++i)
            os << (i ? ", " : "") << src.fibers[b][i] << " -> " << dst.fibers[b][m.image[b][i]];
        os << "\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace globop::fib
