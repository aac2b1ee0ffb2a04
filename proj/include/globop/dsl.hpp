#pragma once

// The globop document language: declarations of graded sets, maps, operads,
// algebras, globular sets, collections, globular operads and their algebras,
// followed by check directives. parse() yields a Document whose canonical
// printing parses back to the same Document; run() executes the directives.

#include "globop/collection.hpp"
#include "globop/error.hpp"
#include "globop/glob_operad.hpp"
#include "globop/globset.hpp"
#include "globop/graded.hpp"
#include "globop/operad.hpp"
#include "globop/report.hpp"
#include "globop/tree.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace globop::dsl {

struct Loc {
    std::size_t line = 1;
    std::size_t col = 1;
};

/// Any error in a document, located at the offending character.
class DslError : public Error {
public:
    DslError(const std::string& msg, Loc l)
        : Error(std::to_string(l.line) + ":" + std::to_string(l.col) + ": " + msg), loc(l), message(msg)
    {
    }
    Loc loc;
    std::string message;
};

/// A name as written; equality ignores where it was written.
struct Name {
    std::string text;
    Loc loc;
    bool operator==(const Name& o) const { return text == o.text; }
};

struct BoundsDecl {
    std::optional<std::size_t> maxArity, dim, shape;
    bool operator==(const BoundsDecl&) const = default;
};

struct GradedSetDecl {
    Name name;
    std::vector<std::pair<Name, std::size_t>> elems;
    bool operator==(const GradedSetDecl&) const = default;
};

/// src has one graded set, or two for a map out of their tensor.
struct MapDecl {
    Name name;
    std::vector<Name> src;
    Name dst;
    std::vector<std::pair<Name, Name>> assign;
    bool operator==(const MapDecl&) const = default;
};

struct OperadEntry {
    Name head;
    std::vector<Name> body;
    Name result;
    bool operator==(const OperadEntry&) const = default;
};

struct OperadDecl {
    Name name, carrier, unit;
    std::vector<OperadEntry> entries;
    bool operator==(const OperadDecl&) const = default;
};

/// `cell = [v, ...];` values listed in the canonical order of the inputs.
struct TableEntry {
    Name cell;
    std::vector<Name> values;
    bool operator==(const TableEntry&) const = default;
};

struct AlgebraDecl {
    Name name, operad, carrier;
    std::vector<TableEntry> tables;
    bool operator==(const AlgebraDecl&) const = default;
};

struct GlobCellDecl {
    Name name;
    std::optional<Name> src, tgt;
    bool operator==(const GlobCellDecl&) const = default;
};

struct GlobSetDecl {
    Name name;
    std::size_t dim = 0;
    std::vector<std::vector<GlobCellDecl>> cells;
    bool operator==(const GlobSetDecl&) const = default;
};

struct CollectionDecl {
    Name name, set;
    std::vector<std::pair<Name, Tree>> arities;
    bool operator==(const CollectionDecl&) const = default;
};

/// `compose head{labels|by|dimension} = result;`
struct GlobEntry {
    Name head;
    std::vector<std::vector<Name>> labels;
    Name result;
    bool operator==(const GlobEntry&) const = default;
};

struct GlobOperadDecl {
    Name name, coll;
    std::vector<std::pair<std::size_t, Name>> units;
    std::vector<GlobEntry> entries;
    bool operator==(const GlobOperadDecl&) const = default;
};

struct GlobAlgebraDecl {
    Name name, operad, carrier;
    std::vector<TableEntry> tables;
    bool operator==(const GlobAlgebraDecl&) const = default;
};

/// A directive argument: a declared name or `taut(name)`.
struct Target {
    bool taut = false;
    Name name;
    bool operator==(const Target&) const = default;
};

struct CheckDecl {
    Name kind;
    std::vector<Target> args;
    std::optional<std::size_t> bound;
    bool operator==(const CheckDecl&) const = default;
};

using Decl = std::variant<BoundsDecl, GradedSetDecl, MapDecl, OperadDecl, AlgebraDecl, GlobSetDecl, CollectionDecl,
                          GlobOperadDecl, GlobAlgebraDecl, CheckDecl>;

struct Statement {
    Loc loc;
    Decl decl;
    bool operator==(const Statement& o) const { return decl == o.decl; }
};

struct Document {
    std::vector<Statement> statements;
    bool operator==(const Document&) const = default;
};

struct Bounds {
    std::optional<std::size_t> maxArity, dim, shape;
};

// ---------------------------------------------------------------- check kinds

enum class Setting { classical, globular };

struct KindInfo {
    std::size_t args;
    Setting setting;
    bool bounded;
};

inline const std::map<std::string, KindInfo>& checkKinds()
{
    static const std::map<std::string, KindInfo> kinds{
        {"monoid", {1, Setting::classical, true}},        {"algebra", {1, Setting::classical, true}},
        {"setalgebra", {1, Setting::classical, false}},   {"associator", {3, Setting::classical, false}},
        {"pentagon", {4, Setting::classical, false}},     {"triangles", {2, Setting::classical, false}},
        {"adjunction", {3, Setting::classical, false}},   {"cartesian", {1, Setting::globular, true}},
        {"globmonoid", {1, Setting::globular, true}},     {"collalgebra", {1, Setting::globular, true}},
        {"globalgebra", {1, Setting::globular, false}},   {"leinster", {1, Setting::globular, true}},
        {"collcoherence", {3, Setting::globular, false}}, {"colladjunction", {3, Setting::globular, true}},
    };
    return kinds;
}

// ---------------------------------------------------------------- parser

namespace detail {

inline bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool identChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text)
    {
        lineStart_.push_back(0);
        for (std::size_t i = 0; i < s_.size(); ++i)
            if (s_[i] == '\n') lineStart_.push_back(i + 1);
    }

    Document document()
    {
        Document doc;
        while (true) {
            skip();
            if (pos_ >= s_.size()) break;
            doc.statements.push_back(statement());
        }
        return doc;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
    std::vector<std::size_t> lineStart_;

    Loc locAt(std::size_t p) const
    {
        auto it = std::upper_bound(lineStart_.begin(), lineStart_.end(), p);
        const std::size_t line = static_cast<std::size_t>(it - lineStart_.begin());
        return {line, p - lineStart_[line - 1] + 1};
    }
    Loc here() { return locAt(pos_); }

    [[noreturn]] void fail(const std::string& msg) { throw DslError(msg, here()); }

    void skip()
    {
        while (pos_ < s_.size()) {
            if (std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            else if (s_[pos_] == '#')
                while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
            else break;
        }
    }

    bool tryPunct(const std::string& p)
    {
        skip();
        if (s_.compare(pos_, p.size(), p) != 0) return false;
        pos_ += p.size();
        return true;
    }

    void expect(const std::string& p)
    {
        if (!tryPunct(p)) fail("expected '" + p + "'");
    }

    bool tryWord(const std::string& w)
    {
        skip();
        if (s_.compare(pos_, w.size(), w) != 0) return false;
        if (pos_ + w.size() < s_.size() && (identChar(s_[pos_ + w.size()]) || s_[pos_ + w.size()] == '-')) return false;
        pos_ += w.size();
        return true;
    }

    void expectWord(const std::string& w)
    {
        if (!tryWord(w)) fail("expected '" + w + "'");
    }

    bool atName()
    {
        skip();
        return pos_ < s_.size() && (identStart(s_[pos_]) || s_[pos_] == '"');
    }

    Name name()
    {
        skip();
        Name n{"", here()};
        if (pos_ < s_.size() && s_[pos_] == '"') {
            ++pos_;
            while (pos_ < s_.size() && s_[pos_] != '"') {
                if (s_[pos_] == '\n') fail("unterminated quoted name");
                if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
                n.text += s_[pos_++];
            }
            if (pos_ >= s_.size()) fail("unterminated quoted name");
            ++pos_;
            if (n.text.empty()) throw DslError("empty name", n.loc);
            return n;
        }
        if (pos_ >= s_.size() || !identStart(s_[pos_])) fail("expected a name");
        while (pos_ < s_.size() && identChar(s_[pos_])) n.text += s_[pos_++];
        return n;
    }

    std::size_t number()
    {
        skip();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected a natural number");
        std::size_t v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + static_cast<std::size_t>(s_[pos_++] - '0');
            if (v > 1000000) fail("number too large");
        }
        return v;
    }

    Tree tree()
    {
        skip();
        try {
            return parseTreeAt(s_, pos_);
        } catch (const LiteralError& e) {
            throw DslError("malformed pasting literal", locAt(e.offset));
        }
    }

    std::vector<Name> nameList(const std::string& close)
    {
        std::vector<Name> out;
        if (tryPunct(close)) return out;
        while (true) {
            out.push_back(name());
            if (tryPunct(close)) return out;
            expect(",");
        }
    }

    std::vector<TableEntry> tables()
    {
        std::vector<TableEntry> out;
        expect("{");
        while (!tryPunct("}")) {
            TableEntry e{name(), {}};
            expect("=");
            expect("[");
            e.values = nameList("]");
            expect(";");
            out.push_back(std::move(e));
        }
        return out;
    }

    Statement statement()
    {
        skip();
        const Loc loc = here();
        if (tryWord("bounds")) return {loc, bounds()};
        if (tryWord("gradedset")) return {loc, gradedSet()};
        if (tryWord("map")) return {loc, map()};
        if (tryWord("operad")) return {loc, operad()};
        if (tryWord("algebra")) return {loc, algebra()};
        if (tryWord("globset")) return {loc, globSet()};
        if (tryWord("collection")) return {loc, collection()};
        if (tryWord("globoperad")) return {loc, globOperad()};
        if (tryWord("globalgebra")) return {loc, globAlgebra()};
        if (tryWord("check")) return {loc, check()};
        fail("expected a declaration or 'check'");
    }

    BoundsDecl bounds()
    {
        BoundsDecl b;
        bool any = false;
        while (true) {
            if (tryWord("max-arity")) b.maxArity = number();
            else if (tryWord("dim")) b.dim = number();
            else if (tryWord("max-shape-size")) b.shape = number();
            else break;
            any = true;
        }
        if (!any) fail("expected 'max-arity', 'dim' or 'max-shape-size'");
        expect(";");
        return b;
    }

    GradedSetDecl gradedSet()
    {
        GradedSetDecl d{name(), {}};
        expect("{");
        if (tryPunct("}")) return d;
        while (true) {
            Name n = name();
            expect(":");
            d.elems.emplace_back(std::move(n), number());
            if (tryPunct("}")) return d;
            expect(",");
        }
    }

    MapDecl map()
    {
        MapDecl d{name(), {}, {}, {}};
        expect(":");
        d.src.push_back(name());
        if (tryPunct("*")) d.src.push_back(name());
        expect("->");
        d.dst = name();
        expect("{");
        if (tryPunct("}")) return d;
        while (true) {
            Name a = name();
            expect("->");
            d.assign.emplace_back(std::move(a), name());
            if (tryPunct("}")) return d;
            expect(",");
        }
    }

    OperadDecl operad()
    {
        OperadDecl d{name(), {}, {}, {}};
        expectWord("on");
        d.carrier = name();
        expect("{");
        bool unit = false;
        while (!tryPunct("}")) {
            if (tryWord("unit")) {
                if (unit) fail("unit given twice");
                expect("=");
                d.unit = name();
                unit = true;
            } else if (tryWord("compose")) {
                OperadEntry e{name(), {}, {}};
                expect("(");
                e.body = nameList(")");
                expect("=");
                e.result = name();
                d.entries.push_back(std::move(e));
            } else {
                fail("expected 'unit' or 'compose'");
            }
            expect(";");
        }
        if (!unit) fail("operad has no unit");
        return d;
    }

    AlgebraDecl algebra()
    {
        AlgebraDecl d{name(), {}, {}, {}};
        expectWord("of");
        d.operad = name();
        expectWord("on");
        d.carrier = name();
        d.tables = tables();
        return d;
    }

    GlobSetDecl globSet()
    {
        GlobSetDecl d{name(), 0, {}};
        expectWord("dim");
        d.dim = number();
        d.cells.resize(d.dim + 1);
        expect("{");
        while (!tryPunct("}")) {
            const Loc at = here();
            const std::size_t k = number();
            if (!tryPunct("-cells")) fail("expected '-cells'");
            if (k > d.dim) throw DslError(std::to_string(k) + "-cells in a globular set of dimension " + std::to_string(d.dim), at);
            if (tryPunct(";")) continue;
            while (true) {
                GlobCellDecl c{name(), std::nullopt, std::nullopt};
                if (k > 0) {
                    expect(":");
                    c.src = name();
                    if (!tryPunct("->") && !tryPunct("=>")) fail("expected '->' or '=>'");
                    c.tgt = name();
                }
                d.cells[k].push_back(std::move(c));
                if (tryPunct(";")) break;
                expect(",");
            }
        }
        return d;
    }

    CollectionDecl collection()
    {
        CollectionDecl d{name(), {}, {}};
        expectWord("on");
        d.set = name();
        expect("{");
        while (!tryPunct("}")) {
            Name n = name();
            expect("@");
            d.arities.emplace_back(std::move(n), tree());
            expect(";");
        }
        return d;
    }

    GlobOperadDecl globOperad()
    {
        GlobOperadDecl d{name(), {}, {}, {}};
        expectWord("on");
        d.coll = name();
        expect("{");
        while (!tryPunct("}")) {
            if (tryWord("unit")) {
                const std::size_t k = number();
                expect("=");
                d.units.emplace_back(k, name());
            } else if (tryWord("compose")) {
                GlobEntry e{name(), {}, {}};
                expect("{");
                e.labels.emplace_back();
                while (true) {
                    e.labels.back().push_back(name());
                    if (tryPunct("}")) break;
                    if (tryPunct("|")) e.labels.emplace_back();
                    else expect(",");
                }
                expect("=");
                e.result = name();
                d.entries.push_back(std::move(e));
            } else {
                fail("expected 'unit' or 'compose'");
            }
            expect(";");
        }
        return d;
    }

    GlobAlgebraDecl globAlgebra()
    {
        GlobAlgebraDecl d{name(), {}, {}, {}};
        expectWord("of");
        d.operad = name();
        expectWord("on");
        d.carrier = name();
        d.tables = tables();
        return d;
    }

    CheckDecl check()
    {
        CheckDecl d{name(), {}, std::nullopt};
        auto kind = checkKinds().find(d.kind.text);
        if (kind == checkKinds().end()) throw DslError("unknown check '" + d.kind.text + "'", d.kind.loc);
        while (true) {
            if (tryWord("bound")) {
                d.bound = number();
                break;
            }
            if (!atName()) break;
            Target t;
            Name n = name();
            if (n.text == "taut" && tryPunct("(")) {
                t.taut = true;
                t.name = name();
                expect(")");
            } else {
                t.name = std::move(n);
            }
            d.args.push_back(std::move(t));
        }
        if (d.args.size() != kind->second.args)
            throw DslError("check " + d.kind.text + " takes " + std::to_string(kind->second.args) + " argument(s)", d.kind.loc);
        expect(";");
        return d;
    }
};

inline bool plainName(const std::string& s)
{
    if (s.empty() || !identStart(s[0])) return false;
    for (char c : s)
        if (!identChar(c)) return false;
    static const std::set<std::string> reserved{"bound", "on", "of", "unit", "compose", "dim", "taut"};
    return !reserved.count(s);
}

inline std::string quote(const std::string& s)
{
    if (plainName(s)) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') q += '\\';
        q += c;
    }
    return q + "\"";
}

inline std::string joinNames(const std::vector<Name>& ns, const std::string& sep = ", ")
{
    std::string s;
    for (std::size_t i = 0; i < ns.size(); ++i) s += (i ? sep : "") + quote(ns[i].text);
    return s;
}

} // namespace detail

/// Throws DslError with the line and column of the first problem.
inline Document parse(const std::string& text) { return detail::Parser(text).document(); }

/// Canonical text; parse(print(d)) == d.
inline std::string print(const Document& doc)
{
    using detail::joinNames;
    using detail::quote;
    std::string out;
    auto tablesOut = [&](const std::vector<TableEntry>& ts) {
        out += " {\n";
        for (const auto& t : ts) out += "  " + quote(t.cell.text) + " = [" + joinNames(t.values) + "];\n";
        out += "}\n";
    };
    for (const auto& st : doc.statements) {
        std::visit(
            [&](const auto& d) {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, BoundsDecl>) {
                    out += "bounds";
                    if (d.maxArity) out += " max-arity " + std::to_string(*d.maxArity);
                    if (d.dim) out += " dim " + std::to_string(*d.dim);
                    if (d.shape) out += " max-shape-size " + std::to_string(*d.shape);
                    out += ";\n";
                } else if constexpr (std::is_same_v<T, GradedSetDecl>) {
                    out += "gradedset " + quote(d.name.text) + " {";
                    for (std::size_t i = 0; i < d.elems.size(); ++i)
                        out += (i ? ", " : " ") + quote(d.elems[i].first.text) + ": " + std::to_string(d.elems[i].second);
                    out += d.elems.empty() ? "}\n" : " }\n";
                } else if constexpr (std::is_same_v<T, MapDecl>) {
                    out += "map " + quote(d.name.text) + ": " + joinNames(d.src, " * ") + " -> " + quote(d.dst.text) + " {";
                    for (std::size_t i = 0; i < d.assign.size(); ++i)
                        out += (i ? ", " : " ") + quote(d.assign[i].first.text) + " -> " + quote(d.assign[i].second.text);
                    out += d.assign.empty() ? "}\n" : " }\n";
                } else if constexpr (std::is_same_v<T, OperadDecl>) {
                    out += "operad " + quote(d.name.text) + " on " + quote(d.carrier.text) + " {\n";
                    out += "  unit = " + quote(d.unit.text) + ";\n";
                    for (const auto& e : d.entries)
                        out += "  compose " + quote(e.head.text) + "(" + joinNames(e.body) + ") = " + quote(e.result.text) + ";\n";
                    out += "}\n";
                } else if constexpr (std::is_same_v<T, AlgebraDecl>) {
                    out += "algebra " + quote(d.name.text) + " of " + quote(d.operad.text) + " on " + quote(d.carrier.text);
                    tablesOut(d.tables);
                } else if constexpr (std::is_same_v<T, GlobSetDecl>) {
                    out += "globset " + quote(d.name.text) + " dim " + std::to_string(d.dim) + " {\n";
                    for (std::size_t k = 0; k < d.cells.size(); ++k) {
                        if (d.cells[k].empty()) continue;
                        out += "  " + std::to_string(k) + "-cells ";
                        for (std::size_t i = 0; i < d.cells[k].size(); ++i) {
                            const auto& c = d.cells[k][i];
                            out += (i ? ", " : "") + quote(c.name.text);
                            if (k > 0) out += ": " + quote(c.src->text) + (k == 1 ? " -> " : " => ") + quote(c.tgt->text);
                        }
                        out += ";\n";
                    }
                    out += "}\n";
                } else if constexpr (std::is_same_v<T, CollectionDecl>) {
                    out += "collection " + quote(d.name.text) + " on " + quote(d.set.text) + " {\n";
                    for (const auto& [n, t] : d.arities) out += "  " + quote(n.text) + " @ " + show(t) + ";\n";
                    out += "}\n";
                } else if constexpr (std::is_same_v<T, GlobOperadDecl>) {
                    out += "globoperad " + quote(d.name.text) + " on " + quote(d.coll.text) + " {\n";
                    for (const auto& [k, n] : d.units) out += "  unit " + std::to_string(k) + " = " + quote(n.text) + ";\n";
                    for (const auto& e : d.entries) {
                        out += "  compose " + quote(e.head.text) + "{";
                        for (std::size_t g = 0; g < e.labels.size(); ++g) out += (g ? "|" : "") + joinNames(e.labels[g], ",");
                        out += "} = " + quote(e.result.text) + ";\n";
                    }
                    out += "}\n";
                } else if constexpr (std::is_same_v<T, GlobAlgebraDecl>) {
                    out += "globalgebra " + quote(d.name.text) + " of " + quote(d.operad.text) + " on " + quote(d.carrier.text);
                    tablesOut(d.tables);
                } else if constexpr (std::is_same_v<T, CheckDecl>) {
                    out += "check " + d.kind.text;
                    for (const auto& a : d.args) out += " " + (a.taut ? "taut(" + quote(a.name.text) + ")" : quote(a.name.text));
                    if (d.bound) out += " bound " + std::to_string(*d.bound);
                    out += ";\n";
                }
            },
            st.decl);
    }
    return out;
}

// ---------------------------------------------------------------- elaboration

struct NamedMap {
    GradedSet src, dst;
    GradedMap map;
    std::optional<std::pair<std::string, std::string>> tensorOf;
};

/// Everything a document declares, resolved against the library types.
struct Env {
    std::map<std::string, GradedSet> graded;
    std::map<std::string, NamedMap> maps;
    std::map<std::string, OperadPresentation> operads;
    std::map<std::string, AlgebraWitness> algebras;
    std::map<std::string, TruncGlobSet> globsets;
    std::map<std::string, Collection> collections;
    std::map<std::string, GlobOperadPresentation> globoperads;
    std::map<std::string, CollAlgebraWitness> globalgebras;
    std::set<std::string> names;
    Bounds bounds;
};

namespace detail {

template <class M>
const typename M::mapped_type& lookup(const M& m, const Name& n, const std::string& what)
{
    auto it = m.find(n.text);
    if (it == m.end()) throw DslError("no " + what + " named '" + n.text + "'", n.loc);
    return it->second;
}

inline std::size_t elemOf(const GradedSet& x, const Name& n)
{
    if (!x.contains(n.text)) throw DslError("no element named '" + n.text + "'", n.loc);
    return x.indexOf(n.text);
}

/// (dimension, index) of a named cell; names are unique across dimensions.
inline std::pair<std::size_t, std::size_t> cellOf(const TruncGlobSet& g, const Name& n)
{
    for (std::size_t k = 0; k <= g.dim; ++k)
        if (auto i = g.find(k, n.text); i != npos) return {k, i};
    throw DslError("no cell named '" + n.text + "'", n.loc);
}

inline std::size_t cellOfDim(const TruncGlobSet& g, std::size_t k, const Name& n)
{
    auto [d, i] = cellOf(g, n);
    if (d != k)
        throw DslError("'" + n.text + "' is a " + std::to_string(d) + "-cell, expected a " + std::to_string(k) + "-cell", n.loc);
    return i;
}

class Elaborator {
public:
    explicit Elaborator(Bounds fallback) { env.bounds = fallback; }

    Env env;

    void statement(const Statement& st)
    {
        std::visit([&](const auto& d) { decl(d, st.loc); }, st.decl);
    }

private:
    void claim(const Name& n)
    {
        if (!env.names.insert(n.text).second) throw DslError("duplicate name '" + n.text + "'", n.loc);
    }

    void decl(const BoundsDecl& d, Loc)
    {
        if (d.maxArity) env.bounds.maxArity = d.maxArity;
        if (d.dim) env.bounds.dim = d.dim;
        if (d.shape) env.bounds.shape = d.shape;
    }

    void decl(const GradedSetDecl& d, Loc)
    {
        claim(d.name);
        GradedSet x;
        for (const auto& [n, a] : d.elems) {
            if (env.bounds.maxArity && a > *env.bounds.maxArity)
                throw DslError("arity " + std::to_string(a) + " exceeds max-arity " + std::to_string(*env.bounds.maxArity), n.loc);
            if (x.contains(n.text)) throw DslError("duplicate element '" + n.text + "'", n.loc);
            x.add(n.text, a);
        }
        env.graded.emplace(d.name.text, std::move(x));
    }

    void decl(const MapDecl& d, Loc)
    {
        claim(d.name);
        NamedMap m;
        if (d.src.size() == 2) {
            m.src = tensor(lookup(env.graded, d.src[0], "graded set"), lookup(env.graded, d.src[1], "graded set")).set;
            m.tensorOf = std::make_pair(d.src[0].text, d.src[1].text);
        } else {
            m.src = lookup(env.graded, d.src[0], "graded set");
        }
        m.dst = lookup(env.graded, d.dst, "graded set");
        m.map.image.assign(m.src.size(), npos);
        for (const auto& [a, b] : d.assign) {
            const auto i = elemOf(m.src, a);
            if (m.map.image[i] != npos) throw DslError("'" + a.text + "' assigned twice", a.loc);
            m.map.image[i] = elemOf(m.dst, b);
            if (m.dst.arity[m.map.image[i]] != m.src.arity[i])
                throw DslError("'" + a.text + "' has arity " + std::to_string(m.src.arity[i]) + " but '" + b.text + "' has arity " +
                                   std::to_string(m.dst.arity[m.map.image[i]]),
                               b.loc);
        }
        for (std::size_t i = 0; i < m.src.size(); ++i)
            if (m.map.image[i] == npos) throw DslError("no image for '" + m.src.names[i] + "'", d.name.loc);
        env.maps.emplace(d.name.text, std::move(m));
    }

    void decl(const OperadDecl& d, Loc)
    {
        claim(d.name);
        OperadPresentation o;
        o.carrier = lookup(env.graded, d.carrier, "graded set");
        o.unit = elemOf(o.carrier, d.unit);
        if (o.carrier.arity[o.unit] != 1) throw DslError("unit must have arity 1", d.unit.loc);
        for (const auto& e : d.entries) {
            const auto h = elemOf(o.carrier, e.head);
            Word body;
            for (const auto& b : e.body) body.push_back(elemOf(o.carrier, b));
            const auto r = elemOf(o.carrier, e.result);
            if (body.size() != o.carrier.arity[h])
                throw DslError("'" + e.head.text + "' has arity " + std::to_string(o.carrier.arity[h]) + " but is given " +
                                   std::to_string(body.size()) + " inputs",
                               e.head.loc);
            if (o.carrier.arity[r] != wordArity(o.carrier, body))
                throw DslError("result '" + e.result.text + "' has the wrong arity", e.result.loc);
            if (o.compose(h, body)) throw DslError("composite given twice", e.head.loc);
            o.set(h, body, r);
        }
        env.operads.emplace(d.name.text, std::move(o));
    }

    void decl(const AlgebraDecl& d, Loc)
    {
        claim(d.name);
        AlgebraWitness w{lookup(env.operads, d.operad, "operad"), lookup(env.graded, d.carrier, "graded set"), {}};
        const auto& o = w.operad.carrier;
        std::vector<std::optional<HomElem>> act(o.size());
        for (const auto& t : d.tables) {
            const auto e = elemOf(o, t.cell);
            if (act[e]) throw DslError("table for '" + t.cell.text + "' given twice", t.cell.loc);
            const std::size_t n = o.arity[e];
            const std::uint64_t want = checkedPow(w.carrier.size(), n);
            if (t.values.size() != want)
                throw DslError("table for '" + t.cell.text + "' needs " + std::to_string(want) + " values", t.cell.loc);
            HomElem h{n, {}};
            std::size_t i = 0;
            forEachWord(w.carrier.size(), n, [&](const Word& word) {
                const Name& v = t.values[i++];
                const auto x = elemOf(w.carrier, v);
                if (w.carrier.arity[x] != wordArity(w.carrier, word))
                    throw DslError("'" + v.text + "' has the wrong arity for input (" + showWord(w.carrier, word) + ")", v.loc);
                h.table.push_back(x);
            });
            act[e] = std::move(h);
        }
        for (std::size_t e = 0; e < o.size(); ++e) {
            if (!act[e]) throw DslError("no table for '" + o.names[e] + "'", d.name.loc);
            w.action.push_back(*act[e]);
        }
        env.algebras.emplace(d.name.text, std::move(w));
    }

    void decl(const GlobSetDecl& d, Loc)
    {
        claim(d.name);
        if (env.bounds.dim && d.dim > *env.bounds.dim)
            throw DslError("dimension " + std::to_string(d.dim) + " exceeds the bound " + std::to_string(*env.bounds.dim), d.name.loc);
        TruncGlobSet g = TruncGlobSet::empty(d.dim);
        std::set<std::string> seen;
        for (std::size_t k = 0; k < d.cells.size(); ++k)
            for (const auto& c : d.cells[k]) {
                if (!seen.insert(c.name.text).second) throw DslError("duplicate cell '" + c.name.text + "'", c.name.loc);
                std::size_t s = 0, t = 0;
                if (k > 0) {
                    s = cellOfDim(g, k - 1, *c.src);
                    t = cellOfDim(g, k - 1, *c.tgt);
                }
                g.add(k, c.name.text, s, t);
            }
        if (auto r = checkGlobular(g); !r.passed()) throw DslError("not globular: " + r.witness, d.name.loc);
        env.globsets.emplace(d.name.text, std::move(g));
    }

    void decl(const CollectionDecl& d, Loc)
    {
        claim(d.name);
        Collection c = idCollection(lookup(env.globsets, d.set, "globular set"));
        std::set<std::string> seen;
        for (const auto& [n, t] : d.arities) {
            auto [k, i] = cellOf(c.set, n);
            if (!seen.insert(n.text).second) throw DslError("arity of '" + n.text + "' given twice", n.loc);
            if (env.bounds.shape && t.nodes() > *env.bounds.shape)
                throw DslError("arity " + show(t) + " exceeds max-shape-size " + std::to_string(*env.bounds.shape), n.loc);
            if (height(t) > k) throw DslError("arity " + show(t) + " is too high for a " + std::to_string(k) + "-cell", n.loc);
            c.arity[k][i] = t;
        }
        try {
            validate(c);
        } catch (const Error& e) {
            throw DslError(e.what(), d.name.loc);
        }
        env.collections.emplace(d.name.text, std::move(c));
    }

    void decl(const GlobOperadDecl& d, Loc)
    {
        claim(d.name);
        GlobOperadPresentation p;
        p.coll = lookup(env.collections, d.coll, "collection");
        const std::size_t D = p.coll.dim();
        p.unit.assign(D + 1, npos);
        for (const auto& [k, n] : d.units) {
            if (k > D) throw DslError("unit in dimension " + std::to_string(k) + " above " + std::to_string(D), n.loc);
            if (p.unit[k] != npos) throw DslError("unit in dimension " + std::to_string(k) + " given twice", n.loc);
            p.unit[k] = cellOfDim(p.coll.set, k, n);
        }
        for (std::size_t k = 0; k <= D; ++k)
            if (p.unit[k] == npos) throw DslError("no unit in dimension " + std::to_string(k), d.name.loc);
        for (const auto& e : d.entries) {
            auto [k, g] = cellOf(p.coll.set, e.head);
            const Tree& shape = p.coll.arity[k][g];
            const TreeInfo info = analyze(shape);
            std::vector<std::size_t> labels;
            std::size_t c = 0;
            for (std::size_t grp = 0; grp < e.labels.size(); ++grp)
                for (const auto& l : e.labels[grp]) {
                    if (c >= info.cells.size()) throw DslError("too many labels for arity " + show(shape), l.loc);
                    if (info.cells[c].dim != grp) throw DslError("label in the wrong dimension group", l.loc);
                    labels.push_back(cellOfDim(p.coll.set, info.cells[c].dim, l));
                    ++c;
                }
            if (c != info.cells.size()) throw DslError("too few labels for arity " + show(shape), e.head.loc);
            for (std::size_t i = 0; i < info.cells.size(); ++i)
                if (info.cells[i].dim > 0 && (p.coll.set.src[info.cells[i].dim][labels[i]] != labels[info.source(i)] ||
                                              p.coll.set.tgt[info.cells[i].dim][labels[i]] != labels[info.target(i)]))
                    throw DslError("labels do not fit together along boundaries", e.head.loc);
            const auto r = cellOfDim(p.coll.set, k, e.result);
            if (p.compose(k, g, labels)) throw DslError("composite given twice", e.head.loc);
            p.set(k, g, labels, r);
        }
        env.globoperads.emplace(d.name.text, std::move(p));
    }

    void decl(const GlobAlgebraDecl& d, Loc)
    {
        claim(d.name);
        const GlobOperadPresentation& op = lookup(env.globoperads, d.operad, "globular operad");
        const Collection& x = lookup(env.collections, d.carrier, "collection");
        if (x.dim() != op.coll.dim()) throw DslError("carrier and operad have different dimensions", d.carrier.loc);
        std::size_t S = 1;
        for (const auto& row : op.coll.arity)
            for (const auto& t : row) S = std::max(S, t.nodes());
        S = std::max(S, x.dim() + 1);
        const LabelCache cache(x, S);
        LeinsterFamily fam;
        std::set<std::string> seen;
        std::vector<std::vector<bool>> given(op.coll.dim() + 1);
        for (std::size_t k = 0; k <= op.coll.dim(); ++k) given[k].assign(op.coll.set.count(k), false);
        std::vector<std::vector<std::vector<std::size_t>>> tops(op.coll.dim() + 1);
        for (std::size_t k = 0; k <= op.coll.dim(); ++k) tops[k].resize(op.coll.set.count(k));
        for (const auto& t : d.tables) {
            auto [k, c] = cellOf(op.coll.set, t.cell);
            if (given[k][c]) throw DslError("table for '" + t.cell.text + "' given twice", t.cell.loc);
            given[k][c] = true;
            const auto& e = cache.at(op.coll.arity[k][c]);
            if (t.values.size() != e.index.size())
                throw DslError("table for '" + t.cell.text + "' needs " + std::to_string(e.index.size()) + " values", t.cell.loc);
            for (const auto& v : t.values) tops[k][c].push_back(cellOfDim(x.set, k, v));
        }
        for (std::size_t k = 0; k <= op.coll.dim(); ++k)
            for (std::size_t c = 0; c < op.coll.set.count(k); ++c) {
                if (!given[k][c]) throw DslError("no table for '" + op.coll.set.names[k][c] + "'", d.name.loc);
                fam.h[{op.coll.arity[k][c], k}].push_back(tops[k][c]);
            }
        env.globalgebras.emplace(d.name.text, fromLeinsterFamily(fam, op, x, S));
    }

    void decl(const CheckDecl& d, Loc)
    {
        for (const auto& a : d.args) {
            if (a.taut && d.kind.text != "monoid" && d.kind.text != "globmonoid")
                throw DslError("taut(...) is only a target of monoid and globmonoid checks", a.name.loc);
            if (!env.names.count(a.name.text)) throw DslError("no declaration named '" + a.name.text + "'", a.name.loc);
        }
    }
};

} // namespace detail

/// Resolves every declaration; throws DslError at the first problem.
inline Env elaborate(const Document& doc, Bounds fallback = {})
{
    detail::Elaborator el(fallback);
    for (const auto& st : doc.statements)
        if (std::holds_alternative<BoundsDecl>(st.decl)) el.statement(st);
    // document bounds take precedence over fallbacks, and apply to every declaration
    for (const auto& st : doc.statements)
        if (!std::holds_alternative<BoundsDecl>(st.decl)) el.statement(st);
    return std::move(el.env);
}

// ---------------------------------------------------------------- running

struct DirectiveResult {
    Loc loc;
    std::string kind;
    std::string target;
    std::optional<std::size_t> bound;
    CheckReport report;
    double seconds = 0;
};

struct Report {
    std::optional<DslError> error;
    std::vector<DirectiveResult> results;
};

namespace detail {

inline std::string targetText(const std::vector<Target>& args)
{
    std::string s;
    for (std::size_t i = 0; i < args.size(); ++i)
        s += (i ? " " : "") + (args[i].taut ? "taut(" + args[i].name.text + ")" : args[i].name.text);
    return s;
}

inline CheckReport boolReport(const std::string& name, bool ok, const std::string& witness)
{
    CheckReport r(name);
    r.cases = 1;
    if (!ok) r.fail(witness);
    return r;
}

inline CheckReport runCheck(const Env& env, const CheckDecl& d, std::size_t bound)
{
    const std::string& k = d.kind.text;
    const auto& a = d.args;
    auto graded = [&](std::size_t i) -> const GradedSet& { return lookup(env.graded, a[i].name, "graded set"); };
    auto coll = [&](std::size_t i) -> const Collection& { return lookup(env.collections, a[i].name, "collection"); };
    if (k == "monoid") {
        if (a[0].taut) return checkTautMonoid(graded(0), TautBounds{bound, 2 * bound});
        return checkMonoid(PresentationModel{lookup(env.operads, a[0].name, "operad")}, bound);
    }
    if (k == "algebra") return checkAlgebra(lookup(env.algebras, a[0].name, "algebra"), bound);
    if (k == "setalgebra")
        return boolReport("set algebra", isSetAlgebra(lookup(env.algebras, a[0].name, "algebra")),
                          "carrier has an element of positive arity");
    if (k == "associator") return checkAssociator(graded(0), graded(1), graded(2));
    if (k == "pentagon") return checkPentagon(graded(0), graded(1), graded(2), graded(3));
    if (k == "triangles") return checkTriangles(graded(0), graded(1));
    if (k == "adjunction") return checkCurryAdjunction(graded(0), graded(1), graded(2));
    if (k == "cartesian") {
        const TruncGlobSet& g = lookup(env.globsets, a[0].name, "globular set");
        return checkGlobCartesian(g, terminalGlobSet(g.dim), terminalMap(g), bound);
    }
    if (k == "globmonoid") {
        if (a[0].taut) return checkGlobTautMonoid(coll(0), bound);
        return checkGlobMonoid(lookup(env.globoperads, a[0].name, "globular operad"), bound);
    }
    if (k == "collalgebra") return checkCollAlgebra(lookup(env.globalgebras, a[0].name, "globular algebra"), bound);
    if (k == "globalgebra")
        return boolReport("glob algebra", isGlobAlgebra(lookup(env.globalgebras, a[0].name, "globular algebra")),
                          "carrier has a cell whose arity is not an identity");
    if (k == "leinster") {
        const CollAlgebraWitness& w = lookup(env.globalgebras, a[0].name, "globular algebra");
        CheckReport r("leinster");
        const LeinsterFamily fam = toLeinsterFamily(w);
        const CollAlgebraWitness back = fromLeinsterFamily(fam, w.op, w.x, bound);
        r.cases = 1;
        if (back.action != w.action) r.fail("from(to(w)) differs from w");
        else if (toLeinsterFamily(back) != fam) r.fail("to(from(h)) differs from h");
        else {
            const auto s1 = checkCollAlgebra(w, bound).status;
            const auto s2 = checkCollAlgebra(back, bound).status;
            const auto s3 = checkLeinsterFamily(fam, w.op, w.x, bound).status;
            if (s1 != s2 || s1 != s3)
                r.fail(std::string("statuses differ: witness ") + to_string(s1) + ", reassembled " + to_string(s2) + ", family " +
                       to_string(s3));
        }
        return r;
    }
    if (k == "collcoherence") return checkTensorCoherence(coll(0), coll(1), coll(2));
    if (k == "colladjunction") return checkCollAdjunction(coll(0), coll(1), coll(2), bound).report;
    throw Error("unknown check " + k);
}

} // namespace detail

struct RunOptions {
    Bounds fallback;
};

/// Parses and elaborates first; a document error becomes Report::error and no
/// directive runs. Directive errors are reported per directive.
inline Report run(const Document& doc, const RunOptions& opt = {})
{
    Report rep;
    Env env;
    try {
        env = elaborate(doc, opt.fallback);
    } catch (const DslError& e) {
        rep.error = e;
        return rep;
    }
    for (const auto& st : doc.statements) {
        const auto* d = std::get_if<CheckDecl>(&st.decl);
        if (!d) continue;
        const KindInfo& info = checkKinds().at(d->kind.text);
        DirectiveResult r{st.loc, d->kind.text, detail::targetText(d->args), d->bound, CheckReport(d->kind.text), 0};
        if (info.bounded && !r.bound) r.bound = info.setting == Setting::classical ? env.bounds.maxArity : env.bounds.shape;
        if (info.bounded && !r.bound) {
            r.report.error(std::to_string(st.loc.line) + ":" + std::to_string(st.loc.col) + ": no bound given");
            rep.results.push_back(std::move(r));
            continue;
        }
        if (!info.bounded) r.bound.reset();
        const auto t0 = std::chrono::steady_clock::now();
        try {
            r.report = detail::runCheck(env, *d, r.bound.value_or(0));
        } catch (const Error& e) {
            r.report = CheckReport(d->kind.text);
            r.report.error(std::to_string(st.loc.line) + ":" + std::to_string(st.loc.col) + ": " + e.what());
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rep.results.push_back(std::move(r));
    }
    return rep;
}

inline Report run(const std::string& text, const RunOptions& opt = {})
{
    try {
        return run(parse(text), opt);
    } catch (const DslError& e) {
        Report rep;
        rep.error = e;
        return rep;
    }
}

/// 0 when every directive passed, 1 on any FAIL, 2 on any ERROR.
inline int exitCode(const Report& r)
{
    if (r.error) return 2;
    int code = 0;
    for (const auto& d : r.results) {
        if (d.report.status == Status::error) return 2;
        if (d.report.status == Status::fail) code = 1;
    }
    return code;
}

namespace detail {

inline std::string escape(const std::string& s)
{
    std::string q = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') q += '\\';
        if (c == '\n') {
            q += "\\n";
            continue;
        }
        q += c;
    }
    return q + "\"";
}

} // namespace detail

/// One line per directive plus a summary line; no timings, so reruns are byte-identical.
inline std::string formatMachine(const Report& r)
{
    std::string out;
    std::size_t pass = 0, fail = 0, err = 0;
    if (r.error) {
        out += "error line=" + std::to_string(r.error->loc.line) + " column=" + std::to_string(r.error->loc.col) +
               " message=" + detail::escape(r.error->message) + "\n";
        ++err;
    }
    for (std::size_t i = 0; i < r.results.size(); ++i) {
        const auto& d = r.results[i];
        out += "directive=" + std::to_string(i + 1) + " line=" + std::to_string(d.loc.line) + " kind=" + d.kind +
               " target=" + detail::escape(d.target);
        if (d.bound) out += " bound=" + std::to_string(*d.bound);
        out += std::string(" status=") + to_string(d.report.status) + " cases=" + std::to_string(d.report.cases);
        if (!d.report.passed()) out += " witness=" + detail::escape(d.report.witness);
        out += "\n";
        (d.report.status == Status::pass ? pass : d.report.status == Status::fail ? fail : err)++;
    }
    out += "summary pass=" + std::to_string(pass) + " fail=" + std::to_string(fail) + " error=" + std::to_string(err) + "\n";
    return out;
}

inline std::string formatText(const Report& r)
{
    std::string out;
    if (r.error) out += "error: " + std::string(r.error->what()) + "\n";
    for (const auto& d : r.results) {
        char secs[32];
        std::snprintf(secs, sizeof secs, "%.3f", d.seconds);
        out += std::string(to_string(d.report.status)) + "  check " + d.kind + " " + d.target;
        if (d.bound) out += " bound " + std::to_string(*d.bound);
        out += "  (" + std::to_string(d.report.cases) + " cases, " + secs + " s)\n";
        if (!d.report.passed()) out += "      " + d.report.witness + "\n";
    }
    return out;
}

} // namespace globop::dsl
