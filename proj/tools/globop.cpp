// globop: check documents and inspect the objects they declare.

#include "globop/dsl.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace globop;
using namespace globop::dsl;

namespace {

struct Options {
    std::optional<std::size_t> maxArity, dim, shape;
    std::string format = "text";
    bool machine() const { return format == "machine"; }
};

class Usage : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::optional<std::size_t> envBound(const char* var)
{
    const char* v = std::getenv(var);
    if (!v || !*v) return std::nullopt;
    char* end = nullptr;
    const unsigned long n = std::strtoul(v, &end, 10);
    if (*end) throw Usage(std::string(var) + " is not a natural number");
    return static_cast<std::size_t>(n);
}

// flags first; the environment only fills gaps in text mode
Bounds fallback(const Options& o)
{
    Bounds b{o.maxArity, o.dim, o.shape};
    if (!o.machine()) {
        if (!b.maxArity) b.maxArity = envBound("GLOBOP_MAX_ARITY");
        if (!b.dim) b.dim = envBound("GLOBOP_DIM");
        if (!b.shape) b.shape = envBound("GLOBOP_MAX_SHAPE_SIZE");
    }
    return b;
}

std::size_t need(const std::optional<std::size_t>& v, const char* flag)
{
    if (!v) throw Usage(std::string("missing ") + flag);
    return *v;
}

std::string slurp(const std::string& path)
{
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Usage("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Env load(const std::string& path, const Options& o) { return elaborate(parse(slurp(path)), fallback(o)); }

// Lines are key=value in machine mode and bare values otherwise.
void emit(const Options& o, const std::string& key, const std::string& value, const std::string& extra = "")
{
    if (o.machine()) std::cout << key << "=" << value << extra << "\n";
    else std::cout << value << extra << "\n";
}

void footer(const Options& o, std::size_t n)
{
    if (o.machine()) std::cout << "count=" << n << "\n";
    else std::cout << n << (n == 1 ? " item\n" : " items\n");
}

void listCollection(const Options& o, const Collection& c)
{
    std::size_t n = 0;
    for (std::size_t k = 0; k <= c.dim(); ++k)
        for (std::size_t i = 0; i < c.set.count(k); ++i, ++n) {
            std::string extra = " dim=" + std::to_string(k) + " arity=" + show(c.arity[k][i]);
            if (k > 0) extra += " src=" + c.set.names[k - 1][c.set.src[k][i]] + " tgt=" + c.set.names[k - 1][c.set.tgt[k][i]];
            emit(o, "cell", c.set.names[k][i], extra);
        }
    footer(o, n);
}

void listGraded(const Options& o, const GradedSet& x)
{
    for (std::size_t i = 0; i < x.size(); ++i) emit(o, "element", x.names[i], " arity=" + std::to_string(x.arity[i]));
    footer(o, x.size());
}

int enumeratePastingCmd(const Options& o)
{
    const auto trees = enumeratePasting(need(o.dim, "--dim"), need(o.shape, "--max-shape-size"));
    for (const auto& t : trees) emit(o, "diagram", show(t));
    footer(o, trees.size());
    return 0;
}

int enumerateHomCmd(const Options& o, const std::string& file, const std::string& bname, const std::string& aname)
{
    const Env env = load(file, o);
    if (env.graded.count(bname) && env.graded.count(aname)) {
        const HomSet h = homSet(env.graded.at(bname), env.graded.at(aname), need(o.maxArity, "--max-arity"));
        listGraded(o, h.set);
        return 0;
    }
    if (env.collections.count(bname) && env.collections.count(aname)) {
        const Collection& a = env.collections.at(aname);
        const Collection& b = env.collections.at(bname);
        if (a.dim() != b.dim()) throw Usage("collections of different dimensions");
        const LabelCache cache(b, need(o.shape, "--max-shape-size"));
        listCollection(o, homCollection(cache, a).coll);
        return 0;
    }
    throw Usage("'" + bname + "' and '" + aname + "' must both name graded sets or both name collections");
}

int tensorCmd(const Options& o, const std::string& file, const std::string& xname, const std::string& yname)
{
    const Env env = load(file, o);
    if (env.graded.count(xname) && env.graded.count(yname)) {
        listGraded(o, tensor(env.graded.at(xname), env.graded.at(yname)).set);
        return 0;
    }
    if (env.collections.count(xname) && env.collections.count(yname)) {
        listCollection(o, tensorColl(env.collections.at(xname), env.collections.at(yname), o.shape.value_or(npos)).coll);
        return 0;
    }
    throw Usage("'" + xname + "' and '" + yname + "' must both name graded sets or both name collections");
}

int curryCmd(const Options& o, const std::string& file, const std::string& mapName)
{
    const Env env = load(file, o);
    auto it = env.maps.find(mapName);
    if (it == env.maps.end()) throw Usage("no map named '" + mapName + "'");
    const NamedMap& m = it->second;
    if (!m.tensorOf) throw Usage("'" + mapName + "' is not a map out of a tensor");
    const GradedSet& a = env.graded.at(m.tensorOf->first);
    const GradedSet& b = env.graded.at(m.tensorOf->second);
    const Tensor ab = tensor(a, b);
    const auto g = curry(a, b, m.dst, ab, m.map);
    for (std::size_t i = 0; i < a.size(); ++i) emit(o, a.names[i], serialize(m.dst, g[i]));
    return 0;
}

// Inner diagrams may be given for every cell, or only for the cells of the
// leaves, in which case the rest are the boundaries they force.
int substCmd(const Options& o, const std::string& outerText, const std::vector<std::string>& innerTexts)
{
    DiagramOfDiagrams dd{parseTree(outerText), {}};
    std::vector<Tree> given;
    for (const auto& s : innerTexts) given.push_back(parseTree(s));
    const TreeInfo info = analyze(dd.outer);
    if (given.size() == info.cells.size()) {
        dd.inner = given;
    } else {
        std::vector<std::size_t> leafCells;
        for (std::size_t c = 0; c < info.cells.size(); ++c)
            if (info.children[info.cells[c].node].empty()) leafCells.push_back(c);
        if (given.size() != leafCells.size())
            throw Usage("expected " + std::to_string(leafCells.size()) + " or " + std::to_string(info.cells.size()) +
                        " inner diagrams, got " + std::to_string(given.size()));
        dd.inner.assign(info.cells.size(), Tree::point());
        for (std::size_t i = 0; i < leafCells.size(); ++i) dd.inner[leafCells[i]] = given[i];
        for (std::size_t c = info.cells.size(); c-- > 0;) {
            const auto& kids = info.children[info.cells[c].node];
            if (kids.empty()) continue;
            const std::size_t g = info.cells[c].gap;
            const std::size_t above = info.cellOf(kids[g < kids.size() ? g : g - 1], 0);
            dd.inner[c] = truncate(dd.inner[above], info.cells[c].dim);
        }
    }
    validate(dd);
    emit(o, "result", show(substitute(dd)));
    return 0;
}

int checkCmd(const Options& o, const std::string& file)
{
    Report r;
    std::string text = slurp(file);
    r = run(text, RunOptions{fallback(o)});
    std::cout << (o.machine() ? formatMachine(r) : formatText(r));
    return exitCode(r);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"globop: operads, globular operads and their algebras"};
    app.require_subcommand(1);
    Options o;
    auto addBounds = [&](CLI::App* sub) {
        sub->add_option("--max-arity", o.maxArity, "largest arity explored");
        sub->add_option("--dim", o.dim, "truncation dimension");
        sub->add_option("--max-shape-size", o.shape, "largest pasting shape, in nodes");
        sub->add_option("--format", o.format, "text or machine")->check(CLI::IsMember({"text", "machine"}));
    };

    std::string file, x, y, mapName, outer;
    std::vector<std::string> inner;

    auto* check = app.add_subcommand("check", "run the check directives of a document");
    check->add_option("file", file, "document, or - for stdin")->required();
    addBounds(check);

    auto* enumerate = app.add_subcommand("enumerate", "list pasting shapes, hom cells or Taut cells");
    enumerate->require_subcommand(1);
    auto* pasting = enumerate->add_subcommand("pasting", "pasting shapes up to --dim and --max-shape-size");
    addBounds(pasting);
    auto* hom = enumerate->add_subcommand("hom", "cells of [B, A]");
    hom->add_option("file", file)->required();
    hom->add_option("B", x)->required();
    hom->add_option("A", y)->required();
    addBounds(hom);
    auto* taut = enumerate->add_subcommand("taut", "cells of Taut(X) = [X, X]");
    taut->add_option("file", file)->required();
    taut->add_option("X", x)->required();
    addBounds(taut);

    auto* tens = app.add_subcommand("tensor", "the tensor X [] Y");
    tens->add_option("file", file)->required();
    tens->add_option("X", x)->required();
    tens->add_option("Y", y)->required();
    addBounds(tens);

    auto* cur = app.add_subcommand("curry", "curry a map out of A * B");
    cur->add_option("file", file)->required();
    cur->add_option("map", mapName)->required();
    addBounds(cur);

    auto* sub = app.add_subcommand("subst", "substitute inner pasting diagrams into an outer one");
    sub->add_option("outer", outer)->required();
    // inner diagrams arrive as raw extras; a vector option would strip the brackets off "[2]"
    sub->allow_extras();
    addBounds(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*check) return checkCmd(o, file);
        if (*pasting) return enumeratePastingCmd(o);
        if (*hom) return enumerateHomCmd(o, file, x, y);
        if (*taut) return enumerateHomCmd(o, file, x, x);
        if (*tens) return tensorCmd(o, file, x, y);
        if (*cur) return curryCmd(o, file, mapName);
        if (*sub) {
            inner = sub->remaining();
            if (inner.empty()) throw Usage("subst needs at least one inner diagram");
            return substCmd(o, outer, inner);
        }
    } catch (const Usage& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
