#include "globop/dsl.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>
#include <sys/wait.h>

using namespace globop;
using namespace globop::dsl;
namespace fs = std::filesystem;

namespace {

std::string readFile(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Proc {
    int code;
    std::string out;
};

Proc cli(const std::string& args)
{
    const std::string cmd = std::string(GLOBOP_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    Proc r{-1, ""};
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::vector<fs::path> goldenDocs()
{
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(GLOBOP_GOLDEN_DIR))
        if (e.path().extension() == ".gop") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

// random documents that parse, used for the round-trip property
class DocGen {
public:
    explicit DocGen(unsigned seed) : rng_(seed) {}

    std::string doc()
    {
        std::string s;
        const int n = pick(1, 8);
        for (int i = 0; i < n; ++i) s += statement();
        return s;
    }

private:
    std::mt19937 rng_;

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    std::string name()
    {
        static const std::vector<std::string> pool{"x", "y'", "A_1", "bound", "taut", "on", "a b", "q\"t", "*", "f(x)", "max"};
        const std::string n = pool[static_cast<std::size_t>(pick(0, static_cast<int>(pool.size()) - 1))];
        return globop::dsl::detail::quote(n);
    }

    std::string names(int lo, int hi, const std::string& sep = ", ")
    {
        std::string s;
        const int n = pick(lo, hi);
        for (int i = 0; i < n; ++i) s += (i ? sep : "") + name();
        return s;
    }

    std::string tree()
    {
        const auto trees = enumeratePasting(2, 4);
        return show(trees[static_cast<std::size_t>(pick(0, static_cast<int>(trees.size()) - 1))]);
    }

    std::string statement()
    {
        switch (pick(0, 9)) {
        case 0: return "bounds max-arity " + std::to_string(pick(0, 4)) + (pick(0, 1) ? " max-shape-size 3" : "") + ";\n";
        case 1: {
            std::string s = "gradedset " + name() + " {";
            const int n = pick(0, 3);
            for (int i = 0; i < n; ++i) s += (i ? ", " : " ") + name() + ": " + std::to_string(pick(0, 3));
            return s + "}\n";
        }
        case 2: return "map " + name() + ": " + name() + (pick(0, 1) ? " * " + name() : "") + " -> " + name() + " { " + name() +
                       " -> " + name() + " }\n";
        case 3: {
            std::string s = "operad " + name() + " on " + name() + " { unit = " + name() + ";";
            for (int i = pick(0, 3); i > 0; --i) s += " compose " + name() + "(" + names(0, 3) + ") = " + name() + ";";
            return s + " }\n";
        }
        case 4: return std::string(pick(0, 1) ? "algebra " : "globalgebra ") + name() + " of " + name() + " on " + name() + " { " +
                       name() + " = [" + names(0, 3) + "]; }\n";
        case 5: return "globset " + name() + " dim 2 { 0-cells " + names(1, 2) + "; 1-cells " + name() + ": " + name() + " -> " +
                       name() + "; 2-cells " + name() + ": " + name() + " => " + name() + "; }\n";
        case 6: return "collection " + name() + " on " + name() + " { " + name() + " @ " + tree() + "; }\n";
        case 7: return "globoperad " + name() + " on " + name() + " { unit 0 = " + name() + "; compose " + name() + "{" +
                       names(1, 2, ",") + "|" + names(1, 1) + "} = " + name() + "; }\n";
        case 8: return "check associator " + name() + " " + name() + " " + name() + ";\n";
        default: return std::string("check monoid ") + (pick(0, 1) ? "taut(" + name() + ")" : name()) +
                        (pick(0, 1) ? " bound " + std::to_string(pick(0, 9)) : "") + ";\n";
        }
    }
};

} // namespace

// ---------------------------------------------------------------- parsing

TEST(Parse, EmptyDocument)
{
    EXPECT_TRUE(parse("").statements.empty());
    EXPECT_TRUE(parse("  # only a comment\n\n").statements.empty());
}

TEST(Parse, DerivedObjectDirective)
{
    const Document d = parse("gradedset X { a: 0, b: 0 }\ncheck monoid taut(X) bound 2;\n");
    ASSERT_EQ(d.statements.size(), 2u);
    const auto& c = std::get<CheckDecl>(d.statements[1].decl);
    EXPECT_EQ(c.kind.text, "monoid");
    ASSERT_EQ(c.args.size(), 1u);
    EXPECT_TRUE(c.args[0].taut);
    EXPECT_EQ(c.args[0].name.text, "X");
    EXPECT_EQ(c.bound, std::optional<std::size_t>(2));
    EXPECT_EQ(d.statements[1].loc.line, 2u);
}

TEST(Parse, BothPastingLiteralForms)
{
    const Document d = parse("collection C on G { f @ [2,3]; g @ t(t(t()),t()); }");
    const auto& c = std::get<CollectionDecl>(d.statements[0].decl);
    EXPECT_EQ(c.arities[0].second, fromGrid({2, 3}));
    EXPECT_EQ(c.arities[1].second, parseTree("t(t(t()),t())"));
}

TEST(Parse, ErrorsCarryLineAndColumn)
{
    auto at = [](const std::string& text) -> std::string {
        try {
            parse(text);
        } catch (const DslError& e) {
            return std::to_string(e.loc.line) + ":" + std::to_string(e.loc.col);
        }
        return "none";
    };
    EXPECT_EQ(at("collection C on G {\n  f @ [2,];\n}"), "2:10");
    EXPECT_EQ(at("gradedset X { a 2 }"), "1:17");
    EXPECT_EQ(at("\n\n   frobnicate;"), "3:4");
    EXPECT_EQ(at("check monoid;"), "1:7");
    EXPECT_EQ(at("check nonsense X;"), "1:7");
    EXPECT_EQ(at("gradedset \"open { }"), "1:20");
    EXPECT_EQ(at("globset G dim 1 { 2-cells m: f => g; }"), "1:19");
}

TEST(Print, CanonicalFormIsAFixedPoint)
{
    for (const auto& p : goldenDocs()) {
        const std::string text = readFile(p);
        Document d;
        try {
            d = parse(text);
        } catch (const DslError&) {
            continue;
        }
        const std::string once = print(d);
        EXPECT_EQ(parse(once), d) << p;
        EXPECT_EQ(print(parse(once)), once) << p;
    }
}

TEST(Print, RoundTripsRandomDocuments)
{
    for (unsigned seed = 0; seed < 300; ++seed) {
        const std::string text = DocGen(seed).doc();
        Document d;
        ASSERT_NO_THROW(d = parse(text)) << text;
        const std::string canon = print(d);
        ASSERT_EQ(parse(canon), d) << "seed " << seed << "\n" << text << "\n" << canon;
    }
}

TEST(Print, QuotesNamesThatAreNotIdentifiers)
{
    const Document d = parse("gradedset \"a b\" { \"q\\\"t\": 0, bound': 1 }");
    EXPECT_EQ(print(d), "gradedset \"a b\" { \"q\\\"t\": 0, bound': 1 }\n");
}

// ---------------------------------------------------------------- elaboration

TEST(Elaborate, NamesAreUniqueAndResolved)
{
    auto message = [](const std::string& text) -> std::string {
        try {
            elaborate(parse(text));
        } catch (const DslError& e) {
            return std::to_string(e.loc.line) + ":" + std::to_string(e.loc.col) + " " + e.message;
        }
        return "";
    };
    EXPECT_EQ(message("gradedset X { }\ngradedset X { }"), "2:11 duplicate name 'X'");
    EXPECT_EQ(message("gradedset X { a: 0, a: 1 }"), "1:21 duplicate element 'a'");
    EXPECT_EQ(message("operad O on X { unit = e; }"), "1:13 no graded set named 'X'");
    EXPECT_EQ(message("check monoid O bound 2;\ngradedset O { }"), "1:14 no declaration named 'O'");
    EXPECT_EQ(message("gradedset X { a: 1 }\noperad O on X { unit = a; compose a(a, a) = a; }"),
              "2:35 'a' has arity 1 but is given 2 inputs");
    EXPECT_EQ(message("gradedset X { a: 0 }\ngradedset Y { b: 1 }\nmap f: X -> Y { a -> b }"),
              "3:22 'a' has arity 0 but 'b' has arity 1");
    EXPECT_EQ(message("gradedset X { a: 0 }\ngradedset Y { b: 0 }\nmap f: X -> Y { }"), "3:5 no image for 'a'");
}

TEST(Elaborate, BoundsAreEnforcedAtDeclaration)
{
    auto fails = [](const std::string& text, Bounds b = {}) {
        try {
            elaborate(parse(text), b);
        } catch (const DslError&) {
            return true;
        }
        return false;
    };
    EXPECT_TRUE(fails("bounds max-arity 2;\ngradedset X { a: 3 }"));
    EXPECT_FALSE(fails("bounds max-arity 3;\ngradedset X { a: 3 }"));
    EXPECT_TRUE(fails("gradedset X { a: 3 }", Bounds{2, {}, {}}));
    // the document overrides the fallback
    EXPECT_FALSE(fails("bounds max-arity 3;\ngradedset X { a: 3 }", Bounds{2, {}, {}}));
    EXPECT_TRUE(fails("bounds dim 1;\nglobset G dim 2 { }"));
    EXPECT_TRUE(fails("bounds max-shape-size 2;\nglobset G dim 1 { 0-cells x; 1-cells f: x -> x; }\ncollection C on G { f @ [0,0]; }"));
}

TEST(Elaborate, GlobularDeclarations)
{
    const Env env = elaborate(parse(readFile(fs::path(GLOBOP_GOLDEN_DIR) / "glob_operad.gop")));
    const auto& p = env.globoperads.at("P");
    EXPECT_EQ(p.coll.arity[1][1], Tree::path(2));
    EXPECT_EQ(p.unit, (std::vector<std::size_t>{0, 0}));
    EXPECT_EQ(p.table.size(), 4u);
    const auto& w = env.globalgebras.at("Act");
    EXPECT_TRUE(isGlobAlgebra(w));
    EXPECT_EQ(w.action[1][0].top, (std::vector<std::size_t>{0, 1}));
    EXPECT_TRUE(checkCollAlgebra(w, 3).passed());
}

TEST(Elaborate, GlobularLabelsMustFit)
{
    const std::string head = "globset O dim 1 { 0-cells o, q; 1-cells e: o -> o, m: o -> o, k: o -> q; }\n"
                             "collection Ops on O { e @ [0]; m @ [0,0]; k @ [0]; }\n";
    auto message = [&](const std::string& body) -> std::string {
        try {
            elaborate(parse(head + "globoperad P on Ops { unit 0 = o; unit 1 = e; " + body + " }"));
        } catch (const DslError& e) {
            return e.message;
        }
        return "";
    };
    EXPECT_EQ(message("compose m{o,o,o|e,e} = m;"), "");
    EXPECT_EQ(message("compose m{o,o|e,e} = m;"), "label in the wrong dimension group");
    EXPECT_EQ(message("compose m{o,o,o|e} = m;"), "too few labels for arity [0,0]");
    EXPECT_EQ(message("compose m{o,o,o|k,e} = m;"), "labels do not fit together along boundaries");
    EXPECT_EQ(message("compose m{o,o,o|e,e} = o;"), "'o' is a 0-cell, expected a 1-cell");
}

// ---------------------------------------------------------------- running

TEST(Run, TautOfTwoPointsPasses)
{
    const Report r = run("gradedset X { a: 0, b: 0 }\ncheck monoid taut(X) bound 2;\n");
    ASSERT_EQ(r.results.size(), 1u);
    EXPECT_EQ(r.results[0].report.status, Status::pass);
    EXPECT_EQ(exitCode(r), 0);
}

TEST(Run, CorruptedTableFailsAndTheWitnessReplays)
{
    const std::string text = readFile(fs::path(GLOBOP_GOLDEN_DIR) / "corrupted_operad.gop");
    const Report r = run(text);
    ASSERT_EQ(r.results.size(), 1u);
    const auto& rep = r.results[0].report;
    ASSERT_EQ(rep.status, Status::fail);
    EXPECT_EQ(exitCode(r), 1);
    // "associativity fails at g(f) then (h)": (g o f) o h and g o (f o h) differ in the table
    std::smatch m;
    ASSERT_TRUE(std::regex_search(rep.witness, m, std::regex(R"(associativity fails at (\w+)\((\w+)\) then \((\w+)\))")))
        << rep.witness;
    const Env env = elaborate(parse(text));
    const auto& o = env.operads.at("Bad");
    const auto g = o.carrier.indexOf(m[1]), f = o.carrier.indexOf(m[2]), h = o.carrier.indexOf(m[3]);
    const auto outer = *o.compose(*o.compose(g, {f}), {h});
    const auto inner = *o.compose(g, {*o.compose(f, {h})});
    EXPECT_NE(outer, inner);
}

TEST(Run, ExceedingTheDimensionBoundIsAnError)
{
    const Report r = run("bounds dim 1;\nglobset G dim 2 { }\n");
    ASSERT_TRUE(r.error.has_value());
    EXPECT_EQ(r.error->loc.line, 2u);
    EXPECT_EQ(exitCode(r), 2);
}

TEST(Run, BoundPrecedence)
{
    const std::string doc = "gradedset X { a: 0 }\n";
    auto boundOf = [&](const std::string& text, Bounds fb) { return run(doc + text, RunOptions{fb}).results.at(0).bound; };
    EXPECT_EQ(boundOf("check monoid taut(X) bound 1;", Bounds{3, {}, {}}), std::optional<std::size_t>(1));
    EXPECT_EQ(boundOf("bounds max-arity 2;\ncheck monoid taut(X);", Bounds{3, {}, {}}), std::optional<std::size_t>(2));
    EXPECT_EQ(boundOf("check monoid taut(X);", Bounds{3, {}, {}}), std::optional<std::size_t>(3));
    const Report missing = run(doc + "check monoid taut(X);");
    EXPECT_EQ(missing.results.at(0).report.status, Status::error);
    EXPECT_EQ(exitCode(missing), 2);
    // unbounded checks ignore every bound
    EXPECT_EQ(boundOf("check associator X X X bound 4;", {}), std::nullopt);
}

TEST(Run, ModuleErrorsAreTaggedWithTheDirective)
{
    const std::string text = "globset G dim 1 { 0-cells x; 1-cells f: x -> x; }\ncollection C on G { f @ [0]; }\n"
                             "collection D on G { }\ncheck leinster C;\n";
    const Report r = run(text + "");
    ASSERT_FALSE(r.error.has_value());
    // C names a collection, not a globular algebra
    ASSERT_EQ(r.results.size(), 1u);
    EXPECT_EQ(r.results[0].report.status, Status::error);
    EXPECT_EQ(r.results[0].report.witness.rfind("4:1: ", 0), 0u) << r.results[0].report.witness;
}

TEST(Run, MachineOutputIsDeterministic)
{
    for (const auto& p : goldenDocs()) {
        const std::string text = readFile(p);
        EXPECT_EQ(formatMachine(run(text)), formatMachine(run(text))) << p;
    }
}

TEST(Run, FailuresAlwaysCarryWitnesses)
{
    for (const auto& p : goldenDocs()) {
        const Report r = run(readFile(p));
        for (const auto& d : r.results)
            if (d.report.status != Status::pass) EXPECT_FALSE(d.report.witness.empty()) << p;
    }
}

// ---------------------------------------------------------------- command line

TEST(Cli, GoldenDocumentsMatchByteForByte)
{
    const auto docs = goldenDocs();
    ASSERT_GE(docs.size(), 10u);
    for (const auto& p : docs) {
        const std::string text = readFile(p);
        const auto at = text.find("# expect-exit ");
        ASSERT_NE(at, std::string::npos) << p;
        const int expected = text[at + 14] - '0';
        const Proc a = cli("check " + p.string() + " --format machine");
        const Proc b = cli("check " + p.string() + " --format machine");
        EXPECT_EQ(a.out, b.out) << p;
        EXPECT_EQ(a.out, readFile(fs::path(p).replace_extension(".out"))) << p;
        EXPECT_EQ(a.code, expected) << p;
    }
}

TEST(Cli, EnumeratePasting)
{
    const Proc r = cli("enumerate pasting --dim 1 --max-shape-size 4 --format machine");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "diagram=[]\ndiagram=[0]\ndiagram=[0,0]\ndiagram=[0,0,0]\ncount=4\n");
    const Proc d2 = cli("enumerate pasting --dim 2 --max-shape-size 4 --format machine");
    EXPECT_NE(d2.out.find("count=" + std::to_string(enumeratePasting(2, 4).size()) + "\n"), std::string::npos);
}

TEST(Cli, Subst)
{
    EXPECT_EQ(cli("subst '[1,1]' '[2]' '[3]'").out, "[2,3]\n");
    EXPECT_EQ(cli("subst '[1,1]' '[2]' '[3]' --format machine").out, "result=[2,3]\n");
    // every cell given explicitly
    EXPECT_EQ(cli("subst 't(t())' '[]' '[]' '[0,0]'").out, "[0,0]\n");
    EXPECT_EQ(cli("subst '[1,1]' '[2]'").code, 2);
    EXPECT_EQ(cli("subst '[1,1]' '[2,]' '[3]'").code, 2);
}

TEST(Cli, EmptyFileChecksClean)
{
    const fs::path p = fs::temp_directory_path() / "globop_empty.gop";
    std::ofstream(p).close();
    const Proc r = cli("check " + p.string() + " --format machine");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "summary pass=0 fail=0 error=0\n");
}

TEST(Cli, UsageErrorsExitTwo)
{
    EXPECT_EQ(cli("").code, 2);
    EXPECT_EQ(cli("frobnicate").code, 2);
    EXPECT_EQ(cli("enumerate pasting --dim 1").code, 2);
    EXPECT_EQ(cli("check /nonexistent/file.gop").code, 2);
    EXPECT_EQ(cli("check x --format yaml").code, 2);
}

TEST(Cli, MachineModeIgnoresEnvironmentBounds)
{
    const std::string doc = (fs::path(GLOBOP_GOLDEN_DIR) / "missing_bound.gop").string();
    const Proc human = cli("check " + doc + " --format text");
    const std::string withEnv = "env GLOBOP_MAX_ARITY=1 ";
    const std::string cmdText = withEnv + GLOBOP_CLI + " check " + doc + " --format text > /dev/null 2>&1";
    const std::string cmdMachine = withEnv + GLOBOP_CLI + " check " + doc + " --format machine > /dev/null 2>&1";
    EXPECT_EQ(WEXITSTATUS(std::system(cmdText.c_str())), 0);
    EXPECT_EQ(WEXITSTATUS(std::system(cmdMachine.c_str())), 2);
    EXPECT_EQ(human.code, 2);
}

TEST(Cli, TensorHomAndCurry)
{
    const fs::path p = fs::temp_directory_path() / "globop_objects.gop";
    std::ofstream(p) << "gradedset X { a: 0, b: 1 }\ngradedset Y { c: 0, d: 0 }\n"
                        "map f: X * Y -> Y { \"a()\" -> c, \"b(c)\" -> d, \"b(d)\" -> c }\n"
                        "globset G dim 1 { 0-cells x; 1-cells u: x -> x; }\ncollection C on G { u @ [0]; }\n";
    EXPECT_EQ(cli("tensor " + p.string() + " X Y --format machine").out,
              "element=a() arity=0\nelement=b(c) arity=0\nelement=b(d) arity=0\ncount=3\n");
    EXPECT_EQ(cli("curry " + p.string() + " f --format machine").out, "a=0|c\nb=1|d,c\n");
    const Proc hom = cli("enumerate hom " + p.string() + " X Y --max-arity 1 --format machine");
    EXPECT_EQ(hom.code, 0);
    EXPECT_NE(hom.out.find("count=" + std::to_string(homSet(GradedSet{{"a", 0}, {"b", 1}}, GradedSet{{"c", 0}, {"d", 0}}, 1).set.size())),
              std::string::npos);
    const Proc taut = cli("enumerate taut " + p.string() + " C --max-shape-size 3 --format machine");
    EXPECT_EQ(taut.code, 0);
    const Env env = elaborate(parse(readFile(p)));
    const LabelCache cache(env.collections.at("C"), 3);
    const HomCollection hc = homCollection(cache, env.collections.at("C"));
    EXPECT_NE(taut.out.find("count=" + std::to_string(hc.cells[0].size() + hc.cells[1].size()) + "\n"), std::string::npos);
    EXPECT_EQ(cli("enumerate taut " + p.string() + " C --format machine").code, 2);
    EXPECT_EQ(cli("curry " + p.string() + " nope").code, 2);
}
