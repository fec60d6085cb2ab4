#include "dirac/cli.hpp"
#include "dirac/suite.hpp"
#include "gen.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <thread>

using namespace dirac;

namespace {

RunReport run(const std::string& text, unsigned threads = 0) { return run_checkfile(parse_checkfile(text), threads); }

std::size_t error_line(const std::string& text) {
    try {
        parse_checkfile(text);
    } catch (const SyntaxError& e) {
        return e.line();
    }
    return 0;
}

std::size_t error_column(const std::string& text) {
    try {
        run(text);
    } catch (const SyntaxError& e) {
        return e.column();
    }
    return 0;
}

// Random check files: arbitrary nesting, spacing and comments. Whitespace
// only appears inside brackets, where the grammar allows it.
class FileGen {
public:
    explicit FileGen(std::uint64_t seed) : rng_(seed) {}

    std::string file() {
        std::string out;
        int lines = rng_.range(0, 12);
        for (int i = 0; i < lines; ++i) {
            out += pad();
            switch (rng_.range(0, 4)) {
            case 0:
                out += "patch " + name() + pad() + "=" + pad() + coords();
                break;
            case 1:
                out += "let " + name() + pad() + "=" + pad() + call(2);
                break;
            case 2:
                out += "# " + atom();
                break;
            case 3:
                break;
            default:
                out += check();
            }
            if (rng_.coin())
                out += pad() + "# trailing";
            out += "\n";
        }
        return out;
    }

private:
    std::string pad() { return rng_.coin() ? "" : std::string(static_cast<std::size_t>(rng_.range(1, 3)), ' '); }

    std::string name() { return "n" + std::to_string(next_++); }

    std::string coords() {
        std::string s = "(";
        int n = rng_.range(0, 3);
        for (int i = 0; i < n; ++i)
            s += (i ? "," + pad() : "") + "c" + std::to_string(i);
        return s + ")";
    }

    std::string atom() {
        static const std::vector<std::string> pool = {"x",       "dx^dy",  "z*dx^dy", "@x1^@x2", "3",
                                                      "-x*@y",   "x^2",    "e1",      "(dx)",    "[1,2]"};
        return pool[static_cast<std::size_t>(rng_.range(0, static_cast<int>(pool.size()) - 1))];
    }

    std::string spaced_atom() {
        static const std::vector<std::string> pool = {"x + y", "dx^dy - z*dy^dz", "[1, 2] = e3", "( x )"};
        return pool[static_cast<std::size_t>(rng_.range(0, static_cast<int>(pool.size()) - 1))];
    }

    std::string call(int depth) {
        static const std::vector<std::string> heads = {"form", "graph_two_form", "sum", "frame", "heisenberg3"};
        std::string s = heads[static_cast<std::size_t>(rng_.range(0, static_cast<int>(heads.size()) - 1))] + "(";
        int n = rng_.range(0, 3);
        for (int i = 0; i < n; ++i) {
            s += i ? "," + pad() : pad();
            int k = rng_.range(0, 2);
            s += depth > 0 && k == 0 ? call(depth - 1) : k == 1 ? spaced_atom() : atom();
        }
        return s + pad() + ")";
    }

    std::string check() {
        std::string s = "check kind" + std::to_string(rng_.range(0, 3));
        int n = rng_.range(0, 3);
        for (int i = 0; i < n; ++i)
            s += " " + pad() + (rng_.coin() ? call(1) : atom());
        if (rng_.coin())
            s += " expect " + std::string(rng_.coin() ? "pass" : rng_.coin() ? "fail" : "error");
        return s;
    }

    gen::Rng rng_;
    int next_ = 0;
};

} // namespace

TEST(Parse, Structure) {
    CheckFile f = parse_checkfile("# header\n"
                                  "patch M = (x, y, z)\n"
                                  "\n"
                                  "check closed form(z*dx^dy)   # comment\n"
                                  "let omega = form(M, dx^dy + x*dy^dz)\n"
                                  "check dirac graph_two_form(omega) expect fail\n"
                                  "patch T = total(pair_groupoid(M))\n");
    ASSERT_EQ(f.decls.size(), 3u);
    EXPECT_EQ(f.decls[0].kind, Declaration::Kind::patch);
    EXPECT_EQ(f.decls[0].coords, (std::vector<std::string>{"x", "y", "z"}));
    EXPECT_EQ(f.decls[1].name, "omega");
    ASSERT_TRUE(f.decls[1].value);
    EXPECT_EQ(f.decls[1].value->head, "form");
    ASSERT_EQ(f.decls[1].value->args.size(), 2u);
    EXPECT_EQ(f.decls[1].value->args[1].head, "dx^dy + x*dy^dz");
    EXPECT_EQ(f.decls[2].value->print(), "total(pair_groupoid(M))");

    ASSERT_EQ(f.checks.size(), 2u);
    EXPECT_EQ(f.checks[0].kind, "closed");
    EXPECT_EQ(f.checks[0].scope, 1u);
    EXPECT_EQ(f.checks[0].line, 4u);
    EXPECT_FALSE(f.checks[0].expect);
    EXPECT_EQ(f.checks[1].name(), "dirac graph_two_form(omega)");
    EXPECT_EQ(f.checks[1].expect, Expectation::fail);
    EXPECT_EQ(f.checks[1].scope, 2u);

    EXPECT_EQ(print_checkfile(f), "patch M = (x, y, z)\n"
                                  "check closed form(z*dx^dy)\n"
                                  "let omega = form(M, dx^dy + x*dy^dz)\n"
                                  "check dirac graph_two_form(omega) expect fail\n"
                                  "patch T = total(pair_groupoid(M))\n");
}

TEST(Parse, Empty) {
    EXPECT_TRUE(parse_checkfile("").decls.empty());
    EXPECT_TRUE(parse_checkfile("\n  # nothing\n").checks.empty());
    EXPECT_EQ(print_checkfile(parse_checkfile("")), "");
}

TEST(Parse, SyntaxErrorsCarryPosition) {
    try {
        parse_checkfile("patch M = (x)\nlet w = form(dx^dy\n");
        FAIL();
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.column(), 13u);
    }
    EXPECT_EQ(error_line("patch M = (x)\nassert dirac w\n"), 2u);
    EXPECT_EQ(error_line("let a = form(x)\nlet a = form(y)\n"), 2u);
    EXPECT_EQ(error_line("check dirac w expect maybe\n"), 1u);
    EXPECT_EQ(error_line("patch M = (x, x)\n"), 1u);
    EXPECT_EQ(error_line("patch M = (x, 2y)\n"), 1u);
    EXPECT_EQ(error_line("\n\nlet w = form(x))\n"), 3u);
    EXPECT_EQ(error_line("let w = \n"), 1u);
    EXPECT_EQ(error_line("patch M = x\n"), 1u);
    EXPECT_EQ(error_line("check\n"), 1u);
}

TEST(Parse, RoundTripExamples) {
    for (const char* text : {"patch M = (x,y)\nlet w=form( dx^dy )\ncheck dirac graph_two_form(w)   expect pass\n",
                             "check dirac graph_two_form(z*dx^dy)\n",
                             "let g = lie_algebra(3, [1,2] = e3, [2, 3] = e1)\ncheck lie_algebroid g\n",
                             "patch P = ()\ncheck closed (x + y)\n"}) {
        CheckFile f = parse_checkfile(text);
        EXPECT_EQ(parse_checkfile(print_checkfile(f)), f) << text;
    }
}

TEST(Property, RoundTrip) {
    int nonempty = 0;
    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
        std::string text = FileGen(seed).file();
        CheckFile f = parse_checkfile(text);
        std::string printed = print_checkfile(f);
        CheckFile again = parse_checkfile(printed);
        ASSERT_EQ(again, f) << text << "----\n" << printed;
        ASSERT_EQ(print_checkfile(again), printed);
        nonempty += !f.checks.empty() && !f.decls.empty();
    }
    EXPECT_GT(nonempty, 100);
}

TEST(Run, ClosedGraphPasses) {
    RunReport r = run("patch M = (x, y, z)\nlet omega = form(dx^dy)\ncheck dirac graph_two_form(omega)\n");
    ASSERT_EQ(r.checks.size(), 1u);
    EXPECT_TRUE(r.checks[0].pass);
    EXPECT_EQ(r.passed(), 1u);
    EXPECT_EQ(r.exit_code(), 0);
}

TEST(Run, NonClosedGraphFailsWithWitness) {
    RunReport r = run("check dirac graph_two_form(z*dx^dy)\n");
    ASSERT_EQ(r.checks.size(), 1u);
    EXPECT_FALSE(r.checks[0].pass);
    EXPECT_EQ(r.checks[0].witness, "mu[1,2,3] = 1");
    EXPECT_EQ(r.failed(), 1u);
    EXPECT_EQ(r.exit_code(), 1);
    EXPECT_NE(emit_report(r, Format::json).find("\"witness\": \"mu[1,2,3] = 1\""), std::string::npos);
}

TEST(Run, EmptyFile) {
    RunReport r = run("patch M = (x)\n");
    EXPECT_TRUE(r.checks.empty());
    EXPECT_EQ(r.exit_code(), 0);
    EXPECT_EQ(emit_report(r, Format::json), "{\n  \"checks\": [],\n  \"summary\": {\n    \"pass\": 0,\n    \"fail\": 0\n  }\n}\n");
}

TEST(Run, Expectations) {
    RunReport r = run("patch M = (x, y, z)\n"
                      "check dirac graph_two_form(z*dx^dy) expect fail\n"
                      "check dirac graph_two_form(dx^dy) expect fail\n"
                      "check induced_bialgebra pair_groupoid(M) 0 expect error\n"
                      "check dirac foliation(@x) expect error\n");
    ASSERT_EQ(r.checks.size(), 4u);
    EXPECT_TRUE(r.checks[0].pass);
    EXPECT_FALSE(r.checks[0].outcome);
    EXPECT_FALSE(r.checks[1].pass);
    EXPECT_TRUE(r.checks[1].outcome);
    EXPECT_TRUE(r.checks[2].pass);
    EXPECT_EQ(r.checks[2].error.rfind("NotAGroup: ", 0), 0u) << r.checks[2].error;
    EXPECT_FALSE(r.checks[3].pass);
    EXPECT_TRUE(r.checks[3].error.empty());
}

TEST(Run, ModuleErrorInsideCheckIsRecorded) {
    RunReport r = run("patch M = (x)\ncheck multiplicative_bivector pair_groupoid(M) 0\n");
    ASSERT_EQ(r.checks.size(), 1u);
    EXPECT_FALSE(r.checks[0].pass);
    EXPECT_EQ(r.checks[0].error.rfind("NotAGroup", 0), 0u);
    EXPECT_NE(emit_report(r, Format::json).find("\"error\""), std::string::npos);
}

TEST(Run, UnknownReference) {
    EXPECT_THROW(run("check dirac omega\n"), UnknownReference);
    EXPECT_THROW(run("check groupoid G\n"), UnknownReference);
    EXPECT_THROW(run("let a = tangent_algebroid(M)\n"), UnknownReference);
    // Declarations are only visible after their line.
    EXPECT_THROW(run("check groupoid G\nlet G = heisenberg3()\n"), UnknownReference);
    EXPECT_NO_THROW(run("let G = heisenberg3()\ncheck groupoid G\n"));
}

TEST(Run, ConstructorErrorsBecomeCheckErrors) {
    EXPECT_THROW(run("patch M = (x, y)\nlet w = graph_two_form(form(dx))\n"), CheckError);
    EXPECT_THROW(run("let d = induced_dual_bracket(abelian_group(2), @x1^@x2)\n"), CheckError);
}

TEST(Run, TypeAndShapeErrorsAreSyntaxErrors) {
    EXPECT_EQ(error_column("let G = heisenberg3()\ncheck dirac G\n"), 13u);
    EXPECT_EQ(error_column("check dirac graph_two_form(@x)\n"), 28u);
    EXPECT_EQ(error_column("check dirac graph_two_form(dx^dy + dx)\n"), 28u);
    EXPECT_EQ(error_column("check dirac\n"), 7u);
    EXPECT_EQ(error_column("check frobnicate x\n"), 7u);
    EXPECT_EQ(error_column("let g = lie_algebra(2, [1,2] = e1*e2)\n"), 24u);
    EXPECT_EQ(error_column("let g = lie_algebra(2, [1,3] = e1)\n"), 24u);
    EXPECT_EQ(error_column("let g = nosuch(1)\n"), 9u);
    EXPECT_EQ(error_column("patch M = (x)\ncheck closed form(M, y*dx)\n"), 22u);
}

TEST(Literals, FormsFieldsAndBivectors) {
    RunReport r = run("patch M = (x, y, z)\n"
                      "check closed form(x*dy - y*dx) expect fail\n"
                      "check closed form(y*dx + x*dy)\n"
                      "check closed (x*dy^dz - -y*dz^dx + (z - 1)*dx^dy) expect fail\n"
                      "check poisson bivector(x*@y^@z + y*@z^@x + z*@x^@y)\n"
                      "check poisson bivector(x*@x^@y + y*@y^@z + z*@z^@x) expect fail\n"
                      "check dirac foliation(@x, -y*@x + @y)\n"
                      "check dirac frame(@x + x*dy, @y - x*dx, @z)\n");
    for (const auto& c : r.checks)
        EXPECT_TRUE(c.pass) << c.name << " " << c.witness << " " << c.error;
    EXPECT_EQ(r.checks[0].witness, "dw[1,2] = 2");
    EXPECT_EQ(r.checks[4].witness, "jacobiator[1,2,3] = x + y + z");
}

TEST(Literals, PatchIsInferredWithoutDeclarations) {
    // Coordinates are the sorted identifiers of the literal.
    RunReport r = run("check dirac graph_two_form(b*da^dc)\n");
    EXPECT_EQ(r.checks[0].witness, "mu[1,2,3] = -1");
    EXPECT_TRUE(run("check closed (u^2*du)\n").checks[0].pass);
}

TEST(Literals, GroupoidChecksUseTheTotalSpace) {
    RunReport r = run("patch M = (x, y)\n"
            "let G = pair_groupoid(M)\n"
            "check multiplicative_form G (dx_1^dy_1 - dx_2^dy_2)\n"
            "check multiplicative_form G dx_1^dy_1 expect fail\n"
            "check induced_im_foliation G @x_1 @x_2\n"
            "check im_two_form lie_algebroid_of(G) (x*dx^dy) expect pass\n"
            "check induced_bialgebra abelian_group(2) x1*@x1^@x2\n"
            "check multiplicative_bivector heisenberg3() @a^@b expect fail\n"
            "check lie_bialgebra lie_algebroid_of(abelian_group(2)) induced_dual_bracket(abelian_group(2), "
            "x1*@x1^@x2) 1\n");
    for (const auto& c : r.checks)
        EXPECT_TRUE(c.pass) << c.name << " " << c.witness << " " << c.error;
}

TEST(Literals, AlgebrasAndLinearity) {
    RunReport r = run("let so3 = lie_algebra(3, [1,2] = e3, [2,3] = e1, [3,1] = e2)\n"
                      "let bad = lie_algebra(3, [1,2] = e3, [2,3] = e3, [3,1] = e1 + e2)\n"
                      "check lie_algebroid so3\n"
                      "check lie_algebroid bad expect fail\n"
                      "check poisson dual_poisson(so3)\n"
                      "check linear graph_bivector(dual_poisson(so3)) 0\n"
                      "patch D = dual(so3)\n"
                      "check linear graph_bivector(sum(dual_poisson(so3), bivector(@xi1^@xi2))) 0 expect fail\n"
                      "check lie_bialgebra lie_algebra(2, [1,2] = 1/2*e1) lie_algebra(2) 1 expect pass\n");
    for (const auto& c : r.checks)
        EXPECT_TRUE(c.pass) << c.name << " " << c.witness << " " << c.error;
}

TEST(Emit, TextAndJsonAgree) {
    RunReport r = run("patch M = (x, y, z)\n"
                      "check dirac graph_two_form(dx^dy)\n"
                      "check dirac graph_two_form(z*dx^dy)\n"
                      "check dirac graph_two_form(z*dx^dy) expect fail\n");
    std::string text = emit_report(r, Format::text);
    std::string json = emit_report(r, Format::json);
    EXPECT_EQ(text, "PASS  dirac graph_two_form(dx^dy)\n"
                    "FAIL  dirac graph_two_form(z*dx^dy)               witness mu[1,2,3] = 1\n"
                    "PASS  dirac graph_two_form(z*dx^dy)  expect fail  witness mu[1,2,3] = 1\n"
                    "3 checks: 2 pass, 1 fail\n");
    const std::string expected = R"json({
  "checks": [
    {
      "name": "dirac graph_two_form(dx^dy)",
      "verdict": "pass"
    },
    {
      "name": "dirac graph_two_form(z*dx^dy)",
      "verdict": "fail",
      "witness": "mu[1,2,3] = 1"
    },
    {
      "name": "dirac graph_two_form(z*dx^dy)",
      "verdict": "pass",
      "expect": "fail",
      "witness": "mu[1,2,3] = 1"
    }
  ],
  "summary": {
    "pass": 2,
    "fail": 1
  }
}
)json";
    EXPECT_EQ(json, expected);
    EXPECT_NE(emit_report(r, Format::text, true).find("s\n"), std::string::npos);
}

TEST(Runner, OrderIsDeclarationOrder) {
    std::vector<Job> jobs;
    for (int i = 0; i < 8; ++i)
        jobs.push_back({"job" + std::to_string(i),
                        [i] {
                            std::this_thread::sleep_for(std::chrono::milliseconds(5 * (8 - i)));
                            return i % 3 ? Report::ok("j") : Report::fail("j", index_witness("k", {0}, Expr(i)));
                        },
                        std::nullopt});
    RunReport r = run_jobs(jobs, 4);
    ASSERT_EQ(r.checks.size(), 8u);
    for (int i = 0; i < 8; ++i) {
        EXPECT_EQ(r.checks[static_cast<std::size_t>(i)].name, "job" + std::to_string(i));
        EXPECT_EQ(r.checks[static_cast<std::size_t>(i)].pass, i % 3 != 0);
    }
    EXPECT_EQ(r.checks[3].witness, "k[1] = 3");
}

TEST(Runner, ExceptionsAreContained) {
    std::vector<Job> jobs = {{"boom", [] () -> Report { throw NotLagrangian("rank 1"); }, std::nullopt},
                             {"std", [] () -> Report { throw std::out_of_range("oops"); }, std::nullopt},
                             {"ok", [] { return Report::ok("ok"); }, Expectation::pass}};
    RunReport r = run_jobs(jobs, 2);
    EXPECT_EQ(r.checks[0].error, "NotLagrangian: rank 1");
    EXPECT_FALSE(r.checks[1].pass);
    EXPECT_TRUE(r.checks[2].pass);
}

TEST(Property, SummaryAndExitCode) {
    gen::Rng rng(5);
    for (int it = 0; it < 50; ++it) {
        std::vector<Job> jobs;
        int n = rng.range(0, 6);
        for (int k = 0; k < n; ++k) {
            bool pass = rng.coin();
            std::optional<Expectation> e;
            if (rng.coin())
                e = rng.coin() ? Expectation::pass : Expectation::fail;
            jobs.push_back(
                {"j", [pass] { return pass ? Report::ok("j") : Report::fail("j", "k[1] = 1"); }, e});
        }
        RunReport r = run_jobs(jobs, static_cast<unsigned>(rng.range(1, 3)));
        std::size_t pass = 0;
        for (const auto& c : r.checks)
            pass += c.pass;
        ASSERT_EQ(r.passed(), pass);
        ASSERT_EQ(r.passed() + r.failed(), r.checks.size());
        ASSERT_EQ(r.exit_code() == 0, r.failed() == 0);
        std::string json = emit_report(r, Format::json);
        ASSERT_NE(json.find("\"fail\": " + std::to_string(r.failed())), std::string::npos);
    }
}

TEST(Property, ReportsAreDeterministic) {
    const std::string text = "patch M = (x, y, z)\n"
                             "check dirac graph_two_form(z*dx^dy)\n"
                             "check dirac foliation(@x, @y + x*@z)\n"
                             "check poisson bivector(x*@x^@y + y*@y^@z + z*@z^@x)\n"
                             "check groupoid tangent_groupoid(heisenberg3())\n";
    std::string first = emit_report(run(text, 1), Format::json);
    for (unsigned threads : {2u, 3u, 8u}) {
        EXPECT_EQ(emit_report(run(text, threads), Format::json), first);
        EXPECT_EQ(emit_report(run(text, threads), Format::text), emit_report(run(text, 1), Format::text));
    }
}

TEST(Suite, NamesAndSelection) {
    EXPECT_EQ(suite_names(), (std::vector<std::string>{"paper-examples"}));
    EXPECT_THROW(suite_jobs("nope"), UnknownReference);
    std::size_t total = suite_jobs("paper-examples").size();
    std::size_t sum = 0;
    for (int k = 1; k <= suite_criteria; ++k) {
        auto jobs = suite_jobs("paper-examples", k);
        EXPECT_FALSE(jobs.empty()) << k;
        sum += jobs.size();
    }
    EXPECT_EQ(sum, total);
}
