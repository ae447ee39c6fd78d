#include <catch_amalgamated.hpp>

#include "random.hh"
#include "reference.hh"
#include "strprop/constraints.hh"
#include "strprop/errors.hh"
#include "strprop/oracle.hh"

using namespace strprop;
using namespace strprop::testing;

namespace {

    VarId v(const char* name) { return VarId{name}; }

    SurfaceConstraint member(const char* var, std::string_view regex) {
        return SurfaceConstraint{Membership{v(var), parse_regex(regex)}};
    }

    SurfaceConstraint eq(Term lhs, std::vector<Term> rhs) {
        return SurfaceConstraint{Equation{std::move(lhs), std::move(rhs)}};
    }

    SurfaceConstraint len(const char* var, LengthOp op, std::uint64_t n) {
        return SurfaceConstraint{LengthConstraint{v(var), op, n}};
    }

    std::set<VarPair> pairs(std::initializer_list<VarPair> l) { return std::set<VarPair>(l); }

    Problem url_problem(bool with_script) {
        std::vector<SurfaceConstraint> cs{
            member("domain", "[a-zA-Z.]+"),
            member("dir", "[a-zA-Z0-9.]+"),
            member("file", "[a-zA-Z0-9.]+"),
            eq(v("path"), {v("dir"), Word(U"/"), v("file")}),
            eq(v("url"), {Word(U"http://"), v("domain"), Word(U"/"), v("path")}),
        };
        if (with_script) cs.push_back(member("url", ".*<script>.*"));
        auto ps = desugar(cs);
        REQUIRE(ps.size() == 1);
        return ps[0];
    }

    // Two levels: x5 = x3 + x4, x3 = x1 + x2, all unconstrained.
    Problem two_level() {
        Problem p;
        for (const char* n : {"x1", "x2", "x3", "x4", "x5"}) {
            p.vars.insert(v(n));
            p.reg.emplace(v(n), sigma_star());
        }
        p.concat[v("x5")] = pairs({{v("x3"), v("x4")}});
        p.concat[v("x3")] = pairs({{v("x1"), v("x2")}});
        return p;
    }

} // namespace

TEST_CASE("n-ary equations fold left", "[constraints]") {
    auto ps = desugar(std::vector{eq(v("x"), {v("x1"), v("x2"), v("x3")})});
    REQUIRE(ps.size() == 1);
    const Problem& p = ps[0];
    CHECK(p.concat.size() == 2);
    CHECK(p.equations(v("_t1")) == pairs({{v("x1"), v("x2")}}));
    CHECK(p.equations(v("x")) == pairs({{v("_t1"), v("x3")}}));
    CHECK(well_formed(p));
    for (const auto& [var, a] : p.reg) CHECK(is_sigma_star(a));
}

TEST_CASE("literals become fresh variables", "[constraints]") {
    Problem p = url_problem(false);
    CHECK(well_formed(p));
    // "http://" and "/" each get a variable; two intermediates come from the fold
    CHECK(p.vars.size() == 5 + 2 + 2 + 2);
    // path = dir + "/" + file comes first in input order
    CHECK(p.equations(v("path")) == pairs({{v("_t2"), v("file")}}));
    CHECK(p.equations(v("_t2")) == pairs({{v("dir"), v("_t1")}}));
    CHECK(p.equations(v("url")) == pairs({{v("_t6"), v("path")}}));
    CHECK(p.equations(v("_t6")) == pairs({{v("_t4"), v("_t5")}}));
    CHECK(p.equations(v("_t4")) == pairs({{v("_t3"), v("domain")}}));
    CHECK(some_word(p.reg.at(v("_t3"))) == Word(U"http://"));
    CHECK(some_word(p.reg.at(v("_t5"))) == Word(U"/"));
    CHECK(check_tree(p));
}

TEST_CASE("unary equations use an empty-word partner", "[constraints]") {
    auto ps = desugar(std::vector{eq(v("x"), {v("y")})});
    const Problem& p = ps.at(0);
    CHECK(p.equations(v("x")) == pairs({{v("y"), v("_t1")}}));
    CHECK(accepts(p.reg.at(v("_t1")), U""));
    CHECK(!accepts(p.reg.at(v("_t1")), U"a"));
}

TEST_CASE("literal equations are decided during desugaring", "[constraints]") {
    auto yes = desugar(std::vector{eq(Word(U"ab"), {Word(U"a"), Word(U"b")})}).at(0);
    CHECK(yes.vars.empty());
    auto no = desugar(std::vector{eq(Word(U"ab"), {Word(U"a"), Word(U"c")})}).at(0);
    REQUIRE(no.vars.size() == 1);
    CHECK(is_empty(no.reg.begin()->second));
    CHECK_THROWS_AS(desugar(std::vector{eq(Word(U"ab"), {v("x")})}), UnsupportedError);
}

TEST_CASE("length constraints become memberships", "[constraints]") {
    auto p = desugar(std::vector{len("x", LengthOp::LessEq, 6)}).at(0);
    CHECK(p.reg.at(v("x")) == length_automaton(LengthOp::LessEq, 6));
    CHECK_THROWS_AS(desugar(std::vector{len("x", LengthOp::Eq, 20000)}), ResourceError);
}

TEST_CASE("memberships on one variable are intersected", "[constraints]") {
    auto p = desugar(std::vector{member("x", "a*"), member("x", "(aa)*b?"), len("x", LengthOp::GreaterEq, 1)}).at(0);
    const SNfa& a = p.reg.at(v("x"));
    CHECK(!accepts(a, U""));
    CHECK(!accepts(a, U"a"));
    CHECK(accepts(a, U"aa"));
    CHECK(!accepts(a, U"aab"));
}

TEST_CASE("declared variables without constraints get sigma-star", "[constraints]") {
    std::vector<VarId> declared{v("free")};
    auto p = desugar(std::vector{member("x", "a")}, declared).at(0);
    CHECK(p.vars.size() == 2);
    CHECK(is_sigma_star(p.reg.at(v("free"))));
}

TEST_CASE("disjunctions expand to one problem per disjunct", "[constraints]") {
    Disjunction d1{{{member("x", "a")}, {member("x", "b")}}};
    Disjunction d2{{{member("y", "a")}, {member("y", "b")}, {eq(v("y"), {v("x"), Word(U"c")})}}};
    auto ps = desugar(std::vector{SurfaceConstraint{d1}, SurfaceConstraint{d2}});
    CHECK(ps.size() == 6);
    for (const Problem& p : ps) CHECK(well_formed(p));
    // fresh numbering restarts per disjunct
    CHECK(ps[2].vars.contains(v("_t1")));
    CHECK(ps[5].vars.contains(v("_t1")));

    auto none = desugar(std::vector{SurfaceConstraint{Disjunction{}}});
    REQUIRE(none.size() == 1);
    bool some_empty = false;
    for (const auto& [var, a] : none[0].reg) some_empty = some_empty || is_empty(a);
    CHECK(some_empty);

    std::vector<SurfaceConstraint> many;
    for (int i = 0; i < 7; ++i) many.push_back(SurfaceConstraint{d1});
    CHECK_THROWS_AS(desugar(many), ResourceError);
    many.pop_back();
    CHECK(desugar(many).size() == 64);
}

TEST_CASE("fresh names avoid surface names", "[constraints]") {
    auto p = desugar(std::vector{eq(v("_t1"), {v("a"), v("b"), v("c")})}).at(0);
    CHECK(p.equations(v("_t1")) == pairs({{v("_t2"), v("c")}}));
}

TEST_CASE("sat_str", "[constraints]") {
    Problem q;
    for (const char* n : {"x", "y"}) q.vars.insert(v(n));
    q.reg.emplace(v("y"), word_automaton(U"ab"));
    q.reg.emplace(v("x"), compile(parse_regex("a|b")));
    q.concat[v("y")] = pairs({{v("x"), v("x")}});
    CHECK(!sat_str(q, {{v("y"), U"ab"}, {v("x"), U"a"}}));
    CHECK_THROWS_AS(sat_str(q, {{v("y"), U"ab"}}), std::invalid_argument);

    CHECK(sat_str(Problem{}, Assignment{}));
}

TEST_CASE("sat_str on the url problem", "[constraints]") {
    Problem p = url_problem(false);
    Assignment m{{v("domain"), U"a"}, {v("dir"), U"b"},     {v("file"), U"c"},
                 {v("path"), U"b/c"}, {v("url"), U"http://a/b/c"}, {v("_t1"), U"/"},
                 {v("_t2"), U"b/"},   {v("_t3"), U"http://"},     {v("_t4"), U"http://a"},
                 {v("_t5"), U"/"},    {v("_t6"), U"http://a/"}};
    REQUIRE(m.size() == p.vars.size());
    CHECK(sat_str(p, m));
    m[v("url")] = U"http://a/b/d";
    CHECK(!sat_str(p, m));
}

TEST_CASE("layering", "[constraints]") {
    Layering l = layering(two_level());
    REQUIRE(l.acyclic());
    REQUIRE(l.layers.size() == 3);
    CHECK(l.layers[0] == std::set<VarId>{v("x5")});
    CHECK(l.layers[1] == std::set<VarId>{v("x3")});
    CHECK(l.layers[2] == std::set<VarId>{v("x1"), v("x2"), v("x4")});

    Problem cyc;
    for (const char* n : {"x", "y1", "y2", "z1"}) {
        cyc.vars.insert(v(n));
        cyc.reg.emplace(v(n), sigma_star());
    }
    cyc.concat[v("x")] = pairs({{v("y1"), v("y2")}});
    cyc.concat[v("y1")] = pairs({{v("z1"), v("x")}});
    Layering c = layering(cyc);
    CHECK(!c.acyclic());
    CHECK(c.layers.empty());
    CHECK(c.stuck == std::set<VarId>{v("x"), v("y1")});

    Problem flat;
    for (const char* n : {"a", "b"}) {
        flat.vars.insert(v(n));
        flat.reg.emplace(v(n), sigma_star());
    }
    Layering f = layering(flat);
    REQUIRE(f.layers.size() == 1);
    CHECK(f.layers[0] == flat.vars);
}

TEST_CASE("check_tree", "[constraints]") {
    Problem p;
    for (const char* n : {"x", "y"}) {
        p.vars.insert(v(n));
        p.reg.emplace(v(n), sigma_star());
    }
    p.concat[v("y")] = pairs({{v("x"), v("x")}});
    CHECK(!check_tree(p));
    CHECK(check_tree(two_level()));
    CHECK(check_tree(Problem{}));
}

TEST_CASE("problem dump", "[constraints]") {
    CHECK(dump(two_level()) ==
          "x1 : states=1 transitions=1 initial=1 accepting=1 ; deps:\n"
          "x2 : states=1 transitions=1 initial=1 accepting=1 ; deps:\n"
          "x3 : states=1 transitions=1 initial=1 accepting=1 ; deps: (x1,x2)\n"
          "x4 : states=1 transitions=1 initial=1 accepting=1 ; deps:\n"
          "x5 : states=1 transitions=1 initial=1 accepting=1 ; deps: (x3,x4)\n");
}

TEST_CASE("layering succeeds exactly on acyclic problems", "[constraints][property]") {
    Rng rng(31);
    ProblemShape shape;
    shape.max_vars = 6;
    shape.acyclic = false;
    shape.automaton.max_states = 1;
    int cyclic = 0;
    for (int i = 0; i < 1000; ++i) {
        Problem p = random_problem(rng, shape);
        REQUIRE(well_formed(p));
        Layering l = layering(p);
        REQUIRE(l.acyclic() == !has_cycle(p));
        cyclic += l.acyclic() ? 0 : 1;
        if (l.acyclic()) {
            std::set<VarId> later;
            std::size_t total = 0;
            for (auto it = l.layers.rbegin(); it != l.layers.rend(); ++it) {
                for (const VarId& x : *it) {
                    for (const VarId& d : p.dependencies(x)) REQUIRE(later.contains(d));
                }
                later.insert(it->begin(), it->end());
                total += it->size();
            }
            REQUIRE(total == p.vars.size());
        }
    }
    CHECK(cyclic > 50);
}

TEST_CASE("check_tree implies the three-clause predicate", "[constraints][property]") {
    Rng rng(32);
    ProblemShape shape;
    shape.max_vars = 6;
    shape.automaton.max_states = 1;
    int trees = 0;
    for (int i = 0; i < 2000; ++i) {
        shape.tree = (i % 3 == 0);
        Problem p = random_problem(rng, shape);
        if (check_tree(p)) {
            ++trees;
            REQUIRE(tree_predicate(p));
        }
    }
    CHECK(trees > 500);
}

TEST_CASE("desugaring preserves satisfiability on small instances", "[constraints][property]") {
    Bound b{3, IntervalSet{Interval('a', 'b')}};
    const auto words = all_words('a', 'b', 3);
    const std::vector<std::string_view> regexes{"a*", "b", "ab?", "(ab)*", "[ab]b", "a|bb", ""};
    Rng rng(33);
    auto term = [&]() -> Term {
        if (rng() % 3 == 0) return Word(rng() % 2 ? U"a" : U"b");
        return VarId{std::string(1, static_cast<char>('x' + rng() % 3))};
    };
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<SurfaceConstraint> cs;
        for (const char* n : {"x", "y", "z"}) {
            if (rng() % 2) cs.push_back(member(n, regexes[rng() % regexes.size()]));
        }
        // y = ... and z = ... with operands later in the order x < y < z, no cycles
        std::vector<Term> rhs;
        for (std::size_t i = 0, n = 1 + rng() % 3; i < n; ++i) {
            Term t = term();
            if (auto* var = std::get_if<VarId>(&t); var && var->name != "x") t = Word(U"a");
            rhs.push_back(t);
        }
        cs.push_back(eq(v("y"), rhs));
        if (rng() % 2) cs.push_back(len("z", LengthOp::LessEq, rng() % 3));

        // direct evaluation on the surface constraints
        bool surface_sat = false;
        for (const Word& x : words) {
            for (const Word& y : words) {
                for (const Word& z : words) {
                    Assignment m{{v("x"), x}, {v("y"), y}, {v("z"), z}};
                    bool ok = true;
                    for (const auto& c : cs) {
                        if (const auto* mem = std::get_if<Membership>(&c.node)) {
                            ok = ok && reference_match(mem->regex, m.at(mem->var));
                        } else if (const auto* e = std::get_if<Equation>(&c.node)) {
                            Word joined;
                            for (const Term& t : e->rhs) {
                                joined += std::holds_alternative<Word>(t) ? std::get<Word>(t) : m.at(std::get<VarId>(t));
                            }
                            ok = ok && m.at(std::get<VarId>(e->lhs)) == joined;
                        } else if (const auto* l = std::get_if<LengthConstraint>(&c.node)) {
                            ok = ok && m.at(l->var).size() <= l->bound;
                        }
                    }
                    surface_sat = surface_sat || ok;
                }
            }
        }
        std::vector<VarId> declared{v("x"), v("y"), v("z")};
        auto ps = desugar(cs, declared);
        REQUIRE(ps.size() == 1);
        // fresh variables hold literals or intermediates no longer than 3 letters
        bool core_sat = std::holds_alternative<OracleSat>(oracle_sat(ps[0], b));
        REQUIRE(core_sat == surface_sat);
    }
}
