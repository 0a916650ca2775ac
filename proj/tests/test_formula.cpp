#include <doctest.h>

#include "support/generators.hpp"
#include "teamcount/error.hpp"
#include "teamcount/normal_form.hpp"
#include "teamcount/parser.hpp"
#include "teamcount/qbf.hpp"
#include "teamcount/sat.hpp"

using namespace teamcount;

TEST_CASE("parser and printer round trip") {
  const char* samples[] = {
      "A x. A y. (!C(x,y) | inc(x;t) | inc(y;t))",
      "E x. (dep(x,y;z) & x != y)",
      "ind(y|x|z) & atom nonempty(x)",
      "(R(x) | S(x,y)) & (x = y | !R(y))",
      "E min. ((A z. <=(min,z)) & +(x,y,z))",
      "dep(;y)",
  };
  for (const char* text : samples) {
    CAPTURE(text);
    const auto f = parse_team_formula(text);
    const auto again = parse_team_formula(to_string(*f));
    CHECK(structurally_equal(*f, *again));
    CHECK(to_string(*f) == to_string(*again));
  }
}

TEST_CASE("conjunction binds tighter than disjunction") {
  const auto f = parse_team_formula("R(x) | S(x) & T(x)");
  REQUIRE(f->kind == NodeKind::Or);
  CHECK(f->right->kind == NodeKind::And);
}

TEST_CASE("implication with first-order antecedent") {
  const auto f = parse_team_formula("R(x) -> dep(x;y)");
  REQUIRE(f->kind == NodeKind::Or);
  CHECK(f->left->negated);
  CHECK_THROWS_AS(parse_team_formula("dep(x;y) -> R(x)"), SyntaxError);
}

TEST_CASE("syntax errors carry offsets") {
  try {
    parse_team_formula("(x=y");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 4);
  }
  CHECK_THROWS_AS(parse_team_formula("R(x"), SyntaxError);
  CHECK_THROWS_AS(parse_team_formula("x = "), SyntaxError);
  CHECK_THROWS_AS(parse_team_formula("E . R(x)"), SyntaxError);
}

TEST_CASE("arity errors") {
  CHECK_THROWS_AS(parse_team_formula("inc(x,y;z)"), ArityError);
  CHECK_THROWS_AS(incl({"x"}, {"y", "z"}), ArityError);
  const Vocabulary v{{"R", 2}};
  CHECK_THROWS_AS(parse_team_formula("R(x)", &v), ArityError);
  CHECK_NOTHROW(parse_team_formula("R(x,y)", &v));
}

TEST_CASE("free variables and usage") {
  const auto f = parse_team_formula("E y. (R(x,y) & dep(z;y)) | inc(w;x)");
  CHECK(free_variables(*f) == std::set<std::string>{"w", "x", "z"});
  CHECK(free_variables_ordered(*f) == VarTuple{"x", "z", "w"});
  const auto u = atom_usage(*f);
  CHECK(u.dependence);
  CHECK(u.inclusion);
  CHECK_FALSE(u.first_order());
  CHECK_FALSE(u.dependence_logic());
  CHECK(atom_usage(*parse_team_formula("A x. R(x)")).first_order());
}

TEST_CASE("negation normal form") {
  const auto f = parse_team_formula("A x. (R(x) | x = y)");
  const auto n = negate(*f);
  CHECK(to_string(*n) == to_string(*parse_team_formula("E x. (!R(x) & x != y)")));
  CHECK(structurally_equal(*negate(*n), *f));
  CHECK_THROWS_AS(negate(*parse_team_formula("dep(x;y)")), PreconditionError);
}

TEST_CASE("capture-avoiding renaming") {
  const auto f = parse_team_formula("E y. R(x,y)");
  const auto g = rename_free(f, {{"x", "y"}});
  CHECK(free_variables(*g) == std::set<std::string>{"y"});
  REQUIRE(g->kind == NodeKind::Exists);
  CHECK(g->name != "y");
  CHECK(g->left->args[0][0] == "y");
  CHECK(g->left->args[0][1] == g->name);
}

TEST_CASE("relation symbols exclude built-ins") {
  const auto f = parse_team_formula("R(x) & <=(x,y) & S(x,y,z)");
  const auto rs = relation_symbols(*f);
  CHECK(rs.size() == 2);
  CHECK(rs.at("S") == 3);
}

TEST_CASE("normal form recognition") {
  const auto f = parse_team_formula("A u. E w. (dep(u;w) & R(u,w) & x = u)");
  const auto d = check_normal_form(f, AtomKind::Dependence);
  CHECK(d.m() == 1);
  CHECK(d.k() == 1);
  CHECK(d.l() == 1);
  CHECK(d.atoms.size() == 1);
  REQUIRE(d.matrix);
  const auto rebuilt = build_normal_form(d);
  const auto d2 = check_normal_form(rebuilt, AtomKind::Dependence);
  CHECK(d2.atoms.size() == 1);
  CHECK(structurally_equal(*build_normal_form(d2), *rebuilt));

  CHECK_THROWS_AS(check_normal_form(parse_team_formula("E w. A u. dep(u;w)"), AtomKind::Dependence),
                  NotInNormalForm);
  CHECK_THROWS_AS(check_normal_form(parse_team_formula("A u. E w. dep(w;u)"), AtomKind::Dependence),
                  NotInNormalForm);
  CHECK_THROWS_AS(check_normal_form(parse_team_formula("A u. E w. (dep(u;w) | R(u))"),
                                    AtomKind::Dependence),
                  NotInNormalForm);
  CHECK_THROWS_AS(check_normal_form(parse_team_formula("A u. inc(u;x)"), AtomKind::Dependence),
                  NotInNormalForm);
  const auto inc = check_normal_form(parse_team_formula("A u. E w. (inc(x,w;u,u) & R(w,w))"),
                                     AtomKind::Inclusion);
  CHECK(inc.atoms.size() == 1);
  try {
    check_normal_form(parse_team_formula("E w. A u. R(u,w)"), AtomKind::Inclusion);
    FAIL("expected rejection");
  } catch (const NotInNormalForm& e) {
    CHECK(e.offending());
  }
}

TEST_CASE("DIMACS parsing and printing") {
  const auto f = parse_cnf("c hello\np cnf 4 2\ne 3 4 0\n-1 3 0\n2 -4 1 0\n");
  CHECK(f.num_vars() == 4);
  CHECK(f.free_vars() == std::vector<int>{1, 2});
  CHECK(f.bound_vars() == std::vector<int>{3, 4});
  CHECK(f.clauses()[1] == Clause{1, 2, -4});
  CHECK(f.comments() == std::vector<std::string>{"hello"});
  const auto again = parse_cnf(to_dimacs(f));
  CHECK(again.clauses() == f.clauses());
  CHECK(again.bound_vars() == f.bound_vars());

  QBFormula named;
  named.add_var(false, "{a,b'}");
  named.add_var(true, "y");
  named.add_clause({-1, 2});
  const auto back = parse_cnf(to_dimacs(named));
  CHECK(back.name(1) == "{a,b'}");
  CHECK(back.name(2) == "y");
  CHECK(back.comments().empty());

  CHECK_THROWS_AS(parse_cnf("p cnf 2 1\n1 3 0\n"), SyntaxError);
  CHECK_THROWS_AS(parse_cnf("p cnf 2 2\n1 2 0\n"), SyntaxError);
  CHECK_THROWS_AS(parse_cnf("1 2 0\n"), SyntaxError);
  CHECK_THROWS_AS(parse_cnf("p cnf 2 1\na 1 0\n1 0\n"), SyntaxError);
  CHECK_THROWS_AS(parse_cnf("p cnf 2 1\ne 1 0\ne 2 0\n1 0\n"), SyntaxError);
  CHECK_THROWS_AS(parse_cnf("p cnf 2 1\n1 2\n"), SyntaxError);
}

TEST_CASE("clause utilities and classes") {
  CHECK(normalize_clause({3, -1, 3, 2}) == Clause{-1, 2, 3});
  CHECK(is_tautology({1, -1}));
  CHECK_FALSE(is_tautology({1, 2}));
  CHECK(clause_restrict({1, -2, 3}, {1, 3}) == Clause{1, 3});
  CHECK(clause_restrict({1, -2, 3}, {4}).empty());
  CHECK(clause_restrict({1, -2, 3}, {1, 2, 3}) == Clause{1, -2, 3});

  const auto f = parse_cnf("p cnf 3 2\ne 3 0\n-1 -2 3 0\n-1 3 0\n");
  const auto flags = classify(f);
  CHECK(flags.cnf_minus);
  CHECK_FALSE(flags.cnf_plus);
  CHECK_FALSE(flags.dual_horn);
  CHECK_FALSE(flags.quantifier_free);
  CHECK(flags.width == 3);
  CHECK(flags.is_kcnf(3));
  CHECK_FALSE(flags.is_kcnf(2));
}

TEST_CASE("prenex conjunction renames clashing bound variables") {
  const auto a = parse_cnf("p cnf 2 1\ne 2 0\n-1 2 0\n");
  const auto b = parse_cnf("p cnf 2 1\n-1 -2 0\n");
  const auto c = prenex_conjoin(a, b);
  CHECK(c.num_vars() == 3);
  CHECK(c.free_vars() == std::vector<int>{1, 2});
  CHECK(c.bound_vars() == std::vector<int>{3});
  CHECK(gen::brute_counts(c).projected == 3);
  CHECK_THROWS_AS(prenex_conjoin(a, b, false), PreconditionError);
}

TEST_CASE("model counting agrees with enumeration") {
  gen::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = gen::random_cnf(rng, 1 + trial % 5, trial % 4, 1 + trial % 7, 3);
    CAPTURE(to_dimacs(f));
    const auto brute = gen::brute_counts(f);
    CHECK(count_models(f.clauses(), f.num_vars(), empty_assignment(f.num_vars())) == brute.all);
    CHECK(satisfiable(f.clauses(), f.num_vars()) == (brute.all > 0));
  }
}

TEST_CASE("DualHorn satisfiability agrees with DPLL") {
  gen::Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const auto f = gen::random_cnf(rng, 2 + trial % 4, trial % 3, 1 + trial % 8, 3, 0, true);
    REQUIRE(classify(f).dual_horn);
    auto fixed = empty_assignment(f.num_vars());
    if (trial % 2) fixed[1] = static_cast<std::int8_t>(trial % 4 == 1);
    auto copy = fixed;
    CHECK(dualhorn_sat(f.clauses(), f.num_vars(), fixed) == satisfiable(f.clauses(), copy));
  }
  CHECK_FALSE(dualhorn_sat(parse_cnf("p cnf 1 2\n1 0\n-1 0\n")));
  CHECK_THROWS_AS(dualhorn_sat(parse_cnf("p cnf 2 1\n-1 -2 0\n")), PreconditionError);
}
