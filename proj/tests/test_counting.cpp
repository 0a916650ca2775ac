#include <doctest.h>

#include "support/generators.hpp"
#include "teamcount/builtins.hpp"
#include "teamcount/counting.hpp"
#include "teamcount/encodings.hpp"
#include "teamcount/error.hpp"
#include "teamcount/eval.hpp"
#include "teamcount/parser.hpp"

using namespace teamcount;

namespace {

// Counts nonempty teams by enumerating row subsets and asking the
// definitional evaluator about each. Throws BudgetExceeded on costly inputs.
mpz_class brute_team_count(const Structure& s, const FormulaPtr& f, const VarTuple& vars) {
  EvalOptions opts;
  opts.budget = 1 << 15;
  const auto full = Team::full(s.size(), vars);
  mpz_class count = 0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << full.size()); ++mask) {
    std::vector<Tuple> rows;
    for (std::size_t i = 0; i < full.size(); ++i)
      if (mask >> i & 1) rows.push_back(full.rows()[i]);
    if (eval_reference(s, Team(vars, rows), f, opts)) ++count;
  }
  return count;
}

// Counts (R̄, c̄) by materializing every relation tuple into a copy of the
// structure and checking the body pointwise.
mpz_class brute_relation_count(const Structure& s, const RelationQuery& q, bool nonempty_only) {
  std::vector<std::pair<std::string, std::size_t>> all = q.free_relations;
  all.insert(all.end(), q.exists_relations.begin(), q.exists_relations.end());
  std::vector<std::size_t> cells;
  std::size_t free_bits = 0, total_bits = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    cells.push_back(checked_power(s.size(), all[i].second));
    total_bits += cells.back();
    if (i < q.free_relations.size()) free_bits += cells.back();
  }
  const auto individuals = checked_power(s.size(), q.free_individuals.size());
  std::set<std::pair<std::uint64_t, std::uint64_t>> hits;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << total_bits); ++bits) {
    const std::uint64_t free_part = bits & ((std::uint64_t{1} << free_bits) - 1);
    if (nonempty_only && free_part == 0) continue;
    Structure ext = s;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
      const auto idx = ext.add_relation(all[i].first, all[i].second);
      for (std::size_t r = 0; r < cells[i]; ++r)
        if (bits >> (offset + r) & 1) ext.set_bit(idx, r);
      offset += cells[i];
    }
    for (std::uint64_t c = 0; c < individuals; ++c) {
      const auto tuple = s.unrank(c, q.free_individuals.size());
      Assignment a;
      for (std::size_t i = 0; i < tuple.size(); ++i) a[q.free_individuals[i]] = tuple[i];
      if (eval_tarski(ext, a, *q.body)) hits.insert({free_part, c});
    }
  }
  return static_cast<unsigned long>(hits.size());
}

QBFormula cnf(int free_vars, int bound_vars, std::vector<Clause> clauses) {
  QBFormula f;
  for (int i = 0; i < free_vars; ++i) f.add_var(false);
  for (int i = 0; i < bound_vars; ++i) f.add_var(true);
  for (auto& c : clauses) f.add_clause(std::move(c));
  return f;
}

const Vocabulary kVocab{{"R", 1}, {"E", 2}};

}  // namespace

TEST_CASE("team counting examples") {
  const auto incl = builtin_formula("incl-2cnf+");
  const auto s = encode_2cnf_plus(cnf(2, 0, {{1, 2}}));
  CHECK(count_teams(s, incl.formula, incl.team_vars).count == 3);
  CHECK(count_teams_serial(s, incl.formula, incl.team_vars).count == 3);
  CHECK(count_teams_reference(s, incl.formula, incl.team_vars).count == 3);

  const Structure three(3);
  CHECK(count_teams(three, parse_team_formula("x = x"), {"x"}).count == 7);
  CHECK(count_teams(three, parse_team_formula("x != x"), {"x"}).count == 0);
  CHECK(count_teams(Structure(2), parse_team_formula("inc(x;y)"), {"x", "y"}).count == 11);

  CountOptions tiny;
  tiny.budget = 100;
  CHECK_THROWS_AS(count_teams(three, parse_team_formula("x = x"), {"x", "y", "z"}, tiny), BudgetExceeded);
  CHECK_THROWS_AS(count_teams_serial(three, parse_team_formula("x = x"), {"x", "y", "z"}, tiny),
                  BudgetExceeded);
  CHECK_THROWS(count_teams(three, parse_team_formula("x = y"), {"x"}));
}

TEST_CASE("team counting agrees with brute force") {
  gen::Rng rng(41);
  int compared = 0;
  for (int trial = 0; trial < 250; ++trial) {
    const auto atoms = static_cast<gen::Atoms>(trial % 5);
    gen::FormulaGen fg(rng, kVocab, atoms);
    const VarTuple vars = trial % 3 ? VarTuple{"x"} : VarTuple{"x", "y"};
    const std::size_t n = vars.size() == 1 ? 2 + trial % 3 : 2;
    const auto f = fg.make(vars, 2);
    const auto s = gen::random_structure(rng, n, kVocab);
    CAPTURE(to_string(*f));
    CountOptions opts;
    opts.jobs = 1 + trial % 3;
    mpz_class expected;
    try {
      expected = brute_team_count(s, f, vars);
    } catch (const BudgetExceeded&) {
      continue;
    }
    ++compared;
    CHECK(count_teams(s, f, vars, opts).count == expected);
    CHECK(count_teams_serial(s, f, vars).count == expected);
    opts.closure_pruning = false;
    CHECK(count_teams(s, f, vars, opts).count == expected);
  }
  CHECK(compared > 150);
}

TEST_CASE("relation counting examples") {
  const Structure two(2);
  RelationQuery all{{{"R", 1}}, {}, {}, parse_team_formula("A x. R(x)")};
  CHECK(count_relations(two, all, false).count == 1);
  RelationQuery some{{{"R", 1}}, {}, {}, parse_team_formula("E x. R(x)")};
  CHECK(count_relations(two, some, false).count == 3);
  CHECK(count_relations_serial(two, some, true).count == 3);

  const auto myopic = builtin_formula("myopic-dualhorn");
  const auto s = encode_dualhorn(cnf(2, 0, {{1, 2}, {-1, 2}}));
  CHECK(count_relations(s, myopic.query(), true).count == 2);

  RelationQuery wrong{{{"R", 2}}, {}, {}, parse_team_formula("R(x)")};
  CHECK_THROWS(count_relations(two, wrong, false));
}

TEST_CASE("relation counting agrees with brute force") {
  gen::Rng rng(42);
  const Vocabulary base{{"E", 2}};
  for (int trial = 0; trial < 150; ++trial) {
    gen::FormulaGen fg(rng, {{"E", 2}, {"R", 1}, {"S", 1}}, gen::Atoms::None);
    const VarTuple individuals = trial % 2 ? VarTuple{"x"} : VarTuple{};
    auto body = fg.make(individuals.empty() ? VarTuple{"x"} : individuals, 3);
    if (individuals.empty()) body = exists("x", body);
    const auto s = gen::random_structure(rng, 2 + trial % 2, base);
    RelationQuery q{{{"R", 1}}, {}, individuals, body};
    if (trial % 3 == 0) q.exists_relations.push_back({"S", 1});
    else q.free_relations.push_back({"S", 1});
    const bool nonempty = trial % 4 == 1;
    CAPTURE(to_string(*body));
    const auto expected = brute_relation_count(s, q, nonempty);
    CHECK(count_relations(s, q, nonempty).count == expected);
    CHECK(count_relations_serial(s, q, nonempty).count == expected);
  }
}

TEST_CASE("assignment counting modes") {
  CHECK(count_assignments(cnf(2, 0, {{1, 2}}), CountMode::All).count == 3);
  CHECK(count_assignments(cnf(1, 1, {{-1, 2}, {1, -2}}), CountMode::Projected).count == 2);
  CHECK(count_assignments(cnf(1, 1, {{-1, 2}}), CountMode::Star).count == 1);
  CHECK(parse_count_mode("star") == CountMode::Star);
  CHECK(std::string(to_string(CountMode::Projected)) == "projected");
  CHECK_THROWS(parse_count_mode("most"));

  gen::Rng rng(43);
  for (int trial = 0; trial < 300; ++trial) {
    const auto f = gen::random_cnf(rng, 1 + trial % 5, trial % 5, 1 + trial % 8, 3);
    const auto brute = gen::brute_counts(f);
    CAPTURE(to_dimacs(f));
    CountOptions opts;
    opts.jobs = 1 + trial % 2;
    CHECK(count_assignments(f, CountMode::All, opts).count == brute.all);
    CHECK(count_assignments(f, CountMode::Projected, opts).count == brute.projected);
    CHECK(count_assignments(f, CountMode::Star, opts).count == brute.star);
    CHECK(count_assignments_serial(f, CountMode::Projected).count == brute.projected);
    CHECK(count_assignments_serial(f, CountMode::Star).count == brute.star);
  }
}

TEST_CASE("maximal subteam examples") {
  const Structure three(3);
  const auto inc = parse_team_formula("inc(x;y)");
  CHECK(max_subteam(three, Team({"x", "y"}, {{0, 1}, {1, 2}, {2, 2}}), inc) ==
        Team({"x", "y"}, {{2, 2}}));
  CHECK(max_subteam(three, Team({"x", "y"}, {{0, 1}}), inc).empty());

  Structure s(3);
  s.add_relation("R", 1);
  s.add_tuple("R", {1});
  const auto flat = parse_team_formula("R(x) | x = y");
  const auto team = Team::full(3, {"x", "y"});
  std::vector<Tuple> expected;
  for (const auto& row : team.rows())
    if (row[0] == 1 || row[0] == row[1]) expected.push_back(row);
  CHECK(max_subteam(s, team, flat) == Team({"x", "y"}, expected));
}

TEST_CASE("maximal subteam is idempotent and contains every satisfying subteam") {
  gen::Rng rng(44);
  for (int trial = 0; trial < 150; ++trial) {
    const auto s = gen::random_structure(rng, 2, kVocab);
    gen::FormulaGen il(rng, kVocab, gen::Atoms::Inclusion);
    const auto f = il.make({"x", "y"}, 3);
    const auto team = gen::random_team(rng, 2, {"x", "y"}, 4);
    const auto m = max_subteam(s, team, f);
    CAPTURE(to_string(*f));
    CHECK(eval(s, m, f));
    CHECK(max_subteam(s, m, f) == m);
    const auto& rows = team.rows();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << rows.size()); ++mask) {
      std::vector<Tuple> pick;
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (mask >> i & 1) pick.push_back(rows[i]);
      const Team sub({"x", "y"}, pick);
      if (!eval(s, sub, f)) continue;
      for (const auto& r : pick) CHECK(m.contains(r));
    }
  }
}

TEST_CASE("inclusion team enumeration") {
  const auto incl = builtin_formula("incl-2cnf+");
  const auto s = encode_2cnf_plus(cnf(2, 0, {{1, 2}}));
  CHECK(count_inclusion_teams(s, incl.formula, incl.team_vars).count == 3);
  CHECK(count_inclusion_teams(Structure(2), parse_team_formula("inc(x;y)"), {"x", "y"}).count == 11);
  CHECK(count_inclusion_teams(Structure(2), parse_team_formula("x != x"), {"x"}).count == 0);
  CHECK_THROWS_AS(count_inclusion_teams(Structure(2), parse_team_formula("dep(;x)"), {"x"}),
                  PreconditionError);

  gen::Rng rng(45);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s2 = gen::random_structure(rng, 2 + trial % 2, kVocab);
    gen::FormulaGen il(rng, kVocab, gen::Atoms::Inclusion);
    const VarTuple vars = trial % 2 ? VarTuple{"x"} : VarTuple{"x", "y"};
    if (vars.size() == 2 && s2.size() == 3) continue;
    const auto f = il.make(vars, 3);
    CAPTURE(to_string(*f));
    const auto expected = count_teams_serial(s2, f, vars).count;
    CHECK(count_inclusion_teams(s2, f, vars).count == expected);
    CHECK(inclusion_team_exists(s2, f, vars) == (expected > 0));
    CHECK(max_subteam(s2, Team::full(s2.size(), vars), f).empty() == (expected == 0));
  }
}

TEST_CASE("sigma1 DualHorn counting") {
  CHECK(count_sigma1_dualhorn(cnf(1, 1, {{1, 2}})).count == 2);
  CHECK(count_sigma1_dualhorn(cnf(1, 1, {{2}, {-2}})).count == 0);
  CHECK(count_sigma1_dualhorn(cnf(0, 2, {{1, 2}, {-1, 2}})).count == 1);
  CHECK_THROWS_AS(count_sigma1_dualhorn(cnf(2, 0, {{-1, -2}})), PreconditionError);

  gen::Rng rng(46);
  for (int trial = 0; trial < 400; ++trial) {
    const int free_vars = 1 + static_cast<int>(gen::pick(rng, 6));
    const int bound_vars = static_cast<int>(gen::pick(rng, 7));
    const auto f = gen::random_cnf(rng, free_vars, bound_vars, 1 + trial % 10, 3, 0, true);
    CAPTURE(to_dimacs(f));
    const auto expected = gen::brute_counts(f).projected;
    CHECK(count_sigma1_dualhorn(f).count == expected);
    CHECK(count_assignments(f, CountMode::Projected).count == expected);
  }
}
