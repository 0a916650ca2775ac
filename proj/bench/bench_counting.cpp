#include <benchmark/benchmark.h>

#include "teamcount/builtins.hpp"
#include "teamcount/counting.hpp"
#include "teamcount/encodings.hpp"
#include "teamcount/parser.hpp"
#include "teamcount/reductions.hpp"

using namespace teamcount;

namespace {

// Chain x1 ∨ x2, x2 ∨ x3, ... over `vars` variables.
QBFormula chain_2cnf_plus(int vars) {
  QBFormula f(vars);
  for (int v = 1; v < vars; ++v) f.add_clause({v, v + 1});
  return f;
}

// Free variables 1..free_vars, each tied to a bound variable, bound ones chained.
QBFormula tied_cnf(int free_vars) {
  QBFormula f;
  for (int i = 0; i < free_vars; ++i) f.add_var(false);
  for (int i = 0; i < free_vars; ++i) f.add_var(true);
  for (int i = 1; i <= free_vars; ++i) f.add_clause({-i, free_vars + i});
  for (int i = 1; i < free_vars; ++i) f.add_clause({-(free_vars + i), -(free_vars + i + 1), i});
  return f;
}

CountOptions jobs(const benchmark::State& state) {
  CountOptions opts;
  opts.jobs = static_cast<int>(state.range(1));
  return opts;
}

void BM_TeamsParallel(benchmark::State& state) {
  const auto& incl = builtin_formula("incl-2cnf+");
  const auto s = encode_2cnf_plus(chain_2cnf_plus(static_cast<int>(state.range(0))));
  const auto opts = jobs(state);
  for (auto _ : state) benchmark::DoNotOptimize(count_teams(s, incl.formula, incl.team_vars, opts).count);
}

void BM_TeamsSerial(benchmark::State& state) {
  const auto& incl = builtin_formula("incl-2cnf+");
  const auto s = encode_2cnf_plus(chain_2cnf_plus(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(count_teams_serial(s, incl.formula, incl.team_vars).count);
}

void BM_InclusionTeams(benchmark::State& state) {
  const auto& incl = builtin_formula("incl-2cnf+");
  const auto s = encode_2cnf_plus(chain_2cnf_plus(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(count_inclusion_teams(s, incl.formula, incl.team_vars).count);
}

void BM_ProjectedParallel(benchmark::State& state) {
  const auto f = tied_cnf(static_cast<int>(state.range(0)));
  const auto opts = jobs(state);
  for (auto _ : state) benchmark::DoNotOptimize(count_assignments(f, CountMode::Projected, opts).count);
}

void BM_ProjectedSerial(benchmark::State& state) {
  const auto f = tied_cnf(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(count_assignments_serial(f, CountMode::Projected).count);
}

void BM_DependenceReduction(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Structure s(n);
  const auto d = check_normal_form(parse_team_formula("A u. E w. (dep(u;w) & w != x)"), AtomKind::Dependence);
  for (auto _ : state) benchmark::DoNotOptimize(dep_to_sigma1cnf_neg(s, d).num_vars());
}

}  // namespace

BENCHMARK(BM_TeamsParallel)->ArgsProduct({{3, 4}, {1, 2, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TeamsSerial)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InclusionTeams)->Arg(3)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProjectedParallel)->ArgsProduct({{8, 12}, {1, 2, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProjectedSerial)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DependenceReduction)->Arg(3)->Arg(6)->Arg(10);

BENCHMARK_MAIN();
