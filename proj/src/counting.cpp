#include "teamcount/counting.hpp"

#include <omp.h>

#include <atomic>
#include <exception>
#include <set>

#include "teamcount/error.hpp"
#include "teamcount/sat.hpp"

namespace teamcount {

namespace {

// First exception thrown inside a parallel region, rethrown after it.
class ErrorSlot {
 public:
  void capture() {
#pragma omp critical(teamcount_error_slot)
    if (!error_) error_ = std::current_exception();
  }
  bool failed() const { return static_cast<bool>(error_); }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

int thread_count(const CountOptions& o) { return o.jobs > 0 ? o.jobs : omp_get_max_threads(); }

std::uint64_t team_space(const Structure& s, const VarTuple& vars, std::uint64_t budget,
                         bool need_all_subsets) {
  const std::uint64_t rows = checked_power(s.size(), vars.size());
  if (rows >= 62) throw BudgetExceeded("team space 2^" + std::to_string(rows) + " too large");
  if (need_all_subsets && (std::uint64_t{1} << rows) - 1 > budget)
    throw BudgetExceeded("2^" + std::to_string(rows) + " candidate teams exceed the budget of " +
                         std::to_string(budget));
  return rows;
}

CodeTeam team_of_mask(std::uint64_t mask) {
  CodeTeam t;
  for (Code c = 0; mask; ++c, mask >>= 1)
    if (mask & 1) t.push_back(c);
  return t;
}

EvalOptions eval_options(const CountOptions& o) { return {o.registry, o.budget}; }

struct DownwardSearch {
  Evaluator& ev;
  std::uint64_t rows;
  std::uint64_t budget;
  std::atomic<std::uint64_t>& visited;

  // Counts `team` (already known to satisfy) and all satisfying extensions by
  // codes >= next. Supersets of failing teams fail, so they are skipped.
  std::uint64_t count(CodeTeam& team, Code next) {
    std::uint64_t total = 1;
    for (Code c = next; c < rows; ++c) {
      if (visited.fetch_add(1, std::memory_order_relaxed) >= budget)
        throw BudgetExceeded("team search exceeded the budget of " + std::to_string(budget));
      team.push_back(c);
      if (ev.satisfies(team)) total += count(team, c + 1);
      team.pop_back();
    }
    return total;
  }
};

}  // namespace

CountResult count_teams(const Structure& s, const FormulaPtr& f, const VarTuple& vars,
                        CountOptions options) {
  Evaluator probe(s, f, vars, eval_options(options));
  const bool prune = options.closure_pruning && probe.downward_closed();
  const std::uint64_t rows = team_space(s, vars, options.budget, !prune);
  std::uint64_t total = 0;
  std::atomic<std::uint64_t> visited{0};
  ErrorSlot errors;
  if (prune) {
#pragma omp parallel num_threads(thread_count(options)) reduction(+ : total)
    {
      try {
        Evaluator ev(s, f, vars, eval_options(options));
        DownwardSearch search{ev, rows, options.budget, visited};
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t first = 0; first < static_cast<std::int64_t>(rows); ++first) {
          if (errors.failed()) continue;
          try {
            CodeTeam team{static_cast<Code>(first)};
            visited.fetch_add(1, std::memory_order_relaxed);
            if (ev.satisfies(team)) total += search.count(team, static_cast<Code>(first) + 1);
          } catch (...) {
            errors.capture();
          }
        }
      } catch (...) {
        errors.capture();
      }
    }
  } else {
    const auto masks = static_cast<std::int64_t>(std::uint64_t{1} << rows);
#pragma omp parallel num_threads(thread_count(options)) reduction(+ : total)
    {
      try {
        Evaluator ev(s, f, vars, eval_options(options));
#pragma omp for schedule(dynamic, 256)
        for (std::int64_t mask = 1; mask < masks; ++mask) {
          if (errors.failed()) continue;
          try {
            if (ev.satisfies(team_of_mask(static_cast<std::uint64_t>(mask)))) ++total;
          } catch (...) {
            errors.capture();
          }
        }
      } catch (...) {
        errors.capture();
      }
    }
    visited = static_cast<std::uint64_t>(masks - 1);
  }
  errors.rethrow();
  CountResult r;
  r.count = mpz_class(std::to_string(total));
  r.stats.nodes = visited.load();
  r.stats.oracle_calls = visited.load();
  return r;
}

CountResult count_teams_serial(const Structure& s, const FormulaPtr& f, const VarTuple& vars,
                               CountOptions options) {
  Evaluator ev(s, f, vars, eval_options(options));
  const std::uint64_t rows = team_space(s, vars, options.budget, true);
  CountResult r;
  std::uint64_t total = 0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << rows); ++mask)
    if (ev.satisfies(team_of_mask(mask))) ++total;
  r.count = mpz_class(std::to_string(total));
  r.stats.nodes = r.stats.oracle_calls = (std::uint64_t{1} << rows) - 1;
  return r;
}

CountResult count_teams_reference(const Structure& s, const FormulaPtr& f, const VarTuple& vars,
                                  CountOptions options) {
  const std::uint64_t rows = team_space(s, vars, options.budget, true);
  CountResult r;
  std::uint64_t total = 0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << rows); ++mask) {
    std::vector<Tuple> team;
    for (std::uint64_t c = 0; c < rows; ++c)
      if (mask >> c & 1) team.push_back(s.unrank(c, vars.size()));
    if (eval_reference(s, Team(vars, team), f, eval_options(options))) ++total;
  }
  r.count = mpz_class(std::to_string(total));
  r.stats.nodes = r.stats.oracle_calls = (std::uint64_t{1} << rows) - 1;
  return r;
}

namespace {

struct RelationLayout {
  std::vector<std::pair<std::size_t, std::size_t>> bits;  // (relation index, rank)
  std::size_t free_bits = 0;
  std::size_t exists_bits = 0;
  std::uint64_t individuals = 1;
};

Structure extend_structure(const Structure& s, const RelationQuery& q, RelationLayout* layout) {
  Structure ext = s;
  auto add = [&](const std::pair<std::string, std::size_t>& r, std::size_t& counter) {
    if (s.has_relation(r.first))
      throw PreconditionError("relation variable " + r.first + " clashes with the structure");
    const auto idx = ext.add_relation(r.first, r.second);
    const auto cells = checked_power(s.size(), r.second);
    for (std::size_t rank = 0; rank < cells; ++rank) {
      if (layout) layout->bits.emplace_back(idx, rank);
      ++counter;
    }
  };
  std::size_t free_bits = 0, exists_bits = 0;
  for (const auto& r : q.free_relations) add(r, free_bits);
  for (const auto& r : q.exists_relations) add(r, exists_bits);
  if (layout) {
    layout->free_bits = free_bits;
    layout->exists_bits = exists_bits;
    layout->individuals = checked_power(s.size(), q.free_individuals.size());
  }
  return ext;
}

RelationLayout validate_query(const Structure& s, const RelationQuery& q, std::uint64_t budget) {
  if (!q.body) throw PreconditionError("relation query without a body");
  if (!atom_usage(*q.body).first_order())
    throw PreconditionError("relation counting needs a first-order body");
  RelationLayout layout;
  extend_structure(s, q, &layout);
  if (layout.free_bits + layout.exists_bits >= 62)
    throw BudgetExceeded("too many relation bits to enumerate");
  const unsigned __int128 space = (static_cast<unsigned __int128>(1)
                                   << (layout.free_bits + layout.exists_bits)) *
                                  layout.individuals;
  if (space > budget)
    throw BudgetExceeded("relation search space exceeds the budget of " + std::to_string(budget));
  return layout;
}

void load_bits(Structure& ext, const RelationLayout& layout, std::size_t from, std::size_t count,
               std::uint64_t mask) {
  for (std::size_t b = 0; b < count; ++b) {
    const auto& [rel, rank] = layout.bits[from + b];
    ext.set_bit(rel, rank, mask >> b & 1);
  }
}

bool relation_tuple_holds(Structure& ext, Evaluator& ev, const RelationLayout& layout,
                          Code individual, std::uint64_t& calls) {
  for (std::uint64_t e = 0; e < (std::uint64_t{1} << layout.exists_bits); ++e) {
    load_bits(ext, layout, layout.free_bits, layout.exists_bits, e);
    ++calls;
    if (ev.tarski(individual)) return true;
  }
  return false;
}

}  // namespace

CountResult count_relations(const Structure& s, const RelationQuery& q, bool nonempty_only,
                            CountOptions options) {
  const RelationLayout layout = validate_query(s, q, options.budget);
  const auto masks = static_cast<std::int64_t>(std::uint64_t{1} << layout.free_bits);
  std::uint64_t total = 0, calls = 0;
  ErrorSlot errors;
#pragma omp parallel num_threads(thread_count(options)) reduction(+ : total, calls)
  {
    try {
      Structure ext = extend_structure(s, q, nullptr);
      Evaluator ev(ext, q.body, q.free_individuals, eval_options(options));
#pragma omp for schedule(dynamic, 16)
      for (std::int64_t mask = nonempty_only ? 1 : 0; mask < masks; ++mask) {
        if (errors.failed()) continue;
        try {
          load_bits(ext, layout, 0, layout.free_bits, static_cast<std::uint64_t>(mask));
          for (Code c = 0; c < layout.individuals; ++c)
            if (relation_tuple_holds(ext, ev, layout, c, calls)) ++total;
        } catch (...) {
          errors.capture();
        }
      }
    } catch (...) {
      errors.capture();
    }
  }
  errors.rethrow();
  CountResult r;
  r.count = mpz_class(std::to_string(total));
  r.stats.nodes = static_cast<std::uint64_t>(masks) * layout.individuals;
  r.stats.oracle_calls = calls;
  return r;
}

CountResult count_relations_serial(const Structure& s, const RelationQuery& q,
                                   bool nonempty_only, CountOptions options) {
  const RelationLayout layout = validate_query(s, q, options.budget);
  Structure ext = extend_structure(s, q, nullptr);
  Evaluator ev(ext, q.body, q.free_individuals, eval_options(options));
  CountResult r;
  std::uint64_t total = 0;
  for (std::uint64_t mask = nonempty_only ? 1 : 0; mask < (std::uint64_t{1} << layout.free_bits);
       ++mask) {
    load_bits(ext, layout, 0, layout.free_bits, mask);
    for (Code c = 0; c < layout.individuals; ++c) {
      ++r.stats.nodes;
      if (relation_tuple_holds(ext, ev, layout, c, r.stats.oracle_calls)) ++total;
    }
  }
  r.count = mpz_class(std::to_string(total));
  return r;
}

CountMode parse_count_mode(const std::string& text) {
  if (text == "all") return CountMode::All;
  if (text == "star") return CountMode::Star;
  if (text == "projected") return CountMode::Projected;
  throw PreconditionError("unknown count mode '" + text + "' (all|star|projected)");
}

const char* to_string(CountMode mode) {
  switch (mode) {
    case CountMode::All: return "all";
    case CountMode::Star: return "star";
    case CountMode::Projected: return "projected";
  }
  return "?";
}

namespace {

PartialAssignment free_assignment(const QBFormula& f, const std::vector<int>& free,
                                  std::uint64_t bits) {
  auto a = empty_assignment(f.num_vars());
  for (std::size_t i = 0; i < free.size(); ++i)
    a[static_cast<std::size_t>(free[i])] = static_cast<std::int8_t>(bits >> i & 1);
  return a;
}

bool all_zero_extends(const QBFormula& f) {
  auto a = free_assignment(f, f.free_vars(), 0);
  return satisfiable(f.clauses(), a);
}

void check_free_space(std::size_t free_count, std::uint64_t budget) {
  if (free_count >= 62 || (std::uint64_t{1} << free_count) > budget)
    throw BudgetExceeded("2^" + std::to_string(free_count) +
                         " free assignments exceed the budget of " + std::to_string(budget));
}

}  // namespace

CountResult count_assignments(const QBFormula& f, CountMode mode, CountOptions options) {
  CountResult r;
  if (mode == CountMode::All || f.bound_vars().empty()) {
    r.count = count_models(f.clauses(), f.num_vars(), empty_assignment(f.num_vars()));
    r.stats.oracle_calls = 1;
  } else {
    const auto free = f.free_vars();
    check_free_space(free.size(), options.budget);
    const auto space = static_cast<std::int64_t>(std::uint64_t{1} << free.size());
    std::uint64_t total = 0;
    ErrorSlot errors;
#pragma omp parallel for num_threads(thread_count(options)) schedule(dynamic, 64) \
    reduction(+ : total)
    for (std::int64_t bits = 0; bits < space; ++bits) {
      if (errors.failed()) continue;
      try {
        auto a = free_assignment(f, free, static_cast<std::uint64_t>(bits));
        if (satisfiable(f.clauses(), a)) ++total;
      } catch (...) {
        errors.capture();
      }
    }
    errors.rethrow();
    r.count = mpz_class(std::to_string(total));
    r.stats.nodes = r.stats.oracle_calls = static_cast<std::uint64_t>(space);
  }
  if (mode == CountMode::Star && all_zero_extends(f)) r.count -= 1;
  return r;
}

CountResult count_assignments_serial(const QBFormula& f, CountMode mode, CountOptions options) {
  CountResult r;
  const auto free = mode == CountMode::All ? [&] {
    std::vector<int> all;
    for (int v = 1; v <= f.num_vars(); ++v) all.push_back(v);
    return all;
  }() : f.free_vars();
  check_free_space(free.size(), options.budget);
  std::uint64_t total = 0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << free.size()); ++bits) {
    if (mode == CountMode::Star && bits == 0) continue;
    auto a = free_assignment(f, free, bits);
    ++r.stats.oracle_calls;
    if (satisfiable(f.clauses(), a)) ++total;
  }
  r.count = mpz_class(std::to_string(total));
  r.stats.nodes = r.stats.oracle_calls;
  return r;
}

namespace {

Evaluator inclusion_evaluator(const Structure& s, const FormulaPtr& f, const VarTuple& vars,
                              const CountOptions& options) {
  Evaluator ev(s, f, vars, eval_options(options));
  if (!ev.union_closed())
    throw PreconditionError("formula is not in inclusion logic: " + to_string(*f));
  return ev;
}

CodeTeam full_codes(std::uint64_t rows) {
  CodeTeam t(rows);
  for (Code c = 0; c < rows; ++c) t[c] = c;
  return t;
}

}  // namespace

CountResult count_inclusion_teams(const Structure& s, const FormulaPtr& f, const VarTuple& vars,
                                  CountOptions options) {
  Evaluator first = inclusion_evaluator(s, f, vars, options);
  const std::uint64_t rows = checked_power(s.size(), vars.size());
  CountResult r;
  const CodeTeam top = first.max_subteam(full_codes(rows));
  r.stats.oracle_calls = 1;
  if (top.empty()) return r;
  std::set<CodeTeam> visited{top};
  std::vector<CodeTeam> frontier{top};
  ErrorSlot errors;
  while (!frontier.empty()) {
    std::vector<std::vector<CodeTeam>> found(static_cast<std::size_t>(thread_count(options)));
    std::uint64_t calls = 0;
#pragma omp parallel num_threads(thread_count(options)) reduction(+ : calls)
    {
      try {
        Evaluator ev = inclusion_evaluator(s, f, vars, options);
        auto& mine = found[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(frontier.size()); ++i) {
          if (errors.failed()) continue;
          try {
            const CodeTeam& team = frontier[static_cast<std::size_t>(i)];
            for (std::size_t drop = 0; drop < team.size(); ++drop) {
              CodeTeam smaller = team;
              smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(drop));
              ++calls;
              CodeTeam m = ev.max_subteam(smaller);
              if (!m.empty()) mine.push_back(std::move(m));
            }
          } catch (...) {
            errors.capture();
          }
        }
      } catch (...) {
        errors.capture();
      }
    }
    errors.rethrow();
    r.stats.oracle_calls += calls;
    r.stats.nodes += frontier.size();
    frontier.clear();
    for (auto& bucket : found)
      for (auto& t : bucket)
        if (visited.insert(t).second) frontier.push_back(std::move(t));
    if (visited.size() > options.budget)
      throw BudgetExceeded("inclusion team enumeration exceeded the budget");
  }
  r.count = static_cast<unsigned long>(visited.size());
  return r;
}

bool inclusion_team_exists(const Structure& s, const FormulaPtr& f, const VarTuple& vars) {
  Evaluator ev = inclusion_evaluator(s, f, vars, {});
  return !ev.max_subteam(full_codes(checked_power(s.size(), vars.size()))).empty();
}

namespace {

struct DualHornCounter {
  const QBFormula& f;
  const std::vector<int>& free;
  std::uint64_t budget;
  CountStats stats;

  std::uint64_t count(PartialAssignment& a, std::size_t next) {
    if (next == free.size()) return 1;
    std::uint64_t total = 0;
    const auto v = static_cast<std::size_t>(free[next]);
    for (std::int8_t value : {std::int8_t{0}, std::int8_t{1}}) {
      a[v] = value;
      ++stats.oracle_calls;
      if (++stats.nodes > budget) throw BudgetExceeded("DualHorn counting exceeded the budget");
      if (dualhorn_sat(f.clauses(), f.num_vars(), a)) total += count(a, next + 1);
    }
    a[v] = -1;
    return total;
  }
};

}  // namespace

CountResult count_sigma1_dualhorn(const QBFormula& f, CountOptions options) {
  if (!classify(f).dual_horn) throw PreconditionError("matrix is not DualHorn");
  const auto free = f.free_vars();
  DualHornCounter counter{f, free, options.budget, {}};
  auto a = empty_assignment(f.num_vars());
  CountResult r;
  ++counter.stats.oracle_calls;
  if (dualhorn_sat(f.clauses(), f.num_vars(), a)) r.count = mpz_class(std::to_string(counter.count(a, 0)));
  r.stats = counter.stats;
  return r;
}

}  // namespace teamcount
