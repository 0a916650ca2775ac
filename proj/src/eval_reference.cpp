#include <algorithm>
#include <set>

#include "teamcount/error.hpp"
#include "teamcount/eval.hpp"

namespace teamcount {

namespace {

Element value(const Assignment& a, const std::string& v) {
  auto it = a.find(v);
  if (it == a.end()) throw UnboundVariableError("variable " + v + " is not bound");
  return it->second;
}

Tuple values(const Assignment& a, const VarTuple& vars) {
  Tuple t;
  for (const auto& v : vars) t.push_back(value(a, v));
  return t;
}

using RefTeam = std::vector<Assignment>;

class Reference {
 public:
  Reference(const Structure& s, EvalOptions options) : s_(s), options_(options) {}

  bool sat(const Formula& f, const RefTeam& team) {
    tick();
    switch (f.kind) {
      case NodeKind::Rel:
      case NodeKind::Eq:
        return std::all_of(team.begin(), team.end(),
                           [&](const Assignment& a) { return eval_tarski(s_, a, f); });
      case NodeKind::Dep:
        for (const auto& a : team)
          for (const auto& b : team)
            if (values(a, f.args[0]) == values(b, f.args[0]) &&
                value(a, f.args[1][0]) != value(b, f.args[1][0]))
              return false;
        return true;
      case NodeKind::Incl:
        for (const auto& a : team) {
          const Tuple want = values(a, f.args[0]);
          if (std::none_of(team.begin(), team.end(),
                           [&](const Assignment& b) { return values(b, f.args[1]) == want; }))
            return false;
        }
        return true;
      case NodeKind::Indep: {
        const VarTuple &ys = f.args[0], &xs = f.args[1], &zs = f.args[2];
        for (const auto& a : team)
          for (const auto& b : team) {
            if (values(a, xs) != values(b, xs)) continue;
            const bool witness = std::any_of(team.begin(), team.end(), [&](const Assignment& c) {
              return values(c, xs) == values(a, xs) && values(c, ys) == values(a, ys) &&
                     values(c, zs) == values(b, zs);
            });
            if (!witness) return false;
          }
        return true;
      }
      case NodeKind::Gen: {
        const GeneralizedAtomDef* def = options_.registry ? options_.registry->find(f.name) : nullptr;
        if (!def) throw PreconditionError("unregistered generalized atom " + f.name);
        if (def->type.size() != f.args.size()) throw ArityError("atom " + f.name + " arity mismatch");
        std::vector<TupleSet> rels;
        for (std::size_t j = 0; j < f.args.size(); ++j) {
          if (def->type[j] != f.args[j].size()) throw ArityError("atom " + f.name + " arity mismatch");
          std::set<Tuple> r;
          for (const auto& a : team) r.insert(values(a, f.args[j]));
          rels.emplace_back(r.begin(), r.end());
        }
        return def->evaluator(s_.size(), rels);
      }
      case NodeKind::And: return sat(*f.left, team) && sat(*f.right, team);
      case NodeKind::Or: return sat_or(f, team);
      case NodeKind::Exists: return sat_exists(f, team);
      case NodeKind::Forall: {
        RefTeam out;
        for (const auto& a : team)
          for (Element e = 0; e < s_.size(); ++e) {
            Assignment b = a;
            b[f.name] = e;
            out.push_back(std::move(b));
          }
        return sat(*f.left, normalize(std::move(out)));
      }
    }
    return false;
  }

 private:
  const Structure& s_;
  EvalOptions options_;
  std::uint64_t steps_ = 0;

  void tick() {
    if (++steps_ > options_.budget)
      throw BudgetExceeded("reference evaluation exceeded the budget of " +
                           std::to_string(options_.budget) + " steps");
  }

  static RefTeam normalize(RefTeam t) {
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
  }

  // Every cover Y ∪ Z = X: each member goes to Y, to Z, or to both.
  bool sat_or(const Formula& f, const RefTeam& team) {
    std::vector<int> side(team.size(), 0);
    while (true) {
      tick();
      RefTeam y, z;
      for (std::size_t i = 0; i < team.size(); ++i) {
        if (side[i] != 1) y.push_back(team[i]);
        if (side[i] != 0) z.push_back(team[i]);
      }
      if (sat(*f.left, y) && sat(*f.right, z)) return true;
      std::size_t i = 0;
      while (i < side.size() && side[i] == 2) side[i++] = 0;
      if (i == side.size()) return false;
      ++side[i];
    }
  }

  // Every supplementing function F: X → P(A) \ {∅}.
  bool sat_exists(const Formula& f, const RefTeam& team) {
    const std::size_t n = s_.size();
    if (n >= 63) throw BudgetExceeded("domain too large");
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    std::vector<std::uint64_t> sets(team.size(), 1);
    while (true) {
      tick();
      RefTeam out;
      for (std::size_t i = 0; i < team.size(); ++i)
        for (Element e = 0; e < n; ++e)
          if (sets[i] >> e & 1) {
            Assignment b = team[i];
            b[f.name] = e;
            out.push_back(std::move(b));
          }
      if (sat(*f.left, normalize(std::move(out)))) return true;
      std::size_t i = 0;
      while (i < sets.size() && sets[i] == full) sets[i++] = 1;
      if (i == sets.size()) return false;
      ++sets[i];
    }
  }
};

RefTeam to_reference(const Team& team) {
  RefTeam out;
  for (const auto& row : team.rows()) {
    Assignment a;
    for (std::size_t i = 0; i < row.size(); ++i) a[team.vars()[i]] = row[i];
    out.push_back(std::move(a));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

bool eval_tarski(const Structure& s, const Assignment& a, const Formula& f) {
  switch (f.kind) {
    case NodeKind::Rel: {
      const Tuple t = values(a, f.args[0]);
      return s.holds(f.name, t) != f.negated;
    }
    case NodeKind::Eq:
      return (value(a, f.args[0][0]) == value(a, f.args[0][1])) != f.negated;
    case NodeKind::And: return eval_tarski(s, a, *f.left) && eval_tarski(s, a, *f.right);
    case NodeKind::Or: return eval_tarski(s, a, *f.left) || eval_tarski(s, a, *f.right);
    case NodeKind::Exists:
    case NodeKind::Forall: {
      Assignment b = a;
      const bool universal = f.kind == NodeKind::Forall;
      for (Element e = 0; e < s.size(); ++e) {
        b[f.name] = e;
        if (eval_tarski(s, b, *f.left) != universal) return !universal;
      }
      return universal;
    }
    default:
      throw PreconditionError("Tarskian evaluation met a dependency atom: " + to_string(f));
  }
}

bool eval(const Structure& s, const Team& team, const FormulaPtr& f, EvalOptions options) {
  Evaluator ev(s, f, team.vars(), options);
  return ev.satisfies(team);
}

bool eval_reference(const Structure& s, const Team& team, const FormulaPtr& f,
                    EvalOptions options) {
  for (const auto& v : free_variables(*f))
    if (std::find(team.vars().begin(), team.vars().end(), v) == team.vars().end())
      throw UnboundVariableError("variable " + v + " is not bound");
  return Reference(s, options).sat(*f, to_reference(team));
}

Team max_subteam(const Structure& s, const Team& team, const FormulaPtr& f) {
  Evaluator ev(s, f, team.vars());
  return ev.max_subteam(team);
}

Team max_subteam_reference(const Structure& s, const Team& team, const FormulaPtr& f,
                           EvalOptions options) {
  if (team.size() >= 31) throw BudgetExceeded("team too large for subteam enumeration");
  Team out(team.vars());
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << team.size()); ++mask) {
    std::vector<Tuple> rows;
    for (std::size_t b = 0; b < team.size(); ++b)
      if (mask >> b & 1) rows.push_back(team.rows()[b]);
    Team sub(team.vars(), rows);
    if (eval_reference(s, sub, f, options))
      for (auto& r : rows) out.insert(std::move(r));
  }
  return out;
}

}  // namespace teamcount
