#include "teamcount/eval.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "teamcount/error.hpp"

namespace teamcount {

std::size_t AtomRegistry::register_atom(GeneralizedAtomDef def) {
  if (def.name.empty()) throw PreconditionError("generalized atom needs a name");
  if (index_.count(def.name)) throw PreconditionError("atom " + def.name + " already registered");
  if (!def.evaluator) throw PreconditionError("atom " + def.name + " has no evaluator");
  for (auto arity : def.type)
    if (arity == 0) throw ArityError("atom " + def.name + " has a zero arity in its type");
  index_[def.name] = defs_.size();
  defs_.push_back(std::move(def));
  return defs_.size() - 1;
}

const GeneralizedAtomDef* AtomRegistry::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &defs_[it->second];
}

std::vector<std::string> AtomRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : index_) out.push_back(name);
  return out;
}

AtomRegistry standard_registry() {
  AtomRegistry r;
  r.register_atom({"nonempty", {1}, [](std::size_t, std::span<const TupleSet> rels) {
                     return !rels[0].empty();
                   }});
  r.register_atom({"subset", {1, 1}, [](std::size_t, std::span<const TupleSet> rels) {
                     return std::includes(rels[1].begin(), rels[1].end(), rels[0].begin(),
                                          rels[0].end());
                   }});
  return r;
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

const GeneralizedAtomDef& lookup_atom(const EvalOptions& options, const std::string& name) {
  const GeneralizedAtomDef* def = options.registry ? options.registry->find(name) : nullptr;
  if (!def) throw PreconditionError("unregistered generalized atom " + name);
  return *def;
}

void check_gen_type(const GeneralizedAtomDef& def, const Formula& f) {
  if (def.type.size() != f.args.size())
    throw ArityError("atom " + def.name + " expects " + std::to_string(def.type.size()) +
                     " tuples");
  for (std::size_t j = 0; j < def.type.size(); ++j)
    if (def.type[j] != f.args[j].size())
      throw ArityError("atom " + def.name + " tuple " + std::to_string(j + 1) + " has arity " +
                       std::to_string(f.args[j].size()) + ", expected " +
                       std::to_string(def.type[j]));
}

void check_relation(const Structure& s, const Formula& f) {
  const auto arity = f.args[0].size();
  if (is_builtin_relation(f.name)) {
    const std::size_t parts = f.name == "<=" ? 2 : 3;
    if (arity == 0 || arity % parts) throw ArityError("bad arity for built-in " + f.name);
    return;
  }
  if (!s.has_relation(f.name)) throw PreconditionError("relation " + f.name + " not in structure");
  if (s.relation(f.name).arity != arity)
    throw ArityError("relation " + f.name + " used with arity " + std::to_string(arity));
}

bool is_sorted_unique(const CodeTeam& t) {
  return std::adjacent_find(t.begin(), t.end(), std::greater_equal<>()) == t.end();
}

CodeTeam sorted_unique(CodeTeam t) {
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

CodeTeam set_minus(const CodeTeam& a, const CodeTeam& b) {
  CodeTeam out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

CodeTeam set_union(const CodeTeam& a, const CodeTeam& b) {
  CodeTeam out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool contains(const CodeTeam& t, Code c) { return std::binary_search(t.begin(), t.end(), c); }

}  // namespace

struct Evaluator::Impl {
  struct Node {
    NodeKind kind;
    bool negated = false;
    std::size_t scope = 0;
    std::vector<std::vector<std::size_t>> args;  // variable positions per tuple
    std::size_t rel = kNone;
    std::string name;
    const GeneralizedAtomDef* gen = nullptr;
    std::size_t left = kNone, right = kNone;
    std::size_t var_pos = 0;
    bool append = false;
    bool flat = false, downward = false, union_closed = false, has_gen = false;
  };

  const Structure& s;
  std::size_t n;
  EvalOptions options;
  std::vector<Node> nodes;
  std::size_t root = 0;
  std::size_t root_scope = 0;
  VarTuple team_vars;
  std::vector<Code> pw;
  std::uint64_t steps = 0;
  std::vector<Element> scratch;

  Impl(const Structure& st, const FormulaPtr& f, const VarTuple& team_vars, EvalOptions opt)
      : s(st), n(st.size()), options(opt), team_vars(team_vars) {
    std::set<std::string> distinct(team_vars.begin(), team_vars.end());
    if (distinct.size() != team_vars.size())
      throw PreconditionError("team domain lists a variable twice");
    VarTuple scope = team_vars;
    root_scope = scope.size();
    std::size_t max_scope = scope.size();
    root = compile(*f, scope, max_scope);
    checked_power(n, max_scope);
    pw.resize(max_scope + 1);
    pw[0] = 1;
    for (std::size_t i = 1; i <= max_scope; ++i) pw[i] = pw[i - 1] * n;
  }

  std::size_t compile(const Formula& f, VarTuple& scope, std::size_t& max_scope) {
    Node node;
    node.kind = f.kind;
    node.negated = f.negated;
    node.scope = scope.size();
    node.name = f.name;
    auto position = [&](const std::string& v) {
      auto it = std::find(scope.begin(), scope.end(), v);
      if (it == scope.end()) throw UnboundVariableError("variable " + v + " is not bound");
      return static_cast<std::size_t>(it - scope.begin());
    };
    if (f.is_atom()) {
      for (const auto& tuple : f.args) {
        std::vector<std::size_t> pos;
        for (const auto& v : tuple) pos.push_back(position(v));
        checked_power(n, pos.size());
        node.args.push_back(std::move(pos));
      }
      switch (f.kind) {
        case NodeKind::Rel:
          check_relation(s, f);
          if (!is_builtin_relation(f.name)) node.rel = s.relation_index(f.name);
          break;
        case NodeKind::Gen:
          node.gen = &lookup_atom(options, f.name);
          check_gen_type(*node.gen, f);
          break;
        default: break;
      }
      const bool fo = f.kind == NodeKind::Rel || f.kind == NodeKind::Eq;
      node.flat = fo;
      node.downward = fo || f.kind == NodeKind::Dep;
      node.union_closed = fo || f.kind == NodeKind::Incl;
      node.has_gen = f.kind == NodeKind::Gen;
      nodes.push_back(std::move(node));
      return nodes.size() - 1;
    }
    if (f.is_quantifier()) {
      auto it = std::find(scope.begin(), scope.end(), f.name);
      if (it != scope.end()) {
        node.var_pos = static_cast<std::size_t>(it - scope.begin());
        node.left = compile(*f.left, scope, max_scope);
      } else {
        node.append = true;
        node.var_pos = scope.size();
        scope.push_back(f.name);
        max_scope = std::max(max_scope, scope.size());
        node.left = compile(*f.left, scope, max_scope);
        scope.pop_back();
      }
      const Node& body = nodes[node.left];
      node.flat = body.flat;
      node.downward = body.downward;
      node.union_closed = body.union_closed;
      node.has_gen = body.has_gen;
    } else {
      node.left = compile(*f.left, scope, max_scope);
      node.right = compile(*f.right, scope, max_scope);
      const Node &l = nodes[node.left], &r = nodes[node.right];
      node.flat = l.flat && r.flat;
      node.downward = l.downward && r.downward;
      node.union_closed = l.union_closed && r.union_closed;
      node.has_gen = l.has_gen || r.has_gen;
    }
    nodes.push_back(std::move(node));
    return nodes.size() - 1;
  }

  void tick(std::uint64_t amount = 1) {
    steps += amount;
    if (steps > options.budget)
      throw BudgetExceeded("evaluation exceeded the budget of " + std::to_string(options.budget) +
                           " steps");
  }

  Element digit(Code c, std::size_t pos, std::size_t scope) const {
    return static_cast<Element>((c / pw[scope - 1 - pos]) % n);
  }

  Code key(Code c, const std::vector<std::size_t>& pos, std::size_t scope) const {
    Code k = 0;
    for (auto p : pos) k = k * n + digit(c, p, scope);
    return k;
  }

  Code extend(const Node& q, Code c, Element a) const {
    if (q.append) return c * n + a;
    const Code stride = pw[q.scope - 1 - q.var_pos];
    return c - digit(c, q.var_pos, q.scope) * stride + a * stride;
  }

  // X[A/x], sorted.
  CodeTeam expand(const Node& q, const CodeTeam& team) const {
    CodeTeam out;
    out.reserve(team.size() * n);
    for (Code c : team)
      for (Element a = 0; a < n; ++a) out.push_back(extend(q, c, a));
    return q.append ? out : sorted_unique(std::move(out));
  }

  bool tarski(std::size_t i, Code c) {
    const Node& node = nodes[i];
    switch (node.kind) {
      case NodeKind::Rel: {
        scratch.clear();
        for (auto p : node.args[0]) scratch.push_back(digit(c, p, node.scope));
        const bool v = node.rel == kNone ? s.builtin_holds(node.name, scratch)
                                         : s.holds(node.rel, scratch);
        return v != node.negated;
      }
      case NodeKind::Eq:
        return (digit(c, node.args[0][0], node.scope) == digit(c, node.args[0][1], node.scope)) !=
               node.negated;
      case NodeKind::And: return tarski(node.left, c) && tarski(node.right, c);
      case NodeKind::Or: return tarski(node.left, c) || tarski(node.right, c);
      case NodeKind::Exists:
        for (Element a = 0; a < n; ++a)
          if (tarski(node.left, extend(node, c, a))) return true;
        return false;
      case NodeKind::Forall:
        for (Element a = 0; a < n; ++a)
          if (!tarski(node.left, extend(node, c, a))) return false;
        return true;
      default:
        throw PreconditionError("dependency atom in a first-order position");
    }
  }

  CodeTeam filter(std::size_t i, const CodeTeam& team) {
    CodeTeam out;
    for (Code c : team)
      if (tarski(i, c)) out.push_back(c);
    tick(team.size());
    return out;
  }

  bool sat(std::size_t i, const CodeTeam& team) {
    const Node& node = nodes[i];
    if (team.empty() && !node.has_gen) return true;
    tick();
    if (node.flat) {
      for (Code c : team)
        if (!tarski(i, c)) return false;
      return true;
    }
    switch (node.kind) {
      case NodeKind::Dep: return sat_dep(node, team);
      case NodeKind::Incl: return sat_incl(node, team);
      case NodeKind::Indep: return sat_indep(node, team);
      case NodeKind::Gen: return sat_gen(node, team);
      case NodeKind::And: return sat(node.left, team) && sat(node.right, team);
      case NodeKind::Or: return sat_or(node, team);
      case NodeKind::Exists: return sat_exists(i, team);
      case NodeKind::Forall: return sat(node.left, expand(node, team));
      default: break;
    }
    throw PreconditionError("unexpected node in team evaluation");
  }

  bool sat_dep(const Node& node, const CodeTeam& team) {
    std::vector<std::pair<Code, Element>> pairs;
    pairs.reserve(team.size());
    for (Code c : team)
      pairs.emplace_back(key(c, node.args[0], node.scope), digit(c, node.args[1][0], node.scope));
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t k = 1; k < pairs.size(); ++k)
      if (pairs[k].first == pairs[k - 1].first && pairs[k].second != pairs[k - 1].second)
        return false;
    return true;
  }

  bool sat_incl(const Node& node, const CodeTeam& team) {
    CodeTeam ys;
    for (Code c : team) ys.push_back(key(c, node.args[1], node.scope));
    ys = sorted_unique(std::move(ys));
    for (Code c : team)
      if (!contains(ys, key(c, node.args[0], node.scope))) return false;
    return true;
  }

  bool sat_indep(const Node& node, const CodeTeam& team) {
    // args: ȳ, x̄, z̄. For every x-value, all (y, z) combinations must occur.
    std::set<std::tuple<Code, Code, Code>> triples;
    std::map<Code, std::pair<std::set<Code>, std::set<Code>>> groups;
    for (Code c : team) {
      const Code y = key(c, node.args[0], node.scope);
      const Code x = key(c, node.args[1], node.scope);
      const Code z = key(c, node.args[2], node.scope);
      triples.emplace(x, y, z);
      groups[x].first.insert(y);
      groups[x].second.insert(z);
    }
    for (const auto& [x, yz] : groups)
      for (Code y : yz.first)
        for (Code z : yz.second)
          if (!triples.count({x, y, z})) return false;
    return true;
  }

  bool sat_gen(const Node& node, const CodeTeam& team) {
    std::vector<TupleSet> rels;
    for (const auto& pos : node.args) {
      TupleSet t;
      for (Code c : team) {
        Tuple row;
        for (auto p : pos) row.push_back(digit(c, p, node.scope));
        t.push_back(std::move(row));
      }
      std::sort(t.begin(), t.end());
      t.erase(std::unique(t.begin(), t.end()), t.end());
      rels.push_back(std::move(t));
    }
    return node.gen->evaluator(n, rels);
  }

  // Is there Z with rest ⊆ Z ⊆ team and sat(i, Z)?
  bool exists_superset(std::size_t i, const CodeTeam& team, const CodeTeam& rest) {
    const Node& node = nodes[i];
    if (node.downward) return sat(i, rest);
    if (node.union_closed) {
      const CodeTeam m = maxsub(i, team);
      return std::includes(m.begin(), m.end(), rest.begin(), rest.end());
    }
    const CodeTeam optional = set_minus(team, rest);
    if (optional.size() >= 63) throw BudgetExceeded("team too large for subteam enumeration");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << optional.size()); ++mask) {
      tick();
      CodeTeam z = rest;
      for (std::size_t b = 0; b < optional.size(); ++b)
        if (mask >> b & 1) z.push_back(optional[b]);
      if (sat(i, sorted_unique(std::move(z)))) return true;
    }
    return false;
  }

  bool sat_or(const Node& node, const CodeTeam& team) {
    const Node &l = nodes[node.left], &r = nodes[node.right];
    if (l.flat) return exists_superset(node.right, team, set_minus(team, filter(node.left, team)));
    if (r.flat) return exists_superset(node.left, team, set_minus(team, filter(node.right, team)));
    if (l.union_closed && r.union_closed)
      return set_union(maxsub(node.left, team), maxsub(node.right, team)).size() == team.size();
    if (l.union_closed)
      return exists_superset(node.right, team, set_minus(team, maxsub(node.left, team)));
    if (r.union_closed)
      return exists_superset(node.left, team, set_minus(team, maxsub(node.right, team)));
    if (l.downward && r.downward) {
      CodeTeam left, right;
      return partition(node, team, 0, left, right);
    }
    if (team.size() >= 63) throw BudgetExceeded("team too large for cover enumeration");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << team.size()); ++mask) {
      tick();
      CodeTeam y, rest;
      for (std::size_t b = 0; b < team.size(); ++b) (mask >> b & 1 ? y : rest).push_back(team[b]);
      if (sat(node.left, y) && exists_superset(node.right, team, rest)) return true;
    }
    return false;
  }

  // Both disjuncts downward closed: a partition of the team suffices.
  bool partition(const Node& node, const CodeTeam& team, std::size_t k, CodeTeam& left,
                 CodeTeam& right) {
    if (k == team.size()) return true;
    tick();
    for (int side = 0; side < 2; ++side) {
      CodeTeam& part = side ? right : left;
      part.push_back(team[k]);
      if (sat(side ? node.right : node.left, part) && partition(node, team, k + 1, left, right))
        return true;
      part.pop_back();
    }
    return false;
  }

  void conjuncts(std::size_t i, std::vector<std::size_t>& out) const {
    if (nodes[i].kind == NodeKind::And) {
      conjuncts(nodes[i].left, out);
      conjuncts(nodes[i].right, out);
    } else {
      out.push_back(i);
    }
  }

  bool sat_exists(std::size_t i, const CodeTeam& team) {
    const Node& node = nodes[i];
    const Node& body = nodes[node.left];
    if (body.flat) {
      for (Code c : team) {
        bool found = false;
        for (Element a = 0; a < n && !found; ++a) found = tarski(node.left, extend(node, c, a));
        if (!found) return false;
      }
      return true;
    }
    if (body.union_closed) {
      const CodeTeam m = maxsub(node.left, expand(node, team));
      for (Code c : team) {
        bool found = false;
        for (Element a = 0; a < n && !found; ++a) found = contains(m, extend(node, c, a));
        if (!found) return false;
      }
      return true;
    }
    if (body.downward) return sat_exists_block(i, team);
    return sat_exists_general(node, team);
  }

  // A block ∃x₁..∃x_j over a downward-closed body: one value tuple per row
  // suffices, so search over choice functions with partial-team pruning.
  bool sat_exists_block(std::size_t i, const CodeTeam& team) {
    std::vector<std::size_t> chain{i};
    while (nodes[nodes[chain.back()].left].kind == NodeKind::Exists)
      chain.push_back(nodes[chain.back()].left);
    const std::size_t inner = nodes[chain.back()].left;
    std::vector<std::size_t> parts, filters, checks;
    conjuncts(inner, parts);
    for (auto p : parts) (nodes[p].flat ? filters : checks).push_back(p);

    std::vector<std::vector<Code>> candidates(team.size());
    for (std::size_t r = 0; r < team.size(); ++r) {
      std::vector<Code> frontier{team[r]};
      for (auto q : chain) {
        std::vector<Code> next;
        for (Code c : frontier)
          for (Element a = 0; a < n; ++a) next.push_back(extend(nodes[q], c, a));
        frontier = std::move(next);
      }
      tick(frontier.size());
      for (Code c : frontier) {
        bool ok = true;
        for (auto f : filters)
          if (!(ok = tarski(f, c))) break;
        if (ok) candidates[r].push_back(c);
      }
      if (candidates[r].empty()) return false;
    }
    if (checks.empty()) return true;
    std::vector<std::size_t> order(team.size());
    for (std::size_t r = 0; r < order.size(); ++r) order[r] = r;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      return candidates[a].size() < candidates[b].size();
    });
    std::vector<Code> chosen;
    return choose(order, candidates, checks, 0, chosen);
  }

  bool choose(const std::vector<std::size_t>& order, const std::vector<std::vector<Code>>& cands,
              const std::vector<std::size_t>& checks, std::size_t k, std::vector<Code>& chosen) {
    if (k == order.size()) return true;
    for (Code c : cands[order[k]]) {
      tick();
      chosen.push_back(c);
      const CodeTeam partial = sorted_unique(chosen);
      bool ok = true;
      for (auto f : checks)
        if (!(ok = sat(f, partial))) break;
      if (ok && choose(order, cands, checks, k + 1, chosen)) return true;
      chosen.pop_back();
    }
    return false;
  }

  bool sat_exists_general(const Node& node, const CodeTeam& team) {
    if (n >= 63) throw BudgetExceeded("domain too large for supplementing-function enumeration");
    const std::uint64_t limit = (std::uint64_t{1} << n) - 1;
    std::vector<std::uint64_t> masks(team.size(), 1);
    while (true) {
      tick();
      CodeTeam ext;
      for (std::size_t r = 0; r < team.size(); ++r)
        for (Element a = 0; a < n; ++a)
          if (masks[r] >> a & 1) ext.push_back(extend(node, team[r], a));
      if (sat(node.left, sorted_unique(std::move(ext)))) return true;
      std::size_t r = 0;
      while (r < masks.size() && masks[r] == limit) masks[r++] = 1;
      if (r == masks.size()) return false;
      ++masks[r];
    }
  }

  CodeTeam maxsub(std::size_t i, const CodeTeam& team) {
    const Node& node = nodes[i];
    if (!node.union_closed)
      throw PreconditionError("maximal subteams need a formula of inclusion logic");
    if (team.empty()) return team;
    tick();
    if (node.flat) return filter(i, team);
    switch (node.kind) {
      case NodeKind::Incl: {
        CodeTeam y = team;
        while (true) {
          CodeTeam ys;
          for (Code c : y) ys.push_back(key(c, node.args[1], node.scope));
          ys = sorted_unique(std::move(ys));
          CodeTeam kept;
          for (Code c : y)
            if (contains(ys, key(c, node.args[0], node.scope))) kept.push_back(c);
          if (kept.size() == y.size()) return kept;
          y = std::move(kept);
        }
      }
      case NodeKind::And: {
        CodeTeam y = team;
        while (true) {
          CodeTeam next = maxsub(node.right, maxsub(node.left, y));
          if (next.size() == y.size()) return next;
          y = std::move(next);
        }
      }
      case NodeKind::Or: return set_union(maxsub(node.left, team), maxsub(node.right, team));
      case NodeKind::Exists: {
        const CodeTeam m = maxsub(node.left, expand(node, team));
        CodeTeam out;
        for (Code c : team)
          for (Element a = 0; a < n; ++a)
            if (contains(m, extend(node, c, a))) {
              out.push_back(c);
              break;
            }
        return out;
      }
      case NodeKind::Forall: {
        CodeTeam r = team;
        while (!r.empty()) {
          const CodeTeam e = expand(node, r);
          const CodeTeam m = maxsub(node.left, e);
          if (m.size() == e.size()) return r;
          CodeTeam kept;
          for (Code c : r) {
            bool all = true;
            for (Element a = 0; a < n && all; ++a) all = contains(m, extend(node, c, a));
            if (all) kept.push_back(c);
          }
          r = std::move(kept);
        }
        return r;
      }
      default: break;
    }
    throw PreconditionError("unexpected node in maximal-subteam computation");
  }
};

Evaluator::Evaluator(const Structure& s, const FormulaPtr& f, const VarTuple& team_vars,
                     EvalOptions options)
    : impl_(std::make_unique<Impl>(s, f, team_vars, options)) {}
Evaluator::~Evaluator() = default;
Evaluator::Evaluator(Evaluator&&) noexcept = default;
Evaluator& Evaluator::operator=(Evaluator&&) noexcept = default;

bool Evaluator::satisfies(const CodeTeam& team) {
  if (!is_sorted_unique(team)) throw PreconditionError("team codes must be sorted and unique");
  impl_->steps = 0;
  return impl_->sat(impl_->root, team);
}

bool Evaluator::satisfies(const Team& team) { return satisfies(encode(team)); }

CodeTeam Evaluator::max_subteam(const CodeTeam& team) {
  if (!is_sorted_unique(team)) throw PreconditionError("team codes must be sorted and unique");
  impl_->steps = 0;
  return impl_->maxsub(impl_->root, team);
}

Team Evaluator::max_subteam(const Team& team) { return decode(max_subteam(encode(team))); }

bool Evaluator::tarski(Code assignment) {
  if (!impl_->nodes[impl_->root].flat)
    throw PreconditionError("pointwise evaluation needs a first-order formula");
  return impl_->tarski(impl_->root, assignment);
}

Code Evaluator::encode(const Tuple& row) const {
  if (row.size() != impl_->root_scope) throw ArityError("row width differs from team domain");
  Code c = 0;
  for (auto e : row) {
    if (e >= impl_->n) throw PreconditionError("team value out of domain");
    c = c * impl_->n + e;
  }
  return c;
}

Tuple Evaluator::decode(Code c) const {
  Tuple t(impl_->root_scope);
  for (std::size_t p = 0; p < t.size(); ++p) t[p] = impl_->digit(c, p, impl_->root_scope);
  return t;
}

CodeTeam Evaluator::encode(const Team& team) const {
  CodeTeam out;
  for (const auto& r : team.rows()) out.push_back(encode(r));
  return sorted_unique(std::move(out));
}

Team Evaluator::decode(const CodeTeam& team) const {
  std::vector<Tuple> rows;
  for (Code c : team) rows.push_back(decode(c));
  return Team(impl_->team_vars, std::move(rows));
}

bool Evaluator::downward_closed() const { return impl_->nodes[impl_->root].downward; }
bool Evaluator::union_closed() const { return impl_->nodes[impl_->root].union_closed; }
bool Evaluator::first_order() const { return impl_->nodes[impl_->root].flat; }
std::uint64_t Evaluator::steps() const { return impl_->steps; }

}  // namespace teamcount
