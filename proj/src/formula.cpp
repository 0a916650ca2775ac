#include "teamcount/formula.hpp"

#include <algorithm>
#include <functional>

#include "teamcount/error.hpp"

namespace teamcount {

namespace {

FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

std::string join(const VarTuple& vars, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += sep;
    out += vars[i];
  }
  return out;
}

bool is_binary(const Formula& f) { return f.kind == NodeKind::And || f.kind == NodeKind::Or; }

void print(const Formula& f, std::string& out);

void print_child(const Formula& child, NodeKind parent, bool right, std::string& out) {
  const bool parens = child.is_quantifier() ||
                      (is_binary(child) && (child.kind != parent || right));
  if (parens) out += '(';
  print(child, out);
  if (parens) out += ')';
}

void print(const Formula& f, std::string& out) {
  switch (f.kind) {
    case NodeKind::Rel:
      if (f.negated) out += '!';
      out += f.name + "(" + join(f.args[0], ",") + ")";
      return;
    case NodeKind::Eq:
      out += f.args[0][0] + (f.negated ? " != " : " = ") + f.args[0][1];
      return;
    case NodeKind::Dep:
      out += "dep(" + join(f.args[0], ",") + ";" + f.args[1][0] + ")";
      return;
    case NodeKind::Indep:
      out += "ind(" + join(f.args[0], ",") + "|" + join(f.args[1], ",") + "|" +
             join(f.args[2], ",") + ")";
      return;
    case NodeKind::Incl:
      out += "inc(" + join(f.args[0], ",") + ";" + join(f.args[1], ",") + ")";
      return;
    case NodeKind::Gen: {
      out += "atom " + f.name + "(";
      for (std::size_t i = 0; i < f.args.size(); ++i) {
        if (i) out += ';';
        out += join(f.args[i], ",");
      }
      out += ')';
      return;
    }
    case NodeKind::And:
    case NodeKind::Or:
      print_child(*f.left, f.kind, false, out);
      out += f.kind == NodeKind::And ? " & " : " | ";
      print_child(*f.right, f.kind, true, out);
      return;
    case NodeKind::Exists:
    case NodeKind::Forall:
      out += f.kind == NodeKind::Exists ? "E " : "A ";
      out += f.name + ". ";
      print(*f.left, out);
      return;
  }
}

void collect_free(const Formula& f, std::set<std::string>& bound, VarTuple& order,
                  std::set<std::string>& seen) {
  auto note = [&](const std::string& v) {
    if (!bound.count(v) && seen.insert(v).second) order.push_back(v);
  };
  if (f.is_atom()) {
    for (const auto& tuple : f.args)
      for (const auto& v : tuple) note(v);
    return;
  }
  if (is_binary(f)) {
    collect_free(*f.left, bound, order, seen);
    collect_free(*f.right, bound, order, seen);
    return;
  }
  const bool fresh = bound.insert(f.name).second;
  collect_free(*f.left, bound, order, seen);
  if (fresh) bound.erase(f.name);
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  for (std::size_t i = 1;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (!taken.count(candidate)) return candidate;
  }
}

}  // namespace

FormulaPtr rel(std::string name, VarTuple args, bool negated) {
  return make({NodeKind::Rel, negated, std::move(name), {std::move(args)}, nullptr, nullptr});
}

FormulaPtr eq(std::string x, std::string y, bool negated) {
  return make({NodeKind::Eq, negated, {}, {{std::move(x), std::move(y)}}, nullptr, nullptr});
}

FormulaPtr dep(VarTuple determiners, std::string dependent) {
  return make({NodeKind::Dep, false, {}, {std::move(determiners), {std::move(dependent)}},
               nullptr, nullptr});
}

FormulaPtr indep(VarTuple ys, VarTuple xs, VarTuple zs) {
  return make({NodeKind::Indep, false, {}, {std::move(ys), std::move(xs), std::move(zs)},
               nullptr, nullptr});
}

FormulaPtr incl(VarTuple xs, VarTuple ys) {
  if (xs.size() != ys.size())
    throw ArityError("inclusion atom needs tuples of equal length");
  return make({NodeKind::Incl, false, {}, {std::move(xs), std::move(ys)}, nullptr, nullptr});
}

FormulaPtr gen_atom(std::string name, std::vector<VarTuple> tuples) {
  return make({NodeKind::Gen, false, std::move(name), std::move(tuples), nullptr, nullptr});
}

FormulaPtr conj(FormulaPtr a, FormulaPtr b) {
  return make({NodeKind::And, false, {}, {}, std::move(a), std::move(b)});
}

FormulaPtr disj(FormulaPtr a, FormulaPtr b) {
  return make({NodeKind::Or, false, {}, {}, std::move(a), std::move(b)});
}

FormulaPtr conj(const std::vector<FormulaPtr>& parts) {
  if (parts.empty()) throw PreconditionError("empty conjunction");
  FormulaPtr acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = conj(acc, parts[i]);
  return acc;
}

FormulaPtr disj(const std::vector<FormulaPtr>& parts) {
  if (parts.empty()) throw PreconditionError("empty disjunction");
  FormulaPtr acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = disj(acc, parts[i]);
  return acc;
}

FormulaPtr exists(std::string var, FormulaPtr body) {
  return make({NodeKind::Exists, false, std::move(var), {}, std::move(body), nullptr});
}

FormulaPtr forall(std::string var, FormulaPtr body) {
  return make({NodeKind::Forall, false, std::move(var), {}, std::move(body), nullptr});
}

FormulaPtr exists(const VarTuple& vars, FormulaPtr body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = exists(*it, std::move(body));
  return body;
}

FormulaPtr forall(const VarTuple& vars, FormulaPtr body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = forall(*it, std::move(body));
  return body;
}

bool is_builtin_relation(const std::string& name) {
  return name == "<=" || name == "+" || name == "*";
}

AtomUsage atom_usage(const Formula& f) {
  AtomUsage usage;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    switch (g.kind) {
      case NodeKind::Dep: usage.dependence = true; return;
      case NodeKind::Indep: usage.independence = true; return;
      case NodeKind::Incl: usage.inclusion = true; return;
      case NodeKind::Gen: usage.generalized = true; return;
      case NodeKind::Rel:
      case NodeKind::Eq: return;
      default:
        walk(*g.left);
        if (g.right) walk(*g.right);
    }
  };
  walk(f);
  return usage;
}

VarTuple free_variables_ordered(const Formula& f) {
  std::set<std::string> bound, seen;
  VarTuple order;
  collect_free(f, bound, order, seen);
  return order;
}

std::set<std::string> free_variables(const Formula& f) {
  auto order = free_variables_ordered(f);
  return {order.begin(), order.end()};
}

std::set<std::string> all_variables(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.is_atom()) {
      for (const auto& t : g.args) out.insert(t.begin(), t.end());
      return;
    }
    if (g.is_quantifier()) out.insert(g.name);
    walk(*g.left);
    if (g.right) walk(*g.right);
  };
  walk(f);
  return out;
}

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a.kind != b.kind || a.negated != b.negated || a.name != b.name || a.args != b.args)
    return false;
  if (bool(a.left) != bool(b.left) || bool(a.right) != bool(b.right)) return false;
  if (a.left && !structurally_equal(*a.left, *b.left)) return false;
  if (a.right && !structurally_equal(*a.right, *b.right)) return false;
  return true;
}

std::string to_string(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

FormulaPtr negate(const Formula& f) {
  switch (f.kind) {
    case NodeKind::Rel: return rel(f.name, f.args[0], !f.negated);
    case NodeKind::Eq: return eq(f.args[0][0], f.args[0][1], !f.negated);
    case NodeKind::And: return disj(negate(*f.left), negate(*f.right));
    case NodeKind::Or: return conj(negate(*f.left), negate(*f.right));
    case NodeKind::Exists: return forall(f.name, negate(*f.left));
    case NodeKind::Forall: return exists(f.name, negate(*f.left));
    default:
      throw PreconditionError("negation is only defined on first-order formulas: " +
                              to_string(f));
  }
}

FormulaPtr rename_free(const FormulaPtr& f, const std::map<std::string, std::string>& renaming) {
  if (renaming.empty()) return f;
  const Formula& g = *f;
  if (g.is_atom()) {
    Formula copy = g;
    for (auto& tuple : copy.args)
      for (auto& v : tuple)
        if (auto it = renaming.find(v); it != renaming.end()) v = it->second;
    return make(std::move(copy));
  }
  if (is_binary(g)) {
    auto l = rename_free(g.left, renaming);
    auto r = rename_free(g.right, renaming);
    return g.kind == NodeKind::And ? conj(l, r) : disj(l, r);
  }
  auto inner = renaming;
  inner.erase(g.name);
  std::string var = g.name;
  const bool captured = std::any_of(inner.begin(), inner.end(),
                                    [&](const auto& kv) { return kv.second == var; });
  if (captured) {
    std::set<std::string> taken = all_variables(*g.left);
    for (const auto& [k, v] : inner) {
      taken.insert(k);
      taken.insert(v);
    }
    var = fresh_name(g.name, taken);
    inner[g.name] = var;
  }
  auto body = rename_free(g.left, inner);
  return g.kind == NodeKind::Exists ? exists(var, body) : forall(var, body);
}

std::map<std::string, std::size_t> relation_symbols(const Formula& f) {
  std::map<std::string, std::size_t> out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.kind == NodeKind::Rel) {
      if (!is_builtin_relation(g.name)) out.emplace(g.name, g.args[0].size());
      return;
    }
    if (g.is_atom()) return;
    walk(*g.left);
    if (g.right) walk(*g.right);
  };
  walk(f);
  return out;
}

}  // namespace teamcount
