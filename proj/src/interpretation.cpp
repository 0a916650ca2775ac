#include "teamcount/interpretation.hpp"

#include <map>
#include <set>

#include "teamcount/error.hpp"
#include "teamcount/eval.hpp"

namespace teamcount {

Vocabulary FOInterpretation::target_vocabulary() const {
  Vocabulary v;
  for (const auto& r : relations) v[r.name] = r.arity;
  return v;
}

Vocabulary FOInterpretation::source_vocabulary() const {
  Vocabulary v;
  auto merge = [&](const FormulaPtr& f) {
    if (!f) return;
    for (const auto& [name, arity] : relation_symbols(*f)) {
      auto [it, fresh] = v.emplace(name, arity);
      if (!fresh && it->second != arity)
        throw ArityError("relation " + name + " used with two arities");
    }
  };
  merge(domain);
  for (const auto& r : relations) merge(r.formula);
  return v;
}

namespace {

void check_formula(const FormulaPtr& f, const VarTuple& vars, const std::string& what) {
  if (!f) return;
  if (!atom_usage(*f).first_order())
    throw PreconditionError(what + " must be first-order: " + to_string(*f));
  for (const auto& v : free_variables(*f))
    if (std::find(vars.begin(), vars.end(), v) == vars.end())
      throw PreconditionError(what + " has an unexpected free variable " + v);
}

}  // namespace

void validate(const FOInterpretation& interp) {
  if (interp.k == 0) throw PreconditionError("interpretation width must be positive");
  if (interp.domain_vars.size() != interp.k)
    throw ArityError("domain formula needs exactly k variables");
  check_formula(interp.domain, interp.domain_vars, "domain formula");
  std::set<std::string> names;
  for (const auto& r : interp.relations) {
    if (is_builtin_relation(r.name) || !names.insert(r.name).second)
      throw PreconditionError("bad target relation name " + r.name);
    if (r.vars.size() != interp.k * r.arity)
      throw ArityError("relation " + r.name + " needs k·arity variables");
    if (!r.formula) throw PreconditionError("relation " + r.name + " has no defining formula");
    check_formula(r.formula, r.vars, "formula for " + r.name);
  }
  interp.source_vocabulary();
}

FOInterpretation identity_interpretation(const Vocabulary& vocabulary) {
  FOInterpretation interp;
  interp.domain_vars = {"x"};
  for (const auto& [name, arity] : vocabulary) {
    VarTuple vars;
    for (std::size_t i = 0; i < arity; ++i) vars.push_back("x" + std::to_string(i + 1));
    interp.relations.push_back({name, arity, vars, rel(name, vars)});
  }
  return interp;
}

VarTuple block_vars(const std::string& var, std::size_t k) {
  VarTuple out;
  for (std::size_t i = 1; i <= k; ++i) out.push_back(var + "#" + std::to_string(i));
  return out;
}

VarTuple block_vars(const VarTuple& vars, std::size_t k) {
  VarTuple out;
  for (const auto& v : vars) {
    const auto b = block_vars(v, k);
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

namespace {

void check_source(const FOInterpretation& interp, const Structure& source) {
  validate(interp);
  for (const auto& [name, arity] : interp.source_vocabulary()) {
    if (!source.has_relation(name))
      throw PreconditionError("source structure lacks relation " + name);
    if (source.relation(name).arity != arity)
      throw ArityError("relation " + name + " has arity " +
                       std::to_string(source.relation(name).arity) + " in the source structure");
  }
}

std::string tuple_name(const Tuple& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "," : "") + std::to_string(t[i]);
  return out + ")";
}

}  // namespace

std::vector<Tuple> interpretation_domain(const FOInterpretation& interp, const Structure& source) {
  check_source(interp, source);
  const std::uint64_t count = checked_power(source.size(), interp.k);
  std::vector<Tuple> out;
  for (std::uint64_t r = 0; r < count; ++r) {
    Tuple t = source.unrank(r, interp.k);
    if (interp.domain) {
      Assignment a;
      for (std::size_t i = 0; i < interp.k; ++i) a[interp.domain_vars[i]] = t[i];
      if (!eval_tarski(source, a, *interp.domain)) continue;
    }
    out.push_back(std::move(t));
  }
  if (out.empty()) throw PreconditionError("interpretation defines an empty domain");
  return out;
}

Structure apply_interpretation(const FOInterpretation& interp, const Structure& source) {
  const auto elements = interpretation_domain(interp, source);
  Structure target(elements.size());
  const std::uint64_t base = source.label_base();
  const std::uint64_t target_base = checked_power(base, interp.k);
  std::vector<std::uint64_t> labels;
  for (std::size_t e = 0; e < elements.size(); ++e) {
    std::uint64_t label = 0;
    for (Element x : elements[e]) label = label * base + source.label(x);
    labels.push_back(label);
    target.set_element_name(e, tuple_name(elements[e]));
  }
  target.set_labels(std::move(labels), target_base);

  for (const auto& r : interp.relations) {
    const auto idx = target.add_relation(r.name, r.arity);
    const std::uint64_t cells = checked_power(elements.size(), r.arity);
    for (std::uint64_t rank = 0; rank < cells; ++rank) {
      const Tuple t = target.unrank(rank, r.arity);
      Assignment a;
      for (std::size_t j = 0; j < r.arity; ++j)
        for (std::size_t i = 0; i < interp.k; ++i) a[r.vars[j * interp.k + i]] = elements[t[j]][i];
      if (eval_tarski(source, a, *r.formula)) target.set_bit(idx, rank);
    }
  }
  return target;
}

Team interpret_team(const FOInterpretation& interp, const Structure& source, const Team& team,
                    const VarTuple& target_vars) {
  if (team.vars() != block_vars(target_vars, interp.k))
    throw PreconditionError("team variables are not the blocks of the target variables");
  const auto elements = interpretation_domain(interp, source);
  std::map<Tuple, Element> index;
  for (Element e = 0; e < elements.size(); ++e) index[elements[e]] = e;
  std::vector<Tuple> rows;
  for (const auto& row : team.rows()) {
    Tuple out;
    for (std::size_t j = 0; j < target_vars.size(); ++j) {
      const Tuple block(row.begin() + static_cast<std::ptrdiff_t>(j * interp.k),
                        row.begin() + static_cast<std::ptrdiff_t>((j + 1) * interp.k));
      auto it = index.find(block);
      if (it == index.end())
        throw PreconditionError("team value " + tuple_name(block) + " is outside the domain");
      out.push_back(it->second);
    }
    rows.push_back(std::move(out));
  }
  return Team(target_vars, std::move(rows));
}

Team lift_team(const FOInterpretation& interp, const Structure& source, const Team& target_team) {
  const auto elements = interpretation_domain(interp, source);
  std::vector<Tuple> rows;
  for (const auto& row : target_team.rows()) {
    Tuple out;
    for (Element e : row) {
      if (e >= elements.size()) throw PreconditionError("target element out of range");
      out.insert(out.end(), elements[e].begin(), elements[e].end());
    }
    rows.push_back(std::move(out));
  }
  return Team(block_vars(target_team.vars(), interp.k), std::move(rows));
}

namespace {

class Translator {
 public:
  explicit Translator(const FOInterpretation& interp) : interp_(interp) {
    for (const auto& r : interp.relations) defs_[r.name] = &r;
  }

  FormulaPtr guard(const std::string& var) const {
    if (!interp_.domain) return nullptr;
    std::map<std::string, std::string> renaming;
    const auto blocks = block_vars(var, interp_.k);
    for (std::size_t i = 0; i < interp_.k; ++i) renaming[interp_.domain_vars[i]] = blocks[i];
    return rename_free(interp_.domain, renaming);
  }

  FormulaPtr run(const Formula& f) const {
    const std::size_t k = interp_.k;
    switch (f.kind) {
      case NodeKind::Rel: {
        if (is_builtin_relation(f.name))
          return rel(f.name, block_vars(f.args[0], k), f.negated);
        auto it = defs_.find(f.name);
        if (it == defs_.end())
          throw PreconditionError("relation " + f.name + " is not in the target vocabulary");
        const InterpretedRelation& def = *it->second;
        if (def.arity != f.args[0].size())
          throw ArityError("relation " + f.name + " has arity " + std::to_string(def.arity));
        std::map<std::string, std::string> renaming;
        const auto blocks = block_vars(f.args[0], k);
        for (std::size_t i = 0; i < blocks.size(); ++i) renaming[def.vars[i]] = blocks[i];
        auto body = rename_free(def.formula, renaming);
        return f.negated ? negate(*body) : body;
      }
      case NodeKind::Eq: {
        const auto xs = block_vars(f.args[0][0], k), ys = block_vars(f.args[0][1], k);
        std::vector<FormulaPtr> parts;
        for (std::size_t i = 0; i < k; ++i) parts.push_back(eq(xs[i], ys[i], f.negated));
        return f.negated ? disj(parts) : conj(parts);
      }
      case NodeKind::Dep: {
        const auto det = block_vars(f.args[0], k);
        std::vector<FormulaPtr> parts;
        for (const auto& y : block_vars(f.args[1][0], k)) parts.push_back(dep(det, y));
        return conj(parts);
      }
      case NodeKind::Indep:
        return indep(block_vars(f.args[0], k), block_vars(f.args[1], k),
                     block_vars(f.args[2], k));
      case NodeKind::Incl:
        return incl(block_vars(f.args[0], k), block_vars(f.args[1], k));
      case NodeKind::Gen:
        throw PreconditionError("generalized atoms cannot be translated: " + f.name);
      case NodeKind::And:
        return conj(run(*f.left), run(*f.right));
      case NodeKind::Or:
        return disj(run(*f.left), run(*f.right));
      case NodeKind::Exists: {
        auto body = run(*f.left);
        if (auto g = guard(f.name)) body = conj(g, body);
        return exists(block_vars(f.name, k), body);
      }
      case NodeKind::Forall: {
        auto body = run(*f.left);
        if (auto g = guard(f.name)) body = disj(negate(*g), conj(g, body));
        return forall(block_vars(f.name, k), body);
      }
    }
    throw PreconditionError("unknown formula node");
  }

 private:
  const FOInterpretation& interp_;
  std::map<std::string, const InterpretedRelation*> defs_;
};

}  // namespace

FormulaPtr translate_formula(const FOInterpretation& interp, const FormulaPtr& phi) {
  validate(interp);
  Translator t(interp);
  auto psi = t.run(*phi);
  for (const auto& v : free_variables_ordered(*phi))
    if (auto g = t.guard(v)) psi = conj(psi, g);
  return psi;
}

}  // namespace teamcount
