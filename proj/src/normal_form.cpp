#include "teamcount/normal_form.hpp"

#include <algorithm>
#include <set>

namespace teamcount {

VarTuple NormalFormDescriptor::all_vars() const {
  VarTuple out = free_vars;
  out.insert(out.end(), universal.begin(), universal.end());
  out.insert(out.end(), existential.begin(), existential.end());
  return out;
}

namespace {

void flatten_and(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->kind == NodeKind::And) {
    flatten_and(f->left, out);
    flatten_and(f->right, out);
  } else {
    out.push_back(f);
  }
}

bool quantifier_free(const Formula& f) {
  if (f.is_quantifier()) return false;
  if (f.is_atom()) return true;
  return quantifier_free(*f.left) && quantifier_free(*f.right);
}

bool contains(const VarTuple& vars, const std::string& v) {
  return std::find(vars.begin(), vars.end(), v) != vars.end();
}

}  // namespace

NormalFormDescriptor check_normal_form(const FormulaPtr& f, AtomKind kind,
                                       const VarTuple* free_order) {
  NormalFormDescriptor d;
  d.kind = kind;
  d.free_vars = free_order ? *free_order : free_variables_ordered(*f);
  for (const auto& v : free_variables(*f))
    if (!contains(d.free_vars, v))
      throw NotInNormalForm("free variable " + v + " missing from the variable tuple", f);

  std::set<std::string> used(d.free_vars.begin(), d.free_vars.end());
  if (used.size() != d.free_vars.size()) throw NotInNormalForm("variable tuple repeats a name", f);
  FormulaPtr node = f;
  auto bind = [&](VarTuple& into) {
    if (!used.insert(node->name).second)
      throw NotInNormalForm("quantified variable " + node->name + " is not fresh", node);
    into.push_back(node->name);
    node = node->left;
  };
  while (node->kind == NodeKind::Forall) bind(d.universal);
  while (node->kind == NodeKind::Exists) bind(d.existential);
  if (node->is_quantifier()) throw NotInNormalForm("universal quantifier after an existential", node);

  std::vector<FormulaPtr> parts;
  flatten_and(node, parts);
  std::vector<FormulaPtr> theta;
  const NodeKind wanted = kind == AtomKind::Dependence ? NodeKind::Dep : NodeKind::Incl;
  for (const auto& p : parts) {
    if (p->kind == wanted) {
      if (kind == AtomKind::Dependence) {
        if (p->args[0].empty())
          throw NotInNormalForm("constancy atom has no universal determiner", p);
        for (const auto& u : p->args[0])
          if (!contains(d.universal, u))
            throw NotInNormalForm("determiner " + u + " is not universally quantified", p);
        if (!contains(d.existential, p->args[1][0]))
          throw NotInNormalForm("dependent variable is not existentially quantified", p);
      }
      d.atoms.push_back(p);
      continue;
    }
    if (p->is_quantifier()) throw NotInNormalForm("quantifier inside the matrix", p);
    if (!atom_usage(*p).first_order())
      throw NotInNormalForm(p->is_atom() ? "atom of the wrong kind" : "dependency atom below a disjunction", p);
    if (!quantifier_free(*p)) throw NotInNormalForm("matrix is not quantifier-free", p);
    theta.push_back(p);
  }
  if (!theta.empty()) d.matrix = conj(theta);
  return d;
}

FormulaPtr build_normal_form(const NormalFormDescriptor& d) {
  std::vector<FormulaPtr> parts = d.atoms;
  if (d.matrix) parts.push_back(d.matrix);
  if (parts.empty()) throw PreconditionError("normal form needs an atom or a matrix");
  return forall(d.universal, exists(d.existential, conj(parts)));
}

}  // namespace teamcount
