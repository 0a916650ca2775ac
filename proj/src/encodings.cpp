#include "teamcount/encodings.hpp"

#include <cstdlib>
#include <map>

#include "teamcount/error.hpp"

namespace teamcount {

std::string encode_structure(const Structure& s) {
  std::string out;
  for (const auto& r : s.relations())
    for (bool b : r.bits) out += b ? '1' : '0';
  return out;
}

std::vector<int> occurrence_order(const QBFormula& f) {
  std::vector<int> order;
  std::vector<char> seen(static_cast<std::size_t>(f.num_vars()) + 1, 0);
  for (const auto& c : f.clauses())
    for (int lit : c) {
      const auto v = static_cast<std::size_t>(std::abs(lit));
      if (!seen[v]) {
        seen[v] = 1;
        order.push_back(static_cast<int>(v));
      }
    }
  for (int v = 1; v <= f.num_vars(); ++v)
    if (!seen[static_cast<std::size_t>(v)]) order.push_back(v);
  return order;
}

namespace {

std::string var_label(const QBFormula& f, int v) {
  return f.name(v).empty() ? "x" + std::to_string(v) : f.name(v);
}

struct Layout {
  Structure s;
  std::map<int, Element> element_of;
};

// Elements: variables in occurrence order, then one element per clause.
Layout clause_layout(const QBFormula& f) {
  const auto order = occurrence_order(f);
  const std::size_t n = order.size() + f.clauses().size();
  if (n == 0) throw PreconditionError("formula without variables or clauses has no encoding");
  Layout l{Structure(n), {}};
  for (std::size_t i = 0; i < order.size(); ++i) {
    l.element_of[order[i]] = i;
    l.s.set_element_name(i, var_label(f, order[i]));
  }
  for (std::size_t j = 0; j < f.clauses().size(); ++j)
    l.s.set_element_name(order.size() + j, "C" + std::to_string(j + 1));
  return l;
}

void add_incidence(Layout& l, const QBFormula& f) {
  const std::size_t first_clause = l.element_of.size();
  for (std::size_t j = 0; j < f.clauses().size(); ++j)
    for (int lit : f.clauses()[j])
      l.s.add_tuple(lit > 0 ? "P" : "N", {first_clause + j, l.element_of.at(std::abs(lit))});
}

}  // namespace

Structure encode_2cnf_plus(const QBFormula& f) {
  const auto flags = classify(f);
  if (!flags.quantifier_free) throw PreconditionError("2CNF+ encoding needs a quantifier-free formula");
  for (const auto& c : f.clauses()) {
    if (c.size() > 2) throw PreconditionError("clause with more than two literals");
    if (c.empty()) throw PreconditionError("empty clause has no 2CNF+ encoding");
    for (int lit : c)
      if (lit < 0) throw PreconditionError("negative literal in a 2CNF+ formula");
  }
  const auto order = occurrence_order(f);
  if (order.empty()) throw PreconditionError("formula without variables has no encoding");
  Structure s(order.size());
  std::map<int, Element> element_of;
  for (std::size_t i = 0; i < order.size(); ++i) {
    element_of[order[i]] = i;
    s.set_element_name(i, var_label(f, order[i]));
  }
  s.add_relation("C", 2);
  for (const auto& c : f.clauses()) {
    const Element x = element_of.at(c.front());
    const Element y = element_of.at(c.back());
    s.add_tuple("C", {x, y});
  }
  return s;
}

Structure encode_sigma1cnf_neg(const QBFormula& f) {
  if (!classify(f).cnf_minus)
    throw PreconditionError("free variable occurring positively; not a Σ₁CNF⁻ formula");
  Layout l = clause_layout(f);
  l.s.add_relation("F", 1);
  l.s.add_relation("B", 1);
  l.s.add_relation("P", 2);
  l.s.add_relation("N", 2);
  for (const auto& [v, e] : l.element_of) l.s.add_tuple(f.is_bound(v) ? "B" : "F", {e});
  add_incidence(l, f);
  return std::move(l.s);
}

Structure encode_dualhorn(const QBFormula& f) {
  const auto flags = classify(f);
  if (!flags.quantifier_free) throw PreconditionError("DualHorn encoding needs a quantifier-free formula");
  if (!flags.dual_horn) throw PreconditionError("clause with two negative literals");
  Layout l = clause_layout(f);
  l.s.add_relation("C", 1);
  l.s.add_relation("P", 2);
  l.s.add_relation("N", 2);
  for (std::size_t j = 0; j < f.clauses().size(); ++j) l.s.add_tuple("C", {l.element_of.size() + j});
  add_incidence(l, f);
  return std::move(l.s);
}

namespace {

void require_vocabulary(const Structure& s, const Vocabulary& want) {
  if (s.vocabulary() != want) throw PreconditionError("structure has the wrong vocabulary");
}

const Vocabulary kSigma1Vocabulary{{"F", 1}, {"B", 1}, {"P", 2}, {"N", 2}};

}  // namespace

bool validate_sigma1cnf_neg_structure(const Structure& s) {
  require_vocabulary(s, kSigma1Vocabulary);
  const std::size_t n = s.size();
  std::vector<char> free(n), bound(n);
  for (Element e = 0; e < n; ++e) {
    const Element t[1] = {e};
    free[e] = s.holds("F", t);
    bound[e] = s.holds("B", t);
    if (free[e] && bound[e]) return false;
  }
  for (const char* rel : {"P", "N"})
    for (const auto& t : s.tuples(rel)) {
      const Element c = t[0], x = t[1];
      if (free[c] || bound[c]) return false;
      if (!free[x] && !bound[x]) return false;
      if (rel[0] == 'P' && free[x]) return false;
    }
  return true;
}

QBFormula decode_sigma1cnf_neg(const Structure& s) {
  if (!validate_sigma1cnf_neg_structure(s)) throw PreconditionError("invalid Σ₁CNF⁻ encoding");
  std::map<Element, int> var_of;
  QBFormula f;
  for (Element e = 0; e < s.size(); ++e) {
    const Element t[1] = {e};
    const bool is_free = s.holds("F", t), is_bound = s.holds("B", t);
    if (is_free || is_bound) var_of[e] = f.add_var(is_bound, s.element_name(e));
  }
  for (Element c = 0; c < s.size(); ++c) {
    if (var_of.count(c)) continue;
    Clause clause;
    for (const auto& [e, v] : var_of) {
      const Element pos[2] = {c, e};
      if (s.holds("P", pos)) clause.push_back(v);
      if (s.holds("N", pos)) clause.push_back(-v);
    }
    f.add_clause(std::move(clause));
  }
  return f;
}

QBFormula decode_2cnf_plus(const Structure& s) {
  require_vocabulary(s, {{"C", 2}});
  QBFormula f(static_cast<int>(s.size()));
  for (const auto& t : s.tuples("C"))
    f.add_clause({static_cast<int>(t[0]) + 1, static_cast<int>(t[1]) + 1});
  return f;
}

}  // namespace teamcount
