#pragma once

// Random instance generators and brute-force oracles shared by the unit
// tests and the acceptance suite. The oracles deliberately avoid the
// library's solvers and evaluators.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "teamcount/formula.hpp"
#include "teamcount/interpretation.hpp"
#include "teamcount/normal_form.hpp"
#include "teamcount/qbf.hpp"
#include "teamcount/structure.hpp"
#include "teamcount/paired.hpp"

namespace gen {

using namespace teamcount;
using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline Structure random_structure(Rng& rng, std::size_t n, const Vocabulary& vocab,
                                  double density = 0.4) {
  Structure s(n);
  for (const auto& [name, arity] : vocab) {
    const auto idx = s.add_relation(name, arity);
    const auto cells = checked_power(n, arity);
    for (std::size_t r = 0; r < cells; ++r)
      if (coin(rng, density)) s.set_bit(idx, r);
  }
  return s;
}

inline Team random_team(Rng& rng, std::size_t n, const VarTuple& vars, std::size_t max_rows) {
  const auto total = checked_power(n, vars.size());
  std::vector<Tuple> rows;
  const auto want = pick(rng, std::min<std::uint64_t>(max_rows, total) + 1);
  Structure shape(n);
  for (std::size_t i = 0; i < want; ++i) rows.push_back(shape.unrank(pick(rng, total), vars.size()));
  return Team(vars, rows);
}

enum class Atoms { None, Dependence, Inclusion, Independence, Mixed };

/// Random formula with free variables among `scope`.
class FormulaGen {
 public:
  FormulaGen(Rng& rng, Vocabulary vocab, Atoms atoms) : rng_(rng), vocab_(std::move(vocab)), atoms_(atoms) {}

  FormulaPtr make(VarTuple scope, int depth) {
    if (depth <= 0 || coin(rng_, 0.3)) return atom(scope);
    switch (pick(rng_, 4)) {
      case 0: return conj(make(scope, depth - 1), make(scope, depth - 1));
      case 1: return disj(make(scope, depth - 1), make(scope, depth - 1));
      default: {
        const std::string v = "q" + std::to_string(fresh_++);
        scope.push_back(v);
        auto body = make(scope, depth - 1);
        return coin(rng_) ? exists(v, body) : forall(v, body);
      }
    }
  }

 private:
  std::string var(const VarTuple& scope) { return scope[pick(rng_, scope.size())]; }
  VarTuple vars(const VarTuple& scope, std::size_t k) {
    VarTuple out;
    for (std::size_t i = 0; i < k; ++i) out.push_back(var(scope));
    return out;
  }

  FormulaPtr first_order_atom(const VarTuple& scope) {
    if (vocab_.empty() || coin(rng_, 0.3)) return eq(var(scope), var(scope), coin(rng_));
    auto it = vocab_.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(pick(rng_, vocab_.size())));
    return rel(it->first, vars(scope, it->second), coin(rng_));
  }

  FormulaPtr atom(const VarTuple& scope) {
    Atoms kind = atoms_;
    if (kind == Atoms::Mixed) kind = static_cast<Atoms>(1 + pick(rng_, 3));
    if (kind == Atoms::None || coin(rng_, 0.5)) return first_order_atom(scope);
    switch (kind) {
      case Atoms::Dependence: return dep(vars(scope, pick(rng_, 3)), var(scope));
      case Atoms::Inclusion: {
        const auto k = 1 + pick(rng_, 2);
        return incl(vars(scope, k), vars(scope, k));
      }
      case Atoms::Independence:
        return indep(vars(scope, 1 + pick(rng_, 2)), vars(scope, pick(rng_, 2)),
                     vars(scope, 1 + pick(rng_, 2)));
      default: return first_order_atom(scope);
    }
  }

  Rng& rng_;
  Vocabulary vocab_;
  Atoms atoms_;
  int fresh_ = 0;
};

/// Brute-force counts of a Σ₁ CNF by enumerating every total assignment.
struct BruteCounts {
  mpz_class all, projected, star;
};

inline bool satisfies(const std::vector<Clause>& clauses, std::uint64_t bits) {
  for (const auto& c : clauses) {
    bool ok = false;
    for (int lit : c)
      if (((bits >> (std::abs(lit) - 1)) & 1) == (lit > 0 ? 1u : 0u)) ok = true;
    if (!ok) return false;
  }
  return true;
}

inline BruteCounts brute_counts(const QBFormula& f) {
  const int n = f.num_vars();
  const auto free = f.free_vars();
  std::set<std::uint64_t> projections;
  BruteCounts out;
  std::uint64_t all = 0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    if (!satisfies(f.clauses(), bits)) continue;
    ++all;
    std::uint64_t p = 0;
    for (std::size_t i = 0; i < free.size(); ++i) p |= ((bits >> (free[i] - 1)) & 1) << i;
    projections.insert(p);
  }
  out.all = static_cast<unsigned long>(all);
  out.projected = static_cast<unsigned long>(projections.size());
  out.star = out.projected - (projections.count(0) ? 1 : 0);
  return out;
}

/// Random Σ₁ CNF. `free_sign`: +1 free variables only positive, -1 only
/// negative, 0 unrestricted.
inline QBFormula random_cnf(Rng& rng, int free_vars, int bound_vars, int clauses, int width,
                            int free_sign = 0, bool dual_horn = false) {
  QBFormula f;
  std::vector<int> ids;
  for (int i = 0; i < free_vars + bound_vars; ++i) ids.push_back(i);
  std::shuffle(ids.begin(), ids.end(), rng);
  for (int i = 0; i < free_vars + bound_vars; ++i) f.add_var(false);
  for (int i = 0; i < bound_vars; ++i) f.set_bound(ids[static_cast<std::size_t>(i)] + 1);
  const int n = free_vars + bound_vars;
  for (int c = 0; c < clauses && n > 0; ++c) {
    Clause clause;
    bool negative_used = false;
    const int len = 1 + static_cast<int>(pick(rng, static_cast<std::size_t>(width)));
    for (int i = 0; i < len; ++i) {
      const int v = 1 + static_cast<int>(pick(rng, static_cast<std::size_t>(n)));
      bool positive = coin(rng);
      if (!f.is_bound(v) && free_sign != 0) positive = free_sign > 0;
      if (dual_horn && !positive) {
        if (negative_used) {
          if (!f.is_bound(v) && free_sign < 0) continue;
          positive = true;
        }
        negative_used = negative_used || !positive;
      }
      clause.push_back(positive ? v : -v);
    }
    if (clause.empty()) continue;
    f.add_clause(clause);
  }
  return f;
}

/// Every clause set of 2CNF⁺ over variables 1..vars with at least one clause
/// (clauses are unordered pairs including units (x ∨ x)).
inline std::vector<QBFormula> all_2cnf_plus(int vars) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 1; a <= vars; ++a)
    for (int b = a; b <= vars; ++b) pairs.emplace_back(a, b);
  std::vector<QBFormula> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
    QBFormula f(vars);
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (mask >> i & 1) f.add_clause({pairs[i].first, pairs[i].second});
    out.push_back(std::move(f));
  }
  return out;
}

/// Number of edge subsets of a bipartite graph forming a matching (by size).
inline std::vector<std::uint64_t> matchings_by_size(const BipartiteGraph& g) {
  const auto& e = g.edges();
  std::vector<std::uint64_t> by_size(e.size() + 1);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << e.size()); ++mask) {
    std::set<std::string> left, right;
    bool ok = true;
    std::size_t size = 0;
    for (std::size_t i = 0; i < e.size() && ok; ++i)
      if (mask >> i & 1) {
        ok = left.insert(e[i].from).second && right.insert(e[i].to).second;
        ++size;
      }
    if (ok) ++by_size[size];
  }
  return by_size;
}

/// Subset-enumeration paired counter, independent of count_paired.
inline mpz_class brute_paired(const PairedInstance& p) {
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> ends;
  if (p.kind == PairedKind::CycleCover)
    for (const auto& e : p.digraph.edges()) names.push_back(e.name), ends.emplace_back(e.from, e.to);
  else
    for (const auto& e : p.bigraph.edges()) names.push_back(e.name), ends.emplace_back(e.from, e.to);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = i;
  mpz_class total = 0;
  const int cn = p.companion.num_vars();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << names.size()); ++mask) {
    std::map<std::string, int> out_deg, in_deg;
    for (std::size_t i = 0; i < names.size(); ++i)
      if (mask >> i & 1) ++out_deg[ends[i].first], ++in_deg[ends[i].second];
    bool ok = true;
    for (const auto& [v, d] : out_deg) ok = ok && d == 1;
    for (const auto& [v, d] : in_deg) ok = ok && d == 1;
    if (p.kind == PairedKind::CycleCover) {
      ok = ok && out_deg.size() == p.digraph.vertices().size() &&
           in_deg.size() == p.digraph.vertices().size();
    } else if (p.kind == PairedKind::PerfectMatching) {
      ok = ok && out_deg.size() == p.bigraph.left().size() &&
           in_deg.size() == p.bigraph.right().size();
    }
    if (!ok) continue;
    bool companion_ok = false;
    for (std::uint64_t cbits = 0; cbits < (std::uint64_t{1} << cn) && !companion_ok; ++cbits) {
      bool consistent = true;
      for (int v : p.companion.free_vars()) {
        const bool want = mask >> index.at(p.companion.name(v)) & 1;
        if (((cbits >> (v - 1)) & 1) != (want ? 1u : 0u)) consistent = false;
      }
      companion_ok = consistent && satisfies(p.companion.clauses(), cbits);
    }
    if (companion_ok) ++total;
  }
  return total;
}

inline BipartiteGraph random_bigraph(Rng& rng, std::size_t left, std::size_t right,
                                     std::size_t max_edges) {
  BipartiteGraph g;
  for (std::size_t i = 0; i < left; ++i) g.add_left("a" + std::to_string(i + 1));
  for (std::size_t i = 0; i < right; ++i) g.add_right("b" + std::to_string(i + 1));
  std::set<std::pair<std::size_t, std::size_t>> used;
  const auto edges = pick(rng, max_edges + 1);
  for (std::size_t i = 0; i < edges && used.size() < left * right; ++i) {
    const auto a = pick(rng, left), b = pick(rng, right);
    if (!used.insert({a, b}).second) continue;
    g.add_edge(g.left()[a], g.right()[b]);
  }
  return g;
}

inline Digraph random_digraph(Rng& rng, std::size_t vertices, std::size_t max_edges) {
  Digraph g;
  for (std::size_t i = 0; i < vertices; ++i) g.add_vertex(std::to_string(i + 1));
  std::set<std::pair<std::size_t, std::size_t>> used;
  for (std::size_t i = 0; i < max_edges; ++i) {
    const auto a = pick(rng, vertices), b = pick(rng, vertices);
    if (!used.insert({a, b}).second) continue;
    g.add_edge(g.vertices()[a], g.vertices()[b]);
  }
  return g;
}

/// Random Σ₁3CNF⁻ companion over the given edge names.
inline QBFormula random_companion(Rng& rng, const std::vector<std::string>& edges, int bound,
                                  int clauses) {
  QBFormula f;
  for (const auto& e : edges) f.add_var(false, e);
  for (int i = 0; i < bound; ++i) f.add_var(true, "y" + std::to_string(i + 1));
  const int n = f.num_vars();
  if (n == 0) return f;
  for (int c = 0; c < clauses; ++c) {
    Clause clause;
    const int len = 1 + static_cast<int>(pick(rng, 3));
    for (int i = 0; i < len; ++i) {
      const int v = 1 + static_cast<int>(pick(rng, static_cast<std::size_t>(n)));
      clause.push_back(!f.is_bound(v) || coin(rng) ? -v : v);
    }
    f.add_clause(clause);
  }
  return f;
}

/// Random normal form ∀ȳ∃z̄(atoms ∧ θ) with m free, k universal, l
/// existential variables.
inline NormalFormDescriptor random_normal_form(Rng& rng, AtomKind kind, std::size_t m,
                                               std::size_t k, std::size_t l,
                                               const Vocabulary& vocab) {
  NormalFormDescriptor d;
  d.kind = kind;
  for (std::size_t i = 0; i < m; ++i) d.free_vars.push_back("x" + std::to_string(i + 1));
  for (std::size_t i = 0; i < k; ++i) d.universal.push_back("u" + std::to_string(i + 1));
  for (std::size_t i = 0; i < l; ++i) d.existential.push_back("w" + std::to_string(i + 1));
  const VarTuple all = d.all_vars();
  auto any = [&] { return all[pick(rng, all.size())]; };
  const auto atoms = pick(rng, 3);
  for (std::size_t a = 0; a < atoms; ++a) {
    if (kind == AtomKind::Dependence) {
      if (d.universal.empty() || d.existential.empty()) break;
      VarTuple det;
      for (std::size_t i = 0; i < 1 + pick(rng, d.universal.size()); ++i)
        det.push_back(d.universal[pick(rng, d.universal.size())]);
      d.atoms.push_back(dep(det, d.existential[pick(rng, d.existential.size())]));
    } else {
      const auto width = 1 + pick(rng, 2);
      VarTuple xs, ys;
      for (std::size_t i = 0; i < width; ++i) xs.push_back(any()), ys.push_back(any());
      d.atoms.push_back(incl(xs, ys));
    }
  }
  if (coin(rng, 0.7)) {
    FormulaGen g(rng, vocab, Atoms::None);
    std::vector<FormulaPtr> parts;
    for (std::size_t i = 0; i < 1 + pick(rng, 2); ++i) {
      auto lit = g.make(all, 0);
      parts.push_back(coin(rng, 0.3) ? disj(lit, g.make(all, 0)) : lit);
    }
    d.matrix = conj(parts);
  }
  if (d.atoms.empty() && !d.matrix) d.matrix = eq(all[0], all[0]);
  return d;
}

/// Random width-k interpretation from `source` to `target` vocabulary.
inline FOInterpretation random_interpretation(Rng& rng, std::size_t k, const Vocabulary& source,
                                              const Vocabulary& target) {
  FOInterpretation I;
  I.k = k;
  for (std::size_t i = 0; i < k; ++i) I.domain_vars.push_back("d" + std::to_string(i + 1));
  FormulaGen g(rng, source, Atoms::None);
  if (coin(rng, 0.6)) I.domain = g.make(I.domain_vars, 1);
  for (const auto& [name, arity] : target) {
    InterpretedRelation r{name, arity, {}, nullptr};
    for (std::size_t i = 0; i < k * arity; ++i) r.vars.push_back("r" + std::to_string(i + 1));
    r.formula = g.make(r.vars, 2);
    I.relations.push_back(std::move(r));
  }
  return I;
}

}  // namespace gen
