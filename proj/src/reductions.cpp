#include "teamcount/reductions.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

#include "teamcount/error.hpp"
#include "teamcount/eval.hpp"

namespace teamcount {

PropVarIndex::PropVarIndex(std::size_t n, std::size_t m, std::size_t depth) : n_(n), m_(m) {
  constexpr std::uint64_t limit = std::uint64_t{1} << 26;
  std::uint64_t next = 1;
  offsets_.push_back(1);
  for (std::size_t i = 0; i <= depth; ++i) {
    next += checked_power(n, m + i);
    if (next > limit) throw BudgetExceeded("too many propositional variables for the reduction");
    offsets_.push_back(static_cast<int>(next));
  }
}

std::uint64_t PropVarIndex::layer_size(std::size_t layer) const {
  return static_cast<std::uint64_t>(offsets_.at(layer + 1) - offsets_.at(layer));
}

int PropVarIndex::id(std::size_t layer, std::uint64_t rank) const {
  if (rank >= layer_size(layer)) throw PreconditionError("assignment rank out of range");
  return offsets_[layer] + static_cast<int>(rank);
}

int PropVarIndex::id(const Tuple& s) const {
  if (s.size() < m_) throw PreconditionError("partial assignment shorter than the free variables");
  std::uint64_t rank = 0;
  for (Element e : s) {
    if (e >= n_) throw PreconditionError("element out of domain");
    rank = rank * n_ + e;
  }
  return id(s.size() - m_, rank);
}

std::size_t PropVarIndex::layer_of(int id) const {
  if (id < 1 || id > total()) throw PreconditionError("variable id out of range");
  std::size_t layer = 0;
  while (offsets_[layer + 1] <= id) ++layer;
  return layer;
}

Tuple PropVarIndex::index(int id) const {
  const std::size_t layer = layer_of(id);
  auto rank = static_cast<std::uint64_t>(id - offsets_[layer]);
  Tuple s(m_ + layer);
  for (std::size_t i = s.size(); i-- > 0;) {
    s[i] = rank % n_;
    rank /= n_;
  }
  return s;
}

std::vector<std::string> layer_comments(const PropVarIndex& index) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < index.layers(); ++i)
    out.push_back("layer " + std::to_string(i) + " offset " + std::to_string(index.offset(i)) +
                  " size " + std::to_string(index.layer_size(i)) +
                  (i == 0 ? " free" : " bound"));
  return out;
}

namespace {

std::string var_name(const Tuple& s) {
  std::string out = "X_";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "." : "") + std::to_string(s[i]);
  return out;
}

struct Skeleton {
  PropVarIndex index;
  QBFormula formula;
  VarTuple vars;
  std::size_t leaf_layer;
  std::vector<Tuple> leaves;  // by rank
};

std::vector<std::size_t> positions(const VarTuple& all, const VarTuple& wanted) {
  std::vector<std::size_t> out;
  for (const auto& v : wanted) {
    auto it = std::find(all.begin(), all.end(), v);
    if (it == all.end()) throw PreconditionError("atom variable " + v + " is not in scope");
    out.push_back(static_cast<std::size_t>(it - all.begin()));
  }
  return out;
}

Tuple project(const Tuple& s, const std::vector<std::size_t>& pos) {
  Tuple out;
  out.reserve(pos.size());
  for (auto p : pos) out.push_back(s[p]);
  return out;
}

// Quantifier clauses (∀, ∃), optional parent support and the θ units.
Skeleton build_skeleton(const Structure& a, const NormalFormDescriptor& d, bool support) {
  const std::size_t n = a.size(), depth = d.k() + d.l();
  Skeleton sk{PropVarIndex(n, d.m(), depth), QBFormula(), d.all_vars(), depth, {}};
  auto& f = sk.formula;
  for (int id = 1; id <= sk.index.total(); ++id)
    f.add_var(sk.index.layer_of(id) > 0, var_name(sk.index.index(id)));
  f.comments() = layer_comments(sk.index);

  for (std::size_t layer = 0; layer < depth; ++layer) {
    const bool universal = layer < d.k();
    for (std::uint64_t r = 0; r < sk.index.layer_size(layer); ++r) {
      const int parent = sk.index.id(layer, r);
      Clause some{-parent};
      for (std::uint64_t v = 0; v < n; ++v) {
        const int child = sk.index.id(layer + 1, r * n + v);
        if (universal) f.add_clause({-parent, child});
        else some.push_back(child);
      }
      if (!universal) f.add_clause(some);
    }
  }
  if (support)
    for (std::size_t layer = 1; layer <= depth; ++layer)
      for (std::uint64_t r = 0; r < sk.index.layer_size(layer); ++r)
        f.add_clause({-sk.index.id(layer, r), sk.index.id(layer - 1, r / n)});

  const std::uint64_t leaf_count = sk.index.layer_size(depth);
  sk.leaves.reserve(leaf_count);
  for (std::uint64_t r = 0; r < leaf_count; ++r) {
    sk.leaves.push_back(a.unrank(r, sk.vars.size()));
    if (!d.matrix) continue;
    Assignment asg;
    for (std::size_t i = 0; i < sk.vars.size(); ++i) asg[sk.vars[i]] = sk.leaves.back()[i];
    if (!eval_tarski(a, asg, *d.matrix)) f.add_clause({-sk.index.id(depth, r)});
  }
  return sk;
}

}  // namespace

QBFormula dep_to_sigma1cnf_neg(const Structure& a, const NormalFormDescriptor& d) {
  if (d.kind != AtomKind::Dependence)
    throw PreconditionError("dependence reduction needs a dependence normal form");
  Skeleton sk = build_skeleton(a, d, false);
  for (const auto& atom : d.atoms) {
    if (atom->kind != NodeKind::Dep) throw PreconditionError("non-dependence atom in the normal form");
    const auto det = positions(sk.vars, atom->args[0]);
    const auto dependent = positions(sk.vars, atom->args[1])[0];
    std::map<Tuple, std::vector<std::uint64_t>> groups;
    for (std::uint64_t r = 0; r < sk.leaves.size(); ++r)
      groups[project(sk.leaves[r], det)].push_back(r);
    for (std::uint64_t r = 0; r < sk.leaves.size(); ++r)
      for (std::uint64_t other : groups[project(sk.leaves[r], det)])
        if (other > r && sk.leaves[other][dependent] != sk.leaves[r][dependent])
          sk.formula.add_clause(
              {-sk.index.id(sk.leaf_layer, r), -sk.index.id(sk.leaf_layer, other)});
  }
  return std::move(sk.formula);
}

QBFormula incl_to_sigma1_dualhorn(const Structure& a, const NormalFormDescriptor& d) {
  if (d.kind != AtomKind::Inclusion)
    throw PreconditionError("inclusion reduction needs an inclusion normal form");
  for (const auto& atom : d.atoms)
    if (atom->kind != NodeKind::Incl)
      throw PreconditionError("dependence atom in an inclusion normal form: " + to_string(*atom));
  Skeleton sk = build_skeleton(a, d, true);
  for (const auto& atom : d.atoms) {
    const auto from = positions(sk.vars, atom->args[0]);
    const auto to = positions(sk.vars, atom->args[1]);
    std::map<Tuple, std::vector<std::uint64_t>> witnesses;
    for (std::uint64_t r = 0; r < sk.leaves.size(); ++r)
      witnesses[project(sk.leaves[r], to)].push_back(r);
    for (std::uint64_t r = 0; r < sk.leaves.size(); ++r) {
      const auto& candidates = witnesses[project(sk.leaves[r], from)];
      if (std::find(candidates.begin(), candidates.end(), r) != candidates.end()) continue;
      Clause c{-sk.index.id(sk.leaf_layer, r)};
      for (auto w : candidates) c.push_back(sk.index.id(sk.leaf_layer, w));
      sk.formula.add_clause(c);
    }
  }
  return std::move(sk.formula);
}

StarOracle brute_force_star_oracle(CountOptions options) {
  return [options](const QBFormula& f) {
    return count_assignments(f, CountMode::Star, options).count;
  };
}

StarTuringResult star_turing_reduction(const QBFormula& f, const StarOracle& oracle) {
  if (!classify(f).cnf_minus) throw PreconditionError("star reduction needs a Σ₁CNF⁻ formula");
  StarTuringResult out;
  QBFormula& probe = out.probe;
  std::map<int, int> renumber;
  for (int v : f.bound_vars()) renumber[v] = probe.add_var(true, f.name(v));
  const int fresh_a = probe.add_var(false, "a");
  const int fresh_b = probe.add_var(false, "b");
  for (const auto& c : f.clauses()) {
    Clause reduced;
    bool satisfied = false;
    for (int lit : c) {
      const int v = std::abs(lit);
      if (!f.is_bound(v)) {
        if (lit < 0) satisfied = true;
        continue;
      }
      reduced.push_back(lit < 0 ? -renumber[v] : renumber[v]);
    }
    if (!satisfied) probe.add_clause(reduced);
  }
  probe.add_clause({-fresh_a, -fresh_b});

  out.probe_answer = oracle(probe);
  out.result.stats.oracle_calls = 1;
  if (out.probe_answer == 0) return out;
  if (out.probe_answer != 2)
    throw OracleFault("star oracle answered " + out.probe_answer.get_str() +
                      " on the probe; expected 0 or 2");
  out.result.count = oracle(f) + 1;
  out.result.stats.oracle_calls = 2;
  return out;
}

}  // namespace teamcount
