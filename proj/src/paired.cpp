#include "teamcount/paired.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <functional>
#include <set>
#include <sstream>

#include "teamcount/error.hpp"
#include "teamcount/rational.hpp"
#include "teamcount/sat.hpp"

namespace teamcount {

void Digraph::add_vertex(const std::string& v) {
  if (index_.emplace(v, vertices_.size()).second) vertices_.push_back(v);
}

const NamedEdge& Digraph::add_edge(const std::string& from, const std::string& to,
                                   std::string name) {
  if (name.empty()) name = "(" + from + "," + to + ")";
  if (!edge_names_.emplace(name, edges_.size()).second)
    throw PreconditionError("duplicate edge name " + name);
  add_vertex(from);
  add_vertex(to);
  edges_.push_back({std::move(name), from, to});
  return edges_.back();
}

std::size_t Digraph::vertex_index(const std::string& v) const {
  auto it = index_.find(v);
  if (it == index_.end()) throw PreconditionError("unknown vertex " + v);
  return it->second;
}

void BipartiteGraph::add_left(const std::string& v) {
  if (right_index_.count(v)) throw PreconditionError("vertex " + v + " is already on the right");
  if (left_index_.emplace(v, left_.size()).second) left_.push_back(v);
}

void BipartiteGraph::add_right(const std::string& v) {
  if (left_index_.count(v)) throw PreconditionError("vertex " + v + " is already on the left");
  if (right_index_.emplace(v, right_.size()).second) right_.push_back(v);
}

const NamedEdge& BipartiteGraph::add_edge(const std::string& left, const std::string& right,
                                          std::string name) {
  if (name.empty()) name = "{" + left + "," + right + "}";
  if (right_index_.count(left) || left_index_.count(right))
    throw PreconditionError("edge " + name + " does not cross the bipartition");
  if (!edge_names_.emplace(name, edges_.size()).second)
    throw PreconditionError("duplicate edge name " + name);
  add_left(left);
  add_right(right);
  edges_.push_back({std::move(name), left, right});
  return edges_.back();
}

std::size_t BipartiteGraph::left_index(const std::string& v) const {
  auto it = left_index_.find(v);
  if (it == left_index_.end()) throw PreconditionError("unknown left vertex " + v);
  return it->second;
}

std::size_t BipartiteGraph::right_index(const std::string& v) const {
  auto it = right_index_.find(v);
  if (it == right_index_.end()) throw PreconditionError("unknown right vertex " + v);
  return it->second;
}

const char* to_string(PairedKind kind) {
  switch (kind) {
    case PairedKind::CycleCover: return "cycle-cover";
    case PairedKind::PerfectMatching: return "perfect-matching";
    case PairedKind::Matching: return "matching";
    case PairedKind::Assignments: return "assignments";
  }
  return "?";
}

std::vector<std::string> solution_variables(const PairedInstance& p) {
  std::vector<std::string> out;
  switch (p.kind) {
    case PairedKind::CycleCover:
      for (const auto& e : p.digraph.edges()) out.push_back(e.name);
      break;
    case PairedKind::PerfectMatching:
    case PairedKind::Matching:
      for (const auto& e : p.bigraph.edges()) out.push_back(e.name);
      break;
    case PairedKind::Assignments:
      for (int v = 1; v <= p.cnf.num_vars(); ++v) out.push_back(std::to_string(v));
      break;
  }
  return out;
}

namespace {

// Companion free variable id -> solution variable index.
std::vector<std::pair<int, std::size_t>> companion_links(const PairedInstance& p) {
  std::vector<std::pair<int, std::size_t>> links;
  const auto names = solution_variables(p);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = i;
  for (int v : p.companion.free_vars()) {
    if (p.kind == PairedKind::Assignments) {
      if (v > p.cnf.num_vars())
        throw PreconditionError("companion free variable " + std::to_string(v) +
                                " is not a carrier variable");
      links.emplace_back(v, static_cast<std::size_t>(v - 1));
      continue;
    }
    auto it = index.find(p.companion.name(v));
    if (it == index.end())
      throw PreconditionError("companion free variable " + std::to_string(v) + " ('" +
                              p.companion.name(v) + "') names no edge");
    links.emplace_back(v, it->second);
  }
  return links;
}

using Solution = std::vector<bool>;

class SolutionEnumerator {
 public:
  SolutionEnumerator(const PairedInstance& p, std::uint64_t budget) : p_(p), budget_(budget) {}

  std::vector<Solution> run() {
    switch (p_.kind) {
      case PairedKind::CycleCover: cycle_covers(); break;
      case PairedKind::PerfectMatching: matchings(true); break;
      case PairedKind::Matching: matchings(false); break;
      case PairedKind::Assignments: assignments(); break;
    }
    return std::move(out_);
  }

 private:
  void emit(const Solution& s) {
    if (out_.size() >= budget_) throw BudgetExceeded("paired enumeration exceeded the budget");
    out_.push_back(s);
  }

  void cycle_covers() {
    const auto& g = p_.digraph;
    std::vector<std::vector<std::size_t>> out_edges(g.vertices().size());
    for (std::size_t e = 0; e < g.edges().size(); ++e)
      out_edges[g.vertex_index(g.edges()[e].from)].push_back(e);
    Solution chosen(g.edges().size());
    std::vector<bool> has_in(g.vertices().size());
    std::function<void(std::size_t)> rec = [&](std::size_t v) {
      if (v == g.vertices().size()) return emit(chosen);
      for (auto e : out_edges[v]) {
        const auto to = g.vertex_index(g.edges()[e].to);
        if (has_in[to]) continue;
        has_in[to] = chosen[e] = true;
        rec(v + 1);
        has_in[to] = chosen[e] = false;
      }
    };
    rec(0);
  }

  void matchings(bool perfect) {
    const auto& g = p_.bigraph;
    if (perfect && g.left().size() != g.right().size()) return;
    std::vector<std::vector<std::size_t>> incident(g.left().size());
    for (std::size_t e = 0; e < g.edges().size(); ++e)
      incident[g.left_index(g.edges()[e].from)].push_back(e);
    Solution chosen(g.edges().size());
    std::vector<bool> taken(g.right().size());
    std::function<void(std::size_t)> rec = [&](std::size_t v) {
      if (v == g.left().size()) return emit(chosen);
      if (!perfect) rec(v + 1);
      for (auto e : incident[v]) {
        const auto r = g.right_index(g.edges()[e].to);
        if (taken[r]) continue;
        taken[r] = chosen[e] = true;
        rec(v + 1);
        taken[r] = chosen[e] = false;
      }
    };
    rec(0);
  }

  void assignments() {
    const int n = p_.cnf.num_vars();
    if (n >= 62 || (std::uint64_t{1} << n) > budget_)
      throw BudgetExceeded("carrier has too many variables to enumerate");
    Solution s(static_cast<std::size_t>(n));
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      for (int v = 0; v < n; ++v) s[static_cast<std::size_t>(v)] = bits >> v & 1;
      const bool ok = std::all_of(p_.cnf.clauses().begin(), p_.cnf.clauses().end(),
                                  [&](const Clause& c) {
                                    return std::any_of(c.begin(), c.end(), [&](int lit) {
                                      return s[static_cast<std::size_t>(std::abs(lit) - 1)] ==
                                             (lit > 0);
                                    });
                                  });
      if (ok) emit(s);
    }
  }

  const PairedInstance& p_;
  std::uint64_t budget_;
  std::vector<Solution> out_;
};

}  // namespace

void check_paired(const PairedInstance& p) {
  if (p.kind == PairedKind::Assignments && !classify(p.cnf).quantifier_free)
    throw PreconditionError("carrier formula must be quantifier-free");
  const auto flags = classify(p.companion);
  if (!flags.cnf_minus) throw PreconditionError("companion free variables must occur negatively");
  if (!flags.is_kcnf(3)) throw PreconditionError("companion must be 3CNF");
  companion_links(p);
}

CountResult count_paired(const PairedInstance& p, CountOptions options) {
  check_paired(p);
  const auto links = companion_links(p);
  const auto solutions = SolutionEnumerator(p, options.budget).run();
  std::uint64_t total = 0;
  std::exception_ptr error;
  const int threads = options.jobs > 0 ? options.jobs : omp_get_max_threads();
#pragma omp parallel for num_threads(threads) schedule(dynamic, 16) reduction(+ : total)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(solutions.size()); ++i) {
    try {
      auto a = empty_assignment(p.companion.num_vars());
      for (const auto& [var, idx] : links)
        a[static_cast<std::size_t>(var)] = solutions[static_cast<std::size_t>(i)][idx] ? 1 : 0;
      if (satisfiable(p.companion.clauses(), a)) ++total;
    } catch (...) {
#pragma omp critical(teamcount_paired_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  CountResult r;
  r.count = mpz_class(std::to_string(total));
  r.stats.nodes = solutions.size();
  r.stats.oracle_calls = solutions.size();
  return r;
}

PairedInstance SplitResult::paired() const {
  PairedInstance p;
  p.kind = PairedKind::Assignments;
  p.cnf = carrier;
  p.companion = companion;
  return p;
}

SplitResult split_sigma1_3cnf(const QBFormula& f) {
  if (!classify(f).is_kcnf(3)) throw PreconditionError("matrix is not 3CNF");
  const auto free = f.free_vars();
  const auto bound = f.bound_vars();
  auto is_free_lit = [&](int lit) { return !f.is_bound(std::abs(lit)); };
  std::size_t mixed = 0;
  for (const auto& c : f.clauses())
    if (std::any_of(c.begin(), c.end(), is_free_lit) &&
        !std::all_of(c.begin(), c.end(), is_free_lit))
      ++mixed;

  SplitResult out;
  std::map<int, int> id;
  auto label = [&](int v, const std::string& prefix) {
    return f.name(v).empty() ? prefix + std::to_string(v) : f.name(v);
  };
  for (int v : free) {
    id[v] = out.carrier.add_var(false, label(v, "x"));
    out.companion.add_var(false, label(v, "x"));
  }
  for (std::size_t i = 1; i <= mixed; ++i) {
    out.mixed_vars.push_back(out.carrier.add_var(false, "e" + std::to_string(i)));
    out.companion.add_var(false, "e" + std::to_string(i));
  }
  for (int v : bound) id[v] = out.companion.add_var(true, label(v, "y"));
  auto map_lit = [&](int lit) { return lit < 0 ? -id[-lit] : id[lit]; };

  std::size_t next_mixed = 0;
  for (const auto& c : f.clauses()) {
    Clause free_part, bound_part;
    for (int lit : c) (is_free_lit(lit) ? free_part : bound_part).push_back(map_lit(lit));
    if (bound_part.empty()) {
      out.carrier.add_clause(free_part);
    } else if (free_part.empty()) {
      out.companion.add_clause(bound_part);
    } else {
      const int e = out.mixed_vars[next_mixed++];
      for (int lit : free_part) out.carrier.add_clause({-e, -lit});
      Clause definition = free_part;
      definition.push_back(e);
      out.carrier.add_clause(definition);
      bound_part.push_back(-e);
      out.companion.add_clause(bound_part);
    }
  }
  return out;
}

PairedInstance cc_to_pm(const PairedInstance& cc) {
  if (cc.kind != PairedKind::CycleCover) throw PreconditionError("expected a cycle-cover instance");
  PairedInstance out;
  out.kind = PairedKind::PerfectMatching;
  for (const auto& v : cc.digraph.vertices()) out.bigraph.add_left(v);
  for (const auto& v : cc.digraph.vertices()) out.bigraph.add_right(v + "'");
  std::map<std::string, std::string> renamed;
  for (const auto& e : cc.digraph.edges())
    renamed[e.name] = out.bigraph.add_edge(e.from, e.to + "'").name;
  out.companion = cc.companion;
  for (int v : out.companion.free_vars()) {
    auto it = renamed.find(out.companion.name(v));
    if (it != renamed.end()) out.companion.set_name(v, it->second);
  }
  return out;
}

BipartiteGraph build_Gk(const BipartiteGraph& g, std::size_t k) {
  if (k == 0) throw PreconditionError("k must be positive");
  BipartiteGraph out = g;
  const std::set<std::string> taken(g.right().begin(), g.right().end());
  for (const auto& v : g.left())
    for (std::size_t j = 1; j <= k; ++j) {
      const std::string pendant = v + "~" + std::to_string(j);
      if (taken.count(pendant)) throw PreconditionError("pendant vertex name " + pendant + " is taken");
      out.add_edge(v, pendant);
    }
  return out;
}

PairedOracle brute_force_paired_oracle(CountOptions options) {
  return [options](const PairedInstance& p) { return count_paired(p, options).count; };
}

InterpolationResult pm_to_im_interpolate(const PairedInstance& pm, const PairedOracle& oracle) {
  if (pm.kind != PairedKind::PerfectMatching)
    throw PreconditionError("expected a perfect-matching instance");
  check_paired(pm);
  InterpolationResult out;
  const auto& g = pm.bigraph;
  if (g.left().size() != g.right().size()) {
    out.zero_residual = true;
    return out;
  }
  const std::size_t n1 = g.left().size();
  std::vector<mpq_class> nodes, answers;
  for (std::size_t k = 1; k <= n1 + 1; ++k) {
    PairedInstance q;
    q.kind = PairedKind::Matching;
    q.bigraph = build_Gk(g, k);
    q.companion = pm.companion;
    out.oracle_answers.push_back(oracle(q));
    nodes.emplace_back(static_cast<unsigned long>(k + 1));
    answers.emplace_back(out.oracle_answers.back());
  }
  const auto system = vandermonde(nodes);
  try {
    out.coefficients = solve_linear(system, answers);
  } catch (const PreconditionError& e) {
    throw OracleFault(std::string("interpolation failed: ") + e.what());
  }
  const auto res = residual(system, out.coefficients, answers);
  out.zero_residual = std::all_of(res.begin(), res.end(), [](const mpq_class& q) { return q == 0; });
  const mpq_class& a0 = out.coefficients.front();
  if (!out.zero_residual || a0.get_den() != 1 || a0 < 0)
    throw OracleFault("matching oracle answers are inconsistent with the G_k identity");
  out.result.count = a0.get_num();
  out.result.stats.oracle_calls = n1 + 1;
  return out;
}

PairedInstance TwoCnfResult::paired() const {
  PairedInstance p;
  p.kind = PairedKind::Assignments;
  p.cnf = conflicts;
  p.companion = companion;
  return p;
}

TwoCnfResult im_to_2cnf_neg(const PairedInstance& im) {
  if (im.kind != PairedKind::Matching && im.kind != PairedKind::PerfectMatching)
    throw PreconditionError("expected a matching instance");
  check_paired(im);
  const auto& edges = im.bigraph.edges();
  TwoCnfResult out;
  std::map<std::string, int> edge_id;
  for (const auto& e : edges) {
    edge_id[e.name] = out.conflicts.add_var(false, e.name);
    out.companion.add_var(false, e.name);
  }
  for (std::size_t i = 0; i < edges.size(); ++i)
    for (std::size_t j = i + 1; j < edges.size(); ++j)
      if (edges[i].from == edges[j].from || edges[i].to == edges[j].to)
        out.conflicts.add_clause({-static_cast<int>(i + 1), -static_cast<int>(j + 1)});

  std::map<int, int> id;
  for (int v : im.companion.free_vars()) id[v] = edge_id.at(im.companion.name(v));
  for (int v : im.companion.bound_vars()) id[v] = out.companion.add_var(true, im.companion.name(v));
  for (const auto& c : im.companion.clauses()) {
    Clause mapped;
    for (int lit : c) mapped.push_back(lit < 0 ? -id[-lit] : id[lit]);
    out.companion.add_clause(mapped);
  }
  out.combined = prenex_conjoin(out.conflicts, out.companion);
  return out;
}

QBFormula add_junctions(const QBFormula& companion,
                        const std::vector<std::pair<std::string, std::string>>& junctions) {
  QBFormula out = companion;
  std::map<std::string, int> by_name;
  for (int v : out.free_vars())
    if (!out.name(v).empty()) by_name[out.name(v)] = v;
  auto var = [&](const std::string& name) {
    auto it = by_name.find(name);
    if (it != by_name.end()) return it->second;
    return by_name[name] = out.add_var(false, name);
  };
  for (const auto& [a, b] : junctions) out.add_clause({-var(a), -var(b)});
  return out;
}

QBFormula name_companion(QBFormula companion, const std::vector<std::string>& edge_names) {
  for (int v : companion.free_vars()) {
    if (!companion.name(v).empty()) continue;
    if (static_cast<std::size_t>(v) > edge_names.size())
      throw PreconditionError("companion free variable " + std::to_string(v) + " names no edge");
    companion.set_name(v, edge_names[static_cast<std::size_t>(v - 1)]);
  }
  return companion;
}

GraphFile parse_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0, offset = 0;
  GraphFile out;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t at = offset;
    offset += line.size() + 1;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::vector<std::string> w;
    for (std::string s; words >> s;) w.push_back(s);
    if (w.empty()) continue;
    auto fail = [&](const std::string& what) {
      throw SyntaxError(what + " (line " + std::to_string(line_no) + ")", at, line_no);
    };
    if (!header) {
      if (w.size() != 1 || (w[0] != "digraph" && w[0] != "bigraph"))
        fail("expected 'digraph' or 'bigraph' header");
      out.bipartite = w[0] == "bigraph";
      header = true;
      continue;
    }
    try {
      if (!out.bipartite && w[0] == "vertices") {
        for (std::size_t i = 1; i < w.size(); ++i) out.digraph.add_vertex(w[i]);
      } else if (out.bipartite && (w[0] == "left" || w[0] == "right")) {
        for (std::size_t i = 1; i < w.size(); ++i)
          w[0] == "left" ? out.bigraph.add_left(w[i]) : out.bigraph.add_right(w[i]);
      } else if (w.size() == 3) {
        if (out.bipartite) out.bigraph.add_edge(w[1], w[2], w[0]);
        else out.digraph.add_edge(w[1], w[2], w[0]);
      } else {
        fail("expected 'NAME FROM TO'");
      }
    } catch (const PreconditionError& e) {
      fail(e.what());
    }
  }
  if (!header) throw SyntaxError("missing graph header", 0, 0);
  return out;
}

std::string format_graph(const Digraph& g) {
  std::ostringstream out;
  out << "digraph\nvertices";
  for (const auto& v : g.vertices()) out << ' ' << v;
  out << '\n';
  for (const auto& e : g.edges()) out << e.name << ' ' << e.from << ' ' << e.to << '\n';
  return out.str();
}

std::string format_graph(const BipartiteGraph& g) {
  std::ostringstream out;
  out << "bigraph\nleft";
  for (const auto& v : g.left()) out << ' ' << v;
  out << "\nright";
  for (const auto& v : g.right()) out << ' ' << v;
  out << '\n';
  for (const auto& e : g.edges()) out << e.name << ' ' << e.from << ' ' << e.to << '\n';
  return out.str();
}

}  // namespace teamcount
