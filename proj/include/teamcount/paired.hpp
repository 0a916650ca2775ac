#pragma once

// Paired counting problems: carrier solutions filtered by a companion
// Σ₁3CNF⁻ formula over the solution's characteristic function.

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "teamcount/counting.hpp"
#include "teamcount/qbf.hpp"

namespace teamcount {

struct NamedEdge {
  std::string name;
  std::string from;
  std::string to;
};

class Digraph {
 public:
  void add_vertex(const std::string& v);
  /// Default name "(from,to)". Endpoints are added as vertices.
  const NamedEdge& add_edge(const std::string& from, const std::string& to, std::string name = {});

  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<NamedEdge>& edges() const { return edges_; }
  bool has_vertex(const std::string& v) const { return index_.count(v) > 0; }
  std::size_t vertex_index(const std::string& v) const;

 private:
  std::vector<std::string> vertices_;
  std::map<std::string, std::size_t> index_;
  std::vector<NamedEdge> edges_;
  std::map<std::string, std::size_t> edge_names_;
};

/// Edges run from the left side V₁ to the right side V₂.
class BipartiteGraph {
 public:
  void add_left(const std::string& v);
  void add_right(const std::string& v);
  /// Default name "{left,right}". New endpoints join their side.
  const NamedEdge& add_edge(const std::string& left, const std::string& right,
                            std::string name = {});

  const std::vector<std::string>& left() const { return left_; }
  const std::vector<std::string>& right() const { return right_; }
  const std::vector<NamedEdge>& edges() const { return edges_; }
  std::size_t left_index(const std::string& v) const;
  std::size_t right_index(const std::string& v) const;

 private:
  std::vector<std::string> left_, right_;
  std::map<std::string, std::size_t> left_index_, right_index_;
  std::vector<NamedEdge> edges_;
  std::map<std::string, std::size_t> edge_names_;
};

enum class PairedKind { CycleCover, PerfectMatching, Matching, Assignments };

const char* to_string(PairedKind kind);

struct PairedInstance {
  PairedKind kind = PairedKind::Assignments;
  Digraph digraph;         // CycleCover
  BipartiteGraph bigraph;  // PerfectMatching, Matching
  QBFormula cnf;           // Assignments: quantifier-free carrier
  /// Free variables name edges; for Assignments free variable i is carrier
  /// variable i.
  QBFormula companion;
};

/// Edge names, or carrier variable ids as decimal strings.
std::vector<std::string> solution_variables(const PairedInstance& p);

/// Companion free variables must name solution variables and occur only
/// negatively; the companion must be 3CNF.
void check_paired(const PairedInstance& p);

/// Carrier solutions whose characteristic function extends to a model of
/// the companion.
CountResult count_paired(const PairedInstance& p, CountOptions options = {});

struct SplitResult {
  QBFormula carrier;    // 3CNF over x₁..x_k, e₁..e_m (ids 1..k+m)
  QBFormula companion;  // free ids 1..k+m as in the carrier, then y₁..y_ℓ bound
  std::vector<int> mixed_vars;  // ids of e₁..e_m

  PairedInstance paired() const;
};

/// Splits the clauses into free-only, bound-only and mixed ones; each mixed
/// clause E_i gets a fresh free e_i with ¬e_i ↔ E_i|free in the carrier and
/// e_i → E_i|bound in the companion.
SplitResult split_sigma1_3cnf(const QBFormula& f);

/// Bipartite double cover: left V, right V′, edge {v₁,v₂′} per (v₁,v₂).
PairedInstance cc_to_pm(const PairedInstance& cycle_cover);

/// G plus k pendant right vertices per left vertex, each adjacent only to it.
BipartiteGraph build_Gk(const BipartiteGraph& g, std::size_t k);

using PairedOracle = std::function<mpz_class(const PairedInstance&)>;

PairedOracle brute_force_paired_oracle(CountOptions options = {});

struct InterpolationResult {
  CountResult result;
  std::vector<mpz_class> oracle_answers;  // for k = 1..|V₁|+1
  std::vector<mpq_class> coefficients;    // A′_0..A′_{|V₁|}
  bool zero_residual = false;
};

/// Perfect matchings of G satisfying ψ from matching counts of G_k,
/// k = 1..|V₁|+1, via an exact Vandermonde solve.
InterpolationResult pm_to_im_interpolate(const PairedInstance& perfect_matching,
                                         const PairedOracle& matching_oracle);

struct TwoCnfResult {
  QBFormula conflicts;  // 2CNF⁻: free variable i is edge i
  QBFormula companion;  // renumbered so free ids agree with `conflicts`
  QBFormula combined;   // prenex conjunction, Σ₁CNF⁻

  PairedInstance paired() const;
};

/// One clause ¬e₁ ∨ ¬e₂ per unordered pair of distinct edges sharing a vertex.
TwoCnfResult im_to_2cnf_neg(const PairedInstance& matching);

/// ψ ∧ ⋀ (¬j₁ ∨ ¬j₂) over junction edge-name pairs; missing names become
/// fresh free variables.
QBFormula add_junctions(const QBFormula& companion,
                        const std::vector<std::pair<std::string, std::string>>& junctions);

/// Companion over edge names from plain DIMACS: free variable i names the
/// i-th edge unless the file names it.
QBFormula name_companion(QBFormula companion, const std::vector<std::string>& edge_names);

struct GraphFile {
  bool bipartite = false;
  Digraph digraph;
  BipartiteGraph bigraph;
};

/// `digraph` or `bigraph` header, then `vertices ...` / `left ...` /
/// `right ...` lines and one `NAME FROM TO` edge per line; `#` comments.
GraphFile parse_graph(std::string_view text);
std::string format_graph(const Digraph& g);
std::string format_graph(const BipartiteGraph& g);

}  // namespace teamcount
