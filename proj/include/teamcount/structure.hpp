#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "teamcount/formula.hpp"

namespace teamcount {

using Element = std::size_t;
using Tuple = std::vector<Element>;

/// Finite relational structure over {0..n-1}. The built-ins `<=`, `+`, `*`
/// are computed on demand: an argument list of arity 2k (resp. 3k) is read
/// as k-blocks, each block a numeral in base `label_base()` over the element
/// labels (labels default to the elements themselves).
class Structure {
 public:
  struct Relation {
    std::string name;
    std::size_t arity = 0;
    std::vector<bool> bits;  // row-major over n^arity
  };

  explicit Structure(std::size_t n);

  std::size_t size() const { return n_; }

  /// Declares a relation; returns its index in vocabulary order.
  std::size_t add_relation(const std::string& name, std::size_t arity);
  void add_tuple(const std::string& name, const Tuple& t);
  void set_bit(std::size_t rel, std::size_t rank, bool value = true);

  const std::vector<Relation>& relations() const { return relations_; }
  bool has_relation(const std::string& name) const { return index_.count(name) > 0; }
  std::size_t relation_index(const std::string& name) const;
  const Relation& relation(const std::string& name) const;
  Vocabulary vocabulary() const;

  bool holds(std::size_t rel, std::span<const Element> t) const;
  bool holds(const std::string& name, std::span<const Element> t) const;
  std::vector<Tuple> tuples(const std::string& name) const;

  /// Built-in relations by name ("<=", "+", "*").
  bool builtin_holds(const std::string& name, std::span<const Element> t) const;

  std::uint64_t label(Element e) const { return labels_.empty() ? e : labels_[e]; }
  std::uint64_t label_base() const { return label_base_; }
  void set_labels(std::vector<std::uint64_t> labels, std::uint64_t base);

  const std::string& element_name(Element e) const;
  void set_element_name(Element e, std::string name);
  bool has_element_names() const { return !names_.empty(); }

  /// Row-major rank of a tuple (first coordinate most significant).
  std::size_t rank(std::span<const Element> t) const;
  Tuple unrank(std::size_t rank, std::size_t arity) const;

  bool operator==(const Structure& other) const;

 private:
  std::size_t n_;
  std::vector<Relation> relations_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::string> names_;
  std::vector<std::uint64_t> labels_;
  std::uint64_t label_base_;
};

/// n^k, throwing BudgetExceeded if it does not fit into 63 bits.
std::uint64_t checked_power(std::uint64_t n, std::size_t k);

/// A set of assignments over an ordered variable domain; rows are kept
/// sorted and unique.
class Team {
 public:
  Team() = default;
  explicit Team(VarTuple vars, std::vector<Tuple> rows = {});

  static Team full(std::size_t n, const VarTuple& vars);

  const VarTuple& vars() const { return vars_; }
  const std::vector<Tuple>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  bool contains(const Tuple& row) const;
  void insert(Tuple row);

  /// rel(X|V): value tuples of the given variables, as a sorted set.
  std::vector<Tuple> project(const VarTuple& vars) const;

  bool operator==(const Team&) const = default;

 private:
  VarTuple vars_;
  std::vector<Tuple> rows_;
};

// Text formats. Structure: `domain N`, optional `names e0 e1 ...`, then per
// relation a `rel NAME/ARITY` line followed by one tuple per line. Team: a
// header line of variable names, then one assignment per line. `#` starts a
// comment in both.
Structure parse_structure(std::string_view text);
std::string format_structure(const Structure& s);
Team parse_team(std::string_view text, std::size_t domain_size);
std::string format_team(const Team& t);

}  // namespace teamcount
