#pragma once

#include <string>
#include <vector>

#include "teamcount/counting.hpp"
#include "teamcount/formula.hpp"

namespace teamcount {

/// A named library formula. Team formulas are counted over `team_vars`;
/// relational ones (nonempty `free_relations`) through count_relations.
struct BuiltinFormula {
  std::string name;
  std::string description;
  std::string source;  // DSL text
  FormulaPtr formula;
  VarTuple team_vars;
  Vocabulary vocabulary;  // relations expected in the input structure
  std::vector<std::pair<std::string, std::size_t>> free_relations;
  std::vector<std::pair<std::string, std::size_t>> exists_relations;

  bool relational() const { return !free_relations.empty(); }
  RelationQuery query() const;
};

/// Throws PreconditionError for unknown names.
const BuiltinFormula& builtin_formula(const std::string& name);
std::vector<std::string> builtin_names();

}  // namespace teamcount
