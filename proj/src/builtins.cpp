#include "teamcount/builtins.hpp"

#include <map>

#include "teamcount/error.hpp"
#include "teamcount/parser.hpp"

namespace teamcount {

RelationQuery BuiltinFormula::query() const {
  return {free_relations, exists_relations, {}, formula};
}

namespace {

const char* const kInclusion2Cnf = "A x. A y. (!C(x,y) | inc(x;t) | inc(y;t))";

const char* const kDependence2Cnf =
    "E min. ((A z. <=(min,z)) & (A x. A y. E x'. E y'. (dep(x;x') & dep(y;y') & "
    "(x != y | x' = y') & (x != t | x' = min) & (!C(x,y) | x' != min | y' != min))))";

const char* const kClauseCheck =
    "A c. (F(c) | B(c) | (E x. (N(c,x) & ((B(x) & !S(x)) | (F(x) & !T(x))))) | "
    "(E x. (P(c,x) & B(x) & S(x))))";

const char* const kClauseGuard =
    "A c. ((!C(c) | (E z. N(c,z)) | (E y. (P(c,y) & R(y)))) & "
    "(!N(c,x) | (E y. (P(c,y) & R(y)))))";

const char* const kMyopicVerbatim =
    "A x. (!R(x) | (A c. (((E z. N(c,z)) | (E y. (P(c,y) & R(y)))) & "
    "(!N(c,x) | (E y. (P(c,y) & R(y)))))))";

std::map<std::string, BuiltinFormula> make_library() {
  std::map<std::string, BuiltinFormula> lib;
  auto add = [&](BuiltinFormula b) {
    b.formula = parse_team_formula(b.source);
    lib.emplace(b.name, std::move(b));
  };
  const Vocabulary cnf_vocab{{"F", 1}, {"B", 1}, {"P", 2}, {"N", 2}};
  const Vocabulary horn_vocab{{"C", 1}, {"P", 2}, {"N", 2}};

  add({"incl-2cnf+", "FO(inc) team formula over t counting satisfying 2CNF+ assignments",
       kInclusion2Cnf, nullptr, {"t"}, {{"C", 2}}, {}, {}});
  add({"dep-2cnf+",
       "FO(dep) team formula over t; a team is the set of variables assigned false",
       kDependence2Cnf, nullptr, {"t"}, {{"C", 2}}, {}, {}});
  add({"sigma11-cnfneg",
       "E S. clause check with T restricted to free variables; count nonempty T",
       std::string("(") + kClauseCheck + ") & (A x. (!T(x) | F(x)))", nullptr, {}, cnf_vocab,
       {{"T", 1}}, {{"S", 1}}});
  add({"sigma11-cnfneg-verbatim", "E S. clause check without the restriction of T",
       kClauseCheck, nullptr, {}, cnf_vocab, {{"T", 1}}, {{"S", 1}}});
  add({"myopic-dualhorn",
       "myopic formula over R counting nonzero DualHorn assignments; R holds variables only",
       std::string("A x. (!R(x) | (!C(x) & (") + kClauseGuard + ")))", nullptr, {}, horn_vocab,
       {{"R", 1}}, {}});
  add({"myopic-dualhorn-verbatim", "myopic formula with the clause guard ranging over all elements",
       kMyopicVerbatim, nullptr, {}, horn_vocab, {{"R", 1}}, {}});
  return lib;
}

const std::map<std::string, BuiltinFormula>& library() {
  static const auto lib = make_library();
  return lib;
}

}  // namespace

const BuiltinFormula& builtin_formula(const std::string& name) {
  auto it = library().find(name);
  if (it == library().end()) throw PreconditionError("unknown built-in formula '" + name + "'");
  return it->second;
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : library()) out.push_back(name);
  return out;
}

}  // namespace teamcount
