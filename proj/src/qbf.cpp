#include "teamcount/qbf.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "teamcount/error.hpp"

namespace teamcount {

QBFormula::QBFormula(int num_vars) { reserve_vars(num_vars); }

int QBFormula::add_var(bool bound, std::string name) {
  bound_.push_back(bound);
  names_.push_back(std::move(name));
  return num_vars();
}

void QBFormula::reserve_vars(int n) {
  while (num_vars() < n) add_var();
}

void QBFormula::set_bound(int var, bool bound) {
  if (var < 1 || var > num_vars()) throw PreconditionError("variable out of range");
  bound_[static_cast<std::size_t>(var)] = bound;
}

std::vector<int> QBFormula::free_vars() const {
  std::vector<int> out;
  for (int v = 1; v <= num_vars(); ++v)
    if (!is_bound(v)) out.push_back(v);
  return out;
}

std::vector<int> QBFormula::bound_vars() const {
  std::vector<int> out;
  for (int v = 1; v <= num_vars(); ++v)
    if (is_bound(v)) out.push_back(v);
  return out;
}

void QBFormula::add_clause(Clause c) {
  c = normalize_clause(std::move(c));
  for (int lit : c)
    if (std::abs(lit) > num_vars()) reserve_vars(std::abs(lit));
  clauses_.push_back(std::move(c));
}

const std::string& QBFormula::name(int var) const {
  return names_.at(static_cast<std::size_t>(var));
}

void QBFormula::set_name(int var, std::string name) {
  names_.at(static_cast<std::size_t>(var)) = std::move(name);
}

bool QBFormula::has_names() const {
  return std::any_of(names_.begin(), names_.end(), [](const auto& n) { return !n.empty(); });
}

Clause normalize_clause(Clause c) {
  for (int lit : c)
    if (lit == 0) throw PreconditionError("literal 0 inside a clause");
  std::sort(c.begin(), c.end(), [](int a, int b) {
    return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b;
  });
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

bool is_tautology(const Clause& c) {
  for (std::size_t i = 1; i < c.size(); ++i)
    if (c[i] == -c[i - 1]) return true;
  return false;
}

ClassFlags classify(const QBFormula& f) {
  ClassFlags flags;
  flags.cnf_plus = flags.cnf_minus = flags.dual_horn = true;
  flags.quantifier_free = f.bound_vars().empty();
  for (const auto& c : f.clauses()) {
    flags.width = std::max(flags.width, c.size());
    std::size_t negatives = 0;
    for (int lit : c) {
      if (lit < 0) ++negatives;
      if (f.is_bound(std::abs(lit))) continue;
      if (lit < 0) flags.cnf_plus = false;
      if (lit > 0) flags.cnf_minus = false;
    }
    if (negatives > 1) flags.dual_horn = false;
  }
  return flags;
}

QBFormula parse_cnf(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  bool header = false, prefix = false;
  long declared_vars = 0, declared_clauses = 0;
  QBFormula f;
  Clause pending;
  std::vector<std::pair<long, std::string>> names;
  auto fail = [&](const std::string& what) -> void {
    throw SyntaxError(what + " (line " + std::to_string(line_no) + ")", offset, line_no);
  };
  auto check_var = [&](long v) {
    if (v < 1 || v > declared_vars)
      fail("variable " + std::to_string(v) + " out of declared range 1.." +
           std::to_string(declared_vars));
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t line_offset = offset;
    offset += line.size() + 1;
    std::istringstream words(line);
    std::string first;
    if (!(words >> first)) continue;
    offset = line_offset;
    if (first == "c" || first[0] == 'c') {
      if (first == "c" && !header) {
        std::string rest;
        std::getline(words, rest);
        if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);
        std::istringstream named(rest);
        std::string tag, var_name;
        long id = 0;
        if (rest.rfind("var ", 0) == 0 && (named >> tag >> id >> var_name))
          names.emplace_back(id, var_name);
        else
          f.comments().push_back(rest);
      }
      offset = line_offset + line.size() + 1;
      continue;
    }
    if (first == "p") {
      std::string kind;
      if (header) fail("duplicate header");
      if (!(words >> kind >> declared_vars >> declared_clauses) || kind != "cnf" ||
          declared_vars < 0 || declared_clauses < 0)
        fail("malformed header, expected 'p cnf VARS CLAUSES'");
      header = true;
      f.reserve_vars(static_cast<int>(declared_vars));
    } else if (first == "e") {
      if (!header) fail("prefix line before header");
      if (prefix) fail("duplicate prefix line");
      if (!f.clauses().empty() || !pending.empty()) fail("prefix line after clauses");
      prefix = true;
      long v;
      bool closed = false;
      while (words >> v) {
        if (v == 0) {
          closed = true;
          break;
        }
        check_var(v);
        f.set_bound(static_cast<int>(v));
      }
      if (!closed) fail("prefix line must end with 0");
    } else if (first == "a") {
      fail("universal quantifier blocks are not supported");
    } else {
      if (!header) fail("clause before header");
      std::istringstream lits(line);
      std::string word;
      while (lits >> word) {
        char* end = nullptr;
        const long lit = std::strtol(word.c_str(), &end, 10);
        if (*end != '\0') fail("bad literal '" + word + "'");
        if (lit == 0) {
          f.add_clause(pending);
          pending.clear();
          continue;
        }
        check_var(std::labs(lit));
        pending.push_back(static_cast<int>(lit));
      }
    }
    offset = line_offset + line.size() + 1;
  }
  if (!header) fail("missing 'p cnf' header");
  if (!pending.empty()) fail("last clause is not terminated by 0");
  for (const auto& [id, var_name] : names) {
    check_var(id);
    f.set_name(static_cast<int>(id), var_name);
  }
  if (static_cast<long>(f.clauses().size()) != declared_clauses)
    fail("header declares " + std::to_string(declared_clauses) + " clauses, found " +
         std::to_string(f.clauses().size()));
  return f;
}

std::string to_dimacs(const QBFormula& f) {
  std::ostringstream out;
  for (const auto& c : f.comments()) out << "c " << c << '\n';
  for (int v = 1; v <= f.num_vars(); ++v)
    if (!f.name(v).empty()) out << "c var " << v << ' ' << f.name(v) << '\n';
  out << "p cnf " << f.num_vars() << ' ' << f.clauses().size() << '\n';
  const auto bound = f.bound_vars();
  if (!bound.empty()) {
    out << 'e';
    for (int v : bound) out << ' ' << v;
    out << " 0\n";
  }
  for (const auto& c : f.clauses()) {
    for (int lit : c) out << lit << ' ';
    out << "0\n";
  }
  return out.str();
}

namespace {

std::set<int> used_vars(const QBFormula& f) {
  std::set<int> out;
  for (int v = 1; v <= f.num_vars(); ++v) out.insert(v);
  return out;
}

int map_lit(int lit, const std::map<int, int>& m) {
  auto it = m.find(std::abs(lit));
  if (it == m.end()) return lit;
  return lit < 0 ? -it->second : it->second;
}

}  // namespace

QBFormula prenex_conjoin(const QBFormula& a, const QBFormula& b, bool rename) {
  const auto in_a = used_vars(a);
  const auto in_b = used_vars(b);
  int next = std::max(a.num_vars(), b.num_vars());
  std::map<int, int> remap_a, remap_b;
  for (int v : in_a) {
    if (!in_b.count(v)) continue;
    const bool bound_a = a.is_bound(v), bound_b = b.is_bound(v);
    if (!bound_a && !bound_b) continue;
    if (!rename)
      throw PreconditionError("variable " + std::to_string(v) +
                              " is bound in one conjunct and used by the other");
    if (bound_b)
      remap_b[v] = ++next;
    else
      remap_a[v] = ++next;
  }
  QBFormula out(next);
  auto copy_side = [&](const QBFormula& src, const std::map<int, int>& m) {
    for (int v = 1; v <= src.num_vars(); ++v) {
      const int target = m.count(v) ? m.at(v) : v;
      if (src.is_bound(v)) out.set_bound(target);
      if (!src.name(v).empty() && out.name(target).empty()) out.set_name(target, src.name(v));
    }
    for (const auto& c : src.clauses()) {
      Clause mapped;
      for (int lit : c) mapped.push_back(map_lit(lit, m));
      out.add_clause(std::move(mapped));
    }
  };
  copy_side(a, remap_a);
  copy_side(b, remap_b);
  return out;
}

Clause clause_restrict(const Clause& c, const std::vector<int>& vars) {
  Clause out;
  for (int lit : c)
    if (std::binary_search(vars.begin(), vars.end(), std::abs(lit))) out.push_back(lit);
  return out;
}

}  // namespace teamcount
