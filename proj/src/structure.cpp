#include "teamcount/structure.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <sstream>

#include "teamcount/error.hpp"

namespace teamcount {

std::uint64_t checked_power(std::uint64_t n, std::size_t k) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (n != 0 && out > (std::numeric_limits<std::uint64_t>::max() >> 1) / n)
      throw BudgetExceeded("n^" + std::to_string(k) + " does not fit into 63 bits");
    out *= n;
  }
  return out;
}

Structure::Structure(std::size_t n) : n_(n), label_base_(n) {
  if (n == 0) throw PreconditionError("structures need a nonempty domain");
}

std::size_t Structure::add_relation(const std::string& name, std::size_t arity) {
  if (arity == 0) throw ArityError("relation " + name + " needs a positive arity");
  if (is_builtin_relation(name)) throw PreconditionError(name + " is a built-in relation");
  if (index_.count(name)) throw PreconditionError("duplicate relation " + name);
  const auto cells = checked_power(n_, arity);
  if (cells > (std::uint64_t{1} << 32)) throw BudgetExceeded("relation " + name + " too large");
  relations_.push_back({name, arity, std::vector<bool>(cells, false)});
  index_[name] = relations_.size() - 1;
  return relations_.size() - 1;
}

std::size_t Structure::relation_index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw PreconditionError("unknown relation " + name);
  return it->second;
}

const Structure::Relation& Structure::relation(const std::string& name) const {
  return relations_[relation_index(name)];
}

Vocabulary Structure::vocabulary() const {
  Vocabulary v;
  for (const auto& r : relations_) v[r.name] = r.arity;
  return v;
}

std::size_t Structure::rank(std::span<const Element> t) const {
  std::size_t r = 0;
  for (auto e : t) {
    if (e >= n_) throw PreconditionError("element " + std::to_string(e) + " out of domain");
    r = r * n_ + e;
  }
  return r;
}

Tuple Structure::unrank(std::size_t rank, std::size_t arity) const {
  Tuple t(arity);
  for (std::size_t i = arity; i-- > 0;) {
    t[i] = rank % n_;
    rank /= n_;
  }
  return t;
}

void Structure::add_tuple(const std::string& name, const Tuple& t) {
  auto& r = relations_[relation_index(name)];
  if (t.size() != r.arity)
    throw ArityError("tuple of length " + std::to_string(t.size()) + " for " + name + "/" +
                     std::to_string(r.arity));
  r.bits[rank(t)] = true;
}

void Structure::set_bit(std::size_t rel, std::size_t rank, bool value) {
  relations_.at(rel).bits.at(rank) = value;
}

bool Structure::holds(std::size_t rel, std::span<const Element> t) const {
  const auto& r = relations_[rel];
  if (t.size() != r.arity) throw ArityError("arity mismatch for " + r.name);
  return r.bits[rank(t)];
}

bool Structure::holds(const std::string& name, std::span<const Element> t) const {
  if (is_builtin_relation(name)) return builtin_holds(name, t);
  return holds(relation_index(name), t);
}

std::vector<Tuple> Structure::tuples(const std::string& name) const {
  const auto& r = relation(name);
  std::vector<Tuple> out;
  for (std::size_t i = 0; i < r.bits.size(); ++i)
    if (r.bits[i]) out.push_back(unrank(i, r.arity));
  return out;
}

bool Structure::builtin_holds(const std::string& name, std::span<const Element> t) const {
  const std::size_t parts = name == "<=" ? 2 : 3;
  if (t.empty() || t.size() % parts) throw ArityError("bad arity for built-in " + name);
  const std::size_t k = t.size() / parts;
  auto block = [&](std::size_t b) {
    unsigned __int128 v = 0;
    for (std::size_t i = 0; i < k; ++i) v = v * label_base_ + label(t[b * k + i]);
    return v;
  };
  if (name == "<=") return block(0) <= block(1);
  if (name == "+") return block(0) + block(1) == block(2);
  if (name == "*") return block(0) * block(1) == block(2);
  throw PreconditionError("unknown built-in " + name);
}

void Structure::set_labels(std::vector<std::uint64_t> labels, std::uint64_t base) {
  if (labels.size() != n_) throw PreconditionError("one label per element required");
  labels_ = std::move(labels);
  label_base_ = base;
}

const std::string& Structure::element_name(Element e) const {
  static const std::string none;
  return e < names_.size() ? names_[e] : none;
}

void Structure::set_element_name(Element e, std::string name) {
  if (e >= n_) throw PreconditionError("element out of domain");
  if (names_.empty()) names_.resize(n_);
  names_[e] = std::move(name);
}

bool Structure::operator==(const Structure& other) const {
  if (n_ != other.n_ || relations_.size() != other.relations_.size()) return false;
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    const auto &a = relations_[i], &b = other.relations_[i];
    if (a.name != b.name || a.arity != b.arity || a.bits != b.bits) return false;
  }
  return true;
}

Team::Team(VarTuple vars, std::vector<Tuple> rows) : vars_(std::move(vars)) {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    for (std::size_t j = i + 1; j < vars_.size(); ++j)
      if (vars_[i] == vars_[j]) throw PreconditionError("team variable repeated: " + vars_[i]);
  for (auto& r : rows) {
    if (r.size() != vars_.size()) throw ArityError("team row has the wrong width");
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  rows_ = std::move(rows);
}

Team Team::full(std::size_t n, const VarTuple& vars) {
  const auto count = checked_power(n, vars.size());
  std::vector<Tuple> rows;
  rows.reserve(count);
  for (std::uint64_t code = 0; code < count; ++code) {
    Tuple t(vars.size());
    auto c = code;
    for (std::size_t i = vars.size(); i-- > 0;) {
      t[i] = c % n;
      c /= n;
    }
    rows.push_back(std::move(t));
  }
  return Team(vars, std::move(rows));
}

bool Team::contains(const Tuple& row) const {
  return std::binary_search(rows_.begin(), rows_.end(), row);
}

void Team::insert(Tuple row) {
  if (row.size() != vars_.size()) throw ArityError("team row has the wrong width");
  auto it = std::lower_bound(rows_.begin(), rows_.end(), row);
  if (it == rows_.end() || *it != row) rows_.insert(it, std::move(row));
}

std::vector<Tuple> Team::project(const VarTuple& vars) const {
  std::vector<std::size_t> pos;
  for (const auto& v : vars) {
    auto it = std::find(vars_.begin(), vars_.end(), v);
    if (it == vars_.end()) throw UnboundVariableError("variable " + v + " not in team domain");
    pos.push_back(static_cast<std::size_t>(it - vars_.begin()));
  }
  std::vector<Tuple> out;
  for (const auto& r : rows_) {
    Tuple t;
    for (auto p : pos) t.push_back(r[p]);
    out.push_back(std::move(t));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

Tuple parse_row(std::istringstream& words, std::size_t line_no) {
  Tuple t;
  std::string w;
  while (words >> w) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(w, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != w.size() || w[0] == '-')
      throw SyntaxError("expected an element, got '" + w + "' on line " + std::to_string(line_no),
                        0, line_no);
    t.push_back(static_cast<Element>(v));
  }
  return t;
}

}  // namespace

Structure parse_structure(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  std::optional<Structure> s;
  std::string current;
  auto fail = [&](const std::string& what) {
    throw SyntaxError(what + " on line " + std::to_string(line_no), 0, line_no);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::istringstream words(strip_comment(raw));
    std::string head;
    if (!(words >> head)) continue;
    if (head == "domain") {
      if (s) fail("duplicate domain line");
      long long n = 0;
      if (!(words >> n) || n <= 0) fail("domain needs a positive size");
      s.emplace(static_cast<std::size_t>(n));
      continue;
    }
    if (!s) fail("'domain N' must come first");
    if (head == "names") {
      std::string name;
      Element e = 0;
      while (words >> name) {
        if (e >= s->size()) fail("more names than elements");
        s->set_element_name(e++, name);
      }
      continue;
    }
    if (head == "rel") {
      std::string spec;
      if (!(words >> spec)) fail("rel needs NAME/ARITY");
      const auto slash = spec.rfind('/');
      if (slash == std::string::npos || slash == 0) fail("rel needs NAME/ARITY");
      std::size_t arity = 0;
      try {
        arity = std::stoul(spec.substr(slash + 1));
      } catch (const std::exception&) {
        fail("bad arity in '" + spec + "'");
      }
      current = spec.substr(0, slash);
      try {
        s->add_relation(current, arity);
      } catch (const Error& e) {
        fail(e.what());
      }
      continue;
    }
    if (current.empty()) fail("tuple outside of a relation block");
    std::istringstream row(strip_comment(raw));
    Tuple t = parse_row(row, line_no);
    const auto arity = s->relation(current).arity;
    if (t.size() != arity) fail("tuple of length " + std::to_string(t.size()) + " for arity " +
                                std::to_string(arity));
    for (auto e : t)
      if (e >= s->size()) fail("element " + std::to_string(e) + " out of domain");
    s->add_tuple(current, t);
  }
  if (!s) throw SyntaxError("missing 'domain N' line", 0, line_no);
  return *s;
}

std::string format_structure(const Structure& s) {
  std::ostringstream out;
  out << "domain " << s.size() << '\n';
  if (s.has_element_names()) {
    out << "names";
    for (Element e = 0; e < s.size(); ++e) out << ' ' << s.element_name(e);
    out << '\n';
  }
  for (const auto& r : s.relations()) {
    out << "rel " << r.name << '/' << r.arity << '\n';
    for (const auto& t : s.tuples(r.name)) {
      for (std::size_t i = 0; i < t.size(); ++i) out << (i ? " " : "") << t[i];
      out << '\n';
    }
  }
  return out.str();
}

Team parse_team(std::string_view text, std::size_t domain_size) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  VarTuple vars;
  std::vector<Tuple> rows;
  while (std::getline(in, raw)) {
    ++line_no;
    std::istringstream words(strip_comment(raw));
    if (!have_header) {
      std::string v;
      while (words >> v) vars.push_back(v);
      if (vars.empty()) continue;
      have_header = true;
      continue;
    }
    Tuple t = parse_row(words, line_no);
    if (t.empty()) continue;
    if (t.size() != vars.size())
      throw SyntaxError("row width differs from header on line " + std::to_string(line_no), 0,
                        line_no);
    for (auto e : t)
      if (e >= domain_size)
        throw SyntaxError("element out of domain on line " + std::to_string(line_no), 0, line_no);
    rows.push_back(std::move(t));
  }
  if (!have_header) throw SyntaxError("team file needs a header of variable names", 0, line_no);
  return Team(std::move(vars), std::move(rows));
}

std::string format_team(const Team& t) {
  std::ostringstream out;
  for (std::size_t i = 0; i < t.vars().size(); ++i) out << (i ? " " : "") << t.vars()[i];
  out << '\n';
  for (const auto& r : t.rows()) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? " " : "") << r[i];
    out << '\n';
  }
  return out.str();
}

}  // namespace teamcount
