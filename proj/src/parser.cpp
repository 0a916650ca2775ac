#include "teamcount/parser.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include "teamcount/error.hpp"

namespace teamcount {

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Semi, Amp, Pipe, Dot, Bang, Eq, Neq, Arrow, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '#';
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (ident_start(c)) {
      while (i < s.size() && ident_char(s[i])) ++i;
      out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
      continue;
    }
    auto two = [&](char next) { return i + 1 < s.size() && s[i + 1] == next; };
    switch (c) {
      case '(': out.push_back({Tok::LParen, "(", i++}); break;
      case ')': out.push_back({Tok::RParen, ")", i++}); break;
      case ',': out.push_back({Tok::Comma, ",", i++}); break;
      case ';': out.push_back({Tok::Semi, ";", i++}); break;
      case '.': out.push_back({Tok::Dot, ".", i++}); break;
      case '&': out.push_back({Tok::Amp, "&", i++}); break;
      case '=': out.push_back({Tok::Eq, "=", i++}); break;
      case '+':
      case '*': out.push_back({Tok::Ident, std::string(1, c), i++}); break;
      case '|': out.push_back({Tok::Pipe, "|", i++}); break;
      case '!':
        if (two('=')) {
          out.push_back({Tok::Neq, "!=", i});
          i += 2;
        } else {
          out.push_back({Tok::Bang, "!", i++});
        }
        break;
      case '<':
        if (!two('=')) throw SyntaxError("expected '<='", i);
        out.push_back({Tok::Ident, "<=", i});
        i += 2;
        break;
      case '-':
        if (!two('>')) throw SyntaxError("expected '->'", i);
        out.push_back({Tok::Arrow, "->", i});
        i += 2;
        break;
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", i);
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const Vocabulary* vocabulary)
      : tokens_(lex(text)), vocabulary_(vocabulary) {}

  FormulaPtr parse() {
    auto f = implication();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const Vocabulary* vocabulary_;

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError(what, peek().offset);
  }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  void expect(Tok k, const char* what) {
    if (!accept(k)) fail(std::string("expected ") + what);
  }
  std::string ident() {
    if (peek().kind != Tok::Ident) fail("expected identifier");
    return next().text;
  }

  FormulaPtr implication() {
    const std::size_t at = peek().offset;
    auto lhs = disjunction();
    if (!accept(Tok::Arrow)) return lhs;
    if (!atom_usage(*lhs).first_order())
      throw SyntaxError("antecedent of '->' must be first-order", at);
    return disj(negate(*lhs), implication());
  }

  FormulaPtr disjunction() {
    auto f = conjunction();
    while (accept(Tok::Pipe)) f = disj(f, conjunction());
    return f;
  }

  FormulaPtr conjunction() {
    auto f = unary();
    while (accept(Tok::Amp)) f = conj(f, unary());
    return f;
  }

  bool at_quantifier() const {
    return peek().kind == Tok::Ident && (peek().text == "A" || peek().text == "E") &&
           peek(1).kind == Tok::Ident && peek(2).kind == Tok::Dot;
  }

  FormulaPtr unary() {
    if (at_quantifier()) {
      const bool universal = next().text == "A";
      std::string var = next().text;
      next();
      auto body = implication();
      return universal ? forall(std::move(var), body) : exists(std::move(var), body);
    }
    if (accept(Tok::LParen)) {
      auto f = implication();
      expect(Tok::RParen, "')'");
      return f;
    }
    return atom();
  }

  VarTuple var_list() {
    VarTuple vars;
    if (peek().kind != Tok::Ident) return vars;
    vars.push_back(ident());
    while (accept(Tok::Comma)) vars.push_back(ident());
    return vars;
  }

  void check_arity(const std::string& name, std::size_t arity, std::size_t at) const {
    if (name == "<=") {
      if (arity == 0 || arity % 2) throw ArityError("'<=' needs an even positive arity");
      return;
    }
    if (name == "+" || name == "*") {
      if (arity == 0 || arity % 3) throw ArityError("'" + name + "' needs arity divisible by 3");
      return;
    }
    if (arity == 0) throw SyntaxError("relation " + name + " without arguments", at);
    if (!vocabulary_) return;
    auto it = vocabulary_->find(name);
    if (it == vocabulary_->end())
      throw ArityError("relation " + name + " is not in the vocabulary");
    if (it->second != arity)
      throw ArityError("relation " + name + " has arity " + std::to_string(it->second) +
                       ", used with " + std::to_string(arity));
  }

  FormulaPtr relation(bool negated) {
    const std::size_t at = peek().offset;
    std::string name = ident();
    expect(Tok::LParen, "'('");
    VarTuple args = var_list();
    expect(Tok::RParen, "')'");
    check_arity(name, args.size(), at);
    return rel(std::move(name), std::move(args), negated);
  }

  FormulaPtr atom() {
    if (accept(Tok::Bang)) return relation(true);
    if (peek().kind != Tok::Ident) fail("expected a formula");
    const std::string& word = peek().text;
    const bool call = peek(1).kind == Tok::LParen;
    if (word == "dep" && call) {
      pos_ += 2;
      VarTuple xs = var_list();
      expect(Tok::Semi, "';'");
      std::string y = ident();
      expect(Tok::RParen, "')'");
      return dep(std::move(xs), std::move(y));
    }
    if (word == "inc" && call) {
      pos_ += 2;
      const std::size_t at = peek().offset;
      VarTuple xs = var_list();
      expect(Tok::Semi, "';'");
      VarTuple ys = var_list();
      expect(Tok::RParen, "')'");
      if (xs.size() != ys.size() || xs.empty())
        throw ArityError("inclusion atom at offset " + std::to_string(at) +
                         " needs nonempty tuples of equal length");
      return incl(std::move(xs), std::move(ys));
    }
    if (word == "ind" && call) {
      pos_ += 2;
      VarTuple ys = var_list();
      expect(Tok::Pipe, "'|'");
      VarTuple xs = var_list();
      expect(Tok::Pipe, "'|'");
      VarTuple zs = var_list();
      expect(Tok::RParen, "')'");
      return indep(std::move(ys), std::move(xs), std::move(zs));
    }
    if (word == "atom" && peek(1).kind == Tok::Ident) {
      ++pos_;
      std::string name = ident();
      expect(Tok::LParen, "'('");
      std::vector<VarTuple> tuples{var_list()};
      while (accept(Tok::Semi)) tuples.push_back(var_list());
      expect(Tok::RParen, "')'");
      return gen_atom(std::move(name), std::move(tuples));
    }
    if (call) return relation(false);
    std::string x = ident();
    bool negated = false;
    if (accept(Tok::Neq)) {
      negated = true;
    } else {
      expect(Tok::Eq, "'=' or '!='");
    }
    std::string y = ident();
    return eq(std::move(x), std::move(y), negated);
  }
};

}  // namespace

FormulaPtr parse_team_formula(std::string_view text, const Vocabulary* vocabulary) {
  return Parser(text, vocabulary).parse();
}

}  // namespace teamcount
