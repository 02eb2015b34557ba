// SPDX-License-Identifier: Apache-2.0
#include "synopt/parser.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace synopt {

namespace {

enum class Tok {
  Ident,
  Number,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Semi,
  Comma,
  Slash,
  Equals,
  Colon,
  Dot,
  Amp,
  Pipe,
  Bang,
  Arrow,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::Slash: return "'/'";
    case Tok::Equals: return "'='";
    case Tok::Colon: return "':'";
    case Tok::Dot: return "'.'";
    case Tok::Amp: return "'&'";
    case Tok::Pipe: return "'|'";
    case Tok::Bang: return "'!'";
    case Tok::Arrow: return "'->'";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto span = [&]() { return SourceSpan{line, col, i}; };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    SourceSpan here = span();
    auto push = [&](Tok k, std::size_t len) {
      out.push_back({k, text.substr(i, len), here});
      i += len;
      col += len;
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) ||
              text[j] == '_'))
        ++j;
      push(Tok::Ident, j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[j])))
        ++j;
      push(Tok::Number, j - i);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      push(Tok::Arrow, 2);
      continue;
    }
    switch (c) {
      case '(': push(Tok::LParen, 1); continue;
      case ')': push(Tok::RParen, 1); continue;
      case '{': push(Tok::LBrace, 1); continue;
      case '}': push(Tok::RBrace, 1); continue;
      case ';': push(Tok::Semi, 1); continue;
      case ',': push(Tok::Comma, 1); continue;
      case '/': push(Tok::Slash, 1); continue;
      case '=': push(Tok::Equals, 1); continue;
      case ':': push(Tok::Colon, 1); continue;
      case '.': push(Tok::Dot, 1); continue;
      case '&': push(Tok::Amp, 1); continue;
      case '|': push(Tok::Pipe, 1); continue;
      case '!': push(Tok::Bang, 1); continue;
      default:
        input_error(std::string("unexpected character '") + c + "'", here);
    }
  }
  out.push_back({Tok::End, "", span()});
  return out;
}

const std::set<std::string> kKeywords = {"universe", "rel",   "const",
                                         "sovar",    "count", "forall"};

class Cursor {
 public:
  explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  bool at(Tok k) const { return peek().kind == k; }
  bool at_keyword(const std::string& kw) const {
    return at(Tok::Ident) && peek().text == kw;
  }

  Token expect(Tok k, const std::string& what) {
    if (!at(k))
      input_error("expected " + what + ", found " +
                      describe(peek()),
                  peek().span);
    return next();
  }

  Token expect_keyword(const std::string& kw) {
    if (!at_keyword(kw))
      input_error("expected '" + kw + "', found " + describe(peek()),
                  peek().span);
    return next();
  }

  std::string expect_name(const std::string& what) {
    Token t = expect(Tok::Ident, what);
    if (kKeywords.count(t.text))
      input_error("keyword '" + t.text + "' cannot be used as " + what,
                  t.span);
    return t.text;
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::Ident || t.kind == Tok::Number)
      return "'" + t.text + "'";
    return tok_name(t.kind);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

unsigned parse_arity(Cursor& cur) {
  Token t = cur.expect(Tok::Number, "arity");
  unsigned long v = 0;
  try {
    v = std::stoul(t.text);
  } catch (...) {
    input_error("arity out of range", t.span);
  }
  if (v == 0 || v > 8) input_error("arity must be between 1 and 8", t.span);
  return static_cast<unsigned>(v);
}

}  // namespace

FiniteStructure parse_structure(const std::string& text) {
  Cursor cur(lex(text));
  cur.expect_keyword("universe");
  std::vector<std::string> universe;
  SourceSpan uspan = cur.peek().span;
  while (cur.at(Tok::Ident) && !kKeywords.count(cur.peek().text)) {
    Token t = cur.next();
    for (const auto& e : universe)
      if (e == t.text)
        input_error("duplicate universe element '" + t.text + "'", t.span);
    universe.push_back(t.text);
  }
  if (universe.empty()) input_error("empty universe", uspan);
  cur.expect(Tok::Semi, "';'");

  Vocabulary vocab;
  struct ConstDecl {
    std::string name, elem;
    SourceSpan span;
  };
  struct RelDecl {
    std::string name;
    std::vector<std::pair<std::vector<std::string>, SourceSpan>> tuples;
  };
  std::vector<ConstDecl> consts;
  std::vector<RelDecl> rels;

  while (!cur.at(Tok::End)) {
    if (cur.at_keyword("rel")) {
      cur.next();
      Token nameTok = cur.peek();
      std::string name = cur.expect_name("relation name");
      if (vocab.has_name(name))
        input_error("duplicate symbol '" + name + "'", nameTok.span);
      cur.expect(Tok::Slash, "'/'");
      unsigned arity = parse_arity(cur);
      vocab.add_relation(name, arity, SymbolKind::FirstOrder);
      cur.expect(Tok::LBrace, "'{'");
      RelDecl decl{name, {}};
      while (cur.at(Tok::LParen)) {
        SourceSpan tspan = cur.peek().span;
        cur.next();
        std::vector<std::string> elems;
        elems.push_back(cur.expect_name("element"));
        while (cur.at(Tok::Comma)) {
          cur.next();
          elems.push_back(cur.expect_name("element"));
        }
        cur.expect(Tok::RParen, "')'");
        decl.tuples.emplace_back(std::move(elems), tspan);
      }
      cur.expect(Tok::RBrace, "'}'");
      cur.expect(Tok::Semi, "';'");
      rels.push_back(std::move(decl));
    } else if (cur.at_keyword("const")) {
      cur.next();
      Token nameTok = cur.peek();
      std::string name = cur.expect_name("constant name");
      if (vocab.has_name(name))
        input_error("duplicate symbol '" + name + "'", nameTok.span);
      vocab.add_constant(name);
      cur.expect(Tok::Equals, "'='");
      Token elemTok = cur.peek();
      std::string elem = cur.expect_name("element");
      cur.expect(Tok::Semi, "';'");
      consts.push_back({name, elem, elemTok.span});
    } else {
      input_error("expected 'rel' or 'const', found " +
                      Cursor::describe(cur.peek()),
                  cur.peek().span);
    }
  }

  FiniteStructure structure(vocab, universe);
  for (const auto& r : rels)
    for (const auto& [elems, span] : r.tuples)
      structure.add_tuple(r.name, elems, span);
  for (const auto& c : consts) structure.set_constant(c.name, c.elem, c.span);
  return structure;
}

namespace {

class QueryParser {
 public:
  QueryParser(Cursor& cur, const Vocabulary& vocab,
              const std::set<std::string>& vars)
      : cur_(cur), vocab_(vocab), vars_(vars) {}

  // expr := or ('->' expr)?   right-associative
  Formula expr() {
    Formula lhs = disjunct();
    if (cur_.at(Tok::Arrow)) {
      cur_.next();
      return Formula::implies(lhs, expr());
    }
    return lhs;
  }

 private:
  Formula disjunct() {
    Formula lhs = conjunct();
    while (cur_.at(Tok::Pipe)) {
      cur_.next();
      lhs = Formula::disj(lhs, conjunct());
    }
    return lhs;
  }

  Formula conjunct() {
    Formula lhs = unary();
    while (cur_.at(Tok::Amp)) {
      cur_.next();
      lhs = Formula::conj(lhs, unary());
    }
    return lhs;
  }

  Formula unary() {
    if (cur_.at(Tok::Bang)) {
      cur_.next();
      return Formula::negation(unary());
    }
    return primary();
  }

  Formula primary() {
    if (cur_.at(Tok::LParen)) {
      cur_.next();
      Formula f = expr();
      cur_.expect(Tok::RParen, "')'");
      return f;
    }
    if (cur_.at_keyword("forall"))
      input_error("quantifier inside the matrix; only one leading block "
                  "of universal quantifiers is allowed",
                  cur_.peek().span);
    if (!cur_.at(Tok::Ident))
      input_error("expected an atom, found " + Cursor::describe(cur_.peek()),
                  cur_.peek().span);

    Token head = cur_.next();
    if (cur_.at(Tok::LParen)) {
      const RelationSymbol* sym = vocab_.find_relation(head.text);
      if (!sym)
        input_error("unknown relation '" + head.text + "'", head.span);
      cur_.next();
      std::vector<Term> args;
      args.push_back(term());
      while (cur_.at(Tok::Comma)) {
        cur_.next();
        args.push_back(term());
      }
      cur_.expect(Tok::RParen, "')'");
      if (args.size() != sym->arity)
        input_error("arity mismatch for '" + head.text + "': expected " +
                        std::to_string(sym->arity) + " got " +
                        std::to_string(args.size()),
                    head.span);
      return Formula::leaf(rel_atom(head.text, std::move(args)));
    }
    if (cur_.at(Tok::Equals)) {
      Term lhs = resolve(head);
      cur_.next();
      Term rhs = term();
      return Formula::leaf(eq_atom(lhs, rhs));
    }
    input_error("expected '(' or '=' after '" + head.text + "'",
                cur_.peek().span);
  }

  Term term() {
    Token t = cur_.expect(Tok::Ident, "term");
    if (kKeywords.count(t.text))
      input_error("keyword '" + t.text + "' cannot be used as a term",
                  t.span);
    return resolve(t);
  }

  Term resolve(const Token& t) {
    if (vocab_.has_constant(t.text)) return cons(t.text);
    if (vocab_.find_relation(t.text))
      input_error("relation symbol '" + t.text + "' used as a term", t.span);
    if (!vars_.count(t.text))
      input_error("variable '" + t.text +
                      "' not declared in the count tuple or forall block",
                  t.span);
    return var(t.text);
  }

  Cursor& cur_;
  const Vocabulary& vocab_;
  const std::set<std::string>& vars_;
};

}  // namespace

Query parse_query(const std::string& text, const Vocabulary& base) {
  Cursor cur(lex(text));
  Query q;
  q.vocab = base;

  while (cur.at_keyword("sovar")) {
    cur.next();
    Token nameTok = cur.peek();
    std::string name = cur.expect_name("second-order symbol");
    if (q.vocab.has_name(name))
      input_error("duplicate symbol '" + name + "'", nameTok.span);
    cur.expect(Tok::Slash, "'/'");
    unsigned arity = parse_arity(cur);
    q.vocab.add_relation(name, arity, SymbolKind::SecondOrder);
    cur.expect(Tok::Semi, "';'");
  }

  cur.expect_keyword("count");
  cur.expect(Tok::LParen, "'('");
  std::set<std::string> seen;
  if (!cur.at(Tok::RParen)) {
    for (;;) {
      Token t = cur.peek();
      std::string name = cur.expect_name("variable");
      if (q.vocab.has_name(name))
        input_error("variable '" + name + "' clashes with a declared symbol",
                    t.span);
      if (!seen.insert(name).second)
        input_error("duplicate variable '" + name + "'", t.span);
      q.free_vars.push_back(name);
      if (!cur.at(Tok::Comma)) break;
      cur.next();
    }
  }
  cur.expect(Tok::RParen, "')'");
  cur.expect(Tok::Colon, "':'");

  if (cur.at_keyword("forall")) {
    cur.next();
    for (;;) {
      Token t = cur.peek();
      if (!cur.at(Tok::Ident) || kKeywords.count(t.text)) break;
      cur.next();
      if (q.vocab.has_name(t.text))
        input_error("variable '" + t.text + "' clashes with a declared symbol",
                    t.span);
      if (!seen.insert(t.text).second)
        input_error("duplicate variable '" + t.text + "'", t.span);
      q.bound_vars.push_back(t.text);
    }
    if (q.bound_vars.empty())
      input_error("forall block declares no variables", cur.peek().span);
    cur.expect(Tok::Dot, "'.'");
  }

  QueryParser parser(cur, q.vocab, seen);
  q.matrix = parser.expr();
  cur.expect(Tok::End, "end of input");
  return q;
}

namespace {

std::string term_str(const Term& t) { return t.name; }

std::string atom_str(const Atom& a) {
  if (a.kind == Atom::Kind::Equality)
    return term_str(a.args.at(0)) + " = " + term_str(a.args.at(1));
  std::string out = a.symbol + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ",";
    out += term_str(a.args[i]);
  }
  return out + ")";
}

int prec(const Formula::Node& n) {
  switch (n.op) {
    case Formula::Op::Or: return 1;
    case Formula::Op::And: return 2;
    case Formula::Op::Not: return 3;
    case Formula::Op::Leaf:
      return n.atom.kind == Atom::Kind::Equality ? 0 : 4;
  }
  return 4;
}

void print_node(const Formula::Node& n, int parent_prec, bool right_side,
                std::string& out) {
  int p = prec(n);
  bool parens = p < parent_prec || (p == parent_prec && right_side &&
                                    n.op != Formula::Op::Leaf &&
                                    n.op != Formula::Op::Not);
  if (n.op == Formula::Op::Leaf && n.atom.kind == Atom::Kind::Equality)
    parens = parent_prec > 0;
  if (parens) out += "(";
  switch (n.op) {
    case Formula::Op::Leaf:
      out += atom_str(n.atom);
      break;
    case Formula::Op::Not:
      out += "!";
      print_node(*n.lhs, 3, false, out);
      break;
    case Formula::Op::And:
      print_node(*n.lhs, 2, false, out);
      out += " & ";
      print_node(*n.rhs, 2, true, out);
      break;
    case Formula::Op::Or:
      print_node(*n.lhs, 1, false, out);
      out += " | ";
      print_node(*n.rhs, 1, true, out);
      break;
  }
  if (parens) out += ")";
}

}  // namespace

std::string print_formula(const Formula& f) {
  std::string out;
  print_node(f.root(), 0, false, out);
  return out;
}

std::string print_structure(const FiniteStructure& structure) {
  std::ostringstream out;
  out << "universe";
  for (const auto& e : structure.universe()) out << " " << e;
  out << ";\n";
  for (const auto& r : structure.vocab().relations()) {
    if (r.kind != SymbolKind::FirstOrder) continue;
    out << "rel " << r.name << "/" << r.arity << " {";
    for (const auto& tuple : structure.tuples(r.name)) {
      out << " (";
      for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (i) out << ",";
        out << structure.elem_name(tuple[i]);
      }
      out << ")";
    }
    out << " };\n";
  }
  for (const auto& c : structure.vocab().constants())
    out << "const " << c << " = "
        << structure.elem_name(structure.constant_value(c)) << ";\n";
  return out.str();
}

std::string print_query(const Query& query) {
  std::ostringstream out;
  for (const auto& r : query.vocab.relations())
    if (r.kind == SymbolKind::SecondOrder)
      out << "sovar " << r.name << "/" << r.arity << ";\n";
  out << "count (";
  for (std::size_t i = 0; i < query.free_vars.size(); ++i) {
    if (i) out << ",";
    out << query.free_vars[i];
  }
  out << ") : ";
  if (!query.bound_vars.empty()) {
    out << "forall";
    for (const auto& v : query.bound_vars) out << " " << v;
    out << " . ";
  }
  out << print_formula(query.matrix) << "\n";
  return out.str();
}

}  // namespace synopt
