#include "erkit/textio.hpp"

#include <cctype>
#include <sstream>

#include "erkit/chase.hpp"
#include "json.hpp"

namespace erkit {

namespace {

enum class TokKind { Ident, LParen, RParen, Comma, Dot, Arrow, BackArrow, Question, Colon, End };

struct Token {
  TokKind kind;
  std::string text;
  SourceSpan span;
};

class Lexer {
 public:
  Lexer(const std::string& text, const std::string& file) : text_(text) { span_.file = file; }

  Token next() {
    skip_ws();
    Token t{TokKind::End, "", span_};
    if (pos_ >= text_.size()) return t;
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
              text_[pos_] == '\''))
        advance();
      t.kind = TokKind::Ident;
      t.text = text_.substr(start, pos_ - start);
      return t;
    }
    switch (c) {
      case '(': advance(); t.kind = TokKind::LParen; return t;
      case ')': advance(); t.kind = TokKind::RParen; return t;
      case ',': advance(); t.kind = TokKind::Comma; return t;
      case '.': advance(); t.kind = TokKind::Dot; return t;
      case '?': advance(); t.kind = TokKind::Question; return t;
      case ':': advance(); t.kind = TokKind::Colon; return t;
      case '-':
        advance();
        if (pos_ < text_.size() && text_[pos_] == '>') {
          advance();
          t.kind = TokKind::Arrow;
          return t;
        }
        throw ParseError(t.span, "expected '->'");
      case '<':
        advance();
        if (pos_ < text_.size() && text_[pos_] == '-') {
          advance();
          t.kind = TokKind::BackArrow;
          return t;
        }
        throw ParseError(t.span, "expected '<-'");
      default:
        throw ParseError(t.span, std::string("unexpected character '") + c + "'");
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++span_.line;
      span_.column = 1;
    } else {
      ++span_.column;
    }
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  SourceSpan span_;
};

class Parser {
 public:
  Parser(const std::string& text, const std::string& file) : lex_(text, file) { shift(); }

  bool at_end() const { return tok_.kind == TokKind::End; }
  const Token& peek() const { return tok_; }

  Token expect(TokKind kind, const std::string& what) {
    if (tok_.kind != kind) throw ParseError(tok_.span, "expected " + what);
    Token t = tok_;
    shift();
    return t;
  }

  bool accept(TokKind kind) {
    if (tok_.kind != kind) return false;
    shift();
    return true;
  }

  // atom := PRED "(" [termlist] ")" | "true" ; lowercase terms become
  // variables or constants per `ground`.
  Atom parse_atom(bool ground) {
    Token name = expect(TokKind::Ident, "a predicate name");
    if (name.text == "true") return top_atom();
    if (!std::isupper(static_cast<unsigned char>(name.text[0])))
      throw ParseError(name.span, "predicate names start uppercase: " + name.text);
    expect(TokKind::LParen, "'('");
    std::vector<Term> args;
    if (!accept(TokKind::RParen)) {
      do {
        Token arg = expect(TokKind::Ident, "a term");
        if (std::isupper(static_cast<unsigned char>(arg.text[0])))
          throw ParseError(arg.span, "terms start lowercase: " + arg.text);
        args.push_back(ground ? constant(arg.text) : variable(arg.text));
      } while (accept(TokKind::Comma));
      expect(TokKind::RParen, "')'");
    }
    return Atom{Predicate{name.text, static_cast<int>(args.size())}, std::move(args)};
  }

  AtomSet parse_atomlist(bool ground) {
    AtomSet atoms;
    do {
      atoms.insert(parse_atom(ground));
    } while (accept(TokKind::Comma));
    return atoms;
  }

  std::vector<Term> parse_varlist_until(TokKind stop, const std::string& stop_text) {
    std::vector<Term> vars;
    if (accept(stop)) return vars;
    do {
      Token v = expect(TokKind::Ident, "a variable");
      if (std::isupper(static_cast<unsigned char>(v.text[0])))
        throw ParseError(v.span, "variables start lowercase: " + v.text);
      vars.push_back(variable(v.text));
    } while (accept(TokKind::Comma));
    expect(stop, stop_text);
    return vars;
  }

 private:
  void shift() { tok_ = lex_.next(); }

  Lexer lex_;
  Token tok_{TokKind::End, "", {}};
};

void check_signature(const AtomSet& atoms, Signature& sig, const SourceSpan& span) {
  for (const auto& a : atoms) {
    auto [it, fresh] = sig.emplace(a.pred.name, a.pred.arity);
    if (!fresh && it->second != a.pred.arity)
      throw ParseError(span, "predicate " + a.pred.name + " used with conflicting arities");
  }
}

}  // namespace

RuleSet parse_rules(const std::string& text, const std::string& file) {
  Parser p(text, file);
  std::vector<Rule> rules;
  Signature sig;
  int n = 0;
  while (!p.at_end()) {
    SourceSpan span = p.peek().span;
    AtomSet body = p.parse_atomlist(/*ground=*/false);
    p.expect(TokKind::Arrow, "'->'");

    std::vector<Term> declared;
    if (p.accept(TokKind::Question)) {
      do {
        Token v = p.expect(TokKind::Ident, "an existential variable");
        declared.push_back(variable(v.text));
      } while (p.accept(TokKind::Comma));
      p.expect(TokKind::Colon, "':'");
    }
    if (p.peek().kind == TokKind::Dot) throw ParseError(p.peek().span, "empty rule head");
    AtomSet head = p.parse_atomlist(/*ground=*/false);
    p.expect(TokKind::Dot, "'.'");

    body.erase(top_atom());
    if (body.empty()) body.insert(top_atom());
    head.erase(top_atom());
    if (head.empty()) throw ParseError(span, "empty rule head");

    std::set<Term> body_vars = variables_of(body);
    std::set<Term> head_vars = variables_of(head);
    for (const auto& z : declared) {
      if (body_vars.count(z))
        throw ParseError(span, "existential variable " + z.name + " used in the body");
      if (!head_vars.count(z))
        throw ParseError(span, "declared existential " + z.name + " does not occur in the head");
    }
    std::set<Term> declared_set(declared.begin(), declared.end());
    for (const auto& v : head_vars)
      if (!body_vars.count(v) && !declared_set.count(v))
        throw ParseError(span, "head variable " + v.name +
                                   " neither occurs in the body nor is declared existential");

    check_signature(body, sig, span);
    check_signature(head, sig, span);
    rules.emplace_back("r" + std::to_string(++n), std::move(body), std::move(head));
  }
  return RuleSet{std::move(rules)};
}

Instance parse_facts(const std::string& text, const std::string& file) {
  Parser p(text, file);
  AtomSet atoms;
  Signature sig;
  while (!p.at_end()) {
    SourceSpan span = p.peek().span;
    Atom a = p.parse_atom(/*ground=*/true);
    p.expect(TokKind::Dot, "'.'");
    check_signature({a}, sig, span);
    atoms.insert(std::move(a));
  }
  return Instance{std::move(atoms)};
}

CQ parse_query(const std::string& text, const std::string& file) {
  Parser p(text, file);
  SourceSpan span = p.peek().span;
  p.expect(TokKind::Question, "'?'");
  p.expect(TokKind::LParen, "'('");
  std::vector<Term> answer = p.parse_varlist_until(TokKind::RParen, "')'");
  p.expect(TokKind::BackArrow, "'<-'");
  AtomSet atoms = p.parse_atomlist(/*ground=*/false);
  p.expect(TokKind::Dot, "'.'");
  if (!p.at_end()) throw ParseError(p.peek().span, "trailing input after the query");
  try {
    return CQ{std::move(atoms), std::move(answer)};
  } catch (const Error& e) {
    throw ParseError(span, e.what());
  }
}

std::string to_text(const Term& t) { return t.name; }

std::string to_text(const Atom& a) {
  if (a.pred.arity == 0) return a.pred.name == "true" ? "true" : a.pred.name + "()";
  std::string out = a.pred.name + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ",";
    out += a.args[i].name;
  }
  return out + ")";
}

namespace {

std::string join_atoms(const AtomSet& atoms) {
  std::string out;
  for (const auto& a : atoms) {
    if (!out.empty()) out += ", ";
    out += to_text(a);
  }
  return out;
}

}  // namespace

std::string to_text(const Rule& r) {
  std::string out = join_atoms(r.body()) + " -> ";
  if (!r.existentials().empty()) {
    out += "? ";
    bool first = true;
    for (const auto& z : r.existentials()) {
      if (!first) out += ", ";
      first = false;
      out += z.name;
    }
    out += " : ";
  }
  return out + join_atoms(r.head()) + " .";
}

std::string to_text(const RuleSet& rs) {
  std::string out;
  for (const auto& r : rs.rules()) out += to_text(r) + "\n";
  return out;
}

std::string to_text(const Instance& db) {
  std::string out;
  for (const auto& a : db.atoms()) {
    if (a == top_atom()) continue;
    out += to_text(a) + ".\n";
  }
  return out;
}

std::string to_text(const CQ& q) {
  std::string out = "?(";
  for (std::size_t i = 0; i < q.answer().size(); ++i) {
    if (i) out += ",";
    out += q.answer()[i].name;
  }
  return out + ") <- " + join_atoms(q.atoms()) + " .";
}

std::string to_text(const UCQ& q) {
  std::string out;
  for (const auto& d : q.disjuncts()) out += to_text(d) + "\n";
  return out;
}

std::string emit_json(const ChaseTrace& trace) {
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < trace.steps().size(); ++i) {
    nlohmann::ordered_json new_atoms = nlohmann::ordered_json::array();
    const AtomSet& here = trace.steps()[i].atoms();
    const AtomSet* before = i ? &trace.steps()[i - 1].atoms() : nullptr;
    for (const auto& a : here) {
      if (before && before->count(a)) continue;
      nlohmann::ordered_json args = nlohmann::ordered_json::array();
      for (const auto& t : a.args) args.push_back(t.name);
      new_atoms.push_back({{"pred", a.pred.name}, {"args", args}});
    }
    steps.push_back({{"index", i}, {"new_atoms", new_atoms}});
  }
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const auto& [t, meta] : trace.null_meta()) {
    nlohmann::ordered_json frontier = nlohmann::ordered_json::array();
    for (const auto& f : meta.frontier) frontier.push_back(f.name);
    terms.push_back({{"name", t.name},
                     {"timestamp", meta.timestamp},
                     {"rule", meta.trigger.rule_id},
                     {"frontier", frontier}});
  }
  return nlohmann::ordered_json{{"steps", steps}, {"terms", terms}}.dump(2) + "\n";
}

std::string emit_dot(const Instance& db) {
  if (max_arity(db.atoms()) > 2)
    throw Error("DOT export requires an at-most-binary signature");
  std::map<Term, std::set<std::string>> marks;
  for (const auto& t : db.adom()) marks[t];
  std::ostringstream out;
  out << "digraph instance {\n";
  for (const auto& a : db.atoms())
    if (a.pred.arity == 1) marks[a.args[0]].insert(a.pred.name);
  for (const auto& [t, preds] : marks) {
    out << "  \"" << t.name << "\"";
    if (!preds.empty()) {
      out << " [label=\"" << t.name << "\\n";
      bool first = true;
      for (const auto& p : preds) {
        if (!first) out << ",";
        first = false;
        out << p;
      }
      out << "\"]";
    }
    out << ";\n";
  }
  for (const auto& a : db.atoms())
    if (a.pred.arity == 2)
      out << "  \"" << a.args[0].name << "\" -> \"" << a.args[1].name << "\" [label=\""
          << a.pred.name << "\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace erkit
