#ifndef ERKIT_TEXTIO_HPP
#define ERKIT_TEXTIO_HPP

#include <string>

#include "erkit/model.hpp"

namespace erkit {

class ChaseTrace;

struct SourceSpan {
  std::string file = "<input>";
  int line = 1;
  int column = 1;
};

class ParseError : public Error {
 public:
  ParseError(SourceSpan span, const std::string& msg)
      : Error(span.file + ":" + std::to_string(span.line) + ":" + std::to_string(span.column) +
              ": " + msg),
        span_(std::move(span)) {}
  const SourceSpan& span() const { return span_; }

 private:
  SourceSpan span_;
};

// Concrete syntax (identifiers starting uppercase are predicates; lowercase
// identifiers are variables in rules/queries and constants in facts;
// `%` starts a line comment):
//
//   rule  :=  body "->" head "."
//   head  :=  ["?" varlist ":"] atomlist
//   fact  :=  atom "."                        (ground)
//   query :=  "?(" [varlist] ") <-" atomlist "."
//   atom  :=  PRED "(" [termlist] ")" | "true"

RuleSet parse_rules(const std::string& text, const std::string& file = "<input>");
Instance parse_facts(const std::string& text, const std::string& file = "<input>");
CQ parse_query(const std::string& text, const std::string& file = "<input>");

std::string to_text(const Term& t);
std::string to_text(const Atom& a);
std::string to_text(const Rule& r);
std::string to_text(const RuleSet& rs);
std::string to_text(const Instance& db);
std::string to_text(const CQ& q);
std::string to_text(const UCQ& q);

/// JSON rendering of a chase trace: per-step new atoms plus per-null
/// timestamp, creating rule and frontier provenance.
std::string emit_json(const ChaseTrace& trace);

/// Graphviz rendering of an at-most-binary instance. Throws on higher arity.
std::string emit_dot(const Instance& db);

}  // namespace erkit

#endif  // ERKIT_TEXTIO_HPP
