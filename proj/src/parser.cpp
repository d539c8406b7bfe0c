// Recursive-descent parser for the rule language.
//
//   program := { clause } ;
//   clause  := atom [ ":-" literal { "," literal } ] "." ;
//   literal := [ "not" ] atom ;
//   atom    := ident "(" term { "," term } ")" | ident ;
//   term    := ident | integer ;
//
// `%` starts a comment that runs to the end of the line.

#include <cctype>

#include "logicrank/lang.hpp"

namespace logicrank {
namespace {

enum class Tok { kIdent, kInteger, kLParen, kRParen, kComma, kPeriod, kNeck, kEnd };

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::kIdent: return "identifier '" + t.text + "'";
    case Tok::kInteger: return "integer '" + t.text + "'";
    case Tok::kLParen: return "'('";
    case Tok::kRParen: return "')'";
    case Tok::kComma: return "','";
    case Tok::kPeriod: return "'.'";
    case Tok::kNeck: return "':-'";
    case Tok::kEnd: return "end of input";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_blank();
    const SourceSpan at{line_, col_};
    if (pos_ >= src_.size()) return {Tok::kEnd, "", at};
    const char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
      return {Tok::kIdent, std::string(src_.substr(start, pos_ - start)), at};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
      if (pos_ < src_.size() && is_ident_char(src_[pos_])) {
        throw RuleError(RuleError::Kind::kSyntax, at, "malformed integer",
                        {"integer"});
      }
      return {Tok::kInteger, std::string(src_.substr(start, pos_ - start)), at};
    }
    advance();
    switch (c) {
      case '(': return {Tok::kLParen, "(", at};
      case ')': return {Tok::kRParen, ")", at};
      case ',': return {Tok::kComma, ",", at};
      case '.': return {Tok::kPeriod, ".", at};
      case ':':
        if (pos_ < src_.size() && src_[pos_] == '-') {
          advance();
          return {Tok::kNeck, ":-", at};
        }
        break;
      default:
        break;
    }
    throw RuleError(RuleError::Kind::kSyntax, at,
                    std::string("unexpected character '") + c + "'");
  }

 private:
  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { shift(); }

  std::vector<Clause> program() {
    std::vector<Clause> clauses;
    while (tok_.kind != Tok::kEnd) clauses.push_back(clause());
    return clauses;
  }

 private:
  void shift() {
    tok_ = lookahead_ ? std::move(*lookahead_) : lexer_.next();
    lookahead_.reset();
  }

  const Token& peek() {
    if (!lookahead_) lookahead_ = lexer_.next();
    return *lookahead_;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    std::string msg = "syntax error: expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    msg += ", found " + describe(tok_);
    throw RuleError(RuleError::Kind::kSyntax, tok_.span, msg, std::move(expected));
  }

  void expect(Tok kind, const char* what) {
    if (tok_.kind != kind) fail({what});
    shift();
  }

  Clause clause() {
    Clause c;
    c.span = tok_.span;
    c.head = atom();
    if (tok_.kind == Tok::kNeck) {
      shift();
      c.body.push_back(literal());
      while (tok_.kind == Tok::kComma) {
        shift();
        c.body.push_back(literal());
      }
      if (tok_.kind != Tok::kPeriod) fail({"','", "'.'"});
      shift();
    } else if (tok_.kind == Tok::kPeriod) {
      shift();
    } else {
      fail({"':-'", "'.'"});
    }
    return c;
  }

  Literal literal() {
    Literal lit;
    // `not` followed by an identifier is negation; otherwise `not` is an
    // ordinary predicate name.
    if (tok_.kind == Tok::kIdent && tok_.text == "not" && peek().kind == Tok::kIdent) {
      shift();
      lit.negated = true;
    }
    lit.atom = atom();
    return lit;
  }

  Atom atom() {
    if (tok_.kind != Tok::kIdent) fail({"predicate name"});
    Atom a;
    a.predicate = tok_.text;
    shift();
    if (tok_.kind != Tok::kLParen) return a;
    shift();
    a.args.push_back(term());
    while (tok_.kind == Tok::kComma) {
      shift();
      a.args.push_back(term());
    }
    expect(Tok::kRParen, "')'");
    return a;
  }

  Term term() {
    if (tok_.kind == Tok::kInteger) {
      Term t = Term::constant(tok_.text);
      shift();
      return t;
    }
    if (tok_.kind != Tok::kIdent) fail({"identifier", "integer"});
    const char first = tok_.text.front();
    Term t = (std::isupper(static_cast<unsigned char>(first)) || first == '_')
                 ? Term::variable(tok_.text)
                 : Term::constant(tok_.text);
    shift();
    return t;
  }

  Lexer lexer_;
  Token tok_{Tok::kEnd, "", {}};
  std::optional<Token> lookahead_;
};

}  // namespace

RuleProgram parse_program(std::string_view source, std::string_view query) {
  Parser parser(source);
  return validate(parser.program(), std::string(query));
}

}  // namespace logicrank
