#include "pts/parse.hpp"

#include <cctype>
#include <optional>
#include <vector>

namespace pts {

namespace {

enum class Tok { Ident, LParen, RParen, Colon, Dot, Comma, Turnstile, Pi, Lam, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool ident_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '*' || c == '\'' || c == '?' || c >= 0x80;
}

const std::string kPiSign = "\xCE\xA0";      // U+03A0
const std::string kLamSign = "\xCE\xBB";     // U+03BB
const std::string kTurnstile = "\xE2\x8A\xA2";  // U+22A2

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = s[i];
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    auto single = [&](Tok k) {
      out.push_back({k, std::string(1, s[i]), i});
      ++i;
    };
    switch (c) {
      case '(':
        single(Tok::LParen);
        continue;
      case ')':
        single(Tok::RParen);
        continue;
      case ':':
        single(Tok::Colon);
        continue;
      case '.':
        single(Tok::Dot);
        continue;
      case ',':
        single(Tok::Comma);
        continue;
      default:
        break;
    }
    if (s.substr(i, 2) == "|-") {
      out.push_back({Tok::Turnstile, "|-", i});
      i += 2;
      continue;
    }
    if (s.substr(i, kTurnstile.size()) == kTurnstile) {
      out.push_back({Tok::Turnstile, kTurnstile, i});
      i += kTurnstile.size();
      continue;
    }
    if (s.substr(i, kPiSign.size()) == kPiSign) {
      out.push_back({Tok::Pi, kPiSign, i});
      i += kPiSign.size();
      continue;
    }
    if (s.substr(i, kLamSign.size()) == kLamSign) {
      out.push_back({Tok::Lam, kLamSign, i});
      i += kLamSign.size();
      continue;
    }
    if (!ident_char(c)) throw ParseError(std::string("unexpected character '") + s[i] + "'", i);
    std::size_t start = i;
    while (i < s.size() && ident_char(static_cast<unsigned char>(s[i]))) ++i;
    std::string text(s.substr(start, i - start));
    Tok kind = Tok::Ident;
    if (text == "Pi") kind = Tok::Pi;
    if (text == "lam") kind = Tok::Lam;
    out.push_back({kind, std::move(text), start});
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& options)
      : tokens_(tokenize(text)), options_(options), variables_(options.variables) {}

  Term term() {
    const Token& t = peek();
    if (t.kind == Tok::Pi || t.kind == Tok::Lam) {
      bool is_pi = t.kind == Tok::Pi;
      ++pos_;
      std::string name = binder_name();
      expect(Tok::Colon, "':'");
      Term domain = term();
      expect(Tok::Dot, "'.'");
      bound_.push_back(name);
      Term body = term();
      bound_.pop_back();
      return is_pi ? Term::pi(name, domain, body) : Term::lam(name, domain, body);
    }
    Term fn = atom();
    while (starts_atom(peek().kind) || peek().kind == Tok::Pi || peek().kind == Tok::Lam) {
      // A trailing binder extends as far as possible, like an atom in final position.
      if (peek().kind == Tok::Pi || peek().kind == Tok::Lam) {
        fn = Term::app(fn, term());
        break;
      }
      fn = Term::app(fn, atom());
    }
    return fn;
  }

  Judgement judgement() {
    Judgement j;
    if (peek().kind != Tok::Turnstile) {
      for (;;) {
        std::string name = binder_name();
        if (variables_.count(name)) throw ParseError("variable " + name + " declared twice", prev().pos);
        expect(Tok::Colon, "':'");
        Term type = term();
        j.context.push_back({name, type});
        variables_.insert(name);
        if (peek().kind == Tok::Comma) {
          ++pos_;
          continue;
        }
        break;
      }
    }
    expect(Tok::Turnstile, "'|-'");
    j.subject = term();
    expect(Tok::Colon, "':'");
    j.type = term();
    finish();
    return j;
  }

  Statement statement() {
    Statement s;
    s.subject = term();
    expect(Tok::Colon, "':'");
    s.type = term();
    finish();
    return s;
  }

  void finish() {
    if (peek().kind != Tok::End) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
  }

 private:
  static bool starts_atom(Tok k) { return k == Tok::Ident || k == Tok::LParen; }

  const Token& peek() const { return tokens_[pos_]; }
  const Token& prev() const { return tokens_[pos_ == 0 ? 0 : pos_ - 1]; }

  void expect(Tok k, const char* what) {
    if (peek().kind != k) {
      std::string got = peek().kind == Tok::End ? "end of input" : "'" + peek().text + "'";
      throw ParseError(std::string("expected ") + what + ", got " + got, peek().pos);
    }
    ++pos_;
  }

  std::string binder_name() {
    if (peek().kind != Tok::Ident) throw ParseError("expected a variable name", peek().pos);
    return tokens_[pos_++].text;
  }

  Term atom() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      ++pos_;
      Term inner = term();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (t.kind != Tok::Ident) {
      std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
      throw ParseError("expected a term, got " + got, t.pos);
    }
    ++pos_;
    return resolve(t);
  }

  Term resolve(const Token& t) {
    for (std::size_t k = bound_.size(); k-- > 0;) {
      if (bound_[k] == t.text) return Term::bound(static_cast<std::uint32_t>(bound_.size() - 1 - k));
    }
    if (variables_.count(t.text)) return Term::var(t.text);
    if (options_.is_constant && options_.is_constant(t.text)) return Term::constant(t.text);
    if (options_.metavariables && t.text.size() > 1 && t.text[0] == '?') return Term::constant(t.text);
    if (options_.free_identifiers) return Term::var(t.text);
    throw ParseError("unknown identifier '" + t.text + "'", t.pos);
  }

  std::vector<Token> tokens_;
  const ParseOptions& options_;
  std::set<std::string> variables_;
  std::vector<std::string> bound_;
  std::size_t pos_ = 0;
};

}  // namespace

Term parse_term(std::string_view text, const ParseOptions& options) {
  Parser p(text, options);
  Term t = p.term();
  p.finish();
  return t;
}

Judgement parse_judgement(std::string_view text, const ParseOptions& options) {
  return Parser(text, options).judgement();
}

Statement parse_statement(std::string_view text, const ParseOptions& options) {
  return Parser(text, options).statement();
}

bool is_identifier(std::string_view name) {
  if (name.empty() || name == "Pi" || name == "lam") return false;
  for (unsigned char c : name) {
    if (!ident_char(c)) return false;
  }
  return true;
}

}  // namespace pts
