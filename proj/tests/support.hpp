#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pts/engine.hpp"
#include "pts/icl.hpp"
#include "pts/parse.hpp"
#include "pts/reduce.hpp"
#include "pts/spec.hpp"
#include "pts/term.hpp"

namespace pts {
inline void PrintTo(Verdict v, std::ostream* os) { *os << to_string(v); }
inline void PrintTo(Conversion c, std::ostream* os) { *os << to_string(c); }
inline void PrintTo(const Term& t, std::ostream* os) { *os << print(t); }
inline void PrintTo(const Judgement& j, std::ostream* os) { *os << print(j); }
inline void PrintTo(const IclTerm& t, std::ostream* os) { *os << print(t); }
}  // namespace pts

namespace ptest {
using namespace pts;

inline Term term(const Specification& spec, const std::string& text) {
  return parse_term(text, spec.parse_options());
}

inline Judgement judgement(const Specification& spec, const std::string& text) {
  return parse_judgement(text, spec.parse_options());
}

inline Statement statement(const Specification& spec, const std::string& text) {
  return parse_statement(text, spec.parse_options());
}

// Random pseudoterms over the given constants; binder names drawn from a small pool
// so shadowing and capture cases come up often.
class TermGen {
 public:
  TermGen(std::uint32_t seed, std::vector<std::string> constants, std::vector<std::string> free = {})
      : rng_(seed), constants_(std::move(constants)), free_(std::move(free)) {}

  Term operator()(int depth) { return gen(depth, free_); }

  std::mt19937& rng() { return rng_; }

 private:
  Term gen(int depth, std::vector<std::string> scope) {
    int choice = depth <= 0 ? pick(2) : pick(5);
    switch (choice) {
      case 0:
        if (!scope.empty()) return Term::var(scope[pick(scope.size())]);
        [[fallthrough]];
      case 1: return Term::constant(constants_[pick(constants_.size())]);
      case 2: return Term::app(gen(depth - 1, scope), gen(depth - 1, scope));
      default: {
        static const char* names[] = {"x", "y", "z"};
        std::string x = names[pick(3)];
        Term dom = gen(depth - 1, scope);
        scope.push_back(x);
        Term body = gen(depth - 1, scope);
        return choice == 3 ? Term::pi_over(x, dom, body) : Term::lam_over(x, dom, body);
      }
    }
  }

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  std::mt19937 rng_;
  std::vector<std::string> constants_;
  std::vector<std::string> free_;
};

// Type-directed System F terms in the context `kContext`; valid in λ2 and in λ*.
// Each call returns a judgement text `Γ |- M : T` whose subject contains a redex
// more often than not.
class PolyTermGen {
 public:
  static constexpr const char* kContext = "a:*, b:*, u:a, w:b, f:(Pi x:a.b)";

  explicit PolyTermGen(std::uint32_t seed) : rng_(seed) {}

  std::string operator()(int depth) {
    for (;;) {
      names_ = 0;
      Scope scope{{"u", var("a")}, {"w", var("b")}, {"f", arrow(var("a"), var("b"))}};
      std::vector<std::string> tvars{"a", "b"};
      TyPtr t = type(2, tvars);
      std::string m;
      if (term(t, depth, scope, tvars, m)) return std::string(kContext) + " |- " + m + " : " + show(t);
    }
  }

 private:
  struct Ty;
  using TyPtr = std::shared_ptr<const Ty>;
  struct Ty {
    enum Kind { Var, Arrow, Forall } kind;
    std::string name;  // Var name, or the bound name of Forall
    TyPtr a, b;
  };
  using Scope = std::vector<std::pair<std::string, TyPtr>>;

  static TyPtr var(std::string n) { return std::make_shared<const Ty>(Ty{Ty::Var, std::move(n), {}, {}}); }
  static TyPtr arrow(TyPtr a, TyPtr b) { return std::make_shared<const Ty>(Ty{Ty::Arrow, "", a, b}); }
  static TyPtr forall(std::string n, TyPtr b) { return std::make_shared<const Ty>(Ty{Ty::Forall, std::move(n), {}, b}); }

  static bool same(const TyPtr& x, const TyPtr& y) {
    if (x->kind != y->kind) return false;
    switch (x->kind) {
      case Ty::Var: return x->name == y->name;
      case Ty::Arrow: return same(x->a, y->a) && same(x->b, y->b);
      case Ty::Forall: return x->name == y->name && same(x->b, y->b);
    }
    return false;
  }

  std::string show(const TyPtr& t) {
    switch (t->kind) {
      case Ty::Var: return t->name;
      case Ty::Arrow: return "(Pi " + fresh("d") + ":" + show(t->a) + ". " + show(t->b) + ")";
      case Ty::Forall: return "(Pi " + t->name + ":*. " + show(t->b) + ")";
    }
    return "";
  }

  std::string fresh(const std::string& p) { return p + std::to_string(names_++); }

  TyPtr type(int depth, std::vector<std::string> tvars) {
    std::size_t c = depth <= 0 ? 0 : pick(4);
    if (c == 0 || c == 3) return var(tvars[pick(tvars.size())]);
    if (c == 1) return arrow(type(depth - 1, tvars), type(depth - 1, tvars));
    std::string t = fresh("t");
    tvars.push_back(t);
    return forall(t, type(depth - 1, tvars));
  }

  bool term(const TyPtr& t, int depth, Scope scope, std::vector<std::string> tvars, std::string& out) {
    std::vector<std::string> vars;
    for (const auto& [x, ty] : scope) {
      if (same(ty, t)) vars.push_back(x);
    }
    std::size_t c = depth <= 0 ? 9 : pick(10);
    if (c <= 3 && depth > 0) {
      // (lam x:A. M) N
      TyPtr a = type(1, tvars);
      std::string x = fresh("x"), body, arg;
      Scope inner = scope;
      inner.push_back({x, a});
      if (term(t, depth - 1, inner, tvars, body) && term(a, depth - 1, scope, tvars, arg)) {
        out = "((lam " + x + ":" + show(a) + ". " + body + ") " + paren(arg) + ")";
        return true;
      }
    }
    if (c == 4 && t->kind == Ty::Arrow && same(t->a, t->b)) {
      std::string p = fresh("p"), y = fresh("y");
      out = "((lam " + p + ":*. lam " + y + ":" + p + ". " + y + ") " + show(t->a) + ")";
      return true;
    }
    if (c == 5 && same(t, var("b"))) {
      std::string arg;
      if (term(var("a"), depth - 1, scope, tvars, arg)) {
        out = "(f " + paren(arg) + ")";
        return true;
      }
    }
    if (t->kind == Ty::Arrow && (c >= 6 || vars.empty())) {
      std::string x = fresh("x"), body;
      scope.push_back({x, t->a});
      if (!term(t->b, depth - 1, scope, tvars, body)) return false;
      out = "(lam " + x + ":" + show(t->a) + ". " + body + ")";
      return true;
    }
    if (t->kind == Ty::Forall) {
      tvars.push_back(t->name);
      std::string body;
      if (!term(t->b, depth - 1, scope, tvars, body)) return false;
      out = "(lam " + t->name + ":*. " + body + ")";
      return true;
    }
    if (vars.empty()) return false;
    out = vars[pick(vars.size())];
    return true;
  }

  static std::string paren(const std::string& s) { return "(" + s + ")"; }

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  std::mt19937 rng_;
  int names_ = 0;
};

// Random Abs-free terms over a few variables, a constant and S, K, I, G.
class IclGen {
 public:
  IclGen(std::uint32_t seed, std::vector<std::string> vars) : rng_(seed), vars_(std::move(vars)) {}

  IclTerm operator()(int depth) {
    if (depth <= 0 || pick(3) == 0) return leaf();
    return IclTerm::app((*this)(depth - 1), (*this)(depth - 1));
  }

  // Like operator() but may contain Abs nodes binding fresh names.
  IclTerm with_abs(int depth, std::vector<std::string> scope) {
    if (depth <= 0 || pick(4) == 0) {
      if (!scope.empty() && pick(2) == 0) return IclTerm::var(scope[pick(scope.size())]);
      return leaf();
    }
    if (pick(3) == 0) {
      std::string x = "a" + std::to_string(next_++);
      scope.push_back(x);
      return IclTerm::abs(x, with_abs(depth - 1, scope));
    }
    return IclTerm::app(with_abs(depth - 1, scope), with_abs(depth - 1, scope));
  }

 private:
  IclTerm leaf() {
    switch (pick(7)) {
      case 0: return IclTerm::comb(Combinator::S);
      case 1: return IclTerm::comb(Combinator::K);
      case 2: return IclTerm::comb(Combinator::I);
      case 3: return IclTerm::comb(Combinator::G);
      case 4: return IclTerm::constant("c");
      default: return IclTerm::var(vars_[pick(vars_.size())]);
    }
  }

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  std::mt19937 rng_;
  std::vector<std::string> vars_;
  int next_ = 0;
};


}  // namespace ptest
