#include "pts/icl.hpp"

#include <algorithm>
#include <stdexcept>

namespace pts {

struct IclTerm::Node {
  Kind kind;
  std::string name;
  Combinator comb = Combinator::S;
  IclTerm left;
  IclTerm right;
  std::size_t size = 1;
};

const char* to_string(Combinator c) {
  switch (c) {
    case Combinator::S: return "S";
    case Combinator::K: return "K";
    case Combinator::I: return "I";
    case Combinator::G: return "G";
    case Combinator::Xi: return "Xi";
  }
  return "?";
}

IclTerm IclTerm::var(std::string name) {
  IclTerm t;
  t.node_ = std::make_shared<const Node>(Node{Kind::Var, std::move(name), Combinator::S, {}, {}, 1});
  return t;
}

IclTerm IclTerm::constant(std::string name) {
  IclTerm t;
  t.node_ = std::make_shared<const Node>(Node{Kind::Const, std::move(name), Combinator::S, {}, {}, 1});
  return t;
}

IclTerm IclTerm::comb(Combinator c) {
  IclTerm t;
  t.node_ = std::make_shared<const Node>(Node{Kind::Comb, {}, c, {}, {}, 1});
  return t;
}

IclTerm IclTerm::app(IclTerm f, IclTerm a) {
  std::size_t n = 1 + f.size() + a.size();
  IclTerm t;
  t.node_ = std::make_shared<const Node>(Node{Kind::App, {}, Combinator::S, std::move(f), std::move(a), n});
  return t;
}

IclTerm IclTerm::apps(IclTerm f, const std::vector<IclTerm>& args) {
  for (const auto& a : args) f = app(std::move(f), a);
  return f;
}

IclTerm IclTerm::abs(std::string name, IclTerm body) {
  std::size_t n = 1 + body.size();
  IclTerm t;
  t.node_ = std::make_shared<const Node>(Node{Kind::Abs, std::move(name), Combinator::S, {}, std::move(body), n});
  return t;
}

IclTerm::Kind IclTerm::kind() const { return node_->kind; }
const std::string& IclTerm::name() const { return node_->name; }
Combinator IclTerm::combinator() const { return node_->comb; }
const IclTerm& IclTerm::fn() const { return node_->left; }
const IclTerm& IclTerm::arg() const { return node_->right; }
const IclTerm& IclTerm::body() const { return node_->right; }
std::size_t IclTerm::size() const { return node_ ? node_->size : 0; }

namespace {

// Innermost binder position of `x`, counted from the inside; -1 when free.
long binder_of(const std::vector<std::string>& binders, const std::string& x) {
  for (std::size_t i = binders.size(); i-- > 0;) {
    if (binders[i] == x) return static_cast<long>(binders.size() - i);
  }
  return -1;
}

bool alpha_equal(const IclTerm& a, const IclTerm& b, std::vector<std::string>& la, std::vector<std::string>& lb) {
  if (la.empty() && a == b) return true;
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case IclTerm::Kind::Var: {
      long i = binder_of(la, a.name());
      long j = binder_of(lb, b.name());
      return i == j && (i >= 0 || a.name() == b.name());
    }
    case IclTerm::Kind::Const: return a.name() == b.name();
    case IclTerm::Kind::Comb: return a.combinator() == b.combinator();
    case IclTerm::Kind::App: return alpha_equal(a.fn(), b.fn(), la, lb) && alpha_equal(a.arg(), b.arg(), la, lb);
    case IclTerm::Kind::Abs: {
      la.push_back(a.name());
      lb.push_back(b.name());
      bool eq = alpha_equal(a.body(), b.body(), la, lb);
      la.pop_back();
      lb.pop_back();
      return eq;
    }
  }
  return false;
}

}  // namespace

bool operator==(const IclTerm& a, const IclTerm& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case IclTerm::Kind::Var:
    case IclTerm::Kind::Const: return a.name() == b.name();
    case IclTerm::Kind::Comb: return a.combinator() == b.combinator();
    case IclTerm::Kind::App: return a.fn() == b.fn() && a.arg() == b.arg();
    case IclTerm::Kind::Abs: {
      if (a.name() == b.name()) return a.body() == b.body();
      std::vector<std::string> la{a.name()}, lb{b.name()};
      return alpha_equal(a.body(), b.body(), la, lb);
    }
  }
  return false;
}

namespace {

void print_into(const IclTerm& t, std::string& out, bool arg_position) {
  switch (t.kind()) {
    case IclTerm::Kind::Var:
    case IclTerm::Kind::Const: out += t.name(); return;
    case IclTerm::Kind::Comb: out += to_string(t.combinator()); return;
    case IclTerm::Kind::App:
      if (arg_position) out += '(';
      print_into(t.fn(), out, false);
      out += ' ';
      print_into(t.arg(), out, true);
      if (arg_position) out += ')';
      return;
    case IclTerm::Kind::Abs:
      out += '(';
      out += "Abs ";
      out += t.name();
      out += ". ";
      print_into(t.body(), out, false);
      out += ')';
      return;
  }
}

void free_vars_into(const IclTerm& t, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (t.kind()) {
    case IclTerm::Kind::Var:
      if (!bound.count(t.name())) out.insert(t.name());
      return;
    case IclTerm::Kind::App:
      free_vars_into(t.fn(), bound, out);
      free_vars_into(t.arg(), bound, out);
      return;
    case IclTerm::Kind::Abs: {
      bool fresh = bound.insert(t.name()).second;
      free_vars_into(t.body(), bound, out);
      if (fresh) bound.erase(t.name());
      return;
    }
    default: return;
  }
}

bool occurs(const IclTerm& t, const std::string& x) {
  switch (t.kind()) {
    case IclTerm::Kind::Var: return t.name() == x;
    case IclTerm::Kind::App: return occurs(t.fn(), x) || occurs(t.arg(), x);
    case IclTerm::Kind::Abs: return t.name() != x && occurs(t.body(), x);
    default: return false;
  }
}

IclTerm translate_term(const Term& t, std::set<std::string>& taken) {
  switch (t.kind()) {
    case TermKind::Var: return IclTerm::var(t.name());
    case TermKind::Const: return IclTerm::constant(t.name());
    case TermKind::Bound: throw std::invalid_argument("translate_to_icl: loose bound variable");
    case TermKind::App: return IclTerm::app(translate_term(t.fn(), taken), translate_term(t.arg(), taken));
    case TermKind::Lam: {
      std::string x = fresh_name(t.name().empty() ? "x" : t.name(), taken);
      taken.insert(x);
      IclTerm body = translate_term(open(t.body(), x), taken);
      return IclTerm::abs(x, std::move(body));
    }
    case TermKind::Pi: {
      IclTerm dom = translate_term(t.domain(), taken);
      const Term& b = t.body();
      // η-shape: the body is Y' applied to the bound variable, which is not free in Y'.
      if (b.is_app() && b.arg().is_bound() && b.arg().index() == 0 && b.fn().loose_bound() == 0) {
        return IclTerm::apps(IclTerm::comb(Combinator::G), {dom, translate_term(b.fn(), taken)});
      }
      std::string x = fresh_name(t.name().empty() ? "x" : t.name(), taken);
      taken.insert(x);
      IclTerm body = translate_term(open(b, x), taken);
      return IclTerm::apps(IclTerm::comb(Combinator::G), {dom, IclTerm::abs(x, std::move(body))});
    }
  }
  throw std::logic_error("translate_to_icl: unknown term kind");
}

}  // namespace

std::string print(const IclTerm& t) {
  std::string out;
  print_into(t, out, false);
  return out;
}

std::set<std::string> free_vars(const IclTerm& t) {
  std::set<std::string> bound, out;
  free_vars_into(t, bound, out);
  return out;
}

bool contains_abs(const IclTerm& t) {
  switch (t.kind()) {
    case IclTerm::Kind::Abs: return true;
    case IclTerm::Kind::App: return contains_abs(t.fn()) || contains_abs(t.arg());
    default: return false;
  }
}

IclTerm substitute(const IclTerm& t, const std::string& x, const IclTerm& value) {
  switch (t.kind()) {
    case IclTerm::Kind::Var: return t.name() == x ? value : t;
    case IclTerm::Kind::App: {
      IclTerm f = substitute(t.fn(), x, value);
      IclTerm a = substitute(t.arg(), x, value);
      if (f == t.fn() && a == t.arg()) return t;
      return IclTerm::app(std::move(f), std::move(a));
    }
    case IclTerm::Kind::Abs:
      if (t.name() == x) return t;
      return IclTerm::abs(t.name(), substitute(t.body(), x, value));
    default: return t;
  }
}

IclTerm translate_to_icl(const Term& t) {
  std::set<std::string> taken = free_vars(t);
  return translate_term(t, taken);
}

IclTerm translate_to_icl(const Statement& s) {
  std::set<std::string> taken = free_vars(s.subject);
  for (const auto& v : free_vars(s.type)) taken.insert(v);
  IclTerm type = translate_term(s.type, taken);
  IclTerm subject = translate_term(s.subject, taken);
  return IclTerm::app(std::move(type), std::move(subject));
}

IclTerm abstract_variable(const std::string& x, const IclTerm& m, AbstractionAlgorithm alg) {
  if (m.kind() == IclTerm::Kind::Var && m.name() == x) return IclTerm::comb(Combinator::I);
  if (!occurs(m, x)) return IclTerm::app(IclTerm::comb(Combinator::K), m);
  if (m.kind() != IclTerm::Kind::App) throw std::invalid_argument("abstract_variable: Abs node in body");
  if (alg == AbstractionAlgorithm::EtaOptimized && m.arg().kind() == IclTerm::Kind::Var && m.arg().name() == x &&
      !occurs(m.fn(), x)) {
    return m.fn();
  }
  return IclTerm::apps(IclTerm::comb(Combinator::S),
                       {abstract_variable(x, m.fn(), alg), abstract_variable(x, m.arg(), alg)});
}

IclTerm bracket_abstract(const IclTerm& t, AbstractionAlgorithm alg) {
  switch (t.kind()) {
    case IclTerm::Kind::App: {
      IclTerm f = bracket_abstract(t.fn(), alg);
      IclTerm a = bracket_abstract(t.arg(), alg);
      if (f == t.fn() && a == t.arg()) return t;
      return IclTerm::app(std::move(f), std::move(a));
    }
    case IclTerm::Kind::Abs: return abstract_variable(t.name(), bracket_abstract(t.body(), alg), alg);
    default: return t;
  }
}

namespace {

// Contracts the leftmost-outermost redex, if any.
std::optional<IclTerm> step(const IclTerm& t) {
  if (t.kind() != IclTerm::Kind::App) return std::nullopt;
  std::vector<IclTerm> args;
  IclTerm head = t;
  while (head.kind() == IclTerm::Kind::App) {
    args.push_back(head.arg());
    head = head.fn();
  }
  std::reverse(args.begin(), args.end());
  if (head.kind() == IclTerm::Kind::Comb) {
    std::size_t need = 0;
    switch (head.combinator()) {
      case Combinator::I: need = 1; break;
      case Combinator::K: need = 2; break;
      case Combinator::S:
      case Combinator::G: need = 3; break;
      case Combinator::Xi: need = 0; break;
    }
    if (need > 0 && args.size() >= need) {
      IclTerm r;
      switch (head.combinator()) {
        case Combinator::I: r = args[0]; break;
        case Combinator::K: r = args[0]; break;
        case Combinator::S: r = IclTerm::apps(args[0], {args[2], IclTerm::app(args[1], args[2])}); break;
        case Combinator::G:
          r = IclTerm::apps(IclTerm::comb(Combinator::Xi),
                            {args[0], IclTerm::apps(IclTerm::comb(Combinator::S), {args[1], args[2]})});
          break;
        default: break;
      }
      std::vector<IclTerm> rest(args.begin() + static_cast<std::ptrdiff_t>(need), args.end());
      return IclTerm::apps(r, rest);
    }
  }
  // Head is stuck: reduce the arguments from the left.
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (auto r = step(args[i])) {
      args[i] = *r;
      return IclTerm::apps(head, args);
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<IclTerm> weak_step(const IclTerm& t) {
  if (contains_abs(t)) throw std::invalid_argument("weak_step: Abs node");
  return step(t);
}

std::optional<IclTerm> weak_normalize(const IclTerm& t, std::size_t fuel) {
  if (contains_abs(t)) throw std::invalid_argument("weak_normalize: Abs node");
  IclTerm cur = t;
  for (std::size_t i = 0; i <= fuel; ++i) {
    auto next = step(cur);
    if (!next) return cur;
    cur = std::move(*next);
  }
  return std::nullopt;
}

Term identify_lambda_pi(const Term& m) {
  switch (m.kind()) {
    case TermKind::Pi:
    case TermKind::Lam:
      return Term::lam(m.name(), identify_lambda_pi(m.domain()), identify_lambda_pi(m.body()));
    case TermKind::App: return Term::app(identify_lambda_pi(m.fn()), identify_lambda_pi(m.arg()));
    default: return m;
  }
}

std::vector<CombinatorForm> combinator_axiom_forms(const AxiomBase& base, AbstractionAlgorithm alg) {
  std::vector<CombinatorForm> out;
  for (const char* name : {"I1", "K1", "S1", "Pi1"}) {
    const AxiomScheme* s = base.find(name);
    if (!s) throw std::invalid_argument(std::string("combinator_axiom_forms: missing scheme ") + name);
    out.push_back({name, bracket_abstract(translate_to_icl(s->subject), alg), s->type});
  }
  return out;
}

}  // namespace pts
