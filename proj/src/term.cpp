#include "pts/term.hpp"

#include <algorithm>
#include <stdexcept>

namespace pts {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Term Term::make(Node node) {
  std::size_t h = static_cast<std::size_t>(node.kind) * 0x51ed27ULL;
  switch (node.kind) {
    case TermKind::Var:
      h = mix(h, std::hash<std::string>{}(node.name));
      node.has_vars = true;
      break;
    case TermKind::Const:
      h = mix(h, std::hash<std::string>{}(node.name));
      node.has_consts = true;
      break;
    case TermKind::Bound:
      h = mix(h, node.index);
      node.loose = node.index + 1;
      break;
    case TermKind::Pi:
    case TermKind::Lam: {
      h = mix(mix(h, node.left.hash()), node.right.hash());
      node.size = 1 + node.left.size() + node.right.size();
      std::uint32_t body_loose = node.right.loose_bound();
      node.loose = std::max(node.left.loose_bound(), body_loose > 0 ? body_loose - 1 : 0);
      node.has_vars = node.left.has_vars() || node.right.has_vars();
      node.has_consts = node.left.has_consts() || node.right.has_consts();
      break;
    }
    case TermKind::App:
      h = mix(mix(h, node.left.hash()), node.right.hash());
      node.size = 1 + node.left.size() + node.right.size();
      node.loose = std::max(node.left.loose_bound(), node.right.loose_bound());
      node.has_vars = node.left.has_vars() || node.right.has_vars();
      node.has_consts = node.left.has_consts() || node.right.has_consts();
      break;
  }
  node.hash = h;
  Term t;
  t.node_ = std::make_shared<const Node>(std::move(node));
  return t;
}

Term Term::var(std::string name) {
  Node n{TermKind::Var, std::move(name), 0, {}, {}};
  return make(std::move(n));
}

Term Term::bound(std::uint32_t index) {
  Node n{TermKind::Bound, {}, 0, {}, {}};
  n.index = index;
  return make(std::move(n));
}

Term Term::constant(std::string name) {
  Node n{TermKind::Const, std::move(name), 0, {}, {}};
  return make(std::move(n));
}

Term Term::pi(std::string hint, Term domain, Term body) {
  Node n{TermKind::Pi, std::move(hint), 0, {}, {}};
  n.left = std::move(domain);
  n.right = std::move(body);
  return make(std::move(n));
}

Term Term::lam(std::string hint, Term domain, Term body) {
  Node n{TermKind::Lam, std::move(hint), 0, {}, {}};
  n.left = std::move(domain);
  n.right = std::move(body);
  return make(std::move(n));
}

Term Term::app(Term fn, Term arg) {
  Node n{TermKind::App, {}, 0, {}, {}};
  n.left = std::move(fn);
  n.right = std::move(arg);
  return make(std::move(n));
}

Term Term::apps(Term fn, const std::vector<Term>& args) {
  for (const auto& a : args) fn = app(std::move(fn), a);
  return fn;
}

Term Term::pi_over(const std::string& name, Term domain, const Term& body) {
  return pi(name, std::move(domain), abstract(body, name));
}

Term Term::lam_over(const std::string& name, Term domain, const Term& body) {
  return lam(name, std::move(domain), abstract(body, name));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case TermKind::Var:
    case TermKind::Const:
      return a.name() == b.name();
    case TermKind::Bound:
      return a.index() == b.index();
    default:
      return a.node_->left == b.node_->left && a.node_->right == b.node_->right;
  }
}

bool term_less(const Term& a, const Term& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  switch (a.kind()) {
    case TermKind::Var:
    case TermKind::Const:
      return a.name() < b.name();
    case TermKind::Bound:
      return a.index() < b.index();
    case TermKind::App:
      if (a.fn() != b.fn()) return term_less(a.fn(), b.fn());
      return term_less(a.arg(), b.arg());
    default:
      if (a.domain() != b.domain()) return term_less(a.domain(), b.domain());
      return term_less(a.body(), b.body());
  }
}

// ---------------------------------------------------------------------------

namespace {

Term lift_rec(const Term& t, std::uint32_t by, std::uint32_t cutoff) {
  if (t.loose_bound() <= cutoff) return t;
  switch (t.kind()) {
    case TermKind::Bound:
      return Term::bound(t.index() + by);
    case TermKind::Pi:
      return Term::pi(t.name(), lift_rec(t.domain(), by, cutoff), lift_rec(t.body(), by, cutoff + 1));
    case TermKind::Lam:
      return Term::lam(t.name(), lift_rec(t.domain(), by, cutoff), lift_rec(t.body(), by, cutoff + 1));
    case TermKind::App:
      return Term::app(lift_rec(t.fn(), by, cutoff), lift_rec(t.arg(), by, cutoff));
    default:
      return t;
  }
}

Term inst_rec(const Term& t, const Term& value, std::uint32_t depth) {
  if (t.loose_bound() <= depth) return t;
  switch (t.kind()) {
    case TermKind::Bound:
      if (t.index() == depth) return lift(value, depth);
      return Term::bound(t.index() - 1);
    case TermKind::Pi:
      return Term::pi(t.name(), inst_rec(t.domain(), value, depth), inst_rec(t.body(), value, depth + 1));
    case TermKind::Lam:
      return Term::lam(t.name(), inst_rec(t.domain(), value, depth), inst_rec(t.body(), value, depth + 1));
    case TermKind::App:
      return Term::app(inst_rec(t.fn(), value, depth), inst_rec(t.arg(), value, depth));
    default:
      return t;
  }
}

Term abstract_rec(const Term& t, const std::string& name, std::uint32_t depth) {
  if (!t.has_vars()) return t;
  switch (t.kind()) {
    case TermKind::Var:
      return t.name() == name ? Term::bound(depth) : t;
    case TermKind::Pi:
      return Term::pi(t.name(), abstract_rec(t.domain(), name, depth), abstract_rec(t.body(), name, depth + 1));
    case TermKind::Lam:
      return Term::lam(t.name(), abstract_rec(t.domain(), name, depth), abstract_rec(t.body(), name, depth + 1));
    case TermKind::App:
      return Term::app(abstract_rec(t.fn(), name, depth), abstract_rec(t.arg(), name, depth));
    default:
      return t;
  }
}

void collect_vars(const Term& t, std::set<std::string>& out) {
  if (!t.has_vars()) return;
  switch (t.kind()) {
    case TermKind::Var:
      out.insert(t.name());
      return;
    case TermKind::Pi:
    case TermKind::Lam:
    case TermKind::App:
      collect_vars(t.fn(), out);
      collect_vars(t.arg(), out);
      return;
    default:
      return;
  }
}

void collect_consts(const Term& t, std::set<std::string>& out) {
  if (!t.has_consts()) return;
  switch (t.kind()) {
    case TermKind::Const:
      out.insert(t.name());
      return;
    case TermKind::Pi:
    case TermKind::Lam:
    case TermKind::App:
      collect_consts(t.fn(), out);
      collect_consts(t.arg(), out);
      return;
    default:
      return;
  }
}

Term subst_rec(const Term& t, const std::string& x, const Term& value, std::uint32_t depth) {
  if (!t.has_vars()) return t;
  switch (t.kind()) {
    case TermKind::Var:
      return t.name() == x ? lift(value, depth) : t;
    case TermKind::Pi:
      return Term::pi(t.name(), subst_rec(t.domain(), x, value, depth), subst_rec(t.body(), x, value, depth + 1));
    case TermKind::Lam:
      return Term::lam(t.name(), subst_rec(t.domain(), x, value, depth), subst_rec(t.body(), x, value, depth + 1));
    case TermKind::App:
      return Term::app(subst_rec(t.fn(), x, value, depth), subst_rec(t.arg(), x, value, depth));
    default:
      return t;
  }
}

Term replace_consts_rec(const Term& t, const std::map<std::string, Term>& repl, std::uint32_t depth) {
  if (!t.has_consts()) return t;
  switch (t.kind()) {
    case TermKind::Const: {
      auto it = repl.find(t.name());
      return it == repl.end() ? t : lift(it->second, depth);
    }
    case TermKind::Pi:
      return Term::pi(t.name(), replace_consts_rec(t.domain(), repl, depth),
                      replace_consts_rec(t.body(), repl, depth + 1));
    case TermKind::Lam:
      return Term::lam(t.name(), replace_consts_rec(t.domain(), repl, depth),
                       replace_consts_rec(t.body(), repl, depth + 1));
    case TermKind::App:
      return Term::app(replace_consts_rec(t.fn(), repl, depth), replace_consts_rec(t.arg(), repl, depth));
    default:
      return t;
  }
}

Term rename_rec(const Term& t, const std::map<std::string, std::string>& renaming) {
  if (!t.has_vars()) return t;
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = renaming.find(t.name());
      return it == renaming.end() ? t : Term::var(it->second);
    }
    case TermKind::Pi:
      return Term::pi(t.name(), rename_rec(t.domain(), renaming), rename_rec(t.body(), renaming));
    case TermKind::Lam:
      return Term::lam(t.name(), rename_rec(t.domain(), renaming), rename_rec(t.body(), renaming));
    case TermKind::App:
      return Term::app(rename_rec(t.fn(), renaming), rename_rec(t.arg(), renaming));
    default:
      return t;
  }
}

}  // namespace

Term lift(const Term& t, std::uint32_t by, std::uint32_t cutoff) {
  if (by == 0) return t;
  return lift_rec(t, by, cutoff);
}

Term instantiate(const Term& body, const Term& value) { return inst_rec(body, value, 0); }

Term abstract(const Term& t, const std::string& name) { return abstract_rec(t, name, 0); }

Term open(const Term& body, const std::string& fresh_name) {
  return instantiate(body, Term::var(fresh_name));
}

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  collect_vars(t, out);
  return out;
}

bool occurs_free(const Term& t, const std::string& name) {
  if (!t.has_vars()) return false;
  switch (t.kind()) {
    case TermKind::Var:
      return t.name() == name;
    case TermKind::Pi:
    case TermKind::Lam:
    case TermKind::App:
      return occurs_free(t.fn(), name) || occurs_free(t.arg(), name);
    default:
      return false;
  }
}

std::set<std::string> constants_of(const Term& t) {
  std::set<std::string> out;
  collect_consts(t, out);
  return out;
}

Term substitute(const Term& t, const std::string& x, const Term& value) {
  return subst_rec(t, x, value, 0);
}

Term replace_consts(const Term& t, const std::map<std::string, Term>& repl) {
  if (repl.empty()) return t;
  return replace_consts_rec(t, repl, 0);
}

Term rename_vars(const Term& t, const std::map<std::string, std::string>& renaming) {
  if (renaming.empty()) return t;
  return rename_rec(t, renaming);
}

std::pair<Term, std::vector<Term>> spine(const Term& t) {
  std::vector<Term> args;
  Term head = t;
  while (head.is_app()) {
    args.push_back(head.arg());
    head = head.fn();
  }
  std::reverse(args.begin(), args.end());
  return {head, args};
}

std::string fresh_name(const std::string& hint, const std::set<std::string>& taken) {
  std::string base = hint.empty() ? std::string("x") : hint;
  if (!taken.count(base)) return base;
  for (std::size_t i = 1;; ++i) {
    std::string candidate = base + std::to_string(i);
    if (!taken.count(candidate)) return candidate;
  }
}

// ---------------------------------------------------------------------------

namespace {

void loose_indices(const Term& t, std::uint32_t depth, std::set<std::uint32_t>& out) {
  if (t.loose_bound() <= depth) return;
  switch (t.kind()) {
    case TermKind::Bound:
      out.insert(t.index() - depth);
      return;
    case TermKind::Pi:
    case TermKind::Lam:
      loose_indices(t.domain(), depth, out);
      loose_indices(t.body(), depth + 1, out);
      return;
    case TermKind::App:
      loose_indices(t.fn(), depth, out);
      loose_indices(t.arg(), depth, out);
      return;
    default:
      return;
  }
}

enum class Position { Top, Function, Argument };

void print_rec(const Term& t, std::vector<std::string>& names, Position pos, std::string& out) {
  switch (t.kind()) {
    case TermKind::Var:
    case TermKind::Const:
      out += t.name();
      return;
    case TermKind::Bound:
      if (t.index() < names.size()) {
        out += names[names.size() - 1 - t.index()];
      } else {
        out += "#" + std::to_string(t.index() - names.size());
      }
      return;
    case TermKind::App: {
      bool paren = pos == Position::Argument;
      if (paren) out += '(';
      print_rec(t.fn(), names, Position::Function, out);
      out += ' ';
      print_rec(t.arg(), names, Position::Argument, out);
      if (paren) out += ')';
      return;
    }
    case TermKind::Pi:
    case TermKind::Lam: {
      bool paren = pos != Position::Top;
      if (paren) out += '(';
      std::set<std::string> taken = free_vars(t.body());
      collect_consts(t.body(), taken);
      std::set<std::uint32_t> outer;
      loose_indices(t.body(), 1, outer);
      for (std::uint32_t k : outer) {
        if (k < names.size()) taken.insert(names[names.size() - 1 - k]);
      }
      std::string name = fresh_name(t.name(), taken);
      out += t.is_pi() ? "Pi " : "lam ";
      out += name;
      out += ':';
      print_rec(t.domain(), names, t.domain().is_binder() ? Position::Argument : Position::Top, out);
      out += '.';
      names.push_back(name);
      print_rec(t.body(), names, Position::Top, out);
      names.pop_back();
      if (paren) out += ')';
      return;
    }
  }
}

void key_rec(const Term& t, std::string& out) {
  switch (t.kind()) {
    case TermKind::Var:
      out += "v:";
      out += t.name();
      out += ';';
      return;
    case TermKind::Const:
      out += "c:";
      out += t.name();
      out += ';';
      return;
    case TermKind::Bound:
      out += '#';
      out += std::to_string(t.index());
      out += ';';
      return;
    case TermKind::App:
      out += "(@ ";
      key_rec(t.fn(), out);
      key_rec(t.arg(), out);
      out += ')';
      return;
    case TermKind::Pi:
    case TermKind::Lam:
      out += t.is_pi() ? "(P " : "(L ";
      key_rec(t.domain(), out);
      key_rec(t.body(), out);
      out += ')';
      return;
  }
}

}  // namespace

std::string print(const Term& t) {
  if (!t) return "<null>";
  std::string out;
  std::vector<std::string> names;
  print_rec(t, names, Position::Top, out);
  return out;
}

std::string canonical_key(const Term& t) {
  std::string out;
  key_rec(t, out);
  return out;
}

}  // namespace pts
