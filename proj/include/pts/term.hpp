#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace pts {

// Pseudoterms in locally nameless form: binders refer to their variables by
// de Bruijn index, free variables are named. The binder name is kept only as a
// printing hint, so structural equality is alpha-equivalence.
enum class TermKind : std::uint8_t { Var, Bound, Const, Pi, Lam, App };

class Term {
 public:
  Term() = default;

  static Term var(std::string name);
  static Term bound(std::uint32_t index);
  static Term constant(std::string name);
  static Term pi(std::string hint, Term domain, Term body);
  static Term lam(std::string hint, Term domain, Term body);
  static Term app(Term fn, Term arg);
  static Term apps(Term fn, const std::vector<Term>& args);

  // Binders over a named body: the free variable `name` of `body` becomes the
  // bound variable of the new binder.
  static Term pi_over(const std::string& name, Term domain, const Term& body);
  static Term lam_over(const std::string& name, Term domain, const Term& body);

  explicit operator bool() const { return node_ != nullptr; }

  TermKind kind() const;
  bool is_var() const { return kind() == TermKind::Var; }
  bool is_bound() const { return kind() == TermKind::Bound; }
  bool is_const() const { return kind() == TermKind::Const; }
  bool is_pi() const { return kind() == TermKind::Pi; }
  bool is_lam() const { return kind() == TermKind::Lam; }
  bool is_app() const { return kind() == TermKind::App; }
  bool is_binder() const { return is_pi() || is_lam(); }
  bool is_redex() const;

  // Var/Const name, or the binder's name hint.
  const std::string& name() const;
  std::uint32_t index() const;
  const Term& domain() const;
  const Term& body() const;
  const Term& fn() const;
  const Term& arg() const;

  std::size_t hash() const;
  std::size_t size() const;
  // One more than the largest loose de Bruijn index; zero when locally closed.
  std::uint32_t loose_bound() const;
  bool has_vars() const;
  bool has_consts() const;

  const void* identity() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node;
  static Term make(Node node);

  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  TermKind kind;
  std::string name;
  std::uint32_t index = 0;
  Term left;
  Term right;
  std::size_t hash = 0;
  std::size_t size = 1;
  std::uint32_t loose = 0;
  bool has_vars = false;
  bool has_consts = false;
};

inline TermKind Term::kind() const { return node_->kind; }
inline const std::string& Term::name() const { return node_->name; }
inline std::uint32_t Term::index() const { return node_->index; }
inline const Term& Term::domain() const { return node_->left; }
inline const Term& Term::body() const { return node_->right; }
inline const Term& Term::fn() const { return node_->left; }
inline const Term& Term::arg() const { return node_->right; }
inline std::size_t Term::hash() const { return node_->hash; }
inline std::size_t Term::size() const { return node_->size; }
inline std::uint32_t Term::loose_bound() const { return node_->loose; }
inline bool Term::has_vars() const { return node_->has_vars; }
inline bool Term::has_consts() const { return node_->has_consts; }
inline bool Term::is_redex() const { return is_app() && fn().is_lam(); }

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

// Total order consistent with alpha-equivalence; used for deterministic sets.
bool term_less(const Term& a, const Term& b);
struct TermLess {
  bool operator()(const Term& a, const Term& b) const { return term_less(a, b); }
};

// --- de Bruijn plumbing ---------------------------------------------------

Term lift(const Term& t, std::uint32_t by, std::uint32_t cutoff = 0);
// Replaces bound index 0 of a binder body by `value` and lowers the rest.
Term instantiate(const Term& body, const Term& value);
// Turns free variable `name` into the bound variable at the current depth.
Term abstract(const Term& t, const std::string& name);
Term open(const Term& body, const std::string& fresh_name);

std::set<std::string> free_vars(const Term& t);
bool occurs_free(const Term& t, const std::string& name);
std::set<std::string> constants_of(const Term& t);

// Capture-avoiding substitution of a free variable.
Term substitute(const Term& t, const std::string& x, const Term& value);
// Simultaneous replacement of constants (used for sort metavariables).
Term replace_consts(const Term& t, const std::map<std::string, Term>& repl);
// Renames free variables.
Term rename_vars(const Term& t, const std::map<std::string, std::string>& renaming);

// Head of an application spine and its arguments, left to right.
std::pair<Term, std::vector<Term>> spine(const Term& t);

// Deterministic fresh name: `hint` itself, or `hint` with the smallest numeric
// suffix that is not in `taken`.
std::string fresh_name(const std::string& hint, const std::set<std::string>& taken);

// --- printing ---------------------------------------------------------------

// Renders in the surface grammar: `Pi x:A.B`, `lam x:A.B`, juxtaposition.
std::string print(const Term& t);
// Structural key without binder hints; equal keys iff alpha-equivalent.
std::string canonical_key(const Term& t);

}  // namespace pts
