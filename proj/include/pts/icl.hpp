#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pts/axioms.hpp"
#include "pts/judgement.hpp"
#include "pts/term.hpp"

namespace pts {

enum class Combinator { S, K, I, G, Xi };
const char* to_string(Combinator c);

// Terms of illative combinatory logic. Abs is transitional: bracket
// abstraction removes it.
class IclTerm {
 public:
  enum class Kind { Var, Const, Comb, App, Abs };

  IclTerm() = default;
  static IclTerm var(std::string name);
  static IclTerm constant(std::string name);
  static IclTerm comb(Combinator c);
  static IclTerm app(IclTerm f, IclTerm a);
  static IclTerm apps(IclTerm f, const std::vector<IclTerm>& args);
  static IclTerm abs(std::string name, IclTerm body);

  explicit operator bool() const { return node_ != nullptr; }
  Kind kind() const;
  const std::string& name() const;  // Var, Const, Abs
  Combinator combinator() const;
  const IclTerm& fn() const;
  const IclTerm& arg() const;
  const IclTerm& body() const;  // Abs

  bool is(Combinator c) const { return kind() == Kind::Comb && combinator() == c; }
  std::size_t size() const;

  // Up to renaming of Abs binders.
  friend bool operator==(const IclTerm& a, const IclTerm& b);
  friend bool operator!=(const IclTerm& a, const IclTerm& b) { return !(a == b); }

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
};

std::string print(const IclTerm& t);
std::set<std::string> free_vars(const IclTerm& t);
bool contains_abs(const IclTerm& t);
// Replaces free occurrences of x (no capture: the value must be Abs-free or closed).
IclTerm substitute(const IclTerm& t, const std::string& x, const IclTerm& value);

// [x]=x, [c]=c, [XY]=[X][Y], [X:A]=[A][X], [Πx:X.Yx]=G[X][Y] when x is not
// free in X Y, otherwise G[X](Abs x.[B]); [λx:X.B]=Abs x.[B].
IclTerm translate_to_icl(const Term& t);
IclTerm translate_to_icl(const Statement& s);

enum class AbstractionAlgorithm { EtaOptimized, Plain };

// [x].M for an Abs-free M.
IclTerm abstract_variable(const std::string& x, const IclTerm& m,
                          AbstractionAlgorithm alg = AbstractionAlgorithm::EtaOptimized);
// Removes every Abs node, innermost first.
IclTerm bracket_abstract(const IclTerm& t, AbstractionAlgorithm alg = AbstractionAlgorithm::EtaOptimized);

// Weak reduction: I x, K x y, S x y z and G x y z (to Ξ x (S y z)), leftmost
// outermost. nullopt when the fuel runs out first.
std::optional<IclTerm> weak_normalize(const IclTerm& t, std::size_t fuel);
std::optional<IclTerm> weak_step(const IclTerm& t);

// Every Pi node becomes a Lam node with the same binder and domain.
Term identify_lambda_pi(const Term& m);

struct CombinatorForm {
  std::string scheme;
  IclTerm combinator;  // bracket abstraction of the erased subject
  Term type;           // the scheme's type pattern
};

// The combinator forms of Pi1, I1, K1 and S1.
std::vector<CombinatorForm> combinator_axiom_forms(const AxiomBase& base,
                                                   AbstractionAlgorithm alg = AbstractionAlgorithm::EtaOptimized);

}  // namespace pts
