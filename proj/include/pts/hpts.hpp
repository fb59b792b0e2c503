#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pts/axioms.hpp"
#include "pts/derivation.hpp"
#include "pts/engine.hpp"

namespace pts {

class MissingSort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Hilbert-style checking against a generated axiom base. Mode must be H or HPlus.
CheckReport h_check_derivation(const AxiomBase& base, const Derivation& d, Mode mode,
                               SchemeInstantiator* instantiator = nullptr);

// Derivation of ⊢ M:A in mode h, or nullopt. `limits.fuel == 0` finds nothing.
struct HDeriveResult {
  Derivation derivation;  // null when not found
  std::string method;     // "axiom", "scheme" or "translation"
  std::string reason;
};
HDeriveResult h_derive(const AxiomBase& base, const Statement& goal, SearchLimits limits = {});

// The constructive equivalence. One translator holds memo tables for one base.
class Translator {
 public:
  explicit Translator(const AxiomBase& base, SearchLimits limits = {});
  ~Translator();
  Translator(const Translator&) = delete;
  Translator& operator=(const Translator&) = delete;

  // Γ, x:A ⊢ M:B in mode h-plus  ->  Γ ⊢ λx:A.M : Πx:A.B in mode h-plus.
  Derivation eliminate_abstraction(const Derivation& d);
  // Γ ⊢ A:s1 and Γ, x:A ⊢ B:s2  ->  Γ ⊢ Πx:A.B : s3.
  Derivation eliminate_product(const Derivation& da, const Derivation& db, const SortRef& s3);
  // Any valid PTS derivation -> h-plus derivation of the same judgement.
  Derivation to_hplus(const Derivation& d);
  // Valid PTS derivation with an empty conclusion context -> mode-h derivation.
  Derivation pts_to_hpts(const Derivation& d);
  // Γ ⊢ A:s in mode h-plus, for some sort s; throws MissingSort.
  Derivation sort_typing(const Context& ctx, const Term& a);

  SchemeInstantiator& instantiator();
  const AxiomBase& base() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Derivation pts_to_hpts(const AxiomBase& base, const Derivation& d, SearchLimits limits = {});

struct Mpc {
  std::vector<const DerivationNode*> nodes;  // from the chain start to its final judgement
  std::optional<std::string> scheme;         // when it starts with an axiom of B
  std::size_t applications = 0;
  std::size_t head_reductions = 0;
  bool is_long = false;
};

struct DerivationMetrics {
  std::size_t alength = 0;
  std::size_t slength = 0;
  std::vector<Mpc> mpcs;
  std::vector<std::size_t> long_mpcs;  // indices into mpcs
};

// Throws std::invalid_argument on rules outside h-plus.
DerivationMetrics derivation_metrics(const Derivation& d, const AxiomBase* base = nullptr);

}  // namespace pts
