#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "pts/derivation.hpp"
#include "pts/engine.hpp"
#include "pts/spec.hpp"

namespace pts {

class ClassificationConflict : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using SortTriple = std::array<SortRef, 3>;

// Condition ($): no axiom sort is the first component of a rule.
struct DollarCheck {
  std::string constant;
  SortRef sort;
  std::optional<SortTriple> blocking_rule;  // a rule (sort, s2, s3) when one exists
};

struct DollarResult {
  bool holds = false;
  std::vector<DollarCheck> checks;
};

DollarResult check_dollar(const Specification& spec, std::uint32_t bound = 8);

struct Inhabitant {
  Term term;
  Derivation derivation;  // ⊢ term : sort
};

// Under-approximations of the inhabited and normal-form inhabited sorts.
// Every witness found is a normal form, so both maps agree; `complete` is
// always false.
struct Inhabitation {
  std::map<SortRef, Inhabitant> inhabited;
  std::map<SortRef, Inhabitant> nf_inhabited;
  bool complete = false;
};

Inhabitation inhabited_sorts(const Specification& spec, SearchLimits limits = {});

struct ChainStep {
  SortRef from;
  SortRef to;
  SortRef via;  // inhabited s' with (s', from, to) in R
  Inhabitant via_witness;
};

struct Chain {
  std::vector<SortRef> sorts;  // s1 ... sn with s1 = sn
  std::vector<ChainStep> steps;
  Inhabitant nf_witness;       // ⊢ A1 : s1 with A1 normal
};

// Shortest cycle through an nf-inhabited sort, at most max_n sorts long.
// With an anchor the cycle must start there.
std::optional<Chain> find_chain(const Specification& spec, std::size_t max_n = 4, SearchLimits limits = {},
                                std::optional<SortRef> anchor = std::nullopt);

// Replays every membership claim of the chain; returns the first failure.
std::optional<std::string> chain_violation(const Specification& spec, const Chain& chain, SearchLimits limits = {});

// Condition ($$s1): no rule has a second component s with (s1 : s) in A.
struct DoubleDollarResult {
  bool holds = false;
  std::optional<SortTriple> rule;    // counterexample rule
  std::optional<SortRef> axiom_sort; // with s1 : axiom_sort
};

DoubleDollarResult check_double_dollar(const Specification& spec, const SortRef& s1, std::uint32_t bound = 8);

// A_n, A_{2n-1}, ... built by iterating the product construction along the chain.
std::vector<Term> witness_family(const Specification& spec, const Chain& chain, std::size_t k,
                                 SearchLimits limits = {});

enum class Category { TrivialEquivalent, NoEquivalentHPTS, SupersortedNontrivial, Unknown };
const char* to_string(Category c);

struct Classification {
  Category verdict = Category::Unknown;
  DollarResult dollar;
  std::optional<Chain> chain;
  std::optional<DoubleDollarResult> double_dollar;
  Tri supersorted = Tri::Unknown;
};

Classification classify(const Specification& spec, SearchLimits limits = {});

nlohmann::json chain_to_json(const Chain& chain);
nlohmann::json classification_to_json(const Specification& spec, const Classification& c);

}  // namespace pts
