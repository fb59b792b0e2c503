#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "pts/derivation.hpp"
#include "pts/engine.hpp"
#include "pts/judgement.hpp"
#include "pts/spec.hpp"

namespace pts {

struct SortTables;

// A constraint over sort metavariables: (a : b) in A, or (a, b, c) in R.
struct SortConstraint {
  enum class Kind { Axiom, Rule } kind;
  std::vector<std::string> args;

  friend bool operator==(const SortConstraint& x, const SortConstraint& y) {
    return x.kind == y.kind && x.args == y.args;
  }
};

std::string print(const SortConstraint& c);

// A judgement pattern over sort metavariables (constants spelled `?s1`, ...).
struct AxiomScheme {
  std::string name;    // Pi1, I1, K3, ...
  std::string family;  // Pi, I, K, S
  Term subject;
  Term type;
  std::vector<std::string> metavars;   // those occurring in the statement, in order
  std::vector<std::string> auxiliary;  // existential sorts used by the conditions only
  std::vector<SortConstraint> conditions;
  std::string parent;        // empty for the four base schemes
  std::string generated_by;  // "", "I" or "II"
  std::string note;

  Statement statement() const { return {subject, type}; }
};

bool is_metavar(const std::string& name);
// Metavariables of a term in order of first occurrence.
std::vector<std::string> metavars_of(const Term& t);

// Key equal for statements that agree up to metavariable renaming.
std::string scheme_key(const Term& subject, const Term& type);
bool same_up_to_renaming(const AxiomScheme& a, const AxiomScheme& b);
// `inst` is obtained from `general` by a (not necessarily injective) metavariable substitution.
bool is_instance_of(const Statement& inst, const Statement& general);
// Matches metavariables of `pattern` against constants of `t`, extending `binding`.
bool match_pattern(const Term& pattern, const Term& t, std::map<std::string, std::string>& binding);

class NotSupersorted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class FixpointDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class SideConditionFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ProvabilityUnknown : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Types a closed statement pattern symbolically and returns it as a scheme
// whose conditions are the constraints used by that typing. Returns nullopt
// when the pattern has no typing shape.
std::optional<AxiomScheme> type_scheme(const Term& subject, const std::optional<Term>& type);

std::vector<AxiomScheme> base_schemes(const Specification& spec);
// The Pi family as listed after the definition of the corresponding HPTS.
std::vector<AxiomScheme> reference_pi_family();

struct AxiomBase {
  Specification spec;
  std::vector<AxiomScheme> schemes;

  const AxiomScheme* find(const std::string& name) const;
  std::vector<const AxiomScheme*> family(const std::string& family) const;
  std::map<std::string, std::size_t> family_sizes() const;
};

// Closes the base schemes under generation rules (I) and (II).
AxiomBase generate_axiom_base(const Specification& spec, std::size_t safety_bound = 400);

// Successors of one scheme, before deduplication.
std::vector<AxiomScheme> rule_one_successors(const AxiomScheme& s);
std::optional<AxiomScheme> rule_two_successor(const AxiomScheme& s);

// Instance statements of schemes, with side conditions and PTS provability
// verified. Results are cached; the cache is synchronized.
class SchemeInstantiator {
 public:
  SchemeInstantiator(const AxiomBase& base, SearchLimits limits = {});
  ~SchemeInstantiator();

  // Throws SideConditionFailed or ProvabilityUnknown.
  Statement instantiate(const AxiomScheme& scheme, const std::map<std::string, SortRef>& assignment);
  Statement instantiate(const std::string& scheme, const std::map<std::string, SortRef>& assignment);
  // Whether the conditions have a solution extending the assignment.
  std::optional<std::string> conditions_violation(const AxiomScheme& scheme,
                                                  const std::map<std::string, SortRef>& assignment) const;
  // Extends a partial assignment of statement metavariables to one whose
  // conditions hold; nullopt when none exists within the searched sorts.
  std::optional<std::map<std::string, SortRef>> complete(const AxiomScheme& scheme,
                                                         const std::map<std::string, SortRef>& partial) const;
  SchemeValidator validator();

  const AxiomBase& base() const { return base_; }

 private:
  struct Tables;
  const SortTables& tables(std::uint32_t bound) const;

  const AxiomBase& base_;
  SearchLimits limits_;
  std::unique_ptr<Tables> tables_;
  mutable std::mutex tables_mu_;
  std::mutex mu_;
  std::map<std::string, std::pair<bool, std::string>> proved_;  // instance key -> (ok, reason)
};

Statement instantiate_scheme(const AxiomScheme& scheme, const std::map<std::string, SortRef>& assignment,
                             const Specification& spec, SearchLimits limits = {});

// Replaces metavariables in a pattern by sort constants.
Term instantiate_pattern(const Term& t, const std::map<std::string, SortRef>& assignment);

nlohmann::json scheme_to_json(const AxiomScheme& s);
nlohmann::json axiom_base_to_json(const AxiomBase& base);

}  // namespace pts
