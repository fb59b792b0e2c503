#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "pts/judgement.hpp"
#include "pts/spec.hpp"

namespace pts {

enum class Rule {
  Axiom,
  Start,
  Weakening,
  Application,
  Abstraction,
  AbstractionSimple,
  Product,
  Conversion,
  TypeReduction,
  SubjectReduction,
};

const char* to_string(Rule r);
std::optional<Rule> rule_from_string(const std::string& s);

// An axiom node that instantiates a scheme of the Hilbert-style axiom base.
struct SchemeUse {
  std::string scheme;
  std::map<std::string, SortRef> assignment;  // metavariable -> sort
};

struct RuleInfo {
  std::optional<std::array<SortRef, 3>> triple;  // product (and abstraction, for its Pi premise)
  std::optional<SortRef> sort;                   // sort of a start/weakening/conversion minor premise
  // Conversion: `left` reduces the premise type, `right` the conclusion type,
  // to a common term. Type/subject reduction: `left` is the single step.
  std::vector<Term> left;
  std::vector<Term> right;
  std::optional<SchemeUse> scheme;
};

struct DerivationNode;
using Derivation = std::shared_ptr<const DerivationNode>;

struct DerivationNode {
  Rule rule;
  Judgement conclusion;
  std::vector<Derivation> premises;
  RuleInfo info;
};

Derivation make_derivation(Rule rule, Judgement conclusion, std::vector<Derivation> premises = {},
                           RuleInfo info = {});

// Node counts over distinct nodes of the (possibly shared) derivation DAG.
std::size_t derivation_size(const Derivation& d);
std::size_t derivation_depth(const Derivation& d);
std::map<Rule, std::size_t> rule_histogram(const Derivation& d);

enum class Mode { Pts, PtsSupersorted, H, HPlus };
const char* to_string(Mode m);

// Validates the scheme instance of an axiom-of-B node; returns a failure reason.
using SchemeValidator = std::function<std::optional<std::string>(const SchemeUse&, const Statement&)>;

struct CheckReport {
  bool valid = true;
  std::vector<std::size_t> path;  // premise indices from the root to the bad node
  std::optional<Rule> rule;
  std::string reason;

  std::string describe() const;
};

CheckReport check_derivation(const Specification& spec, const Derivation& d, Mode mode,
                             const SchemeValidator& schemes = {});

nlohmann::json derivation_to_json(const Derivation& d);
// Terms are parsed in each judgement's context against the spec's constants.
Derivation derivation_from_json(const Specification& spec, const nlohmann::json& j);

std::string print_derivation(const Derivation& d);

}  // namespace pts
