#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pts/parse.hpp"
#include "pts/term.hpp"

namespace pts {

// A sort: either an atom (`*`, `box`) or a member of an indexed family
// (`box_3` is family `box`, index 3).
struct SortRef {
  std::string name;
  std::optional<std::uint32_t> index;

  static SortRef atom(std::string n) { return {std::move(n), std::nullopt}; }
  static SortRef member(std::string family, std::uint32_t i) { return {std::move(family), i}; }

  bool indexed() const { return index.has_value(); }
  // The constant that denotes this sort inside terms.
  std::string constant() const;
  Term term() const { return Term::constant(constant()); }

  friend bool operator==(const SortRef& a, const SortRef& b) { return a.name == b.name && a.index == b.index; }
  friend bool operator!=(const SortRef& a, const SortRef& b) { return !(a == b); }
  friend bool operator<(const SortRef& a, const SortRef& b);
};

std::string print(const SortRef& s);

enum class PatternKind { Concrete, FamilyVar, FamilySucc, FamilyMax };

struct SortPattern {
  PatternKind kind = PatternKind::Concrete;
  SortRef concrete;   // Concrete
  std::string family; // the other kinds
  std::string var;    // FamilyVar, FamilySucc, first argument of FamilyMax
  std::string var2;   // second argument of FamilyMax

  static SortPattern of(SortRef s) { return {PatternKind::Concrete, std::move(s), {}, {}, {}}; }
  static SortPattern family_var(std::string f, std::string v) {
    return {PatternKind::FamilyVar, {}, std::move(f), std::move(v), {}};
  }
  static SortPattern family_succ(std::string f, std::string v) {
    return {PatternKind::FamilySucc, {}, std::move(f), std::move(v), {}};
  }
  static SortPattern family_max(std::string f, std::string v, std::string w) {
    return {PatternKind::FamilyMax, {}, std::move(f), std::move(v), std::move(w)};
  }

  bool concrete_only() const { return kind == PatternKind::Concrete; }
  friend bool operator==(const SortPattern& a, const SortPattern& b);
};

std::string print(const SortPattern& p);

struct RuleTriple {
  SortPattern s1, s2, s3;
  bool concrete_only() const { return s1.concrete_only() && s2.concrete_only() && s3.concrete_only(); }
  friend bool operator==(const RuleTriple& a, const RuleTriple& b) {
    return a.s1 == b.s1 && a.s2 == b.s2 && a.s3 == b.s3;
  }
};

std::string print(const RuleTriple& r);

struct Axiom {
  std::string constant;
  SortRef sort;
  friend bool operator==(const Axiom& a, const Axiom& b) { return a.constant == b.constant && a.sort == b.sort; }
};

// `box_i : box_succ(i)`: the subject is a family variable pattern.
struct SchematicAxiom {
  SortPattern subject;
  SortPattern sort;
  friend bool operator==(const SchematicAxiom& a, const SchematicAxiom& b) {
    return a.subject == b.subject && a.sort == b.sort;
  }
};

enum class Tri { False, True, Unknown };
const char* to_string(Tri t);

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Specification {
  std::string name;
  std::vector<std::string> sorts;     // atom sorts in declaration order
  std::vector<std::string> families;  // indexed sort families (members are sorts and constants)
  std::vector<std::string> constants; // all atom constants, sorts included
  std::vector<Axiom> axioms;
  std::vector<SchematicAxiom> schematic_axioms;
  std::vector<RuleTriple> rules;
  bool axiom_closure = false;

  bool has_families() const { return !families.empty(); }
  bool is_constant(const std::string& c) const;
  bool is_sort_name(const std::string& c) const;
  // Resolves a constant name to a sort of this spec.
  std::optional<SortRef> sort_ref(const std::string& c) const;
  std::optional<SortRef> sort_of_term(const Term& t) const;
  bool is_sort_term(const Term& t) const { return sort_of_term(t).has_value(); }

  // Atoms in declaration order, then family members with index <= bound.
  std::vector<SortRef> sorts_upto(std::uint32_t bound) const;
  // Position in declaration order; used for deterministic preferences.
  std::size_t sort_rank(const SortRef& s) const;

  ParseOptions parse_options() const;

  friend bool operator==(const Specification& a, const Specification& b);
};

// Names of the built-in catalog, in catalog order.
const std::vector<std::string>& builtin_names();
Specification builtin(std::string_view name);
// Lookup by name: builtins first, then a spec file path.
Specification load_spec(const std::string& selector);

Specification parse_spec(std::string_view text);
std::string print_spec(const Specification& spec);

std::vector<SortRef> rule_targets(const Specification& spec, const SortRef& s1, const SortRef& s2);
bool has_rule(const Specification& spec, const SortRef& s1, const SortRef& s2, const SortRef& s3);

// Sorts s with c:s in the axiom set. Under transitive closure, indexed sorts
// reached only through the closure are enumerated up to `bound`.
std::vector<SortRef> axiom_sorts(const Specification& spec, const std::string& c, std::uint32_t bound = 8);
bool has_axiom(const Specification& spec, const std::string& c, const SortRef& s);

Tri is_supersorted(const Specification& spec);

}  // namespace pts
