#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pts/derivation.hpp"
#include "pts/judgement.hpp"
#include "pts/spec.hpp"

namespace pts {

struct SearchLimits {
  std::size_t fuel = 10000;  // reduction steps per conversion test, and total inference steps
  std::size_t depth = 12;    // nesting depth of the syntax-directed search
  std::uint32_t sort_bound = 8;  // largest family index tried for indexed sorts
};

enum class Verdict { Yes, No, Unknown };
const char* to_string(Verdict v);

struct Typing {
  Term type;
  Derivation derivation;
};

struct InferResult {
  Verdict verdict = Verdict::No;
  std::vector<Typing> typings;  // nonempty iff verdict is Yes
  std::string reason;
};

struct CheckResult {
  Verdict verdict = Verdict::No;
  Derivation derivation;  // set iff verdict is Yes
  std::string reason;
};

// Syntax-directed type inference and checking. One engine holds the memo
// tables for a single specification; it is not safe for concurrent use.
class Engine {
 public:
  explicit Engine(const Specification& spec, SearchLimits limits = {});
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  // Uses abstraction-simple instead of abstraction (supersorted specs only).
  void set_simple_abstraction(bool on);
  // Refills the step budget; memo tables are kept.
  void reset_budget();

  InferResult infer(const Context& ctx, const Term& m);
  CheckResult check(const Judgement& j);
  // Derivations of Γ ⊢ A : s with s a sort, one per reachable sort.
  InferResult sorts_of(const Context& ctx, const Term& a);
  // Typings for each context entry: Γ_<i ⊢ A_i : s_i.
  InferResult context_typings(const Context& ctx);

  const Specification& spec() const;
  const SearchLimits& limits() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

InferResult infer_types(const Specification& spec, const Context& ctx, const Term& m, SearchLimits limits = {});
CheckResult check_judgement(const Specification& spec, const Judgement& j, SearchLimits limits = {});

class DerivationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// From d : Γ1, x:A, Γ2 ⊢ M:B and e : Γ1 ⊢ N:A builds Γ1, Γ2[x:=N] ⊢ M[x:=N] : B[x:=N].
Derivation transform_substitution(const Specification& spec, const Derivation& d, const Derivation& e);

}  // namespace pts
