#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pts/term.hpp"

namespace pts {

struct Statement {
  Term subject;
  Term type;
};

struct ContextEntry {
  std::string var;
  Term type;
};

using Context = std::vector<ContextEntry>;

struct Judgement {
  Context context;
  Term subject;
  Term type;

  Statement statement() const { return {subject, type}; }
};

bool operator==(const Statement& a, const Statement& b);
bool operator==(const ContextEntry& a, const ContextEntry& b);
bool operator==(const Judgement& a, const Judgement& b);

std::set<std::string> context_vars(const Context& ctx);
std::optional<Term> lookup(const Context& ctx, const std::string& var);

// Names pairwise distinct and every type mentions only earlier variables.
// Returns a description of the first violation.
std::optional<std::string> context_violation(const Context& ctx);

// Context invariants plus FV(subject) and FV(type) inside the context.
std::optional<std::string> judgement_violation(const Judgement& j);

Context substitute_context(const Context& ctx, const std::string& x, const Term& value);

std::string print(const Statement& s);
std::string print(const Context& ctx);
std::string print(const Judgement& j);

// Deterministic string usable as a hash key.
std::string judgement_key(const Judgement& j);
std::string context_key(const Context& ctx);

}  // namespace pts
