#pragma once

#include <cstddef>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pts/judgement.hpp"
#include "pts/term.hpp"

namespace pts {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " at offset " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

struct ParseOptions {
  // Names accepted as constants. Unset means no constants.
  std::function<bool(const std::string&)> is_constant;
  // Free variables that may occur (typically the context so far).
  std::set<std::string> variables;
  // `?name` identifiers become constants standing for sort metavariables.
  bool metavariables = false;
  // Unknown identifiers become free variables instead of an error.
  bool free_identifiers = false;
};

Term parse_term(std::string_view text, const ParseOptions& options);

// `x1:A1, x2:A2 |- M : A`; each context entry may mention earlier variables.
Judgement parse_judgement(std::string_view text, const ParseOptions& options);

// `M : A`, parsed in the given options' scope.
Statement parse_statement(std::string_view text, const ParseOptions& options);

bool is_identifier(std::string_view name);

}  // namespace pts
