#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pts/term.hpp"

namespace pts {

enum class Conversion { Equal, Distinct, Unknown };

const char* to_string(Conversion c);

// All one-step beta reducts (one per redex position), deduplicated up to alpha.
std::vector<Term> beta_step(const Term& t);

bool is_normal(const Term& t);

// True iff `to` is obtained from `from` by contracting exactly one redex.
bool is_one_step_reduct(const Term& from, const Term& to);

// One leftmost-outermost contraction; nullopt on a normal form.
std::optional<Term> contract_leftmost(const Term& t);

// Leftmost-outermost normal form within `fuel` contractions; nullopt when the
// fuel runs out (the term may diverge).
std::optional<Term> normalize(const Term& t, std::size_t fuel);

// Same strategy, returning every intermediate term: path.front() == t and
// path.back() is the normal form.
std::optional<std::vector<Term>> normalize_path(const Term& t, std::size_t fuel);

// Weak-head normal form path: contracts head redexes only.
std::optional<std::vector<Term>> whnf_path(const Term& t, std::size_t fuel);

// A common reduct witness: left runs from a, right from b, and both end in
// the same term.
struct Join {
  Conversion verdict = Conversion::Unknown;
  std::vector<Term> left;
  std::vector<Term> right;
};

// Tri-state beta conversion. Equal when a common reduct is found, Distinct
// when both sides normalize to different normal forms.
Join find_join(const Term& a, const Term& b, std::size_t fuel);
Conversion beta_eq(const Term& a, const Term& b, std::size_t fuel);

// Checks that consecutive entries are one-step reducts.
bool is_reduction_path(const std::vector<Term>& path);

// Finds a reduction path from `from` to a known reduct `to` by contracting
// only the redexes needed to match `to` structurally.
std::optional<std::vector<Term>> reduction_path_to(const Term& from, const Term& to, std::size_t fuel);

}  // namespace pts
