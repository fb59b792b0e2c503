#include "pts/reduce.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace pts {

const char* to_string(Conversion c) {
  switch (c) {
    case Conversion::Equal:
      return "equal";
    case Conversion::Distinct:
      return "distinct";
    case Conversion::Unknown:
      return "unknown";
  }
  return "unknown";
}

namespace {

Term contract(const Term& redex) { return instantiate(redex.fn().body(), redex.arg()); }

void all_reducts(const Term& t, std::vector<Term>& out) {
  switch (t.kind()) {
    case TermKind::App: {
      if (t.is_redex()) out.push_back(contract(t));
      std::vector<Term> sub;
      all_reducts(t.fn(), sub);
      for (auto& f : sub) out.push_back(Term::app(f, t.arg()));
      sub.clear();
      all_reducts(t.arg(), sub);
      for (auto& a : sub) out.push_back(Term::app(t.fn(), a));
      return;
    }
    case TermKind::Pi:
    case TermKind::Lam: {
      std::vector<Term> sub;
      all_reducts(t.domain(), sub);
      for (auto& d : sub) {
        out.push_back(t.is_pi() ? Term::pi(t.name(), d, t.body()) : Term::lam(t.name(), d, t.body()));
      }
      sub.clear();
      all_reducts(t.body(), sub);
      for (auto& b : sub) {
        out.push_back(t.is_pi() ? Term::pi(t.name(), t.domain(), b) : Term::lam(t.name(), t.domain(), b));
      }
      return;
    }
    default:
      return;
  }
}

Term rebuild(const Term& t, Term left, Term right) {
  switch (t.kind()) {
    case TermKind::Pi:
      return Term::pi(t.name(), std::move(left), std::move(right));
    case TermKind::Lam:
      return Term::lam(t.name(), std::move(left), std::move(right));
    default:
      return Term::app(std::move(left), std::move(right));
  }
}

// Normal-order normalization with a shared step budget.
std::optional<Term> nf_rec(const Term& t, std::size_t& fuel) {
  Term cur = t;
  // Head reduction first.
  for (;;) {
    auto [head, args] = spine(cur);
    if (head.is_lam() && !args.empty()) {
      if (fuel == 0) return std::nullopt;
      --fuel;
      Term reduced = instantiate(head.body(), args[0]);
      cur = Term::apps(reduced, std::vector<Term>(args.begin() + 1, args.end()));
      continue;
    }
    break;
  }
  switch (cur.kind()) {
    case TermKind::App: {
      auto [head, args] = spine(cur);
      auto h = nf_rec(head, fuel);
      if (!h) return std::nullopt;
      // The head is now normal and not a lambda applied to arguments.
      if (h->is_lam()) {
        // Head normalized into a lambda: continue reducing.
        return nf_rec(Term::apps(*h, args), fuel);
      }
      Term result = *h;
      for (const auto& a : args) {
        auto na = nf_rec(a, fuel);
        if (!na) return std::nullopt;
        result = Term::app(result, *na);
      }
      return result;
    }
    case TermKind::Pi:
    case TermKind::Lam: {
      auto d = nf_rec(cur.domain(), fuel);
      if (!d) return std::nullopt;
      auto b = nf_rec(cur.body(), fuel);
      if (!b) return std::nullopt;
      return rebuild(cur, *d, *b);
    }
    default:
      return cur;
  }
}

}  // namespace

std::vector<Term> beta_step(const Term& t) {
  std::vector<Term> raw;
  all_reducts(t, raw);
  std::vector<Term> out;
  std::unordered_set<Term, TermHash> seen;
  for (auto& r : raw) {
    if (seen.insert(r).second) out.push_back(r);
  }
  return out;
}

bool is_normal(const Term& t) {
  switch (t.kind()) {
    case TermKind::App:
      return !t.is_redex() && is_normal(t.fn()) && is_normal(t.arg());
    case TermKind::Pi:
    case TermKind::Lam:
      return is_normal(t.domain()) && is_normal(t.body());
    default:
      return true;
  }
}

bool is_one_step_reduct(const Term& from, const Term& to) {
  if (from.is_redex() && contract(from) == to) return true;
  if (from.kind() != to.kind()) return false;
  switch (from.kind()) {
    case TermKind::App:
    case TermKind::Pi:
    case TermKind::Lam: {
      const Term& fl = from.kind() == TermKind::App ? from.fn() : from.domain();
      const Term& fr = from.kind() == TermKind::App ? from.arg() : from.body();
      const Term& tl = to.kind() == TermKind::App ? to.fn() : to.domain();
      const Term& tr = to.kind() == TermKind::App ? to.arg() : to.body();
      if (fr == tr && is_one_step_reduct(fl, tl)) return true;
      if (fl == tl && is_one_step_reduct(fr, tr)) return true;
      return false;
    }
    default:
      return false;
  }
}

std::optional<Term> contract_leftmost(const Term& t) {
  switch (t.kind()) {
    case TermKind::App: {
      if (t.is_redex()) return contract(t);
      if (auto f = contract_leftmost(t.fn())) return Term::app(*f, t.arg());
      if (auto a = contract_leftmost(t.arg())) return Term::app(t.fn(), *a);
      return std::nullopt;
    }
    case TermKind::Pi:
    case TermKind::Lam: {
      if (auto d = contract_leftmost(t.domain())) return rebuild(t, *d, t.body());
      if (auto b = contract_leftmost(t.body())) return rebuild(t, t.domain(), *b);
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

std::optional<Term> normalize(const Term& t, std::size_t fuel) {
  std::size_t budget = fuel;
  return nf_rec(t, budget);
}

std::optional<std::vector<Term>> normalize_path(const Term& t, std::size_t fuel) {
  std::vector<Term> path{t};
  for (;;) {
    auto next = contract_leftmost(path.back());
    if (!next) return path;
    if (fuel == 0) return std::nullopt;
    --fuel;
    path.push_back(std::move(*next));
  }
}

std::optional<std::vector<Term>> whnf_path(const Term& t, std::size_t fuel) {
  std::vector<Term> path{t};
  for (;;) {
    auto [head, args] = spine(path.back());
    if (!(head.is_lam() && !args.empty())) return path;
    if (fuel == 0) return std::nullopt;
    --fuel;
    Term reduced = instantiate(head.body(), args[0]);
    path.push_back(Term::apps(reduced, std::vector<Term>(args.begin() + 1, args.end())));
  }
}

namespace {

// Breadth-first search for a common reduct, alternating sides.
Join bfs_join(const Term& a, const Term& b, std::size_t fuel) {
  struct Side {
    std::unordered_map<Term, Term, TermHash> parent;  // child -> parent
    std::deque<Term> frontier;
  };
  Side sides[2];
  sides[0].parent.emplace(a, Term());
  sides[0].frontier.push_back(a);
  sides[1].parent.emplace(b, Term());
  sides[1].frontier.push_back(b);

  auto trace = [](const Side& s, Term t) {
    std::vector<Term> path;
    while (t) {
      path.push_back(t);
      t = s.parent.at(t);
    }
    std::reverse(path.begin(), path.end());
    return path;
  };

  std::size_t explored = 0;
  while (explored < fuel && (!sides[0].frontier.empty() || !sides[1].frontier.empty())) {
    for (int s = 0; s < 2 && explored < fuel; ++s) {
      if (sides[s].frontier.empty()) continue;
      Term cur = sides[s].frontier.front();
      sides[s].frontier.pop_front();
      for (auto& r : beta_step(cur)) {
        ++explored;
        if (sides[s].parent.count(r)) continue;
        sides[s].parent.emplace(r, cur);
        if (sides[1 - s].parent.count(r)) {
          Join j;
          j.verdict = Conversion::Equal;
          j.left = trace(sides[0], r);
          j.right = trace(sides[1], r);
          return j;
        }
        sides[s].frontier.push_back(r);
      }
    }
  }
  return Join{};
}

}  // namespace

Join find_join(const Term& a, const Term& b, std::size_t fuel) {
  Join j;
  if (a == b) {
    j.verdict = Conversion::Equal;
    j.left = {a};
    j.right = {b};
    return j;
  }
  auto pa = normalize_path(a, fuel);
  auto pb = normalize_path(b, fuel);
  if (pa && pb) {
    if (pa->back() == pb->back()) {
      j.verdict = Conversion::Equal;
      j.left = std::move(*pa);
      j.right = std::move(*pb);
    } else {
      j.verdict = Conversion::Distinct;
    }
    return j;
  }
  return bfs_join(a, b, fuel);
}

Conversion beta_eq(const Term& a, const Term& b, std::size_t fuel) {
  if (a == b) return Conversion::Equal;
  auto na = normalize(a, fuel);
  auto nb = normalize(b, fuel);
  if (na && nb) return *na == *nb ? Conversion::Equal : Conversion::Distinct;
  return bfs_join(a, b, fuel).verdict;
}

bool is_reduction_path(const std::vector<Term>& path) {
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (!is_one_step_reduct(path[i - 1], path[i])) return false;
  }
  return true;
}

namespace {

bool path_to_rec(const Term& from, const Term& to, std::size_t& fuel, std::vector<Term>& out) {
  if (from == to) return true;
  if (fuel == 0) return false;
  if (from.kind() == to.kind() &&
      (from.is_app() || from.is_pi() || from.is_lam())) {
    std::size_t saved_fuel = fuel;
    std::vector<Term> left_steps;
    std::vector<Term> right_steps;
    const Term& fl = from.fn();
    const Term& fr = from.arg();
    if (path_to_rec(fl, to.fn(), fuel, left_steps) && path_to_rec(fr, to.arg(), fuel, right_steps)) {
      for (auto& l : left_steps) out.push_back(rebuild(from, l, fr));
      for (auto& r : right_steps) out.push_back(rebuild(from, to.fn(), r));
      return true;
    }
    fuel = saved_fuel;
  }
  std::optional<Term> next;
  if (from.is_redex()) {
    next = contract(from);
  } else if (from.is_app()) {
    auto [head, args] = spine(from);
    if (head.is_lam() && !args.empty()) {
      Term reduced = instantiate(head.body(), args[0]);
      next = Term::apps(reduced, std::vector<Term>(args.begin() + 1, args.end()));
    }
  }
  if (!next) return false;
  --fuel;
  std::size_t mark = out.size();
  out.push_back(*next);
  if (path_to_rec(*next, to, fuel, out)) return true;
  out.resize(mark);
  return false;
}

}  // namespace

std::optional<std::vector<Term>> reduction_path_to(const Term& from, const Term& to, std::size_t fuel) {
  std::vector<Term> steps;
  std::size_t budget = fuel;
  if (!path_to_rec(from, to, budget, steps)) return std::nullopt;
  std::vector<Term> path{from};
  path.insert(path.end(), steps.begin(), steps.end());
  return path;
}

}  // namespace pts
