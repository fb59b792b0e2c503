#include "pts/classifier.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "pts/reduce.hpp"

namespace pts {

namespace {

std::vector<std::string> all_constants(const Specification& spec, std::uint32_t bound) {
  std::vector<std::string> out = spec.constants;
  for (const auto& s : spec.sorts_upto(bound)) {
    if (s.indexed()) out.push_back(s.constant());
  }
  return out;
}

SearchLimits replay_limits(SearchLimits l) {
  l.depth = std::max<std::size_t>(l.depth, 16);
  return l;
}

std::optional<Derivation> derive(const Specification& spec, const Term& m, const SortRef& s, SearchLimits limits) {
  CheckResult r = check_judgement(spec, {{}, m, s.term()}, replay_limits(limits));
  if (r.verdict != Verdict::Yes) return std::nullopt;
  return r.derivation;
}

nlohmann::json triple_json(const SortTriple& t) {
  return nlohmann::json::array({print(t[0]), print(t[1]), print(t[2])});
}

nlohmann::json inhabitant_json(const SortRef& s, const Inhabitant& w) {
  return {{"sort", print(s)}, {"term", print(w.term)}};
}

// Renames the binders of a Π spine to x1, x2, ... from the outside in (x alone for one).
Term number_binders(const Term& t, std::size_t depth, std::size_t total) {
  if (!t.is_pi()) return t;
  std::string name = total == 1 ? "x" : "x" + std::to_string(depth);
  return Term::pi(name, t.domain(), number_binders(t.body(), depth + 1, total));
}

std::size_t pi_depth(const Term& t) { return t.is_pi() ? 1 + pi_depth(t.body()) : 0; }

}  // namespace

const char* to_string(Category c) {
  switch (c) {
    case Category::TrivialEquivalent:
      return "TrivialEquivalent";
    case Category::NoEquivalentHPTS:
      return "NoEquivalentHPTS";
    case Category::SupersortedNontrivial:
      return "SupersortedNontrivial";
    case Category::Unknown:
      return "Unknown";
  }
  return "?";
}

DollarResult check_dollar(const Specification& spec, std::uint32_t bound) {
  DollarResult r;
  r.holds = true;
  std::vector<SortRef> universe = spec.sorts_upto(bound);
  for (const auto& c : all_constants(spec, bound)) {
    for (const auto& s : axiom_sorts(spec, c, bound)) {
      DollarCheck check{c, s, std::nullopt};
      for (const auto& s2 : universe) {
        auto targets = rule_targets(spec, s, s2);
        if (!targets.empty()) {
          check.blocking_rule = SortTriple{s, s2, targets.front()};
          break;
        }
      }
      if (check.blocking_rule) r.holds = false;
      r.checks.push_back(std::move(check));
    }
  }
  return r;
}

Inhabitation inhabited_sorts(const Specification& spec, SearchLimits limits) {
  Inhabitation inh;
  auto& w = inh.inhabited;
  std::vector<SortRef> universe = spec.sorts_upto(limits.sort_bound);
  std::set<SortRef> in_universe(universe.begin(), universe.end());

  for (const auto& c : all_constants(spec, limits.sort_bound)) {
    for (const auto& s : axiom_sorts(spec, c, limits.sort_bound)) {
      if (w.count(s)) continue;
      Term t = Term::constant(c);
      if (auto d = derive(spec, t, s, limits)) w.emplace(s, Inhabitant{t, *d});
    }
  }

  // Product closure over already-witnessed sorts, one round per term depth.
  std::size_t rounds = std::max<std::size_t>(1, std::min(limits.fuel, universe.size() + 1));
  for (std::size_t round = 0; round < rounds; ++round) {
    std::map<SortRef, Inhabitant> found;
    for (const auto& s1 : universe) {
      for (const auto& s2 : universe) {
        for (const auto& s3 : rule_targets(spec, s1, s2)) {
          if (!in_universe.count(s3) || w.count(s3) || found.count(s3)) continue;
          std::optional<Term> candidate;
          auto a = w.find(s1);
          auto b = w.find(s2);
          if (a != w.end() && b != w.end()) {
            candidate = Term::pi("x", a->second.term, lift(b->second.term, 1));
          } else if (has_axiom(spec, s2.constant(), s1)) {
            // x : s2 ⊢ x : s2 with s2 : s1
            candidate = Term::pi("x", s2.term(), Term::bound(0));
          }
          if (!candidate) continue;
          if (auto d = derive(spec, *candidate, s3, limits)) found.emplace(s3, Inhabitant{*candidate, *d});
        }
      }
    }
    if (found.empty()) break;
    for (auto& [s, i] : found) w.emplace(s, std::move(i));
  }
  inh.nf_inhabited = inh.inhabited;
  return inh;
}

std::optional<Chain> find_chain(const Specification& spec, std::size_t max_n, SearchLimits limits,
                                std::optional<SortRef> anchor) {
  if (max_n < 2) throw std::invalid_argument("chains have at least two sorts");
  Inhabitation inh = inhabited_sorts(spec, limits);
  std::vector<SortRef> universe = spec.sorts_upto(limits.sort_bound);
  auto rank = [&](const SortRef& s) { return spec.sort_rank(s); };
  std::sort(universe.begin(), universe.end(), [&](const SortRef& a, const SortRef& b) { return rank(a) < rank(b); });

  // Edges si -> sj labelled with the least inhabited s'.
  std::map<SortRef, std::vector<std::pair<SortRef, SortRef>>> edges;
  for (const auto& si : universe) {
    for (const auto& sj : universe) {
      for (const auto& sp : universe) {
        if (!inh.inhabited.count(sp) || !has_rule(spec, sp, si, sj)) continue;
        edges[si].emplace_back(sj, sp);
        break;
      }
    }
  }

  std::optional<Chain> best;
  for (const auto& start : universe) {
    if (anchor && !(start == *anchor)) continue;
    auto nf = inh.nf_inhabited.find(start);
    if (nf == inh.nf_inhabited.end()) continue;
    // BFS for the shortest cycle back to start.
    std::map<SortRef, std::pair<SortRef, SortRef>> parent;  // node -> (previous, via)
    std::map<SortRef, std::size_t> dist;
    std::deque<SortRef> queue{start};
    dist[start] = 0;
    std::optional<std::pair<SortRef, SortRef>> closing;  // (last node, via)
    while (!queue.empty() && !closing) {
      SortRef cur = queue.front();
      queue.pop_front();
      if (dist[cur] + 2 > max_n) continue;
      for (const auto& [next, via] : edges[cur]) {
        if (next == start) {
          closing = std::make_pair(cur, via);
          break;
        }
        if (dist.count(next)) continue;
        dist[next] = dist[cur] + 1;
        parent.emplace(next, std::make_pair(cur, via));
        queue.push_back(next);
      }
    }
    if (!closing) continue;
    Chain chain;
    chain.nf_witness = nf->second;
    std::vector<ChainStep> rev;
    rev.push_back({closing->first, start, closing->second, inh.inhabited.at(closing->second)});
    for (SortRef node = closing->first; !(node == start);) {
      const auto& [prev, via] = parent.at(node);
      rev.push_back({prev, node, via, inh.inhabited.at(via)});
      node = prev;
    }
    chain.steps.assign(rev.rbegin(), rev.rend());
    chain.sorts.push_back(start);
    for (const auto& st : chain.steps) chain.sorts.push_back(st.to);
    if (!best || chain.sorts.size() < best->sorts.size()) best = std::move(chain);
  }
  return best;
}

std::optional<std::string> chain_violation(const Specification& spec, const Chain& chain, SearchLimits limits) {
  if (chain.sorts.size() < 2) return std::string("a chain needs at least two sorts");
  if (!(chain.sorts.front() == chain.sorts.back())) return std::string("chain does not return to its first sort");
  if (chain.steps.size() + 1 != chain.sorts.size()) return std::string("one step is needed per link");
  auto nf = normalize(chain.nf_witness.term, limits.fuel);
  if (!nf || *nf != chain.nf_witness.term) return std::string("anchor witness is not a normal form");
  if (!derive(spec, chain.nf_witness.term, chain.sorts.front(), limits)) {
    return "anchor witness " + print(chain.nf_witness.term) + " does not check at " + print(chain.sorts.front());
  }
  for (std::size_t i = 0; i < chain.steps.size(); ++i) {
    const ChainStep& st = chain.steps[i];
    if (!(st.from == chain.sorts[i]) || !(st.to == chain.sorts[i + 1])) return "step " + std::to_string(i) + " is misplaced";
    if (!has_rule(spec, st.via, st.from, st.to)) {
      return "(" + print(st.via) + ", " + print(st.from) + ", " + print(st.to) + ") is not a rule";
    }
    if (!derive(spec, st.via_witness.term, st.via, limits)) {
      return "witness " + print(st.via_witness.term) + " does not check at " + print(st.via);
    }
  }
  return std::nullopt;
}

DoubleDollarResult check_double_dollar(const Specification& spec, const SortRef& s1, std::uint32_t bound) {
  DoubleDollarResult r;
  r.holds = true;
  std::vector<SortRef> universe = spec.sorts_upto(bound);
  for (const auto& t : axiom_sorts(spec, s1.constant(), bound)) {
    for (const auto& a : universe) {
      auto targets = rule_targets(spec, a, t);
      if (targets.empty()) continue;
      r.holds = false;
      r.rule = SortTriple{a, t, targets.front()};
      r.axiom_sort = t;
      return r;
    }
  }
  return r;
}

std::vector<Term> witness_family(const Specification& spec, const Chain& chain, std::size_t k, SearchLimits limits) {
  if (k == 0) throw std::invalid_argument("witness_family needs k >= 1");
  if (auto v = chain_violation(spec, chain, limits)) throw DerivationError("invalid chain: " + *v);
  std::vector<Term> out;
  Term a = chain.nf_witness.term;
  for (std::size_t round = 0; round < k; ++round) {
    for (const auto& st : chain.steps) a = Term::pi("x", st.via_witness.term, lift(a, 1));
    Term named = number_binders(a, 1, pi_depth(a));
    if (!derive(spec, named, chain.sorts.front(), limits)) {
      throw DerivationError(print(named) + " does not check at " + print(chain.sorts.front()));
    }
    out.push_back(named);
  }
  return out;
}

Classification classify(const Specification& spec, SearchLimits limits) {
  Classification c;
  c.dollar = check_dollar(spec, limits.sort_bound);
  c.supersorted = is_supersorted(spec);
  Inhabitation inh = inhabited_sorts(spec, limits);
  std::vector<SortRef> anchors;
  for (const auto& [s, w] : inh.nf_inhabited) anchors.push_back(s);
  std::sort(anchors.begin(), anchors.end(),
            [&](const SortRef& a, const SortRef& b) { return spec.sort_rank(a) < spec.sort_rank(b); });
  bool no_equivalent = false;
  for (const auto& s : anchors) {
    auto chain = find_chain(spec, 4, limits, s);
    if (!chain) continue;
    auto dd = check_double_dollar(spec, s, limits.sort_bound);
    if (!c.chain) {
      c.chain = chain;
      c.double_dollar = dd;
    }
    if (dd.holds) {
      c.chain = chain;
      c.double_dollar = dd;
      no_equivalent = true;
      break;
    }
  }
  bool super = c.supersorted == Tri::True;
  int fired = int(c.dollar.holds) + int(no_equivalent) + int(super);
  if (fired > 1) {
    throw ClassificationConflict(spec.name + ": more than one classification condition holds");
  }
  if (c.dollar.holds) {
    c.verdict = Category::TrivialEquivalent;
  } else if (no_equivalent) {
    c.verdict = Category::NoEquivalentHPTS;
  } else if (super) {
    c.verdict = Category::SupersortedNontrivial;
  }
  return c;
}

nlohmann::json chain_to_json(const Chain& chain) {
  nlohmann::json j;
  j["sorts"] = nlohmann::json::array();
  for (const auto& s : chain.sorts) j["sorts"].push_back(print(s));
  j["nf_witness"] = inhabitant_json(chain.sorts.front(), chain.nf_witness);
  j["steps"] = nlohmann::json::array();
  for (const auto& st : chain.steps) {
    j["steps"].push_back({{"rule", triple_json({st.via, st.from, st.to})},
                          {"witness", inhabitant_json(st.via, st.via_witness)}});
  }
  return j;
}

nlohmann::json classification_to_json(const Specification& spec, const Classification& c) {
  nlohmann::json j;
  j["spec"] = spec.name;
  j["verdict"] = to_string(c.verdict);
  nlohmann::json dollar;
  dollar["holds"] = c.dollar.holds;
  dollar["checks"] = nlohmann::json::array();
  for (const auto& ch : c.dollar.checks) {
    nlohmann::json e{{"axiom", ch.constant + " : " + print(ch.sort)}};
    e["blocking_rule"] = ch.blocking_rule ? triple_json(*ch.blocking_rule) : nlohmann::json(nullptr);
    dollar["checks"].push_back(e);
  }
  j["dollar"] = dollar;
  if (c.chain) j["chain"] = chain_to_json(*c.chain);
  if (c.double_dollar) {
    nlohmann::json dd{{"holds", c.double_dollar->holds}};
    if (c.double_dollar->rule) dd["rule"] = triple_json(*c.double_dollar->rule);
    if (c.double_dollar->axiom_sort) dd["axiom_sort"] = print(*c.double_dollar->axiom_sort);
    j["double_dollar"] = dd;
  }
  j["supersorted"] = to_string(c.supersorted);
  if (c.verdict == Category::SupersortedNontrivial) {
    nlohmann::json table = nlohmann::json::array();
    auto universe = spec.sorts_upto(3);
    for (const auto& a : universe) {
      for (const auto& b : universe) {
        auto t = rule_targets(spec, a, b);
        table.push_back({{"s1", print(a)}, {"s2", print(b)}, {"s3", t.empty() ? "" : print(t.front())}});
      }
    }
    j["rule_table"] = table;
  }
  return j;
}

}  // namespace pts
