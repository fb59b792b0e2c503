#include "pts/axioms.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <functional>
#include <set>
#include <sstream>

#include "pts/parse.hpp"
#include "pts/reduce.hpp"

namespace pts {

namespace {

constexpr std::size_t kPatternFuel = 2000;

Term nf(const Term& t) {
  auto n = normalize(t, kPatternFuel);
  return n ? *n : t;
}

bool is_metavar_term(const Term& t) { return t.is_const() && is_metavar(t.name()); }

void collect_metavars(const Term& t, std::vector<std::string>& out, std::set<std::string>& seen) {
  switch (t.kind()) {
    case TermKind::Const:
      if (is_metavar(t.name()) && seen.insert(t.name()).second) out.push_back(t.name());
      return;
    case TermKind::Pi:
    case TermKind::Lam:
      collect_metavars(t.domain(), out, seen);
      collect_metavars(t.body(), out, seen);
      return;
    case TermKind::App:
      collect_metavars(t.fn(), out, seen);
      collect_metavars(t.arg(), out, seen);
      return;
    default:
      return;
  }
}

Term rename_metavars(const Term& t, const std::map<std::string, std::string>& renaming) {
  std::map<std::string, Term> repl;
  for (const auto& [from, to] : renaming) repl.emplace(from, Term::constant(to));
  return replace_consts(t, repl);
}

std::string meta_name(std::size_t i) { return "?s" + std::to_string(i); }

// Symbolic typing of closed patterns. Every sort is a metavariable; each
// typing step records the axiom or rule it relies on.
class SymbolicTyper {
 public:
  std::vector<SortConstraint> constraints;

  std::optional<Term> infer(const std::vector<std::pair<std::string, Term>>& ctx, const Term& t) {
    switch (t.kind()) {
      case TermKind::Var:
        for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) {
          if (it->first == t.name()) return it->second;
        }
        return std::nullopt;
      case TermKind::Bound:
        return std::nullopt;
      case TermKind::Const: {
        if (!is_metavar(t.name())) return std::nullopt;
        auto it = axiom_sort_.find(t.name());
        if (it == axiom_sort_.end()) {
          std::string s = fresh_sort();
          constraints.push_back({SortConstraint::Kind::Axiom, {t.name(), s}});
          it = axiom_sort_.emplace(t.name(), s).first;
        }
        return Term::constant(it->second);
      }
      case TermKind::Pi: {
        auto s1 = sort_of(ctx, t.domain());
        if (!s1) return std::nullopt;
        std::string x = fresh_var();
        auto inner = ctx;
        inner.emplace_back(x, t.domain());
        auto s2 = sort_of(inner, open(t.body(), x));
        if (!s2) return std::nullopt;
        std::string s3 = fresh_sort();
        constraints.push_back({SortConstraint::Kind::Rule, {*s1, *s2, s3}});
        return Term::constant(s3);
      }
      case TermKind::Lam: {
        auto s1 = sort_of(ctx, t.domain());
        if (!s1) return std::nullopt;
        std::string x = fresh_var();
        auto inner = ctx;
        inner.emplace_back(x, t.domain());
        auto b = infer(inner, open(t.body(), x));
        if (!b) return std::nullopt;
        Term body_type = nf(*b);
        auto s2 = sort_of(inner, body_type);
        if (!s2) return std::nullopt;
        std::string s3 = fresh_sort();
        constraints.push_back({SortConstraint::Kind::Rule, {*s1, *s2, s3}});
        return Term::pi(t.name(), t.domain(), abstract(body_type, x));
      }
      case TermKind::App: {
        auto f = infer(ctx, t.fn());
        if (!f) return std::nullopt;
        Term ft = nf(*f);
        if (!ft.is_pi()) return std::nullopt;
        auto a = infer(ctx, t.arg());
        if (!a) return std::nullopt;
        if (nf(*a) != nf(ft.domain())) return std::nullopt;
        return instantiate(ft.body(), t.arg());
      }
    }
    return std::nullopt;
  }

  std::optional<std::string> sort_of(const std::vector<std::pair<std::string, Term>>& ctx, const Term& t) {
    auto ty = infer(ctx, t);
    if (!ty) return std::nullopt;
    Term n = nf(*ty);
    if (!is_metavar_term(n)) return std::nullopt;
    return n.name();
  }

  static bool is_fresh(const std::string& name) { return name.rfind("?t", 0) == 0; }

 private:
  std::string fresh_sort() { return "?t" + std::to_string(++sorts_); }
  std::string fresh_var() { return "%x" + std::to_string(++vars_); }

  std::map<std::string, std::string> axiom_sort_;
  int sorts_ = 0;
  int vars_ = 0;
};

// Binds fresh sorts of `inferred` so that it becomes `expected`.
bool unify_fresh(const Term& inferred, const Term& expected, std::map<std::string, std::string>& binding) {
  if (inferred.kind() == TermKind::Const && SymbolicTyper::is_fresh(inferred.name())) {
    if (!is_metavar_term(expected)) return false;
    auto [it, inserted] = binding.emplace(inferred.name(), expected.name());
    return inserted || it->second == expected.name();
  }
  if (inferred.kind() != expected.kind()) return false;
  switch (inferred.kind()) {
    case TermKind::Var:
    case TermKind::Const:
      return inferred.name() == expected.name();
    case TermKind::Bound:
      return inferred.index() == expected.index();
    case TermKind::Pi:
    case TermKind::Lam:
      return unify_fresh(inferred.domain(), expected.domain(), binding) &&
             unify_fresh(inferred.body(), expected.body(), binding);
    case TermKind::App:
      return unify_fresh(inferred.fn(), expected.fn(), binding) && unify_fresh(inferred.arg(), expected.arg(), binding);
  }
  return false;
}

AxiomScheme canonicalize(const Term& subject, const Term& type, const std::vector<SortConstraint>& conditions) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  collect_metavars(subject, order, seen);
  collect_metavars(type, order, seen);
  std::size_t statement_count = order.size();
  for (const auto& c : conditions) {
    for (const auto& a : c.args) {
      if (seen.insert(a).second) order.push_back(a);
    }
  }
  std::map<std::string, std::string> renaming;
  for (std::size_t i = 0; i < order.size(); ++i) renaming[order[i]] = meta_name(i + 1);

  AxiomScheme s;
  s.subject = rename_metavars(subject, renaming);
  s.type = rename_metavars(type, renaming);
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < statement_count ? s.metavars : s.auxiliary).push_back(meta_name(i + 1));
  }
  for (const auto& c : conditions) {
    SortConstraint r{c.kind, {}};
    for (const auto& a : c.args) r.args.push_back(renaming.at(a));
    if (std::find(s.conditions.begin(), s.conditions.end(), r) == s.conditions.end()) s.conditions.push_back(r);
  }
  return s;
}

// Replaces the n-th metavariable occurrence (pre-order) by `fresh`.
Term replace_occurrence(const Term& t, std::size_t& n, const std::string& fresh) {
  switch (t.kind()) {
    case TermKind::Const:
      if (is_metavar(t.name())) {
        if (n == 0) {
          n = static_cast<std::size_t>(-1);
          return Term::constant(fresh);
        }
        --n;
      }
      return t;
    case TermKind::Pi:
    case TermKind::Lam: {
      Term d = replace_occurrence(t.domain(), n, fresh);
      Term b = replace_occurrence(t.body(), n, fresh);
      return t.is_pi() ? Term::pi(t.name(), d, b) : Term::lam(t.name(), d, b);
    }
    case TermKind::App: {
      Term f = replace_occurrence(t.fn(), n, fresh);
      Term a = replace_occurrence(t.arg(), n, fresh);
      return Term::app(f, a);
    }
    default:
      return t;
  }
}

void occurrences(const Term& t, std::vector<std::string>& out) {
  switch (t.kind()) {
    case TermKind::Const:
      if (is_metavar(t.name())) out.push_back(t.name());
      return;
    case TermKind::Pi:
    case TermKind::Lam:
      occurrences(t.domain(), out);
      occurrences(t.body(), out);
      return;
    case TermKind::App:
      occurrences(t.fn(), out);
      occurrences(t.arg(), out);
      return;
    default:
      return;
  }
}

bool match_metavars(const Term& general, const Term& inst, std::map<std::string, std::string>& m) {
  if (is_metavar_term(general)) {
    if (!inst.is_const()) return false;
    auto [it, inserted] = m.emplace(general.name(), inst.name());
    return inserted || it->second == inst.name();
  }
  if (general.kind() != inst.kind()) return false;
  switch (general.kind()) {
    case TermKind::Var:
    case TermKind::Const:
      return general.name() == inst.name();
    case TermKind::Bound:
      return general.index() == inst.index();
    case TermKind::Pi:
    case TermKind::Lam:
      return match_metavars(general.domain(), inst.domain(), m) && match_metavars(general.body(), inst.body(), m);
    case TermKind::App:
      return match_metavars(general.fn(), inst.fn(), m) && match_metavars(general.arg(), inst.arg(), m);
  }
  return false;
}

Statement parse_pattern_statement(const std::string& text) {
  ParseOptions opts;
  opts.metavariables = true;
  return parse_statement(text, opts);
}

AxiomScheme scheme_from_text(const std::string& name, const std::string& family, const std::string& text) {
  Statement st = parse_pattern_statement(text);
  auto s = type_scheme(st.subject, st.type);
  if (!s) throw std::logic_error("built-in scheme " + name + " is not typable");
  s->name = name;
  s->family = family;
  return *s;
}

}  // namespace

bool is_metavar(const std::string& name) { return name.size() > 1 && name[0] == '?'; }

std::vector<std::string> metavars_of(const Term& t) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  collect_metavars(t, out, seen);
  return out;
}

std::string print(const SortConstraint& c) {
  if (c.kind == SortConstraint::Kind::Axiom) return "(" + c.args[0] + " : " + c.args[1] + ") in A";
  return "(" + c.args[0] + ", " + c.args[1] + ", " + c.args[2] + ") in R";
}

std::string scheme_key(const Term& subject, const Term& type) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  collect_metavars(subject, order, seen);
  collect_metavars(type, order, seen);
  std::map<std::string, std::string> renaming;
  for (std::size_t i = 0; i < order.size(); ++i) renaming[order[i]] = meta_name(i + 1);
  return canonical_key(rename_metavars(subject, renaming)) + " : " + canonical_key(rename_metavars(type, renaming));
}

bool same_up_to_renaming(const AxiomScheme& a, const AxiomScheme& b) {
  return scheme_key(a.subject, a.type) == scheme_key(b.subject, b.type);
}

bool match_pattern(const Term& pattern, const Term& t, std::map<std::string, std::string>& binding) {
  auto trial = binding;
  if (!match_metavars(pattern, t, trial)) return false;
  binding = std::move(trial);
  return true;
}

bool is_instance_of(const Statement& inst, const Statement& general) {
  std::map<std::string, std::string> m;
  return match_metavars(general.subject, inst.subject, m) && match_metavars(general.type, inst.type, m);
}

std::optional<AxiomScheme> type_scheme(const Term& subject, const std::optional<Term>& type) {
  if (subject.loose_bound() != 0 || !free_vars(subject).empty()) return std::nullopt;
  SymbolicTyper typer;
  auto inferred = typer.infer({}, subject);
  if (!inferred) return std::nullopt;
  Term t = nf(*inferred);
  std::vector<SortConstraint> conditions = typer.constraints;
  if (type) {
    std::map<std::string, std::string> binding;
    if (!unify_fresh(t, *type, binding)) return std::nullopt;
    for (auto& c : conditions) {
      for (auto& a : c.args) {
        auto it = binding.find(a);
        if (it != binding.end()) a = it->second;
      }
    }
    t = *type;
  }
  return canonicalize(subject, t, conditions);
}

std::vector<AxiomScheme> rule_one_successors(const AxiomScheme& s) {
  std::vector<AxiomScheme> out;
  if (is_metavar_term(s.type)) return out;
  std::vector<std::string> occ;
  occurrences(s.type, occ);
  std::vector<Term> variants;
  std::set<std::string> seen;
  std::set<std::string> in_type(occ.begin(), occ.end());
  std::string fresh = fresh_name("?r", in_type);
  for (std::size_t k = 0; k < occ.size(); ++k) {
    if (!seen.insert(occ[k]).second) {
      std::size_t n = k;
      variants.push_back(replace_occurrence(s.type, n, fresh));
    }
  }
  if (variants.empty()) variants.push_back(s.type);
  for (const auto& v : variants) {
    auto typed = type_scheme(v, std::nullopt);
    if (!typed) continue;
    typed->parent = s.name;
    typed->generated_by = "I";
    typed->note = "conditions from canonical typing";
    typed->family = s.family;
    out.push_back(std::move(*typed));
  }
  return out;
}

std::optional<AxiomScheme> rule_two_successor(const AxiomScheme& s) {
  struct Binder {
    std::string name;
    Term domain;
  };
  std::vector<Binder> prefix;
  Term m = s.subject;
  Term a = s.type;
  while (m.is_lam() && a.is_pi() && m.domain() == a.domain()) {
    prefix.push_back({m.name(), m.domain()});
    m = m.body();
    a = a.body();
  }
  if (!m.is_pi() || !is_metavar_term(a)) return std::nullopt;
  Term subject = Term::lam(m.name(), m.domain(), m.body());
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) subject = Term::lam(it->name, it->domain, subject);
  auto typed = type_scheme(subject, std::nullopt);
  if (!typed) return std::nullopt;
  typed->parent = s.name;
  typed->generated_by = "II";
  typed->note = "conditions from canonical typing";
  typed->family = s.family;
  return typed;
}

std::vector<AxiomScheme> base_schemes(const Specification& spec) {
  Tri ss = is_supersorted(spec);
  if (ss != Tri::True) {
    throw NotSupersorted(spec.name + " is " + (ss == Tri::False ? "not supersorted" : "not known to be supersorted"));
  }
  std::vector<AxiomScheme> out;
  out.push_back(scheme_from_text(
      "Pi1", "Pi", "lam u:?s1. lam v:(Pi x:u.?s2). Pi x:u. v x : Pi u:?s1. Pi v:(Pi x:u.?s2). ?s3"));
  out.push_back(scheme_from_text("I1", "I", "lam x:?s1. lam y:x. y : Pi x:?s1. Pi y:x. x"));
  out.push_back(scheme_from_text("K1", "K",
                                 "lam x:?s1. lam y:?s2. lam z:x. lam u:y. z : Pi x:?s1. Pi y:?s2. Pi z:x. Pi u:y. x"));
  out.push_back(scheme_from_text(
      "S1", "S",
      "lam u:?s1. lam v:(Pi x:u.?s2). lam t:(Pi x:u. Pi y:v x. ?s3). lam w:(Pi x:u. Pi y:v x. t x y)."
      " lam z:(Pi x:u. v x). lam x:u. w x (z x)"
      " : Pi u:?s1. Pi v:(Pi x:u.?s2). Pi t:(Pi x:u. Pi y:v x. ?s3). Pi w:(Pi x:u. Pi y:v x. t x y)."
      " Pi z:(Pi x:u. v x). Pi x:u. t x (z x)"));
  return out;
}

std::vector<AxiomScheme> reference_pi_family() {
  static const std::vector<std::string> texts = {
      "lam u:?s1. lam v:(Pi x:u.?s2). Pi x:u. v x : Pi u:?s1. Pi v:(Pi x:u.?s2). ?s3",
      "Pi u:?s1. Pi v:(Pi x:u.?s2). ?s3 : ?s4",
      "lam u:?s1. Pi v:(Pi x:u.?s2). ?s3 : Pi u:?s1. ?s4",
      "lam u:?s1. ?s2 : Pi u:?s1. ?s2'",
      "Pi u:?s1. ?s2 : ?s3",
      "lam u:?s1. lam v:(Pi x:u.?s2). lam x:u. v x : Pi u:?s1. Pi v:(Pi x:u.?s2). Pi x:u. ?s2",
      "Pi u:?s1. Pi v:(Pi x:u.?s2). Pi x:u. ?s3 : ?s4",
      "lam u:?s1. lam v:(Pi x:u.?s2). ?s3 : Pi u:?s1. Pi v:(Pi x:u.?s2). ?s3'",
      "lam u:?s1. Pi v:(Pi x:u.?s2). Pi x:u. ?s3 : Pi u:?s1. ?s4",
      "lam u:?s1. lam v:(Pi x:u.?s2). Pi x:u. ?s3 : Pi u:?s1. Pi v:(Pi x:u.?s2). ?s4",
      "lam u:?s1. lam v:(Pi x:u.?s2). lam x:u. ?s3 : Pi u:?s1. Pi v:(Pi x:u.?s2). Pi x:u. ?s3'",
  };
  std::vector<AxiomScheme> out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    out.push_back(scheme_from_text("Pi" + std::to_string(i + 1), "Pi", texts[i]));
  }
  return out;
}

const AxiomScheme* AxiomBase::find(const std::string& name) const {
  for (const auto& s : schemes) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::vector<const AxiomScheme*> AxiomBase::family(const std::string& f) const {
  std::vector<const AxiomScheme*> out;
  for (const auto& s : schemes) {
    if (s.family == f) out.push_back(&s);
  }
  return out;
}

std::map<std::string, std::size_t> AxiomBase::family_sizes() const {
  std::map<std::string, std::size_t> out;
  for (const auto& s : schemes) ++out[s.family];
  return out;
}

AxiomBase generate_axiom_base(const Specification& spec, std::size_t safety_bound) {
  AxiomBase base;
  base.spec = spec;
  std::set<std::string> seen;
  for (auto root : base_schemes(spec)) {
    std::size_t first = base.schemes.size();
    std::size_t counter = 1;
    std::deque<std::size_t> queue;
    auto admit = [&](AxiomScheme s, bool is_root) {
      if (!seen.insert(scheme_key(s.subject, s.type)).second) return;
      if (base.schemes.size() >= safety_bound) {
        throw FixpointDivergence("axiom base exceeds " + std::to_string(safety_bound) + " schemes");
      }
      if (!is_root) s.name = s.family + std::to_string(++counter);
      base.schemes.push_back(std::move(s));
      queue.push_back(base.schemes.size() - 1);
    };
    admit(root, true);
    while (!queue.empty()) {
      AxiomScheme current = base.schemes[queue.front()];
      queue.pop_front();
      for (auto& s : rule_one_successors(current)) admit(std::move(s), false);
      if (auto s = rule_two_successor(current)) admit(std::move(*s), false);
    }
    if (root.family != "Pi") continue;

    // Use the customary numbering for the Pi family.
    auto reference = reference_pi_family();
    std::size_t produced = base.schemes.size() - first;
    if (produced != reference.size()) {
      throw std::logic_error("Pi family has " + std::to_string(produced) + " schemes, expected " +
                             std::to_string(reference.size()));
    }
    std::map<std::string, std::string> relabel;
    for (std::size_t i = first; i < base.schemes.size(); ++i) {
      auto it = std::find_if(reference.begin(), reference.end(),
                             [&](const AxiomScheme& r) { return same_up_to_renaming(r, base.schemes[i]); });
      if (it == reference.end()) {
        throw std::logic_error("unexpected Pi scheme " + print(base.schemes[i].subject) + " : " +
                               print(base.schemes[i].type));
      }
      relabel[base.schemes[i].name] = it->name;
    }
    for (std::size_t i = first; i < base.schemes.size(); ++i) {
      base.schemes[i].name = relabel.at(base.schemes[i].name);
      if (!base.schemes[i].parent.empty()) base.schemes[i].parent = relabel.at(base.schemes[i].parent);
    }
    std::sort(base.schemes.begin() + static_cast<std::ptrdiff_t>(first), base.schemes.end(),
              [](const AxiomScheme& a, const AxiomScheme& b) {
                return std::stoi(a.name.substr(2)) < std::stoi(b.name.substr(2));
              });
  }
  return base;
}

// --- instantiation ------------------------------------------------------------

Term instantiate_pattern(const Term& t, const std::map<std::string, SortRef>& assignment) {
  std::map<std::string, Term> repl;
  for (const auto& [m, s] : assignment) repl.emplace(m, s.term());
  return replace_consts(t, repl);
}

// Finite sort universe with the axiom and rule relations tabulated.
struct SortTables {
  std::vector<SortRef> universe;
  std::map<SortRef, std::size_t> index;
  std::vector<char> axiom;  // n*n
  std::vector<char> rule;   // n*n*n

  std::size_t n() const { return universe.size(); }
  bool has_axiom(std::size_t a, std::size_t b) const { return axiom[a * n() + b]; }
  bool has_rule(std::size_t a, std::size_t b, std::size_t c) const { return rule[(a * n() + b) * n() + c]; }
};

static SortTables build_tables(const Specification& spec, std::uint32_t top) {
  SortTables t;
  t.universe = spec.sorts_upto(top);
  for (std::size_t i = 0; i < t.universe.size(); ++i) t.index[t.universe[i]] = i;
  std::size_t n = t.n();
  t.axiom.assign(n * n, 0);
  t.rule.assign(n * n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& s : axiom_sorts(spec, t.universe[i].constant(), top)) {
      auto it = t.index.find(s);
      if (it != t.index.end()) t.axiom[i * n + it->second] = 1;
    }
    for (std::size_t j = 0; j < n; ++j) {
      for (const auto& s : rule_targets(spec, t.universe[i], t.universe[j])) {
        auto it = t.index.find(s);
        if (it != t.index.end()) t.rule[(i * n + j) * n + it->second] = 1;
      }
    }
  }
  return t;
}

namespace {

// Arc consistency plus search over the tabulated universe.
class ConditionSolver {
 public:
  ConditionSolver(const SortTables& tables, const std::vector<SortConstraint>& conditions)
      : t_(tables) {
    for (const auto& c : conditions) {
      Con con{c.kind == SortConstraint::Kind::Axiom, {}};
      for (const auto& a : c.args) con.vars.push_back(var(a));
      cons_.push_back(con);
    }
  }

  // False when a pinned sort lies outside the universe.
  bool pin(const std::string& name, const SortRef& s) {
    auto it = t_.index.find(s);
    if (it == t_.index.end()) return false;
    std::size_t v = var(name);
    pinned_.emplace_back(v, it->second);
    return true;
  }

  bool solve() {
    Domains d(names_.size(), std::vector<char>(t_.n(), 1));
    for (const auto& [v, x] : pinned_) {
      if (!d[v][x]) return false;
      std::fill(d[v].begin(), d[v].end(), 0);
      d[v][x] = 1;
    }
    return search(d);
  }

  // Value of `name` in the solution found by the last successful solve().
  std::optional<SortRef> value(const std::string& name) const {
    auto it = ids_.find(name);
    if (it == ids_.end() || solution_.empty()) return std::nullopt;
    const auto& dom = solution_[it->second];
    for (std::size_t x = 0; x < dom.size(); ++x) {
      if (dom[x]) return t_.universe[x];
    }
    return std::nullopt;
  }

 private:
  using Domains = std::vector<std::vector<char>>;
  struct Con {
    bool axiom;
    std::vector<std::size_t> vars;
  };

  std::size_t var(const std::string& name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    names_.push_back(name);
    return ids_[name] = names_.size() - 1;
  }

  bool supported(const Con& c, const Domains& d, std::size_t pos, std::size_t x) const {
    std::size_t n = t_.n();
    if (c.axiom) {
      for (std::size_t y = 0; y < n; ++y) {
        if (pos == 0 && d[c.vars[1]][y] && t_.has_axiom(x, y)) return true;
        if (pos == 1 && d[c.vars[0]][y] && t_.has_axiom(y, x)) return true;
      }
      return false;
    }
    std::size_t o1 = pos == 0 ? 1 : 0;
    std::size_t o2 = pos == 2 ? 1 : 2;
    std::array<std::size_t, 3> v{};
    v[pos] = x;
    for (v[o1] = 0; v[o1] < n; ++v[o1]) {
      if (!d[c.vars[o1]][v[o1]]) continue;
      for (v[o2] = 0; v[o2] < n; ++v[o2]) {
        if (!d[c.vars[o2]][v[o2]]) continue;
        if (c.vars[0] == c.vars[1] && v[0] != v[1]) continue;
        if (c.vars[0] == c.vars[2] && v[0] != v[2]) continue;
        if (c.vars[1] == c.vars[2] && v[1] != v[2]) continue;
        if (t_.has_rule(v[0], v[1], v[2])) return true;
      }
    }
    return false;
  }

  bool propagate(Domains& d) const {
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& c : cons_) {
        for (std::size_t pos = 0; pos < c.vars.size(); ++pos) {
          auto& dom = d[c.vars[pos]];
          bool any = false;
          for (std::size_t x = 0; x < dom.size(); ++x) {
            if (!dom[x]) continue;
            if (supported(c, d, pos, x)) {
              any = true;
            } else {
              dom[x] = 0;
              changed = true;
            }
          }
          if (!any) return false;
        }
      }
    }
    return true;
  }

  bool search(Domains& d) {
    if (!propagate(d)) return false;
    std::size_t pick = names_.size(), best = 0;
    for (std::size_t v = 0; v < d.size(); ++v) {
      std::size_t size = std::count(d[v].begin(), d[v].end(), 1);
      if (size > 1 && (pick == names_.size() || size < best)) {
        pick = v;
        best = size;
      }
    }
    if (pick == names_.size()) {
      solution_ = d;
      return true;
    }
    for (std::size_t x = 0; x < t_.n(); ++x) {
      if (!d[pick][x]) continue;
      Domains next = d;
      std::fill(next[pick].begin(), next[pick].end(), 0);
      next[pick][x] = 1;
      if (search(next)) return true;
    }
    return false;
  }

  const SortTables& t_;
  std::vector<Con> cons_;
  std::vector<std::string> names_;
  std::map<std::string, std::size_t> ids_;
  std::vector<std::pair<std::size_t, std::size_t>> pinned_;
  Domains solution_;
};

// Large enough for every solution: each axiom step raises an index by one.
std::uint32_t universe_bound(const AxiomScheme& scheme, const std::map<std::string, SortRef>& assignment,
                             std::uint32_t bound) {
  std::uint32_t top = 0;
  for (const auto& [m, s] : assignment) {
    if (s.index) top = std::max(top, *s.index);
  }
  std::uint32_t steps = 0;
  for (const auto& c : scheme.conditions) steps += c.kind == SortConstraint::Kind::Axiom;
  return std::max(bound, top + steps + 1);
}

std::string instance_key(const AxiomScheme& scheme, const std::map<std::string, SortRef>& assignment) {
  std::string key = scheme.name;
  for (const auto& [m, s] : assignment) key += " " + m + "=" + s.constant();
  return key;
}

void validate_assignment(const Specification& spec, const AxiomScheme& scheme,
                         const std::map<std::string, SortRef>& assignment) {
  for (const auto& m : scheme.metavars) {
    if (!assignment.count(m)) throw SideConditionFailed(scheme.name + ": no sort given for " + m);
  }
  for (const auto& [m, s] : assignment) {
    if (std::find(scheme.metavars.begin(), scheme.metavars.end(), m) == scheme.metavars.end()) {
      throw SideConditionFailed(scheme.name + ": " + m + " does not occur in the scheme");
    }
    if (!spec.sort_ref(s.constant())) throw SideConditionFailed(scheme.name + ": " + s.constant() + " is not a sort");
  }
}

std::optional<std::string> solve_conditions(const SortTables& tables, const AxiomScheme& scheme,
                                            const std::map<std::string, SortRef>& assignment) {
  ConditionSolver solver(tables, scheme.conditions);
  for (const auto& [m, s] : assignment) {
    if (!solver.pin(m, s)) return scheme.name + ": " + s.constant() + " lies outside the searched sorts";
  }
  if (solver.solve()) return std::nullopt;
  return scheme.name + ": side conditions have no solution";
}

SearchLimits instance_limits(SearchLimits limits) {
  limits.depth = std::max<std::size_t>(limits.depth, 64);
  limits.fuel = std::max<std::size_t>(limits.fuel, 100000);
  return limits;
}

Statement prove_instance(const Specification& spec, const SortTables& tables, const AxiomScheme& scheme,
                         const std::map<std::string, SortRef>& assignment, SearchLimits limits) {
  if (auto why = solve_conditions(tables, scheme, assignment)) throw SideConditionFailed(*why);
  Statement st{instantiate_pattern(scheme.subject, assignment), instantiate_pattern(scheme.type, assignment)};
  auto r = check_judgement(spec, {{}, st.subject, st.type}, instance_limits(limits));
  if (r.verdict == Verdict::No) throw SideConditionFailed(scheme.name + ": instance is not derivable: " + r.reason);
  if (r.verdict == Verdict::Unknown) throw ProvabilityUnknown(scheme.name + ": " + r.reason);
  return st;
}

}  // namespace

Statement instantiate_scheme(const AxiomScheme& scheme, const std::map<std::string, SortRef>& assignment,
                             const Specification& spec, SearchLimits limits) {
  validate_assignment(spec, scheme, assignment);
  SortTables tables = build_tables(spec, universe_bound(scheme, assignment, limits.sort_bound));
  return prove_instance(spec, tables, scheme, assignment, limits);
}

struct SchemeInstantiator::Tables {
  std::map<std::uint32_t, std::unique_ptr<SortTables>> by_bound;
};

SchemeInstantiator::SchemeInstantiator(const AxiomBase& base, SearchLimits limits)
    : base_(base), limits_(limits), tables_(std::make_unique<Tables>()) {}

SchemeInstantiator::~SchemeInstantiator() = default;

const SortTables& SchemeInstantiator::tables(std::uint32_t bound) const {
  std::lock_guard<std::mutex> lock(tables_mu_);
  auto& slot = tables_->by_bound[bound];
  if (!slot) slot = std::make_unique<SortTables>(build_tables(base_.spec, bound));
  return *slot;
}

std::optional<std::string> SchemeInstantiator::conditions_violation(
    const AxiomScheme& scheme, const std::map<std::string, SortRef>& assignment) const {
  try {
    validate_assignment(base_.spec, scheme, assignment);
  } catch (const SideConditionFailed& e) {
    return std::string(e.what());
  }
  return solve_conditions(tables(universe_bound(scheme, assignment, limits_.sort_bound)), scheme, assignment);
}

Statement SchemeInstantiator::instantiate(const AxiomScheme& scheme, const std::map<std::string, SortRef>& assignment) {
  std::string key = instance_key(scheme, assignment);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = proved_.find(key);
    if (it != proved_.end()) {
      if (!it->second.first) throw SideConditionFailed(it->second.second);
      return {instantiate_pattern(scheme.subject, assignment), instantiate_pattern(scheme.type, assignment)};
    }
  }
  try {
    validate_assignment(base_.spec, scheme, assignment);
    const SortTables& t = tables(universe_bound(scheme, assignment, limits_.sort_bound));
    Statement st = prove_instance(base_.spec, t, scheme, assignment, limits_);
    std::lock_guard<std::mutex> lock(mu_);
    proved_[key] = {true, ""};
    return st;
  } catch (const SideConditionFailed& e) {
    std::lock_guard<std::mutex> lock(mu_);
    proved_[key] = {false, e.what()};
    throw;
  }
}

Statement SchemeInstantiator::instantiate(const std::string& scheme,
                                          const std::map<std::string, SortRef>& assignment) {
  const AxiomScheme* s = base_.find(scheme);
  if (!s) throw SideConditionFailed("unknown scheme " + scheme);
  return instantiate(*s, assignment);
}

std::optional<std::map<std::string, SortRef>> SchemeInstantiator::complete(
    const AxiomScheme& scheme, const std::map<std::string, SortRef>& partial) const {
  ConditionSolver solver(tables(universe_bound(scheme, partial, limits_.sort_bound)), scheme.conditions);
  for (const auto& [m, s] : partial) {
    if (!solver.pin(m, s)) return std::nullopt;
  }
  if (!solver.solve()) return std::nullopt;
  std::map<std::string, SortRef> out = partial;
  for (const auto& m : scheme.metavars) {
    if (out.count(m)) continue;
    auto v = solver.value(m);
    if (!v) v = base_.spec.sorts_upto(0).empty() ? std::nullopt : std::optional<SortRef>(base_.spec.sorts_upto(0)[0]);
    if (!v) return std::nullopt;
    out[m] = *v;
  }
  return out;
}

SchemeValidator SchemeInstantiator::validator() {
  return [this](const SchemeUse& use, const Statement& st) -> std::optional<std::string> {
    try {
      Statement inst = instantiate(use.scheme, use.assignment);
      if (inst.subject != st.subject || inst.type != st.type) {
        return "statement is not the instance of " + use.scheme + " (" + print(inst.subject) + " : " +
               print(inst.type) + ")";
      }
      return std::nullopt;
    } catch (const std::exception& e) {
      return std::string(e.what());
    }
  };
}

nlohmann::json scheme_to_json(const AxiomScheme& s) {
  nlohmann::json conds = nlohmann::json::array();
  for (const auto& c : s.conditions) {
    conds.push_back({{"kind", c.kind == SortConstraint::Kind::Axiom ? "axiom" : "rule"}, {"sorts", c.args}});
  }
  nlohmann::json j = {{"name", s.name},
                      {"family", s.family},
                      {"subject", print(s.subject)},
                      {"type", print(s.type)},
                      {"metavariables", s.metavars},
                      {"auxiliary", s.auxiliary},
                      {"conditions", conds}};
  if (!s.parent.empty()) j["parent"] = s.parent;
  if (!s.generated_by.empty()) j["generated-by"] = s.generated_by;
  if (!s.note.empty()) j["note"] = s.note;
  return j;
}

nlohmann::json axiom_base_to_json(const AxiomBase& base) {
  nlohmann::json schemes = nlohmann::json::array();
  for (const auto& s : base.schemes) schemes.push_back(scheme_to_json(s));
  nlohmann::json sizes = nlohmann::json::object();
  for (const auto& [f, n] : base.family_sizes()) sizes[f] = n;
  return {{"spec", base.spec.name}, {"families", sizes}, {"schemes", schemes}};
}

}  // namespace pts
