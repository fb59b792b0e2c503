#include "pts/engine.hpp"

#include <algorithm>
#include <unordered_map>

#include "pts/reduce.hpp"

namespace pts {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes:
      return "yes";
    case Verdict::No:
      return "no";
    case Verdict::Unknown:
      return "unknown";
  }
  return "unknown";
}

namespace {

struct Typed {
  Verdict verdict = Verdict::No;
  Term type;
  Derivation deriv;
  std::string why;

  static Typed no(std::string why) { return {Verdict::No, {}, {}, std::move(why)}; }
  static Typed unknown(std::string why) { return {Verdict::Unknown, {}, {}, std::move(why)}; }
  static Typed yes(Term t, Derivation d) { return {Verdict::Yes, std::move(t), std::move(d), {}}; }
  bool ok() const { return verdict == Verdict::Yes; }
};

struct SortTyping {
  SortRef sort;
  Derivation deriv;
};

struct Sorted {
  Verdict verdict = Verdict::No;
  std::vector<SortTyping> items;
  std::string why;
  bool ok() const { return verdict == Verdict::Yes; }
};

struct CtxNode {
  int parent = -1;
  std::string var;
  Term type;
  Derivation sort_deriv;  // parent ⊢ type : s
  Context materialized;
  std::set<std::string> vars;
};

}  // namespace

struct Engine::Impl {
  const Specification& spec;
  SearchLimits limits;
  bool simple_abstraction = false;
  std::size_t steps = 0;
  std::size_t depth = 0;

  std::vector<CtxNode> ctxs;
  std::unordered_map<std::string, int> ctx_index;
  std::unordered_map<std::string, Typed> infer_memo;
  std::unordered_map<std::string, Sorted> sorts_memo;
  std::unordered_map<std::string, Typed> check_memo;

  Impl(const Specification& s, SearchLimits l) : spec(s), limits(l), steps(l.fuel) {
    ctxs.push_back(CtxNode{});
  }

  // --- contexts ---------------------------------------------------------------

  int extend(int parent, const std::string& var, const Term& type, const Derivation& sort_deriv) {
    std::string key = std::to_string(parent) + "|" + var + "|" + canonical_key(type);
    auto it = ctx_index.find(key);
    if (it != ctx_index.end()) return it->second;
    CtxNode n;
    n.parent = parent;
    n.var = var;
    n.type = type;
    n.sort_deriv = sort_deriv;
    n.materialized = ctxs[parent].materialized;
    n.materialized.push_back({var, type});
    n.vars = ctxs[parent].vars;
    n.vars.insert(var);
    ctxs.push_back(std::move(n));
    int id = static_cast<int>(ctxs.size()) - 1;
    ctx_index.emplace(key, id);
    return id;
  }

  std::string fresh(int ctx, const std::string& hint, const Term& scope) {
    std::set<std::string> taken = ctxs[ctx].vars;
    for (const auto& v : free_vars(scope)) taken.insert(v);
    std::string base = hint.empty() ? "x" : hint;
    for (;;) {
      std::string name = fresh_name(base, taken);
      if (!spec.is_constant(name) && name != "Pi" && name != "lam") return name;
      taken.insert(name);
    }
  }

  Judgement judgement(int ctx, const Term& m, const Term& a) const { return {ctxs[ctx].materialized, m, a}; }

  // Lifts a derivation in context `from` to its extension `to` by weakenings.
  Derivation weaken(Derivation d, int from, int to) {
    std::vector<int> chain;
    for (int c = to; c != from; c = ctxs[c].parent) {
      if (c < 0) throw DerivationError("weakening target does not extend the source context");
      chain.push_back(c);
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const CtxNode& n = ctxs[*it];
      RuleInfo info;
      info.sort = spec.sort_of_term(n.sort_deriv->conclusion.type);
      d = make_derivation(Rule::Weakening, {n.materialized, d->conclusion.subject, d->conclusion.type},
                          {d, n.sort_deriv}, info);
    }
    return d;
  }

  // --- budget ---------------------------------------------------------------

  bool spend() {
    if (steps == 0) return false;
    --steps;
    return true;
  }

  struct DepthGuard {
    std::size_t& d;
    explicit DepthGuard(std::size_t& depth) : d(depth) { ++d; }
    ~DepthGuard() { --d; }
  };

  // --- conversion -------------------------------------------------------------

  // Converts d : Γ ⊢ M : T into Γ ⊢ M : target.
  Typed convert(int ctx, const Typed& from, const Term& target) {
    if (from.type == target) return from;
    Join join = find_join(from.type, target, limits.fuel);
    if (join.verdict == Conversion::Distinct) {
      return Typed::no("type " + print(from.type) + " is not convertible to " + print(target));
    }
    if (join.verdict == Conversion::Unknown) return Typed::unknown("conversion undecided within fuel");
    Sorted st = sorts_of(ctx, target);
    if (!st.ok()) {
      if (st.verdict == Verdict::Unknown) return Typed::unknown(st.why);
      return Typed::no("target type " + print(target) + " has no sort: " + st.why);
    }
    RuleInfo info;
    info.sort = st.items.front().sort;
    info.left = join.left;
    info.right = join.right;
    Derivation d = make_derivation(Rule::Conversion, judgement(ctx, from.deriv->conclusion.subject, target),
                                   {from.deriv, st.items.front().deriv}, info);
    return Typed::yes(target, d);
  }

  // --- inference ----------------------------------------------------------------

  Typed infer(int ctx, const Term& m) {
    std::string key = std::to_string(ctx) + "|" + canonical_key(m);
    if (auto it = infer_memo.find(key); it != infer_memo.end()) return it->second;
    if (!spend()) return Typed::unknown("fuel exhausted");
    if (depth >= limits.depth) return Typed::unknown("depth limit reached");
    DepthGuard guard(depth);
    Typed r = infer_uncached(ctx, m);
    if (r.verdict != Verdict::Unknown) infer_memo.emplace(key, r);
    return r;
  }

  Typed infer_uncached(int ctx, const Term& m) {
    switch (m.kind()) {
      case TermKind::Var:
        return infer_var(ctx, m.name());
      case TermKind::Bound:
        return Typed::no("dangling bound variable");
      case TermKind::Const:
      case TermKind::Pi: {
        Sorted s = sorts_of(ctx, m);
        if (!s.ok()) return {s.verdict, {}, {}, s.why};
        return Typed::yes(s.items.front().sort.term(), s.items.front().deriv);
      }
      case TermKind::Lam:
        return infer_lam(ctx, m);
      case TermKind::App:
        return infer_app(ctx, m);
    }
    return Typed::no("unknown term");
  }

  Typed infer_var(int ctx, const std::string& x) {
    for (int c = ctx; c > 0; c = ctxs[c].parent) {
      if (ctxs[c].var != x) continue;
      const CtxNode& n = ctxs[c];
      RuleInfo info;
      info.sort = spec.sort_of_term(n.sort_deriv->conclusion.type);
      Derivation start =
          make_derivation(Rule::Start, {n.materialized, Term::var(x), n.type}, {n.sort_deriv}, info);
      return Typed::yes(n.type, weaken(start, c, ctx));
    }
    return Typed::no("unbound variable " + x);
  }

  Typed infer_lam(int ctx, const Term& m) {
    Sorted dom = sorts_of(ctx, m.domain());
    if (!dom.ok()) return {dom.verdict, {}, {}, "domain " + print(m.domain()) + " is not a type: " + dom.why};
    std::string x = fresh(ctx, m.name(), m);
    int inner = extend(ctx, x, m.domain(), dom.items.front().deriv);
    Typed body = infer(inner, open(m.body(), x));
    if (!body.ok()) return body;
    return abstraction(ctx, inner, x, body, dom.items.front());
  }

  Typed abstraction(int ctx, int inner, const std::string& x, const Typed& body, const SortTyping& dom) {
    const Term& a = ctxs[inner].type;
    Term subject = Term::lam_over(x, a, body.deriv->conclusion.subject);
    Term type = Term::pi_over(x, a, body.type);
    if (simple_abstraction) {
      RuleInfo info;
      info.sort = dom.sort;
      return Typed::yes(type, make_derivation(Rule::AbstractionSimple, judgement(ctx, subject, type),
                                              {body.deriv, dom.deriv}, info));
    }
    Sorted pi = sorts_of(ctx, type);
    if (!pi.ok()) return {pi.verdict, {}, {}, "product " + print(type) + " has no sort: " + pi.why};
    RuleInfo info;
    info.sort = pi.items.front().sort;
    return Typed::yes(type, make_derivation(Rule::Abstraction, judgement(ctx, subject, type),
                                            {body.deriv, pi.items.front().deriv}, info));
  }

  Typed infer_app(int ctx, const Term& m) {
    Typed fn = infer(ctx, m.fn());
    if (!fn.ok()) return fn;
    auto path = whnf_path(fn.type, limits.fuel);
    if (!path) return Typed::unknown("weak head normalization ran out of fuel");
    Term head = path->back();
    if (!head.is_pi()) {
      auto nf = normalize(head, limits.fuel);
      if (!nf) return Typed::unknown("normalization ran out of fuel");
      return Typed::no("function type " + print(fn.type) + " is not a product");
    }
    Typed f = fn;
    if (head != fn.type) {
      f = convert(ctx, fn, head);
      if (!f.ok()) return f;
    }
    Typed arg = check(ctx, m.arg(), head.domain());
    if (!arg.ok()) return arg;
    Term type = instantiate(head.body(), m.arg());
    return Typed::yes(type, make_derivation(Rule::Application, judgement(ctx, m, type), {f.deriv, arg.deriv}));
  }

  // All sorts s with Γ ⊢ A : s found syntax-directedly, in rank order.
  Sorted sorts_of(int ctx, const Term& a) {
    std::string key = std::to_string(ctx) + "|" + canonical_key(a);
    if (auto it = sorts_memo.find(key); it != sorts_memo.end()) return it->second;
    if (!spend()) return {Verdict::Unknown, {}, "fuel exhausted"};
    if (depth >= limits.depth) return {Verdict::Unknown, {}, "depth limit reached"};
    DepthGuard guard(depth);
    Sorted r = sorts_uncached(ctx, a);
    if (r.verdict != Verdict::Unknown) sorts_memo.emplace(key, r);
    return r;
  }

  Sorted sorts_uncached(int ctx, const Term& a) {
    Sorted out;
    auto add = [&](const SortRef& s, const Derivation& d) {
      for (const auto& it : out.items) {
        if (it.sort == s) return;
      }
      out.items.push_back({s, d});
    };
    auto finish = [&](std::string why_none) {
      std::stable_sort(out.items.begin(), out.items.end(), [&](const SortTyping& x, const SortTyping& y) {
        return spec.sort_rank(x.sort) < spec.sort_rank(y.sort);
      });
      if (out.items.empty()) {
        if (out.verdict != Verdict::Unknown) out.verdict = Verdict::No;
        out.why = std::move(why_none);
      } else {
        out.verdict = Verdict::Yes;
      }
      return out;
    };

    if (a.is_const()) {
      if (!spec.is_constant(a.name())) return {Verdict::No, {}, "unknown constant " + a.name()};
      for (const auto& s : axiom_sorts(spec, a.name(), limits.sort_bound)) {
        RuleInfo info;
        info.sort = s;
        Derivation ax = make_derivation(Rule::Axiom, {{}, a, s.term()}, {}, info);
        add(s, weaken(ax, 0, ctx));
      }
      return finish("constant " + a.name() + " has no axiom");
    }
    if (a.is_pi()) {
      Sorted dom = sorts_of(ctx, a.domain());
      if (!dom.ok()) return {dom.verdict, {}, "domain " + print(a.domain()) + ": " + dom.why};
      std::string x = fresh(ctx, a.name(), a);
      int inner = extend(ctx, x, a.domain(), dom.items.front().deriv);
      Term body = open(a.body(), x);
      Sorted cod = sorts_of(inner, body);
      if (!cod.ok()) return {cod.verdict, {}, "codomain " + print(body) + ": " + cod.why};
      for (const auto& s1 : dom.items) {
        for (const auto& s2 : cod.items) {
          for (const auto& s3 : rule_targets(spec, s1.sort, s2.sort)) {
            RuleInfo info;
            info.triple = std::array<SortRef, 3>{s1.sort, s2.sort, s3};
            add(s3, make_derivation(Rule::Product, judgement(ctx, a, s3.term()), {s2.deriv, s1.deriv}, info));
          }
        }
      }
      return finish("no rule (" + print(dom.items.front().sort) + ", " + print(cod.items.front().sort) +
                    ", _) for " + print(a));
    }
    Typed t = infer(ctx, a);
    if (!t.ok()) return {t.verdict, {}, t.why};
    if (auto s = spec.sort_of_term(t.type)) {
      add(*s, t.deriv);
      return finish("");
    }
    auto nf = normalize(t.type, limits.fuel);
    if (!nf) return {Verdict::Unknown, {}, "normalization ran out of fuel"};
    auto s = spec.sort_of_term(*nf);
    if (!s) return {Verdict::No, {}, print(a) + " has type " + print(t.type) + ", not a sort"};
    Typed c = convert(ctx, t, *nf);
    if (!c.ok()) return {c.verdict, {}, c.why};
    add(*s, c.deriv);
    return finish("");
  }

  // --- checking -------------------------------------------------------------

  Typed check(int ctx, const Term& m, const Term& a) {
    std::string key = std::to_string(ctx) + "|" + canonical_key(m) + "|" + canonical_key(a);
    if (auto it = check_memo.find(key); it != check_memo.end()) return it->second;
    if (!spend()) return Typed::unknown("fuel exhausted");
    if (depth >= limits.depth) return Typed::unknown("depth limit reached");
    DepthGuard guard(depth);
    Typed r = check_uncached(ctx, m, a);
    if (r.verdict != Verdict::Unknown) check_memo.emplace(key, r);
    return r;
  }

  Typed check_uncached(int ctx, const Term& m, const Term& a) {
    auto path = whnf_path(a, limits.fuel);
    if (!path) return Typed::unknown("weak head normalization ran out of fuel");
    const Term& head = path->back();

    if (m.is_lam() && head.is_pi() && head.domain() == m.domain()) {
      Sorted dom = sorts_of(ctx, m.domain());
      if (!dom.ok()) return {dom.verdict, {}, {}, "domain " + print(m.domain()) + " is not a type: " + dom.why};
      std::string x = fresh(ctx, m.name(), Term::app(m, head));
      int inner = extend(ctx, x, m.domain(), dom.items.front().deriv);
      Typed body = check(inner, open(m.body(), x), open(head.body(), x));
      if (!body.ok()) return body;
      Typed abs = abstraction(ctx, inner, x, body, dom.items.front());
      if (!abs.ok()) return abs;
      return convert(ctx, abs, a);
    }

    if (auto target = spec.sort_of_term(head); target && (m.is_const() || m.is_pi())) {
      Sorted s = sorts_of(ctx, m);
      if (!s.ok()) return {s.verdict, {}, {}, s.why};
      for (const auto& it : s.items) {
        if (it.sort == *target) return convert(ctx, Typed::yes(head, it.deriv), a);
      }
      return Typed::no(print(m) + " does not have sort " + print(*target));
    }

    Typed t = infer(ctx, m);
    if (!t.ok()) return t;
    return convert(ctx, t, a);
  }

  // Builds the internal context for an explicit one, typing each entry.
  std::pair<int, Typed> context(const Context& g) {
    int c = 0;
    for (const auto& e : g) {
      Sorted s = sorts_of(c, e.type);
      if (!s.ok()) {
        return {-1, {s.verdict, {}, {}, "ill-formed context: type of " + e.var + " has no sort: " + s.why}};
      }
      c = extend(c, e.var, e.type, s.items.front().deriv);
    }
    return {c, Typed{Verdict::Yes, {}, {}, {}}};
  }
};

Engine::Engine(const Specification& spec, SearchLimits limits) : impl_(std::make_unique<Impl>(spec, limits)) {}
Engine::~Engine() = default;

void Engine::set_simple_abstraction(bool on) {
  if (impl_->simple_abstraction != on) {
    impl_->infer_memo.clear();
    impl_->sorts_memo.clear();
    impl_->check_memo.clear();
  }
  impl_->simple_abstraction = on;
}

void Engine::reset_budget() { impl_->steps = impl_->limits.fuel; }

const Specification& Engine::spec() const { return impl_->spec; }
const SearchLimits& Engine::limits() const { return impl_->limits; }

InferResult Engine::infer(const Context& ctx, const Term& m) {
  auto [c, status] = impl_->context(ctx);
  if (c < 0) return {status.verdict, {}, status.why};
  Typed t = impl_->infer(c, m);
  if (!t.ok()) return {t.verdict, {}, t.why};
  return {Verdict::Yes, {{t.type, t.deriv}}, {}};
}

CheckResult Engine::check(const Judgement& j) {
  if (impl_->limits.fuel == 0) return {Verdict::Unknown, {}, "fuel exhausted"};
  if (auto v = judgement_violation(j)) return {Verdict::No, {}, *v};
  auto [c, status] = impl_->context(j.context);
  if (c < 0) return {status.verdict, {}, status.why};
  Typed t = impl_->check(c, j.subject, j.type);
  if (!t.ok()) return {t.verdict, {}, t.why};
  return {Verdict::Yes, t.deriv, {}};
}

InferResult Engine::sorts_of(const Context& ctx, const Term& a) {
  auto [c, status] = impl_->context(ctx);
  if (c < 0) return {status.verdict, {}, status.why};
  Sorted s = impl_->sorts_of(c, a);
  if (!s.ok()) return {s.verdict, {}, s.why};
  InferResult out{Verdict::Yes, {}, {}};
  for (const auto& it : s.items) out.typings.push_back({it.sort.term(), it.deriv});
  return out;
}

InferResult Engine::context_typings(const Context& ctx) {
  auto [c, status] = impl_->context(ctx);
  if (c < 0) return {status.verdict, {}, status.why};
  InferResult out{Verdict::Yes, {}, {}};
  std::vector<int> chain;
  for (int k = c; k > 0; k = impl_->ctxs[k].parent) chain.push_back(k);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const CtxNode& n = impl_->ctxs[*it];
    out.typings.push_back({n.sort_deriv->conclusion.type, n.sort_deriv});
  }
  return out;
}

InferResult infer_types(const Specification& spec, const Context& ctx, const Term& m, SearchLimits limits) {
  if (auto v = context_violation(ctx)) throw std::invalid_argument(*v);
  auto vars = context_vars(ctx);
  for (const auto& v : free_vars(m)) {
    if (!vars.count(v)) throw std::invalid_argument("unbound variable " + v);
  }
  if (limits.fuel == 0) return {Verdict::Unknown, {}, "fuel exhausted"};
  Engine e(spec, limits);
  return e.infer(ctx, m);
}

CheckResult check_judgement(const Specification& spec, const Judgement& j, SearchLimits limits) {
  Engine e(spec, limits);
  return e.check(j);
}

// --- substitution lemma ---------------------------------------------------------

namespace {

class Substituter {
 public:
  Substituter(std::size_t prefix, std::string x, Term n, Derivation e)
      : prefix_(prefix), x_(std::move(x)), n_(std::move(n)), e_(std::move(e)) {}

  Derivation run(const Derivation& d) {
    if (auto it = memo_.find(d.get()); it != memo_.end()) return it->second;
    Derivation out = rewrite(d);
    memo_.emplace(d.get(), out);
    return out;
  }

 private:
  bool affected(const Context& g) const { return g.size() > prefix_ && g[prefix_].var == x_; }

  Judgement subst(const Judgement& j) const {
    Judgement out;
    for (std::size_t i = 0; i < j.context.size(); ++i) {
      if (i == prefix_) continue;
      out.context.push_back({j.context[i].var, substitute(j.context[i].type, x_, n_)});
    }
    out.subject = substitute(j.subject, x_, n_);
    out.type = substitute(j.type, x_, n_);
    return out;
  }

  std::vector<Term> subst(const std::vector<Term>& ts) const {
    std::vector<Term> out;
    for (const auto& t : ts) out.push_back(substitute(t, x_, n_));
    return out;
  }

  Derivation rewrite(const Derivation& d) {
    const Judgement& c = d->conclusion;
    if (!affected(c.context)) return d;
    bool introduces_x = c.context.size() == prefix_ + 1;
    if (introduces_x && d->rule == Rule::Start) return e_;
    if (introduces_x && d->rule == Rule::Weakening) return d->premises[0];
    std::vector<Derivation> premises;
    for (const auto& p : d->premises) premises.push_back(run(p));
    RuleInfo info = d->info;
    info.left = subst(info.left);
    info.right = subst(info.right);
    return make_derivation(d->rule, subst(c), std::move(premises), std::move(info));
  }

  std::size_t prefix_;
  std::string x_;
  Term n_;
  Derivation e_;
  std::unordered_map<const DerivationNode*, Derivation> memo_;
};

}  // namespace

Derivation transform_substitution(const Specification& spec, const Derivation& d, const Derivation& e) {
  (void)spec;
  const Judgement& dj = d->conclusion;
  const Judgement& ej = e->conclusion;
  std::size_t k = ej.context.size();
  if (dj.context.size() <= k) throw DerivationError("context mismatch: no entry to substitute");
  for (std::size_t i = 0; i < k; ++i) {
    if (!(dj.context[i] == ej.context[i])) throw DerivationError("context mismatch: prefixes differ");
  }
  if (dj.context[k].type != ej.type) {
    throw DerivationError("context mismatch: " + dj.context[k].var + " has type " + print(dj.context[k].type) +
                          " but the substituted derivation proves " + print(ej.type));
  }
  Substituter s(k, dj.context[k].var, ej.subject, e);
  return s.run(d);
}

}  // namespace pts
