#include "pts/hpts.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "pts/reduce.hpp"

namespace pts {

namespace {

constexpr std::size_t kMaxNesting = 2000;

Term wrap_pi(const std::string& x, const Term& a, const Term& body) { return Term::pi_over(x, a, body); }

Context prefix(const Context& ctx, std::size_t n) { return Context(ctx.begin(), ctx.begin() + n); }

bool chains_through_major(Rule r) {
  return r == Rule::Weakening || r == Rule::Application || r == Rule::Conversion || r == Rule::SubjectReduction ||
         r == Rule::TypeReduction;
}

std::size_t judgement_hash(const Judgement& j) {
  std::size_t h = j.subject.hash() * 31 + j.type.hash();
  for (const auto& e : j.context) h = h * 1000003u ^ (std::hash<std::string>{}(e.var) + e.type.hash());
  return h;
}

// Results keyed by the judgement of their input derivation.
template <typename V>
class JudgementCache {
 public:
  const V* find(const Judgement& j) const {
    auto it = table_.find(judgement_hash(j));
    if (it == table_.end()) return nullptr;
    for (const auto& [k, v] : it->second) {
      if (k == j) return &v;
    }
    return nullptr;
  }
  void put(const Judgement& j, V v) { table_[judgement_hash(j)].emplace_back(j, std::move(v)); }

 private:
  std::unordered_map<std::size_t, std::vector<std::pair<Judgement, V>>> table_;
};

bool context_is_prefix(const Context& small, const Context& big) {
  if (small.size() > big.size()) return false;
  for (std::size_t i = 0; i < small.size(); ++i) {
    if (!(small[i] == big[i])) return false;
  }
  return true;
}

}  // namespace

struct Translator::Impl {
  const AxiomBase& base;
  SearchLimits limits;
  SchemeInstantiator inst;
  Engine engine;
  std::size_t nesting = 0;

  std::unordered_map<const DerivationNode*, Derivation> hplus_memo;
  JudgementCache<Derivation> abstraction_memo;
  std::unordered_map<const DerivationNode*, std::optional<Derivation>> correctness_ptr;
  std::unordered_map<const DerivationNode*, Derivation> lambda_ptr;
  std::map<std::string, Derivation> sort_memo;
  std::map<std::pair<const DerivationNode*, std::string>, Derivation> weaken_memo;
  std::map<std::string, Derivation> instance_memo;
  std::map<std::string, std::optional<Derivation>> pattern_memo;
  // Nodes used as pointer keys above stay alive so their addresses are not reused.
  std::vector<Derivation> pinned;

  static SearchLimits engine_limits(SearchLimits l) {
    l.depth = std::max<std::size_t>(l.depth, 64);
    l.fuel = std::max<std::size_t>(l.fuel, 100000);
    return l;
  }

  Impl(const AxiomBase& b, SearchLimits l) : base(b), limits(l), inst(b, l), engine(b.spec, engine_limits(l)) {}

  const Specification& spec() const { return base.spec; }

  struct Nest {
    std::size_t& n;
    explicit Nest(std::size_t& depth) : n(depth) {
      if (++n > kMaxNesting) {
        --n;
        throw MissingSort("translation nesting limit reached");
      }
    }
    ~Nest() { --n; }
  };

  SortRef sort_of(const Derivation& d) const {
    auto s = spec().sort_of_term(d->conclusion.type);
    if (!s) throw DerivationError("expected a sort typing, got type " + print(d->conclusion.type));
    return *s;
  }

  // --- building blocks --------------------------------------------------------

  Derivation scheme_axiom(const AxiomScheme& scheme, const std::map<std::string, SortRef>& assignment) {
    std::string key = scheme.name;
    for (const auto& [m, s] : assignment) key += " " + m + "=" + s.constant();
    auto it = instance_memo.find(key);
    if (it != instance_memo.end()) return it->second;
    Statement st;
    try {
      st = inst.instantiate(scheme, assignment);
    } catch (const std::exception& e) {
      throw DerivationError("cannot instantiate " + scheme.name + ": " + e.what());
    }
    RuleInfo info;
    info.scheme = SchemeUse{scheme.name, assignment};
    Derivation d = make_derivation(Rule::Axiom, {{}, st.subject, st.type}, {}, info);
    instance_memo.emplace(key, d);
    return d;
  }

  Derivation scheme_axiom(const std::string& name, const std::map<std::string, SortRef>& assignment) {
    const AxiomScheme* s = base.find(name);
    if (!s) throw DerivationError("axiom base has no scheme " + name);
    return scheme_axiom(*s, assignment);
  }

  // An axiom instance of B whose subject is exactly `subject`, optionally
  // restricted to schemes whose type is a single metavariable.
  std::optional<Derivation> axiom_with_subject(const Term& subject, bool sort_typed) {
    std::string key = (sort_typed ? "s " : "a ") + canonical_key(subject);
    auto it = pattern_memo.find(key);
    if (it != pattern_memo.end()) return it->second;
    std::optional<Derivation> out;
    for (const auto& s : base.schemes) {
      if (sort_typed && !is_metavar_term(s.type)) continue;
      std::map<std::string, std::string> m;
      if (!match_pattern(s.subject, subject, m)) continue;
      std::map<std::string, SortRef> partial;
      bool ok = true;
      for (const auto& [meta, c] : m) {
        auto sr = spec().sort_ref(c);
        if (!sr) {
          ok = false;
          break;
        }
        partial[meta] = *sr;
      }
      if (!ok) continue;
      auto full = inst.complete(s, partial);
      if (!full) continue;
      try {
        out = scheme_axiom(s, *full);
        break;
      } catch (const DerivationError&) {
      }
    }
    pattern_memo.emplace(key, out);
    return out;
  }

  static bool is_metavar_term(const Term& t) { return t.is_const() && is_metavar(t.name()); }

  // Start lemma: Γ, x:A ⊢ M:B  ->  Γ ⊢ A:s, read off the derivation.
  Derivation start_lemma(const Derivation& d) {
    const Context& ctx = d->conclusion.context;
    if (ctx.empty()) throw DerivationError("start lemma needs a nonempty context");
    for (const DerivationNode* n = d.get();;) {
      if (n->rule == Rule::Start) return n->premises[0];
      if (n->rule == Rule::Weakening) return n->premises[1];
      if (n->premises.empty()) throw DerivationError("no start or weakening step introduces the last variable");
      n = n->premises[0].get();
    }
  }

  // Extends the context of d to that of `witness`, which it must prefix.
  Derivation weaken(const Derivation& d, const Derivation& witness) {
    const Context& from = d->conclusion.context;
    const Context& ctx = witness->conclusion.context;
    if (!context_is_prefix(from, ctx)) throw DerivationError("cannot weaken to a context that does not extend");
    if (from.size() == ctx.size()) return d;
    auto key = std::make_pair(d.get(), context_key(ctx));
    auto it = weaken_memo.find(key);
    if (it != weaken_memo.end()) return it->second;
    std::vector<Derivation> typings(ctx.size());
    Derivation w = witness;
    for (std::size_t i = ctx.size(); i-- > from.size();) {
      typings[i] = start_lemma(w);
      w = typings[i];
    }
    Derivation cur = d;
    for (std::size_t i = from.size(); i < ctx.size(); ++i) {
      RuleInfo info;
      info.sort = sort_of(typings[i]);
      cur = make_derivation(Rule::Weakening, {prefix(ctx, i + 1), d->conclusion.subject, d->conclusion.type},
                            {cur, typings[i]}, info);
    }
    pinned.push_back(d);
    weaken_memo.emplace(key, cur);
    return cur;
  }

  Derivation type_step(const Derivation& d, const Term& next) {
    const Judgement& j = d->conclusion;
    return make_derivation(Rule::TypeReduction, {j.context, j.subject, next}, {d});
  }

  Derivation subject_step(const Derivation& d, const Term& next) {
    const Judgement& j = d->conclusion;
    return make_derivation(Rule::SubjectReduction, {j.context, next, j.type}, {d});
  }

  Derivation reduce_type_along(Derivation d, const std::vector<Term>& path) {
    for (std::size_t i = 1; i < path.size(); ++i) d = type_step(d, path[i]);
    return d;
  }

  // Reduces subject and type to the given reducts.
  Derivation reduce_to(Derivation d, const Term& subject, const Term& type) {
    if (d->conclusion.subject != subject) {
      auto p = reduction_path_to(d->conclusion.subject, subject, limits.fuel);
      if (!p) {
        throw DerivationError("subject " + print(d->conclusion.subject) + " does not reduce to " + print(subject));
      }
      for (std::size_t i = 1; i < p->size(); ++i) d = subject_step(d, (*p)[i]);
    }
    if (d->conclusion.type != type) {
      auto p = reduction_path_to(d->conclusion.type, type, limits.fuel);
      if (!p) throw DerivationError("type " + print(d->conclusion.type) + " does not reduce to " + print(type));
      d = reduce_type_along(d, *p);
    }
    return d;
  }

  // Γ ⊢ F:T and Γ ⊢ N:U with T →→ Πx:U'.B and U, U' joinable -> Γ ⊢ F N : B[x:=N].
  Derivation apply(Derivation f, Derivation a) {
    if (!(f->conclusion.context == a->conclusion.context)) {
      throw DerivationError("application premises live in different contexts");
    }
    if (!f->conclusion.type.is_pi()) {
      auto p = whnf_path(f->conclusion.type, limits.fuel);
      if (!p || !p->back().is_pi()) throw DerivationError("function type " + print(f->conclusion.type) + " is not a product");
      f = reduce_type_along(f, *p);
    }
    const Term& t = f->conclusion.type;
    const Term& dom = t.domain();
    const Term& at = a->conclusion.type;
    if (dom != at) {
      auto wrap_dom = [&](const Term& d2) { return Term::pi(t.name(), d2, t.body()); };
      if (auto p = reduction_path_to(dom, at, limits.fuel)) {
        for (std::size_t i = 1; i < p->size(); ++i) f = type_step(f, wrap_dom((*p)[i]));
      } else if (auto q = reduction_path_to(at, dom, limits.fuel)) {
        a = reduce_type_along(a, *q);
      } else {
        auto nd = normalize_path(dom, limits.fuel);
        auto na = normalize_path(at, limits.fuel);
        if (!nd || !na || nd->back() != na->back()) {
          throw DerivationError("argument type " + print(at) + " does not match domain " + print(dom));
        }
        for (std::size_t i = 1; i < nd->size(); ++i) f = type_step(f, wrap_dom((*nd)[i]));
        a = reduce_type_along(a, *na);
      }
    }
    const Term& ft = f->conclusion.type;
    Judgement j{f->conclusion.context, Term::app(f->conclusion.subject, a->conclusion.subject),
                instantiate(ft.body(), a->conclusion.subject)};
    return make_derivation(Rule::Application, j, {f, a});
  }

  // Γ ⊢ s:s' for a sort s, by an axiom and weakening along `witness`.
  Derivation sort_axiom(const SortRef& s, const Derivation& witness) {
    auto sorts = axiom_sorts(spec(), s.constant(), limits.sort_bound);
    if (sorts.empty()) throw MissingSort("sort " + print(s) + " has no axiom");
    Derivation ax = make_derivation(Rule::Axiom, {{}, s.term(), sorts.front().term()});
    return weaken(ax, witness);
  }

  // Correctness of types: Γ ⊢ M:A  ->  Γ ⊢ A:s, or nullopt when A is a sort.
  std::optional<Derivation> correctness(const Derivation& d) {
    if (spec().is_sort_term(d->conclusion.type)) return std::nullopt;
    auto cit = correctness_ptr.find(d.get());
    if (cit != correctness_ptr.end()) return cit->second;
    Nest guard(nesting);
    const Judgement& j = d->conclusion;
    std::optional<Derivation> out;
    switch (d->rule) {
      case Rule::Axiom: {
        out = axiom_with_subject(j.type, true);
        if (!out) throw MissingSort("no axiom scheme types " + print(j.type));
        break;
      }
      case Rule::Start: {
        const Derivation& p = d->premises[0];
        RuleInfo info;
        info.sort = sort_of(p);
        out = make_derivation(Rule::Weakening, {j.context, j.type, p->conclusion.type}, {p, p}, info);
        break;
      }
      case Rule::Weakening: {
        auto inner = correctness(d->premises[0]);
        if (!inner) throw DerivationError("weakening changed a sort type");
        const Derivation& minor = d->premises[1];
        RuleInfo info;
        info.sort = sort_of(minor);
        out = make_derivation(Rule::Weakening, {j.context, j.type, (*inner)->conclusion.type}, {*inner, minor}, info);
        break;
      }
      case Rule::SubjectReduction:
        out = correctness(d->premises[0]);
        break;
      case Rule::TypeReduction: {
        const Derivation& p = d->premises[0];
        auto inner = correctness(p);
        if (!inner) throw DerivationError("a sort type cannot reduce");
        out = subject_step(*inner, j.type);
        break;
      }
      case Rule::Conversion:
        out = d->premises[1];
        break;
      case Rule::Application: {
        const Derivation& major = d->premises[0];
        auto pi_typing = correctness(major);
        if (!pi_typing) throw DerivationError("function type is a sort");
        Derivation lam = lambda_of_product(*pi_typing);
        Derivation applied = apply(lam, d->premises[1]);
        out = reduce_to(applied, j.type, applied->conclusion.type);
        break;
      }
      default:
        throw DerivationError(std::string("correctness of types does not apply to a ") + to_string(d->rule) + " node");
    }
    pinned.push_back(d);
    correctness_ptr.emplace(d.get(), out);
    return out;
  }

  // Γ ⊢ Πx:B.C : s'  ->  Γ ⊢ λx:B.C : Πx:B.s, by replacing the axiom that starts
  // the final mpc with its (II)-successor and replaying the same minor premises.
  Derivation lambda_of_product(const Derivation& d) {
    auto lit = lambda_ptr.find(d.get());
    if (lit != lambda_ptr.end()) return lit->second;
    Nest guard(nesting);
    const Judgement& j = d->conclusion;
    if (!j.subject.is_pi() || !spec().is_sort_term(j.type)) {
      throw DerivationError("expected a product typed by a sort, got " + print(j));
    }
    Term lam = Term::lam(j.subject.name(), j.subject.domain(), j.subject.body());
    std::vector<const DerivationNode*> chain;
    const DerivationNode* n = d.get();
    while (chains_through_major(n->rule)) {
      chain.push_back(n);
      n = n->premises[0].get();
    }
    Derivation out;
    if (n->rule == Rule::Axiom && n->info.scheme) {
      if (auto succ = successor_instance(n->conclusion.statement())) {
        Derivation cur = *succ;
        bool replayed = true;
        for (auto c = chain.rbegin(); c != chain.rend() && replayed; ++c) {
          const DerivationNode* step = *c;
          switch (step->rule) {
            case Rule::Weakening: {
              const Judgement& cj = step->conclusion;
              cur = make_derivation(Rule::Weakening, {cj.context, cur->conclusion.subject, cur->conclusion.type},
                                    {cur, step->premises[1]}, step->info);
              break;
            }
            case Rule::Application:
              cur = apply(cur, step->premises[1]);
              break;
            case Rule::SubjectReduction:
            case Rule::TypeReduction:
              break;
            default:
              replayed = false;
          }
        }
        if (replayed) {
          auto nf = normalize(cur->conclusion.type, limits.fuel);
          if (nf && nf->is_pi() && spec().is_sort_term(nf->body())) {
            out = reduce_to(cur, lam, Term::pi(lam.name(), lam.domain(), nf->body()));
          }
        }
      }
    }
    if (!out) {
      // Fallback for derivations that are not short: abstract a fresh sort typing of the body.
      std::set<std::string> taken = context_vars(j.context);
      for (const auto& v : free_vars(j.subject)) taken.insert(v);
      std::string x = fresh_name(j.subject.name().empty() ? "x" : j.subject.name(), taken);
      Context cx = j.context;
      cx.push_back({x, j.subject.domain()});
      out = eliminate_abstraction(sort_typing(cx, open(j.subject.body(), x)));
      out = reduce_to(out, lam, out->conclusion.type);
    }
    pinned.push_back(d);
    lambda_ptr.emplace(d.get(), out);
    return out;
  }

  // The instance of the (II)-successor of a statement λx1:A1..λxn:An.Πx:B.C : Πx1:A1..Πxn:An.s.
  std::optional<Derivation> successor_instance(const Statement& st) {
    std::vector<std::pair<std::string, Term>> binders;
    Term m = st.subject;
    Term a = st.type;
    while (m.is_lam() && a.is_pi() && m.domain() == a.domain()) {
      binders.emplace_back(m.name(), m.domain());
      m = m.body();
      a = a.body();
    }
    if (!m.is_pi() || !spec().is_sort_term(a)) return std::nullopt;
    Term subject = Term::lam(m.name(), m.domain(), m.body());
    for (auto b = binders.rbegin(); b != binders.rend(); ++b) subject = Term::lam(b->first, b->second, subject);
    return axiom_with_subject(subject, false);
  }

  Derivation sort_typing(const Context& ctx, const Term& a) {
    Nest guard(nesting);
    std::string key = context_key(ctx) + " |- " + canonical_key(a);
    auto it = sort_memo.find(key);
    if (it != sort_memo.end()) return it->second;
    engine.reset_budget();
    InferResult r = engine.sorts_of(ctx, a);
    if (r.verdict != Verdict::Yes || r.typings.empty()) {
      throw MissingSort("no sort found for " + print(a) + " in context " + print(ctx) +
                        (r.reason.empty() ? "" : ": " + r.reason));
    }
    Derivation out = to_hplus(r.typings.front().derivation);
    sort_memo.emplace(key, out);
    return out;
  }

  // --- translation -------------------------------------------------------------

  Derivation to_hplus(const Derivation& d) {
    auto it = hplus_memo.find(d.get());
    if (it != hplus_memo.end()) return it->second;
    Nest guard(nesting);
    Derivation out;
    switch (d->rule) {
      case Rule::Axiom:
        out = d;
        break;
      case Rule::Start:
      case Rule::Weakening:
      case Rule::Application:
      case Rule::Conversion:
      case Rule::TypeReduction:
      case Rule::SubjectReduction: {
        std::vector<Derivation> premises;
        bool same = true;
        for (const auto& p : d->premises) {
          premises.push_back(to_hplus(p));
          same = same && premises.back() == p;
        }
        out = same ? d : make_derivation(d->rule, d->conclusion, premises, d->info);
        break;
      }
      case Rule::Product: {
        auto s3 = spec().sort_of_term(d->conclusion.type);
        if (!s3) throw DerivationError("product conclusion type is not a sort");
        out = eliminate_product(to_hplus(d->premises[1]), to_hplus(d->premises[0]), *s3);
        break;
      }
      case Rule::Abstraction:
      case Rule::AbstractionSimple:
        out = eliminate_abstraction(to_hplus(d->premises[0]));
        break;
    }
    if (!(out->conclusion == d->conclusion)) {
      throw DerivationError("translation changed the judgement " + print(d->conclusion) + " into " +
                            print(out->conclusion));
    }
    pinned.push_back(d);
    hplus_memo.emplace(d.get(), out);
    return out;
  }

  Derivation eliminate_product(const Derivation& da, const Derivation& db, const SortRef& s3) {
    const Judgement& ja = da->conclusion;
    const Judgement& jb = db->conclusion;
    if (jb.context.size() != ja.context.size() + 1 || !(prefix(jb.context, ja.context.size()) == ja.context) ||
        jb.context.back().type != ja.subject) {
      throw DerivationError("product premises do not fit together: " + print(ja) + " and " + print(jb));
    }
    SortRef s1 = sort_of(da);
    SortRef s2 = sort_of(db);
    if (!has_rule(spec(), s1, s2, s3)) {
      throw DerivationError("triple (" + print(s1) + ", " + print(s2) + ", " + print(s3) + ") not in R");
    }
    const std::string& x = jb.context.back().var;
    Derivation lam = eliminate_abstraction(db);
    Derivation pi1 = weaken(scheme_axiom("Pi1", {{"?s1", s1}, {"?s2", s2}, {"?s3", s3}}), da);
    Derivation d = apply(apply(pi1, da), lam);
    return reduce_to(d, wrap_pi(x, ja.subject, jb.subject), s3.term());
  }

  Derivation eliminate_abstraction(const Derivation& e) {
    if (const auto* hit = abstraction_memo.find(e->conclusion)) return *hit;
    Nest guard(nesting);
    const Judgement& j = e->conclusion;
    if (j.context.empty()) throw DerivationError("abstraction needs a nonempty context");
    Context gamma = prefix(j.context, j.context.size() - 1);
    const std::string& x = j.context.back().var;
    const Term& a = j.context.back().type;
    Term lam = Term::lam_over(x, a, j.subject);
    Term pi = wrap_pi(x, a, j.type);
    Derivation ta = start_lemma(e);
    Derivation out;
    switch (e->rule) {
      case Rule::Start: {
        // I1 applied to A.
        Derivation i1 = weaken(scheme_axiom("I1", {{"?s1", sort_of(ta)}}), ta);
        out = reduce_to(apply(i1, ta), lam, pi);
        break;
      }
      case Rule::Weakening: {
        // K1 applied to B, A and M.
        Derivation major = e->premises[0];
        Derivation tb;
        if (auto s = spec().sort_of_term(major->conclusion.type)) {
          tb = sort_axiom(*s, ta);
        } else {
          tb = *correctness(major);
        }
        Derivation k1 = weaken(scheme_axiom("K1", {{"?s1", sort_of(tb)}, {"?s2", sort_of(ta)}}), ta);
        out = reduce_to(apply(apply(apply(k1, tb), ta), major), lam, pi);
        break;
      }
      case Rule::Conversion: {
        // Π1 types the abstracted new type; then conversion.
        Derivation major = e->premises[0];
        Derivation minor = e->premises[1];
        Derivation l = eliminate_abstraction(major);
        Derivation mb = eliminate_abstraction(minor);
        SortRef s1 = sort_of(ta);
        SortRef s2 = sort_of(minor);
        auto targets = rule_targets(spec(), s1, s2);
        if (targets.empty()) throw DerivationError("no rule for (" + print(s1) + ", " + print(s2) + ")");
        SortRef s3 = targets.front();
        Derivation pi1 = weaken(scheme_axiom("Pi1", {{"?s1", s1}, {"?s2", s2}, {"?s3", s3}}), ta);
        Derivation tpi = reduce_to(apply(apply(pi1, ta), mb), pi, s3.term());
        RuleInfo info;
        info.sort = s3;
        for (const auto& t : e->info.left) info.left.push_back(wrap_pi(x, a, t));
        for (const auto& t : e->info.right) info.right.push_back(wrap_pi(x, a, t));
        out = make_derivation(Rule::Conversion, {gamma, lam, pi}, {l, tpi}, info);
        break;
      }
      case Rule::Application: {
        // S1 applied to A, λx:A.C, λx:A.λy:C.D, λx:A.P and λx:A.Q.
        Derivation major = e->premises[0];
        Derivation minor = e->premises[1];
        auto t31 = correctness(major);
        if (!t31) throw DerivationError("function type is a sort");
        Derivation t32 = lambda_of_product(*t31);
        Derivation d35 = eliminate_abstraction(t32);
        Derivation d33 = eliminate_abstraction(major);
        Derivation d34 = eliminate_abstraction(minor);
        auto tc = correctness(d34);
        if (!tc) throw DerivationError("abstracted argument type is a sort");
        Derivation d36 = lambda_of_product(*tc);
        auto sort_body = [&](const Term& t, int depth) {
          Term b = t;
          for (int i = 0; i < depth; ++i) {
            if (!b.is_pi()) throw DerivationError("expected a product type, got " + print(t));
            b = b.body();
          }
          auto s = spec().sort_of_term(b);
          if (!s) throw DerivationError("expected a sort-valued product, got " + print(t));
          return *s;
        };
        SortRef s2 = sort_body(d36->conclusion.type, 1);
        SortRef s3 = sort_body(d35->conclusion.type, 2);
        Derivation s1 = weaken(scheme_axiom("S1", {{"?s1", sort_of(ta)}, {"?s2", s2}, {"?s3", s3}}), ta);
        Derivation d = apply(apply(apply(apply(apply(s1, ta), d36), d35), d33), d34);
        out = reduce_to(d, lam, pi);
        break;
      }
      case Rule::TypeReduction: {
        Derivation p = eliminate_abstraction(e->premises[0]);
        out = type_step(p, pi);
        break;
      }
      case Rule::SubjectReduction: {
        Derivation p = eliminate_abstraction(e->premises[0]);
        out = subject_step(p, lam);
        break;
      }
      default:
        throw DerivationError(std::string("abstraction elimination does not apply to a ") + to_string(e->rule) +
                              " node");
    }
    abstraction_memo.put(e->conclusion, out);
    return out;
  }
};

Translator::Translator(const AxiomBase& base, SearchLimits limits) : impl_(std::make_unique<Impl>(base, limits)) {
  if (is_supersorted(base.spec) != Tri::True) throw NotSupersorted(base.spec.name + " is not supersorted");
}

Translator::~Translator() = default;

Derivation Translator::eliminate_abstraction(const Derivation& d) { return impl_->eliminate_abstraction(d); }

Derivation Translator::eliminate_product(const Derivation& da, const Derivation& db, const SortRef& s3) {
  return impl_->eliminate_product(da, db, s3);
}

Derivation Translator::to_hplus(const Derivation& d) { return impl_->to_hplus(d); }

Derivation Translator::pts_to_hpts(const Derivation& d) {
  if (!d->conclusion.context.empty()) throw DerivationError("pts_to_hpts needs an empty conclusion context");
  return impl_->to_hplus(d);
}

Derivation Translator::sort_typing(const Context& ctx, const Term& a) { return impl_->sort_typing(ctx, a); }

SchemeInstantiator& Translator::instantiator() { return impl_->inst; }

const AxiomBase& Translator::base() const { return impl_->base; }

Derivation pts_to_hpts(const AxiomBase& base, const Derivation& d, SearchLimits limits) {
  Translator t(base, limits);
  return t.pts_to_hpts(d);
}

// --- checking and search -------------------------------------------------------

CheckReport h_check_derivation(const AxiomBase& base, const Derivation& d, Mode mode,
                               SchemeInstantiator* instantiator) {
  if (mode != Mode::H && mode != Mode::HPlus) throw std::invalid_argument("h_check_derivation needs mode h or h-plus");
  std::unique_ptr<SchemeInstantiator> local;
  if (!instantiator) {
    local = std::make_unique<SchemeInstantiator>(base);
    instantiator = local.get();
  }
  return check_derivation(base.spec, d, mode, instantiator->validator());
}

namespace {

// Scheme instances whose statement is the goal, possibly after conversion of the type.
Derivation scheme_match(Translator& tr, const Statement& goal, std::size_t fuel) {
  const AxiomBase& base = tr.base();
  for (const auto& s : base.schemes) {
    std::map<std::string, std::string> m;
    if (!match_pattern(s.subject, goal.subject, m)) continue;
    auto both = m;
    bool exact = match_pattern(s.type, goal.type, both);
    const auto& use = exact ? both : m;
    std::map<std::string, SortRef> partial;
    bool ok = true;
    for (const auto& [meta, c] : use) {
      auto sr = base.spec.sort_ref(c);
      if (!sr) {
        ok = false;
        break;
      }
      partial[meta] = *sr;
    }
    if (!ok) continue;
    auto full = tr.instantiator().complete(s, partial);
    if (!full) continue;
    Statement st;
    try {
      st = tr.instantiator().instantiate(s, *full);
    } catch (const std::exception&) {
      continue;
    }
    RuleInfo info;
    info.scheme = SchemeUse{s.name, *full};
    Derivation ax = make_derivation(Rule::Axiom, {{}, st.subject, st.type}, {}, info);
    if (st.type == goal.type) return ax;
    Join join = find_join(st.type, goal.type, fuel);
    if (join.verdict != Conversion::Equal) continue;
    Derivation minor;
    try {
      minor = tr.sort_typing({}, goal.type);
    } catch (const std::exception&) {
      continue;
    }
    RuleInfo conv;
    conv.sort = base.spec.sort_of_term(minor->conclusion.type);
    conv.left = join.left;
    conv.right = join.right;
    return make_derivation(Rule::Conversion, {{}, goal.subject, goal.type}, {ax, minor}, conv);
  }
  return nullptr;
}

}  // namespace

HDeriveResult h_derive(const AxiomBase& base, const Statement& goal, SearchLimits limits) {
  HDeriveResult r;
  if (limits.fuel == 0) {
    r.reason = "no fuel";
    return r;
  }
  const Specification& spec = base.spec;
  if (goal.subject.is_const() && spec.is_constant(goal.subject.name())) {
    if (auto s = spec.sort_of_term(goal.type); s && has_axiom(spec, goal.subject.name(), *s)) {
      r.derivation = make_derivation(Rule::Axiom, {{}, goal.subject, goal.type});
      r.method = "axiom";
      return r;
    }
  }
  try {
    Translator tr(base, limits);
    if (auto d = scheme_match(tr, goal, limits.fuel)) {
      r.derivation = d;
      r.method = "scheme";
      return r;
    }
    CheckResult c = check_judgement(spec, {{}, goal.subject, goal.type}, limits);
    if (c.verdict != Verdict::Yes) {
      r.reason = c.verdict == Verdict::No ? "not derivable: " + c.reason : "search exhausted: " + c.reason;
      return r;
    }
    r.derivation = tr.pts_to_hpts(c.derivation);
    r.method = "translation";
  } catch (const std::exception& e) {
    r.derivation = nullptr;
    r.reason = e.what();
  }
  return r;
}

// --- metrics ---------------------------------------------------------------------

namespace {

bool allowed_hplus(Rule r) {
  return r == Rule::Axiom || r == Rule::Start || r == Rule::Weakening || r == Rule::Application ||
         r == Rule::Conversion || r == Rule::TypeReduction || r == Rule::SubjectReduction;
}

// Number of leading λs when the statement is a λ-spine whose body is
// one of the bound variables or an application built from them only.
std::size_t long_shape(const Statement& st) {
  std::size_t n = 0;
  Term m = st.subject;
  Term a = st.type;
  while (m.is_lam() && a.is_pi() && m.domain() == a.domain()) {
    ++n;
    m = m.body();
    a = a.body();
  }
  if (n == 0) return 0;
  std::function<bool(const Term&)> from_vars = [&](const Term& t) {
    if (t.is_bound()) return t.index() < n;
    if (t.is_app()) return from_vars(t.fn()) && from_vars(t.arg());
    return false;
  };
  return from_vars(m) ? n : 0;
}

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

struct KeyTable {
  std::unordered_map<const DerivationNode*, std::size_t> keys;
  std::unordered_map<const DerivationNode*, std::size_t> similar;

  std::size_t key(const DerivationNode* n) {
    auto it = keys.find(n);
    if (it != keys.end()) return it->second;
    std::size_t h = static_cast<std::size_t>(n->rule);
    for (const auto& e : n->conclusion.context) h = mix(mix(h, std::hash<std::string>{}(e.var)), e.type.hash());
    h = mix(mix(h, n->conclusion.subject.hash()), n->conclusion.type.hash());
    if (n->info.scheme) h = mix(h, std::hash<std::string>{}(n->info.scheme->scheme));
    for (const auto& p : n->premises) h = mix(h, key(p.get()));
    keys.emplace(n, h);
    return h;
  }
};

// Root of the (II)-parentage chain of a scheme.
std::string similarity_root(const AxiomBase* base, const std::string& name) {
  if (!base) return name;
  std::string cur = name;
  for (int guard = 0; guard < 100; ++guard) {
    const AxiomScheme* s = base->find(cur);
    if (!s || s->generated_by != "II" || s->parent.empty()) break;
    cur = s->parent;
  }
  return cur;
}

// Derivations that are identical up to the (II)-lineage of their starting axiom.
std::size_t similarity_key(const DerivationNode* n, const AxiomBase* base, KeyTable& keys) {
  auto it = keys.similar.find(n);
  if (it != keys.similar.end()) return it->second;
  std::size_t h;
  if (!chains_through_major(n->rule)) {
    h = n->rule == Rule::Axiom && n->info.scheme
            ? std::hash<std::string>{}("similar:" + similarity_root(base, n->info.scheme->scheme))
            : keys.key(n);
  } else {
    h = mix(static_cast<std::size_t>(n->rule), similarity_key(n->premises[0].get(), base, keys));
    for (std::size_t i = 1; i < n->premises.size(); ++i) h = mix(h, keys.key(n->premises[i].get()));
  }
  keys.similar.emplace(n, h);
  return h;
}

}  // namespace

DerivationMetrics derivation_metrics(const Derivation& d, const AxiomBase* base) {
  DerivationMetrics m;
  KeyTable keys;

  // Chain ends: the root, premises of start, and minor premises.
  std::vector<const DerivationNode*> ends;
  std::unordered_set<std::size_t> seen_end_keys;
  std::unordered_set<const DerivationNode*> visited;
  std::vector<const DerivationNode*> stack{d.get()};
  std::vector<const DerivationNode*> order;
  while (!stack.empty()) {
    const DerivationNode* n = stack.back();
    stack.pop_back();
    if (!visited.insert(n).second) continue;
    if (!allowed_hplus(n->rule)) {
      throw std::invalid_argument(std::string("rule ") + to_string(n->rule) + " is not a rule of the Hilbert systems");
    }
    order.push_back(n);
    for (const auto& p : n->premises) stack.push_back(p.get());
  }
  std::unordered_set<const DerivationNode*> is_end{d.get()};
  for (const DerivationNode* n : order) {
    if (n->rule == Rule::Start) is_end.insert(n->premises[0].get());
    if (n->rule == Rule::Weakening || n->rule == Rule::Application || n->rule == Rule::Conversion) {
      is_end.insert(n->premises[1].get());
    }
  }
  for (const DerivationNode* n : order) {
    if (!is_end.count(n)) continue;
    if (!seen_end_keys.insert(keys.key(n)).second) continue;
    Mpc chain;
    for (const DerivationNode* c = n;; c = c->premises[0].get()) {
      chain.nodes.push_back(c);
      if (!chains_through_major(c->rule)) break;
    }
    std::reverse(chain.nodes.begin(), chain.nodes.end());
    const DerivationNode* start = chain.nodes.front();
    if (start->info.scheme) chain.scheme = start->info.scheme->scheme;
    for (std::size_t i = 1; i < chain.nodes.size(); ++i) {
      const DerivationNode* c = chain.nodes[i];
      if (c->rule == Rule::Application) ++chain.applications;
      if (c->rule == Rule::SubjectReduction) {
        auto [head, args] = spine(c->premises[0]->conclusion.subject);
        if (head.is_lam() && !args.empty()) ++chain.head_reductions;
      }
    }
    if (start->rule == Rule::Axiom && start->info.scheme) {
      std::size_t n_lams = long_shape(start->conclusion.statement());
      chain.is_long = n_lams > 0 && chain.applications >= n_lams && chain.head_reductions >= n_lams;
    }
    if (chain.is_long) m.long_mpcs.push_back(m.mpcs.size());
    m.mpcs.push_back(std::move(chain));
  }

  // alength: application nodes, identical subderivations once.
  std::unordered_set<std::size_t> apps;
  for (const DerivationNode* n : order) {
    if (n->rule == Rule::Application) apps.insert(keys.key(n));
  }
  m.alength = apps.size();

  // slength: application, conversion, start and weakening steps; a weakening
  // whose premises are similar contributes its minor premise only once.
  std::unordered_set<std::size_t> counted;
  std::unordered_set<const DerivationNode*> walked;
  std::function<void(const DerivationNode*)> walk = [&](const DerivationNode* n) {
    if (!walked.insert(n).second) return;
    if (n->rule == Rule::Application || n->rule == Rule::Conversion || n->rule == Rule::Start ||
        n->rule == Rule::Weakening) {
      counted.insert(keys.key(n));
    }
    if (n->rule == Rule::Weakening &&
        similarity_key(n->premises[0].get(), base, keys) == similarity_key(n->premises[1].get(), base, keys)) {
      walk(n->premises[0].get());
      return;
    }
    for (const auto& p : n->premises) walk(p.get());
  };
  walk(d.get());
  m.slength = counted.size();
  return m;
}

}  // namespace pts
