#include "pts/derivation.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "pts/reduce.hpp"

namespace pts {

namespace {

struct RuleName {
  Rule rule;
  const char* name;
};

constexpr RuleName kRuleNames[] = {
    {Rule::Axiom, "axiom"},
    {Rule::Start, "start"},
    {Rule::Weakening, "weakening"},
    {Rule::Application, "application"},
    {Rule::Abstraction, "abstraction"},
    {Rule::AbstractionSimple, "abstraction-simple"},
    {Rule::Product, "product"},
    {Rule::Conversion, "conversion"},
    {Rule::TypeReduction, "type-reduction"},
    {Rule::SubjectReduction, "subject-reduction"},
};

}  // namespace

const char* to_string(Rule r) {
  for (const auto& rn : kRuleNames) {
    if (rn.rule == r) return rn.name;
  }
  return "?";
}

std::optional<Rule> rule_from_string(const std::string& s) {
  for (const auto& rn : kRuleNames) {
    if (s == rn.name) return rn.rule;
  }
  return std::nullopt;
}

const char* to_string(Mode m) {
  switch (m) {
    case Mode::Pts:
      return "pts";
    case Mode::PtsSupersorted:
      return "pts-supersorted";
    case Mode::H:
      return "h";
    case Mode::HPlus:
      return "h-plus";
  }
  return "?";
}

Derivation make_derivation(Rule rule, Judgement conclusion, std::vector<Derivation> premises, RuleInfo info) {
  return std::make_shared<const DerivationNode>(
      DerivationNode{rule, std::move(conclusion), std::move(premises), std::move(info)});
}

namespace {

template <typename F>
void visit_once(const Derivation& d, std::unordered_set<const DerivationNode*>& seen, F&& f) {
  if (!seen.insert(d.get()).second) return;
  f(*d);
  for (const auto& p : d->premises) visit_once(p, seen, f);
}

}  // namespace

std::size_t derivation_size(const Derivation& d) {
  std::unordered_set<const DerivationNode*> seen;
  std::size_t n = 0;
  visit_once(d, seen, [&](const DerivationNode&) { ++n; });
  return n;
}

std::size_t derivation_depth(const Derivation& d) {
  std::unordered_map<const DerivationNode*, std::size_t> memo;
  std::function<std::size_t(const Derivation&)> rec = [&](const Derivation& n) -> std::size_t {
    auto it = memo.find(n.get());
    if (it != memo.end()) return it->second;
    std::size_t best = 0;
    for (const auto& p : n->premises) best = std::max(best, rec(p));
    return memo[n.get()] = best + 1;
  };
  return rec(d);
}

std::map<Rule, std::size_t> rule_histogram(const Derivation& d) {
  std::unordered_set<const DerivationNode*> seen;
  std::map<Rule, std::size_t> out;
  visit_once(d, seen, [&](const DerivationNode& n) { ++out[n.rule]; });
  return out;
}

std::string CheckReport::describe() const {
  if (valid) return "valid";
  std::string p = "root";
  for (auto i : path) p += "." + std::to_string(i);
  std::string out = "invalid node at " + p;
  if (rule) out += std::string(" (") + to_string(*rule) + ")";
  out += ": " + reason;
  return out;
}

// --- checking --------------------------------------------------------------

namespace {

class Checker {
 public:
  Checker(const Specification& spec, Mode mode, const SchemeValidator& schemes)
      : spec_(spec), mode_(mode), schemes_(schemes) {}

  CheckReport run(const Derivation& d) {
    CheckReport report;
    std::vector<std::size_t> path;
    visit(d, path, report);
    return report;
  }

 private:
  bool visit(const Derivation& d, std::vector<std::size_t>& path, CheckReport& report) {
    if (!d) {
      report = {false, path, std::nullopt, "missing derivation"};
      return false;
    }
    if (valid_.count(d.get())) return true;
    for (std::size_t i = 0; i < d->premises.size(); ++i) {
      path.push_back(i);
      if (!visit(d->premises[i], path, report)) return false;
      path.pop_back();
    }
    if (auto why = node_violation(*d)) {
      report = {false, path, d->rule, *why};
      return false;
    }
    valid_.insert(d.get());
    return true;
  }

  bool allowed(Rule r) const {
    switch (mode_) {
      case Mode::Pts:
        return r == Rule::Axiom || r == Rule::Start || r == Rule::Weakening || r == Rule::Application ||
               r == Rule::Abstraction || r == Rule::Product || r == Rule::Conversion;
      case Mode::PtsSupersorted:
        return r == Rule::Axiom || r == Rule::Start || r == Rule::Weakening || r == Rule::Application ||
               r == Rule::Abstraction || r == Rule::AbstractionSimple || r == Rule::Product ||
               r == Rule::Conversion;
      case Mode::H:
        return r == Rule::Axiom || r == Rule::Application || r == Rule::Conversion || r == Rule::TypeReduction ||
               r == Rule::SubjectReduction;
      case Mode::HPlus:
        return r == Rule::Axiom || r == Rule::Start || r == Rule::Weakening || r == Rule::Application ||
               r == Rule::Conversion || r == Rule::TypeReduction || r == Rule::SubjectReduction;
    }
    return false;
  }

  static std::size_t arity(Rule r) {
    switch (r) {
      case Rule::Axiom:
        return 0;
      case Rule::Start:
      case Rule::TypeReduction:
      case Rule::SubjectReduction:
        return 1;
      default:
        return 2;
    }
  }

  std::optional<SortRef> sort(const Term& t) const { return spec_.sort_of_term(t); }

  static Context extended(const Context& g, const std::string& x, const Term& a) {
    Context out = g;
    out.push_back({x, a});
    return out;
  }

  std::optional<std::string> node_violation(const DerivationNode& n) const {
    if (!allowed(n.rule)) return std::string("rule not available in mode ") + to_string(mode_);
    if (n.premises.size() != arity(n.rule)) {
      return "expected " + std::to_string(arity(n.rule)) + " premises, found " + std::to_string(n.premises.size());
    }
    const Judgement& c = n.conclusion;
    if (!c.subject || !c.type) return std::string("incomplete conclusion");
    if (auto v = judgement_violation(c)) return v;
    if (mode_ == Mode::H && !c.context.empty()) return std::string("context must be empty in mode h");
    if (mode_ == Mode::PtsSupersorted && n.rule == Rule::AbstractionSimple && is_supersorted(spec_) != Tri::True) {
      return std::string("abstraction-simple requires a supersorted specification");
    }
    auto prem = [&](std::size_t i) -> const Judgement& { return n.premises[i]->conclusion; };

    switch (n.rule) {
      case Rule::Axiom: {
        if (!c.context.empty()) return std::string("axiom with a nonempty context");
        if (n.info.scheme) {
          if (mode_ != Mode::H && mode_ != Mode::HPlus) return std::string("axiom scheme outside a Hilbert mode");
          if (!schemes_) return std::string("no axiom base to validate scheme " + n.info.scheme->scheme);
          return schemes_(*n.info.scheme, c.statement());
        }
        if (!c.subject.is_const() || !spec_.is_constant(c.subject.name())) {
          return "subject " + print(c.subject) + " is not a constant";
        }
        auto s = sort(c.type);
        if (!s) return "type " + print(c.type) + " is not a sort";
        if (!has_axiom(spec_, c.subject.name(), *s)) {
          return "(" + c.subject.name() + " : " + print(*s) + ") is not an axiom";
        }
        return std::nullopt;
      }
      case Rule::Start: {
        const Judgement& p = prem(0);
        if (!sort(p.type)) return "premise type " + print(p.type) + " is not a sort";
        if (c.context.size() != p.context.size() + 1) return std::string("context must extend the premise by one");
        const ContextEntry& e = c.context.back();
        if (!(extended(p.context, e.var, p.subject) == c.context)) {
          return std::string("conclusion context is not premise context plus x:A");
        }
        if (!(c.subject.is_var() && c.subject.name() == e.var)) return std::string("subject must be the new variable");
        if (c.type != p.subject) return std::string("type must be the declared type");
        return std::nullopt;
      }
      case Rule::Weakening: {
        const Judgement& major = prem(0);
        const Judgement& minor = prem(1);
        if (!(major.context == minor.context)) return std::string("premise contexts differ");
        if (!sort(minor.type)) return "minor premise type " + print(minor.type) + " is not a sort";
        if (c.context.size() != major.context.size() + 1) return std::string("context must extend by one");
        const ContextEntry& e = c.context.back();
        if (context_vars(major.context).count(e.var)) return "side condition " + e.var + " not in FV(context) fails";
        if (!(extended(major.context, e.var, minor.subject) == c.context)) {
          return std::string("conclusion context is not premise context plus x:A");
        }
        if (c.subject != major.subject || c.type != major.type) return std::string("statement changed by weakening");
        return std::nullopt;
      }
      case Rule::Application: {
        const Judgement& fn = prem(0);
        const Judgement& arg = prem(1);
        if (!(fn.context == c.context) || !(arg.context == c.context)) return std::string("premise contexts differ");
        if (!fn.type.is_pi()) return "major premise type " + print(fn.type) + " is not a product";
        if (fn.type.domain() != arg.type) return "argument type " + print(arg.type) + " does not match domain";
        if (!(c.subject.is_app() && c.subject.fn() == fn.subject && c.subject.arg() == arg.subject)) {
          return std::string("subject is not the application of the premise subjects");
        }
        if (c.type != instantiate(fn.type.body(), arg.subject)) return std::string("type is not B[x:=N]");
        return std::nullopt;
      }
      case Rule::Abstraction:
      case Rule::AbstractionSimple: {
        const Judgement& body = prem(0);
        const Judgement& side = prem(1);
        if (body.context.size() != c.context.size() + 1) return std::string("body context must extend by one");
        Context outer(body.context.begin(), body.context.end() - 1);
        if (!(outer == c.context) || !(side.context == c.context)) return std::string("premise contexts differ");
        const ContextEntry& e = body.context.back();
        if (!c.subject.is_lam() || c.subject.domain() != e.type ||
            c.subject.body() != abstract(body.subject, e.var)) {
          return std::string("subject is not the abstraction of the body premise");
        }
        if (!c.type.is_pi() || c.type.domain() != e.type || c.type.body() != abstract(body.type, e.var)) {
          return std::string("type is not the product over the body type");
        }
        if (!sort(side.type)) return "minor premise type " + print(side.type) + " is not a sort";
        if (n.rule == Rule::Abstraction && side.subject != c.type) {
          return std::string("minor premise must type the product");
        }
        if (n.rule == Rule::AbstractionSimple && side.subject != e.type) {
          return std::string("minor premise must type the domain");
        }
        return std::nullopt;
      }
      case Rule::Product: {
        const Judgement& body = prem(0);
        const Judgement& dom = prem(1);
        if (body.context.size() != c.context.size() + 1) return std::string("body context must extend by one");
        Context outer(body.context.begin(), body.context.end() - 1);
        if (!(outer == c.context) || !(dom.context == c.context)) return std::string("premise contexts differ");
        const ContextEntry& e = body.context.back();
        if (e.type != dom.subject) return std::string("bound variable type differs from the domain premise");
        if (!c.subject.is_pi() || c.subject.domain() != e.type || c.subject.body() != abstract(body.subject, e.var)) {
          return std::string("subject is not the product of the premises");
        }
        auto s1 = sort(dom.type);
        auto s2 = sort(body.type);
        auto s3 = sort(c.type);
        if (!s1 || !s2 || !s3) return std::string("premise or conclusion type is not a sort");
        if (!has_rule(spec_, *s1, *s2, *s3)) {
          return "triple (" + print(*s1) + ", " + print(*s2) + ", " + print(*s3) + ") not in R";
        }
        return std::nullopt;
      }
      case Rule::Conversion: {
        const Judgement& major = prem(0);
        const Judgement& minor = prem(1);
        if (!(major.context == c.context) || !(minor.context == c.context)) return std::string("premise contexts differ");
        if (major.subject != c.subject) return std::string("subject changed by conversion");
        if (minor.subject != c.type) return std::string("minor premise must type the new type");
        if (!sort(minor.type)) return "minor premise type " + print(minor.type) + " is not a sort";
        const auto& l = n.info.left;
        const auto& r = n.info.right;
        if (l.empty() && r.empty()) {
          if (major.type != c.type) return std::string("types differ and no conversion witness given");
          return std::nullopt;
        }
        if (l.empty() || r.empty()) return std::string("incomplete conversion witness");
        if (l.front() != major.type) return std::string("witness does not start at the premise type");
        if (r.front() != c.type) return std::string("witness does not start at the conclusion type");
        if (l.back() != r.back()) return std::string("witness paths do not meet");
        if (!is_reduction_path(l) || !is_reduction_path(r)) return std::string("witness contains a non-reduction step");
        return std::nullopt;
      }
      case Rule::TypeReduction: {
        const Judgement& p = prem(0);
        if (!(p.context == c.context) || p.subject != c.subject) return std::string("premise does not match");
        if (!is_one_step_reduct(p.type, c.type)) return std::string("type is not a one-step reduct");
        return std::nullopt;
      }
      case Rule::SubjectReduction: {
        const Judgement& p = prem(0);
        if (!(p.context == c.context) || p.type != c.type) return std::string("premise does not match");
        if (!is_one_step_reduct(p.subject, c.subject)) return std::string("subject is not a one-step reduct");
        return std::nullopt;
      }
    }
    return std::string("unknown rule");
  }

  const Specification& spec_;
  Mode mode_;
  const SchemeValidator& schemes_;
  std::unordered_set<const DerivationNode*> valid_;
};

}  // namespace

CheckReport check_derivation(const Specification& spec, const Derivation& d, Mode mode,
                             const SchemeValidator& schemes) {
  return Checker(spec, mode, schemes).run(d);
}

// --- JSON --------------------------------------------------------------------

namespace {

nlohmann::json judgement_json(const Judgement& j) {
  nlohmann::json ctx = nlohmann::json::array();
  for (const auto& e : j.context) ctx.push_back({{"var", e.var}, {"type", print(e.type)}});
  return {{"context", ctx}, {"subject", print(j.subject)}, {"type", print(j.type)}};
}

nlohmann::json terms_json(const std::vector<Term>& ts) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& t : ts) a.push_back(print(t));
  return a;
}

nlohmann::json to_json_rec(const Derivation& d, std::unordered_map<const DerivationNode*, int>& ids,
                           std::unordered_set<const DerivationNode*>& shared) {
  auto it = ids.find(d.get());
  if (it != ids.end()) return {{"ref", it->second}};
  nlohmann::json out;
  if (shared.count(d.get())) {
    int id = static_cast<int>(ids.size());
    ids.emplace(d.get(), id);
    out["id"] = id;
  }
  out["rule"] = to_string(d->rule);
  out["conclusion"] = judgement_json(d->conclusion);
  nlohmann::json premises = nlohmann::json::array();
  for (const auto& p : d->premises) premises.push_back(to_json_rec(p, ids, shared));
  out["premises"] = premises;
  nlohmann::json info = nlohmann::json::object();
  if (d->info.triple) {
    info["triple"] = {print((*d->info.triple)[0]), print((*d->info.triple)[1]), print((*d->info.triple)[2])};
  }
  if (d->info.sort) info["sort"] = print(*d->info.sort);
  if (d->rule == Rule::Conversion && (!d->info.left.empty() || !d->info.right.empty())) {
    info["reduction-path"] = {{"premise", terms_json(d->info.left)}, {"conclusion", terms_json(d->info.right)}};
  } else if (!d->info.left.empty()) {
    info["reduction-path"] = terms_json(d->info.left);
  }
  if (d->info.scheme) {
    nlohmann::json assignment = nlohmann::json::object();
    for (const auto& [k, v] : d->info.scheme->assignment) assignment[k] = print(v);
    info["scheme"] = {{"name", d->info.scheme->scheme}, {"assignment", assignment}};
  }
  out["info"] = info;
  return out;
}

std::vector<Term> terms_from_json(const nlohmann::json& a, const ParseOptions& opts) {
  std::vector<Term> out;
  for (const auto& t : a) out.push_back(parse_term(t.get<std::string>(), opts));
  return out;
}

Derivation from_json_rec(const Specification& spec, const nlohmann::json& j, std::map<int, Derivation>& ids) {
  if (j.contains("ref")) {
    auto it = ids.find(j.at("ref").get<int>());
    if (it == ids.end()) throw std::runtime_error("dangling derivation reference");
    return it->second;
  }
  auto rule = rule_from_string(j.at("rule").get<std::string>());
  if (!rule) throw std::runtime_error("unknown rule '" + j.at("rule").get<std::string>() + "'");
  ParseOptions opts = spec.parse_options();
  opts.metavariables = false;
  Judgement conclusion;
  const auto& jc = j.at("conclusion");
  for (const auto& e : jc.at("context")) {
    std::string var = e.at("var").get<std::string>();
    Term type = parse_term(e.at("type").get<std::string>(), opts);
    conclusion.context.push_back({var, type});
    opts.variables.insert(var);
  }
  conclusion.subject = parse_term(jc.at("subject").get<std::string>(), opts);
  conclusion.type = parse_term(jc.at("type").get<std::string>(), opts);
  std::vector<Derivation> premises;
  if (j.contains("premises")) {
    for (const auto& p : j.at("premises")) premises.push_back(from_json_rec(spec, p, ids));
  }
  RuleInfo info;
  if (j.contains("info")) {
    const auto& ji = j.at("info");
    auto sort_of = [&](const std::string& s) {
      auto r = spec.sort_ref(s);
      if (!r) throw std::runtime_error("'" + s + "' is not a sort");
      return *r;
    };
    if (ji.contains("triple")) {
      const auto& t = ji.at("triple");
      info.triple = std::array<SortRef, 3>{sort_of(t.at(0)), sort_of(t.at(1)), sort_of(t.at(2))};
    }
    if (ji.contains("sort")) info.sort = sort_of(ji.at("sort"));
    if (ji.contains("reduction-path")) {
      const auto& rp = ji.at("reduction-path");
      if (rp.is_object()) {
        info.left = terms_from_json(rp.at("premise"), opts);
        info.right = terms_from_json(rp.at("conclusion"), opts);
      } else {
        info.left = terms_from_json(rp, opts);
      }
    }
    if (ji.contains("scheme")) {
      SchemeUse use;
      use.scheme = ji.at("scheme").at("name").get<std::string>();
      for (const auto& [k, v] : ji.at("scheme").at("assignment").items()) use.assignment.emplace(k, sort_of(v));
      info.scheme = use;
    }
  }
  Derivation d = make_derivation(*rule, conclusion, premises, info);
  if (j.contains("id")) ids[j.at("id").get<int>()] = d;
  return d;
}

}  // namespace

nlohmann::json derivation_to_json(const Derivation& d) {
  // Nodes reached more than once are emitted once with an id and referenced after.
  std::unordered_map<const DerivationNode*, int> count;
  std::function<void(const Derivation&)> tally = [&](const Derivation& n) {
    if (count[n.get()]++ > 0) return;
    for (const auto& p : n->premises) tally(p);
  };
  tally(d);
  std::unordered_set<const DerivationNode*> shared;
  for (const auto& [n, k] : count) {
    if (k > 1) shared.insert(n);
  }
  std::unordered_map<const DerivationNode*, int> ids;
  return to_json_rec(d, ids, shared);
}

Derivation derivation_from_json(const Specification& spec, const nlohmann::json& j) {
  std::map<int, Derivation> ids;
  return from_json_rec(spec, j, ids);
}

std::string print_derivation(const Derivation& d) {
  std::ostringstream out;
  std::unordered_map<const DerivationNode*, int> labels;
  std::function<void(const Derivation&, int)> rec = [&](const Derivation& n, int indent) {
    out << std::string(indent * 2, ' ');
    auto it = labels.find(n.get());
    if (it != labels.end()) {
      out << "[see #" << it->second << "] " << print(n->conclusion) << "\n";
      return;
    }
    int id = static_cast<int>(labels.size());
    labels.emplace(n.get(), id);
    out << "#" << id << " " << to_string(n->rule);
    if (n->info.scheme) out << " " << n->info.scheme->scheme;
    out << ": " << print(n->conclusion) << "\n";
    for (const auto& p : n->premises) rec(p, indent + 1);
  };
  rec(d, 0);
  return out.str();
}

}  // namespace pts
