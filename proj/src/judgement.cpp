#include "pts/judgement.hpp"

namespace pts {

bool operator==(const Statement& a, const Statement& b) {
  return a.subject == b.subject && a.type == b.type;
}

bool operator==(const ContextEntry& a, const ContextEntry& b) {
  return a.var == b.var && a.type == b.type;
}

bool operator==(const Judgement& a, const Judgement& b) {
  return a.context == b.context && a.subject == b.subject && a.type == b.type;
}

std::set<std::string> context_vars(const Context& ctx) {
  std::set<std::string> out;
  for (const auto& e : ctx) out.insert(e.var);
  return out;
}

std::optional<Term> lookup(const Context& ctx, const std::string& var) {
  for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) {
    if (it->var == var) return it->type;
  }
  return std::nullopt;
}

std::optional<std::string> context_violation(const Context& ctx) {
  std::set<std::string> seen;
  for (const auto& e : ctx) {
    if (e.var.empty()) return std::string("empty variable name in context");
    if (seen.count(e.var)) return "variable " + e.var + " declared twice";
    for (const auto& v : free_vars(e.type)) {
      if (!seen.count(v)) return "type of " + e.var + " mentions undeclared variable " + v;
    }
    seen.insert(e.var);
  }
  return std::nullopt;
}

std::optional<std::string> judgement_violation(const Judgement& j) {
  if (auto v = context_violation(j.context)) return v;
  auto vars = context_vars(j.context);
  for (const Term* t : {&j.subject, &j.type}) {
    for (const auto& v : free_vars(*t)) {
      if (!vars.count(v)) return "free variable " + v + " not declared in context";
    }
  }
  return std::nullopt;
}

Context substitute_context(const Context& ctx, const std::string& x, const Term& value) {
  Context out;
  out.reserve(ctx.size());
  for (const auto& e : ctx) out.push_back({e.var, substitute(e.type, x, value)});
  return out;
}

std::string print(const Statement& s) { return print(s.subject) + " : " + print(s.type); }

std::string print(const Context& ctx) {
  std::string out;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (i) out += ", ";
    out += ctx[i].var + ":" + print(ctx[i].type);
  }
  return out;
}

std::string print(const Judgement& j) {
  std::string out = print(j.context);
  if (!out.empty()) out += ' ';
  out += "|- " + print(j.subject) + " : " + print(j.type);
  return out;
}

std::string context_key(const Context& ctx) {
  std::string out;
  for (const auto& e : ctx) {
    out += e.var;
    out += '=';
    out += canonical_key(e.type);
    out += ',';
  }
  return out;
}

std::string judgement_key(const Judgement& j) {
  return context_key(j.context) + "|" + canonical_key(j.subject) + "|" + canonical_key(j.type);
}

}  // namespace pts
