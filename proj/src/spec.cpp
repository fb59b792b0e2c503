#include "pts/spec.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace pts {

std::string SortRef::constant() const {
  if (!index) return name;
  return name + "_" + std::to_string(*index);
}

bool operator<(const SortRef& a, const SortRef& b) {
  if (a.name != b.name) return a.name < b.name;
  return a.index < b.index;
}

std::string print(const SortRef& s) { return s.constant(); }

bool operator==(const SortPattern& a, const SortPattern& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case PatternKind::Concrete:
      return a.concrete == b.concrete;
    case PatternKind::FamilyVar:
    case PatternKind::FamilySucc:
      return a.family == b.family && a.var == b.var;
    case PatternKind::FamilyMax:
      return a.family == b.family && a.var == b.var && a.var2 == b.var2;
  }
  return false;
}

std::string print(const SortPattern& p) {
  switch (p.kind) {
    case PatternKind::Concrete:
      return p.concrete.constant();
    case PatternKind::FamilyVar:
      return p.family + "_" + p.var;
    case PatternKind::FamilySucc:
      return p.family + "_succ(" + p.var + ")";
    case PatternKind::FamilyMax:
      return p.family + "_max(" + p.var + "," + p.var2 + ")";
  }
  return "?";
}

std::string print(const RuleTriple& r) {
  return "(" + print(r.s1) + ", " + print(r.s2) + ", " + print(r.s3) + ")";
}

const char* to_string(Tri t) {
  switch (t) {
    case Tri::False:
      return "false";
    case Tri::True:
      return "true";
    case Tri::Unknown:
      return "unknown";
  }
  return "unknown";
}

// --- Specification ---------------------------------------------------------

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

bool Specification::is_constant(const std::string& c) const {
  if (std::find(constants.begin(), constants.end(), c) != constants.end()) return true;
  auto s = sort_ref(c);
  return s && s->indexed();
}

bool Specification::is_sort_name(const std::string& c) const { return sort_ref(c).has_value(); }

std::optional<SortRef> Specification::sort_ref(const std::string& c) const {
  if (std::find(sorts.begin(), sorts.end(), c) != sorts.end()) return SortRef::atom(c);
  for (const auto& f : families) {
    if (c.size() > f.size() + 1 && c.compare(0, f.size(), f) == 0 && c[f.size()] == '_') {
      std::string_view digits = std::string_view(c).substr(f.size() + 1);
      if (!all_digits(digits) || digits[0] == '0' || digits.size() > 9) continue;
      return SortRef::member(f, static_cast<std::uint32_t>(std::stoul(std::string(digits))));
    }
  }
  return std::nullopt;
}

std::optional<SortRef> Specification::sort_of_term(const Term& t) const {
  if (!t || !t.is_const()) return std::nullopt;
  return sort_ref(t.name());
}

std::vector<SortRef> Specification::sorts_upto(std::uint32_t bound) const {
  std::vector<SortRef> out;
  for (const auto& s : sorts) out.push_back(SortRef::atom(s));
  for (std::uint32_t i = 1; i <= bound; ++i) {
    for (const auto& f : families) out.push_back(SortRef::member(f, i));
  }
  return out;
}

std::size_t Specification::sort_rank(const SortRef& s) const {
  if (!s.index) {
    auto it = std::find(sorts.begin(), sorts.end(), s.name);
    return static_cast<std::size_t>(it - sorts.begin());
  }
  auto it = std::find(families.begin(), families.end(), s.name);
  return sorts.size() + static_cast<std::size_t>(*s.index) * families.size() +
         static_cast<std::size_t>(it - families.begin());
}

ParseOptions Specification::parse_options() const {
  ParseOptions o;
  o.is_constant = [this](const std::string& c) { return is_constant(c); };
  return o;
}

bool operator==(const Specification& a, const Specification& b) {
  return a.name == b.name && a.sorts == b.sorts && a.families == b.families && a.constants == b.constants &&
         a.axioms == b.axioms && a.schematic_axioms == b.schematic_axioms && a.rules == b.rules &&
         a.axiom_closure == b.axiom_closure;
}

// --- pattern matching ------------------------------------------------------

namespace {

using Binding = std::map<std::string, std::uint32_t>;

bool bind(Binding& b, const std::string& v, std::uint32_t value) {
  auto [it, inserted] = b.emplace(v, value);
  return inserted || it->second == value;
}

bool match(const SortPattern& p, const SortRef& s, Binding& b) {
  switch (p.kind) {
    case PatternKind::Concrete:
      return p.concrete == s;
    case PatternKind::FamilyVar:
      return s.indexed() && s.name == p.family && bind(b, p.var, *s.index);
    case PatternKind::FamilySucc:
      return s.indexed() && s.name == p.family && *s.index >= 2 && bind(b, p.var, *s.index - 1);
    case PatternKind::FamilyMax:
      return false;
  }
  return false;
}

std::optional<SortRef> eval(const SortPattern& p, const Binding& b) {
  auto get = [&](const std::string& v) -> std::optional<std::uint32_t> {
    auto it = b.find(v);
    if (it == b.end()) return std::nullopt;
    return it->second;
  };
  switch (p.kind) {
    case PatternKind::Concrete:
      return p.concrete;
    case PatternKind::FamilyVar:
      if (auto i = get(p.var)) return SortRef::member(p.family, *i);
      return std::nullopt;
    case PatternKind::FamilySucc:
      if (auto i = get(p.var)) return SortRef::member(p.family, *i + 1);
      return std::nullopt;
    case PatternKind::FamilyMax: {
      auto i = get(p.var);
      auto j = get(p.var2);
      if (i && j) return SortRef::member(p.family, std::max(*i, *j));
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::set<std::string> pattern_vars(const SortPattern& p) {
  std::set<std::string> out;
  if (p.kind != PatternKind::Concrete) out.insert(p.var);
  if (p.kind == PatternKind::FamilyMax) out.insert(p.var2);
  return out;
}

void sort_by_rank(const Specification& spec, std::vector<SortRef>& v) {
  std::sort(v.begin(), v.end(), [&](const SortRef& a, const SortRef& b) {
    return spec.sort_rank(a) < spec.sort_rank(b);
  });
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<SortRef> direct_axiom_sorts(const Specification& spec, const std::string& c) {
  std::vector<SortRef> out;
  for (const auto& a : spec.axioms) {
    if (a.constant == c) out.push_back(a.sort);
  }
  if (auto s = spec.sort_ref(c); s && s->indexed()) {
    for (const auto& sa : spec.schematic_axioms) {
      Binding b;
      if (!match(sa.subject, *s, b)) continue;
      if (auto r = eval(sa.sort, b)) out.push_back(*r);
    }
  }
  return out;
}

}  // namespace

std::vector<SortRef> rule_targets(const Specification& spec, const SortRef& s1, const SortRef& s2) {
  std::vector<SortRef> out;
  for (const auto& r : spec.rules) {
    Binding b;
    if (!match(r.s1, s1, b) || !match(r.s2, s2, b)) continue;
    if (auto s3 = eval(r.s3, b)) out.push_back(*s3);
  }
  sort_by_rank(spec, out);
  return out;
}

bool has_rule(const Specification& spec, const SortRef& s1, const SortRef& s2, const SortRef& s3) {
  auto t = rule_targets(spec, s1, s2);
  return std::find(t.begin(), t.end(), s3) != t.end();
}

std::vector<SortRef> axiom_sorts(const Specification& spec, const std::string& c, std::uint32_t bound) {
  std::vector<SortRef> out = direct_axiom_sorts(spec, c);
  if (spec.axiom_closure) {
    std::set<SortRef> seen(out.begin(), out.end());
    std::deque<SortRef> frontier(out.begin(), out.end());
    while (!frontier.empty()) {
      SortRef s = frontier.front();
      frontier.pop_front();
      for (auto& next : direct_axiom_sorts(spec, s.constant())) {
        if (next.index && *next.index > bound) continue;
        if (seen.insert(next).second) {
          out.push_back(next);
          frontier.push_back(next);
        }
      }
    }
  }
  sort_by_rank(spec, out);
  return out;
}

bool has_axiom(const Specification& spec, const std::string& c, const SortRef& s) {
  std::uint32_t bound = std::max<std::uint32_t>(8, s.index.value_or(0));
  auto sorts = axiom_sorts(spec, c, bound);
  return std::find(sorts.begin(), sorts.end(), s) != sorts.end();
}

// --- supersortedness -------------------------------------------------------

namespace {

// Whether the pattern can be evaluated once `vars` are known.
bool evaluable(const SortPattern& p, const std::set<std::string>& vars) {
  for (const auto& v : pattern_vars(p)) {
    if (!vars.count(v)) return false;
  }
  return true;
}

bool mentions_family(const SortPattern& p, const std::string& f) {
  return p.kind != PatternKind::Concrete && p.family == f;
}

// Some rule covers every (a, F_j) (or (F_j, a) when `family_first`).
Tri covers_atom_family(const Specification& spec, const std::string& atom, const std::string& fam,
                       bool family_first) {
  bool schematic_seen = false;
  for (const auto& r : spec.rules) {
    const SortPattern& pa = family_first ? r.s2 : r.s1;
    const SortPattern& pf = family_first ? r.s1 : r.s2;
    if (mentions_family(pf, fam)) schematic_seen = true;
    if (!(pa.kind == PatternKind::Concrete && pa.concrete == SortRef::atom(atom))) continue;
    if (pf.kind != PatternKind::FamilyVar || pf.family != fam) continue;
    if (evaluable(r.s3, {pf.var})) return Tri::True;
  }
  return schematic_seen ? Tri::Unknown : Tri::False;
}

Tri covers_family_family(const Specification& spec, const std::string& f, const std::string& g) {
  bool schematic_seen = false;
  for (const auto& r : spec.rules) {
    if (mentions_family(r.s1, f) || mentions_family(r.s2, g)) schematic_seen = true;
    if (r.s1.kind != PatternKind::FamilyVar || r.s1.family != f) continue;
    if (r.s2.kind != PatternKind::FamilyVar || r.s2.family != g) continue;
    if (r.s1.var == r.s2.var) continue;
    if (evaluable(r.s3, {r.s1.var, r.s2.var})) return Tri::True;
  }
  return schematic_seen ? Tri::Unknown : Tri::False;
}

Tri combine(Tri acc, Tri next) {
  if (acc == Tri::False || next == Tri::False) return Tri::False;
  if (acc == Tri::Unknown || next == Tri::Unknown) return Tri::Unknown;
  return Tri::True;
}

}  // namespace

Tri is_supersorted(const Specification& spec) {
  Tri result = Tri::True;
  for (const auto& c : spec.constants) {
    if (direct_axiom_sorts(spec, c).empty()) return Tri::False;
  }
  for (const auto& f : spec.families) {
    bool covered = false;
    bool mentioned = false;
    for (const auto& sa : spec.schematic_axioms) {
      if (mentions_family(sa.subject, f)) mentioned = true;
      if (sa.subject.kind == PatternKind::FamilyVar && sa.subject.family == f &&
          evaluable(sa.sort, {sa.subject.var})) {
        covered = true;
      }
    }
    if (!covered) result = combine(result, mentioned ? Tri::Unknown : Tri::False);
  }
  for (const auto& a : spec.sorts) {
    for (const auto& b : spec.sorts) {
      if (rule_targets(spec, SortRef::atom(a), SortRef::atom(b)).empty()) return Tri::False;
    }
  }
  for (const auto& a : spec.sorts) {
    for (const auto& f : spec.families) {
      result = combine(result, covers_atom_family(spec, a, f, false));
      result = combine(result, covers_atom_family(spec, a, f, true));
    }
  }
  for (const auto& f : spec.families) {
    for (const auto& g : spec.families) result = combine(result, covers_family_family(spec, f, g));
  }
  return result;
}

// --- spec file format ------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_top(std::string_view s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

const std::set<std::string>& section_keys() {
  static const std::set<std::string> keys = {"name",  "sorts", "families", "constants", "axioms", "schematic-axioms",
                                             "rules", "schematic-rules", "closure"};
  return keys;
}

bool is_var_name(std::string_view v) {
  return !v.empty() && std::isalpha(static_cast<unsigned char>(v[0])) &&
         std::all_of(v.begin(), v.end(), [](unsigned char c) { return std::isalnum(c) || c == '\''; });
}

SortPattern parse_pattern(const std::string& tok, const Specification& spec, int line) {
  auto fail = [&](const std::string& msg) -> SortPattern {
    throw SpecError("line " + std::to_string(line) + ": " + msg);
  };
  if (std::find(spec.sorts.begin(), spec.sorts.end(), tok) != spec.sorts.end()) {
    return SortPattern::of(SortRef::atom(tok));
  }
  for (const auto& f : spec.families) {
    std::string prefix = f + "_";
    if (tok.compare(0, prefix.size(), prefix) != 0) continue;
    std::string rest = tok.substr(prefix.size());
    if (rest.rfind("max(", 0) == 0 && rest.back() == ')') {
      auto args = split_top(rest.substr(4, rest.size() - 5), ',');
      if (args.size() != 2 || !is_var_name(args[0]) || !is_var_name(args[1])) fail("malformed " + tok);
      return SortPattern::family_max(f, args[0], args[1]);
    }
    if (rest.rfind("succ(", 0) == 0 && rest.back() == ')') {
      std::string v = trim(rest.substr(5, rest.size() - 6));
      if (!is_var_name(v)) fail("malformed " + tok);
      return SortPattern::family_succ(f, v);
    }
    if (auto s = spec.sort_ref(tok)) return SortPattern::of(*s);
    if (is_var_name(rest)) return SortPattern::family_var(f, rest);
  }
  return fail("unknown sort '" + tok + "'");
}

struct RawSection {
  std::string key;
  int line = 0;
  std::vector<std::pair<std::string, int>> items;  // text, line number
};

std::vector<std::string> tuple_groups(const std::string& text, int line) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : text) {
    if (c == '(') {
      if (depth > 0) cur += c;
      ++depth;
    } else if (c == ')') {
      --depth;
      if (depth < 0) throw SpecError("line " + std::to_string(line) + ": unbalanced ')'");
      if (depth == 0) {
        out.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    } else if (depth > 0) {
      cur += c;
    } else if (!std::isspace(static_cast<unsigned char>(c)) && c != ',') {
      throw SpecError("line " + std::to_string(line) + ": expected '(' in rule list");
    }
  }
  if (depth != 0) throw SpecError("line " + std::to_string(line) + ": unbalanced '('");
  return out;
}

}  // namespace

Specification parse_spec(std::string_view text) {
  std::vector<RawSection> sections;
  std::istringstream in{std::string(text)};
  std::string raw_line;
  int line_no = 0;
  while (std::getline(in, raw_line)) {
    ++line_no;
    if (auto hash = raw_line.find('#'); hash != std::string::npos) raw_line.erase(hash);
    if (trim(raw_line).empty()) continue;
    bool header = false;
    if (!std::isspace(static_cast<unsigned char>(raw_line[0]))) {
      auto colon = raw_line.find(':');
      if (colon != std::string::npos) {
        std::string key = trim(raw_line.substr(0, colon));
        if (section_keys().count(key)) {
          header = true;
          for (const auto& s : sections) {
            if (s.key == key) throw SpecError("line " + std::to_string(line_no) + ": duplicate section " + key);
          }
          sections.push_back({key, line_no, {}});
          std::string rest = trim(raw_line.substr(colon + 1));
          if (!rest.empty()) sections.back().items.push_back({rest, line_no});
        }
      }
    }
    if (!header) {
      if (sections.empty()) throw SpecError("line " + std::to_string(line_no) + ": entry outside of a section");
      sections.back().items.push_back({trim(raw_line), line_no});
    }
  }

  auto section = [&](const std::string& key) -> const RawSection* {
    for (const auto& s : sections) {
      if (s.key == key) return &s;
    }
    return nullptr;
  };
  auto names = [&](const std::string& key) {
    std::vector<std::string> out;
    if (const RawSection* s = section(key)) {
      for (const auto& [item, line] : s->items) {
        for (auto& n : split_top(item, ',')) {
          if (!is_identifier(n)) throw SpecError("line " + std::to_string(line) + ": bad name '" + n + "'");
          if (std::find(out.begin(), out.end(), n) != out.end()) {
            throw SpecError("line " + std::to_string(line) + ": '" + n + "' listed twice");
          }
          out.push_back(n);
        }
      }
    }
    return out;
  };

  Specification spec;
  if (const RawSection* s = section("name")) {
    if (s->items.size() != 1) throw SpecError("line " + std::to_string(s->line) + ": name takes one value");
    spec.name = s->items[0].first;
  }
  if (!section("sorts")) throw SpecError("missing sorts: section");
  if (!section("constants")) throw SpecError("missing constants: section");
  spec.sorts = names("sorts");
  spec.families = names("families");
  spec.constants = names("constants");

  for (const auto& f : spec.families) {
    if (std::find(spec.sorts.begin(), spec.sorts.end(), f) != spec.sorts.end() ||
        std::find(spec.constants.begin(), spec.constants.end(), f) != spec.constants.end()) {
      throw SpecError("family name '" + f + "' clashes with an atom");
    }
  }
  for (const auto& s : spec.sorts) {
    if (std::find(spec.constants.begin(), spec.constants.end(), s) == spec.constants.end()) {
      throw SpecError("sort '" + s + "' is not listed among the constants");
    }
  }
  for (const auto& c : spec.constants) {
    if (auto r = spec.sort_ref(c); r && r->indexed()) {
      throw SpecError("constant '" + c + "' collides with a family member");
    }
  }

  if (const RawSection* s = section("axioms")) {
    for (const auto& [item, line] : s->items) {
      for (const auto& entry : split_top(item, ',')) {
        auto parts = split_top(entry, ':');
        if (parts.size() != 2) throw SpecError("line " + std::to_string(line) + ": expected 'c : s'");
        if (!spec.is_constant(parts[0])) {
          throw SpecError("line " + std::to_string(line) + ": '" + parts[0] + "' is not a constant");
        }
        auto sort = spec.sort_ref(parts[1]);
        if (!sort) throw SpecError("line " + std::to_string(line) + ": '" + parts[1] + "' is not a sort");
        spec.axioms.push_back({parts[0], *sort});
      }
    }
  }
  if (const RawSection* s = section("schematic-axioms")) {
    for (const auto& [item, line] : s->items) {
      for (const auto& entry : split_top(item, ',')) {
        auto parts = split_top(entry, ':');
        if (parts.size() != 2) throw SpecError("line " + std::to_string(line) + ": expected 'c : s'");
        SchematicAxiom sa{parse_pattern(parts[0], spec, line), parse_pattern(parts[1], spec, line)};
        if (sa.subject.kind != PatternKind::FamilyVar) {
          throw SpecError("line " + std::to_string(line) + ": schematic axiom subject must be a family variable");
        }
        if (!evaluable(sa.sort, pattern_vars(sa.subject))) {
          throw SpecError("line " + std::to_string(line) + ": unbound index variable in " + parts[1]);
        }
        spec.schematic_axioms.push_back(sa);
      }
    }
  }
  for (const char* key : {"rules", "schematic-rules"}) {
    const RawSection* s = section(key);
    if (!s) continue;
    for (const auto& [item, line] : s->items) {
      for (const auto& group : tuple_groups(item, line)) {
        auto parts = split_top(group, ',');
        if (parts.size() != 2 && parts.size() != 3) {
          throw SpecError("line " + std::to_string(line) + ": a rule has two or three sorts");
        }
        RuleTriple r;
        r.s1 = parse_pattern(parts[0], spec, line);
        r.s2 = parse_pattern(parts[1], spec, line);
        r.s3 = parts.size() == 3 ? parse_pattern(parts[2], spec, line) : r.s2;
        if (r.s1.kind == PatternKind::FamilyMax || r.s2.kind == PatternKind::FamilyMax) {
          throw SpecError("line " + std::to_string(line) + ": max(i,j) may only appear in the third position");
        }
        auto vars = pattern_vars(r.s1);
        for (auto& v : pattern_vars(r.s2)) vars.insert(v);
        if (!evaluable(r.s3, vars)) {
          throw SpecError("line " + std::to_string(line) + ": index variable of the third sort is unbound");
        }
        spec.rules.push_back(r);
      }
    }
  }
  if (const RawSection* s = section("closure")) {
    std::string v = s->items.empty() ? "" : s->items[0].first;
    if (v == "transitive") {
      spec.axiom_closure = true;
    } else if (v != "none") {
      throw SpecError("line " + std::to_string(s->line) + ": closure must be 'transitive' or 'none'");
    }
  }
  return spec;
}

std::string print_spec(const Specification& spec) {
  std::ostringstream out;
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s;
  };
  if (!spec.name.empty()) out << "name: " << spec.name << "\n";
  out << "sorts: " << join(spec.sorts) << "\n";
  if (!spec.families.empty()) out << "families: " << join(spec.families) << "\n";
  out << "constants: " << join(spec.constants) << "\n";
  out << "axioms:\n";
  for (const auto& a : spec.axioms) out << "  " << a.constant << " : " << print(a.sort) << "\n";
  if (!spec.schematic_axioms.empty()) {
    out << "schematic-axioms:\n";
    for (const auto& a : spec.schematic_axioms) out << "  " << print(a.subject) << " : " << print(a.sort) << "\n";
  }
  // A rule list keeps its relative order only within each section, so print
  // concrete rules first only when that matches the stored order.
  bool split = true;
  bool seen_schematic = false;
  for (const auto& r : spec.rules) {
    if (!r.concrete_only()) seen_schematic = true;
    else if (seen_schematic) split = false;
  }
  if (split) {
    out << "rules:\n";
    for (const auto& r : spec.rules) {
      if (r.concrete_only()) out << "  " << print(r) << "\n";
    }
    if (seen_schematic) {
      out << "schematic-rules:\n";
      for (const auto& r : spec.rules) {
        if (!r.concrete_only()) out << "  " << print(r) << "\n";
      }
    }
  } else {
    out << "rules:\n";
    for (const auto& r : spec.rules) out << "  " << print(r) << "\n";
  }
  if (spec.axiom_closure) out << "closure: transitive\n";
  return out.str();
}

// --- catalog ---------------------------------------------------------------

namespace {

struct CatalogEntry {
  const char* name;
  const char* text;
};

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"lambda-arrow",
       "sorts: *, box\nconstants: *, box\naxioms: * : box\nrules: (*, *)\n"},
      {"lambda-tau",
       "sorts: *\nconstants: *, 0\naxioms: 0 : *\nrules: (*, *)\n"},
      {"lambda-star",
       "sorts: *\nconstants: *\naxioms: * : *\nrules: (*, *)\n"},
      {"lambda-2",
       "sorts: *, box\nconstants: *, box\naxioms: * : box\nrules: (*, *), (box, *)\n"},
      {"lambda-p",
       "sorts: *, box\nconstants: *, box\naxioms: * : box\nrules: (*, *), (*, box)\n"},
      {"lambda-omega-weak",
       "sorts: *, box\nconstants: *, box\naxioms: * : box\nrules: (*, *), (box, box)\n"},
      {"lambda-omega",
       "sorts: *, box\nconstants: *, box\naxioms: * : box\nrules: (*, *), (box, *), (box, box)\n"},
      {"lambda-p2",
       "sorts: *, box\nconstants: *, box\naxioms: * : box\nrules: (*, *), (box, *), (*, box)\n"},
      {"lambda-p-omega-weak",
       "sorts: *, box\nconstants: *, box\naxioms: * : box\nrules: (*, *), (*, box), (box, box)\n"},
      {"lambda-c",
       "sorts: *, box\nconstants: *, box\naxioms: * : box\nrules: (*, *), (*, box), (box, *), (box, box)\n"},
      {"lambda-aut-68",
       "sorts: *, box, triangle\nconstants: *, box, triangle\naxioms: * : box\n"
       "rules: (*, *), (*, box, triangle), (box, *, triangle), (box, box, triangle), (*, triangle), "
       "(box, triangle)\n"},
      {"lambda-aut-qe",
       "sorts: *, box, triangle\nconstants: *, box, triangle\naxioms: * : box\n"
       "rules: (*, *), (*, box), (box, *, triangle), (box, box, triangle), (*, triangle), (box, triangle)\n"},
      {"lambda-pal",
       "sorts: *, box, triangle\nconstants: *, box, triangle\naxioms: * : box\n"
       "rules: (*, *, triangle), (*, box, triangle), (box, *, triangle), (box, box, triangle), (*, triangle), "
       "(box, triangle)\n"},
      {"lambda-u",
       "sorts: *, box, triangle\nconstants: *, box, triangle\naxioms: * : box, box : triangle\n"
       "rules: (*, *), (box, *), (box, box), (triangle, box), (triangle, *)\n"},
      {"lambda-hol",
       "sorts: *, box, triangle\nconstants: *, box, triangle\naxioms: * : box, box : triangle\n"
       "rules: (*, *), (box, *), (box, box)\n"},
      {"lambda-coq",
       "sorts: *_p, *_s\nfamilies: box\nconstants: *_p, *_s\naxioms: *_p : box_1, *_s : box_1\n"
       "schematic-axioms: box_i : box_succ(i)\n"
       "rules: (*_s, *_s), (*_p, *_p), (*_s, *_p), (*_p, *_s)\n"
       "schematic-rules: (*_p, box_i), (*_s, box_i), (box_i, *_p), (box_i, *_s), (box_i, box_j, box_max(i,j))\n"
       "closure: transitive\n"},
      {"lambda-coq-8.0",
       "sorts: *_p, *_s\nfamilies: box\nconstants: *_p, *_s\naxioms: *_p : box_1, *_s : box_1\n"
       "schematic-axioms: box_i : box_succ(i)\n"
       "rules: (*_s, *_s), (*_p, *_p), (*_s, *_p), (*_p, *_s)\n"
       "schematic-rules: (*_p, box_i), (*_s, box_i), (box_i, *_p), (box_i, *_s, box_i), "
       "(box_i, box_j, box_max(i,j))\n"
       "closure: transitive\n"},
  };
  return entries;
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : catalog()) v.push_back(e.name);
    return v;
  }();
  return names;
}

Specification builtin(std::string_view name) {
  for (const auto& e : catalog()) {
    if (name == e.name) {
      Specification s = parse_spec(e.text);
      s.name = e.name;
      return s;
    }
  }
  throw SpecError("unknown builtin specification '" + std::string(name) + "'");
}

Specification load_spec(const std::string& selector) {
  for (const auto& n : builtin_names()) {
    if (n == selector) return builtin(selector);
  }
  namespace fs = std::filesystem;
  std::vector<fs::path> candidates{fs::path(selector)};
  if (const char* dirs = std::getenv("PTS_SPEC_PATH")) {
    std::stringstream ss(dirs);
    std::string dir;
    while (std::getline(ss, dir, ':')) {
      if (dir.empty()) continue;
      candidates.push_back(fs::path(dir) / selector);
      candidates.push_back(fs::path(dir) / (selector + ".spec"));
    }
  }
  for (const auto& p : candidates) {
    std::error_code ec;
    if (!fs::is_regular_file(p, ec)) continue;
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    Specification s = parse_spec(buf.str());
    if (s.name.empty()) s.name = p.stem().string();
    return s;
  }
  throw SpecError("no builtin or spec file named '" + selector + "'");
}

}  // namespace pts
