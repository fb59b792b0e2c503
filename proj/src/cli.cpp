#include "pts/cli.hpp"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "pts/axioms.hpp"
#include "pts/classifier.hpp"
#include "pts/derivation.hpp"
#include "pts/engine.hpp"
#include "pts/hpts.hpp"
#include "pts/icl.hpp"
#include "pts/parse.hpp"
#include "pts/reduce.hpp"
#include "pts/spec.hpp"

namespace pts {
namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;
constexpr int kUnknown = 3;

struct Options {
  std::string spec;
  std::size_t fuel = 10000;
  std::size_t depth = 12;
  bool json_out = false;
  std::string judgement;
  std::string term;
  std::string context;
  std::string file;
  std::string family;
  std::string mode = "h";
  std::size_t k = 10;
  std::size_t max_n = 4;
  bool abstract = false;
  bool plain = false;
  bool identify = false;
  bool forms = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int verdict_code(Verdict v) {
  switch (v) {
    case Verdict::Yes: return kOk;
    case Verdict::No: return kNegative;
    case Verdict::Unknown: return kUnknown;
  }
  return kUnknown;
}

const char* verdict_word(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

class Runner {
 public:
  Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  SearchLimits limits() const {
    SearchLimits l;
    l.fuel = o_.fuel;
    l.depth = o_.depth;
    return l;
  }

  const Specification& spec() {
    if (!spec_) {
      if (o_.spec.empty()) throw UsageError("--spec is required");
      spec_ = load_spec(o_.spec);
    }
    return *spec_;
  }

  Judgement judgement() {
    if (o_.judgement.empty()) throw UsageError("--judgement is required");
    return parse_judgement(o_.judgement, spec().parse_options());
  }

  // The positional term, parsed in the optional --context.
  std::pair<Context, Term> term_in_context() {
    if (o_.term.empty()) throw UsageError("a term is required");
    std::string ctx = o_.context;
    Judgement j = parse_judgement(ctx + " |- " + o_.term + " : " + o_.term, spec().parse_options());
    return {j.context, j.subject};
  }

  Statement statement() {
    Judgement j = judgement();
    if (!j.context.empty()) throw UsageError("the judgement must have an empty context");
    return j.statement();
  }

  void emit(const json& j) { out_ << j.dump(2) << "\n"; }

  int parse() {
    if (!o_.judgement.empty()) {
      Judgement j = judgement();
      if (o_.json_out) {
        json ctx = json::array();
        for (const auto& e : j.context) ctx.push_back({{"var", e.var}, {"type", print(e.type)}});
        emit({{"context", ctx}, {"subject", print(j.subject)}, {"type", print(j.type)}});
      } else {
        out_ << print(j) << "\n";
      }
      return kOk;
    }
    auto [ctx, t] = term_in_context();
    if (o_.json_out) {
      emit({{"term", print(t)}, {"canonical", canonical_key(t)}});
    } else {
      out_ << print(t) << "\n";
    }
    return kOk;
  }

  int normalize() {
    auto [ctx, t] = term_in_context();
    auto path = normalize_path(t, o_.fuel);
    if (!path) {
      if (o_.json_out) {
        emit({{"term", print(t)}, {"normal_form", nullptr}, {"reason", "fuel exhausted"}});
      } else {
        out_ << "unknown: fuel exhausted\n";
      }
      return kUnknown;
    }
    if (o_.json_out) {
      json steps = json::array();
      for (const auto& s : *path) steps.push_back(print(s));
      emit({{"term", print(t)}, {"normal_form", print(path->back())}, {"steps", path->size() - 1}, {"path", steps}});
    } else {
      out_ << print(path->back()) << "\n";
    }
    return kOk;
  }

  int check() {
    CheckResult r = check_judgement(spec(), judgement(), limits());
    if (o_.json_out) {
      json j{{"verdict", verdict_word(r.verdict)}, {"reason", r.reason}};
      j["derivation"] = r.derivation ? derivation_to_json(r.derivation) : json(nullptr);
      emit(j);
    } else {
      out_ << verdict_word(r.verdict);
      if (r.verdict != Verdict::Yes && !r.reason.empty()) out_ << ": " << r.reason;
      out_ << "\n";
    }
    return verdict_code(r.verdict);
  }

  int infer() {
    auto [ctx, t] = term_in_context();
    InferResult r = infer_types(spec(), ctx, t, limits());
    if (o_.json_out) {
      json types = json::array();
      for (const auto& ty : r.typings) types.push_back(print(ty.type));
      emit({{"verdict", verdict_word(r.verdict)}, {"types", types}, {"reason", r.reason}});
    } else if (r.verdict == Verdict::Yes) {
      for (const auto& ty : r.typings) out_ << print(ty.type) << "\n";
    } else {
      out_ << verdict_word(r.verdict);
      if (!r.reason.empty()) out_ << ": " << r.reason;
      out_ << "\n";
    }
    return verdict_code(r.verdict);
  }

  Derivation read_derivation() {
    if (o_.file.empty()) throw UsageError("a derivation file is required");
    std::ifstream in(o_.file);
    if (!in) throw UsageError("cannot open " + o_.file);
    return derivation_from_json(spec(), json::parse(in));
  }

  Mode h_mode() const {
    if (o_.mode == "h") return Mode::H;
    if (o_.mode == "hplus") return Mode::HPlus;
    throw UsageError("--mode must be h or hplus");
  }

  int hcheck() {
    Derivation d = read_derivation();
    AxiomBase base = generate_axiom_base(spec());
    CheckReport r = h_check_derivation(base, d, h_mode());
    if (o_.json_out) {
      json path = json::array();
      for (auto i : r.path) path.push_back(i);
      emit({{"valid", r.valid}, {"path", path}, {"reason", r.reason}});
    } else {
      out_ << (r.valid ? "valid" : "invalid: " + r.describe()) << "\n";
    }
    return r.valid ? kOk : kNegative;
  }

  void emit_derivation(const Derivation& d, const std::string& method) {
    if (o_.json_out) {
      json j = derivation_to_json(d);
      if (!method.empty()) j = {{"method", method}, {"derivation", j}};
      emit(j);
    } else {
      out_ << print_derivation(d);
    }
  }

  int hderive() {
    AxiomBase base = generate_axiom_base(spec());
    HDeriveResult r = h_derive(base, statement(), limits());
    if (!r.derivation) {
      if (o_.json_out) {
        emit({{"found", false}, {"reason", r.reason}});
      } else {
        out_ << "not found: " << r.reason << "\n";
      }
      return kNegative;
    }
    emit_derivation(r.derivation, r.method);
    return kOk;
  }

  int compile() {
    Derivation d;
    if (!o_.file.empty()) {
      d = read_derivation();
    } else {
      CheckResult r = check_judgement(spec(), judgement(), limits());
      if (r.verdict != Verdict::Yes) {
        out_ << verdict_word(r.verdict) << ": " << r.reason << "\n";
        return verdict_code(r.verdict);
      }
      d = r.derivation;
    }
    AxiomBase base = generate_axiom_base(spec());
    emit_derivation(pts_to_hpts(base, d, limits()), "");
    return kOk;
  }

  int axioms() {
    AxiomBase base = generate_axiom_base(spec());
    std::vector<const AxiomScheme*> schemes;
    if (o_.family.empty()) {
      for (const auto& s : base.schemes) schemes.push_back(&s);
    } else {
      schemes = base.family(o_.family);
      if (schemes.empty()) throw UsageError("no scheme family " + o_.family);
    }
    if (o_.json_out) {
      json arr = json::array();
      for (const auto* s : schemes) arr.push_back(scheme_to_json(*s));
      emit({{"spec", spec().name}, {"count", schemes.size()}, {"schemes", arr}});
      return kOk;
    }
    for (const auto* s : schemes) {
      out_ << s->name << ": " << print(s->subject) << " : " << print(s->type);
      if (!s->conditions.empty()) {
        out_ << "  if";
        for (std::size_t i = 0; i < s->conditions.size(); ++i) {
          out_ << (i ? ", " : " ") << print(s->conditions[i]);
        }
      }
      out_ << "\n";
    }
    return kOk;
  }

  int classify_cmd() {
    Classification c = classify(spec(), limits());
    if (o_.json_out) {
      emit(classification_to_json(spec(), c));
    } else {
      out_ << "verdict: " << to_string(c.verdict) << "\n";
      out_ << "dollar: " << (c.dollar.holds ? "holds" : "fails") << "\n";
      for (const auto& ch : c.dollar.checks) {
        if (ch.blocking_rule) {
          const auto& r = *ch.blocking_rule;
          out_ << "  " << ch.constant << " : " << print(ch.sort) << " heads rule (" << print(r[0]) << ", "
               << print(r[1]) << ", " << print(r[2]) << ")\n";
        }
      }
      if (c.chain) print_chain(*c.chain);
      if (c.double_dollar) {
        out_ << "double-dollar: " << (c.double_dollar->holds ? "holds" : "fails") << "\n";
      }
      out_ << "supersorted: " << to_string(c.supersorted) << "\n";
    }
    return c.verdict == Category::Unknown ? kUnknown : kOk;
  }

  void print_chain(const Chain& chain) {
    out_ << "chain:";
    for (const auto& s : chain.sorts) out_ << " " << print(s);
    out_ << "\n  " << print(chain.nf_witness.term) << " : " << print(chain.sorts.front()) << "\n";
    for (const auto& st : chain.steps) {
      out_ << "  (" << print(st.via) << ", " << print(st.from) << ", " << print(st.to) << ") with "
           << print(st.via_witness.term) << " : " << print(st.via) << "\n";
    }
  }

  int witness() {
    auto chain = find_chain(spec(), o_.max_n, limits());
    if (!chain) {
      if (o_.json_out) {
        emit({{"chain", nullptr}, {"terms", json::array()}});
      } else {
        out_ << "no chain\n";
      }
      return kNegative;
    }
    auto terms = witness_family(spec(), *chain, o_.k, limits());
    if (o_.json_out) {
      json arr = json::array();
      for (const auto& t : terms) arr.push_back(print(t));
      emit({{"chain", chain_to_json(*chain)}, {"sort", print(chain->sorts.front())}, {"terms", arr}});
    } else {
      for (const auto& t : terms) out_ << print(t) << "\n";
    }
    return kOk;
  }

  int icl() {
    AbstractionAlgorithm alg = o_.plain ? AbstractionAlgorithm::Plain : AbstractionAlgorithm::EtaOptimized;
    if (o_.forms) {
      AxiomBase base = generate_axiom_base(spec());
      auto forms = combinator_axiom_forms(base, alg);
      if (o_.json_out) {
        json arr = json::array();
        for (const auto& f : forms) {
          arr.push_back({{"scheme", f.scheme}, {"combinator", print(f.combinator)}, {"type", print(f.type)}});
        }
        emit(arr);
      } else {
        for (const auto& f : forms) out_ << f.scheme << ": " << print(f.combinator) << " : " << print(f.type) << "\n";
      }
      return kOk;
    }
    IclTerm t;
    bool general_pi = false;
    if (!o_.judgement.empty()) {
      Statement s = statement();
      if (o_.identify) s = {identify_lambda_pi(s.subject), identify_lambda_pi(s.type)};
      general_pi = contains_abs_under_g(s.subject) || contains_abs_under_g(s.type);
      t = translate_to_icl(s);
    } else {
      auto [ctx, m] = term_in_context();
      if (o_.identify) m = identify_lambda_pi(m);
      general_pi = contains_abs_under_g(m);
      t = translate_to_icl(m);
    }
    if (o_.abstract) t = bracket_abstract(t, alg);
    if (o_.json_out) {
      emit({{"icl", print(t)}, {"abstracted", o_.abstract}, {"general_pi", general_pi}});
    } else {
      out_ << print(t) << "\n";
    }
    return kOk;
  }

  // True when some product is not of the shape Πx:X.Y x.
  static bool contains_abs_under_g(const Term& m) {
    switch (m.kind()) {
      case TermKind::Pi: {
        const Term& b = m.body();
        bool eta = b.is_app() && b.arg().is_bound() && b.arg().index() == 0 && b.fn().loose_bound() == 0;
        return !eta || contains_abs_under_g(m.domain()) || contains_abs_under_g(b.fn());
      }
      case TermKind::Lam: return contains_abs_under_g(m.domain()) || contains_abs_under_g(m.body());
      case TermKind::App: return contains_abs_under_g(m.fn()) || contains_abs_under_g(m.arg());
      default: return false;
    }
  }

  int specs() {
    if (!o_.spec.empty()) {
      out_ << print_spec(spec());
      return kOk;
    }
    if (o_.json_out) {
      emit(builtin_names());
    } else {
      for (const auto& n : builtin_names()) out_ << n << "\n";
    }
    return kOk;
  }

 private:
  const Options& o_;
  std::ostream& out_;
  std::optional<Specification> spec_;
};

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Pure type systems and their Hilbert-style counterparts", "pts"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  auto common = [&](CLI::App* sub) {
    sub->add_option("--spec", o.spec, "builtin name or spec file");
    sub->add_option("--fuel", o.fuel, "reduction steps")->check(CLI::PositiveNumber);
    sub->add_option("--depth", o.depth, "search depth")->check(CLI::PositiveNumber);
    sub->add_flag("--json", o.json_out, "structured output");
  };
  auto judgement_opt = [&](CLI::App* sub) {
    sub->add_option("--judgement,-j", o.judgement, "judgement `x:A, ... |- M : B`");
  };
  auto term_opt = [&](CLI::App* sub) {
    sub->add_option("term", o.term, "term");
    sub->add_option("--context", o.context, "context `x:A, y:B`");
  };

  std::map<std::string, CLI::App*> subs;
  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    common(sub);
    subs[name] = sub;
    return sub;
  };

  auto* parse_cmd = add("parse", "parse and print a term or judgement");
  term_opt(parse_cmd);
  judgement_opt(parse_cmd);
  term_opt(add("normalize", "beta normal form"));
  judgement_opt(add("check", "check a judgement"));
  term_opt(add("infer", "infer the types of a term"));
  auto* hcheck_cmd = add("hcheck", "validate a Hilbert-style derivation");
  hcheck_cmd->add_option("derivation", o.file, "derivation JSON file")->required();
  hcheck_cmd->add_option("--mode", o.mode, "h or hplus");
  judgement_opt(add("hderive", "derive a statement in the Hilbert-style system"));
  auto* compile_cmd = add("compile", "translate a derivation into the Hilbert-style system");
  judgement_opt(compile_cmd);
  compile_cmd->add_option("--derivation", o.file, "derivation JSON file");
  add("axioms", "generate the axiom base")->add_option("--family", o.family, "Pi, I, K or S");
  add("classify", "classify a specification");
  auto* witness_cmd = add("witness", "witness family along a sort chain");
  witness_cmd->add_option("-k", o.k, "number of terms")->check(CLI::PositiveNumber);
  witness_cmd->add_option("--max-n", o.max_n, "longest chain")->check(CLI::PositiveNumber);
  auto* icl_cmd = add("icl", "translate into illative combinatory logic");
  term_opt(icl_cmd);
  judgement_opt(icl_cmd);
  icl_cmd->add_flag("--abstract", o.abstract, "bracket abstraction");
  icl_cmd->add_flag("--plain", o.plain, "abstraction without the eta rule");
  icl_cmd->add_flag("--identify", o.identify, "identify Pi with lam first");
  icl_cmd->add_flag("--forms", o.forms, "combinator forms of the base axioms");
  add("specs", "list builtin specifications");

  std::vector<const char*> args;
  for (const auto& a : argv) args.push_back(a.c_str());
  if (args.empty()) args.push_back("pts");
  try {
    app.parse(static_cast<int>(args.size()), args.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  Runner r(o, out);
  try {
    if (subs["parse"]->parsed()) return r.parse();
    if (subs["normalize"]->parsed()) return r.normalize();
    if (subs["check"]->parsed()) return r.check();
    if (subs["infer"]->parsed()) return r.infer();
    if (subs["hcheck"]->parsed()) return r.hcheck();
    if (subs["hderive"]->parsed()) return r.hderive();
    if (subs["compile"]->parsed()) return r.compile();
    if (subs["axioms"]->parsed()) return r.axioms();
    if (subs["classify"]->parsed()) return r.classify_cmd();
    if (subs["witness"]->parsed()) return r.witness();
    if (subs["icl"]->parsed()) return r.icl();
    if (subs["specs"]->parsed()) return r.specs();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const SpecError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NotSupersorted& e) {
    err << "error: " << e.what() << "\n";
    return kNegative;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUnknown;
  }
  return kUsage;
}

}  // namespace pts
