#include <gtest/gtest.h>

#include "pts/axioms.hpp"
#include "pts/icl.hpp"
#include "support.hpp"

using namespace pts;

namespace {

using Alg = AbstractionAlgorithm;

IclTerm S() { return IclTerm::comb(Combinator::S); }
IclTerm K() { return IclTerm::comb(Combinator::K); }
IclTerm I() { return IclTerm::comb(Combinator::I); }
IclTerm G() { return IclTerm::comb(Combinator::G); }
IclTerm Xi() { return IclTerm::comb(Combinator::Xi); }
IclTerm V(const std::string& x) { return IclTerm::var(x); }
IclTerm ap(IclTerm f, IclTerm a) { return IclTerm::app(std::move(f), std::move(a)); }

Term TV(const std::string& x) { return Term::var(x); }
Term TC(const std::string& c) { return Term::constant(c); }

const AxiomBase& star_base() {
  static const AxiomBase b = generate_axiom_base(builtin("lambda-star"));
  return b;
}

}  // namespace

TEST(IclPrint, Juxtaposition) {
  EXPECT_EQ(print(ap(K(), I())), "K I");
  EXPECT_EQ(print(ap(K(), ap(K(), K()))), "K (K K)");
  EXPECT_EQ(print(ap(ap(S(), ap(K(), K())), I())), "S (K K) I");
  EXPECT_EQ(print(IclTerm::abs("x", V("x"))), "(Abs x. x)");
}

TEST(Translate, Examples) {
  // x : c  ->  c x
  EXPECT_EQ(translate_to_icl(Statement{TV("x"), TC("c")}), ap(IclTerm::constant("c"), V("x")));
  // Pi x:X. Y x  ->  G X Y
  Term pi = Term::pi_over("x", TV("X"), Term::app(TV("Y"), TV("x")));
  EXPECT_EQ(translate_to_icl(pi), ap(ap(G(), V("X")), V("Y")));
  EXPECT_EQ(translate_to_icl(Term::app(TV("M"), TV("N"))), ap(V("M"), V("N")));
  EXPECT_EQ(translate_to_icl(TC("*")), IclTerm::constant("*"));
}

TEST(Translate, GeneralProductUsesAbs) {
  Term pi = Term::pi_over("x", TC("*"), TV("x"));
  IclTerm t = translate_to_icl(pi);
  EXPECT_EQ(t, ap(ap(G(), IclTerm::constant("*")), IclTerm::abs("x", V("x"))));
  // x free in the head of the body: no eta shortcut.
  Term dep = Term::pi_over("x", TC("*"), Term::app(TV("x"), TV("x")));
  EXPECT_TRUE(contains_abs(translate_to_icl(dep)));
  Term lam = Term::lam_over("x", TC("*"), TV("x"));
  EXPECT_EQ(translate_to_icl(lam), IclTerm::abs("x", V("x")));
}

TEST(Translate, Homomorphism) {
  ptest::TermGen gen(21, {"*"}, {"a", "b"});
  for (int i = 0; i < 500; ++i) {
    Term m = gen(3), n = gen(3);
    EXPECT_EQ(translate_to_icl(Term::app(m, n)), ap(translate_to_icl(m), translate_to_icl(n))) << print(m);
  }
}

TEST(Bracket, Examples) {
  EXPECT_EQ(bracket_abstract(IclTerm::abs("x", V("x"))), I());
  EXPECT_EQ(bracket_abstract(IclTerm::abs("x", IclTerm::abs("y", V("y")))), ap(K(), I()));
  EXPECT_EQ(bracket_abstract(IclTerm::abs("x", IclTerm::abs("y", V("x")))), K());
  EXPECT_EQ(bracket_abstract(IclTerm::abs("x", IclTerm::abs("y", V("x"))), Alg::Plain),
            ap(ap(S(), ap(K(), K())), I()));
  // Eta shortcut.
  EXPECT_EQ(abstract_variable("x", ap(V("f"), V("x"))), V("f"));
  EXPECT_EQ(abstract_variable("x", ap(V("f"), V("x")), Alg::Plain), ap(ap(S(), ap(K(), V("f"))), I()));
  EXPECT_EQ(abstract_variable("x", V("y")), ap(K(), V("y")));
}

TEST(Bracket, OutputIsAbsFree) {
  ptest::IclGen gen(31, {"p", "q"});
  for (int i = 0; i < 500; ++i) {
    IclTerm t = gen.with_abs(6, {});
    for (Alg alg : {Alg::EtaOptimized, Alg::Plain}) {
      IclTerm r = bracket_abstract(t, alg);
      EXPECT_FALSE(contains_abs(r)) << print(t);
      EXPECT_EQ(free_vars(r), free_vars(t)) << print(t);
    }
  }
}

TEST(Bracket, WeakReductionSoundness) {
  // ([x].B) v and B[x:=v] have the same weak normal form.
  ptest::IclGen gen(41, {"x", "y", "z"});
  int compared = 0;
  for (int i = 0; i < 20000 && compared < 500; ++i) {
    IclTerm b = gen(5);
    if (!free_vars(b).count("x")) continue;
    auto expected = weak_normalize(substitute(b, "x", V("v")), 2000);
    if (!expected) continue;
    for (Alg alg : {Alg::EtaOptimized, Alg::Plain}) {
      IclTerm lhs = ap(bracket_abstract(IclTerm::abs("x", b), alg), V("v"));
      auto got = weak_normalize(lhs, 20000);
      ASSERT_TRUE(got) << print(b);
      EXPECT_EQ(*got, *expected) << print(b);
    }
    ++compared;
  }
  EXPECT_EQ(compared, 500);
}

TEST(Bracket, NestedAbstractionSoundness) {
  ptest::IclGen gen(43, {"x", "y"});
  int compared = 0;
  for (int i = 0; i < 20000 && compared < 200; ++i) {
    IclTerm b = gen(4);
    auto expected = weak_normalize(substitute(substitute(b, "x", V("v")), "y", V("w")), 2000);
    if (!expected) continue;
    IclTerm t = IclTerm::abs("x", IclTerm::abs("y", b));
    auto got = weak_normalize(ap(ap(bracket_abstract(t), V("v")), V("w")), 20000);
    ASSERT_TRUE(got) << print(b);
    EXPECT_EQ(*got, *expected) << print(b);
    ++compared;
  }
  EXPECT_EQ(compared, 200);
}

TEST(WeakReduction, Rules) {
  IclTerm x = V("x"), y = V("y"), z = V("z");
  EXPECT_EQ(weak_step(ap(I(), x)), x);
  EXPECT_EQ(weak_step(ap(ap(K(), x), y)), x);
  EXPECT_EQ(weak_step(ap(ap(ap(S(), x), y), z)), ap(ap(x, z), ap(y, z)));
  EXPECT_EQ(weak_step(ap(ap(ap(G(), x), y), z)), ap(ap(Xi(), x), ap(ap(S(), y), z)));
  EXPECT_EQ(weak_step(ap(K(), x)), std::nullopt);
  EXPECT_THROW(weak_step(IclTerm::abs("x", x)), std::invalid_argument);
  IclTerm omega = ap(ap(ap(S(), I()), I()), ap(ap(S(), I()), I()));
  EXPECT_EQ(weak_normalize(omega, 100), std::nullopt);
}

TEST(IdentifyLambdaPi, Examples) {
  Specification star = builtin("lambda-star");
  EXPECT_EQ(identify_lambda_pi(ptest::term(star, "Pi x:*.Pi y:x.x")), ptest::term(star, "lam x:*.lam y:x.x"));
  Term no_pi = ptest::term(star, "(lam x:*.x) *");
  EXPECT_EQ(identify_lambda_pi(no_pi), no_pi);
}

TEST(IdentifyLambdaPi, Idempotent) {
  ptest::TermGen gen(51, {"*"}, {"a"});
  for (int i = 0; i < 500; ++i) {
    Term m = gen(4);
    Term once = identify_lambda_pi(m);
    EXPECT_EQ(identify_lambda_pi(once), once) << print(m);
    EXPECT_EQ(identify_lambda_pi(once).size(), m.size());
  }
}

TEST(CombinatorForms, MatchTheStandardCombinators) {
  auto forms = combinator_axiom_forms(star_base());
  std::map<std::string, CombinatorForm> by;
  for (const auto& f : forms) by.emplace(f.scheme, f);
  ASSERT_EQ(by.size(), 4u);
  EXPECT_EQ(print(by.at("I1").combinator), "K I");
  EXPECT_EQ(print(by.at("K1").combinator), "K (K K)");
  EXPECT_EQ(print(by.at("S1").combinator), "K (K (K S))");
  EXPECT_EQ(print(by.at("Pi1").combinator), "G");
  EXPECT_EQ(by.at("I1").type, star_base().find("I1")->type);
  EXPECT_EQ(by.at("Pi1").type, star_base().find("Pi1")->type);
}

TEST(CombinatorForms, IdentifiedIdentityType) {
  // Pi x:s1.Pi y:x.x with Pi read as lam, erased and abstracted.
  Term ty = identify_lambda_pi(star_base().find("I1")->type);
  IclTerm erased = translate_to_icl(ty);
  EXPECT_EQ(bracket_abstract(erased, Alg::EtaOptimized), K());
  EXPECT_EQ(bracket_abstract(erased, Alg::Plain), ap(ap(S(), ap(K(), K())), I()));
}
