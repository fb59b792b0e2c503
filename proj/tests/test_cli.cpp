#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pts/cli.hpp"

namespace {

struct Out {
  int code;
  std::string out;
  std::string err;
};

Out call(std::vector<std::string> args) {
  args.insert(args.begin(), "pts");
  std::ostringstream out, err;
  int code = pts::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST(Cli, CheckYes) {
  auto r = call({"check", "--spec", "lambda-star", "--judgement", "|- Pi x:*.x : *"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "yes\n");
}

TEST(Cli, CheckNo) {
  auto r = call({"check", "--spec", "lambda-arrow", "-j", "|- Pi x:*.x : *"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out.substr(0, 2), "no");
}

TEST(Cli, CheckJsonCarriesDerivation) {
  auto r = call({"check", "--spec", "lambda-star", "-j", "|- lam x:*.x : Pi x:*.*", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("verdict"), "yes");
  EXPECT_TRUE(j.contains("derivation"));
}

TEST(Cli, ParseAndNormalize) {
  auto p = call({"parse", "--spec", "lambda-star", "Pi x:*.x"});
  EXPECT_EQ(p.code, 0) << p.err;
  EXPECT_EQ(p.out, "Pi x:*.x\n");
  auto n = call({"normalize", "--spec", "lambda-star", "(lam x:*.x) *"});
  EXPECT_EQ(n.code, 0) << n.err;
  EXPECT_EQ(n.out, "*\n");
}

TEST(Cli, NormalizeOutOfFuel) {
  auto r = call({"normalize", "--spec", "lambda-star", "--fuel", "20",
                 "(lam x:(Pi y:*.*).x x) (lam x:(Pi y:*.*).x x)"});
  EXPECT_EQ(r.code, 3);
}

TEST(Cli, Infer) {
  auto r = call({"infer", "--spec", "lambda-star", "--json", "--context", "a:*", "a"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("types"), nlohmann::json::array({"*"}));
}

TEST(Cli, ClassifyLambdaTwo) {
  auto r = call({"classify", "--spec", "lambda-2"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("NoEquivalentHPTS"), std::string::npos);
  auto j = nlohmann::json::parse(call({"classify", "--spec", "lambda-2", "--json"}).out);
  EXPECT_EQ(j.at("verdict"), "NoEquivalentHPTS");
  EXPECT_TRUE(j.contains("chain"));
}

TEST(Cli, AxiomsPiFamily) {
  auto r = call({"axioms", "--spec", "lambda-star", "--family", "Pi"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out), 11u);
  EXPECT_EQ(r.out.substr(0, 4), "Pi1:");
}

TEST(Cli, AxiomsOnNonSupersortedSpec) {
  auto r = call({"axioms", "--spec", "lambda-2"});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, Witness) {
  auto r = call({"witness", "--spec", "lambda-star", "-k", "3"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "Pi x:*.*\nPi x1:*.Pi x2:*.*\nPi x1:*.Pi x2:*.Pi x3:*.*\n");
  EXPECT_EQ(call({"witness", "--spec", "lambda-arrow"}).code, 1);
}

TEST(Cli, Icl) {
  auto r = call({"icl", "--spec", "lambda-star", "--abstract", "lam x:*.lam y:x.y"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "K I\n");
  auto f = call({"icl", "--spec", "lambda-star", "--forms"});
  EXPECT_NE(f.out.find("S1: K (K (K S))"), std::string::npos);
  auto g = nlohmann::json::parse(call({"icl", "--spec", "lambda-star", "--json", "Pi x:*.x"}).out);
  EXPECT_EQ(g.at("general_pi"), true);
}

TEST(Cli, HDeriveAndCompile) {
  auto h = call({"hderive", "--spec", "lambda-star", "-j", "|- Pi x:*.x : *"});
  EXPECT_EQ(h.code, 0) << h.err;
  auto c = call({"compile", "--spec", "lambda-star", "-j", "|- lam x:*.x : Pi x:*.*", "--json"});
  ASSERT_EQ(c.code, 0) << c.err;
  auto path = temp_file("pts_cli_compiled.json", c.out);
  auto v = call({"hcheck", "--spec", "lambda-star", path.string()});
  EXPECT_EQ(v.code, 0) << v.out << v.err;
  std::filesystem::remove(path);
}

TEST(Cli, HCheckRejectsPtsDerivation) {
  auto c = call({"check", "--spec", "lambda-star", "-j", "|- Pi x:*.x : *", "--json"});
  ASSERT_EQ(c.code, 0);
  auto path = temp_file("pts_cli_plain.json", nlohmann::json::parse(c.out).at("derivation").dump());
  EXPECT_EQ(call({"hcheck", "--spec", "lambda-star", path.string()}).code, 1);
  std::filesystem::remove(path);
}

TEST(Cli, SpecFile) {
  auto path = temp_file("pts_cli_l2.spec", "name: l2\nsorts: *, box\nconstants: *, box\naxioms:\n  * : box\nrules:\n  (*, *)\n  (box, *)\n");
  auto r = call({"check", "--spec", path.string(), "-j", "|- Pi x:*.x : *"});
  EXPECT_EQ(r.code, 0) << r.err;
  std::filesystem::remove(path);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"frob"}).code, 2);
  EXPECT_EQ(call({"check", "--spec", "nope", "-j", "|- * : *"}).code, 2);
  EXPECT_EQ(call({"check", "--spec", "lambda-star", "-j", "|- x : *"}).code, 2);
  EXPECT_EQ(call({"check", "--spec", "lambda-star", "--fuel", "0", "-j", "|- * : *"}).code, 2);
  auto r = call({"check", "--spec", "lambda-star", "-j", "|- (Pi x:*. x : *"});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, Specs) {
  auto r = call({"specs"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out), 17u);
}

TEST(Cli, Deterministic) {
  std::vector<std::vector<std::string>> cmds = {
      {"classify", "--spec", "lambda-coq", "--json"},
      {"compile", "--spec", "lambda-star", "-j", "|- Pi x:*.Pi y:x.x : *", "--json"},
      {"axioms", "--spec", "lambda-star", "--json"},
      {"infer", "--spec", "lambda-star", "lam x:*.lam y:x.y", "--json"},
  };
  for (const auto& c : cmds) {
    auto a = call(c), b = call(c);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out) << c[0];
    EXPECT_NO_THROW((void)nlohmann::json::parse(a.out)) << c[0];
  }
}
