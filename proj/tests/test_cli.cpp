#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <random>

#include "json.hpp"
#include "klr/expr.hpp"

using namespace klr;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(KLR_CLI) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), p)) out += buf.data();
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& name) { return std::string(KLR_DATA_DIR) + "/" + name + ".json"; }

Datum load(const std::string& name) { return load_datum(data(name)); }

}  // namespace

TEST_CASE("parser accepts the grammar") {
  CHECK_NOTHROW(parse_expr("tau(1)*tau(1)*e(1,2)"));
  CHECK_NOTHROW(parse_expr("x(1)^3*e(2,2) - q*e(2,2)"));
  CHECK_NOTHROW(parse_expr("-(q^-2 + 3/4)*x(2)*e(1,2)"));
  const Expr e = parse_expr("tau(1)*e(1,2) + x(2)");
  CHECK(e->kind == ExprNode::Kind::add);
  CHECK(e->kids[0]->kind == ExprNode::Kind::mul);
  CHECK(e->kids[0]->kids[1]->seq == std::vector<std::string>{"1", "2"});
  const Expr p = parse_expr("x(1)^3");
  CHECK(p->kind == ExprNode::Kind::pow);
  CHECK(p->value == 3);
}

TEST_CASE("parser errors carry positions") {
  try {
    parse_expr("tau(1)*e(1,2");
    FAIL("no error");
  } catch (const ParseError& err) {
    CHECK(err.position == 12);
  }
  CHECK_THROWS_AS(parse_expr("x(1)^-2"), ParseError);
  CHECK_THROWS_AS(parse_expr("tau(1) tau(2)"), ParseError);
  CHECK_THROWS_AS(parse_expr("y(1)"), ParseError);
  CHECK_THROWS_AS(parse_expr(""), ParseError);
}

TEST_CASE("evaluation") {
  const Datum d = load("D1");
  const KLRParams p = default_params(d);
  const Expr e = parse_expr("tau(1)*tau(1)*e(1,2)");
  REQUIRE(expr_weight(d, e).has_value());
  CHECK(*expr_weight(d, e) == RootVector{1, 1});
  KLRBlock blk(d, p, {1, 1});
  CHECK(to_string(blk, evaluate(blk, e)) == "(x(1)+x(2))*e(1,2)");
  CHECK_THROWS_AS(evaluate(blk, parse_expr("tau(0)")), InputError);
  CHECK_THROWS_AS(evaluate(blk, parse_expr("x(3)")), InputError);
  CHECK_THROWS_AS(evaluate(blk, parse_expr("e(1,1)")), InputError);
  CHECK(evaluate(blk, parse_expr("q^2*e(2,1) - q*q*e(2,1)")).is_zero());
}

TEST_CASE("property: printed normal forms re-parse to themselves") {
  const Datum d = load("D1");
  const KLRParams p = default_params(d);
  KLRBlock blk(d, p, {2, 1});
  std::mt19937 g(3);
  const char* atoms[] = {"tau(1)", "tau(2)", "x(1)", "x(2)", "x(3)", "q", "2"};
  std::uniform_int_distribution<int> pick(0, 6), seq(0, 2);
  const char* seqs[] = {"e(1,1,2)", "e(1,2,1)", "e(2,1,1)"};
  for (int n = 0; n < 40; ++n) {
    std::string text = seqs[seq(g)];
    for (int k = 0; k < 3; ++k) text = std::string(atoms[pick(g)]) + "*" + text;
    text += std::string(" + ") + atoms[pick(g)] + "*" + seqs[seq(g)];
    const Element v = evaluate(blk, parse_expr(text));
    const std::string printed = to_string(blk, v);
    CHECK_MESSAGE(evaluate(blk, parse_expr(printed)) == v, text << " -> " << printed);
  }
}

TEST_CASE("nf and deg") {
  Run r = run("nf " + data("D1") + " --alpha 1:1,2:1 --expr \"tau(1)*tau(1)*e(1,2)\"");
  CHECK(r.code == 0);
  CHECK(r.out == "(x(1)+x(2))*e(1,2)\n");
  r = run("nf " + data("D1") + " --expr \"tau(1)*tau(1)*e(1,2)\"");
  CHECK(r.code == 0);
  CHECK(r.out == "(x(1)+x(2))*e(1,2)\n");
  r = run("deg " + data("D1") + " --expr \"tau(1)*e(2,2)\"");
  CHECK(r.code == 0);
  CHECK(r.out == "2\n");
  r = run("deg " + data("D1") + " --expr \"e(2,2) + x(1)*e(2,2)\"");
  CHECK(r.code == 1);
  r = run("nf " + data("D1") + " --alpha 1:1,2:1 --expr \"tau(1)*e(1,2)\" --json");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j[0]["word"] == nlohmann::json::array({1}));
  CHECK(j[0]["seq"] == nlohmann::json::array({"1", "2"}));
}

TEST_CASE("input errors exit 2") {
  CHECK(run("nf " + data("D1") + " --alpha 1:1,2:1 --expr \"tau(0)*e(1,2)\"").code == 2);
  CHECK(run("nf " + data("D1") + " --alpha 1:1,2:1 --expr \"tau(1)*e(1,2\"").code == 2);
  CHECK(run("validate /nonexistent.json").code == 2);
  CHECK(run("relcheck " + data("D1") + " --bogus").code == 2);
  CHECK(run("blambda " + data("D1") + " --lambda 1:-1,2:0").code == 2);
  CHECK(run("qdim " + data("D1") + " --from 1 --to 2").code == 2);
}

TEST_CASE("verification commands") {
  Run r = run("relcheck " + data("D1") + " --alpha 1:2,2:1");
  CHECK(r.code == 0);
  CHECK(r.out.find("pass") != std::string::npos);
  r = run("validate " + data("D1"));
  CHECK(r.code == 0);
  r = run("qdim " + data("D1") + " --from 1,2 --to 2,1");
  CHECK(r.code == 0);
  CHECK(r.out.find("q/(1-2*q^2+q^4)") != std::string::npos);
  r = run("pair " + data("D1") + " --x \"1^(2)\" --y \"1^(2)\"");
  CHECK(r.code == 0);
  r = run("serre " + data("D1") + " --i 1 --j 2");
  CHECK(r.code == 0);
  r = run("isometry " + data("D1") + " --height 2 --order 10");
  CHECK(r.code == 0);
}

TEST_CASE("failed verification exits 1 with a report") {
  Run r = run("perfectcheck " + data("D1") + " --depth 2 --basis words");
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL") != std::string::npos);
}

TEST_CASE("crystal commands") {
  Run r = run("blambda " + data("D1") + " --lambda 1:0,2:0 --depth 3");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("1 ⊗ t ⊗ c", 0) == 0);
  r = run("blambda " + data("D1") + " --lambda 1:0,2:0 --depth 3 --json");
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["nodes"].size() == 1);
  r = run("blambda " + data("D0") + " --lambda 3 --depth 4 --json");
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["nodes"].size() == 4);
  r = run("binfty " + data("D1") + " --depth 2");
  CHECK(r.code == 0);
  r = run("globalbasis " + data("D1") + " --depth 2");
  CHECK(r.code == 0);
  CHECK(r.out.find("G(f1,1) = (q/(1+q^2))*f1*f1") != std::string::npos);
  r = run("perfectcheck " + data("D1") + " --depth 2");
  CHECK(r.code == 0);
  const std::string dot = (std::filesystem::temp_directory_path() / "klr_test_binfty.dot").string();
  r = run("binfty " + data("D0") + " --depth 3 --dot " + dot);
  CHECK(r.code == 0);
  FILE* f = std::fopen(dot.c_str(), "r");
  CHECK(f != nullptr);
  if (f) std::fclose(f);
}
