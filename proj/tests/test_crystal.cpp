#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"
#include "klr/crystal.hpp"
#include "klr/qalgebra.hpp"

using namespace klr;

namespace {

Datum load(const std::string& name) { return load_datum(std::string(KLR_DATA_DIR) + "/" + name + ".json"); }

// Two-node crystal b0 -> b1 of a single real index.
CrystalGraph two_chain(const Datum& d) {
  CrystalGraph g(d);
  CrystalNode a{"b0", {1}, {ExtInt(0)}, {ExtInt(1)}, false, 0};
  CrystalNode b{"b1", {-1}, {ExtInt(1)}, {ExtInt(0)}, false, 1};
  g.add_node(a);
  g.add_node(b);
  g.f[0] = {1, kZero};
  g.e[0] = {kZero, 0};
  return g;
}

}  // namespace

TEST_CASE("extended integers") {
  const ExtInt m = ExtInt::neg_inf();
  CHECK(m < ExtInt(-1000));
  CHECK(m + 5 == m);
  CHECK(max(m, ExtInt(3)) == ExtInt(3));
  CHECK(m.to_string() == "-inf");
  CHECK(ExtInt(2) >= ExtInt(2));
  CHECK(ExtInt(2) != m);
}

TEST_CASE("elementary crystals") {
  const Datum d = load("D1");
  const CrystalGraph t = elementary_T(d, {2, 1});
  REQUIRE(t.size() == 1);
  CHECK(t.nodes[0].wt == WeightVector{2, 1});
  CHECK(t.nodes[0].eps[0].is_neg_inf());
  CHECK(t.ft(0, 0) == kZero);
  CHECK(axiom_check(t).pass());
  const CrystalGraph c = elementary_C(d);
  CHECK(c.nodes[0].eps[1] == ExtInt(0));
  CHECK(c.nodes[0].phi[0] == ExtInt(0));
  CHECK(axiom_check(c).pass());
}

TEST_CASE("tensor rule on two-node chains") {
  const Datum d = load("D0");
  const CrystalGraph b = two_chain(d);
  CHECK(axiom_check(b).pass());
  const CrystalGraph g = tensor(b, b);
  CHECK(g.size() == 4);
  CHECK(axiom_check(g).pass());
  const int b00 = g.find("b0 ⊗ b0"), b01 = g.find("b0 ⊗ b1"), b10 = g.find("b1 ⊗ b0"), b11 = g.find("b1 ⊗ b1");
  REQUIRE(b00 >= 0);
  // phi(b0) = 1 > eps(b0) = 0 acts on the left factor
  CHECK(g.ft(0, b00) == b10);
  CHECK(g.ft(0, b10) == b11);
  CHECK(g.ft(0, b01) == kZero);
  CHECK(g.et(0, b01) == kZero);
  CHECK(g.nodes[static_cast<std::size_t>(b01)].wt == WeightVector{0});
  CHECK(g.nodes[static_cast<std::size_t>(b00)].phi[0] == ExtInt(2));
  const CrystalGraph comp = connected_component(g, b00, 5);
  CHECK(comp.size() == 3);
}

TEST_CASE("axiom_check catches broken decorations") {
  const Datum d = load("D0");
  CrystalGraph b = two_chain(d);
  b.nodes[1].phi[0] = ExtInt(3);
  CHECK_FALSE(axiom_check(b).pass());
  CrystalGraph c = two_chain(d);
  c.e[0][1] = kZero;
  CHECK_FALSE(axiom_check(c).pass());
}

TEST_CASE("morphisms and isomorphisms") {
  const Datum d = load("D0");
  const CrystalGraph b = two_chain(d);
  CHECK(morphism_check({0, 1}, b, b, true).pass());
  CHECK_FALSE(morphism_check({1, 0}, b, b, false).pass());
  std::vector<int> map;
  CHECK(isomorphism_check(b, 0, b, 0, &map).pass());
  CHECK(map == std::vector<int>{0, 1});
  CrystalGraph other = b;
  other.nodes[1].eps[0] = ExtInt(2);
  CHECK_FALSE(isomorphism_check(b, 0, other, 0).pass());
}

TEST_CASE("B(lambda) recognition") {
  {
    const Datum d = load("D0");
    UqAlgebra U(d);
    BInfinity B = lattice_and_binfty(U, 5);
    BLambda L = blambda(B.graph, {3}, 5);
    CHECK(L.graph.size() == 4);
    CHECK(axiom_check(L.graph).pass());
    CHECK(morphism_check(L.psi, L.graph, L.tensor, true).pass());
    CHECK_THROWS_AS(blambda(B.graph, {-1}, 5), NotDominant);
  }
  {
    const Datum d = load("Dim");
    UqAlgebra U(d);
    BInfinity B = lattice_and_binfty(U, 5);
    CHECK(blambda(B.graph, {0}, 5).graph.size() == 1);
    BLambda L = blambda(B.graph, {1}, 5);
    CHECK(L.graph.size() == 6);
    for (const auto& n : L.graph.nodes) CHECK(n.phi[0] == ExtInt(1 + 2 * n.depth));
  }
  {
    const Datum d = load("D1");
    UqAlgebra U(d);
    BInfinity B = lattice_and_binfty(U, 3);
    BLambda L = blambda(B.graph, {1, 0}, 3);
    CHECK(axiom_check(L.graph).pass());
    CHECK(morphism_check(L.psi, L.graph, L.tensor, true).pass());
    CHECK(blambda(B.graph, {0, 0}, 3).graph.size() == 1);
  }
}

TEST_CASE("export formats") {
  const Datum d = load("D0");
  const CrystalGraph b = two_chain(d);
  const std::string dot = b.to_dot();
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("b1") != std::string::npos);
  const auto j = nlohmann::json::parse(b.to_json());
  CHECK(j["nodes"].size() == 2);
  CHECK(j["edges"].size() == 1);
  CHECK(j["edges"][0]["from"] == "b0");
}
