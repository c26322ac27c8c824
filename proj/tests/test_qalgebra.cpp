#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "klr/qalgebra.hpp"

using namespace klr;

namespace {

Datum load(const std::string& name) { return load_datum(std::string(KLR_DATA_DIR) + "/" + name + ".json"); }

const QRat q = QRat::q();
const QRat one(1);

QRat sq(const QRat& a) { return a * a; }

}  // namespace

TEST_CASE("pairing anchors") {
  const Datum d = load("D1");
  CHECK(pairingK_words(d, {0, 1}, {1, 0}) == QLaurent::q(1));
  CHECK(pairingL_words(d, {0}, {0}) == one / (one - q * q));
  CHECK(pairingL_words(d, {1}, {1}) == one / (one - q * q));
  CHECK(pairingL_words(d, {0}, {1}).is_zero());
  CHECK(pairingL_words(d, {0, 1}, {1, 0}) == q / sq(one - q * q));
  CHECK(pairingL_words(d, {1, 1}, {1, 1}) == (one + q * q) / sq(one - q * q));
  // (f1 f1, f1 f1)_L = (1 + q^-2)/(1-q^2)^2 by the twisted coproduct by hand
  CHECK(pairingL_words(d, {0, 0}, {0, 0}) == (one + q.pow(-2)) / sq(one - q * q));
  CHECK(pairingL_words(d, {}, {}) == one);
  CHECK(l_factor(d, {1, 2}) == one / (one - q * q).pow(3));
}

TEST_CASE("coproduct split") {
  const Datum d = load("D1");
  const auto terms = coproduct_split(d, {0, 1});
  CHECK(terms.size() == 4);
  bool swapped = false;
  for (const auto& t : terms)
    if (t.left == Word{1} && t.right == Word{0}) {
      swapped = true;
      CHECK(t.power == 1);
    }
  CHECK(swapped);
}

TEST_CASE("property: K recursion and coproduct route agree, pairing symmetric") {
  const Datum d = load("D1");
  const Datum m = load("D1_a12m2");
  for (const Datum* dt : {&d, &m})
    for (int h = 1; h <= 4; ++h)
      for (const auto& a : roots_of_height(*dt, h)) {
        const auto ws = enumerate_seq(*dt, a, 6);
        for (const auto& x : ws)
          for (const auto& y : ws) {
            const QRat l = pairingL_words(*dt, x, y);
            CHECK(l == pairingL_coproduct(*dt, x, y));
            CHECK(l == pairingL_words(*dt, y, x));
          }
      }
}

TEST_CASE("gram_K serial and parallel agree") {
  const Datum d = load("D1");
  const auto ws = enumerate_seq(d, {2, 2}, 6);
  CHECK(gram_K(d, ws, true) == gram_K(d, ws, false));
}

TEST_CASE("weight space dimensions") {
  const Datum d = load("D1");
  UqAlgebra U(d);
  CHECK(U.space({1, 1}).dim() == 2);
  CHECK(U.space({2, 1}).dim() == 2);
  CHECK(U.space({0, 2}).dim() == 1);
  CHECK(U.space({3, 0}).dim() == 1);
  CHECK(U.space({1, 2}).dim() == 3);
  CHECK(U.space({0, 0}).dim() == 1);
  // the a_11 = 2 Serre relation kills f1 f1 f2 - [2] f1 f2 f1 + f2 f1 f1
  const UqVector s = U.from_words({2, 1}, {{{0, 0, 1}, one}, {{0, 1, 0}, -(q + q.pow(-1))}, {{1, 0, 0}, one}});
  CHECK(s.is_zero());
  CHECK_THROWS_AS(U.space({4, 4}), CapExceeded);
}

TEST_CASE("operators on U^-") {
  const Datum d = load("D1");
  UqAlgebra U(d);
  const UqVector f1 = U.from_word({0}), f2 = U.from_word({1});
  CHECK(U.fmult(1, f1) == U.from_word({1, 0}));
  CHECK(U.eprime(0, f1) == U.one());
  CHECK(U.eprime(1, f1).is_zero());
  // e'_i(f_j u) = q^{-(a_i|a_j)} f_j e'_i u
  CHECK(U.eprime(0, U.from_word({0, 1})) == f2);
  CHECK(U.eprime(0, U.from_word({1, 0})) == scale(f2, q));
  CHECK(U.fdiv(0, 2, U.one()) == scale(U.from_word({0, 0}), one / (q + q.pow(-1))));
  CHECK(U.fdiv(1, 2, U.one()) == U.from_word({1, 1}));
  CHECK(U.bar(scale(f1, q)) == scale(f1, q.pow(-1)));
  CHECK(U.ell(0, U.from_word({0, 0})) == 2);
  CHECK(U.ell(1, U.from_word({0, 0})) == 0);
  CHECK(U.to_string(U.from_word({0, 1})) == "f1*f2");
  CHECK(U.to_string(U.one()) == "1");
  CHECK(U.to_json(f1) == R"({"alpha":[1,0],"words":{"1":"1"}})");
}

TEST_CASE("kashiwara operators") {
  const Datum d = load("D1");
  UqAlgebra U(d);
  const UqVector f1 = U.from_word({0});
  CHECK(U.ftilde(0, U.one()) == f1);
  CHECK(U.ftilde(0, f1) == U.fdiv(0, 2, U.one()));
  CHECK(U.etilde(0, U.fdiv(0, 2, U.one())) == f1);
  CHECK(U.etilde(0, U.one()).is_zero());
  const auto parts = U.string_decomp(0, U.from_word({1, 0}));
  UqVector sum = U.zero({1, 1});
  for (std::size_t l = 0; l < parts.size(); ++l) {
    CHECK(U.eprime(0, parts[l]).is_zero());
    sum = add(sum, U.fdiv(0, static_cast<int>(l), parts[l]));
  }
  CHECK(sum == U.from_word({1, 0}));
}

TEST_CASE("property: e' is a twisted derivation and adjoint to f") {
  const Datum d = load("D1");
  UqAlgebra U(d);
  for (int h = 1; h <= 3; ++h)
    for (const auto& a : roots_of_height(d, h))
      for (const auto& w : enumerate_seq(d, a, 6))
        for (int i = 0; i < d.n(); ++i) {
          if (a[static_cast<std::size_t>(i)] == 0) continue;
          const UqVector x = U.from_word(w);
          for (const auto& v : enumerate_seq(d, a, 6)) {
            if (v.front() != i) continue;
            const Word rest(v.begin() + 1, v.end());
            CHECK(U.pairingL(U.eprime(i, x), U.from_word(rest)) == (one - q * q) * U.pairingL(x, U.from_word(v)));
          }
        }
}

TEST_CASE("B(inf) and lattice on D1") {
  const Datum d = load("D1");
  UqAlgebra U(d);
  BInfinity B = lattice_and_binfty(U, 3);
  CHECK_MESSAGE(B.report.pass(), B.report.to_text(true));
  CHECK(B.graph.size() == 14);
  for (int h = 0; h <= 3; ++h)
    for (const auto& a : roots_of_height(d, h)) CHECK(static_cast<int>(B.nodes_at[a].size()) == U.space(a).dim());
  CHECK(axiom_check(B.graph).pass());
  const int f1 = B.graph.find("f1");
  REQUIRE(f1 >= 0);
  CHECK(B.graph.find("f2,1") >= 0);
  CHECK(B.graph.et(0, f1) == 0);
  CHECK(B.graph.nodes[static_cast<std::size_t>(f1)].wt == WeightVector{-2, 1});
  // q times a lattice vector is zero mod qL
  const auto cls = lattice_class(B, scale(B.rep[static_cast<std::size_t>(f1)], q));
  REQUIRE(cls.has_value());
  for (const auto& c : *cls) CHECK(c == 0);
  CHECK_FALSE(lattice_class(B, scale(B.rep[static_cast<std::size_t>(f1)], q.pow(-1))).has_value());
}

TEST_CASE("global bases on D1") {
  const Datum d = load("D1");
  UqAlgebra U(d);
  BInfinity B = lattice_and_binfty(U, 3);
  GlobalBasis G = global_basis(U, B, 3);
  CHECK_MESSAGE(G.report.pass(), G.report.to_text(true));
  const int f11 = B.graph.find("f1,1");
  CHECK(G.lower.at(f11) == U.fdiv(0, 2, U.one()));
  for (const auto& [b, v] : G.lower) {
    CHECK(U.bar(v) == v);
    for (const auto& [c, w] : G.upper)
      if (B.alpha[static_cast<std::size_t>(c)] == B.alpha[static_cast<std::size_t>(b)])
        CHECK(U.pairingK(v, w) == QRat(b == c ? 1 : 0));
  }
}

TEST_CASE("perfect check on the upper global basis") {
  const Datum d = load("D1");
  UqAlgebra U(d);
  BInfinity B = lattice_and_binfty(U, 3);
  GlobalBasis G = global_basis(U, B, 3);
  LabeledBasis L;
  for (const auto& [b, v] : G.upper) {
    L.vectors[B.alpha[static_cast<std::size_t>(b)]].push_back(v);
    L.ids[B.alpha[static_cast<std::size_t>(b)]].push_back(B.graph.nodes[static_cast<std::size_t>(b)].id);
  }
  PerfectResult P = perfect_check(U, L, 3);
  CHECK_MESSAGE(P.report.pass(), P.report.to_text(true));
  CHECK(isomorphism_check(P.graph, 0, B.graph, 0).pass());

  LabeledBasis words;
  for (int h = 0; h <= 3; ++h)
    for (const auto& a : roots_of_height(d, h)) {
      const auto& ws = U.space(a);
      for (int k = 0; k < ws.dim(); ++k) {
        words.vectors[a].push_back(U.from_word(ws.words[static_cast<std::size_t>(ws.pivots[static_cast<std::size_t>(k)])]));
        words.ids[a].push_back(std::to_string(k));
      }
    }
  CHECK_FALSE(perfect_check(U, words, 3).report.pass());
}

TEST_CASE("boson relations") {
  for (const char* name : {"D1", "D3", "D1_a12m2"}) {
    const Datum d = load(name);
    UqAlgebra U(d);
    for (int h = 1; h <= 3; ++h)
      for (const auto& a : roots_of_height(d, h)) {
        const Report r = verify_boson(U, a);
        CHECK_MESSAGE(r.pass(), name << " " << r.to_text(true));
      }
  }
}

TEST_CASE("rank one chains") {
  for (const char* name : {"D0", "Dim", "D2"}) {
    const Datum d = load(name);
    UqAlgebra U(d);
    BInfinity B = lattice_and_binfty(U, 4);
    CHECK(B.report.pass());
    CHECK(B.graph.size() == 5);
    int b = 0;
    for (int k = 0; k < 4; ++k) {
      b = B.graph.ft(0, b);
      REQUIRE(b >= 0);
    }
  }
}
