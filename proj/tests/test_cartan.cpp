#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "klr/cartan.hpp"

using namespace klr;

namespace {

Datum D1() { return load_datum(std::string(KLR_DATA_DIR) + "/D1.json"); }

Datum make(std::vector<std::vector<int>> A, std::vector<int> s) {
  Datum d;
  for (std::size_t i = 0; i < A.size(); ++i) d.indices.push_back(std::to_string(i + 1));
  d.A = std::move(A);
  d.s = std::move(s);
  return d;
}

// sum_{k=0}^{n-1} q^{e(n-1-2k)}
QRat symmetric_sum(int n, int e) {
  QRat r;
  for (int k = 0; k < n; ++k) r += QRat::q(e * (n - 1 - 2 * k));
  return r;
}

long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

}  // namespace

TEST_CASE("validate") {
  const Datum d = D1();
  CHECK(validate(d).empty());
  CHECK(d.real_set() == std::vector<int>{0});
  CHECK(d.imaginary_set() == std::vector<int>{1});

  const auto v1 = validate(make({{2, -1}, {0, -2}}, {1, 1}));
  CHECK(std::any_of(v1.begin(), v1.end(), [](const Violation& v) { return v.message == "a_12=0 xor a_21=0" && v.cell == "a_12"; }));

  const auto v2 = validate(make({{3}}, {1}));
  REQUIRE(v2.size() == 1);
  CHECK(v2[0].message.find("a_11 not 2 nor even") == 0);

  CHECK_FALSE(validate(make({{2, -1}, {-2, 2}}, {1, 1})).empty());
  CHECK(validate(make({{2, -1}, {-2, 2}}, {2, 1})).empty());
  CHECK_FALSE(validate(make({{2, 1}, {1, 2}}, {1, 1})).empty());
  CHECK_FALSE(validate(make({{-1}}, {1})).empty());
  CHECK_THROWS_AS(require_valid(make({{3}}, {1})), InputError);
}

TEST_CASE("datum json") {
  const Datum d = datum_from_json(R"({"indices":["a","b"],"A":[[2,-1],[-1,-2]],"s":[1,1]})");
  CHECK(d.index_of("b") == 1);
  CHECK_THROWS_AS(d.index_of("c"), InputError);
  const Datum e = datum_from_json(datum_to_json(d));
  CHECK(e.A == d.A);
  CHECK(e.indices == d.indices);
  CHECK_THROWS_AS(datum_from_json("{"), InputError);
  CHECK_THROWS_AS(datum_from_json(R"({"indices":["a"]})"), InputError);
  const Datum p = load_datum(std::string(KLR_DATA_DIR) + "/D2.json");
  REQUIRE(p.P.count(0));
  CHECK(p.P.at(0).at({1, 0}) == 1);
  CHECK(p.P.at(0).at({0, 1}) == 1);
}

TEST_CASE("sym_form") {
  const Datum d = D1();
  CHECK(sym_form(d, 0, 0) == 2);
  CHECK(sym_form(d, 0, 1) == -1);
  CHECK(sym_form(d, 1, 1) == -2);
  CHECK(sym_form(d, RootVector{1, 1}, RootVector{1, 1}) == 2 - 1 - 1 - 2);
  const Datum e = make({{2, -1}, {-2, 2}}, {2, 1});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(sym_form(e, i, j) == sym_form(e, j, i));
}

TEST_CASE("quantum integers") {
  const Datum d = D1();
  CHECK(qint(d, 2, 0, IndexKind::real) == QRat::q() + QRat::q(-1));
  CHECK(qint(d, 2, 1, IndexKind::imaginary) == QRat::q() + QRat::q(-1));
  CHECK(qint(d, 0, 0, IndexKind::real).is_zero());
  const Datum z = make({{0}}, {1});
  CHECK(qint(z, 3, 0, IndexKind::imaginary) == QRat(3));
  CHECK(qfactorial(z, 3, 0, IndexKind::imaginary) == QRat(6));
  CHECK_THROWS_AS(qint(d, 2, 0, IndexKind::imaginary), InputError);
  CHECK_THROWS_AS(qint(d, 2, 1, IndexKind::real), InputError);
}

TEST_CASE("property: quantum integers match the symmetric sums and evaluate to n at q=1") {
  const Datum d = make({{2, -1, 0}, {-1, -4, -1}, {0, -1, 0}}, {1, 1, 1});
  const Datum s2 = make({{2}}, {2});
  for (int n = 0; n <= 6; ++n) {
    CHECK(qint(d, n, 0, IndexKind::real) == symmetric_sum(n, 1));
    CHECK(qint(s2, n, 0, IndexKind::real) == symmetric_sum(n, 2));
    CHECK(qint(d, n, 1, IndexKind::imaginary) == symmetric_sum(n, 2));
    CHECK(qint(d, n, 0, IndexKind::real).eval(1) == n);
    CHECK(qint(d, n, 1, IndexKind::imaginary).eval(1) == n);
    CHECK(qint(d, n, 2, IndexKind::imaginary).eval(1) == n);
    CHECK(qfactorial(d, n, 0, IndexKind::real).eval(1) == factorial(n));
  }
}

TEST_CASE("property: binomials are Laurent polynomials satisfying Pascal") {
  const Datum d = make({{2, -1}, {-1, -2}}, {1, 1});
  for (int m = 0; m <= 6; ++m)
    for (int n = 0; n <= m; ++n)
      for (int i = 0; i < 2; ++i) {
        const IndexKind k = d.kind(i);
        const QRat b = qbinomial(d, m, n, i, k);
        CHECK(b.is_laurent());
        CHECK(b.den().term_count() == 1);
        CHECK(b == qfactorial(d, m, i, k) / (qfactorial(d, n, i, k) * qfactorial(d, m - n, i, k)));
        if (k == IndexKind::real && n >= 1 && n < m) {
          // [m n] = q^{-n}[m-1 n] + q^{m-n}[m-1 n-1]
          CHECK(b == QRat::q(-n) * qbinomial(d, m - 1, n, i, k) + QRat::q(m - n) * qbinomial(d, m - 1, n - 1, i, k));
        }
      }
}

TEST_CASE("enumerate_seq") {
  const Datum d = D1();
  CHECK(enumerate_seq(d, {1, 1}, 6) == std::vector<IndexSequence>{{0, 1}, {1, 0}});
  CHECK(enumerate_seq(d, {2, 0}, 6) == std::vector<IndexSequence>{{0, 0}});
  CHECK(enumerate_seq(d, {2, 1}, 6).size() == 3);
  CHECK(enumerate_seq(d, {0, 0}, 6) == std::vector<IndexSequence>{{}});
  CHECK_THROWS_AS(enumerate_seq(d, {4, 4}, 6), CapExceeded);
  CHECK(concat({0, 1}, {1}) == IndexSequence{0, 1, 1});
}

TEST_CASE("property: |Seq(alpha)| is the multinomial and the list is sorted and duplicate free") {
  const Datum d = make({{2, -1, 0}, {-1, -2, -1}, {0, -1, 2}}, {1, 1, 1});
  for (int h = 0; h <= 5; ++h)
    for (const auto& a : roots_of_height(d, h)) {
      const auto seqs = enumerate_seq(d, a, 6);
      long expect = factorial(h);
      for (int k : a) expect /= factorial(k);
      CHECK(static_cast<long>(seqs.size()) == expect);
      CHECK(std::is_sorted(seqs.begin(), seqs.end()));
      CHECK(std::adjacent_find(seqs.begin(), seqs.end()) == seqs.end());
      for (const auto& s : seqs) CHECK(weight_of(d, s) == a);
    }
}

TEST_CASE("property: Seqd(alpha) contains Seq(alpha) and has the right weights") {
  const Datum d = D1();
  for (int h = 1; h <= 4; ++h)
    for (const auto& a : roots_of_height(d, h)) {
      const auto sd = enumerate_seqd(d, a, 6);
      std::set<DividedSequence> all(sd.begin(), sd.end());
      CHECK(all.size() == sd.size());
      for (const auto& s : sd) {
        CHECK(weight_of(d, s) == a);
        for (const auto& [i, m] : s) {
          CHECK(m >= 1);
          if (!d.is_real(i)) CHECK(m == 1);
        }
      }
      for (const auto& s : enumerate_seq(d, a, 6)) {
        DividedSequence plain;
        for (int i : s) plain.emplace_back(i, 1);
        CHECK(all.count(plain) == 1);
      }
    }
}

TEST_CASE("weight_update") {
  const Datum d = D1();
  CHECK(weight_update(d, {0, 1}, {0, 1}) == WeightVector{1, 3});
  CHECK(weight_update(d, {0, 1}, {0, 0}) == WeightVector{0, 1});
  CHECK(weight_update(d, {3, 0}, {1, 0}) == WeightVector{1, 1});
}

TEST_CASE("roots and parsing") {
  const Datum d = D1();
  CHECK(parse_root(d, "1:2,2:1") == RootVector{2, 1});
  CHECK(root_str(d, {2, 1}) == "1:2,2:1");
  CHECK(parse_weight(d, "1:-1") == WeightVector{-1, 0});
  CHECK_THROWS_AS(parse_root(d, "1:-1"), InputError);
  CHECK_THROWS_AS(parse_root(d, "3:1"), InputError);
  CHECK_THROWS_AS(parse_root(d, "2"), InputError);
  CHECK(roots_of_height(d, 2).size() == 3);
  CHECK(height({2, 1}) == 3);
}
