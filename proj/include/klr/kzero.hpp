#pragma once

#include <map>
#include <string>
#include <utility>

#include "klr/cartan.hpp"
#include "klr/qarith.hpp"
#include "klr/report.hpp"

namespace klr {

struct DividedPowerUnsupported : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A-linear combination of symbols [P_i], i a divided-power sequence.
struct K0Elem {
  RootVector alpha;
  std::map<DividedSequence, QLaurent> terms;
  bool is_zero() const { return terms.empty(); }
  friend bool operator==(const K0Elem& a, const K0Elem& b) { return a.alpha == b.alpha && a.terms == b.terms; }
};

/// Formal sum of [P_a] (x) [P_b].
struct K0Tensor {
  std::map<std::pair<DividedSequence, DividedSequence>, QLaurent> terms;
  friend bool operator==(const K0Tensor& a, const K0Tensor& b) { return a.terms == b.terms; }
};

K0Elem k0_unit(const Datum& d);
K0Elem k0_symbol(const Datum& d, const DividedSequence& s, const QLaurent& c = QLaurent(Rational(1)));
K0Elem k0_word(const Datum& d, const IndexSequence& w);
K0Elem k0_add(const K0Elem& a, const K0Elem& b);
K0Elem k0_scale(const K0Elem& a, const QLaurent& c);
K0Elem k0_mult(const K0Elem& a, const K0Elem& b);
K0Elem k0_bar(const K0Elem& a);

/// Restriction; multiplicity-one symbols only.
K0Tensor k0_comult(const Datum& d, const K0Elem& a);
/// q^{-(beta_2|gamma_1)} twisted product on K0 (x) K0.
K0Tensor k0_tensor_mult(const Datum& d, const K0Tensor& a, const K0Tensor& b);

/// Phi(f_{i1}^(d1) ... f_{ir}^(dr)); imaginary blocks are expanded to plain sequences.
K0Elem phi(const Datum& d, const DividedSequence& monomial);
/// Grading shift carried by P_i: sum over real blocks of d(d-1)(alpha_i|alpha_i)/4.
int k0_shift(const Datum& d, const DividedSequence& s);

/// ([P_a], [P_b]), zero across weights; divided blocks through the expansion [P_(i,..,i)] = [d]_i! [P_(i^(d))].
QRat k0_pair(const Datum& d, const K0Elem& a, const K0Elem& b);
QRat k0_pair_symbols(const Datum& d, const DividedSequence& a, const DividedSequence& b);
/// qdim(e_a R e_b) with the P shifts, counted degree by degree up to the given order.
std::map<int, Rational> k0_pair_series(const Datum& d, const DividedSequence& a, const DividedSequence& b, int order);
/// Pairing on K0 (x) K0, factor by factor.
QRat k0_pair_tensor(const Datum& d, const K0Tensor& a, const K0Tensor& b);

Report isometry_check(const Datum& d, const RootVector& alpha, int order, bool divided = true);
Report serre_k0_check(const Datum& d, int i, int j);
Report bialgebra_check(const Datum& d, const RootVector& alpha, const RootVector& beta);

std::string seqd_str(const Datum& d, const DividedSequence& s);
std::string to_string(const Datum& d, const K0Elem& a);
std::string to_string(const Datum& d, const K0Tensor& a);
std::string to_json(const Datum& d, const K0Elem& a);

}  // namespace klr
