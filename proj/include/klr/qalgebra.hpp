#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "klr/cartan.hpp"
#include "klr/crystal.hpp"
#include "klr/linalg.hpp"
#include "klr/qarith.hpp"
#include "klr/report.hpp"

namespace klr {

struct SolveFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TriangularityFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonIntegralTransition : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Monomial f_{i1} ... f_{ir} of the free algebra.
using Word = IndexSequence;

struct SplitTerm {
  Word left, right;
  int power = 0;
};

/// Terms of the twisted coproduct of a word, all 2^len position assignments.
std::vector<SplitTerm> coproduct_split(const Datum& d, const Word& w);

/// (x, y)_K on words, a Laurent polynomial.
QLaurent pairingK_words(const Datum& d, const Word& x, const Word& y);
/// (x, y)_L on words.
QRat pairingL_words(const Datum& d, const Word& x, const Word& y);
/// (x, y)_L through the coproduct recursion, independent of the K route.
QRat pairingL_coproduct(const Datum& d, const Word& x, const Word& y);
/// prod_i (1 - q_i^2)^{-k_i}
QRat l_factor(const Datum& d, const RootVector& alpha);

/// Gram matrix of ( , )_K over Seq(alpha); parallel rows or serial loop.
Matrix<QRat> gram_K(const Datum& d, const std::vector<Word>& words, bool parallel);

struct WeightSpace {
  RootVector alpha;
  std::vector<Word> words;
  Matrix<QRat> gram;         // ( , )_K on words
  std::vector<int> pivots;   // indices into words
  Matrix<QRat> pivot_inv;    // inverse of the pivot block
  int dim() const { return static_cast<int>(pivots.size()); }
};

/// Element of U_q^-(g)_alpha in coordinates of the pivot words.
struct UqVector {
  RootVector alpha;
  std::vector<QRat> c;
  bool is_zero() const {
    for (const auto& x : c)
      if (!x.is_zero()) return false;
    return true;
  }
  friend bool operator==(const UqVector& a, const UqVector& b) { return a.alpha == b.alpha && a.c == b.c; }
};

UqVector add(const UqVector& a, const UqVector& b);
UqVector sub(const UqVector& a, const UqVector& b);
UqVector scale(const UqVector& a, const QRat& s);

class UqAlgebra {
 public:
  explicit UqAlgebra(Datum d, int cap = 6, bool parallel = true);

  const Datum& datum() const { return d_; }
  int cap() const { return cap_; }
  const WeightSpace& space(const RootVector& alpha) const;

  UqVector zero(const RootVector& alpha) const;
  UqVector one() const;
  UqVector from_word(const Word& w) const;
  UqVector from_words(const RootVector& alpha, const std::map<Word, QRat>& combo) const;
  /// Expansion over the pivot words.
  std::map<Word, QRat> words_of(const UqVector& v) const;
  /// (v, w)_K for every word w of the weight.
  std::vector<QRat> dual_coords(const UqVector& v) const;

  QRat pairingK(const UqVector& a, const UqVector& b) const;
  QRat pairingL(const UqVector& a, const UqVector& b) const;

  UqVector fmult(int j, const UqVector& v) const;
  /// f_j^(n) v
  UqVector fdiv(int j, int n, const UqVector& v) const;
  UqVector eprime(int i, const UqVector& v) const;
  /// e_i'^(n) v
  UqVector eprime_div(int i, int n, const UqVector& v) const;
  UqVector eprime2(int i, const UqVector& v) const;
  UqVector bar(const UqVector& v) const;
  /// max n with e_i'^n v != 0
  int ell(int i, const UqVector& v) const;

  std::vector<UqVector> kernel(int i, const RootVector& alpha) const;
  /// u_0, u_1, ... with v = sum f_i^(l) u_l and e_i' u_l = 0.
  std::vector<UqVector> string_decomp(int i, const UqVector& v) const;
  UqVector etilde(int i, const UqVector& v) const;
  UqVector ftilde(int i, const UqVector& v) const;
  UqVector Etilde(int i, const UqVector& v) const;
  UqVector Ftilde(int i, const UqVector& v) const;

  std::string to_string(const UqVector& v) const;
  std::string to_json(const UqVector& v) const;

 private:
  Datum d_;
  int cap_;
  bool parallel_;
  mutable std::mutex mutex_;
  mutable std::map<RootVector, std::unique_ptr<WeightSpace>> spaces_;
  mutable std::map<std::tuple<RootVector, int, int>, std::unique_ptr<Matrix<QRat>>> ops_;

  enum OpKind { kF = 0, kE = 1, kE2 = 2 };
  const Matrix<QRat>& op_matrix(OpKind kind, int i, const RootVector& alpha) const;
  UqVector apply(OpKind kind, int i, const UqVector& v) const;
  RootVector shifted(const RootVector& a, int i, int by) const;
};

std::string word_str(const Datum& d, const Word& w);

/// Lattice L(inf) and B(inf) up to a height.
struct BInfinity {
  CrystalGraph graph;
  std::vector<UqVector> rep;       // per node, a lattice vector in its class
  std::vector<RootVector> alpha;   // per node
  std::map<RootVector, std::vector<int>> nodes_at;
  std::map<RootVector, Matrix<QRat>> basis_inv;  // echelon lattice basis, inverted
  int depth = 0;
  Report report;
  explicit BInfinity(const Datum& d) : graph(d) {}
};

BInfinity lattice_and_binfty(const UqAlgebra& U, int depth);
/// Class modulo qL in the echelon basis of the weight; nullopt when outside L.
std::optional<std::vector<Rational>> lattice_class(const BInfinity& B, const UqVector& v);

struct GlobalBasis {
  std::map<int, UqVector> lower, upper;  // keyed by B(inf) node
  Report report;
};

/// Lower and upper global bases at every weight of height <= maxh.
GlobalBasis global_basis(const UqAlgebra& U, const BInfinity& B, int maxh);

struct LabeledBasis {
  std::map<RootVector, std::vector<UqVector>> vectors;
  std::map<RootVector, std::vector<std::string>> ids;
};

struct PerfectResult {
  CrystalGraph graph;
  Report report;
  explicit PerfectResult(const Datum& d) : graph(d) {}
};

PerfectResult perfect_check(const UqAlgebra& U, const LabeledBasis& basis, int depth);

Report verify_boson(const UqAlgebra& U, const RootVector& alpha);

}  // namespace klr
