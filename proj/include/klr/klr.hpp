#pragma once

#include <compare>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "klr/cartan.hpp"
#include "klr/mpoly.hpp"
#include "klr/qarith.hpp"
#include "klr/report.hpp"

namespace klr {

struct NotInImage : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotHomogeneous : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonPolynomial : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotIdempotent : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct KLRParams {
  std::map<int, BiPoly> P;
  /// Every ordered pair i != j; Q_{j,i}(u,v) = Q_{i,j}(v,u).
  std::map<std::pair<int, int>, BiPoly> Q;
};

KLRParams default_params(const Datum& d);
std::vector<Violation> validate_params(const Datum& d, const KLRParams& p);
std::string bipoly_str(const BiPoly& p);

/// Lexicographically smallest reduced word for every permutation of S_d.
class ReducedWordTable {
 public:
  explicit ReducedWordTable(int d);
  int d() const { return d_; }
  const std::vector<Perm>& perms() const { return perms_; }
  int index(Perm w) const;
  const std::vector<int>& word(Perm w) const { return words_[static_cast<std::size_t>(index(w))]; }
  int length(Perm w) const { return static_cast<int>(word(w).size()); }
  Perm longest() const { return longest_; }

 private:
  int d_;
  std::vector<Perm> perms_;
  std::vector<std::vector<int>> words_;
  std::map<Perm, int> index_;
  Perm longest_ = 0;
};

const ReducedWordTable& reduced_words(int d);

/// tau_w x^t 1_i with w carrying its canonical reduced word.
struct BasisKey {
  Perm w = 0;
  Mono t = 0;
  int seq = 0;
  auto operator<=>(const BasisKey&) const = default;
};

/// Element of R(alpha) over Q (no q scalars).
using QElement = std::map<BasisKey, Rational>;

/// Sum over (source component, permutation) of rational coefficients; acts as f ↦ c·(w·f).
struct Operator {
  std::map<std::pair<int, Perm>, RatFn> terms;
  bool is_zero() const { return terms.empty(); }
  Operator& operator+=(const Operator& o);
  Operator& operator-=(const Operator& o);
  Operator scaled(const Rational& c) const;
  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend bool operator==(const Operator& a, const Operator& b) { return a.terms == b.terms; }
};

/// R(alpha) for one alpha: sequences, generators, and normal forms.
class KLRBlock {
 public:
  KLRBlock(const Datum& d, const KLRParams& p, RootVector alpha, int cap = 6);
  /// The block keeps references; temporaries would dangle.
  KLRBlock(const Datum&&, const KLRParams&, RootVector, int = 6) = delete;
  KLRBlock(const Datum&, const KLRParams&&, RootVector, int = 6) = delete;
  KLRBlock(const KLRBlock&) = delete;
  KLRBlock& operator=(const KLRBlock&) = delete;

  const Datum& datum() const { return *datum_; }
  const KLRParams& params() const { return *params_; }
  const RootVector& alpha() const { return alpha_; }
  int d() const { return d_; }
  const std::vector<IndexSequence>& seqs() const { return seqs_; }
  int seq_index(const IndexSequence& s) const;
  const ReducedWordTable& words() const { return *table_; }
  int target(Perm w, int s) const;

  Operator unit(int s) const;
  Operator identity() const;
  Operator x(int k) const;
  Operator tau(int t) const { return taus_.at(static_cast<std::size_t>(t)); }
  Operator poly(const MPoly& f, int s) const;
  Operator poly_all(const MPoly& f) const;
  Operator compose(const Operator& a, const Operator& b) const;
  /// tau_{w} 1_s along the canonical reduced word (cached).
  const Operator& tau_basis(Perm w, int s) const;

  QElement to_normal(const Operator& op) const;
  Operator from_normal(const QElement& e) const;

  int deg_tau(Perm w, int s) const;
  int degree(const BasisKey& k) const;

  MPoly P_at(int i, int a, int b) const;
  MPoly Q_at(int i, int j, int a, int b) const;

 private:
  const Datum* datum_;
  const KLRParams* params_;
  RootVector alpha_;
  int d_;
  std::vector<IndexSequence> seqs_;
  std::map<IndexSequence, int> seq_index_;
  const ReducedWordTable* table_;
  std::vector<std::vector<int>> act_;  // [perm index][seq] -> seq
  std::vector<Operator> taus_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<Perm, int>, std::unique_ptr<Operator>> basis_cache_;

  Operator make_tau(int t) const;
};

/// Element with Laurent coefficients in the formal central scalar q.
struct Element {
  RootVector alpha;
  std::map<BasisKey, QLaurent> terms;
  bool is_zero() const { return terms.empty(); }
  friend bool operator==(const Element& a, const Element& b) { return a.alpha == b.alpha && a.terms == b.terms; }
};

Element element_from(const RootVector& alpha, const QElement& e, int qpower = 0);
Element add(const Element& a, const Element& b);
Element sub(const Element& a, const Element& b);
Element scale(const Element& a, const QLaurent& c);
Element multiply(const KLRBlock& blk, const Element& a, const Element& b);
Element one(const KLRBlock& blk);
Element idempotent(const KLRBlock& blk, int s);
Element x_elem(const KLRBlock& blk, int k);
Element tau_elem(const KLRBlock& blk, int t);
/// Splits by power of q.
std::map<int, QElement> by_qpower(const Element& e);
Operator to_operator(const KLRBlock& blk, const QElement& e);
int degree(const KLRBlock& blk, const Element& e);
Element psi(const KLRBlock& blk, const Element& e);
std::string to_string(const KLRBlock& blk, const Element& e);
std::string to_json(const KLRBlock& blk, const Element& e);

struct CorrectionPolys {
  MPoly pbar1, pbar2;  // in variables x_0,x_1,x_2 = u,v,w
};
CorrectionPolys correction_polys(const Datum& d, const KLRParams& p, int i);
MPoly correction_Q(const Datum& d, const KLRParams& p, int i, int j);

Report verify_relations(const KLRBlock& blk, bool parallel = true);

/// Signed tau_{w0} x^delta on each listed (offset, length) block of a real index, acting on component s.
Operator divided_blocks(const KLRBlock& blk, int s, const std::vector<std::pair<int, int>>& blocks, bool signed_version = true);

/// Signed so that it squares to itself; the unsigned product is reported by check_divided_idempotent.
QElement divided_idempotent(const KLRBlock& blk, int i, int d);
Report check_divided_idempotent(const Datum& dt, const KLRParams& p, int i, int d);

QRat qdim_block(const Datum& d, const IndexSequence& j, const IndexSequence& i);
std::map<int, Rational> qdim_block_series(const Datum& d, const IndexSequence& j, const IndexSequence& i, int order);
/// Degreewise count of basis elements tau_w x^t 1_i with w(i) = j, up to the given degree.
std::map<int, Rational> count_basis_by_degree(const Datum& d, const IndexSequence& j, const IndexSequence& i, int order);

/// Degree of tau_w 1_i along the canonical reduced word.
int deg_tau(const Datum& d, Perm w, const IndexSequence& i);

Report serre_verify(const Datum& d, const KLRParams& p, int i, int j);
bool center_check(const KLRBlock& blk, const MPoly& f);

/// Products of tau_1 tau_2 and tau_2 tau_1 in R(3 alpha_i), with squares and cross terms.
Report explore_idempotents(const Datum& d, const KLRParams& p, int i);

}  // namespace klr
