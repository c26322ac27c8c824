#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "klr/cartan.hpp"
#include "klr/qarith.hpp"

namespace klr {

/// Packed exponent vector: variable k (0-based, k < 8) occupies byte 7-k,
/// so integer order equals lexicographic order with x_1 most significant.
using Mono = std::uint64_t;
constexpr int kMaxVars = 8;

inline int mono_exp(Mono m, int k) { return static_cast<int>((m >> (8 * (7 - k))) & 0xffu); }
inline Mono mono_var(int k, int e = 1) { return static_cast<Mono>(e) << (8 * (7 - k)); }
Mono mono_mul(Mono a, Mono b);
inline bool mono_divides(Mono a, Mono b) {
  for (int k = 0; k < kMaxVars; ++k)
    if (mono_exp(a, k) > mono_exp(b, k)) return false;
  return true;
}
int mono_degree(Mono m);
Mono mono_from(const std::vector<int>& exps);
std::vector<int> mono_to(Mono m, int d);

/// Permutation of {0..d-1} packed 4 bits per position: w(k) at bits 4k.
using Perm = std::uint32_t;
inline int perm_at(Perm w, int k) { return static_cast<int>((w >> (4 * k)) & 0xfu); }
Perm perm_identity(int d);
Perm perm_simple(int t, int d);
Perm perm_compose(Perm a, Perm b, int d);  // a∘b
Perm perm_inverse(Perm w, int d);
int perm_length(Perm w, int d);
std::vector<int> perm_to_vector(Perm w, int d);
Perm perm_from_vector(const std::vector<int>& v);
/// Moves the entry at position k to position w(k).
IndexSequence perm_act(Perm w, const IndexSequence& s);
Mono perm_act(Perm w, Mono m, int d);

/// Sparse multivariate polynomial over Q; terms sorted by decreasing monomial.
class MPoly {
 public:
  using Term = std::pair<Mono, Rational>;
  MPoly() = default;
  explicit MPoly(const Rational& c);
  static MPoly var(int k);
  static MPoly monomial(Mono m, const Rational& c);
  /// x_a - x_b
  static MPoly root(int a, int b);

  const std::vector<Term>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].first == 0); }
  Rational constant() const { return (!t_.empty() && t_.back().first == 0) ? t_.back().second : Rational(0); }

  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  MPoly operator-() const;
  MPoly& scale(const Rational& c);
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  friend bool operator==(const MPoly& a, const MPoly& b) { return a.t_ == b.t_; }
  MPoly pow(int n) const;

  MPoly permuted(Perm w, int d) const;
  /// Renames variable k to map[k].
  MPoly renamed(const std::vector<int>& map) const;
  /// Substitutes x_a := x_b.
  MPoly collapse(int a, int b) const;
  /// Quotient by x_a - x_b when exact.
  std::optional<MPoly> div_root(int a, int b) const;
  static std::optional<MPoly> exact_div(const MPoly& a, const MPoly& b);
  /// (r_t f - f)/(x_t - x_{t+1})
  MPoly divided_difference(int t) const;
  bool symmetric_in(int a, int b) const;
  std::string to_string(int base = 1) const;

 private:
  std::vector<Term> t_;
  static MPoly from_unsorted(std::vector<Term> terms);
};

MPoly bipoly_at(const BiPoly& p, int a, int b);

/// Numerator over a product of root factors (x_a - x_b), a < b.
class RatFn {
 public:
  RatFn() { den_.fill(0); }
  explicit RatFn(MPoly num) : num_(std::move(num)) { den_.fill(0); }
  /// num / (x_a - x_b)
  static RatFn over_root(MPoly num, int a, int b);

  const MPoly& num() const { return num_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_poly() const;
  int den_exp(int a, int b) const { return den_[static_cast<std::size_t>(a * kMaxVars + b)]; }

  RatFn& operator+=(const RatFn& o);
  RatFn& operator-=(const RatFn& o);
  RatFn operator-() const;
  friend RatFn operator+(RatFn a, const RatFn& b) { return a += b; }
  friend RatFn operator-(RatFn a, const RatFn& b) { return a -= b; }
  friend RatFn operator*(const RatFn& a, const RatFn& b);
  friend bool operator==(const RatFn& a, const RatFn& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  RatFn permuted(Perm w, int d) const;
  /// a / b when the quotient again has only root factors in its denominator.
  static std::optional<RatFn> divide(const RatFn& a, const RatFn& b);
  std::string to_string() const;

 private:
  MPoly num_;
  std::array<std::uint8_t, kMaxVars * kMaxVars> den_;
  void reduce();
  static MPoly root_power_product(const std::array<std::uint8_t, kMaxVars * kMaxVars>& e);
};

}  // namespace klr
