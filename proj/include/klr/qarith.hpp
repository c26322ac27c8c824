#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace klr {

using Rational = mpq_class;

struct DivisionByZero : std::domain_error {
  using std::domain_error::domain_error;
};
struct ZeroInput : std::domain_error {
  using std::domain_error::domain_error;
};
struct PoleAtZero : std::domain_error {
  using std::domain_error::domain_error;
};
struct ParseError : std::invalid_argument {
  ParseError(const std::string& what, std::size_t pos)
      : std::invalid_argument(what + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

std::string rational_str(const Rational& r);
Rational parse_rational(const std::string& s);

/// Dense polynomial in q with rational coefficients.
class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(const Rational& c);
  static QPoly monomial(const Rational& c, int k);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  int low_degree() const;
  bool is_zero() const { return c_.empty(); }
  bool is_one() const;
  Rational coeff(int k) const;
  const std::vector<Rational>& coeffs() const { return c_; }

  QPoly& operator+=(const QPoly& o);
  QPoly& operator-=(const QPoly& o);
  QPoly operator-() const;
  QPoly& scale(const Rational& r);
  friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
  friend QPoly operator-(QPoly a, const QPoly& b) { return a -= b; }
  friend QPoly operator*(const QPoly& a, const QPoly& b);
  friend bool operator==(const QPoly& a, const QPoly& b) { return a.c_ == b.c_; }

  static void divmod(const QPoly& a, const QPoly& b, QPoly& quot, QPoly& rem);
  /// Monic gcd.
  static QPoly gcd(QPoly a, QPoly b);
  QPoly shifted_down(int k) const;
  /// q^n p(1/q)
  QPoly reflected(int n) const;
  Rational eval(const Rational& x) const;
  std::string to_string() const;
  std::size_t term_count() const;

 private:
  std::vector<Rational> c_;
  void trim();
};

/// Sparse Laurent polynomial in q; zero coefficients are never stored.
class QLaurent {
 public:
  QLaurent() = default;
  explicit QLaurent(const Rational& c, int k = 0);
  static QLaurent q(int k = 1) { return QLaurent(Rational(1), k); }

  const std::map<int, Rational>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  Rational coeff(int k) const;
  int min_exp() const;
  int max_exp() const;
  void add_term(int k, const Rational& c);

  QLaurent& operator+=(const QLaurent& o);
  QLaurent& operator-=(const QLaurent& o);
  QLaurent operator-() const;
  friend QLaurent operator+(QLaurent a, const QLaurent& b) { return a += b; }
  friend QLaurent operator-(QLaurent a, const QLaurent& b) { return a -= b; }
  friend QLaurent operator*(const QLaurent& a, const QLaurent& b);
  friend bool operator==(const QLaurent& a, const QLaurent& b) { return a.t_ == b.t_; }
  friend bool operator<(const QLaurent& a, const QLaurent& b) { return a.t_ < b.t_; }

  QLaurent bar() const;
  QLaurent shift(int k) const;
  Rational eval(const Rational& x) const;
  std::string to_string() const;

 private:
  std::map<int, Rational> t_;
};

/// Element of Q(q) in canonical reduced form.
class QRat {
 public:
  QRat() : den_(Rational(1)) {}
  QRat(long v) : num_(Rational(v)), den_(Rational(1)) {}  // NOLINT
  QRat(const Rational& v) : num_(v), den_(Rational(1)) {}  // NOLINT
  QRat(const QLaurent& l);                                 // NOLINT
  QRat(QPoly num, QPoly den);
  static QRat q(int k = 1);

  const QPoly& num() const { return num_; }
  const QPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_laurent() const;
  QLaurent to_laurent() const;

  QRat& operator+=(const QRat& o);
  QRat& operator-=(const QRat& o);
  QRat& operator*=(const QRat& o);
  QRat& operator/=(const QRat& o);
  QRat operator-() const;
  friend QRat operator+(QRat a, const QRat& b) { return a += b; }
  friend QRat operator-(QRat a, const QRat& b) { return a -= b; }
  friend QRat operator*(QRat a, const QRat& b) { return a *= b; }
  friend QRat operator/(QRat a, const QRat& b) { return a /= b; }
  friend bool operator==(const QRat& a, const QRat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  QRat inverse() const;
  QRat pow(int n) const;

  int val0() const;
  Rational ev0() const;
  QRat bar() const;
  Rational eval(const Rational& x) const;
  /// Laurent expansion at q=0 up to and including q^order.
  std::map<int, Rational> series(int order) const;

  std::string to_string() const;
  static QRat parse(const std::string& text);

 private:
  QPoly num_, den_;
  void normalize();
};

enum class ArithOp { add, sub, mul, div, neg };
QRat arith(const QRat& a, const QRat& b, ArithOp op);

}  // namespace klr
