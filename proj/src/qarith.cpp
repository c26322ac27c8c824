#include "klr/qarith.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace klr {

std::string rational_str(const Rational& r) { return r.get_str(); }

Rational parse_rational(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational '" + s + "'");
  r.canonicalize();
  if (r.get_den() == 0) throw DivisionByZero("zero denominator in '" + s + "'");
  return r;
}

// ---------------------------------------------------------------- QPoly

QPoly::QPoly(const Rational& c) {
  if (c != 0) c_.push_back(c);
}

QPoly QPoly::monomial(const Rational& c, int k) {
  QPoly p;
  if (c != 0) {
    p.c_.assign(static_cast<std::size_t>(k) + 1, Rational(0));
    p.c_[static_cast<std::size_t>(k)] = c;
  }
  return p;
}

void QPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

int QPoly::low_degree() const {
  for (std::size_t k = 0; k < c_.size(); ++k)
    if (c_[k] != 0) return static_cast<int>(k);
  return -1;
}

bool QPoly::is_one() const { return c_.size() == 1 && c_[0] == 1; }

Rational QPoly::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return 0;
  return c_[static_cast<std::size_t>(k)];
}

std::size_t QPoly::term_count() const {
  return static_cast<std::size_t>(std::count_if(c_.begin(), c_.end(), [](const Rational& r) { return r != 0; }));
}

QPoly& QPoly::operator+=(const QPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

QPoly& QPoly::operator-=(const QPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

QPoly QPoly::operator-() const {
  QPoly r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

QPoly& QPoly::scale(const Rational& r) {
  if (r == 0) {
    c_.clear();
    return *this;
  }
  for (auto& x : c_) x *= r;
  return *this;
}

QPoly operator*(const QPoly& a, const QPoly& b) {
  QPoly r;
  if (a.is_zero() || b.is_zero()) return r;
  r.c_.assign(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
  }
  r.trim();
  return r;
}

void QPoly::divmod(const QPoly& a, const QPoly& b, QPoly& quot, QPoly& rem) {
  if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
  rem = a;
  quot = QPoly();
  const int db = b.degree();
  if (rem.degree() < db) return;
  quot.c_.assign(static_cast<std::size_t>(rem.degree() - db) + 1, Rational(0));
  const Rational lead = b.c_.back();
  while (!rem.is_zero() && rem.degree() >= db) {
    const int shift = rem.degree() - db;
    Rational f = rem.c_.back() / lead;
    quot.c_[static_cast<std::size_t>(shift)] = f;
    for (int k = 0; k <= db; ++k) rem.c_[static_cast<std::size_t>(k + shift)] -= f * b.c_[static_cast<std::size_t>(k)];
    rem.trim();
  }
  quot.trim();
}

QPoly QPoly::gcd(QPoly a, QPoly b) {
  while (!b.is_zero()) {
    QPoly qq, r;
    divmod(a, b, qq, r);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.is_zero()) a.scale(Rational(1) / a.c_.back());
  return a;
}

QPoly QPoly::shifted_down(int k) const {
  QPoly r;
  if (k <= 0 || is_zero()) return *this;
  r.c_.assign(c_.begin() + k, c_.end());
  return r;
}

QPoly QPoly::reflected(int n) const {
  QPoly r;
  if (is_zero()) return r;
  r.c_.assign(static_cast<std::size_t>(n) + 1, Rational(0));
  for (std::size_t k = 0; k < c_.size(); ++k) r.c_[static_cast<std::size_t>(n) - k] = c_[k];
  r.trim();
  return r;
}

Rational QPoly::eval(const Rational& x) const {
  Rational acc = 0;
  for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
  return acc;
}

namespace {

void append_term(std::ostringstream& os, bool& first, const Rational& c, int k) {
  if (c == 0) return;
  Rational mag = abs(c);
  if (c < 0)
    os << '-';
  else if (!first)
    os << '+';
  first = false;
  if (k == 0) {
    os << rational_str(mag);
    return;
  }
  if (mag != 1) os << rational_str(mag) << '*';
  os << 'q';
  if (k != 1) os << '^' << k;
}

}  // namespace

std::string QPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < c_.size(); ++k) append_term(os, first, c_[k], static_cast<int>(k));
  return os.str();
}

// ---------------------------------------------------------------- QLaurent

QLaurent::QLaurent(const Rational& c, int k) {
  if (c != 0) t_.emplace(k, c);
}

Rational QLaurent::coeff(int k) const {
  auto it = t_.find(k);
  return it == t_.end() ? Rational(0) : it->second;
}

int QLaurent::min_exp() const { return t_.empty() ? 0 : t_.begin()->first; }
int QLaurent::max_exp() const { return t_.empty() ? 0 : t_.rbegin()->first; }

void QLaurent::add_term(int k, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = t_.emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) t_.erase(it);
  }
}

QLaurent& QLaurent::operator+=(const QLaurent& o) {
  for (const auto& [k, c] : o.t_) add_term(k, c);
  return *this;
}

QLaurent& QLaurent::operator-=(const QLaurent& o) {
  for (const auto& [k, c] : o.t_) add_term(k, -c);
  return *this;
}

QLaurent QLaurent::operator-() const {
  QLaurent r = *this;
  for (auto& [k, c] : r.t_) c = -c;
  return r;
}

QLaurent operator*(const QLaurent& a, const QLaurent& b) {
  QLaurent r;
  for (const auto& [ka, ca] : a.t_)
    for (const auto& [kb, cb] : b.t_) r.add_term(ka + kb, ca * cb);
  return r;
}

QLaurent QLaurent::bar() const {
  QLaurent r;
  for (const auto& [k, c] : t_) r.t_.emplace(-k, c);
  return r;
}

QLaurent QLaurent::shift(int k) const {
  QLaurent r;
  for (const auto& [e, c] : t_) r.t_.emplace(e + k, c);
  return r;
}

Rational QLaurent::eval(const Rational& x) const {
  Rational acc = 0;
  for (const auto& [k, c] : t_) {
    Rational p = 1;
    Rational base = k >= 0 ? x : Rational(1) / x;
    for (int e = 0; e < std::abs(k); ++e) p *= base;
    acc += c * p;
  }
  return acc;
}

std::string QLaurent::to_string() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : t_) append_term(os, first, c, k);
  return os.str();
}

// ---------------------------------------------------------------- QRat

QRat::QRat(const QLaurent& l) : den_(Rational(1)) {
  if (l.is_zero()) return;
  const int lo = std::min(0, l.min_exp());
  for (const auto& [k, c] : l.terms()) num_ += QPoly::monomial(c, k - lo);
  if (lo < 0) den_ = QPoly::monomial(1, -lo);
}

QRat::QRat(QPoly num, QPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw DivisionByZero("zero denominator");
  normalize();
}

QRat QRat::q(int k) {
  if (k >= 0) return QRat(QPoly::monomial(1, k), QPoly(Rational(1)));
  return QRat(QPoly(Rational(1)), QPoly::monomial(1, -k));
}

void QRat::normalize() {
  if (num_.is_zero()) {
    den_ = QPoly(Rational(1));
    return;
  }
  if (den_.degree() > 0) {
    QPoly g = QPoly::gcd(num_, den_);
    if (g.degree() > 0) {
      QPoly r;
      QPoly n2, d2;
      QPoly::divmod(num_, g, n2, r);
      QPoly::divmod(den_, g, d2, r);
      num_ = std::move(n2);
      den_ = std::move(d2);
    }
  }
  const Rational lead = den_.coeff(den_.low_degree());
  if (lead != 1) {
    Rational inv = Rational(1) / lead;
    num_.scale(inv);
    den_.scale(inv);
  }
}

bool QRat::is_laurent() const { return den_.term_count() == 1; }

QLaurent QRat::to_laurent() const {
  if (!is_laurent()) throw std::domain_error("not a Laurent polynomial: " + to_string());
  const int shift = den_.degree();
  QLaurent r;
  const auto& c = num_.coeffs();
  for (std::size_t k = 0; k < c.size(); ++k)
    if (c[k] != 0) r.add_term(static_cast<int>(k) - shift, c[k]);
  return r;
}

QRat& QRat::operator+=(const QRat& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
    if (den_.degree() > 0)
      normalize();
    else if (num_.is_zero())
      den_ = QPoly(Rational(1));
    return *this;
  }
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

QRat& QRat::operator-=(const QRat& o) { return *this += -o; }

QRat& QRat::operator*=(const QRat& o) {
  if (is_zero() || o.is_zero()) return *this = QRat();
  num_ = num_ * o.num_;
  den_ = den_ * o.den_;
  if (den_.degree() > 0) normalize();
  else if (den_.coeff(0) != 1) normalize();
  return *this;
}

QRat QRat::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero");
  QRat r;
  r.num_ = den_;
  r.den_ = num_;
  r.normalize();
  return r;
}

QRat& QRat::operator/=(const QRat& o) {
  if (o.is_zero()) throw DivisionByZero("division by zero");
  return *this *= o.inverse();
}

QRat QRat::operator-() const {
  QRat r = *this;
  r.num_ = -r.num_;
  return r;
}

QRat QRat::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  QRat r(1), b = *this;
  while (n) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

int QRat::val0() const {
  if (is_zero()) throw ZeroInput("val0 of zero");
  return num_.low_degree() - den_.low_degree();
}

Rational QRat::ev0() const {
  if (is_zero()) return 0;
  const int v = val0();
  if (v < 0) throw PoleAtZero("pole at q=0 in " + to_string());
  if (v > 0) return 0;
  return num_.coeff(num_.low_degree()) / den_.coeff(den_.low_degree());
}

QRat QRat::bar() const {
  if (is_zero()) return *this;
  // p(1/q)/r(1/q) = q^{dr-dp} * rev(p)/rev(r)
  const int dp = num_.degree(), dr = den_.degree();
  QPoly n = num_.reflected(dp), d = den_.reflected(dr);
  if (dr >= dp)
    n = n * QPoly::monomial(1, dr - dp);
  else
    d = d * QPoly::monomial(1, dp - dr);
  return QRat(std::move(n), std::move(d));
}

Rational QRat::eval(const Rational& x) const {
  Rational d = den_.eval(x);
  if (d == 0) throw DivisionByZero("pole at evaluation point");
  return num_.eval(x) / d;
}

std::map<int, Rational> QRat::series(int order) const {
  std::map<int, Rational> out;
  if (is_zero()) return out;
  const int v = den_.low_degree();
  QPoly d = den_.shifted_down(v);  // d(0) = 1
  const int top = order + v;       // need num/d up to q^{top}
  if (top < 0) return out;
  std::vector<Rational> s(static_cast<std::size_t>(top) + 1, Rational(0));
  for (int k = 0; k <= top; ++k) {
    Rational acc = num_.coeff(k);
    for (int j = 1; j <= std::min(k, d.degree()); ++j) acc -= d.coeff(j) * s[static_cast<std::size_t>(k - j)];
    s[static_cast<std::size_t>(k)] = acc;
  }
  for (int k = 0; k <= top; ++k)
    if (s[static_cast<std::size_t>(k)] != 0) out.emplace(k - v, s[static_cast<std::size_t>(k)]);
  return out;
}

std::string QRat::to_string() const {
  if (is_zero()) return "0";
  if (is_laurent()) return to_laurent().to_string();
  std::string n = num_.to_string();
  if (num_.term_count() > 1) n = "(" + n + ")";
  return n + "/(" + den_.to_string() + ")";
}

namespace {

class RatParser {
 public:
  explicit RatParser(const std::string& s) : s_(s) {}

  QRat parse() {
    QRat v = expr();
    skip();
    if (p_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[p_]) + "'", p_);
    return v;
  }

 private:
  const std::string& s_;
  std::size_t p_ = 0;

  void skip() {
    while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
  }
  bool eat(char c) {
    skip();
    if (p_ < s_.size() && s_[p_] == c) {
      ++p_;
      return true;
    }
    return false;
  }
  QRat expr() {
    QRat v = term();
    for (;;) {
      if (eat('+'))
        v += term();
      else if (eat('-'))
        v -= term();
      else
        return v;
    }
  }
  QRat term() {
    QRat v = unary();
    for (;;) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        std::size_t at = p_;
        QRat d = unary();
        if (d.is_zero()) throw ParseError("division by zero", at);
        v /= d;
      } else {
        return v;
      }
    }
  }
  QRat unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  QRat power() {
    QRat b = primary();
    if (eat('^')) {
      bool neg = eat('-');
      skip();
      std::size_t start = p_;
      while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
      if (start == p_) throw ParseError("exponent expected", p_);
      int e = std::stoi(s_.substr(start, p_ - start));
      if (neg && b.is_zero()) throw ParseError("zero to a negative power", start);
      b = b.pow(neg ? -e : e);
    }
    return b;
  }
  QRat primary() {
    skip();
    if (p_ >= s_.size()) throw ParseError("unexpected end of input", p_);
    char c = s_[p_];
    if (c == '(') {
      ++p_;
      QRat v = expr();
      if (!eat(')')) throw ParseError("')' expected", p_);
      return v;
    }
    if (c == 'q') {
      ++p_;
      return QRat::q(1);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = p_;
      while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
      return QRat(Rational(mpz_class(s_.substr(start, p_ - start))));
    }
    throw ParseError("unexpected '" + std::string(1, c) + "'", p_);
  }
};

}  // namespace

QRat QRat::parse(const std::string& text) { return RatParser(text).parse(); }

QRat arith(const QRat& a, const QRat& b, ArithOp op) {
  switch (op) {
    case ArithOp::add: return a + b;
    case ArithOp::sub: return a - b;
    case ArithOp::mul: return a * b;
    case ArithOp::div: return a / b;
    case ArithOp::neg: return -a;
  }
  return a;
}

}  // namespace klr
