#include "klr/mpoly.hpp"

#include <algorithm>
#include <sstream>

namespace klr {

Mono mono_mul(Mono a, Mono b) {
  if (((a | b) & 0x8080808080808080ull) != 0) {
    for (int k = 0; k < kMaxVars; ++k)
      if (mono_exp(a, k) + mono_exp(b, k) > 255) throw std::overflow_error("exponent overflow");
  }
  return a + b;
}

int mono_degree(Mono m) {
  int s = 0;
  for (int k = 0; k < kMaxVars; ++k) s += mono_exp(m, k);
  return s;
}

Mono mono_from(const std::vector<int>& exps) {
  Mono m = 0;
  for (std::size_t k = 0; k < exps.size(); ++k) {
    if (exps[k] < 0 || exps[k] > 255) throw std::out_of_range("exponent out of range");
    m += mono_var(static_cast<int>(k), exps[k]);
  }
  return m;
}

std::vector<int> mono_to(Mono m, int d) {
  std::vector<int> e(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) e[static_cast<std::size_t>(k)] = mono_exp(m, k);
  return e;
}

Perm perm_identity(int d) {
  Perm w = 0;
  for (int k = 0; k < d; ++k) w |= static_cast<Perm>(k) << (4 * k);
  return w;
}

Perm perm_simple(int t, int d) {
  std::vector<int> v(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) v[static_cast<std::size_t>(k)] = k;
  std::swap(v[static_cast<std::size_t>(t)], v[static_cast<std::size_t>(t + 1)]);
  return perm_from_vector(v);
}

Perm perm_compose(Perm a, Perm b, int d) {
  Perm c = 0;
  for (int k = 0; k < d; ++k) c |= static_cast<Perm>(perm_at(a, perm_at(b, k))) << (4 * k);
  return c;
}

Perm perm_inverse(Perm w, int d) {
  Perm c = 0;
  for (int k = 0; k < d; ++k) c |= static_cast<Perm>(k) << (4 * perm_at(w, k));
  return c;
}

int perm_length(Perm w, int d) {
  int n = 0;
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      if (perm_at(w, a) > perm_at(w, b)) ++n;
  return n;
}

std::vector<int> perm_to_vector(Perm w, int d) {
  std::vector<int> v(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) v[static_cast<std::size_t>(k)] = perm_at(w, k);
  return v;
}

Perm perm_from_vector(const std::vector<int>& v) {
  Perm w = 0;
  for (std::size_t k = 0; k < v.size(); ++k) w |= static_cast<Perm>(v[k]) << (4 * k);
  return w;
}

IndexSequence perm_act(Perm w, const IndexSequence& s) {
  IndexSequence r(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) r[static_cast<std::size_t>(perm_at(w, static_cast<int>(k)))] = s[k];
  return r;
}

Mono perm_act(Perm w, Mono m, int d) {
  Mono r = 0;
  for (int k = 0; k < d; ++k) r += mono_var(perm_at(w, k), mono_exp(m, k));
  return r;
}

// ---------------------------------------------------------------- MPoly

MPoly::MPoly(const Rational& c) {
  if (c != 0) t_.emplace_back(0, c);
}

MPoly MPoly::var(int k) { return monomial(mono_var(k), 1); }

MPoly MPoly::monomial(Mono m, const Rational& c) {
  MPoly p;
  if (c != 0) p.t_.emplace_back(m, c);
  return p;
}

MPoly MPoly::root(int a, int b) {
  MPoly p = var(a);
  p -= var(b);
  return p;
}

MPoly MPoly::from_unsorted(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.first > y.first; });
  MPoly p;
  for (auto& t : terms) {
    if (!p.t_.empty() && p.t_.back().first == t.first)
      p.t_.back().second += t.second;
    else {
      if (!p.t_.empty() && p.t_.back().second == 0) p.t_.pop_back();
      p.t_.push_back(std::move(t));
    }
  }
  if (!p.t_.empty() && p.t_.back().second == 0) p.t_.pop_back();
  return p;
}

namespace {

std::vector<MPoly::Term> merge(const std::vector<MPoly::Term>& a, const std::vector<MPoly::Term>& b, bool subtract) {
  std::vector<MPoly::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first > b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first > a[i].first) {
      out.emplace_back(b[j].first, subtract ? Rational(-b[j].second) : b[j].second);
      ++j;
    } else {
      Rational c = subtract ? Rational(a[i].second - b[j].second) : Rational(a[i].second + b[j].second);
      if (c != 0) out.emplace_back(a[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

MPoly& MPoly::operator+=(const MPoly& o) {
  if (o.t_.empty()) return *this;
  t_ = merge(t_, o.t_, false);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) {
  if (o.t_.empty()) return *this;
  t_ = merge(t_, o.t_, true);
  return *this;
}

MPoly MPoly::operator-() const {
  MPoly r = *this;
  for (auto& t : r.t_) t.second = -t.second;
  return r;
}

MPoly& MPoly::scale(const Rational& c) {
  if (c == 0) {
    t_.clear();
    return *this;
  }
  for (auto& t : t_) t.second *= c;
  return *this;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
  if (a.is_zero() || b.is_zero()) return MPoly();
  if (b.t_.size() == 1 && b.t_[0].first == 0) return MPoly(a).scale(b.t_[0].second);
  if (a.t_.size() == 1 && a.t_[0].first == 0) return MPoly(b).scale(a.t_[0].second);
  std::vector<MPoly::Term> terms;
  terms.reserve(a.t_.size() * b.t_.size());
  for (const auto& x : a.t_)
    for (const auto& y : b.t_) terms.emplace_back(mono_mul(x.first, y.first), x.second * y.second);
  return MPoly::from_unsorted(std::move(terms));
}

MPoly MPoly::pow(int n) const {
  MPoly r(Rational(1));
  for (int k = 0; k < n; ++k) r = r * *this;
  return r;
}

MPoly MPoly::permuted(Perm w, int d) const {
  std::vector<Term> terms;
  terms.reserve(t_.size());
  for (const auto& t : t_) terms.emplace_back(perm_act(w, t.first, d), t.second);
  return from_unsorted(std::move(terms));
}

MPoly MPoly::renamed(const std::vector<int>& map) const {
  std::vector<Term> terms;
  terms.reserve(t_.size());
  for (const auto& t : t_) {
    Mono m = 0;
    for (std::size_t k = 0; k < map.size(); ++k) m = mono_mul(m, mono_var(map[k], mono_exp(t.first, static_cast<int>(k))));
    terms.emplace_back(m, t.second);
  }
  return from_unsorted(std::move(terms));
}

MPoly MPoly::collapse(int a, int b) const {
  std::vector<Term> terms;
  terms.reserve(t_.size());
  for (const auto& t : t_) {
    const int ea = mono_exp(t.first, a);
    terms.emplace_back(t.first - mono_var(a, ea) + mono_var(b, ea), t.second);
  }
  return from_unsorted(std::move(terms));
}

std::optional<MPoly> MPoly::div_root(int a, int b) const {
  if (!collapse(a, b).is_zero()) return std::nullopt;
  std::vector<Term> terms;
  for (const auto& t : t_) {
    const int p = mono_exp(t.first, a);
    if (p == 0) continue;
    const Mono rest = t.first - mono_var(a, p);
    for (int k = 0; k < p; ++k) terms.emplace_back(rest + mono_var(a, k) + mono_var(b, p - 1 - k), t.second);
  }
  return from_unsorted(std::move(terms));
}

std::optional<MPoly> MPoly::exact_div(const MPoly& a, const MPoly& b) {
  if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
  if (b.is_constant()) return MPoly(a).scale(Rational(1) / b.constant());
  MPoly rem = a;
  std::vector<Term> quot;
  const Term& lb = b.t_.front();
  while (!rem.is_zero()) {
    const Term& lt = rem.t_.front();
    if (!mono_divides(lb.first, lt.first)) return std::nullopt;
    MPoly step = monomial(lt.first - lb.first, lt.second / lb.second);
    quot.push_back(step.t_.front());
    rem -= step * b;
  }
  return from_unsorted(std::move(quot));
}

MPoly MPoly::divided_difference(int t) const {
  MPoly diff = permuted(perm_simple(t, kMaxVars), kMaxVars) - *this;
  auto q = diff.div_root(t, t + 1);
  return *q;
}

bool MPoly::symmetric_in(int a, int b) const {
  std::vector<int> v(kMaxVars);
  for (int k = 0; k < kMaxVars; ++k) v[static_cast<std::size_t>(k)] = k;
  std::swap(v[static_cast<std::size_t>(a)], v[static_cast<std::size_t>(b)]);
  return permuted(perm_from_vector(v), kMaxVars) == *this;
}

std::string MPoly::to_string(int base) const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // ascending degree reads more naturally
  std::vector<Term> sorted = t_;
  std::stable_sort(sorted.begin(), sorted.end(), [](const Term& x, const Term& y) {
    const int dx = mono_degree(x.first), dy = mono_degree(y.first);
    if (dx != dy) return dx < dy;
    return x.first > y.first;
  });
  for (const auto& [m, c] : sorted) {
    Rational mag = abs(c);
    if (c < 0)
      os << '-';
    else if (!first)
      os << '+';
    first = false;
    std::string mono;
    for (int k = 0; k < kMaxVars; ++k) {
      const int e = mono_exp(m, k);
      if (!e) continue;
      if (!mono.empty()) mono += '*';
      mono += "x(" + std::to_string(k + base) + ")";
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty())
      os << rational_str(mag);
    else if (mag == 1)
      os << mono;
    else
      os << rational_str(mag) << '*' << mono;
  }
  return os.str();
}

MPoly bipoly_at(const BiPoly& p, int a, int b) {
  std::vector<MPoly::Term> terms;
  MPoly out;
  for (const auto& [e, c] : p) out += MPoly::monomial(mono_mul(mono_var(a, e.first), mono_var(b, e.second)), c);
  return out;
}

// ---------------------------------------------------------------- RatFn

RatFn RatFn::over_root(MPoly num, int a, int b) {
  RatFn r(std::move(num));
  if (a < b) {
    r.den_[static_cast<std::size_t>(a * kMaxVars + b)] = 1;
  } else {
    r.num_ = -r.num_;
    r.den_[static_cast<std::size_t>(b * kMaxVars + a)] = 1;
  }
  r.reduce();
  return r;
}

bool RatFn::is_poly() const {
  return std::all_of(den_.begin(), den_.end(), [](std::uint8_t e) { return e == 0; });
}

MPoly RatFn::root_power_product(const std::array<std::uint8_t, kMaxVars * kMaxVars>& e) {
  MPoly p(Rational(1));
  for (int a = 0; a < kMaxVars; ++a)
    for (int b = a + 1; b < kMaxVars; ++b)
      for (int k = 0; k < e[static_cast<std::size_t>(a * kMaxVars + b)]; ++k) p = p * MPoly::root(a, b);
  return p;
}

void RatFn::reduce() {
  if (num_.is_zero()) {
    den_.fill(0);
    return;
  }
  for (int a = 0; a < kMaxVars; ++a)
    for (int b = a + 1; b < kMaxVars; ++b) {
      auto& e = den_[static_cast<std::size_t>(a * kMaxVars + b)];
      while (e > 0) {
        auto q = num_.div_root(a, b);
        if (!q) break;
        num_ = std::move(*q);
        --e;
      }
    }
}

RatFn& RatFn::operator+=(const RatFn& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
    if (!is_poly()) reduce();
    return *this;
  }
  std::array<std::uint8_t, kMaxVars * kMaxVars> m{}, ea{}, eb{};
  for (std::size_t k = 0; k < m.size(); ++k) {
    m[k] = std::max(den_[k], o.den_[k]);
    ea[k] = static_cast<std::uint8_t>(m[k] - den_[k]);
    eb[k] = static_cast<std::uint8_t>(m[k] - o.den_[k]);
  }
  num_ = num_ * root_power_product(ea) + o.num_ * root_power_product(eb);
  den_ = m;
  reduce();
  return *this;
}

RatFn& RatFn::operator-=(const RatFn& o) { return *this += -o; }

RatFn RatFn::operator-() const {
  RatFn r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFn operator*(const RatFn& a, const RatFn& b) {
  if (a.is_zero() || b.is_zero()) return RatFn();
  RatFn r(a.num_ * b.num_);
  bool any = false;
  for (std::size_t k = 0; k < r.den_.size(); ++k) {
    r.den_[k] = static_cast<std::uint8_t>(a.den_[k] + b.den_[k]);
    any = any || r.den_[k];
  }
  if (any) r.reduce();
  return r;
}

RatFn RatFn::permuted(Perm w, int d) const {
  RatFn r(num_.permuted(w, d));
  bool flip = false;
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) {
      const int e = den_[static_cast<std::size_t>(a * kMaxVars + b)];
      if (!e) continue;
      int x = perm_at(w, a), y = perm_at(w, b);
      if (x > y) {
        std::swap(x, y);
        if (e % 2) flip = !flip;
      }
      r.den_[static_cast<std::size_t>(x * kMaxVars + y)] = static_cast<std::uint8_t>(r.den_[static_cast<std::size_t>(x * kMaxVars + y)] + e);
    }
  if (flip) r.num_ = -r.num_;
  return r;
}

std::optional<RatFn> RatFn::divide(const RatFn& a, const RatFn& b) {
  if (b.is_zero()) throw DivisionByZero("rational function division by zero");
  MPoly bn = b.num_;
  std::array<std::uint8_t, kMaxVars * kMaxVars> extra{};
  if (!bn.is_constant()) {
    for (int x = 0; x < kMaxVars; ++x)
      for (int y = x + 1; y < kMaxVars; ++y)
        for (;;) {
          auto q = bn.div_root(x, y);
          if (!q || bn.is_constant()) break;
          bn = std::move(*q);
          ++extra[static_cast<std::size_t>(x * kMaxVars + y)];
        }
  }
  auto q = MPoly::exact_div(a.num_ * root_power_product(b.den_), bn);
  if (!q) return std::nullopt;
  RatFn r(std::move(*q));
  for (std::size_t k = 0; k < r.den_.size(); ++k) r.den_[k] = static_cast<std::uint8_t>(a.den_[k] + extra[k]);
  r.reduce();
  return r;
}

std::string RatFn::to_string() const {
  if (is_poly()) return num_.to_string();
  std::string d;
  for (int a = 0; a < kMaxVars; ++a)
    for (int b = a + 1; b < kMaxVars; ++b) {
      const int e = den_[static_cast<std::size_t>(a * kMaxVars + b)];
      if (!e) continue;
      if (!d.empty()) d += "*";
      d += "(x(" + std::to_string(a + 1) + ")-x(" + std::to_string(b + 1) + "))";
      if (e > 1) d += "^" + std::to_string(e);
    }
  return "(" + num_.to_string() + ")/(" + d + ")";
}

}  // namespace klr
