#include "klr/klr.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace klr {

// ---------------------------------------------------------------- parameters

KLRParams default_params(const Datum& d) {
  KLRParams p;
  for (int i = 0; i < d.n(); ++i) {
    BiPoly poly;
    if (d.P.count(i)) {
      poly = d.P.at(i);
    } else if (d.is_real(i)) {
      poly[{0, 0}] = 1;
    } else {
      const int top = 1 + d.c(i);
      for (int a = 0; a <= top; ++a) poly[{a, top - a}] = 1;
    }
    p.P[i] = poly;
  }
  for (int i = 0; i < d.n(); ++i)
    for (int j = 0; j < d.n(); ++j) {
      if (i == j) continue;
      BiPoly poly;
      if (d.Q.count({i, j})) {
        poly = d.Q.at({i, j});
      } else if (d.Q.count({j, i})) {
        for (const auto& [e, c] : d.Q.at({j, i})) poly[{e.second, e.first}] = c;
      } else {
        // (a_i|a_j) + s_i p + s_j q = 0
        const int target = -d.sym(i, j);
        for (int a = 0; d.s[i] * a <= target; ++a) {
          const int rest = target - d.s[i] * a;
          if (rest % d.s[j] == 0) poly[{a, rest / d.s[j]}] = 1;
        }
      }
      p.Q[{i, j}] = poly;
    }
  return p;
}

std::string bipoly_str(const BiPoly& p) {
  MPoly m;
  for (const auto& [e, c] : p) m += MPoly::monomial(mono_var(0, e.first) + mono_var(1, e.second), c);
  std::string s = m.to_string();
  std::string out;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s.compare(k, 4, "x(1)") == 0) {
      out += 'u';
      k += 3;
    } else if (s.compare(k, 4, "x(2)") == 0) {
      out += 'v';
      k += 3;
    } else {
      out += s[k];
    }
  }
  return out;
}

std::vector<Violation> validate_params(const Datum& d, const KLRParams& p) {
  std::vector<Violation> out;
  for (int i = 0; i < d.n(); ++i) {
    const std::string name = "P_" + d.indices[i];
    auto it = p.P.find(i);
    if (it == p.P.end()) {
      out.push_back({name, name + " missing"});
      continue;
    }
    const auto& poly = it->second;
    if (d.is_real(i)) {
      if (poly != BiPoly{{{0, 0}, Rational(1)}}) out.push_back({name, name + " must be 1 for a real index"});
      continue;
    }
    const int top = 1 - d.A[i][i] / 2;
    for (const auto& [e, c] : poly)
      if (e.first + e.second != top) out.push_back({name, name + " has a monomial of wrong degree"});
    if (!poly.count({top, 0}) || !poly.count({0, top}))
      out.push_back({name, name + " needs nonzero u^" + std::to_string(top) + " and v^" + std::to_string(top) + " coefficients"});
  }
  for (int i = 0; i < d.n(); ++i)
    for (int j = 0; j < d.n(); ++j) {
      if (i == j) continue;
      const std::string name = "Q_" + d.indices[i] + d.indices[j];
      auto it = p.Q.find({i, j});
      auto jt = p.Q.find({j, i});
      if (it == p.Q.end() || jt == p.Q.end()) {
        out.push_back({name, name + " missing"});
        continue;
      }
      for (const auto& [e, c] : it->second) {
        if (d.sym(i, j) + d.s[i] * e.first + d.s[j] * e.second != 0)
          out.push_back({name, name + " has an inadmissible monomial"});
        auto mirror = jt->second.find({e.second, e.first});
        if (mirror == jt->second.end() || mirror->second != c) out.push_back({name, name + "(u,v) != Q_" + d.indices[j] + d.indices[i] + "(v,u)"});
      }
      if (it->second.size() != jt->second.size()) out.push_back({name, name + "(u,v) != Q_" + d.indices[j] + d.indices[i] + "(v,u)"});
      if (!it->second.count({-d.A[i][j], 0})) out.push_back({name, "t_" + d.indices[i] + d.indices[j] + " leading coefficient is zero"});
    }
  return out;
}

// ---------------------------------------------------------------- reduced words

ReducedWordTable::ReducedWordTable(int d) : d_(d) {
  if (d > kMaxVars) throw CapExceeded("symmetric group degree " + std::to_string(d) + " too large");
  std::vector<int> v(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) v[static_cast<std::size_t>(k)] = k;
  do perms_.push_back(perm_from_vector(v));
  while (std::next_permutation(v.begin(), v.end()));
  for (std::size_t k = 0; k < perms_.size(); ++k) index_[perms_[k]] = static_cast<int>(k);
  // increasing length so that shorter words exist before use
  std::vector<std::size_t> order(perms_.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return perm_length(perms_[a], d) < perm_length(perms_[b], d);
  });
  words_.assign(perms_.size(), {});
  int best = -1;
  for (std::size_t k : order) {
    const Perm w = perms_[k];
    const int len = perm_length(w, d);
    if (len > best) {
      best = len;
      longest_ = w;
    }
    if (len == 0) continue;
    const Perm inv = perm_inverse(w, d);
    for (int t = 0; t + 1 < d; ++t) {
      if (perm_at(inv, t + 1) < perm_at(inv, t)) {  // left descent
        const Perm rest = perm_compose(perm_simple(t, d), w, d);
        std::vector<int> word{t};
        const auto& tail = words_[static_cast<std::size_t>(index_.at(rest))];
        word.insert(word.end(), tail.begin(), tail.end());
        words_[k] = std::move(word);
        break;
      }
    }
  }
}

int ReducedWordTable::index(Perm w) const {
  auto it = index_.find(w);
  if (it == index_.end()) throw std::out_of_range("permutation not in table");
  return it->second;
}

const ReducedWordTable& reduced_words(int d) {
  static std::mutex m;
  static std::map<int, std::unique_ptr<ReducedWordTable>> tables;
  std::lock_guard<std::mutex> lock(m);
  auto& slot = tables[d];
  if (!slot) slot = std::make_unique<ReducedWordTable>(d);
  return *slot;
}

// ---------------------------------------------------------------- operators

Operator& Operator::operator+=(const Operator& o) {
  for (const auto& [k, c] : o.terms) {
    auto it = terms.find(k);
    if (it == terms.end()) {
      terms.emplace(k, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }
  return *this;
}

Operator& Operator::operator-=(const Operator& o) {
  for (const auto& [k, c] : o.terms) {
    auto it = terms.find(k);
    if (it == terms.end()) {
      terms.emplace(k, -c);
    } else {
      it->second -= c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }
  return *this;
}

Operator Operator::scaled(const Rational& c) const {
  Operator r;
  if (c == 0) return r;
  for (const auto& [k, f] : terms) r.terms.emplace(k, f * RatFn(MPoly(c)));
  return r;
}

KLRBlock::KLRBlock(const Datum& d, const KLRParams& p, RootVector alpha, int cap)
    : datum_(&d), params_(&p), alpha_(std::move(alpha)) {
  d_ = height(alpha_);
  if (d_ > cap) throw CapExceeded("height " + std::to_string(d_) + " exceeds cap " + std::to_string(cap));
  seqs_ = enumerate_seq(d, alpha_, cap);
  for (std::size_t k = 0; k < seqs_.size(); ++k) seq_index_[seqs_[k]] = static_cast<int>(k);
  table_ = &reduced_words(d_);
  act_.resize(table_->perms().size());
  for (std::size_t w = 0; w < act_.size(); ++w) {
    act_[w].resize(seqs_.size());
    for (std::size_t s = 0; s < seqs_.size(); ++s) act_[w][s] = seq_index_.at(perm_act(table_->perms()[w], seqs_[s]));
  }
  for (int t = 0; t + 1 < d_; ++t) taus_.push_back(make_tau(t));
}

int KLRBlock::seq_index(const IndexSequence& s) const {
  auto it = seq_index_.find(s);
  if (it == seq_index_.end()) throw InputError("sequence " + seq_str(*datum_, s) + " not of weight " + root_str(*datum_, alpha_));
  return it->second;
}

int KLRBlock::target(Perm w, int s) const { return act_[static_cast<std::size_t>(table_->index(w))][static_cast<std::size_t>(s)]; }

MPoly KLRBlock::P_at(int i, int a, int b) const { return bipoly_at(params_->P.at(i), a, b); }

MPoly KLRBlock::Q_at(int i, int j, int a, int b) const { return bipoly_at(params_->Q.at({i, j}), a, b); }

Operator KLRBlock::unit(int s) const {
  Operator o;
  o.terms.emplace(std::make_pair(s, perm_identity(d_)), RatFn(MPoly(Rational(1))));
  return o;
}

Operator KLRBlock::identity() const {
  Operator o;
  for (int s = 0; s < static_cast<int>(seqs_.size()); ++s) o.terms.emplace(std::make_pair(s, perm_identity(d_)), RatFn(MPoly(Rational(1))));
  return o;
}

Operator KLRBlock::x(int k) const {
  if (k < 0 || k >= d_) throw InputError("x(" + std::to_string(k + 1) + ") out of range 1.." + std::to_string(d_));
  return poly_all(MPoly::var(k));
}

Operator KLRBlock::poly(const MPoly& f, int s) const {
  Operator o;
  if (!f.is_zero()) o.terms.emplace(std::make_pair(s, perm_identity(d_)), RatFn(f));
  return o;
}

Operator KLRBlock::poly_all(const MPoly& f) const {
  Operator o;
  if (f.is_zero()) return o;
  for (int s = 0; s < static_cast<int>(seqs_.size()); ++s) o.terms.emplace(std::make_pair(s, perm_identity(d_)), RatFn(f));
  return o;
}

Operator KLRBlock::make_tau(int t) const {
  Operator o;
  const Perm r = perm_simple(t, d_);
  const Perm e = perm_identity(d_);
  for (int s = 0; s < static_cast<int>(seqs_.size()); ++s) {
    const int a = seqs_[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)];
    const int b = seqs_[static_cast<std::size_t>(s)][static_cast<std::size_t>(t + 1)];
    if (a == b) {
      RatFn c = RatFn::over_root(P_at(a, t, t + 1), t, t + 1);
      o.terms.emplace(std::make_pair(s, r), c);
      if (!c.is_zero()) o.terms.emplace(std::make_pair(s, e), -c);
    } else if (a > b) {
      o.terms.emplace(std::make_pair(s, r), RatFn(Q_at(b, a, t, t + 1)));
    } else {
      o.terms.emplace(std::make_pair(s, r), RatFn(MPoly(Rational(1))));
    }
  }
  for (auto it = o.terms.begin(); it != o.terms.end();)
    it = it->second.is_zero() ? o.terms.erase(it) : std::next(it);
  return o;
}

Operator KLRBlock::compose(const Operator& a, const Operator& b) const {
  std::map<int, std::vector<const std::pair<const std::pair<int, Perm>, RatFn>*>> by_src;
  for (const auto& term : a.terms) by_src[term.first.first].push_back(&term);
  Operator out;
  for (const auto& [key, g] : b.terms) {
    const int mid = target(key.second, key.first);
    auto it = by_src.find(mid);
    if (it == by_src.end()) continue;
    for (const auto* term : it->second) {
      const Perm w = term->first.second;
      RatFn c = term->second * g.permuted(w, d_);
      if (c.is_zero()) continue;
      auto k = std::make_pair(key.first, perm_compose(w, key.second, d_));
      auto found = out.terms.find(k);
      if (found == out.terms.end())
        out.terms.emplace(k, std::move(c));
      else
        found->second += c;
    }
  }
  for (auto it = out.terms.begin(); it != out.terms.end();)
    it = it->second.is_zero() ? out.terms.erase(it) : std::next(it);
  return out;
}

const Operator& KLRBlock::tau_basis(Perm w, int s) const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = basis_cache_.find({w, s});
    if (it != basis_cache_.end()) return *it->second;
  }
  Operator op = unit(s);
  const auto& word = table_->word(w);
  for (auto t = word.rbegin(); t != word.rend(); ++t) op = compose(taus_[static_cast<std::size_t>(*t)], op);
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto& slot = basis_cache_[{w, s}];
  if (!slot) slot = std::make_unique<Operator>(std::move(op));
  return *slot;
}

QElement KLRBlock::to_normal(const Operator& op) const {
  QElement out;
  Operator rem = op;
  while (!rem.is_zero()) {
    int top = -1;
    for (const auto& [k, c] : rem.terms) top = std::max(top, table_->length(k.second));
    std::vector<std::pair<int, Perm>> keys;
    for (const auto& [k, c] : rem.terms)
      if (table_->length(k.second) == top) keys.push_back(k);
    for (const auto& key : keys) {
      auto it = rem.terms.find(key);
      if (it == rem.terms.end()) continue;
      const auto [s, w] = key;
      const Operator& basis = tau_basis(w, s);
      const RatFn& lead = basis.terms.at(key);
      auto quot = RatFn::divide(it->second, lead);
      if (!quot) throw NotInImage("coefficient of " + seq_str(*datum_, seqs_[static_cast<std::size_t>(s)]) + " is not divisible by the leading coefficient");
      RatFn g = quot->permuted(perm_inverse(w, d_), d_);
      if (!g.is_poly()) throw NotInImage("non-polynomial quotient " + g.to_string());
      for (const auto& [m, c] : g.num().terms()) {
        auto& slot = out[BasisKey{w, m, s}];
        slot += c;
      }
      rem -= compose(basis, poly(g.num(), s));
      if (rem.terms.count(key)) throw NotInImage("residue survived triangular extraction");
    }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

Operator KLRBlock::from_normal(const QElement& e) const {
  std::map<std::pair<Perm, int>, MPoly> groups;
  for (const auto& [k, c] : e) groups[{k.w, k.seq}] += MPoly::monomial(k.t, c);
  Operator out;
  for (const auto& [ws, f] : groups) out += compose(tau_basis(ws.first, ws.second), poly(f, ws.second));
  return out;
}

int KLRBlock::deg_tau(Perm w, int s) const {
  IndexSequence cur = seqs_[static_cast<std::size_t>(s)];
  int deg = 0;
  const auto& word = table_->word(w);
  for (auto t = word.rbegin(); t != word.rend(); ++t) {
    deg -= datum_->sym(cur[static_cast<std::size_t>(*t)], cur[static_cast<std::size_t>(*t + 1)]);
    std::swap(cur[static_cast<std::size_t>(*t)], cur[static_cast<std::size_t>(*t + 1)]);
  }
  return deg;
}

int KLRBlock::degree(const BasisKey& k) const {
  int deg = deg_tau(k.w, k.seq);
  const auto& i = seqs_[static_cast<std::size_t>(k.seq)];
  for (int p = 0; p < d_; ++p) deg += 2 * datum_->s[static_cast<std::size_t>(i[static_cast<std::size_t>(p)])] * mono_exp(k.t, p);
  return deg;
}

// ---------------------------------------------------------------- elements

Element element_from(const RootVector& alpha, const QElement& e, int qpower) {
  Element r{alpha, {}};
  for (const auto& [k, c] : e)
    if (c != 0) r.terms.emplace(k, QLaurent(c, qpower));
  return r;
}

Element add(const Element& a, const Element& b) {
  Element r = a;
  for (const auto& [k, c] : b.terms) {
    auto& slot = r.terms[k];
    slot += c;
    if (slot.is_zero()) r.terms.erase(k);
  }
  return r;
}

Element sub(const Element& a, const Element& b) { return add(a, scale(b, QLaurent(Rational(-1)))); }

Element scale(const Element& a, const QLaurent& c) {
  Element r{a.alpha, {}};
  if (c.is_zero()) return r;
  for (const auto& [k, v] : a.terms) {
    QLaurent p = v * c;
    if (!p.is_zero()) r.terms.emplace(k, std::move(p));
  }
  return r;
}

std::map<int, QElement> by_qpower(const Element& e) {
  std::map<int, QElement> out;
  for (const auto& [k, c] : e.terms)
    for (const auto& [p, v] : c.terms()) out[p][k] = v;
  return out;
}

Operator to_operator(const KLRBlock& blk, const QElement& e) { return blk.from_normal(e); }

Element multiply(const KLRBlock& blk, const Element& a, const Element& b) {
  Element r{blk.alpha(), {}};
  auto pa = by_qpower(a), pb = by_qpower(b);
  std::map<int, Operator> oa, ob;
  for (const auto& [p, e] : pa) oa[p] = blk.from_normal(e);
  for (const auto& [p, e] : pb) ob[p] = blk.from_normal(e);
  std::map<int, Operator> prod;
  for (const auto& [p, x] : oa)
    for (const auto& [k, y] : ob) prod[p + k] += blk.compose(x, y);
  for (const auto& [p, op] : prod) r = add(r, element_from(blk.alpha(), blk.to_normal(op), p));
  return r;
}

Element one(const KLRBlock& blk) { return element_from(blk.alpha(), blk.to_normal(blk.identity())); }

Element idempotent(const KLRBlock& blk, int s) {
  QElement e;
  e[BasisKey{perm_identity(blk.d()), 0, s}] = 1;
  return element_from(blk.alpha(), e);
}

Element x_elem(const KLRBlock& blk, int k) { return element_from(blk.alpha(), blk.to_normal(blk.x(k))); }

Element tau_elem(const KLRBlock& blk, int t) {
  if (t < 0 || t + 1 >= blk.d()) throw InputError("tau(" + std::to_string(t + 1) + ") out of range 1.." + std::to_string(blk.d() - 1));
  return element_from(blk.alpha(), blk.to_normal(blk.tau(t)));
}

int degree(const KLRBlock& blk, const Element& e) {
  if (e.is_zero()) throw NotHomogeneous("zero element has no degree");
  int deg = 0;
  bool first = true;
  for (const auto& [k, c] : e.terms) {
    const int dk = blk.degree(k);
    if (first) {
      deg = dk;
      first = false;
    } else if (dk != deg) {
      throw NotHomogeneous("terms of degrees " + std::to_string(deg) + " and " + std::to_string(dk));
    }
  }
  return deg;
}

Element psi(const KLRBlock& blk, const Element& e) {
  Element r{blk.alpha(), {}};
  for (const auto& [k, c] : e.terms) {
    Operator op = blk.poly(MPoly::monomial(k.t, 1), k.seq);
    const auto& word = blk.words().word(k.w);
    for (auto t = word.rbegin(); t != word.rend(); ++t) op = blk.compose(op, blk.tau(*t));
    r = add(r, scale(element_from(blk.alpha(), blk.to_normal(op)), c));
  }
  return r;
}

namespace {

std::string coeff_prefix(const QLaurent& c, bool has_rest) {
  if (c == QLaurent(Rational(1))) return "";
  if (c == QLaurent(Rational(-1))) return has_rest ? "-" : "-1";
  std::string s = c.to_string();
  if (c.terms().size() > 1) s = "(" + s + ")";
  return has_rest ? s + "*" : s;
}

std::string mono_str(Mono m, int d) {
  std::string out;
  for (int k = 0; k < d; ++k) {
    const int e = mono_exp(m, k);
    if (!e) continue;
    if (!out.empty()) out += "*";
    out += "x(" + std::to_string(k + 1) + ")";
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out;
}

}  // namespace

std::string to_string(const KLRBlock& blk, const Element& e) {
  if (e.is_zero()) return "0";
  std::map<std::pair<int, int>, std::vector<std::pair<Mono, QLaurent>>> groups;  // (seq, perm index)
  for (const auto& [k, c] : e.terms) groups[{k.seq, blk.words().index(k.w)}].emplace_back(k.t, c);
  std::string out;
  for (auto& [key, terms] : groups) {
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
      const int da = mono_degree(a.first), db = mono_degree(b.first);
      if (da != db) return da < db;
      return a.first > b.first;
    });
    const Perm w = blk.words().perms()[static_cast<std::size_t>(key.second)];
    std::string taus;
    for (int t : blk.words().word(w)) taus += "tau(" + std::to_string(t + 1) + ")*";
    std::string idem = "e(";
    const auto& seq = blk.seqs()[static_cast<std::size_t>(key.first)];
    for (std::size_t p = 0; p < seq.size(); ++p) idem += (p ? "," : "") + blk.datum().indices[static_cast<std::size_t>(seq[p])];
    idem += ")";
    std::string group;
    if (terms.size() == 1) {
      const std::string m = mono_str(terms[0].first, blk.d());
      group = coeff_prefix(terms[0].second, true) + taus + (m.empty() ? "" : m + "*") + idem;
    } else {
      std::string poly;
      for (const auto& [m, c] : terms) {
        const std::string ms = mono_str(m, blk.d());
        std::string t = ms.empty() ? (c.terms().size() > 1 ? "(" + c.to_string() + ")" : c.to_string()) : coeff_prefix(c, true) + ms;
        if (!poly.empty() && t[0] != '-') poly += "+";
        poly += t;
      }
      group = taus + "(" + poly + ")*" + idem;
    }
    if (!out.empty() && group[0] != '-') out += "+";
    out += group;
  }
  return out;
}

std::string to_json(const KLRBlock& blk, const Element& e) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [k, c] : e.terms) {
    std::vector<int> word;
    for (int t : blk.words().word(k.w)) word.push_back(t + 1);
    std::vector<std::string> seq;
    for (int i : blk.seqs()[static_cast<std::size_t>(k.seq)]) seq.push_back(blk.datum().indices[static_cast<std::size_t>(i)]);
    arr.push_back({{"word", word}, {"exps", mono_to(k.t, blk.d())}, {"seq", seq}, {"coeff", c.to_string()}});
  }
  return arr.dump();
}

}  // namespace klr
