#include "klr/kzero.hpp"

#include <algorithm>

#include "json.hpp"
#include "klr/klr.hpp"
#include "klr/linalg.hpp"
#include "klr/qalgebra.hpp"

namespace klr {

namespace {

IndexSequence expand(const DividedSequence& s) {
  IndexSequence out;
  for (const auto& [i, m] : s) out.insert(out.end(), static_cast<std::size_t>(m), i);
  return out;
}

DividedSequence plain(const IndexSequence& w) {
  DividedSequence out;
  for (int i : w) out.emplace_back(i, 1);
  return out;
}

bool multiplicity_one(const DividedSequence& s) {
  return std::all_of(s.begin(), s.end(), [](const auto& b) { return b.second == 1; });
}

void add_term(std::map<DividedSequence, QLaurent>& m, const DividedSequence& k, const QLaurent& c) {
  if (c.is_zero()) return;
  auto& slot = m[k];
  slot += c;
  if (slot.is_zero()) m.erase(k);
}

void add_term(K0Tensor& t, const DividedSequence& a, const DividedSequence& b, const QLaurent& c) {
  if (c.is_zero()) return;
  auto key = std::make_pair(a, b);
  auto& slot = t.terms[key];
  slot += c;
  if (slot.is_zero()) t.terms.erase(key);
}

DividedSequence concat_seqd(const DividedSequence& a, const DividedSequence& b) {
  DividedSequence r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

/// Product of [d]_i! over the real divided blocks.
QRat block_factorial(const Datum& d, const DividedSequence& s) {
  QRat r(1);
  for (const auto& [i, m] : s)
    if (d.is_real(i) && m > 1) r *= qfactorial(d, m, i, IndexKind::real);
  return r;
}

}  // namespace

K0Elem k0_unit(const Datum& d) { return k0_symbol(d, {}); }

K0Elem k0_symbol(const Datum& d, const DividedSequence& s, const QLaurent& c) {
  K0Elem e{weight_of(d, s), {}};
  add_term(e.terms, s, c);
  return e;
}

K0Elem k0_word(const Datum& d, const IndexSequence& w) { return k0_symbol(d, plain(w)); }

K0Elem k0_add(const K0Elem& a, const K0Elem& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.alpha != b.alpha) throw InputError("adding K0 elements of different weights");
  K0Elem r = a;
  for (const auto& [k, c] : b.terms) add_term(r.terms, k, c);
  return r;
}

K0Elem k0_scale(const K0Elem& a, const QLaurent& c) {
  K0Elem r{a.alpha, {}};
  for (const auto& [k, v] : a.terms) add_term(r.terms, k, v * c);
  return r;
}

K0Elem k0_mult(const K0Elem& a, const K0Elem& b) {
  RootVector alpha = a.alpha;
  for (std::size_t k = 0; k < alpha.size(); ++k) alpha[k] += b.alpha[k];
  K0Elem r{alpha, {}};
  for (const auto& [x, c] : a.terms)
    for (const auto& [y, e] : b.terms) add_term(r.terms, concat_seqd(x, y), c * e);
  return r;
}

K0Elem k0_bar(const K0Elem& a) {
  K0Elem r{a.alpha, {}};
  for (const auto& [k, c] : a.terms) add_term(r.terms, k, c.bar());
  return r;
}

K0Tensor k0_comult(const Datum& d, const K0Elem& a) {
  K0Tensor out;
  for (const auto& [s, c] : a.terms) {
    if (!multiplicity_one(s)) throw DividedPowerUnsupported("restriction of " + seqd_str(d, s) + " needs multiplicity-one blocks");
    for (const auto& t : coproduct_split(d, expand(s))) add_term(out, plain(t.left), plain(t.right), c * QLaurent::q(t.power));
  }
  return out;
}

K0Tensor k0_tensor_mult(const Datum& d, const K0Tensor& a, const K0Tensor& b) {
  K0Tensor out;
  for (const auto& [x, c] : a.terms)
    for (const auto& [y, e] : b.terms) {
      const int tw = -sym_form(d, weight_of(d, x.second), weight_of(d, y.first));
      add_term(out, concat_seqd(x.first, y.first), concat_seqd(x.second, y.second), c * e * QLaurent::q(tw));
    }
  return out;
}

K0Elem phi(const Datum& d, const DividedSequence& monomial) {
  DividedSequence s;
  for (const auto& [i, m] : monomial) {
    if (m < 1) throw InputError("divided power multiplicity must be at least 1");
    if (d.is_real(i)) s.emplace_back(i, m);
    else s.insert(s.end(), static_cast<std::size_t>(m), {i, 1});
  }
  return k0_symbol(d, s);
}

int k0_shift(const Datum& d, const DividedSequence& s) {
  int total = 0;
  for (const auto& [i, m] : s)
    if (d.is_real(i)) total += m * (m - 1) * sym_form(d, i, i) / 4;
  return total;
}

QRat k0_pair_symbols(const Datum& d, const DividedSequence& a, const DividedSequence& b) {
  if (weight_of(d, a) != weight_of(d, b)) return QRat(0);
  for (const auto& [i, m] : a)
    if (!d.is_real(i) && m > 1) throw InputError("imaginary divided block in " + seqd_str(d, a));
  for (const auto& [i, m] : b)
    if (!d.is_real(i) && m > 1) throw InputError("imaginary divided block in " + seqd_str(d, b));
  return qdim_block(d, expand(a), expand(b)) / (block_factorial(d, a) * block_factorial(d, b));
}

QRat k0_pair(const Datum& d, const K0Elem& a, const K0Elem& b) {
  if (a.is_zero() || b.is_zero()) return QRat(0);
  if (a.alpha != b.alpha) return QRat(0);
  QRat r(0);
  for (const auto& [x, c] : a.terms)
    for (const auto& [y, e] : b.terms) r += QRat(c * e) * k0_pair_symbols(d, x, y);
  return r;
}

QRat k0_pair_tensor(const Datum& d, const K0Tensor& a, const K0Tensor& b) {
  QRat r(0);
  for (const auto& [x, c] : a.terms)
    for (const auto& [y, e] : b.terms) {
      if (weight_of(d, x.first) != weight_of(d, y.first) || weight_of(d, x.second) != weight_of(d, y.second)) continue;
      r += QRat(c * e) * k0_pair_symbols(d, x.first, y.first) * k0_pair_symbols(d, x.second, y.second);
    }
  return r;
}

std::map<int, Rational> k0_pair_series(const Datum& d, const DividedSequence& a, const DividedSequence& b, int order) {
  const IndexSequence sa = expand(a), sb = expand(b);
  const RootVector alpha = weight_of(d, sa);
  if (alpha != weight_of(d, sb)) return {};
  const int n = static_cast<int>(sa.size());
  std::map<int, Rational> out;
  if (n == 0) {
    if (order >= 0) out[0] = 1;
    return out;
  }
  const KLRParams p = default_params(d);
  KLRBlock blk(d, p, alpha, std::max(6, n));
  const int ia = blk.seq_index(sa), ib = blk.seq_index(sb);
  auto idem = [&](const DividedSequence& s, int idx) {
    std::vector<std::pair<int, int>> blocks;
    int off = 0;
    for (const auto& [i, m] : s) {
      if (d.is_real(i) && m > 1) blocks.emplace_back(off, m);
      off += m;
    }
    return blocks.empty() ? blk.unit(idx) : divided_blocks(blk, idx, blocks);
  };
  const Operator ea = idem(a, ia), eb = idem(b, ib);
  const int shift = k0_shift(d, a) - k0_shift(d, b);
  const int top = order - shift;

  std::map<int, std::vector<BasisKey>> by_degree;
  std::vector<int> steps;
  for (int k : sb) steps.push_back(2 * d.s[static_cast<std::size_t>(k)]);
  for (Perm w : reduced_words(n).perms()) {
    if (perm_act(w, sb) != sa) continue;
    const int dw = deg_tau(d, w, sb);
    std::vector<int> exps(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int k, int deg) -> void {
      if (k == n) {
        by_degree[deg].push_back(BasisKey{w, mono_from(exps), ib});
        return;
      }
      for (int e = 0; deg + e * steps[k] <= top; ++e) {
        exps[k] = e;
        self(self, k + 1, deg + e * steps[k]);
      }
      exps[k] = 0;
    };
    if (dw <= top) rec(rec, 0, dw);
  }
  for (const auto& [deg, keys] : by_degree) {
    std::vector<QElement> images(keys.size());
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < static_cast<long>(keys.size()); ++k) {
      const Operator r = blk.from_normal(QElement{{keys[k], Rational(1)}});
      images[k] = blk.to_normal(blk.compose(ea, blk.compose(r, eb)));
    }
    std::map<BasisKey, int> col;
    for (const auto& img : images)
      for (const auto& [key, c] : img) col.emplace(key, static_cast<int>(col.size()));
    Matrix<Rational> m;
    for (const auto& img : images) {
      std::vector<Rational> row(col.size(), Rational(0));
      for (const auto& [key, c] : img) row[col.at(key)] = c;
      m.push_back(std::move(row));
    }
    const int rk = col.empty() ? 0 : rank_of(m);
    if (rk) out[deg + shift] = rk;
  }
  return out;
}

namespace {

std::string series_str(const std::map<int, Rational>& s) {
  std::string r;
  for (const auto& [e, c] : s) {
    if (c == 0) continue;
    if (!r.empty()) r += " + ";
    r += rational_str(c) + "*q^" + std::to_string(e);
  }
  return r.empty() ? "0" : r;
}

std::map<int, Rational> nonzero(const std::map<int, Rational>& s) {
  std::map<int, Rational> r;
  for (const auto& [e, c] : s)
    if (c != 0) r.emplace(e, c);
  return r;
}

UqVector divided_monomial(const UqAlgebra& U, const DividedSequence& s) {
  UqVector v = U.one();
  for (auto it = s.rbegin(); it != s.rend(); ++it) v = U.fdiv(it->first, it->second, v);
  return v;
}

}  // namespace

Report isometry_check(const Datum& d, const RootVector& alpha, int order, bool divided) {
  Report rep;
  rep.name = "isometry " + root_str(d, alpha);
  const int cap = std::max(6, height(alpha));
  const auto words = enumerate_seq(d, alpha, cap);
  Matrix<QRat> gram;
  for (const auto& x : words) {
    std::vector<QRat> row;
    for (const auto& y : words) {
      const QRat lhs = pairingL_words(d, x, y);
      const QRat rhs = k0_pair(d, k0_word(d, x), k0_word(d, y));
      rep.add("(x,y)_L = (Phi x, Phi y)", seq_str(d, x) + " | " + seq_str(d, y), lhs.to_string(), rhs.to_string(), lhs == rhs);
      row.push_back(rhs);
    }
    gram.push_back(std::move(row));
  }
  UqAlgebra U(d, cap, false);
  const int dim = U.space(alpha).dim();
  const int rk = rank_of(gram);
  rep.add("rank of K0 Gram = dim", root_str(d, alpha), std::to_string(dim), std::to_string(rk), rk == dim);
  if (!divided) return rep;
  const auto seqd = enumerate_seqd(d, alpha, cap);
  for (const auto& x : seqd)
    for (const auto& y : seqd) {
      if (multiplicity_one(x) && multiplicity_one(y)) continue;
      const std::string inst = seqd_str(d, x) + " | " + seqd_str(d, y);
      const QRat closed = k0_pair_symbols(d, x, y);
      const QRat uq = U.pairingL(divided_monomial(U, x), divided_monomial(U, y));
      rep.add("(f^(x), f^(y))_L = ([P_x],[P_y])", inst, uq.to_string(), closed.to_string(), uq == closed);
      const auto want = nonzero(closed.series(order));
      const auto got = k0_pair_series(d, x, y, order);
      rep.add("qdim(e_x R e_y) series to order " + std::to_string(order), inst, series_str(want), series_str(got), want == got);
    }
  return rep;
}

Report serre_k0_check(const Datum& d, int i, int j) {
  if (i == j) throw InputError("serre relation needs distinct indices");
  if (!d.is_real(i)) throw InputError("serre relation needs a real index " + d.indices[static_cast<std::size_t>(i)]);
  Report rep;
  const int aij = d.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  const std::string pair = d.indices[static_cast<std::size_t>(i)] + "," + d.indices[static_cast<std::size_t>(j)];
  rep.name = "serre in K0 " + pair;
  K0Elem sum;
  if (aij == 0) {
    sum = k0_add(k0_word(d, {i, j}), k0_scale(k0_word(d, {j, i}), QLaurent(Rational(-1))));
  } else {
    const int N = 1 - aij;
    for (int k = 0; k <= N; ++k) {
      DividedSequence s;
      if (k) s.emplace_back(i, k);
      s.emplace_back(j, 1);
      if (N - k) s.emplace_back(i, N - k);
      sum = k0_add(sum, k0_scale(k0_symbol(d, s), QLaurent(Rational(k % 2 ? -1 : 1))));
    }
  }
  for (const auto& w : enumerate_seq(d, sum.alpha, std::max(6, height(sum.alpha)))) {
    const QRat v = k0_pair(d, sum, k0_word(d, w));
    rep.add("alternating sum orthogonal to words", seq_str(d, w), "0", v.to_string(), v.is_zero());
  }
  return rep;
}

Report bialgebra_check(const Datum& d, const RootVector& alpha, const RootVector& beta) {
  Report rep;
  rep.name = "bialgebra " + root_str(d, alpha) + " x " + root_str(d, beta);
  RootVector gamma = alpha;
  for (std::size_t k = 0; k < gamma.size(); ++k) gamma[k] += beta[k];
  const int cap = std::max(6, height(gamma));
  const auto wa = enumerate_seq(d, alpha, cap), wb = enumerate_seq(d, beta, cap), wg = enumerate_seq(d, gamma, cap);
  for (const auto& x : wa)
    for (const auto& y : wb) {
      const K0Elem a = k0_word(d, x), b = k0_word(d, y);
      const K0Tensor lhs = k0_comult(d, k0_mult(a, b));
      const K0Tensor rhs = k0_tensor_mult(d, k0_comult(d, a), k0_comult(d, b));
      rep.add("res(ab) = res(a) res(b)", seq_str(d, x) + " * " + seq_str(d, y), to_string(d, rhs), to_string(d, lhs), lhs == rhs);
      const K0Elem qa = k0_scale(a, QLaurent::q(1));
      const bool bar_ok = k0_bar(k0_mult(qa, b)) == k0_mult(k0_bar(qa), k0_bar(b));
      rep.add("bar(ab) = bar(a) bar(b)", "q" + seq_str(d, x) + " * " + seq_str(d, y), "equal", bar_ok ? "equal" : "differ", bar_ok);
      for (const auto& l : wg) {
        const QRat left = k0_pair(d, k0_word(d, l), k0_mult(a, b));
        K0Tensor mn;
        mn.terms[{plain(x), plain(y)}] = QLaurent(Rational(1));
        const QRat right = k0_pair_tensor(d, k0_comult(d, k0_word(d, l)), mn);
        rep.add("([L],[M][N]) = (res L, M x N)", seq_str(d, l) + " | " + seq_str(d, x) + " * " + seq_str(d, y), left.to_string(), right.to_string(),
                left == right);
      }
    }
  for (const auto& l : wg) {
    const K0Tensor r = k0_comult(d, k0_word(d, l));
    K0Elem left{gamma, {}}, right{gamma, {}};
    for (const auto& [k, c] : r.terms) {
      if (k.first.empty()) add_term(left.terms, k.second, c);
      if (k.second.empty()) add_term(right.terms, k.first, c);
    }
    const K0Elem x = k0_word(d, l);
    rep.add("counit", seq_str(d, l), to_string(d, x), to_string(d, left) + " ; " + to_string(d, right), left == x && right == x);
    const bool unit_ok = k0_mult(k0_unit(d), x) == x && k0_mult(x, k0_unit(d)) == x;
    rep.add("unit", seq_str(d, l), "1*x = x*1 = x", unit_ok ? "yes" : "no", unit_ok);
  }
  if (!wa.empty() && !wb.empty()) {
    const K0Elem a = k0_word(d, wa.front()), b = k0_word(d, wb.front()), c = k0_word(d, wg.back());
    const bool assoc = k0_mult(k0_mult(a, b), c) == k0_mult(a, k0_mult(b, c));
    rep.add("associativity", seq_str(d, wa.front()) + " " + seq_str(d, wb.front()) + " " + seq_str(d, wg.back()), "equal", assoc ? "equal" : "differ",
            assoc);
  }
  return rep;
}

std::string seqd_str(const Datum& d, const DividedSequence& s) {
  std::string r = "(";
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k) r += ",";
    r += d.indices[static_cast<std::size_t>(s[k].first)];
    if (s[k].second != 1) r += "^(" + std::to_string(s[k].second) + ")";
  }
  return r + ")";
}

namespace {

std::string coeff_prefix(const QLaurent& c) {
  if (c == QLaurent(Rational(1))) return "";
  if (c == QLaurent(Rational(-1))) return "-";
  return "(" + c.to_string() + ")*";
}

}  // namespace

std::string to_string(const Datum& d, const K0Elem& a) {
  if (a.is_zero()) return "0";
  std::string r;
  for (const auto& [s, c] : a.terms) {
    if (!r.empty()) r += " + ";
    r += coeff_prefix(c) + "[P_" + seqd_str(d, s) + "]";
  }
  return r;
}

std::string to_string(const Datum& d, const K0Tensor& a) {
  if (a.terms.empty()) return "0";
  std::string r;
  for (const auto& [k, c] : a.terms) {
    if (!r.empty()) r += " + ";
    r += coeff_prefix(c) + "[P_" + seqd_str(d, k.first) + "]x[P_" + seqd_str(d, k.second) + "]";
  }
  return r;
}

std::string to_json(const Datum& d, const K0Elem& a) {
  nlohmann::ordered_json j;
  j["alpha"] = a.alpha;
  j["terms"] = nlohmann::ordered_json::array();
  for (const auto& [s, c] : a.terms) {
    nlohmann::ordered_json seq = nlohmann::ordered_json::array();
    for (const auto& [i, m] : s) seq.push_back({d.indices[static_cast<std::size_t>(i)], m});
    j["terms"].push_back({{"seq", seq}, {"coeff", c.to_string()}});
  }
  return j.dump();
}

}  // namespace klr
