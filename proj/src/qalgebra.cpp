#include "klr/qalgebra.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"

namespace klr {

namespace {

using KMemo = std::map<std::pair<Word, Word>, QLaurent>;

QLaurent kform(const Datum& d, const Word& x, const Word& y, KMemo& memo) {
  if (x.size() != y.size()) return {};
  if (y.empty()) return QLaurent(Rational(1));
  auto key = std::make_pair(x, y);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  const int j = y[0];
  const Word z(y.begin() + 1, y.end());
  QLaurent out;
  int acc = 0;
  for (std::size_t l = 0; l < x.size(); ++l) {
    if (x[l] == j) {
      Word rest = x;
      rest.erase(rest.begin() + static_cast<long>(l));
      QLaurent sub = kform(d, rest, z, memo);
      if (!sub.is_zero()) out += sub.shift(-acc);
    }
    acc += d.sym(j, x[l]);
  }
  memo.emplace(std::move(key), out);
  return out;
}

bool valid_root(const RootVector& a) {
  return std::all_of(a.begin(), a.end(), [](int x) { return x >= 0; });
}

bool in_qA0(const QRat& x) { return x.is_zero() || x.val0() >= 1; }

std::string coeff_str(const QRat& c) { return c.to_string(); }

bool is_integer(const Rational& r) { return r.get_den() == 1; }

}  // namespace

std::vector<SplitTerm> coproduct_split(const Datum& d, const Word& w) {
  const int n = static_cast<int>(w.size());
  std::vector<SplitTerm> out;
  out.reserve(std::size_t{1} << n);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    SplitTerm t;
    for (int k = 0; k < n; ++k) {
      if (mask >> k & 1u) {
        t.left.push_back(w[k]);
        for (int m = 0; m < k; ++m)
          if (!(mask >> m & 1u)) t.power -= d.sym(w[m], w[k]);
      } else {
        t.right.push_back(w[k]);
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

QLaurent pairingK_words(const Datum& d, const Word& x, const Word& y) {
  KMemo memo;
  return kform(d, x, y, memo);
}

QRat l_factor(const Datum& d, const RootVector& alpha) {
  QRat r(1);
  for (int i = 0; i < d.n(); ++i) {
    const QRat base = QRat(1) - qi_pow(d, i, 2);
    for (int k = 0; k < alpha[i]; ++k) r /= base;
  }
  return r;
}

QRat pairingL_words(const Datum& d, const Word& x, const Word& y) {
  if (weight_of(d, x) != weight_of(d, y)) return QRat(0);
  return QRat(pairingK_words(d, x, y)) * l_factor(d, weight_of(d, x));
}

QRat pairingL_coproduct(const Datum& d, const Word& x, const Word& y) {
  if (x.size() != y.size()) return QRat(0);
  if (y.empty()) return QRat(1);
  const int j = y[0];
  const Word z(y.begin() + 1, y.end());
  QRat out(0);
  for (const auto& t : coproduct_split(d, x)) {
    if (t.left.size() != 1 || t.left[0] != j) continue;
    QRat rest = pairingL_coproduct(d, t.right, z);
    if (rest.is_zero()) continue;
    out += QRat::q(t.power) * rest / (QRat(1) - qi_pow(d, j, 2));
  }
  return out;
}

Matrix<QRat> gram_K(const Datum& d, const std::vector<Word>& words, bool parallel) {
  const int n = static_cast<int>(words.size());
  Matrix<QRat> g(static_cast<std::size_t>(n), std::vector<QRat>(static_cast<std::size_t>(n)));
  if (parallel) {
#pragma omp parallel
    {
      KMemo memo;
#pragma omp for schedule(dynamic)
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) g[r][c] = QRat(kform(d, words[r], words[c], memo));
    }
  } else {
    KMemo memo;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) g[r][c] = QRat(kform(d, words[r], words[c], memo));
  }
  return g;
}

UqVector add(const UqVector& a, const UqVector& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return b;
  if (a.alpha != b.alpha) throw std::invalid_argument("adding vectors of different weights");
  UqVector r = a;
  for (std::size_t k = 0; k < r.c.size(); ++k) r.c[k] += b.c[k];
  return r;
}

UqVector scale(const UqVector& a, const QRat& s) {
  UqVector r = a;
  for (auto& x : r.c) x *= s;
  return r;
}

UqVector sub(const UqVector& a, const UqVector& b) { return add(a, scale(b, QRat(-1))); }

std::string word_str(const Datum& d, const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) s += "*";
    s += "f" + d.indices[static_cast<std::size_t>(w[k])];
  }
  return s;
}

UqAlgebra::UqAlgebra(Datum d, int cap, bool parallel) : d_(std::move(d)), cap_(cap), parallel_(parallel) {}

RootVector UqAlgebra::shifted(const RootVector& a, int i, int by) const {
  RootVector r = a;
  r[static_cast<std::size_t>(i)] += by;
  return r;
}

const WeightSpace& UqAlgebra::space(const RootVector& alpha) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = spaces_.find(alpha); it != spaces_.end()) return *it->second;
  }
  auto ws = std::make_unique<WeightSpace>();
  ws->alpha = alpha;
  if (static_cast<int>(alpha.size()) == d_.n() && valid_root(alpha)) {
    ws->words = enumerate_seq(d_, alpha, cap_);
    ws->gram = gram_K(d_, ws->words, parallel_);
    ws->pivots = independent_rows(ws->gram);
    Matrix<QRat> block;
    for (int r : ws->pivots) {
      std::vector<QRat> row;
      for (int c : ws->pivots) row.push_back(ws->gram[r][c]);
      block.push_back(std::move(row));
    }
    auto inv = inverse(block);
    if (!inv) throw SolveFailed("singular pivot block at " + root_str(d_, alpha));
    ws->pivot_inv = std::move(*inv);
  }
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = spaces_.emplace(alpha, std::move(ws));
  return *it->second;
}

UqVector UqAlgebra::zero(const RootVector& alpha) const {
  return UqVector{alpha, std::vector<QRat>(static_cast<std::size_t>(space(alpha).dim()))};
}

UqVector UqAlgebra::one() const { return from_word({}); }

UqVector UqAlgebra::from_words(const RootVector& alpha, const std::map<Word, QRat>& combo) const {
  const auto& ws = space(alpha);
  std::vector<QRat> rhs(static_cast<std::size_t>(ws.dim()));
  for (const auto& [w, c] : combo) {
    if (c.is_zero()) continue;
    auto it = std::lower_bound(ws.words.begin(), ws.words.end(), w);
    if (it == ws.words.end() || *it != w) throw std::invalid_argument("word " + seq_str(d_, w) + " not of weight " + root_str(d_, alpha));
    const auto col = static_cast<std::size_t>(it - ws.words.begin());
    for (int k = 0; k < ws.dim(); ++k) rhs[k] += c * ws.gram[ws.pivots[k]][col];
  }
  UqVector v{alpha, std::vector<QRat>(rhs.size())};
  for (std::size_t r = 0; r < rhs.size(); ++r)
    for (std::size_t k = 0; k < rhs.size(); ++k)
      if (!rhs[k].is_zero()) v.c[r] += ws.pivot_inv[r][k] * rhs[k];
  return v;
}

UqVector UqAlgebra::from_word(const Word& w) const {
  return from_words(weight_of(d_, w), {{w, QRat(1)}});
}

std::map<Word, QRat> UqAlgebra::words_of(const UqVector& v) const {
  std::map<Word, QRat> out;
  if (v.is_zero()) return out;
  const auto& ws = space(v.alpha);
  for (int k = 0; k < ws.dim(); ++k)
    if (!v.c[k].is_zero()) out[ws.words[ws.pivots[k]]] = v.c[k];
  return out;
}

std::vector<QRat> UqAlgebra::dual_coords(const UqVector& v) const {
  const auto& ws = space(v.alpha);
  std::vector<QRat> out(ws.words.size());
  if (v.is_zero()) return out;
  for (std::size_t w = 0; w < ws.words.size(); ++w)
    for (int k = 0; k < ws.dim(); ++k)
      if (!v.c[k].is_zero()) out[w] += v.c[k] * ws.gram[ws.pivots[k]][w];
  return out;
}

QRat UqAlgebra::pairingK(const UqVector& a, const UqVector& b) const {
  if (a.is_zero() || b.is_zero() || a.alpha != b.alpha) return QRat(0);
  const auto& ws = space(a.alpha);
  QRat r(0);
  for (int k = 0; k < ws.dim(); ++k) {
    if (a.c[k].is_zero()) continue;
    for (int m = 0; m < ws.dim(); ++m)
      if (!b.c[m].is_zero()) r += a.c[k] * b.c[m] * ws.gram[ws.pivots[k]][ws.pivots[m]];
  }
  return r;
}

QRat UqAlgebra::pairingL(const UqVector& a, const UqVector& b) const {
  QRat k = pairingK(a, b);
  return k.is_zero() ? k : k * l_factor(d_, a.alpha);
}

const Matrix<QRat>& UqAlgebra::op_matrix(OpKind kind, int i, const RootVector& alpha) const {
  auto key = std::make_tuple(alpha, i, static_cast<int>(kind));
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = ops_.find(key); it != ops_.end()) return *it->second;
  }
  const auto& src = space(alpha);
  const RootVector tgt = shifted(alpha, i, kind == kF ? 1 : -1);
  const int tdim = space(tgt).dim();
  auto m = std::make_unique<Matrix<QRat>>(static_cast<std::size_t>(tdim), std::vector<QRat>(static_cast<std::size_t>(src.dim())));
  if (tdim > 0) {
    for (int k = 0; k < src.dim(); ++k) {
      const Word& p = src.words[src.pivots[k]];
      std::map<Word, QRat> combo;
      if (kind == kF) {
        Word w{i};
        w.insert(w.end(), p.begin(), p.end());
        combo[w] = QRat(1);
      } else {
        int acc = 0;
        for (std::size_t l = 0; l < p.size(); ++l) {
          if (p[l] == i) {
            Word rest = p;
            rest.erase(rest.begin() + static_cast<long>(l));
            combo[rest] += qi_pow(d_, i, kind == kE ? -acc : acc);
          }
          acc += d_.A[i][p[l]];
        }
      }
      UqVector img = from_words(tgt, combo);
      for (int r = 0; r < tdim; ++r) (*m)[r][k] = img.c[r];
    }
  }
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = ops_.emplace(key, std::move(m));
  return *it->second;
}

UqVector UqAlgebra::apply(OpKind kind, int i, const UqVector& v) const {
  const RootVector tgt = shifted(v.alpha, i, kind == kF ? 1 : -1);
  if (v.is_zero()) return UqVector{tgt, {}};
  const auto& m = op_matrix(kind, i, v.alpha);
  UqVector out{tgt, std::vector<QRat>(m.size())};
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t k = 0; k < v.c.size(); ++k)
      if (!v.c[k].is_zero() && !m[r][k].is_zero()) out.c[r] += m[r][k] * v.c[k];
  return out;
}

UqVector UqAlgebra::fmult(int j, const UqVector& v) const { return apply(kF, j, v); }

UqVector UqAlgebra::fdiv(int j, int n, const UqVector& v) const {
  UqVector r = v;
  for (int k = 0; k < n; ++k) r = apply(kF, j, r);
  if (d_.is_real(j) && n > 1) r = scale(r, qfactorial(d_, n, j, IndexKind::real).inverse());
  return r;
}

UqVector UqAlgebra::eprime(int i, const UqVector& v) const { return apply(kE, i, v); }

UqVector UqAlgebra::eprime_div(int i, int n, const UqVector& v) const {
  UqVector r = v;
  for (int k = 0; k < n; ++k) r = apply(kE, i, r);
  if (!d_.is_real(i) && n > 1) r = scale(r, qfactorial(d_, n, i, IndexKind::imaginary).inverse());
  return r;
}

UqVector UqAlgebra::eprime2(int i, const UqVector& v) const { return apply(kE2, i, v); }

UqVector UqAlgebra::bar(const UqVector& v) const {
  UqVector r = v;
  for (auto& x : r.c) x = x.bar();
  return r;
}

int UqAlgebra::ell(int i, const UqVector& v) const {
  if (v.is_zero()) return -1;
  int n = 0;
  UqVector w = eprime(i, v);
  while (!w.is_zero()) {
    ++n;
    w = eprime(i, w);
  }
  return n;
}

std::vector<UqVector> UqAlgebra::kernel(int i, const RootVector& alpha) const {
  const auto& m = op_matrix(kE, i, alpha);
  const int dim = space(alpha).dim();
  std::vector<UqVector> out;
  for (auto& c : nullspace(m, dim)) out.push_back(UqVector{alpha, std::move(c)});
  return out;
}

std::vector<UqVector> UqAlgebra::string_decomp(int i, const UqVector& v) const {
  const int k = v.alpha[static_cast<std::size_t>(i)];
  const int dim = space(v.alpha).dim();
  std::vector<std::pair<int, UqVector>> cols;  // (l, kernel vector)
  Matrix<QRat> a(static_cast<std::size_t>(dim));
  for (int l = 0; l <= k; ++l) {
    for (auto& kv : kernel(i, shifted(v.alpha, i, -l))) {
      UqVector img = fdiv(i, l, kv);
      for (int r = 0; r < dim; ++r) a[r].push_back(img.c.empty() ? QRat(0) : img.c[r]);
      cols.emplace_back(l, std::move(kv));
    }
  }
  if (static_cast<int>(cols.size()) != dim)
    throw SolveFailed("string decomposition along " + d_.indices[i] + " at " + root_str(d_, v.alpha) + " has " +
                      std::to_string(cols.size()) + " columns for dimension " + std::to_string(dim));
  std::vector<UqVector> u;
  for (int l = 0; l <= k; ++l) u.push_back(zero(shifted(v.alpha, i, -l)));
  if (v.is_zero()) return u;
  auto x = solve(a, v.c);
  if (!x) throw SolveFailed("no string decomposition along " + d_.indices[i] + " at " + root_str(d_, v.alpha));
  for (std::size_t c = 0; c < cols.size(); ++c)
    if (!(*x)[c].is_zero()) u[cols[c].first] = add(u[cols[c].first], scale(cols[c].second, (*x)[c]));
  return u;
}

UqVector UqAlgebra::etilde(int i, const UqVector& v) const {
  UqVector out{shifted(v.alpha, i, -1), {}};
  if (v.is_zero()) return out;
  auto u = string_decomp(i, v);
  for (std::size_t l = 1; l < u.size(); ++l) out = add(out, fdiv(i, static_cast<int>(l) - 1, u[l]));
  return out;
}

UqVector UqAlgebra::ftilde(int i, const UqVector& v) const {
  UqVector out{shifted(v.alpha, i, 1), {}};
  if (v.is_zero()) return out;
  auto u = string_decomp(i, v);
  for (std::size_t l = 0; l < u.size(); ++l) out = add(out, fdiv(i, static_cast<int>(l) + 1, u[l]));
  return out;
}

UqVector UqAlgebra::Etilde(int i, const UqVector& v) const {
  UqVector out{shifted(v.alpha, i, -1), {}};
  if (v.is_zero()) return out;
  auto u = string_decomp(i, v);
  for (int l = 1; l < static_cast<int>(u.size()); ++l) {
    QRat c = d_.is_real(i) ? qi_pow(d_, i, -(l - 1)) / qint(d_, l, i, IndexKind::real)
                           : qint(d_, l, i, IndexKind::imaginary) * qi_pow(d_, i, d_.c(i) * (l - 1));
    out = add(out, scale(fdiv(i, l - 1, u[l]), c));
  }
  return out;
}

UqVector UqAlgebra::Ftilde(int i, const UqVector& v) const {
  UqVector out{shifted(v.alpha, i, 1), {}};
  if (v.is_zero()) return out;
  auto u = string_decomp(i, v);
  for (int l = 0; l < static_cast<int>(u.size()); ++l) {
    QRat c = d_.is_real(i) ? qi_pow(d_, i, l) * qint(d_, l + 1, i, IndexKind::real)
                           : (qint(d_, l + 1, i, IndexKind::imaginary) * qi_pow(d_, i, d_.c(i) * l)).inverse();
    out = add(out, scale(fdiv(i, l + 1, u[l]), c));
  }
  return out;
}

std::string UqAlgebra::to_string(const UqVector& v) const {
  auto terms = words_of(v);
  if (terms.empty()) return "0";
  std::string s;
  for (const auto& [w, c] : terms) {
    if (!s.empty()) s += " + ";
    if (c.is_one()) {
      s += word_str(d_, w);
    } else {
      s += "(" + coeff_str(c) + ")";
      if (!w.empty()) s += "*" + word_str(d_, w);
    }
  }
  return s;
}

std::string UqAlgebra::to_json(const UqVector& v) const {
  nlohmann::ordered_json j;
  j["alpha"] = v.alpha;
  nlohmann::ordered_json words = nlohmann::ordered_json::object();
  for (const auto& [w, c] : words_of(v)) {
    std::string key;
    for (std::size_t k = 0; k < w.size(); ++k) key += (k ? "," : "") + d_.indices[w[k]];
    words[key] = c.to_string();
  }
  j["words"] = words;
  return j.dump();
}

namespace {

std::vector<Rational> class_of(const Matrix<QRat>& inv, const UqVector& v, bool& inside) {
  inside = true;
  std::vector<Rational> out(inv.size());
  for (std::size_t r = 0; r < inv.size(); ++r) {
    QRat x(0);
    for (std::size_t k = 0; k < v.c.size(); ++k)
      if (!v.c[k].is_zero()) x += inv[r][k] * v.c[k];
    if (!x.is_zero() && x.val0() < 0) {
      inside = false;
      return {};
    }
    out[r] = x.ev0();
  }
  return out;
}

bool all_zero(const std::vector<Rational>& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& r) { return r == 0; });
}

/// Echelon basis over A0 of the span of the given coordinate vectors.
Matrix<QRat> a0_echelon(Matrix<QRat> rows) {
  Matrix<QRat> basis;
  while (!rows.empty()) {
    int br = -1, bc = -1, bv = 0;
    for (int r = 0; r < static_cast<int>(rows.size()); ++r)
      for (int c = 0; c < static_cast<int>(rows[r].size()); ++c) {
        if (rows[r][c].is_zero()) continue;
        const int v = rows[r][c].val0();
        if (br < 0 || v < bv) br = r, bc = c, bv = v;
      }
    if (br < 0) break;
    std::vector<QRat> piv = rows[br];
    rows.erase(rows.begin() + br);
    for (auto& row : rows) {
      if (row[bc].is_zero()) continue;
      const QRat f = row[bc] / piv[bc];
      for (std::size_t k = 0; k < row.size(); ++k)
        if (!piv[k].is_zero()) row[k] -= f * piv[k];
    }
    basis.push_back(std::move(piv));
  }
  return basis;
}

void decorate_binf(CrystalGraph& g, const std::vector<RootVector>& alphas) {
  const Datum& d = g.datum;
  for (int b = 0; b < g.size(); ++b) {
    auto& node = g.nodes[b];
    node.wt = weight_update(d, WeightVector(static_cast<std::size_t>(d.n()), 0), alphas[b]);
    node.eps.assign(static_cast<std::size_t>(d.n()), ExtInt(0));
    node.phi.assign(static_cast<std::size_t>(d.n()), ExtInt(0));
    for (int i = 0; i < d.n(); ++i) {
      long eps = 0;
      if (d.is_real(i))
        for (int x = g.et(i, b); x >= 0; x = g.et(i, x)) ++eps;
      node.eps[i] = ExtInt(eps);
      node.phi[i] = ExtInt(eps + pairing(node.wt, i));
    }
  }
}

std::string child_id(const Datum& d, const std::string& parent, int i) {
  return "f" + d.indices[static_cast<std::size_t>(i)] + (parent == "1" ? "" : "," + parent.substr(1));
}

std::string rats_str(const std::vector<Rational>& v) {
  std::string s = "(";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + rational_str(v[k]);
  return s + ")";
}

std::vector<RootVector> roots_upto(const Datum& d, int maxh) {
  std::vector<RootVector> out;
  for (int h = 0; h <= maxh; ++h)
    for (auto& a : roots_of_height(d, h)) out.push_back(a);
  return out;
}

}  // namespace

BInfinity lattice_and_binfty(const UqAlgebra& U, int depth) {
  const Datum& d = U.datum();
  BInfinity B(d);
  B.depth = depth;
  B.report.name = "binfty";
  std::vector<std::vector<Rational>> cls;
  const RootVector zero_root(static_cast<std::size_t>(d.n()), 0);
  CrystalNode root;
  root.id = "1";
  root.depth = 0;
  root.frontier = depth == 0;
  B.graph.add_node(root);
  B.rep.push_back(U.one());
  B.alpha.push_back(zero_root);
  B.nodes_at[zero_root] = {0};
  B.basis_inv[zero_root] = Matrix<QRat>{{QRat(1)}};
  cls.push_back({Rational(1)});

  for (int h = 1; h <= depth; ++h) {
    for (const auto& alpha : roots_of_height(d, h)) {
      const int dim = U.space(alpha).dim();
      std::vector<UqVector> gens;
      std::vector<std::pair<int, int>> origin;
      for (int i = 0; i < d.n(); ++i) {
        if (alpha[i] < 1) continue;
        RootVector beta = alpha;
        --beta[i];
        auto it = B.nodes_at.find(beta);
        if (it == B.nodes_at.end()) continue;
        for (int b : it->second) {
          gens.push_back(U.ftilde(i, B.rep[b]));
          origin.emplace_back(b, i);
        }
      }
      Matrix<QRat> rows;
      for (auto& g : gens) rows.push_back(g.c.empty() ? std::vector<QRat>(static_cast<std::size_t>(dim)) : g.c);
      Matrix<QRat> basis = a0_echelon(rows);
      const std::string inst = root_str(d, alpha);
      B.report.add("lattice rank", inst, std::to_string(dim), std::to_string(basis.size()), static_cast<int>(basis.size()) == dim);
      if (static_cast<int>(basis.size()) != dim) continue;
      Matrix<QRat> cols(static_cast<std::size_t>(dim), std::vector<QRat>(static_cast<std::size_t>(dim)));
      for (int c = 0; c < dim; ++c)
        for (int r = 0; r < dim; ++r) cols[r][c] = basis[c][r];
      auto inv = inverse(cols);
      if (!inv) {
        B.report.add("lattice basis invertible", inst, "yes", "no", false);
        continue;
      }
      B.basis_inv[alpha] = *inv;
      auto& here = B.nodes_at[alpha];
      for (std::size_t g = 0; g < gens.size(); ++g) {
        bool inside = true;
        auto c = class_of(*inv, gens[g], inside);
        const auto [parent, i] = origin[g];
        if (!inside || all_zero(c)) {
          B.report.add("f closure", B.graph.nodes[parent].id + " along " + d.indices[i], "nonzero class", inside ? "0" : "outside L", false);
          continue;
        }
        int node = -1;
        for (int b : here)
          if (cls[b] == c) node = b;
        if (node < 0) {
          CrystalNode n;
          n.id = child_id(d, B.graph.nodes[parent].id, i);
          n.depth = h;
          n.frontier = h == depth;
          node = B.graph.add_node(n);
          B.rep.push_back(gens[g]);
          B.alpha.push_back(alpha);
          cls.push_back(c);
          here.push_back(node);
        }
        B.graph.f[i][parent] = node;
      }
      B.report.add("|B(inf)_alpha| = dim", inst, std::to_string(dim), std::to_string(here.size()), static_cast<int>(here.size()) == dim);
    }
  }
  for (int b = 0; b < B.graph.size(); ++b)
    if (B.graph.nodes[b].depth == depth)
      for (int i = 0; i < d.n(); ++i) B.graph.f[i][b] = kUnknown;

  for (int b = 1; b < B.graph.size(); ++b) {
    for (int i = 0; i < d.n(); ++i) {
      if (B.alpha[b][i] == 0) continue;
      UqVector x = U.etilde(i, B.rep[b]);
      if (x.is_zero()) continue;
      auto c = lattice_class(B, x);
      const std::string inst = B.graph.nodes[b].id + " along " + d.indices[i];
      if (!c) {
        B.report.add("e in L", inst, "inside L", "outside L", false);
        continue;
      }
      if (all_zero(*c)) continue;
      int node = -1;
      RootVector beta = B.alpha[b];
      --beta[i];
      for (int t : B.nodes_at[beta])
        if (cls[t] == *c) node = t;
      if (node < 0) B.report.add("e in B", inst, "class of a node", rats_str(*c), false);
      else B.graph.e[i][b] = node;
    }
  }
  decorate_binf(B.graph, B.alpha);
  return B;
}

std::optional<std::vector<Rational>> lattice_class(const BInfinity& B, const UqVector& v) {
  auto it = B.basis_inv.find(v.alpha);
  if (it == B.basis_inv.end()) return std::nullopt;
  if (v.is_zero()) return std::vector<Rational>(it->second.size(), Rational(0));
  bool inside = true;
  auto c = class_of(it->second, v, inside);
  if (!inside) return std::nullopt;
  return c;
}

GlobalBasis global_basis(const UqAlgebra& U, const BInfinity& B, int maxh) {
  const Datum& d = U.datum();
  GlobalBasis G;
  G.report.name = "globalbasis";
  G.lower[0] = U.one();
  for (int h = 1; h <= std::min(maxh, B.depth); ++h) {
    for (const auto& alpha : roots_of_height(d, h)) {
      auto at = B.nodes_at.find(alpha);
      if (at == B.nodes_at.end() || at->second.empty()) continue;
      const std::vector<int>& nodes = at->second;
      const std::string inst = root_str(d, alpha);
      const int dim = U.space(alpha).dim();
      if (static_cast<int>(nodes.size()) != dim) throw TriangularityFailed("B(inf) incomplete at " + inst);
      std::map<int, UqVector> M;
      for (int b : nodes) {
        int i = 0;
        while (i < d.n() && B.graph.et(i, b) < 0) ++i;
        if (i == d.n()) throw TriangularityFailed("no lowering index for " + B.graph.nodes[b].id);
        int n = 0, b0 = b;
        while (B.graph.et(i, b0) >= 0) b0 = B.graph.et(i, b0), ++n;
        M[b] = U.fdiv(i, n, G.lower.at(b0));
      }
      std::vector<int> done, open = nodes;
      while (!open.empty()) {
        bool progress = false;
        for (std::size_t ob = 0; ob < open.size() && !progress; ++ob) {
          const int b = open[ob];
          Matrix<QRat> a(static_cast<std::size_t>(dim));
          std::vector<int> col_node;
          for (int p : done) {
            for (int r = 0; r < dim; ++r) a[r].push_back(G.lower.at(p).c[r]);
            col_node.push_back(p);
          }
          for (int u : open) {
            for (int r = 0; r < dim; ++r) a[r].push_back(B.rep[u].c[r]);
            col_node.push_back(u);
          }
          auto x = solve(a, M[b].c);
          if (!x) throw SolveFailed("expansion of M at " + B.graph.nodes[b].id);
          bool ok = true;
          for (std::size_t c = done.size(); c < col_node.size() && ok; ++c) {
            const QRat v = col_node[c] == b ? (*x)[c] - QRat(1) : (*x)[c];
            ok = in_qA0(v);
          }
          if (!ok) continue;
          UqVector g = M[b];
          for (std::size_t c = 0; c < done.size(); ++c) {
            const QRat& cp = (*x)[c];
            if (cp.is_zero()) continue;
            QLaurent polar, corr;
            for (const auto& [e, r] : cp.series(0)) {
              if (r == 0) continue;
              if (e < 0) polar.add_term(e, r);
              else corr.add_term(0, r);
            }
            corr += polar + polar.bar();
            for (const auto& [e, r] : corr.terms())
              if (!is_integer(r))
                throw NonIntegralTransition("coefficient " + corr.to_string() + " of " + B.graph.nodes[col_node[c]].id + " in M(" +
                                            B.graph.nodes[b].id + ")");
            if (!corr.is_zero()) g = sub(g, scale(G.lower.at(col_node[c]), QRat(corr)));
          }
          G.lower[b] = g;
          done.push_back(b);
          open.erase(open.begin() + static_cast<long>(ob));
          progress = true;
        }
        if (!progress) throw TriangularityFailed("no admissible node at " + inst);
      }
      for (int b : nodes) {
        const UqVector& g = G.lower.at(b);
        const std::string id = B.graph.nodes[b].id;
        G.report.add("bar invariant", id, "G", "bar(G)", sub(U.bar(g), g).is_zero());
        auto c = lattice_class(B, sub(g, B.rep[b]));
        G.report.add("G = b mod qL", id, "0", c ? rats_str(*c) : "outside L", c && all_zero(*c));
      }
      Matrix<QRat> gamma;
      for (int b : nodes) {
        std::vector<QRat> row;
        for (int c : nodes) row.push_back(U.pairingK(G.lower.at(b), G.lower.at(c)));
        gamma.push_back(std::move(row));
      }
      auto inv = inverse(gamma);
      G.report.add("Gram of G invertible", inst, "yes", inv ? "yes" : "no", inv.has_value());
      if (!inv) continue;
      for (std::size_t r = 0; r < nodes.size(); ++r) {
        UqVector u = U.zero(alpha);
        for (std::size_t c = 0; c < nodes.size(); ++c) u = add(u, scale(G.lower.at(nodes[c]), (*inv)[r][c]));
        G.upper[nodes[r]] = u;
      }
    }
  }
  G.upper[0] = U.one();
  return G;
}

namespace {

bool parallel_vectors(const UqVector& y, const UqVector& w) {
  if (y.is_zero() || w.is_zero() || y.alpha != w.alpha) return false;
  std::size_t k = 0;
  while (w.c[k].is_zero()) ++k;
  if (y.c[k].is_zero()) return false;
  const QRat ratio = y.c[k] / w.c[k];
  for (std::size_t m = 0; m < w.c.size(); ++m)
    if (!(y.c[m] == ratio * w.c[m])) return false;
  return true;
}

}  // namespace

PerfectResult perfect_check(const UqAlgebra& U, const LabeledBasis& basis, int depth) {
  const Datum& d = U.datum();
  PerfectResult P(d);
  P.report.name = "perfectcheck";
  std::vector<RootVector> alphas;
  std::vector<const UqVector*> vecs;
  std::map<RootVector, std::vector<int>> at;
  for (const auto& alpha : roots_upto(d, depth)) {
    auto it = basis.vectors.find(alpha);
    if (it == basis.vectors.end()) continue;
    const auto& ids = basis.ids.at(alpha);
    for (std::size_t k = 0; k < it->second.size(); ++k) {
      CrystalNode n;
      n.id = k < ids.size() ? ids[k] : root_str(d, alpha) + "#" + std::to_string(k);
      n.depth = height(alpha);
      n.frontier = n.depth == depth;
      const int id = P.graph.add_node(n);
      alphas.push_back(alpha);
      vecs.push_back(&it->second[k]);
      at[alpha].push_back(id);
    }
  }
  for (int b = 0; b < P.graph.size(); ++b) {
    for (int i = 0; i < d.n(); ++i) {
      const UqVector& v = *vecs[b];
      if (U.eprime(i, v).is_zero()) continue;
      const int l = U.ell(i, v);
      UqVector w = v;
      for (int k = 0; k < l; ++k) w = U.eprime(i, w);
      RootVector beta = alphas[b];
      --beta[i];
      std::vector<int> cand;
      for (int t : at[beta]) {
        UqVector y = *vecs[t];
        for (int k = 0; k < l - 1; ++k) y = U.eprime(i, y);
        if (parallel_vectors(y, w)) cand.push_back(t);
      }
      const std::string inst = P.graph.nodes[b].id + " along " + d.indices[i];
      P.report.add("unique e_i(b)", inst, "1 candidate", std::to_string(cand.size()) + " candidates", cand.size() == 1);
      if (cand.size() == 1) P.graph.e[i][b] = cand[0];
    }
  }
  for (int i = 0; i < d.n(); ++i) {
    std::map<int, int> hit;
    bool inj = true;
    for (int b = 0; b < P.graph.size(); ++b) {
      const int t = P.graph.et(i, b);
      if (t < 0) continue;
      if (!hit.emplace(t, b).second) {
        inj = false;
        P.report.add("e_i injective", d.indices[i], "distinct preimages", P.graph.nodes[hit[t]].id + " and " + P.graph.nodes[b].id, false);
      }
    }
    if (inj) P.report.add("e_i injective", d.indices[i], "yes", "yes", true);
    for (int b = 0; b < P.graph.size(); ++b) {
      if (auto h = hit.find(b); h != hit.end()) P.graph.f[i][b] = h->second;
      else P.graph.f[i][b] = P.graph.nodes[b].frontier ? kUnknown : kZero;
    }
  }
  decorate_binf(P.graph, alphas);
  return P;
}

Report verify_boson(const UqAlgebra& U, const RootVector& alpha) {
  const Datum& d = U.datum();
  Report rep;
  rep.name = "boson";
  const std::string ainst = root_str(d, alpha);
  auto spanning = [&](const RootVector& a) {
    std::vector<UqVector> out;
    if (!valid_root(a)) return out;
    const auto& ws = U.space(a);
    for (int k = 0; k < ws.dim(); ++k) {
      UqVector v = U.zero(a);
      v.c[k] = QRat(1);
      out.push_back(v);
    }
    return out;
  };
  auto minus = [&](const RootVector& a, int i, int m) {
    RootVector r = a;
    r[i] -= m;
    return r;
  };
  auto same = [](const UqVector& a, const UqVector& b) { return sub(a, b).is_zero(); };

  for (int i = 0; i < d.n(); ++i)
    for (int j = 0; j < d.n(); ++j) {
      bool ok = true;
      for (const auto& u : spanning(minus(alpha, j, 1))) {
        UqVector lhs = U.eprime(i, U.fmult(j, u));
        UqVector rhs = scale(U.fmult(j, U.eprime(i, u)), qi_pow(d, i, -d.A[i][j]));
        if (i == j) rhs = add(rhs, u);
        ok = ok && same(lhs, rhs);
      }
      rep.add("e'_i f_j = delta + q_i^{-a_ij} f_j e'_i", ainst + " i=" + d.indices[i] + " j=" + d.indices[j], "equal", ok ? "equal" : "differ", ok);
    }

  for (int i = 0; i < d.n(); ++i)
    for (int j = 0; j < d.n(); ++j)
      for (int n = 1; n <= 2; ++n)
        for (int m = 1; m <= 2; ++m) {
          const RootVector base = minus(alpha, j, m);
          if (!valid_root(base)) continue;
          bool ok = true;
          for (const auto& u : spanning(base)) {
            UqVector lhs = U.eprime_div(i, n, U.fdiv(j, m, u));
            UqVector rhs{minus(alpha, i, n), {}};
            if (i != j) {
              rhs = scale(U.fdiv(j, m, U.eprime_div(i, n, u)), qi_pow(d, i, -n * m * d.A[i][j]));
            } else {
              const IndexKind kind = d.kind(i);
              for (int k = 0; k <= std::min(n, m); ++k) {
                const int e = -2 * n * m + (n + m) * k - k * (k - 1) / 2;
                QRat c = kind == IndexKind::real ? qi_pow(d, i, e) * qbinomial(d, n, k, i, kind)
                                                 : qi_pow(d, i, -d.c(i) * e) * qbinomial(d, m, k, i, kind);
                rhs = add(rhs, scale(U.fdiv(i, m - k, U.eprime_div(i, n - k, u)), c));
              }
            }
            ok = ok && same(lhs, rhs);
          }
          rep.add(std::string("divided commutation") + (i != j ? " i!=j" : d.is_real(i) ? " real" : " imaginary"),
                  ainst + " i=" + d.indices[i] + " j=" + d.indices[j] + " n=" + std::to_string(n) + " m=" + std::to_string(m), "equal",
                  ok ? "equal" : "differ", ok);
        }

  for (int i = 0; i < d.n(); ++i) {
    const RootVector beta = minus(alpha, i, 1);
    if (!valid_root(beta)) continue;
    const auto& wa = U.space(alpha).words;
    const auto& wb = U.space(beta).words;
    bool ok = true;
    for (const auto& x : wa)
      for (const auto& y : wb) {
        UqVector ex = U.eprime(i, U.from_word(x));
        UqVector fy = U.fmult(i, U.from_word(y));
        ok = ok && U.pairingL(ex, U.from_word(y)) == (QRat(1) - qi_pow(d, i, 2)) * U.pairingL(U.from_word(x), fy);
      }
    rep.add("(e'_i x, y)_L = (1 - q_i^2)(x, f_i y)_L", ainst + " i=" + d.indices[i], "equal on word pairs", ok ? "equal" : "differ", ok);

    bool up = true, down = true;
    for (const auto& u : spanning(beta))
      for (const auto& v : spanning(alpha)) {
        up = up && U.pairingK(U.ftilde(i, u), v) == U.pairingK(u, U.Etilde(i, v));
        down = down && U.pairingK(U.etilde(i, v), u) == U.pairingK(v, U.Ftilde(i, u));
      }
    rep.add("(f~_i u, v)_K = (u, E~_i v)_K", ainst + " i=" + d.indices[i], "equal", up ? "equal" : "differ", up);
    rep.add("(e~_i u, v)_K = (u, F~_i v)_K", ainst + " i=" + d.indices[i], "equal", down ? "equal" : "differ", down);
  }

  for (int i = 0; i < d.n(); ++i) {
    bool ok = true;
    for (const auto& u : spanning(alpha)) {
      const int n = U.ell(i, u);
      UqVector lhs = u, rhs = u;
      for (int k = 0; k < n; ++k) {
        lhs = U.eprime(i, lhs);
        rhs = U.Etilde(i, rhs);
      }
      if (d.is_real(i)) rhs = scale(rhs, qfactorial(d, n, i, IndexKind::real));
      ok = ok && same(lhs, rhs);
    }
    rep.add("e'_i^n u = [n]_i! E~_i^n u", ainst + " i=" + d.indices[i], "equal at n = l_i(u)", ok ? "equal" : "differ", ok);
  }

  if (height(alpha) > 0) {
    const int dim = U.space(alpha).dim();
    Matrix<QRat> stacked;
    for (int i = 0; i < d.n(); ++i) {
      if (alpha[i] == 0) continue;
      const int tdim = U.space(minus(alpha, i, 1)).dim();
      Matrix<QRat> block(static_cast<std::size_t>(tdim), std::vector<QRat>(static_cast<std::size_t>(dim)));
      for (int k = 0; k < dim; ++k) {
        UqVector v = U.zero(alpha);
        v.c[k] = QRat(1);
        UqVector img = U.eprime(i, v);
        for (int r = 0; r < tdim && !img.c.empty(); ++r) block[r][k] = img.c[r];
      }
      for (auto& row : block) stacked.push_back(std::move(row));
    }
    const int r = rank_of(stacked);
    rep.add("intersection of ker e'_i = 0", ainst, std::to_string(dim), std::to_string(r), r == dim);
  }
  return rep;
}

}  // namespace klr
