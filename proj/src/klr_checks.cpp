#include <functional>

#include "klr/klr.hpp"

namespace klr {

namespace {

RatFn inv_root(int a, int b) { return RatFn::over_root(MPoly(Rational(1)), a, b); }

MPoly at_positions(const MPoly& f, int a, int b, int c) { return f.renamed({a, b, c, 3, 4, 5, 6, 7}); }

std::string op_summary(const Operator& op) {
  if (op.is_zero()) return "0";
  return std::to_string(op.terms.size()) + " nonzero summands";
}

CheckLine compare(std::string check, std::string instance, const Operator& lhs, const Operator& rhs, const std::string& expected) {
  Operator diff = lhs - rhs;
  const bool ok = diff.is_zero();
  return {std::move(check), std::move(instance), expected, ok ? expected : "difference has " + op_summary(diff), ok};
}

}  // namespace

CorrectionPolys correction_polys(const Datum& d, const KLRParams& p, int i) {
  const BiPoly& P = p.P.at(i);
  auto Pat = [&](int a, int b) { return RatFn(bipoly_at(P, a, b)); };
  constexpr int u = 0, v = 1, w = 2;
  RatFn uv = inv_root(u, v), uw = inv_root(u, w), vw = inv_root(v, w);
  RatFn p1 = Pat(v, u) * Pat(u, w) * uv * uw + Pat(u, w) * Pat(v, w) * uw * vw - Pat(u, v) * Pat(v, w) * uv * vw;
  RatFn p2 = -(Pat(u, v) * Pat(u, w) * uv * uw) - Pat(u, w) * Pat(w, v) * uw * vw + Pat(u, v) * Pat(v, w) * uv * vw;
  if (!p1.is_poly() || !p2.is_poly())
    throw NonPolynomial("correction polynomials of " + d.indices[static_cast<std::size_t>(i)] + " are not polynomial");
  return {p1.num(), p2.num()};
}

MPoly correction_Q(const Datum& d, const KLRParams& p, int i, int j) {
  const BiPoly& Q = p.Q.at({i, j});
  MPoly diff = bipoly_at(Q, 0, 1) - bipoly_at(Q, 2, 1);
  auto q = diff.div_root(0, 2);
  if (!q) throw NonPolynomial("Qbar_" + d.indices[static_cast<std::size_t>(i)] + d.indices[static_cast<std::size_t>(j)] + " is not polynomial");
  return *q;
}

Report verify_relations(const KLRBlock& blk, bool parallel) {
  const Datum& dt = blk.datum();
  const int d = blk.d();
  const int n = static_cast<int>(blk.seqs().size());
  std::vector<std::function<CheckLine()>> jobs;

  std::map<int, CorrectionPolys> cp;
  std::map<std::pair<int, int>, MPoly> cq;
  for (const auto& seq : blk.seqs())
    for (std::size_t k = 0; k + 2 < seq.size(); ++k) {
      const int a = seq[k], b = seq[k + 1], c = seq[k + 2];
      if (a == b && b == c && !cp.count(a)) cp[a] = correction_polys(dt, blk.params(), a);
      if (a == c && a != b && !cq.count({a, b})) cq[{a, b}] = correction_Q(dt, blk.params(), a, b);
    }

  for (int s = 0; s < n; ++s) {
    const auto& seq = blk.seqs()[static_cast<std::size_t>(s)];
    const std::string sname = seq_str(dt, seq);
    for (int s2 = 0; s2 < n; ++s2)
      jobs.push_back([&blk, s, s2, sname] {
        const Operator rhs = s == s2 ? blk.unit(s) : Operator{};
        return compare("idempotents", sname + "*" + seq_str(blk.datum(), blk.seqs()[static_cast<std::size_t>(s2)]),
                       blk.compose(blk.unit(s), blk.unit(s2)), rhs, s == s2 ? "1_i" : "0");
      });
    for (int k = 0; k < d; ++k)
      for (int l = k + 1; l < d; ++l)
        jobs.push_back([&blk, s, k, l, sname] {
          const Operator u = blk.unit(s);
          return compare("x commute", sname + " k=" + std::to_string(k + 1) + " l=" + std::to_string(l + 1),
                         blk.compose(blk.x(k), blk.compose(blk.x(l), u)), blk.compose(blk.x(l), blk.compose(blk.x(k), u)), "equal");
        });
    for (int t = 0; t + 1 < d; ++t) {
      const std::string inst = sname + " t=" + std::to_string(t + 1);
      const int a = seq[static_cast<std::size_t>(t)], b = seq[static_cast<std::size_t>(t + 1)];
      jobs.push_back([&blk, s, t, inst] {
        const int tgt = blk.target(perm_simple(t, blk.d()), s);
        return compare("tau routing", inst, blk.compose(blk.tau(t), blk.unit(s)), blk.compose(blk.unit(tgt), blk.tau(t)), "1_{r_t i} tau_t");
      });
      for (int u = t + 2; u + 1 < d; ++u)
        jobs.push_back([&blk, s, t, u, inst] {
          const Operator e = blk.unit(s);
          return compare("tau commute", inst + " u=" + std::to_string(u + 1), blk.compose(blk.tau(t), blk.compose(blk.tau(u), e)),
                         blk.compose(blk.tau(u), blk.compose(blk.tau(t), e)), "equal");
        });
      jobs.push_back([&blk, s, t, a, b, inst] {
        const Operator e = blk.unit(s);
        const Operator lhs = blk.compose(blk.tau(t), blk.compose(blk.tau(t), e));
        Operator rhs;
        if (a == b)
          rhs = blk.compose(blk.poly_all(blk.P_at(a, t, t + 1).divided_difference(t)), blk.compose(blk.tau(t), e));
        else
          rhs = blk.poly(blk.Q_at(a, b, t, t + 1), s);
        return compare("tau square", inst, lhs, rhs, a == b ? "dP tau" : "Q 1_i");
      });
      for (int k = 0; k < d; ++k)
        jobs.push_back([&blk, s, t, k, a, b, inst] {
          const Operator e = blk.unit(s);
          const int rk = k == t ? t + 1 : (k == t + 1 ? t : k);
          const Operator lhs = blk.compose(blk.tau(t), blk.compose(blk.x(k), e)) - blk.compose(blk.x(rk), blk.compose(blk.tau(t), e));
          Operator rhs;
          std::string expected = "0";
          if (a == b && k == t) {
            rhs = blk.poly(-blk.P_at(a, t, t + 1), s);
            expected = "-P 1_i";
          } else if (a == b && k == t + 1) {
            rhs = blk.poly(blk.P_at(a, t, t + 1), s);
            expected = "P 1_i";
          }
          return compare("tau x", inst + " k=" + std::to_string(k + 1), lhs, rhs, expected);
        });
      if (t + 2 < d) {
        const int c = seq[static_cast<std::size_t>(t + 2)];
        MPoly qbar, p1, p2;
        if (a == c && a != b) qbar = cq.at({a, b});
        if (a == b && b == c) {
          p1 = cp.at(a).pbar1;
          p2 = cp.at(a).pbar2;
        }
        jobs.push_back([&blk, s, t, a, b, c, qbar, p1, p2, inst] {
          const Operator e = blk.unit(s);
          auto chain = [&](int x, int y, int z) { return blk.compose(blk.tau(x), blk.compose(blk.tau(y), blk.compose(blk.tau(z), e))); };
          const Operator lhs = chain(t + 1, t, t + 1) - chain(t, t + 1, t);
          Operator rhs;
          std::string expected = "0";
          if (a == c && a != b) {
            rhs = blk.poly(blk.P_at(a, t, t + 2) * at_positions(qbar, t, t + 1, t + 2), s);
            expected = "P Qbar 1_i";
          } else if (a == b && b == c) {
            rhs = blk.compose(blk.poly_all(at_positions(p1, t, t + 1, t + 2)), blk.compose(blk.tau(t), e)) +
                  blk.compose(blk.poly_all(at_positions(p2, t, t + 1, t + 2)), blk.compose(blk.tau(t + 1), e));
            expected = "P' tau_t + P'' tau_{t+1}";
          }
          return compare("braid", inst, lhs, rhs, expected);
        });
      }
    }
  }

  Report r{"relations " + root_str(dt, blk.alpha()), std::vector<CheckLine>(jobs.size())};
  const long total = static_cast<long>(jobs.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < total; ++k) r.lines[static_cast<std::size_t>(k)] = jobs[static_cast<std::size_t>(k)]();
  } else {
    for (long k = 0; k < total; ++k) r.lines[static_cast<std::size_t>(k)] = jobs[static_cast<std::size_t>(k)]();
  }
  if (r.lines.empty()) r.add("vacuous", root_str(dt, blk.alpha()), "no relations", "no relations", true);
  return r;
}

/// Signed tau_{w0} x^delta on each listed (offset, length) block of a real index, acting on component s.
Operator divided_blocks(const KLRBlock& blk, int s, const std::vector<std::pair<int, int>>& blocks, bool signed_version) {
  Mono m = 0;
  int sign = 1;
  for (const auto& [off, len] : blocks) {
    for (int k = 0; k < len; ++k) m = mono_mul(m, mono_var(off + k, len - 1 - k));
    if ((len * (len - 1) / 2) % 2 == 1) sign = -sign;
  }
  Operator op = blk.poly(MPoly::monomial(m, signed_version ? Rational(sign) : Rational(1)), s);
  for (const auto& [off, len] : blocks) {
    if (len < 2) continue;
    const auto& tbl = reduced_words(len);
    const auto& word = tbl.word(tbl.longest());
    for (auto t = word.rbegin(); t != word.rend(); ++t) op = blk.compose(blk.tau(off + *t), op);
  }
  return op;
}

namespace {

Operator tau_chain(const KLRBlock& blk, const std::vector<int>& ts, const Operator& right) {
  Operator op = right;
  for (auto t = ts.rbegin(); t != ts.rend(); ++t) op = blk.compose(blk.tau(*t), op);
  return op;
}

}  // namespace

QElement divided_idempotent(const KLRBlock& blk, int i, int d) {
  RootVector want(static_cast<std::size_t>(blk.datum().n()), 0);
  want[static_cast<std::size_t>(i)] = d;
  if (blk.alpha() != want) throw InputError("block weight must be " + root_str(blk.datum(), want));
  const int s = blk.seq_index(IndexSequence(static_cast<std::size_t>(d), i));
  if (!blk.datum().is_real(i)) return blk.to_normal(blk.unit(s));
  return blk.to_normal(divided_blocks(blk, s, {{0, d}}));
}

Report check_divided_idempotent(const Datum& dt, const KLRParams& p, int i, int d) {
  Report r{"divided idempotent " + dt.indices[static_cast<std::size_t>(i)] + "^(" + std::to_string(d) + ")", {}};
  RootVector alpha(static_cast<std::size_t>(dt.n()), 0);
  alpha[static_cast<std::size_t>(i)] = d;
  KLRBlock blk(dt, p, alpha, std::max(d, 6));
  const Element e = element_from(alpha, divided_idempotent(blk, i, d));
  const Element sq = multiply(blk, e, e);
  r.add("e*e = e", to_string(blk, e), to_string(blk, e), to_string(blk, sq), sq == e);
  if (dt.is_real(i) && d > 1) {
    const int s = blk.seq_index(IndexSequence(static_cast<std::size_t>(d), i));
    const Element raw = element_from(alpha, blk.to_normal(divided_blocks(blk, s, {{0, d}}, false)));
    const Element rsq = multiply(blk, raw, raw);
    const int len = d * (d - 1) / 2;
    const Element want = len % 2 ? scale(raw, QLaurent(Rational(-1))) : raw;
    r.add("unsigned square", to_string(blk, raw), to_string(blk, want), to_string(blk, rsq), rsq == want);
  }
  return r;
}

int deg_tau(const Datum& d, Perm w, const IndexSequence& i) {
  const int n = static_cast<int>(i.size());
  IndexSequence cur = i;
  int deg = 0;
  const auto& word = reduced_words(n).word(w);
  for (auto t = word.rbegin(); t != word.rend(); ++t) {
    deg -= d.sym(cur[static_cast<std::size_t>(*t)], cur[static_cast<std::size_t>(*t + 1)]);
    std::swap(cur[static_cast<std::size_t>(*t)], cur[static_cast<std::size_t>(*t + 1)]);
  }
  return deg;
}

QRat qdim_block(const Datum& d, const IndexSequence& j, const IndexSequence& i) {
  if (weight_of(d, j) != weight_of(d, i)) throw InputError("weight mismatch between " + seq_str(d, j) + " and " + seq_str(d, i));
  const int n = static_cast<int>(i.size());
  QRat sum;
  for (Perm w : reduced_words(n).perms())
    if (perm_act(w, i) == j) sum += QRat::q(deg_tau(d, w, i));
  QRat den(1);
  for (int k : i) den *= QRat(1) - QRat::q(2 * d.s[static_cast<std::size_t>(k)]);
  return sum / den;
}

std::map<int, Rational> qdim_block_series(const Datum& d, const IndexSequence& j, const IndexSequence& i, int order) {
  return qdim_block(d, j, i).series(order);
}

std::map<int, Rational> count_basis_by_degree(const Datum& d, const IndexSequence& j, const IndexSequence& i, int order) {
  const int n = static_cast<int>(i.size());
  std::vector<int> degs;
  int low = 0;
  for (Perm w : reduced_words(n).perms())
    if (perm_act(w, i) == j) {
      degs.push_back(deg_tau(d, w, i));
      low = std::min(low, degs.back());
    }
  const int span = order - low;
  std::map<int, Rational> out;
  if (span < 0) return out;
  // monomials of each degree, one variable at a time
  std::vector<Rational> mono(static_cast<std::size_t>(span) + 1, Rational(0));
  mono[0] = 1;
  for (int k : i) {
    const int step = 2 * d.s[static_cast<std::size_t>(k)];
    for (int e = step; e <= span; ++e) mono[static_cast<std::size_t>(e)] += mono[static_cast<std::size_t>(e - step)];
  }
  for (int dw : degs)
    for (int e = 0; dw + e <= order; ++e)
      if (mono[static_cast<std::size_t>(e)] != 0) out[dw + e] += mono[static_cast<std::size_t>(e)];
  return out;
}

Report serre_verify(const Datum& d, const KLRParams& p, int i, int j) {
  const std::string pair = d.indices[static_cast<std::size_t>(i)] + "," + d.indices[static_cast<std::size_t>(j)];
  Report r{"serre " + pair, {}};
  if (i == j) throw InputError("serre check needs distinct indices");
  const int aij = d.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  const BiPoly& Q = p.Q.at({i, j});

  if (aij == 0) {
    auto it = Q.find({0, 0});
    const Rational t = it == Q.end() ? Rational(0) : it->second;
    const Rational tji = p.Q.at({j, i}).count({0, 0}) ? p.Q.at({j, i}).at({0, 0}) : Rational(0);
    RootVector alpha = simple_root(d, i);
    alpha[static_cast<std::size_t>(j)] += 1;
    KLRBlock blk(d, p, alpha);
    const int sij = blk.seq_index({i, j}), sji = blk.seq_index({j, i});
    const Operator minus = blk.compose(blk.tau(0), blk.unit(sij));
    const Operator plus = blk.compose(blk.tau(0), blk.unit(sji));
    r.add(compare("tau+ tau- = t", "(" + pair + ")", blk.compose(blk.tau(0), minus), blk.unit(sij).scaled(t), "t 1_(ij)"));
    r.add(compare("tau- tau+ = t", "(" + pair + ")", blk.compose(blk.tau(0), plus), blk.unit(sji).scaled(t), "t 1_(ji)"));
    const Operator dd = blk.compose(blk.tau(0), minus).scaled(t * tji);
    r.add(compare("d+ d- = id", "(" + pair + ")", dd, blk.unit(sij), "1_(ij)"));
    return r;
  }
  if (!d.is_real(i)) throw InputError("serre check needs a real first index");
  const int N = 1 - aij;
  const int dd = N + 1;
  auto it = Q.find({-aij, 0});
  const Rational t = it == Q.end() ? Rational(0) : it->second;
  RootVector alpha = simple_root(d, j);
  alpha[static_cast<std::size_t>(i)] += N;
  KLRBlock blk(d, p, alpha);

  auto seq_ab = [&](int a) {
    IndexSequence s(static_cast<std::size_t>(dd), i);
    s[static_cast<std::size_t>(a)] = j;
    return blk.seq_index(s);
  };
  auto E = [&](int a) { return divided_blocks(blk, seq_ab(a), {{0, a}, {a + 1, N - a}}); };
  // tau indices below are 0-based
  auto plus = [&](int a) {  // e_{a,b} tau_{d-1} ... tau_{a+1} e_{a+1,b-1}
    std::vector<int> ts;
    for (int k = dd - 2; k >= a; --k) ts.push_back(k);
    return blk.compose(E(a), tau_chain(blk, ts, E(a + 1)));
  };
  auto minus = [&](int a) {  // e_{a,b} tau_1 ... tau_a e_{a-1,b+1}
    std::vector<int> ts;
    for (int k = 0; k < a; ++k) ts.push_back(k);
    return blk.compose(E(a), tau_chain(blk, ts, E(a - 1)));
  };
  auto name = [&](int a) { return "a=" + std::to_string(a) + " b=" + std::to_string(N - a); };

  for (int a = 1; a < N; ++a) {
    r.add(compare("plus plus = 0", name(a), blk.compose(plus(a - 1), plus(a)), Operator{}, "0"));
    r.add(compare("minus minus = 0", name(a), blk.compose(minus(a + 1), minus(a)), Operator{}, "0"));
  }
  r.add(compare("end identity N", name(N), blk.compose(minus(N), plus(N - 1)), E(N).scaled(t), "t e"));
  const Rational s0 = (N - 1) % 2 ? -t : t;
  r.add(compare("end identity 0", name(0), blk.compose(plus(0), minus(1)), E(0).scaled(s0), (N - 1) % 2 ? "-t e" : "t e"));
  for (int a = 1; a < N; ++a) {
    const int b = N - a;
    const Rational sb = (b - 1) % 2 ? -t : t;
    const Operator lhs = blk.compose(plus(a), minus(a + 1)) - blk.compose(minus(a), plus(a - 1));
    r.add(compare("middle identity", name(a), lhs, E(a).scaled(sb), (b - 1) % 2 ? "-t e" : "t e"));
  }
  return r;
}

bool center_check(const KLRBlock& blk, const MPoly& f) {
  const Operator z = blk.poly_all(f);
  for (int k = 0; k < blk.d(); ++k)
    if (!(blk.compose(z, blk.x(k)) == blk.compose(blk.x(k), z))) return false;
  for (int t = 0; t + 1 < blk.d(); ++t)
    if (!(blk.compose(z, blk.tau(t)) == blk.compose(blk.tau(t), z))) return false;
  return true;
}

Report explore_idempotents(const Datum& d, const KLRParams& p, int i) {
  Report r{"tau idempotents " + d.indices[static_cast<std::size_t>(i)] + "^3", {}};
  RootVector alpha(static_cast<std::size_t>(d.n()), 0);
  alpha[static_cast<std::size_t>(i)] = 3;
  KLRBlock blk(d, p, alpha);
  const Element t1 = tau_elem(blk, 0), t2 = tau_elem(blk, 1);
  const Element e1 = multiply(blk, t1, t2), e2 = multiply(blk, t2, t1);
  const Element e3 = sub(sub(one(blk), e1), e2);
  const std::vector<std::pair<std::string, Element>> es{{"t1t2", e1}, {"t2t1", e2}, {"1-t1t2-t2t1", e3}};
  for (std::size_t a = 0; a < es.size(); ++a)
    for (std::size_t b = 0; b < es.size(); ++b) {
      const Element prod = multiply(blk, es[a].second, es[b].second);
      const Element want = a == b ? es[a].second : Element{alpha, {}};
      r.add(a == b ? "square" : "orthogonal", es[a].first + " * " + es[b].first, to_string(blk, want), to_string(blk, prod), prod == want);
    }
  return r;
}

}  // namespace klr
