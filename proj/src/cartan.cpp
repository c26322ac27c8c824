#include "klr/cartan.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace klr {

using nlohmann::json;

int Datum::index_of(const std::string& name) const {
  for (int i = 0; i < n(); ++i)
    if (indices[i] == name) return i;
  throw InputError("unknown index '" + name + "'");
}

std::vector<int> Datum::real_set() const {
  std::vector<int> r;
  for (int i = 0; i < n(); ++i)
    if (is_real(i)) r.push_back(i);
  return r;
}

std::vector<int> Datum::imaginary_set() const {
  std::vector<int> r;
  for (int i = 0; i < n(); ++i)
    if (!is_real(i)) r.push_back(i);
  return r;
}

std::vector<Violation> validate(const Datum& d) {
  std::vector<Violation> out;
  const int n = d.n();
  if (n == 0) out.push_back({"indices", "empty index set"});
  if (static_cast<int>(d.A.size()) != n) {
    out.push_back({"A", "matrix has " + std::to_string(d.A.size()) + " rows, expected " + std::to_string(n)});
    return out;
  }
  for (int i = 0; i < n; ++i)
    if (static_cast<int>(d.A[i].size()) != n) {
      out.push_back({"A", "row " + std::to_string(i + 1) + " has wrong length"});
      return out;
    }
  if (static_cast<int>(d.s.size()) != n) {
    out.push_back({"s", "expected " + std::to_string(n) + " symmetrizers"});
    return out;
  }
  std::vector<std::string> seen = d.indices;
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) out.push_back({"indices", "duplicate index name"});
  auto cell = [&](int i, int j) { return "a_" + d.indices[i] + d.indices[j]; };
  for (int i = 0; i < n; ++i) {
    if (d.s[i] <= 0) out.push_back({"s_" + d.indices[i], "s_" + d.indices[i] + " not positive"});
    const int a = d.A[i][i];
    if (!(a == 2 || (a <= 0 && a % 2 == 0))) out.push_back({cell(i, i), cell(i, i) + " not 2 nor even ≤ 0"});
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (d.A[i][j] > 0) out.push_back({cell(i, j), cell(i, j) + " positive"});
      if (i < j && ((d.A[i][j] == 0) != (d.A[j][i] == 0)))
        out.push_back({cell(i, j), cell(i, j) + "=0 xor " + cell(j, i) + "=0"});
      if (i < j && d.s[i] * d.A[i][j] != d.s[j] * d.A[j][i])
        out.push_back({cell(i, j), "s_" + d.indices[i] + "*" + cell(i, j) + " != s_" + d.indices[j] + "*" + cell(j, i)});
    }
  return out;
}

void require_valid(const Datum& d) {
  auto v = validate(d);
  if (v.empty()) return;
  std::string msg = "invalid datum:";
  for (const auto& x : v) msg += " " + x.message + ";";
  throw InputError(msg);
}

namespace {

BiPoly parse_bipoly(const json& j) {
  BiPoly p;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = it.key();
    auto comma = key.find(',');
    if (comma == std::string::npos) throw InputError("bad exponent key '" + key + "'");
    int a = std::stoi(key.substr(0, comma)), b = std::stoi(key.substr(comma + 1));
    if (a < 0 || b < 0) throw InputError("negative exponent in '" + key + "'");
    Rational c = it->is_string() ? parse_rational(it->get<std::string>()) : Rational(it->get<long>());
    if (c != 0) p[{a, b}] = c;
  }
  return p;
}

json bipoly_json(const BiPoly& p) {
  json j = json::object();
  for (const auto& [e, c] : p) j[std::to_string(e.first) + "," + std::to_string(e.second)] = rational_str(c);
  return j;
}

}  // namespace

Datum datum_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("datum JSON: ") + e.what());
  }
  Datum d;
  try {
    for (const auto& x : j.at("indices")) d.indices.push_back(x.get<std::string>());
    for (const auto& row : j.at("A")) d.A.push_back(row.get<std::vector<int>>());
    d.s = j.at("s").get<std::vector<int>>();
    if (j.contains("P"))
      for (auto it = j["P"].begin(); it != j["P"].end(); ++it) d.P[d.index_of(it.key())] = parse_bipoly(*it);
    if (j.contains("Q"))
      for (auto it = j["Q"].begin(); it != j["Q"].end(); ++it) {
        const std::string key = it.key();
        auto comma = key.find(',');
        if (comma == std::string::npos) throw InputError("bad Q key '" + key + "'");
        d.Q[{d.index_of(key.substr(0, comma)), d.index_of(key.substr(comma + 1))}] = parse_bipoly(*it);
      }
  } catch (const json::exception& e) {
    throw InputError(std::string("datum JSON: ") + e.what());
  }
  return d;
}

Datum load_datum(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return datum_from_json(ss.str());
}

std::string datum_to_json(const Datum& d) {
  json j;
  j["indices"] = d.indices;
  j["A"] = d.A;
  j["s"] = d.s;
  if (!d.P.empty()) {
    json p = json::object();
    for (const auto& [i, poly] : d.P) p[d.indices[i]] = bipoly_json(poly);
    j["P"] = p;
  }
  if (!d.Q.empty()) {
    json q = json::object();
    for (const auto& [ij, poly] : d.Q) q[d.indices[ij.first] + "," + d.indices[ij.second]] = bipoly_json(poly);
    j["Q"] = q;
  }
  return j.dump();
}

int height(const RootVector& a) { return std::accumulate(a.begin(), a.end(), 0); }

RootVector simple_root(const Datum& d, int i) {
  RootVector a(d.n(), 0);
  a[i] = 1;
  return a;
}

RootVector weight_of(const Datum& d, const IndexSequence& seq) {
  RootVector a(d.n(), 0);
  for (int i : seq) ++a[i];
  return a;
}

RootVector weight_of(const Datum& d, const DividedSequence& seq) {
  RootVector a(d.n(), 0);
  for (auto [i, m] : seq) a[i] += m;
  return a;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

template <class V>
V parse_pairs(const Datum& d, const std::string& text, bool allow_negative) {
  V out(d.n(), 0);
  if (text.empty()) return out;
  for (const auto& item : split(text, ',')) {
    auto colon = item.find(':');
    int i = 0;
    if (colon == std::string::npos) {
      if (d.n() != 1) throw InputError("expected 'index:value' in '" + item + "'");
      colon = static_cast<std::size_t>(-1);
    } else {
      i = d.index_of(item.substr(0, colon));
    }
    long v;
    try {
      v = std::stol(item.substr(colon + 1));
    } catch (const std::exception&) {
      throw InputError("bad number in '" + item + "'");
    }
    if (!allow_negative && v < 0) throw InputError("negative coefficient in '" + item + "'");
    out[i] = static_cast<typename V::value_type>(v);
  }
  return out;
}

}  // namespace

RootVector parse_root(const Datum& d, const std::string& text) { return parse_pairs<RootVector>(d, text, false); }

WeightVector parse_weight(const Datum& d, const std::string& text) { return parse_pairs<WeightVector>(d, text, true); }

std::string root_str(const Datum& d, const RootVector& a) {
  std::string out;
  for (int i = 0; i < d.n(); ++i) {
    if (a[i] == 0) continue;
    if (!out.empty()) out += ",";
    out += d.indices[i] + ":" + std::to_string(a[i]);
  }
  return out.empty() ? "0" : out;
}

std::string seq_str(const Datum& d, const IndexSequence& s) {
  std::string out = "(";
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k) out += ",";
    out += d.indices[s[k]];
  }
  return out + ")";
}

std::vector<RootVector> roots_of_height(const Datum& d, int h) {
  std::vector<RootVector> out;
  RootVector cur(d.n(), 0);
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == d.n() - 1) {
      cur[i] = left;
      out.push_back(cur);
      return;
    }
    for (int k = left; k >= 0; --k) {
      cur[i] = k;
      self(self, i + 1, left - k);
    }
  };
  if (d.n() > 0) rec(rec, 0, h);
  return out;
}

int sym_form(const Datum& d, int i, int j) {
  if (i < 0 || j < 0 || i >= d.n() || j >= d.n()) throw InputError("unknown index");
  return d.sym(i, j);
}

int sym_form(const Datum& d, const RootVector& a, const RootVector& b) {
  int acc = 0;
  for (int i = 0; i < d.n(); ++i)
    if (a[i])
      for (int j = 0; j < d.n(); ++j) acc += a[i] * b[j] * d.sym(i, j);
  return acc;
}

QRat qi_pow(const Datum& d, int i, int k) { return QRat::q(d.s[i] * k); }

QRat qint(const Datum& d, int n, int i, IndexKind kind) {
  if (kind != d.kind(i)) throw InputError("quantum integer kind does not match index " + d.indices[i]);
  if (n < 0) throw InputError("negative quantum integer");
  const int step = kind == IndexKind::real ? d.s[i] : d.s[i] * d.c(i);
  if (kind == IndexKind::imaginary && d.c(i) == 0) return QRat(static_cast<long>(n));
  QLaurent l;
  for (int k = 0; k < n; ++k) l.add_term(step * (n - 1 - 2 * k), 1);
  return QRat(l);
}

QRat qfactorial(const Datum& d, int n, int i, IndexKind kind) {
  QRat r(1);
  for (int k = 1; k <= n; ++k) r *= qint(d, k, i, kind);
  return r;
}

QRat qbinomial(const Datum& d, int m, int n, int i, IndexKind kind) {
  if (n < 0 || n > m) return QRat(0L);
  return qfactorial(d, m, i, kind) / (qfactorial(d, n, i, kind) * qfactorial(d, m - n, i, kind));
}

std::vector<IndexSequence> enumerate_seq(const Datum& d, const RootVector& a, int cap) {
  if (height(a) > cap) throw CapExceeded("height " + std::to_string(height(a)) + " exceeds cap " + std::to_string(cap));
  IndexSequence s;
  for (int i = 0; i < d.n(); ++i) s.insert(s.end(), static_cast<std::size_t>(a[i]), i);
  std::vector<IndexSequence> out;
  do out.push_back(s);
  while (std::next_permutation(s.begin(), s.end()));
  return out;
}

std::vector<DividedSequence> enumerate_seqd(const Datum& d, const RootVector& a, int cap) {
  if (height(a) > cap) throw CapExceeded("height " + std::to_string(height(a)) + " exceeds cap " + std::to_string(cap));
  std::vector<DividedSequence> out;
  DividedSequence cur;
  RootVector left = a;
  auto rec = [&](auto&& self) -> void {
    if (height(left) == 0) {
      out.push_back(cur);
      return;
    }
    for (int i = 0; i < d.n(); ++i) {
      const int maxm = d.is_real(i) ? left[i] : std::min(1, left[i]);
      for (int m = 1; m <= maxm; ++m) {
        cur.emplace_back(i, m);
        left[i] -= m;
        self(self);
        left[i] += m;
        cur.pop_back();
      }
    }
  };
  rec(rec);
  return out;
}

IndexSequence concat(const IndexSequence& a, const IndexSequence& b) {
  IndexSequence r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

WeightVector weight_update(const Datum& d, const WeightVector& lambda, const RootVector& a) {
  WeightVector out = lambda;
  for (int i = 0; i < d.n(); ++i)
    for (int j = 0; j < d.n(); ++j) out[i] -= static_cast<long>(a[j]) * d.A[i][j];
  return out;
}

}  // namespace klr
