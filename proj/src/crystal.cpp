#include "klr/crystal.hpp"

#include <deque>
#include <map>
#include <sstream>

#include "json.hpp"

namespace klr {

int CrystalGraph::add_node(CrystalNode n) {
  nodes.push_back(std::move(n));
  for (auto& row : f) row.push_back(kZero);
  for (auto& row : e) row.push_back(kZero);
  return size() - 1;
}

int CrystalGraph::find(const std::string& id) const {
  for (int k = 0; k < size(); ++k)
    if (nodes[static_cast<std::size_t>(k)].id == id) return k;
  return -1;
}

namespace {

std::string wt_str(const WeightVector& wt) {
  std::string s = "(";
  for (std::size_t k = 0; k < wt.size(); ++k) s += (k ? "," : "") + std::to_string(wt[k]);
  return s + ")";
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string CrystalGraph::to_dot() const {
  static const char* palette[] = {"red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan"};
  std::ostringstream os;
  os << "digraph crystal {\n";
  for (int b = 0; b < size(); ++b) {
    const auto& n = nodes[static_cast<std::size_t>(b)];
    os << "  n" << b << " [label=\"" << dot_escape(n.id) << "\\nwt=" << wt_str(n.wt) << "\"" << (n.frontier ? ", style=dashed" : "") << "];\n";
  }
  for (int i = 0; i < datum.n(); ++i)
    for (int b = 0; b < size(); ++b) {
      const int t = ft(i, b);
      if (t >= 0)
        os << "  n" << b << " -> n" << t << " [label=\"" << dot_escape(datum.indices[static_cast<std::size_t>(i)]) << "\", color=" << palette[i % 8]
           << "];\n";
    }
  os << "}\n";
  return os.str();
}

std::string CrystalGraph::to_json() const {
  nlohmann::json nodes_j = nlohmann::json::array(), edges = nlohmann::json::array();
  for (const auto& n : nodes) {
    std::vector<std::string> eps, phi;
    for (const auto& x : n.eps) eps.push_back(x.to_string());
    for (const auto& x : n.phi) phi.push_back(x.to_string());
    nodes_j.push_back({{"id", n.id}, {"wt", n.wt}, {"eps", eps}, {"phi", phi}, {"depth", n.depth}, {"frontier", n.frontier}});
  }
  for (int i = 0; i < datum.n(); ++i)
    for (int b = 0; b < size(); ++b)
      if (ft(i, b) >= 0)
        edges.push_back({{"from", nodes[static_cast<std::size_t>(b)].id},
                         {"to", nodes[static_cast<std::size_t>(ft(i, b))].id},
                         {"i", datum.indices[static_cast<std::size_t>(i)]}});
  return nlohmann::json{{"nodes", nodes_j}, {"edges", edges}}.dump(2);
}

long pairing(const WeightVector& wt, int i) { return wt[static_cast<std::size_t>(i)]; }

WeightVector minus_simple(const Datum& d, const WeightVector& wt, int i) { return weight_update(d, wt, simple_root(d, i)); }

Report axiom_check(const CrystalGraph& g) {
  Report r{"crystal axioms", {}};
  const Datum& d = g.datum;
  std::map<int, long> counts;
  auto fail = [&](int axiom, int b, int i, const std::string& what) {
    r.add("axiom " + std::to_string(axiom), g.nodes[static_cast<std::size_t>(b)].id + " i=" + d.indices[static_cast<std::size_t>(i)], "holds", what, false);
  };
  for (int b = 0; b < g.size(); ++b) {
    const auto& nb = g.nodes[static_cast<std::size_t>(b)];
    for (int i = 0; i < d.n(); ++i) {
      const ExtInt eps = nb.eps[static_cast<std::size_t>(i)], phi = nb.phi[static_cast<std::size_t>(i)];
      const bool real = d.is_real(i);
      const int fb = g.ft(i, b), eb = g.et(i, b);
      ++counts[1];
      if (!(phi == eps + pairing(nb.wt, i))) fail(1, b, i, "phi=" + phi.to_string() + " eps=" + eps.to_string());
      if (fb >= 0) {
        ++counts[2];
        if (g.nodes[static_cast<std::size_t>(fb)].wt != minus_simple(d, nb.wt, i)) fail(2, b, i, "wt of f-image");
      }
      if (eb >= 0) {
        ++counts[2];
        if (minus_simple(d, g.nodes[static_cast<std::size_t>(eb)].wt, i) != nb.wt) fail(2, b, i, "wt of e-image");
      }
      if (fb >= 0 && g.et(i, fb) != kUnknown) {
        ++counts[3];
        if (g.et(i, fb) != b) fail(3, b, i, "e(f(b)) != b");
      }
      if (eb >= 0 && g.ft(i, eb) != kUnknown) {
        ++counts[3];
        if (g.ft(i, eb) != b) fail(3, b, i, "f(e(b)) != b");
      }
      if (phi.is_neg_inf()) {
        ++counts[4];
        if (fb != kZero || eb != kZero) fail(4, b, i, "operator nonzero at phi=-inf");
      }
      if (eb >= 0) {
        ++counts[5];
        const auto& ne = g.nodes[static_cast<std::size_t>(eb)];
        const ExtInt we = real ? eps - 1 : eps;
        const ExtInt wp = real ? phi + 1 : phi + d.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
        if (!(ne.eps[static_cast<std::size_t>(i)] == we) || !(ne.phi[static_cast<std::size_t>(i)] == wp)) fail(5, b, i, "eps/phi of e-image");
      }
      if (fb >= 0) {
        ++counts[6];
        const auto& nf = g.nodes[static_cast<std::size_t>(fb)];
        if (nf.frontier && nb.frontier) continue;
        const ExtInt we = real ? eps + 1 : eps;
        const ExtInt wp = real ? phi - 1 : phi - d.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
        if (!(nf.eps[static_cast<std::size_t>(i)] == we) || !(nf.phi[static_cast<std::size_t>(i)] == wp)) fail(6, b, i, "eps/phi of f-image");
      }
    }
  }
  for (int a = 1; a <= 6; ++a) r.add("axiom " + std::to_string(a), std::to_string(counts[a]) + " instances", "holds", "", true);
  return r;
}

CrystalGraph elementary_T(const Datum& d, const WeightVector& lambda) {
  CrystalGraph g(d);
  CrystalNode n;
  n.id = "t";
  n.wt = lambda;
  n.eps.assign(static_cast<std::size_t>(d.n()), ExtInt::neg_inf());
  n.phi = n.eps;
  g.add_node(n);
  return g;
}

CrystalGraph elementary_C(const Datum& d) {
  CrystalGraph g(d);
  CrystalNode n;
  n.id = "c";
  n.wt.assign(static_cast<std::size_t>(d.n()), 0);
  n.eps.assign(static_cast<std::size_t>(d.n()), ExtInt(0));
  n.phi = n.eps;
  g.add_node(n);
  return g;
}

CrystalGraph tensor(const CrystalGraph& a, const CrystalGraph& b) {
  const Datum& d = a.datum;
  CrystalGraph g(d);
  const int nb = b.size();
  auto idx = [nb](int x, int y) { return x * nb + y; };
  auto route = [&](int target, int x, int y, bool left) {
    if (target < 0) return target;
    return left ? idx(target, y) : idx(x, target);
  };
  for (int x = 0; x < a.size(); ++x)
    for (int y = 0; y < nb; ++y) {
      const auto& n1 = a.nodes[static_cast<std::size_t>(x)];
      const auto& n2 = b.nodes[static_cast<std::size_t>(y)];
      CrystalNode n;
      n.id = n1.id + " ⊗ " + n2.id;
      n.wt.resize(n1.wt.size());
      for (std::size_t k = 0; k < n.wt.size(); ++k) n.wt[k] = n1.wt[k] + n2.wt[k];
      n.frontier = n1.frontier || n2.frontier;
      n.depth = n1.depth + n2.depth;
      for (int i = 0; i < d.n(); ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        n.eps.push_back(max(n1.eps[k], n2.eps[k] - pairing(n1.wt, i)));
        n.phi.push_back(max(n1.phi[k] + pairing(n2.wt, i), n2.phi[k]));
      }
      g.add_node(std::move(n));
    }
  for (int x = 0; x < a.size(); ++x)
    for (int y = 0; y < nb; ++y) {
      const auto& n1 = a.nodes[static_cast<std::size_t>(x)];
      const auto& n2 = b.nodes[static_cast<std::size_t>(y)];
      for (int i = 0; i < d.n(); ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const ExtInt phi1 = n1.phi[k], eps2 = n2.eps[k];
        const bool fleft = phi1 > eps2;
        g.f[k][static_cast<std::size_t>(idx(x, y))] = fleft ? route(a.ft(i, x), x, y, true) : route(b.ft(i, y), x, y, false);
        int et;
        if (d.is_real(i)) {
          et = phi1 >= eps2 ? route(a.et(i, x), x, y, true) : route(b.et(i, y), x, y, false);
        } else {
          const long aii = d.A[k][k];
          if (phi1 > eps2 - aii)
            et = route(a.et(i, x), x, y, true);
          else if (eps2 < phi1)
            et = kZero;
          else
            et = route(b.et(i, y), x, y, false);
        }
        g.e[k][static_cast<std::size_t>(idx(x, y))] = et;
      }
    }
  return g;
}

CrystalGraph connected_component(const CrystalGraph& g, int start, int depth, std::vector<int>* origin) {
  CrystalGraph out(g.datum);
  std::map<int, int> local;
  std::vector<int> from;
  std::deque<int> queue;
  auto visit = [&](int b, int level) {
    CrystalNode n = g.nodes[static_cast<std::size_t>(b)];
    n.depth = level;
    n.frontier = n.frontier || level == depth;
    local[b] = out.add_node(std::move(n));
    from.push_back(b);
    queue.push_back(b);
  };
  visit(start, 0);
  while (!queue.empty()) {
    const int b = queue.front();
    queue.pop_front();
    const int level = out.nodes[static_cast<std::size_t>(local.at(b))].depth;
    if (level >= depth) continue;
    for (int i = 0; i < g.datum.n(); ++i) {
      const int t = g.ft(i, b);
      if (t >= 0 && !local.count(t)) visit(t, level + 1);
    }
  }
  for (const auto& [b, lb] : local) {
    auto& node = out.nodes[static_cast<std::size_t>(lb)];
    for (int i = 0; i < g.datum.n(); ++i) {
      const std::size_t k = static_cast<std::size_t>(i);
      const int t = g.ft(i, b);
      out.f[k][static_cast<std::size_t>(lb)] = t >= 0 ? (local.count(t) ? local.at(t) : kUnknown) : t;
      if (t >= 0 && !local.count(t)) node.frontier = true;
      const int u = g.et(i, b);
      if (u >= 0 && !local.count(u)) {
        if (!node.frontier) throw EscapeDetected("e-image of " + node.id + " leaves the component");
        out.e[k][static_cast<std::size_t>(lb)] = kUnknown;
      } else {
        out.e[k][static_cast<std::size_t>(lb)] = u >= 0 ? local.at(u) : u;
      }
    }
  }
  if (origin) *origin = from;
  return out;
}

BLambda blambda(const CrystalGraph& binf, const WeightVector& lambda, int depth) {
  const Datum& d = binf.datum;
  for (int i = 0; i < d.n(); ++i)
    if (pairing(lambda, i) < 0) throw NotDominant("lambda is not dominant at " + d.indices[static_cast<std::size_t>(i)]);
  int root = -1;
  for (int b = 0; b < binf.size(); ++b)
    if (binf.nodes[static_cast<std::size_t>(b)].depth == 0) root = b;
  if (root < 0) throw InputError("B(inf) graph has no root");
  CrystalGraph full = tensor(tensor(binf, elementary_T(d, lambda)), elementary_C(d));
  std::vector<int> origin;
  CrystalGraph comp = connected_component(full, root, depth, &origin);
  for (int b = 0; b < comp.size(); ++b) {
    auto& n = comp.nodes[static_cast<std::size_t>(b)];
    for (int i = 0; i < d.n(); ++i) {
      const std::size_t k = static_cast<std::size_t>(i);
      if (!d.is_real(i)) {
        n.eps[k] = 0;
        n.phi[k] = pairing(n.wt, i);
        continue;
      }
      long up = 0;
      for (int c = comp.et(i, b); c >= 0; c = comp.et(i, c)) ++up;
      long down = 0;
      int c = comp.ft(i, b);
      for (; c >= 0; c = comp.ft(i, c)) ++down;
      n.eps[k] = up;
      if (c == kUnknown) {
        n.frontier = true;
        n.phi[k] = ExtInt(up) + pairing(n.wt, i);
      } else {
        n.phi[k] = down;
      }
    }
  }
  return {std::move(comp), std::move(full), std::move(origin)};
}

Report morphism_check(const std::vector<int>& map, const CrystalGraph& b1, const CrystalGraph& b2, bool strict) {
  Report r{strict ? "strict morphism" : "morphism", {}};
  const Datum& d = b1.datum;
  long checks = 0;
  auto image = [&](int t) { return t >= 0 ? map[static_cast<std::size_t>(t)] : t; };
  for (int b = 0; b < b1.size(); ++b) {
    const auto& n1 = b1.nodes[static_cast<std::size_t>(b)];
    const int m = map[static_cast<std::size_t>(b)];
    if (m < 0) continue;
    const auto& n2 = b2.nodes[static_cast<std::size_t>(m)];
    if (!n1.frontier) {
      ++checks;
      if (n1.wt != n2.wt) r.add("wt preserved", n1.id, wt_str(n1.wt), wt_str(n2.wt), false);
      for (int i = 0; i < d.n(); ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        if (!(n1.eps[k] == n2.eps[k]) || !(n1.phi[k] == n2.phi[k]))
          r.add("eps/phi preserved", n1.id + " i=" + d.indices[k], n1.eps[k].to_string() + "/" + n1.phi[k].to_string(),
                n2.eps[k].to_string() + "/" + n2.phi[k].to_string(), false);
      }
    }
    for (int i = 0; i < d.n(); ++i) {
      const int f1 = b1.ft(i, b), f2 = b2.ft(i, m);
      if (f1 == kUnknown || f2 == kUnknown) continue;
      if (f1 >= 0 || strict) {
        ++checks;
        if (image(f1) != f2) r.add("f commutes", n1.id + " i=" + d.indices[static_cast<std::size_t>(i)], "equal", "differs", false);
      }
      if (!strict) continue;
      const int e1 = b1.et(i, b), e2 = b2.et(i, m);
      if (e1 == kUnknown || e2 == kUnknown) continue;
      ++checks;
      if (image(e1) != e2) r.add("e commutes", n1.id + " i=" + d.indices[static_cast<std::size_t>(i)], "equal", "differs", false);
    }
  }
  r.add("instances", std::to_string(checks) + " checks", "", "", true);
  return r;
}

Report isomorphism_check(const CrystalGraph& a, int root_a, const CrystalGraph& b, int root_b, std::vector<int>* map_out) {
  Report r{"crystal isomorphism", {}};
  const Datum& d = a.datum;
  std::vector<int> map(static_cast<std::size_t>(a.size()), -1), back(static_cast<std::size_t>(b.size()), -1);
  std::deque<int> queue{root_a};
  map[static_cast<std::size_t>(root_a)] = root_b;
  back[static_cast<std::size_t>(root_b)] = root_a;
  bool edges_ok = true, decor_ok = true;
  auto link = [&](int x, int y, const std::string& what) {
    if (x < 0 || y < 0) {
      if (x == y || x == kUnknown || y == kUnknown) return;
      edges_ok = false;
      r.add("edges match", what, "both zero or both nodes", "mismatch", false);
      return;
    }
    const int mx = map[static_cast<std::size_t>(x)], by = back[static_cast<std::size_t>(y)];
    if (mx == -1 && by == -1) {
      map[static_cast<std::size_t>(x)] = y;
      back[static_cast<std::size_t>(y)] = x;
      queue.push_back(x);
    } else if (mx != y || by != x) {
      edges_ok = false;
      r.add("edges match", what, "consistent bijection", "conflict", false);
    }
  };
  while (!queue.empty()) {
    const int x = queue.front();
    queue.pop_front();
    const int y = map[static_cast<std::size_t>(x)];
    const auto& nx = a.nodes[static_cast<std::size_t>(x)];
    const auto& ny = b.nodes[static_cast<std::size_t>(y)];
    if (!nx.frontier && !ny.frontier && (nx.wt != ny.wt || nx.eps != ny.eps || nx.phi != ny.phi)) {
      decor_ok = false;
      r.add("decorations match", nx.id + " ~ " + ny.id, "equal wt/eps/phi", "differ", false);
    }
    for (int i = 0; i < d.n(); ++i) {
      const std::string what = nx.id + " i=" + d.indices[static_cast<std::size_t>(i)];
      link(a.ft(i, x), b.ft(i, y), what + " f");
      link(a.et(i, x), b.et(i, y), what + " e");
    }
  }
  long mapped = 0;
  for (int v : map) mapped += v >= 0;
  const bool bij = mapped == a.size() && mapped == b.size();
  r.add("bijective", std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " nodes", std::to_string(a.size()), std::to_string(mapped), bij);
  r.add("edges match", "all", "yes", edges_ok ? "yes" : "no", edges_ok);
  r.add("decorations match", "all", "yes", decor_ok ? "yes" : "no", decor_ok);
  if (map_out) *map_out = map;
  return r;
}

}  // namespace klr
