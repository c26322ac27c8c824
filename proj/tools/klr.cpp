#include <fstream>
#include <iostream>
#include <regex>

#include "CLI11.hpp"
#include "json.hpp"
#include "klr/crystal.hpp"
#include "klr/expr.hpp"
#include "klr/klr.hpp"
#include "klr/kzero.hpp"
#include "klr/qalgebra.hpp"

using namespace klr;

namespace {

struct Options {
  std::string datum;
  std::string alpha, expr, lambda, from, to, x, y, i, j, dot, basis = "upper";
  int depth = 4, height = 4, order = 20, cap = 6;
  bool json = false, serial = false, verbose = false;
};

DividedSequence parse_seqd(const Datum& d, const std::string& text) {
  DividedSequence out;
  if (text.empty() || text == "()") return out;
  static const std::regex item(R"(\s*([A-Za-z0-9_]+)\s*(\^\s*\(\s*(\d+)\s*\))?\s*)");
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string part = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    std::smatch m;
    if (!std::regex_match(part, m, item)) throw InputError("bad sequence entry '" + part + "'");
    out.emplace_back(d.index_of(m[1]), m[3].matched ? std::stoi(m[3]) : 1);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

IndexSequence parse_seq(const Datum& d, const std::string& text) {
  IndexSequence out;
  for (const auto& [i, m] : parse_seqd(d, text)) {
    if (m != 1) throw InputError("divided powers not allowed in '" + text + "'");
    out.push_back(i);
  }
  return out;
}

std::vector<RootVector> weights(const Datum& d, const Options& o) {
  if (!o.alpha.empty()) return {parse_root(d, o.alpha)};
  std::vector<RootVector> out;
  for (int h = 1; h <= o.height; ++h)
    for (auto& a : roots_of_height(d, h)) out.push_back(a);
  return out;
}

int emit(const Options& o, const Report& r) {
  if (o.json) std::cout << r.to_json() << "\n";
  else std::cout << r.to_text(!o.verbose);
  return r.pass() ? 0 : 1;
}

int emit_all(const Options& o, const std::vector<Report>& reps) {
  Report all;
  all.name = "total";
  int rc = 0;
  for (const auto& r : reps) {
    if (!o.json) std::cout << r.to_text(!o.verbose);
    all.append(r);
    if (!r.pass()) rc = 1;
  }
  if (o.json) std::cout << all.to_json() << "\n";
  return rc;
}

void write_dot(const Options& o, const CrystalGraph& g) {
  if (o.dot.empty()) return;
  std::ofstream out(o.dot);
  if (!out) throw InputError("cannot write '" + o.dot + "'");
  out << g.to_dot();
}

std::string node_line(const CrystalGraph& g, int b) {
  const auto& n = g.nodes[static_cast<std::size_t>(b)];
  std::string s = n.id + "  wt=(";
  for (std::size_t k = 0; k < n.wt.size(); ++k) s += (k ? "," : "") + std::to_string(n.wt[k]);
  s += ") eps=(";
  for (std::size_t k = 0; k < n.eps.size(); ++k) s += (k ? "," : "") + n.eps[k].to_string();
  s += ") phi=(";
  for (std::size_t k = 0; k < n.phi.size(); ++k) s += (k ? "," : "") + n.phi[k].to_string();
  s += ")";
  if (n.frontier) s += " frontier";
  return s;
}

void print_graph(const Options& o, const CrystalGraph& g) {
  if (o.json) {
    std::cout << g.to_json() << "\n";
    return;
  }
  for (int b = 0; b < g.size(); ++b) std::cout << node_line(g, b) << "\n";
}

int cmd_validate(const Options& o, const Datum& d) {
  Report r;
  r.name = "validate";
  for (const auto& v : validate(d)) r.add("datum", v.cell, "valid", v.message, false);
  if (r.lines.empty()) {
    for (const auto& v : validate_params(d, default_params(d))) r.add("parameters", v.cell, "valid", v.message, false);
  }
  if (r.lines.empty()) r.add("datum", datum_to_json(d), "valid", "valid", true);
  return emit(o, r);
}

int cmd_relcheck(const Options& o, const Datum& d) {
  require_valid(d);
  const KLRParams p = default_params(d);
  std::vector<Report> reps;
  for (const auto& a : weights(d, o)) {
    KLRBlock blk(d, p, a, o.cap);
    reps.push_back(verify_relations(blk, !o.serial));
  }
  return emit_all(o, reps);
}

struct Evaluated {
  std::unique_ptr<KLRBlock> blk;
  Element value;
};

Evaluated eval_expr(const Options& o, const Datum& d, const KLRParams& p) {
  if (o.expr.empty()) throw InputError("--expr is required");
  Expr e = parse_expr(o.expr);
  RootVector a;
  if (!o.alpha.empty()) a = parse_root(d, o.alpha);
  else if (auto w = expr_weight(d, e)) a = *w;
  else throw InputError("--alpha is required when the expression has no e(...)");
  Evaluated r;
  r.blk = std::make_unique<KLRBlock>(d, p, a, o.cap);
  r.value = evaluate(*r.blk, e);
  return r;
}

int cmd_nf(const Options& o, const Datum& d) {
  require_valid(d);
  const KLRParams p = default_params(d);
  auto r = eval_expr(o, d, p);
  std::cout << (o.json ? to_json(*r.blk, r.value) : to_string(*r.blk, r.value)) << "\n";
  return 0;
}

int cmd_deg(const Options& o, const Datum& d) {
  require_valid(d);
  const KLRParams p = default_params(d);
  auto r = eval_expr(o, d, p);
  try {
    std::cout << degree(*r.blk, r.value) << "\n";
  } catch (const NotHomogeneous& e) {
    std::cout << "not homogeneous: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int cmd_qdim(const Options& o, const Datum& d) {
  require_valid(d);
  if (o.from.empty() || o.to.empty()) throw InputError("--from and --to are required");
  const IndexSequence i = parse_seq(d, o.from), j = parse_seq(d, o.to);
  const QRat v = qdim_block(d, j, i);
  if (o.json) {
    nlohmann::json out{{"qdim", v.to_string()}};
    for (const auto& [k, c] : v.series(o.order)) out["series"][std::to_string(k)] = rational_str(c);
    std::cout << out.dump() << "\n";
    return 0;
  }
  std::cout << v.to_string() << "\n";
  const auto count = count_basis_by_degree(d, j, i, o.order);
  std::string s;
  bool same = true;
  for (const auto& [k, c] : v.series(o.order)) {
    if (c == 0) continue;
    s += (s.empty() ? "" : " + ") + rational_str(c) + "*q^" + std::to_string(k);
    auto it = count.find(k);
    same = same && it != count.end() && it->second == c;
  }
  for (const auto& [k, c] : count) same = same && v.series(o.order).count(k);
  std::cout << "series to q^" << o.order << ": " << (s.empty() ? "0" : s) << "\n";
  std::cout << "basis count " << (same ? "agrees" : "DISAGREES") << "\n";
  return same ? 0 : 1;
}

int cmd_pair(const Options& o, const Datum& d) {
  require_valid(d);
  if (o.x.empty() || o.y.empty()) throw InputError("--x and --y are required");
  const DividedSequence x = parse_seqd(d, o.x), y = parse_seqd(d, o.y);
  UqAlgebra U(d, o.cap, !o.serial);
  auto mono = [&](const DividedSequence& s) {
    UqVector v = U.one();
    for (auto it = s.rbegin(); it != s.rend(); ++it) v = U.fdiv(it->first, it->second, v);
    return v;
  };
  Report r;
  r.name = "pair";
  const QRat l = U.pairingL(mono(x), mono(y));
  const QRat k = k0_pair(d, phi(d, x), phi(d, y));
  r.add("(x,y)_L = (Phi x, Phi y)", seqd_str(d, x) + " | " + seqd_str(d, y), l.to_string(), k.to_string(), l == k);
  if (!o.json) std::cout << "(x,y)_L = " << l.to_string() << "\n([P_x],[P_y]) = " << k.to_string() << "\n";
  return emit(o, r);
}

int cmd_serre(const Options& o, const Datum& d) {
  require_valid(d);
  if (o.i.empty() || o.j.empty()) throw InputError("--i and --j are required");
  const int i = d.index_of(o.i), j = d.index_of(o.j);
  if (i == j) throw InputError("--i and --j must differ");
  std::vector<Report> reps;
  if (d.A[i][j] != 0) reps.push_back(serre_verify(d, default_params(d), i, j));
  reps.push_back(serre_k0_check(d, i, j));
  return emit_all(o, reps);
}

int cmd_isometry(const Options& o, const Datum& d) {
  require_valid(d);
  std::vector<Report> reps;
  for (const auto& a : weights(d, o)) reps.push_back(isometry_check(d, a, o.order, height(a) <= 2));
  return emit_all(o, reps);
}

int cmd_binfty(const Options& o, const Datum& d) {
  require_valid(d);
  UqAlgebra U(d, o.cap, !o.serial);
  BInfinity B = lattice_and_binfty(U, o.depth);
  print_graph(o, B.graph);
  write_dot(o, B.graph);
  Report r = B.report;
  r.append(axiom_check(B.graph));
  if (o.json) return r.pass() ? 0 : 1;
  std::cout << r.to_text(!o.verbose);
  return r.pass() ? 0 : 1;
}

int cmd_blambda(const Options& o, const Datum& d) {
  require_valid(d);
  if (o.lambda.empty()) throw InputError("--lambda is required");
  const WeightVector lambda = parse_weight(d, o.lambda);
  UqAlgebra U(d, o.cap, !o.serial);
  BInfinity B = lattice_and_binfty(U, o.depth);
  BLambda L = blambda(B.graph, lambda, o.depth);
  print_graph(o, L.graph);
  write_dot(o, L.graph);
  Report r = B.report;
  r.name = "blambda";
  r.append(axiom_check(L.graph));
  r.append(morphism_check(L.psi, L.graph, L.tensor, true));
  if (o.json) return r.pass() ? 0 : 1;
  std::cout << r.to_text(!o.verbose);
  return r.pass() ? 0 : 1;
}

int cmd_globalbasis(const Options& o, const Datum& d) {
  require_valid(d);
  UqAlgebra U(d, o.cap, !o.serial);
  BInfinity B = lattice_and_binfty(U, o.depth);
  GlobalBasis G = global_basis(U, B, o.depth);
  if (o.json) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& [b, v] : G.lower)
      out.push_back({{"node", B.graph.nodes[b].id},
                     {"lower", nlohmann::ordered_json::parse(U.to_json(v))},
                     {"upper", nlohmann::ordered_json::parse(U.to_json(G.upper.at(b)))}});
    std::cout << out.dump(2) << "\n";
    return G.report.pass() ? 0 : 1;
  }
  for (const auto& [b, v] : G.lower) {
    std::cout << "G(" << B.graph.nodes[b].id << ") = " << U.to_string(v) << "\n";
    std::cout << "G*(" << B.graph.nodes[b].id << ") = " << U.to_string(G.upper.at(b)) << "\n";
  }
  std::cout << G.report.to_text(!o.verbose);
  return G.report.pass() ? 0 : 1;
}

int cmd_perfectcheck(const Options& o, const Datum& d) {
  require_valid(d);
  UqAlgebra U(d, o.cap, !o.serial);
  LabeledBasis L;
  std::unique_ptr<BInfinity> B;
  if (o.basis == "words") {
    for (int h = 0; h <= o.depth; ++h)
      for (const auto& a : roots_of_height(d, h)) {
        const auto& ws = U.space(a);
        for (int k = 0; k < ws.dim(); ++k) {
          L.vectors[a].push_back(U.from_word(ws.words[ws.pivots[k]]));
          L.ids[a].push_back(word_str(d, ws.words[ws.pivots[k]]));
        }
      }
  } else {
    B = std::make_unique<BInfinity>(lattice_and_binfty(U, o.depth));
    GlobalBasis G = global_basis(U, *B, o.depth);
    const auto& src = o.basis == "lower" ? G.lower : G.upper;
    for (const auto& [b, v] : src) {
      L.vectors[B->alpha[b]].push_back(v);
      L.ids[B->alpha[b]].push_back(B->graph.nodes[b].id);
    }
  }
  PerfectResult P = perfect_check(U, L, o.depth);
  print_graph(o, P.graph);
  write_dot(o, P.graph);
  Report r = P.report;
  if (B && P.report.pass()) r.append(isomorphism_check(P.graph, 0, B->graph, 0));
  if (o.json) return r.pass() ? 0 : 1;
  std::cout << r.to_text(!o.verbose);
  return r.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"KLR algebras, quantum Borcherds algebras and their crystals"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* c) {
    c->add_option("datum", o.datum, "datum JSON file")->required();
    c->add_flag("--json", o.json, "machine-readable output");
    c->add_flag("--verbose", o.verbose, "list passing checks too");
    c->add_flag("--serial", o.serial, "disable OpenMP paths");
    c->add_option("--cap", o.cap, "maximal height of a weight block");
  };
  struct Cmd {
    const char* name;
    const char* help;
    int (*run)(const Options&, const Datum&);
  };
  const std::vector<Cmd> cmds = {
      {"validate", "check a Borcherds-Cartan datum", cmd_validate},
      {"relcheck", "verify the defining relations on the polynomial representation", cmd_relcheck},
      {"nf", "normal form of a KLR expression", cmd_nf},
      {"deg", "degree of a homogeneous KLR expression", cmd_deg},
      {"qdim", "graded dimension of 1_to R 1_from", cmd_qdim},
      {"pair", "(x,y)_L against the K0 pairing", cmd_pair},
      {"serre", "Serre complex identities and Serre relation in K0", cmd_serre},
      {"isometry", "Phi is an isometry on word pairs", cmd_isometry},
      {"binfty", "lattice crystal B(inf)", cmd_binfty},
      {"blambda", "B(lambda) inside B(inf) x T_lambda x C", cmd_blambda},
      {"globalbasis", "lower and upper global bases", cmd_globalbasis},
      {"perfectcheck", "perfect basis axioms and the perfect graph", cmd_perfectcheck},
  };
  std::map<CLI::App*, const Cmd*> dispatch;
  for (const auto& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    common(sub);
    const std::string n = c.name;
    if (n == "relcheck" || n == "isometry" || n == "nf" || n == "deg") {
      sub->add_option("--alpha", o.alpha, "weight, e.g. 1:1,2:1");
      if (n != "nf" && n != "deg") sub->add_option("--height", o.height, "all weights up to this height");
    }
    if (n == "nf" || n == "deg") sub->add_option("--expr", o.expr, "KLR expression")->required();
    if (n == "qdim") {
      sub->add_option("--from", o.from, "source sequence")->required();
      sub->add_option("--to", o.to, "target sequence")->required();
    }
    if (n == "qdim" || n == "isometry") sub->add_option("--order", o.order, "series order");
    if (n == "pair") {
      sub->add_option("--x", o.x, "divided-power sequence, e.g. 1^(2),2")->required();
      sub->add_option("--y", o.y, "divided-power sequence")->required();
    }
    if (n == "serre") {
      sub->add_option("--i", o.i, "real index")->required();
      sub->add_option("--j", o.j, "second index")->required();
    }
    if (n == "binfty" || n == "blambda" || n == "globalbasis" || n == "perfectcheck") {
      sub->add_option("--depth", o.depth, "height bound");
      sub->add_option("--dot", o.dot, "write the graph in DOT format");
    }
    if (n == "blambda") sub->add_option("--lambda", o.lambda, "dominant weight, e.g. 1:1,2:0")->required();
    if (n == "perfectcheck") sub->add_option("--basis", o.basis, "upper, lower or words")->check(CLI::IsMember({"upper", "lower", "words"}));
    dispatch[sub] = &c;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    const Datum d = load_datum(o.datum);
    for (const auto& [sub, c] : dispatch)
      if (sub->parsed()) return c->run(o, d);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const CapExceeded& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const NotDominant& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
