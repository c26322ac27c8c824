#pragma once

#include <optional>
#include <string>
#include <vector>

#include "klr/cartan.hpp"
#include "klr/report.hpp"

namespace klr {

struct NotDominant : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct EscapeDetected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Integer or -infinity.
class ExtInt {
 public:
  ExtInt() = default;
  ExtInt(long v) : v_(v) {}  // NOLINT
  static ExtInt neg_inf() {
    ExtInt x;
    x.inf_ = true;
    return x;
  }
  bool is_neg_inf() const { return inf_; }
  long value() const { return v_; }
  friend ExtInt operator+(ExtInt a, long b) { return a.inf_ ? a : ExtInt(a.v_ + b); }
  friend ExtInt operator-(ExtInt a, long b) { return a + (-b); }
  friend bool operator==(ExtInt a, ExtInt b) { return a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_); }
  friend bool operator<(ExtInt a, ExtInt b) {
    if (a.inf_ || b.inf_) return a.inf_ && !b.inf_;
    return a.v_ < b.v_;
  }
  friend bool operator<=(ExtInt a, ExtInt b) { return a < b || a == b; }
  friend bool operator>(ExtInt a, ExtInt b) { return b < a; }
  friend bool operator>=(ExtInt a, ExtInt b) { return b <= a; }
  friend bool operator!=(ExtInt a, ExtInt b) { return !(a == b); }
  friend ExtInt max(ExtInt a, ExtInt b) { return a < b ? b : a; }
  std::string to_string() const { return inf_ ? "-inf" : std::to_string(v_); }

 private:
  long v_ = 0;
  bool inf_ = false;
};

constexpr int kZero = -1;     // the operator gives 0
constexpr int kUnknown = -2;  // beyond the generated range

struct CrystalNode {
  std::string id;
  WeightVector wt;
  std::vector<ExtInt> eps, phi;
  /// Set when some edge or decoration of the node depends on unexplored nodes.
  bool frontier = false;
  int depth = 0;
};

struct CrystalGraph {
  Datum datum;
  std::vector<CrystalNode> nodes;
  std::vector<std::vector<int>> f, e;  // [i][node] -> node, kZero or kUnknown

  explicit CrystalGraph(Datum d) : datum(std::move(d)), f(static_cast<std::size_t>(datum.n())), e(static_cast<std::size_t>(datum.n())) {}
  int size() const { return static_cast<int>(nodes.size()); }
  int add_node(CrystalNode n);
  int find(const std::string& id) const;
  int ft(int i, int b) const { return f[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)]; }
  int et(int i, int b) const { return e[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)]; }
  std::string to_dot() const;
  std::string to_json() const;
};

/// <h_i, wt>
long pairing(const WeightVector& wt, int i);
/// wt - alpha_i
WeightVector minus_simple(const Datum& d, const WeightVector& wt, int i);

Report axiom_check(const CrystalGraph& g);

CrystalGraph elementary_T(const Datum& d, const WeightVector& lambda);
CrystalGraph elementary_C(const Datum& d);
CrystalGraph tensor(const CrystalGraph& a, const CrystalGraph& b);

/// f-closure from start up to depth steps; e-images of collected nodes must stay inside.
CrystalGraph connected_component(const CrystalGraph& g, int start, int depth, std::vector<int>* origin = nullptr);

struct BLambda {
  CrystalGraph graph;   // decorations of the highest weight crystal conventions
  CrystalGraph tensor;  // B(inf) x T_lambda x C, full product
  std::vector<int> psi; // graph node -> tensor node
};

BLambda blambda(const CrystalGraph& binf, const WeightVector& lambda, int depth);

/// map[b] is a node of b2 or kZero.
Report morphism_check(const std::vector<int>& map, const CrystalGraph& b1, const CrystalGraph& b2, bool strict);

/// Edge-forced bijection from root_a to root_b preserving wt, eps, phi, e and f.
Report isomorphism_check(const CrystalGraph& a, int root_a, const CrystalGraph& b, int root_b, std::vector<int>* map = nullptr);

}  // namespace klr
