#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "klr/qarith.hpp"

namespace klr {

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Bivariate polynomial u^p v^q -> coefficient.
using BiPoly = std::map<std::pair<int, int>, Rational>;

enum class IndexKind { real, imaginary };

struct Violation {
  std::string cell;
  std::string message;
};

/// Borcherds-Cartan datum. Indices are addressed internally by position.
struct Datum {
  std::vector<std::string> indices;
  std::vector<std::vector<int>> A;
  std::vector<int> s;
  std::map<int, BiPoly> P;                   // optional overrides
  std::map<std::pair<int, int>, BiPoly> Q;  // optional overrides, key (i,j)

  int n() const { return static_cast<int>(indices.size()); }
  bool is_real(int i) const { return A[i][i] == 2; }
  IndexKind kind(int i) const { return is_real(i) ? IndexKind::real : IndexKind::imaginary; }
  int sym(int i, int j) const { return s[i] * A[i][j]; }
  /// c_i = -a_ii / 2
  int c(int i) const { return -A[i][i] / 2; }
  int index_of(const std::string& name) const;
  std::vector<int> real_set() const;
  std::vector<int> imaginary_set() const;
};

std::vector<Violation> validate(const Datum& d);
/// Throws InputError listing the violations.
void require_valid(const Datum& d);

Datum datum_from_json(const std::string& text);
Datum load_datum(const std::string& path);
std::string datum_to_json(const Datum& d);

/// Element of Q+ as a coefficient vector over the index positions.
using RootVector = std::vector<int>;
/// Weight stored through its pairings <h_i, lambda>.
using WeightVector = std::vector<long>;
using IndexSequence = std::vector<int>;
/// Divided-power sequence: (index, multiplicity) blocks.
using DividedSequence = std::vector<std::pair<int, int>>;

int height(const RootVector& a);
RootVector simple_root(const Datum& d, int i);
RootVector weight_of(const Datum& d, const IndexSequence& seq);
RootVector weight_of(const Datum& d, const DividedSequence& seq);
RootVector parse_root(const Datum& d, const std::string& text);
WeightVector parse_weight(const Datum& d, const std::string& text);
std::string root_str(const Datum& d, const RootVector& a);
std::string seq_str(const Datum& d, const IndexSequence& s);
std::vector<RootVector> roots_of_height(const Datum& d, int h);

int sym_form(const Datum& d, int i, int j);
/// (alpha|beta) extended bilinearly.
int sym_form(const Datum& d, const RootVector& a, const RootVector& b);

QRat qint(const Datum& d, int n, int i, IndexKind kind);
QRat qfactorial(const Datum& d, int n, int i, IndexKind kind);
QRat qbinomial(const Datum& d, int m, int n, int i, IndexKind kind);
/// q_i^k = q^{s_i k}
QRat qi_pow(const Datum& d, int i, int k);

std::vector<IndexSequence> enumerate_seq(const Datum& d, const RootVector& a, int cap);
std::vector<DividedSequence> enumerate_seqd(const Datum& d, const RootVector& a, int cap);
IndexSequence concat(const IndexSequence& a, const IndexSequence& b);

WeightVector weight_update(const Datum& d, const WeightVector& lambda, const RootVector& a);

}  // namespace klr
