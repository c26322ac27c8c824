#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "klr/klr.hpp"

namespace klr {

struct ExprNode {
  enum class Kind { add, sub, mul, pow, neg, idem, x, tau, q, number };
  Kind kind;
  std::vector<std::shared_ptr<ExprNode>> kids;
  std::vector<std::string> seq;  // idem
  long value = 0;                // x, tau, pow exponent
  Rational number;
  std::size_t pos = 0;
};

using Expr = std::shared_ptr<ExprNode>;

/// expr := term (('+'|'-') term)*, term := factor ('*' factor)*, factor := atom ('^' int)?,
/// atom := e(seq) | x(k) | tau(t) | q | rational | (expr), with an optional leading '-'.
Expr parse_expr(const std::string& text);

/// Weight of the first e(...) atom, if any.
std::optional<RootVector> expr_weight(const Datum& d, const Expr& e);

Element evaluate(const KLRBlock& blk, const Expr& e);

}  // namespace klr
