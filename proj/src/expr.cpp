#include "klr/expr.hpp"

#include <cctype>

namespace klr {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (p_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[p_] + "'", p_);
    return e;
  }

 private:
  const std::string& s_;
  std::size_t p_ = 0;

  void skip() {
    while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
  }
  bool eat(char c) {
    skip();
    if (p_ < s_.size() && s_[p_] == c) {
      ++p_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) throw ParseError(std::string("expected '") + c + "'", p_);
  }
  bool keyword(const std::string& k) {
    skip();
    if (s_.compare(p_, k.size(), k) != 0) return false;
    const std::size_t after = p_ + k.size();
    if (after < s_.size() && std::isalnum(static_cast<unsigned char>(s_[after]))) return false;
    p_ = after;
    return true;
  }
  static Expr node(ExprNode::Kind k, std::size_t pos, std::vector<Expr> kids = {}) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->pos = pos;
    n->kids = std::move(kids);
    return n;
  }
  long integer() {
    skip();
    const std::size_t start = p_;
    bool neg = false;
    if (p_ < s_.size() && s_[p_] == '-') neg = true, ++p_;
    std::size_t digits = p_;
    while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
    if (digits == p_) throw ParseError("expected integer", start);
    const long v = std::stol(s_.substr(digits, p_ - digits));
    return neg ? -v : v;
  }

  Expr expr() {
    skip();
    const std::size_t start = p_;
    Expr left;
    if (eat('-')) left = node(ExprNode::Kind::neg, start, {term()});
    else left = term();
    for (;;) {
      skip();
      const std::size_t at = p_;
      if (eat('+')) left = node(ExprNode::Kind::add, at, {left, term()});
      else if (eat('-')) left = node(ExprNode::Kind::sub, at, {left, term()});
      else return left;
    }
  }
  Expr term() {
    Expr left = factor();
    for (;;) {
      skip();
      const std::size_t at = p_;
      if (!eat('*')) return left;
      left = node(ExprNode::Kind::mul, at, {left, factor()});
    }
  }
  Expr factor() {
    Expr base = atom();
    skip();
    const std::size_t at = p_;
    if (!eat('^')) return base;
    const long e = integer();
    if (e < 0 && base->kind != ExprNode::Kind::q) throw ParseError("negative exponent allowed only on q", at);
    Expr n = node(ExprNode::Kind::pow, at, {base});
    n->value = e;
    return n;
  }
  Expr atom() {
    skip();
    const std::size_t at = p_;
    if (p_ >= s_.size()) throw ParseError("unexpected end of input", p_);
    if (eat('(')) {
      Expr e = expr();
      expect(')');
      return e;
    }
    if (keyword("tau")) {
      expect('(');
      Expr n = node(ExprNode::Kind::tau, at);
      n->value = integer();
      expect(')');
      return n;
    }
    if (keyword("x")) {
      expect('(');
      Expr n = node(ExprNode::Kind::x, at);
      n->value = integer();
      expect(')');
      return n;
    }
    if (keyword("e")) {
      expect('(');
      Expr n = node(ExprNode::Kind::idem, at);
      do {
        skip();
        const std::size_t st = p_;
        while (p_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[p_])) || s_[p_] == '_')) ++p_;
        if (st == p_) throw ParseError("expected index", st);
        n->seq.push_back(s_.substr(st, p_ - st));
      } while (eat(','));
      expect(')');
      return n;
    }
    if (keyword("q")) return node(ExprNode::Kind::q, at);
    if (std::isdigit(static_cast<unsigned char>(s_[p_]))) {
      std::size_t st = p_;
      while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
      if (p_ < s_.size() && s_[p_] == '/') {
        ++p_;
        const std::size_t den = p_;
        while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
        if (den == p_) throw ParseError("expected denominator", den);
      }
      Expr n = node(ExprNode::Kind::number, at);
      n->number = parse_rational(s_.substr(st, p_ - st));
      return n;
    }
    throw ParseError(std::string("unexpected '") + s_[p_] + "'", p_);
  }
};

std::string where(const ExprNode& n) { return " at position " + std::to_string(n.pos); }

}  // namespace

Expr parse_expr(const std::string& text) { return Parser(text).run(); }

std::optional<RootVector> expr_weight(const Datum& d, const Expr& e) {
  if (e->kind == ExprNode::Kind::idem) {
    IndexSequence seq;
    for (const auto& name : e->seq) seq.push_back(d.index_of(name));
    return weight_of(d, seq);
  }
  for (const auto& k : e->kids)
    if (auto w = expr_weight(d, k)) return w;
  return std::nullopt;
}

Element evaluate(const KLRBlock& blk, const Expr& e) {
  using K = ExprNode::Kind;
  switch (e->kind) {
    case K::add:
      return add(evaluate(blk, e->kids[0]), evaluate(blk, e->kids[1]));
    case K::sub:
      return sub(evaluate(blk, e->kids[0]), evaluate(blk, e->kids[1]));
    case K::neg:
      return scale(evaluate(blk, e->kids[0]), QLaurent(Rational(-1)));
    case K::mul:
      return multiply(blk, evaluate(blk, e->kids[0]), evaluate(blk, e->kids[1]));
    case K::pow: {
      if (e->kids[0]->kind == K::q) return scale(one(blk), QLaurent::q(static_cast<int>(e->value)));
      const Element base = evaluate(blk, e->kids[0]);
      Element r = one(blk);
      for (long k = 0; k < e->value; ++k) r = multiply(blk, r, base);
      return r;
    }
    case K::idem: {
      IndexSequence seq;
      for (const auto& name : e->seq) seq.push_back(blk.datum().index_of(name));
      return idempotent(blk, blk.seq_index(seq));
    }
    case K::x:
      if (e->value < 1 || e->value > blk.d())
        throw InputError("x(" + std::to_string(e->value) + ") out of range 1.." + std::to_string(blk.d()) + where(*e));
      return x_elem(blk, static_cast<int>(e->value) - 1);
    case K::tau:
      if (e->value < 1 || e->value >= blk.d())
        throw InputError("tau(" + std::to_string(e->value) + ") out of range 1.." + std::to_string(blk.d() - 1) + where(*e));
      return tau_elem(blk, static_cast<int>(e->value) - 1);
    case K::q:
      return scale(one(blk), QLaurent::q(1));
    case K::number:
      return scale(one(blk), QLaurent(e->number));
  }
  throw InputError("malformed expression");
}

}  // namespace klr
