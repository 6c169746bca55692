#pragma once

// Text form of interval-valued functions (.ivf files):
//
//   ivf { dom: [-1,1] x [0,2]; where: x2 >= 0;
//         lower: <expr>; upper: <expr>;          (or: scale: <expr>; c: [a,b])
//         branch: x1 == 0 && x2 == 0 -> { scale: 0; c: [3,8] } }
//
// Expressions use + - * / ^, unary minus, numbers in decimal or scientific
// notation, variables x1..xn, the constant pi, and the functions abs sin cos
// sqrt exp log pow min max dot([..]) quad([[..],..]). `[a,b]^n` abbreviates
// the n-fold box product.

#include <cctype>
#include <charconv>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ghc/error.hpp"
#include "ghc/expr.hpp"
#include "ghc/interval.hpp"
#include "ghc/ivf.hpp"

namespace ghc {

namespace detail {

enum class Tok { Number, Ident, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const noexcept { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const Token& at, const std::string& msg) const {
    throw error(errc::parse, std::to_string(at.line) + ":" + std::to_string(at.col) +
                                 ": " + msg);
  }

 private:
  void advance() {
    skip_space();
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) return;
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), v);
      if (ec != std::errc{}) fail(tok_, "malformed number");
      const auto len = static_cast<std::size_t>(ptr - (src_.data() + pos_));
      tok_.kind = Tok::Number;
      tok_.number = v;
      tok_.text = std::string(src_.substr(pos_, len));
      bump(len);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t len = 0;
      while (pos_ + len < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_ + len])) ||
              src_[pos_ + len] == '_')) {
        ++len;
      }
      tok_.kind = Tok::Ident;
      tok_.text = std::string(src_.substr(pos_, len));
      bump(len);
      return;
    }
    static constexpr std::string_view two[] = {"->", "&&", "==", "!=", "<=", ">="};
    for (auto op : two) {
      if (src_.substr(pos_, 2) == op) {
        tok_.kind = Tok::Punct;
        tok_.text = std::string(op);
        bump(2);
        return;
      }
    }
    static constexpr std::string_view one = "{}[]();:,+-*/^<>";
    if (one.find(c) != std::string_view::npos) {
      tok_.kind = Tok::Punct;
      tok_.text = std::string(1, c);
      bump(1);
      return;
    }
    fail(tok_, std::string("unexpected character '") + c + "'");
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump(1);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump(1);
      } else {
        break;
      }
    }
  }

  void bump(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i, ++pos_) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

class IvfParser {
 public:
  explicit IvfParser(std::string_view src) : lex_(src) {}

  Expr parse_expression_only() {
    Expr e = expr();
    expect_end();
    return e;
  }

  IVF parse_ivf(const ValidationGrid& grid) {
    expect_ident("ivf");
    expect("{");
    std::optional<DomainBox> dom;
    Predicate where;
    std::vector<Branch> branches;
    BodyParts top;
    bool first = true;
    while (!is("}")) {
      if (!first) {
        expect(";");
        if (is("}")) break;
      }
      first = false;
      const Token key = lex_.next();
      if (key.kind != Tok::Ident) lex_.fail(key, "expected a field name");
      expect(":");
      if (key.text == "dom") {
        if (dom) lex_.fail(key, "duplicate 'dom'");
        dom = box();
      } else if (key.text == "where") {
        if (!where.empty()) lex_.fail(key, "duplicate 'where'");
        where = predicate();
      } else if (key.text == "branch") {
        Predicate when = predicate();
        expect("->");
        const Token open = lex_.peek();
        expect("{");
        BodyParts parts;
        bool first_inner = true;
        while (!is("}")) {
          if (!first_inner) {
            expect(";");
            if (is("}")) break;
          }
          first_inner = false;
          const Token k = lex_.next();
          if (k.kind != Tok::Ident) lex_.fail(k, "expected a field name");
          expect(":");
          body_field(k, parts);
        }
        expect("}");
        branches.push_back(Branch{std::move(when), finish(parts, open)});
      } else {
        body_field(key, top);
      }
    }
    const Token close = lex_.peek();
    expect("}");
    expect_end();
    if (!dom) lex_.fail(close, "missing 'dom'");
    return IVF(std::move(*dom), std::move(where), std::move(branches), finish(top, close),
               grid);
  }

 private:
  struct BodyParts {
    std::optional<Expr> lower, upper, scale;
    std::optional<Interval> c;
  };

  void body_field(const Token& key, BodyParts& parts) {
    auto set = [&](auto& slot, auto value) {
      if (slot) lex_.fail(key, "duplicate '" + key.text + "'");
      slot = std::move(value);
    };
    if (key.text == "lower") {
      set(parts.lower, expr());
    } else if (key.text == "upper") {
      set(parts.upper, expr());
    } else if (key.text == "scale") {
      set(parts.scale, expr());
    } else if (key.text == "c") {
      set(parts.c, interval());
    } else {
      lex_.fail(key, "unknown field '" + key.text + "'");
    }
  }

  Body finish(BodyParts& parts, const Token& at) {
    const bool endpoint = parts.lower || parts.upper;
    const bool scale = parts.scale || parts.c;
    if (endpoint && scale) lex_.fail(at, "mix of lower/upper and scale/c fields");
    if (endpoint) {
      if (!parts.lower || !parts.upper) lex_.fail(at, "need both 'lower' and 'upper'");
      return EndpointBody{std::move(*parts.lower), std::move(*parts.upper)};
    }
    if (!parts.scale || !parts.c) lex_.fail(at, "need 'lower'/'upper' or 'scale'/'c'");
    return ScaleBody{std::move(*parts.scale), *parts.c};
  }

  DomainBox box() {
    std::vector<Interval> bounds;
    for (;;) {
      const Interval iv = interval();
      std::size_t times = 1;
      if (is("^")) {
        lex_.next();
        const Token t = lex_.next();
        if (t.kind != Tok::Number || t.number < 1 || t.number != static_cast<int>(t.number)) {
          lex_.fail(t, "box exponent must be a positive integer");
        }
        times = static_cast<std::size_t>(t.number);
      }
      bounds.insert(bounds.end(), times, iv);
      if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "x") {
        lex_.next();
        continue;
      }
      break;
    }
    return DomainBox(std::move(bounds));
  }

  Interval interval() {
    const Token open = lex_.peek();
    expect("[");
    const double lo = constant_expr();
    expect(",");
    const double hi = constant_expr();
    expect("]");
    if (lo > hi) lex_.fail(open, "interval lower endpoint exceeds upper endpoint");
    return Interval(lo, hi);
  }

  double constant_expr() {
    const Token at = lex_.peek();
    const Expr e = expr();
    if (!e.is_constant()) lex_.fail(at, "expected a constant");
    const double v = constant_value(e);
    if (!std::isfinite(v)) lex_.fail(at, "constant is not finite");
    return v;
  }

  Predicate predicate() {
    std::vector<Comparison> terms;
    for (;;) {
      Comparison cmp;
      cmp.lhs = expr();
      const Token op = lex_.next();
      static const std::pair<std::string_view, CmpOp> ops[] = {
          {"==", CmpOp::Eq}, {"!=", CmpOp::Ne}, {"<", CmpOp::Lt},
          {"<=", CmpOp::Le}, {">", CmpOp::Gt},  {">=", CmpOp::Ge}};
      bool found = false;
      for (const auto& [txt, code] : ops) {
        if (op.kind == Tok::Punct && op.text == txt) {
          cmp.op = code;
          found = true;
        }
      }
      if (!found) lex_.fail(op, "expected a comparison operator");
      cmp.rhs = constant_expr();
      terms.push_back(std::move(cmp));
      if (!is("&&")) break;
      lex_.next();
    }
    return Predicate(std::move(terms));
  }

  Expr expr() {
    Expr e = term();
    while (is("+") || is("-")) {
      const bool plus = lex_.next().text == "+";
      e = Expr::binary(plus ? NodeKind::Add : NodeKind::Sub, std::move(e), term());
    }
    return e;
  }

  Expr term() {
    Expr e = unary();
    while (is("*") || is("/")) {
      const bool times = lex_.next().text == "*";
      e = Expr::binary(times ? NodeKind::Mul : NodeKind::Div, std::move(e), unary());
    }
    return e;
  }

  Expr unary() {
    if (is("-")) {
      lex_.next();
      Expr inner = unary();
      if (inner.kind == NodeKind::Constant) {
        inner.value = -inner.value;
        return inner;
      }
      return Expr::unary(NodeKind::Neg, std::move(inner));
    }
    if (is("+")) {
      lex_.next();
      return unary();
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (is("^")) {
      lex_.next();
      return Expr::binary(NodeKind::Pow, std::move(base), unary());
    }
    return base;
  }

  Expr primary() {
    const Token t = lex_.next();
    if (t.kind == Tok::Number) return Expr::constant(t.number);
    if (t.kind == Tok::Punct && t.text == "(") {
      Expr e = expr();
      expect(")");
      return e;
    }
    if (t.kind != Tok::Ident) lex_.fail(t, "expected an expression");
    if (t.text == "pi") return Expr::constant(std::numbers::pi);
    if (t.text.size() > 1 && t.text[0] == 'x' &&
        t.text.find_first_not_of("0123456789", 1) == std::string::npos) {
      const int idx = std::stoi(t.text.substr(1));
      if (idx < 1) lex_.fail(t, "variables are numbered from x1");
      return Expr::variable(static_cast<std::size_t>(idx - 1));
    }
    static const std::pair<std::string_view, NodeKind> unaries[] = {
        {"abs", NodeKind::Abs},   {"sin", NodeKind::Sin}, {"cos", NodeKind::Cos},
        {"sqrt", NodeKind::Sqrt}, {"exp", NodeKind::Exp}, {"log", NodeKind::Log}};
    for (const auto& [name, kind] : unaries) {
      if (t.text == name) {
        auto args = call_args(t);
        if (args.size() != 1) lex_.fail(t, t.text + "() takes one argument");
        return Expr::unary(kind, std::move(args[0]));
      }
    }
    if (t.text == "pow") {
      auto args = call_args(t);
      if (args.size() != 2) lex_.fail(t, "pow() takes two arguments");
      return Expr::binary(NodeKind::Pow, std::move(args[0]), std::move(args[1]));
    }
    if (t.text == "min" || t.text == "max") {
      auto args = call_args(t);
      if (args.size() < 2) lex_.fail(t, t.text + "() takes at least two arguments");
      const auto kind = t.text == "min" ? NodeKind::Min : NodeKind::Max;
      Expr e = std::move(args[0]);
      for (std::size_t i = 1; i < args.size(); ++i) {
        e = Expr::binary(kind, std::move(e), std::move(args[i]));
      }
      return e;
    }
    if (t.text == "dot") {
      expect("(");
      auto v = vector_literal();
      expect(")");
      return Expr::dot(std::move(v));
    }
    if (t.text == "quad") {
      expect("(");
      const Token open = lex_.peek();
      expect("[");
      std::vector<std::vector<double>> rows;
      do {
        rows.push_back(vector_literal());
      } while (is(",") && (lex_.next(), true));
      expect("]");
      expect(")");
      std::vector<double> flat;
      for (const auto& r : rows) {
        if (r.size() != rows.size()) lex_.fail(open, "quad() matrix must be square");
        flat.insert(flat.end(), r.begin(), r.end());
      }
      return Expr::quad(std::move(flat));
    }
    lex_.fail(t, "unknown identifier '" + t.text + "'");
  }

  std::vector<double> vector_literal() {
    expect("[");
    std::vector<double> v;
    do {
      v.push_back(constant_expr());
    } while (is(",") && (lex_.next(), true));
    expect("]");
    return v;
  }

  std::vector<Expr> call_args(const Token& fn) {
    if (!is("(")) lex_.fail(fn, "expected '(' after " + fn.text);
    lex_.next();
    std::vector<Expr> args;
    if (!is(")")) {
      do {
        args.push_back(expr());
      } while (is(",") && (lex_.next(), true));
    }
    expect(")");
    return args;
  }

  bool is(std::string_view p) const {
    return lex_.peek().kind == Tok::Punct && lex_.peek().text == p;
  }

  void expect(std::string_view p) {
    if (!is(p)) {
      const Token& t = lex_.peek();
      lex_.fail(t, "expected '" + std::string(p) + "' but found " +
                       (t.kind == Tok::End ? std::string("end of input")
                                           : "'" + t.text + "'"));
    }
    lex_.next();
  }

  void expect_ident(std::string_view name) {
    const Token t = lex_.next();
    if (t.kind != Tok::Ident || t.text != name) {
      lex_.fail(t, "expected '" + std::string(name) + "'");
    }
  }

  void expect_end() {
    if (lex_.peek().kind != Tok::End) lex_.fail(lex_.peek(), "trailing input");
  }

  Lexer lex_;
};

}  // namespace detail

/// Parses a standalone real-valued expression.
inline Expr parse_expr(std::string_view text) {
  return detail::IvfParser(text).parse_expression_only();
}

/// Parses and validates an `ivf { ... }` definition.
inline IVF parse_ivf(std::string_view text, const ValidationGrid& grid = {}) {
  return detail::IvfParser(text).parse_ivf(grid);
}

inline IVF load_ivf(const std::string& path, const ValidationGrid& grid = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::parse, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_ivf(ss.str(), grid);
  } catch (const error& e) {
    throw error(e.code(), path + ":" + e.what());
  }
}

}  // namespace ghc
