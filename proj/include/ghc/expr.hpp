#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ghc/error.hpp"

namespace ghc {

enum class NodeKind : std::uint8_t {
  Constant,
  Variable,
  Neg,
  Abs,
  Sin,
  Cos,
  Sqrt,
  Exp,
  Log,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Min,
  Max,
  Dot,   // sum_i coeffs[i] * x_i
  Quad,  // x^T Q x, Q stored row-major in coeffs
};

inline int arity(NodeKind k) {
  switch (k) {
    case NodeKind::Constant:
    case NodeKind::Variable:
    case NodeKind::Dot:
    case NodeKind::Quad:
      return 0;
    case NodeKind::Neg:
    case NodeKind::Abs:
    case NodeKind::Sin:
    case NodeKind::Cos:
    case NodeKind::Sqrt:
    case NodeKind::Exp:
    case NodeKind::Log:
      return 1;
    default:
      return 2;
  }
}

/// Real-valued expression over x1..xn. Variable indices are zero-based
/// internally and printed one-based.
struct Expr {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;
  std::size_t var = 0;
  std::vector<double> coeffs;
  std::vector<Expr> args;

  static Expr constant(double v) {
    Expr e;
    e.value = v;
    return e;
  }
  static Expr variable(std::size_t index) {
    Expr e;
    e.kind = NodeKind::Variable;
    e.var = index;
    return e;
  }
  static Expr unary(NodeKind k, Expr a) {
    Expr e;
    e.kind = k;
    e.args.push_back(std::move(a));
    return e;
  }
  static Expr binary(NodeKind k, Expr a, Expr b) {
    Expr e;
    e.kind = k;
    e.args.push_back(std::move(a));
    e.args.push_back(std::move(b));
    return e;
  }
  static Expr dot(std::vector<double> a) {
    Expr e;
    e.kind = NodeKind::Dot;
    e.coeffs = std::move(a);
    return e;
  }
  static Expr quad(std::vector<double> q_row_major) {
    Expr e;
    e.kind = NodeKind::Quad;
    e.coeffs = std::move(q_row_major);
    return e;
  }

  bool is_constant() const {
    if (kind == NodeKind::Variable || kind == NodeKind::Dot ||
        kind == NodeKind::Quad) {
      return false;
    }
    return std::all_of(args.begin(), args.end(),
                       [](const Expr& a) { return a.is_constant(); });
  }
};

namespace detail {

inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline const char* function_name(NodeKind k) {
  switch (k) {
    case NodeKind::Abs: return "abs";
    case NodeKind::Sin: return "sin";
    case NodeKind::Cos: return "cos";
    case NodeKind::Sqrt: return "sqrt";
    case NodeKind::Exp: return "exp";
    case NodeKind::Log: return "log";
    case NodeKind::Pow: return "pow";
    case NodeKind::Min: return "min";
    case NodeKind::Max: return "max";
    default: return "";
  }
}

}  // namespace detail

/// Fully parenthesized source form, re-parseable by the .ivf grammar.
inline std::string to_string(const Expr& e) {
  using detail::format_real;
  switch (e.kind) {
    case NodeKind::Constant:
      return e.value < 0 ? "(" + format_real(e.value) + ")" : format_real(e.value);
    case NodeKind::Variable:
      return "x" + std::to_string(e.var + 1);
    case NodeKind::Neg:
      return "(-" + to_string(e.args[0]) + ")";
    case NodeKind::Add:
      return "(" + to_string(e.args[0]) + " + " + to_string(e.args[1]) + ")";
    case NodeKind::Sub:
      return "(" + to_string(e.args[0]) + " - " + to_string(e.args[1]) + ")";
    case NodeKind::Mul:
      return "(" + to_string(e.args[0]) + " * " + to_string(e.args[1]) + ")";
    case NodeKind::Div:
      return "(" + to_string(e.args[0]) + " / " + to_string(e.args[1]) + ")";
    case NodeKind::Dot: {
      std::string s = "dot([";
      for (std::size_t i = 0; i < e.coeffs.size(); ++i) {
        if (i) s += ", ";
        s += format_real(e.coeffs[i]);
      }
      return s + "])";
    }
    case NodeKind::Quad: {
      const auto n = static_cast<std::size_t>(
          std::lround(std::sqrt(static_cast<double>(e.coeffs.size()))));
      std::string s = "quad([";
      for (std::size_t r = 0; r < n; ++r) {
        if (r) s += ", ";
        s += "[";
        for (std::size_t c = 0; c < n; ++c) {
          if (c) s += ", ";
          s += format_real(e.coeffs[r * n + c]);
        }
        s += "]";
      }
      return s + "])";
    }
    default: {
      std::string s = std::string(detail::function_name(e.kind)) + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) s += ", ";
        s += to_string(e.args[i]);
      }
      return s + ")";
    }
  }
}

/// Checks node arity and that every variable, dot vector and quadratic form
/// matches the domain dimension.
inline void validate(const Expr& e, std::size_t dims) {
  if (static_cast<int>(e.args.size()) != arity(e.kind)) {
    throw error(errc::arity, "malformed expression node arity");
  }
  switch (e.kind) {
    case NodeKind::Variable:
      if (e.var >= dims) {
        throw error(errc::arity, "variable x" + std::to_string(e.var + 1) +
                                     " exceeds domain dimension " +
                                     std::to_string(dims));
      }
      break;
    case NodeKind::Dot:
      if (e.coeffs.size() != dims) {
        throw error(errc::arity, "dot() vector has " +
                                     std::to_string(e.coeffs.size()) +
                                     " entries, domain dimension is " +
                                     std::to_string(dims));
      }
      break;
    case NodeKind::Quad:
      if (e.coeffs.size() != dims * dims) {
        throw error(errc::arity, "quad() matrix must be " + std::to_string(dims) +
                                     "x" + std::to_string(dims));
      }
      break;
    default:
      break;
  }
  for (const auto& a : e.args) validate(a, dims);
}

/**
 * Postfix program compiled from an Expr. Evaluation never throws: domain
 * errors surface as NaN or infinity and callers decide how to treat them.
 */
class CompiledExpr {
 public:
  static constexpr std::size_t kMaxStack = 64;

  CompiledExpr() { code_.push_back({NodeKind::Constant, 0, 0.0}); }

  explicit CompiledExpr(const Expr& e) {
    std::size_t depth = 0;
    emit(e, depth);
    if (max_depth_ > kMaxStack) {
      throw error(errc::arity, "expression nesting too deep");
    }
  }

  double operator()(std::span<const double> x) const noexcept {
    std::array<double, kMaxStack> st;
    std::size_t sp = 0;
    for (const auto& ins : code_) {
      switch (ins.op) {
        case NodeKind::Constant: st[sp++] = ins.value; break;
        case NodeKind::Variable: st[sp++] = x[ins.arg]; break;
        case NodeKind::Neg: st[sp - 1] = -st[sp - 1]; break;
        case NodeKind::Abs: st[sp - 1] = std::fabs(st[sp - 1]); break;
        case NodeKind::Sin: st[sp - 1] = std::sin(st[sp - 1]); break;
        case NodeKind::Cos: st[sp - 1] = std::cos(st[sp - 1]); break;
        case NodeKind::Sqrt: st[sp - 1] = std::sqrt(st[sp - 1]); break;
        case NodeKind::Exp: st[sp - 1] = std::exp(st[sp - 1]); break;
        case NodeKind::Log: st[sp - 1] = std::log(st[sp - 1]); break;
        case NodeKind::Add: --sp; st[sp - 1] += st[sp]; break;
        case NodeKind::Sub: --sp; st[sp - 1] -= st[sp]; break;
        case NodeKind::Mul: --sp; st[sp - 1] *= st[sp]; break;
        case NodeKind::Div: --sp; st[sp - 1] /= st[sp]; break;
        case NodeKind::Pow: --sp; st[sp - 1] = power(st[sp - 1], st[sp]); break;
        case NodeKind::Min: --sp; st[sp - 1] = std::min(st[sp - 1], st[sp]); break;
        case NodeKind::Max: --sp; st[sp - 1] = std::max(st[sp - 1], st[sp]); break;
        case NodeKind::Dot: {
          const double* a = coeffs_.data() + ins.arg;
          double s = 0.0;
          for (std::size_t i = 0; i < x.size(); ++i) s += a[i] * x[i];
          st[sp++] = s;
          break;
        }
        case NodeKind::Quad: {
          const double* q = coeffs_.data() + ins.arg;
          const std::size_t n = x.size();
          double s = 0.0;
          for (std::size_t r = 0; r < n; ++r) {
            double row = 0.0;
            for (std::size_t c = 0; c < n; ++c) row += q[r * n + c] * x[c];
            s += x[r] * row;
          }
          st[sp++] = s;
          break;
        }
      }
    }
    return st[0];
  }

 private:
  struct Instr {
    NodeKind op;
    std::size_t arg;
    double value;
  };

  // Integer exponents use repeated multiplication so that x^2 of a negative
  // base stays real and matches x*x bit-for-bit.
  static double power(double base, double ex) noexcept {
    if (ex == std::floor(ex) && std::fabs(ex) <= 64.0) {
      auto n = static_cast<long>(std::fabs(ex));
      double r = 1.0;
      double b = base;
      while (n) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
      }
      return ex < 0 ? 1.0 / r : r;
    }
    return std::pow(base, ex);
  }

  void emit(const Expr& e, std::size_t& depth) {
    for (const auto& a : e.args) emit(a, depth);
    const auto nargs = e.args.size();
    switch (e.kind) {
      case NodeKind::Constant:
        code_.push_back({e.kind, 0, e.value});
        break;
      case NodeKind::Variable:
        code_.push_back({e.kind, e.var, 0.0});
        break;
      case NodeKind::Dot:
      case NodeKind::Quad:
        code_.push_back({e.kind, coeffs_.size(), 0.0});
        coeffs_.insert(coeffs_.end(), e.coeffs.begin(), e.coeffs.end());
        break;
      default:
        code_.push_back({e.kind, 0, 0.0});
        break;
    }
    depth = depth - nargs + 1;
    max_depth_ = std::max(max_depth_, depth);
  }

  std::vector<Instr> code_;
  std::vector<double> coeffs_;
  std::size_t max_depth_ = 0;
};

/// Folds a variable-free expression to its value.
inline double constant_value(const Expr& e) {
  return CompiledExpr(e)(std::span<const double>{});
}

}  // namespace ghc
