#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ghc/error.hpp"
#include "ghc/expr.hpp"
#include "ghc/interval.hpp"

namespace ghc {

using Point = std::vector<double>;

inline std::string to_string(std::span<const double> x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ", ";
    s += detail::format_real(x[i]);
  }
  return s + ")";
}

inline double euclidean_norm(std::span<const double> x) noexcept {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline double euclidean_distance(std::span<const double> x,
                                 std::span<const double> y) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(s);
}

/// Closed box in R^n; membership includes the boundary.
class DomainBox {
 public:
  DomainBox() = default;

  explicit DomainBox(std::vector<Interval> bounds) : bounds_(std::move(bounds)) {
    if (bounds_.empty()) {
      throw error(errc::invalid_argument, "domain box needs at least one dimension");
    }
  }

  /// The box [lo, hi]^dims.
  static DomainBox cube(std::size_t dims, double lo, double hi) {
    return DomainBox(std::vector<Interval>(dims, Interval(lo, hi)));
  }

  std::size_t dims() const noexcept { return bounds_.size(); }
  const Interval& operator[](std::size_t i) const { return bounds_[i]; }
  const std::vector<Interval>& bounds() const noexcept { return bounds_; }

  bool contains(std::span<const double> x) const noexcept {
    if (x.size() != bounds_.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!(bounds_[i].lower() <= x[i] && x[i] <= bounds_[i].upper())) return false;
    }
    return true;
  }

  Point center() const {
    Point c(dims());
    for (std::size_t i = 0; i < dims(); ++i) {
      c[i] = 0.5 * (bounds_[i].lower() + bounds_[i].upper());
    }
    return c;
  }

  /// Distance from x to the complement of the box (0 on the boundary).
  double inner_margin(std::span<const double> x) const noexcept {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) {
      m = std::min({m, x[i] - bounds_[i].lower(), bounds_[i].upper() - x[i]});
    }
    return m;
  }

  bool symmetric_about_origin() const noexcept {
    for (const auto& b : bounds_) {
      if (b.lower() != -b.upper()) return false;
    }
    return true;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < bounds_.size(); ++i) {
      if (i) s += " x ";
      s += "[" + detail::format_real(bounds_[i].lower()) + ", " +
           detail::format_real(bounds_[i].upper()) + "]";
    }
    return s;
  }

 private:
  std::vector<Interval> bounds_;
};

enum class CmpOp : std::uint8_t { Eq, Ne, Lt, Le, Gt, Ge };

inline const char* to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

struct Comparison {
  Expr lhs;
  CmpOp op = CmpOp::Eq;
  double rhs = 0.0;
};

/// Conjunction of `expr op constant` comparisons. Empty means "always".
class Predicate {
 public:
  Predicate() = default;
  explicit Predicate(std::vector<Comparison> terms) : terms_(std::move(terms)) {
    compiled_.reserve(terms_.size());
    for (const auto& t : terms_) compiled_.emplace_back(t.lhs);
  }

  bool empty() const noexcept { return terms_.empty(); }
  const std::vector<Comparison>& terms() const noexcept { return terms_; }

  bool operator()(std::span<const double> x) const noexcept {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const double v = compiled_[i](x);
      const double c = terms_[i].rhs;
      bool ok = false;
      switch (terms_[i].op) {
        case CmpOp::Eq: ok = v == c; break;
        case CmpOp::Ne: ok = v != c; break;
        case CmpOp::Lt: ok = v < c; break;
        case CmpOp::Le: ok = v <= c; break;
        case CmpOp::Gt: ok = v > c; break;
        case CmpOp::Ge: ok = v >= c; break;
      }
      if (!ok) return false;
    }
    return true;
  }

  void validate(std::size_t dims) const {
    for (const auto& t : terms_) ghc::validate(t.lhs, dims);
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (i) s += " && ";
      s += ghc::to_string(terms_[i].lhs) + " " + ghc::to_string(terms_[i].op) +
           " " + detail::format_real(terms_[i].rhs);
    }
    return s;
  }

 private:
  std::vector<Comparison> terms_;
  std::vector<CompiledExpr> compiled_;
};

/// Explicit endpoint functions [lower(x), upper(x)].
struct EndpointBody {
  Expr lower;
  Expr upper;
};

/// g(x) ⊙ C.
struct ScaleBody {
  Expr scale;
  Interval c;
};

using Body = std::variant<EndpointBody, ScaleBody>;

struct Branch {
  Predicate when;
  Body body;
};

/// Outcome of a non-throwing evaluation.
enum class EvalStatus : std::uint8_t { Ok, OutsideDomain, NonFinite, Inverted };

class IVF;

namespace detail {

class IvfImpl {
 public:
  virtual ~IvfImpl() = default;
  virtual const DomainBox& domain() const noexcept = 0;
  // Box membership plus any extra constraint on S.
  virtual bool contains(std::span<const double> x) const noexcept = 0;
  // x is assumed inside the domain.
  virtual EvalStatus eval_inside(std::span<const double> x, double& lo,
                                 double& hi) const noexcept = 0;
  virtual std::string describe() const = 0;
};

struct CompiledBody {
  bool scale_form = false;
  CompiledExpr first;   // lower, or the scale function
  CompiledExpr second;  // upper; unused in scale form
  Interval c;

  explicit CompiledBody(const Body& body) {
    if (const auto* eb = std::get_if<EndpointBody>(&body)) {
      first = CompiledExpr(eb->lower);
      second = CompiledExpr(eb->upper);
    } else {
      const auto& sb = std::get<ScaleBody>(body);
      scale_form = true;
      first = CompiledExpr(sb.scale);
      c = sb.c;
    }
  }

  EvalStatus operator()(std::span<const double> x, double& lo,
                        double& hi) const noexcept {
    if (scale_form) {
      const double s = first(x);
      if (s >= 0.0) {
        lo = s * c.lower();
        hi = s * c.upper();
      } else {
        lo = s * c.upper();
        hi = s * c.lower();
      }
    } else {
      lo = first(x);
      hi = second(x);
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) return EvalStatus::NonFinite;
    if (lo > hi) return EvalStatus::Inverted;
    return EvalStatus::Ok;
  }
};

inline std::string body_source(const Body& body) {
  if (const auto* eb = std::get_if<EndpointBody>(&body)) {
    return "lower: " + ghc::to_string(eb->lower) + "; upper: " + ghc::to_string(eb->upper);
  }
  const auto& sb = std::get<ScaleBody>(body);
  return "scale: " + ghc::to_string(sb.scale) + "; c: [" +
         format_real(sb.c.lower()) + ", " + format_real(sb.c.upper()) + "]";
}

class ParsedIvf final : public IvfImpl {
 public:
  ParsedIvf(DomainBox domain, Predicate where, std::vector<Branch> branches,
            Body fallback)
      : domain_(std::move(domain)),
        where_(std::move(where)),
        branches_(std::move(branches)),
        fallback_(std::move(fallback)),
        fallback_code_(fallback_) {
    for (const auto& b : branches_) branch_code_.emplace_back(b.body);
  }

  const DomainBox& domain() const noexcept override { return domain_; }

  bool contains(std::span<const double> x) const noexcept override {
    return domain_.contains(x) && where_(x);
  }

  EvalStatus eval_inside(std::span<const double> x, double& lo,
                         double& hi) const noexcept override {
    for (std::size_t i = 0; i < branches_.size(); ++i) {
      if (branches_[i].when(x)) return branch_code_[i](x, lo, hi);
    }
    return fallback_code_(x, lo, hi);
  }

  std::string describe() const override {
    std::string s = "ivf { dom: " + domain_.to_string();
    if (!where_.empty()) s += "; where: " + where_.to_string();
    s += "; " + body_source(fallback_);
    for (const auto& b : branches_) {
      s += "; branch: " + b.when.to_string() + " -> { " + body_source(b.body) + " }";
    }
    return s + " }";
  }

  const Predicate& where() const noexcept { return where_; }
  const std::vector<Branch>& branches() const noexcept { return branches_; }
  const Body& fallback() const noexcept { return fallback_; }

 private:
  DomainBox domain_;
  Predicate where_;
  std::vector<Branch> branches_;
  Body fallback_;
  CompiledBody fallback_code_;
  std::vector<CompiledBody> branch_code_;
};

}  // namespace detail

/// Construction-time screening grid and random probe counts for lower <= upper.
struct ValidationGrid {
  std::size_t per_axis = 17;
  std::size_t grid_cap = 100000;
  std::size_t random_points = 1000;
  std::uint64_t seed = 0x5EED;
};

/**
 * Interval-valued function F(x) = [f_lower(x), f_upper(x)] on a box domain,
 * optionally restricted by a `where` predicate and with piecewise branches
 * (first matching branch wins). Immutable; copies share the implementation.
 */
class IVF {
 public:
  IVF() = default;

  /// Builds and screens a parsed function; throws errc::validation with a
  /// witness point when lower > upper is found.
  IVF(DomainBox domain, Predicate where, std::vector<Branch> branches, Body fallback,
      const ValidationGrid& grid = {}) {
    const std::size_t n = domain.dims();
    where.validate(n);
    auto check_body = [n](const Body& b) {
      if (const auto* eb = std::get_if<EndpointBody>(&b)) {
        ghc::validate(eb->lower, n);
        ghc::validate(eb->upper, n);
      } else {
        ghc::validate(std::get<ScaleBody>(b).scale, n);
      }
    };
    check_body(fallback);
    for (const auto& br : branches) {
      br.when.validate(n);
      check_body(br.body);
    }
    impl_ = std::make_shared<detail::ParsedIvf>(std::move(domain), std::move(where),
                                                std::move(branches),
                                                std::move(fallback));
    screen(grid);
  }

  /// g(x) ⊙ c on the given domain.
  static IVF scale_form(const Expr& scale, const Interval& c, const DomainBox& domain) {
    return IVF(domain, Predicate{}, {}, ScaleBody{scale, c});
  }

  /// Wraps an arbitrary evaluator; used for sums, scalings and endpoint views.
  static IVF from_impl(std::shared_ptr<const detail::IvfImpl> impl) {
    IVF f;
    f.impl_ = std::move(impl);
    return f;
  }

  bool valid() const noexcept { return impl_ != nullptr; }
  const DomainBox& domain() const noexcept { return impl_->domain(); }
  std::size_t dims() const noexcept { return impl_->domain().dims(); }
  bool contains(std::span<const double> x) const noexcept {
    return x.size() == dims() && impl_->contains(x);
  }
  std::string source() const { return impl_->describe(); }
  const detail::IvfImpl& impl() const noexcept { return *impl_; }
  std::shared_ptr<const detail::IvfImpl> impl_ptr() const noexcept { return impl_; }

  EvalStatus try_eval(std::span<const double> x, double& lo, double& hi) const noexcept {
    if (!contains(x)) return EvalStatus::OutsideDomain;
    return impl_->eval_inside(x, lo, hi);
  }

  std::optional<Interval> try_eval(std::span<const double> x) const noexcept {
    double lo, hi;
    if (try_eval(x, lo, hi) != EvalStatus::Ok) return std::nullopt;
    return Interval(lo, hi);
  }

  Interval eval(std::span<const double> x) const {
    if (x.size() != dims()) {
      throw error(errc::domain, "point " + to_string(x) + " has dimension " +
                                    std::to_string(x.size()) + ", expected " +
                                    std::to_string(dims()));
    }
    double lo, hi;
    switch (try_eval(x, lo, hi)) {
      case EvalStatus::Ok:
        return Interval(lo, hi);
      case EvalStatus::OutsideDomain:
        throw error(errc::domain, "point " + to_string(x) + " is outside the domain");
      case EvalStatus::NonFinite:
        throw error(errc::evaluation, "non-finite value at " + to_string(x));
      case EvalStatus::Inverted:
        throw error(errc::validation, "lower endpoint exceeds upper at " + to_string(x));
    }
    return {};
  }

  Interval operator()(std::span<const double> x) const { return eval(x); }
  Interval operator()(std::initializer_list<double> x) const {
    return eval(std::span<const double>(x.begin(), x.size()));
  }

 private:
  void screen(const ValidationGrid& grid) const {
    const auto& box = domain();
    const std::size_t n = box.dims();
    std::size_t per_axis = std::max<std::size_t>(grid.per_axis, 2);
    // Shrink the per-axis count until the full grid fits under the cap.
    while (per_axis > 2 && std::pow(static_cast<double>(per_axis),
                                    static_cast<double>(n)) > grid.grid_cap) {
      --per_axis;
    }
    Point x(n);
    auto probe = [&](const Point& p) {
      double lo, hi;
      if (try_eval(p, lo, hi) == EvalStatus::Inverted) {
        throw error(errc::validation, "lower endpoint " + detail::format_real(lo) +
                                          " exceeds upper endpoint " +
                                          detail::format_real(hi) + " at witness " +
                                          to_string(p));
      }
    };
    std::vector<std::size_t> idx(n, 0);
    const double total = std::pow(static_cast<double>(per_axis), static_cast<double>(n));
    if (total <= static_cast<double>(grid.grid_cap)) {
      for (;;) {
        for (std::size_t i = 0; i < n; ++i) {
          const double t = static_cast<double>(idx[i]) / static_cast<double>(per_axis - 1);
          x[i] = box[i].lower() + t * box[i].width();
        }
        probe(x);
        std::size_t d = 0;
        while (d < n && ++idx[d] == per_axis) idx[d++] = 0;
        if (d == n) break;
      }
    }
    std::mt19937_64 rng(grid.seed);
    for (std::size_t k = 0; k < grid.random_points; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        x[i] = box[i].lower() + u * box[i].width();
      }
      probe(x);
    }
  }

  std::shared_ptr<const detail::IvfImpl> impl_;
};

namespace detail {

// Shared plumbing for derived functions whose domain is that of a parent.
class DerivedIvf : public IvfImpl {
 public:
  using Fn = std::function<EvalStatus(std::span<const double>, double&, double&)>;

  DerivedIvf(std::vector<IVF> parents, DomainBox domain, Fn fn, std::string desc)
      : parents_(std::move(parents)),
        domain_(std::move(domain)),
        fn_(std::move(fn)),
        desc_(std::move(desc)) {}

  const DomainBox& domain() const noexcept override { return domain_; }
  bool contains(std::span<const double> x) const noexcept override {
    if (!domain_.contains(x)) return false;
    for (const auto& p : parents_) {
      if (!p.impl().contains(x)) return false;
    }
    return true;
  }
  EvalStatus eval_inside(std::span<const double> x, double& lo,
                         double& hi) const noexcept override {
    return fn_(x, lo, hi);
  }
  std::string describe() const override { return desc_; }

 private:
  std::vector<IVF> parents_;
  DomainBox domain_;
  Fn fn_;
  std::string desc_;
};

inline DomainBox intersect(const DomainBox& a, const DomainBox& b) {
  if (a.dims() != b.dims()) {
    throw error(errc::invalid_argument, "IVFs have different domain dimensions");
  }
  std::vector<Interval> out;
  for (std::size_t i = 0; i < a.dims(); ++i) {
    const double lo = std::max(a[i].lower(), b[i].lower());
    const double hi = std::min(a[i].upper(), b[i].upper());
    if (lo > hi) throw error(errc::invalid_argument, "IVF domains do not intersect");
    out.emplace_back(lo, hi);
  }
  return DomainBox(std::move(out));
}

}  // namespace detail

/// F ⊕ G on the intersection of the domains.
inline IVF operator+(const IVF& f, const IVF& g) {
  auto fn = [f, g](std::span<const double> x, double& lo, double& hi) {
    double a, b, c, d;
    auto s = f.impl().eval_inside(x, a, b);
    if (s != EvalStatus::Ok) return s;
    s = g.impl().eval_inside(x, c, d);
    if (s != EvalStatus::Ok) return s;
    lo = a + c;
    hi = b + d;
    return std::isfinite(lo) && std::isfinite(hi) ? EvalStatus::Ok : EvalStatus::NonFinite;
  };
  return IVF::from_impl(std::make_shared<detail::DerivedIvf>(
      std::vector<IVF>{f, g}, detail::intersect(f.domain(), g.domain()), fn,
      "(" + f.source() + ") (+) (" + g.source() + ")"));
}

/// λ ⊙ F.
inline IVF scaled(double lambda, const IVF& f) {
  auto fn = [f, lambda](std::span<const double> x, double& lo, double& hi) {
    double a, b;
    auto s = f.impl().eval_inside(x, a, b);
    if (s != EvalStatus::Ok) return s;
    lo = lambda >= 0.0 ? lambda * a : lambda * b;
    hi = lambda >= 0.0 ? lambda * b : lambda * a;
    return std::isfinite(lo) && std::isfinite(hi) ? EvalStatus::Ok : EvalStatus::NonFinite;
  };
  return IVF::from_impl(std::make_shared<detail::DerivedIvf>(
      std::vector<IVF>{f}, f.domain(), fn,
      detail::format_real(lambda) + " (.) (" + f.source() + ")"));
}

enum class Endpoint { Lower, Upper };

/// The degenerate IVF x ↦ [f(x), f(x)] for one endpoint function f.
inline IVF endpoint_function(const IVF& f, Endpoint which) {
  auto fn = [f, which](std::span<const double> x, double& lo, double& hi) {
    double a, b;
    auto s = f.impl().eval_inside(x, a, b);
    if (s != EvalStatus::Ok) return s;
    lo = hi = (which == Endpoint::Lower ? a : b);
    return EvalStatus::Ok;
  };
  return IVF::from_impl(std::make_shared<detail::DerivedIvf>(
      std::vector<IVF>{f}, f.domain(), fn,
      std::string(which == Endpoint::Lower ? "lower" : "upper") + "(" + f.source() + ")"));
}

/// x ↦ [‖F(x)‖, ‖F(x)‖].
inline IVF norm_function(const IVF& f) {
  auto fn = [f](std::span<const double> x, double& lo, double& hi) {
    double a, b;
    auto s = f.impl().eval_inside(x, a, b);
    if (s != EvalStatus::Ok) return s;
    lo = hi = std::max(std::fabs(a), std::fabs(b));
    return EvalStatus::Ok;
  };
  return IVF::from_impl(std::make_shared<detail::DerivedIvf>(
      std::vector<IVF>{f}, f.domain(), fn, "norm(" + f.source() + ")"));
}

/// x ↦ ‖F(x) ⊖gH F(anchor)‖ as a degenerate IVF.
inline IVF gh_distance_function(const IVF& f, const Interval& anchor) {
  auto fn = [f, anchor](std::span<const double> x, double& lo, double& hi) {
    double a, b;
    auto s = f.impl().eval_inside(x, a, b);
    if (s != EvalStatus::Ok) return s;
    lo = hi = std::max(std::fabs(a - anchor.lower()), std::fabs(b - anchor.upper()));
    return EvalStatus::Ok;
  };
  return IVF::from_impl(std::make_shared<detail::DerivedIvf>(
      std::vector<IVF>{f}, f.domain(), fn, "ghdist(" + f.source() + ")"));
}

}  // namespace ghc
