#pragma once

// Multivariate truncated Taylor arithmetic.
//
// A Jet of order K in m variables stores every Taylor coefficient
// c[a] = d^a f / a! with |a| <= K, densely, in graded lexicographic order of
// the multi-index a. All arithmetic truncates exactly at K.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace hcn {

using MultiIndex = std::vector<int>;

/// Immutable coefficient layout shared by all jets with the same
/// (num_vars, order). Obtain through JetLayout::get.
class JetLayout {
public:
  static constexpr int kMaxVars = 16;

  static std::shared_ptr<const JetLayout> get(int num_vars, int order);

  int num_vars() const noexcept { return num_vars_; }
  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return indices_.size(); }

  const MultiIndex& multi_index(std::size_t pos) const { return indices_[pos]; }
  int degree(std::size_t pos) const { return degrees_[pos]; }

  /// Position of `a` in the layout; throws StructuralError if |a| > order or
  /// the length is wrong.
  std::size_t position(const MultiIndex& a) const;

  /// Position of the unit multi-index e_var.
  std::size_t unit_position(int var) const { return 1 + static_cast<std::size_t>(var); }

  struct Product {
    std::uint32_t lhs, rhs, out;
  };
  /// All (lhs, rhs, out) with a_lhs + a_rhs = a_out and |a_out| <= order.
  const std::vector<Product>& products() const noexcept { return products_; }

  struct Shift {
    std::uint32_t from, to;
    double factor;
  };
  /// Coefficient moves implementing d/dx_var into the layout of order - 1.
  const std::vector<Shift>& derivative_shifts(int var) const { return shifts_[var]; }

  JetLayout(int num_vars, int order);

private:
  std::uint64_t key(const MultiIndex& a) const;

  int num_vars_;
  int order_;
  std::vector<MultiIndex> indices_;
  std::vector<int> degrees_;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> lookup_; // sorted by key
  std::vector<Product> products_;
  std::vector<std::vector<Shift>> shifts_;
};

class Jet {
public:
  Jet() = default;

  static Jet constant(int num_vars, int order, double value);
  /// The coordinate function x_var, expanded around x_var = value.
  static Jet variable(int num_vars, int order, int var, double value);
  static Jet constant_like(const Jet& shape, double value);

  int num_vars() const noexcept { return layout_->num_vars(); }
  int order() const noexcept { return layout_->order(); }
  const JetLayout& layout() const noexcept { return *layout_; }
  bool valid() const noexcept { return layout_ != nullptr; }

  double value() const noexcept { return coeffs_[0]; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::span<double> coeffs() noexcept { return coeffs_; }

  /// Normalized Taylor coefficient d^a f / a!.
  double coeff(const MultiIndex& a) const;
  /// True partial derivative d^a f = a! * coeff(a).
  double partial(const MultiIndex& a) const;
  double d(int var) const { return coeffs_[layout_->unit_position(var)]; }
  double d2(int var1, int var2) const;

  /// Exact d/dx_var, one order lower. Throws StructuralError for order 0.
  Jet derivative(int var) const;
  /// Drop every coefficient above `new_order` (<= order()).
  Jet truncated(int new_order) const;

  bool same_shape(const Jet& other) const noexcept { return layout_ == other.layout_; }

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);
  Jet& operator+=(double rhs) { coeffs_[0] += rhs; return *this; }
  Jet& operator-=(double rhs) { coeffs_[0] -= rhs; return *this; }
  Jet& operator*=(double rhs);
  Jet& operator/=(double rhs);

  friend Jet operator-(Jet a);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(Jet a, double b) { return a += b; }
  friend Jet operator+(double a, Jet b) { return b += a; }
  friend Jet operator-(Jet a, double b) { return a -= b; }
  friend Jet operator-(double a, Jet b) { return -(b -= a); }
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator*(double a, Jet b) { return b *= a; }
  friend Jet operator/(Jet a, double b) { return a /= b; }
  friend Jet operator/(double a, const Jet& b);

private:
  Jet(std::shared_ptr<const JetLayout> layout, std::vector<double> coeffs)
      : layout_(std::move(layout)), coeffs_(std::move(coeffs)) {}

  void require_same_shape(const Jet& other) const;

  friend Jet compose(const Jet& a, std::span<const double> taylor);

  std::shared_ptr<const JetLayout> layout_;
  std::vector<double> coeffs_;
};

/// f(a) given the normalized Taylor coefficients f^(k)(a0)/k!, k = 0..order,
/// of a univariate f at a0 = a.value().
Jet compose(const Jet& a, std::span<const double> taylor);

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sqrt(const Jet& a);
/// a^p for real p; requires a positive constant term unless p is a
/// nonnegative integer.
Jet pow(const Jet& a, double p);
/// a^k by repeated squaring; negative k requires a nonzero constant term.
Jet powi(const Jet& a, int k);
Jet reciprocal(const Jet& a);

} // namespace hcn
