#include "hcn/jet.hpp"

#include "hcn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

namespace hcn {

namespace {

void append_degree(int num_vars, int remaining, int var, MultiIndex& current,
                   std::vector<MultiIndex>& out) {
  if (var == num_vars - 1) {
    current[var] = remaining;
    out.push_back(current);
    current[var] = 0;
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    current[var] = k;
    append_degree(num_vars, remaining - k, var + 1, current, out);
  }
  current[var] = 0;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

double multi_factorial(const MultiIndex& a) {
  double f = 1.0;
  for (int k : a) f *= factorial(k);
  return f;
}

} // namespace

JetLayout::JetLayout(int num_vars, int order) : num_vars_(num_vars), order_(order) {
  MultiIndex current(num_vars, 0);
  for (int deg = 0; deg <= order; ++deg) {
    std::size_t before = indices_.size();
    append_degree(num_vars, deg, 0, current, indices_);
    degrees_.insert(degrees_.end(), indices_.size() - before, deg);
  }

  lookup_.reserve(indices_.size());
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    lookup_.emplace_back(key(indices_[i]), static_cast<std::uint32_t>(i));
  }
  std::sort(lookup_.begin(), lookup_.end());

  MultiIndex sum(num_vars);
  for (std::size_t a = 0; a < indices_.size(); ++a) {
    for (std::size_t b = 0; b < indices_.size(); ++b) {
      if (degrees_[a] + degrees_[b] > order) continue;
      for (int v = 0; v < num_vars; ++v) sum[v] = indices_[a][v] + indices_[b][v];
      products_.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                           static_cast<std::uint32_t>(position(sum))});
    }
  }

  if (order > 0) {
    auto lower_layout = JetLayout::get(num_vars, order - 1);
    const JetLayout& lower = *lower_layout;
    shifts_.resize(num_vars);
    for (int v = 0; v < num_vars; ++v) {
      for (std::size_t i = 0; i < indices_.size(); ++i) {
        const MultiIndex& a = indices_[i];
        if (a[v] == 0) continue;
        MultiIndex reduced = a;
        reduced[v] -= 1;
        shifts_[v].push_back({static_cast<std::uint32_t>(i),
                              static_cast<std::uint32_t>(lower.position(reduced)),
                              static_cast<double>(a[v])});
      }
    }
  }
}

std::uint64_t JetLayout::key(const MultiIndex& a) const {
  std::uint64_t k = 0;
  for (int v : a) k = k * static_cast<std::uint64_t>(order_ + 1) + static_cast<std::uint64_t>(v);
  return k;
}

std::size_t JetLayout::position(const MultiIndex& a) const {
  if (static_cast<int>(a.size()) != num_vars_) {
    throw StructuralError("multi-index has " + std::to_string(a.size()) +
                          " entries, layout has " + std::to_string(num_vars_) + " variables");
  }
  int deg = 0;
  for (int v : a) {
    if (v < 0) throw StructuralError("negative multi-index entry");
    deg += v;
  }
  if (deg > order_) {
    throw StructuralError("multi-index degree " + std::to_string(deg) + " exceeds jet order " +
                          std::to_string(order_));
  }
  auto k = key(a);
  auto it = std::lower_bound(lookup_.begin(), lookup_.end(), std::make_pair(k, std::uint32_t{0}));
  return it->second;
}

std::shared_ptr<const JetLayout> JetLayout::get(int num_vars, int order) {
  if (num_vars < 1 || num_vars > kMaxVars) {
    throw StructuralError("jet variable count must be in [1, " + std::to_string(kMaxVars) +
                          "], got " + std::to_string(num_vars));
  }
  if (order < 0) throw StructuralError("jet order must be nonnegative");

  static std::recursive_mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{num_vars, order}];
  if (!slot) slot = std::make_shared<const JetLayout>(num_vars, order);
  return slot;
}

Jet Jet::constant(int num_vars, int order, double value) {
  auto layout = JetLayout::get(num_vars, order);
  std::vector<double> c(layout->size(), 0.0);
  c[0] = value;
  return Jet(std::move(layout), std::move(c));
}

Jet Jet::variable(int num_vars, int order, int var, double value) {
  if (var < 0 || var >= num_vars) throw StructuralError("jet variable index out of range");
  Jet j = constant(num_vars, order, value);
  if (order > 0) j.coeffs_[j.layout_->unit_position(var)] = 1.0;
  return j;
}

Jet Jet::constant_like(const Jet& shape, double value) {
  std::vector<double> c(shape.layout_->size(), 0.0);
  c[0] = value;
  return Jet(shape.layout_, std::move(c));
}

double Jet::coeff(const MultiIndex& a) const { return coeffs_[layout_->position(a)]; }

double Jet::partial(const MultiIndex& a) const { return multi_factorial(a) * coeff(a); }

double Jet::d2(int var1, int var2) const {
  MultiIndex a(num_vars(), 0);
  a[var1] += 1;
  a[var2] += 1;
  return partial(a);
}

Jet Jet::derivative(int var) const {
  if (order() == 0) throw StructuralError("cannot differentiate an order-0 jet");
  if (var < 0 || var >= num_vars()) throw StructuralError("jet variable index out of range");
  auto lower = JetLayout::get(num_vars(), order() - 1);
  std::vector<double> c(lower->size(), 0.0);
  for (const auto& s : layout_->derivative_shifts(var)) c[s.to] = s.factor * coeffs_[s.from];
  return Jet(std::move(lower), std::move(c));
}

Jet Jet::truncated(int new_order) const {
  if (new_order > order() || new_order < 0) throw StructuralError("invalid truncation order");
  if (new_order == order()) return *this;
  auto lower = JetLayout::get(num_vars(), new_order);
  // Graded order: the lower layout is a prefix.
  std::vector<double> c(coeffs_.begin(), coeffs_.begin() + static_cast<long>(lower->size()));
  return Jet(std::move(lower), std::move(c));
}

void Jet::require_same_shape(const Jet& other) const {
  if (!layout_ || !other.layout_) throw StructuralError("operation on an empty jet");
  if (layout_ != other.layout_) {
    throw StructuralError("jet shape mismatch: (" + std::to_string(num_vars()) + " vars, order " +
                          std::to_string(order()) + ") vs (" + std::to_string(other.num_vars()) +
                          " vars, order " + std::to_string(other.order()) + ")");
  }
}

Jet& Jet::operator+=(const Jet& rhs) {
  require_same_shape(rhs);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  require_same_shape(rhs);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }
Jet& Jet::operator/=(const Jet& rhs) { return *this = *this / rhs; }

Jet& Jet::operator*=(double rhs) {
  for (double& c : coeffs_) c *= rhs;
  return *this;
}

Jet& Jet::operator/=(double rhs) {
  if (rhs == 0.0) throw SingularityError("jet division by zero scalar");
  for (double& c : coeffs_) c /= rhs;
  return *this;
}

Jet operator-(Jet a) {
  for (double& c : a.coeffs_) c = -c;
  return a;
}

Jet operator*(const Jet& a, const Jet& b) {
  a.require_same_shape(b);
  std::vector<double> c(a.coeffs_.size(), 0.0);
  for (const auto& p : a.layout_->products()) c[p.out] += a.coeffs_[p.lhs] * b.coeffs_[p.rhs];
  return Jet(a.layout_, std::move(c));
}

Jet operator/(const Jet& a, const Jet& b) {
  a.require_same_shape(b);
  return a * reciprocal(b);
}

Jet operator/(double a, const Jet& b) { return a * reciprocal(b); }

Jet compose(const Jet& a, std::span<const double> taylor) {
  const int order = a.order();
  if (static_cast<int>(taylor.size()) != order + 1) {
    throw StructuralError("composition needs order + 1 Taylor coefficients");
  }
  Jet h = a;
  h.coeffs_[0] = 0.0;
  Jet result = Jet::constant_like(a, taylor[order]);
  for (int k = order - 1; k >= 0; --k) {
    result = result * h;
    result.coeffs_[0] += taylor[k];
  }
  return result;
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  std::vector<double> t(a.order() + 1);
  for (int k = 0; k <= a.order(); ++k) t[k] = e / factorial(k);
  return compose(a, t);
}

Jet log(const Jet& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw SingularityError("ln of nonpositive value " + std::to_string(x));
  std::vector<double> t(a.order() + 1);
  t[0] = std::log(x);
  // d^k ln / dx^k / k! = (-1)^(k-1) / (k x^k)
  for (int k = 1; k <= a.order(); ++k) t[k] = ((k % 2 == 1) ? 1.0 : -1.0) / (k * std::pow(x, k));
  return compose(a, t);
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double cycle[4] = {s, c, -s, -c};
  std::vector<double> t(a.order() + 1);
  for (int k = 0; k <= a.order(); ++k) t[k] = cycle[k % 4] / factorial(k);
  return compose(a, t);
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double cycle[4] = {c, -s, -c, s};
  std::vector<double> t(a.order() + 1);
  for (int k = 0; k <= a.order(); ++k) t[k] = cycle[k % 4] / factorial(k);
  return compose(a, t);
}

Jet pow(const Jet& a, double p) {
  const double x = a.value();
  const bool integral = p >= 0.0 && std::floor(p) == p;
  if (!integral && !(x > 0.0)) {
    throw SingularityError("non-integer power of nonpositive value " + std::to_string(x));
  }
  std::vector<double> t(a.order() + 1);
  double falling = 1.0; // p (p-1) ... (p-k+1)
  for (int k = 0; k <= a.order(); ++k) {
    t[k] = (falling == 0.0) ? 0.0 : falling * std::pow(x, p - k) / factorial(k);
    falling *= (p - k);
  }
  return compose(a, t);
}

Jet sqrt(const Jet& a) {
  if (!(a.value() > 0.0)) {
    throw SingularityError("sqrt needs a positive constant term, got " + std::to_string(a.value()));
  }
  return pow(a, 0.5);
}

Jet reciprocal(const Jet& a) {
  const double x = a.value();
  if (x == 0.0) throw SingularityError("division by a jet with zero constant term");
  std::vector<double> t(a.order() + 1);
  double xk = x;
  for (int k = 0; k <= a.order(); ++k) {
    t[k] = ((k % 2 == 0) ? 1.0 : -1.0) / xk;
    xk *= x;
  }
  return compose(a, t);
}

Jet powi(const Jet& a, int k) {
  if (k < 0) return powi(reciprocal(a), -k);
  Jet result = Jet::constant_like(a, 1.0);
  Jet base = a;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

} // namespace hcn
