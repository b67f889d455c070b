#pragma once

// Truncated multivariate Taylor series (total degree <= 4).
//
// A Series<NV> holds the Taylor coefficients of a smooth function of NV
// increments around a base point, c[e] multiplying d1^e1 ... dNV^eNV. The
// order() tracks how many degrees are exact; products and compositions
// truncate to the smallest order among their operands.

#include <array>
#include <cassert>
#include <cstddef>
#include <span>

namespace shockform {

inline constexpr int kSeriesMaxOrder = 4;

namespace detail {

constexpr int binomial(int n, int k) {
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

constexpr double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

template <int NV>
struct SeriesTables {
  static constexpr int kSize = binomial(NV + kSeriesMaxOrder, kSeriesMaxOrder);
  static constexpr int kKeySpace = [] {
    int k = 1;
    for (int i = 0; i < NV; ++i) k *= (kSeriesMaxOrder + 1);
    return k;
  }();

  std::array<std::array<int, NV>, kSize> exps{};
  std::array<int, kSize> degree{};
  std::array<int, kKeySpace> index_of_key{};
  std::array<std::array<int, kSize>, kSize> product{};
  std::array<std::array<int, kSize>, NV> lowered{};
  std::array<double, kSize> factorial_weight{};

  static constexpr int key(const std::array<int, NV>& e) {
    int k = 0;
    for (int i = NV - 1; i >= 0; --i) k = k * (kSeriesMaxOrder + 1) + e[i];
    return k;
  }

  constexpr SeriesTables() {
    for (auto& v : index_of_key) v = -1;
    int n = 0;
    // Enumerate by total degree, then lexicographically.
    for (int d = 0; d <= kSeriesMaxOrder; ++d) {
      std::array<int, NV> e{};
      for (int k = 0; k < kKeySpace; ++k) {
        int rem = k;
        int sum = 0;
        for (int i = 0; i < NV; ++i) {
          e[i] = rem % (kSeriesMaxOrder + 1);
          rem /= (kSeriesMaxOrder + 1);
          sum += e[i];
        }
        if (sum != d) continue;
        exps[n] = e;
        degree[n] = d;
        index_of_key[key(e)] = n;
        ++n;
      }
    }
    for (int a = 0; a < kSize; ++a) {
      double w = 1.0;
      for (int i = 0; i < NV; ++i) w *= factorial(exps[a][i]);
      factorial_weight[a] = w;
      for (int b = 0; b < kSize; ++b) {
        if (degree[a] + degree[b] > kSeriesMaxOrder) {
          product[a][b] = -1;
          continue;
        }
        std::array<int, NV> e{};
        for (int i = 0; i < NV; ++i) e[i] = exps[a][i] + exps[b][i];
        product[a][b] = index_of_key[key(e)];
      }
      for (int v = 0; v < NV; ++v) {
        if (exps[a][v] == 0) {
          lowered[v][a] = -1;
          continue;
        }
        std::array<int, NV> e = exps[a];
        e[v] -= 1;
        lowered[v][a] = index_of_key[key(e)];
      }
    }
  }
};

template <int NV>
inline constexpr SeriesTables<NV> kTables{};

}  // namespace detail

template <int NV>
class Series {
 public:
  using Exponents = std::array<int, NV>;
  static constexpr int kSize = detail::SeriesTables<NV>::kSize;

  Series() : Series(kSeriesMaxOrder) {}
  explicit Series(int order) : order_(order) {
    assert(order >= 0 && order <= kSeriesMaxOrder);
    c_.fill(0.0);
  }

  static Series constant(double value, int order = kSeriesMaxOrder) {
    Series s(order);
    s.c_[0] = value;
    return s;
  }

  /// base + d_v
  static Series variable(int v, double base, int order = kSeriesMaxOrder) {
    Series s = constant(base, order);
    if (order >= 1) {
      Exponents e{};
      e[v] = 1;
      s.coeff(e) = 1.0;
    }
    return s;
  }

  int order() const { return order_; }
  double value() const { return c_[0]; }

  double coeff(const Exponents& e) const {
    const int i = index(e);
    return i < 0 ? 0.0 : c_[i];
  }
  double& coeff(const Exponents& e) {
    const int i = index(e);
    assert(i >= 0);
    return c_[i];
  }

  /// Partial derivative d^|e| / (d1^e1 ... ) at the base point.
  double partial(const Exponents& e) const {
    const int i = index(e);
    return i < 0 ? 0.0 : c_[i] * tables().factorial_weight[i];
  }
  void set_partial(const Exponents& e, double value) {
    const int i = index(e);
    assert(i >= 0);
    c_[i] = value / tables().factorial_weight[i];
  }

  double raw(int i) const { return c_[i]; }
  double& raw(int i) { return c_[i]; }
  static const Exponents& exponents(int i) { return tables().exps[i]; }
  static int degree(int i) { return tables().degree[i]; }

  Series derivative(int v) const {
    Series r(order_ > 0 ? order_ - 1 : 0);
    for (int i = 0; i < kSize; ++i) {
      const int lo = tables().lowered[v][i];
      if (lo < 0 || tables().degree[i] > order_) continue;
      r.c_[lo] += c_[i] * tables().exps[i][v];
    }
    r.clear_above_order();
    return r;
  }

  Series truncated(int order) const {
    Series r = *this;
    r.order_ = order < order_ ? order : order_;
    r.clear_above_order();
    return r;
  }

  Series without_constant() const {
    Series r = *this;
    r.c_[0] = 0.0;
    return r;
  }

  Series& operator+=(const Series& o) {
    order_ = order_ < o.order_ ? order_ : o.order_;
    for (int i = 0; i < kSize; ++i) c_[i] += o.c_[i];
    clear_above_order();
    return *this;
  }
  Series& operator-=(const Series& o) {
    order_ = order_ < o.order_ ? order_ : o.order_;
    for (int i = 0; i < kSize; ++i) c_[i] -= o.c_[i];
    clear_above_order();
    return *this;
  }
  Series& operator*=(double k) {
    for (auto& v : c_) v *= k;
    return *this;
  }
  Series& operator+=(double k) {
    c_[0] += k;
    return *this;
  }

  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator*(Series a, double k) { return a *= k; }
  friend Series operator*(double k, Series a) { return a *= k; }
  friend Series operator+(Series a, double k) { return a += k; }
  friend Series operator+(double k, Series a) { return a += k; }
  friend Series operator-(Series a, double k) { return a += -k; }
  friend Series operator-(Series a) { return a *= -1.0; }

  friend Series operator*(const Series& a, const Series& b) {
    Series r(a.order_ < b.order_ ? a.order_ : b.order_);
    const auto& t = tables();
    for (int i = 0; i < kSize; ++i) {
      if (a.c_[i] == 0.0 || t.degree[i] > r.order_) continue;
      for (int j = 0; j < kSize; ++j) {
        const int k = t.product[i][j];
        if (k < 0 || t.degree[k] > r.order_) continue;
        r.c_[k] += a.c_[i] * b.c_[j];
      }
    }
    return r;
  }

  /// Division by a series with nonzero constant term.
  friend Series operator/(const Series& a, const Series& b) { return a * b.reciprocal(); }

  Series reciprocal() const {
    // 1/(b0 + e) = (1/b0) sum_k (-e/b0)^k
    const double b0 = c_[0];
    assert(b0 != 0.0);
    Series e = without_constant() * (-1.0 / b0);
    Series term = Series::constant(1.0, order_);
    Series sum = term;
    for (int k = 1; k <= order_; ++k) {
      term = term * e;
      sum += term;
    }
    return sum * (1.0 / b0);
  }

 private:
  static const detail::SeriesTables<NV>& tables() { return detail::kTables<NV>; }

  static int index(const Exponents& e) {
    int sum = 0;
    for (int x : e) {
      if (x < 0) return -1;
      sum += x;
    }
    if (sum > kSeriesMaxOrder) return -1;
    return tables().index_of_key[detail::SeriesTables<NV>::key(e)];
  }

  void clear_above_order() {
    for (int i = 0; i < kSize; ++i)
      if (tables().degree[i] > order_) c_[i] = 0.0;
  }

  int order_;
  std::array<double, kSize> c_{};
};

using Series2 = Series<2>;
using Series3 = Series<3>;

/// f(u) as a series, given the derivatives f^(k)(u.value()), k = 0..K.
template <int NV>
Series<NV> compose_univariate(std::span<const double> derivs, const Series<NV>& u) {
  const int order_cap = static_cast<int>(derivs.size()) - 1;
  const int order = u.order() < order_cap ? u.order() : order_cap;
  const Series<NV> du = u.without_constant().truncated(order);
  Series<NV> result = Series<NV>::constant(derivs[0], order);
  Series<NV> power = Series<NV>::constant(1.0, order);
  for (int k = 1; k <= order; ++k) {
    power = power * du;
    result += power * (derivs[k] / detail::factorial(k));
  }
  return result;
}

/// P(a, b) where P is a bivariate Taylor series in (da, db) and da, db are
/// increments expressed as series in NV other variables (constant terms are
/// ignored).
template <int NV>
Series<NV> compose(const Series2& outer, const Series<NV>& da, const Series<NV>& db) {
  int order = outer.order();
  if (da.order() < order) order = da.order();
  if (db.order() < order) order = db.order();
  const Series<NV> a = da.without_constant().truncated(order);
  const Series<NV> b = db.without_constant().truncated(order);
  std::array<Series<NV>, kSeriesMaxOrder + 1> pa, pb;
  pa[0] = Series<NV>::constant(1.0, order);
  pb[0] = Series<NV>::constant(1.0, order);
  for (int k = 1; k <= order; ++k) {
    pa[k] = pa[k - 1] * a;
    pb[k] = pb[k - 1] * b;
  }
  Series<NV> result(order);
  for (int i = 0; i < Series2::kSize; ++i) {
    const auto& e = Series2::exponents(i);
    if (e[0] + e[1] > order) continue;
    const double c = outer.raw(i);
    if (c == 0.0) continue;
    result += (pa[e[0]] * pb[e[1]]) * c;
  }
  return result;
}

}  // namespace shockform
