#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace jetflow::expr {

/// First-order dual number over an arbitrary scalar T. Used to nest one
/// extra derivative on top of the second-order Taylor arithmetic.
template <class T>
struct DualT {
  T v{};
  T d{};

  DualT() = default;
  DualT(double c) : v(c), d(0.0) {}  // NOLINT: implicit by design
  DualT(T v_, T d_) : v(std::move(v_)), d(std::move(d_)) {}

  DualT operator-() const { return {-v, -d}; }

  friend DualT operator+(const DualT& a, const DualT& b) { return {a.v + b.v, a.d + b.d}; }
  friend DualT operator-(const DualT& a, const DualT& b) { return {a.v - b.v, a.d - b.d}; }
  friend DualT operator*(const DualT& a, const DualT& b) {
    return {a.v * b.v, a.d * b.v + a.v * b.d};
  }
  friend DualT operator/(const DualT& a, const DualT& b) {
    T q = a.v / b.v;
    return {q, (a.d - q * b.d) / b.v};
  }
};

using Dual = DualT<double>;

template <class T> DualT<T> sin(const DualT<T>& u) {
  using std::cos; using std::sin;
  return {sin(u.v), cos(u.v) * u.d};
}
template <class T> DualT<T> cos(const DualT<T>& u) {
  using std::cos; using std::sin;
  return {cos(u.v), T(-1.0) * sin(u.v) * u.d};
}
template <class T> DualT<T> tan(const DualT<T>& u) {
  using std::tan;
  T f = tan(u.v);
  return {f, (T(1.0) + f * f) * u.d};
}
template <class T> DualT<T> exp(const DualT<T>& u) {
  using std::exp;
  T f = exp(u.v);
  return {f, f * u.d};
}
template <class T> DualT<T> log(const DualT<T>& u) {
  using std::log;
  return {log(u.v), u.d / u.v};
}
template <class T> DualT<T> sqrt(const DualT<T>& u) {
  using std::sqrt;
  T f = sqrt(u.v);
  return {f, u.d / (T(2.0) * f)};
}
template <class T> DualT<T> sinh(const DualT<T>& u) {
  using std::cosh; using std::sinh;
  return {sinh(u.v), cosh(u.v) * u.d};
}
template <class T> DualT<T> cosh(const DualT<T>& u) {
  using std::cosh; using std::sinh;
  return {cosh(u.v), sinh(u.v) * u.d};
}

/// Primal double underneath any nesting of the AD scalar types.
inline double primal(double v) { return v; }
template <class T> double primal(const DualT<T>& v) { return primal(v.v); }

/// Second-order truncated Taylor scalar over m seed directions: value,
/// gradient, and Hessian stored as a packed upper triangle, so the Hessian
/// is symmetric by construction.
template <class T>
class Taylor2T {
 public:
  Taylor2T() = default;

  static Taylor2T constant(T value, int m) {
    Taylor2T r;
    r.v_ = std::move(value);
    r.grad_.assign(m, T(0.0));
    r.hess_.assign(packedSize(m), T(0.0));
    return r;
  }

  static Taylor2T seeded(T value, int m, int slot) {
    Taylor2T r = constant(std::move(value), m);
    r.grad_[slot] = T(1.0);
    return r;
  }

  int seeds() const { return static_cast<int>(grad_.size()); }
  const T& value() const { return v_; }
  const T& grad(int i) const { return grad_[i]; }
  const T& hess(int i, int j) const { return hess_[packedIndex(i, j)]; }

  Taylor2T operator-() const {
    Taylor2T r = *this;
    r.v_ = -r.v_;
    for (auto& g : r.grad_) g = -g;
    for (auto& h : r.hess_) h = -h;
    return r;
  }

  friend Taylor2T operator+(const Taylor2T& a, const Taylor2T& b) {
    Taylor2T r = a;
    r.v_ = r.v_ + b.v_;
    for (std::size_t i = 0; i < r.grad_.size(); ++i) r.grad_[i] = r.grad_[i] + b.grad_[i];
    for (std::size_t i = 0; i < r.hess_.size(); ++i) r.hess_[i] = r.hess_[i] + b.hess_[i];
    return r;
  }

  friend Taylor2T operator-(const Taylor2T& a, const Taylor2T& b) {
    Taylor2T r = a;
    r.v_ = r.v_ - b.v_;
    for (std::size_t i = 0; i < r.grad_.size(); ++i) r.grad_[i] = r.grad_[i] - b.grad_[i];
    for (std::size_t i = 0; i < r.hess_.size(); ++i) r.hess_[i] = r.hess_[i] - b.hess_[i];
    return r;
  }

  friend Taylor2T operator*(const Taylor2T& a, const Taylor2T& b) {
    const int m = a.seeds();
    Taylor2T r = constant(a.v_ * b.v_, m);
    for (int i = 0; i < m; ++i) r.grad_[i] = a.grad_[i] * b.v_ + a.v_ * b.grad_[i];
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j)
        r.hess_[r.packedIndex(i, j)] = a.hess(i, j) * b.v_ + a.v_ * b.hess(i, j) +
                                     a.grad_[i] * b.grad_[j] + a.grad_[j] * b.grad_[i];
    return r;
  }

  friend Taylor2T operator/(const Taylor2T& a, const Taylor2T& b) {
    const int m = a.seeds();
    Taylor2T r = constant(a.v_ / b.v_, m);
    for (int i = 0; i < m; ++i) r.grad_[i] = (a.grad_[i] - r.v_ * b.grad_[i]) / b.v_;
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j)
        r.hess_[r.packedIndex(i, j)] =
            (a.hess(i, j) - r.grad_[i] * b.grad_[j] - r.grad_[j] * b.grad_[i] -
             r.v_ * b.hess(i, j)) /
            b.v_;
    return r;
  }

  /// Univariate chain rule: returns f(u) given f, f', f'' at u.value().
  Taylor2T chain(T f0, T f1, T f2) const {
    const int m = seeds();
    Taylor2T r = constant(std::move(f0), m);
    for (int i = 0; i < m; ++i) r.grad_[i] = f1 * grad_[i];
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j)
        r.hess_[r.packedIndex(i, j)] = f1 * hess(i, j) + f2 * grad_[i] * grad_[j];
    return r;
  }

  static int packedSize(int m) { return m * (m + 1) / 2; }

  /// Packed upper triangle, row-major: (i,j) with i <= j.
  int packedIndex(int i, int j) const {
    if (i > j) std::swap(i, j);
    const int m = seeds();
    return i * m - i * (i - 1) / 2 + (j - i);
  }

 private:
  T v_{};
  std::vector<T> grad_;
  std::vector<T> hess_;
};

template <class T> Taylor2T<T> sin(const Taylor2T<T>& u) {
  using std::cos; using std::sin;
  T s = sin(u.value()), c = cos(u.value());
  return u.chain(s, c, -s);
}
template <class T> Taylor2T<T> cos(const Taylor2T<T>& u) {
  using std::cos; using std::sin;
  T s = sin(u.value()), c = cos(u.value());
  return u.chain(c, -s, -c);
}
template <class T> Taylor2T<T> tan(const Taylor2T<T>& u) {
  using std::tan;
  T f = tan(u.value());
  T d = T(1.0) + f * f;
  return u.chain(f, d, T(2.0) * f * d);
}
template <class T> Taylor2T<T> exp(const Taylor2T<T>& u) {
  using std::exp;
  T f = exp(u.value());
  return u.chain(f, f, f);
}
template <class T> Taylor2T<T> log(const Taylor2T<T>& u) {
  using std::log;
  T inv = T(1.0) / u.value();
  return u.chain(log(u.value()), inv, -inv * inv);
}
template <class T> Taylor2T<T> sqrt(const Taylor2T<T>& u) {
  using std::sqrt;
  T f = sqrt(u.value());
  T f1 = T(0.5) / f;
  return u.chain(f, f1, T(-0.5) * f1 / u.value());
}
template <class T> Taylor2T<T> sinh(const Taylor2T<T>& u) {
  using std::cosh; using std::sinh;
  T s = sinh(u.value()), c = cosh(u.value());
  return u.chain(s, c, s);
}
template <class T> Taylor2T<T> cosh(const Taylor2T<T>& u) {
  using std::cosh; using std::sinh;
  T s = sinh(u.value()), c = cosh(u.value());
  return u.chain(c, s, c);
}

template <class T> double primal(const Taylor2T<T>& v) { return primal(v.value()); }

using Taylor2 = Taylor2T<double>;

/// Gradient of a double-valued Taylor scalar as an Eigen vector.
inline Eigen::VectorXd gradVector(const Taylor2& t) {
  Eigen::VectorXd g(t.seeds());
  for (int i = 0; i < t.seeds(); ++i) g[i] = t.grad(i);
  return g;
}

/// Hessian unpacked into a (symmetric) dense matrix.
inline Eigen::MatrixXd hessMatrix(const Taylor2& t) {
  const int m = t.seeds();
  Eigen::MatrixXd h(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) h(i, j) = t.hess(i, j);
  return h;
}

}  // namespace jetflow::expr
