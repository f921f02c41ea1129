#ifndef UMX_SERIES_HPP
#define UMX_SERIES_HPP

#include <stdexcept>
#include <vector>

#include "umx/polynomial.hpp"

namespace umx {

// Power series in the coupling t, truncated at a fixed inclusive order.
class ScalarSeries {
 public:
  explicit ScalarSeries(int order) : c_(static_cast<std::size_t>(order) + 1) {
    if (order < 0) throw std::invalid_argument("series order must be >= 0");
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const Scalar& coeff(int k) const { return c_[idx(k)]; }
  void set(int k, Scalar v) { c_[idx(k)] = std::move(v); }
  void add(int k, const Scalar& v) { c_[idx(k)] = c_[idx(k)] + v; }

  ScalarSeries& operator+=(const ScalarSeries& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = c_[i] + o.c_[i];
    return *this;
  }
  ScalarSeries& operator-=(const ScalarSeries& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = c_[i] - o.c_[i];
    return *this;
  }
  friend ScalarSeries operator+(ScalarSeries a, const ScalarSeries& b) { return a += b; }
  friend ScalarSeries operator-(ScalarSeries a, const ScalarSeries& b) { return a -= b; }

  friend ScalarSeries operator*(const ScalarSeries& a, const ScalarSeries& b) {
    a.check(b);
    ScalarSeries out(a.order());
    for (int i = 0; i <= a.order(); ++i)
      for (int j = 0; i + j <= a.order(); ++j) out.add(i + j, a.coeff(i) * b.coeff(j));
    return out;
  }

  bool operator==(const ScalarSeries& o) const { return c_ == o.c_; }

  bool is_zero() const {
    for (const auto& v : c_)
      if (!v.is_zero()) return false;
    return true;
  }

  // c_d t^d -> c_d t^(d+1)/(d+1); the top coefficient is dropped by truncation.
  ScalarSeries antiderivative() const {
    ScalarSeries out(order());
    for (int d = 0; d + 1 <= order(); ++d)
      out.set(d + 1, coeff(d) * Scalar(Rat(1, d + 1)));
    return out;
  }

  Scalar eval(const Rat& t) const {
    Scalar acc(0);
    Rat p(1);
    for (int k = 0; k <= order(); ++k) {
      acc = acc + coeff(k) * Scalar(p);
      p *= t;
    }
    return acc;
  }

 private:
  std::size_t idx(int k) const {
    if (k < 0 || k > order()) throw std::out_of_range("series coefficient out of range");
    return static_cast<std::size_t>(k);
  }
  void check(const ScalarSeries& o) const {
    if (o.order() != order()) throw std::invalid_argument("series order mismatch");
  }
  std::vector<Scalar> c_;
};

// Polynomial-valued truncated series in t.
class PolySeries {
 public:
  PolySeries(const Algebra& alg, int order) : alg_(&alg), c_(static_cast<std::size_t>(order) + 1, Polynomial(alg)) {
    if (order < 0) throw std::invalid_argument("series order must be >= 0");
  }

  static PolySeries constant(Polynomial p, int order) {
    PolySeries s(p.algebra(), order);
    s.c_[0] = std::move(p);
    return s;
  }

  const Algebra& algebra() const { return *alg_; }
  int order() const { return static_cast<int>(c_.size()) - 1; }
  const Polynomial& coeff(int k) const { return c_[idx(k)]; }
  Polynomial& coeff(int k) { return c_[idx(k)]; }

  PolySeries& operator+=(const PolySeries& o) {
    if (o.order() != order()) throw std::invalid_argument("series order mismatch");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  friend PolySeries operator+(PolySeries a, const PolySeries& b) { return a += b; }

  bool is_zero() const {
    for (const auto& p : c_)
      if (!p.is_zero()) return false;
    return true;
  }

 private:
  std::size_t idx(int k) const {
    if (k < 0 || k > order()) throw std::out_of_range("series coefficient out of range");
    return static_cast<std::size_t>(k);
  }
  const Algebra* alg_;
  std::vector<Polynomial> c_;
};

}  // namespace umx

#endif
