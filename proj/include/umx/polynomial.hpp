#ifndef UMX_POLYNOMIAL_HPP
#define UMX_POLYNOMIAL_HPP

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "umx/algebra.hpp"

namespace umx {

struct MonoLess {
  const Algebra* alg = nullptr;
  bool operator()(const Monomial& a, const Monomial& b) const { return alg->mono_less(a, b); }
};

struct MonoTupleLess {
  const Algebra* alg = nullptr;
  bool operator()(const std::vector<Monomial>& a, const std::vector<Monomial>& b) const {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
      if (!(a[i] == b[i])) return alg->mono_less(a[i], b[i]);
    return a.size() < b.size();
  }
};

// Finite linear combination of reduced words, exact coefficients.
class Polynomial {
 public:
  using Map = std::map<Monomial, Scalar, MonoLess>;

  explicit Polynomial(const Algebra& alg) : alg_(&alg), terms_(MonoLess{&alg}) {}

  static Polynomial zero(const Algebra& alg) { return Polynomial(alg); }
  static Polynomial one(const Algebra& alg) { return mono(alg, Monomial{}, Scalar(1)); }
  static Polynomial mono(const Algebra& alg, Monomial m, Scalar c = Scalar(1)) {
    Polynomial p(alg);
    p.add_term(std::move(m), std::move(c));
    return p;
  }

  const Algebra& algebra() const { return *alg_; }
  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(Monomial m, Scalar c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.emplace(std::move(m), c);
    if (!fresh) {
      it->second = it->second + c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c * Scalar(-1));
    return *this;
  }
  Polynomial& operator*=(const Scalar& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c = c * s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Scalar& s, Polynomial p) { return p *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out(*a.alg_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(a.alg_->mul(ma, mb), ca * cb);
    return out;
  }

  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

  Polynomial star() const {
    Polynomial out(*alg_);
    for (const auto& [m, c] : terms_) out.add_term(alg_->star(m), c.conj());
    return out;
  }

  int degree() const {  // max word degree; -1 for the zero polynomial
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }
  int min_degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_)
      if (d < 0 || m.degree() < d) d = m.degree();
    return d;
  }

  // Projection that annihilates all degree-0 words (constants and the unit).
  Polynomial project_pos() const {
    Polynomial out(*alg_);
    for (const auto& [m, c] : terms_)
      if (m.degree() > 0) out.add_term(m, c);
    return out;
  }
  Polynomial constant_part() const {
    Polynomial out(*alg_);
    for (const auto& [m, c] : terms_)
      if (m.degree() == 0) out.add_term(m, c);
    return out;
  }

  // l1 coefficient norm and the weighted norm sum_w |c_w| xi^deg(w).
  // Exact variants require every coefficient to be purely real or purely
  // imaginary (the evaluation lattice of every pipeline here).
  Rat l1_exact() const {
    Rat acc(0);
    for (const auto& [m, c] : terms_) acc += c.modulus_exact();
    return acc;
  }
  Rat xi_norm_exact(const Rat& xi) const {
    Rat acc(0);
    for (const auto& [m, c] : terms_) acc += c.modulus_exact() * rat_pow(xi, m.degree());
    return acc;
  }
  double xi_norm(double xi) const {
    double acc = 0;
    for (const auto& [m, c] : terms_) acc += std::abs(c.to_complex()) * std::pow(xi, m.degree());
    return acc;
  }

 private:
  const Algebra* alg_;
  Map terms_;
};

// Finite linear combination of rank-k tensors of reduced words, k >= 2.
class TensorPoly {
 public:
  using Key = std::vector<Monomial>;
  using Map = std::map<Key, Scalar, MonoTupleLess>;

  TensorPoly(const Algebra& alg, int rank = 2) : alg_(&alg), rank_(rank), terms_(MonoTupleLess{&alg}) {
    if (rank_ < 2) throw std::invalid_argument("tensor rank must be >= 2");
  }

  const Algebra& algebra() const { return *alg_; }
  int rank() const { return rank_; }
  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(Key slots, Scalar c) {
    if (static_cast<int>(slots.size()) != rank_) throw std::invalid_argument("tensor key rank mismatch");
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.emplace(std::move(slots), c);
    if (!fresh) {
      it->second = it->second + c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  void add_term(Monomial a, Monomial b, Scalar c) { add_term(Key{std::move(a), std::move(b)}, std::move(c)); }

  TensorPoly& operator+=(const TensorPoly& o) {
    if (o.rank_ != rank_) throw std::invalid_argument("tensor rank mismatch");
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }
  TensorPoly& operator*=(const Scalar& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, c] : terms_) c = c * s;
    return *this;
  }
  friend TensorPoly operator+(TensorPoly a, const TensorPoly& b) { return a += b; }
  friend TensorPoly operator*(const Scalar& s, TensorPoly t) { return t *= s; }

  bool operator==(const TensorPoly& o) const { return rank_ == o.rank_ && terms_ == o.terms_; }

  static int key_degree(const Key& k) {
    int d = 0;
    for (const Monomial& m : k) d += m.degree();
    return d;
  }

  Rat xi_norm_exact(const Rat& xi) const {
    Rat acc(0);
    for (const auto& [k, c] : terms_) acc += c.modulus_exact() * rat_pow(xi, key_degree(k));
    return acc;
  }
  double xi_norm(double xi) const {
    double acc = 0;
    for (const auto& [k, c] : terms_) acc += std::abs(c.to_complex()) * std::pow(xi, key_degree(k));
    return acc;
  }

 private:
  const Algebra* alg_;
  int rank_;
  Map terms_;
};

}  // namespace umx

#endif
