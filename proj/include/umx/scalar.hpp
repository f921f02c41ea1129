#ifndef UMX_SCALAR_HPP
#define UMX_SCALAR_HPP

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <complex>
#include <stdexcept>
#include <string>

namespace umx {

using Rat = mpq_class;

inline Rat rat_pow(const Rat& base, unsigned long e) {
  Rat r(1);
  Rat b = base;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

// Parses "n", "-n", "n/d" into an exact rational. Rejects anything else.
inline Rat rat_parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  for (char c : s)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '/'))
      throw std::invalid_argument("bad rational literal: " + s);
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

// Complex scalar with exact rational parts. The symbolic engine is exact end
// to end; floating point enters only in the Monte Carlo layer.
struct Scalar {
  Rat re, im;

  Scalar() : re(0), im(0) {}
  Scalar(int n) : re(n), im(0) {}
  Scalar(long n) : re(n), im(0) {}
  Scalar(const Rat& r) : re(r), im(0) {}
  Scalar(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  Scalar conj() const { return Scalar(re, -im); }

  Scalar& operator+=(const Scalar& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator-(const Scalar& a) { return Scalar(-a.re, -a.im); }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    return Scalar(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
  }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  friend Scalar operator*(const Rat& r, const Scalar& a) { return Scalar(r * a.re, r * a.im); }
  Scalar& operator*=(const Rat& r) {
    re *= r;
    im *= r;
    return *this;
  }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  // |z| as an exact rational. Defined whenever one part vanishes, which covers
  // every coefficient the exact norm tests produce; mixed complex coefficients
  // have irrational modulus and are rejected.
  Rat modulus_exact() const {
    if (im == 0) return abs(re);
    if (re == 0) return abs(im);
    throw std::domain_error("modulus of a mixed complex rational is irrational");
  }

  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
};

// Canonical literal: "r" for real values, "(r+qi)" / "(r-qi)" otherwise.
inline std::string scalar_str(const Scalar& z) {
  if (z.im == 0) return rat_str(z.re);
  std::string s = "(" + rat_str(z.re);
  if (z.im > 0) s += "+" + rat_str(z.im) + "i";
  else s += "-" + rat_str(Rat(-z.im)) + "i";
  return s + ")";
}

}  // namespace umx

#endif
