#pragma once

#include <string>

#include "jkpencil/rational.hpp"

namespace jkp {

// Element re + i*im of Q(i).
struct GaussianRational {
  Rational re, im;

  GaussianRational() = default;
  GaussianRational(const Rational& r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(long r) : re(r), im(0) {}             // NOLINT(google-explicit-constructor)
  GaussianRational(const Rational& r, const Rational& i) : re(r), im(i) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  GaussianRational conj() const { return {re, -im}; }
  Rational norm() const { return re * re + im * im; }

  GaussianRational operator-() const { return {-re, -im}; }
  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    Rational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o) {
    const Rational n = o.norm();
    *this *= o.conj();
    re /= n;
    im /= n;
    return *this;
  }
  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }

  std::string to_string() const {
    if (sgn(im) == 0) return jkp::to_string(re);
    std::string i = jkp::to_string(abs(im));
    std::string imag = (abs(im) == 1 ? std::string("i") : i + "*i");
    if (sgn(re) == 0) return (sgn(im) < 0 ? "-" : "") + imag;
    return jkp::to_string(re) + (sgn(im) < 0 ? "-" : "+") + imag;
  }
};

}  // namespace jkp
