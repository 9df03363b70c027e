#pragma once

// Exact scalars and matrices over the Gaussian rationals Q(i).

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "qlinz/numeric.hpp"

namespace qlinz {

using Rational = mpq_class;

/// Parses "p/q", an integer, or a finite decimal ("0.25", "-1e-3") into an
/// exact rational. Throws ParameterError on malformed input.
Rational parse_rational(std::string_view text);

/// Canonical text: "p/q" or "p".
std::string rational_to_string(const Rational& r);

/// Exact binary value of a finite double.
Rational rational_from_double(double x);

class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(const Rational& re) : re_(re) {}  // NOLINT
  GaussianRational(Rational re, Rational im)
      : re_(std::move(re)), im_(std::move(im)) {}

  static GaussianRational i() { return {Rational(0), Rational(1)}; }
  static GaussianRational from_complex(Complex z);

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_imaginary() const { return sgn(re_) == 0; }

  GaussianRational conj() const { return {re_, -im_}; }
  /// |z|^2, exact.
  Rational norm() const { return re_ * re_ + im_ * im_; }
  Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }

  /// "a", "bi", or "a+bi" with rational a, b.
  std::string str() const;

  GaussianRational operator-() const { return {-re_, -im_}; }
  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  /// Throws ParameterError on division by zero.
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

 private:
  Rational re_{0};
  Rational im_{0};
};

using GR = GaussianRational;

/// Dense exact matrix, row-major.
class GMatrix {
 public:
  GMatrix() = default;
  GMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static GMatrix identity(std::size_t n);
  static GMatrix from_cmatrix_exact(const CMatrix& m);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  GR& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const GR& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  GMatrix adjoint() const;
  GMatrix transpose() const;
  GMatrix conjugate() const;
  GMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const GMatrix& b);
  GR trace() const;
  bool is_zero() const;
  bool is_real() const;
  CMatrix to_cmatrix() const;

  /// Determinant by Gaussian elimination with exact pivots.
  GR determinant() const;

  GMatrix& operator+=(const GMatrix& o);
  GMatrix& operator-=(const GMatrix& o);
  GMatrix& operator*=(const GR& s);
  friend GMatrix operator+(GMatrix a, const GMatrix& b) { return a += b; }
  friend GMatrix operator-(GMatrix a, const GMatrix& b) { return a -= b; }
  friend GMatrix operator*(GMatrix a, const GR& s) { return a *= s; }
  friend GMatrix operator*(const GR& s, GMatrix a) { return a *= s; }
  friend GMatrix operator*(const GMatrix& a, const GMatrix& b);
  friend GMatrix operator-(GMatrix a);
  friend bool operator==(const GMatrix& a, const GMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<GR> data_;
};

GMatrix hcat(const GMatrix& a, const GMatrix& b);
GMatrix vcat(const GMatrix& a, const GMatrix& b);
GMatrix exact_doubled_up(const GMatrix& u, const GMatrix& v);
GMatrix exact_signature_j(std::size_t k);
GMatrix exact_flat_adjoint(const GMatrix& x);
GMatrix exact_sharp_adjoint(const GMatrix& x);

}  // namespace qlinz
