#include "qlinz/exact.hpp"

#include <cctype>
#include <utility>

#include "qlinz/errors.hpp"

namespace qlinz {
namespace {

mpz_class parse_integer(std::string_view digits, std::string_view context) {
  mpz_class z;
  const std::string s(digits);
  if (s.empty() || z.set_str(s, 10) != 0) {
    throw ParameterError("malformed rational '" + std::string(context) + "'");
  }
  return z;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    const mpz_class ez = parse_integer(s.substr(e + 1), text);
    if (!ez.fits_slong_p()) throw ParameterError("exponent out of range in '" + std::string(text) + "'");
    exponent = ez.get_si();
    s = s.substr(0, e);
  }
  std::string digits;
  long fraction_digits = 0;
  bool seen_point = false;
  for (char c : s) {
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++fraction_digits;
    } else {
      throw ParameterError("malformed rational '" + std::string(text) + "'");
    }
  }
  Rational r(parse_integer(digits, text));
  const long shift = exponent - fraction_digits;
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  if (shift >= 0) {
    r *= power;
  } else {
    r /= power;
  }
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw ParameterError("empty rational");
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = trim(s.substr(0, slash));
    const std::string_view den = trim(s.substr(slash + 1));
    if (!num.empty() && num.front() == '+') num.remove_prefix(1);
    const mpz_class p = parse_integer(num, text);
    const mpz_class q = parse_integer(den, text);
    if (q == 0) throw ParameterError("zero denominator in '" + std::string(text) + "'");
    Rational r(p, q);
    r.canonicalize();
    return r;
  }
  return parse_decimal(s);
}

std::string rational_to_string(const Rational& r) { return r.get_str(10); }

Rational rational_from_double(double x) {
  require_finite(Complex(x), "rational_from_double");
  return Rational(x);
}

GaussianRational GaussianRational::from_complex(Complex z) {
  return {rational_from_double(z.real()), rational_from_double(z.imag())};
}

std::string GaussianRational::str() const {
  if (is_real()) return rational_to_string(re_);
  std::string imag;
  if (im_ == 1) {
    imag = "i";
  } else if (im_ == -1) {
    imag = "-i";
  } else if (im_.get_den() == 1) {
    imag = rational_to_string(im_) + "i";
  } else {
    const mpz_class num = im_.get_num();
    const std::string head = num == 1 ? "" : num == -1 ? "-" : num.get_str();
    imag = head + "i/" + mpz_class(im_.get_den()).get_str();
  }
  if (sgn(re_) == 0) return imag;
  if (imag.front() != '-') imag = "+" + imag;
  return rational_to_string(re_) + imag;
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (o.is_real()) {
    re_ *= o.re_;
    im_ *= o.re_;
    return *this;
  }
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw ParameterError("division by zero in exact arithmetic");
  if (o.is_real()) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  const Rational n = o.norm();
  *this *= o.conj();
  re_ /= n;
  im_ /= n;
  return *this;
}

GMatrix GMatrix::identity(std::size_t n) {
  GMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = GR(1);
  return m;
}

GMatrix GMatrix::from_cmatrix_exact(const CMatrix& m) {
  require_finite(m, "GMatrix::from_cmatrix_exact");
  GMatrix g(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) {
      g(i, j) = GR::from_complex(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
  }
  return g;
}

GMatrix GMatrix::adjoint() const {
  GMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j).conj();
  return t;
}

GMatrix GMatrix::transpose() const {
  GMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

GMatrix GMatrix::conjugate() const {
  GMatrix t = *this;
  for (auto& x : t.data_) x = x.conj();
  return t;
}

GMatrix GMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionError("GMatrix::block out of range");
  GMatrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void GMatrix::set_block(std::size_t r0, std::size_t c0, const GMatrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw DimensionError("GMatrix::set_block out of range");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

GR GMatrix::trace() const {
  GR t;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

bool GMatrix::is_zero() const {
  for (const auto& x : data_)
    if (!x.is_zero()) return false;
  return true;
}

bool GMatrix::is_real() const {
  for (const auto& x : data_)
    if (!x.is_real()) return false;
  return true;
}

CMatrix GMatrix::to_cmatrix() const {
  CMatrix m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j).to_complex();
  return m;
}

GR GMatrix::determinant() const {
  if (rows_ != cols_) throw DimensionError("determinant of non-square exact matrix");
  GMatrix m = *this;
  GR det(1);
  const std::size_t n = rows_;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c).is_zero()) ++p;
    if (p == n) return GR(0);
    if (p != c) {
      for (std::size_t j = c; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m(r, c).is_zero()) continue;
      const GR f = m(r, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return det;
}

GMatrix& GMatrix::operator+=(const GMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("exact matrix sum shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

GMatrix& GMatrix::operator-=(const GMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("exact matrix difference shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

GMatrix& GMatrix::operator*=(const GR& s) {
  for (auto& x : data_) x *= s;
  return *this;
}

GMatrix operator*(const GMatrix& a, const GMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("exact matrix product shape mismatch");
  GMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const GR& x = a(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        if (!b(k, j).is_zero()) c(i, j) += x * b(k, j);
      }
    }
  }
  return c;
}

GMatrix operator-(GMatrix a) {
  for (auto& x : a.data_) x = -x;
  return a;
}

bool operator==(const GMatrix& a, const GMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

GMatrix hcat(const GMatrix& a, const GMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("hcat row mismatch");
  GMatrix m(a.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

GMatrix vcat(const GMatrix& a, const GMatrix& b) {
  if (a.cols() != b.cols()) throw DimensionError("vcat column mismatch");
  GMatrix m(a.rows() + b.rows(), a.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), 0, b);
  return m;
}

GMatrix exact_doubled_up(const GMatrix& u, const GMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) throw DimensionError("doubled_up: U and V shapes differ");
  return vcat(hcat(u, v), hcat(v.conjugate(), u.conjugate()));
}

GMatrix exact_signature_j(std::size_t k) {
  GMatrix j = GMatrix::identity(2 * k);
  for (std::size_t i = k; i < 2 * k; ++i) j(i, i) = GR(-1);
  return j;
}

namespace {

GMatrix exact_symplectic_j(std::size_t k) {
  GMatrix j(2 * k, 2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    j(i, k + i) = GR(1);
    j(k + i, i) = GR(-1);
  }
  return j;
}

}  // namespace

GMatrix exact_flat_adjoint(const GMatrix& x) {
  if (x.rows() % 2 != 0 || x.cols() % 2 != 0) throw DimensionError("flat_adjoint: matrix dimensions are not even");
  return exact_signature_j(x.cols() / 2) * x.adjoint() * exact_signature_j(x.rows() / 2);
}

GMatrix exact_sharp_adjoint(const GMatrix& x) {
  if (x.rows() % 2 != 0 || x.cols() % 2 != 0) throw DimensionError("sharp_adjoint: matrix dimensions are not even");
  return exact_symplectic_j(x.cols() / 2) * x.adjoint() * exact_symplectic_j(x.rows() / 2).transpose();
}

}  // namespace qlinz
