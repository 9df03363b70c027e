#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qlinz/exact.hpp"

namespace qlinz {

/// Univariate polynomial over Q(i); coefficients lowest degree first, the
/// zero polynomial has no coefficients.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<GR> coeffs);

  static Poly constant(const GR& c);
  static Poly monomial(const GR& c, std::size_t degree);
  /// s - root
  static Poly linear(const GR& root);

  const std::vector<GR>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const GR& leading() const;
  const GR& coeff(std::size_t k) const;
  bool is_monic() const { return !is_zero() && leading() == GR(1); }
  bool is_constant() const { return degree() <= 0; }
  /// Number of nonzero terms.
  std::size_t term_count() const;

  Poly monic() const;
  GR eval(const GR& s) const;
  Complex eval(Complex s) const;
  /// p(-s)
  Poly substitute_neg() const;
  /// Coefficientwise conjugate, i.e. p#(s) with conj(p(conj s)) = p#(s).
  Poly conj_coeffs() const;
  std::vector<Complex> complex_coeffs() const;

  /// Canonical text such as "s^2+3s+2" or "(1+2i)s-1/2".
  std::string str() const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const GR& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Poly& b) { return a *= b; }
  friend Poly operator*(Poly a, const GR& c) { return a *= c; }
  friend Poly operator*(const GR& c, Poly a) { return a *= c; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

 private:
  void trim();
  std::vector<GR> coeffs_;
};

/// Quotient and remainder; throws ParameterError when dividing by zero.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);

/// Exact quotient; throws ParameterError when b does not divide a.
Poly exact_div(const Poly& a, const Poly& b);

bool divides(const Poly& d, const Poly& a);

/// Monic gcd; gcd(a, 0) = monic(a) and gcd(0, 0) = 0.
Poly poly_gcd(Poly a, Poly b);

/// Monic lcm (zero if either argument is zero).
Poly poly_lcm(const Poly& a, const Poly& b);

/// Unique polynomial of degree < points.size() through (points[k], values[k]).
Poly interpolate(const std::vector<GR>& points, const std::vector<GR>& values);

/// Coefficients of det(sI - A) together with the adjugate expansion
/// adj(sI - A) = sum_{k=1}^{n} M_k s^{n-k} (Faddeev–LeVerrier).
struct ResolventExpansion {
  Poly characteristic;
  std::vector<GMatrix> adjugate_terms;  // M_1 .. M_n
};

ResolventExpansion resolvent_expansion(const GMatrix& a);

/// det(sI - A) by the Faddeev–LeVerrier recurrence.
Poly characteristic_polynomial(const GMatrix& a);

/// Reduced rational function num/den with monic den and gcd(num, den) = 1.
class RationalFn {
 public:
  RationalFn() : den_(Poly::constant(GR(1))) {}
  RationalFn(Poly num, Poly den);
  explicit RationalFn(Poly p) : RationalFn(std::move(p), Poly::constant(GR(1))) {}
  static RationalFn constant(const GR& c) { return RationalFn(Poly::constant(c)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  /// Throws PoleEvaluationError when den(s) = 0.
  GR eval(const GR& s) const;
  Complex eval(Complex s) const;
  RationalFn substitute_neg() const;

  std::string str() const;

  RationalFn operator-() const;
  friend RationalFn operator+(const RationalFn& a, const RationalFn& b);
  friend RationalFn operator-(const RationalFn& a, const RationalFn& b);
  friend RationalFn operator*(const RationalFn& a, const RationalFn& b);
  /// Throws ParameterError when b is zero.
  friend RationalFn operator/(const RationalFn& a, const RationalFn& b);
  friend bool operator==(const RationalFn& a, const RationalFn& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RationalFn& a, const RationalFn& b) { return !(a == b); }

 private:
  Poly num_;
  Poly den_;
};

}  // namespace qlinz
