#include "qlinz/poly.hpp"

#include <algorithm>

#include "qlinz/errors.hpp"

namespace qlinz {
namespace {

const GR kZero{};

std::string coefficient_text(const GR& c, std::size_t degree, bool first) {
  std::string out;
  if (c.is_real()) {
    const bool negative = sgn(c.re()) < 0;
    const Rational mag = abs(c.re());
    if (negative) {
      out += "-";
    } else if (!first) {
      out += "+";
    }
    if (degree == 0) {
      out += rational_to_string(mag);
    } else if (mag != 1) {
      out += mag.get_den() == 1 ? rational_to_string(mag) : "(" + rational_to_string(mag) + ")";
    }
  } else {
    if (!first) out += "+";
    out += "(" + c.str() + ")";
  }
  return out;
}

bool needs_parens(const Poly& p) {
  if (p.term_count() > 1) return true;
  return p.term_count() == 1 && !p.leading().is_real();
}

}  // namespace

Poly::Poly(std::vector<GR> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void Poly::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Poly Poly::constant(const GR& c) { return Poly(std::vector<GR>{c}); }

Poly Poly::monomial(const GR& c, std::size_t degree) {
  std::vector<GR> v(degree + 1);
  v[degree] = c;
  return Poly(std::move(v));
}

Poly Poly::linear(const GR& root) { return Poly(std::vector<GR>{-root, GR(1)}); }

const GR& Poly::leading() const { return coeffs_.empty() ? kZero : coeffs_.back(); }

const GR& Poly::coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : kZero; }

std::size_t Poly::term_count() const {
  return static_cast<std::size_t>(
      std::count_if(coeffs_.begin(), coeffs_.end(), [](const GR& c) { return !c.is_zero(); }));
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  Poly p = *this;
  const GR lead = leading();
  for (auto& c : p.coeffs_) c /= lead;
  return p;
}

GR Poly::eval(const GR& s) const {
  GR acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Complex Poly::eval(Complex s) const {
  Complex acc{0.0};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + it->to_complex();
  return acc;
}

Poly Poly::substitute_neg() const {
  Poly p = *this;
  for (std::size_t k = 1; k < p.coeffs_.size(); k += 2) p.coeffs_[k] = -p.coeffs_[k];
  return p;
}

Poly Poly::conj_coeffs() const {
  Poly p = *this;
  for (auto& c : p.coeffs_) c = c.conj();
  return p;
}

std::vector<Complex> Poly::complex_coeffs() const {
  std::vector<Complex> v;
  v.reserve(coeffs_.size());
  for (const auto& c : coeffs_) v.push_back(c.to_complex());
  return v;
}

std::string Poly::str() const {
  if (is_zero()) return "0";
  std::string out;
  bool first = true;
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    const GR& c = coeffs_[k];
    if (c.is_zero()) continue;
    out += coefficient_text(c, k, first);
    if (k == 1) out += "s";
    if (k > 1) out += "s^" + std::to_string(k);
    first = false;
  }
  return out;
}

Poly Poly::operator-() const {
  Poly p = *this;
  for (auto& c : p.coeffs_) c = -c;
  return p;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  trim();
  return *this;
}

Poly& Poly::operator*=(const Poly& o) {
  if (is_zero() || o.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<GR> out(coeffs_.size() + o.coeffs_.size() - 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i].is_zero()) continue;
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) {
      if (!o.coeffs_[j].is_zero()) out[i + j] += coeffs_[i] * o.coeffs_[j];
    }
  }
  coeffs_ = std::move(out);
  trim();
  return *this;
}

Poly& Poly::operator*=(const GR& c) {
  if (c.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  for (auto& x : coeffs_) x *= c;
  return *this;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw ParameterError("polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly(), a};
  std::vector<GR> rem = a.coeffs();
  std::vector<GR> quo(static_cast<std::size_t>(a.degree() - b.degree() + 1));
  const GR& lead = b.leading();
  const std::size_t db = static_cast<std::size_t>(b.degree());
  for (std::size_t k = quo.size(); k-- > 0;) {
    const GR q = rem[k + db] / lead;
    quo[k] = q;
    if (q.is_zero()) continue;
    for (std::size_t j = 0; j <= db; ++j) rem[k + j] -= q * b.coeffs()[j];
  }
  return {Poly(std::move(quo)), Poly(std::move(rem))};
}

Poly exact_div(const Poly& a, const Poly& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw ParameterError("polynomial division is not exact: " + a.str() + " / " + b.str());
  return q;
}

bool divides(const Poly& d, const Poly& a) {
  if (d.is_zero()) return a.is_zero();
  return divmod(a, d).second.is_zero();
}

Poly poly_gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
    // Keep intermediate coefficients small.
    if (!b.is_zero()) b = b.monic();
  }
  return a.monic();
}

Poly poly_lcm(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  return exact_div(a * b, poly_gcd(a, b)).monic();
}

Poly interpolate(const std::vector<GR>& points, const std::vector<GR>& values) {
  if (points.size() != values.size()) throw DimensionError("interpolate: size mismatch");
  const std::size_t n = points.size();
  // Newton divided differences.
  std::vector<GR> dd = values;
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t k = n - 1; k >= level; --k) {
      const GR span = points[k] - points[k - level];
      if (span.is_zero()) throw ParameterError("interpolate: repeated node");
      dd[k] = (dd[k] - dd[k - 1]) / span;
      if (k == level) break;
    }
  }
  Poly result;
  for (std::size_t k = n; k-- > 0;) {
    result = result * Poly::linear(points[k]) + Poly::constant(dd[k]);
  }
  return result;
}

ResolventExpansion resolvent_expansion(const GMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("resolvent_expansion: matrix not square");
  const std::size_t n = a.rows();
  std::vector<GR> c(n + 1);
  c[n] = GR(1);
  ResolventExpansion out;
  GMatrix m(n, n);
  const GMatrix id = GMatrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m + id * c[n - k + 1];
    out.adjugate_terms.push_back(m);
    c[n - k] = -(a * m).trace() / GR(static_cast<long>(k));
  }
  out.characteristic = Poly(std::move(c));
  return out;
}

Poly characteristic_polynomial(const GMatrix& a) { return resolvent_expansion(a).characteristic; }

RationalFn::RationalFn(Poly num, Poly den) {
  if (den.is_zero()) throw ParameterError("rational function with zero denominator");
  if (num.is_zero()) {
    den_ = Poly::constant(GR(1));
    return;
  }
  const Poly g = poly_gcd(num, den);
  if (g.degree() > 0) {
    num = exact_div(num, g);
    den = exact_div(den, g);
  }
  const GR lead = den.leading();
  num_ = num * (GR(1) / lead);
  den_ = den.monic();
}

GR RationalFn::eval(const GR& s) const {
  const GR d = den_.eval(s);
  if (d.is_zero()) throw PoleEvaluationError("rational function evaluated at a pole " + s.str(), s.to_complex());
  return num_.eval(s) / d;
}

Complex RationalFn::eval(Complex s) const {
  const Complex d = den_.eval(s);
  if (d == Complex(0.0)) throw PoleEvaluationError("rational function evaluated at a pole", s);
  return num_.eval(s) / d;
}

RationalFn RationalFn::substitute_neg() const { return {num_.substitute_neg(), den_.substitute_neg()}; }

std::string RationalFn::str() const {
  if (is_polynomial()) return num_.str();
  const std::string n = needs_parens(num_) ? "(" + num_.str() + ")" : num_.str();
  const std::string d = needs_parens(den_) ? "(" + den_.str() + ")" : den_.str();
  return n + "/" + d;
}

RationalFn RationalFn::operator-() const { return {-num_, den_}; }

RationalFn operator+(const RationalFn& a, const RationalFn& b) {
  if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
  return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

RationalFn operator-(const RationalFn& a, const RationalFn& b) { return a + (-b); }

RationalFn operator*(const RationalFn& a, const RationalFn& b) {
  return {a.num_ * b.num_, a.den_ * b.den_};
}

RationalFn operator/(const RationalFn& a, const RationalFn& b) {
  if (b.is_zero()) throw ParameterError("rational function division by zero");
  return {a.num_ * b.den_, a.den_ * b.num_};
}

}  // namespace qlinz
