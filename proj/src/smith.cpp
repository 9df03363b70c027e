#include "qlinz/smith.hpp"

#include <algorithm>
#include <cmath>

#include "qlinz/errors.hpp"

namespace qlinz {
namespace {

constexpr long kMaxRootDenominator = 1L << 20;

// Continued-fraction convergents p/q of x with q <= max_den that lie within
// 1e-4 of x; a numerically computed multiple root may be that far off.
std::vector<Rational> rational_candidates(double x, long max_den) {
  std::vector<Rational> out;
  const double scale = std::max(1.0, std::abs(x));
  if (std::abs(x) <= 1e-12 * scale) {
    out.emplace_back(0);
    return out;
  }
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(r);
    if (std::abs(a) > 1e15) break;
    const long ai = static_cast<long>(a);
    const long h2 = ai * h1 + h0;
    const long k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - x) <= 1e-4 * scale) {
      Rational q(h1, k1);
      q.canonicalize();
      out.push_back(q);
    }
    const double frac = r - a;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  return out;
}

std::vector<GR> gaussian_candidates(Complex z) {
  std::vector<GR> out;
  for (const auto& re : rational_candidates(z.real(), kMaxRootDenominator))
    for (const auto& im : rational_candidates(z.imag(), kMaxRootDenominator)) out.emplace_back(re, im);
  return out;
}

void swap_rows(PolyMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

void swap_cols(PolyMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

// row[target] += q * row[source]
void add_row(PolyMatrix& m, std::size_t target, std::size_t source, const Poly& q) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (!m(source, j).is_zero()) m(target, j) += q * m(source, j);
  }
}

void add_col(PolyMatrix& m, std::size_t target, std::size_t source, const Poly& q) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (!m(i, source).is_zero()) m(i, target) += q * m(i, source);
  }
}

void scale_row(PolyMatrix& m, std::size_t row, const GR& c) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(row, j) *= c;
}

RationalMatrix to_rational(const PolyMatrix& p) { return RationalMatrix(p); }

}  // namespace

PolyMatrix PolyMatrix::identity(std::size_t n) {
  PolyMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Poly::constant(GR(1));
  return m;
}

PolyMatrix PolyMatrix::pencil(const GMatrix& constant, const GMatrix& linear) {
  if (constant.rows() != linear.rows() || constant.cols() != linear.cols()) {
    throw DimensionError("pencil: shape mismatch");
  }
  PolyMatrix m(constant.rows(), constant.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      m(i, j) = Poly(std::vector<GR>{constant(i, j), linear(i, j)});
    }
  }
  return m;
}

int PolyMatrix::max_degree() const {
  int d = -1;
  for (const auto& p : data_) d = std::max(d, p.degree());
  return d;
}

GMatrix PolyMatrix::eval(const GR& s) const {
  GMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j).eval(s);
  return out;
}

Poly PolyMatrix::determinant() const {
  if (rows_ != cols_) throw DimensionError("determinant of a non-square polynomial matrix");
  if (rows_ == 0) return Poly::constant(GR(1));
  std::size_t bound = 0;
  for (std::size_t i = 0; i < rows_; ++i) {
    int row_max = -1;
    for (std::size_t j = 0; j < cols_; ++j) row_max = std::max(row_max, (*this)(i, j).degree());
    if (row_max < 0) return Poly();
    bound += static_cast<std::size_t>(row_max);
  }
  std::vector<GR> nodes;
  std::vector<GR> values;
  for (std::size_t k = 0; k <= bound; ++k) {
    const GR s(static_cast<long>(k));
    nodes.push_back(s);
    values.push_back(eval(s).determinant());
  }
  return interpolate(nodes, values);
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("polynomial matrix product: shape mismatch");
  PolyMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

RationalMatrix::RationalMatrix(const PolyMatrix& p) : RationalMatrix(p.rows(), p.cols()) {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = RationalFn(p(i, j));
}

CMatrix RationalMatrix::eval(Complex s) const {
  CMatrix out(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j).eval(s);
  return out;
}

Poly RationalMatrix::common_denominator() const {
  Poly d = Poly::constant(GR(1));
  for (const auto& f : data_) d = poly_lcm(d, f.den());
  return d;
}

RationalFn RationalMatrix::determinant() const {
  if (rows_ != cols_) throw DimensionError("determinant of a non-square rational matrix");
  const Poly d = common_denominator();
  PolyMatrix n(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      const RationalFn& f = (*this)(i, j);
      n(i, j) = f.num() * exact_div(d, f.den());
    }
  Poly dn = Poly::constant(GR(1));
  for (std::size_t k = 0; k < rows_; ++k) dn *= d;
  return {n.determinant(), dn};
}

bool RationalMatrix::is_diagonal() const {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (i != j && !(*this)(i, j).is_zero()) return false;
  return true;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("rational matrix product: shape mismatch");
  RationalMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        if (!b(k, j).is_zero()) out(i, j) = out(i, j) + a(i, k) * b(k, j);
      }
    }
  return out;
}

RationalMatrix transfer_matrix_exact(const StateSpace& ss) {
  if (!ss.exact()) {
    throw ExactnessError("exact transfer matrix requested for a system without exact entries");
  }
  const ExactRealization& e = *ss.exact();
  const std::size_t p = e.d.rows();
  const std::size_t q = e.d.cols();
  RationalMatrix g(p, q);
  const std::size_t n = e.a.rows();
  if (n == 0) {
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < q; ++j) g(i, j) = RationalFn::constant(e.d(i, j));
    return g;
  }
  const ResolventExpansion res = resolvent_expansion(e.a);
  std::vector<GMatrix> terms;
  terms.reserve(n);
  for (const auto& mk : res.adjugate_terms) terms.push_back(e.c * mk * e.b);
  const GR scale(e.coupling_scale);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      std::vector<GR> coeffs(n);
      for (std::size_t k = 1; k <= n; ++k) coeffs[n - k] = scale * terms[k - 1](i, j);
      Poly num = res.characteristic * e.d(i, j) + Poly(std::move(coeffs));
      g(i, j) = RationalFn(std::move(num), res.characteristic);
    }
  }
  return g;
}

SmithForm smith_form(const PolyMatrix& input) {
  const std::size_t rows = input.rows();
  const std::size_t cols = input.cols();
  PolyMatrix w = input;
  PolyMatrix u = PolyMatrix::identity(rows);
  PolyMatrix v = PolyMatrix::identity(cols);
  SmithForm out;
  const std::size_t steps = std::min(rows, cols);
  for (std::size_t k = 0; k < steps; ++k) {
    bool exhausted = false;
    while (true) {
      std::size_t pr = rows, pc = cols;
      int best = -1;
      for (std::size_t i = k; i < rows; ++i)
        for (std::size_t j = k; j < cols; ++j) {
          const int d = w(i, j).degree();
          if (d >= 0 && (best < 0 || d < best)) {
            best = d;
            pr = i;
            pc = j;
          }
        }
      if (best < 0) {
        exhausted = true;
        break;
      }
      swap_rows(w, k, pr);
      swap_rows(u, k, pr);
      swap_cols(w, k, pc);
      swap_cols(v, k, pc);
      bool clean = true;
      for (std::size_t i = k + 1; i < rows; ++i) {
        if (w(i, k).is_zero()) continue;
        auto [quot, rem] = divmod(w(i, k), w(k, k));
        add_row(w, i, k, -quot);
        add_row(u, i, k, -quot);
        if (!rem.is_zero()) clean = false;
      }
      for (std::size_t j = k + 1; j < cols; ++j) {
        if (w(k, j).is_zero()) continue;
        auto [quot, rem] = divmod(w(k, j), w(k, k));
        add_col(w, j, k, -quot);
        add_col(v, j, k, -quot);
        if (!rem.is_zero()) clean = false;
      }
      if (!clean) continue;
      std::size_t bad_row = rows;
      for (std::size_t i = k + 1; i < rows && bad_row == rows; ++i)
        for (std::size_t j = k + 1; j < cols; ++j)
          if (!divides(w(k, k), w(i, j))) {
            bad_row = i;
            break;
          }
      if (bad_row == rows) break;
      const Poly one = Poly::constant(GR(1));
      add_row(w, k, bad_row, one);
      add_row(u, k, bad_row, one);
    }
    if (exhausted) break;
    const GR inv = GR(1) / w(k, k).leading();
    scale_row(w, k, inv);
    scale_row(u, k, inv);
    out.factors.push_back(w(k, k));
  }
  out.left = std::move(u);
  out.right = std::move(v);
  return out;
}

RationalMatrix SmithMcMillanForm::diagonal() const {
  RationalMatrix m(rows, cols);
  for (std::size_t i = 0; i < rank; ++i) m(i, i) = RationalFn(alphas[i], betas[i]);
  return m;
}

SmithMcMillanForm smith_mcmillan(const RationalMatrix& g) {
  SmithMcMillanForm smf;
  smf.rows = g.rows();
  smf.cols = g.cols();
  smf.common_denominator = g.common_denominator();
  PolyMatrix n(g.rows(), g.cols());
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      n(i, j) = g(i, j).num() * exact_div(smf.common_denominator, g(i, j).den());
  SmithForm sf = smith_form(n);
  smf.rank = sf.factors.size();
  for (const auto& f : sf.factors) {
    RationalFn r(f, smf.common_denominator);
    smf.alphas.push_back(r.num().monic());
    smf.betas.push_back(r.den());
  }
  smf.left = std::move(sf.left);
  smf.right = std::move(sf.right);
  return smf;
}

bool verify_reconstruction(const RationalMatrix& g, const SmithMcMillanForm& smf) {
  if (g.rows() != smf.rows || g.cols() != smf.cols) return false;
  return to_rational(smf.left) * g * to_rational(smf.right) == smf.diagonal();
}

std::optional<GR> determinant_unit(const RationalMatrix& g, const SmithMcMillanForm& smf) {
  if (g.rows() != g.cols() || smf.rank != g.rows()) return std::nullopt;
  const RationalFn det = g.determinant();
  Poly num = Poly::constant(GR(1));
  Poly den = Poly::constant(GR(1));
  for (std::size_t i = 0; i < smf.rank; ++i) {
    num *= smf.alphas[i];
    den *= smf.betas[i];
  }
  const RationalFn ratio = det / RationalFn(num, den);
  if (!ratio.is_polynomial() || ratio.num().degree() != 0) return std::nullopt;
  return ratio.num().leading() / ratio.den().leading();
}

Spectrum polynomial_spectrum(const std::vector<Poly>& factors, double tol,
                             SpectrumMethod method) {
  std::vector<SpectralValue> values;
  bool numeric = false;
  for (Poly p : factors) {
    while (p.degree() > 0) {
      bool found = false;
      for (Complex z : polynomial_roots(p.complex_coeffs())) {
        for (const GR& candidate : gaussian_candidates(z)) {
          if (!p.eval(candidate).is_zero()) continue;
          p = exact_div(p, Poly::linear(candidate));
          values.push_back({candidate.to_complex(), 1, true, candidate.str()});
          found = true;
          break;
        }
        if (found) break;
      }
      if (!found) {
        for (Complex z : polynomial_roots(p.complex_coeffs())) values.push_back({z, 1, false, ""});
        numeric = true;
        break;
      }
    }
  }
  Spectrum s(std::move(values), tol, method);
  if (numeric) s.add_flag("numeric");
  return s;
}

SmfSpectra zeros_poles_from_smf(const SmithMcMillanForm& smf, double tol) {
  return {polynomial_spectrum(smf.alphas, tol, SpectrumMethod::smf),
          polynomial_spectrum(smf.betas, tol, SpectrumMethod::smf)};
}

}  // namespace qlinz
