#include "qlinz/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "qlinz/errors.hpp"
#include "qlinz/kalman.hpp"
#include "qlinz/smith.hpp"

namespace qlinz {
namespace {

constexpr double kPoleProximity = 1e-6;
constexpr double kDegreeCutoff = 1e-10;

bool invertible(const CMatrix& d, double tol) {
  if (d.rows() != d.cols()) return false;
  if (d.rows() == 0) return true;
  Eigen::JacobiSVD<CMatrix> svd(d);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1) > tol * std::max(1.0, sv(0));
}

Complex determinant(const CMatrix& m) {
  if (m.rows() == 0) return 1.0;
  return m.partialPivLu().determinant();
}

// Coefficients (lowest first) of a polynomial of degree < count, recovered
// from its values on a circle of the given radius.
std::vector<Complex> coefficients_from_circle(const std::function<Complex(Complex)>& f,
                                              std::size_t count, double radius) {
  std::vector<Complex> values(count);
  std::vector<Complex> nodes(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
    nodes[k] = radius * std::polar(1.0, angle);
    values[k] = f(nodes[k]);
  }
  std::vector<Complex> coeffs(count);
  for (std::size_t j = 0; j < count; ++j) {
    Complex acc{0.0};
    for (std::size_t k = 0; k < count; ++k) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(j * k) /
                           static_cast<double>(count);
      acc += values[k] * std::polar(1.0, angle);
    }
    coeffs[j] = acc / (static_cast<double>(count) * std::pow(radius, static_cast<double>(j)));
  }
  return coeffs;
}

GMatrix exact_structural_adjoint(const GMatrix& a, Representation rep) {
  return rep == Representation::annihilation ? exact_flat_adjoint(a) : exact_sharp_adjoint(a);
}

CMatrix structural_adjoint(const CMatrix& a, Representation rep) {
  return rep == Representation::annihilation ? flat_adjoint(a) : sharp_adjoint(a);
}

}  // namespace

RosenbrockPencil rosenbrock_pencil(const StateSpace& ss) {
  const Eigen::Index n = ss.states();
  const Eigen::Index rows = n + ss.outputs();
  const Eigen::Index cols = n + ss.inputs();
  RosenbrockPencil p;
  p.states = n;
  p.p0.resize(rows, cols);
  p.p0 << ss.a(), ss.b(), ss.c(), ss.d();
  p.e = CMatrix::Zero(rows, cols);
  p.e.topLeftCorner(n, n).setIdentity();
  return p;
}

Spectrum invariant_zeros_pencil(const StateSpace& ss, double tol) {
  if (ss.inputs() != ss.outputs()) {
    throw PreconditionError("invariant zeros: the pencil route needs as many inputs as outputs");
  }
  if (invertible(ss.d(), tol)) {
    const CMatrix reduced = ss.a() - ss.b() * ss.d().partialPivLu().solve(ss.c());
    return Spectrum(eigenvalue_list(reduced), tol, SpectrumMethod::pencil);
  }
  const RosenbrockPencil p = rosenbrock_pencil(ss);
  const std::size_t count = static_cast<std::size_t>(2 * ss.states() + 1);
  const double radius = 1.0 + spectral_norm(ss.a());
  std::vector<Complex> coeffs =
      coefficients_from_circle([&](Complex s) { return determinant(p.at(s)); }, count, radius);
  double peak = 0.0;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    peak = std::max(peak, std::abs(coeffs[j]) * std::pow(radius, static_cast<double>(j)));
  }
  Spectrum out;
  if (peak == 0.0) {
    out = Spectrum(std::vector<Complex>{}, tol, SpectrumMethod::pencil);
    out.add_flag("degraded: D is singular and det P(s) vanishes identically (normal rank deficient)");
    return out;
  }
  while (!coeffs.empty() &&
         std::abs(coeffs.back()) * std::pow(radius, static_cast<double>(coeffs.size() - 1)) <=
             kDegreeCutoff * peak) {
    coeffs.pop_back();
  }
  out = Spectrum(polynomial_roots(coeffs), tol, SpectrumMethod::pencil);
  out.add_flag("degraded: D is singular; zeros are roots of the interpolated det P(s)");
  return out;
}

Spectrum invariant_zeros_flat(const StateSpace& ss, double tol) {
  const RealizabilityReport r = check_physical_realizability(ss, tol);
  if (!r.pass) {
    std::string why;
    for (const auto& note : r.notes) why += (why.empty() ? "" : "; ") + note;
    throw RefusalError("structural-adjoint zero route refused: the system is not physically "
                       "realizable at tol " + format_complex(Complex(tol, 0.0), 3) + " (" + why + ")");
  }
  const CMatrix m = -structural_adjoint(ss.a(), ss.representation());
  return Spectrum(eigenvalue_list(m), tol, SpectrumMethod::flat_adjoint);
}

Spectrum poles(const StateSpace& ss, double tol, bool numeric) {
  if (ss.is_exact() && !numeric) {
    return zeros_poles_from_smf(smith_mcmillan(transfer_matrix_exact(ss)), tol).poles;
  }
  const StateSpace min = minimal_realization(ss, tol);
  return Spectrum(eigenvalue_list(min.a()), tol, SpectrumMethod::minimal);
}

Spectrum transmission_zeros(const StateSpace& ss, double tol, bool numeric) {
  if (ss.is_exact() && !numeric) {
    return zeros_poles_from_smf(smith_mcmillan(transfer_matrix_exact(ss)), tol).zeros;
  }
  const StateSpace min = minimal_realization(ss, tol);
  Spectrum z = invariant_zeros_pencil(min, tol);
  Spectrum out(z.expanded(), tol, SpectrumMethod::minimal);
  for (const auto& f : z.flags()) out.add_flag(f);
  return out;
}

DetZeroTest det_zero_test(const StateSpace& ss, Complex s0, double tol) {
  require_finite(s0, "det_zero_test: s0");
  const StateSpace min = minimal_realization(ss, tol);
  for (Complex p : eigenvalue_list(min.a())) {
    if (std::abs(s0 - p) <= kPoleProximity * std::max(1.0, std::abs(p))) {
      throw PreconditionError("det G(s0) = 0 test needs s0 away from the poles; s0 = " +
                              format_complex(s0, 10) + " is at the pole " + format_complex(p, 10));
    }
  }
  const CMatrix g = frequency_response(min, s0, kPoleProximity);
  DetZeroTest t;
  t.determinant = determinant(g);
  if (g.size() == 0) return t;
  Eigen::JacobiSVD<CMatrix> svd(g);
  const auto& sv = svd.singularValues();
  t.relative_singular_value = sv(sv.size() - 1) / std::max(1.0, sv(0));
  t.is_zero = t.relative_singular_value <= tol;
  return t;
}

ZeroDirections zero_directions(const StateSpace& ss, Complex s0, double tol) {
  require_finite(s0, "zero_directions: s0");
  const RosenbrockPencil pencil = rosenbrock_pencil(ss);
  const CMatrix p = pencil.at(s0);
  if (p.rows() != p.cols()) throw PreconditionError("zero directions need a square system matrix");
  const Eigen::Index n = ss.states();
  const double scale = std::max(1.0, spectral_norm(p));
  Eigen::JacobiSVD<CMatrix> svd(p, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  if (smallest > tol * scale) {
    throw PreconditionError("s0 = " + format_complex(s0, 10) +
                            " is not an invariant zero: smallest singular value of P(s0) is " +
                            format_complex(Complex(smallest, 0.0), 6));
  }
  ZeroDirections z;
  z.s0 = s0;
  const CMatrix shifted = ss.a() - s0 * CMatrix::Identity(n, n);

  CMatrix obs(n + ss.outputs(), n);
  obs << shifted, ss.c();
  Eigen::JacobiSVD<CMatrix> so(obs, Eigen::ComputeFullV);
  if (n > 0 && so.singularValues()(n - 1) <= tol * scale) {
    z.unobservable_mode = true;
    z.x = so.matrixV().col(n - 1);
    z.u = CVector::Zero(ss.inputs());
  } else {
    const CVector right = svd.matrixV().col(p.cols() - 1);
    z.x = right.head(n);
    z.u = right.tail(ss.inputs());
  }

  CMatrix ctr(n + ss.inputs(), n);
  ctr << shifted.adjoint(), ss.b().adjoint();
  Eigen::JacobiSVD<CMatrix> sc(ctr, Eigen::ComputeFullV);
  if (n > 0 && sc.singularValues()(n - 1) <= tol * scale) {
    z.uncontrollable_mode = true;
    z.y = sc.matrixV().col(n - 1);
    z.v = CVector::Zero(ss.outputs());
  } else {
    const CVector left = svd.matrixU().col(p.rows() - 1);
    z.y = left.head(n);
    z.v = left.tail(ss.outputs());
  }
  CVector xu(p.cols());
  xu << z.x, z.u;
  CVector yv(p.rows());
  yv << z.y, z.v;
  z.right_residual = (p * xu).norm();
  z.left_residual = (yv.adjoint() * p).norm();
  return z;
}

MirrorReport verify_pole_zero_mirror(const StateSpace& ss, double tol) {
  MirrorReport r;
  r.exact = ss.is_exact();
  if (r.exact) {
    const SmfSpectra s = zeros_poles_from_smf(smith_mcmillan(transfer_matrix_exact(ss)), tol);
    r.poles = s.poles;
    r.zeros = s.zeros;
  } else {
    r.poles = poles(ss, tol, true);
    r.zeros = transmission_zeros(ss, tol, true);
  }
  const std::vector<Complex> p = r.poles.expanded();
  r.mirrored = negated_conjugates(p);
  const std::vector<Complex> z = r.zeros.expanded();
  const MultisetMatch m = match_multisets(z, r.mirrored, tol);
  r.pass = m.matched;
  r.max_discrepancy = m.max_discrepancy;
  return r;
}

Poly exact_pencil_determinant(const StateSpace& ss) {
  if (!ss.exact()) throw ExactnessError("exact pencil determinant requested for a system without exact entries");
  const ExactRealization& e = *ss.exact();
  const std::size_t n = e.a.rows();
  const std::size_t rows = n + e.c.rows();
  const std::size_t cols = n + e.b.cols();
  if (rows != cols) throw PreconditionError("pencil determinant needs a square system matrix");
  GMatrix constant(rows, cols);
  constant.set_block(0, 0, e.a);
  constant.set_block(0, n, e.b);
  constant.set_block(n, 0, GR(e.coupling_scale) * e.c);
  constant.set_block(n, n, e.d);
  GMatrix linear(rows, cols);
  for (std::size_t i = 0; i < n; ++i) linear(i, i) = GR(-1);
  return PolyMatrix::pencil(constant, linear).determinant();
}

PencilIdentityReport verify_pencil_flat_identity(const StateSpace& ss, double tol) {
  PencilIdentityReport r;
  if (ss.exact()) {
    r.exact = true;
    const Poly det_p = exact_pencil_determinant(ss);
    const GMatrix flat = exact_structural_adjoint(ss.exact()->a, ss.representation());
    r.flat_characteristic = characteristic_polynomial(-flat);
    if (det_p.is_zero()) {
      r.pencil_determinant = det_p;
      return r;
    }
    r.unit = det_p.leading();
    r.pencil_determinant = det_p.monic();
    r.pass = r.pencil_determinant == r.flat_characteristic;
    return r;
  }
  const RosenbrockPencil p = rosenbrock_pencil(ss);
  if (p.p0.rows() != p.p0.cols()) throw PreconditionError("pencil determinant needs a square system matrix");
  const CMatrix flat = structural_adjoint(ss.a(), ss.representation());
  const Complex unit = determinant(ss.d());
  r.unit = GR::from_complex(unit);
  const Eigen::Index n = ss.states();
  const std::size_t count = static_cast<std::size_t>(2 * n + 1);
  const double radius = 1.0 + spectral_norm(ss.a());
  for (std::size_t k = 0; k < count; ++k) {
    const Complex s = radius * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                                   static_cast<double>(count));
    const Complex lhs = determinant(p.at(s));
    const Complex rhs = unit * determinant(s * CMatrix::Identity(n, n) + flat);
    const double rel = std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
    r.max_residual = std::max(r.max_residual, rel);
  }
  r.pass = r.max_residual <= tol;
  return r;
}

}  // namespace qlinz
