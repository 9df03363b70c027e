#include "qlinz/system.hpp"

#include <cmath>
#include <random>

#include <Eigen/LU>

#include "qlinz/errors.hpp"
#include "qlinz/spectrum.hpp"

namespace qlinz {
namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kRealTol = 1e-10;

const Complex kI{0.0, 1.0};

void require_shape(const CMatrix& m, Eigen::Index rows, Eigen::Index cols,
                   const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DimensionError(std::string(name) + " must be " + std::to_string(rows) +
                         "x" + std::to_string(cols) + ", got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_shape(const GMatrix& m, std::size_t rows, std::size_t cols,
                   const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DimensionError(std::string(name) + " must be " + std::to_string(rows) +
                         "x" + std::to_string(cols) + ", got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

// W_k = [[I, I], [-iI, iI]] = √2 V_k, kept unscaled for exact conversion.
GMatrix exact_unscaled_map(std::size_t k) {
  GMatrix w(2 * k, 2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    w(i, i) = GR(1);
    w(i, k + i) = GR(1);
    w(k + i, i) = GR(Rational(0), Rational(-1));
    w(k + i, k + i) = GR::i();
  }
  return w;
}

CMatrix real_part_checked(const CMatrix& x, const char* name) {
  const double scale = std::max(1.0, x.norm());
  if (x.imag().norm() > kRealTol * scale) {
    throw NumericalError(std::string("to_quadrature: ") + name +
                         " has imaginary residue " +
                         std::to_string(x.imag().norm()) +
                         "; the input is not doubled-up");
  }
  return x.real().cast<Complex>();
}

GR random_gaussian_rational(std::mt19937_64& rng, bool with_imag) {
  std::uniform_int_distribution<int> num(-3, 3);
  std::uniform_int_distribution<int> den(1, 4);
  Rational re(num(rng), den(rng));
  re.canonicalize();
  Rational im(0);
  if (with_imag) {
    im = Rational(num(rng), den(rng));
    im.canonicalize();
  }
  return {re, im};
}

}  // namespace

std::string to_string(Representation r) {
  return r == Representation::annihilation ? "annihilation" : "quadrature";
}

QSystemParams QSystemParams::numeric(CMatrix omega_minus, CMatrix omega_plus,
                                     CMatrix c_minus, CMatrix c_plus) {
  QSystemParams p;
  p.n = omega_minus.rows();
  p.m = c_minus.rows();
  p.omega_minus = std::move(omega_minus);
  p.omega_plus = std::move(omega_plus);
  p.c_minus = std::move(c_minus);
  p.c_plus = std::move(c_plus);
  p.validate();
  return p;
}

QSystemParams QSystemParams::from_exact(ExactParams exact) {
  require_shape(exact.omega_minus, exact.n, exact.n, "omega_minus");
  require_shape(exact.omega_plus, exact.n, exact.n, "omega_plus");
  require_shape(exact.c_minus, exact.m, exact.n, "c_minus");
  require_shape(exact.c_plus, exact.m, exact.n, "c_plus");
  if (sgn(exact.coupling_scale) <= 0) {
    throw ParameterError("coupling_scale must be positive");
  }
  if (!(exact.omega_minus == exact.omega_minus.adjoint())) {
    throw ParameterError("non-Hermitian Ω: omega_minus is not Hermitian");
  }
  if (!(exact.omega_plus == exact.omega_plus.transpose())) {
    throw ParameterError("non-Hermitian Ω: omega_plus is not symmetric");
  }
  const double root = std::sqrt(exact.coupling_scale.get_d());
  QSystemParams p;
  p.n = static_cast<Eigen::Index>(exact.n);
  p.m = static_cast<Eigen::Index>(exact.m);
  p.omega_minus = exact.omega_minus.to_cmatrix();
  p.omega_plus = exact.omega_plus.to_cmatrix();
  p.c_minus = root * exact.c_minus.to_cmatrix();
  p.c_plus = root * exact.c_plus.to_cmatrix();
  p.exact = std::move(exact);
  p.validate();
  return p;
}

void QSystemParams::validate() const {
  require_shape(omega_minus, n, n, "omega_minus");
  require_shape(omega_plus, n, n, "omega_plus");
  require_shape(c_minus, m, n, "c_minus");
  require_shape(c_plus, m, n, "c_plus");
  require_finite(omega_minus, "omega_minus");
  require_finite(omega_plus, "omega_plus");
  require_finite(c_minus, "c_minus");
  require_finite(c_plus, "c_plus");
  const double hs = (omega_minus - omega_minus.adjoint()).norm();
  if (hs > kSymmetryTol * std::max(1.0, omega_minus.norm())) {
    throw ParameterError("non-Hermitian Ω: omega_minus deviates from Hermitian by " +
                         std::to_string(hs));
  }
  const double ss = (omega_plus - omega_plus.transpose()).norm();
  if (ss > kSymmetryTol * std::max(1.0, omega_plus.norm())) {
    throw ParameterError("non-Hermitian Ω: omega_plus deviates from symmetric by " +
                         std::to_string(ss));
  }
}

bool QSystemParams::is_passive() const {
  return omega_plus.isZero(0.0) && c_plus.isZero(0.0);
}

StateSpace::StateSpace(CMatrix a, CMatrix b, CMatrix c, CMatrix d,
                       Representation rep)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)), rep_(rep) {
  const Eigen::Index n = a_.rows();
  require_shape(a_, n, n, "A");
  if (b_.rows() != n) throw DimensionError("B must have as many rows as A");
  if (c_.cols() != n) throw DimensionError("C must have as many columns as A");
  require_shape(d_, c_.rows(), b_.cols(), "D");
  require_finite(a_, "A");
  require_finite(b_, "B");
  require_finite(c_, "C");
  require_finite(d_, "D");
}

StateSpace StateSpace::from_exact(ExactRealization exact, Representation rep) {
  if (sgn(exact.coupling_scale) <= 0) throw ParameterError("coupling_scale must be positive");
  const double root = std::sqrt(exact.coupling_scale.get_d());
  StateSpace ss(exact.a.to_cmatrix(), root * exact.b.to_cmatrix(),
                root * exact.c.to_cmatrix(), exact.d.to_cmatrix(), rep);
  ss.exact_ = std::move(exact);
  return ss;
}

StateSpace StateSpace::transformed(const CMatrix& t) const {
  require_shape(t, states(), states(), "T");
  Eigen::PartialPivLU<CMatrix> lu(t);
  return StateSpace(lu.solve(a_ * t), lu.solve(b_), c_ * t, d_, rep_);
}

StateSpace build_state_space(const QSystemParams& params) {
  params.validate();
  const Eigen::Index n = params.n;
  const Eigen::Index m = params.m;
  if (params.exact) {
    const ExactParams& e = *params.exact;
    const GMatrix omega = exact_doubled_up(e.omega_minus, e.omega_plus);
    const GMatrix c0 = exact_doubled_up(e.c_minus, e.c_plus);
    const GMatrix c0_flat = exact_flat_adjoint(c0);
    const GMatrix d = GMatrix::identity(2 * e.m);
    const GR minus_i(Rational(0), Rational(-1));
    const GR half_g(Rational(e.coupling_scale / 2));
    ExactRealization r;
    r.a = minus_i * (exact_signature_j(e.n) * omega) - half_g * (c0_flat * c0);
    r.b = -(c0_flat * d);
    r.c = c0;
    r.d = d;
    r.coupling_scale = e.coupling_scale;
    return StateSpace::from_exact(std::move(r), Representation::annihilation);
  }
  const CMatrix omega = doubled_up(params.omega_minus, params.omega_plus);
  const CMatrix c = doubled_up(params.c_minus, params.c_plus);
  const CMatrix c_flat = flat_adjoint(c);
  const CMatrix d = CMatrix::Identity(2 * m, 2 * m);
  CMatrix a = -kI * (signature_j(n) * omega) - 0.5 * (c_flat * c);
  CMatrix b = -c_flat * d;
  return StateSpace(std::move(a), std::move(b), c, d, Representation::annihilation);
}

RealizabilityReport check_physical_realizability(const StateSpace& ss, double tol) {
  RealizabilityReport r;
  r.tol = tol;
  const bool even = ss.states() % 2 == 0 && ss.inputs() % 2 == 0 &&
                    ss.outputs() % 2 == 0;
  if (!even || ss.inputs() != ss.outputs()) {
    r.notes.push_back("dimensions are not of the form 2n x 2m with square D");
    r.dynamics_residual = r.coupling_residual = r.structure_residual =
        std::numeric_limits<double>::infinity();
    r.feedthrough_residual =
        (ss.d().adjoint() * ss.d() - CMatrix::Identity(ss.inputs(), ss.inputs())).norm();
    return r;
  }
  const CMatrix& a = ss.a();
  const CMatrix& b = ss.b();
  const CMatrix& c = ss.c();
  const CMatrix& d = ss.d();
  if (ss.representation() == Representation::annihilation) {
    const CMatrix c_flat = flat_adjoint(c);
    r.dynamics_residual = (a + flat_adjoint(a) + c_flat * c).norm();
    r.coupling_residual = (b + c_flat * d).norm();
    r.structure_residual = doubled_up_residual(a) + doubled_up_residual(b) +
                           doubled_up_residual(c) + doubled_up_residual(d);
  } else {
    r.dynamics_residual = (a + sharp_adjoint(a) + b * sharp_adjoint(b)).norm();
    r.coupling_residual = (b + sharp_adjoint(c) * d).norm();
    r.structure_residual = a.imag().norm() + b.imag().norm() + c.imag().norm() +
                           d.imag().norm();
  }
  r.feedthrough_residual =
      (d.adjoint() * d - CMatrix::Identity(d.cols(), d.cols())).norm();
  if (r.dynamics_residual > tol) r.notes.push_back("dynamics identity violated");
  if (r.coupling_residual > tol) r.notes.push_back("coupling identity violated");
  if (r.feedthrough_residual > tol) r.notes.push_back("D is not unitary");
  if (r.structure_residual > tol) {
    r.notes.push_back(ss.representation() == Representation::annihilation
                          ? "matrices are not doubled-up"
                          : "matrices are not real");
  }
  r.pass = r.dynamics_residual <= tol && r.coupling_residual <= tol &&
           r.feedthrough_residual <= tol && r.structure_residual <= tol;
  return r;
}

CMatrix quadrature_map(Eigen::Index k) {
  CMatrix v(2 * k, 2 * k);
  const CMatrix id = CMatrix::Identity(k, k);
  v << id, id, -kI * id, kI * id;
  return v / std::sqrt(2.0);
}

StateSpace to_quadrature(const StateSpace& ss) {
  if (ss.representation() != Representation::annihilation) {
    throw PreconditionError("to_quadrature expects the annihilation representation");
  }
  if (ss.states() % 2 != 0 || ss.inputs() % 2 != 0 || ss.outputs() % 2 != 0) {
    throw DimensionError("to_quadrature: dimensions are not even");
  }
  if (ss.exact()) {
    const ExactRealization& e = *ss.exact();
    const GMatrix wn = exact_unscaled_map(e.a.rows() / 2);
    const GMatrix wm_in = exact_unscaled_map(e.b.cols() / 2);
    const GMatrix wm_out = exact_unscaled_map(e.c.rows() / 2);
    const GR half(Rational(1, 2));
    ExactRealization q;
    q.a = half * (wn * e.a * wn.adjoint());
    q.b = half * (wn * e.b * wm_in.adjoint());
    q.c = half * (wm_out * e.c * wn.adjoint());
    q.d = half * (wm_out * e.d * wm_in.adjoint());
    q.coupling_scale = e.coupling_scale;
    if (!q.a.is_real() || !q.b.is_real() || !q.c.is_real() || !q.d.is_real()) {
      throw NumericalError("to_quadrature: exact conversion is not real; the input is not doubled-up");
    }
    return StateSpace::from_exact(std::move(q), Representation::quadrature);
  }
  const CMatrix vn = quadrature_map(ss.states() / 2);
  const CMatrix vin = quadrature_map(ss.inputs() / 2);
  const CMatrix vout = quadrature_map(ss.outputs() / 2);
  return StateSpace(real_part_checked(vn * ss.a() * vn.adjoint(), "A"),
                    real_part_checked(vn * ss.b() * vin.adjoint(), "B"),
                    real_part_checked(vout * ss.c() * vn.adjoint(), "C"),
                    real_part_checked(vout * ss.d() * vin.adjoint(), "D"),
                    Representation::quadrature);
}

CMatrix frequency_response(const StateSpace& ss, Complex s, double pole_tol) {
  require_finite(s, "frequency_response: s");
  if (ss.states() == 0) return ss.d();
  for (Complex lambda : eigenvalue_list(ss.a())) {
    if (std::abs(s - lambda) <= pole_tol * std::max(1.0, std::abs(lambda))) {
      throw PoleEvaluationError("frequency_response: s = " + format_complex(s, 10) +
                                    " is at the eigenvalue " + format_complex(lambda, 10) +
                                    " of A",
                                lambda);
    }
  }
  const CMatrix pencil = s * CMatrix::Identity(ss.states(), ss.states()) - ss.a();
  return ss.d() + ss.c() * pencil.partialPivLu().solve(ss.b());
}

CMatrix structural_inverse_response(const StateSpace& ss, Complex s, double pole_tol) {
  const CMatrix g = frequency_response(ss, -std::conj(s), pole_tol);
  return ss.representation() == Representation::annihilation ? flat_adjoint(g)
                                                              : sharp_adjoint(g);
}

InverseIdentityReport verify_inverse_identity(const StateSpace& ss,
                                              std::span<const Complex> samples,
                                              double tol) {
  InverseIdentityReport r;
  const CMatrix id = CMatrix::Identity(ss.outputs(), ss.outputs());
  for (Complex s : samples) {
    try {
      const CMatrix g = frequency_response(ss, s);
      const CMatrix inv = structural_inverse_response(ss, s);
      r.max_residual = std::max(r.max_residual, (g * inv - id).norm());
      r.checked.push_back(s);
    } catch (const PoleEvaluationError& e) {
      r.skipped.push_back(s);
      r.warnings.push_back(std::string("skipped sample: ") + e.what());
    }
  }
  r.pass = !r.checked.empty() && r.max_residual <= tol;
  if (r.checked.empty()) r.warnings.push_back("no sample could be evaluated");
  return r;
}

QSystemParams random_params(std::uint64_t seed, const RandomSystemOptions& opts) {
  if (opts.n < 1 || opts.m < 1) throw DimensionError("random_params: n and m must be positive");
  std::mt19937_64 rng(seed);
  const auto n = static_cast<std::size_t>(opts.n);
  const auto m = static_cast<std::size_t>(opts.m);
  if (opts.exact) {
    ExactParams e;
    e.n = n;
    e.m = m;
    e.omega_minus = GMatrix(n, n);
    e.omega_plus = GMatrix(n, n);
    e.c_minus = GMatrix(m, n);
    e.c_plus = GMatrix(m, n);
    for (std::size_t i = 0; i < n; ++i) {
      e.omega_minus(i, i) = random_gaussian_rational(rng, false);
      for (std::size_t j = i + 1; j < n; ++j) {
        e.omega_minus(i, j) = random_gaussian_rational(rng, true);
        e.omega_minus(j, i) = e.omega_minus(i, j).conj();
      }
    }
    if (!opts.passive) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
          e.omega_plus(i, j) = random_gaussian_rational(rng, true);
          e.omega_plus(j, i) = e.omega_plus(i, j);
        }
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        e.c_minus(i, j) = random_gaussian_rational(rng, true);
        if (!opts.passive) e.c_plus(i, j) = random_gaussian_rational(rng, true);
      }
    }
    return QSystemParams::from_exact(std::move(e));
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&](Eigen::Index rows, Eigen::Index cols) {
    CMatrix x(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) x(i, j) = Complex(normal(rng), normal(rng));
    return x;
  };
  const CMatrix x = draw(opts.n, opts.n);
  CMatrix omega_minus = 0.5 * (x + x.adjoint());
  CMatrix omega_plus = CMatrix::Zero(opts.n, opts.n);
  CMatrix c_plus = CMatrix::Zero(opts.m, opts.n);
  const CMatrix y = draw(opts.n, opts.n);
  const CMatrix c_minus = draw(opts.m, opts.n);
  const CMatrix z = draw(opts.m, opts.n);
  if (!opts.passive) {
    omega_plus = 0.5 * (y + y.transpose());
    c_plus = z;
  }
  return QSystemParams::numeric(std::move(omega_minus), std::move(omega_plus), c_minus,
                                std::move(c_plus));
}

QSystemParams with_lossless_modes(const QSystemParams& params,
                                  const std::vector<Rational>& frequencies) {
  const auto extra = static_cast<Eigen::Index>(frequencies.size());
  const Eigen::Index n = params.n + extra;
  const Eigen::Index m = params.m;
  if (params.exact) {
    const ExactParams& e = *params.exact;
    ExactParams out = e;
    const std::size_t nn = static_cast<std::size_t>(n);
    out.n = nn;
    out.omega_minus = GMatrix(nn, nn);
    out.omega_plus = GMatrix(nn, nn);
    out.c_minus = GMatrix(e.m, nn);
    out.c_plus = GMatrix(e.m, nn);
    out.omega_minus.set_block(0, 0, e.omega_minus);
    out.omega_plus.set_block(0, 0, e.omega_plus);
    out.c_minus.set_block(0, 0, e.c_minus);
    out.c_plus.set_block(0, 0, e.c_plus);
    for (std::size_t k = 0; k < frequencies.size(); ++k) {
      out.omega_minus(e.n + k, e.n + k) = GR(frequencies[k]);
    }
    return QSystemParams::from_exact(std::move(out));
  }
  CMatrix om = CMatrix::Zero(n, n);
  CMatrix op = CMatrix::Zero(n, n);
  CMatrix cm = CMatrix::Zero(m, n);
  CMatrix cp = CMatrix::Zero(m, n);
  om.topLeftCorner(params.n, params.n) = params.omega_minus;
  op.topLeftCorner(params.n, params.n) = params.omega_plus;
  cm.leftCols(params.n) = params.c_minus;
  cp.leftCols(params.n) = params.c_plus;
  for (Eigen::Index k = 0; k < extra; ++k) {
    om(params.n + k, params.n + k) = frequencies[static_cast<std::size_t>(k)].get_d();
  }
  return QSystemParams::numeric(std::move(om), std::move(op), std::move(cm), std::move(cp));
}

std::vector<Complex> random_sample_points(std::uint64_t seed, std::size_t count,
                                          double radius) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<Complex> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double re = u(rng);
    const double im = u(rng);
    out.emplace_back(re, im);
  }
  return out;
}

}  // namespace qlinz
