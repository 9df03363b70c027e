#include "qlinz/numeric.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qlinz/errors.hpp"

namespace qlinz {
namespace {

void require_even(const CMatrix& x, const char* op) {
  if (x.rows() % 2 != 0 || x.cols() % 2 != 0) {
    throw DimensionError(std::string(op) + ": matrix dimensions " +
                         std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()) + " are not even");
  }
}

}  // namespace

void require_finite(const CMatrix& m, std::string_view what) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
        throw ParameterError(std::string(what) + ": non-finite entry at (" +
                             std::to_string(i) + "," + std::to_string(j) +
                             ")");
      }
    }
  }
}

void require_finite(Complex z, std::string_view what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw ParameterError(std::string(what) + ": non-finite value");
  }
}

CMatrix make_cmatrix(Eigen::Index rows, Eigen::Index cols,
                     const std::vector<Complex>& row_major) {
  if (rows < 0 || cols < 0 ||
      static_cast<std::size_t>(rows * cols) != row_major.size()) {
    throw DimensionError("make_cmatrix: expected " + std::to_string(rows) +
                         "x" + std::to_string(cols) + " entries, got " +
                         std::to_string(row_major.size()));
  }
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = row_major[static_cast<std::size_t>(i * cols + j)];
    }
  }
  require_finite(m, "make_cmatrix");
  return m;
}

CMatrix signature_j(Eigen::Index k) {
  CMatrix j = CMatrix::Identity(2 * k, 2 * k);
  j.bottomRightCorner(k, k) *= -1.0;
  return j;
}

RMatrix symplectic_j(Eigen::Index k) {
  RMatrix j = RMatrix::Zero(2 * k, 2 * k);
  j.topRightCorner(k, k).setIdentity();
  j.bottomLeftCorner(k, k) = -RMatrix::Identity(k, k);
  return j;
}

CMatrix DoubledUp::materialize() const { return doubled_up(u, v); }

DoubledUp DoubledUp::split(const CMatrix& x) {
  require_even(x, "DoubledUp::split");
  const Eigen::Index k = x.rows() / 2;
  const Eigen::Index r = x.cols() / 2;
  return {x.topLeftCorner(k, r), x.topRightCorner(k, r)};
}

CMatrix doubled_up(const CMatrix& u, const CMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw DimensionError("doubled_up: U and V shapes differ");
  }
  const Eigen::Index k = u.rows();
  const Eigen::Index r = u.cols();
  CMatrix x(2 * k, 2 * r);
  x << u, v, v.conjugate(), u.conjugate();
  return x;
}

double doubled_up_residual(const CMatrix& x) {
  return (x - DoubledUp::split(x).materialize()).norm();
}

CMatrix flat_adjoint(const CMatrix& x) {
  require_even(x, "flat_adjoint");
  const Eigen::Index k = x.rows() / 2;
  const Eigen::Index r = x.cols() / 2;
  return signature_j(r) * x.adjoint() * signature_j(k);
}

RMatrix sharp_adjoint(const RMatrix& x) {
  if (x.rows() % 2 != 0 || x.cols() % 2 != 0) {
    throw DimensionError("sharp_adjoint: matrix dimensions are not even");
  }
  const Eigen::Index k = x.rows() / 2;
  const Eigen::Index r = x.cols() / 2;
  return symplectic_j(r) * x.transpose() * symplectic_j(k).transpose();
}

CMatrix sharp_adjoint(const CMatrix& x) {
  require_even(x, "sharp_adjoint");
  const Eigen::Index k = x.rows() / 2;
  const Eigen::Index r = x.cols() / 2;
  return symplectic_j(r).cast<Complex>() * x.adjoint() *
         symplectic_j(k).transpose().cast<Complex>();
}

std::vector<Complex> eigenvalue_list(const CMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("eigenvalues: matrix is " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()) + ", not square");
  }
  if (m.rows() == 0) return {};
  constexpr int kMaxIterationsPerEigenvalue = 60;
  Eigen::ComplexEigenSolver<CMatrix> solver;
  solver.setMaxIterations(kMaxIterationsPerEigenvalue);
  solver.compute(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    const int iterations =
        kMaxIterationsPerEigenvalue * static_cast<int>(m.rows());
    throw NumericalError("eigenvalues: QR iteration did not converge after " +
                             std::to_string(iterations) + " iterations",
                         iterations);
  }
  const CVector& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::size_t rank_at_tolerance(const CMatrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * sv(0)) ++rank;
  }
  return rank;
}

CMatrix orthonormal_range(const CMatrix& m, double abs_tol) {
  if (m.size() == 0) return CMatrix(m.rows(), 0);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > abs_tol) ++rank;
  return svd.matrixU().leftCols(rank);
}

CMatrix null_space(const CMatrix& m, double tol) {
  if (m.cols() == 0) return CMatrix(0, 0);
  if (m.rows() == 0) return CMatrix::Identity(m.cols(), m.cols());
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol * scale && scale > 0) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

CMatrix orthogonal_complement(const CMatrix& q, Eigen::Index n) {
  if (q.cols() == 0) return CMatrix::Identity(n, n);
  if (q.rows() != n) throw DimensionError("orthogonal_complement: row mismatch");
  Eigen::JacobiSVD<CMatrix> svd(q, Eigen::ComputeFullU);
  return svd.matrixU().rightCols(n - q.cols());
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double smallest_singular_value(const CMatrix& m) {
  if (m.cols() == 0) return 0.0;
  if (m.rows() < m.cols()) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1);
}

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs) {
  std::size_t n = coeffs.size();
  while (n > 0 && coeffs[n - 1] == Complex(0.0)) --n;
  if (n <= 1) return {};
  const Eigen::Index degree = static_cast<Eigen::Index>(n - 1);
  const Complex lead = coeffs[n - 1];
  CMatrix companion = CMatrix::Zero(degree, degree);
  for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < degree; ++i) {
    companion(i, degree - 1) = -coeffs[static_cast<std::size_t>(i)] / lead;
  }
  return eigenvalue_list(companion);
}

}  // namespace qlinz
