#pragma once

// Dense complex matrix helpers with the doubled-up / flat-adjoint /
// sharp-adjoint structure of linear quantum systems.

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qlinz {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kDefaultTol = 1e-9;

/// Throws ParameterError naming `what` if any entry is NaN or infinite.
void require_finite(const CMatrix& m, std::string_view what);
void require_finite(Complex z, std::string_view what);

/// Builds a matrix from row-major values, rejecting non-finite entries.
CMatrix make_cmatrix(Eigen::Index rows, Eigen::Index cols,
                     const std::vector<Complex>& row_major);

/// J_k = diag(I_k, -I_k).
CMatrix signature_j(Eigen::Index k);

/// The symplectic form [[0, I_k], [-I_k, 0]] used by the sharp adjoint.
RMatrix symplectic_j(Eigen::Index k);

/// A doubled-up matrix Δ(U, V) = [[U, V], [V#, U#]] kept in factored form.
struct DoubledUp {
  CMatrix u;
  CMatrix v;

  CMatrix materialize() const;

  /// Reads U and V from the top block row; throws DimensionError on odd
  /// dimensions. Does not check the bottom block row (see is_doubled_up).
  static DoubledUp split(const CMatrix& x);
};

CMatrix doubled_up(const CMatrix& u, const CMatrix& v);

/// Frobenius distance of x from the doubled-up matrix built from its top
/// block row; zero iff x is doubled-up.
double doubled_up_residual(const CMatrix& x);

/// X♭ = J_r X† J_k for X ∈ C^{2k×2r}.
CMatrix flat_adjoint(const CMatrix& x);

/// X♯ = 𝕁_r Xᵀ 𝕁_kᵀ for real X ∈ R^{2k×2r}.
RMatrix sharp_adjoint(const RMatrix& x);

/// Complex extension 𝕁_r X† 𝕁_kᵀ; coincides with the real version on real
/// input.
CMatrix sharp_adjoint(const CMatrix& x);

/// Raw eigenvalues of a square matrix (Hessenberg reduction + shifted QR).
/// Throws DimensionError for non-square input and NumericalError if the
/// iteration fails to converge.
std::vector<Complex> eigenvalue_list(const CMatrix& m);

/// Number of singular values larger than tol * (largest singular value).
std::size_t rank_at_tolerance(const CMatrix& m, double tol);

/// Orthonormal basis of the column space, rank decided as in
/// rank_at_tolerance but against an absolute threshold `abs_tol`.
CMatrix orthonormal_range(const CMatrix& m, double abs_tol);

/// Orthonormal basis of ker(m) (columns), rank decided relative to the
/// largest singular value.
CMatrix null_space(const CMatrix& m, double tol);

/// Orthonormal basis of the orthogonal complement of span(q) in C^n, where
/// q has orthonormal columns.
CMatrix orthogonal_complement(const CMatrix& q, Eigen::Index n);

/// Largest singular value (0 for empty matrices).
double spectral_norm(const CMatrix& m);

/// Smallest singular value of an m×n matrix with m ≥ n (0 if m < n).
double smallest_singular_value(const CMatrix& m);

/// Roots of the polynomial with the given coefficients (lowest degree
/// first) via companion-matrix eigenvalues. Leading zero coefficients are
/// ignored.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs);

}  // namespace qlinz
