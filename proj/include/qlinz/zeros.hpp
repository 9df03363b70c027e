#pragma once

// Invariant zeros, transmission zeros and poles by independent routes, and
// the structural identities relating them.

#include <optional>
#include <string>
#include <vector>

#include "qlinz/poly.hpp"
#include "qlinz/spectrum.hpp"
#include "qlinz/system.hpp"

namespace qlinz {

/// P(s) = P0 - s E with P0 = [[A, B], [C, D]] and E = diag(I, 0).
struct RosenbrockPencil {
  CMatrix p0;
  CMatrix e;
  Eigen::Index states = 0;

  CMatrix at(Complex s) const { return p0 - s * e; }
};

RosenbrockPencil rosenbrock_pencil(const StateSpace& ss);

/// Finite generalized eigenvalues of the pencil. With D invertible these are
/// the eigenvalues of A - B D⁻¹ C. Otherwise det P(s) is sampled on a circle
/// and its roots are returned; the spectrum is then flagged "degraded".
Spectrum invariant_zeros_pencil(const StateSpace& ss, double tol = kDefaultTol);

/// Eigenvalues of -A♭ (annihilation) or -A♯ (quadrature). Throws
/// RefusalError when the realizability residual exceeds tol.
Spectrum invariant_zeros_flat(const StateSpace& ss, double tol = kDefaultTol);

/// Poles: SMF denominators for exact systems (unless `numeric` is set),
/// otherwise eigenvalues of the minimal realization.
Spectrum poles(const StateSpace& ss, double tol = kDefaultTol, bool numeric = false);

/// Transmission zeros: SMF numerators for exact systems (unless `numeric`),
/// otherwise invariant zeros of the minimal realization.
Spectrum transmission_zeros(const StateSpace& ss, double tol = kDefaultTol, bool numeric = false);

struct DetZeroTest {
  bool is_zero = false;
  Complex determinant{0.0};
  /// σ_min(G(s0)) / max(1, σ_max(G(s0))).
  double relative_singular_value = 0.0;
};

/// det G(s0) = 0 test. Throws PreconditionError when s0 is a pole.
DetZeroTest det_zero_test(const StateSpace& ss, Complex s0, double tol = kDefaultTol);

struct ZeroDirections {
  Complex s0;
  CVector x, u;  // right: P(s0) [x; u] = 0
  CVector y, v;  // left:  [y; v]† P(s0) = 0
  bool unobservable_mode = false;
  bool uncontrollable_mode = false;
  double right_residual = 0.0;
  double left_residual = 0.0;
};

/// Unit null vectors of P(s0). When s0 is an unobservable (uncontrollable)
/// eigenvalue the right (left) vector is chosen with u = 0 (v = 0). Throws
/// PreconditionError with the smallest singular value when s0 is not a zero.
ZeroDirections zero_directions(const StateSpace& ss, Complex s0, double tol = kDefaultTol);

struct MirrorReport {
  bool pass = false;
  Spectrum poles;
  Spectrum zeros;
  /// {-p* : p ∈ poles}
  std::vector<Complex> mirrored;
  double max_discrepancy = 0.0;
  bool exact = false;
};

/// Transmission zeros == {-p* : p pole} with multiplicity, matched at tol.
MirrorReport verify_pole_zero_mirror(const StateSpace& ss, double tol = 1e-7);

struct PencilIdentityReport {
  bool pass = false;
  bool exact = false;
  /// Monic det P(s) and monic det(sI + A♭) (A♯ for quadrature).
  Poly pencil_determinant;
  Poly flat_characteristic;
  /// Leading coefficient of det P(s), i.e. det D.
  GR unit;
  /// Numeric fallback: largest relative mismatch over the sample points.
  double max_residual = 0.0;
};

/// Coefficientwise det P(s) = det D · det(sI + A♭). Falls back to 2n+1
/// point evaluations (flagged by exact = false) without exact entries.
PencilIdentityReport verify_pencil_flat_identity(const StateSpace& ss, double tol = kDefaultTol);

/// Exact det P(s) (not normalized).
Poly exact_pencil_determinant(const StateSpace& ss);

}  // namespace qlinz
