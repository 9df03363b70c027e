#pragma once

// Controllable/observable decomposition, hidden-mode condition, minimal
// realizations and the observable-eigenvalue zero formula.

#include <string>
#include <vector>

#include "qlinz/spectrum.hpp"
#include "qlinz/system.hpp"

namespace qlinz {

/// Default absolute bound on |Re λ| for "purely imaginary".
inline constexpr double kDefaultRealPartTol = 1e-8;

struct KalmanReport {
  double tol = kDefaultTol;
  /// Block spectra: controllable+observable, controllable+unobservable,
  /// uncontrollable+observable, uncontrollable+unobservable.
  Spectrum co;
  Spectrum c_obar;
  Spectrum cbar_o;
  Spectrum cbar_obar;
  /// co ∪ c̄o and cō ∪ c̄ō.
  Spectrum observable;
  Spectrum unobservable;
  /// Dimensions of the cō, co, c̄ō, c̄o blocks, in the column order of
  /// `transformation`.
  int dim_c_obar = 0;
  int dim_co = 0;
  int dim_cbar_obar = 0;
  int dim_cbar_o = 0;
  /// T with T⁻¹AT block upper triangular; columns ordered cō, co, c̄ō, c̄o.
  CMatrix transformation;
  /// Smallest relative singular-value gap observed at a rank decision.
  double rank_gap = 0.0;
  StateSpace minimal{CMatrix(0, 0), CMatrix(0, 0), CMatrix(0, 0), CMatrix(0, 0),
                     Representation::annihilation};
};

/// Throws NumericalError when a singular value falls within two decades of
/// the rank threshold on either side (the subspace dimensions would depend on
/// the tolerance).
KalmanReport kalman_decompose(const StateSpace& ss, double tol = kDefaultTol);

struct HiddenModeReport {
  bool holds = true;
  double real_part_tol = kDefaultRealPartTol;
  std::vector<Complex> offending_eigenvalues;
};

/// Holds iff every cō, c̄o and c̄ō eigenvalue has |Re λ| <= real_part_tol.
HiddenModeReport check_hidden_mode_condition(const KalmanReport& k,
                                     double real_part_tol = kDefaultRealPartTol);
HiddenModeReport check_hidden_mode_condition(const StateSpace& ss, double tol = kDefaultTol,
                                     double real_part_tol = kDefaultRealPartTol);

/// {-λ* : λ observable} ∪ {unobservable λ}. Throws RefusalError when the
/// hidden-mode condition fails, since the formula is then invalid.
Spectrum invariant_zeros_via_theorem(const StateSpace& ss, double tol = kDefaultTol,
                                     double real_part_tol = kDefaultRealPartTol);

StateSpace minimal_realization(const StateSpace& ss, double tol = kDefaultTol);

/// Text of the refusal raised when the hidden-mode condition fails.
std::string hidden_mode_refusal(const HiddenModeReport& h, const std::string& what);

}  // namespace qlinz
