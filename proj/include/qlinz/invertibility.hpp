#pragma once

// Asymptotic left invertibility of realizable systems.

#include <span>
#include <string>
#include <vector>

#include "qlinz/kalman.hpp"
#include "qlinz/spectrum.hpp"
#include "qlinz/system.hpp"

namespace qlinz {

enum class InvertibilityVerdict { invertible, not_invertible, indeterminate };

std::string to_string(InvertibilityVerdict v);

struct InvertibilityReport {
  InvertibilityVerdict verdict = InvertibilityVerdict::indeterminate;
  /// True only for the `invertible` verdict.
  bool as_left_invertible = false;
  /// Always equal to as_left_invertible.
  bool as_star_left_invertible = false;
  /// Strong left invertibility has no criterion here.
  std::string strong_left_invertibility = "not classified";
  Spectrum observable_eigenvalues;
  /// Smallest Re λ over the observable eigenvalues (+inf when there are none).
  double min_real_part = 0.0;
  double margin = kDefaultRealPartTol;
  HiddenModeReport hidden_mode;
};

/// a.s.-left invertible iff every observable eigenvalue has Re λ > margin;
/// indeterminate when one lies within the margin of the imaginary axis.
/// Throws RefusalError when the hidden-mode condition fails.
InvertibilityReport classify_left_invertibility(const StateSpace& ss, double tol = kDefaultTol,
                                                double margin = kDefaultRealPartTol);

struct InversionWitness {
  InverseIdentityReport identity;
  /// Poles of s ↦ G(-s*)♭, i.e. {-p* : p pole of G}.
  Spectrum inverse_poles;
};

InversionWitness inversion_witness(const StateSpace& ss, std::span<const Complex> samples,
                                   double tol = kDefaultTol);

}  // namespace qlinz
