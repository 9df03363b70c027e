#include "qlinz/invertibility.hpp"

#include <algorithm>
#include <limits>

#include "qlinz/errors.hpp"
#include "qlinz/zeros.hpp"

namespace qlinz {

std::string to_string(InvertibilityVerdict v) {
  switch (v) {
    case InvertibilityVerdict::invertible: return "invertible";
    case InvertibilityVerdict::not_invertible: return "not_invertible";
    case InvertibilityVerdict::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

InvertibilityReport classify_left_invertibility(const StateSpace& ss, double tol, double margin) {
  const KalmanReport k = kalman_decompose(ss, tol);
  InvertibilityReport r;
  r.margin = margin;
  r.hidden_mode = check_hidden_mode_condition(k, margin);
  if (!r.hidden_mode.holds) {
    throw RefusalError(hidden_mode_refusal(r.hidden_mode, "left-invertibility classification"));
  }
  r.observable_eigenvalues = k.observable;
  r.min_real_part = std::numeric_limits<double>::infinity();
  bool any_left = false;
  for (Complex z : k.observable.expanded()) {
    r.min_real_part = std::min(r.min_real_part, z.real());
    if (z.real() < -margin) any_left = true;
  }
  if (r.min_real_part > margin) {
    r.verdict = InvertibilityVerdict::invertible;
  } else if (any_left) {
    r.verdict = InvertibilityVerdict::not_invertible;
  } else {
    r.verdict = InvertibilityVerdict::indeterminate;
  }
  r.as_left_invertible = r.verdict == InvertibilityVerdict::invertible;
  r.as_star_left_invertible = r.as_left_invertible;
  return r;
}

InversionWitness inversion_witness(const StateSpace& ss, std::span<const Complex> samples,
                                   double tol) {
  InversionWitness w;
  w.identity = verify_inverse_identity(ss, samples, tol);
  const Spectrum p = poles(ss, tol, !ss.is_exact());
  w.inverse_poles = Spectrum(negated_conjugates(p.expanded()), tol, p.method());
  return w;
}

}  // namespace qlinz
