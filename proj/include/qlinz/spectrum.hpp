#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qlinz/numeric.hpp"

namespace qlinz {

enum class SpectrumMethod {
  eigen,          // plain eigenvalues of a state matrix
  pencil,         // finite generalized eigenvalues of the Rosenbrock pencil
  flat_adjoint,   // eigenvalues of -A♭ (or -A♯)
  smf,            // roots of Smith–McMillan numerators / denominators
  kalman_theorem, // observable/unobservable eigenvalue formula
  minimal,        // computed on the minimal realization
};

std::string to_string(SpectrumMethod m);

struct SpectralValue {
  Complex value;
  int multiplicity = 1;
  /// Set when the value was certified as an exact Gaussian rational root.
  bool exact = false;
  std::string exact_text;
};

/// A multiset of complex numbers with clustering tolerance and provenance.
///
/// Two raw values belong to the same cluster when
/// |a - b| <= tol * max(1, |a|). Clusters are stored sorted by
/// (real, imag) so reports are deterministic.
class Spectrum {
 public:
  Spectrum() = default;
  Spectrum(std::vector<Complex> raw, double tol, SpectrumMethod method);
  Spectrum(std::vector<SpectralValue> values, double tol,
           SpectrumMethod method);

  const std::vector<SpectralValue>& values() const { return values_; }
  /// Total count including multiplicities.
  std::size_t size() const;
  bool empty() const { return values_.empty(); }
  /// Values repeated according to multiplicity.
  std::vector<Complex> expanded() const;

  double tol() const { return tol_; }
  SpectrumMethod method() const { return method_; }

  const std::vector<std::string>& flags() const { return flags_; }
  void add_flag(std::string flag) { flags_.push_back(std::move(flag)); }

 private:
  std::vector<SpectralValue> values_;
  double tol_ = kDefaultTol;
  SpectrumMethod method_ = SpectrumMethod::eigen;
  std::vector<std::string> flags_;
};

/// Result of pairing two multisets.
struct MultisetMatch {
  bool matched = false;
  /// Smallest achievable max over pairs of |a - b| / max(1, |b|); infinite
  /// when the sizes differ.
  double max_discrepancy = 0.0;
  /// (index into a, index into b) for the bottleneck-optimal pairing.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// Bottleneck bipartite matching of two multisets. `matched` is true iff
/// the sizes agree and every pair satisfies |a - b| <= tol * max(1, |b|).
MultisetMatch match_multisets(std::span<const Complex> a,
                              std::span<const Complex> b, double tol);

MultisetMatch match_spectra(const Spectrum& a, const Spectrum& b, double tol);

/// {-z* : z ∈ values}
std::vector<Complex> negated_conjugates(std::span<const Complex> values);

/// "a+bi" with the requested number of significant digits.
std::string format_complex(Complex z, int significant_digits);

}  // namespace qlinz
