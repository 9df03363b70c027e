#pragma once

// Linear quantum system models: construction from physical parameters,
// realizability checks, annihilation/quadrature conversion and transfer
// matrix evaluation.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qlinz/exact.hpp"
#include "qlinz/numeric.hpp"

namespace qlinz {

enum class Representation { annihilation, quadrature };

std::string to_string(Representation r);

/// Exact physical parameters. The physical couplings are
/// sqrt(coupling_scale) * c_minus and sqrt(coupling_scale) * c_plus, which
/// lets couplings such as sqrt(kappa) stay exact: every quantity this
/// library derives from them depends on coupling_scale only.
struct ExactParams {
  std::size_t n = 0;
  std::size_t m = 0;
  GMatrix omega_minus;
  GMatrix omega_plus;
  GMatrix c_minus;
  GMatrix c_plus;
  Rational coupling_scale{1};
};

/// Physical parameters (Ω₋, Ω₊, C₋, C₊) of n oscillators driven by m fields,
/// with scattering matrix S = I.
struct QSystemParams {
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  CMatrix omega_minus;
  CMatrix omega_plus;
  CMatrix c_minus;
  CMatrix c_plus;
  std::optional<ExactParams> exact;

  /// Validates and returns floating-point parameters.
  static QSystemParams numeric(CMatrix omega_minus, CMatrix omega_plus,
                               CMatrix c_minus, CMatrix c_plus);
  /// Validates and returns parameters that carry an exact copy.
  static QSystemParams from_exact(ExactParams exact);

  /// Throws DimensionError / ParameterError when Ω₋ is not Hermitian, Ω₊ is
  /// not symmetric, or shapes disagree.
  void validate() const;
  bool is_passive() const;
};

/// Exact realization (A, sqrt(g) B, sqrt(g) C, D) with g = coupling_scale.
struct ExactRealization {
  GMatrix a;
  GMatrix b;
  GMatrix c;
  GMatrix d;
  Rational coupling_scale{1};
};

/// State-space quadruple (A, B, C, D) tagged with its representation.
///
/// Non-quantum (classical) quadruples are admitted so they can be analyzed
/// and rejected by check_physical_realizability.
class StateSpace {
 public:
  StateSpace(CMatrix a, CMatrix b, CMatrix c, CMatrix d, Representation rep);
  static StateSpace from_exact(ExactRealization exact, Representation rep);

  const CMatrix& a() const { return a_; }
  const CMatrix& b() const { return b_; }
  const CMatrix& c() const { return c_; }
  const CMatrix& d() const { return d_; }
  Representation representation() const { return rep_; }
  Eigen::Index states() const { return a_.rows(); }
  Eigen::Index inputs() const { return b_.cols(); }
  Eigen::Index outputs() const { return c_.rows(); }

  const std::optional<ExactRealization>& exact() const { return exact_; }
  bool is_exact() const { return exact_.has_value(); }

  /// (T⁻¹AT, T⁻¹B, CT, D); the exact copy is dropped.
  StateSpace transformed(const CMatrix& t) const;

 private:
  CMatrix a_, b_, c_, d_;
  Representation rep_;
  std::optional<ExactRealization> exact_;
};

/// Annihilation-representation model with D = I, C = Δ(C₋, C₊),
/// B = -C♭D and A = -i J Ω - ½ C♭C.
StateSpace build_state_space(const QSystemParams& params);

struct RealizabilityReport {
  bool pass = false;
  double tol = 0.0;
  /// ‖A + A♭ + C♭C‖_F (annihilation) or ‖A + A♯ + BB♯‖_F (quadrature).
  double dynamics_residual = 0.0;
  /// ‖B + C♭D‖_F or ‖B + C♯D‖_F.
  double coupling_residual = 0.0;
  /// ‖D†D - I‖_F.
  double feedthrough_residual = 0.0;
  /// Doubled-up deviation (annihilation) or imaginary part (quadrature).
  double structure_residual = 0.0;
  std::vector<std::string> notes;
};

RealizabilityReport check_physical_realizability(const StateSpace& ss,
                                                 double tol);

/// V_k = (1/√2) [[I_k, I_k], [-i I_k, i I_k]].
CMatrix quadrature_map(Eigen::Index k);

/// Real-quadrature form (V_n A V_n†, V_n B V_m†, V_m C V_n†, V_m D V_m†).
/// Throws NumericalError if the result is not real to 1e-10 (relative).
StateSpace to_quadrature(const StateSpace& ss);

/// G(s) = D + C (sI - A)⁻¹ B by an LU solve. Throws PoleEvaluationError when
/// s is within pole_tol * max(1, |λ|) of an eigenvalue λ of A.
CMatrix frequency_response(const StateSpace& ss, Complex s,
                           double pole_tol = kDefaultTol);

/// The structural inverse G(-s*)♭ (annihilation) or G(-s*)♯ (quadrature).
CMatrix structural_inverse_response(const StateSpace& ss, Complex s,
                                    double pole_tol = kDefaultTol);

struct InverseIdentityReport {
  bool pass = false;
  double max_residual = 0.0;
  std::vector<Complex> checked;
  std::vector<Complex> skipped;
  std::vector<std::string> warnings;
};

/// Checks ‖G(s) G(-s*)♭ - I‖_F <= tol at every sample; samples at a pole of
/// either factor are skipped with a warning.
InverseIdentityReport verify_inverse_identity(const StateSpace& ss,
                                              std::span<const Complex> samples,
                                              double tol);

struct RandomSystemOptions {
  Eigen::Index n = 1;
  Eigen::Index m = 1;
  /// Forces Ω₊ = 0 and C₊ = 0.
  bool passive = false;
  /// Draws small Gaussian-rational entries and keeps an exact copy.
  bool exact = false;
};

/// Seeded random parameters: Ω₋ Hermitian, Ω₊ symmetric, C± dense.
QSystemParams random_params(std::uint64_t seed, const RandomSystemOptions& opts);

/// Appends decoupled lossless modes (Ω₋ = ω, no coupling) to params.
QSystemParams with_lossless_modes(const QSystemParams& params,
                                  const std::vector<Rational>& frequencies);

/// `count` seeded sample points with |Re| and |Im| at most `radius`.
std::vector<Complex> random_sample_points(std::uint64_t seed, std::size_t count,
                                          double radius);

}  // namespace qlinz
