#pragma once

// Single-mode coherent feedback through a beamsplitter, analyzed per
// quadrature with exact rational functions.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qlinz/exact.hpp"
#include "qlinz/poly.hpp"

namespace qlinz {

enum class Quadrature { q, p };

std::string to_string(Quadrature q);
/// "q" or "p"; throws ParameterError otherwise.
Quadrature parse_quadrature(const std::string& text);

/// Single-mode plant or controller with Ω₋ = 0, purely imaginary Ω₊ and
/// quadrature couplings ℂ_q, ℂ_p each real or purely imaginary.
struct QuadPlantParams {
  GR omega_plus;
  GR c_q{1};
  GR c_p{1};

  /// ℂ_q = C₋ + C₊, ℂ_p = C₋ - C₊.
  static QuadPlantParams from_couplings(const GR& omega_plus, const GR& c_minus, const GR& c_plus);
  /// ℂ_q = product, ℂ_p = 1.
  static QuadPlantParams from_product(const GR& omega_plus, const GR& product);

  /// Throws ParameterError when an invariant fails or ℂ_qℂ_p is not real.
  void validate() const;
  /// ℂ_qℂ_p
  GR coupling() const { return c_q * c_p; }
  /// iΩ₊, real by the invariants.
  Rational detuning() const;
};

/// (G_q, G_p) with G_q = (s + iΩ₊ - c/2)/(s + iΩ₊ + c/2) and G_p the same with
/// -iΩ₊, c = ℂ_qℂ_p.
std::pair<RationalFn, RationalFn> quadrature_transfer(const QuadPlantParams& p);

/// G_q(s) G_p(-s) == 1 exactly.
bool check_quadrature_duality(const RationalFn& g_q, const RationalFn& g_p);

/// Beamsplitter [[α, β], [β, -α]] with α² + β² = 1; β >= 0 is implied.
struct Beamsplitter {
  Rational alpha{0};

  explicit Beamsplitter(Rational a);
  Rational beta_squared() const { return 1 - alpha * alpha; }
  double beta() const;
};

struct FeedbackNetwork {
  QuadPlantParams plant;
  QuadPlantParams controller;
  Beamsplitter bs{Rational(0)};
};

struct ClosedLoop {
  RationalFn t_q;
  RationalFn t_p;
  std::vector<std::string> warnings;
};

/// T = (α + GK)/(1 + αGK) per quadrature. Throws ParameterError when
/// 1 + αGK vanishes identically.
ClosedLoop closed_loop(const FeedbackNetwork& net);

/// X = ¼cc' - Ω₊Ω₊', Y = (i/2)(cΩ₊' + c'Ω₊).
std::pair<GR, GR> squeezing_terms(const QuadPlantParams& plant, const QuadPlantParams& controller);

/// (1+α)X ∓ (1-α)Y: "-" for q, "+" for p. Zero iff T has a zero at s = 0.
GR squeezing_residual(const FeedbackNetwork& net, Quadrature quad);

struct AlphaSolution {
  bool solvable = false;
  std::optional<Rational> alpha;
  bool physical = false;
  /// "residual" when solved from X, Y; "direct" when X, Y degenerate and
  /// α = -G(0)K(0) was used.
  std::string method;
  std::string note;
};

/// α with zero squeezing residual; `physical` iff |α| <= 1.
AlphaSolution solve_alpha_for_squeezing(const QuadPlantParams& plant,
                                        const QuadPlantParams& controller, Quadrature quad);

struct ControllerSynthesis {
  GR omega_plus;
  Quadrature quadrature = Quadrature::q;
  bool imaginary = false;
  /// Squeezing residual of the resulting network on `quadrature`.
  GR residual;
};

/// Pump Ω₊' for a controller sharing the plant's couplings. sign '-' (upper
/// sign) targets q, '+' targets p. Throws PreconditionError when the
/// formula's denominator vanishes.
ControllerSynthesis synthesize_matched_controller(const QuadPlantParams& plant,
                                                  const Rational& alpha, char sign);

/// Comparison for a unit controller (K ≡ 1): α from T(0) = 0 against the
/// closed-form α = (±iΩ₊ - c/2)/(±iΩ₊ + c/2) quoted for this setup.
struct UnitControllerAlpha {
  std::optional<Rational> direct;
  std::optional<Rational> closed_form;
  /// (1+α)c/2 ∓ i(1-α)Ω₊ at α = closed_form.
  GR closed_form_residual;
  bool agree = false;
};

UnitControllerAlpha unit_controller_alpha(const QuadPlantParams& plant, Quadrature quad);

/// Controller with ℂ_q'ℂ_p' = 0 and Ω₊' = 0, whose transfer is 1.
QuadPlantParams unit_controller();

/// (S_q, S_p) with S = β²GK / ((1 + αGK)(α + GK)).
std::pair<RationalFn, RationalFn> sensitivity_functions(const FeedbackNetwork& net);

/// Throws PoleEvaluationError at a pole of either sensitivity.
std::pair<Complex, Complex> sensitivity(const FeedbackNetwork& net, Complex s);

struct SweepRow {
  double omega = 0.0;
  double t_q = 0.0;
  double t_p = 0.0;
  double s_q = 0.0;
  double s_p = 0.0;
};

/// Log-spaced sweep over ω in [from, to]; values at poles are NaN.
std::vector<SweepRow> frequency_sweep(const FeedbackNetwork& net, double from, double to,
                                      int points);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Random network with exact small-rational parameters and |α| < 1.
FeedbackNetwork random_network(std::uint64_t seed);

}  // namespace qlinz
