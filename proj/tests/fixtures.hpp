#pragma once

// Named example systems and small helpers shared by the test binaries.

#include <initializer_list>
#include <string>
#include <vector>

#include "qlinz/exact.hpp"
#include "qlinz/spectrum.hpp"
#include "qlinz/system.hpp"

namespace qlinz::testing {

inline GMatrix gm(std::initializer_list<std::initializer_list<GR>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  GMatrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (const auto& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline GR q(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return GR(r);
}

inline GR qi(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return GR(Rational(0), r);
}

inline CMatrix cm(std::initializer_list<std::initializer_list<Complex>> rows) {
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index c = r == 0 ? 0 : static_cast<Eigen::Index>(rows.begin()->size());
  CMatrix m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (const auto& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline ExactParams single_mode(const GR& omega_minus, const GR& omega_plus, const GR& c_minus,
                               const GR& c_plus, const Rational& scale = 1) {
  ExactParams e;
  e.n = 1;
  e.m = 1;
  e.omega_minus = gm({{omega_minus}});
  e.omega_plus = gm({{omega_plus}});
  e.c_minus = gm({{c_minus}});
  e.c_plus = gm({{c_plus}});
  e.coupling_scale = scale;
  return e;
}

/// ω = 1, κ = 2: C₋ = √2 carried as coupling scale 2.
inline QSystemParams passive_cavity_params() {
  return QSystemParams::from_exact(single_mode(q(1), q(0), q(1), q(0), 2));
}

inline StateSpace passive_cavity() { return build_state_space(passive_cavity_params()); }

/// Ω = 0, C₋ = 0, C₊ = 1.
inline QSystemParams gain_params() {
  return QSystemParams::from_exact(single_mode(q(0), q(0), q(0), q(1)));
}

inline StateSpace gain_system() { return build_state_space(gain_params()); }

/// Degenerate parametric amplifier: Ω₊ = iε/2, C₋ = √κ.
inline QSystemParams dpa_params(const Rational& kappa, const Rational& eps) {
  return QSystemParams::from_exact(
      single_mode(q(0), GR(Rational(0), Rational(eps / 2)), q(1), q(0), kappa));
}

inline StateSpace dpa(const Rational& kappa, const Rational& eps) {
  return build_state_space(dpa_params(kappa, eps));
}

inline StateSpace exact_quadruple(GMatrix a, GMatrix b, GMatrix c, GMatrix d,
                                  Representation rep = Representation::quadrature) {
  ExactRealization r;
  r.a = std::move(a);
  r.b = std::move(b);
  r.c = std::move(c);
  r.d = std::move(d);
  return StateSpace::from_exact(std::move(r), rep);
}

/// Classical A = B = C = I₂, D = 0.
inline StateSpace classical_example_one() {
  const GMatrix id = GMatrix::identity(2);
  return exact_quadruple(id, id, id, GMatrix(2, 2));
}

/// Classical A = diag(1, 2), B = C = diag(1, 0), D = I₂.
inline StateSpace classical_example_two() {
  return exact_quadruple(gm({{q(1), q(0)}, {q(0), q(2)}}), gm({{q(1), q(0)}, {q(0), q(0)}}),
                         gm({{q(1), q(0)}, {q(0), q(0)}}), GMatrix::identity(2));
}

/// Quadrature system A = diag(-1, 1), B = C = [[0, 1], [0, 0]], D = I₂.
inline StateSpace hidden_mode_example() {
  const GMatrix bc = gm({{q(0), q(1)}, {q(0), q(0)}});
  return exact_quadruple(gm({{q(-1), q(0)}, {q(0), q(1)}}), bc, bc, GMatrix::identity(2));
}

inline std::vector<Complex> sorted(std::vector<Complex> v) {
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return v;
}

/// Multiset equality at tolerance, via the library's bottleneck matcher.
inline bool same_multiset(const std::vector<Complex>& a, const std::vector<Complex>& b,
                          double tol) {
  return match_multisets(a, b, tol).matched;
}

}  // namespace qlinz::testing
