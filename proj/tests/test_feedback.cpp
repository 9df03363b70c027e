#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "qlinz/errors.hpp"
#include "qlinz/feedback.hpp"

using namespace qlinz;
using namespace qlinz::testing;

namespace {

Poly p(std::initializer_list<GR> c) { return Poly(std::vector<GR>(c)); }
RationalFn rf(Poly n, Poly d) { return RationalFn(std::move(n), std::move(d)); }

Rational r(long num, long den = 1) {
  Rational x(num, den);
  x.canonicalize();
  return x;
}

QuadPlantParams squeezing_plant() { return QuadPlantParams::from_product(qi(-3), q(2)); }
QuadPlantParams squeezing_controller() { return QuadPlantParams::from_product(qi(-1, 3), q(2)); }

FeedbackNetwork squeezing_network(const Rational& alpha = r(1, 4)) {
  return {squeezing_plant(), squeezing_controller(), Beamsplitter(alpha)};
}

bool finite_at_origin(const QuadPlantParams& p) {
  const auto [g_q, g_p] = quadrature_transfer(p);
  return !g_q.den().eval(GR(0)).is_zero() && !g_p.den().eval(GR(0)).is_zero();
}

Complex closed_loop_value(double alpha, Complex x) { return (alpha + x) / (1.0 + alpha * x); }

}  // namespace

TEST(QuadratureTransfer, Examples) {
  const auto [gq, gp] = quadrature_transfer(squeezing_plant());
  EXPECT_EQ(gq, rf(p({q(2), q(1)}), p({q(4), q(1)})));
  EXPECT_EQ(gp, rf(p({q(-4), q(1)}), p({q(-2), q(1)})));
  EXPECT_TRUE(check_quadrature_duality(gq, gp));

  // κ = 2, ε = 1.
  const auto [dq, dp] = quadrature_transfer(QuadPlantParams::from_product(qi(1, 2), q(2)));
  EXPECT_EQ(dq, rf(p({q(-3, 2), q(1)}), p({q(1, 2), q(1)})));
  EXPECT_EQ(dp, rf(p({q(-1, 2), q(1)}), p({q(3, 2), q(1)})));
  EXPECT_TRUE(check_quadrature_duality(dq, dp));

  const auto [uq, up] = quadrature_transfer(unit_controller());
  EXPECT_EQ(uq, RationalFn::constant(q(1)));
  EXPECT_EQ(up, RationalFn::constant(q(1)));
  EXPECT_FALSE(check_quadrature_duality(gq, gq));
}

TEST(QuadratureTransfer, ParameterValidation) {
  EXPECT_THROW(QuadPlantParams::from_product(q(1), q(2)).validate(), ParameterError);
  EXPECT_THROW(QuadPlantParams::from_product(qi(1), qi(1)).validate(), ParameterError);
  EXPECT_THROW(QuadPlantParams::from_product(qi(1), GR(r(1), r(1))).validate(), ParameterError);
  const QuadPlantParams c = QuadPlantParams::from_couplings(qi(1), q(3), q(1));
  EXPECT_EQ(c.c_q, q(4));
  EXPECT_EQ(c.c_p, q(2));
  EXPECT_EQ(c.detuning(), r(-1));
  EXPECT_THROW(Beamsplitter(r(5, 4)), ParameterError);
  EXPECT_EQ(parse_quadrature("p"), Quadrature::p);
  EXPECT_THROW(parse_quadrature("x"), ParameterError);
}

TEST(ClosedLoop, SqueezingNetwork) {
  const ClosedLoop cl = closed_loop(squeezing_network());
  EXPECT_EQ(cl.t_q.eval(GR(0)), q(0));
  // T_q(s) T_p(-s) = 1 turns the zero of T_q at the origin into a pole of T_p.
  EXPECT_THROW(cl.t_p.eval(GR(0)), PoleEvaluationError);
  EXPECT_TRUE(check_quadrature_duality(cl.t_q, cl.t_p));
  EXPECT_EQ(squeezing_residual(squeezing_network(), Quadrature::q), q(0));
  EXPECT_NE(squeezing_residual(squeezing_network(), Quadrature::p), q(0));
  const auto [x, y] = squeezing_terms(squeezing_plant(), squeezing_controller());
  EXPECT_EQ(x, q(2));
  EXPECT_EQ(y, q(10, 3));
  EXPECT_LT(std::abs(cl.t_q.eval(Complex(0, 1e-6))), 1e-4);
}

TEST(ClosedLoop, BeamsplitterLimits) {
  const ClosedLoop mirror = closed_loop(squeezing_network(r(1)));
  EXPECT_EQ(mirror.t_q, RationalFn::constant(q(1)));
  EXPECT_FALSE(mirror.warnings.empty());
  const ClosedLoop series = closed_loop(squeezing_network(r(0)));
  const auto [gq, gp] = quadrature_transfer(squeezing_plant());
  const auto [kq, kp] = quadrature_transfer(squeezing_controller());
  EXPECT_EQ(series.t_q, gq * kq);
  EXPECT_EQ(series.t_p, gp * kp);
}

TEST(ClosedLoop, DualityOnRandomNetworks) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const FeedbackNetwork net = random_network(seed);
    const ClosedLoop cl = closed_loop(net);
    EXPECT_TRUE(check_quadrature_duality(cl.t_q, cl.t_p)) << seed;
  }
}

TEST(ClosedLoop, ResidualVanishesExactlyWhenTransferDoes) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const FeedbackNetwork net = random_network(seed);
    for (Quadrature quad : {Quadrature::q, Quadrature::p}) {
      const ClosedLoop cl = closed_loop(net);
      const RationalFn& t = quad == Quadrature::q ? cl.t_q : cl.t_p;
      bool t_zero = false;
      try {
        t_zero = t.eval(GR(0)).is_zero();
      } catch (const PoleEvaluationError&) {
      }
      // The residual is the numerator of T(0) cleared of the G and K
      // denominators, so it only decides T(0) = 0 when both are finite there.
      if (finite_at_origin(net.plant) && finite_at_origin(net.controller)) {
        EXPECT_EQ(squeezing_residual(net, quad).is_zero(), t_zero) << seed;
      }

      const AlphaSolution sol = solve_alpha_for_squeezing(net.plant, net.controller, quad);
      if (!sol.solvable || !sol.physical || std::abs(sol.alpha->get_d()) == 1.0) continue;
      const FeedbackNetwork solved{net.plant, net.controller, Beamsplitter(*sol.alpha)};
      const ClosedLoop scl = closed_loop(solved);
      const RationalFn& st = quad == Quadrature::q ? scl.t_q : scl.t_p;
      EXPECT_TRUE(squeezing_residual(solved, quad).is_zero()) << seed;
      EXPECT_LT(std::abs(st.eval(Complex(0, 1e-6))), 1e-4) << seed;
      // A perturbed beamsplitter breaks the zero.
      const Rational nudged = *sol.alpha + (sol.alpha->get_d() > 0 ? r(-1, 97) : r(1, 97));
      EXPECT_FALSE(squeezing_residual({net.plant, net.controller, Beamsplitter(nudged)}, quad).is_zero())
          << seed;
    }
  }
}

TEST(ClosedLoop, ResidualMissesCancellationAtTheOrigin) {
  // G_q = (s+1)/s, K_q = s/(s+4): GK(0) = 1/4 is finite, so with α = 3/4
  // T_q(0) = 16/19, yet both cleared terms of the residual vanish.
  const QuadPlantParams plant{qi(-1, 2), q(1, 2), q(-2)};
  const QuadPlantParams controller{qi(-2), q(4), q(1)};
  const FeedbackNetwork net{plant, controller, Beamsplitter(r(3, 4))};
  EXPECT_TRUE(squeezing_residual(net, Quadrature::q).is_zero());
  EXPECT_EQ(closed_loop(net).t_q.eval(GR(0)), q(16, 19));
  EXPECT_FALSE(finite_at_origin(plant));
}

TEST(SolveAlpha, Examples) {
  const AlphaSolution a = solve_alpha_for_squeezing(squeezing_plant(), squeezing_controller(), Quadrature::q);
  ASSERT_TRUE(a.solvable);
  EXPECT_EQ(*a.alpha, r(1, 4));
  EXPECT_TRUE(a.physical);
  EXPECT_EQ(a.method, "residual");

  const QuadPlantParams same = QuadPlantParams::from_product(qi(1, 4), q(1));
  const auto [x, y] = squeezing_terms(same, same);
  EXPECT_EQ(x, q(5, 16));
  EXPECT_EQ(y, q(-1, 4));
  const AlphaSolution b = solve_alpha_for_squeezing(same, same, Quadrature::q);
  ASSERT_TRUE(b.solvable);
  EXPECT_EQ(*b.alpha, r(-9));
  EXPECT_FALSE(b.physical);
  // Independent route: T(0) = 0 needs α = -G(0)K(0).
  const auto [gq, gp] = quadrature_transfer(same);
  EXPECT_EQ(GR(*b.alpha), -(gq.eval(GR(0)) * gq.eval(GR(0))));
}

TEST(SolveAlpha, ControllerBuiltFromTheTarget) {
  // K(0) = -α/G(0) for α = 1/2; the solver has to give α back.
  const QuadPlantParams plant = squeezing_plant();  // G_q(0) = 1/2
  // K_q(0) = -1 needs (d' - c'/2)/(d' + c'/2) = -1, i.e. d' = 0.
  const QuadPlantParams controller = QuadPlantParams::from_product(q(0), q(2));
  const AlphaSolution s = solve_alpha_for_squeezing(plant, controller, Quadrature::q);
  ASSERT_TRUE(s.solvable);
  EXPECT_EQ(*s.alpha, r(1, 2));
}

TEST(Synthesis, MatchedControllerExamples) {
  const ControllerSynthesis s = synthesize_matched_controller(squeezing_plant(), r(1, 4), '-');
  EXPECT_EQ(s.quadrature, Quadrature::q);
  EXPECT_EQ(s.omega_plus, qi(-1, 3));
  EXPECT_TRUE(s.imaginary);
  EXPECT_TRUE(s.residual.is_zero());

  for (char sign : {'-', '+'}) {
    const ControllerSynthesis t = synthesize_matched_controller(squeezing_plant(), r(1, 4), sign);
    QuadPlantParams k = squeezing_plant();
    k.omega_plus = t.omega_plus;
    const ClosedLoop cl = closed_loop({squeezing_plant(), k, Beamsplitter(r(1, 4))});
    const RationalFn& tf = t.quadrature == Quadrature::q ? cl.t_q : cl.t_p;
    EXPECT_TRUE(tf.eval(GR(0)).is_zero()) << sign;
    // α = 0 collapses to ∓ic/2.
    const ControllerSynthesis z = synthesize_matched_controller(squeezing_plant(), r(0), sign);
    EXPECT_EQ(z.omega_plus, sign == '-' ? qi(-1) : qi(1)) << sign;
  }
  EXPECT_THROW(synthesize_matched_controller(squeezing_plant(), r(1, 4), '*'), ParameterError);
}

TEST(Synthesis, ResidualVanishesOnRandomPlants) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const FeedbackNetwork net = random_network(seed);
    for (char sign : {'-', '+'}) {
      try {
        const ControllerSynthesis s = synthesize_matched_controller(net.plant, net.bs.alpha, sign);
        EXPECT_TRUE(s.residual.is_zero()) << seed << sign;
        EXPECT_TRUE(s.imaginary) << seed << sign;
      } catch (const PreconditionError&) {
      }
    }
  }
}

TEST(UnitController, DisagreementIsReported) {
  const UnitControllerAlpha u = unit_controller_alpha(squeezing_plant(), Quadrature::q);
  ASSERT_TRUE(u.direct.has_value());
  ASSERT_TRUE(u.closed_form.has_value());
  EXPECT_EQ(*u.direct, r(-1, 2));
  EXPECT_EQ(*u.closed_form, r(1, 2));
  EXPECT_FALSE(u.agree);
  const FeedbackNetwork net{squeezing_plant(), unit_controller(), Beamsplitter(*u.direct)};
  EXPECT_TRUE(closed_loop(net).t_q.eval(GR(0)).is_zero());
}

TEST(Sensitivity, ClosedFormAndLimits) {
  const auto [sq, sp] = sensitivity_functions(squeezing_network(r(0)));
  EXPECT_EQ(sq, RationalFn::constant(q(1)));
  EXPECT_EQ(sp, RationalFn::constant(q(1)));
  const FeedbackNetwork net = squeezing_network();
  const double lo = std::abs(sensitivity(net, Complex(0, 1e-3)).first);
  const double hi = std::abs(sensitivity(net, Complex(0, 1e-1)).first);
  EXPECT_GE(lo / hi, 10.0);
  const double slope = std::log10(lo / hi) / std::log10(1e-3 / 1e-1);
  EXPECT_NEAR(slope, -1.0, 0.1);
  EXPECT_THROW(sensitivity(net, 0.0), PoleEvaluationError);
}

TEST(Sensitivity, FiniteDifferenceMatchesClosedForm) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const FeedbackNetwork net = random_network(seed);
    const auto [gq, gp] = quadrature_transfer(net.plant);
    const auto [kq, kp] = quadrature_transfer(net.controller);
    const double alpha = net.bs.alpha.get_d();
    const Complex s(u(rng), u(rng));
    std::pair<Complex, Complex> analytic;
    try {
      analytic = sensitivity(net, s);
    } catch (const PoleEvaluationError&) {
      continue;
    }
    const double h = 1e-6;
    const Complex g = gq.eval(s), k = kq.eval(s);
    const Complex t = closed_loop_value(alpha, g * k);
    const Complex t_plus = closed_loop_value(alpha, g * (1.0 + h) * k);
    const Complex t_minus = closed_loop_value(alpha, g * (1.0 - h) * k);
    const Complex fd = (t_plus - t_minus) / (2.0 * h) / t;
    EXPECT_LT(std::abs(fd - analytic.first), 1e-4 * std::abs(analytic.first)) << seed;
  }
}

TEST(Sweep, CsvFormat) {
  const auto rows = frequency_sweep(squeezing_network(), 1e-3, 1e-1, 3);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_DOUBLE_EQ(rows[0].omega, 1e-3);
  EXPECT_NEAR(rows[1].omega, 1e-2, 1e-15);
  EXPECT_GT(rows[0].s_q, rows[2].s_q);
  std::ostringstream out;
  write_sweep_csv(out, rows);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "omega,abs_T_q,abs_T_p,abs_S_q,abs_S_p");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
  EXPECT_THROW(frequency_sweep(squeezing_network(), -1.0, 1.0, 3), ParameterError);
}
