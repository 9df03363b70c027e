#include "qlinz/feedback.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "qlinz/errors.hpp"

namespace qlinz {
namespace {

const GR kHalf{Rational(1, 2)};
const GR kQuarter{Rational(1, 4)};

RationalFn constant_fn(const GR& c) { return RationalFn::constant(c); }

RationalFn first_order(const Rational& zero_offset, const Rational& pole_offset) {
  return {Poly(std::vector<GR>{GR(zero_offset), GR(1)}),
          Poly(std::vector<GR>{GR(pole_offset), GR(1)})};
}

const RationalFn& pick(const std::pair<RationalFn, RationalFn>& g, Quadrature q) {
  return q == Quadrature::q ? g.first : g.second;
}

Rational small_rational(std::mt19937_64& rng, int lo, int hi) {
  std::uniform_int_distribution<int> num(lo, hi);
  std::uniform_int_distribution<int> den(1, 4);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

double magnitude_or_nan(const RationalFn& f, Complex s) {
  try {
    return std::abs(f.eval(s));
  } catch (const PoleEvaluationError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

std::string to_string(Quadrature q) { return q == Quadrature::q ? "q" : "p"; }

Quadrature parse_quadrature(const std::string& text) {
  if (text == "q") return Quadrature::q;
  if (text == "p") return Quadrature::p;
  throw ParameterError("quadrature must be 'q' or 'p', got '" + text + "'");
}

QuadPlantParams QuadPlantParams::from_couplings(const GR& omega_plus, const GR& c_minus,
                                                const GR& c_plus) {
  QuadPlantParams p{omega_plus, c_minus + c_plus, c_minus - c_plus};
  p.validate();
  return p;
}

QuadPlantParams QuadPlantParams::from_product(const GR& omega_plus, const GR& product) {
  QuadPlantParams p{omega_plus, product, GR(1)};
  p.validate();
  return p;
}

void QuadPlantParams::validate() const {
  if (!omega_plus.is_imaginary()) {
    throw ParameterError("omega_plus must be purely imaginary, got " + omega_plus.str());
  }
  if (!c_q.is_real() && !c_q.is_imaginary()) {
    throw ParameterError("c_q must be real or purely imaginary, got " + c_q.str());
  }
  if (!c_p.is_real() && !c_p.is_imaginary()) {
    throw ParameterError("c_p must be real or purely imaginary, got " + c_p.str());
  }
  if (!coupling().is_real()) {
    throw ParameterError("c_q * c_p = " + coupling().str() + " has a nonzero imaginary part");
  }
}

Rational QuadPlantParams::detuning() const { return -omega_plus.im(); }

std::pair<RationalFn, RationalFn> quadrature_transfer(const QuadPlantParams& p) {
  p.validate();
  const Rational d = p.detuning();
  const Rational half_c = p.coupling().re() / 2;
  return {first_order(d - half_c, d + half_c), first_order(-d - half_c, -d + half_c)};
}

bool check_quadrature_duality(const RationalFn& g_q, const RationalFn& g_p) {
  return g_q * g_p.substitute_neg() == constant_fn(GR(1));
}

Beamsplitter::Beamsplitter(Rational a) : alpha(std::move(a)) {
  if (abs(alpha) > 1) {
    throw ParameterError("beamsplitter needs |alpha| <= 1, got " + rational_to_string(alpha));
  }
}

double Beamsplitter::beta() const { return std::sqrt(beta_squared().get_d()); }

ClosedLoop closed_loop(const FeedbackNetwork& net) {
  const auto g = quadrature_transfer(net.plant);
  const auto k = quadrature_transfer(net.controller);
  const RationalFn alpha = constant_fn(GR(net.bs.alpha));
  const RationalFn one = constant_fn(GR(1));
  ClosedLoop out;
  RationalFn* targets[2] = {&out.t_q, &out.t_p};
  const RationalFn loops[2] = {g.first * k.first, g.second * k.second};
  for (int i = 0; i < 2; ++i) {
    const RationalFn den = one + alpha * loops[i];
    if (den.is_zero()) {
      throw ParameterError("degenerate network: 1 + alpha*G*K vanishes identically on quadrature " +
                           std::string(i == 0 ? "q" : "p"));
    }
    *targets[i] = (alpha + loops[i]) / den;
  }
  if (out.t_q.is_polynomial() && out.t_q.num().degree() <= 0) {
    out.warnings.push_back("degenerate network: T_q is constant (" + out.t_q.str() + ")");
  }
  if (out.t_p.is_polynomial() && out.t_p.num().degree() <= 0) {
    out.warnings.push_back("degenerate network: T_p is constant (" + out.t_p.str() + ")");
  }
  return out;
}

std::pair<GR, GR> squeezing_terms(const QuadPlantParams& plant, const QuadPlantParams& controller) {
  const GR c = plant.coupling();
  const GR c2 = controller.coupling();
  const GR x = kQuarter * c * c2 - plant.omega_plus * controller.omega_plus;
  const GR y = GR::i() * kHalf * (c * controller.omega_plus + c2 * plant.omega_plus);
  return {x, y};
}

GR squeezing_residual(const FeedbackNetwork& net, Quadrature quad) {
  const auto [x, y] = squeezing_terms(net.plant, net.controller);
  const GR a(net.bs.alpha);
  const GR lhs = (GR(1) + a) * x;
  const GR rhs = (GR(1) - a) * y;
  return quad == Quadrature::q ? lhs - rhs : lhs + rhs;
}

AlphaSolution solve_alpha_for_squeezing(const QuadPlantParams& plant,
                                        const QuadPlantParams& controller, Quadrature quad) {
  const auto [x, y] = squeezing_terms(plant, controller);
  const GR num = quad == Quadrature::q ? y - x : -(x + y);
  const GR den = quad == Quadrature::q ? x + y : x - y;
  AlphaSolution s;
  GR alpha;
  if (!den.is_zero()) {
    alpha = num / den;
    s.method = "residual";
  } else if (num.is_zero()) {
    // Degenerate terms (e.g. a unit controller): fall back to T(0) = 0.
    try {
      const GR g0 = pick(quadrature_transfer(plant), quad).eval(GR(0));
      const GR k0 = pick(quadrature_transfer(controller), quad).eval(GR(0));
      alpha = -(g0 * k0);
      s.method = "direct";
    } catch (const PoleEvaluationError&) {
      s.note = "unsolvable: the squeezing terms vanish and G(0)K(0) is a pole";
      return s;
    }
  } else {
    s.note = "unsolvable: the residual does not depend on alpha and is nonzero";
    return s;
  }
  if (!alpha.is_real()) {
    s.note = "unsolvable: alpha = " + alpha.str() + " is not real";
    return s;
  }
  s.solvable = true;
  s.alpha = alpha.re();
  s.physical = abs(alpha.re()) <= 1;
  if (!s.physical) {
    s.note = "unphysical: |alpha| = " + rational_to_string(abs(alpha.re())) + " > 1";
  }
  return s;
}

ControllerSynthesis synthesize_matched_controller(const QuadPlantParams& plant,
                                                  const Rational& alpha, char sign) {
  if (sign != '-' && sign != '+') throw ParameterError("synthesis sign must be '+' or '-'");
  plant.validate();
  const GR m(sign == '-' ? -1L : 1L);
  const GR c = plant.coupling();
  const GR a(alpha);
  const GR one(1);
  const GR two(2);
  const GR i_omega = GR::i() * plant.omega_plus;
  const GR num = (one + a) * c + m * two * (one - a) * i_omega;
  const GR den = (one - a) * c + m * two * (one + a) * i_omega;
  if (den.is_zero()) {
    throw PreconditionError("matched-controller synthesis is singular: (1-alpha)c " +
                            std::string(sign == '-' ? "-" : "+") +
                            " 2(1+alpha)i*omega_plus vanishes");
  }
  ControllerSynthesis out;
  out.quadrature = sign == '-' ? Quadrature::q : Quadrature::p;
  out.omega_plus = m * GR::i() * c * kHalf * num / den;
  out.imaginary = out.omega_plus.is_imaginary();
  FeedbackNetwork net{plant, QuadPlantParams{out.omega_plus, plant.c_q, plant.c_p},
                      Beamsplitter(alpha)};
  out.residual = squeezing_residual(net, out.quadrature);
  return out;
}

QuadPlantParams unit_controller() { return QuadPlantParams{GR(0), GR(0), GR(0)}; }

UnitControllerAlpha unit_controller_alpha(const QuadPlantParams& plant, Quadrature quad) {
  UnitControllerAlpha r;
  try {
    const GR g0 = pick(quadrature_transfer(plant), quad).eval(GR(0));
    if ((-g0).is_real()) r.direct = (-g0).re();
  } catch (const PoleEvaluationError&) {
  }
  const GR m(quad == Quadrature::q ? 1L : -1L);
  const GR i_omega = m * GR::i() * plant.omega_plus;
  const GR half_c = kHalf * plant.coupling();
  const GR den = i_omega + half_c;
  if (!den.is_zero()) {
    const GR alpha = (i_omega - half_c) / den;
    if (alpha.is_real()) {
      r.closed_form = alpha.re();
      const GR one(1);
      r.closed_form_residual = (one + alpha) * half_c - m * GR::i() * (one - alpha) * plant.omega_plus;
    }
  }
  r.agree = r.direct && r.closed_form && *r.direct == *r.closed_form;
  return r;
}

std::pair<RationalFn, RationalFn> sensitivity_functions(const FeedbackNetwork& net) {
  const auto g = quadrature_transfer(net.plant);
  const auto k = quadrature_transfer(net.controller);
  const RationalFn alpha = constant_fn(GR(net.bs.alpha));
  const RationalFn beta2 = constant_fn(GR(net.bs.beta_squared()));
  const RationalFn one = constant_fn(GR(1));
  auto build = [&](const RationalFn& x, const char* name) {
    const RationalFn den = (one + alpha * x) * (alpha + x);
    if (den.is_zero()) {
      throw ParameterError(std::string("sensitivity undefined on quadrature ") + name +
                           ": the closed loop vanishes or is degenerate identically");
    }
    return beta2 * x / den;
  };
  return {build(g.first * k.first, "q"), build(g.second * k.second, "p")};
}

std::pair<Complex, Complex> sensitivity(const FeedbackNetwork& net, Complex s) {
  const auto sf = sensitivity_functions(net);
  return {sf.first.eval(s), sf.second.eval(s)};
}

std::vector<SweepRow> frequency_sweep(const FeedbackNetwork& net, double from, double to,
                                      int points) {
  if (!(from > 0.0) || !(to > from) || points < 2) {
    throw ParameterError("sweep needs 0 < from < to and at least 2 points");
  }
  const ClosedLoop cl = closed_loop(net);
  const auto sf = sensitivity_functions(net);
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(points));
  const double ratio = std::log(to / from);
  for (int k = 0; k < points; ++k) {
    const double omega = from * std::exp(ratio * k / (points - 1));
    const Complex s(0.0, omega);
    rows.push_back({omega, magnitude_or_nan(cl.t_q, s), magnitude_or_nan(cl.t_p, s),
                    magnitude_or_nan(sf.first, s), magnitude_or_nan(sf.second, s)});
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "omega,abs_T_q,abs_T_p,abs_S_q,abs_S_p\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.omega, r.t_q, r.t_p,
                  r.s_q, r.s_p);
    out << buf;
  }
}

FeedbackNetwork random_network(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto draw_plant = [&] {
    const GR omega(Rational(0), small_rational(rng, -4, 4));
    const bool imaginary = std::uniform_int_distribution<int>(0, 3)(rng) == 0;
    Rational cq = small_rational(rng, 1, 4);
    Rational cp = small_rational(rng, -4, 4);
    if (cp == 0) cp = 1;
    QuadPlantParams p = imaginary ? QuadPlantParams{omega, GR(Rational(0), cq), GR(Rational(0), cp)}
                                  : QuadPlantParams{omega, GR(cq), GR(cp)};
    p.validate();
    return p;
  };
  QuadPlantParams plant = draw_plant();
  QuadPlantParams controller = draw_plant();
  Rational alpha(std::uniform_int_distribution<int>(-7, 7)(rng), 8);
  alpha.canonicalize();
  return {plant, controller, Beamsplitter(alpha)};
}

}  // namespace qlinz
