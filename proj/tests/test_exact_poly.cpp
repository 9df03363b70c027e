#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "qlinz/errors.hpp"
#include "qlinz/exact.hpp"
#include "qlinz/poly.hpp"

using namespace qlinz;
using namespace qlinz::testing;

namespace {

Poly p(std::initializer_list<GR> c) { return Poly(std::vector<GR>(c)); }

}  // namespace

TEST(Rational, ParsingAndPrinting) {
  EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-7"), Rational(-7));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("-1e-3"), Rational(-1, 1000));
  EXPECT_EQ(rational_to_string(parse_rational("6/4")), "3/2");
  EXPECT_THROW(parse_rational("1/0"), ParameterError);
  EXPECT_THROW(parse_rational("abc"), ParameterError);
  EXPECT_EQ(rational_from_double(0.1).get_d(), 0.1);
}

TEST(GaussianRational, ArithmeticAndText) {
  const GR a(Rational(1, 2), Rational(-3));
  const GR b = GR::i();
  EXPECT_EQ(a * b, GR(Rational(3), Rational(1, 2)));
  EXPECT_EQ((a / a), GR(1));
  EXPECT_EQ(a.conj().str(), "1/2+3i");
  EXPECT_EQ(a.str(), "1/2-3i");
  EXPECT_EQ(GR::i().str(), "i");
  EXPECT_EQ((-GR::i()).str(), "-i");
  EXPECT_EQ(qi(-1, 3).str(), "-i/3");
  EXPECT_EQ(GR(Rational(1, 2), Rational(5, 2)).str(), "1/2+5i/2");
  EXPECT_THROW(a / GR(0), ParameterError);
}

TEST(GMatrix, DeterminantAndAdjoints) {
  const GMatrix m = gm({{q(1), q(2)}, {q(3), q(4)}});
  EXPECT_EQ(m.determinant(), q(-2));
  const GMatrix x = gm({{GR(Rational(-1), Rational(-1)), q(0)}, {q(0), GR(Rational(-1), Rational(1))}});
  EXPECT_EQ(exact_flat_adjoint(x), gm({{GR(Rational(-1), Rational(1)), q(0)}, {q(0), GR(Rational(-1), Rational(-1))}}));
  EXPECT_EQ(exact_sharp_adjoint(gm({{q(-1), q(0)}, {q(0), q(1)}})), gm({{q(1), q(0)}, {q(0), q(-1)}}));
  const GMatrix b = gm({{q(0), q(1)}, {q(0), q(0)}});
  EXPECT_EQ(exact_sharp_adjoint(b), gm({{q(0), q(-1)}, {q(0), q(0)}}));
}

TEST(Poly, Gcd) {
  EXPECT_EQ(poly_gcd(p({q(-1), q(0), q(1)}), p({q(-1), q(1)})), p({q(-1), q(1)}));
  EXPECT_EQ(poly_gcd(p({q(0), q(1)}), p({q(-1), q(1)})), Poly::constant(q(1)));
  EXPECT_EQ(poly_gcd(p({q(2), q(-3), q(1)}), p({q(-1), q(0), q(1)})), p({q(-1), q(1)}));
  EXPECT_EQ(poly_gcd(p({q(2), q(4)}), Poly()), p({q(1, 2), q(1)}));
}

TEST(Poly, TextRendering) {
  EXPECT_EQ(p({q(2), q(3), q(1)}).str(), "s^2+3s+2");
  EXPECT_EQ(p({q(-1, 2), GR(Rational(1), Rational(2))}).str(), "(1+2i)s-1/2");
  EXPECT_EQ(p({q(0), q(-1)}).str(), "-s");
  EXPECT_EQ(p({q(4), q(32, 15), q(1)}).str(), "s^2+(32/15)s+4");
  EXPECT_EQ(Poly().str(), "0");
  const RationalFn f(p({q(2), q(3), q(1)}), p({q(-1), q(1)}));
  EXPECT_EQ(f.str(), "(s^2+3s+2)/(s-1)");
  EXPECT_EQ(RationalFn(Poly::constant(q(1)), p({q(-1), q(1)})).str(), "1/(s-1)");
}

TEST(Poly, InterpolationRecoversPolynomial) {
  const Poly target = p({q(1, 3), GR(Rational(0), Rational(2)), q(-5), q(7, 2)});
  std::vector<GR> nodes, values;
  for (long k = 0; k < 4; ++k) {
    nodes.push_back(GR(k));
    values.push_back(target.eval(GR(k)));
  }
  EXPECT_EQ(interpolate(nodes, values), target);
}

TEST(Poly, FaddeevLeVerrierMatchesDeterminant) {
  const GMatrix a = gm({{q(1), q(2), q(0)}, {qi(1), q(-1, 2), q(3)}, {q(0), q(1), q(2)}});
  const ResolventExpansion r = resolvent_expansion(a);
  for (long s = -2; s <= 3; ++s) {
    EXPECT_EQ(r.characteristic.eval(GR(s)), (GMatrix::identity(3) * GR(s) - a).determinant());
  }
  // adj(sI - A)(sI - A) = χ(s) I at a sample point.
  const GR s0(Rational(5, 3));
  GMatrix adj(3, 3);
  GR power(1);
  for (std::size_t k = r.adjugate_terms.size(); k-- > 0;) {
    adj = adj + r.adjugate_terms[k] * power;
    power = power * s0;
  }
  EXPECT_EQ(adj * (GMatrix::identity(3) * s0 - a), GMatrix::identity(3) * r.characteristic.eval(s0));
}

TEST(RationalFn, NormalizationAndArithmetic) {
  const RationalFn f(p({q(-2), q(0), q(2)}), p({q(-2), q(2)}));
  EXPECT_EQ(f, RationalFn(p({q(1), q(1)})));
  EXPECT_TRUE(RationalFn(p({q(1), q(1)}), p({q(3), q(3)})).is_polynomial());
  const RationalFn g(p({q(1)}), p({q(-1), q(1)}));
  EXPECT_EQ(g * RationalFn(p({q(-1), q(1)})), RationalFn::constant(q(1)));
  EXPECT_THROW(g.eval(GR(1)), PoleEvaluationError);
  EXPECT_THROW(RationalFn(p({q(1)}), Poly()), ParameterError);
}
