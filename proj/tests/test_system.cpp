#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "qlinz/errors.hpp"
#include "qlinz/system.hpp"

using namespace qlinz;
using namespace qlinz::testing;

TEST(BuildStateSpace, PassiveCavity) {
  const StateSpace ss = passive_cavity();
  EXPECT_LT((ss.a() - cm({{{-1, -1}, 0}, {0, {-1, 1}}})).norm(), 1e-14);
  EXPECT_LT((ss.b() + std::sqrt(2.0) * CMatrix::Identity(2, 2)).norm(), 1e-14);
  EXPECT_LT((ss.c() - std::sqrt(2.0) * CMatrix::Identity(2, 2)).norm(), 1e-14);
  EXPECT_LT((ss.d() - CMatrix::Identity(2, 2)).norm(), 1e-15);
  ASSERT_TRUE(ss.is_exact());
  EXPECT_EQ(ss.exact()->a, gm({{GR(Rational(-1), Rational(-1)), q(0)}, {q(0), GR(Rational(-1), Rational(1))}}));
}

TEST(BuildStateSpace, NumericPassiveCavityMatchesExact) {
  const StateSpace ss = build_state_space(QSystemParams::numeric(
      cm({{1}}), cm({{0}}), cm({{std::sqrt(2.0)}}), cm({{0}})));
  EXPECT_FALSE(ss.is_exact());
  EXPECT_LT((ss.a() - passive_cavity().a()).norm(), 1e-14);
}

TEST(BuildStateSpace, GainSystem) {
  const StateSpace ss = gain_system();
  const CMatrix swap = cm({{0, 1}, {1, 0}});
  EXPECT_LT((ss.c() - swap).norm(), 1e-15);
  EXPECT_LT((flat_adjoint(ss.c()) * ss.c() + CMatrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_LT((ss.a() - 0.5 * CMatrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_LT((ss.b() - swap).norm(), 1e-15);
}

TEST(BuildStateSpace, RejectsNonHermitianOmega) {
  EXPECT_THROW(QSystemParams::numeric(cm({{{0, 1}}}), cm({{0}}), cm({{1}}), cm({{0}})), ParameterError);
  EXPECT_THROW(QSystemParams::numeric(cm({{0, 1}, {0, 0}}), CMatrix::Zero(2, 2), CMatrix::Zero(1, 2),
                                      CMatrix::Zero(1, 2)),
               ParameterError);
  EXPECT_THROW(QSystemParams::numeric(cm({{1}}), cm({{0}}), cm({{1, 2}}), cm({{0}})), DimensionError);
}

TEST(Realizability, ExamplesPassAndFail) {
  const auto hidden = hidden_mode_example();
  const auto r = check_physical_realizability(hidden, 1e-12);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.dynamics_residual, 1e-12);
  EXPECT_LE(r.coupling_residual, 1e-12);

  const StateSpace classical(cm({{-1, 0}, {0, 1}}), CMatrix::Identity(2, 2), CMatrix::Identity(2, 2),
                             CMatrix::Zero(2, 2), Representation::quadrature);
  const auto f = check_physical_realizability(classical, 1e-9);
  EXPECT_FALSE(f.pass);
  EXPECT_NEAR(f.feedthrough_residual, std::sqrt(2.0), 1e-14);
}

TEST(Realizability, RandomSystemsPassByConstruction) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    RandomSystemOptions opts;
    opts.n = 1 + static_cast<Eigen::Index>(seed % 4);
    opts.m = 1 + static_cast<Eigen::Index>((seed / 4) % 2);
    opts.passive = seed % 3 == 0;
    opts.exact = seed % 2 == 0;
    const StateSpace ss = build_state_space(random_params(seed, opts));
    const auto r = check_physical_realizability(ss, 1e-10);
    EXPECT_TRUE(r.pass) << "seed " << seed;
    // 2 Re tr(A) = -tr(C♭C).
    const Complex lhs = 2.0 * ss.a().trace().real();
    const Complex rhs = -(flat_adjoint(ss.c()) * ss.c()).trace();
    EXPECT_LT(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(rhs))) << "seed " << seed;
  }
}

TEST(ToQuadrature, DpaAndCavity) {
  const StateSpace dq = to_quadrature(dpa(2, 1));
  ASSERT_TRUE(dq.is_exact());
  EXPECT_EQ(dq.exact()->a, gm({{q(-1, 2), q(0)}, {q(0), q(-3, 2)}}));
  const StateSpace cq = to_quadrature(passive_cavity());
  EXPECT_LT((cq.a() - cm({{-1, 1}, {-1, -1}})).norm(), 1e-14);
  EXPECT_TRUE(same_multiset(eigenvalue_list(cq.a()), {{-1, 1}, {-1, -1}}, 1e-12));
  EXPECT_TRUE(check_physical_realizability(cq, 1e-12).pass);
  EXPECT_TRUE(check_physical_realizability(dq, 1e-12).pass);
}

TEST(ToQuadrature, ClosedSystemHasImaginarySpectrum) {
  const StateSpace ss = build_state_space(
      QSystemParams::numeric(cm({{2, 0}, {0, 3}}), CMatrix::Zero(2, 2), CMatrix::Zero(1, 2), CMatrix::Zero(1, 2)));
  const StateSpace qs = to_quadrature(ss);
  for (Complex z : eigenvalue_list(qs.a())) EXPECT_LT(std::abs(z.real()), 1e-14);
  EXPECT_LT((qs.a() + qs.a().transpose()).norm(), 1e-14);
}

TEST(ToQuadrature, PreservesSpectrumOnRandomSystems) {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    RandomSystemOptions opts;
    opts.n = 1 + static_cast<Eigen::Index>(seed % 3);
    opts.m = 1 + static_cast<Eigen::Index>(seed % 2);
    const StateSpace ss = build_state_space(random_params(seed, opts));
    const StateSpace qs = to_quadrature(ss);
    EXPECT_LT(qs.a().imag().norm(), 1e-15);
    EXPECT_TRUE(same_multiset(eigenvalue_list(ss.a()), eigenvalue_list(qs.a()), 1e-9)) << seed;
    EXPECT_TRUE(check_physical_realizability(qs, 1e-10).pass) << seed;
  }
}

TEST(ToQuadrature, RejectsNonDoubledUpInput) {
  const StateSpace bad(cm({{1, {0, 1}}, {0, 0}}), CMatrix::Identity(2, 2), CMatrix::Identity(2, 2),
                       CMatrix::Identity(2, 2), Representation::annihilation);
  EXPECT_THROW(to_quadrature(bad), NumericalError);
}

TEST(FrequencyResponse, Examples) {
  EXPECT_LT((frequency_response(gain_system(), 1.0) - 3.0 * CMatrix::Identity(2, 2)).norm(), 1e-13);
  const CMatrix g0 = frequency_response(passive_cavity(), 0.0);
  EXPECT_LT((g0 - cm({{{0, 1}, 0}, {0, {0, -1}}})).norm(), 1e-13);
  const StateSpace ss = build_state_space(random_params(3, {2, 1, false, false}));
  EXPECT_LT((frequency_response(ss, 1e9) - ss.d()).norm(), 1e-6);
  EXPECT_THROW(frequency_response(gain_system(), 0.5), PoleEvaluationError);
}

TEST(InverseIdentity, Examples) {
  const StateSpace gain = gain_system();
  EXPECT_LT((frequency_response(gain, 2.0) - (5.0 / 3.0) * CMatrix::Identity(2, 2)).norm(), 1e-13);
  EXPECT_LT((structural_inverse_response(gain, 2.0) - 0.6 * CMatrix::Identity(2, 2)).norm(), 1e-13);
  const std::vector<Complex> at_i{Complex(0, 1)};
  const auto r = verify_inverse_identity(dpa(2, 1), at_i, 1e-12);
  EXPECT_TRUE(r.pass);
  const StateSpace closed = build_state_space(
      QSystemParams::numeric(cm({{1}}), cm({{0}}), cm({{0}}), cm({{0}})));
  const std::vector<Complex> samples{Complex(0.3, 0.2), Complex(-1, 4)};
  EXPECT_TRUE(verify_inverse_identity(closed, samples, 1e-14).pass);
}

TEST(InverseIdentity, SkipsPolesWithWarning) {
  const std::vector<Complex> samples{0.5, 2.0};
  const auto r = verify_inverse_identity(gain_system(), samples, 1e-10);
  EXPECT_EQ(r.skipped.size(), 1u);
  EXPECT_EQ(r.checked.size(), 1u);
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_TRUE(r.pass);
}

TEST(InverseIdentity, HoldsOnRandomSystems) {
  for (std::uint64_t seed = 200; seed < 260; ++seed) {
    RandomSystemOptions opts;
    opts.n = 1 + static_cast<Eigen::Index>(seed % 4);
    opts.m = 1 + static_cast<Eigen::Index>(seed % 2);
    opts.passive = seed % 2 == 0;
    const StateSpace ss = build_state_space(random_params(seed, opts));
    const auto samples = random_sample_points(seed, 10, 3.0);
    EXPECT_TRUE(verify_inverse_identity(ss, samples, 1e-8).pass) << seed;
  }
}

TEST(RandomParams, DeterministicForSeed) {
  const auto a = random_params(42, {3, 2, false, false});
  const auto b = random_params(42, {3, 2, false, false});
  EXPECT_EQ(a.omega_minus, b.omega_minus);
  EXPECT_EQ(a.c_plus, b.c_plus);
  const auto e1 = random_params(42, {2, 1, false, true});
  const auto e2 = random_params(42, {2, 1, false, true});
  EXPECT_EQ(e1.exact->omega_plus, e2.exact->omega_plus);
  EXPECT_TRUE(random_params(7, {2, 2, true, false}).is_passive());
}
