#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "phs/classifier.hpp"
#include "phs/errors.hpp"
#include "phs/oracle.hpp"
#include "support.hpp"

using namespace phs;
using phs::test::network3;
using phs::test::identity;
using phs::test::real_matrix;
using phs::test::string_system;
using phs::test::transport;
using phs::test::zeros;

namespace {

ComplexMatrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> g;
  ComplexMatrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

ComplexMatrix random_unitary(std::mt19937_64& rng, Eigen::Index n) {
  return Eigen::HouseholderQR<ComplexMatrix>(random_matrix(rng, n, n)).householderQ() *
         ComplexMatrix::Identity(n, n);
}

// Invertible with singular values in [0.5, 2].
ComplexMatrix well_conditioned(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(0.5, 2.0);
  RealVector s(n);
  for (Eigen::Index i = 0; i < n; ++i) s(i) = u(rng);
  return random_unitary(rng, n) * s.cast<Complex>().asDiagonal() * random_unitary(rng, n);
}

// String with W1 = I, W0 = diag(-1, 1) written as W̃_B = [W1 W0].
PHSystem string_with_tension(double t1) {
  return string_system(1.0, t1).with_wb_tilde(real_matrix({{1, 0, -1, 0}, {0, 1, 0, 1}}));
}

PHSystem crossing_system() {
  // P1 = I, H = diag(1+ζ, 2−ζ): the two positive eigenvalues swap order at 1/2.
  std::vector<ComplexMatrix> coeffs{real_matrix({{1, 0}, {0, 2}}), real_matrix({{1, 0}, {0, -1}})};
  return PHSystem::create(identity(2), zeros(2), CoefficientField::polynomial(coeffs),
                          real_matrix({{1, 0, 0, 0}, {0, 1, 0, 0}}));
}

}  // namespace

TEST(ComputeWb, TransportClosedForm) {
  // [1 −1; 1 1]⁻¹ = ½[1 1; −1 1], so W_B = ½[w1 − w0, w1 + w0].
  for (auto [w1, w0] : {std::pair{1.0, 0.0}, {2.0, 1.0}, {1.0, -1.0}, {0.0, 1.0}}) {
    const ComplexMatrix wb = compute_wb(transport(w1, w0));
    EXPECT_NEAR(std::abs(wb(0, 0) - 0.5 * (w1 - w0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(wb(0, 1) - 0.5 * (w1 + w0)), 0.0, 1e-15);
  }
}

TEST(ComputeWb, ReconstructsWbTilde) {
  for (int seed = 0; seed < 20; ++seed) {
    const PHSystem s = oracle::random_system(seed, 3, oracle::ClassHint::general);
    const Eigen::Index n = s.n();
    ComplexMatrix block(2 * n, 2 * n);
    block << s.p1(), -s.p1(), identity(n), identity(n);
    EXPECT_LE((compute_wb(s) * block - s.wb_tilde()).norm(), 1e-10 * s.wb_tilde().norm());
  }
}

TEST(Sigma, Layout) {
  const ComplexMatrix s = sigma(2);
  EXPECT_EQ(s, real_matrix({{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}}));
}

TEST(RankOf, Examples) {
  EXPECT_EQ(rank_of(network3().wb_tilde()), 3);
  EXPECT_EQ(rank_of(ComplexMatrix::Zero(3, 6)), 0);
  EXPECT_EQ(rank_of(real_matrix({{1, 0}, {2, 0}})), 1);
}

TEST(Inertia, Examples) {
  EXPECT_EQ(inertia(real_matrix({{0, 1}, {1, 0}})), (Inertia{1, 1, 0}));
  EXPECT_EQ(inertia(identity(3)), (Inertia{3, 0, 0}));
  EXPECT_EQ(inertia(real_matrix({{2, 0, 0}, {0, -5, 0}, {0, 0, 0}})), (Inertia{1, 1, 1}));
}

TEST(Inertia, NonHermitianThrows) {
  EXPECT_THROW(inertia(real_matrix({{0, 1}, {0, 0}})), ShapeError);
}

TEST(Inertia, ConstantAlongField) {
  for (int seed = 0; seed < 20; ++seed) {
    const PHSystem s = oracle::random_system(seed, 4, oracle::ClassHint::general)
                           .with_h(oracle::random_field(seed, 4, seed % 3));
    const Inertia expected = inertia(s.p1());
    for (double z : uniform_grid(33)) {
      // H^{1/2} P1 H^{1/2} is congruent to P1 and similar to P1·H.
      const auto root = linalg::hermitian_sqrt(s.h()(z));
      EXPECT_EQ(inertia(hermitian_part(root.sqrt * s.p1() * root.sqrt)), expected);
      const EigenSplit sp = eigensplit(s, z);
      EXPECT_EQ(sp.n1, expected.positive);
      EXPECT_EQ(sp.n2, expected.negative);
    }
  }
}

TEST(Eigensplit, StringUnitCoefficients) {
  const EigenSplit sp = eigensplit(string_system(1.0, 0.0), 0.3);
  ASSERT_EQ(sp.n1, 1);
  ASSERT_EQ(sp.n2, 1);
  EXPECT_NEAR(sp.lambda(0), 1.0, 1e-14);
  EXPECT_NEAR(sp.theta(0), -1.0, 1e-14);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(sp.z_plus(0, 0) - r), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(sp.z_plus(1, 0) - r), 0.0, 1e-14);
  // Z⁻ = span(−1, 1); the phase rule makes the first entry positive.
  EXPECT_NEAR(std::abs(sp.z_minus(0, 0) - r), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(sp.z_minus(1, 0) + r), 0.0, 1e-14);
}

TEST(Eigensplit, WaveSpeedIsSqrtTensionOverDensity) {
  const PHSystem s = string_system(1.0, 1.0);
  for (double z : {0.0, 0.25, 0.5, 1.0}) {
    const EigenSplit sp = eigensplit(s, z);
    EXPECT_NEAR(sp.lambda(0), std::sqrt(1.0 + z), 1e-13);
    EXPECT_NEAR(sp.theta(0), -std::sqrt(1.0 + z), 1e-13);
  }
}

TEST(Eigensplit, NetworkAllForward) {
  const EigenSplit sp = eigensplit(network3(), 0.5);
  EXPECT_EQ(sp.n1, 3);
  EXPECT_EQ(sp.n2, 0);
  EXPECT_EQ(sp.z_minus.cols(), 0);
  EXPECT_EQ(rank_of(sp.z_plus), 3);
}

TEST(Eigensplit, Reconstruction) {
  for (int seed = 0; seed < 30; ++seed) {
    const int n = 1 + seed % 5;
    const PHSystem s = oracle::random_system(seed, n, oracle::ClassHint::general)
                           .with_h(oracle::random_field(seed, n, seed % 3));
    for (double z : {0.0, 0.4, 1.0}) {
      const EigenSplit sp = eigensplit(s, z);
      const ComplexMatrix a = s.p1() * s.h()(z);
      const ComplexMatrix rebuilt =
          sp.s_inv * sp.speeds().cast<Complex>().asDiagonal() * sp.s_inv.inverse();
      EXPECT_LE((a - rebuilt).norm(), 1e-9 * a.norm());
      for (Eigen::Index i = 1; i < sp.lambda.size(); ++i) EXPECT_GE(sp.lambda(i - 1), sp.lambda(i));
      for (Eigen::Index i = 1; i < sp.theta.size(); ++i) EXPECT_LE(sp.theta(i - 1), sp.theta(i));
      EXPECT_LE((sp.z_plus.adjoint() * sp.z_plus - identity(sp.n1)).norm(), 1e-12);
      EXPECT_LE((sp.z_minus.adjoint() * sp.z_minus - identity(sp.n2)).norm(), 1e-12);
    }
  }
}

TEST(DiagonalizeField, ConstantFieldIsIdentical) {
  const auto grid = uniform_grid(9);
  const FieldDiagonalization fd = diagonalize_field(string_system(1.0, 0.0), grid);
  EXPECT_FALSE(fd.crossing);
  for (const auto& sp : fd.splits) EXPECT_LE((sp.s_inv - fd.splits.front().s_inv).norm(), 1e-14);
  EXPECT_LE(fd.max_column_jump, 1e-14);
}

TEST(DiagonalizeField, MonotoneSpeedHasNoCrossing) {
  const auto grid = uniform_grid(65);
  const FieldDiagonalization fd = diagonalize_field(string_system(1.0, 1.0), grid);
  EXPECT_FALSE(fd.crossing);
  EXPECT_TRUE(fd.warnings.empty());
  for (std::size_t k = 1; k < fd.splits.size(); ++k)
    EXPECT_GT(fd.splits[k].lambda(0), fd.splits[k - 1].lambda(0));
  EXPECT_LT(fd.max_column_jump, 0.1);
}

TEST(DiagonalizeField, EngineeredCrossingWarns) {
  const auto grid = uniform_grid(64);
  const FieldDiagonalization fd = diagonalize_field(crossing_system(), grid);
  EXPECT_TRUE(fd.crossing);
  ASSERT_FALSE(fd.warnings.empty());
  EXPECT_NE(fd.warnings.front().find("ContinuityWarning"), std::string::npos);
}

TEST(DiagonalizeField, ColumnsArePhaseAligned) {
  const PHSystem s = oracle::random_system(3, 3, oracle::ClassHint::general)
                         .with_h(oracle::random_field(3, 3, 1));
  const FieldDiagonalization fd = diagonalize_field(s, uniform_grid(129));
  ASSERT_FALSE(fd.crossing);
  for (std::size_t k = 1; k < fd.splits.size(); ++k) {
    const ComplexMatrix overlap = fd.splits[k - 1].s_inv.adjoint() * fd.splits[k].s_inv;
    for (Eigen::Index c = 0; c < overlap.cols(); ++c) EXPECT_GT(overlap(c, c).real(), 0.0);
  }
}

TEST(DirectSum, NetworkGenerates) {
  const DirectSumResult r = direct_sum_check(network3());
  EXPECT_TRUE(r.generates);
  EXPECT_NEAR(r.min_singular_value, r.max_singular_value, 1e-12);
}

TEST(DirectSum, StringParallelVectorsFail) {
  EXPECT_FALSE(direct_sum_check(string_with_tension(0.0)).generates);
}

TEST(DirectSum, StringVaryingTensionGenerates) {
  EXPECT_TRUE(direct_sum_check(string_with_tension(1.0)).generates);
}

TEST(DirectSum, TransportNeedsInflowWeight) {
  EXPECT_FALSE(direct_sum_check(transport(0.0, 1.0)).generates);
  EXPECT_TRUE(direct_sum_check(transport(1.0, 5.0)).generates);
}

TEST(DirectSum, RankDeficientIsPrecondition) {
  const PHSystem s = network3().with_wb_tilde(
      real_matrix({{1, 0, 0, 0, 0, 0}, {0, 1, 0, -1, 0, -1}, {1, 1, 0, -1, 0, -1}}));
  EXPECT_THROW(direct_sum_check(s), PreconditionError);
}

TEST(DirectSum, BasisChoiceDoesNotMatter) {
  for (int seed = 0; seed < 40; ++seed) {
    const PHSystem s = oracle::random_system(seed, 3, oracle::ClassHint::general)
                           .with_h(oracle::random_field(seed, 3, 1));
    const EigenSplit a = eigensplit(s, 0.0), b = eigensplit(s, 1.0);
    const BoundaryClosure ortho = boundary_closure(s, a, b, true);
    const BoundaryClosure eig = boundary_closure(s, a, b, false);
    const auto cond = [](const ComplexMatrix& k) {
      const RealVector sv = linalg::singular_values(k);
      return sv(sv.size() - 1) / sv(0);
    };
    EXPECT_EQ(cond(ortho.k) >= 1e-10, cond(eig.k) >= 1e-10) << "seed " << seed;
  }
}

TEST(CheckContraction, TransportCases) {
  EXPECT_TRUE(check_contraction(transport(2, 1)).passes);
  EXPECT_FALSE(check_contraction(transport(1, 2)).passes);
  const ContractionCheck c = check_contraction(transport(1, 0));
  EXPECT_TRUE(c.passes);
  EXPECT_NEAR(c.sigma_form(0, 0).real(), 0.5, 1e-14);
}

TEST(CheckContraction, NetworkFails) {
  const ContractionCheck c = check_contraction(network3());
  EXPECT_FALSE(c.passes);
  EXPECT_TRUE(c.re_p0_nsd);
  EXPECT_TRUE(c.rank_full);
  EXPECT_LT(c.sigma_form_min_eigenvalue, -0.1);
}

TEST(CheckContraction, RankDeficientFails) {
  const PHSystem s = transport(1, 0).with_wb_tilde(real_matrix({{0, 0}}));
  const ContractionCheck c = check_contraction(s);
  EXPECT_FALSE(c.rank_full);
  EXPECT_FALSE(c.passes);
}

TEST(CheckUnitary, TransportCases) {
  EXPECT_TRUE(check_unitary(transport(1, 1)).passes);
  EXPECT_TRUE(check_unitary(transport(1, -1)).passes);
  EXPECT_FALSE(check_unitary(transport(2, 1)).passes);
}

TEST(CheckUnitary, DissipativeP0IsNeverUnitary) {
  for (auto [w1, w0] : {std::pair{1.0, 1.0}, {1.0, -1.0}, {2.0, 1.0}}) {
    const PHSystem t = transport(w1, w0);
    const PHSystem s = PHSystem::create(t.p1(), -identity(1), t.h(), t.wb_tilde());
    EXPECT_FALSE(check_unitary(s).passes);
  }
}

TEST(Classify, TransportSweep) {
  for (auto [w1, w0] : {std::pair{1.0, 0.0}, {2.0, 1.0}, {1.0, 1.0}, {1.0, -1.0}, {1.0, 2.0}, {0.0, 1.0}}) {
    const Verdict v = classify(transport(w1, w0));
    EXPECT_EQ(v.c0_semigroup(), std::optional<bool>(w1 != 0.0)) << w1 << "," << w0;
    EXPECT_EQ(v.contraction, w1 * w1 >= w0 * w0) << w1 << "," << w0;
    EXPECT_EQ(v.unitary_group, w1 * w1 == w0 * w0) << w1 << "," << w0;
    EXPECT_TRUE(v.notes.empty());
  }
}

TEST(Classify, Network) {
  const Verdict v = classify(network3());
  EXPECT_FALSE(v.contraction);
  EXPECT_FALSE(v.unitary_group);
  EXPECT_EQ(v.c0, GenerationStatus::generator);
}

TEST(Classify, RankDeficientIsInconclusive) {
  const Verdict v = classify(transport(1, 0).with_wb_tilde(real_matrix({{0, 0}})));
  EXPECT_EQ(v.c0, GenerationStatus::inconclusive);
  EXPECT_FALSE(v.c0_semigroup().has_value());
  EXPECT_FALSE(v.contraction);
  ASSERT_FALSE(v.notes.empty());
  EXPECT_NE(v.notes.front().find("inconclusive-C0"), std::string::npos);
  EXPECT_TRUE(to_json(v)["c0"].is_null());
}

TEST(Classify, CrossingFieldStillGivesVerdict) {
  const Verdict v = classify(crossing_system());
  EXPECT_EQ(v.c0, GenerationStatus::generator);
  EXPECT_FALSE(v.warnings.empty());
}

TEST(Classify, KinkedGridFieldWarns) {
  const auto field = CoefficientField::grid(
      {0.0, 0.5, 1.0}, {real_matrix({{1.0}}), real_matrix({{2.0}}), real_matrix({{1.0}})});
  const Verdict v = classify(transport(1, 0).with_h(field));
  EXPECT_TRUE(v.contraction);
  EXPECT_FALSE(v.warnings.empty());
}

TEST(Classify, JsonReport) {
  const nlohmann::json j = to_json(classify(network3()));
  EXPECT_EQ(j["contraction"], false);
  EXPECT_EQ(j["unitary"], false);
  EXPECT_EQ(j["c0"], true);
  EXPECT_EQ(j["c0_status"], "generator");
  EXPECT_TRUE(j.contains("witnesses"));
  EXPECT_TRUE(j["warnings"].is_array());
}

TEST(Classify, HamiltonianDoesNotChangeContraction) {
  for (int seed = 0; seed < 60; ++seed) {
    const int n = 1 + seed % 4;
    const auto hint = seed % 2 ? oracle::ClassHint::contraction : oracle::ClassHint::general;
    const PHSystem base = oracle::random_system(seed, n, hint);
    const bool expected = check_contraction(base).passes;
    for (int variant = 0; variant < 3; ++variant) {
      const PHSystem s = base.with_h(oracle::random_field(seed * 7 + variant, n, variant));
      EXPECT_EQ(check_contraction(s).passes, expected) << "seed " << seed;
    }
  }
}

TEST(Classify, InvariantUnderBoundaryRowMixing) {
  std::mt19937_64 rng(17);
  for (int seed = 0; seed < 60; ++seed) {
    const int n = 1 + seed % 4;
    const auto hint = static_cast<oracle::ClassHint>(seed % 3);
    const PHSystem s = oracle::random_system(seed, n, hint);
    const PHSystem mixed = s.with_wb_tilde(well_conditioned(rng, n) * s.wb_tilde());
    const Verdict a = classify(s), b = classify(mixed);
    EXPECT_EQ(a.contraction, b.contraction) << "seed " << seed;
    EXPECT_EQ(a.unitary_group, b.unitary_group) << "seed " << seed;
    EXPECT_EQ(a.c0, b.c0) << "seed " << seed;
  }
}

TEST(Classify, InvariantUnderUnitaryChangeOfState) {
  // x -> U*x maps (P1, P0, H, W̃_B) to (U*P1U, U*P0U, U*HU, W̃_B·diag(U, U)).
  std::mt19937_64 rng(29);
  for (int seed = 0; seed < 40; ++seed) {
    const int n = 1 + seed % 4;
    const auto hint = static_cast<oracle::ClassHint>(seed % 3);
    const PHSystem s = oracle::random_system(seed, n, hint);
    const ComplexMatrix u = random_unitary(rng, n);
    ComplexMatrix big = ComplexMatrix::Zero(2 * n, 2 * n);
    big.topLeftCorner(n, n) = u;
    big.bottomRightCorner(n, n) = u;
    const PHSystem t = PHSystem::create(
        hermitian_part(u.adjoint() * s.p1() * u), u.adjoint() * s.p0() * u,
        CoefficientField::constant(hermitian_part(u.adjoint() * s.h()(0.0) * u)),
        s.wb_tilde() * big);
    const Verdict a = classify(s), b = classify(t);
    EXPECT_EQ(a.contraction, b.contraction) << "seed " << seed;
    EXPECT_EQ(a.unitary_group, b.unitary_group) << "seed " << seed;
    EXPECT_EQ(a.c0, b.c0) << "seed " << seed;
  }
}

TEST(Classify, MonotoneOnRandomSystems) {
  for (int seed = 0; seed < 150; ++seed) {
    const int n = 1 + seed % 4;
    const auto hint = static_cast<oracle::ClassHint>(seed % 3);
    const Verdict v = classify(oracle::random_system(seed, n, hint));
    EXPECT_TRUE(v.monotone()) << "seed " << seed;
    EXPECT_TRUE(v.notes.empty()) << "seed " << seed;
    if (hint == oracle::ClassHint::unitary) EXPECT_TRUE(v.unitary_group) << "seed " << seed;
    if (hint == oracle::ClassHint::contraction) EXPECT_TRUE(v.contraction) << "seed " << seed;
  }
}
