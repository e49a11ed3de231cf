#include <gtest/gtest.h>

#include <numbers>

#include "pgc/linalg.hpp"
#include "pgc/rng.hpp"
#include "pgc/spectral.hpp"

using namespace pgc;

namespace {

Mat clock(int n) {
    Mat d = Mat::Zero(n, n);
    for (int j = 0; j < n; ++j) d(j, j) = std::polar(1.0, 2 * std::numbers::pi * j / n);
    return d;
}

Mat shift(int n) {
    Mat s = Mat::Zero(n, n);
    for (int j = 0; j < n; ++j) s((j + 1) % n, j) = 1.0;
    return s;
}

}  // namespace

TEST(Spectral, SpectrumRoutesAgree) {
    Tower t(scalars_in_full(3));
    Rng r(31);
    for (int i = 0; i < 10; ++i) {
        auto phi = Channel::from_kraus(t, {r.gaussian(3, 3), r.gaussian(3, 3)});
        EXPECT_LT(channel_spectrum(phi).route_residual, 1e-8);
    }
}

TEST(Spectral, ClockConjugationEigenvalueLattice) {
    // eigenvalue of e_jk is omega^{j-k}: each n-th root of unity with multiplicity n
    Tower t(diagonal_in_full(4));
    auto sp = channel_spectrum(Channel::from_kraus(t, {clock(4)}));
    EXPECT_NEAR(sp.radius, 1.0, 1e-12);
    EXPECT_EQ(sp.peripheral.size(), 4u);
    EXPECT_EQ(sp.action_eigenvalues.size(), 16u);
}

TEST(Spectral, PhaseGroupOfClockConjugation) {
    for (int n = 2; n <= 5; ++n) {
        Tower t(diagonal_in_full(n));
        Qfa q(t);
        auto c = certify_phase_group(Channel::from_kraus(t, {clock(n)}), &q);
        EXPECT_EQ(c.m, n);
        EXPECT_TRUE(c.fixed_equals_N);
        EXPECT_EQ(c.relirr.mode, "proof");
        ASSERT_EQ(c.unitaries.size(), static_cast<size_t>(n));
        for (const auto& [k, v] : c.verdicts) {
            if (k == "relative_irreducibility") continue;
            EXPECT_EQ(v, "pass") << k;
        }
    }
}

TEST(Spectral, ShiftConjugationSkipsUnitaries) {
    Tower t(scalars_in_full(3));
    Qfa q(t);
    auto c = certify_phase_group(Channel::from_kraus(t, {shift(3)}), &q);
    EXPECT_EQ(c.m, 3);
    EXPECT_EQ(c.fixed.basis.cols(), 3);  // circulants
    EXPECT_FALSE(c.fixed_is_factor);
    EXPECT_EQ(c.unitary_skipped, "fixed algebra not a factor");
    EXPECT_EQ(c.relirr.mode, "disproof");
}

TEST(Spectral, ExpectationHasTrivialPhaseGroup) {
    Tower t(diagonal_in_full(3));
    Qfa q(t);
    auto c = certify_phase_group(Channel::expectation(t), &q);
    EXPECT_EQ(c.m, 1);
    EXPECT_TRUE(c.fixed_equals_N);
    EXPECT_TRUE(c.relirr.flag);
}

TEST(Spectral, IdentityOverProperInclusionIsReducible) {
    Tower t(diagonal_in_full(3));
    Qfa q(t);
    auto ri = relative_irreducibility(Channel::identity(t), &q, 7);
    EXPECT_FALSE(ri.flag);
    EXPECT_EQ(ri.mode, "disproof");
    ASSERT_TRUE(ri.witness.has_value());
    const Element& p = *ri.witness;
    EXPECT_TRUE(t.M().is_projection(p, 1e-8));
    EXPECT_GT((p - t.N_in_M().apply(t.E_N(p))).norm_inf(), 1e-6);
}

TEST(Spectral, IrreducibleShiftMixture) {
    Tower t(scalars_in_full(3));
    Qfa q(t);
    const Mat S = shift(3);
    auto phi = Channel::from_kraus(t, {std::sqrt(0.6) * S, std::sqrt(0.4) * S * clock(3)});
    auto c = certify_phase_group(phi, &q);
    EXPECT_EQ(c.m, 3);
    for (const auto& e : c.eigenspaces) EXPECT_EQ(e.basis.cols(), 1);
    EXPECT_TRUE(c.fixed_is_factor);
    EXPECT_EQ(c.unitaries.size(), 3u);
}

TEST(Spectral, InvariantStateOfUnitalMap) {
    Tower t(scalars_in_full(2));
    Rng r(32);
    Qfa q(t);
    Element h = q.P(Side::Minus).random(r);
    auto phi = Channel::from_y(t, q.transform({Side::Minus, h * h.adjoint()})).unitalize();
    auto s = invariant_state(phi);
    ASSERT_TRUE(s.found);
    EXPECT_NEAR(t.M().trace(s.h).real(), 1.0, 1e-10);
    Element x = t.M().random(r);
    // omega(Phi(x)) = omega(x)
    EXPECT_NEAR(std::abs(t.M().trace(s.h * phi.apply(x)) - t.M().trace(s.h * x)), 0.0, 1e-9);
}

TEST(Spectral, CesaroMeanOfRotation) {
    // rotation by omega has Cesaro limit 0 on the nontrivial eigenvector
    const cplx w = std::polar(1.0, 2 * std::numbers::pi / 3);
    Mat a = Mat::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = w;
    Mat c = cesaro_mean(a, 3);
    EXPECT_NEAR(std::abs(c(0, 0) - 1.0), 0.0, 1e-12);
    EXPECT_LT(std::abs(c(1, 1)), 1e-6);
}

TEST(Spectral, CesaroFixedSpaceOfProjectionMap) {
    Tower t(scalars_in_full(2));
    Mat e = Mat::Zero(2, 2);
    e(0, 0) = 1.0;
    auto fs = cesaro_fixed(Channel::from_kraus(t, {e}));
    EXPECT_LT(fs.residuals.at("cesaro_vs_riesz"), 1e-6);
    EXPECT_LT(fs.residuals.at("zeta_fixed"), 1e-10);
}

TEST(Spectral, PerronVectorOfCpMap) {
    Tower t(diagonal_in_full(3));
    Qfa q(t);
    Rng r(33);
    Element h = q.P(Side::Minus).random(r);
    auto phi = Channel::from_y(t, q.transform({Side::Minus, h * h.adjoint()}));
    auto pv = perron_vector(phi, &q);
    EXPECT_GT(pv.r, 0.0);
    EXPECT_GE(pv.min_eig, -1e-10);
    EXPECT_LT(pv.residual, 1e-8);
    EXPECT_NEAR(pv.r, channel_spectrum(phi).radius, 1e-8);
}

TEST(Spectral, CommutingPfChannel) {
    Tower t(scalars_in_full(3));
    Qfa q(t);
    const Mat S = shift(3);
    auto phi = Channel::from_kraus(t, {std::sqrt(0.7) * S, std::sqrt(0.3) * S * clock(3)});
    auto pf = commuting_pf_channel(phi, &q);
    EXPECT_NEAR(pf.r, 1.0, 1e-10);
    EXPECT_TRUE(q.f_positive(pf.z, 1e-8));
}

TEST(Spectral, CollatzWielandt) {
    Tower t(diagonal_in_full(3));
    auto phi = Channel::from_kraus(t, {clock(3)});
    CwRegime reg;
    reg.trace_preserving = true;
    // fixed points give equality
    auto eq = collatz_wielandt_check(phi, t.N_in_M().apply(t.N().identity()), reg);
    EXPECT_EQ(eq.verdict, CwVerdict::Equality);
    EXPECT_THROW(collatz_wielandt_check(phi, t.M().identity(), CwRegime{}), Error);
}
