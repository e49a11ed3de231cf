#include <gtest/gtest.h>

#include <numbers>

#include "pgc/channel.hpp"
#include "pgc/linalg.hpp"
#include "pgc/rng.hpp"

using namespace pgc;

namespace {

Mat clock(int n) {
    Mat d = Mat::Zero(n, n);
    for (int j = 0; j < n; ++j) d(j, j) = std::polar(1.0, 2 * std::numbers::pi * j / n);
    return d;
}

Channel random_cp(const Tower& t, const Qfa& q, Rng& r) {
    Element h = q.P(Side::Minus).random(r);
    return Channel::from_y(t, q.transform({Side::Minus, h * h.adjoint()}));
}

}  // namespace

TEST(Channel, MultipliersOfIdentityAndExpectation) {
    for (auto inc : {diagonal_in_full(2), diagonal_in_full(3), scalars_in_full(2), scalars_in_full(3)}) {
        Tower t(inc);
        Qfa q(t);
        const double mu = t.mu();
        auto id = Channel::identity(t), en = Channel::expectation(t);
        EXPECT_LT((id.hat().x - std::pow(mu, 1.5) * q.e2().x).norm_inf(), 1e-10);
        EXPECT_LT((en.hat().x - std::sqrt(mu) * q.one(Side::Minus).x).norm_inf(), 1e-10);
        // y of the identity is 1, y of E_N is e1 (up to the tr2 normalisation)
        EXPECT_LT((id.y().x - q.one(Side::Plus).x).norm_inf(), 1e-10);
    }
}

TEST(Channel, MultiplierAgreesWithTransform) {
    Tower t(diagonal_in_full(3));
    Qfa q(t);
    Rng r(21);
    for (int i = 0; i < 5; ++i) {
        auto phi = random_cp(t, q, r);
        Element muFy = t.mu() * q.fourier(phi.y()).x;
        EXPECT_LT((phi.hat().x - muFy).norm_inf(), 1e-9 * std::max(1.0, muFy.norm_inf()));
        EXPECT_LT((phi.action_from_hat() - phi.action()).norm(), 1e-9 * std::max(1.0, phi.action().norm()));
        EXPECT_LT((phi.action_from_y() - phi.action()).norm(), 1e-9 * std::max(1.0, phi.action().norm()));
    }
}

TEST(Channel, KrausActionMatchesDirectConjugation) {
    Tower t(scalars_in_full(3));
    Rng r(22);
    Mat k1 = r.gaussian(3, 3), k2 = r.gaussian(3, 3);
    auto phi = Channel::from_kraus(t, {k1, k2});
    Element x = t.M().random(r);
    Mat X = t.M().to_full(x);
    Mat direct = k1 * X * k1.adjoint() + k2 * X * k2.adjoint();
    EXPECT_LT((t.M().to_full(phi.apply(x)) - direct).norm(), 1e-10);
}

TEST(Channel, NonBimodularKrausRejected) {
    Tower t(diagonal_in_full(2));
    Mat swap(2, 2);
    swap << 0, 1, 1, 0;
    try {
        Channel::from_kraus(t, {swap});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotBimodular);
    }
}

TEST(Channel, TransposeIsNotCompletelyPositive) {
    Tower t(scalars_in_full(2));
    Mat A = Mat::Zero(4, 4);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) A(c * 2 + r, r * 2 + c) = 1.0;
    auto v = Channel::from_action(t, A).cp_verdict();
    EXPECT_FALSE(v.cp);
    EXPECT_FALSE(v.choi_cp);
    EXPECT_LT(v.hat_min_eig, 0.0);
}

TEST(Channel, CompositionAndAdjoint) {
    Tower t(diagonal_in_full(3));
    Qfa q(t);
    Rng r(23);
    auto a = random_cp(t, q, r), b = random_cp(t, q, r);
    Element x = t.M().random(r);
    EXPECT_LT((a.compose(b).apply(x) - a.apply(b.apply(x))).norm_inf(), 1e-10 * std::max(1.0, x.norm_inf()));
    Element y = t.M().random(r);
    cplx lhs = t.M().inner(y, a.apply(x)), rhs = t.M().inner(a.adjoint().apply(y), x);
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-10);
    EXPECT_TRUE(a.compose(b).is_cp());
}

TEST(Channel, UnitalizeGivesUnitalCp) {
    Tower t(diagonal_in_full(3));
    Qfa q(t);
    Rng r(24);
    auto u = random_cp(t, q, r).unitalize();
    EXPECT_TRUE(u.is_cp());
    EXPECT_LT(u.unital_residual(), 1e-10);
}

TEST(Channel, ProductAndConvolutionOfMultipliers) {
    Tower t(diagonal_in_full(3));
    Qfa q(t);
    Rng r(25);
    auto a = random_cp(t, q, r), b = random_cp(t, q, r);
    // composition multiplies y; channel convolution convolves y
    EXPECT_LT((a.compose(b).y().x - a.y().x * b.y().x).norm_inf(), 1e-9);
    EXPECT_LT((a.convolve(b, q).y().x - q.convolve(a.y(), b.y()).x).norm_inf(), 1e-9);
}

TEST(Channel, DominanceConstantOfIdentityIsIndex) {
    for (auto inc : {diagonal_in_full(3), scalars_in_full(2)}) {
        Tower t(inc);
        auto d = Channel::identity(t).pp_dominance();
        EXPECT_NEAR(d.c, t.mu(), 1e-8 * t.mu());
        EXPECT_TRUE(d.ok);
    }
}

TEST(Channel, KrausRecoveredFromChoi) {
    Tower t(scalars_in_full(2));
    Rng r(26);
    auto phi = Channel::from_kraus(t, {r.gaussian(2, 2), r.gaussian(2, 2)});
    auto again = Channel::from_kraus(t, phi.kraus_from_choi());
    EXPECT_LT((again.action() - phi.action()).norm(), 1e-9);
}

TEST(Channel, ClockConjugationIsUnitalAndTracePreserving) {
    Tower t(diagonal_in_full(4));
    auto phi = Channel::from_kraus(t, {clock(4)});
    EXPECT_TRUE(phi.is_unital());
    EXPECT_TRUE(phi.is_trace_preserving());
    EXPECT_TRUE(phi.is_cp());
}

TEST(Channel, HausdorffDistance) {
    EXPECT_DOUBLE_EQ(hausdorff({1.0, 2.0}, {2.0, 1.0}), 0.0);
    EXPECT_NEAR(hausdorff({0.0}, {0.0, 3.0}), 3.0, 1e-15);
}
