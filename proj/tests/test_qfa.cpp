#include <gtest/gtest.h>

#include <numbers>

#include "pgc/channel.hpp"
#include "pgc/rng.hpp"

using namespace pgc;

namespace {

Mat clock(int n) {
    Mat d = Mat::Zero(n, n);
    for (int j = 0; j < n; ++j) d(j, j) = std::polar(1.0, 2 * std::numbers::pi * j / n);
    return d;
}

struct Fixture {
    Tower t;
    Qfa q;
    explicit Fixture(const Inclusion& inc) : t(inc), q(t) {}
};

}  // namespace

TEST(Qfa, TransformOfUnitsAndJonesProjections) {
    for (auto inc : {diagonal_in_full(3), scalars_in_full(2)}) {
        Fixture f(inc);
        const double d = f.t.delta();
        EXPECT_LT((f.q.fourier(f.q.e1()).x - (1.0 / d) * f.q.one(Side::Minus).x).norm_inf(), 1e-12);
        EXPECT_LT((f.q.fourier(f.q.one(Side::Plus)).x - d * f.q.e2().x).norm_inf(), 1e-12);
        EXPECT_NEAR(f.q.tr2(f.q.one(Side::Plus)).real(), f.t.mu(), 1e-12);
        EXPECT_NEAR(f.q.tr2(f.q.e1()).real(), 1.0, 1e-12);
    }
}

TEST(Qfa, PlancherelAndInverse) {
    Fixture f(diagonal_in_full(3));
    Rng r(11);
    for (int i = 0; i < 20; ++i) {
        TwoBox x{Side::Plus, f.q.P(Side::Plus).random(r)};
        EXPECT_NEAR(f.q.norm2(f.q.fourier(x)), f.q.norm2(x), 1e-12);
        EXPECT_LT((f.q.fourier_inv(f.q.fourier(x)).x - x.x).norm_inf(), 1e-12);
    }
    EXPECT_LT(f.q.isometry_residual(), 1e-12);
}

TEST(Qfa, ConvolutionUnitAndJonesSquare) {
    Fixture f(diagonal_in_full(3));
    Rng r(12);
    TwoBox x{Side::Plus, f.q.P(Side::Plus).random(r)};
    EXPECT_LT((f.q.convolve(f.q.unit(Side::Plus), x).x - x.x).norm_inf(), 1e-12);
    EXPECT_LT((f.q.convolve(x, f.q.unit(Side::Plus)).x - x.x).norm_inf(), 1e-12);
    // e1 * e1 = e1 / delta
    auto ee = f.q.convolve(f.q.e1(), f.q.e1());
    EXPECT_LT((ee.x - (1.0 / f.t.delta()) * f.q.e1().x).norm_inf(), 1e-12);
}

TEST(Qfa, SchurProductOfPositivesIsPositive) {
    Fixture f(scalars_in_full(2));
    Rng r(13);
    for (Side s : {Side::Plus, Side::Minus})
        for (int i = 0; i < 10; ++i) {
            Element a = f.q.P(s).random(r), b = f.q.P(s).random(r);
            auto c = f.q.convolve({s, a * a.adjoint()}, {s, b * b.adjoint()});
            EXPECT_GT(f.q.min_eig(c), -1e-10 * f.q.norm_inf(c));
        }
}

TEST(Qfa, ContragredientIsPositiveInvolution) {
    Fixture f(diagonal_in_full(3));
    Rng r(14);
    Element a = f.q.P(Side::Plus).random(r);
    TwoBox p{Side::Plus, a * a.adjoint()};
    auto c = f.q.contragredient(p);
    EXPECT_GT(f.q.min_eig(c), -1e-10);
    EXPECT_LT((f.q.contragredient(c).x - p.x).norm_inf(), 1e-10);
}

TEST(Qfa, BiprojectionsAndShifts) {
    Fixture f(diagonal_in_full(3));
    EXPECT_TRUE(f.q.is_biprojection(f.q.e1()).ok);
    EXPECT_TRUE(f.q.is_biprojection(f.q.one(Side::Plus)).ok);
    EXPECT_TRUE(f.q.shift_check(f.q.e1(), f.q.e1(), true).ok);
    // the exact multiple tr2(p)/delta is required; a generic projection fails
    Rng r(15);
    TwoBox p = f.q.make(Side::Plus, f.q.P(Side::Plus).random_projection(r));
    EXPECT_FALSE(f.q.is_biprojection(p).ok);
}

TEST(Qfa, SumSetExamples) {
    Fixture f(diagonal_in_full(3));
    auto s = f.q.sum_set(f.q.e1(), f.q.e1());
    EXPECT_NEAR(s.S, 1.0, 1e-10);
    EXPECT_TRUE(s.scaled_is_projection);
    EXPECT_TRUE(s.equals_trq);
    // 1 * q has full range when q has full central support
    EXPECT_NEAR(f.q.sum_set(f.q.one(Side::Plus), f.q.e1()).S, f.t.mu(), 1e-8);
    EXPECT_NEAR(f.q.sum_set(f.q.one(Side::Plus), f.q.one(Side::Plus)).S, f.t.mu(), 1e-8);
}

TEST(Qfa, SumSetNeedsIrreducibility) {
    // N' cap M = D_3 is not trivial: 1 * q can miss most of the range
    Fixture f(diagonal_in_full(3));
    Rng r(16);
    int below = 0;
    for (int i = 0; i < 20; ++i) {
        TwoBox q = f.q.make(Side::Plus, f.q.P(Side::Plus).random_projection(r));
        if (f.q.tr2(q).real() < 1e-9) continue;
        if (f.q.sum_set(f.q.one(Side::Plus), q).S < f.t.mu() - 1e-6) ++below;
    }
    EXPECT_GT(below, 0);
}

TEST(Qfa, HausdorffYoungFailsOnFiniteInclusions) {
    // matrix units of N' cap M1 for D_3: ||F(x)|| reaches 3 tr2|x| / delta
    Fixture f(diagonal_in_full(3));
    double worst = 0.0;
    for (const auto& u : f.q.P(Side::Plus).matrix_units()) {
        TwoBox x{Side::Plus, u};
        worst = std::max(worst, f.q.norm_inf(f.q.fourier(x)) / (f.q.norm1(x) / f.q.delta()));
    }
    EXPECT_NEAR(worst, 3.0, 1e-9);
}

TEST(Qfa, PeripheralDecompositionOfClockConjugation) {
    for (int n : {2, 3, 4}) {
        Fixture f(diagonal_in_full(n));
        auto phi = Channel::from_kraus(f.t, {clock(n)});
        auto pd = f.q.peripheral_decomposition(phi.y());
        EXPECT_EQ(pd.m, n);
        EXPECT_TRUE(pd.q1_biprojection);
        EXPECT_TRUE(pd.sum_biprojection);
        EXPECT_LT(pd.max_residual(), 1e-6);
        EXPECT_LT(pd.residuals.at("shift_law"), 1e-7);
        EXPECT_LT(pd.residuals.at("group_law"), 1e-7);
    }
}

TEST(Qfa, PeripheralDecompositionRejectsUnnormalized) {
    Fixture f(diagonal_in_full(3));
    TwoBox two{Side::Plus, 2.0 * f.q.e1().x};
    EXPECT_THROW(f.q.peripheral_decomposition(two, true), Error);
}

TEST(Qfa, TwoBiprojectionCases) {
    Fixture f(diagonal_in_full(3));
    auto phi = Channel::from_kraus(f.t, {clock(3)});
    auto pd = f.q.peripheral_decomposition(phi.y());
    // distinct positive weights: y * ybar charges every shift, so the structure collapses
    Element y = 0.5 * pd.q[0].x + 0.3 * pd.q[1].x + 0.2 * pd.q[2].x;
    auto lit = f.q.two_biprojection_check({Side::Plus, y});
    EXPECT_EQ(lit.m, 1);
    EXPECT_LT(lit.max_residual(), 1e-7);
    auto single = f.q.two_biprojection_check(pd.q[1]);
    EXPECT_EQ(single.m, 3);
    EXPECT_LT(single.max_residual(), 1e-7);
    EXPECT_EQ(f.q.two_biprojection_check(f.q.e1()).m, 1);
    EXPECT_EQ(f.q.two_biprojection_check(f.q.one(Side::Plus)).m, 1);
}

TEST(Qfa, CesaroOracleMatchesRiesz) {
    Fixture f(diagonal_in_full(3));
    auto phi = Channel::from_kraus(f.t, {clock(3)});
    auto pd = f.q.peripheral_decomposition(phi.y());
    EXPECT_LT((f.q.cesaro_oracle(phi.y(), 3).x - pd.q[0].x).norm_inf(), 1e-6);
}

TEST(Qfa, NonFactorTopRefusesTransform) {
    Eigen::MatrixXi lam(2, 2);
    lam << 1, 1, 1, 2;
    Tower t(make_inclusion({1, 1}, {2, 3}, lam));
    try {
        Qfa q(t);
        FAIL() << "expected FourierNotIsometry";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::FourierNotIsometry);
    }
}

TEST(Qfa, RootGroupFit) {
    const cplx w = std::polar(1.0, 2 * std::numbers::pi / 3);
    EXPECT_EQ(fit_root_group({1.0, w, w * w}, 10, 1e-9), 3);
    EXPECT_EQ(fit_root_group({1.0}, 10, 1e-9), 1);
    EXPECT_EQ(fit_root_group({1.0, cplx(0, 1)}, 10, 1e-9), 0);  // not closed
}
