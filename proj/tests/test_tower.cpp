#include <gtest/gtest.h>

#include "pgc/algebra.hpp"
#include "pgc/rng.hpp"
#include "pgc/tower.hpp"

using namespace pgc;

namespace {

// N' cap M1 by brute force: commutant of the image of N inside M1
int brute_relative_commutant(const Tower& t) {
    std::vector<Element> fam;
    for (const auto& u : t.N().matrix_units()) fam.push_back(t.N_in_M1().apply(u));
    return static_cast<int>(commutant_in(t.M1(), fam).cols());
}

}  // namespace

TEST(Tower, IndexOfStandardInclusions) {
    for (int n = 2; n <= 4; ++n) {
        Tower d(diagonal_in_full(n));
        EXPECT_NEAR(d.mu(), n, 1e-12);
        EXPECT_NEAR(d.lambda(), 1.0 / n, 1e-12);
        Tower s(scalars_in_full(n));
        EXPECT_NEAR(s.mu(), n * n, 1e-12);
    }
    Tower e(equal_inclusion({2, 1}));
    EXPECT_NEAR(e.mu(), 1.0, 1e-12);
}

TEST(Tower, BratteliIndexIsSquaredNorm) {
    // symmetric lam = [[1,1],[1,2]] has norm (3 + sqrt 5) / 2
    Eigen::MatrixXi lam(2, 2);
    lam << 1, 1, 1, 2;
    Tower t(make_inclusion({1, 1}, {2, 3}, lam));
    const double top = (3.0 + std::sqrt(5.0)) / 2.0;
    EXPECT_NEAR(t.mu(), top * top, 1e-10);
    EXPECT_TRUE(t.markov());
}

TEST(Tower, RelativeCommutantDimensions) {
    // D_n: N' cap M1 = D_n (x) D_n; C in M_n: all of M_{n^2}
    for (int n = 2; n <= 3; ++n) {
        Tower d(diagonal_in_full(n));
        EXPECT_EQ(d.dim_plus(), n * n);
        EXPECT_EQ(d.dim_minus(), n * n);
        EXPECT_EQ(brute_relative_commutant(d), n * n);
    }
    Tower s(scalars_in_full(2));
    EXPECT_EQ(s.dim_plus(), 16);
    EXPECT_EQ(brute_relative_commutant(s), 16);
}

TEST(Tower, JonesProjectionRelations) {
    Tower t(diagonal_in_full(3));
    const Element& e1 = t.e1();
    EXPECT_TRUE(t.M1().is_projection(e1));
    EXPECT_NEAR(t.M1().trace(e1).real(), t.lambda(), 1e-12);
    Rng r(4);
    Element x = t.M().random(r);
    Element lhs = e1 * t.M_in_M1().apply(x) * e1;
    Element rhs = t.M_in_M1().apply(t.N_in_M().apply(t.E_N(x))) * e1;
    EXPECT_LT((lhs - rhs).norm_inf(), 1e-12);
    Element e2 = t.e2();
    EXPECT_LT((e2 * t.M1_in_M2().apply(e1) * e2 - t.lambda() * e2).norm_inf(), 1e-12);
}

TEST(Tower, ConditionalExpectationIsBimodularAndTracePreserving) {
    Tower t(scalars_in_full(3));
    Rng r(6);
    Element x = t.M().random(r);
    EXPECT_NEAR(std::abs(t.N().trace(t.E_N(x)) - t.M().trace(x)), 0.0, 1e-12);
    Tower d(diagonal_in_full(3));
    Element y = d.M().random(r);
    Element a = d.N().random(r);
    Element lhs = d.E_N(d.N_in_M().apply(a) * y);
    EXPECT_LT((lhs - a * d.E_N(y)).norm_inf(), 1e-12);
}

TEST(Tower, PimsnerPopaBasis) {
    for (auto inc : {diagonal_in_full(3), scalars_in_full(2)}) {
        Tower t(inc);
        EXPECT_NEAR(t.pp_index_sum(), t.mu(), 1e-10);
        EXPECT_LT(t.pp_reconstruction_residual(), 1e-10);
    }
}

TEST(Tower, NonMarkovTraceRejected) {
    Eigen::MatrixXi lam(2, 2);
    lam << 1, 1, 1, 2;
    EXPECT_THROW(Tower(make_inclusion({1, 1}, {2, 3}, lam, {}, {0.2, 0.2})), Error);
}

TEST(Tower, InvalidInclusionMatrixRejected) {
    Eigen::MatrixXi lam(1, 1);
    lam << 2;
    EXPECT_THROW(make_inclusion({2}, {3}, lam), Error);  // 2 * 2 != 3
}
