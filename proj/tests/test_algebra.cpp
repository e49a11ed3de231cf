#include <gtest/gtest.h>

#include "pgc/algebra.hpp"
#include "pgc/linalg.hpp"
#include "pgc/rng.hpp"
#include "pgc/tower.hpp"

using namespace pgc;

TEST(Rng, SplitMixReferenceStream) {
    // published SplitMix64 outputs for seed 0
    Rng r(0);
    EXPECT_EQ(r.next_u64(), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(r.next_u64(), 0x6e789e6aa1b965f4ULL);
}

TEST(Rng, UniformInUnitInterval) {
    Rng r(42);
    for (int i = 0; i < 1000; ++i) {
        double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(Rng, SplitStreamsAreReproducible) {
    Rng a(9), b(9);
    EXPECT_EQ(a.split(3).next_u64(), b.split(3).next_u64());
    EXPECT_NE(a.split(3).next_u64(), a.split(4).next_u64());
}

TEST(Algebra, TraceAndGnsInnerProduct) {
    MultiMatrixAlgebra A({1, 2}, {0.5, 0.25});
    EXPECT_NEAR(A.trace(A.identity()).real(), 1.0, 1e-15);
    EXPECT_EQ(A.dim(), 5);
    EXPECT_EQ(A.total_size(), 3);
    Rng r(1);
    Element x = A.random(r), y = A.random(r);
    EXPECT_NEAR(std::abs(A.inner(x, y) - A.to_gns(x).dot(A.to_gns(y))), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(A.trace(x * y) - A.trace(y * x)), 0.0, 1e-12);
    EXPECT_LT((A.from_gns(A.to_gns(x)) - x).norm_inf(), 1e-14);
}

TEST(Algebra, UnnormalizedTraceRejected) {
    EXPECT_THROW(MultiMatrixAlgebra({2}, {1.0}), Error);
}

TEST(Algebra, LeftRightOperatorsCommute) {
    MultiMatrixAlgebra A({2, 1}, {0.4, 0.2});
    Rng r(2);
    Element x = A.random(r), y = A.random(r);
    Mat L = A.left_op(x), R = A.right_op(y);
    EXPECT_LT((L * R - R * L).norm(), 1e-12);
    EXPECT_LT((L * A.to_gns(y) - A.to_gns(x * y)).norm(), 1e-12);
}

TEST(Algebra, FunctionalCalculus) {
    MultiMatrixAlgebra A({3}, {1.0 / 3});
    Rng r(3);
    Element x = A.random(r);
    Element p = x * x.adjoint();
    Element s = A.sqrt_psd(p);
    EXPECT_LT((s * s - p).norm_inf(), 1e-10);
    Element u = A.polar_part(x);
    EXPECT_LT((u.adjoint() * u - A.identity()).norm_inf(), 1e-10);
    Element q = A.random_projection(r);
    EXPECT_TRUE(A.is_projection(q));
}

TEST(Algebra, CommutantOfDiagonalIsDiagonal) {
    // commutant of D_3 inside M_3 is D_3 itself
    MultiMatrixAlgebra M({3}, {1.0 / 3});
    std::vector<Element> fam;
    for (int j = 0; j < 3; ++j) fam.push_back(M.unit(0, j, j));
    Mat c = commutant_in(M, fam);
    EXPECT_EQ(c.cols(), 3);
    auto info = analyze_subalgebra(M, c);
    EXPECT_EQ(info.dim, 3);
    EXPECT_FALSE(info.is_factor);
}

TEST(Algebra, StarAlgebraCheckRejectsNonAlgebra) {
    MultiMatrixAlgebra M({2}, {0.5});
    Mat b = M.gns_matrix({M.identity(), M.unit(0, 0, 1)});
    EXPECT_THROW(check_star_algebra(M, la::orth(b)), Error);
}

TEST(Linalg, RieszProjectionOfJordanBlock) {
    Mat a(3, 3);
    a << 1, 1, 0, 0, 1, 0, 0, 0, 2;
    Mat p = la::riesz_projection_at(a, 1.0, 1e-7);
    EXPECT_NEAR(p.trace().real(), 2.0, 1e-10);
    EXPECT_LT((p * p - p).norm(), 1e-10);
    EXPECT_LT((a * p - p * a).norm(), 1e-10);
}

TEST(Embedding, RecoveredFromImages) {
    // C^2 -> M_3 with multiplicities (1, 2), conjugated by a unitary
    MultiMatrixAlgebra M({3}, {1.0 / 3});
    Rng r(5);
    Mat U = la::polar_part(r.gaussian(3, 3));
    Mat p0 = Mat::Zero(3, 3);
    p0(0, 0) = 1;
    Mat p1 = Mat::Identity(3, 3) - p0;
    std::vector<std::vector<Element>> images = {{M.from_full(U * p0 * U.adjoint())},
                                                {M.from_full(U * p1 * U.adjoint())}};
    Embedding e = embedding_from_images({1, 1}, {3}, images);
    Eigen::MatrixXi lam = e.inclusion_matrix();
    EXPECT_EQ(lam(0, 0) + lam(1, 0), 3);
    EXPECT_EQ(std::min(lam(0, 0), lam(1, 0)), 1);
    MultiMatrixAlgebra N({1, 1}, {0.5, 0.5});
    for (int i = 0; i < 2; ++i)
        EXPECT_LT((e.apply(N.unit(i, 0, 0)) - images[i][0]).norm_inf(), 1e-9);
}

TEST(Embedding, NonUnitalImagesRejected) {
    MultiMatrixAlgebra M({2}, {0.5});
    std::vector<std::vector<Element>> images = {{M.unit(0, 0, 0)}};
    EXPECT_THROW(embedding_from_images({1}, {2}, images), Error);
}
