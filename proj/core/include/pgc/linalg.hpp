#pragma once

#include <functional>

#include "pgc/common.hpp"

// dense helpers shared by every module
namespace pgc::la {

Mat hermitian_part(const Mat& a);
Mat kron(const Mat& a, const Mat& b);
double opnorm(const Mat& a);
double min_eig_herm(const Mat& a);

// orthogonal projection onto the range; eigenvalues below tol*max(1,||a||) count as zero
Mat range_projection(const Mat& a, double tol = 1e-10);
Mat sqrt_psd(const Mat& a);
Mat abs(const Mat& a);
// partial isometry of the polar decomposition a = v|a|
Mat polar_part(const Mat& a, double tol = 1e-10);
// f applied through the spectral decomposition of a normal matrix
Mat normal_calculus(const Mat& a, const std::function<cplx(cplx)>& f);
bool is_normal(const Mat& a, double tol = 1e-9);

// orthonormal basis (columns) of span of the given columns
Mat orth(const Mat& cols, double tol = 1e-10);
// orthonormal basis (columns) of the null space
Mat null_space(const Mat& a, double tol = 1e-10);
// operator-norm distance between orthogonal projections onto two column spans
double subspace_distance(const Mat& a, const Mat& b, double tol = 1e-10);

struct Cluster {
    cplx center;
    std::vector<int> members;  // indices into the eigenvalue list
};
std::vector<Cluster> cluster_eigenvalues(const Vec& ev, double radius);

// spectral (Riesz) projection of a onto the generalized eigenspace of the
// eigenvalues selected by pick; ordered Schur form + Sylvester solve
Mat riesz_projection(const Mat& a, const std::function<bool(cplx)>& pick);
Mat riesz_projection_at(const Mat& a, cplx center, double radius = 1e-7);
Vec eigenvalues(const Mat& a);

// orthonormal basis (columns, length d) of the commutant of a family of d x d matrices
Mat commutant_basis(const std::vector<Mat>& gens, double tol = 1e-10);

}  // namespace pgc::la
