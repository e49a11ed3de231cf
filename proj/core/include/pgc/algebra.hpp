#pragma once

#include <string>
#include <vector>

#include "pgc/common.hpp"

namespace pgc {

class Rng;

// element of a multi-matrix algebra: one square block per summand
struct Element {
    std::vector<Mat> blocks;

    Element() = default;
    explicit Element(std::vector<Mat> b) : blocks(std::move(b)) {}

    int num_blocks() const { return static_cast<int>(blocks.size()); }
    bool same_shape(const Element& o) const;
    Element adjoint() const;
    Element hermitian_part() const;
    double norm_inf() const;
    double frob() const;  // unweighted Hilbert-Schmidt norm over all blocks

    Element& operator+=(const Element& o);
    Element& operator-=(const Element& o);
    Element& operator*=(cplx s);
};

Element operator+(Element a, const Element& b);
Element operator-(Element a, const Element& b);
Element operator*(const Element& a, const Element& b);
Element operator*(cplx s, Element a);
Element operator*(double s, Element a);

class MultiMatrixAlgebra {
public:
    MultiMatrixAlgebra() = default;
    MultiMatrixAlgebra(std::vector<int> sizes, std::vector<double> weights,
                       std::vector<std::string> labels = {});
    // trace with arbitrary total mass (two-box spaces carry tr2(1) = mu)
    static MultiMatrixAlgebra with_weights(std::vector<int> sizes, std::vector<double> weights);

    int num_blocks() const { return static_cast<int>(sizes_.size()); }
    int block_size(int i) const { return sizes_[i]; }
    const std::vector<int>& sizes() const { return sizes_; }
    const std::vector<double>& weights() const { return weights_; }
    double weight(int i) const { return weights_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }
    int total_size() const;   // size of the defining representation
    int dim() const;          // sum of n_i^2
    int gns_offset(int i) const { return gns_off_[i]; }
    bool is_factor() const { return num_blocks() == 1; }

    Element zero() const;
    Element identity() const;
    Element unit(int block, int r, int c) const;
    std::vector<Element> matrix_units() const;  // block, row, column order
    bool owns(const Element& x) const;
    void check(const Element& x) const;         // throws OwnerMismatch

    cplx trace(const Element& x) const;
    cplx inner(const Element& x, const Element& y) const;  // tau(x* y)
    double norm1(const Element& x) const;
    double norm2(const Element& x) const;
    double norm_inf(const Element& x) const { return x.norm_inf(); }

    // GNS space L2(A, tau): index off_i + r*n_i + c, value sqrt(w_i) x_rc
    Vec to_gns(const Element& x) const;
    Element from_gns(const Vec& v) const;
    Mat left_op(const Element& x) const;
    Mat right_op(const Element& x) const;
    Vec modular_conj(const Vec& v) const;  // J x Omega = x* Omega

    Mat to_full(const Element& x) const;
    Element from_full(const Mat& m, double tol = 1e-10) const;

    double min_eig(const Element& x) const;
    bool is_projection(const Element& x, double tol = 1e-9) const;
    Element range_projection(const Element& x, double tol = 1e-10) const;
    Element sqrt_psd(const Element& x) const;
    Element abs(const Element& x) const;
    Element polar_part(const Element& x, double tol = 1e-10) const;
    Element inverse(const Element& x) const;

    Element random(Rng& rng) const;
    Element random_hermitian(Rng& rng) const;
    Element random_projection(Rng& rng) const;

    // columns of a GNS matrix as elements
    std::vector<Element> elements_of(const Mat& gns_cols) const;
    Mat gns_matrix(const std::vector<Element>& xs) const;

private:
    void init(bool check_normalized);

    std::vector<int> sizes_;
    std::vector<double> weights_;
    std::vector<std::string> labels_;
    std::vector<int> gns_off_;
};

// spans of elements regarded as subspaces of L2(A)
struct SubalgebraInfo {
    int dim = 0;
    Mat center;   // GNS columns spanning the center
    bool is_factor = false;
};

// commutant of the family inside A, as orthonormal GNS columns
Mat commutant_in(const MultiMatrixAlgebra& a, const std::vector<Element>& family, double tol = 1e-9);
// throws NotAnAlgebra if the span is not closed under products and adjoints
void check_star_algebra(const MultiMatrixAlgebra& a, const Mat& basis, double tol = 1e-8);
SubalgebraInfo analyze_subalgebra(const MultiMatrixAlgebra& a, const Mat& basis, double tol = 1e-9);

}  // namespace pgc
