#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pgc/tower.hpp"

namespace pgc {

using ResidualTable = std::map<std::string, double>;

struct BiprojectionCheck {
    bool ok = false;
    double residual = 0.0;       // projection residual of (delta/tr2 p) F(p)
    double loose_residual = 0.0; // projection residual of F(p)/||F(p)||
};

struct ShiftCheck {
    bool ok = false;
    double trace_gap = 0.0;
    double residual = 0.0;
};

struct SumSetResult {
    double S = 0.0;
    double max_trace = 0.0;
    bool inequality = false;
    bool equals_trq = false;
    bool scaled_is_projection = false;
};

struct PeripheralDecomposition {
    Side side = Side::Plus;
    int m = 0;
    double radius = 0.0;
    std::vector<cplx> eigenvalues;  // e^{2 pi i j/m}
    std::vector<TwoBox> q;          // spectral projections in the same order
    bool q1_biprojection = false;
    bool sum_biprojection = false;
    ResidualTable residuals;
    double max_residual() const;
};

struct TwoBiprojectionReport {
    TwoBox q, p, p_alt;
    int m = 0;
    int m_engine = 0;
    std::vector<TwoBox> shifts;  // p_j
    bool conjugates_agree = false;
    ResidualTable residuals;
    double max_residual() const;
};

class Qfa {
public:
    explicit Qfa(const Tower& t, double tol = 1e-8);

    const Tower& tower() const { return t_; }
    double delta() const { return t_.delta(); }
    double calibration() const { return calib_; }
    double isometry_residual() const { return iso_res_; }
    const Mat& fourier_matrix() const { return F_; }

    const MultiMatrixAlgebra& P(Side s) const { return t_.space(s).P; }
    TwoBox make(Side s, const Element& x) const;
    TwoBox from_ambient(Side s, const Element& amb, double* residual = nullptr) const;
    Element to_ambient(const TwoBox& x) const { return t_.space(x.side).to_ambient(x.x); }
    TwoBox one(Side s) const { return {s, P(s).identity()}; }
    TwoBox e1() const { return e1_; }
    TwoBox e2() const { return e2_; }
    TwoBox unit(Side s) const;  // convolution unit: delta e1 or delta e2

    TwoBox fourier(const TwoBox& x) const;
    TwoBox fourier_inv(const TwoBox& x) const;
    TwoBox transform(const TwoBox& x) const;  // plus -> F(x), minus -> F^{-1}(x)
    TwoBox convolve(const TwoBox& a, const TwoBox& b) const;
    TwoBox contragredient(const TwoBox& x) const;

    cplx tr2(const TwoBox& x) const { return P(x.side).trace(x.x); }
    double norm1(const TwoBox& x) const { return P(x.side).norm1(x.x); }
    double norm2(const TwoBox& x) const { return P(x.side).norm2(x.x); }
    double norm_inf(const TwoBox& x) const { return x.x.norm_inf(); }
    double min_eig(const TwoBox& x) const { return P(x.side).min_eig(x.x); }
    bool f_positive(const TwoBox& x, double tol = 1e-9) const;
    TwoBox range_projection(const TwoBox& x, double tol = 1e-10) const;
    std::vector<cplx> eigenvalues(const TwoBox& x) const;
    TwoBox riesz(const TwoBox& x, cplx center, double radius = 1e-7) const;

    BiprojectionCheck is_biprojection(const TwoBox& p) const;
    TwoBox biprojection_generated(const TwoBox& y, bool include_unit = false) const;
    ShiftCheck shift_check(const TwoBox& p, const TwoBox& q, bool right = true) const;
    SumSetResult sum_set(const TwoBox& p, const TwoBox& q) const;

    // normalize = false rescales x by its spectral radius and skips the hypothesis checks
    PeripheralDecomposition peripheral_decomposition(const TwoBox& x, bool enforce = true) const;
    TwoBiprojectionReport two_biprojection_check(const TwoBox& y) const;
    double split_lemma_check(const TwoBox& x, const TwoBox& y, const TwoBox& z, cplx alpha) const;

    // Cesaro oracle for the spectral projection at 1 (period-aligned, one Richardson step)
    TwoBox cesaro_oracle(const TwoBox& x, int m, int n = 1000) const;

private:
    const Tower& t_;
    Mat F_, Finv_;
    double calib_ = 1.0;
    double iso_res_ = 0.0;
    TwoBox e1_, e2_;
};

// smallest m with every value within tol of an m-th root of unity and the index set closed
int fit_root_group(const std::vector<cplx>& values, int max_m, double tol, double* residual = nullptr);

}  // namespace pgc
