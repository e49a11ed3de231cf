#pragma once

#include <optional>
#include <vector>

#include "pgc/qfa.hpp"

namespace pgc {

struct CpVerdict {
    bool cp = false;
    double hat_min_eig = 0.0;   // relative to ||hat||
    double choi_min_eig = 0.0;  // relative to ||Choi||
    bool choi_cp = false;
};

struct DominanceResult {
    double c = 0.0;
    double dominance_margin = 0.0;  // min eig of c*hat(E_N) - hat(Phi), relative
    double norm_bound_slack = 0.0;  // sqrt(mu) c - ||hat||
    double cb_norm = 0.0;           // ||Phi(1)|| for CP maps
    double cb_margin = 0.0;         // min eig of mu*cb*hat(E_N) - hat(Phi), relative
    bool ok = false;
};

// N-bimodule map on M, kept as its action on L2(M) together with y in N' cap M1
class Channel {
public:
    static Channel from_action(const Tower& t, const Mat& action);
    // Kraus operators act on the defining representation of M (block diagonal sum)
    static Channel from_kraus(const Tower& t, const std::vector<Mat>& kraus);
    static Channel from_y(const Tower& t, const TwoBox& y);
    static Channel identity(const Tower& t);
    static Channel expectation(const Tower& t);  // E_N

    const Tower& tower() const { return *t_; }
    const Mat& action() const { return A_; }
    const TwoBox& y() const { return y_; }
    const std::optional<std::vector<Mat>>& kraus() const { return kraus_; }
    double bimodularity_residual() const { return bimod_res_; }
    double y_residual() const { return y_res_; }

    Element apply(const Element& x) const;
    Element apply_adjoint(const Element& x) const;
    Element unit_image() const { return apply(t_->M().identity()); }
    double unital_residual() const;
    double trace_preserving_residual() const;
    bool is_unital(double tol = 1e-8) const { return unital_residual() < tol; }
    bool is_trace_preserving(double tol = 1e-8) const { return trace_preserving_residual() < tol; }

    // Fourier multiplier from the spanning-set relation (second tower level required)
    const TwoBox& hat() const;
    double hat_residual() const;  // least-squares residual of the multiplier relation
    // action rebuilt from hat: mu^{3/2} E_M(E_M1(e2 e1 hat x e1 e2))
    Mat action_from_hat() const;
    Mat action_from_y() const;

    Mat choi_block(int a) const;
    CpVerdict cp_verdict(double tol = 1e-9) const;
    bool is_cp(double tol = 1e-9) const;  // throws OracleDisagreement when routes differ

    Channel compose(const Channel& other) const;  // this o other
    Channel adjoint() const;
    Channel convolve(const Channel& other, const Qfa& q) const;
    Channel unitalize() const;
    Channel scaled(double s) const;
    Channel plus(const Channel& other, double s = 1.0) const;  // this + s*other

    DominanceResult pp_dominance() const;
    std::vector<Mat> kraus_from_choi(double tol = 1e-12) const;  // factor M only

private:
    Channel() = default;
    void finish();

    const Tower* t_ = nullptr;
    Mat A_;
    TwoBox y_;
    std::optional<std::vector<Mat>> kraus_;
    double bimod_res_ = 0.0;
    double y_res_ = 0.0;
    mutable std::optional<TwoBox> hat_;
    mutable double hat_res_ = 0.0;
};

// eigenvalues of the GNS action and of y, with the Hausdorff distance between them
double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b);

}  // namespace pgc
