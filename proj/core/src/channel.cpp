#include "pgc/channel.hpp"

#include <cmath>

#include "pgc/linalg.hpp"

namespace pgc {

namespace {

// action matrix from a map on elements, column k = GNS image of the k-th scaled matrix unit
template <class F>
Mat action_of(const MultiMatrixAlgebra& M, F&& f) {
    const int D = M.dim();
    Mat A(D, D);
    int k = 0;
    for (int a = 0; a < M.num_blocks(); ++a) {
        const double s = 1.0 / std::sqrt(M.weight(a));
        for (int r = 0; r < M.block_size(a); ++r)
            for (int c = 0; c < M.block_size(a); ++c) A.col(k++) = s * M.to_gns(f(M.unit(a, r, c)));
    }
    return A;
}

}  // namespace

double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    auto one_way = [](const std::vector<cplx>& x, const std::vector<cplx>& y) {
        double worst = 0.0;
        for (cplx u : x) {
            double best = 1e300;
            for (cplx v : y) best = std::min(best, std::abs(u - v));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_way(a, b), one_way(b, a));
}

void Channel::finish() {
    const auto& t = *t_;
    const auto& M = t.M();
    const int D = M.dim();
    if (A_.rows() != D || A_.cols() != D) throw Error(ErrorKind::DimensionMismatch, "action matrix has wrong size");
    const double scale = std::max(1.0, A_.norm());
    double res = 0.0;
    for (const auto& n : t.N().matrix_units()) {
        Element in = t.N_in_M().apply(n);
        Mat L = M.left_op(in), R = M.right_op(in);
        res = std::max(res, (A_ * L - L * A_).norm() / scale);
        res = std::max(res, (A_ * R - R * A_).norm() / scale);
    }
    bimod_res_ = res;
    if (res > 1e-8) throw Error(ErrorKind::NotBimodular, "bimodularity residual " + std::to_string(res));
    Element y1 = t.level1().pull(A_);
    double r1 = t.level1().pull_residual(A_, y1);
    double r2 = 0.0;
    y_ = {Side::Plus, t.plus().from_ambient(y1)};
    r2 = (t.plus().to_ambient(y_.x) - y1).norm_inf() / std::max(1.0, y1.norm_inf());
    y_res_ = std::max(r1, r2);
    if (y_res_ > 1e-8) throw Error(ErrorKind::NotBimodular, "action does not lie in N' cap M1 (residual " + std::to_string(y_res_) + ")");
}

Channel Channel::from_action(const Tower& t, const Mat& action) {
    Channel c;
    c.t_ = &t;
    c.A_ = action;
    c.finish();
    return c;
}

Channel Channel::from_kraus(const Tower& t, const std::vector<Mat>& kraus) {
    const auto& M = t.M();
    const int n = M.total_size();
    for (const auto& k : kraus)
        if (k.rows() != n || k.cols() != n)
            throw Error(ErrorKind::DimensionMismatch, "Kraus operators must act on the defining representation of M");
    Channel c;
    c.t_ = &t;
    c.A_ = action_of(M, [&](const Element& x) {
        Mat full = M.to_full(x);
        Mat out = Mat::Zero(n, n);
        for (const auto& k : kraus) out += k * full * k.adjoint();
        return M.from_full(out, 1e-10);
    });
    c.kraus_ = kraus;
    c.finish();
    return c;
}

Channel Channel::from_y(const Tower& t, const TwoBox& y) {
    if (y.side != Side::Plus) throw Error(ErrorKind::WrongSide, "channel_from_y expects an element of N' cap M1");
    Channel c;
    c.t_ = &t;
    Element Y = t.plus().to_ambient(y.x);
    const double mu = t.mu();
    c.A_ = action_of(t.M(), [&](const Element& x) { return mu * t.E_M(Y * t.M_in_M1().apply(x) * t.e1()); });
    c.finish();
    return c;
}

Channel Channel::identity(const Tower& t) {
    Channel c;
    c.t_ = &t;
    c.A_ = Mat::Identity(t.M().dim(), t.M().dim());
    c.kraus_ = std::vector<Mat>{Mat::Identity(t.M().total_size(), t.M().total_size())};
    c.finish();
    return c;
}

Channel Channel::expectation(const Tower& t) {
    Channel c;
    c.t_ = &t;
    c.A_ = action_of(t.M(), [&](const Element& x) { return t.N_in_M().apply(t.E_N(x)); });
    c.finish();
    return c;
}

Element Channel::apply(const Element& x) const { return t_->M().from_gns(A_ * t_->M().to_gns(x)); }

Element Channel::apply_adjoint(const Element& x) const {
    return t_->M().from_gns(A_.adjoint() * t_->M().to_gns(x));
}

double Channel::unital_residual() const { return (unit_image() - t_->M().identity()).norm_inf(); }

double Channel::trace_preserving_residual() const {
    return (apply_adjoint(t_->M().identity()) - t_->M().identity()).norm_inf();
}

const TwoBox& Channel::hat() const {
    if (hat_) return *hat_;
    const auto& t = *t_;
    if (!t.has_level2()) throw Error(ErrorKind::LevelMismatch, "Fourier multiplier needs the second basic construction");
    const auto& ms = t.multiplier_system();
    const auto& M1 = t.M1();
    Element Z = M1.zero();
    for (const auto& eta : t.pp_basis())
        Z += t.M_in_M1().apply(eta).adjoint() * t.e1() * t.M_in_M1().apply(apply(eta));
    std::vector<Element> lifted;
    for (const auto& u : t.M().matrix_units()) lifted.push_back(t.M_in_M1().apply(u));
    Mat T(M1.dim(), ms.S.cols());
    const double s = std::sqrt(t.mu());
    Eigen::Index col = 0;
    for (const auto& x : lifted) {
        Element xz = x * Z;
        for (const auto& y : lifted) T.col(col++) = s * M1.to_gns(xz * y);
    }
    Mat H = T * ms.pinv;
    double r0 = (H * ms.S - T).norm() / std::max(1.0, T.norm());
    Element h2 = t.level2().pull(H);
    double r1 = t.level2().pull_residual(H, h2);
    double r2 = 0.0;
    TwoBox hb{Side::Minus, t.minus().from_ambient(h2)};
    r2 = (t.minus().to_ambient(hb.x) - h2).norm_inf() / std::max(1.0, h2.norm_inf());
    hat_res_ = std::max({r0, r1, r2});
    hat_ = hb;
    return *hat_;
}

double Channel::hat_residual() const {
    hat();
    return hat_res_;
}

Mat Channel::action_from_hat() const {
    const auto& t = *t_;
    Element H = t.minus().to_ambient(hat().x);
    Element e1 = t.M1_in_M2().apply(t.e1());
    const Element& e2 = t.e2();
    Element left = e2 * e1 * H;
    Element right = e1 * e2;
    const double s = std::pow(t.mu(), 1.5);
    return action_of(t.M(), [&](const Element& x) {
        return s * t.E_M(t.E_M1(left * t.M_in_M2().apply(x) * right));
    });
}

Mat Channel::action_from_y() const {
    const auto& t = *t_;
    Element Y = t.plus().to_ambient(y_.x);
    return action_of(t.M(), [&](const Element& x) { return t.mu() * t.E_M(Y * t.M_in_M1().apply(x) * t.e1()); });
}

Mat Channel::choi_block(int a) const {
    const auto& M = t_->M();
    const int s = M.block_size(a);
    const int n = M.total_size();
    Mat C = Mat::Zero(s * n, s * n);
    for (int r = 0; r < s; ++r)
        for (int c = 0; c < s; ++c) C.block(r * n, c * n, n, n) = M.to_full(apply(M.unit(a, r, c)));
    return C;
}

CpVerdict Channel::cp_verdict(double tol) const {
    CpVerdict v;
    double cmin = 1e300, cnorm = 0.0;
    for (int a = 0; a < t_->M().num_blocks(); ++a) {
        Mat C = choi_block(a);
        cmin = std::min(cmin, la::min_eig_herm(C));
        cnorm = std::max(cnorm, la::opnorm(C));
    }
    v.choi_min_eig = cmin / std::max(cnorm, 1e-300);
    v.choi_cp = v.choi_min_eig >= -tol;
    if (t_->has_level2()) {
        const auto& h = hat();
        v.hat_min_eig = t_->minus().P.min_eig(h.x) / std::max(h.x.norm_inf(), 1e-300);
        v.cp = v.hat_min_eig >= -tol;
    } else {
        v.hat_min_eig = v.choi_min_eig;
        v.cp = v.choi_cp;
    }
    return v;
}

bool Channel::is_cp(double tol) const {
    auto v = cp_verdict(tol);
    if (v.cp != v.choi_cp)
        throw Error(ErrorKind::OracleDisagreement, "transform positivity and Choi positivity disagree (" +
                                                       std::to_string(v.hat_min_eig) + " vs " +
                                                       std::to_string(v.choi_min_eig) + ")");
    return v.cp;
}

Channel Channel::compose(const Channel& other) const {
    if (other.t_ != t_) throw Error(ErrorKind::OwnerMismatch, "channels live on different towers");
    Channel c = from_action(*t_, A_ * other.A_);
    if (kraus_ && other.kraus_) {
        std::vector<Mat> ks;
        for (const auto& a : *kraus_)
            for (const auto& b : *other.kraus_) ks.push_back(a * b);
        c.kraus_ = ks;
    }
    return c;
}

Channel Channel::adjoint() const {
    Channel c = from_action(*t_, A_.adjoint());
    if (kraus_) {
        std::vector<Mat> ks;
        for (const auto& k : *kraus_) ks.push_back(k.adjoint());
        c.kraus_ = ks;
    }
    return c;
}

Channel Channel::convolve(const Channel& other, const Qfa& q) const {
    if (other.t_ != t_ || &q.tower() != t_) throw Error(ErrorKind::OwnerMismatch, "channels live on different towers");
    return from_y(*t_, q.convolve(y_, other.y_));
}

Channel Channel::unitalize() const {
    const auto& M = t_->M();
    Element a = unit_image().hermitian_part();
    if (M.min_eig(a) < 1e-8) throw Error(ErrorKind::SingularUnit, "Phi(1) is not strictly positive");
    Element s;
    for (const auto& b : a.blocks) {
        Eigen::SelfAdjointEigenSolver<Mat> es(b);
        RVec f = es.eigenvalues().cwiseSqrt().cwiseInverse();
        s.blocks.push_back(es.eigenvectors() * f.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint());
    }
    Channel c = from_action(*t_, M.left_op(s) * M.right_op(s) * A_);
    if (kraus_) {
        std::vector<Mat> ks;
        Mat sf = M.to_full(s);
        for (const auto& k : *kraus_) ks.push_back(sf * k);
        c.kraus_ = ks;
    }
    return c;
}

Channel Channel::scaled(double s) const {
    Channel c = from_action(*t_, s * A_);
    if (kraus_ && s >= 0) {
        std::vector<Mat> ks;
        for (const auto& k : *kraus_) ks.push_back(std::sqrt(s) * k);
        c.kraus_ = ks;
    }
    return c;
}

Channel Channel::plus(const Channel& other, double s) const {
    if (other.t_ != t_) throw Error(ErrorKind::OwnerMismatch, "channels live on different towers");
    Channel c = from_action(*t_, A_ + s * other.A_);
    if (kraus_ && other.kraus_ && s >= 0) {
        std::vector<Mat> ks = *kraus_;
        for (const auto& k : *other.kraus_) ks.push_back(std::sqrt(s) * k);
        c.kraus_ = ks;
    }
    return c;
}

DominanceResult Channel::pp_dominance() const {
    if (!is_cp()) throw Error(ErrorKind::NotCP, "pp_dominance needs a completely positive map");
    const auto& t = *t_;
    const auto& M = t.M();
    const auto& basis = t.pp_basis();
    const int m = static_cast<int>(basis.size());
    const int n = M.total_size();
    Mat big(m * n, m * n);
    for (int k = 0; k < m; ++k)
        for (int j = 0; j < m; ++j) big.block(k * n, j * n, n, n) = M.to_full(apply(basis[k] * basis[j].adjoint()));
    DominanceResult d;
    d.c = la::opnorm(big);
    const auto& P = t.minus().P;
    const Element& h = hat().x;
    const Channel en = expectation(t);
    const Element he = en.hat().x;
    const double scale = std::max(1.0, h.norm_inf());
    d.dominance_margin = P.min_eig(d.c * he - h) / scale;
    d.norm_bound_slack = std::sqrt(t.mu()) * d.c - h.norm_inf();
    d.cb_norm = unit_image().norm_inf();
    d.cb_margin = P.min_eig(t.mu() * d.cb_norm * he - h) / scale;
    d.ok = d.dominance_margin >= -1e-9 && d.norm_bound_slack >= -1e-9 * scale && d.cb_margin >= -1e-9;
    return d;
}

std::vector<Mat> Channel::kraus_from_choi(double tol) const {
    const auto& M = t_->M();
    if (M.num_blocks() != 1) throw Error(ErrorKind::PreconditionFailed, "Kraus extraction implemented for factor M only");
    const int s = M.block_size(0);
    Mat C = choi_block(0);
    Eigen::SelfAdjointEigenSolver<Mat> es(la::hermitian_part(C));
    std::vector<Mat> out;
    const double top = es.eigenvalues().cwiseAbs().maxCoeff();
    for (Eigen::Index k = es.eigenvalues().size() - 1; k >= 0; --k) {
        double lam = es.eigenvalues()(k);
        if (lam < -tol * std::max(1.0, top)) throw Error(ErrorKind::NotCP, "Choi matrix is not positive");
        if (lam <= tol * std::max(1.0, top)) continue;
        Mat K(s, s);
        for (int r = 0; r < s; ++r)
            for (int i = 0; i < s; ++i) K(i, r) = std::sqrt(lam) * es.eigenvectors()(r * s + i, k);
        out.push_back(K);
    }
    return out;
}

}  // namespace pgc
