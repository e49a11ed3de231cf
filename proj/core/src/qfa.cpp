#include "pgc/qfa.hpp"

#include <cmath>
#include <numbers>

#include "pgc/linalg.hpp"

namespace pgc {

namespace {

double projection_residual(const Element& q) {
    return std::max((q - q.adjoint()).norm_inf(), (q * q - q).norm_inf());
}

int rank_of(const Element& proj) {
    double s = 0.0;
    for (const auto& b : proj.blocks) s += b.trace().real();
    return static_cast<int>(std::lround(s));
}

cplx root(int j, int m) { return std::polar(1.0, 2.0 * std::numbers::pi * j / m); }

double max_of(const ResidualTable& t) {
    double m = 0.0;
    for (const auto& [k, v] : t) m = std::max(m, v);
    return m;
}

}  // namespace

double PeripheralDecomposition::max_residual() const { return max_of(residuals); }
double TwoBiprojectionReport::max_residual() const { return max_of(residuals); }

int fit_root_group(const std::vector<cplx>& values, int max_m, double tol, double* residual) {
    for (int m = 1; m <= std::max(1, max_m); ++m) {
        std::vector<int> ks;
        double worst = 0.0;
        bool fits = true;
        for (cplx v : values) {
            double ang = std::arg(v);
            int k = static_cast<int>(std::lround(ang / (2.0 * std::numbers::pi / m)));
            k = ((k % m) + m) % m;
            double d = std::abs(v - root(k, m));
            worst = std::max(worst, d);
            if (d > tol) {
                fits = false;
                break;
            }
            ks.push_back(k);
        }
        if (!fits) continue;
        std::vector<bool> in(m, false);
        for (int k : ks) in[k] = true;
        bool closed = true;
        for (int a = 0; a < m && closed; ++a)
            for (int b = 0; b < m && closed; ++b)
                if (in[a] && in[b] && !in[(a + b) % m]) closed = false;
        if (!closed) continue;
        if (residual) *residual = worst;
        return m;
    }
    return 0;
}

Qfa::Qfa(const Tower& t, double tol) : t_(t) {
    if (!t.has_level2()) throw Error(ErrorKind::LevelMismatch, "Fourier transform needs the second basic construction");
    const auto& plus = t.plus();
    const auto& minus = t.minus();
    const int d = plus.P.dim();
    if (minus.P.dim() != d)
        throw Error(ErrorKind::FourierNotIsometry, "two-box spaces have different dimensions");

    const Element G = t.M1_in_M2().apply(t.e1()) * t.e2();
    const double s = std::pow(t.mu(), 1.5);
    Mat raw(d, d);
    for (int k = 0; k < d; ++k) {
        Vec ek = Vec::Zero(d);
        ek(k) = 1.0;
        Element x2 = t.M1_in_M2().apply(plus.to_ambient(plus.P.from_gns(ek)));
        raw.col(k) = s * minus.P.to_gns(minus.from_ambient(G * x2));
    }
    calib_ = std::sqrt(static_cast<double>(d) / raw.squaredNorm());
    F_ = calib_ * raw;
    iso_res_ = (F_.adjoint() * F_ - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
    if (iso_res_ > tol)
        throw Error(ErrorKind::FourierNotIsometry,
                    "no scalar calibration makes the transform a tr2-isometry (residual " + std::to_string(iso_res_) + ")");
    Finv_ = F_.partialPivLu().inverse();
    e1_ = {Side::Plus, plus.from_ambient(t.e1())};
    e2_ = {Side::Minus, minus.from_ambient(t.e2())};
}

TwoBox Qfa::make(Side s, const Element& x) const {
    P(s).check(x);
    return {s, x};
}

TwoBox Qfa::from_ambient(Side s, const Element& amb, double* residual) const {
    const auto& sp = t_.space(s);
    TwoBox out{s, sp.from_ambient(amb)};
    if (residual) *residual = (sp.to_ambient(out.x) - amb).norm_inf() / std::max(1.0, amb.norm_inf());
    return out;
}

TwoBox Qfa::unit(Side s) const { return s == Side::Plus ? TwoBox{s, delta() * e1_.x} : TwoBox{s, delta() * e2_.x}; }

TwoBox Qfa::fourier(const TwoBox& x) const {
    if (x.side != Side::Plus) throw Error(ErrorKind::WrongSide, "fourier expects a plus-side element");
    return {Side::Minus, P(Side::Minus).from_gns(F_ * P(Side::Plus).to_gns(x.x))};
}

TwoBox Qfa::fourier_inv(const TwoBox& x) const {
    if (x.side != Side::Minus) throw Error(ErrorKind::WrongSide, "fourier_inv expects a minus-side element");
    return {Side::Plus, P(Side::Plus).from_gns(Finv_ * P(Side::Minus).to_gns(x.x))};
}

TwoBox Qfa::transform(const TwoBox& x) const { return x.side == Side::Plus ? fourier(x) : fourier_inv(x); }

TwoBox Qfa::convolve(const TwoBox& a, const TwoBox& b) const {
    if (a.side != b.side) throw Error(ErrorKind::SideMismatch, "convolution of elements on different sides");
    TwoBox fa = transform(a), fb = transform(b);
    TwoBox prod{fa.side, fb.x * fa.x};
    return transform(prod);
}

TwoBox Qfa::contragredient(const TwoBox& x) const {
    TwoBox f = transform(x);
    f.x = f.x.adjoint();
    return transform(f);
}

bool Qfa::f_positive(const TwoBox& x, double tol) const {
    TwoBox f = transform(x);
    return min_eig(f) >= -tol * std::max(1.0, norm_inf(f));
}

TwoBox Qfa::range_projection(const TwoBox& x, double tol) const { return {x.side, P(x.side).range_projection(x.x, tol)}; }

std::vector<cplx> Qfa::eigenvalues(const TwoBox& x) const {
    std::vector<cplx> ev;
    for (const auto& b : x.x.blocks) {
        Vec e = la::eigenvalues(b);
        for (Eigen::Index i = 0; i < e.size(); ++i) ev.push_back(e(i));
    }
    return ev;
}

TwoBox Qfa::riesz(const TwoBox& x, cplx center, double radius) const {
    TwoBox out{x.side, {}};
    for (const auto& b : x.x.blocks) out.x.blocks.push_back(la::riesz_projection_at(b, center, radius));
    return out;
}

BiprojectionCheck Qfa::is_biprojection(const TwoBox& p) const {
    if (projection_residual(p.x) > 1e-9 * std::max(1.0, p.x.norm_inf()))
        throw Error(ErrorKind::NotAProjection, "is_biprojection needs a projection");
    BiprojectionCheck out;
    const double tr = tr2(p).real();
    if (tr < 1e-12) {
        out.residual = out.loose_residual = 1.0;
        return out;
    }
    TwoBox f = transform(p);
    out.residual = projection_residual((delta() / tr) * f.x);
    double n = f.x.norm_inf();
    out.loose_residual = n > 0 ? projection_residual((1.0 / n) * f.x) : 1.0;
    out.ok = out.residual < 1e-8 && min_eig(f) >= -1e-9;
    return out;
}

TwoBox Qfa::biprojection_generated(const TwoBox& y, bool include_unit) const {
    const double ny = norm_inf(y);
    if (ny < 1e-14 || min_eig(y) < -1e-10 * std::max(1.0, ny))
        throw Error(ErrorKind::NotPositive, "biprojection_generated needs a nonzero positive element");
    TwoBox power{y.side, (1.0 / ny) * y.x};
    TwoBox acc = power;
    if (include_unit) {
        TwoBox u = unit(y.side);
        acc.x += (1.0 / norm_inf(u)) * u.x;
    }
    int prev = rank_of(range_projection(acc).x);
    int stable = 0;
    const int dim = P(y.side).dim();
    for (int k = 2; k <= dim * dim + 2; ++k) {
        power = convolve(power, y);
        double n = norm_inf(power);
        if (n < 1e-300) return range_projection(acc);
        power.x *= cplx(1.0 / n);
        acc.x += power.x;
        int r = rank_of(range_projection(acc).x);
        stable = (r == prev) ? stable + 1 : 0;
        prev = r;
        if (stable >= 2) return range_projection(acc);
    }
    throw Error(ErrorKind::NoStabilization, "range of convolution powers did not stabilize");
}

ShiftCheck Qfa::shift_check(const TwoBox& p, const TwoBox& q, bool right) const {
    if (!is_biprojection(p).ok) throw Error(ErrorKind::NotABiprojection, "shift_check needs a biprojection");
    if (projection_residual(q.x) > 1e-9 * std::max(1.0, q.x.norm_inf()))
        throw Error(ErrorKind::NotAProjection, "shift_check needs a projection");
    ShiftCheck out;
    const double trp = tr2(p).real();
    out.trace_gap = std::abs(trp - tr2(q).real());
    TwoBox c = right ? convolve(p, q) : convolve(q, p);
    c.x -= (trp / delta()) * q.x;
    out.residual = norm2(c);
    out.ok = out.trace_gap < 1e-8 && out.residual < 1e-8;
    return out;
}

SumSetResult Qfa::sum_set(const TwoBox& p, const TwoBox& q) const {
    for (const auto* z : {&p, &q})
        if (projection_residual(z->x) > 1e-9 * std::max(1.0, z->x.norm_inf()))
            throw Error(ErrorKind::NotAProjection, "sum_set needs projections");
    SumSetResult out;
    const double trp = tr2(p).real(), trq = tr2(q).real();
    TwoBox c = convolve(p, q);
    out.S = tr2(range_projection(c)).real();
    out.max_trace = std::max(trp, trq);
    out.inequality = out.max_trace <= out.S + 1e-8;
    out.equals_trq = std::abs(out.S - trq) < 1e-8;
    out.scaled_is_projection = trp > 1e-12 && projection_residual((delta() / trp) * c.x) < 1e-8;
    return out;
}

TwoBox Qfa::cesaro_oracle(const TwoBox& x, int m, int n) const {
    const int n1 = m * std::max(1, n / m);
    TwoBox out{x.side, {}};
    for (const auto& b : x.x.blocks) {
        const auto k = b.rows();
        Mat pw = Mat::Identity(k, k), s1 = Mat::Zero(k, k), s2 = Mat::Zero(k, k);
        for (int i = 1; i <= 2 * n1; ++i) {
            pw = pw * b;
            s2 += pw;
            if (i == n1) s1 = s2;
        }
        out.x.blocks.push_back(2.0 * s2 / (2.0 * n1) - s1 / static_cast<double>(n1));
    }
    return out;
}

PeripheralDecomposition Qfa::peripheral_decomposition(const TwoBox& x, bool enforce) const {
    TwoBox T = transform(x);
    if (min_eig(T) < -1e-9 * std::max(1.0, norm_inf(T)))
        throw Error(ErrorKind::NotFPositive, "transform has a negative eigenvalue");
    auto ev = eigenvalues(x);
    double r = 0.0;
    for (cplx z : ev) r = std::max(r, std::abs(z));
    if (r < 1e-14) throw Error(ErrorKind::NotNormalized, "spectral radius is zero");
    if (enforce) {
        if (std::abs(r - 1.0) > 1e-8) throw Error(ErrorKind::NotNormalized, "spectral radius is not 1");
        if (std::abs(tr2(T).real() / delta() - 1.0) > 1e-8)
            throw Error(ErrorKind::NotNormalized, "tr2 of the transform is not delta");
    }
    PeripheralDecomposition pd;
    pd.side = x.side;
    pd.radius = r;
    TwoBox xx{x.side, (1.0 / r) * x.x};
    T.x *= cplx(1.0 / r);

    Vec per(static_cast<Eigen::Index>(ev.size()));
    Eigen::Index np = 0;
    for (cplx z : ev)
        if (std::abs(z) / r > 1.0 - 1e-7) per(np++) = z / r;
    per.conservativeResize(np);
    std::vector<cplx> centers;
    for (const auto& c : la::cluster_eigenvalues(per, 1e-7)) centers.push_back(c.center);
    double fit = 0.0;
    const int m = fit_root_group(centers, P(x.side).dim(), 1e-7, &fit);
    if (m == 0) throw Error(ErrorKind::GroupFitFailed, "peripheral eigenvalues are not a group of roots of unity");
    pd.m = m;

    for (int j = 0; j < m; ++j) {
        pd.eigenvalues.push_back(root(j, m));
        pd.q.push_back(riesz(xx, root(j, m)));
    }
    auto& res = pd.residuals;
    res["norm_inf"] = std::abs(norm_inf(xx) - 1.0);
    res["trace_normalization"] = std::abs(tr2(T).real() / delta() - 1.0);
    res["root_fit"] = fit;
    double proj = 0.0, orth = 0.0, eig = 0.0;
    for (int j = 0; j < m; ++j) {
        proj = std::max(proj, projection_residual(pd.q[j].x));
        eig = std::max(eig, (xx.x * pd.q[j].x - pd.eigenvalues[j] * pd.q[j].x).norm_inf());
        for (int k = 0; k < m; ++k)
            if (k != j) orth = std::max(orth, (pd.q[j].x * pd.q[k].x).norm_inf());
    }
    res["q_projection"] = proj;
    res["q_orthogonal"] = orth;
    res["q_eigen"] = eig;
    res["cesaro_vs_riesz"] = (cesaro_oracle(xx, m).x - pd.q[0].x).norm_inf();

    auto b1 = is_biprojection(pd.q[0]);
    pd.q1_biprojection = b1.ok;
    res["q1_biprojection"] = b1.residual;

    double shift = 0.0;
    for (int j = 0; j < m; ++j) {
        auto sc = shift_check(pd.q[0], pd.q[j], true);
        shift = std::max({shift, sc.residual, sc.trace_gap});
    }
    res["shift_law"] = shift;

    TwoBox sum{x.side, P(x.side).zero()};
    for (const auto& q : pd.q) sum.x += q.x;
    auto bs = is_biprojection(sum);
    pd.sum_biprojection = bs.ok;
    res["sum_biprojection"] = bs.residual;
    TwoBox xxs{x.side, xx.x * xx.x.adjoint()};
    res["sum_vs_riesz_xxstar"] = (riesz(xxs, 1.0).x - sum.x).norm_inf();

    const double scale = delta() / tr2(pd.q[0]).real();
    double law = 0.0;
    for (int k = 0; k < m; ++k)
        for (int j = 0; j < m; ++j) {
            TwoBox c = convolve(pd.q[k], pd.q[j]);
            law = std::max(law, (scale * c.x - pd.q[(k + j) % m].x).norm_inf());
        }
    res["group_law"] = law;
    return pd;
}

TwoBiprojectionReport Qfa::two_biprojection_check(const TwoBox& y) const {
    if (min_eig(y) < -1e-10 * std::max(1.0, norm_inf(y)))
        throw Error(ErrorKind::NotPositive, "two_biprojection_check needs a positive element");
    TwoBiprojectionReport rep;
    rep.q = biprojection_generated(y);
    TwoBox ybar = contragredient(y);
    rep.p = biprojection_generated(convolve(y, ybar));
    rep.p_alt = biprojection_generated(convolve(ybar, y));
    rep.conjugates_agree = (rep.p.x - rep.p_alt.x).norm_inf() < 1e-7;
    const double trp = tr2(rep.p).real();
    rep.m = static_cast<int>(std::lround(tr2(rep.q).real() / trp));

    // the engine: peripheral structure of the element whose transform is y
    TwoBox x = transform(y);
    auto pd = peripheral_decomposition(x, false);
    const int m = pd.m;
    rep.m_engine = m;
    std::vector<TwoBox> qhat;
    for (const auto& qk : pd.q) qhat.push_back(transform(qk));
    const double c = delta() / (tr2(pd.q[0]).real() * m);
    for (int j = 0; j < m; ++j) {
        TwoBox pj{y.side, P(y.side).zero()};
        for (int k = 0; k < m; ++k) pj.x += root(j * k, m) * qhat[k].x;
        pj.x *= cplx(c);
        rep.shifts.push_back(pj);
    }
    TwoBox qsum{y.side, P(y.side).zero()};
    for (const auto& qh : qhat) qsum.x += qh.x;

    auto& res = rep.residuals;
    res["q_vs_engine"] = (range_projection(qhat[0]).x - rep.q.x).norm_inf();
    res["p_vs_engine"] = (range_projection(qsum).x - rep.p.x).norm_inf();
    res["m_agreement"] = std::abs(rep.m - m);
    double proj = 0.0, shift = 0.0, closure = 0.0;
    TwoBox total{y.side, P(y.side).zero()};
    for (const auto& pj : rep.shifts) {
        proj = std::max(proj, projection_residual(pj.x));
        total.x += pj.x;
    }
    res["p_j_projection"] = proj;
    res["sum_p_j_vs_q"] = (total.x - rep.q.x).norm_inf();
    if (proj < 1e-7 && is_biprojection(rep.p).ok) {
        for (const auto& pj : rep.shifts) {
            auto sc = shift_check(rep.p, pj, true);
            shift = std::max({shift, sc.residual, sc.trace_gap});
        }
        for (const auto& a : rep.shifts)
            for (const auto& b : rep.shifts) {
                TwoBox ab = convolve(a, b);
                double best = 1e300;
                for (const auto& k : rep.shifts) best = std::min(best, ((delta() / trp) * ab.x - k.x).norm_inf());
                closure = std::max(closure, best);
            }
    } else {
        shift = closure = 1.0;
    }
    res["shift_of_p"] = shift;
    res["cyclic_closure"] = closure;
    res["conjugates"] = (rep.p.x - rep.p_alt.x).norm_inf();
    return rep;
}

double Qfa::split_lemma_check(const TwoBox& x, const TwoBox& y, const TwoBox& z, cplx alpha) const {
    if (x.side != Side::Plus || y.side != Side::Minus || z.side != Side::Minus)
        throw Error(ErrorKind::WrongSide, "split lemma takes x plus, y and z minus");
    if (std::abs(std::abs(alpha) - 1.0) > 1e-8) throw Error(ErrorKind::PreconditionFailed, "|alpha| != 1");
    TwoBox xh = fourier(x);
    TwoBox lhs = convolve(y, xh);
    lhs.x -= alpha * y.x;
    if (norm2(lhs) > 1e-8 * std::max(1.0, norm2(y)))
        throw Error(ErrorKind::PreconditionFailed, "y is not an eigenvector of convolution by the transform");
    TwoBox zy{Side::Minus, z.x * y.x};
    TwoBox a = convolve(zy, xh);
    TwoBox b = convolve(z, xh);
    a.x -= alpha * (b.x * y.x);
    return norm2(a);
}

}  // namespace pgc
