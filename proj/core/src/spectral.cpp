#include "pgc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pgc/linalg.hpp"
#include "pgc/rng.hpp"

namespace pgc {

namespace {

constexpr double kCluster = 1e-7;

cplx root(int j, int m) { return std::polar(1.0, 2.0 * std::numbers::pi * j / m); }

double max_abs(const std::vector<cplx>& v) {
    double r = 0.0;
    for (cplx z : v) r = std::max(r, std::abs(z));
    return r;
}

std::vector<cplx> to_vector(const Vec& v) { return {v.data(), v.data() + v.size()}; }

std::vector<cplx> peripheral_centers(const std::vector<cplx>& ev, double r, double rel) {
    std::vector<cplx> sel;
    for (cplx z : ev)
        if (std::abs(z) >= r * (1.0 - rel)) sel.push_back(z);
    Vec v = Eigen::Map<const Vec>(sel.data(), static_cast<Eigen::Index>(sel.size()));
    std::vector<cplx> out;
    for (const auto& c : la::cluster_eigenvalues(v, kCluster)) out.push_back(c.center);
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
        double pa = std::arg(a), pb = std::arg(b);
        if (pa < -1e-12) pa += 2.0 * std::numbers::pi;
        if (pb < -1e-12) pb += 2.0 * std::numbers::pi;
        return pa < pb;
    });
    return out;
}

// smallest m with every value an m-th root of unity (no closure requirement)
int root_period(const std::vector<cplx>& values, int max_m, double tol) {
    for (int m = 1; m <= std::max(1, max_m); ++m) {
        bool ok = true;
        for (cplx v : values) {
            long k = std::lround(std::arg(v) * m / (2.0 * std::numbers::pi));
            if (std::abs(v - root(static_cast<int>(k), m)) > tol) {
                ok = false;
                break;
            }
        }
        if (ok) return m;
    }
    return 0;
}

// (sum_{k<n} a^k, a^n)
std::pair<Mat, Mat> power_sum(const Mat& a, long n) {
    const auto d = a.rows();
    if (n == 0) return {Mat::Zero(d, d), Mat::Identity(d, d)};
    if (n % 2 == 1) {
        auto [s, p] = power_sum(a, n - 1);
        return {s + p, p * a};
    }
    auto [s, p] = power_sum(a, n / 2);
    Mat sp = s + p * s;
    return {sp, p * p};
}

Element block_riesz(const Element& y, cplx center, double radius) {
    Element out;
    for (const auto& b : y.blocks) out.blocks.push_back(la::riesz_projection_at(b, center, radius));
    return out;
}

Element clip_negative(const Element& x) {
    Element out;
    for (const auto& b : x.blocks) {
        Eigen::SelfAdjointEigenSolver<Mat> es(la::hermitian_part(b));
        RVec l = es.eigenvalues().cwiseMax(0.0);
        out.blocks.push_back(es.eigenvectors() * l.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint());
    }
    return out;
}

// square root with eigenvalues below 1e-12 ||x|| treated as zero
Element sqrt_clipped(const Element& x) {
    const double cut = 1e-12 * std::max(x.norm_inf(), 1e-300);
    Element out;
    for (const auto& b : x.blocks) {
        Eigen::SelfAdjointEigenSolver<Mat> es(la::hermitian_part(b));
        RVec l = es.eigenvalues().unaryExpr([cut](double v) { return v > cut ? std::sqrt(v) : 0.0; });
        out.blocks.push_back(es.eigenvectors() * l.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint());
    }
    return out;
}

std::vector<Element> n_image_units(const Tower& t) {
    std::vector<Element> out;
    for (const auto& u : t.N().matrix_units()) out.push_back(t.N_in_M().apply(u));
    return out;
}

double relative(double v, double scale) { return v / std::max(scale, 1e-300); }

}  // namespace

const char* to_string(CwVerdict v) {
    switch (v) {
        case CwVerdict::Equality: return "equality";
        case CwVerdict::Violation: return "violation";
        case CwVerdict::PreconditionNotMet: return "precondition_not_met";
    }
    return "?";
}

SpectralReport channel_spectrum(const Channel& phi, double tol_phase, double fatal_tol) {
    SpectralReport rep;
    rep.action_eigenvalues = to_vector(la::eigenvalues(phi.action()));
    for (const auto& b : phi.y().x.blocks) {
        auto e = to_vector(la::eigenvalues(b));
        rep.y_eigenvalues.insert(rep.y_eigenvalues.end(), e.begin(), e.end());
    }
    rep.radius = max_abs(rep.action_eigenvalues);
    rep.peripheral = peripheral_centers(rep.action_eigenvalues, rep.radius, std::max(tol_phase, kCluster));
    rep.route_residual = hausdorff(rep.action_eigenvalues, rep.y_eigenvalues);
    if (rep.route_residual > fatal_tol * std::max(1.0, rep.radius))
        throw Error(ErrorKind::RouteDisagreement,
                    "spectra of the action and of y differ by " + std::to_string(rep.route_residual));
    return rep;
}

CommutingPf commuting_pf_channel(const Channel& phi, const Qfa* q) {
    if (!phi.is_cp()) throw Error(ErrorKind::NotCP, "commuting_pf_channel needs a completely positive map");
    const Tower& t = phi.tower();
    const auto& P = t.plus().P;
    const Element& y = phi.y().x;
    std::vector<cplx> ev;
    for (const auto& b : y.blocks) {
        auto e = to_vector(la::eigenvalues(b));
        ev.insert(ev.end(), e.begin(), e.end());
    }
    CommutingPf out;
    const double r = max_abs(ev);
    out.r = r;
    const double scale = std::max(1.0, r);

    // exact candidate: Riesz projection at r times the top power of the nilpotent part
    Element pr = block_riesz(y, r, kCluster * scale);
    Element nil = (y - cplx(r) * P.identity()) * pr;
    Element z = pr;
    for (int j = 1; j <= P.total_size(); ++j) {
        Element nxt = z * nil;
        if (nxt.norm_inf() <= 1e-7 * scale * z.norm_inf()) break;
        z = nxt;
        out.nilpotency = j + 1;
    }
    if (z.norm_inf() < 1e-13) throw Error(ErrorKind::NoPositiveEigenvector, "Riesz projection at r vanished");
    z *= cplx(1.0 / z.norm_inf());

    auto phase_fix = [&](Element& zz) {
        Channel psi = Channel::from_y(t, {Side::Plus, zz});
        cplx tr = 0.0;
        for (int a = 0; a < t.M().num_blocks(); ++a) tr += psi.choi_block(a).trace();
        if (std::abs(tr) > 1e-14) zz *= std::polar(1.0, -std::arg(tr));
    };
    phase_fix(z);
    Channel psi = Channel::from_y(t, {Side::Plus, z});
    CpVerdict v = psi.cp_verdict(1e-9);

    if (!(v.cp && v.choi_cp)) {
        if (!q)
            throw Error(ErrorKind::FPositiveSearchFailed,
                        "exact candidate is not F-positive and no Fourier transform is available");
        const int d = P.dim();
        Mat I = Mat::Identity(d, d);
        Mat stacked(2 * d, d);
        stacked << P.left_op(y) - r * I, P.right_op(y) - r * I;
        Mat V = la::null_space(stacked, 1e-9);
        if (V.cols() == 0) throw Error(ErrorKind::FPositiveSearchFailed, "Riesz subspace is empty");
        Vec x = V * (V.adjoint() * P.to_gns(z));
        if (x.norm() < 1e-12) x = V.col(0);
        x.normalize();
        bool converged = false;
        for (int it = 0; it < 500; ++it) {
            out.iterations = it + 1;
            TwoBox T = q->transform({Side::Plus, P.from_gns(x)});
            TwoBox back = q->transform({Side::Minus, clip_negative(T.x)});
            Vec x2 = V * (V.adjoint() * P.to_gns(back.x));
            if (x2.norm() < 1e-12) break;
            x2.normalize();
            double change = (x2 - x).norm();
            x = x2;
            if (change < 1e-9) {
                converged = true;
                break;
            }
        }
        z = P.from_gns(x);
        phase_fix(z);
        psi = Channel::from_y(t, {Side::Plus, z});
        v = psi.cp_verdict(1e-9);
        if (!converged || !(v.cp && v.choi_cp))
            throw Error(ErrorKind::FPositiveSearchFailed,
                        "alternating projection did not reach an F-positive point of the Riesz subspace (dim " +
                            std::to_string(V.cols()) + ")");
        out.via_search = true;
    }
    out.z = {Side::Plus, z};
    out.psi_action = psi.action();

    const Mat& A = phi.action();
    const Mat& B = out.psi_action;
    const double nb = std::max(B.norm(), 1e-300);
    auto& res = out.residuals;
    res["psi_phi"] = (B * A - r * B).norm() / (nb * scale);
    res["phi_psi"] = (A * B - r * B).norm() / (nb * scale);
    res["y_z"] = (y * z - cplx(r) * z).norm_inf() / scale;
    res["z_y"] = (z * y - cplx(r) * z).norm_inf() / scale;
    res["psi_cp_margin"] = std::max(0.0, -std::min(v.hat_min_eig, v.choi_min_eig));
    return out;
}

PerronVector perron_vector(const Channel& phi, const Qfa* q) {
    CommutingPf pf = commuting_pf_channel(phi, q);
    const auto& M = phi.tower().M();
    Element x = M.from_gns(pf.psi_action * M.to_gns(M.identity())).hermitian_part();
    const double n = x.norm_inf();
    if (n < 1e-12) throw Error(ErrorKind::NoPositiveEigenvector, "Psi(1) vanished");
    x *= cplx(1.0 / n);
    PerronVector out;
    out.r = pf.r;
    out.x = x;
    out.residual = M.norm2(phi.apply(x) - cplx(pf.r) * x) / M.norm2(x);
    out.min_eig = M.min_eig(x);
    if (out.residual > 1e-8 || out.min_eig < -1e-9)
        throw Error(ErrorKind::NoPositiveEigenvector, "Psi(1) is not a positive eigenvector (residual " +
                                                           std::to_string(out.residual) + ")");
    return out;
}

InvariantState invariant_state(const Channel& phi) {
    const auto& M = phi.tower().M();
    InvariantState st;
    Mat R = la::riesz_projection_at(phi.action().adjoint(), 1.0, kCluster);
    Element h = M.from_gns(R * M.to_gns(M.identity())).hermitian_part();
    const double tr = M.trace(h).real();
    if (std::abs(tr) < 1e-12) return st;
    h *= cplx(1.0 / tr);
    st.found = true;
    st.h = h;
    st.residual = M.norm2(phi.apply_adjoint(h) - h);
    st.min_eig = M.min_eig(h);
    st.faithful = st.min_eig > 1e-9 && st.residual < 1e-8;
    return st;
}

Mat cesaro_mean(const Mat& a, int period, int n) {
    const long p = std::max(1, period);
    const long base = p * std::max(1L, n / p);
    Mat c1 = power_sum(a, base).first / static_cast<double>(base);
    Mat c2 = power_sum(a, 2 * base).first / static_cast<double>(2 * base);
    return 2.0 * c2 - c1;
}

FixedStructure cesaro_fixed(const Channel& phi, std::uint64_t seed) {
    const Tower& t = phi.tower();
    const auto& M = t.M();
    const Mat& A = phi.action();
    if (phi.unit_image().norm_inf() > 1.0 + 1e-9) throw Error(ErrorKind::NotContractive, "||Phi(1)|| exceeds 1");
    auto ev = to_vector(la::eigenvalues(A));
    const double r = max_abs(ev);
    if (std::abs(r - 1.0) > 1e-8) throw Error(ErrorKind::RadiusNotOne, "spectral radius " + std::to_string(r));

    FixedStructure fs;
    fs.E_fix = la::riesz_projection_at(A, 1.0, kCluster);
    const int period = root_period(peripheral_centers(ev, r, kCluster), M.dim(), 1e-7);
    auto& res = fs.residuals;
    res["cesaro_vs_riesz"] = la::opnorm(cesaro_mean(A, period) - fs.E_fix);

    fs.zeta = M.from_gns(fs.E_fix * M.to_gns(M.identity())).hermitian_part();
    fs.p_max = M.range_projection(fs.zeta, 1e-8);
    res["zeta_fixed"] = M.norm2(phi.apply(fs.zeta) - fs.zeta);
    double comm = 0.0;
    for (const auto& n : n_image_units(t)) comm = std::max(comm, (fs.zeta * n - n * fs.zeta).norm_inf());
    res["zeta_relative_commutant"] = comm;
    res["zeta_positive"] = std::max(0.0, -M.min_eig(fs.zeta));

    Rng rng = Rng(seed).split(0x5a);
    const Element one = M.identity();
    double support = 0.0;
    for (int k = 0; k < 50; ++k) {
        Element g = M.random(rng);
        Element x = M.from_gns(fs.E_fix * M.to_gns(g * g.adjoint())).hermitian_part();
        const double nx = x.norm_inf();
        if (nx < 1e-14) continue;
        support = std::max(support, ((one - fs.p_max) * x).norm_inf() / nx);
    }
    res["support_below_p_max"] = support;

    fs.basis = la::orth(fs.E_fix, 1e-8);
    Mat K = la::null_space(A - Mat::Identity(A.rows(), A.cols()), 1e-9);
    res["fixed_vs_kernel"] = la::subspace_distance(fs.basis, K);

    const bool hyp = phi.is_unital() && invariant_state(phi).faithful;
    bool is_alg = true;
    try {
        check_star_algebra(M, fs.basis, 1e-7);
    } catch (const Error&) {
        is_alg = false;
    }
    res["fixed_not_algebra"] = is_alg ? 0.0 : 1.0;
    if (is_alg) fs.info = analyze_subalgebra(M, fs.basis);
    fs.algebra_checked = hyp;
    return fs;
}

Eigenspace eigenspace(const Channel& phi, cplx alpha, const InvariantState* state) {
    const Tower& t = phi.tower();
    const auto& M = t.M();
    const Mat& A = phi.action();
    Eigenspace es;
    es.alpha = alpha;
    es.basis = la::null_space(A - alpha * Mat::Identity(A.rows(), A.cols()), 1e-8);
    es.elements = M.elements_of(es.basis);
    auto& ck = es.checks;
    double eig = 0.0;
    for (const auto& x : es.elements) eig = std::max(eig, M.norm2(phi.apply(x) - alpha * x));
    ck["eigen"] = eig;
    if (es.elements.empty()) {
        es.skipped = "alpha is not an eigenvalue";
        return es;
    }
    if (!state || !state->faithful) {
        es.skipped = "no faithful invariant state";
        return es;
    }
    es.characterized = true;

    const Element Y = t.plus().to_ambient(phi.y().x);
    const Element Ys = Y.adjoint();
    const double ny = std::max(Y.norm_inf(), 1e-300);
    double left = 0.0, right = 0.0;
    for (const auto& x : es.elements) {
        Element X = t.M_in_M1().apply(x);
        const double s = ny * std::max(x.norm_inf(), 1e-300);
        left = std::max(left, (X * Ys - alpha * (Ys * X)).norm_inf() / s);
        right = std::max(right, (Y * X - alpha * (X * Y)).norm_inf() / s);
    }
    ck["p_relation_adjoint"] = left;
    ck["p_relation"] = right;

    if (t.has_level2()) {
        Element root_h = t.minus().to_ambient(sqrt_clipped(phi.hat().x));
        Element e1 = t.M1_in_M2().apply(t.e1());
        Element G = root_h * e1 * t.e2();
        Element Gd = t.e2() * e1 * root_h;
        const double ng = std::max(G.norm_inf(), 1e-300);
        double i1 = 0.0, i2 = 0.0;
        for (const auto& x : es.elements) {
            Element X = t.M_in_M2().apply(x);
            const double s = ng * std::max(x.norm_inf(), 1e-300);
            i1 = std::max(i1, (X * G - alpha * (G * X)).norm_inf() / s);
            i2 = std::max(i2, (Gd * X - alpha * (X * Gd)).norm_inf() / s);
        }
        ck["intertwining"] = i1;
        ck["intertwining_dual"] = i2;
    }

    Eigenspace conj = eigenspace(phi, std::conj(alpha), nullptr);
    std::vector<Element> adj;
    for (const auto& x : es.elements) adj.push_back(x.adjoint());
    ck["adjoint_rule"] = conj.basis.cols() == static_cast<Eigen::Index>(adj.size())
                             ? la::subspace_distance(M.gns_matrix(adj), conj.basis)
                             : 1.0;

    const size_t cap = std::min<size_t>(es.elements.size(), 6);
    double prod = 0.0, ks = 0.0;
    for (size_t i = 0; i < cap; ++i) {
        for (size_t j = 0; j < cap; ++j) {
            Element xy = es.elements[i] * es.elements[j];
            prod = std::max(prod, relative(M.norm2(phi.apply(xy) - (alpha * alpha) * xy), std::max(1.0, M.norm2(xy))));
        }
    }
    for (const auto& x : es.elements) {
        Element xx = x.adjoint() * x;
        ks = std::max(ks, M.norm2(phi.apply(xx) - xx));
    }
    ck["product_rule"] = prod;
    ck["kadison_schwarz"] = ks;
    return es;
}

UnitaryGenerator unitary_generator(const Channel& phi, cplx alpha, const Eigenspace& e_alpha, const Mat& fixed,
                                   std::uint64_t seed) {
    const auto& M = phi.tower().M();
    const Element one = M.identity();
    if (e_alpha.basis.cols() == 0) throw Error(ErrorKind::PreconditionFailed, "empty eigenspace");
    UnitaryGenerator g;
    auto unitarity = [&](const Element& v) {
        return std::max((v.adjoint() * v - one).norm_inf(), (v * v.adjoint() - one).norm_inf());
    };
    Rng rng(seed);
    auto draw = [&] {
        Vec c(e_alpha.basis.cols());
        for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = rng.complex_normal();
        return M.from_gns(e_alpha.basis * c);
    };

    Element v;
    if (std::abs(alpha - 1.0) < 1e-12) {
        v = one;
    } else {
        bool ok = false;
        for (int k = 0; k < 32 && !ok; ++k) {
            g.attempts = k + 1;
            v = M.polar_part(draw(), 1e-10);
            ok = unitarity(v) < 1e-9;
        }
        if (!ok) {
            // enlarge the partial isometry by polar parts of Q x P, P and Q its defect projections
            g.patched = true;
            for (int k = 0; k < 32 && unitarity(v) >= 1e-9; ++k) {
                Element P = one - v.adjoint() * v;
                Element Q = one - v * v.adjoint();
                Element w = M.polar_part(Q * draw() * P, 1e-8);
                v = v + w;
                v = M.polar_part(v, 1e-10);
            }
        }
    }
    g.u = v;
    g.unitarity = unitarity(v);
    g.eigen = (phi.apply(v) - alpha * v).norm_inf();
    std::vector<Element> moved;
    for (const auto& f : M.elements_of(fixed)) moved.push_back(v * f);
    g.subspace = la::subspace_distance(M.gns_matrix(moved), e_alpha.basis, 1e-8);
    if (g.unitarity >= 1e-9)
        throw Error(ErrorKind::PatchingFailed, "no unitary found in the eigenspace (residual " +
                                                   std::to_string(g.unitarity) + ")");
    return g;
}

RelativeIrreducibility relative_irreducibility(const Channel& phi, const Qfa* q, std::uint64_t seed,
                                               int random_projections) {
    if (!phi.is_cp()) throw Error(ErrorKind::NotCP, "relative_irreducibility needs a completely positive map");
    const Tower& t = phi.tower();
    const auto& M = t.M();
    RelativeIrreducibility out;

    if (q) {
        out.criterion_i_available = true;
        TwoBox B = q->biprojection_generated(phi.hat(), true);
        out.flag_i_residual = (B.x - q->one(Side::Minus).x).norm_inf();
        out.flag_i = out.flag_i_residual < 1e-8;
    }

    out.d = t.has_level2() ? t.dim_minus() : M.dim();
    std::vector<std::pair<std::string, Element>> cands;
    const auto& emb = t.N_in_M();
    const auto cs = emb.comm_sizes();
    for (size_t b = 0; b < cs.size(); ++b)
        for (int k = 0; k < cs[b]; ++k) {
            Element e;
            for (size_t c = 0; c < cs.size(); ++c) e.blocks.push_back(Mat::Zero(cs[c], cs[c]));
            e.blocks[b](k, k) = 1.0;
            cands.emplace_back("relcomm[" + std::to_string(b) + "," + std::to_string(k) + "]", emb.comm_embed(e));
        }
    // spectral projections of a generic self-adjoint fixed point: Phi(p) = p, so these are the natural suspects
    {
        Mat E = la::riesz_projection_at(phi.action(), 1.0, kCluster);
        Rng frng = Rng(seed).split(0x72);
        Element h = M.from_gns(E * M.to_gns(M.random_hermitian(frng))).hermitian_part();
        int idx = 0;
        for (size_t b = 0; b < h.blocks.size(); ++b) {
            Eigen::SelfAdjointEigenSolver<Mat> es(h.blocks[b]);
            Vec ev = es.eigenvalues().cast<cplx>();
            for (const auto& cl : la::cluster_eigenvalues(ev, 1e-6 * std::max(1.0, h.norm_inf()))) {
                Element p = M.zero();
                for (int i : cl.members) p.blocks[b] += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
                cands.emplace_back("fixed[" + std::to_string(idx++) + "]", p);
            }
        }
    }
    Rng rng = Rng(seed).split(0x71);
    for (int k = 0; k < random_projections; ++k) cands.emplace_back("random[" + std::to_string(k) + "]", M.random_projection(rng));

    out.flag_iii = true;
    for (const auto& [label, p0] : cands) {
        ProjectionTrial tr;
        tr.label = label;
        Element p = p0;
        for (int s = 0; s < out.d - 1; ++s) {
            Element nxt = M.range_projection((p + phi.apply(p)).hermitian_part(), 1e-10);
            ++tr.steps;
            const bool same = (nxt - p).norm_inf() < 1e-9;
            p = nxt;
            if (same) break;
        }
        tr.residual = (p - emb.apply(t.E_N(p))).norm_inf();
        tr.in_N = tr.residual < 1e-8;
        if (!tr.in_N && out.flag_iii) {
            out.flag_iii = false;
            out.witness = p0;
        }
        out.trials.push_back(tr);
    }
    out.consistent = !(out.flag_i && !out.flag_iii);
    out.flag = out.flag_i || out.flag_iii;
    out.mode = out.flag_i ? "proof" : (out.flag_iii ? "evidence" : "disproof");
    return out;
}

PhaseGroupCertificate certify_phase_group(const Channel& phi, const Qfa* q, const CertifyOptions& opt) {
    if (!phi.is_cp(opt.tol.cp)) throw Error(ErrorKind::NotCP, "certify_phase_group needs a completely positive map");
    if (!phi.is_unital(opt.tol.residual)) throw Error(ErrorKind::PreconditionFailed, "certify_phase_group needs a unital map");
    const Tower& t = phi.tower();
    const auto& M = t.M();
    const Mat& A = phi.action();
    PhaseGroupCertificate c;
    auto& res = c.residuals;
    auto& vd = c.verdicts;
    auto verdict = [](bool ok) { return std::string(ok ? "pass" : "fail"); };

    c.spectrum = channel_spectrum(phi, opt.tol.phase);
    res["spectrum_routes"] = c.spectrum.route_residual;
    c.state = invariant_state(phi);
    if (!c.state.faithful) throw Error(ErrorKind::NoInvariantState, "no faithful invariant state");
    res["invariant_state"] = c.state.residual;

    double fit = 0.0;
    c.m = fit_root_group(c.spectrum.peripheral, M.dim(), kCluster, &fit);
    if (c.m == 0) throw Error(ErrorKind::GroupFitFailed, "peripheral spectrum is not a group of roots of unity");
    c.generator = root(1, c.m);
    res["root_fit"] = fit;
    double closure = 0.0;
    for (cplx a : c.spectrum.peripheral) {
        for (cplx b : c.spectrum.peripheral) {
            double best = 1e300;
            for (cplx z : c.spectrum.peripheral) best = std::min(best, std::abs(a * b - z));
            closure = std::max(closure, best);
        }
        double best = 1e300;
        for (cplx z : c.spectrum.peripheral) best = std::min(best, std::abs(std::conj(a) - z));
        closure = std::max(closure, best);
    }
    res["group_closure"] = closure;
    vd["phase_group_cyclic"] = verdict(fit < kCluster && closure < kCluster &&
                                       static_cast<int>(c.spectrum.peripheral.size()) == c.m);

    c.fixed = cesaro_fixed(phi, Rng(opt.seed).split(1).next_u64());
    res["cesaro_vs_riesz"] = c.fixed.residuals["cesaro_vs_riesz"];
    res["zeta_fixed"] = c.fixed.residuals["zeta_fixed"];

    double eig = 0.0, prel = 0.0, inter = 0.0, adj = 0.0, prod = 0.0, ks = 0.0, jordan = 0.0;
    for (int j = 0; j < c.m; ++j) {
        cplx a = root(j, c.m);
        c.eigenspaces.push_back(eigenspace(phi, a, &c.state));
        const auto& ck = c.eigenspaces.back().checks;
        auto get = [&](const char* k) { auto it = ck.find(k); return it == ck.end() ? 0.0 : it->second; };
        eig = std::max(eig, get("eigen"));
        prel = std::max({prel, get("p_relation"), get("p_relation_adjoint")});
        inter = std::max({inter, get("intertwining"), get("intertwining_dual")});
        adj = std::max(adj, get("adjoint_rule"));
        prod = std::max(prod, get("product_rule"));
        ks = std::max(ks, get("kadison_schwarz"));
        Mat Pa = la::riesz_projection_at(A, a, kCluster);
        const double rank = Pa.trace().real();
        jordan = std::max({jordan, la::opnorm((A - a * Mat::Identity(A.rows(), A.cols())) * Pa),
                           std::abs(rank - static_cast<double>(c.eigenspaces.back().basis.cols()))});
    }
    res["eigen"] = eig;
    res["p_relation"] = prel;
    res["intertwining"] = inter;
    res["adjoint_rule"] = adj;
    res["product_rule"] = prod;
    res["kadison_schwarz"] = ks;
    res["peripheral_jordan"] = jordan;
    vd["eigenspace_characterization"] = verdict(prel < 1e-8 && inter < 1e-8);
    vd["adjoint_rule"] = verdict(adj < 1e-8);
    vd["product_rule"] = verdict(prod < 1e-8);
    vd["kadison_schwarz"] = verdict(ks < 1e-8);
    vd["peripheral_semisimple"] = verdict(jordan < 1e-8);

    const Mat& fixed = c.eigenspaces[0].basis;
    bool is_alg = true;
    try {
        check_star_algebra(M, fixed, 1e-7);
    } catch (const Error&) {
        is_alg = false;
    }
    vd["fixed_is_algebra"] = verdict(is_alg);
    SubalgebraInfo info;
    if (is_alg) info = analyze_subalgebra(M, fixed);
    c.fixed_is_factor = is_alg && info.is_factor;
    const double to_n = la::subspace_distance(fixed, M.gns_matrix(n_image_units(t)));
    res["fixed_vs_N"] = to_n;
    c.fixed_equals_N = to_n < 1e-8;

    c.relirr = relative_irreducibility(phi, q, Rng(opt.seed).split(2).next_u64());
    vd["relative_irreducibility"] = c.relirr.mode;
    vd["relative_irreducibility_consistent"] = verdict(c.relirr.consistent);
    if (c.relirr.flag)
        vd["fixed_equals_N"] = t.N().is_factor() || c.fixed_equals_N ? verdict(c.fixed_equals_N)
                                                                     : "skipped: N is not a factor";
    else
        vd["fixed_equals_N"] = "skipped: not relatively irreducible";

    if (c.fixed_is_factor || c.fixed_equals_N) {
        double uu = 0.0, ue = 0.0, us = 0.0;
        for (int j = 0; j < c.m; ++j) {
            c.unitaries.push_back(unitary_generator(phi, root(j, c.m), c.eigenspaces[j], fixed,
                                                    Rng(opt.seed).split(100 + j).next_u64()));
            uu = std::max(uu, c.unitaries.back().unitarity);
            ue = std::max(ue, c.unitaries.back().eigen);
            us = std::max(us, c.unitaries.back().subspace);
        }
        double law = 0.0;
        for (int j = 0; j < c.m; ++j)
            for (int k = 0; k < c.m; ++k) {
                Element w = c.unitaries[j].u * c.unitaries[k].u;
                law = std::max(law, (phi.apply(w) - root(j + k, c.m) * w).norm_inf());
            }
        res["u_unitarity"] = uu;
        res["u_eigen"] = ue;
        res["u_subspace"] = us;
        res["u_group_law"] = law;
        vd["unitary_generators"] = verdict(uu < 1e-9 && ue < 1e-9 && us < 1e-8);
        vd["unitary_group_law"] = verdict(law < 1e-8);

        // m-fold products of M(Phi, omega) span M(Phi, 1)
        const auto& gen = c.eigenspaces[c.m > 1 ? 1 : 0];
        Mat span = gen.basis;
        for (int k = 1; k < c.m; ++k) {
            std::vector<Element> prods;
            for (const auto& s : M.elements_of(span))
                for (const auto& b : gen.elements) prods.push_back(s * b);
            span = la::orth(M.gns_matrix(prods), 1e-9);
        }
        res["power_span"] = la::subspace_distance(span, fixed, 1e-8);
        vd["power_span"] = verdict(res["power_span"] < 1e-7);
    } else {
        c.unitary_skipped = "fixed algebra not a factor";
        vd["unitary_generators"] = "skipped: fixed algebra not a factor";
        vd["unitary_group_law"] = "skipped: fixed algebra not a factor";
        vd["power_span"] = "skipped: fixed algebra not a factor";
    }
    return c;
}

CwResult collatz_wielandt_check(const Channel& phi, const Element& x, const CwRegime& regime) {
    if (!regime.trace_preserving && !regime.relirr_factor)
        throw Error(ErrorKind::HypothesisUnmet, "neither trace preservation nor relative irreducibility over a factor");
    const double r = max_abs(to_vector(la::eigenvalues(phi.action())));
    if (std::abs(r - 1.0) > 1e-8) throw Error(ErrorKind::RadiusNotOne, "spectral radius " + std::to_string(r));
    const auto& M = phi.tower().M();
    CwResult out;
    out.regime = regime;
    Element fx = phi.apply(x);
    const double scale = std::max(1.0, x.norm_inf());
    const bool below = M.min_eig((x - fx).hermitian_part()) >= -1e-9 * scale;
    const bool above = M.min_eig((fx - x).hermitian_part()) >= -1e-9 * scale;
    out.direction = below && above ? "both" : below ? "below" : above ? "above" : "none";
    out.gap = M.norm2(fx - x) / std::max(M.norm2(x), 1e-300);
    if (!below && !above) return out;
    out.verdict = out.gap < 1e-7 ? CwVerdict::Equality : CwVerdict::Violation;
    return out;
}

}  // namespace pgc
