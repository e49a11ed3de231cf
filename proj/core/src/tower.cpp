#include "pgc/tower.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "pgc/linalg.hpp"

namespace pgc {

const char* to_string(Side s) { return s == Side::Plus ? "plus" : "minus"; }

Embedding::Embedding(std::vector<int> small_sizes, std::vector<int> big_sizes, Eigen::MatrixXi lam,
                     std::vector<Mat> unitaries)
    : nb_(std::move(small_sizes)), sa_(std::move(big_sizes)), lam_(std::move(lam)), u_(std::move(unitaries)) {
    const int nN = static_cast<int>(nb_.size());
    const int nM = static_cast<int>(sa_.size());
    if (lam_.rows() != nN || lam_.cols() != nM)
        throw Error(ErrorKind::DimensionMismatch, "inclusion matrix shape does not match the block counts");
    off_.assign(nM, std::vector<int>(nN, 0));
    for (int a = 0; a < nM; ++a) {
        int off = 0;
        for (int i = 0; i < nN; ++i) {
            if (lam_(i, a) < 0) throw Error(ErrorKind::InvalidEmbedding, "negative multiplicity");
            off_[a][i] = off;
            off += lam_(i, a) * nb_[i];
        }
        if (off != sa_[a]) throw Error(ErrorKind::InvalidEmbedding, "embedding is not unital: multiplicities do not fill a block");
    }
    if (u_.empty()) {
        for (int n : sa_) u_.push_back(Mat::Identity(n, n));
        trivial_ = true;
    } else {
        if (static_cast<int>(u_.size()) != nM) throw Error(ErrorKind::DimensionMismatch, "one unitary per big block");
        trivial_ = true;
        for (int a = 0; a < nM; ++a) {
            if (u_[a].rows() != sa_[a] || u_[a].cols() != sa_[a])
                throw Error(ErrorKind::DimensionMismatch, "unitary has wrong size");
            if ((u_[a].adjoint() * u_[a] - Mat::Identity(sa_[a], sa_[a])).norm() > 1e-9)
                throw Error(ErrorKind::InvalidEmbedding, "block conjugation is not unitary");
            if ((u_[a] - Mat::Identity(sa_[a], sa_[a])).norm() > 1e-15) trivial_ = false;
        }
    }
    for (int a = 0; a < nM; ++a)
        for (int i = 0; i < nN; ++i)
            if (lam_(i, a) > 0) comm_.push_back({a, i, lam_(i, a)});
}

Element Embedding::apply(const Element& b) const {
    if (b.num_blocks() != static_cast<int>(nb_.size())) throw Error(ErrorKind::OwnerMismatch, "element is not in the small algebra");
    Element out;
    for (size_t a = 0; a < sa_.size(); ++a) {
        Mat d = Mat::Zero(sa_[a], sa_[a]);
        for (size_t i = 0; i < nb_.size(); ++i)
            for (int k = 0; k < lam_(i, a); ++k) {
                int p = off_[a][i] + k * nb_[i];
                d.block(p, p, nb_[i], nb_[i]) = b.blocks[i];
            }
        out.blocks.push_back(trivial_ ? d : Mat(u_[a] * d * u_[a].adjoint()));
    }
    return out;
}

std::vector<double> Embedding::pull_weights(const std::vector<double>& wa) const {
    std::vector<double> wb(nb_.size(), 0.0);
    for (size_t i = 0; i < nb_.size(); ++i)
        for (size_t a = 0; a < sa_.size(); ++a) wb[i] += lam_(i, a) * wa[a];
    return wb;
}

Element Embedding::cond_exp(const Element& x, const std::vector<double>& wa) const {
    if (x.num_blocks() != static_cast<int>(sa_.size())) throw Error(ErrorKind::OwnerMismatch, "element is not in the big algebra");
    auto wb = pull_weights(wa);
    Element out;
    for (int n : nb_) out.blocks.push_back(Mat::Zero(n, n));
    for (size_t a = 0; a < sa_.size(); ++a) {
        Mat xt = trivial_ ? x.blocks[a] : Mat(u_[a].adjoint() * x.blocks[a] * u_[a]);
        for (size_t i = 0; i < nb_.size(); ++i)
            for (int k = 0; k < lam_(i, a); ++k) {
                int p = off_[a][i] + k * nb_[i];
                out.blocks[i] += (wa[a] / wb[i]) * xt.block(p, p, nb_[i], nb_[i]);
            }
    }
    return out;
}

std::vector<int> Embedding::comm_sizes() const {
    std::vector<int> s;
    for (const auto& c : comm_) s.push_back(c.size);
    return s;
}

Element Embedding::comm_embed(const Element& c) const {
    if (c.num_blocks() != static_cast<int>(comm_.size())) throw Error(ErrorKind::OwnerMismatch, "not a relative commutant element");
    std::vector<Mat> d;
    for (int n : sa_) d.push_back(Mat::Zero(n, n));
    for (size_t k = 0; k < comm_.size(); ++k) {
        const auto& cb = comm_[k];
        const int n = nb_[cb.i];
        const int p = off_[cb.a][cb.i];
        d[cb.a].block(p, p, cb.size * n, cb.size * n) = la::kron(c.blocks[k], Mat::Identity(n, n));
    }
    Element out;
    for (size_t a = 0; a < sa_.size(); ++a)
        out.blocks.push_back(trivial_ ? d[a] : Mat(u_[a] * d[a] * u_[a].adjoint()));
    return out;
}

Element Embedding::comm_project(const Element& x) const {
    if (x.num_blocks() != static_cast<int>(sa_.size())) throw Error(ErrorKind::OwnerMismatch, "element is not in the big algebra");
    std::vector<Mat> xt;
    for (size_t a = 0; a < sa_.size(); ++a)
        xt.push_back(trivial_ ? x.blocks[a] : Mat(u_[a].adjoint() * x.blocks[a] * u_[a]));
    Element out;
    for (const auto& cb : comm_) {
        const int n = nb_[cb.i];
        const int p = off_[cb.a][cb.i];
        Mat y = Mat::Zero(cb.size, cb.size);
        for (int k = 0; k < cb.size; ++k)
            for (int l = 0; l < cb.size; ++l) {
                cplx s = 0.0;
                for (int r = 0; r < n; ++r) s += xt[cb.a](p + k * n + r, p + l * n + r);
                y(k, l) = s / static_cast<double>(n);
            }
        out.blocks.push_back(y);
    }
    return out;
}

Embedding compose(const Embedding& inner, const Embedding& outer) {
    if (inner.big_sizes() != outer.small_sizes())
        throw Error(ErrorKind::DimensionMismatch, "embeddings do not compose");
    const auto& nb = inner.small_sizes();
    const auto& sa = inner.big_sizes();
    const auto& sc = outer.big_sizes();
    const Eigen::MatrixXi& l1 = inner.inclusion_matrix();
    const Eigen::MatrixXi& l2 = outer.inclusion_matrix();
    Eigen::MatrixXi lam = l1 * l2;
    const int nB = static_cast<int>(nb.size()), nA = static_cast<int>(sa.size()), nC = static_cast<int>(sc.size());

    std::vector<Mat> us;
    for (int c = 0; c < nC; ++c) {
        const int S = sc[c];
        Mat v = Mat::Zero(S, S);
        Mat perm = Mat::Zero(S, S);
        std::vector<int> std_off(nB, 0);
        for (int i = 1; i < nB; ++i) std_off[i] = std_off[i - 1] + lam(i - 1, c) * nb[i - 1];
        for (int a = 0; a < nA; ++a)
            for (int lp = 0; lp < l2(a, c); ++lp) {
                const int base = outer.offset(c, a) + lp * sa[a];
                v.block(base, base, sa[a], sa[a]) = inner.unitary(a);
            }
        for (int i = 0; i < nB; ++i) {
            int k = 0;
            for (int a = 0; a < nA; ++a)
                for (int lp = 0; lp < l2(a, c); ++lp)
                    for (int l = 0; l < l1(i, a); ++l, ++k)
                        for (int r = 0; r < nb[i]; ++r) {
                            int cat = outer.offset(c, a) + lp * sa[a] + inner.offset(a, i) + l * nb[i] + r;
                            int st = std_off[i] + k * nb[i] + r;
                            perm(cat, st) = 1.0;
                        }
        }
        us.push_back(outer.unitary(c) * v * perm);
    }
    return Embedding(nb, sc, lam, us);
}

Embedding embedding_from_images(const std::vector<int>& small_sizes, const std::vector<int>& big_sizes,
                                const std::vector<std::vector<Element>>& images, double tol) {
    const int nB = static_cast<int>(small_sizes.size());
    const int nA = static_cast<int>(big_sizes.size());
    if (static_cast<int>(images.size()) != nB) throw Error(ErrorKind::InvalidEmbedding, "need images for every block");
    auto shape_ok = [&](const Element& x) {
        if (x.num_blocks() != nA) return false;
        for (int a = 0; a < nA; ++a)
            if (x.blocks[a].rows() != big_sizes[a] || x.blocks[a].cols() != big_sizes[a]) return false;
        return true;
    };
    auto img = [&](int i, int r, int c) -> const Element& { return images[i][r * small_sizes[i] + c]; };
    for (int i = 0; i < nB; ++i) {
        const int n = small_sizes[i];
        if (static_cast<int>(images[i].size()) != n * n) throw Error(ErrorKind::InvalidEmbedding, "need n^2 images per block");
        for (const auto& x : images[i])
            if (!shape_ok(x)) throw Error(ErrorKind::DimensionMismatch, "image has wrong shape");
    }
    // *-homomorphism relations on matrix units
    Element unit_sum;
    for (int i = 0; i < nB; ++i) {
        const int n = small_sizes[i];
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                if ((img(i, r, c).adjoint() - img(i, c, r)).norm_inf() > tol)
                    throw Error(ErrorKind::InvalidEmbedding, "images do not respect the adjoint");
                for (int j = 0; j < nB; ++j)
                    for (int r2 = 0; r2 < small_sizes[j]; ++r2)
                        for (int c2 = 0; c2 < small_sizes[j]; ++c2) {
                            Element prod = img(i, r, c) * img(j, r2, c2);
                            Element want = (i == j && c == r2) ? img(i, r, c2) : 0.0 * prod;
                            if ((prod - want).norm_inf() > tol)
                                throw Error(ErrorKind::InvalidEmbedding, "images are not multiplicative");
                        }
            }
        for (int r = 0; r < n; ++r) unit_sum = unit_sum.blocks.empty() ? img(i, r, r) : unit_sum + img(i, r, r);
    }
    for (int a = 0; a < nA; ++a)
        if ((unit_sum.blocks[a] - Mat::Identity(big_sizes[a], big_sizes[a])).norm() > tol)
            throw Error(ErrorKind::InvalidEmbedding, "embedding is not unital");

    Eigen::MatrixXi lam(nB, nA);
    for (int i = 0; i < nB; ++i)
        for (int a = 0; a < nA; ++a)
            lam(i, a) = static_cast<int>(std::lround(img(i, 0, 0).blocks[a].trace().real()));
    std::vector<Mat> us;
    for (int a = 0; a < nA; ++a) {
        Mat u = Mat::Zero(big_sizes[a], big_sizes[a]);
        int off = 0;
        for (int i = 0; i < nB; ++i) {
            const int n = small_sizes[i];
            const int L = lam(i, a);
            if (L == 0) continue;
            Eigen::SelfAdjointEigenSolver<Mat> es(la::hermitian_part(img(i, 0, 0).blocks[a]));
            Mat basis = es.eigenvectors().rightCols(L);
            for (int k = 0; k < L; ++k)
                for (int r = 0; r < n; ++r) u.col(off + k * n + r) = img(i, r, 0).blocks[a] * basis.col(k);
            off += L * n;
        }
        if (off != big_sizes[a]) throw Error(ErrorKind::InvalidEmbedding, "multiplicities do not fill a block");
        us.push_back(u);
    }
    return Embedding(small_sizes, big_sizes, lam, us);
}

void check_inclusion_matrix(const Eigen::MatrixXi& lam, const std::vector<int>& n_sizes,
                            const std::vector<int>& m_sizes) {
    const int nN = static_cast<int>(n_sizes.size()), nM = static_cast<int>(m_sizes.size());
    if (lam.rows() != nN || lam.cols() != nM) throw Error(ErrorKind::DimensionMismatch, "inclusion matrix shape");
    for (int i = 0; i < nN; ++i) {
        if (lam.row(i).sum() == 0) throw Error(ErrorKind::ZeroRow, "block " + std::to_string(i) + " of N is not embedded");
        for (int a = 0; a < nM; ++a)
            if (lam(i, a) < 0) throw Error(ErrorKind::InvalidEmbedding, "negative multiplicity");
    }
    for (int a = 0; a < nM; ++a) {
        int s = 0;
        for (int i = 0; i < nN; ++i) s += lam(i, a) * n_sizes[i];
        if (s != m_sizes[a]) throw Error(ErrorKind::InvalidEmbedding, "multiplicities do not fill block " + std::to_string(a) + " of M");
    }
}

namespace {

bool connected(const Eigen::MatrixXi& lam) {
    const int nN = static_cast<int>(lam.rows()), nM = static_cast<int>(lam.cols());
    std::vector<int> seen(nN + nM, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w = 0; w < nN + nM; ++w) {
            if (seen[w]) continue;
            bool edge = (v < nN && w >= nN && lam(v, w - nN) > 0) || (v >= nN && w < nN && lam(w, v - nN) > 0);
            if (edge) {
                seen[w] = 1;
                stack.push_back(w);
            }
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
}

}  // namespace

MarkovData markov_weights(const Eigen::MatrixXi& lam, const std::vector<int>& m_sizes) {
    if (!connected(lam)) throw Error(ErrorKind::DisconnectedDiagram, "Bratteli diagram is disconnected");
    Eigen::MatrixXd L = lam.cast<double>();
    Eigen::MatrixXd G = L.transpose() * L;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    MarkovData d;
    d.mu = es.eigenvalues()(es.eigenvalues().size() - 1);
    Eigen::VectorXd t = es.eigenvectors().col(es.eigenvalues().size() - 1).cwiseAbs();
    double z = 0.0;
    for (int a = 0; a < t.size(); ++a) z += t(a) * m_sizes[a];
    t /= z;
    Eigen::VectorXd tn = L * t;
    d.wM.assign(t.data(), t.data() + t.size());
    d.wN.assign(tn.data(), tn.data() + tn.size());
    return d;
}

Inclusion make_inclusion(const std::vector<int>& n_sizes, const std::vector<int>& m_sizes, const Eigen::MatrixXi& lam,
                         const std::vector<Mat>& unitaries, const std::vector<double>& m_weights) {
    check_inclusion_matrix(lam, n_sizes, m_sizes);
    std::vector<double> wM = m_weights;
    if (wM.empty()) wM = markov_weights(lam, m_sizes).wM;
    MultiMatrixAlgebra M(m_sizes, wM);
    Embedding emb(n_sizes, m_sizes, lam, unitaries);
    MultiMatrixAlgebra N(n_sizes, emb.pull_weights(wM));
    return {N, M, emb};
}

Inclusion scalars_in_full(int n) {
    Eigen::MatrixXi lam(1, 1);
    lam(0, 0) = n;
    return make_inclusion({1}, {n}, lam);
}

Inclusion diagonal_in_full(int n) {
    Eigen::MatrixXi lam = Eigen::MatrixXi::Ones(n, 1);
    return make_inclusion(std::vector<int>(n, 1), {n}, lam);
}

Inclusion equal_inclusion(const std::vector<int>& sizes) {
    const int k = static_cast<int>(sizes.size());
    Eigen::MatrixXi lam = Eigen::MatrixXi::Identity(k, k);
    std::vector<double> w;
    int tot = 0;
    for (int n : sizes) tot += n;
    for (size_t i = 0; i < sizes.size(); ++i) w.push_back(1.0 / tot);
    return make_inclusion(sizes, sizes, lam, {}, w);
}

Mat BasicConstruction::realize(const Element& x) const {
    C.check(x);
    const Eigen::Index d = W.front().rows();
    Mat out = Mat::Zero(d, d);
    const auto& nb = a_in_c.big_sizes();
    (void)nb;
    for (int i = 0; i < C.num_blocks(); ++i) {
        const int n = static_cast<int>(W[i].cols()) / C.block_size(i);
        out += W[i] * la::kron(x.blocks[i], Mat::Identity(n, n)) * W[i].adjoint();
    }
    return out;
}

Element BasicConstruction::pull(const Mat& op) const {
    Element out;
    for (int i = 0; i < C.num_blocks(); ++i) {
        const int S = C.block_size(i);
        const int n = static_cast<int>(W[i].cols()) / S;
        Mat z = W[i].adjoint() * op * W[i];
        Mat y(S, S);
        for (int p = 0; p < S; ++p)
            for (int q = 0; q < S; ++q) {
                cplx s = 0.0;
                for (int c = 0; c < n; ++c) s += z(p * n + c, q * n + c);
                y(p, q) = s / static_cast<double>(n);
            }
        out.blocks.push_back(y);
    }
    return out;
}

double BasicConstruction::pull_residual(const Mat& op, const Element& x) const {
    return (realize(x) - op).norm() / std::max(1.0, op.norm());
}

BasicConstruction basic_construction(const Embedding& b_in_a, const MultiMatrixAlgebra& A, const MultiMatrixAlgebra& B) {
    const auto& nb = b_in_a.small_sizes();
    const auto& sa = b_in_a.big_sizes();
    const Eigen::MatrixXi& lam = b_in_a.inclusion_matrix();
    const int nB = static_cast<int>(nb.size()), nA = static_cast<int>(sa.size());
    if (A.sizes() != sa || B.sizes() != nb) throw Error(ErrorKind::DimensionMismatch, "embedding does not match the algebras");

    BasicConstruction bc;
    std::vector<int> S(nB, 0);
    for (int i = 0; i < nB; ++i)
        for (int a = 0; a < nA; ++a) S[i] += lam(i, a) * sa[a];

    const auto& wB = B.weights();
    double Z = 0.0;
    for (int i = 0; i < nB; ++i) Z += wB[i] * S[i];
    std::vector<double> t(nB);
    for (int i = 0; i < nB; ++i) t[i] = wB[i] / Z;
    bc.C = MultiMatrixAlgebra(S, t);
    bc.a_in_c = Embedding(sa, S, lam.transpose());

    const int D = A.dim();
    for (int i = 0; i < nB; ++i) {
        const int n = nb[i];
        Mat w = Mat::Zero(D, S[i] * n);
        int idx = 0;
        for (int a = 0; a < nA; ++a) {
            const Mat& u = b_in_a.unitary(a);
            for (int l = 0; l < lam(i, a); ++l)
                for (int r = 0; r < sa[a]; ++r, ++idx)
                    for (int c = 0; c < n; ++c) {
                        const int pos = b_in_a.offset(a, i) + l * n + c;
                        for (int cp = 0; cp < sa[a]; ++cp)
                            w(A.gns_offset(a) + r * sa[a] + cp, idx * n + c) = std::conj(u(cp, pos));
                    }
        }
        bc.W.push_back(w);
    }

    // Jones projection: onto the closure of iota(B) Omega
    bc.e_op = Mat::Zero(D, D);
    for (int i = 0; i < nB; ++i)
        for (int r = 0; r < nb[i]; ++r)
            for (int c = 0; c < nb[i]; ++c) {
                Vec v = A.to_gns(b_in_a.apply(B.unit(i, r, c)));
                bc.e_op += v * v.adjoint() / wB[i];
            }
    bc.e = bc.pull(bc.e_op);
    bc.lambda = bc.C.trace(bc.e).real();

    Element ea = bc.a_in_c.cond_exp(bc.e, t);
    double res = (ea - bc.lambda * A.identity()).norm_inf();
    auto back = bc.a_in_c.pull_weights(t);
    for (int a = 0; a < nA; ++a) res = std::max(res, std::abs(back[a] - A.weight(a)) / A.weight(a));
    bc.markov_residual = res;
    bc.markov = res < 1e-9;
    return bc;
}

Tower::Tower(const Inclusion& inc, const TowerOptions& opt) : inc_(inc) {
    bc1_ = basic_construction(inc_.emb, inc_.M, inc_.N);
    markov_ = bc1_.markov;
    if (!markov_ && opt.require_markov)
        throw Error(ErrorKind::TraceNotMarkov, "E_M(e1) is not a scalar (residual " + std::to_string(bc1_.markov_residual) + ")");
    mu_ = 1.0 / bc1_.lambda;
    n_in_m1_ = compose(inc_.emb, bc1_.a_in_c);

    auto plus_weights = [&](const Embedding& e, const MultiMatrixAlgebra& amb) {
        std::vector<double> w;
        for (const auto& cb : e.comm_blocks()) w.push_back(mu_ * amb.weight(cb.a) * e.small_sizes()[cb.i]);
        return w;
    };
    plus_.side = Side::Plus;
    plus_.emb = &n_in_m1_;
    plus_.ambient = &bc1_.C;
    plus_.P = MultiMatrixAlgebra::with_weights(n_in_m1_.comm_sizes(), plus_weights(n_in_m1_, bc1_.C));
    if (!markov_) return;

    bc2_ = basic_construction(bc1_.a_in_c, bc1_.C, inc_.M);
    if (!bc2_->markov || std::abs(bc2_->lambda - bc1_.lambda) > opt.tol * std::max(1.0, bc1_.lambda))
        throw Error(ErrorKind::TraceNotMarkov, "second basic construction is not Markov");
    m_in_m2_ = compose(bc1_.a_in_c, bc2_->a_in_c);
    minus_.side = Side::Minus;
    minus_.emb = &*m_in_m2_;
    minus_.ambient = &bc2_->C;
    minus_.P = MultiMatrixAlgebra::with_weights(m_in_m2_->comm_sizes(), plus_weights(*m_in_m2_, bc2_->C));
}

const Element& Tower::e2() const {
    if (!bc2_) throw Error(ErrorKind::LevelMismatch, "tower has no second level (trace not Markov)");
    return bc2_->e;
}

const TwoBoxSpace& Tower::minus() const {
    if (!bc2_) throw Error(ErrorKind::LevelMismatch, "tower has no second level (trace not Markov)");
    return minus_;
}

int Tower::dim_minus() const { return minus().P.dim(); }

const std::vector<Element>& Tower::pp_basis() const {
    std::call_once(pp_once_, [this] { build_pp(); });
    return pp_;
}

void Tower::build_pp() const {
    const auto& emb = inc_.emb;
    const auto& wM = M().weights();
    std::vector<Element> basis;
    for (const auto& x : M().matrix_units()) {
        Element r = x;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& eta : basis) r -= emb.apply(emb.cond_exp(r * eta.adjoint(), wM)) * eta;
        Element a = emb.cond_exp(r * r.adjoint(), wM);
        if (a.norm_inf() < 1e-10) continue;
        Element inv_sqrt;
        for (const auto& b : a.blocks) {
            Eigen::SelfAdjointEigenSolver<Mat> es(la::hermitian_part(b));
            RVec ev = es.eigenvalues();
            RVec f(ev.size());
            for (Eigen::Index k = 0; k < ev.size(); ++k) f(k) = ev(k) > 1e-10 ? 1.0 / std::sqrt(ev(k)) : 0.0;
            inv_sqrt.blocks.push_back(es.eigenvectors() * f.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint());
        }
        basis.push_back(emb.apply(inv_sqrt) * r);
    }
    if (reconstruction_residual(basis) > 1e-8)
        throw Error(ErrorKind::BasisConstructionFailed, "Pimsner-Popa basis does not reconstruct");
    pp_ = basis;
}

const MultiplierSystem& Tower::multiplier_system() const {
    std::call_once(mult_once_, [this] {
        auto units = M().matrix_units();
        std::vector<Element> lifted;
        for (const auto& u : units) lifted.push_back(M_in_M1().apply(u));
        const auto K = static_cast<Eigen::Index>(units.size() * units.size());
        Mat S(M1().dim(), K);
        Eigen::Index col = 0;
        for (const auto& x : lifted) {
            Element xe = x * e1();
            for (const auto& y : lifted) S.col(col++) = M1().to_gns(xe * y);
        }
        Eigen::CompleteOrthogonalDecomposition<Mat> cod(S);
        cod.setThreshold(1e-10);
        mult_.rank = static_cast<int>(cod.rank());
        if (mult_.rank != M1().dim())
            throw Error(ErrorKind::SpanningSetDeficient, "M e1 M does not span L2(M1)");
        mult_.pinv = cod.pseudoInverse();
        mult_.S = std::move(S);
    });
    return mult_;
}

double Tower::reconstruction_residual(const std::vector<Element>& basis) const {
    const auto& emb = inc_.emb;
    const auto& wM = M().weights();
    double res = 0.0;
    for (const auto& x : M().matrix_units()) {
        Element r = x;
        for (const auto& eta : basis) r -= emb.apply(emb.cond_exp(x * eta.adjoint(), wM)) * eta;
        res = std::max(res, r.norm_inf());
    }
    Element s = M1().zero();
    for (const auto& eta : basis) {
        Element h = M_in_M1().apply(eta);
        s += h.adjoint() * e1() * h;
    }
    return std::max(res, (s - M1().identity()).norm_inf());
}

double Tower::pp_reconstruction_residual() const { return reconstruction_residual(pp_basis()); }

double Tower::pp_index_sum() const {
    double s = 0.0;
    for (const auto& eta : pp_basis()) s += M().trace(eta * eta.adjoint()).real();
    return s;
}

}  // namespace pgc
