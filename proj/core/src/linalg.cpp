#include "pgc/linalg.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace pgc::la {

Mat hermitian_part(const Mat& a) { return 0.5 * (a + a.adjoint()); }

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double opnorm(const Mat& a) {
    if (a.size() == 0) return 0.0;
    Eigen::BDCSVD<Mat> svd(a);
    return svd.singularValues()(0);
}

double min_eig_herm(const Mat& a) {
    if (a.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(a), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

Mat range_projection(const Mat& a, double tol) {
    if (a.size() == 0) return Mat::Zero(a.rows(), a.rows());
    Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    double cut = tol * std::max(1.0, s(0));
    int r = 0;
    while (r < s.size() && s(r) > cut) ++r;
    Mat u = svd.matrixU().leftCols(r);
    return u * u.adjoint();
}

Mat sqrt_psd(const Mat& a) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(a));
    RVec ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

Mat abs(const Mat& a) { return sqrt_psd(a.adjoint() * a); }

Mat polar_part(const Mat& a, double tol) {
    Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    double cut = tol * std::max(1.0, s.size() ? s(0) : 0.0);
    int r = 0;
    while (r < s.size() && s(r) > cut) ++r;
    return svd.matrixU().leftCols(r) * svd.matrixV().leftCols(r).adjoint();
}

bool is_normal(const Mat& a, double tol) {
    double scale = std::max(1.0, a.squaredNorm());
    return (a * a.adjoint() - a.adjoint() * a).norm() <= tol * scale;
}

Mat normal_calculus(const Mat& a, const std::function<cplx(cplx)>& f) {
    if (a.size() == 0) return a;
    Eigen::ComplexSchur<Mat> cs(a);
    const Mat& t = cs.matrixT();
    Vec d(t.rows());
    for (Eigen::Index i = 0; i < t.rows(); ++i) d(i) = f(t(i, i));
    return cs.matrixU() * d.asDiagonal() * cs.matrixU().adjoint();
}

Mat orth(const Mat& cols, double tol) {
    if (cols.cols() == 0) return Mat(cols.rows(), 0);
    Eigen::BDCSVD<Mat> svd(cols, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    double cut = tol * std::max(1.0, s(0));
    int r = 0;
    while (r < s.size() && s(r) > cut) ++r;
    return svd.matrixU().leftCols(r);
}

Mat null_space(const Mat& a, double tol) {
    const auto n = a.cols();
    if (a.rows() == 0) return Mat::Identity(n, n);
    Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    double cut = tol * std::max(1.0, s.size() ? s(0) : 0.0);
    int r = 0;
    while (r < s.size() && s(r) > cut) ++r;
    return svd.matrixV().rightCols(n - r);
}

double subspace_distance(const Mat& a, const Mat& b, double tol) {
    Mat qa = orth(a, tol);
    Mat qb = orth(b, tol);
    Mat diff = qa * qa.adjoint() - qb * qb.adjoint();
    Eigen::SelfAdjointEigenSolver<Mat> es(diff, Eigen::EigenvaluesOnly);
    if (diff.rows() == 0) return 0.0;
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<Cluster> cluster_eigenvalues(const Vec& ev, double radius) {
    const int n = static_cast<int>(ev.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(ev(i) - ev(j)) < radius) parent[find(i)] = find(j);
    std::vector<Cluster> out;
    std::vector<int> slot(n, -1);
    for (int i = 0; i < n; ++i) {
        int r = find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<int>(out.size());
            out.push_back({});
        }
        out[slot[r]].members.push_back(i);
    }
    for (auto& c : out) {
        cplx s = 0;
        for (int i : c.members) s += ev(i);
        c.center = s / static_cast<double>(c.members.size());
    }
    return out;
}

Vec eigenvalues(const Mat& a) {
    if (a.size() == 0) return Vec(0);
    Eigen::ComplexSchur<Mat> cs(a, false);
    return cs.matrixT().diagonal();
}

namespace {

// swap diagonal entries j, j+1 of an upper triangular t, keeping a = u t u*
void swap_adjacent(Mat& t, Mat& u, Eigen::Index j) {
    cplx a = t(j, j), b = t(j + 1, j + 1), c = t(j, j + 1);
    cplx x = c, y = b - a;
    double r = std::hypot(std::abs(x), std::abs(y));
    if (r == 0.0) return;
    cplx cs = x / r, sn = y / r;
    Eigen::Matrix2cd q;
    q << cs, -std::conj(sn), sn, std::conj(cs);
    t.middleRows(j, 2) = q.adjoint() * t.middleRows(j, 2);
    t.middleCols(j, 2) = t.middleCols(j, 2) * q;
    u.middleCols(j, 2) = u.middleCols(j, 2) * q;
    t(j + 1, j) = 0.0;
}

}  // namespace

Mat riesz_projection(const Mat& a, const std::function<bool(cplx)>& pick) {
    const Eigen::Index n = a.rows();
    if (n == 0) return a;
    Eigen::ComplexSchur<Mat> schur(a);
    Mat t = schur.matrixT();
    Mat u = schur.matrixU();

    std::vector<bool> sel(n);
    for (Eigen::Index i = 0; i < n; ++i) sel[i] = pick(t(i, i));
    Eigen::Index s = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (!sel[k]) continue;
        for (Eigen::Index j = k - 1; j >= s; --j) {
            swap_adjacent(t, u, j);
            std::swap(sel[j], sel[j + 1]);
        }
        ++s;
    }
    if (s == 0) return Mat::Zero(n, n);
    if (s == n) return Mat::Identity(n, n);

    const Eigen::Index m = n - s;
    Mat t11 = t.topLeftCorner(s, s);
    Mat t22 = t.bottomRightCorner(m, m);
    Mat t12 = t.topRightCorner(s, m);
    // t11 y - y t22 = t12, column by column
    Mat y(s, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        Vec rhs = t12.col(j);
        for (Eigen::Index k = 0; k < j; ++k) rhs += y.col(k) * t22(k, j);
        Mat shifted = t11 - t22(j, j) * Mat::Identity(s, s);
        y.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
    }
    Mat p = Mat::Zero(n, n);
    p.topLeftCorner(s, s).setIdentity();
    p.topRightCorner(s, m) = y;
    return u * p * u.adjoint();
}

Mat riesz_projection_at(const Mat& a, cplx center, double radius) {
    // widen to the whole cluster the center belongs to
    Vec ev = eigenvalues(a);
    auto clusters = cluster_eigenvalues(ev, radius);
    std::vector<cplx> chosen;
    for (const auto& c : clusters) {
        bool hit = false;
        for (int i : c.members) hit = hit || std::abs(ev(i) - center) < radius;
        if (hit)
            for (int i : c.members) chosen.push_back(ev(i));
    }
    return riesz_projection(a, [&](cplx z) {
        for (cplx c : chosen)
            if (std::abs(z - c) < radius) return true;
        return false;
    });
}

Mat commutant_basis(const std::vector<Mat>& gens, double tol) {
    if (gens.empty()) throw Error(ErrorKind::DimensionMismatch, "commutant of an empty family");
    const Eigen::Index d = gens.front().rows();
    std::vector<Mat> all;
    for (const auto& g : gens) {
        if (g.rows() != d || g.cols() != d) throw Error(ErrorKind::DimensionMismatch, "generators differ in size");
        all.push_back(g);
        all.push_back(g.adjoint());
    }
    const Eigen::Index dd = d * d;
    Mat stacked(dd * static_cast<Eigen::Index>(all.size()), dd);
    Mat id = Mat::Identity(d, d);
    for (size_t k = 0; k < all.size(); ++k) {
        // vec(gX - Xg) = (I (x) g - g^T (x) I) vec(X), column-major vec
        stacked.middleRows(static_cast<Eigen::Index>(k) * dd, dd) =
            kron(id, all[k]) - kron(all[k].transpose(), id);
    }
    return null_space(stacked, tol);
}

}  // namespace pgc::la
