#include "pgc/algebra.hpp"

#include <cmath>

#include "pgc/linalg.hpp"
#include "pgc/rng.hpp"

namespace pgc {

bool Element::same_shape(const Element& o) const {
    if (blocks.size() != o.blocks.size()) return false;
    for (size_t i = 0; i < blocks.size(); ++i)
        if (blocks[i].rows() != o.blocks[i].rows() || blocks[i].cols() != o.blocks[i].cols()) return false;
    return true;
}

Element Element::adjoint() const {
    Element out;
    out.blocks.reserve(blocks.size());
    for (const auto& b : blocks) out.blocks.push_back(b.adjoint());
    return out;
}

Element Element::hermitian_part() const {
    Element out;
    for (const auto& b : blocks) out.blocks.push_back(la::hermitian_part(b));
    return out;
}

double Element::norm_inf() const {
    double m = 0.0;
    for (const auto& b : blocks) m = std::max(m, la::opnorm(b));
    return m;
}

double Element::frob() const {
    double s = 0.0;
    for (const auto& b : blocks) s += b.squaredNorm();
    return std::sqrt(s);
}

Element& Element::operator+=(const Element& o) {
    if (!same_shape(o)) throw Error(ErrorKind::OwnerMismatch, "elements live in different algebras");
    for (size_t i = 0; i < blocks.size(); ++i) blocks[i] += o.blocks[i];
    return *this;
}

Element& Element::operator-=(const Element& o) {
    if (!same_shape(o)) throw Error(ErrorKind::OwnerMismatch, "elements live in different algebras");
    for (size_t i = 0; i < blocks.size(); ++i) blocks[i] -= o.blocks[i];
    return *this;
}

Element& Element::operator*=(cplx s) {
    for (auto& b : blocks) b *= s;
    return *this;
}

Element operator+(Element a, const Element& b) { return a += b; }
Element operator-(Element a, const Element& b) { return a -= b; }
Element operator*(cplx s, Element a) { return a *= s; }
Element operator*(double s, Element a) { return a *= cplx(s, 0.0); }

Element operator*(const Element& a, const Element& b) {
    if (!a.same_shape(b)) throw Error(ErrorKind::OwnerMismatch, "elements live in different algebras");
    Element out;
    out.blocks.reserve(a.blocks.size());
    for (size_t i = 0; i < a.blocks.size(); ++i) out.blocks.push_back(a.blocks[i] * b.blocks[i]);
    return out;
}

MultiMatrixAlgebra::MultiMatrixAlgebra(std::vector<int> sizes, std::vector<double> weights,
                                       std::vector<std::string> labels)
    : sizes_(std::move(sizes)), weights_(std::move(weights)), labels_(std::move(labels)) {
    init(true);
}

MultiMatrixAlgebra MultiMatrixAlgebra::with_weights(std::vector<int> sizes, std::vector<double> weights) {
    MultiMatrixAlgebra a;
    a.sizes_ = std::move(sizes);
    a.weights_ = std::move(weights);
    a.init(false);
    return a;
}

void MultiMatrixAlgebra::init(bool check_normalized) {
    if (sizes_.empty()) throw Error(ErrorKind::EmptyAlgebra, "no blocks");
    for (int n : sizes_)
        if (n < 1) throw Error(ErrorKind::EmptyAlgebra, "block of size < 1");
    if (weights_.size() != sizes_.size()) throw Error(ErrorKind::DimensionMismatch, "one weight per block");
    double total = 0.0;
    for (size_t i = 0; i < sizes_.size(); ++i) {
        if (!(weights_[i] > 0.0)) throw Error(ErrorKind::NonNormalizedTrace, "weights must be positive");
        total += weights_[i] * sizes_[i];
    }
    if (check_normalized && std::abs(total - 1.0) > 1e-12) throw Error(ErrorKind::NonNormalizedTrace, "tau(1) != 1");
    if (labels_.empty())
        for (size_t i = 0; i < sizes_.size(); ++i) labels_.push_back("b" + std::to_string(i));
    int off = 0;
    for (int n : sizes_) {
        gns_off_.push_back(off);
        off += n * n;
    }
}

int MultiMatrixAlgebra::total_size() const {
    int s = 0;
    for (int n : sizes_) s += n;
    return s;
}

int MultiMatrixAlgebra::dim() const {
    int s = 0;
    for (int n : sizes_) s += n * n;
    return s;
}

Element MultiMatrixAlgebra::zero() const {
    Element x;
    for (int n : sizes_) x.blocks.push_back(Mat::Zero(n, n));
    return x;
}

Element MultiMatrixAlgebra::identity() const {
    Element x;
    for (int n : sizes_) x.blocks.push_back(Mat::Identity(n, n));
    return x;
}

Element MultiMatrixAlgebra::unit(int block, int r, int c) const {
    Element x = zero();
    x.blocks[block](r, c) = 1.0;
    return x;
}

std::vector<Element> MultiMatrixAlgebra::matrix_units() const {
    std::vector<Element> out;
    for (int i = 0; i < num_blocks(); ++i)
        for (int r = 0; r < sizes_[i]; ++r)
            for (int c = 0; c < sizes_[i]; ++c) out.push_back(unit(i, r, c));
    return out;
}

bool MultiMatrixAlgebra::owns(const Element& x) const {
    if (x.num_blocks() != num_blocks()) return false;
    for (int i = 0; i < num_blocks(); ++i)
        if (x.blocks[i].rows() != sizes_[i] || x.blocks[i].cols() != sizes_[i]) return false;
    return true;
}

void MultiMatrixAlgebra::check(const Element& x) const {
    if (!owns(x)) throw Error(ErrorKind::OwnerMismatch, "element does not belong to this algebra");
}

cplx MultiMatrixAlgebra::trace(const Element& x) const {
    check(x);
    cplx s = 0.0;
    for (int i = 0; i < num_blocks(); ++i) s += weights_[i] * x.blocks[i].trace();
    return s;
}

cplx MultiMatrixAlgebra::inner(const Element& x, const Element& y) const {
    check(x);
    check(y);
    cplx s = 0.0;
    for (int i = 0; i < num_blocks(); ++i) s += weights_[i] * (x.blocks[i].adjoint() * y.blocks[i]).trace();
    return s;
}

double MultiMatrixAlgebra::norm1(const Element& x) const { return trace(abs(x)).real(); }

double MultiMatrixAlgebra::norm2(const Element& x) const { return std::sqrt(std::max(0.0, inner(x, x).real())); }

Vec MultiMatrixAlgebra::to_gns(const Element& x) const {
    check(x);
    Vec v(dim());
    for (int i = 0; i < num_blocks(); ++i) {
        const int n = sizes_[i];
        const double s = std::sqrt(weights_[i]);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) v(gns_off_[i] + r * n + c) = s * x.blocks[i](r, c);
    }
    return v;
}

Element MultiMatrixAlgebra::from_gns(const Vec& v) const {
    if (v.size() != dim()) throw Error(ErrorKind::DimensionMismatch, "GNS vector has wrong length");
    Element x = zero();
    for (int i = 0; i < num_blocks(); ++i) {
        const int n = sizes_[i];
        const double s = 1.0 / std::sqrt(weights_[i]);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) x.blocks[i](r, c) = s * v(gns_off_[i] + r * n + c);
    }
    return x;
}

Mat MultiMatrixAlgebra::left_op(const Element& x) const {
    check(x);
    Mat out = Mat::Zero(dim(), dim());
    for (int i = 0; i < num_blocks(); ++i) {
        const int n = sizes_[i];
        out.block(gns_off_[i], gns_off_[i], n * n, n * n) = la::kron(x.blocks[i], Mat::Identity(n, n));
    }
    return out;
}

Mat MultiMatrixAlgebra::right_op(const Element& x) const {
    check(x);
    Mat out = Mat::Zero(dim(), dim());
    for (int i = 0; i < num_blocks(); ++i) {
        const int n = sizes_[i];
        out.block(gns_off_[i], gns_off_[i], n * n, n * n) = la::kron(Mat::Identity(n, n), x.blocks[i].transpose());
    }
    return out;
}

Vec MultiMatrixAlgebra::modular_conj(const Vec& v) const { return to_gns(from_gns(v).adjoint()); }

Mat MultiMatrixAlgebra::to_full(const Element& x) const {
    check(x);
    const int t = total_size();
    Mat m = Mat::Zero(t, t);
    int off = 0;
    for (int i = 0; i < num_blocks(); ++i) {
        m.block(off, off, sizes_[i], sizes_[i]) = x.blocks[i];
        off += sizes_[i];
    }
    return m;
}

Element MultiMatrixAlgebra::from_full(const Mat& m, double tol) const {
    const int t = total_size();
    if (m.rows() != t || m.cols() != t) throw Error(ErrorKind::DimensionMismatch, "matrix does not match the defining representation");
    Element x;
    Mat rest = m;
    int off = 0;
    for (int i = 0; i < num_blocks(); ++i) {
        x.blocks.push_back(m.block(off, off, sizes_[i], sizes_[i]));
        rest.block(off, off, sizes_[i], sizes_[i]).setZero();
        off += sizes_[i];
    }
    if (rest.norm() > tol * std::max(1.0, m.norm()))
        throw Error(ErrorKind::DoesNotPreserveM, "matrix has off-block entries");
    return x;
}

double MultiMatrixAlgebra::min_eig(const Element& x) const {
    check(x);
    double m = 1e300;
    for (const auto& b : x.blocks) m = std::min(m, la::min_eig_herm(b));
    return m;
}

bool MultiMatrixAlgebra::is_projection(const Element& x, double tol) const {
    check(x);
    double scale = std::max(1.0, x.norm_inf());
    return (x - x.adjoint()).norm_inf() <= tol * scale && (x * x - x).norm_inf() <= tol * scale;
}

Element MultiMatrixAlgebra::range_projection(const Element& x, double tol) const {
    check(x);
    // one threshold for the whole element, relative to its norm
    double scale = std::max(1.0, x.norm_inf());
    Element out;
    for (const auto& b : x.blocks) {
        Eigen::BDCSVD<Mat> svd(b, Eigen::ComputeThinU);
        const auto& s = svd.singularValues();
        int r = 0;
        while (r < s.size() && s(r) > tol * scale) ++r;
        Mat u = svd.matrixU().leftCols(r);
        out.blocks.push_back(u * u.adjoint());
    }
    return out;
}

Element MultiMatrixAlgebra::sqrt_psd(const Element& x) const {
    check(x);
    Element out;
    for (const auto& b : x.blocks) out.blocks.push_back(la::sqrt_psd(b));
    return out;
}

Element MultiMatrixAlgebra::abs(const Element& x) const {
    check(x);
    Element out;
    for (const auto& b : x.blocks) out.blocks.push_back(la::abs(b));
    return out;
}

Element MultiMatrixAlgebra::polar_part(const Element& x, double tol) const {
    check(x);
    Element out;
    for (const auto& b : x.blocks) out.blocks.push_back(la::polar_part(b, tol));
    return out;
}

Element MultiMatrixAlgebra::inverse(const Element& x) const {
    check(x);
    Element out;
    for (const auto& b : x.blocks) {
        Eigen::FullPivLU<Mat> lu(b);
        if (!lu.isInvertible()) throw Error(ErrorKind::SingularUnit, "element is not invertible");
        out.blocks.push_back(lu.inverse());
    }
    return out;
}

Element MultiMatrixAlgebra::random(Rng& rng) const {
    Element x;
    for (int n : sizes_) x.blocks.push_back(rng.gaussian(n, n));
    return x;
}

Element MultiMatrixAlgebra::random_hermitian(Rng& rng) const { return random(rng).hermitian_part(); }

Element MultiMatrixAlgebra::random_projection(Rng& rng) const {
    Element x;
    for (int n : sizes_) {
        int r = rng.uniform_int(0, n);
        Mat g = rng.gaussian(n, std::max(r, 1));
        if (r == 0) {
            x.blocks.push_back(Mat::Zero(n, n));
            continue;
        }
        x.blocks.push_back(la::range_projection(g));
    }
    return x;
}

std::vector<Element> MultiMatrixAlgebra::elements_of(const Mat& gns_cols) const {
    std::vector<Element> out;
    for (Eigen::Index j = 0; j < gns_cols.cols(); ++j) out.push_back(from_gns(gns_cols.col(j)));
    return out;
}

Mat MultiMatrixAlgebra::gns_matrix(const std::vector<Element>& xs) const {
    Mat m(dim(), static_cast<Eigen::Index>(xs.size()));
    for (size_t j = 0; j < xs.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = to_gns(xs[j]);
    return m;
}

Mat commutant_in(const MultiMatrixAlgebra& a, const std::vector<Element>& family, double tol) {
    const int d = a.dim();
    if (family.empty()) return Mat::Identity(d, d);
    Mat stacked(static_cast<Eigen::Index>(2 * family.size()) * d, d);
    Eigen::Index row = 0;
    for (const auto& f : family) {
        for (const Element& g : {f, f.adjoint()}) {
            stacked.middleRows(row, d) = a.left_op(g) - a.right_op(g);
            row += d;
        }
    }
    return la::null_space(stacked, tol);
}

void check_star_algebra(const MultiMatrixAlgebra& a, const Mat& basis, double tol) {
    Mat q = la::orth(basis);
    auto xs = a.elements_of(q);
    Mat proj = q * q.adjoint();
    auto outside = [&](const Element& z) {
        Vec v = a.to_gns(z);
        return (v - proj * v).norm() > tol * std::max(1.0, v.norm());
    };
    for (size_t i = 0; i < xs.size(); ++i) {
        if (outside(xs[i].adjoint())) throw Error(ErrorKind::NotAnAlgebra, "span not closed under adjoint");
        for (size_t j = 0; j < xs.size(); ++j)
            if (outside(xs[i] * xs[j])) throw Error(ErrorKind::NotAnAlgebra, "span not closed under products");
    }
}

SubalgebraInfo analyze_subalgebra(const MultiMatrixAlgebra& a, const Mat& basis, double tol) {
    SubalgebraInfo info;
    Mat q = la::orth(basis);
    info.dim = static_cast<int>(q.cols());
    auto xs = a.elements_of(q);
    const int d = a.dim();
    const auto k = static_cast<Eigen::Index>(xs.size());
    // coefficients c with [sum c_i x_i, x_j] = 0 for all j
    Mat sys(d * k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            sys.block(j * d, i, d, 1) = a.to_gns(xs[i] * xs[j] - xs[j] * xs[i]);
    Mat coeffs = la::null_space(sys, tol);
    info.center = q * coeffs;
    info.is_factor = coeffs.cols() == 1;
    return info;
}

}  // namespace pgc
