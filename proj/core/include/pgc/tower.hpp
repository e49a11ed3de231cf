#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "pgc/algebra.hpp"

namespace pgc {

// Unital *-embedding B -> A in standard form:
//   iota(b)_a = U_a (direct sum over i of lam(i,a) copies of b_i) U_a^*
// copy k of B-block i sits at offset(a,i) + k*n_i inside A-block a.
class Embedding {
public:
    Embedding() = default;
    Embedding(std::vector<int> small_sizes, std::vector<int> big_sizes, Eigen::MatrixXi lam,
              std::vector<Mat> unitaries = {});

    const std::vector<int>& small_sizes() const { return nb_; }
    const std::vector<int>& big_sizes() const { return sa_; }
    const Eigen::MatrixXi& inclusion_matrix() const { return lam_; }
    const Mat& unitary(int a) const { return u_[a]; }
    bool trivial_unitaries() const { return trivial_; }
    int offset(int a, int i) const { return off_[a][i]; }

    Element apply(const Element& b) const;
    // trace-preserving conditional expectation onto B for big-algebra weights wa
    Element cond_exp(const Element& x, const std::vector<double>& wa) const;
    std::vector<double> pull_weights(const std::vector<double>& wa) const;

    // relative commutant B' cap A = sum_a U_a (sum_i M_{lam(i,a)} (x) 1_{n_i}) U_a^*
    struct CommBlock { int a, i, size; };
    const std::vector<CommBlock>& comm_blocks() const { return comm_; }
    std::vector<int> comm_sizes() const;
    Element comm_embed(const Element& c) const;   // abstract -> A
    Element comm_project(const Element& x) const; // trace-preserving expectation onto B' cap A, abstract

private:
    std::vector<int> nb_, sa_;
    Eigen::MatrixXi lam_;
    std::vector<Mat> u_;
    bool trivial_ = true;
    std::vector<std::vector<int>> off_;
    std::vector<CommBlock> comm_;
};

// outer(inner(b)) as a single standard-form embedding
Embedding compose(const Embedding& inner, const Embedding& outer);

// Find the standard form of an embedding given by images of the small algebra's matrix units
// (images[i][r*n_i+c] = iota(e^i_rc)); throws InvalidEmbedding if not a unital *-homomorphism.
Embedding embedding_from_images(const std::vector<int>& small_sizes, const std::vector<int>& big_sizes,
                                const std::vector<std::vector<Element>>& images, double tol = 1e-9);

struct Inclusion {
    MultiMatrixAlgebra N, M;
    Embedding emb;
};

struct MarkovData {
    double mu = 0.0;
    std::vector<double> wM, wN;
};
// index and Markov weights of the inclusion with matrix lam (|N| x |M|) and M-block sizes
MarkovData markov_weights(const Eigen::MatrixXi& lam, const std::vector<int>& m_sizes);
void check_inclusion_matrix(const Eigen::MatrixXi& lam, const std::vector<int>& n_sizes,
                            const std::vector<int>& m_sizes);

// Inclusion with weights taken from markov_weights unless explicit M weights are given.
Inclusion make_inclusion(const std::vector<int>& n_sizes, const std::vector<int>& m_sizes, const Eigen::MatrixXi& lam,
                         const std::vector<Mat>& unitaries = {}, const std::vector<double>& m_weights = {});
Inclusion scalars_in_full(int n);
Inclusion diagonal_in_full(int n);
Inclusion equal_inclusion(const std::vector<int>& sizes);

// C = <A, e_B> realised on L2(A)
struct BasicConstruction {
    MultiMatrixAlgebra C;
    Embedding a_in_c;
    std::vector<Mat> W;  // W_i : C^{S_i} (x) C^{n_i} -> L2(A), isometric
    Element e;           // Jones projection in C
    Mat e_op;            // the same on L2(A)
    double lambda = 0.0;
    bool markov = false;
    double markov_residual = 0.0;

    Mat realize(const Element& x) const;  // element of C as an operator on L2(A)
    Element pull(const Mat& op) const;    // expectation of an operator onto C (exact for elements of C)
    double pull_residual(const Mat& op, const Element& x) const;
};

BasicConstruction basic_construction(const Embedding& b_in_a, const MultiMatrixAlgebra& A, const MultiMatrixAlgebra& B);

enum class Side { Plus, Minus };
const char* to_string(Side s);

// N' cap M1 (plus) or M' cap M2 (minus), stored in abstract block coordinates
struct TwoBoxSpace {
    Side side = Side::Plus;
    MultiMatrixAlgebra P;  // weights give tr2 = mu * tau on the ambient algebra
    const Embedding* emb = nullptr;
    const MultiMatrixAlgebra* ambient = nullptr;

    Element to_ambient(const Element& x) const { return emb->comm_embed(x); }
    Element from_ambient(const Element& y) const { return emb->comm_project(y); }
    double tr2(const Element& x) const { return P.trace(x).real(); }
};

struct TwoBox {
    Side side = Side::Plus;
    Element x;
};

// least-squares system on the spanning set {x e1 y Omega_1 : x, y matrix units of M}
struct MultiplierSystem {
    Mat S;     // spanning vectors as columns (dim M1 x K)
    Mat pinv;  // pseudo-inverse of S
    int rank = 0;
};

struct TowerOptions {
    bool require_markov = true;
    double tol = 1e-9;
};

class Tower {
public:
    Tower(const Inclusion& inc, const TowerOptions& opt = {});
    Tower(const Tower&) = delete;
    Tower& operator=(const Tower&) = delete;

    const MultiMatrixAlgebra& N() const { return inc_.N; }
    const MultiMatrixAlgebra& M() const { return inc_.M; }
    const MultiMatrixAlgebra& M1() const { return bc1_.C; }
    const MultiMatrixAlgebra& M2() const { return bc2_->C; }
    const Inclusion& inclusion() const { return inc_; }
    const Embedding& N_in_M() const { return inc_.emb; }
    const Embedding& M_in_M1() const { return bc1_.a_in_c; }
    const Embedding& M1_in_M2() const { return bc2_->a_in_c; }
    const Embedding& N_in_M1() const { return n_in_m1_; }
    const Embedding& M_in_M2() const { return *m_in_m2_; }
    const BasicConstruction& level1() const { return bc1_; }
    const BasicConstruction& level2() const { return *bc2_; }
    bool markov() const { return markov_; }
    bool has_level2() const { return bc2_.has_value(); }

    double mu() const { return mu_; }
    double delta() const { return std::sqrt(mu_); }
    double lambda() const { return bc1_.lambda; }
    const Element& e1() const { return bc1_.e; }
    const Element& e2() const;

    Element E_N(const Element& x) const { return inc_.emb.cond_exp(x, M().weights()); }
    Element E_M(const Element& x1) const { return M_in_M1().cond_exp(x1, M1().weights()); }
    Element E_M1(const Element& x2) const { return M1_in_M2().cond_exp(x2, M2().weights()); }

    const TwoBoxSpace& plus() const { return plus_; }
    const TwoBoxSpace& minus() const;
    const TwoBoxSpace& space(Side s) const { return s == Side::Plus ? plus() : minus(); }

    // orthonormal basis of the left N-module M: sum_j eta_j^* e1 eta_j = 1
    const std::vector<Element>& pp_basis() const;
    double pp_reconstruction_residual() const;
    double pp_index_sum() const;  // sum_j tau(eta_j eta_j^*) = mu

    const MultiplierSystem& multiplier_system() const;

    // relative commutant dimension of the composite N -> M1 and M -> M2
    int dim_plus() const { return plus_.P.dim(); }
    int dim_minus() const;

private:
    double reconstruction_residual(const std::vector<Element>& basis) const;
    void build_pp() const;

    Inclusion inc_;
    BasicConstruction bc1_;
    std::optional<BasicConstruction> bc2_;
    Embedding n_in_m1_;
    std::optional<Embedding> m_in_m2_;
    TwoBoxSpace plus_, minus_;
    double mu_ = 0.0;
    bool markov_ = false;
    mutable std::vector<Element> pp_;
    mutable std::once_flag pp_once_, mult_once_;
    mutable MultiplierSystem mult_;
};

}  // namespace pgc
