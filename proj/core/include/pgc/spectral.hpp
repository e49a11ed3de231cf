#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pgc/channel.hpp"

namespace pgc {

struct SpectralReport {
    std::vector<cplx> y_eigenvalues;       // eigenvalues of y inside N' cap M1
    std::vector<cplx> action_eigenvalues;  // eigenvalues of the GNS action
    double radius = 0.0;
    std::vector<cplx> peripheral;          // cluster centers with |z| ~ r
    double route_residual = 0.0;           // Hausdorff distance between the two lists
};

// throws RouteDisagreement above fatal_tol
SpectralReport channel_spectrum(const Channel& phi, double tol_phase = 1e-8, double fatal_tol = 1e-6);

struct CommutingPf {
    double r = 0.0;
    TwoBox z;          // F-positive element with y z = z y = r z
    Mat psi_action;    // Theta_z on L2(M)
    int nilpotency = 1;
    bool via_search = false;
    int iterations = 0;
    ResidualTable residuals;
};

// q may be null (non-factor M); the alternating-projection search then is unavailable
CommutingPf commuting_pf_channel(const Channel& phi, const Qfa* q = nullptr);

struct PerronVector {
    double r = 0.0;
    Element x;  // positive, ||x||_inf = 1
    double residual = 0.0;
    double min_eig = 0.0;
};
PerronVector perron_vector(const Channel& phi, const Qfa* q = nullptr);

struct InvariantState {
    bool found = false;
    bool faithful = false;
    Element h;  // density: omega(x) = tau(h x), tau(h) = 1
    double min_eig = 0.0;
    double residual = 0.0;
};
InvariantState invariant_state(const Channel& phi);

struct FixedStructure {
    Mat E_fix;        // Riesz projection of the action at 1
    Element zeta;
    Element p_max;
    Mat basis;        // orthonormal GNS columns of M(Phi, 1)
    bool algebra_checked = false;
    SubalgebraInfo info;
    ResidualTable residuals;
};
// period-aligned Cesaro mean of the action with one Richardson step
Mat cesaro_mean(const Mat& a, int period, int n = 1000);
FixedStructure cesaro_fixed(const Channel& phi, std::uint64_t seed = 0);

struct Eigenspace {
    cplx alpha;
    Mat basis;  // orthonormal GNS columns of M(Phi, alpha)
    std::vector<Element> elements;
    bool characterized = false;
    std::string skipped;
    ResidualTable checks;
};
// state may be null: characterization checks are then skipped and flagged
Eigenspace eigenspace(const Channel& phi, cplx alpha, const InvariantState* state = nullptr);

struct UnitaryGenerator {
    Element u;
    double unitarity = 0.0;
    double eigen = 0.0;
    double subspace = 0.0;
    int attempts = 0;
    bool patched = false;
};
// fixed: basis of M(Phi,1); the caller is responsible for the factor gate
UnitaryGenerator unitary_generator(const Channel& phi, cplx alpha, const Eigenspace& e_alpha, const Mat& fixed,
                                   std::uint64_t seed);

struct ProjectionTrial {
    std::string label;
    int steps = 0;
    double residual = 0.0;  // distance of the saturated range from N
    bool in_N = false;
};

struct RelativeIrreducibility {
    bool flag = false;
    std::string mode;  // proof | evidence | disproof
    bool criterion_i_available = false;
    bool flag_i = false;
    double flag_i_residual = 0.0;  // ||B - 1||
    bool flag_iii = false;
    int d = 0;
    std::vector<ProjectionTrial> trials;
    std::optional<Element> witness;
    bool consistent = true;  // (i) implies (iii)
};
RelativeIrreducibility relative_irreducibility(const Channel& phi, const Qfa* q, std::uint64_t seed,
                                               int random_projections = 50);

struct CertifyOptions {
    std::uint64_t seed = 0;
    Tolerances tol;
};

struct PhaseGroupCertificate {
    int m = 0;
    cplx generator;
    SpectralReport spectrum;
    InvariantState state;
    FixedStructure fixed;
    bool fixed_is_factor = false;
    bool fixed_equals_N = false;
    std::vector<Eigenspace> eigenspaces;  // alpha = generator^j
    std::vector<UnitaryGenerator> unitaries;
    std::string unitary_skipped;  // empty when the u_alpha section is present
    RelativeIrreducibility relirr;
    ResidualTable residuals;
    std::map<std::string, std::string> verdicts;  // pass | fail | skipped: reason
};
PhaseGroupCertificate certify_phase_group(const Channel& phi, const Qfa* q, const CertifyOptions& opt = {});

enum class CwVerdict { Equality, Violation, PreconditionNotMet };
const char* to_string(CwVerdict v);

struct CwRegime {
    bool trace_preserving = false;
    bool relirr_factor = false;  // relatively irreducible with N a factor
};

struct CwResult {
    CwVerdict verdict = CwVerdict::PreconditionNotMet;
    std::string direction;  // below | above | none
    double gap = 0.0;       // ||Phi(x) - x||_2 / ||x||_2
    CwRegime regime;
};
// throws HypothesisUnmet when neither regime holds, RadiusNotOne when r != 1
CwResult collatz_wielandt_check(const Channel& phi, const Element& x, const CwRegime& regime);

}  // namespace pgc
