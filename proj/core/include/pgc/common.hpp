#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pgc {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

enum class ErrorKind {
    NonNormalizedTrace,
    EmptyAlgebra,
    OwnerMismatch,
    NotNormal,
    DimensionMismatch,
    NotAnAlgebra,
    InvalidEmbedding,
    DisconnectedDiagram,
    ZeroRow,
    LevelMismatch,
    TraceNotMarkov,
    BasisConstructionFailed,
    NotPositive,
    ExceedsDeskScale,
    WrongSide,
    SideMismatch,
    NotAProjection,
    NotABiprojection,
    NoStabilization,
    NotFPositive,
    NotNormalized,
    GroupFitFailed,
    DecompositionFailed,
    PreconditionFailed,
    FourierNotIsometry,
    NotBimodular,
    DoesNotPreserveM,
    SpanningSetDeficient,
    OracleDisagreement,
    SingularUnit,
    NotCP,
    RouteDisagreement,
    NoPositiveEigenvector,
    FPositiveSearchFailed,
    NotContractive,
    RadiusNotOne,
    NoInvariantState,
    FixedAlgebraNotFactor,
    PatchingFailed,
    HypothesisUnmet,
    SchemaError,
    UnknownGenerator,
    TooLarge,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

struct Tolerances {
    double rank = 1e-10;
    double phase = 1e-8;
    double cp = 1e-9;
    double residual = 1e-8;
};

}  // namespace pgc
