#include "pgc/common.hpp"

namespace pgc {

const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::NonNormalizedTrace: return "NonNormalizedTrace";
        case ErrorKind::EmptyAlgebra: return "EmptyAlgebra";
        case ErrorKind::OwnerMismatch: return "OwnerMismatch";
        case ErrorKind::NotNormal: return "NotNormal";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NotAnAlgebra: return "NotAnAlgebra";
        case ErrorKind::InvalidEmbedding: return "InvalidEmbedding";
        case ErrorKind::DisconnectedDiagram: return "DisconnectedDiagram";
        case ErrorKind::ZeroRow: return "ZeroRow";
        case ErrorKind::LevelMismatch: return "LevelMismatch";
        case ErrorKind::TraceNotMarkov: return "TraceNotMarkov";
        case ErrorKind::BasisConstructionFailed: return "BasisConstructionFailed";
        case ErrorKind::NotPositive: return "NotPositive";
        case ErrorKind::ExceedsDeskScale: return "ExceedsDeskScale";
        case ErrorKind::WrongSide: return "WrongSide";
        case ErrorKind::SideMismatch: return "SideMismatch";
        case ErrorKind::NotAProjection: return "NotAProjection";
        case ErrorKind::NotABiprojection: return "NotABiprojection";
        case ErrorKind::NoStabilization: return "NoStabilization";
        case ErrorKind::NotFPositive: return "NotFPositive";
        case ErrorKind::NotNormalized: return "NotNormalized";
        case ErrorKind::GroupFitFailed: return "GroupFitFailed";
        case ErrorKind::DecompositionFailed: return "DecompositionFailed";
        case ErrorKind::PreconditionFailed: return "PreconditionFailed";
        case ErrorKind::FourierNotIsometry: return "FourierNotIsometry";
        case ErrorKind::NotBimodular: return "NotBimodular";
        case ErrorKind::DoesNotPreserveM: return "DoesNotPreserveM";
        case ErrorKind::SpanningSetDeficient: return "SpanningSetDeficient";
        case ErrorKind::OracleDisagreement: return "OracleDisagreement";
        case ErrorKind::SingularUnit: return "SingularUnit";
        case ErrorKind::NotCP: return "NotCP";
        case ErrorKind::RouteDisagreement: return "RouteDisagreement";
        case ErrorKind::NoPositiveEigenvector: return "NoPositiveEigenvector";
        case ErrorKind::FPositiveSearchFailed: return "FPositiveSearchFailed";
        case ErrorKind::NotContractive: return "NotContractive";
        case ErrorKind::RadiusNotOne: return "RadiusNotOne";
        case ErrorKind::NoInvariantState: return "NoInvariantState";
        case ErrorKind::FixedAlgebraNotFactor: return "FixedAlgebraNotFactor";
        case ErrorKind::PatchingFailed: return "PatchingFailed";
        case ErrorKind::HypothesisUnmet: return "HypothesisUnmet";
        case ErrorKind::SchemaError: return "SchemaError";
        case ErrorKind::UnknownGenerator: return "UnknownGenerator";
        case ErrorKind::TooLarge: return "TooLarge";
    }
    return "Unknown";
}

}  // namespace pgc
