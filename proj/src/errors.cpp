#include "cutofflab/errors.hpp"

namespace cutofflab {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::RowSum: return "RowSumError";
        case ErrorKind::NotIrreducible: return "NotIrreducible";
        case ErrorKind::ThetaOutOfRange: return "ThetaOutOfRange";
        case ErrorKind::NegativeTime: return "NegativeTime";
        case ErrorKind::NotWeaklyReversible: return "NotWeaklyReversible";
        case ErrorKind::NotNormalized: return "NotNormalized";
        case ErrorKind::TooLargeForDense: return "TooLargeForDense";
        case ErrorKind::EpsilonOutOfRange: return "EpsilonOutOfRange";
        case ErrorKind::NonReversibleForLSI: return "NonReversibleForLSI";
        case ErrorKind::BracketExhausted: return "BracketExhausted";
        case ErrorKind::TVEqualsOne: return "TVEqualsOne";
        case ErrorKind::NotLipschitz: return "NotLipschitz";
        case ErrorKind::MissingCertificate: return "MissingCertificate";
        case ErrorKind::NonpositiveTime: return "NonpositiveTime";
        case ErrorKind::NotAGroupWalk: return "NotAGroupWalk";
        case ErrorKind::NoKnownValues: return "NoKnownValues";
        case ErrorKind::InvalidParameters: return "InvalidParameters";
        case ErrorKind::TooLarge: return "TooLarge";
        case ErrorKind::Parse: return "ParseError";
    }
    return "Error";
}

}  // namespace cutofflab
