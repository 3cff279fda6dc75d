#pragma once

#include <stdexcept>
#include <string>

namespace cutofflab {

enum class ErrorKind {
    RowSum,
    NotIrreducible,
    ThetaOutOfRange,
    NegativeTime,
    NotWeaklyReversible,
    NotNormalized,
    TooLargeForDense,
    EpsilonOutOfRange,
    NonReversibleForLSI,
    BracketExhausted,
    TVEqualsOne,
    NotLipschitz,
    MissingCertificate,
    NonpositiveTime,
    NotAGroupWalk,
    NoKnownValues,
    InvalidParameters,
    TooLarge,
    Parse,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace cutofflab
