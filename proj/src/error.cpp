#include "cfal/error.hpp"

namespace cfal {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::NotSquarefree: return "NotSquarefree";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::Ramified: return "Ramified";
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::ZeroCoefficient: return "ZeroCoefficient";
    case ErrorKind::CholeskyFailure: return "CholeskyFailure";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::RankDeficientCode: return "RankDeficientCode";
    case ErrorKind::RadiusTooSmall: return "RadiusTooSmall";
    case ErrorKind::InsufficientPoints: return "InsufficientPoints";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownKey: return "UnknownKey";
    case ErrorKind::InvalidValue: return "InvalidValue";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what)
{
}

void fail(ErrorKind kind, const std::string& what)
{
    throw Error(kind, what);
}

}  // namespace cfal
