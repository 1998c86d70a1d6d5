#ifndef CFAL_ERROR_HPP
#define CFAL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace cfal {

enum class ErrorKind {
    NotSquarefree,
    OutOfRange,
    Ramified,
    NotPrime,
    Overflow,
    ZeroCoefficient,
    CholeskyFailure,
    RankDeficient,
    TooLarge,
    DimensionMismatch,
    RankDeficientCode,
    RadiusTooSmall,
    InsufficientPoints,
    ParseError,
    UnknownKey,
    InvalidValue,
};

const char* to_string(ErrorKind kind);

/* All library failures are reported through this type; `kind()` lets
 * callers (and the CLI exit-code mapping) distinguish them. */
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);

    ErrorKind kind() const noexcept { return kind_; }
    /* what() without the kind prefix */
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace cfal

#endif
