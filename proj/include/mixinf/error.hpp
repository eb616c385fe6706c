#ifndef MIXINF_ERROR_HPP
#define MIXINF_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mixinf {

enum class ErrorKind {
    MismatchedArity,
    ExponentOverflow,
    SyntaxError,
    UnknownSymbol,
    NonNaturalExponent,
    NonConstantDivisor,
    ZeroPolynomial,
    EmptySupport,
    ZeroVector,
    OnZeroLocus,
    FieldConstructionFailed,
    IncompleteLedger,
    IoError,
    InvalidArgument,
};

const char* to_string(ErrorKind kind);

/// True for errors caused by the caller's input (CLI exit code 2); all
/// others are numeric or internal failures (exit code 3).
bool is_input_error(ErrorKind kind);

/**
 * Single exception type for the library. Carries the kind, the module that
 * raised it, and for parse errors the 1-based line/column of the offending
 * token (0 when not applicable).
 */
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string module, const std::string& message,
          int line = 0, int column = 0);

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& module() const noexcept { return module_; }
    /// The message without the module/kind/position prefix of what().
    const std::string& detail() const noexcept { return detail_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    ErrorKind kind_;
    std::string module_;
    std::string detail_;
    int line_;
    int column_;
};

} // namespace mixinf

#endif
