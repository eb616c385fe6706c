#include "mixinf/error.hpp"

#include <sstream>

namespace mixinf {

namespace {

std::string compose(ErrorKind kind, const std::string& module, const std::string& message,
                    int line, int column)
{
    std::ostringstream out;
    out << module << ": " << to_string(kind);
    if (line > 0)
        out << " at " << line << ":" << column;
    out << ": " << message;
    return out.str();
}

} // namespace

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::MismatchedArity: return "MismatchedArity";
    case ErrorKind::ExponentOverflow: return "ExponentOverflow";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::NonNaturalExponent: return "NonNaturalExponent";
    case ErrorKind::NonConstantDivisor: return "NonConstantDivisor";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::EmptySupport: return "EmptySupport";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::OnZeroLocus: return "OnZeroLocus";
    case ErrorKind::FieldConstructionFailed: return "FieldConstructionFailed";
    case ErrorKind::IncompleteLedger: return "IncompleteLedger";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

bool is_input_error(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::SyntaxError:
    case ErrorKind::UnknownSymbol:
    case ErrorKind::NonNaturalExponent:
    case ErrorKind::NonConstantDivisor:
    case ErrorKind::ZeroPolynomial:
    case ErrorKind::EmptySupport:
    case ErrorKind::IoError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::MismatchedArity:
    case ErrorKind::ExponentOverflow:
        return true;
    default:
        return false;
    }
}

Error::Error(ErrorKind kind, std::string module, const std::string& message, int line, int column)
    : std::runtime_error(compose(kind, module, message, line, column)),
      kind_(kind),
      module_(std::move(module)),
      detail_(message),
      line_(line),
      column_(column)
{
}

} // namespace mixinf
