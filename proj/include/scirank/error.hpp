#ifndef SCIRANK_ERROR_HPP
#define SCIRANK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace scirank {

enum class ErrorKind {
    Parse,
    DuplicateTaxon,
    OrphanTaxon,
    UnknownParent,
    UnknownTaxon,
    EmptyMapping,
    DimensionMismatch,
    BadK,
    EmptyStratum,
    NonFinite,
    NegativeEntry,
    ZeroMatrix,
    EmptyTable,
    ZeroMarginal,
    ZeroProfile,
    BadAxis,
    ConstantInput,
    LengthMismatch,
    IdMismatch,
};

const char* to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a kind so that callers (the CLI
// in particular) can classify it without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace scirank

#endif  // SCIRANK_ERROR_HPP
