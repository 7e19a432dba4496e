#include "scirank/error.hpp"

namespace scirank {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Parse: return "ParseError";
        case ErrorKind::DuplicateTaxon: return "DuplicateTaxon";
        case ErrorKind::OrphanTaxon: return "OrphanTaxon";
        case ErrorKind::UnknownParent: return "UnknownParent";
        case ErrorKind::UnknownTaxon: return "UnknownTaxon";
        case ErrorKind::EmptyMapping: return "EmptyMapping";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::BadK: return "BadK";
        case ErrorKind::EmptyStratum: return "EmptyStratum";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::NegativeEntry: return "NegativeEntry";
        case ErrorKind::ZeroMatrix: return "ZeroMatrix";
        case ErrorKind::EmptyTable: return "EmptyTable";
        case ErrorKind::ZeroMarginal: return "ZeroMarginal";
        case ErrorKind::ZeroProfile: return "ZeroProfile";
        case ErrorKind::BadAxis: return "BadAxis";
        case ErrorKind::ConstantInput: return "ConstantInput";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::IdMismatch: return "IdMismatch";
    }
    return "Error";
}

}  // namespace scirank
