#include "rshape/errors.h"

namespace rshape {

std::string_view error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::TooFewPoints: return "TooFewPoints";
        case ErrorKind::AllCollinear: return "AllCollinear";
        case ErrorKind::EmptyCloud: return "EmptyCloud";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::InvalidRadius: return "InvalidRadius";
        case ErrorKind::EmptyBoundary: return "EmptyBoundary";
        case ErrorKind::AlphaOutOfRange: return "AlphaOutOfRange";
        case ErrorKind::DegenerateSampleSize: return "DegenerateSampleSize";
        case ErrorKind::DegenerateRegion: return "DegenerateRegion";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
        case ErrorKind::GridMismatch: return "GridMismatch";
        case ErrorKind::UnknownModel: return "UnknownModel";
        case ErrorKind::RejectionStall: return "RejectionStall";
        case ErrorKind::Parse: return "ParseError";
        case ErrorKind::Io: return "IoError";
    }
    return "Unknown";
}

}  // namespace rshape
