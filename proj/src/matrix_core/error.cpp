#include "matgeom/error.hpp"

namespace matgeom {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::RankDeficient: return "RankDeficient";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::NonIntegrable: return "NonIntegrable";
        case ErrorKind::EmptyRegion: return "EmptyRegion";
        case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
        case ErrorKind::StepUnderflow: return "StepUnderflow";
        case ErrorKind::NearSingularSet: return "NearSingularSet";
        case ErrorKind::OutOfRegularRegion: return "OutOfRegularRegion";
        case ErrorKind::UnsupportedAlpha: return "UnsupportedAlpha";
        case ErrorKind::StripViolation: return "StripViolation";
        case ErrorKind::MissingFourierForm: return "MissingFourierForm";
        case ErrorKind::RangeViolation: return "RangeViolation";
        case ErrorKind::Pole: return "Pole";
        case ErrorKind::UnknownSuite: return "UnknownSuite";
        case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace matgeom
