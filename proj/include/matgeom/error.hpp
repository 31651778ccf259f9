#pragma once

#include <stdexcept>
#include <string>

namespace matgeom {

enum class ErrorKind {
    InvalidArgument,
    RankDeficient,
    NotPositiveDefinite,
    BudgetExceeded,
    NonIntegrable,
    EmptyRegion,
    ParameterOutOfRange,
    StepUnderflow,
    NearSingularSet,
    OutOfRegularRegion,
    UnsupportedAlpha,
    StripViolation,
    MissingFourierForm,
    RangeViolation,
    Pole,
    UnknownSuite,
    ConfigError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace matgeom
