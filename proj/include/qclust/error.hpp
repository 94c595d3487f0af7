#ifndef QCLUST_ERROR_HPP
#define QCLUST_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace qclust {

enum class ErrorCode {
    RaggedTable,
    NonNumericCell,
    TooFewProfiles,
    IndivisibleLength,
    NonPositiveSigma,
    DegenerateRange,
    KindMismatch,
    LengthMismatch,
    DimensionMismatch,
    GroupCountExceedsProfiles,
    NonPositiveLambda,
    TooManyVariables,
    InvalidSchedule,
    DivergedAmplitudes,
    BadGroupCount,
    SingleCluster,
    ParseError,
    IoError,
    ConfigError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::RaggedTable: return "RaggedTable";
        case ErrorCode::NonNumericCell: return "NonNumericCell";
        case ErrorCode::TooFewProfiles: return "TooFewProfiles";
        case ErrorCode::IndivisibleLength: return "IndivisibleLength";
        case ErrorCode::NonPositiveSigma: return "NonPositiveSigma";
        case ErrorCode::DegenerateRange: return "DegenerateRange";
        case ErrorCode::KindMismatch: return "KindMismatch";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::GroupCountExceedsProfiles: return "GroupCountExceedsProfiles";
        case ErrorCode::NonPositiveLambda: return "NonPositiveLambda";
        case ErrorCode::TooManyVariables: return "TooManyVariables";
        case ErrorCode::InvalidSchedule: return "InvalidSchedule";
        case ErrorCode::DivergedAmplitudes: return "DivergedAmplitudes";
        case ErrorCode::BadGroupCount: return "BadGroupCount";
        case ErrorCode::SingleCluster: return "SingleCluster";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (tests, CLI exit handling) can branch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace qclust

#endif  // QCLUST_ERROR_HPP
