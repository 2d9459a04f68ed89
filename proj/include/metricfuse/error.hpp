#pragma once

// Error taxonomy shared by all metricfuse modules. Every failure surfaces as
// an Error carrying a stable code plus a human-readable message with context.

#include <stdexcept>
#include <string>
#include <string_view>

namespace metricfuse {

enum class Errc {
    // file ingestion
    MissingColumn,
    NonNumericValue,
    DuplicateRow,
    EmptyFile,
    UnknownKind,
    ScaleBoundsInvalid,
    OutOfRange,
    JoinMismatch,
    InconsistentMetricSet,
    DatasetMismatch,
    EmptyDataset,
    // vmaf logs
    MalformedJson,
    NoVmafScoresFound,
    ScoreOutOfRange,
    MissingSceneMapping,
    // normalization / fusion
    DegenerateRange,
    MissingInput,
    // statistics
    DegenerateVariance,
    TooFewPoints,
    // bootstrap / pipeline
    AllReplicatesDegenerate,
    TooFewScenes,
    UnknownLabel,
    InvalidConfig,
    InvalidSpec,
    // reporting / io
    EmptyReport,
    UnsupportedFormat,
    IoError,
};

inline std::string_view errc_name(Errc code) {
    switch (code) {
    case Errc::MissingColumn:           return "MissingColumn";
    case Errc::NonNumericValue:         return "NonNumericValue";
    case Errc::DuplicateRow:            return "DuplicateRow";
    case Errc::EmptyFile:               return "EmptyFile";
    case Errc::UnknownKind:             return "UnknownKind";
    case Errc::ScaleBoundsInvalid:      return "ScaleBoundsInvalid";
    case Errc::OutOfRange:              return "OutOfRange";
    case Errc::JoinMismatch:            return "JoinMismatch";
    case Errc::InconsistentMetricSet:   return "InconsistentMetricSet";
    case Errc::DatasetMismatch:         return "DatasetMismatch";
    case Errc::EmptyDataset:            return "EmptyDataset";
    case Errc::MalformedJson:           return "MalformedJson";
    case Errc::NoVmafScoresFound:       return "NoVmafScoresFound";
    case Errc::ScoreOutOfRange:         return "ScoreOutOfRange";
    case Errc::MissingSceneMapping:     return "MissingSceneMapping";
    case Errc::DegenerateRange:         return "DegenerateRange";
    case Errc::MissingInput:            return "MissingInput";
    case Errc::DegenerateVariance:      return "DegenerateVariance";
    case Errc::TooFewPoints:            return "TooFewPoints";
    case Errc::AllReplicatesDegenerate: return "AllReplicatesDegenerate";
    case Errc::TooFewScenes:            return "TooFewScenes";
    case Errc::UnknownLabel:            return "UnknownLabel";
    case Errc::InvalidConfig:           return "InvalidConfig";
    case Errc::InvalidSpec:             return "InvalidSpec";
    case Errc::EmptyReport:             return "EmptyReport";
    case Errc::UnsupportedFormat:       return "UnsupportedFormat";
    case Errc::IoError:                 return "IoError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace metricfuse
