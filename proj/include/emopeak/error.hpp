#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace emopeak {

enum class ErrorCode {
    // audio_io
    MalformedHeader,
    UnsupportedEncoding,
    EmptyAudio,
    IoFailure,
    // dsp
    SignalTooShort,
    InvalidLength,
    LengthMismatch,
    NotPowerOfTwo,
    // mfcc
    NegativeFrequency,
    InvalidBand,
    TooFewBins,
    DimensionMismatch,
    InvalidCoeffCount,
    EmptyInput,
    EvenSmoothWidth,
    // features
    ContourTooShort,
    InsufficientPeaks,
    // dataset
    SchemaMismatch,
    UnknownLabel,
    MalformedRow,
    ClassTooSmall,
    DegenerateFraction,
    EmptyTrain,
    // classifiers
    SingleClassTraining,
    NonFiniteFeature,
    InvalidHyperparameter,
    // eval
    DegenerateClasses,
    InsufficientRepetitions,
    InvalidConfig,
    // corpus_synth
    InvalidProfile,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace emopeak
