#include "emopeak/error.hpp"

namespace emopeak {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::UnsupportedEncoding: return "UnsupportedEncoding";
    case ErrorCode::EmptyAudio: return "EmptyAudio";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::SignalTooShort: return "SignalTooShort";
    case ErrorCode::InvalidLength: return "InvalidLength";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NotPowerOfTwo: return "NotPowerOfTwo";
    case ErrorCode::NegativeFrequency: return "NegativeFrequency";
    case ErrorCode::InvalidBand: return "InvalidBand";
    case ErrorCode::TooFewBins: return "TooFewBins";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidCoeffCount: return "InvalidCoeffCount";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EvenSmoothWidth: return "EvenSmoothWidth";
    case ErrorCode::ContourTooShort: return "ContourTooShort";
    case ErrorCode::InsufficientPeaks: return "InsufficientPeaks";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::ClassTooSmall: return "ClassTooSmall";
    case ErrorCode::DegenerateFraction: return "DegenerateFraction";
    case ErrorCode::EmptyTrain: return "EmptyTrain";
    case ErrorCode::SingleClassTraining: return "SingleClassTraining";
    case ErrorCode::NonFiniteFeature: return "NonFiniteFeature";
    case ErrorCode::InvalidHyperparameter: return "InvalidHyperparameter";
    case ErrorCode::DegenerateClasses: return "DegenerateClasses";
    case ErrorCode::InsufficientRepetitions: return "InsufficientRepetitions";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    }
    return "Unknown";
}

}  // namespace emopeak
