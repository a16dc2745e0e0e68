#include "mcsig/error.hpp"

namespace mcsig {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::InvalidScaling: return "InvalidScaling";
    case ErrorCode::InvalidHeader: return "InvalidHeader";
    case ErrorCode::ValueOutOfDigitalRange: return "ValueOutOfDigitalRange";
    case ErrorCode::ChannelIndexOutOfRange: return "ChannelIndexOutOfRange";
    case ErrorCode::BadArchive: return "BadArchive";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::EmptySignal: return "EmptySignal";
    case ErrorCode::WindowTooLarge: return "WindowTooLarge";
    case ErrorCode::SignalTooShort: return "SignalTooShort";
    case ErrorCode::OddOrder: return "OddOrder";
    case ErrorCode::BandOutOfNyquist: return "BandOutOfNyquist";
    case ErrorCode::SamplingTooLow: return "SamplingTooLow";
    case ErrorCode::EmptyTrialSet: return "EmptyTrialSet";
    case ErrorCode::TrialTooShort: return "TrialTooShort";
    case ErrorCode::ReferenceOutsideSignal: return "ReferenceOutsideSignal";
    case ErrorCode::ZeroReference: return "ZeroReference";
    case ErrorCode::UnknownMethod: return "UnknownMethod";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyPhase: return "EmptyPhase";
    case ErrorCode::WindowOutsideTrials: return "WindowOutsideTrials";
    case ErrorCode::BadPair: return "BadPair";
    case ErrorCode::WindowTooShortForSegments: return "WindowTooShortForSegments";
    case ErrorCode::NoOnsetDetected: return "NoOnsetDetected";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace mcsig
