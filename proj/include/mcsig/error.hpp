#ifndef MCSIG_ERROR_HPP
#define MCSIG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mcsig {

// Every failure mode the library reports. Codes are part of the public
// contract: callers (and the CLI exit-code mapping) dispatch on them.
enum class ErrorCode {
  // file / wire format
  BadMagic,
  TruncatedPayload,
  InvalidScaling,
  InvalidHeader,
  ValueOutOfDigitalRange,
  ChannelIndexOutOfRange,
  BadArchive,
  IoFailure,
  // signal conditioning
  EmptySignal,
  WindowTooLarge,
  SignalTooShort,
  OddOrder,
  BandOutOfNyquist,
  SamplingTooLow,
  // trial handling / ERP
  EmptyTrialSet,
  TrialTooShort,
  ReferenceOutsideSignal,
  ZeroReference,
  UnknownMethod,
  // connectivity
  LengthMismatch,
  EmptyPhase,
  WindowOutsideTrials,
  BadPair,
  WindowTooShortForSegments,
  // EMG
  NoOnsetDetected,
  // synth / config
  InvalidSpec,
  InvalidArgument,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) raise(code, what);
}

}  // namespace mcsig

#endif
