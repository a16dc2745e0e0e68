#ifndef MCSIG_DEFAULTS_HPP
#define MCSIG_DEFAULTS_HPP

namespace mcsig::defaults {

// Post-trigger signal duration used by trial synchronization, ERP and EMG
// quantification (seconds).
inline constexpr double kDurationS = 2.0;

// ERD/ERS reference period relative to the trigger (seconds).
inline constexpr double kRefPeriodLoS = -1.3;
inline constexpr double kRefPeriodHiS = -0.3;

// Confidence-interval multiplier for ERD/ERS detection.
inline constexpr double kCofIntv = 3.0;

// Monte-Carlo repetitions for perturbation-based phase estimation.
inline constexpr int kPertnum = 100;

// Connectivity band of interest (Hz) and analysis window around the trigger
// (seconds, [pre, post]).
inline constexpr double kConnBandLoHz = 12.0;
inline constexpr double kConnBandHiHz = 32.0;
inline constexpr double kConnWindowPreS = -3.0;
inline constexpr double kConnWindowPostS = 2.0;

// Connectivity maps are evaluated in consecutive bins of this length.
inline constexpr double kConnBinS = 1.0;

// Named rhythm bands (Hz).
inline constexpr double kDeltaLo = 1.0, kDeltaHi = 4.0;
inline constexpr double kThetaLo = 4.0, kThetaHi = 8.0;
inline constexpr double kAlphaLo = 8.0, kAlphaHi = 12.0;
inline constexpr double kBetaLo = 12.0, kBetaHi = 32.0;
inline constexpr double kGammaLo = 32.0, kGammaHi = 80.0;

// Band-pass comb cascade order (must be even for zero phase).
inline constexpr int kCicOrder = 4;

// Drift rejection window, seconds per smoothing stage.
inline constexpr double kDriftWindowS = 1.5;

// Post-averaging trend smoother for ERP / EMG curves (seconds).
inline constexpr double kTrendWindowS = 0.25;

// EMG onset detection.
inline constexpr double kOnsetThCoeff = 1.0;
inline constexpr double kOnsetBaselineS = 0.5;
inline constexpr double kOnsetWindowS = 0.1;

// ECG extraction: elliptic low-pass specs plus the median stage.
inline constexpr int kEcgFilterOrder = 4;
inline constexpr double kEcgCutoffHz = 30.0;
inline constexpr double kEcgPassRippleDb = 0.1;
inline constexpr double kEcgStopAttenDb = 50.0;
inline constexpr double kEcgMedianWindowS = 0.05;

// Short-time Fourier map parameters.
inline constexpr double kStftWindowS = 0.25;
inline constexpr double kStftOverlap = 0.5;

// Morlet scalogram parameters.
inline constexpr double kCwtOmega0 = 6.0;
inline constexpr int kCwtNumScales = 48;
inline constexpr double kCwtFreqLoHz = 4.0;
inline constexpr double kCwtFreqHiHz = 40.0;

// Narrow-band channelization grid.
inline constexpr double kNbchBinHz = 2.0;
inline constexpr double kNbchFreqLoHz = 4.0;
inline constexpr double kNbchFreqHiHz = 40.0;

// Coherence: non-overlapping segments per analysis bin.
inline constexpr int kMscSegmentsPerWindow = 4;

// Seed used when the caller does not provide one.
inline constexpr unsigned long long kSeed = 12345;

}  // namespace mcsig::defaults

#endif
