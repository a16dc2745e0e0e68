#ifndef MCSIG_SYNTH_HPP
#define MCSIG_SYNTH_HPP

#include <optional>
#include <utility>

#include "mcsig/defaults.hpp"
#include "mcsig/types.hpp"

namespace mcsig {

// Deterministic trial-set generator with ground-truth annotations. Every
// random stream derives from the spec seed via the fixed generator in
// rng.hpp, so equal specs produce bit-identical data on any platform.

struct ToneSpec {
  double freq_hz = 10.0;
  double amplitude_uv = 1.0;
};

// Band power drop over an interval relative to the per-trial onset. In-band
// amplitudes (tones and the in-band share of the background noise) scale by
// sqrt(drop_fraction), so band power inside the interval is drop_fraction
// times the power outside.
struct ErdSpec {
  BandSpec band;
  double drop_fraction = 0.5;  // (0, 1]
  double start_s = 0.0;        // relative to onset
  double end_s = 0.5;
};

// Shared narrowband oscillation between two channels with independent phase
// jitter per channel. Gaussian jitter of variance s^2 multiplies the mean
// phasor of each channel by exp(-s^2/2), so a pair PLV target maps to
// s = sqrt(-ln(target)).
struct CouplingSpec {
  Index ch_a = 0;
  Index ch_b = 1;
  BandSpec band;
  double pre_onset_plv = 0.0;   // [0, 1]
  double post_onset_plv = 0.0;  // [0, 1]
  double amplitude_uv = 1.0;
  double jitter_smooth_s = 0.02;
};

struct EcgTrainSpec {
  double rate_bpm = 72.0;
  double amplitude_uv = 20.0;
  double pulse_width_s = 0.12;
};

// Extra channel holding a quiet prefix, an amplitude-modulated broadband
// burst from the onset, and optionally a periodic cardiac-like pulse train.
struct EmgSpec {
  double burst_amplitude_uv = 30.0;
  double burst_lo_hz = 30.0;
  double burst_hi_hz = 0.0;  // 0: min(200, 0.45 * fs)
  double rise_s = 0.05;
  double quiet_noise_uv = 0.5;
  std::optional<EcgTrainSpec> ecg;
};

enum class NoiseColor { Pink, White };

struct SynthSpec {
  Index n_trials = 1;
  Index n_channels = 1;
  double fs = 256.0;
  double trial_length_s = 4.0;
  double onset_s = 2.0;         // base movement onset
  double onset_jitter_s = 0.0;  // uniform on +/- this value
  std::vector<ToneSpec> tones;  // added to every EEG channel
  std::optional<ErdSpec> erd;
  std::optional<CouplingSpec> coupling;
  std::optional<EmgSpec> emg;
  double noise_power_uv2 = 0.0;
  NoiseColor noise_color = NoiseColor::Pink;
  std::vector<std::string> channel_labels;  // optional EEG labels
  std::uint64_t seed = defaults::kSeed;
};

struct GroundTruth {
  std::vector<Index> onset_samples;
  std::vector<double> onset_times;
  std::optional<ErdSpec> erd;
  std::optional<CouplingSpec> coupling;
  Index emg_channel = -1;  // index in the produced TrialSet, -1 if absent
  std::vector<Mat> clean_eeg;        // tones + coupling, no noise
  std::vector<Vec> clean_emg_burst;  // burst component only
  std::vector<Vec> clean_ecg;        // cardiac component only
  // Wrapped clean phases of the coupled pair, one (a, b) pair per trial.
  std::vector<std::pair<Vec, Vec>> coupling_phases;
};

struct SynthResult {
  TrialSet trials;  // EEG channels, then the EMG channel when requested
  GroundTruth truth;
};

SynthResult gen_trial_set(const SynthSpec& spec);

// Expected noise power inside a band, from the shape of the generated noise
// spectrum. Used to dial in band-limited signal-to-noise ratios.
double expected_band_noise_power(const SynthSpec& spec, const BandSpec& band);

}  // namespace mcsig

#endif
