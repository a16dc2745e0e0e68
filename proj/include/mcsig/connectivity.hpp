#ifndef MCSIG_CONNECTIVITY_HPP
#define MCSIG_CONNECTIVITY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mcsig/defaults.hpp"
#include "mcsig/erp.hpp"
#include "mcsig/types.hpp"

namespace mcsig {

// Instantaneous phase of one channel at one band, estimated by averaging the
// analytic-signal phase over many runs with slightly perturbed band-pass
// parameters. Phases are aggregated as the argument of the mean unit phasor;
// envelope and analytic signal are arithmetic means across runs.
struct PhaseSequence {
  Vec phase;      // radians, wrapped to (-pi, pi]
  Vec inst_freq;  // Hz
  Vec envelope;   // microvolts, >= 0
  CVec analytic;
  double fs = 0.0;
  BandSpec band;

  Index length() const { return phase.size(); }
};

struct PhaseEstOptions {
  int pertnum = defaults::kPertnum;
  int cic_order = defaults::kCicOrder;
  std::uint64_t seed = defaults::kSeed;
};

// Run 0 uses the nominal band; later runs draw
//   f0' = f0 + u1,  bw' = bw * (1 + u2)
// with u1 uniform on +/-0.01*bw and u2 uniform on +/-0.05, from a substream
// derived per repetition so scheduling cannot change the draws.
PhaseSequence phase_est(const VecRef& sig, double fs, const BandSpec& band,
                        const PhaseEstOptions& opt = {});

// Phase-locking value: magnitude of the time-averaged unit phasor of the
// phase difference. 1 = perfectly locked, 0 = unlocked.
double plv(const VecRef& phase_x, const VecRef& phase_y);

// Pairwise PLV of a set of equal-length phase sequences; exactly symmetric
// with a unit diagonal.
Mat plv_matrix(const std::vector<Vec>& phases);

struct TimeWindow {
  double start_s = 0.0;  // relative to the trigger
  double end_s = 0.0;
};

enum class ConnectivityMeasure { Plv, Msc };

// Per-window pairwise connectivity matrices, each entry in [0, 1].
struct ConnectivityMap {
  std::vector<TimeWindow> windows;
  std::vector<Mat> values;  // one n_ch x n_ch symmetric matrix per window
  ConnectivityMeasure measure = ConnectivityMeasure::Plv;
  BandSpec band;
  std::vector<std::string> channel_labels;
};

// How per-trial estimates combine into the reported value: the mean of the
// per-trial values, or one estimate over samples pooled across trials.
enum class TrialAggregation { MeanOfTrialValues, PooledSamples };

struct PlvMapOptions {
  BandSpec band = BandSpec::from_range(defaults::kConnBandLoHz,
                                       defaults::kConnBandHiHz);
  double window_pre_s = defaults::kConnWindowPreS;   // negative
  double window_post_s = defaults::kConnWindowPostS;
  int pertnum = defaults::kPertnum;
  int cic_order = defaults::kCicOrder;
  TrialAggregation aggregation = TrialAggregation::MeanOfTrialValues;
  std::uint64_t seed = defaults::kSeed;
};

struct PlvPairSeries {
  Index ch_a = 0, ch_b = 0;
  std::vector<TimeWindow> windows;
  Vec values;
};

// Time-course PLV between two channels over consecutive 1 s windows.
PlvPairSeries tcplv_pair(const TrialSet& trials, Index ch_a, Index ch_b,
                         const std::vector<double>& onset_times,
                         const PlvMapOptions& opt = {});

struct PlvReferenceSeries {
  Index reference = 0;
  std::vector<TimeWindow> windows;
  Mat values;  // windows x channels
};

// Reference channel against every channel. Pass reference = -1 to use the
// channel labeled C3.
PlvReferenceSeries tcplv_reference(const TrialSet& trials, Index reference,
                                   const std::vector<double>& onset_times,
                                   const PlvMapOptions& opt = {});

// All-pairs PLV maps.
ConnectivityMap pwplv(const TrialSet& trials,
                      const std::vector<double>& onset_times,
                      const PlvMapOptions& opt = {});

struct CoherenceOptions {
  BandSpec band = BandSpec::from_range(defaults::kConnBandLoHz,
                                       defaults::kConnBandHiHz);
  double window_pre_s = defaults::kConnWindowPreS;
  double window_post_s = defaults::kConnWindowPostS;
  int segments_per_window = defaults::kMscSegmentsPerWindow;
};

// All-pairs magnitude-squared coherence maps. Cross- and auto-spectra are
// accumulated over Hamming-tapered non-overlapping segments pooled across
// all trials, then band-averaged over the bins inside the band.
ConnectivityMap pwcoherence(const TrialSet& trials,
                            const std::vector<double>& onset_times,
                            const CoherenceOptions& opt = {});

// Complex spectra of the tapered segments feeding one coherence estimate,
// one entry per (trial, segment).
using SegmentSpectra = std::vector<CVec>;

// Per-bin magnitude-squared coherence from per-segment spectra (the x and y
// lists pair up segment-by-segment). Exposed for direct verification.
Vec msc_from_spectra(const SegmentSpectra& spectra_x,
                     const SegmentSpectra& spectra_y);

}  // namespace mcsig

#endif
