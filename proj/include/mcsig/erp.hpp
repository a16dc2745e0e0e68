#ifndef MCSIG_ERP_HPP
#define MCSIG_ERP_HPP

#include "mcsig/defaults.hpp"
#include "mcsig/precondition.hpp"
#include "mcsig/types.hpp"

namespace mcsig {

// Trials aligned on a common trigger instant. Row i of `ensemble` is trial i
// shifted so every onset coincides at `trigger_sample`; time 0 is the start
// of the aligned record.
struct SynchronizedTrials {
  Mat ensemble;             // trials x samples
  double trigger_time_sec = 0.0;
  Index trigger_sample = 0;
  Vec time_vec;             // seconds, step 1/fs
  double fs = 0.0;
};

// Aligns one channel of every trial on the earliest onset and truncates all
// rows to trigger + duration seconds.
SynchronizedTrials trigger_synch(const TrialSet& trials, Index channel,
                                 const std::vector<double>& onset_times,
                                 double duration_s = defaults::kDurationS);

// Same alignment applied directly to a list of single-channel signals.
SynchronizedTrials synch_vectors(const std::vector<Vec>& signals, double fs,
                                 const std::vector<double>& onset_times,
                                 double duration_s = defaults::kDurationS);

// Trigger-averaged band power over time.
struct ERPCurve {
  Vec values;               // microvolt^2, nonnegative
  Vec time_vec;             // seconds
  double trigger_time_sec = 0.0;
  double fs = 0.0;
  BandSpec band;
  Index n_trials = 0;
};

struct ErpOptions {
  double duration_s = defaults::kDurationS;
  int cic_order = defaults::kCicOrder;
  double trend_window_s = defaults::kTrendWindowS;
};

// Band-pass each trial, square, align on the trigger, average across trials
// and smooth the result over time.
ERPCurve trigger_avg_erp(const TrialSet& trials, Index channel,
                         const std::vector<double>& onset_times,
                         const BandSpec& band, const ErpOptions& opt = {});

struct ErdErsSegment {
  enum class Kind { Erd, Ers };
  Kind kind;
  double start_s = 0.0;
  double end_s = 0.0;
  double area_pct = 0.0;  // mean excursion beyond the confidence line, percent
};

struct ErdErsReport {
  double reference_value = 0.0;  // microvolt^2
  double reference_std = 0.0;
  double cof_intv = defaults::kCofIntv;
  double lower_pct = 0.0;        // confidence lines in percent units
  double upper_pct = 0.0;
  std::vector<ErdErsSegment> segments;
  Vec quant_erp;                 // percent of reference
  Vec time_vec;
  double trigger_time_sec = 0.0;
};

struct QuantOptions {
  double ref_lo_s = defaults::kRefPeriodLoS;  // relative to trigger, negative
  double ref_hi_s = defaults::kRefPeriodHiS;
  double cof_intv = defaults::kCofIntv;
};

// Normalizes the curve to the pre-trigger reference period and reports the
// post-trigger excursions beyond the confidence lines.
ErdErsReport erp_quantification(const ERPCurve& erp,
                                const QuantOptions& opt = {});

enum class TfMethod { Stft, Cwt, Nbch };

TfMethod parse_tf_method(const std::string& name);
const char* tf_method_name(TfMethod method);

// Frequency x time power map.
struct TFMap {
  Mat power;                 // rows follow freq_vec, columns time_vec
  Vec freq_vec;              // Hz
  Vec time_vec;              // seconds
  double trigger_time_sec = 0.0;
  TfMethod method = TfMethod::Stft;
};

struct TfOptions {
  double duration_s = defaults::kDurationS;
  TfMethod method = TfMethod::Stft;
  // short-time Fourier
  double stft_window_s = defaults::kStftWindowS;
  double stft_overlap = defaults::kStftOverlap;
  // Morlet scalogram
  double cwt_omega0 = defaults::kCwtOmega0;
  int cwt_num_scales = defaults::kCwtNumScales;
  double cwt_freq_lo_hz = defaults::kCwtFreqLoHz;
  double cwt_freq_hi_hz = defaults::kCwtFreqHiHz;
  // narrow-band channelization
  double nbch_bin_hz = defaults::kNbchBinHz;
  double nbch_freq_lo_hz = defaults::kNbchFreqLoHz;
  double nbch_freq_hi_hz = defaults::kNbchFreqHiHz;
  int cic_order = defaults::kCicOrder;
  double trend_window_s = defaults::kTrendWindowS;
};

// Trigger-averaged time-frequency map by one of the three methods.
TFMap trigger_avg_tf_erp(const TrialSet& trials, Index channel,
                         const std::vector<double>& onset_times,
                         const TfOptions& opt = {});

}  // namespace mcsig

#endif
