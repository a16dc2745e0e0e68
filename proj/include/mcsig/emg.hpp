#ifndef MCSIG_EMG_HPP
#define MCSIG_EMG_HPP

#include "mcsig/defaults.hpp"
#include "mcsig/erp.hpp"
#include "mcsig/types.hpp"

namespace mcsig {

struct OnsetResult {
  Index onset_sample = 0;
  double onset_time = 0.0;  // onset_sample / fs
  Vec std_vector;           // windowed standard deviation per sample
  double threshold = 0.0;   // microvolts
};

struct OnsetOptions {
  double baseline_s = defaults::kOnsetBaselineS;  // quiet prefix length
};

// Two-stage movement onset detection: a windowed standard deviation is
// thresholded at baseline mean + th_coeff * baseline std, an event needs
// window/2 consecutive supra-threshold samples, and the onset is refined to
// the last sample before that run where the smoothed trend was still below
// the threshold.
OnsetResult emg_onset(const VecRef& emg, double fs, Index window,
                      double th_coeff = defaults::kOnsetThCoeff,
                      const OnsetOptions& opt = {});

struct EcgExtractOptions {
  int order = defaults::kEcgFilterOrder;
  double cutoff_hz = defaults::kEcgCutoffHz;
  double pass_ripple_db = defaults::kEcgPassRippleDb;
  double stop_atten_db = defaults::kEcgStopAttenDb;
  double median_window_s = defaults::kEcgMedianWindowS;
};

// Cardiac-artifact pattern estimate: zero-phase elliptic low-pass followed by
// a short median filter. Subtract the result from the recording to clean it.
Vec ecg_extract(const VecRef& emg, double fs, const EcgExtractOptions& opt = {});

struct QuantifiedEmg {
  Vec curve;      // rectified, trigger-averaged, smoothed amplitude
  Vec time_vec;
  double trigger_time_sec = 0.0;
  double peak_magnitude = 0.0;             // max of the post-trigger curve
  double activation_slope = 0.0;           // fit from trigger to the peak, uV/s
  double immediate_post_onset_slope = 0.0; // fit over the first 0.2 s, uV/s
};

struct EmgQuantOptions {
  double duration_s = defaults::kDurationS;
  double trend_window_s = defaults::kTrendWindowS;
  double immediate_slope_s = 0.2;
  EcgExtractOptions ecg;
};

struct EmgQuantResult {
  QuantifiedEmg quant;
  SynchronizedTrials synched_rectified;
  std::vector<Vec> ecg_estimates;  // per trial
};

// Per trial: remove the cardiac pattern, full-wave rectify, align on the
// trigger; then average across trials and smooth.
EmgQuantResult emg_quantification(const TrialSet& trials, Index channel,
                                  const std::vector<Index>& onset_samples,
                                  const EmgQuantOptions& opt = {});

}  // namespace mcsig

#endif
