#include "mcsig/emg.hpp"

#include <algorithm>
#include <cmath>

#include "mcsig/iir.hpp"
#include "mcsig/parallel.hpp"
#include "mcsig/precondition.hpp"

namespace mcsig {

namespace {

// Standard deviation over the window ending at each sample, truncated at the
// start of the record.
Vec trailing_std(const VecRef& x, Index window) {
  const Index n = x.size();
  Vec out(n);
  for (Index i = 0; i < n; ++i) {
    const Index lo = std::max<Index>(0, i - window + 1);
    const Index len = i - lo + 1;
    const double mean = x.segment(lo, len).mean();
    double acc = 0.0;
    for (Index j = lo; j <= i; ++j) {
      const double d = x[j] - mean;
      acc += d * d;
    }
    out[i] = std::sqrt(acc / static_cast<double>(len));
  }
  return out;
}

Vec trailing_mean(const Vec& x, Index window) {
  const Index n = x.size();
  Vec prefix(n + 1);
  prefix[0] = 0.0;
  for (Index i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];
  Vec out(n);
  for (Index i = 0; i < n; ++i) {
    const Index lo = std::max<Index>(0, i - window + 1);
    out[i] = (prefix[i + 1] - prefix[lo]) / static_cast<double>(i - lo + 1);
  }
  return out;
}

double lsq_slope(const Vec& t, const Vec& y, Index lo, Index hi) {
  const Index n = hi - lo;
  if (n < 2) return 0.0;
  const double t_mean = t.segment(lo, n).mean();
  const double y_mean = y.segment(lo, n).mean();
  double num = 0.0, den = 0.0;
  for (Index i = lo; i < hi; ++i) {
    const double dt = t[i] - t_mean;
    num += dt * (y[i] - y_mean);
    den += dt * dt;
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace

OnsetResult emg_onset(const VecRef& emg, double fs, Index window,
                      double th_coeff, const OnsetOptions& opt) {
  require(window >= 2, ErrorCode::InvalidArgument, "window must be >= 2");
  require(th_coeff > 0.0, ErrorCode::InvalidArgument,
          "threshold coefficient must be positive");
  const Index n = emg.size();
  require(n >= window, ErrorCode::SignalTooShort,
          "signal shorter than the analysis window");
  const Index baseline_n = round_index(opt.baseline_s * fs);
  require(baseline_n >= 2 && baseline_n <= n, ErrorCode::SignalTooShort,
          "signal shorter than the baseline segment");

  OnsetResult result;
  result.std_vector = trailing_std(emg, window);

  // Baseline statistics start once the deviation window is fully formed.
  const Index base_lo = std::min(window - 1, baseline_n - 2);
  const Vec base = result.std_vector.segment(base_lo, baseline_n - base_lo);
  const double base_mean = base.mean();
  const double base_std = std::sqrt((base.array() - base_mean).square().sum() /
                                    static_cast<double>(base.size()));
  result.threshold = base_mean + th_coeff * base_std;

  // Stage 1: first persistent supra-threshold run.
  const Index need = std::max<Index>(1, window / 2);
  Index run_start = -1;
  Index run_len = 0;
  for (Index i = 0; i < n; ++i) {
    if (result.std_vector[i] > result.threshold) {
      if (run_len == 0) run_start = i;
      if (++run_len >= need) break;
    } else {
      run_len = 0;
    }
  }
  require(run_len >= need, ErrorCode::NoOnsetDetected,
          "no persistent activity above the threshold");

  // Stage 2: back off to where the smoothed trend last sat below threshold.
  const Vec smoothed = trailing_mean(result.std_vector, window);
  Index onset = run_start;
  for (Index t = run_start - 1; t >= 0; --t) {
    if (smoothed[t] < result.threshold) {
      onset = t;
      break;
    }
  }
  result.onset_sample = onset;
  result.onset_time = static_cast<double>(onset) / fs;
  return result;
}

Vec ecg_extract(const VecRef& emg, double fs, const EcgExtractOptions& opt) {
  require(fs > 2.0 * opt.cutoff_hz, ErrorCode::SamplingTooLow,
          "sampling rate must exceed twice the low-pass cutoff");
  const auto sections = elliptic_lowpass(opt.order, opt.pass_ripple_db,
                                         opt.stop_atten_db, opt.cutoff_hz, fs);
  const Vec low = filtfilt(sections, emg);
  Index w = std::max<Index>(1, round_index(opt.median_window_s * fs));
  if (w % 2 == 0) ++w;
  return median_filter(low, std::min(w, low.size()));
}

EmgQuantResult emg_quantification(const TrialSet& trials, Index channel,
                                  const std::vector<Index>& onset_samples,
                                  const EmgQuantOptions& opt) {
  require(!trials.trials.empty(), ErrorCode::EmptyTrialSet, "no trials");
  require(channel >= 0 && channel < trials.n_channels(),
          ErrorCode::ChannelIndexOutOfRange,
          "channel " + std::to_string(channel));
  require(onset_samples.size() == trials.trials.size(),
          ErrorCode::LengthMismatch, "onset count != trial count");

  EmgQuantResult result;
  std::vector<Vec> rectified(trials.trials.size());
  std::vector<double> onset_times(trials.trials.size());
  result.ecg_estimates.resize(trials.trials.size());
  parallel_for(trials.n_trials(), [&](Index t) {
    const size_t i = static_cast<size_t>(t);
    const Vec raw = trials.trials[i].row(channel).transpose();
    Vec ecg = ecg_extract(raw, trials.fs, opt.ecg);
    rectified[i] = (raw - ecg).cwiseAbs();
    result.ecg_estimates[i] = std::move(ecg);
    onset_times[i] = static_cast<double>(onset_samples[i]) / trials.fs;
  });

  result.synched_rectified =
      synch_vectors(rectified, trials.fs, onset_times, opt.duration_s);
  const Vec mean = result.synched_rectified.ensemble.colwise().mean();
  const Index trend_w = std::clamp<Index>(
      round_index(opt.trend_window_s * trials.fs), 1, mean.size());

  QuantifiedEmg& q = result.quant;
  q.curve = baseline_estimate(mean, trend_w, Approach::Mean);
  q.time_vec = result.synched_rectified.time_vec;
  q.trigger_time_sec = result.synched_rectified.trigger_time_sec;

  const Index i0 = std::min<Index>(result.synched_rectified.trigger_sample,
                                   q.curve.size() - 1);
  Index peak_idx = i0;
  for (Index i = i0; i < q.curve.size(); ++i)
    if (q.curve[i] > q.curve[peak_idx]) peak_idx = i;
  q.peak_magnitude = q.curve[peak_idx];
  q.activation_slope = lsq_slope(q.time_vec, q.curve, i0, peak_idx + 1);
  const Index imm_hi = std::min<Index>(
      q.curve.size(), i0 + round_index(opt.immediate_slope_s * trials.fs));
  q.immediate_post_onset_slope = lsq_slope(q.time_vec, q.curve, i0, imm_hi);
  return result;
}

}  // namespace mcsig
