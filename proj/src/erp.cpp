#include "mcsig/erp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "mcsig/fft_util.hpp"
#include "mcsig/parallel.hpp"

namespace mcsig {

namespace {

void check_onsets(size_t n_trials, const std::vector<double>& onset_times) {
  require(n_trials > 0, ErrorCode::EmptyTrialSet, "no trials");
  require(onset_times.size() == n_trials, ErrorCode::LengthMismatch,
          "onset count != trial count");
}

}  // namespace

SynchronizedTrials synch_vectors(const std::vector<Vec>& signals, double fs,
                                 const std::vector<double>& onset_times,
                                 double duration_s) {
  check_onsets(signals.size(), onset_times);
  require(fs > 0.0, ErrorCode::InvalidArgument, "fs must be positive");
  require(duration_s > 0.0, ErrorCode::InvalidArgument,
          "duration must be positive");

  SynchronizedTrials out;
  out.fs = fs;
  out.trigger_time_sec = *std::min_element(onset_times.begin(),
                                           onset_times.end());
  require(out.trigger_time_sec >= 0.0, ErrorCode::InvalidArgument,
          "negative onset time");
  out.trigger_sample = round_index(out.trigger_time_sec * fs);
  const Index out_len = round_index((out.trigger_time_sec + duration_s) * fs);

  out.ensemble.resize(static_cast<Index>(signals.size()), out_len);
  for (size_t i = 0; i < signals.size(); ++i) {
    const Index shift =
        round_index((onset_times[i] - out.trigger_time_sec) * fs);
    require(shift + out_len <= signals[i].size(), ErrorCode::TrialTooShort,
            "trial " + std::to_string(i) +
                ": onset + duration exceeds the trial length");
    out.ensemble.row(static_cast<Index>(i)) =
        signals[i].segment(shift, out_len).transpose();
  }
  out.time_vec = Vec::LinSpaced(out_len, 0.0, static_cast<double>(out_len - 1)) / fs;
  return out;
}

SynchronizedTrials trigger_synch(const TrialSet& trials, Index channel,
                                 const std::vector<double>& onset_times,
                                 double duration_s) {
  require(!trials.trials.empty(), ErrorCode::EmptyTrialSet, "no trials");
  require(channel >= 0 && channel < trials.n_channels(),
          ErrorCode::ChannelIndexOutOfRange,
          "channel " + std::to_string(channel));
  std::vector<Vec> rows;
  rows.reserve(trials.trials.size());
  for (const Mat& trial : trials.trials)
    rows.push_back(trial.row(channel).transpose());
  return synch_vectors(rows, trials.fs, onset_times, duration_s);
}

ERPCurve trigger_avg_erp(const TrialSet& trials, Index channel,
                         const std::vector<double>& onset_times,
                         const BandSpec& band, const ErpOptions& opt) {
  require(!trials.trials.empty(), ErrorCode::EmptyTrialSet, "no trials");
  require(channel >= 0 && channel < trials.n_channels(),
          ErrorCode::ChannelIndexOutOfRange,
          "channel " + std::to_string(channel));

  std::vector<Vec> powered(trials.trials.size());
  parallel_for(trials.n_trials(), [&](Index t) {
    const Vec filtered = cic_bandpass(
        trials.trials[t].row(channel).transpose(), trials.fs, band,
        opt.cic_order);
    powered[static_cast<size_t>(t)] = filtered.array().square();
  });
  const SynchronizedTrials synched =
      synch_vectors(powered, trials.fs, onset_times, opt.duration_s);

  const Vec mean = synched.ensemble.colwise().mean();
  const Index trend_w = std::clamp<Index>(
      round_index(opt.trend_window_s * trials.fs), 1, mean.size());

  ERPCurve erp;
  erp.values = baseline_estimate(mean, trend_w, Approach::Mean);
  erp.time_vec = synched.time_vec;
  erp.trigger_time_sec = synched.trigger_time_sec;
  erp.fs = trials.fs;
  erp.band = band;
  erp.n_trials = trials.n_trials();
  return erp;
}

namespace {

struct Excursion {
  double start = 0.0;
  double end = 0.0;
  double area = 0.0;  // integral of |q - level| over [start, end]
};

// Maximal intervals of the piecewise-linear curve q(t) strictly beyond
// `level` on one side, restricted to t >= t_from.
std::vector<Excursion> find_excursions(const Vec& t, const Vec& q,
                                       double level, bool below,
                                       double t_from) {
  const auto beyond = [&](double v) { return below ? v < level : v > level; };
  const auto value_at = [&](Index i0, Index i1, double tx) {
    if (i0 == i1) return q[i0];
    const double w = (tx - t[i0]) / (t[i1] - t[i0]);
    return q[i0] + w * (q[i1] - q[i0]);
  };

  std::vector<Excursion> out;
  const Index n = t.size();
  Index first = 0;
  while (first < n && t[first] < t_from) ++first;
  if (first >= n) return out;

  bool inside = false;
  Excursion cur;
  double prev_t, prev_q;
  if (first > 0 && t[first] > t_from) {
    prev_t = t_from;
    prev_q = value_at(first - 1, first, t_from);
  } else {
    prev_t = t[first];
    prev_q = q[first];
  }
  if (beyond(prev_q)) {
    inside = true;
    cur = {prev_t, prev_t, 0.0};
  }

  for (Index i = (t[first] > prev_t ? first : first + 1); i < n; ++i) {
    const double t1 = t[i], q1 = q[i];
    const bool in1 = beyond(q1);
    if (inside && in1) {
      cur.area += 0.5 * (std::abs(prev_q - level) + std::abs(q1 - level)) *
                  (t1 - prev_t);
      cur.end = t1;
    } else if (inside && !in1) {
      const double tc = q1 == prev_q
                            ? t1
                            : prev_t + (level - prev_q) * (t1 - prev_t) /
                                           (q1 - prev_q);
      cur.area += 0.5 * std::abs(prev_q - level) * (tc - prev_t);
      cur.end = tc;
      if (cur.end > cur.start) out.push_back(cur);
      inside = false;
    } else if (!inside && in1) {
      const double tc = q1 == prev_q
                            ? prev_t
                            : prev_t + (level - prev_q) * (t1 - prev_t) /
                                           (q1 - prev_q);
      cur = {tc, t1, 0.5 * std::abs(q1 - level) * (t1 - tc)};
      inside = true;
    }
    prev_t = t1;
    prev_q = q1;
  }
  if (inside && cur.end > cur.start) out.push_back(cur);
  return out;
}

}  // namespace

ErdErsReport erp_quantification(const ERPCurve& erp, const QuantOptions& opt) {
  require(erp.values.size() > 0, ErrorCode::EmptySignal, "empty curve");
  require(opt.ref_lo_s < opt.ref_hi_s && opt.ref_hi_s <= 0.0,
          ErrorCode::InvalidArgument,
          "reference period must be [-a, -b] before the trigger");

  const double t_lo = erp.trigger_time_sec + opt.ref_lo_s;
  const double t_hi = erp.trigger_time_sec + opt.ref_hi_s;
  const double dt = 1.0 / erp.fs;
  require(t_lo >= erp.time_vec[0] - dt / 2 &&
              t_hi <= erp.time_vec[erp.time_vec.size() - 1] + dt / 2,
          ErrorCode::ReferenceOutsideSignal,
          "reference period is not covered by the curve");

  double sum = 0.0, sum2 = 0.0;
  Index count = 0;
  for (Index i = 0; i < erp.values.size(); ++i) {
    if (erp.time_vec[i] >= t_lo - dt / 2 && erp.time_vec[i] <= t_hi + dt / 2) {
      sum += erp.values[i];
      sum2 += erp.values[i] * erp.values[i];
      ++count;
    }
  }
  require(count > 0, ErrorCode::ReferenceOutsideSignal,
          "no samples inside the reference period");

  ErdErsReport report;
  report.reference_value = sum / static_cast<double>(count);
  require(report.reference_value != 0.0, ErrorCode::ZeroReference,
          "reference power is zero");
  if (count > 1) {
    const double var =
        (sum2 - sum * sum / static_cast<double>(count)) /
        static_cast<double>(count - 1);
    report.reference_std = std::sqrt(std::max(0.0, var));
  }
  report.cof_intv = opt.cof_intv;
  report.trigger_time_sec = erp.trigger_time_sec;
  report.time_vec = erp.time_vec;
  report.quant_erp = 100.0 * erp.values / report.reference_value;

  const double band_pct =
      opt.cof_intv * 100.0 * report.reference_std / report.reference_value;
  report.lower_pct = 100.0 - band_pct;
  report.upper_pct = 100.0 + band_pct;

  const auto erd = find_excursions(erp.time_vec, report.quant_erp,
                                   report.lower_pct, true,
                                   erp.trigger_time_sec);
  const auto ers = find_excursions(erp.time_vec, report.quant_erp,
                                   report.upper_pct, false,
                                   erp.trigger_time_sec);
  for (const Excursion& e : erd)
    report.segments.push_back({ErdErsSegment::Kind::Erd, e.start, e.end,
                               e.area / (e.end - e.start)});
  for (const Excursion& e : ers)
    report.segments.push_back({ErdErsSegment::Kind::Ers, e.start, e.end,
                               e.area / (e.end - e.start)});
  std::sort(report.segments.begin(), report.segments.end(),
            [](const ErdErsSegment& a, const ErdErsSegment& b) {
              return a.start_s < b.start_s;
            });
  return report;
}

TfMethod parse_tf_method(const std::string& name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(c)));
  if (lower == "stft") return TfMethod::Stft;
  if (lower == "cwt") return TfMethod::Cwt;
  if (lower == "nbch") return TfMethod::Nbch;
  raise(ErrorCode::UnknownMethod, "unknown time-frequency method '" + name + "'");
}

const char* tf_method_name(TfMethod method) {
  switch (method) {
    case TfMethod::Stft: return "STFT";
    case TfMethod::Cwt: return "CWT";
    case TfMethod::Nbch: return "NBCH";
  }
  return "?";
}

namespace {

TFMap stft_map(const SynchronizedTrials& synched, const TfOptions& opt) {
  const double fs = synched.fs;
  const Index len = synched.ensemble.cols();
  const Index w = std::clamp<Index>(round_index(opt.stft_window_s * fs), 2, len);
  const Index hop = std::max<Index>(
      1, round_index(static_cast<double>(w) * (1.0 - opt.stft_overlap)));
  const Index n_frames = (len - w) / hop + 1;
  const Index n_bins = w / 2 + 1;
  const Vec window = hamming(w);

  TFMap map;
  map.method = TfMethod::Stft;
  map.power = Mat::Zero(n_bins, n_frames);
  for (Index trial = 0; trial < synched.ensemble.rows(); ++trial) {
    for (Index f = 0; f < n_frames; ++f) {
      const Vec seg = synched.ensemble.row(trial)
                          .segment(f * hop, w)
                          .transpose()
                          .cwiseProduct(window);
      const CVec spec = fft_real(seg);
      for (Index k = 0; k < n_bins; ++k)
        map.power(k, f) += std::norm(spec[k]);
    }
  }
  map.power /= static_cast<double>(synched.ensemble.rows());

  map.freq_vec = Vec::LinSpaced(n_bins, 0.0, static_cast<double>(n_bins - 1)) *
                 (fs / static_cast<double>(w));
  map.time_vec.resize(n_frames);
  for (Index f = 0; f < n_frames; ++f)
    map.time_vec[f] =
        (static_cast<double>(f * hop) + (static_cast<double>(w) - 1.0) / 2.0) /
        fs;
  map.trigger_time_sec = synched.trigger_time_sec;
  return map;
}

TFMap cwt_map(const SynchronizedTrials& synched, const TfOptions& opt) {
  const double fs = synched.fs;
  const Index len = synched.ensemble.cols();
  const Index nfft = next_pow2(2 * len);
  const int n_scales = opt.cwt_num_scales;
  require(n_scales >= 1, ErrorCode::InvalidArgument, "need >= 1 scale");

  Vec freqs(n_scales);
  if (n_scales == 1) {
    freqs[0] = opt.cwt_freq_lo_hz;
  } else {
    const double ratio = opt.cwt_freq_hi_hz / opt.cwt_freq_lo_hz;
    for (int j = 0; j < n_scales; ++j)
      freqs[j] = opt.cwt_freq_lo_hz *
                 std::pow(ratio, static_cast<double>(j) / (n_scales - 1));
  }

  // Frequency response of the analytic Morlet at each scale; scales are in
  // samples so the response is sampled at omega_k = 2 pi k / nfft.
  Mat wavelet(n_scales, nfft / 2 + 1);
  const double quartic_pi = std::pow(EIGEN_PI, -0.25);
  for (int j = 0; j < n_scales; ++j) {
    const double scale = opt.cwt_omega0 * fs / (2.0 * EIGEN_PI * freqs[j]);
    const double norm = quartic_pi * std::sqrt(2.0 * scale);
    for (Index k = 0; k <= nfft / 2; ++k) {
      const double omega = 2.0 * EIGEN_PI * static_cast<double>(k) /
                           static_cast<double>(nfft);
      const double arg = scale * omega - opt.cwt_omega0;
      wavelet(j, k) = norm * std::exp(-0.5 * arg * arg);
    }
  }

  TFMap map;
  map.method = TfMethod::Cwt;
  map.power = Mat::Zero(n_scales, len);
  CVec padded = CVec::Zero(nfft);
  for (Index trial = 0; trial < synched.ensemble.rows(); ++trial) {
    padded.setZero();
    padded.head(len).real() = synched.ensemble.row(trial).transpose();
    padded.head(len).imag().setZero();
    const CVec spec = fft(padded);
    for (int j = 0; j < n_scales; ++j) {
      CVec shaped = CVec::Zero(nfft);
      for (Index k = 0; k <= nfft / 2; ++k) shaped[k] = spec[k] * wavelet(j, k);
      const CVec coef = ifft(shaped);
      for (Index i = 0; i < len; ++i) map.power(j, i) += std::norm(coef[i]);
    }
  }
  map.power /= static_cast<double>(synched.ensemble.rows());
  map.freq_vec = freqs;
  map.time_vec = synched.time_vec;
  map.trigger_time_sec = synched.trigger_time_sec;
  return map;
}

}  // namespace

TFMap trigger_avg_tf_erp(const TrialSet& trials, Index channel,
                         const std::vector<double>& onset_times,
                         const TfOptions& opt) {
  require(!trials.trials.empty(), ErrorCode::EmptyTrialSet, "no trials");
  require(channel >= 0 && channel < trials.n_channels(),
          ErrorCode::ChannelIndexOutOfRange,
          "channel " + std::to_string(channel));

  if (opt.method == TfMethod::Nbch) {
    require(opt.nbch_bin_hz > 0.0 &&
                opt.nbch_freq_hi_hz > opt.nbch_freq_lo_hz,
            ErrorCode::InvalidArgument, "bad channelization grid");
    std::vector<double> centers;
    for (double lo = opt.nbch_freq_lo_hz;
         lo + opt.nbch_bin_hz <= opt.nbch_freq_hi_hz + 1e-9;
         lo += opt.nbch_bin_hz)
      centers.push_back(lo + opt.nbch_bin_hz / 2.0);
    require(!centers.empty(), ErrorCode::InvalidArgument,
            "channelization grid is empty");

    TFMap map;
    map.method = TfMethod::Nbch;
    ErpOptions erp_opt;
    erp_opt.duration_s = opt.duration_s;
    erp_opt.cic_order = opt.cic_order;
    erp_opt.trend_window_s = opt.trend_window_s;
    for (size_t row = 0; row < centers.size(); ++row) {
      BandSpec bin{centers[row], opt.nbch_bin_hz, {}};
      const ERPCurve curve =
          trigger_avg_erp(trials, channel, onset_times, bin, erp_opt);
      if (row == 0) {
        map.power.resize(static_cast<Index>(centers.size()),
                         curve.values.size());
        map.time_vec = curve.time_vec;
        map.trigger_time_sec = curve.trigger_time_sec;
      }
      map.power.row(static_cast<Index>(row)) = curve.values.transpose();
    }
    map.freq_vec =
        Eigen::Map<const Vec>(centers.data(), static_cast<Index>(centers.size()));
    return map;
  }

  const SynchronizedTrials synched =
      trigger_synch(trials, channel, onset_times, opt.duration_s);
  switch (opt.method) {
    case TfMethod::Stft: return stft_map(synched, opt);
    case TfMethod::Cwt: return cwt_map(synched, opt);
    default: break;
  }
  raise(ErrorCode::UnknownMethod, "unhandled time-frequency method");
}

}  // namespace mcsig
