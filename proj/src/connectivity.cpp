#include "mcsig/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "mcsig/fft_util.hpp"
#include "mcsig/parallel.hpp"
#include "mcsig/precondition.hpp"
#include "mcsig/rng.hpp"

namespace mcsig {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

Vec unwrap_phase(const Vec& phase) {
  Vec out = phase;
  double offset = 0.0;
  for (Index i = 1; i < phase.size(); ++i) {
    const double d = phase[i] - phase[i - 1];
    if (d > kPi) offset -= kTwoPi;
    else if (d < -kPi) offset += kTwoPi;
    out[i] = phase[i] + offset;
  }
  return out;
}

}  // namespace

PhaseSequence phase_est(const VecRef& sig, double fs, const BandSpec& band,
                        const PhaseEstOptions& opt) {
  band.check_against(fs);
  require(opt.pertnum >= 1, ErrorCode::InvalidArgument, "pertnum must be >= 1");
  const Index n = sig.size();
  require(static_cast<double>(n) >= 4.0 * fs / band.f0,
          ErrorCode::SignalTooShort,
          "need at least 4 cycles of the band center frequency");

  CVec mean_unit = CVec::Zero(n);
  CVec mean_analytic = CVec::Zero(n);
  Vec mean_env = Vec::Zero(n);

  for (int rep = 0; rep < opt.pertnum; ++rep) {
    BandSpec perturbed = band;
    if (rep > 0) {
      Rng rng(mix_seed(opt.seed, static_cast<std::uint64_t>(rep)));
      perturbed.f0 = band.f0 + rng.uniform(-0.01 * band.bw, 0.01 * band.bw);
      perturbed.bw = band.bw * (1.0 + rng.uniform(-0.05, 0.05));
    }
    const Vec filtered = cic_bandpass(sig, fs, perturbed, opt.cic_order);
    const CVec analytic = analytic_signal(filtered);

    const double count = static_cast<double>(rep + 1);
    for (Index i = 0; i < n; ++i) {
      const double mag = std::abs(analytic[i]);
      const std::complex<double> unit =
          mag > 0.0 ? analytic[i] / mag : std::complex<double>(0.0, 0.0);
      mean_unit[i] += (unit - mean_unit[i]) / count;
      mean_analytic[i] += (analytic[i] - mean_analytic[i]) / count;
      mean_env[i] += (mag - mean_env[i]) / count;
    }
  }

  PhaseSequence seq;
  seq.fs = fs;
  seq.band = band;
  seq.phase.resize(n);
  for (Index i = 0; i < n; ++i) {
    double p = std::atan2(mean_unit[i].imag(), mean_unit[i].real());
    if (p == -kPi) p = kPi;
    seq.phase[i] = p;
  }
  seq.envelope = mean_env;
  seq.analytic = mean_analytic;

  const Vec unwrapped = unwrap_phase(seq.phase);
  seq.inst_freq.resize(n);
  for (Index i = 0; i + 1 < n; ++i)
    seq.inst_freq[i] = (unwrapped[i + 1] - unwrapped[i]) * fs / kTwoPi;
  seq.inst_freq[n - 1] = n >= 2 ? seq.inst_freq[n - 2] : 0.0;
  return seq;
}

double plv(const VecRef& phase_x, const VecRef& phase_y) {
  require(phase_x.size() == phase_y.size(), ErrorCode::LengthMismatch,
          "phase sequences differ in length");
  const Index n = phase_x.size();
  require(n >= 1, ErrorCode::EmptyPhase, "empty phase sequence");

  // Rotating by the first difference keeps the magnitude unchanged and makes
  // the constant-offset case land on the unit phasor without rounding.
  const double d0 = phase_y[0] - phase_x[0];
  double sum_c = 0.0, sum_s = 0.0;
  for (Index t = 0; t < n; ++t) {
    const double d = (phase_y[t] - phase_x[t]) - d0;
    sum_c += std::cos(d);
    sum_s += std::sin(d);
  }
  const double v = std::hypot(sum_c / static_cast<double>(n),
                              sum_s / static_cast<double>(n));
  return std::clamp(v, 0.0, 1.0);
}

Mat plv_matrix(const std::vector<Vec>& phases) {
  require(phases.size() >= 2, ErrorCode::InvalidArgument,
          "need at least two phase sequences");
  const Index n_ch = static_cast<Index>(phases.size());
  for (const Vec& p : phases)
    require(p.size() == phases.front().size(), ErrorCode::LengthMismatch,
            "phase sequences differ in length");

  Mat m(n_ch, n_ch);
  for (Index a = 0; a < n_ch; ++a) {
    m(a, a) = plv(phases[a], phases[a]);
    for (Index b = a + 1; b < n_ch; ++b) {
      const double v = plv(phases[a], phases[b]);
      m(a, b) = v;
      m(b, a) = v;
    }
  }
  return m;
}

namespace {

struct WindowGrid {
  std::vector<TimeWindow> windows;   // relative to trigger
  std::vector<Index> start_samples;  // absolute in the aligned record
  Index bin_samples = 0;
};

WindowGrid make_window_grid(const SynchronizedTrials& synched, double pre_s,
                            double post_s) {
  require(pre_s < post_s, ErrorCode::InvalidArgument,
          "window range must satisfy pre < post");
  WindowGrid grid;
  grid.bin_samples = round_index(defaults::kConnBinS * synched.fs);
  const int n_bins =
      static_cast<int>(std::floor(post_s - pre_s + 1e-9) /
                       defaults::kConnBinS);
  require(n_bins >= 1, ErrorCode::InvalidArgument,
          "window range shorter than one bin");
  for (int k = 0; k < n_bins; ++k) {
    const double rel = pre_s + static_cast<double>(k) * defaults::kConnBinS;
    const Index s0 = synched.trigger_sample + round_index(rel * synched.fs);
    require(s0 >= 0 && s0 + grid.bin_samples <= synched.ensemble.cols(),
            ErrorCode::WindowOutsideTrials,
            "window at " + std::to_string(rel) +
                " s is not covered by the synchronized trials");
    grid.windows.push_back({rel, rel + defaults::kConnBinS});
    grid.start_samples.push_back(s0);
  }
  return grid;
}

// Aligned single-channel views for every channel of every trial. Windows
// that end at or before the trigger still need an aligned record, so the
// synchronization duration never drops below one sample.
std::vector<SynchronizedTrials> synch_all_channels(
    const TrialSet& trials, const std::vector<double>& onset_times,
    double post_s) {
  const double duration = std::max(post_s, 1.0 / trials.fs);
  std::vector<SynchronizedTrials> per_channel;
  for (Index ch = 0; ch < trials.n_channels(); ++ch)
    per_channel.push_back(trigger_synch(trials, ch, onset_times, duration));
  return per_channel;
}

// Phase sequences for the requested channels in one window of one trial; the
// perturbation stream depends only on (trial, window), so every channel sees
// the same filter draws and identical signals produce identical phases.
std::vector<Vec> window_phases(const std::vector<SynchronizedTrials>& aligned,
                               const std::vector<Index>& channels, Index trial,
                               Index start, Index len,
                               const PlvMapOptions& opt, Index window_index) {
  PhaseEstOptions pe;
  pe.pertnum = opt.pertnum;
  pe.cic_order = opt.cic_order;
  pe.seed = mix_seed(opt.seed, static_cast<std::uint64_t>(trial),
                     static_cast<std::uint64_t>(window_index));
  std::vector<Vec> phases;
  phases.reserve(channels.size());
  for (Index ch : channels) {
    const Vec seg =
        aligned[ch].ensemble.row(trial).segment(start, len).transpose();
    phases.push_back(phase_est(seg, aligned[ch].fs, opt.band, pe).phase);
  }
  return phases;
}

void check_channel(const TrialSet& trials, Index ch) {
  require(ch >= 0 && ch < trials.n_channels(),
          ErrorCode::BadPair, "channel " + std::to_string(ch) +
              " is not a valid channel index");
}

}  // namespace

PlvPairSeries tcplv_pair(const TrialSet& trials, Index ch_a, Index ch_b,
                         const std::vector<double>& onset_times,
                         const PlvMapOptions& opt) {
  check_channel(trials, ch_a);
  check_channel(trials, ch_b);
  const auto aligned = synch_all_channels(trials, onset_times,
                                          opt.window_post_s);
  const WindowGrid grid = make_window_grid(aligned.front(), opt.window_pre_s,
                                           opt.window_post_s);
  const Index n_trials = trials.n_trials();

  PlvPairSeries series;
  series.ch_a = ch_a;
  series.ch_b = ch_b;
  series.windows = grid.windows;
  series.values.resize(static_cast<Index>(grid.windows.size()));

  parallel_for(static_cast<Index>(grid.windows.size()), [&](Index w) {
    if (opt.aggregation == TrialAggregation::MeanOfTrialValues) {
      double acc = 0.0;
      for (Index trial = 0; trial < n_trials; ++trial) {
        const auto phases =
            window_phases(aligned, {ch_a, ch_b}, trial, grid.start_samples[w],
                          grid.bin_samples, opt, w);
        acc += plv(phases[0], phases[1]);
      }
      series.values[w] = acc / static_cast<double>(n_trials);
    } else {
      Vec pooled_a(n_trials * grid.bin_samples);
      Vec pooled_b(n_trials * grid.bin_samples);
      for (Index trial = 0; trial < n_trials; ++trial) {
        const auto phases =
            window_phases(aligned, {ch_a, ch_b}, trial, grid.start_samples[w],
                          grid.bin_samples, opt, w);
        pooled_a.segment(trial * grid.bin_samples, grid.bin_samples) = phases[0];
        pooled_b.segment(trial * grid.bin_samples, grid.bin_samples) = phases[1];
      }
      series.values[w] = plv(pooled_a, pooled_b);
    }
  });
  return series;
}

PlvReferenceSeries tcplv_reference(const TrialSet& trials, Index reference,
                                   const std::vector<double>& onset_times,
                                   const PlvMapOptions& opt) {
  if (reference < 0) {
    reference = trials.find_channel("C3");
    require(reference >= 0, ErrorCode::BadPair,
            "no channel labeled C3; pass the reference channel explicitly");
  }
  check_channel(trials, reference);

  const auto aligned = synch_all_channels(trials, onset_times,
                                          opt.window_post_s);
  const WindowGrid grid = make_window_grid(aligned.front(), opt.window_pre_s,
                                           opt.window_post_s);
  const Index n_ch = trials.n_channels();
  const Index n_trials = trials.n_trials();

  std::vector<Index> all_channels(n_ch);
  for (Index c = 0; c < n_ch; ++c) all_channels[c] = c;

  PlvReferenceSeries series;
  series.reference = reference;
  series.windows = grid.windows;
  series.values = Mat::Zero(static_cast<Index>(grid.windows.size()), n_ch);

  parallel_for(static_cast<Index>(grid.windows.size()), [&](Index w) {
    for (Index trial = 0; trial < n_trials; ++trial) {
      const auto phases = window_phases(
          aligned, all_channels, trial, grid.start_samples[w],
          grid.bin_samples, opt, w);
      for (Index c = 0; c < n_ch; ++c)
        series.values(w, c) += plv(phases[reference], phases[c]);
    }
  });
  series.values /= static_cast<double>(n_trials);
  return series;
}

ConnectivityMap pwplv(const TrialSet& trials,
                      const std::vector<double>& onset_times,
                      const PlvMapOptions& opt) {
  require(trials.n_channels() >= 2, ErrorCode::BadPair,
          "pairwise maps need at least two channels");
  const auto aligned = synch_all_channels(trials, onset_times,
                                          opt.window_post_s);
  const WindowGrid grid = make_window_grid(aligned.front(), opt.window_pre_s,
                                           opt.window_post_s);
  const Index n_ch = trials.n_channels();
  const Index n_trials = trials.n_trials();

  std::vector<Index> all_channels(n_ch);
  for (Index c = 0; c < n_ch; ++c) all_channels[c] = c;

  ConnectivityMap map;
  map.measure = ConnectivityMeasure::Plv;
  map.band = opt.band;
  map.windows = grid.windows;
  map.channel_labels = trials.channel_labels;

  map.values.resize(grid.windows.size());
  parallel_for(static_cast<Index>(grid.windows.size()), [&](Index w) {
    if (opt.aggregation == TrialAggregation::MeanOfTrialValues) {
      Mat acc = Mat::Zero(n_ch, n_ch);
      for (Index trial = 0; trial < n_trials; ++trial) {
        const auto phases = window_phases(
            aligned, all_channels, trial, grid.start_samples[w],
            grid.bin_samples, opt, w);
        acc += plv_matrix(phases);
      }
      map.values[w] = acc / static_cast<double>(n_trials);
    } else {
      std::vector<Vec> pooled(n_ch, Vec(n_trials * grid.bin_samples));
      for (Index trial = 0; trial < n_trials; ++trial) {
        const auto phases = window_phases(
            aligned, all_channels, trial, grid.start_samples[w],
            grid.bin_samples, opt, w);
        for (Index c = 0; c < n_ch; ++c)
          pooled[c].segment(trial * grid.bin_samples, grid.bin_samples) =
              phases[c];
      }
      map.values[w] = plv_matrix(pooled);
    }
  });
  return map;
}

Vec msc_from_spectra(const SegmentSpectra& spectra_x,
                     const SegmentSpectra& spectra_y) {
  require(!spectra_x.empty() && spectra_x.size() == spectra_y.size(),
          ErrorCode::LengthMismatch, "segment lists differ in length");
  const Index n_bins = spectra_x.front().size();
  for (size_t i = 0; i < spectra_x.size(); ++i)
    require(spectra_x[i].size() == n_bins && spectra_y[i].size() == n_bins,
            ErrorCode::LengthMismatch, "segment spectra differ in length");

  Vec msc(n_bins);
  for (Index k = 0; k < n_bins; ++k) {
    double cross_re = 0.0, cross_im = 0.0, auto_x = 0.0, auto_y = 0.0;
    for (size_t i = 0; i < spectra_x.size(); ++i) {
      const double xr = spectra_x[i][k].real(), xi = spectra_x[i][k].imag();
      const double yr = spectra_y[i][k].real(), yi = spectra_y[i][k].imag();
      cross_re += xr * yr + xi * yi;  // X * conj(Y)
      cross_im += xi * yr - xr * yi;
      auto_x += xr * xr + xi * xi;
      auto_y += yr * yr + yi * yi;
    }
    const double denom = auto_x * auto_y;
    const double num = cross_re * cross_re + cross_im * cross_im;
    msc[k] = denom > 0.0 ? std::clamp(num / denom, 0.0, 1.0) : 0.0;
  }
  return msc;
}

ConnectivityMap pwcoherence(const TrialSet& trials,
                            const std::vector<double>& onset_times,
                            const CoherenceOptions& opt) {
  require(trials.n_channels() >= 2, ErrorCode::BadPair,
          "pairwise maps need at least two channels");
  opt.band.check_against(trials.fs);
  require(opt.segments_per_window >= 1, ErrorCode::InvalidArgument,
          "segments_per_window must be >= 1");

  const auto aligned = synch_all_channels(trials, onset_times,
                                          opt.window_post_s);
  const WindowGrid grid = make_window_grid(aligned.front(), opt.window_pre_s,
                                           opt.window_post_s);
  const Index n_ch = trials.n_channels();
  const Index n_trials = trials.n_trials();

  const Index seg_len =
      std::max<Index>(2, grid.bin_samples / opt.segments_per_window);
  const Index segs_per_trial = grid.bin_samples / seg_len;
  require(segs_per_trial * n_trials >= 2, ErrorCode::WindowTooShortForSegments,
          "the cross-spectral ensemble needs at least two averages; use more "
          "segments or more trials");

  // Frequency bins whose centers fall inside the band.
  std::vector<Index> band_bins;
  for (Index k = 0; k <= seg_len / 2; ++k) {
    const double f = static_cast<double>(k) * trials.fs /
                     static_cast<double>(seg_len);
    if (f >= opt.band.lo() - 1e-9 && f <= opt.band.hi() + 1e-9)
      band_bins.push_back(k);
  }
  require(!band_bins.empty(), ErrorCode::InvalidArgument,
          "band contains no spectral bins at this segment length");

  const Vec taper = hamming(seg_len);

  ConnectivityMap map;
  map.measure = ConnectivityMeasure::Msc;
  map.band = opt.band;
  map.windows = grid.windows;
  map.channel_labels = trials.channel_labels;

  map.values.resize(grid.windows.size());
  parallel_for(static_cast<Index>(grid.windows.size()), [&](Index w) {
    std::vector<SegmentSpectra> spectra(n_ch);
    for (Index ch = 0; ch < n_ch; ++ch) {
      spectra[ch].reserve(static_cast<size_t>(n_trials * segs_per_trial));
      for (Index trial = 0; trial < n_trials; ++trial)
        for (Index s = 0; s < segs_per_trial; ++s) {
          const Vec seg = aligned[ch]
                              .ensemble.row(trial)
                              .segment(grid.start_samples[w] + s * seg_len,
                                       seg_len)
                              .transpose()
                              .cwiseProduct(taper);
          spectra[ch].push_back(fft_real(seg));
        }
    }
    Mat m(n_ch, n_ch);
    for (Index a = 0; a < n_ch; ++a) {
      for (Index b = a; b < n_ch; ++b) {
        const Vec msc = msc_from_spectra(spectra[a], spectra[b]);
        double mean = 0.0;
        for (Index k : band_bins) mean += msc[k];
        mean /= static_cast<double>(band_bins.size());
        m(a, b) = mean;
        m(b, a) = mean;
      }
    }
    map.values[w] = std::move(m);
  });
  return map;
}

}  // namespace mcsig
