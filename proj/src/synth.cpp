#include "mcsig/synth.hpp"

#include <cmath>
#include <complex>

#include "mcsig/fft_util.hpp"
#include "mcsig/rng.hpp"

namespace mcsig {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Fixed stream tags; the substream for any quantity is
// mix_seed(seed, tag, trial, channel-or-index).
enum Stream : std::uint64_t {
  kOnsetStream = 1,
  kNoiseStream = 2,
  kToneStream = 3,
  kCouplingCommonStream = 4,
  kCouplingJitterStream = 5,
  kEmgQuietStream = 6,
  kEmgBurstStream = 7,
  kEcgStream = 8,
};

double wrap_phase(double p) {
  p = std::fmod(p + kPi, kTwoPi);
  if (p < 0.0) p += kTwoPi;
  p -= kPi;
  return p == -kPi ? kPi : p;
}

Vec gaussian_vec(Rng& rng, Index n) {
  Vec out(n);
  for (Index i = 0; i < n; ++i) out[i] = rng.gaussian();
  return out;
}

void scale_to_power(Vec& x, double power) {
  if (power == 0.0) {
    x.setZero();
    return;
  }
  const double mean = x.mean();
  const double var =
      (x.array() - mean).square().sum() / static_cast<double>(x.size());
  if (var > 0.0) x *= std::sqrt(power / var);
}

// Noise with the requested spectral color, normalized to the exact sample
// variance `power`.
Vec colored_noise(Index n, double fs, NoiseColor color, double power,
                  Rng& rng) {
  if (power <= 0.0) return Vec::Zero(n);
  CVec spectrum = CVec::Zero(n);
  for (Index k = 1; k <= n / 2; ++k) {
    const double f = static_cast<double>(k) * fs / static_cast<double>(n);
    const double mag = color == NoiseColor::Pink ? 1.0 / std::sqrt(f) : 1.0;
    if (n % 2 == 0 && k == n / 2) {
      spectrum[k] = std::complex<double>(mag * rng.gaussian(), 0.0);
    } else {
      spectrum[k] = mag * std::complex<double>(rng.gaussian(), rng.gaussian());
      spectrum[n - k] = std::conj(spectrum[k]);
    }
  }
  Vec x = ifft(spectrum).real();
  scale_to_power(x, power);
  return x;
}

// Unit-variance smoothed jitter: causal moving average of white Gaussian
// samples with warmup so every output keeps full-window statistics.
Vec smooth_jitter(Rng& rng, Index n, Index window) {
  window = std::max<Index>(1, window);
  const Vec raw = gaussian_vec(rng, n + window);
  Vec out(n);
  double acc = 0.0;
  for (Index i = 0; i < window; ++i) acc += raw[i];
  // running sum / sqrt(window): unit variance per sample
  const double scale = 1.0 / std::sqrt(static_cast<double>(window));
  for (Index i = 0; i < n; ++i) {
    out[i] = acc * scale;
    acc += raw[i + window] - raw[i];
  }
  return out;
}

void check_spec(const SynthSpec& spec) {
  require(spec.n_trials >= 1 && spec.n_channels >= 1, ErrorCode::InvalidSpec,
          "need at least one trial and one channel");
  require(spec.fs > 0.0 && spec.trial_length_s > 0.0, ErrorCode::InvalidSpec,
          "fs and trial length must be positive");
  require(spec.noise_power_uv2 >= 0.0, ErrorCode::InvalidSpec,
          "noise power must be nonnegative");
  const double lo_onset = spec.onset_s - spec.onset_jitter_s;
  const double hi_onset = spec.onset_s + spec.onset_jitter_s;
  require(lo_onset > 0.0 && hi_onset < spec.trial_length_s,
          ErrorCode::InvalidSpec, "onset must fall strictly inside the trial");
  for (const ToneSpec& tone : spec.tones)
    require(tone.freq_hz > 0.0 && tone.freq_hz < spec.fs / 2.0,
            ErrorCode::InvalidSpec, "tone frequency outside (0, Nyquist)");
  if (spec.erd) {
    require(spec.erd->drop_fraction > 0.0 && spec.erd->drop_fraction <= 1.0,
            ErrorCode::InvalidSpec, "drop fraction must be in (0, 1]");
    require(spec.erd->start_s < spec.erd->end_s, ErrorCode::InvalidSpec,
            "empty band-drop interval");
    require(hi_onset + spec.erd->end_s <= spec.trial_length_s &&
                lo_onset + spec.erd->start_s >= 0.0,
            ErrorCode::InvalidSpec, "band-drop interval leaves the trial");
  }
  if (spec.coupling) {
    const auto& c = *spec.coupling;
    require(c.ch_a != c.ch_b && c.ch_a >= 0 && c.ch_b >= 0 &&
                c.ch_a < spec.n_channels && c.ch_b < spec.n_channels,
            ErrorCode::InvalidSpec,
            "coupled pair must be two distinct channels");
    require(c.pre_onset_plv >= 0.0 && c.pre_onset_plv <= 1.0 &&
                c.post_onset_plv >= 0.0 && c.post_onset_plv <= 1.0,
            ErrorCode::InvalidSpec, "coupling targets must be in [0, 1]");
  }
  if (!spec.channel_labels.empty())
    require(static_cast<Index>(spec.channel_labels.size()) == spec.n_channels,
            ErrorCode::InvalidSpec, "label count != channel count");
}

// Per-channel jitter deviation for a pair PLV target. Each channel carries
// half the phase-difference variance: target = exp(-sigma_a^2/2 - sigma_b^2/2).
double jitter_sigma(double plv_target) {
  return std::sqrt(-std::log(std::max(plv_target, 1e-6)));
}

}  // namespace

SynthResult gen_trial_set(const SynthSpec& spec) {
  check_spec(spec);
  const Index n = round_index(spec.trial_length_s * spec.fs);
  const double dt = 1.0 / spec.fs;
  const bool with_emg = spec.emg.has_value();
  const Index n_total = spec.n_channels + (with_emg ? 1 : 0);

  SynthResult result;
  result.trials.fs = spec.fs;
  if (!spec.channel_labels.empty())
    result.trials.channel_labels = spec.channel_labels;
  else
    for (Index c = 0; c < spec.n_channels; ++c)
      result.trials.channel_labels.push_back("eeg" + std::to_string(c + 1));
  if (with_emg) {
    result.trials.channel_labels.push_back("EMG");
    result.truth.emg_channel = spec.n_channels;
  }
  result.truth.erd = spec.erd;
  result.truth.coupling = spec.coupling;

  {
    Rng rng(mix_seed(spec.seed, kOnsetStream));
    for (Index t = 0; t < spec.n_trials; ++t) {
      const double onset =
          spec.onset_s +
          (spec.onset_jitter_s > 0.0
               ? rng.uniform(-spec.onset_jitter_s, spec.onset_jitter_s)
               : 0.0);
      const Index sample = round_index(onset * spec.fs);
      result.truth.onset_samples.push_back(sample);
      result.truth.onset_times.push_back(static_cast<double>(sample) /
                                         spec.fs);
    }
  }

  for (Index trial = 0; trial < spec.n_trials; ++trial) {
    const Index onset_sample = result.truth.onset_samples[trial];
    Mat data = Mat::Zero(n_total, n);
    Mat clean = Mat::Zero(spec.n_channels, n);

    for (Index ch = 0; ch < spec.n_channels; ++ch) {
      for (size_t tone_i = 0; tone_i < spec.tones.size(); ++tone_i) {
        const ToneSpec& tone = spec.tones[tone_i];
        Rng rng(mix_seed(spec.seed, kToneStream,
                         static_cast<std::uint64_t>(trial),
                         static_cast<std::uint64_t>(ch) * 4096 + tone_i));
        const double phase0 = rng.uniform(0.0, kTwoPi);
        const bool in_band = spec.erd && tone.freq_hz >= spec.erd->band.lo() &&
                             tone.freq_hz <= spec.erd->band.hi();
        Index drop_lo = n, drop_hi = n;
        double dropped_amp = tone.amplitude_uv;
        if (in_band) {
          drop_lo = onset_sample + round_index(spec.erd->start_s * spec.fs);
          drop_hi = onset_sample + round_index(spec.erd->end_s * spec.fs);
          dropped_amp = tone.amplitude_uv * std::sqrt(spec.erd->drop_fraction);
        }
        for (Index i = 0; i < n; ++i) {
          const double amp = (in_band && i >= drop_lo && i < drop_hi)
                                 ? dropped_amp
                                 : tone.amplitude_uv;
          clean(ch, i) +=
              amp * std::cos(kTwoPi * tone.freq_hz * static_cast<double>(i) *
                                 dt +
                             phase0);
        }
      }
    }

    if (spec.coupling) {
      const auto& c = *spec.coupling;
      Rng common_rng(mix_seed(spec.seed, kCouplingCommonStream,
                              static_cast<std::uint64_t>(trial)));
      const double phase0 = common_rng.uniform(0.0, kTwoPi);
      const Index smooth_w =
          std::max<Index>(1, round_index(c.jitter_smooth_s * spec.fs));
      const double sigma_pre = jitter_sigma(c.pre_onset_plv);
      const double sigma_post = jitter_sigma(c.post_onset_plv);

      Vec wrapped[2];
      const Index chans[2] = {c.ch_a, c.ch_b};
      for (int side = 0; side < 2; ++side) {
        Rng jitter_rng(mix_seed(spec.seed, kCouplingJitterStream,
                                static_cast<std::uint64_t>(trial),
                                static_cast<std::uint64_t>(chans[side])));
        const Vec unit = smooth_jitter(jitter_rng, n, smooth_w);
        wrapped[side].resize(n);
        for (Index i = 0; i < n; ++i) {
          const double sigma = i < onset_sample ? sigma_pre : sigma_post;
          const double phase =
              kTwoPi * c.band.f0 * static_cast<double>(i) * dt + phase0 +
              sigma * unit[i];
          wrapped[side][i] = wrap_phase(phase);
          clean(chans[side], i) += c.amplitude_uv * std::cos(phase);
        }
      }
      result.truth.coupling_phases.emplace_back(std::move(wrapped[0]),
                                                std::move(wrapped[1]));
    }

    data.topRows(spec.n_channels) = clean;
    if (spec.noise_power_uv2 > 0.0) {
      for (Index ch = 0; ch < spec.n_channels; ++ch) {
        Rng rng(mix_seed(spec.seed, kNoiseStream,
                         static_cast<std::uint64_t>(trial),
                         static_cast<std::uint64_t>(ch)));
        Vec noise = colored_noise(n, spec.fs, spec.noise_color,
                                  spec.noise_power_uv2, rng);
        if (spec.erd) {
          // The band drop hits everything oscillating inside the band, so
          // the in-band share of the background scales along with the tones.
          const Index drop_lo =
              onset_sample + round_index(spec.erd->start_s * spec.fs);
          const Index drop_hi =
              onset_sample + round_index(spec.erd->end_s * spec.fs);
          CVec spectrum = fft_real(noise);
          for (Index k = 0; k <= n / 2; ++k) {
            const double f =
                static_cast<double>(k) * spec.fs / static_cast<double>(n);
            if (f < spec.erd->band.lo() || f > spec.erd->band.hi()) {
              spectrum[k] = 0.0;
              if (k > 0 && n - k > n / 2) spectrum[n - k] = 0.0;
            }
          }
          const Vec in_band = ifft(spectrum).real();
          const double scale = std::sqrt(spec.erd->drop_fraction);
          for (Index i = drop_lo; i < std::min(drop_hi, n); ++i)
            noise[i] -= (1.0 - scale) * in_band[i];
        }
        data.row(ch) += noise.transpose();
      }
    }

    if (with_emg) {
      const EmgSpec& e = *spec.emg;
      Vec emg = Vec::Zero(n);
      if (e.quiet_noise_uv > 0.0) {
        Rng rng(mix_seed(spec.seed, kEmgQuietStream,
                         static_cast<std::uint64_t>(trial)));
        emg += e.quiet_noise_uv * gaussian_vec(rng, n);
      }

      Rng burst_rng(mix_seed(spec.seed, kEmgBurstStream,
                             static_cast<std::uint64_t>(trial)));
      Vec carrier = gaussian_vec(burst_rng, n);
      {
        const double hi = e.burst_hi_hz > 0.0
                              ? e.burst_hi_hz
                              : std::min(200.0, 0.45 * spec.fs);
        require(hi > e.burst_lo_hz, ErrorCode::InvalidSpec,
                "burst band is empty at this sampling rate");
        CVec spectrum = fft_real(carrier);
        for (Index k = 0; k <= n / 2; ++k) {
          const double f =
              static_cast<double>(k) * spec.fs / static_cast<double>(n);
          if (f < e.burst_lo_hz || f > hi) {
            spectrum[k] = 0.0;
            if (k > 0 && n - k > n / 2) spectrum[n - k] = 0.0;
          }
        }
        carrier = ifft(spectrum).real();
        scale_to_power(carrier, 1.0);
      }
      const Index rise = std::max<Index>(1, round_index(e.rise_s * spec.fs));
      Vec burst = Vec::Zero(n);
      for (Index i = onset_sample; i < n; ++i) {
        const double ramp =
            i < onset_sample + rise
                ? 0.5 * (1.0 -
                         std::cos(kPi * static_cast<double>(i - onset_sample) /
                                  static_cast<double>(rise)))
                : 1.0;
        burst[i] = e.burst_amplitude_uv * ramp * carrier[i];
      }
      emg += burst;
      result.truth.clean_emg_burst.push_back(burst);

      Vec ecg = Vec::Zero(n);
      if (e.ecg) {
        Rng ecg_rng(mix_seed(spec.seed, kEcgStream,
                             static_cast<std::uint64_t>(trial)));
        const double period_s = 60.0 / e.ecg->rate_bpm;
        const Index width =
            std::max<Index>(3, round_index(e.ecg->pulse_width_s * spec.fs));
        double center_s = ecg_rng.uniform(0.0, period_s);
        while (center_s < spec.trial_length_s + e.ecg->pulse_width_s) {
          const Index center = round_index(center_s * spec.fs);
          for (Index j = -width / 2; j <= width / 2; ++j) {
            const Index i = center + j;
            if (i < 0 || i >= n) continue;
            const double u =
                (static_cast<double>(j) + static_cast<double>(width) / 2.0) /
                static_cast<double>(width);
            ecg[i] += e.ecg->amplitude_uv * 0.5 * (1.0 - std::cos(kTwoPi * u));
          }
          center_s += period_s;
        }
        emg += ecg;
      }
      result.truth.clean_ecg.push_back(std::move(ecg));
      data.row(n_total - 1) = emg.transpose();
    }

    result.truth.clean_eeg.push_back(std::move(clean));
    result.trials.trials.push_back(std::move(data));
  }

  result.trials.onset_samples = result.truth.onset_samples;
  result.trials.onset_times = result.truth.onset_times;
  return result;
}

double expected_band_noise_power(const SynthSpec& spec, const BandSpec& band) {
  const Index n = round_index(spec.trial_length_s * spec.fs);
  double total = 0.0, in_band = 0.0;
  for (Index k = 1; k <= n / 2; ++k) {
    const double f = static_cast<double>(k) * spec.fs / static_cast<double>(n);
    const double w = spec.noise_color == NoiseColor::Pink ? 1.0 / f : 1.0;
    total += w;
    if (f >= band.lo() && f <= band.hi()) in_band += w;
  }
  return total > 0.0 ? spec.noise_power_uv2 * in_band / total : 0.0;
}

}  // namespace mcsig
