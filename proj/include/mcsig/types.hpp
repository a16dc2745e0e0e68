#ifndef MCSIG_TYPES_HPP
#define MCSIG_TYPES_HPP

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mcsig/error.hpp"

namespace mcsig {

using Scalar = double;
using Index = Eigen::Index;
using Vec = Eigen::VectorXd;
using VecRef = Eigen::Ref<const Eigen::VectorXd>;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;

inline Index round_index(double x) { return static_cast<Index>(std::lround(x)); }

// Frequency band described by its center and width, optionally resolved from
// one of the conventional EEG rhythm names.
struct BandSpec {
  double f0 = 0.0;  // center frequency, Hz
  double bw = 0.0;  // bandwidth, Hz
  std::string named_band;  // empty unless resolved from a rhythm name

  double lo() const { return f0 - bw / 2.0; }
  double hi() const { return f0 + bw / 2.0; }

  static BandSpec from_range(double lo_hz, double hi_hz) {
    require(hi_hz > lo_hz && lo_hz >= 0.0, ErrorCode::InvalidArgument,
            "band edges must satisfy 0 <= lo < hi");
    return {(lo_hz + hi_hz) / 2.0, hi_hz - lo_hz, {}};
  }

  // delta 1-4, theta 4-8, alpha 8-12, beta 12-32, gamma 32-80 (Hz)
  static BandSpec from_name(const std::string& name);

  // Rejects bands that spill over DC or the Nyquist frequency.
  void check_against(double fs) const {
    require(f0 - bw / 2.0 > 0.0 && f0 + bw / 2.0 < fs / 2.0,
            ErrorCode::BandOutOfNyquist,
            "band " + std::to_string(lo()) + "-" + std::to_string(hi()) +
                " Hz does not fit below Nyquist of fs=" + std::to_string(fs));
  }
};

// Multi-trial multi-channel recording. Each trial is one channels x samples
// matrix in microvolts; all trials share the channel list and sampling rate.
// Immutable by convention once built, so it can be shared across workers.
struct TrialSet {
  std::vector<Mat> trials;
  double fs = 0.0;
  std::vector<std::string> channel_labels;
  std::optional<std::vector<Index>> onset_samples;   // per trial
  std::optional<std::vector<double>> onset_times;    // seconds, = sample / fs

  Index n_trials() const { return static_cast<Index>(trials.size()); }
  Index n_channels() const {
    return trials.empty() ? static_cast<Index>(channel_labels.size())
                          : trials.front().rows();
  }

  // Throws if the shape invariants do not hold.
  void validate() const;

  // Index of the channel with the given label, or -1.
  Index find_channel(const std::string& label) const;
};

inline void TrialSet::validate() const {
  require(fs > 0.0, ErrorCode::InvalidArgument, "fs must be positive");
  const Index nch = n_channels();
  for (const Mat& trial : trials) {
    require(trial.rows() == nch, ErrorCode::InvalidArgument,
            "all trials must have the same channel count");
    require(trial.cols() >= 1, ErrorCode::EmptySignal, "trial has no samples");
  }
  if (!channel_labels.empty())
    require(static_cast<Index>(channel_labels.size()) == nch,
            ErrorCode::InvalidArgument, "label count != channel count");
  if (onset_samples) {
    require(onset_samples->size() == trials.size(), ErrorCode::InvalidArgument,
            "onset count != trial count");
    for (size_t i = 0; i < trials.size(); ++i) {
      const Index s = (*onset_samples)[i];
      require(s > 0 && s < trials[i].cols() - 1, ErrorCode::InvalidArgument,
              "onset sample outside trial " + std::to_string(i));
    }
  }
  if (onset_times) {
    require(onset_times->size() == trials.size(), ErrorCode::InvalidArgument,
            "onset time count != trial count");
    if (onset_samples)
      for (size_t i = 0; i < onset_times->size(); ++i)
        require(std::abs((*onset_times)[i] -
                         static_cast<double>((*onset_samples)[i]) / fs) <
                    0.5 / fs,
                ErrorCode::InvalidArgument,
                "onset time disagrees with onset sample " + std::to_string(i));
  }
}

inline Index TrialSet::find_channel(const std::string& label) const {
  for (size_t i = 0; i < channel_labels.size(); ++i)
    if (channel_labels[i] == label) return static_cast<Index>(i);
  return -1;
}

}  // namespace mcsig

#endif
