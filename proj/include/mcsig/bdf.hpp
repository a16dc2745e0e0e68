#ifndef MCSIG_BDF_HPP
#define MCSIG_BDF_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mcsig/defaults.hpp"
#include "mcsig/types.hpp"

namespace mcsig {

// 24-bit biosignal container: one 256-byte main header, 256 header bytes per
// channel (field-major, EDF layout), then data records of 3-byte little-endian
// two's-complement samples grouped channel-major within each record.
struct BdfHeader {
  struct Channel {
    std::string label;
    std::string transducer;
    std::string physical_dim;  // stored, never interpreted
    double physical_min = 0.0;
    double physical_max = 0.0;
    std::int32_t digital_min = 0;
    std::int32_t digital_max = 0;
    std::string prefilter;
    Index samples_per_record = 0;

    double gain() const {
      return (physical_max - physical_min) /
             (static_cast<double>(digital_max) - digital_min);
    }
    double offset() const { return physical_min - gain() * digital_min; }
  };

  std::array<std::uint8_t, 8> id_code{};  // 0xFF then "BIOSEMI"
  std::string subject_info;
  std::string recording_info;
  std::string start_date;  // dd.mm.yy
  std::string start_time;  // hh.mm.ss
  std::string data_version;
  std::int64_t num_records = 0;
  double record_duration = 1.0;  // seconds
  std::vector<Channel> channels;

  Index num_channels() const { return static_cast<Index>(channels.size()); }
  Index header_bytes() const { return 256 * (num_channels() + 1); }
  double sampling_rate(Index channel) const {
    return static_cast<double>(channels[channel].samples_per_record) /
           record_duration;
  }

  // Minimal valid header for the given geometry, full-range 24-bit scaling
  // with physical units equal to digital counts (gain 1, offset 0).
  static BdfHeader make(Index n_channels, double fs, Index num_records,
                        Index samples_per_record);
};

struct BdfRecording {
  BdfHeader header;
  Mat physical;  // channels x samples, microvolts
};

BdfRecording parse_bdf(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> write_bdf(const BdfHeader& header, const Mat& data);

BdfRecording read_bdf_file(const std::string& path);
void write_bdf_file(const std::string& path, const BdfHeader& header,
                    const Mat& data);

struct LoadOptions {
  bool drift_reject = true;
  bool detect_onsets = true;
  double drift_window_s = defaults::kDriftWindowS;
  double onset_window_s = defaults::kOnsetWindowS;
  double onset_th_coeff = defaults::kOnsetThCoeff;
};

struct LoadResult {
  TrialSet eeg;
  TrialSet emg;  // single channel
  std::vector<Index> onset_samples;
  std::vector<double> onset_times;
};

// One file per trial, in file order. Drift rejection and EMG onset detection
// run according to the options; detected onsets are attached to both sets.
LoadResult load_trial_set(const std::vector<std::string>& file_names,
                          const std::vector<Index>& eeg_channels,
                          Index emg_channel, const LoadOptions& options = {});

}  // namespace mcsig

#endif
