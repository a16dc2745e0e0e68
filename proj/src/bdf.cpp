#include "mcsig/bdf.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "mcsig/emg.hpp"
#include "mcsig/precondition.hpp"

namespace mcsig {

namespace {

constexpr std::int32_t kDigitalMin24 = -8388608;
constexpr std::int32_t kDigitalMax24 = 8388607;

std::string trim(std::string_view raw) {
  size_t begin = 0, end = raw.size();
  while (begin < end && (raw[begin] == ' ' || raw[begin] == '\0')) ++begin;
  while (end > begin && (raw[end - 1] == ' ' || raw[end - 1] == '\0')) --end;
  return std::string(raw.substr(begin, end - begin));
}

class FieldReader {
 public:
  FieldReader(std::span<const std::uint8_t> bytes, const std::string& what)
      : bytes_(bytes), what_(what) {}

  std::string text(size_t width) {
    require(pos_ + width <= bytes_.size(), ErrorCode::TruncatedPayload,
            what_ + ": header ends inside a field");
    std::string_view view(reinterpret_cast<const char*>(bytes_.data() + pos_),
                          width);
    pos_ += width;
    return trim(view);
  }

  double number(size_t width, const std::string& field) {
    const std::string s = text(width);
    require(!s.empty(), ErrorCode::InvalidHeader, what_ + ": empty " + field);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    require(end == s.c_str() + s.size(), ErrorCode::InvalidHeader,
            what_ + ": unparsable " + field + " '" + s + "'");
    return v;
  }

  size_t pos() const { return pos_; }
  void skip(size_t width) { text(width); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::string what_;
  size_t pos_ = 0;
};

void put_text(std::vector<std::uint8_t>& out, const std::string& s,
              size_t width) {
  require(s.size() <= width, ErrorCode::InvalidHeader,
          "header field '" + s + "' exceeds " + std::to_string(width) +
              " bytes");
  out.insert(out.end(), s.begin(), s.end());
  out.insert(out.end(), width - s.size(), ' ');
}

void put_number(std::vector<std::uint8_t>& out, double v, size_t width) {
  // Highest precision that still fits the fixed-width field.
  char buf[40];
  for (int precision = 10; precision >= 1; --precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strlen(buf) <= width) break;
  }
  put_text(out, buf, width);
}

void put_integer(std::vector<std::uint8_t>& out, std::int64_t v, size_t width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
  put_text(out, buf, width);
}

std::int32_t decode_sample(const std::uint8_t* p) {
  std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
  if (v & 0x800000) v -= 0x1000000;
  return v;
}

void encode_sample(std::vector<std::uint8_t>& out, std::int32_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
}

void check_scaling(const BdfHeader::Channel& ch, Index index) {
  require(ch.digital_min < ch.digital_max, ErrorCode::InvalidScaling,
          "channel " + std::to_string(index) +
              ": digital range is empty or inverted");
  require(ch.physical_min < ch.physical_max, ErrorCode::InvalidScaling,
          "channel " + std::to_string(index) +
              ": physical range is empty or inverted");
}

}  // namespace

BdfHeader BdfHeader::make(Index n_channels, double fs, Index num_records,
                          Index samples_per_record) {
  BdfHeader h;
  h.id_code = {0xFF, 'B', 'I', 'O', 'S', 'E', 'M', 'I'};
  h.subject_info = "synthetic";
  h.recording_info = "generated";
  h.start_date = "01.01.00";
  h.start_time = "00.00.00";
  h.data_version = "24BIT";
  h.num_records = num_records;
  h.record_duration = static_cast<double>(samples_per_record) / fs;
  for (Index c = 0; c < n_channels; ++c) {
    Channel ch;
    ch.label = "ch" + std::to_string(c + 1);
    ch.physical_dim = "uV";
    ch.physical_min = kDigitalMin24;
    ch.physical_max = kDigitalMax24;
    ch.digital_min = kDigitalMin24;
    ch.digital_max = kDigitalMax24;
    ch.samples_per_record = samples_per_record;
    h.channels.push_back(ch);
  }
  return h;
}

BdfRecording parse_bdf(std::span<const std::uint8_t> bytes) {
  require(bytes.size() >= 256, ErrorCode::TruncatedPayload,
          "input shorter than the 256-byte main header");
  require(bytes[0] == 0xFF, ErrorCode::BadMagic,
          "first byte is not 0xFF");
  require(std::memcmp(bytes.data() + 1, "BIOSEMI", 7) == 0, ErrorCode::BadMagic,
          "identification code is not BIOSEMI");

  BdfRecording rec;
  std::copy(bytes.begin(), bytes.begin() + 8, rec.header.id_code.begin());

  FieldReader r(bytes.subspan(8), "main header");
  rec.header.subject_info = r.text(80);
  rec.header.recording_info = r.text(80);
  rec.header.start_date = r.text(8);
  rec.header.start_time = r.text(8);
  const auto header_bytes_declared =
      static_cast<std::int64_t>(r.number(8, "header size"));
  rec.header.data_version = r.text(44);
  rec.header.num_records =
      static_cast<std::int64_t>(r.number(8, "record count"));
  rec.header.record_duration = r.number(8, "record duration");
  const auto n_channels = static_cast<Index>(r.number(4, "channel count"));

  require(rec.header.num_records != -1, ErrorCode::InvalidHeader,
          "record count of -1 (unknown) is not accepted");
  require(rec.header.num_records >= 1, ErrorCode::InvalidHeader,
          "record count must be >= 1");
  require(n_channels >= 1, ErrorCode::InvalidHeader,
          "channel count must be >= 1");
  require(rec.header.record_duration > 0.0, ErrorCode::InvalidHeader,
          "record duration must be positive");

  const size_t header_total = 256 * (static_cast<size_t>(n_channels) + 1);
  require(bytes.size() >= header_total, ErrorCode::TruncatedPayload,
          "input ends inside the channel headers");
  require(header_bytes_declared == static_cast<std::int64_t>(header_total),
          ErrorCode::InvalidHeader, "declared header size mismatch");

  FieldReader c(bytes.subspan(256, header_total - 256), "channel header");
  rec.header.channels.resize(n_channels);
  auto& chs = rec.header.channels;
  for (auto& ch : chs) ch.label = c.text(16);
  for (auto& ch : chs) ch.transducer = c.text(80);
  for (auto& ch : chs) ch.physical_dim = c.text(8);
  for (auto& ch : chs) ch.physical_min = c.number(8, "physical min");
  for (auto& ch : chs) ch.physical_max = c.number(8, "physical max");
  for (auto& ch : chs)
    ch.digital_min = static_cast<std::int32_t>(c.number(8, "digital min"));
  for (auto& ch : chs)
    ch.digital_max = static_cast<std::int32_t>(c.number(8, "digital max"));
  for (auto& ch : chs) ch.prefilter = c.text(80);
  for (auto& ch : chs)
    ch.samples_per_record = static_cast<Index>(c.number(8, "sample count"));
  for (Index i = 0; i < n_channels; ++i) c.skip(32);

  size_t record_bytes = 0;
  for (Index i = 0; i < n_channels; ++i) {
    check_scaling(chs[i], i);
    require(chs[i].samples_per_record >= 1, ErrorCode::InvalidHeader,
            "channel " + std::to_string(i) + ": no samples per record");
    record_bytes += 3 * static_cast<size_t>(chs[i].samples_per_record);
  }
  const size_t payload_bytes =
      record_bytes * static_cast<size_t>(rec.header.num_records);
  require(bytes.size() >= header_total + payload_bytes,
          ErrorCode::TruncatedPayload,
          "payload shorter than the header promises");

  // All channels must agree on length for the matrix output.
  const Index spr = chs.front().samples_per_record;
  for (const auto& ch : chs)
    require(ch.samples_per_record == spr, ErrorCode::InvalidHeader,
            "channels disagree on samples per record");

  const Index total = spr * static_cast<Index>(rec.header.num_records);
  rec.physical.resize(n_channels, total);
  const std::uint8_t* p = bytes.data() + header_total;
  for (std::int64_t record = 0; record < rec.header.num_records; ++record) {
    const Index base = static_cast<Index>(record) * spr;
    for (Index chi = 0; chi < n_channels; ++chi) {
      const double gain = chs[chi].gain();
      const double offset = chs[chi].offset();
      for (Index s = 0; s < spr; ++s, p += 3)
        rec.physical(chi, base + s) = gain * decode_sample(p) + offset;
    }
  }
  return rec;
}

std::vector<std::uint8_t> write_bdf(const BdfHeader& header, const Mat& data) {
  const Index n_channels = header.num_channels();
  require(n_channels >= 1, ErrorCode::InvalidHeader, "no channels");
  require(data.rows() == n_channels, ErrorCode::InvalidArgument,
          "data rows != channel count");
  const Index spr = header.channels.front().samples_per_record;
  for (const auto& ch : header.channels)
    require(ch.samples_per_record == spr, ErrorCode::InvalidHeader,
            "channels disagree on samples per record");
  require(data.cols() == spr * static_cast<Index>(header.num_records),
          ErrorCode::InvalidArgument,
          "data columns != records * samples per record");

  std::vector<std::uint8_t> out;
  out.reserve(static_cast<size_t>(header.header_bytes()) +
              3 * static_cast<size_t>(data.size()));
  out.push_back(0xFF);
  out.insert(out.end(), {'B', 'I', 'O', 'S', 'E', 'M', 'I'});
  put_text(out, header.subject_info, 80);
  put_text(out, header.recording_info, 80);
  put_text(out, header.start_date, 8);
  put_text(out, header.start_time, 8);
  put_integer(out, header.header_bytes(), 8);
  put_text(out, header.data_version, 44);
  put_integer(out, header.num_records, 8);
  put_number(out, header.record_duration, 8);
  put_integer(out, n_channels, 4);

  const auto& chs = header.channels;
  for (const auto& ch : chs) put_text(out, ch.label, 16);
  for (const auto& ch : chs) put_text(out, ch.transducer, 80);
  for (const auto& ch : chs) put_text(out, ch.physical_dim, 8);
  for (const auto& ch : chs) put_number(out, ch.physical_min, 8);
  for (const auto& ch : chs) put_number(out, ch.physical_max, 8);
  for (const auto& ch : chs) put_integer(out, ch.digital_min, 8);
  for (const auto& ch : chs) put_integer(out, ch.digital_max, 8);
  for (const auto& ch : chs) put_text(out, ch.prefilter, 80);
  for (const auto& ch : chs) put_integer(out, ch.samples_per_record, 8);
  for (Index i = 0; i < n_channels; ++i) put_text(out, "", 32);

  for (Index i = 0; i < n_channels; ++i) check_scaling(chs[i], i);

  for (std::int64_t record = 0; record < header.num_records; ++record) {
    const Index base = static_cast<Index>(record) * spr;
    for (Index chi = 0; chi < n_channels; ++chi) {
      const double gain = chs[chi].gain();
      const double offset = chs[chi].offset();
      for (Index s = 0; s < spr; ++s) {
        const double digital =
            std::round((data(chi, base + s) - offset) / gain);
        require(digital >= kDigitalMin24 && digital <= kDigitalMax24,
                ErrorCode::ValueOutOfDigitalRange,
                "value " + std::to_string(data(chi, base + s)) +
                    " does not fit the signed 24-bit range");
        encode_sample(out, static_cast<std::int32_t>(digital));
      }
    }
  }
  return out;
}

BdfRecording read_bdf_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::IoFailure, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return parse_bdf(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void write_bdf_file(const std::string& path, const BdfHeader& header,
                    const Mat& data) {
  const std::vector<std::uint8_t> bytes = write_bdf(header, data);
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::IoFailure, "cannot open " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  require(out.good(), ErrorCode::IoFailure, "write failed for " + path);
}

LoadResult load_trial_set(const std::vector<std::string>& file_names,
                          const std::vector<Index>& eeg_channels,
                          Index emg_channel, const LoadOptions& options) {
  require(!file_names.empty(), ErrorCode::EmptyTrialSet, "no input files");
  require(!eeg_channels.empty(), ErrorCode::InvalidArgument,
          "no EEG channels selected");

  LoadResult result;
  for (const std::string& path : file_names) {
    const BdfRecording rec = read_bdf_file(path);
    const Index nch = rec.header.num_channels();
    for (Index ch : eeg_channels)
      require(ch >= 0 && ch < nch, ErrorCode::ChannelIndexOutOfRange,
              path + ": EEG channel " + std::to_string(ch));
    require(emg_channel >= 0 && emg_channel < nch,
            ErrorCode::ChannelIndexOutOfRange,
            path + ": EMG channel " + std::to_string(emg_channel));

    const double fs = rec.header.sampling_rate(eeg_channels.front());
    if (result.eeg.trials.empty()) {
      result.eeg.fs = fs;
      result.emg.fs = rec.header.sampling_rate(emg_channel);
      for (Index ch : eeg_channels)
        result.eeg.channel_labels.push_back(rec.header.channels[ch].label);
      result.emg.channel_labels.push_back(
          rec.header.channels[emg_channel].label);
    } else {
      require(fs == result.eeg.fs, ErrorCode::InvalidHeader,
              path + ": sampling rate differs from the first file");
    }

    Mat eeg(eeg_channels.size(), rec.physical.cols());
    for (size_t i = 0; i < eeg_channels.size(); ++i)
      eeg.row(static_cast<Index>(i)) = rec.physical.row(eeg_channels[i]);
    Mat emg = rec.physical.row(emg_channel);

    if (options.drift_reject) {
      const Index w = round_index(options.drift_window_s * fs);
      for (Index r = 0; r < eeg.rows(); ++r)
        eeg.row(r) = drift_reject(eeg.row(r).transpose(), w).transpose();
      emg.row(0) = drift_reject(emg.row(0).transpose(), w).transpose();
    }
    result.eeg.trials.push_back(std::move(eeg));
    result.emg.trials.push_back(std::move(emg));
  }

  if (options.detect_onsets) {
    const double fs = result.emg.fs;
    const Index w = std::max<Index>(2, round_index(options.onset_window_s * fs));
    for (size_t i = 0; i < result.emg.trials.size(); ++i) {
      try {
        const OnsetResult onset = emg_onset(
            result.emg.trials[i].row(0).transpose(), fs, w,
            options.onset_th_coeff);
        result.onset_samples.push_back(onset.onset_sample);
        result.onset_times.push_back(onset.onset_time);
      } catch (const Error& e) {
        throw Error(e.code(),
                    file_names[i] + ": onset detection failed: " + e.what());
      }
    }
    result.eeg.onset_samples = result.onset_samples;
    result.eeg.onset_times = result.onset_times;
    result.emg.onset_samples = result.onset_samples;
    result.emg.onset_times = result.onset_times;
  }
  return result;
}

}  // namespace mcsig
