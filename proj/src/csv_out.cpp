#include "mcsig/csv_out.hpp"

#include <cstdio>
#include <memory>

namespace mcsig {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_out(const std::string& path) {
  File f(std::fopen(path.c_str(), "w"));
  require(f != nullptr, ErrorCode::IoFailure, "cannot open " + path);
  return f;
}

}  // namespace

void write_erp_csv(const std::string& path, const ERPCurve& erp) {
  File f = open_out(path);
  std::fputs("time_s,power_uv2\n", f.get());
  for (Index i = 0; i < erp.values.size(); ++i)
    std::fprintf(f.get(), "%.9g,%.9g\n", erp.time_vec[i], erp.values[i]);
}

void write_quant_segments_csv(const std::string& path,
                              const ErdErsReport& report) {
  File f = open_out(path);
  std::fputs("kind,start_s,end_s,area_pct\n", f.get());
  for (const ErdErsSegment& s : report.segments)
    std::fprintf(f.get(), "%s,%.9g,%.9g,%.9g\n",
                 s.kind == ErdErsSegment::Kind::Erd ? "ERD" : "ERS", s.start_s,
                 s.end_s, s.area_pct);
}

void write_quant_curve_csv(const std::string& path,
                           const ErdErsReport& report) {
  File f = open_out(path);
  std::fputs("time_s,percent_of_reference\n", f.get());
  for (Index i = 0; i < report.quant_erp.size(); ++i)
    std::fprintf(f.get(), "%.9g,%.9g\n", report.time_vec[i],
                 report.quant_erp[i]);
}

void write_tfmap_csv(const std::string& path, const TFMap& map) {
  File f = open_out(path);
  std::fputs("freq_hz,time_s,power_uv2\n", f.get());
  for (Index r = 0; r < map.power.rows(); ++r)
    for (Index c = 0; c < map.power.cols(); ++c)
      std::fprintf(f.get(), "%.9g,%.9g,%.9g\n", map.freq_vec[r],
                   map.time_vec[c], map.power(r, c));
}

void write_connectivity_csv(const std::string& path,
                            const ConnectivityMap& map) {
  File f = open_out(path);
  std::fputs("window_start_s,window_end_s,ch_a,ch_b,value\n", f.get());
  for (size_t w = 0; w < map.windows.size(); ++w) {
    const Mat& m = map.values[w];
    for (Index a = 0; a < m.rows(); ++a)
      for (Index b = 0; b < m.cols(); ++b)
        std::fprintf(f.get(), "%.9g,%.9g,%lld,%lld,%.9g\n",
                     map.windows[w].start_s, map.windows[w].end_s,
                     static_cast<long long>(a), static_cast<long long>(b),
                     m(a, b));
  }
}

void write_pair_series_csv(const std::string& path,
                           const PlvPairSeries& series) {
  File f = open_out(path);
  std::fputs("window_start_s,window_end_s,ch_a,ch_b,value\n", f.get());
  for (size_t w = 0; w < series.windows.size(); ++w)
    std::fprintf(f.get(), "%.9g,%.9g,%lld,%lld,%.9g\n",
                 series.windows[w].start_s, series.windows[w].end_s,
                 static_cast<long long>(series.ch_a),
                 static_cast<long long>(series.ch_b),
                 series.values[static_cast<Index>(w)]);
}

void write_reference_series_csv(const std::string& path,
                                const PlvReferenceSeries& series) {
  File f = open_out(path);
  std::fputs("window_start_s,window_end_s,ch_a,ch_b,value\n", f.get());
  for (size_t w = 0; w < series.windows.size(); ++w)
    for (Index c = 0; c < series.values.cols(); ++c)
      std::fprintf(f.get(), "%.9g,%.9g,%lld,%lld,%.9g\n",
                   series.windows[w].start_s, series.windows[w].end_s,
                   static_cast<long long>(series.reference),
                   static_cast<long long>(c),
                   series.values(static_cast<Index>(w), c));
}

void write_onsets_csv(const std::string& path,
                      const std::vector<Index>& onset_samples,
                      const std::vector<double>& onset_times) {
  require(onset_samples.size() == onset_times.size(), ErrorCode::LengthMismatch,
          "onset sample/time count mismatch");
  File f = open_out(path);
  std::fputs("trial_index,onset_sample,onset_time_s\n", f.get());
  for (size_t i = 0; i < onset_samples.size(); ++i)
    std::fprintf(f.get(), "%zu,%lld,%.9g\n", i,
                 static_cast<long long>(onset_samples[i]), onset_times[i]);
}

void write_emg_quant_csv(const std::string& curve_path,
                         const std::string& metrics_path,
                         const QuantifiedEmg& quant) {
  {
    File f = open_out(curve_path);
    std::fputs("time_s,amplitude_uv\n", f.get());
    for (Index i = 0; i < quant.curve.size(); ++i)
      std::fprintf(f.get(), "%.9g,%.9g\n", quant.time_vec[i], quant.curve[i]);
  }
  File f = open_out(metrics_path);
  std::fputs("metric,value,unit\n", f.get());
  std::fprintf(f.get(), "peak_magnitude,%.9g,uV\n", quant.peak_magnitude);
  std::fprintf(f.get(), "activation_slope,%.9g,uV_per_s\n",
               quant.activation_slope);
  std::fprintf(f.get(), "immediate_post_onset_slope,%.9g,uV_per_s\n",
               quant.immediate_post_onset_slope);
  std::fprintf(f.get(), "trigger_time,%.9g,s\n", quant.trigger_time_sec);
}

}  // namespace mcsig
