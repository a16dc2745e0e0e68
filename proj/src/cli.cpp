#include "mcsig/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcsig/archive.hpp"
#include "mcsig/bdf.hpp"
#include "mcsig/connectivity.hpp"
#include "mcsig/csv_out.hpp"
#include "mcsig/defaults.hpp"
#include "mcsig/emg.hpp"
#include "mcsig/erp.hpp"
#include "mcsig/svg.hpp"
#include "mcsig/synth.hpp"

namespace mcsig {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kToolVersion = "mcsig 1.0.0";

enum ExitCode : int {
  kOk = 0,
  kValidationError = 1,
  kIoError = 2,
  kComputationError = 3,
};

int classify(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadMagic:
    case ErrorCode::TruncatedPayload:
    case ErrorCode::InvalidScaling:
    case ErrorCode::InvalidHeader:
    case ErrorCode::ValueOutOfDigitalRange:
    case ErrorCode::BadArchive:
    case ErrorCode::IoFailure:
      return kIoError;
    case ErrorCode::NoOnsetDetected:
    case ErrorCode::ZeroReference:
    case ErrorCode::TrialTooShort:
    case ErrorCode::ReferenceOutsideSignal:
    case ErrorCode::WindowOutsideTrials:
    case ErrorCode::WindowTooShortForSegments:
    case ErrorCode::SignalTooShort:
      return kComputationError;
    default:
      return kValidationError;
  }
}

// Files created by the current run, removed again if the computation fails
// after output started.
std::vector<std::string>& tracked_outputs() {
  static std::vector<std::string> files;
  return files;
}

std::string track(const std::string& path) {
  tracked_outputs().push_back(path);
  return path;
}

void cleanup_tracked() {
  for (const std::string& path : tracked_outputs()) {
    std::error_code ec;
    fs::remove(path, ec);
  }
  tracked_outputs().clear();
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec, ErrorCode::IoFailure, "cannot create output directory " + dir);
}

void write_run_manifest(const std::string& out_dir,
                        const std::vector<std::string>& tokens,
                        std::uint64_t seed) {
  json manifest;
  manifest["tool"] = kToolVersion;
  manifest["command"] = tokens;
  manifest["seed"] = seed;
  std::ofstream out(out_dir + "/run_manifest.json");
  require(out.good(), ErrorCode::IoFailure,
          "cannot write run manifest in " + out_dir);
  out << manifest.dump(2) << "\n";
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_double(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  require(!s.empty() && end == s.c_str() + s.size(), ErrorCode::InvalidArgument,
          "cannot parse " + what + " from '" + s + "'");
  return v;
}

// "lo:hi" in Hz, or a rhythm name.
BandSpec parse_band(const std::string& s) {
  if (s.find(':') == std::string::npos) return BandSpec::from_name(s);
  const auto parts = split(s, ':');
  require(parts.size() == 2, ErrorCode::InvalidArgument,
          "band must be lo:hi or a rhythm name");
  return BandSpec::from_range(parse_double(parts[0], "band edge"),
                              parse_double(parts[1], "band edge"));
}

std::pair<double, double> parse_range(const std::string& s,
                                      const std::string& what) {
  const auto parts = split(s, ':');
  require(parts.size() == 2, ErrorCode::InvalidArgument,
          what + " must be given as a:b");
  return {parse_double(parts[0], what), parse_double(parts[1], what)};
}

Index resolve_channel(const TrialSet& trials, const std::string& id) {
  char* end = nullptr;
  const long v = std::strtol(id.c_str(), &end, 10);
  if (!id.empty() && end == id.c_str() + id.size()) {
    require(v >= 0 && v < trials.n_channels(),
            ErrorCode::ChannelIndexOutOfRange,
            "channel index " + id + " out of range");
    return static_cast<Index>(v);
  }
  const Index idx = trials.find_channel(id);
  require(idx >= 0, ErrorCode::ChannelIndexOutOfRange,
          "no channel labeled '" + id + "'");
  return idx;
}

std::vector<double> resolve_onsets(const TrialSet& trials,
                                   const std::string& override_csv) {
  if (!override_csv.empty()) {
    std::vector<double> onsets;
    for (const std::string& tok : split(override_csv, ','))
      onsets.push_back(parse_double(tok, "onset time"));
    return onsets;
  }
  require(trials.onset_times.has_value(), ErrorCode::InvalidArgument,
          "the archive carries no onsets; pass --onsets or convert with "
          "onset detection");
  return *trials.onset_times;
}

std::string window_tag(const TimeWindow& w) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%+03d_%+03d",
                static_cast<int>(std::lround(w.start_s)),
                static_cast<int>(std::lround(w.end_s)));
  return buf;
}

void plot_connectivity_windows(const ConnectivityMap& map,
                               const std::string& out_dir,
                               const std::string& stem) {
  for (size_t w = 0; w < map.windows.size(); ++w) {
    const std::string path =
        out_dir + "/" + stem + "_" + window_tag(map.windows[w]) + ".svg";
    char title[96];
    std::snprintf(title, sizeof title, "%s [%g, %g] s", stem.c_str(),
                  map.windows[w].start_s, map.windows[w].end_s);
    plot_heatmap_svg(track(path), map.values[w], title, 0.0, 1.0,
                     map.channel_labels, map.channel_labels);
  }
}

// ---- subcommand option bags -------------------------------------------

struct SynthArgs {
  std::string out_dir;
  Index trials = 32;
  Index channels = 2;
  double fs = 256.0;
  double length_s = 4.0;
  double onset_s = 2.0;
  double onset_jitter_s = 0.0;
  std::vector<std::string> tones;
  std::string erd;
  std::string coupling;
  double noise_power = 0.0;
  std::string noise_color = "pink";
  double emg_amplitude = 0.0;
  double emg_quiet = 0.5;
  std::string ecg;
  std::string labels;
  std::uint64_t seed = defaults::kSeed;
  bool write_bdf_files = false;
};

void run_synth(const SynthArgs& a) {
  SynthSpec spec;
  spec.n_trials = a.trials;
  spec.n_channels = a.channels;
  spec.fs = a.fs;
  spec.trial_length_s = a.length_s;
  spec.onset_s = a.onset_s;
  spec.onset_jitter_s = a.onset_jitter_s;
  spec.noise_power_uv2 = a.noise_power;
  spec.seed = a.seed;
  if (a.noise_color == "pink") {
    spec.noise_color = NoiseColor::Pink;
  } else if (a.noise_color == "white") {
    spec.noise_color = NoiseColor::White;
  } else {
    raise(ErrorCode::InvalidArgument, "noise color must be pink or white");
  }
  for (const std::string& tone : a.tones) {
    const auto parts = split(tone, ':');
    require(parts.size() == 2, ErrorCode::InvalidArgument,
            "tone must be freq:amplitude");
    spec.tones.push_back({parse_double(parts[0], "tone frequency"),
                          parse_double(parts[1], "tone amplitude")});
  }
  if (!a.erd.empty()) {
    const auto parts = split(a.erd, ':');
    require(parts.size() == 5, ErrorCode::InvalidArgument,
            "erd must be lo:hi:drop:start:end");
    ErdSpec erd;
    erd.band = BandSpec::from_range(parse_double(parts[0], "erd lo"),
                                    parse_double(parts[1], "erd hi"));
    erd.drop_fraction = parse_double(parts[2], "erd drop");
    erd.start_s = parse_double(parts[3], "erd start");
    erd.end_s = parse_double(parts[4], "erd end");
    spec.erd = erd;
  }
  if (!a.coupling.empty()) {
    const auto parts = split(a.coupling, ':');
    require(parts.size() == 6, ErrorCode::InvalidArgument,
            "coupling must be chA:chB:lo:hi:pre:post");
    CouplingSpec c;
    c.ch_a = static_cast<Index>(parse_double(parts[0], "coupling channel"));
    c.ch_b = static_cast<Index>(parse_double(parts[1], "coupling channel"));
    c.band = BandSpec::from_range(parse_double(parts[2], "coupling lo"),
                                  parse_double(parts[3], "coupling hi"));
    c.pre_onset_plv = parse_double(parts[4], "coupling pre target");
    c.post_onset_plv = parse_double(parts[5], "coupling post target");
    spec.coupling = c;
  }
  if (a.emg_amplitude > 0.0) {
    EmgSpec emg;
    emg.burst_amplitude_uv = a.emg_amplitude;
    emg.quiet_noise_uv = a.emg_quiet;
    if (!a.ecg.empty()) {
      const auto parts = split(a.ecg, ':');
      require(parts.size() == 2, ErrorCode::InvalidArgument,
              "ecg must be rate_bpm:amplitude");
      EcgTrainSpec train;
      train.rate_bpm = parse_double(parts[0], "ecg rate");
      train.amplitude_uv = parse_double(parts[1], "ecg amplitude");
      emg.ecg = train;
    }
    spec.emg = emg;
  }
  if (!a.labels.empty()) spec.channel_labels = split(a.labels, ',');

  const SynthResult result = gen_trial_set(spec);
  ensure_out_dir(a.out_dir);
  write_trial_archive(a.out_dir, result.trials,
                      {{"generator", "synth"},
                       {"tool", kToolVersion},
                       {"seed", std::to_string(a.seed)}});

  if (a.write_bdf_files) {
    const Index n = result.trials.trials.front().cols();
    for (size_t i = 0; i < result.trials.trials.size(); ++i) {
      BdfHeader header = BdfHeader::make(result.trials.n_channels(), spec.fs,
                                         1, n);
      for (Index c = 0; c < result.trials.n_channels(); ++c)
        header.channels[c].label = result.trials.channel_labels[c];
      char name[32];
      std::snprintf(name, sizeof name, "trial_%03zu.bdf", i);
      write_bdf_file(track(a.out_dir + "/" + name), header,
                     result.trials.trials[i]);
    }
  }
  std::printf("wrote %lld trials to %s\n",
              static_cast<long long>(result.trials.n_trials()),
              a.out_dir.c_str());
}

struct ConvertArgs {
  std::vector<std::string> inputs;
  std::string out_dir;
  std::string eeg_channels = "0";
  Index emg_channel = 0;
  bool drift = true;
  bool onset = true;
  double onset_window_s = defaults::kOnsetWindowS;
  double th_coeff = defaults::kOnsetThCoeff;
};

void run_convert(const ConvertArgs& a) {
  require(!a.inputs.empty(), ErrorCode::InvalidArgument, "no input files");
  std::vector<Index> eeg;
  for (const std::string& tok : split(a.eeg_channels, ','))
    eeg.push_back(static_cast<Index>(parse_double(tok, "EEG channel index")));

  LoadOptions options;
  options.drift_reject = a.drift;
  options.detect_onsets = a.onset;
  options.onset_window_s = a.onset_window_s;
  options.onset_th_coeff = a.th_coeff;
  const LoadResult loaded =
      load_trial_set(a.inputs, eeg, a.emg_channel, options);

  // One archive holding EEG channels plus the EMG channel last.
  TrialSet combined = loaded.eeg;
  combined.channel_labels.push_back(loaded.emg.channel_labels.front() +
                                    "(EMG)");
  for (size_t i = 0; i < combined.trials.size(); ++i) {
    Mat with_emg(combined.trials[i].rows() + 1, combined.trials[i].cols());
    with_emg.topRows(combined.trials[i].rows()) = combined.trials[i];
    with_emg.bottomRows(1) = loaded.emg.trials[i];
    combined.trials[i] = with_emg;
  }
  ensure_out_dir(a.out_dir);
  write_trial_archive(a.out_dir, combined,
                      {{"generator", "convert"}, {"tool", kToolVersion}});
  std::printf("converted %zu files into %s\n", a.inputs.size(),
              a.out_dir.c_str());
}

struct ErpArgs {
  std::string in_dir, out_dir;
  std::string channel = "0";
  std::string band = "alpha";
  std::string onsets;
  double duration_s = defaults::kDurationS;
  int order = defaults::kCicOrder;
  double trend_window_s = defaults::kTrendWindowS;
  bool plot = false;
  // quantification extras
  std::string ref_per;
  double cof_intv = defaults::kCofIntv;
};

ERPCurve compute_erp(const ErpArgs& a, const TrialSet& trials) {
  ErpOptions opt;
  opt.duration_s = a.duration_s;
  opt.cic_order = a.order;
  opt.trend_window_s = a.trend_window_s;
  return trigger_avg_erp(trials, resolve_channel(trials, a.channel),
                         resolve_onsets(trials, a.onsets), parse_band(a.band),
                         opt);
}

void run_erp(const ErpArgs& a, const std::vector<std::string>& tokens) {
  const TrialSet trials = read_trial_archive(a.in_dir);
  const ERPCurve erp = compute_erp(a, trials);
  ensure_out_dir(a.out_dir);
  write_erp_csv(track(a.out_dir + "/erp.csv"), erp);
  if (a.plot)
    plot_erp_svg(track(a.out_dir + "/erp.svg"), erp,
                 "trigger-averaged band power");
  write_run_manifest(a.out_dir, tokens, defaults::kSeed);
}

void run_erp_quant(const ErpArgs& a, const std::vector<std::string>& tokens) {
  const TrialSet trials = read_trial_archive(a.in_dir);
  const ERPCurve erp = compute_erp(a, trials);
  QuantOptions q;
  if (!a.ref_per.empty()) {
    const auto range = parse_range(a.ref_per, "reference period");
    q.ref_lo_s = range.first;
    q.ref_hi_s = range.second;
  }
  q.cof_intv = a.cof_intv;
  const ErdErsReport report = erp_quantification(erp, q);
  ensure_out_dir(a.out_dir);
  write_erp_csv(track(a.out_dir + "/erp.csv"), erp);
  write_quant_curve_csv(track(a.out_dir + "/quant_curve.csv"), report);
  write_quant_segments_csv(track(a.out_dir + "/segments.csv"), report);
  if (a.plot)
    plot_quant_svg(track(a.out_dir + "/quant.svg"), report,
                   "quantified band power, percent of reference");
  write_run_manifest(a.out_dir, tokens, defaults::kSeed);
}

struct TfArgs {
  std::string in_dir, out_dir;
  std::string channel = "0";
  std::string method = "STFT";
  std::string onsets;
  double duration_s = defaults::kDurationS;
  bool plot = false;
};

void run_erp_tf(const TfArgs& a, const std::vector<std::string>& tokens) {
  const TrialSet trials = read_trial_archive(a.in_dir);
  TfOptions opt;
  opt.method = parse_tf_method(a.method);
  opt.duration_s = a.duration_s;
  const TFMap map =
      trigger_avg_tf_erp(trials, resolve_channel(trials, a.channel),
                         resolve_onsets(trials, a.onsets), opt);
  ensure_out_dir(a.out_dir);
  write_tfmap_csv(track(a.out_dir + "/tfmap.csv"), map);
  if (a.plot)
    plot_tfmap_svg(track(a.out_dir + "/tfmap.svg"), map,
                   std::string("time-frequency map, ") +
                       tf_method_name(map.method));
  write_run_manifest(a.out_dir, tokens, defaults::kSeed);
}

struct PlvArgs {
  std::string in_dir, out_dir;
  std::string pair;
  std::string reference;
  std::string band;
  std::string window;
  std::string onsets;
  int pertnum = defaults::kPertnum;
  std::uint64_t seed = defaults::kSeed;
  bool pooled = false;
  bool plot = false;
};

PlvMapOptions make_plv_options(const PlvArgs& a) {
  PlvMapOptions opt;
  if (!a.band.empty()) opt.band = parse_band(a.band);
  if (!a.window.empty()) {
    const auto range = parse_range(a.window, "window range");
    opt.window_pre_s = range.first;
    opt.window_post_s = range.second;
  }
  opt.pertnum = a.pertnum;
  opt.seed = a.seed;
  opt.aggregation = a.pooled ? TrialAggregation::PooledSamples
                             : TrialAggregation::MeanOfTrialValues;
  return opt;
}

void run_tcplv(const PlvArgs& a, const std::vector<std::string>& tokens) {
  const TrialSet trials = read_trial_archive(a.in_dir);
  const auto onsets = resolve_onsets(trials, a.onsets);
  const PlvMapOptions opt = make_plv_options(a);
  ensure_out_dir(a.out_dir);
  if (!a.pair.empty()) {
    const auto parts = split(a.pair, ',');
    require(parts.size() == 2, ErrorCode::BadPair, "pair must be chA,chB");
    const PlvPairSeries series =
        tcplv_pair(trials, resolve_channel(trials, parts[0]),
                   resolve_channel(trials, parts[1]), onsets, opt);
    write_pair_series_csv(track(a.out_dir + "/tcplv.csv"), series);
    if (a.plot) {
      Vec centers(static_cast<Index>(series.windows.size()));
      for (size_t w = 0; w < series.windows.size(); ++w)
        centers[static_cast<Index>(w)] =
            (series.windows[w].start_s + series.windows[w].end_s) / 2.0;
      plot_curve_svg(track(a.out_dir + "/tcplv.svg"), centers, series.values,
                     "time-course phase locking", 0.0,
                     std::numeric_limits<double>::quiet_NaN(),
                     std::numeric_limits<double>::quiet_NaN());
    }
  } else {
    const Index ref = a.reference.empty()
                          ? -1
                          : resolve_channel(trials, a.reference);
    const PlvReferenceSeries series =
        tcplv_reference(trials, ref, onsets, opt);
    write_reference_series_csv(track(a.out_dir + "/tcplv.csv"), series);
    if (a.plot) {
      std::vector<std::string> window_names;
      for (const TimeWindow& w : series.windows)
        window_names.push_back(window_tag(w));
      plot_heatmap_svg(track(a.out_dir + "/tcplv.svg"), series.values,
                       "reference-channel phase locking per window", 0.0, 1.0,
                       window_names, trials.channel_labels);
    }
  }
  write_run_manifest(a.out_dir, tokens, a.seed);
}

void run_pwplv(const PlvArgs& a, const std::vector<std::string>& tokens) {
  const TrialSet trials = read_trial_archive(a.in_dir);
  const ConnectivityMap map =
      pwplv(trials, resolve_onsets(trials, a.onsets), make_plv_options(a));
  ensure_out_dir(a.out_dir);
  write_connectivity_csv(track(a.out_dir + "/pwplv.csv"), map);
  if (a.plot) plot_connectivity_windows(map, a.out_dir, "pwplv");
  write_run_manifest(a.out_dir, tokens, a.seed);
}

struct CohArgs {
  std::string in_dir, out_dir;
  std::string band;
  std::string window;
  std::string onsets;
  int segments = defaults::kMscSegmentsPerWindow;
  bool plot = false;
};

void run_pwcoh(const CohArgs& a, const std::vector<std::string>& tokens) {
  const TrialSet trials = read_trial_archive(a.in_dir);
  CoherenceOptions opt;
  if (!a.band.empty()) opt.band = parse_band(a.band);
  if (!a.window.empty()) {
    const auto range = parse_range(a.window, "window range");
    opt.window_pre_s = range.first;
    opt.window_post_s = range.second;
  }
  opt.segments_per_window = a.segments;
  const ConnectivityMap map =
      pwcoherence(trials, resolve_onsets(trials, a.onsets), opt);
  ensure_out_dir(a.out_dir);
  write_connectivity_csv(track(a.out_dir + "/pwcoh.csv"), map);
  if (a.plot) plot_connectivity_windows(map, a.out_dir, "pwcoh");
  write_run_manifest(a.out_dir, tokens, defaults::kSeed);
}

struct EmgArgs {
  std::string in_dir, out_dir;
  std::string channel = "EMG";
  double window_s = defaults::kOnsetWindowS;
  double th_coeff = defaults::kOnsetThCoeff;
  double baseline_s = defaults::kOnsetBaselineS;
  double duration_s = defaults::kDurationS;
  std::string onsets;
  bool plot = false;
};

void run_emg_onset(const EmgArgs& a, const std::vector<std::string>& tokens) {
  const TrialSet trials = read_trial_archive(a.in_dir);
  const Index channel = resolve_channel(trials, a.channel);
  const Index window =
      std::max<Index>(2, round_index(a.window_s * trials.fs));
  std::vector<Index> samples;
  std::vector<double> times;
  OnsetOptions opt;
  opt.baseline_s = a.baseline_s;
  for (const Mat& trial : trials.trials) {
    const OnsetResult r = emg_onset(trial.row(channel).transpose(), trials.fs,
                                    window, a.th_coeff, opt);
    samples.push_back(r.onset_sample);
    times.push_back(r.onset_time);
  }
  ensure_out_dir(a.out_dir);
  write_onsets_csv(track(a.out_dir + "/onsets.csv"), samples, times);
  write_run_manifest(a.out_dir, tokens, defaults::kSeed);
}

void run_emg_quant(const EmgArgs& a, const std::vector<std::string>& tokens) {
  const TrialSet trials = read_trial_archive(a.in_dir);
  const Index channel = resolve_channel(trials, a.channel);
  std::vector<Index> onset_samples;
  if (!a.onsets.empty()) {
    for (const std::string& tok : split(a.onsets, ','))
      onset_samples.push_back(
          round_index(parse_double(tok, "onset time") * trials.fs));
  } else {
    require(trials.onset_samples.has_value(), ErrorCode::InvalidArgument,
            "the archive carries no onsets; pass --onsets");
    onset_samples = *trials.onset_samples;
  }
  EmgQuantOptions opt;
  opt.duration_s = a.duration_s;
  const EmgQuantResult result =
      emg_quantification(trials, channel, onset_samples, opt);
  ensure_out_dir(a.out_dir);
  write_emg_quant_csv(track(a.out_dir + "/emg_curve.csv"),
                      track(a.out_dir + "/emg_metrics.csv"), result.quant);
  if (a.plot)
    plot_curve_svg(track(a.out_dir + "/emg_curve.svg"), result.quant.time_vec,
                   result.quant.curve, "quantified muscle activity",
                   result.quant.trigger_time_sec,
                   std::numeric_limits<double>::quiet_NaN(),
                   std::numeric_limits<double>::quiet_NaN());
  write_run_manifest(a.out_dir, tokens, defaults::kSeed);
}

// Plain key = value configuration. Values fill in for options that were not
// given on the command line, so flags always win.
std::vector<std::string> apply_config_file(
    const std::vector<std::string>& tokens) {
  std::string config_path;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == "--config" && i + 1 < tokens.size())
      config_path = tokens[i + 1];
    else if (tokens[i].rfind("--config=", 0) == 0)
      config_path = tokens[i].substr(9);
  }
  if (config_path.empty()) return tokens;

  std::ifstream in(config_path);
  require(in.good(), ErrorCode::IoFailure,
          "cannot open config file " + config_path);
  std::vector<std::string> out = tokens;
  std::string line;
  auto strip = [](std::string s) {
    const auto from = s.find_first_not_of(" \t");
    const auto to = s.find_last_not_of(" \t\r");
    return from == std::string::npos ? std::string()
                                     : s.substr(from, to - from + 1);
  };
  while (std::getline(in, line)) {
    const std::string text = strip(line);
    if (text.empty() || text[0] == '#') continue;
    const size_t eq = text.find('=');
    require(eq != std::string::npos, ErrorCode::InvalidArgument,
            config_path + ": expected key = value, got '" + text + "'");
    const std::string key = strip(text.substr(0, eq));
    const std::string value = strip(text.substr(eq + 1));
    require(!key.empty(), ErrorCode::InvalidArgument,
            config_path + ": empty key");
    const std::string flag = "--" + key;
    bool present = false;
    for (const std::string& tok : tokens)
      if (tok == flag || tok.rfind(flag + "=", 0) == 0) present = true;
    if (!present) {
      out.push_back(flag);
      if (!value.empty()) out.push_back(value);
    }
  }
  return out;
}

std::vector<std::string> manifest_tokens(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::IoFailure, "cannot open " + path);
  json manifest;
  try {
    in >> manifest;
    return manifest.at("command").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    raise(ErrorCode::BadArchive,
          path + ": bad run manifest: " + std::string(e.what()));
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"EEG/EMG motor analysis: trigger-averaged band power, "
               "time-frequency maps, phase-locking and coherence maps, and "
               "muscle activity quantification"};
  app.require_subcommand(1);
  std::vector<std::string> tokens;
  for (int i = 1; i < argc; ++i) tokens.emplace_back(argv[i]);
  std::string config_file;
  auto add_config_option = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_file,
                    "plain key = value file supplying unset options");
  };

  SynthArgs synth_args;
  auto* synth_cmd =
      app.add_subcommand("synth", "generate a synthetic trial-set archive");
  synth_cmd->add_option("--out", synth_args.out_dir, "output directory")
      ->required();
  synth_cmd->add_option("--trials", synth_args.trials, "number of trials");
  synth_cmd->add_option("--channels", synth_args.channels, "EEG channels");
  synth_cmd->add_option("--fs", synth_args.fs, "sampling rate, Hz");
  synth_cmd->add_option("--length", synth_args.length_s, "trial length, s");
  synth_cmd->add_option("--onset", synth_args.onset_s, "onset time, s");
  synth_cmd->add_option("--onset-jitter", synth_args.onset_jitter_s,
                        "uniform onset jitter, s");
  synth_cmd->add_option("--tone", synth_args.tones,
                        "tone as freq:amplitude (repeatable)");
  synth_cmd->add_option("--erd", synth_args.erd,
                        "band power drop as lo:hi:drop:start:end");
  synth_cmd->add_option("--coupling", synth_args.coupling,
                        "coupled pair as chA:chB:lo:hi:pre:post");
  synth_cmd->add_option("--noise", synth_args.noise_power,
                        "background noise power, uV^2");
  synth_cmd->add_option("--noise-color", synth_args.noise_color,
                        "pink or white");
  synth_cmd->add_option("--emg", synth_args.emg_amplitude,
                        "add an EMG channel with this burst amplitude");
  synth_cmd->add_option("--emg-quiet", synth_args.emg_quiet,
                        "EMG quiet-floor noise, uV");
  synth_cmd->add_option("--ecg", synth_args.ecg,
                        "cardiac train as rate_bpm:amplitude");
  synth_cmd->add_option("--labels", synth_args.labels,
                        "comma-separated channel labels");
  synth_cmd->add_option("--seed", synth_args.seed, "generator seed");
  synth_cmd->add_flag("--bdf", synth_args.write_bdf_files,
                      "also write one BDF file per trial");
  add_config_option(synth_cmd);
  synth_cmd->callback([&] { run_synth(synth_args); });

  ConvertArgs convert_args;
  auto* convert_cmd = app.add_subcommand(
      "convert", "parse BDF recordings into a trial-set archive");
  convert_cmd->add_option("inputs", convert_args.inputs, "BDF files, one per "
                                                         "trial")
      ->required();
  convert_cmd->add_option("--out", convert_args.out_dir, "output directory")
      ->required();
  convert_cmd->add_option("--eeg-channels", convert_args.eeg_channels,
                          "comma-separated EEG channel indices");
  convert_cmd->add_option("--emg-channel", convert_args.emg_channel,
                          "EMG channel index");
  convert_cmd->add_flag("--drift,!--no-drift", convert_args.drift,
                        "drift rejection");
  convert_cmd->add_flag("--onset,!--no-onset", convert_args.onset,
                        "EMG onset detection");
  convert_cmd->add_option("--onset-window", convert_args.onset_window_s,
                          "onset detection window, s");
  convert_cmd->add_option("--th-coeff", convert_args.th_coeff,
                          "onset threshold coefficient");
  add_config_option(convert_cmd);
  convert_cmd->callback([&] { run_convert(convert_args); });

  ErpArgs erp_args;
  auto* erp_cmd =
      app.add_subcommand("erp", "trigger-averaged band power over time");
  auto add_erp_common = [&](CLI::App* cmd, ErpArgs& args) {
    cmd->add_option("--in", args.in_dir, "input archive")->required();
    cmd->add_option("--out", args.out_dir, "output directory")->required();
    cmd->add_option("--channel", args.channel, "channel index or label");
    cmd->add_option("--band", args.band, "band as lo:hi or rhythm name");
    cmd->add_option("--onsets", args.onsets,
                    "comma-separated onset times, s (else archive onsets)");
    cmd->add_option("--duration", args.duration_s, "post-trigger duration, s");
    cmd->add_option("--order", args.order, "band-pass cascade order (even)");
    cmd->add_option("--trend-window", args.trend_window_s,
                    "trend smoother length, s");
    cmd->add_flag("--plot", args.plot, "write SVG figures");
    add_config_option(cmd);
  };
  add_erp_common(erp_cmd, erp_args);
  erp_cmd->callback([&] { run_erp(erp_args, tokens); });

  ErpArgs quant_args;
  auto* quant_cmd = app.add_subcommand(
      "erp-quant", "band power drop/rise quantification against a reference "
                   "period");
  add_erp_common(quant_cmd, quant_args);
  quant_cmd->add_option("--ref-per", quant_args.ref_per,
                        "reference period as a:b, seconds relative to the "
                        "trigger");
  quant_cmd->add_option("--cof-intv", quant_args.cof_intv,
                        "confidence interval multiplier");
  quant_cmd->callback([&] { run_erp_quant(quant_args, tokens); });

  TfArgs tf_args;
  auto* tf_cmd = app.add_subcommand("erp-tf", "time-frequency map");
  tf_cmd->add_option("--in", tf_args.in_dir, "input archive")->required();
  tf_cmd->add_option("--out", tf_args.out_dir, "output directory")->required();
  tf_cmd->add_option("--channel", tf_args.channel, "channel index or label");
  tf_cmd->add_option("--method", tf_args.method, "STFT, CWT or NBCH");
  tf_cmd->add_option("--onsets", tf_args.onsets, "onset override");
  tf_cmd->add_option("--duration", tf_args.duration_s,
                     "post-trigger duration, s");
  tf_cmd->add_flag("--plot", tf_args.plot, "write SVG figures");
  add_config_option(tf_cmd);
  tf_cmd->callback([&] { run_erp_tf(tf_args, tokens); });

  PlvArgs tcplv_args;
  auto* tcplv_cmd = app.add_subcommand(
      "tcplv", "time-course phase locking for a pair or against a reference "
               "channel");
  auto add_plv_common = [&](CLI::App* cmd, PlvArgs& args) {
    cmd->add_option("--in", args.in_dir, "input archive")->required();
    cmd->add_option("--out", args.out_dir, "output directory")->required();
    cmd->add_option("--band", args.band, "band as lo:hi or rhythm name");
    cmd->add_option("--window", args.window, "analysis range as pre:post, s");
    cmd->add_option("--onsets", args.onsets, "onset override");
    cmd->add_option("--pertnum", args.pertnum, "perturbation repetitions");
    cmd->add_option("--seed", args.seed, "perturbation seed");
    cmd->add_flag("--pooled", args.pooled,
                  "pool phase samples across trials instead of averaging "
                  "per-trial values");
    cmd->add_flag("--plot", args.plot, "write SVG figures");
    add_config_option(cmd);
  };
  add_plv_common(tcplv_cmd, tcplv_args);
  tcplv_cmd->add_option("--pair", tcplv_args.pair, "channel pair chA,chB");
  tcplv_cmd->add_option("--ref", tcplv_args.reference,
                        "reference channel (default: the channel labeled C3)");
  tcplv_cmd->callback([&] { run_tcplv(tcplv_args, tokens); });

  PlvArgs pwplv_args;
  auto* pwplv_cmd =
      app.add_subcommand("pwplv", "pairwise phase-locking maps per window");
  add_plv_common(pwplv_cmd, pwplv_args);
  pwplv_cmd->callback([&] { run_pwplv(pwplv_args, tokens); });

  CohArgs coh_args;
  auto* coh_cmd =
      app.add_subcommand("pwcoh", "pairwise coherence maps per window");
  coh_cmd->add_option("--in", coh_args.in_dir, "input archive")->required();
  coh_cmd->add_option("--out", coh_args.out_dir, "output directory")
      ->required();
  coh_cmd->add_option("--band", coh_args.band, "band as lo:hi or rhythm name");
  coh_cmd->add_option("--window", coh_args.window,
                      "analysis range as pre:post, s");
  coh_cmd->add_option("--onsets", coh_args.onsets, "onset override");
  coh_cmd->add_option("--segments", coh_args.segments,
                      "segments per 1 s window");
  coh_cmd->add_flag("--plot", coh_args.plot, "write SVG figures");
  add_config_option(coh_cmd);
  coh_cmd->callback([&] { run_pwcoh(coh_args, tokens); });

  EmgArgs onset_args;
  auto* onset_cmd =
      app.add_subcommand("emg-onset", "movement onset detection per trial");
  onset_cmd->add_option("--in", onset_args.in_dir, "input archive")
      ->required();
  onset_cmd->add_option("--out", onset_args.out_dir, "output directory")
      ->required();
  onset_cmd->add_option("--channel", onset_args.channel,
                        "EMG channel index or label");
  onset_cmd->add_option("--window", onset_args.window_s,
                        "deviation window, s");
  onset_cmd->add_option("--th-coeff", onset_args.th_coeff,
                        "threshold coefficient");
  onset_cmd->add_option("--baseline", onset_args.baseline_s,
                        "quiet baseline prefix, s");
  add_config_option(onset_cmd);
  onset_cmd->callback([&] { run_emg_onset(onset_args, tokens); });

  EmgArgs equant_args;
  auto* equant_cmd = app.add_subcommand(
      "emg-quant", "trigger-averaged rectified muscle activity");
  equant_cmd->add_option("--in", equant_args.in_dir, "input archive")
      ->required();
  equant_cmd->add_option("--out", equant_args.out_dir, "output directory")
      ->required();
  equant_cmd->add_option("--channel", equant_args.channel,
                         "EMG channel index or label");
  equant_cmd->add_option("--duration", equant_args.duration_s,
                         "post-trigger duration, s");
  equant_cmd->add_option("--onsets", equant_args.onsets, "onset override");
  equant_cmd->add_flag("--plot", equant_args.plot, "write SVG figures");
  add_config_option(equant_cmd);
  equant_cmd->callback([&] { run_emg_quant(equant_args, tokens); });

  std::string rerun_path;
  auto* rerun_cmd = app.add_subcommand(
      "rerun", "repeat a run from its run_manifest.json");
  rerun_cmd->add_option("manifest", rerun_path, "run manifest path")
      ->required();

  tracked_outputs().clear();
  try {
    std::vector<std::string> expanded = apply_config_file(tokens);
    std::reverse(expanded.begin(), expanded.end());
    app.parse(std::move(expanded));
    if (*rerun_cmd) {
      const auto replay = manifest_tokens(rerun_path);
      std::vector<const char*> replay_argv;
      replay_argv.push_back(argv[0]);
      for (const std::string& tok : replay) replay_argv.push_back(tok.c_str());
      return run_cli(static_cast<int>(replay_argv.size()), replay_argv.data());
    }
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return kValidationError;
  } catch (const Error& e) {
    const int code = classify(e.code());
    if (code == kComputationError) cleanup_tracked();
    std::cerr << "error: " << e.what() << "\n";
    return code;
  } catch (const std::exception& e) {
    cleanup_tracked();
    std::cerr << "error: " << e.what() << "\n";
    return kComputationError;
  }
  return kOk;
}

}  // namespace mcsig
