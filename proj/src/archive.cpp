#include "mcsig/archive.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace mcsig {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kFormatTag = "trialset-v1";

std::string trial_file_name(size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "trial_%03zu.csv", index);
  return buf;
}

void write_trial_csv(const std::string& path, const Mat& trial,
                     const std::vector<std::string>& labels) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  require(f != nullptr, ErrorCode::IoFailure, "cannot open " + path);
  for (Index c = 0; c < trial.rows(); ++c) {
    if (c) std::fputc(',', f);
    const std::string fallback = "ch" + std::to_string(c + 1);
    std::fputs(labels.empty() ? fallback.c_str()
                              : labels[static_cast<size_t>(c)].c_str(),
               f);
  }
  std::fputc('\n', f);
  for (Index s = 0; s < trial.cols(); ++s) {
    for (Index c = 0; c < trial.rows(); ++c) {
      if (c) std::fputc(',', f);
      std::fprintf(f, "%.9g", trial(c, s));
    }
    std::fputc('\n', f);
  }
  std::fclose(f);
}

Mat read_trial_csv(const std::string& path, Index expected_channels) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::IoFailure, "cannot open " + path);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::BadArchive,
          path + ": missing header row");

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    size_t pos = 0;
    while (pos <= line.size()) {
      const size_t comma = line.find(',', pos);
      const std::string cell =
          line.substr(pos, comma == std::string::npos ? std::string::npos
                                                      : comma - pos);
      char* end = nullptr;
      row.push_back(std::strtod(cell.c_str(), &end));
      require(!cell.empty() && end == cell.c_str() + cell.size(),
              ErrorCode::BadArchive, path + ": unparsable cell '" + cell + "'");
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    require(static_cast<Index>(row.size()) == expected_channels,
            ErrorCode::BadArchive, path + ": wrong column count");
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), ErrorCode::BadArchive, path + ": no samples");

  Mat trial(expected_channels, static_cast<Index>(rows.size()));
  for (size_t s = 0; s < rows.size(); ++s)
    for (Index c = 0; c < expected_channels; ++c)
      trial(c, static_cast<Index>(s)) = rows[s][static_cast<size_t>(c)];
  return trial;
}

}  // namespace

void write_trial_archive(const std::string& dir, const TrialSet& trials,
                         const std::map<std::string, std::string>& provenance) {
  trials.validate();
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec, ErrorCode::IoFailure, "cannot create " + dir);

  json manifest;
  manifest["format"] = kFormatTag;
  manifest["fs"] = trials.fs;
  manifest["channel_labels"] = trials.channel_labels;
  json files = json::array();
  for (size_t i = 0; i < trials.trials.size(); ++i) {
    const std::string name = trial_file_name(i);
    write_trial_csv(dir + "/" + name, trials.trials[i], trials.channel_labels);
    files.push_back(name);
  }
  manifest["trials"] = files;
  if (trials.onset_samples) {
    manifest["onset_samples"] = *trials.onset_samples;
    manifest["onset_times"] = *trials.onset_times;
  } else {
    manifest["onset_samples"] = nullptr;
    manifest["onset_times"] = nullptr;
  }
  json prov = json::object();
  for (const auto& [k, v] : provenance) prov[k] = v;
  manifest["provenance"] = prov;

  std::ofstream out(dir + "/manifest.json");
  require(out.good(), ErrorCode::IoFailure, "cannot write manifest in " + dir);
  out << manifest.dump(2) << "\n";
}

TrialSet read_trial_archive(const std::string& dir) {
  std::ifstream in(dir + "/manifest.json");
  require(in.good(), ErrorCode::IoFailure, dir + ": missing manifest.json");
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    raise(ErrorCode::BadArchive,
          dir + ": manifest parse error: " + std::string(e.what()));
  }
  require(manifest.value("format", "") == kFormatTag, ErrorCode::BadArchive,
          dir + ": unknown archive format");

  TrialSet trials;
  try {
    trials.fs = manifest.at("fs").get<double>();
    trials.channel_labels =
        manifest.at("channel_labels").get<std::vector<std::string>>();
    for (const auto& name : manifest.at("trials"))
      trials.trials.push_back(
          read_trial_csv(dir + "/" + name.get<std::string>(),
                         static_cast<Index>(trials.channel_labels.size())));
    if (!manifest.at("onset_samples").is_null()) {
      trials.onset_samples =
          manifest.at("onset_samples").get<std::vector<Index>>();
      trials.onset_times = manifest.at("onset_times").get<std::vector<double>>();
    }
  } catch (const json::exception& e) {
    raise(ErrorCode::BadArchive,
          dir + ": manifest field error: " + std::string(e.what()));
  }
  trials.validate();
  return trials;
}

}  // namespace mcsig
