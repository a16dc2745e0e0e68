#ifndef MCSIG_ARCHIVE_HPP
#define MCSIG_ARCHIVE_HPP

#include <map>
#include <string>

#include "mcsig/types.hpp"

namespace mcsig {

// Trial-set archive: a directory with a manifest.json (rate, labels, trial
// file list, onsets, provenance) and one CSV per trial, columns = channels in
// microvolts at 9 significant digits. Text on purpose: fixtures stay
// inspectable and diffable.
void write_trial_archive(const std::string& dir, const TrialSet& trials,
                         const std::map<std::string, std::string>& provenance);

TrialSet read_trial_archive(const std::string& dir);

}  // namespace mcsig

#endif
