#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "bvf/simulation.hpp"

namespace bvf {

// Plain "key = value" lines; '#' starts a comment, blank lines are skipped.
// Keys are case-sensitive and may not repeat (ParseError).
using KeyValueConfig = std::map<std::string, std::string>;

KeyValueConfig parse_key_value(std::istream& in);
KeyValueConfig load_key_value(const std::filesystem::path& path);

// Recognized keys:
//   kind, alpha0, alpha1, alpha2, lambda, n, censor_frac, reps, level, boot_B,
//   seed, workers
// Missing keys keep the values already present in `base`. Unknown keys and
// malformed numbers throw ValidationError.
EstimationStudyConfig estimation_config_from(const KeyValueConfig& kv, EstimationStudyConfig base = {});

// Recognized keys:
//   kind, alpha0, alpha1, alpha2, lambda, candidates (comma list), n_grid
//   (comma list), censor_frac, reps, seed, workers, criterion
SelectionStudyConfig selection_config_from(const KeyValueConfig& kv, SelectionStudyConfig base = {});

}  // namespace bvf
