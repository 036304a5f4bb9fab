// pipeline.hpp — config-driven end-to-end run with a reproducibility manifest.
//
// Stages: simulate the baseline ensemble, summarize it (fan chart + tail
// metrics), price the futures curve, run the vol term structure on the
// scenario mixture, backtest the rolled hedge with its settlement ledger,
// and write everything as CSV plus a manifest.json recording the config
// hash, seed, version, and per-file content hashes. Identical config and
// seed reproduce every output byte for byte.

#pragma once

#include <map>
#include <ostream>
#include <string>

#include "sitmark/config.hpp"

namespace sitmark {

inline constexpr const char* kToolkitVersion = "1.0.0";

struct RunManifest {
    std::string version;
    std::string config_hash;
    std::uint64_t base_seed = 0;
    std::map<std::string, std::string> file_hashes;  // filename -> fnv1a hex
};

// Runs all stages, writes outputs under config.output_dir (created if
// needed). Failures throw std::runtime_error prefixed with the stage name.
RunManifest run_pipeline(const RunConfig& config, std::ostream& log);

}  // namespace sitmark
