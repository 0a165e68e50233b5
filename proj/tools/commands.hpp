#pragma once

#include <cstdint>
#include <string>

#include "config.hpp"

namespace jdisc::cli {

struct RunOptions {
  std::string out_dir = "out";
  std::uint64_t seed = 0;
};

/// Each command writes <out>/<command>.json (plus CSV tables when enabled)
/// and returns the report. Config problems raise ConfigError, numerical
/// failures jdisc::Error.
json cmd_solve(const Config& cfg, const RunOptions& opts);
json cmd_family(const Config& cfg, const RunOptions& opts);
json cmd_probe(const Config& cfg, const RunOptions& opts);
json cmd_converge(const Config& cfg, const RunOptions& opts);

json disc_to_json(const DiscMap& f);
DiscMap disc_from_json(const json& j);
std::string disc_to_csv(const DiscMap& f);

}  // namespace jdisc::cli
