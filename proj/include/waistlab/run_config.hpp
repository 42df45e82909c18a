// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

namespace waistlab {

//! Default RNG seed used when neither --seed nor WAISTLAB_SEED is given;
//! fixed so plain CI runs are reproducible.
inline constexpr std::uint64_t kDefaultSeed = 1729;

//! Common knobs shared by every subcommand.
struct RunConfig {
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t samples = 1u << 20;
  int workers = 1;
  std::string out_dir = "out";
  bool write_csv = false;
  bool write_json = false;
  bool write_svg = false;

  nlohmann::ordered_json to_json() const;
};

//! Seed precedence: explicit --seed value, then the WAISTLAB_SEED
//! environment variable, then the default.  A non-numeric environment
//! value raises a validation error rather than being silently ignored.
std::uint64_t resolve_seed(std::optional<std::uint64_t> cli_seed);

//! Accepts either an INI-style key=value file (returned unchanged) or a
//! flat JSON object, which is converted to a temporary INI file the
//! option parser can ingest.  Returns the path to read.
std::string prepare_config_file(const std::string& path);

}  // namespace waistlab
