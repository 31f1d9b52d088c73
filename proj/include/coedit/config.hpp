#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "coedit/translate.hpp"

namespace coedit {

struct Config {
  Direction direction;
  double window_days = 90;
  double jaccard_min = 0.5;
  double identifier_cutoff = 0.8;
  double train_ratio = 0.7;
  double valid_ratio = 0.1;
  std::uint64_t seed = 42;
  std::size_t fewshot_k = 2;
  std::size_t resamples = 10000;
  double level = 0.95;
  BackendConfig backend;
};

inline constexpr const char* kBackendTokenEnv = "COEDIT_BACKEND_TOKEN";

// Keys: direction ("java2cs" | "cs2java"), window_days, jaccard_min,
// identifier_cutoff, split_ratios ([train, valid]), seed, fewshot_k,
// resamples, level, backend {endpoint, samples, max_tokens, parallelism,
// timeout_seconds}. Secrets are refused; the token only comes from the
// environment. Throws Error(Io) or Error(InvalidArgument).
void load_config_file(Config& config, const std::string& path);
void load_config_text(Config& config, std::string_view json_text);

// One override, e.g. ("jaccard_min", "0.6") or ("backend.endpoint", "...").
void set_option(Config& config, std::string_view key, std::string_view value);

// Reads COEDIT_BACKEND_TOKEN into config.backend.token when set.
void apply_environment(Config& config);

// Checks ranges (ratios, window, parallelism...). Throws Error(InvalidArgument).
void validate(const Config& config);

std::string_view direction_name(Direction d) noexcept;  // "java2cs" / "cs2java"
Direction parse_direction(std::string_view text);       // throws InvalidArgument

}  // namespace coedit
