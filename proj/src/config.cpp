#include "coedit/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace coedit {

namespace {

using nlohmann::json;

double to_double(std::string_view key, std::string_view value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(value), &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidArgument, "option " + std::string(key) + " needs a number, got '" +
                                              std::string(value) + "'");
}

std::uint64_t to_unsigned(std::string_view key, std::string_view value) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::InvalidArgument, "option " + std::string(key) + " needs a non-negative integer, got '" +
                                                std::string(value) + "'");
  }
  return v;
}

// Scalars become strings so file and flag values share one parser.
std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) {
    std::ostringstream out;
    out.precision(17);
    out << v.get<double>();
    return out.str();
  }
  throw Error(ErrorCode::InvalidArgument, "config values must be strings or numbers");
}

}  // namespace

std::string_view direction_name(Direction d) noexcept {
  return d.source == Lang::Java ? "java2cs" : "cs2java";
}

Direction parse_direction(std::string_view text) {
  if (text == "java2cs") return {Lang::Java, Lang::CSharp};
  if (text == "cs2java") return {Lang::CSharp, Lang::Java};
  throw Error(ErrorCode::InvalidArgument, "direction must be java2cs or cs2java");
}

void set_option(Config& c, std::string_view key, std::string_view value) {
  if (key == "direction") c.direction = parse_direction(value);
  else if (key == "window_days") c.window_days = to_double(key, value);
  else if (key == "jaccard_min") c.jaccard_min = to_double(key, value);
  else if (key == "identifier_cutoff") c.identifier_cutoff = to_double(key, value);
  else if (key == "train_ratio") c.train_ratio = to_double(key, value);
  else if (key == "valid_ratio") c.valid_ratio = to_double(key, value);
  else if (key == "split_ratios") {
    const auto comma = value.find(',');
    if (comma == std::string_view::npos) throw Error(ErrorCode::InvalidArgument, "split_ratios is 'train,valid'");
    c.train_ratio = to_double(key, value.substr(0, comma));
    c.valid_ratio = to_double(key, value.substr(comma + 1));
  } else if (key == "seed") c.seed = to_unsigned(key, value);
  else if (key == "fewshot_k") c.fewshot_k = to_unsigned(key, value);
  else if (key == "resamples") c.resamples = to_unsigned(key, value);
  else if (key == "level") c.level = to_double(key, value);
  else if (key == "backend.endpoint") c.backend.endpoint = std::string(value);
  else if (key == "backend.samples") c.backend.samples = static_cast<int>(to_unsigned(key, value));
  else if (key == "backend.max_tokens") c.backend.max_tokens = static_cast<int>(to_unsigned(key, value));
  else if (key == "backend.parallelism") c.backend.parallelism = static_cast<int>(to_unsigned(key, value));
  else if (key == "backend.timeout_seconds") c.backend.timeout_seconds = to_double(key, value);
  else if (key == "backend.token") {
    throw Error(ErrorCode::InvalidArgument, std::string("the backend token is read from ") + kBackendTokenEnv + " only");
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown option: " + std::string(key));
  }
}

void load_config_text(Config& config, std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
  for (const auto& [key, value] : root.items()) {
    if (key == "backend") {
      if (!value.is_object()) throw Error(ErrorCode::InvalidArgument, "backend must be an object");
      for (const auto& [k, v] : value.items()) set_option(config, "backend." + k, scalar_text(v));
    } else if (key == "split_ratios") {
      if (!value.is_array() || value.size() != 2) {
        throw Error(ErrorCode::InvalidArgument, "split_ratios must be [train, valid]");
      }
      set_option(config, "split_ratios", scalar_text(value[0]) + "," + scalar_text(value[1]));
    } else {
      set_option(config, key, scalar_text(value));
    }
  }
}

void load_config_file(Config& config, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  load_config_text(config, buf.str());
}

void apply_environment(Config& config) {
  if (const char* token = std::getenv(kBackendTokenEnv)) config.backend.token = token;
}

void validate(const Config& c) {
  const auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (!(c.window_days >= 0)) bad("window_days must be >= 0");
  if (!(c.jaccard_min >= 0 && c.jaccard_min <= 1)) bad("jaccard_min must be in [0, 1]");
  if (!(c.identifier_cutoff >= 0 && c.identifier_cutoff <= 1)) bad("identifier_cutoff must be in [0, 1]");
  if (!(c.train_ratio >= 0 && c.valid_ratio >= 0 && c.train_ratio + c.valid_ratio <= 1 + 1e-12)) {
    bad("split ratios must be non-negative and sum to at most 1");
  }
  if (!(c.level > 0 && c.level < 1)) bad("level must be in (0, 1)");
  if (c.resamples == 0) bad("resamples must be positive");
  if (c.backend.samples < 1) bad("backend.samples must be >= 1");
  if (c.backend.parallelism < 1) bad("backend.parallelism must be >= 1");
  if (!(c.backend.timeout_seconds > 0)) bad("backend.timeout_seconds must be positive");
}

}  // namespace coedit
